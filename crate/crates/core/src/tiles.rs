//! The Tiles unextendible product basis in 3⊗3 and everything built from it.
//!
//! Five orthogonal product vectors span a subspace whose complement contains
//! no product vector. The complement projector `P_b` has rank 4 and
//! `ρ_b = P_b/4` is a PPT bound entangled state. `𝟙 + P_b` splits into two
//! separable projectors, `P₁ = 𝟙 − |a₀a₀⟩⟨a₀a₀|` and
//! `P₂ = P_b + |a₀a₀⟩⟨a₀a₀|`, each spanned by mutually orthogonal product
//! vectors; together they give a 13-term separability certificate.

use serde::Serialize;

use crate::config::NORM_TOL;
use crate::error::{contract, Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::tensor::{HermitianOperator, TensorSpace};

/// Residual ceiling for the certificate built by [`complement_certificate`].
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// `|e⟩ ⊗ |f⟩` with both local vectors normalized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductState {
    pub a_local: ComplexVector,
    pub b_local: ComplexVector,
}

impl ProductState {
    pub fn new(a_local: ComplexVector, b_local: ComplexVector) -> Result<Self> {
        for (name, v) in [("A", &a_local), ("B", &b_local)] {
            if !v.is_normalized(NORM_TOL) {
                return contract(format!("{name}-local vector has norm² {}", v.norm_sqr()));
            }
        }
        Ok(Self { a_local, b_local })
    }

    /// Normalizes both locals before building the state.
    pub fn from_unnormalized(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            ComplexVector::from_real(a).normalized()?,
            ComplexVector::from_real(b).normalized()?,
        )
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a_local.dim(), self.b_local.dim())
    }

    /// Full vector `|e⟩⊗|f⟩` in grouped A|B order.
    pub fn vector(&self) -> ComplexVector {
        self.a_local.kron(&self.b_local)
    }

    /// `⟨e,f|op|e,f⟩`; `op` must be in grouped layout with matching party dims.
    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        op.expectation(&self.vector())
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector())
    }
}

pub fn qutrit_pair() -> TensorSpace {
    TensorSpace::bipartite(3, 3).expect("3⊗3 is a valid bipartite space")
}

/// `|a₀⟩ = (|0⟩ − |1⟩ + |2⟩)/√3`.
pub fn a0() -> ComplexVector {
    let s = 1.0 / 3f64.sqrt();
    ComplexVector::from_real(&[s, -s, s])
}

/// The five Tiles vectors, in the order
/// `|0⟩(|0⟩+|1⟩)`, `(|0⟩+|1⟩)|2⟩`, `|2⟩(|1⟩+|2⟩)`, `(|1⟩+|2⟩)|0⟩`,
/// `(|0⟩−|1⟩+|2⟩)(|0⟩−|1⟩+|2⟩)`.
pub fn tiles_upb() -> Vec<ProductState> {
    let tiles: [([f64; 3], [f64; 3]); 5] = [
        ([1.0, 0.0, 0.0], [1.0, 1.0, 0.0]),
        ([1.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
        ([0.0, 0.0, 1.0], [0.0, 1.0, 1.0]),
        ([0.0, 1.0, 1.0], [1.0, 0.0, 0.0]),
        ([1.0, -1.0, 1.0], [1.0, -1.0, 1.0]),
    ];
    tiles
        .iter()
        .map(|(a, b)| ProductState::from_unnormalized(a, b).expect("nonzero tile"))
        .collect()
}

/// Product vectors spanning `P₂ = P_b + |a₀a₀⟩⟨a₀a₀|`.
pub fn p2_vectors() -> Vec<ProductState> {
    let vectors: [([f64; 3], [f64; 3]); 5] = [
        ([1.0, 0.0, 0.0], [1.0, -1.0, 0.0]),
        ([1.0, -1.0, 0.0], [0.0, 0.0, 1.0]),
        ([0.0, 0.0, 1.0], [0.0, 1.0, -1.0]),
        ([0.0, 1.0, -1.0], [1.0, 0.0, 0.0]),
        ([0.0, 1.0, 0.0], [0.0, 1.0, 0.0]),
    ];
    vectors
        .iter()
        .map(|(a, b)| ProductState::from_unnormalized(a, b).expect("nonzero vector"))
        .collect()
}

/// Gram matrix `G[i,j] = ⟨vᵢ|vⱼ⟩` of the full product vectors.
pub fn gram_matrix(states: &[ProductState]) -> ComplexMatrix {
    let vs: Vec<ComplexVector> = states.iter().map(ProductState::vector).collect();
    ComplexMatrix::from_fn(vs.len(), vs.len(), |i, j| vs[i].inner(&vs[j]))
}

/// `P_b = 𝟙₉ − Σᵢ |vᵢ⟩⟨vᵢ|` over the Tiles vectors.
pub fn tiles_projector() -> HermitianOperator {
    let mut m = ComplexMatrix::identity(9);
    for v in tiles_upb() {
        m = m.sub(&v.projector());
    }
    HermitianOperator::new(m, qutrit_pair()).expect("P_b is Hermitian by construction")
}

/// `ρ_b = P_b / 4`.
pub fn rho_b() -> HermitianOperator {
    tiles_projector().scale(0.25)
}

/// The two-qubit singlet `|Ψ⟩ = (|01⟩ − |10⟩)/√2`.
pub fn singlet_vector() -> ComplexVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector::from_real(&[0.0, s, -s, 0.0])
}

/// `|Ψ⟩⟨Ψ|` on `[(A,2),(B,2)]`.
pub fn singlet() -> HermitianOperator {
    let space = TensorSpace::bipartite(2, 2).expect("2⊗2 is a valid bipartite space");
    HermitianOperator::pure_state(&singlet_vector(), space).expect("rank-1 projector")
}

/// `𝟙/d` on `space`.
pub fn maximally_mixed(space: TensorSpace) -> HermitianOperator {
    let d = space.dim() as f64;
    HermitianOperator::identity(space).scale(1.0 / d)
}

/// `{|a₀⟩, |a₁⟩, |a₂⟩}`: Gram–Schmidt on `(|a₀⟩, |0⟩, |1⟩)`.
///
/// Yields `|a₁⟩ = (2,1,−1)/√6` and `|a₂⟩ = (0,1,1)/√2`.
pub fn orthonormal_completion() -> [ComplexVector; 3] {
    let mut basis: Vec<ComplexVector> = vec![a0()];
    for seed in [ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)] {
        let mut v = seed;
        for u in &basis {
            v = v.sub(&u.scaled(u.inner(&v)));
        }
        basis.push(v.normalized().expect("seeds are independent of |a0⟩"));
    }
    [basis[0].clone(), basis[1].clone(), basis[2].clone()]
}

/// `|a₀,a₀⟩⟨a₀,a₀|` as a 9×9 matrix.
fn a0a0_projector() -> ComplexMatrix {
    let v = a0();
    ComplexMatrix::projector(&v.kron(&v))
}

/// `P₁ = 𝟙 − |a₀,a₀⟩⟨a₀,a₀|`.
pub fn p1_projector() -> HermitianOperator {
    let m = ComplexMatrix::identity(9).sub(&a0a0_projector());
    HermitianOperator::new(m, qutrit_pair()).expect("Hermitian by construction")
}

/// `P₂ = P_b + |a₀,a₀⟩⟨a₀,a₀|`.
pub fn p2_projector() -> HermitianOperator {
    let m = tiles_projector().matrix().add(&a0a0_projector());
    HermitianOperator::new(m, qutrit_pair()).expect("Hermitian by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateBlock {
    P1,
    P2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateTerm {
    pub weight: f64,
    pub state: ProductState,
    /// Which separable projector the term spans.
    pub block: CertificateBlock,
}

/// Explicit convex-cone decomposition `target = Σ wₖ |aₖ,bₖ⟩⟨aₖ,bₖ|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityCertificate {
    pub terms: Vec<CertificateTerm>,
    pub target: HermitianOperator,
}

impl SeparabilityCertificate {
    pub fn sum(&self) -> ComplexMatrix {
        let n = self.target.dim();
        self.terms.iter().fold(ComplexMatrix::zeros(n, n), |acc, t| {
            acc.add(&t.state.projector().scale(t.weight))
        })
    }

    /// `‖Σ wₖ|aₖbₖ⟩⟨aₖbₖ| − target‖_F`.
    pub fn residual(&self) -> f64 {
        self.sum().distance(self.target.matrix())
    }

    pub fn verify(&self, tol: f64) -> Result<()> {
        if let Some(t) = self.terms.iter().find(|t| !(t.weight >= 0.0)) {
            return Err(Error::Internal(format!("negative certificate weight {}", t.weight)));
        }
        let residual = self.residual();
        if residual > tol {
            return Err(Error::Internal(format!(
                "certificate residual {residual:e} exceeds {tol:e}"
            )));
        }
        Ok(())
    }
}

/// 13-term product decomposition of `𝟙₉ + P_b`.
pub fn complement_certificate() -> Result<SeparabilityCertificate> {
    let basis = orthonormal_completion();
    let mut terms = Vec::with_capacity(13);
    for k1 in 0..3 {
        for k2 in 0..3 {
            if (k1, k2) == (0, 0) {
                continue;
            }
            terms.push(CertificateTerm {
                weight: 1.0,
                state: ProductState::new(basis[k1].clone(), basis[k2].clone())?,
                block: CertificateBlock::P1,
            });
        }
    }
    terms.extend(p2_vectors().into_iter().map(|state| CertificateTerm {
        weight: 1.0,
        state,
        block: CertificateBlock::P2,
    }));
    let target = HermitianOperator::identity(qutrit_pair()).add(&tiles_projector())?;
    let cert = SeparabilityCertificate { terms, target };
    cert.verify(CERTIFICATE_TOL)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn tiles_are_orthonormal() {
        let upb = tiles_upb();
        assert_eq!(upb.len(), 5);
        // ⟨v₀|v₁⟩ vanishes through the B factor ⟨0+1|2⟩.
        assert_eq!(upb[0].b_local.inner(&upb[1].b_local).norm(), 0.0);
        let gram = gram_matrix(&upb);
        assert!(max_abs_diff(&gram, &ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn fifth_tile_is_a0_a0() {
        let upb = tiles_upb();
        assert!(upb[4].a_local.sub(&a0()).norm() < 1e-15);
        assert!(upb[4].b_local.sub(&a0()).norm() < 1e-15);
    }

    #[test]
    fn projector_identities() {
        let p = tiles_projector();
        let m = p.matrix();
        assert!(m.matmul(m).distance(m) < 1e-10);
        assert!((p.trace() - 4.0).abs() < 1e-10);
        for v in tiles_upb() {
            assert!(m.mul_vec(&v.vector()).norm() < 1e-12);
        }
        let eig = p.eig().unwrap();
        let expected = [1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (got, want) in eig.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{:?}", eig.eigenvalues);
        }
    }

    #[test]
    fn rho_b_is_a_ppt_state() {
        let rho = rho_b();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert_eq!(rho.matrix(), &rho.matrix().adjoint());
        assert!(rho.eig().unwrap().min_eigenvalue() >= -1e-12);
        assert!(rho.partial_transpose().eig().unwrap().min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn singlet_basics() {
        let s = singlet();
        assert!((s.trace() - 1.0).abs() < 1e-15);
        let m = s.matrix();
        assert!((m.matmul(m).trace().re - 1.0).abs() < 1e-15);
        assert_eq!(singlet_vector()[0].norm(), 0.0);
    }

    #[test]
    fn completion_is_the_documented_basis() {
        let [b0, b1, b2] = orthonormal_completion();
        let a1 = ComplexVector::from_real(&[2.0, 1.0, -1.0]).normalized().unwrap();
        let a2 = ComplexVector::from_real(&[0.0, 1.0, 1.0]).normalized().unwrap();
        assert!(b0.sub(&a0()).norm() < 1e-15);
        assert!(b1.sub(&a1).norm() < 1e-15);
        assert!(b2.sub(&a2).norm() < 1e-15);
    }

    #[test]
    fn certificate_reproduces_identity_plus_projector() {
        let cert = complement_certificate().unwrap();
        assert_eq!(cert.terms.len(), 13);
        assert!(cert.residual() < 1e-10);
        assert!(cert.terms.iter().all(|t| t.weight == 1.0));
    }

    #[test]
    fn p2_is_rank_five_projector_with_orthonormal_span() {
        let p2 = p2_projector();
        let m = p2.matrix();
        assert!(m.matmul(m).distance(m) < 1e-12);
        assert!((p2.trace() - 5.0).abs() < 1e-12);
        let gram = gram_matrix(&p2_vectors());
        assert!(max_abs_diff(&gram, &ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn blocks_sum_to_target_and_terms_live_in_their_block() {
        let p1 = p1_projector();
        let p2 = p2_projector();
        let target = HermitianOperator::identity(qutrit_pair()).add(&tiles_projector()).unwrap();
        assert!(p1.add(&p2).unwrap().matrix().distance(target.matrix()) < 1e-14);
        for term in complement_certificate().unwrap().terms {
            let parent = match term.block {
                CertificateBlock::P1 => &p1,
                CertificateBlock::P2 => &p2,
            };
            assert!((term.state.expectation(parent) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let mut cert = complement_certificate().unwrap();
        cert.terms.pop();
        assert!(matches!(cert.verify(CERTIFICATE_TOL), Err(Error::Internal(_))));
    }
}

//! Bipartite tensor bookkeeping.
//!
//! A [`TensorSpace`] is an ordered list of factors, each owned by party A or
//! party B. Factor 0 is the slowest-varying (leftmost Kronecker) index. For
//! factors `[(A,2), (B,3)]` the composite index of `|a⟩⊗|b⟩` is `a·3 + b`:
//!
//! ```text
//! index: 0    1    2    3    4    5
//! (a,b): 0,0  0,1  0,2  1,0  1,1  1,2
//! ```
//!
//! Multi-copy operators built by repeated Kronecker products come out
//! interleaved (`A₁ B₁ A₂ B₂ …`). [`TensorSpace::grouping_permutation`]
//! gives the reordering to `A₁ A₂ … B₁ B₂ …`, the layout in which a product
//! state `|e⟩⊗|f⟩` across the A|B cut is a plain Kronecker product.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{DEFAULT_DIM_LIMIT, HERMITICITY_TOL, NORM_TOL};
use crate::error::{contract, Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, ComplexVector, EigenDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub party: Party,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct TensorSpace {
    factors: Vec<Factor>,
}

impl TensorSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.iter().any(|f| f.dim == 0) {
            return contract("tensor factors must have positive dimension");
        }
        let has = |p| factors.iter().any(|f| f.party == p);
        if !has(Party::A) || !has(Party::B) {
            return contract("a bipartite space needs at least one A and one B factor");
        }
        Ok(Self { factors })
    }

    /// Single `d_A ⊗ d_B` pair.
    pub fn bipartite(dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(vec![
            Factor { party: Party::A, dim: dim_a },
            Factor { party: Party::B, dim: dim_b },
        ])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn party_dim(&self, party: Party) -> usize {
        self.factors.iter().filter(|f| f.party == party).map(|f| f.dim).product()
    }

    /// Concatenation, `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }

    /// True when every A factor precedes every B factor.
    pub fn is_grouped(&self) -> bool {
        let first_b = self.factors.iter().position(|f| f.party == Party::B);
        let last_a = self.factors.iter().rposition(|f| f.party == Party::A);
        matches!((last_a, first_b), (Some(a), Some(b)) if a < b)
    }

    /// Stable reordering that lists A factors then B factors.
    ///
    /// Entry `k` is the old index of the factor placed at position `k`.
    pub fn grouping_permutation(&self) -> Vec<usize> {
        let idx = |p| {
            self.factors
                .iter()
                .enumerate()
                .filter(move |(_, f)| f.party == p)
                .map(|(i, _)| i)
        };
        idx(Party::A).chain(idx(Party::B)).collect()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for k in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factors[k + 1].dim;
        }
        strides
    }
}

impl TryFrom<Vec<Factor>> for TensorSpace {
    type Error = Error;

    fn try_from(factors: Vec<Factor>) -> Result<Self> {
        Self::new(factors)
    }
}

impl From<TensorSpace> for Vec<Factor> {
    fn from(space: TensorSpace) -> Self {
        space.factors
    }
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("{:?}{}", x.party, x.dim))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Hermitian matrix annotated with its bipartite tensor structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    space: TensorSpace,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, space: TensorSpace) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != space.dim() {
            return contract(format!(
                "{}x{} matrix does not match space {space} of dimension {}",
                matrix.rows(),
                matrix.cols(),
                space.dim()
            ));
        }
        if !matrix.is_hermitian(HERMITICITY_TOL) {
            return contract(format!(
                "operator is not Hermitian (defect {:e})",
                matrix.hermiticity_defect()
            ));
        }
        Ok(Self { matrix, space })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix, space: TensorSpace) -> Self {
        debug_assert_eq!(matrix.rows(), space.dim());
        Self { matrix, space }
    }

    pub fn identity(space: TensorSpace) -> Self {
        let m = ComplexMatrix::identity(space.dim());
        Self::new_unchecked(m, space)
    }

    /// `|v⟩⟨v|` on `space`.
    pub fn pure_state(v: &ComplexVector, space: TensorSpace) -> Result<Self> {
        Self::new(ComplexMatrix::projector(v), space)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        hermitian_eig(&self.matrix)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new_unchecked(self.matrix.scale(factor), self.space.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self::new_unchecked(self.matrix.add(&other.matrix), self.space.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self::new_unchecked(self.matrix.sub(&other.matrix), self.space.clone()))
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return contract(format!("space mismatch: {} vs {}", self.space, other.space));
        }
        Ok(())
    }

    /// `⟨v|self|v⟩` (real part; the imaginary part vanishes for Hermitian operators).
    pub fn expectation(&self, v: &ComplexVector) -> f64 {
        self.matrix.quad_form(v).re
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_with_limit(other, DEFAULT_DIM_LIMIT)
    }

    /// Kronecker product with concatenated factor lists.
    pub fn kron_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let matrix = self.matrix.kron_with_limit(&other.matrix, limit)?;
        Ok(Self::new_unchecked(matrix, self.space.tensor(&other.space)))
    }

    /// `self^{⊗n}` in interleaved copy order. `n` must be at least 1.
    pub fn tensor_power(&self, n: usize, limit: usize) -> Result<Self> {
        if n == 0 {
            return contract("tensor power needs at least one copy");
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kron_with_limit(self, limit)?;
        }
        Ok(out)
    }

    /// Reorder tensor factors; `perm[k]` is the old index of new factor `k`.
    ///
    /// Equivalent to conjugating by the factor-swap unitary.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Self> {
        let m = self.space.factors.len();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return contract(format!("{perm:?} is not a permutation of {m} factors"));
        }
        let new_space = TensorSpace {
            factors: perm.iter().map(|&p| self.space.factors[p]).collect(),
        };
        let old_strides = self.space.strides();
        let new_dims: Vec<usize> = new_space.factors.iter().map(|f| f.dim).collect();
        let n = self.dim();

        // old_index[new composite index]
        let mut old_index = vec![0usize; n];
        let mut digits = vec![0usize; m];
        for slot in old_index.iter_mut() {
            *slot = digits
                .iter()
                .zip(perm)
                .map(|(&d, &p)| d * old_strides[p])
                .sum();
            for k in (0..m).rev() {
                digits[k] += 1;
                if digits[k] < new_dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }

        let src = &self.matrix;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| src[(old_index[i], old_index[j])]);
        Ok(Self::new_unchecked(matrix, new_space))
    }

    /// Same operator with A factors first, B factors second.
    pub fn grouped(&self) -> Result<Self> {
        if self.space.is_grouped() {
            return Ok(self.clone());
        }
        self.permute_factors(&self.space.grouping_permutation())
    }

    /// Transpose every B factor, leaving A factors untouched.
    pub fn partial_transpose(&self) -> Self {
        let n = self.dim();
        let strides = self.space.strides();
        let mut a_part = vec![0usize; n];
        let mut b_part = vec![0usize; n];
        for idx in 0..n {
            for (k, factor) in self.space.factors.iter().enumerate() {
                let digit = (idx / strides[k]) % factor.dim;
                match factor.party {
                    Party::A => a_part[idx] += digit * strides[k],
                    Party::B => b_part[idx] += digit * strides[k],
                }
            }
        }
        let src = &self.matrix;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
            src[(a_part[i] + b_part[j], a_part[j] + b_part[i])]
        });
        Self::new_unchecked(matrix, self.space.clone())
    }

    /// `(⟨e|⊗𝟙_B) op (|e⟩⊗𝟙_B)`, an operator on the B side.
    ///
    /// `e` lives on the A factors in their original relative order.
    pub fn contract_party_a(&self, e: &ComplexVector) -> Result<ComplexMatrix> {
        self.contract(Party::A, e)
    }

    /// `(𝟙_A⊗⟨f|) op (𝟙_A⊗|f⟩)`, an operator on the A side.
    pub fn contract_party_b(&self, f: &ComplexVector) -> Result<ComplexMatrix> {
        self.contract(Party::B, f)
    }

    fn contract(&self, party: Party, v: &ComplexVector) -> Result<ComplexMatrix> {
        let dim_a = self.space.party_dim(Party::A);
        let dim_b = self.space.party_dim(Party::B);
        let expected = if party == Party::A { dim_a } else { dim_b };
        if v.dim() != expected {
            return contract(format!(
                "contraction vector has dimension {}, party {party:?} has {expected}",
                v.dim()
            ));
        }
        if !v.is_normalized(NORM_TOL) {
            return contract(format!("contraction vector has norm² {}", v.norm_sqr()));
        }
        let grouped;
        let op = if self.space.is_grouped() {
            self
        } else {
            grouped = self.grouped()?;
            &grouped
        };
        let m = &op.matrix;
        let v = v.entries();
        Ok(match party {
            Party::A => {
                // out[b,b'] = Σ conj(e_a) M[(a,b),(a',b')] e_a'
                let mut out = ComplexMatrix::zeros(dim_b, dim_b);
                for a in 0..dim_a {
                    let ea = v[a].conj();
                    for a2 in 0..dim_a {
                        let w = ea * v[a2];
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for b in 0..dim_b {
                            let row = m.row(a * dim_b + b);
                            let src = &row[a2 * dim_b..(a2 + 1) * dim_b];
                            for (b2, &x) in src.iter().enumerate() {
                                out[(b, b2)] += w * x;
                            }
                        }
                    }
                }
                out
            }
            Party::B => {
                let mut out = ComplexMatrix::zeros(dim_a, dim_a);
                for a in 0..dim_a {
                    for a2 in 0..dim_a {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..dim_b {
                            let row = m.row(a * dim_b + b);
                            let fb = v[b].conj();
                            for b2 in 0..dim_b {
                                acc += fb * row[a2 * dim_b + b2] * v[b2];
                            }
                        }
                        out[(a, a2)] = acc;
                    }
                }
                out
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn singlet() -> HermitianOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::from_real(&[0.0, s, -s, 0.0]);
        HermitianOperator::pure_state(&psi, TensorSpace::bipartite(2, 2).unwrap()).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(TensorSpace::new(vec![Factor { party: Party::A, dim: 3 }]).is_err());
        assert!(TensorSpace::bipartite(0, 3).is_err());
        let s = TensorSpace::bipartite(2, 3).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(s.is_grouped());
        assert!(!s.tensor(&s).is_grouped());
        assert_eq!(s.tensor(&s).grouping_permutation(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn space_json_round_trip() {
        let s = TensorSpace::bipartite(3, 2).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[{"party":"A","dim":3},{"party":"B","dim":2}]"#);
        assert_eq!(serde_json::from_str::<TensorSpace>(&json).unwrap(), s);
        assert!(serde_json::from_str::<TensorSpace>(r#"[{"party":"A","dim":3}]"#).is_err());
    }

    #[test]
    fn operator_rejects_mismatch_and_non_hermitian() {
        let space = TensorSpace::bipartite(2, 2).unwrap();
        assert!(HermitianOperator::new(ComplexMatrix::identity(3), space.clone()).is_err());
        let mut m = ComplexMatrix::identity(4);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(HermitianOperator::new(m, space).is_err());
    }

    #[test]
    fn identity_permutation_is_noop() {
        let op = singlet();
        assert_eq!(op.permute_factors(&[0, 1]).unwrap(), op);
        assert!(op.permute_factors(&[0, 0]).is_err());
        assert!(op.permute_factors(&[0]).is_err());
    }

    #[test]
    fn swapping_identical_factors_of_symmetric_kron() {
        let op = singlet();
        let aa = op.kron(&op).unwrap();
        let swapped = aa.permute_factors(&[2, 3, 0, 1]).unwrap();
        assert_eq!(swapped.matrix(), aa.matrix());
    }

    #[test]
    fn permutation_matches_hand_built_swap() {
        // Swapping the two factors of |x⟩⊗|y⟩ yields |y⟩⊗|x⟩.
        let x = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap().normalized().unwrap();
        let y = ComplexVector::from_real(&[1.0, -1.0, 3.0]).normalized().unwrap();
        let space = TensorSpace::bipartite(2, 3).unwrap();
        let op = HermitianOperator::pure_state(&x.kron(&y), space).unwrap();
        let swapped = op.permute_factors(&[1, 0]).unwrap();
        let expected = ComplexMatrix::projector(&y.kron(&x));
        assert!(swapped.matrix().distance(&expected) < 1e-15);
        assert_eq!(swapped.space().factors()[0], Factor { party: Party::B, dim: 3 });
    }

    #[test]
    fn singlet_partial_transpose() {
        let pt = singlet().partial_transpose();
        let eig = pt.eig().unwrap();
        assert!((eig.min_eigenvalue() + 0.5).abs() < 1e-14);
        assert_eq!(pt.partial_transpose(), singlet());
    }

    #[test]
    fn contraction_of_identity_times_local() {
        let mb = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let op = HermitianOperator::new(
            ComplexMatrix::identity(3).kron(&mb).unwrap(),
            TensorSpace::bipartite(3, 2).unwrap(),
        )
        .unwrap();
        let e = ComplexVector::from_real(&[1.0, 2.0, -2.0]).normalized().unwrap();
        assert!(op.contract_party_a(&e).unwrap().distance(&mb) < 1e-15);
        assert!(op.contract_party_a(&ComplexVector::basis(2, 0)).is_err());
        assert!(op.contract_party_a(&ComplexVector::from_real(&[1.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn contraction_works_on_interleaved_spaces() {
        let op = singlet().kron(&singlet()).unwrap();
        let e = ComplexVector::basis(2, 0).kron(&ComplexVector::basis(2, 1));
        let f = ComplexVector::basis(2, 1).kron(&ComplexVector::basis(2, 0));
        // ⟨0,1|Ψ⟩⟨1,0|Ψ⟩ magnitudes: each factor gives 1/2.
        let value = op.contract_party_a(&e).unwrap().quad_form(&f).re;
        assert!((value - 0.25).abs() < 1e-15);
        let value_b = op.contract_party_b(&f).unwrap().quad_form(&e).re;
        assert!((value_b - 0.25).abs() < 1e-15);
    }
}

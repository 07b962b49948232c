//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)`. For
//! `a_pq = |a_pq|·e^{iφ}` the 2×2 block is first made real symmetric by the
//! phase `diag(1, e^{-iφ})`, then a real Jacobi rotation finishes the job.
//! The method is slow (O(n³) per sweep) but unconditionally stable and gives
//! orthonormal eigenvectors to working precision even in heavily degenerate
//! spectra, which is the common case here (projectors and their tensor
//! powers).

use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector};
use crate::config::HERMITICITY_TOL;
use crate::error::{contract, Error, Result};

/// Stopping rule for the Jacobi sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Stop once the off-diagonal Frobenius mass is at most `tol·‖A‖_F`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_sweeps: 100,
        }
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
}

impl EigenDecomposition {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `Σᵢ λᵢ |vᵢ⟩⟨vᵢ|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let e = v.entries();
            for i in 0..n {
                let vi = e[i] * *lambda;
                for j in 0..n {
                    out[(i, j)] += vi * e[j].conj();
                }
            }
        }
        out
    }

    /// `Σᵢ f(λᵢ) |vᵢ⟩⟨vᵢ|` for a complex-valued spectral function.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let weight = f(lambda);
            let e = v.entries();
            for i in 0..n {
                let vi = e[i] * weight;
                for j in 0..n {
                    out[(i, j)] += vi * e[j].conj();
                }
            }
        }
        out
    }
}

/// Diagonalize a Hermitian matrix with the default stopping rule.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(a, JacobiOptions::default())
}

pub fn hermitian_eig_with(a: &ComplexMatrix, opts: JacobiOptions) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return contract(format!("eigensolver needs a square matrix, got {}x{}", a.rows(), a.cols()));
    }
    let norm = a.frobenius_norm();
    let defect = a.hermiticity_defect();
    if defect > HERMITICITY_TOL * norm {
        return contract(format!(
            "matrix is not Hermitian: ‖A − A†‖_F = {defect:e}, ‖A‖_F = {norm:e}"
        ));
    }

    let n = a.rows();
    // Work on the exactly Hermitian part so both triangles stay consistent.
    let mut w: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i == j {
                Complex64::new(a[(i, i)].re, 0.0)
            } else {
                (a[(i, j)] + a[(j, i)].conj()) * 0.5
            }
        })
        .collect();
    // Row r of `vt` is eigenvector column r.
    let mut vt = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        vt[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let target = opts.tol * norm;
    let skip_below = if n > 1 { target / n as f64 } else { 0.0 };
    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&w, n);
        if off <= target {
            break;
        }
        if sweep == opts.max_sweeps {
            return Err(Error::Convergence {
                sweeps: sweep,
                residual: off,
            });
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut w, &mut vt, n, p, q, skip_below);
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[j * n + j].re.total_cmp(&w[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| w[i * n + i].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| ComplexVector::from_vec_unchecked(vt[i * n..(i + 1) * n].to_vec()))
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(w: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(w: &mut [Complex64], vt: &mut [Complex64], n: usize, p: usize, q: usize, skip_below: f64) {
    let b = w[p * n + q];
    let b_abs = b.norm();
    if b_abs == 0.0 || b_abs < skip_below {
        return;
    }
    let app = w[p * n + p].re;
    let aqq = w[q * n + q].re;
    let theta = (aqq - app) / (2.0 * b_abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // e^{-iφ}
    let phase_conj = (b / b_abs).conj();
    let s_phase = phase_conj * s;
    let c_phase = phase_conj * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let x = w[p * n + k].conj();
        let y = w[q * n + k].conj();
        let new_kp = x * c - s_phase * y;
        let new_kq = x * s + c_phase * y;
        w[k * n + p] = new_kp;
        w[k * n + q] = new_kq;
        w[p * n + k] = new_kp.conj();
        w[q * n + k] = new_kq.conj();
    }
    w[p * n + p] = Complex64::new(app - t * b_abs, 0.0);
    w[q * n + q] = Complex64::new(aqq + t * b_abs, 0.0);
    w[p * n + q] = Complex64::new(0.0, 0.0);
    w[q * n + p] = Complex64::new(0.0, 0.0);

    let (head, tail) = vt.split_at_mut(q * n);
    let vp = &mut head[p * n..(p + 1) * n];
    let vq = &mut tail[..n];
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        let (x, y) = (*xp, *xq);
        *xp = x * c - s_phase * y;
        *xq = x * s + c_phase * y;
    }
}

/// Trace norm of a Hermitian matrix, `Σᵢ |λᵢ|`.
pub fn trace_norm_hermitian(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

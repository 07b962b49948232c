//! Deterministic grid search over qutrit product states.
//!
//! The A-side state is swept over a 4-parameter grid
//! `(cos θ₁, sin θ₁ cos θ₂ e^{iφ₁}, sin θ₁ sin θ₂ e^{iφ₂})` with
//! `θ ∈ [0, π/2]` (endpoints included, so the poles are on the grid) and
//! `φ ∈ [0, 2π)`. For each grid point the B side is maximized exactly: the
//! best `f` gives the largest eigenvalue of the 3×3 contraction, evaluated in
//! closed form so the sweep shares no code with the Jacobi-based see-saw.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{seesaw_from, SeesawOptions};
use crate::error::{contract, Result};
use crate::linalg::{hermitian_eig_with, ComplexMatrix, ComplexVector};
use crate::tensor::{HermitianOperator, Party};
use crate::tiles::ProductState;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub value: f64,
    pub a_local: ComplexVector,
}

/// Largest eigenvalue of a 3×3 Hermitian matrix via the trigonometric
/// solution of the characteristic cubic.
pub fn lambda_max_3x3(m: &ComplexMatrix) -> f64 {
    let (a, d, f) = (m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re);
    let (b, c, e) = (m[(0, 1)], m[(0, 2)], m[(1, 2)]);
    let q = (a + d + f) / 3.0;
    let p1 = b.norm_sqr() + c.norm_sqr() + e.norm_sqr();
    let p2 = (a - q).powi(2) + (d - q).powi(2) + (f - q).powi(2) + 2.0 * p1;
    if p2 <= 0.0 {
        return q;
    }
    let p = (p2 / 6.0).sqrt();
    let (a, d, f) = ((a - q) / p, (d - q) / p, (f - q) / p);
    let (b, c, e) = (b / p, c / p, e / p);
    let det = a * d * f - a * e.norm_sqr() - d * c.norm_sqr() - f * b.norm_sqr()
        + 2.0 * (b * e * c.conj()).re;
    let r = (det / 2.0).clamp(-1.0, 1.0);
    q + 2.0 * p * (r.acos() / 3.0).cos()
}

fn grid_vector(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> ComplexVector {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    ComplexVector::new(vec![
        Complex64::new(c1, 0.0),
        Complex64::from_polar(s1 * c2, phi1),
        Complex64::from_polar(s1 * s2, phi2),
    ])
    .expect("finite grid point")
}

fn check_qutrits(m: &HermitianOperator) -> Result<HermitianOperator> {
    let space = m.space();
    if space.party_dim(Party::A) != 3 || space.party_dim(Party::B) != 3 {
        return contract(format!("grid oracle needs a 3⊗3 operator, got {space}"));
    }
    m.grouped()
}

/// Best grid point with the B side optimized exactly.
pub fn grid_search(m: &HermitianOperator, resolution: usize) -> Result<GridPoint> {
    if resolution < 8 {
        return contract(format!("grid resolution {resolution} is below 8"));
    }
    let m = check_qutrits(m)?;
    let thetas: Vec<f64> = (0..resolution)
        .map(|k| FRAC_PI_2 * k as f64 / (resolution - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..resolution)
        .map(|k| 2.0 * PI * k as f64 / resolution as f64)
        .collect();

    let mut best: Option<GridPoint> = None;
    for &t1 in &thetas {
        for &t2 in &thetas {
            for &p1 in &phis {
                for &p2 in &phis {
                    let e = grid_vector(t1, t2, p1, p2);
                    let value = lambda_max_3x3(&m.contract_party_a(&e)?);
                    if best.as_ref().map_or(true, |b| value > b.value) {
                        best = Some(GridPoint { value, a_local: e });
                    }
                }
            }
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// Grid maximum followed by one see-saw polish from the best grid point.
pub fn grid_oracle(m: &HermitianOperator, resolution: usize, polish: &SeesawOptions) -> Result<f64> {
    let point = grid_search(m, resolution)?;
    let grouped = check_qutrits(m)?;
    let on_b = grouped.contract_party_a(&point.a_local)?;
    let f = hermitian_eig_with(&on_b, polish.jacobi)?
        .eigenvectors
        .into_iter()
        .next()
        .expect("3x3 spectrum")
        .normalized()?;
    let start = ProductState::new(point.a_local, f)?;
    let trace = seesaw_from(&grouped, start, polish)?;
    Ok(trace.final_value.max(point.value))
}

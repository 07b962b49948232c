use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{contract, Result};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return contract("vector has non-finite entries");
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self {
            entries: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Unit vector along `self`; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return contract("cannot normalize a zero vector");
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// `|self⟩ ⊗ |other⟩`, with `self` as the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            out.extend(other.entries.iter().map(|b| a * b));
        }
        Self { entries: out }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_orders_slow_index_first() {
        let a = ComplexVector::basis(2, 1);
        let b = ComplexVector::basis(3, 2);
        let ab = a.kron(&b);
        assert_eq!(ab.dim(), 6);
        assert_eq!(ab[5], Complex64::new(1.0, 0.0));
        assert_eq!(ab.norm_sqr(), 1.0);
    }

    #[test]
    fn inner_is_antilinear_in_first_argument() {
        let i = Complex64::new(0.0, 1.0);
        let a = ComplexVector::basis(2, 0).scaled(i);
        let b = ComplexVector::basis(2, 0);
        assert_eq!(a.inner(&b), -i);
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        assert!(ComplexVector::zeros(3).normalized().is_err());
        assert!(ComplexVector::new(vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }
}

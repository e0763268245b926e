//! Coefficient vectors for polynomials and truncated power series.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `a_0 + a_1 z + ... + a_M z^M`.
///
/// `exact_polynomial` records whether the vector is the whole function or a
/// truncation of an infinite series; inner products of truncated series
/// carry a tail estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<S> {
    coeffs: Vec<S>,
    exact_polynomial: bool,
}

impl<S: Scalar> Series<S> {
    /// A polynomial with the given coefficients. An empty vector is the zero polynomial.
    pub fn polynomial(coeffs: Vec<S>) -> Self {
        Self::build(coeffs, true)
    }

    /// The first `coeffs.len()` Taylor coefficients of an infinite series.
    pub fn truncated(coeffs: Vec<S>) -> Self {
        Self::build(coeffs, false)
    }

    fn build(mut coeffs: Vec<S>, exact_polynomial: bool) -> Self {
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        Series {
            coeffs,
            exact_polynomial,
        }
    }

    pub fn constant(c: S) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![S::zero(); k + 1];
        c[k] = S::one();
        Self::polynomial(c)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn truncation_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact_polynomial(&self) -> bool {
        self.exact_polynomial
    }

    /// Largest index with a non-negligible coefficient; `None` for the zero series.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_negligible())
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    /// Drop negligible trailing coefficients (keeps at least one entry).
    pub fn trimmed(&self) -> Self {
        let keep = self.effective_degree().map_or(1, |d| d + 1);
        Series {
            coeffs: self.coeffs[..keep].to_vec(),
            exact_polynomial: self.exact_polynomial,
        }
    }

    /// The first `degree + 1` coefficients; stays flagged as truncated unless
    /// nothing nonzero was cut.
    pub fn prefix(&self, degree: usize) -> Self {
        if degree >= self.truncation_degree() {
            return self.clone();
        }
        let cut_nonzero = self.coeffs[degree + 1..].iter().any(|c| !c.is_zero());
        Series {
            coeffs: self.coeffs[..=degree].to_vec(),
            exact_polynomial: self.exact_polynomial && !cut_nonzero,
        }
    }

    /// Horner evaluation over the stored coefficients.
    pub fn eval(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// Cauchy product of the stored coefficient vectors.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series {
            coeffs: out,
            exact_polynomial: self.exact_polynomial && other.exact_polynomial,
        }
    }

    /// `z^k p`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series {
            coeffs,
            exact_polynomial: self.exact_polynomial,
        }
    }

    /// `z^n conj(p)(1/z)`: coefficient `j` becomes `conj(p_{n-j})`.
    pub fn reflect(&self, n: usize) -> Result<Self> {
        let degree = self.effective_degree().unwrap_or(0);
        if n < degree {
            return Err(Error::InvalidReflectionDegree { degree, order: n });
        }
        let coeffs = (0..=n).map(|j| self.coeff(n - j).conj()).collect();
        Ok(Series {
            coeffs,
            exact_polynomial: self.exact_polynomial,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            exact_polynomial: self.exact_polynomial,
        }
    }

    pub fn conj(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(Scalar::conj).collect(),
            exact_polynomial: self.exact_polynomial,
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Series::build(coeffs, self.exact_polynomial)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Self {
        let len = self.len().max(other.len());
        let coeffs = (0..len).map(|k| op(self.coeff(k), other.coeff(k))).collect();
        Series {
            coeffs,
            exact_polynomial: self.exact_polynomial && other.exact_polynomial,
        }
    }

    /// Convert to another backend coefficient by coefficient.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
            exact_polynomial: self.exact_polynomial,
        }
    }

    /// Largest coefficient modulus, as a float.
    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for &Series<S> {
    type Output = Series<S>;
    fn add(self, rhs: Self) -> Series<S> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<S: Scalar> Sub for &Series<S> {
    type Output = Series<S>;
    fn sub(self, rhs: Self) -> Series<S> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Float};
    use num::complex::Complex64;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn ints(c: &[i64]) -> Series<Exact> {
        Series::from_ints(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ints(&[1, -1]).eval(&q(1, 1)), q(0, 1));
        let p1 = Series::polynomial(vec![q(2, 3), q(1, 3)]);
        assert_eq!(p1.eval(&q(-2, 1)), q(0, 1));
        assert_eq!(ints(&[1]).eval(&q(17, 5)), q(1, 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ints(&[1, -1]).mul(&ints(&[1, 1])), ints(&[1, 0, -1]));
        let p = ints(&[1, 1]);
        assert_eq!(p.mul(&p).mul(&p), ints(&[1, 3, 3, 1]));
        let p1 = Series::polynomial(vec![q(2, 3), q(1, 3)]);
        assert_eq!(
            p1.mul(&ints(&[1, -1])),
            Series::polynomial(vec![q(2, 3), q(-1, 3), q(-1, 3)])
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(ints(&[1, -1]).shift(1), ints(&[0, 1, -1]));
        assert_eq!(ints(&[4, 5]).shift(0), ints(&[4, 5]));
        assert_eq!(ints(&[1]).shift(3), ints(&[0, 0, 0, 1]));
        assert_eq!(ints(&[1]).shift(3).truncation_degree(), 3);
    }

    #[test]
    fn reflect_examples() {
        let p1 = Series::polynomial(vec![q(2, 3), q(1, 3)]);
        assert_eq!(p1.reflect(1).unwrap(), Series::polynomial(vec![q(1, 3), q(2, 3)]));
        assert_eq!(ints(&[1]).reflect(0).unwrap(), ints(&[1]));
        let c = Series::polynomial(vec![Exact::new(q(1, 1).re, q(2, 1).re), q(3, 1)]);
        let r = c.reflect(1).unwrap();
        assert_eq!(r.coeffs()[0], q(3, 1));
        assert_eq!(r.coeffs()[1], Exact::new(q(1, 1).re, q(-2, 1).re));
        // reflecting at a higher order pads with leading zeros in z
        assert_eq!(ints(&[1, 2]).reflect(3).unwrap(), ints(&[0, 0, 2, 1]));
    }

    #[test]
    fn reflect_rejects_low_order() {
        let err = ints(&[1, 2, 3]).reflect(1).unwrap_err();
        assert_eq!(err, Error::InvalidReflectionDegree { degree: 2, order: 1 });
    }

    #[test]
    fn effective_degree_float_threshold() {
        let p = Series::polynomial(vec![Float::new(1.0, 0.0), Float::new(2.0, 0.0), Float::new(1e-13, 0.0)]);
        assert_eq!(p.effective_degree(), Some(1));
        assert_eq!(p.trimmed().len(), 2);
        assert_eq!(Series::<Float>::polynomial(vec![]).effective_degree(), None);
    }

    #[test]
    fn add_sub_pad() {
        let a = ints(&[1, 2, 3]);
        let b = ints(&[5]);
        assert_eq!(&a + &b, ints(&[6, 2, 3]));
        assert_eq!(&b - &a, ints(&[4, -2, -3]));
    }

    #[test]
    fn prefix_tracks_truncation() {
        let s = Series::<Exact>::polynomial(vec![q(1, 1), q(2, 1), q(0, 1)]);
        assert!(s.prefix(1).is_exact_polynomial());
        assert!(!s.prefix(0).is_exact_polynomial());
        assert_eq!(s.prefix(5), s);
    }

    fn complex_vec(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len)
            .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    }

    proptest! {
        #[test]
        fn product_evaluates_to_product(p in complex_vec(51), r in complex_vec(51), zr in -1.4f64..1.4, zi in -1.4f64..1.4) {
            let z = Complex64::new(zr, zi);
            let p = Series::polynomial(p);
            let r = Series::polynomial(r);
            let lhs = p.mul(&r).eval(&z);
            let rhs = p.eval(&z) * r.eval(&z);
            // relative to the sum of term magnitudes, which bounds rounding in Horner
            let scale = Series::polynomial(p.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect()).eval(&Complex64::new(z.norm(), 0.0)).re
                * Series::polynomial(r.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect()).eval(&Complex64::new(z.norm(), 0.0)).re;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn product_evaluates_exactly(p in prop::collection::vec(-20i64..20, 1..8), r in prop::collection::vec(-20i64..20, 1..8), zn in -9i64..9, zd in 1i64..7) {
            let z = q(zn, zd);
            let p = ints(&p);
            let r = ints(&r);
            prop_assert_eq!(p.mul(&r).eval(&z), p.eval(&z) * r.eval(&z));
        }

        #[test]
        fn reflect_is_an_isometric_involution(p in complex_vec(20), extra in 0usize..4) {
            let p = Series::polynomial(p);
            let n = p.truncation_degree() + extra;
            let r = p.reflect(n).unwrap();
            let back = r.reflect(n).unwrap();
            for k in 0..=n {
                prop_assert_eq!(back.coeff(k), p.coeff(k));
            }
            let mut a: Vec<f64> = p.coeffs().iter().map(|c| c.norm()).collect();
            let mut b: Vec<f64> = r.coeffs().iter().map(|c| c.norm()).collect();
            a.resize(n + 1, 0.0);
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }
}

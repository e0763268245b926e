//! Orthonormal polynomials of the weighted space `D_{alpha,f}`.
//!
//! The basis is stored as monic orthogonal polynomials `psi_k` together with
//! their squared norms `h_k = <psi_k f, psi_k f>_alpha`. Both are rational in
//! the exact backend. The orthonormal polynomials are `phi_k = psi_k / sqrt(h_k)`,
//! so the leading coefficient `A_k = h_k^{-1/2}` is real and positive by
//! construction and no phase normalisation is needed.

use num::complex::Complex64;

use crate::dalpha::{gram_any, GramSystem};
use crate::error::{Error, Result};
use crate::scalar::{Alpha, Backend, Float, Scalar};
use crate::series::Series;

/// Float constructions fail when orthonormality degrades beyond this.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalBasis<S> {
    monic: Vec<Series<S>>,
    norms_sq: Vec<S>,
}

impl<S: Scalar> OrthogonalBasis<S> {
    /// Gram–Schmidt of `1, z, ..., z^n` under the inner product encoded by `system`.
    ///
    /// The float backend uses modified Gram–Schmidt with a second
    /// orthogonalisation pass and then checks the orthonormality residual.
    pub fn from_gram(system: &GramSystem<S>) -> Result<Self> {
        let dim = system.matrix.dim();
        let passes = match S::BACKEND {
            Backend::Exact => 1,
            Backend::Float => 2,
        };
        let mut monic: Vec<Series<S>> = Vec::with_capacity(dim);
        let mut norms_sq: Vec<S> = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut v = Series::monomial(k);
            for _ in 0..passes {
                for (psi, h) in monic.iter().zip(&norms_sq) {
                    let c = system.weighted_inner(&v, psi) / h.clone();
                    v = &v - &psi.scale(&c);
                }
            }
            // Lower-degree corrections never touch the leading coefficient.
            let mut coeffs = v.into_coeffs();
            coeffs[k] = S::one();
            let v = Series::polynomial(coeffs);
            let h = real_part(system.weighted_inner(&v, &v));
            if !h.real_gt(&S::zero()) || !h.modulus().is_finite() {
                return Err(Error::Instability {
                    residual: f64::INFINITY,
                });
            }
            monic.push(v);
            norms_sq.push(h);
        }
        let basis = OrthogonalBasis { monic, norms_sq };
        if S::BACKEND == Backend::Float {
            let residual = basis.orthonormality_residual(system);
            if residual.is_nan() || residual > ORTHOGONALITY_TOLERANCE {
                return Err(Error::Instability { residual });
            }
        }
        Ok(basis)
    }

    pub fn degree(&self) -> usize {
        self.monic.len() - 1
    }

    /// `psi_k`, the monic orthogonal polynomial of degree `k`.
    pub fn monic(&self, k: usize) -> &Series<S> {
        &self.monic[k]
    }

    /// `h_k = ||psi_k f||^2_alpha`.
    pub fn norm_sq(&self, k: usize) -> &S {
        &self.norms_sq[k]
    }

    /// The leading coefficient `A_k` of `phi_k`.
    pub fn leading_coefficient(&self, k: usize) -> f64 {
        1.0 / self.norms_sq[k].to_c64().re.sqrt()
    }

    /// `phi_k` in double precision.
    pub fn phi(&self, k: usize) -> Series<Float> {
        let a = self.leading_coefficient(k);
        self.monic[k].map(|c| c.to_c64() * a)
    }

    pub fn phis(&self) -> Vec<Series<Float>> {
        (0..self.monic.len()).map(|k| self.phi(k)).collect()
    }

    /// `|phi_k(0)|^2 = |psi_k(0)|^2 / h_k`, exact in the exact backend.
    pub fn phi_at_zero_sq(&self, k: usize) -> S {
        self.monic[k].coeff(0).abs_sq() / self.norms_sq[k].clone()
    }

    /// `sum_{k <= m} |phi_k(0)|^2` for `m = 0..=n`.
    pub fn phi_at_zero_sq_partial_sums(&self) -> Vec<S> {
        let mut acc = S::zero();
        (0..self.monic.len())
            .map(|k| {
                acc = acc.clone() + self.phi_at_zero_sq(k);
                acc.clone()
            })
            .collect()
    }

    /// `sum_{k <= m} conj(phi_k(w)) phi_k` as a polynomial, computed without square roots.
    pub fn christoffel_darboux(&self, m: usize, w: &S) -> Series<S> {
        let dim = m + 1;
        let mut acc = Series::polynomial(vec![S::zero(); dim]);
        for k in 0..dim {
            let c = self.monic[k].eval(w).conj() / self.norms_sq[k].clone();
            acc = &acc + &self.monic[k].scale(&c);
        }
        acc
    }

    /// `conj(f(0)) sum_k conj(phi_k(0)) phi_k`.
    pub fn approximant(&self, f0: &S) -> Series<S> {
        self.christoffel_darboux(self.degree(), &S::zero()).scale(&f0.conj())
    }

    /// Largest deviation of the Gram matrix of `phi_0..phi_n` from the identity.
    pub fn orthonormality_residual(&self, system: &GramSystem<S>) -> f64 {
        let mut worst = 0.0f64;
        let scale: Vec<f64> = (0..self.monic.len()).map(|k| self.leading_coefficient(k)).collect();
        for j in 0..self.monic.len() {
            for k in 0..=j {
                let ip = system.weighted_inner(&self.monic[j], &self.monic[k]).to_c64() * scale[j] * scale[k];
                let target = if j == k {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}

fn real_part<S: Scalar>(v: S) -> S {
    (v.clone() + v.conj()) / S::from_i64(2)
}

/// Orthonormal basis `phi_0..phi_n` of `D_{alpha,f}` for a nonzero `f`.
pub fn basis<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<OrthogonalBasis<S>> {
    OrthogonalBasis::from_gram(&gram_any(f, n, alpha)?)
}

/// `p_n` assembled from the orthonormal basis.
pub fn approximant_via_ops<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<Series<S>> {
    let f0 = f.coeff(0);
    if f0.is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    Ok(basis(f, n, alpha)?.approximant(&f0))
}

/// `phi_n = (p_n - p_{n-1}) / (conj(phi_n(0)) conj(f(0)))`.
///
/// Any nonzero multiple `c phi_n(0)` with `c > 0` may be passed instead, which
/// reconstructs `phi_n / c`; the exact backend uses this with `psi_n(0) / h_n`.
pub fn phi_from_diff<S: Scalar>(p_n: &Series<S>, p_prev: &Series<S>, f0: &S, phi_n_at_zero: &S) -> Result<Series<S>> {
    if phi_n_at_zero.is_negligible() {
        return Err(Error::DivisionDegenerate("phi_from_diff: phi_n(0) = 0"));
    }
    if f0.is_negligible() {
        return Err(Error::DivisionDegenerate("phi_from_diff: f(0) = 0"));
    }
    let denom = phi_n_at_zero.conj() * f0.conj();
    Ok((p_n - p_prev).scale(&(S::one() / denom)))
}

/// `|phi_n(0)| = sqrt((p_n(0) - p_{n-1}(0)) / conj(f(0)))`.
pub fn phi_at_zero_modulus<S: Scalar>(pn0: &S, prev0: &S, f0: &S) -> Result<f64> {
    if f0.is_negligible() {
        return Err(Error::DivisionDegenerate("phi_at_zero_modulus: f(0) = 0"));
    }
    let ratio = (pn0.clone() - prev0.clone()) / f0.conj();
    Ok(ratio.to_c64().re.max(0.0).sqrt())
}

/// Largest coefficient deviation between `phi_n^*` and `A_n^{-1} sum_k conj(phi_k(0)) phi_k`.
///
/// Only defined in the Hardy space.
pub fn szego_identity_residual<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<f64> {
    if !alpha.is_hardy() {
        return Err(Error::UnsupportedAlpha {
            alpha: alpha.value(),
            operation: "szego_identity_residual",
        });
    }
    let b = basis(f, n, alpha)?;
    // In monic form: psi_n^* = h_n sum_k conj(psi_k(0)) psi_k / h_k.
    let lhs = b.monic(n).reflect(n)?;
    let rhs = b.christoffel_darboux(n, &S::zero()).scale(b.norm_sq(n));
    let diff = &lhs - &rhs;
    let worst = diff.coeffs().iter().map(|c| c.modulus()).fold(0.0, f64::max);
    if worst == 0.0 {
        return Ok(0.0);
    }
    Ok(worst * b.leading_coefficient(n))
}

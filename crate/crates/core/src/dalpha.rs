//! Inner products of the Dirichlet-type spaces `D_alpha` and Gram matrices
//! of the shifted family `f, zf, z^2 f, ...`.
//!
//! `<f, g>_alpha = sum_k (k+1)^alpha f_k conj(g_k)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{weights, Alpha, Scalar};
use crate::series::Series;

/// Gram system for the optimal approximant of degree `n`.
///
/// Row `j` of `matrix` holds the normal equation against `z^j f`, so
/// `matrix[j][k] = <z^k f, z^j f>_alpha` and the coefficient vector `c`
/// of `p_n` solves `matrix * c = rhs` with `rhs = (conj(f(0)), 0, ..., 0)`.
/// For real coefficients this is the same matrix as `(<z^j f, z^k f>)_{j,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem<S> {
    pub matrix: Matrix<S>,
    pub rhs: Vec<S>,
    /// Estimated effect of truncating `f`; zero for polynomials.
    pub tail_error_bound: f64,
}

impl<S: Scalar> GramSystem<S> {
    pub fn degree(&self) -> usize {
        self.matrix.dim() - 1
    }

    /// The system for a lower degree `n`, sharing entries with `self`.
    pub fn principal(&self, n: usize) -> Self {
        assert!(n <= self.degree(), "principal degree exceeds the assembled degree");
        GramSystem {
            matrix: self.matrix.principal(n + 1),
            rhs: self.rhs[..=n].to_vec(),
            tail_error_bound: self.tail_error_bound,
        }
    }

    pub fn f0_conj(&self) -> &S {
        &self.rhs[0]
    }

    /// `<p f, q f>_alpha` for polynomials `p`, `q` of degree at most `n`,
    /// evaluated through the Gram entries.
    pub fn weighted_inner(&self, p: &Series<S>, q: &Series<S>) -> S {
        let dim = self.matrix.dim();
        let mut acc = S::zero();
        for j in 0..dim.min(q.len()) {
            let qj = q.coeff(j).conj();
            if qj.is_zero() {
                continue;
            }
            let mut row = S::zero();
            for k in 0..dim.min(p.len()) {
                let pk = p.coeff(k);
                if !pk.is_zero() {
                    row = row + self.matrix.get(j, k).clone() * pk;
                }
            }
            acc = acc + qj * row;
        }
        acc
    }
}

/// Convergence diagnostic for quantities computed from a truncated series.
///
/// The quantity is evaluated at truncations `M/4`, `M/2` and `M`. The last
/// difference is what the doubling step changes; `extrapolated` sums the
/// remaining geometric tail `d r / (1 - r)` with `r` the ratio of the last two
/// differences, which captures slowly (power-law) decaying coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub difference: f64,
    pub extrapolated: f64,
}

impl TailEstimate {
    pub fn zero() -> Self {
        TailEstimate {
            difference: 0.0,
            extrapolated: 0.0,
        }
    }

    pub fn from_differences(previous: f64, last: f64) -> Self {
        let previous = previous.abs();
        let last = last.abs();
        let extrapolated = if last == 0.0 {
            0.0
        } else if previous > last {
            let r = last / previous;
            last * r / (1.0 - r)
        } else {
            f64::INFINITY
        };
        TailEstimate {
            difference: last,
            extrapolated,
        }
    }

    pub fn bound(&self) -> f64 {
        self.difference.max(self.extrapolated)
    }
}

/// Truncation levels `M/4, M/2, M` used for tail estimates.
pub fn doubling_levels(truncation_degree: usize) -> [usize; 3] {
    let m = truncation_degree;
    [m / 4, m / 2, m]
}

fn check_alpha<S: Scalar>(alpha: Alpha) -> Result<()> {
    S::weight(0, alpha).map(|_| ())
}

fn shifted_with_weights<S: Scalar>(f: &[S], j: usize, l: usize, w: &[S]) -> S {
    let lo = j.max(l);
    let hi = f.len() + j.min(l);
    let mut acc = S::zero();
    for m in lo..hi {
        let a = &f[m - j];
        let b = &f[m - l];
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = acc + w[m].clone() * a.clone() * b.conj();
    }
    acc
}

/// `<f, g>_alpha` over the overlap of the stored coefficients.
pub fn inner<S: Scalar>(f: &Series<S>, g: &Series<S>, alpha: Alpha) -> Result<S> {
    check_alpha::<S>(alpha)?;
    let len = f.len().min(g.len());
    let mut acc = S::zero();
    for k in 0..len {
        let (a, b) = (&f.coeffs()[k], &g.coeffs()[k]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = acc + S::weight(k, alpha)? * a.clone() * b.conj();
    }
    Ok(acc)
}

/// `||f||^2_alpha`, returned as a real field element.
pub fn norm_sq<S: Scalar>(f: &Series<S>, alpha: Alpha) -> Result<S> {
    check_alpha::<S>(alpha)?;
    let mut acc = S::zero();
    for (k, a) in f.coeffs().iter().enumerate() {
        if !a.is_zero() {
            acc = acc + S::weight(k, alpha)? * a.abs_sq();
        }
    }
    Ok(acc)
}

/// `<z^j f, z^l f>_alpha` without materialising the shifts.
pub fn shifted_inner<S: Scalar>(f: &Series<S>, j: usize, l: usize, alpha: Alpha) -> Result<S> {
    let w: Vec<S> = weights(f.len() + j.max(l), alpha)?;
    Ok(shifted_with_weights(f.coeffs(), j, l, &w))
}

/// `<p f, q f>_alpha`, the inner product of the weighted space `D_{alpha,f}`.
pub fn weighted_inner<S: Scalar>(p: &Series<S>, q: &Series<S>, f: &Series<S>, alpha: Alpha) -> Result<S> {
    inner(&p.mul(f), &q.mul(f), alpha)
}

fn gram_matrix<S: Scalar>(f: &[S], n: usize, w: &[S]) -> Matrix<S> {
    let dim = n + 1;
    let upper: Vec<(usize, usize)> = (0..dim).flat_map(|j| (j..dim).map(move |k| (j, k))).collect();
    let values: Vec<S> = upper
        .par_iter()
        .map(|&(j, k)| shifted_with_weights(f, k, j, w))
        .collect();
    let mut m = Matrix::zeros(dim);
    for (&(j, k), v) in upper.iter().zip(values) {
        if j != k {
            m.set(k, j, v.conj());
        }
        m.set(j, k, v);
    }
    m
}

/// Assemble the Gram system of degree `n`.
///
/// For truncated series the entries are recomputed at the coarser
/// truncations of [`doubling_levels`] and the largest entrywise
/// [`TailEstimate::bound`] is attached.
pub fn gram<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<GramSystem<S>> {
    if f.coeff(0).is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    gram_any(f, n, alpha)
}

/// As [`gram`], but accepting `f(0) = 0` (the right-hand side is then zero).
/// Only the zero function is rejected.
pub fn gram_any<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<GramSystem<S>> {
    if f.coeffs().iter().all(|c| c.is_negligible()) {
        return Err(Error::Degenerate("f is identically zero".into()));
    }
    let f0 = f.coeff(0);
    let w: Vec<S> = weights(f.len() + n, alpha)?;
    let matrix = gram_matrix(f.coeffs(), n, &w);

    let mut tail_error_bound = 0.0;
    if !f.is_exact_polynomial() {
        let [quarter, half, _] = doubling_levels(f.truncation_degree());
        let coarse = gram_matrix(&f.coeffs()[..=quarter], n, &w);
        let mid = gram_matrix(&f.coeffs()[..=half], n, &w);
        for j in 0..=n {
            for k in 0..=n {
                let d_prev = (mid.get(j, k).clone() - coarse.get(j, k).clone()).modulus();
                let d_last = (matrix.get(j, k).clone() - mid.get(j, k).clone()).modulus();
                let est = TailEstimate::from_differences(d_prev, d_last);
                tail_error_bound = f64::max(tail_error_bound, est.bound());
            }
        }
    }

    let mut rhs = vec![S::zero(); n + 1];
    rhs[0] = f0.conj();
    Ok(GramSystem {
        matrix,
        rhs,
        tail_error_bound,
    })
}

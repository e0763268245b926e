//! Reproducing kernels of `f P_n`, the extremal problem at the origin and
//! the cyclicity report.

use num::complex::Complex64;

use crate::approximant;
use crate::dalpha::gram;
use crate::error::{Error, Result};
use crate::orthopoly::{basis, OrthogonalBasis};
use crate::scalar::{Alpha, Scalar, DEGREE_EPSILON};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelEvaluation<S> {
    pub z: S,
    pub w: S,
    pub value: S,
}

/// `K_n(z, w)` from an existing basis of `D_{alpha,f}`.
pub fn kernel_eval_with<S: Scalar>(b: &OrthogonalBasis<S>, f: &Series<S>, z: &S, w: &S) -> KernelEvaluation<S> {
    let cd = b.christoffel_darboux(b.degree(), w);
    let value = f.eval(w).conj() * cd.eval(z) * f.eval(z);
    KernelEvaluation {
        z: z.clone(),
        w: w.clone(),
        value,
    }
}

/// `K_n(z, w) = sum_k conj(phi_k(w) f(w)) phi_k(z) f(z)`.
pub fn kernel_eval<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha, z: &S, w: &S) -> Result<KernelEvaluation<S>> {
    Ok(kernel_eval_with(&basis(f, n, alpha)?, f, z, w))
}

/// `K_n(., w)` as a series: `conj(f(w)) f sum_k conj(phi_k(w)) phi_k`.
pub fn kernel_section<S: Scalar>(b: &OrthogonalBasis<S>, f: &Series<S>, w: &S) -> Series<S> {
    b.christoffel_darboux(b.degree(), w).mul(f).scale(&f.eval(w).conj())
}

/// `K_n(., 0)`, which equals `p_n f`.
pub fn kernel_at_zero<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<Series<S>> {
    if f.coeff(0).is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    let b = basis(f, n, alpha)?;
    Ok(kernel_section(&b, f, &S::zero()))
}

/// Solution of `sup { |g(0)| : g in f P_n, ||g||_alpha <= 1 }` with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremal {
    /// `sqrt(K_n(0, 0))`.
    pub value: f64,
    /// `||g||_alpha` for the extremal `g = K_n(., 0) / sqrt(K_n(0, 0))`.
    pub g_norm: f64,
    /// `g(0)`.
    pub g_at_zero: f64,
}

pub fn extremal_value<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<Extremal> {
    if f.coeff(0).is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    let b = basis(f, n, alpha)?;
    let k00 = kernel_eval_with(&b, f, &S::zero(), &S::zero()).value.to_c64().re;
    let value = k00.max(0.0).sqrt();
    let g = kernel_section(&b, f, &S::zero()).map(|c| c.to_c64() / value);
    let g_norm = crate::dalpha::norm_sq(&g, alpha)?.re.sqrt();
    Ok(Extremal {
        value,
        g_norm,
        g_at_zero: g.coeff(0).re,
    })
}

/// `(1 / (conj(f(w)) f(z))) (1 - conj(w) z)^{alpha - 1}`, principal branch.
///
/// Diagnostic reference for the large-`n` limit of `K_n / (f(z) conj(f(w)))`
/// when `alpha < 0`; the admissible class of `f` is not pinned down, so this
/// is not used to assert anything.
pub fn mccarthy_reference<S: Scalar>(f: &Series<S>, alpha: Alpha, z: Complex64, w: Complex64) -> Result<Complex64> {
    if alpha.value() >= 0.0 {
        return Err(Error::UnsupportedAlpha {
            alpha: alpha.value(),
            operation: "mccarthy_reference",
        });
    }
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Degenerate("mccarthy_reference needs |z| < 1 and |w| < 1".into()));
    }
    let fc = f.map(|c| c.to_c64());
    let (fz, fw) = (fc.eval(&z), fc.eval(&w));
    if fz.norm() <= DEGREE_EPSILON || fw.norm() <= DEGREE_EPSILON {
        return Err(Error::DivisionDegenerate("mccarthy_reference: f vanishes at z or w"));
    }
    let base = Complex64::new(1.0, 0.0) - w.conj() * z;
    let power = (base.ln() * (alpha.value() - 1.0)).exp();
    Ok(power / (fw.conj() * fz))
}

/// Heuristic label for the behaviour of `d_n^2`; never a proof of cyclicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    ApproachingTarget,
    Plateaued,
    Inconclusive,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::ApproachingTarget => "approaching-target",
            Trend::Plateaued => "plateaued",
            Trend::Inconclusive => "inconclusive",
        }
    }

    /// Distances at or below this count as the target being attained.
    pub const ATTAINED: f64 = 1e-14;
    /// Log-log slope over the last three points that counts as decay to zero.
    pub const DECAY_SLOPE: f64 = -0.05;
    /// Spread of the last five distances that counts as a plateau.
    pub const PLATEAU_SPREAD: f64 = 1e-12;
    /// A plateau must sit at least this far from zero.
    pub const PLATEAU_FLOOR: f64 = 1e-6;

    pub fn classify(distances: &[f64]) -> Trend {
        let Some(&last) = distances.last() else {
            return Trend::Inconclusive;
        };
        if last <= Self::ATTAINED {
            return Trend::ApproachingTarget;
        }
        let len = distances.len();
        if len >= 5 {
            let tail = &distances[len - 5..];
            let hi = tail.iter().cloned().fold(f64::MIN, f64::max);
            let lo = tail.iter().cloned().fold(f64::MAX, f64::min);
            if hi - lo < Self::PLATEAU_SPREAD && last > Self::PLATEAU_FLOOR {
                return Trend::Plateaued;
            }
        }
        if len >= 3 {
            let tail = &distances[len - 3..];
            let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
            if decreasing && tail.iter().all(|&d| d > 0.0) {
                let xs: Vec<f64> = (len - 3..len).map(|n| ((n + 1) as f64).ln()).collect();
                let ys: Vec<f64> = tail.iter().map(|d| d.ln()).collect();
                if least_squares_slope(&xs, &ys) < Self::DECAY_SLOPE {
                    return Trend::ApproachingTarget;
                }
            }
        }
        Trend::Inconclusive
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicityReport<S> {
    pub max_n: usize,
    pub pn_at_zero: Vec<S>,
    /// `sum_{k <= n} |phi_k(0)|^2`.
    pub partial_sums: Vec<S>,
    /// `1 / |f(0)|^2`.
    pub target: S,
    pub distances: Vec<S>,
    pub trend: Trend,
}

impl<S: Scalar> CyclicityReport<S> {
    /// Largest `|d_n^2 + |f(0)|^2 S_n - 1|`.
    pub fn chain_residual(&self) -> f64 {
        let f0_sq = S::one() / self.target.clone();
        self.distances
            .iter()
            .zip(&self.partial_sums)
            .map(|(d, s)| (d.clone() + f0_sq.clone() * s.clone() - S::one()).modulus())
            .fold(0.0, f64::max)
    }
}

/// Tabulate `p_n(0)`, `sum |phi_k(0)|^2` and `d_n^2` for `n = 0..=max_n`.
pub fn cyclicity_report<S: Scalar>(f: &Series<S>, alpha: Alpha, max_n: usize) -> Result<CyclicityReport<S>> {
    let f0 = f.coeff(0);
    if f0.is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    let system = gram(f, max_n, alpha)?;
    let b = OrthogonalBasis::from_gram(&system)?;
    let partial_sums = b.phi_at_zero_sq_partial_sums();
    let rows = approximant::sweep_system(f, &system, alpha)?;
    let pn_at_zero: Vec<S> = rows.iter().map(|r| r.p_at_zero.clone()).collect();
    let distances: Vec<S> = rows.into_iter().map(|r| r.distance_sq).collect();
    let trend = Trend::classify(&distances.iter().map(|d| d.to_c64().re).collect::<Vec<_>>());
    Ok(CyclicityReport {
        max_n,
        pn_at_zero,
        partial_sums,
        target: S::one() / f0.abs_sq(),
        distances,
        trend,
    })
}

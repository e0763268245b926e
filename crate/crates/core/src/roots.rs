//! Zeros of approximants: root extraction, the zero-location bound, and the
//! first-zero formula with its fixed-point generalisation.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::approximant::optimal;
use crate::dalpha::TailEstimate;
use crate::error::{Error, Result};
use crate::scalar::{Alpha, Float, Scalar};
use crate::series::Series;

/// Roots closer than this are reported as one root with multiplicity.
pub const CLUSTER_TOLERANCE: f64 = 1e-7;
const NEWTON_STEPS: usize = 5;
/// Relative imaginary part below which a root of a real polynomial is taken as real.
const REAL_SNAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    /// Every root, repeated according to multiplicity, sorted by real then imaginary part.
    pub roots: Vec<Complex64>,
    /// Distinct roots with their multiplicities.
    pub clusters: Vec<(Complex64, usize)>,
    pub effective_degree: usize,
    /// `|p(root)|` for each entry of `roots`.
    pub residuals: Vec<f64>,
}

impl ZeroSet {
    fn empty() -> Self {
        ZeroSet {
            roots: Vec::new(),
            clusters: Vec::new(),
            effective_degree: 0,
            residuals: Vec::new(),
        }
    }

    pub fn min_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// Diagonal similarity scaling by powers of two so rows and columns have comparable norms.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc >= r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (c * f + r / f) < 0.95 * total {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn companion_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d {
        m[(0, k)] = -c[d - 1 - k] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    balance(&mut m);
    match Schur::try_new(m, f64::EPSILON, 10_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            Ok((0..d).map(|i| t[(i, i)]).collect())
        }
        None => aberth(c),
    }
}

/// Simultaneous Aberth–Ehrlich iteration, used when the QR iteration stalls.
fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    let dc = derivative(c);
    let radius = 1.0 + c[..d].iter().map(|a| (a / c[d]).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, (k as f64 + 0.25) * std::f64::consts::TAU / d as f64))
        .collect();
    for _ in 0..1000 {
        let mut worst = 0.0f64;
        for i in 0..d {
            let ratio = horner(c, z[i]) / horner(&dc, z[i]);
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if worst <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    Err(Error::Degenerate("root iteration did not converge".into()))
}

fn polish(c: &[Complex64], dc: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut value = horner(c, z).norm();
    for _ in 0..NEWTON_STEPS {
        let d = horner(dc, z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - horner(c, z) / d;
        let next_value = horner(c, next).norm();
        if next_value.is_nan() || next_value >= value {
            break;
        }
        z = next;
        value = next_value;
    }
    z
}

/// Merge nearby roots and refine each multiple root as a simple root of `p^{(m-1)}`.
fn cluster(c: &[Complex64], roots: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    let loose = 1e-5;
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in roots {
        match groups.iter_mut().find(|g| {
            let centre = g.iter().sum::<Complex64>() / g.len() as f64;
            (centre - z).norm() <= loose * centre.norm().max(1.0)
        }) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let mut out = Vec::new();
    for g in groups {
        let m = g.len();
        let centre = g.iter().sum::<Complex64>() / m as f64;
        if m == 1 {
            out.push((centre, 1));
            continue;
        }
        let mut dp = c.to_vec();
        for _ in 0..m - 1 {
            dp = derivative(&dp);
        }
        let ddp = derivative(&dp);
        let refined = polish(&dp, &ddp, centre);
        if g.iter()
            .all(|z| (z - refined).norm() <= CLUSTER_TOLERANCE.max(loose * refined.norm().max(1.0)))
        {
            out.push((refined, m));
        } else {
            out.extend(g.into_iter().map(|z| (z, 1)));
        }
    }
    out
}

fn sort_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// All complex roots of `p` with multiplicity.
///
/// Exact coefficients are rounded to double precision first.
pub fn poly_roots<S: Scalar>(p: &Series<S>) -> Result<ZeroSet> {
    let Some(d) = p.effective_degree() else {
        return Err(Error::Degenerate("the zero polynomial has no finite zero set".into()));
    };
    if d == 0 {
        return Ok(ZeroSet::empty());
    }
    let c: Vec<Complex64> = p.coeffs()[..=d].iter().map(|v| v.to_c64()).collect();
    // Exact zeros at the origin are split off before the eigenvalue solve.
    let zeros_at_origin = p.coeffs().iter().take_while(|v| v.is_zero()).count();
    let reduced = &c[zeros_at_origin..];
    let dc = derivative(reduced);
    let raw = match reduced.len() - 1 {
        0 => Vec::new(),
        1 => vec![-reduced[0] / reduced[1]],
        _ => companion_roots(reduced)?,
    };
    let real_coefficients = reduced.iter().all(|a| a.im == 0.0);
    let polished: Vec<Complex64> = raw
        .into_iter()
        .map(|z| {
            // Real polynomials: snap numerically real roots onto the axis before polishing.
            let z = if real_coefficients && z.im.abs() <= REAL_SNAP * z.norm().max(1.0) {
                Complex64::new(z.re, 0.0)
            } else {
                z
            };
            polish(reduced, &dc, z)
        })
        .collect();
    let mut clusters = cluster(reduced, polished);
    if zeros_at_origin > 0 {
        clusters.push((Complex64::new(0.0, 0.0), zeros_at_origin));
    }
    clusters.sort_by(|a, b| sort_key(&a.0, &b.0));
    let roots: Vec<Complex64> = clusters
        .iter()
        .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
        .collect();
    let residuals = roots.iter().map(|&z| horner(&c, z).norm()).collect();
    Ok(ZeroSet {
        roots,
        clusters,
        effective_degree: d,
        residuals,
    })
}

/// Outcome of the first-zero formula.
#[derive(Debug, Clone, PartialEq)]
pub enum FirstZero<S> {
    Finite(S),
    /// `<f, z f>_alpha = 0`: `p_1` is constant and the zero sits at infinity.
    AtInfinity,
}

impl<S: Scalar> FirstZero<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            FirstZero::Finite(z) => Some(z),
            FirstZero::AtInfinity => None,
        }
    }
}

/// `(||z f||^2_alpha, <f, z f>_alpha)` over the first `len` coefficients.
fn first_zero_sums<S: Scalar>(f: &[S], alpha: Alpha, snapshots: &[usize]) -> Result<Vec<(S, S)>> {
    let mut out = Vec::with_capacity(snapshots.len());
    let mut num = S::zero();
    let mut den = S::zero();
    let mut next = 0;
    let mut prev_coeff = S::zero();
    for (k, a) in f.iter().enumerate() {
        while next < snapshots.len() && snapshots[next] == k {
            out.push((num.clone(), den.clone()));
            next += 1;
        }
        if !a.is_zero() {
            num = num + S::weight(k + 1, alpha)? * a.abs_sq();
        }
        // <f, z f> picks up f_k conj(f_{k-1}) at weight index k.
        if k > 0 && !(a.is_zero() || prev_coeff.is_zero()) {
            den = den + S::weight(k, alpha)? * a.clone() * prev_coeff.conj();
        }
        prev_coeff = a.clone();
    }
    // Degree-M polynomial zf has its last term from f_M; <f, zf> is complete once f_M is in.
    while next < snapshots.len() {
        out.push((num.clone(), den.clone()));
        next += 1;
    }
    Ok(out)
}

/// `z_1 = ||z f||^2_alpha / <f, z f>_alpha`, the zero of `p_1`.
pub fn first_zero<S: Scalar>(f: &Series<S>, alpha: Alpha) -> Result<FirstZero<S>> {
    let sums = first_zero_sums(f.coeffs(), alpha, &[f.len()])?;
    let (num, den) = sums.into_iter().next().expect("one snapshot requested");
    if den.is_zero() {
        return Ok(FirstZero::AtInfinity);
    }
    Ok(FirstZero::Finite(num / den))
}

/// The first-zero formula applied to prefixes of `f` to expose truncation effects.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstZeroEstimate {
    /// Prefix lengths, ascending; the last is the full series.
    pub lengths: Vec<usize>,
    pub values: Vec<Complex64>,
    /// Differences over the last two doublings, with geometric extrapolation.
    pub tail: TailEstimate,
    /// Final value plus the extrapolated remaining tail.
    pub extrapolated_value: Complex64,
    /// Segment from the final value to the final value plus twice the extrapolated tail.
    pub bracket: (Complex64, Complex64),
    /// Successive changes keep their direction and shrink.
    pub monotone: bool,
}

impl FirstZeroEstimate {
    pub fn value(&self) -> Complex64 {
        *self.values.last().expect("at least one level")
    }

    /// True if the real number `x` lies in the bracket (both ends taken as real).
    pub fn brackets_real(&self, x: f64) -> bool {
        let (a, b) = (self.bracket.0.re, self.bracket.1.re);
        a.min(b) <= x && x <= a.max(b)
    }
}

/// Prefix lengths `len, len / 2, len / 4, ...` down to `start` (at least three
/// levels), in ascending order.
pub fn doubling_lengths(start: usize, len: usize) -> Vec<usize> {
    let mut v = vec![len];
    let mut m = len;
    while m >= 2 && (m / 2 >= start || v.len() < 3) {
        m /= 2;
        v.push(m);
    }
    v.reverse();
    v
}

/// Evaluate the first-zero formula on the given prefix lengths of a float series.
pub fn first_zero_estimate(f: &Series<Float>, alpha: Alpha, lengths: &[usize]) -> Result<FirstZeroEstimate> {
    let mut lengths: Vec<usize> = lengths.iter().map(|&m| m.min(f.len())).filter(|&m| m >= 1).collect();
    lengths.sort_unstable();
    lengths.dedup();
    if lengths.last() != Some(&f.len()) {
        lengths.push(f.len());
    }
    let sums = first_zero_sums(f.coeffs(), alpha, &lengths)?;
    let mut values = Vec::with_capacity(sums.len());
    for (num, den) in sums {
        if den.norm() == 0.0 {
            return Err(Error::Degenerate("<f, z f> vanishes on a prefix".into()));
        }
        values.push(num / den);
    }
    let k = values.len();
    let last_step = if k >= 2 {
        values[k - 1] - values[k - 2]
    } else {
        Complex64::new(0.0, 0.0)
    };
    let prev_step = if k >= 3 {
        values[k - 2] - values[k - 3]
    } else {
        Complex64::new(f64::INFINITY, 0.0)
    };
    let tail = TailEstimate::from_differences(prev_step.norm(), last_step.norm());
    let direction = if last_step.norm() > 0.0 {
        last_step / last_step.norm()
    } else {
        Complex64::new(0.0, 0.0)
    };
    let z = values[k - 1];
    let extrapolated_value = z + direction * tail.extrapolated;
    let bracket = (z, z + direction * (2.0 * tail.extrapolated));
    let steps: Vec<Complex64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = steps.windows(2).all(|s| {
        let same_direction = (s[0] * s[1].conj()).re > 0.0;
        same_direction && s[1].norm() < s[0].norm()
    });
    Ok(FirstZeroEstimate {
        lengths,
        values,
        tail,
        extrapolated_value,
        bracket,
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroBoundCheck {
    pub roots: ZeroSet,
    /// `+inf` when there are no roots.
    pub min_modulus: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `1` for `alpha >= 0`, `2^{alpha/2}` otherwise.
pub fn zero_bound(alpha: Alpha) -> f64 {
    if alpha.value() >= 0.0 {
        1.0
    } else {
        2f64.powf(alpha.value() / 2.0)
    }
}

pub fn zero_bound_check<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<ZeroBoundCheck> {
    let p = optimal(f, n, alpha)?.p;
    let roots = poly_roots(&p)?;
    let min_modulus = roots.min_modulus();
    let bound = zero_bound(alpha);
    let pass = min_modulus > bound - 1e-9;
    Ok(ZeroBoundCheck {
        roots,
        min_modulus,
        bound,
        pass,
    })
}

/// `|z_m - ||z q_m||^2 / <q_m, z q_m>|` with `q_m = f prod_{j != m} (z - z_j)`.
///
/// `None` marks an entry whose denominator vanishes.
pub fn fixed_point_residual<S: Scalar>(f: &Series<S>, alpha: Alpha, zeros: &[Complex64]) -> Result<Vec<Option<f64>>> {
    if zeros.is_empty() {
        return Err(Error::Degenerate("fixed_point_residual needs at least one zero".into()));
    }
    let f = f.map(|c| c.to_c64());
    (0..zeros.len())
        .map(|m| {
            let mut q = f.clone();
            for (j, zj) in zeros.iter().enumerate() {
                if j != m {
                    q = q.mul(&Series::polynomial(vec![-zj, Complex64::new(1.0, 0.0)]));
                }
            }
            match first_zero(&q, alpha)? {
                FirstZero::Finite(v) => Ok(Some((zeros[m] - v).norm())),
                FirstZero::AtInfinity => Ok(None),
            }
        })
        .collect()
}

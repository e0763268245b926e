//! Levinson recursion for the Hardy space, where the Gram matrix is Toeplitz.
//!
//! With `r_m = <z^m f, f>` the Gram entry in row `j`, column `k` is
//! `r_{k-j}` (and `r_{-m} = conj(r_m)`). The recursion solves `T x = e_0`
//! degree by degree and the approximant is `p_n = conj(f(0)) x`.
//! The update at each step is
//!
//! ```text
//! x_{k,n+1} = (x_{k,n} - G_n conj(x_{n+1-k,n})) / (1 - |G_n|^2),
//! G_n = sum_k x_{k,n} conj(r_{n+1-k}),
//! ```
//!
//! so `G_n = -x_{n+1,n+1} / x_{0,n+1}` and `x_{0,n}` is real and positive.

use crate::dalpha::{doubling_levels, TailEstimate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq)]
pub struct LevinsonState<S> {
    pub n: usize,
    /// `c_{0,n}..c_{n,n}`, the coefficients of `p_n`.
    pub coeffs: Vec<S>,
    /// `G_0..G_{n-1}`.
    pub gammas: Vec<S>,
    /// `<z^k f, f>` for `k = 0..=n`.
    pub autocorr: Vec<S>,
    /// Coefficients of `p_0..p_n`.
    pub history: Vec<Vec<S>>,
    pub tail_error_bound: f64,
}

impl<S: Scalar> LevinsonState<S> {
    pub fn approximant(&self) -> Series<S> {
        Series::polynomial(self.coeffs.clone())
    }
}

fn autocorrelation<S: Scalar>(f: &[S], n_max: usize) -> Vec<S> {
    (0..=n_max)
        .map(|k| {
            let mut acc = S::zero();
            for i in k..f.len() {
                let (a, b) = (&f[i - k], &f[i]);
                if !(a.is_zero() || b.is_zero()) {
                    acc = acc + a.clone() * b.conj();
                }
            }
            acc
        })
        .collect()
}

/// `(<z^k f, f>_0)_{k = 0..=n_max}`.
pub fn toeplitz_column<S: Scalar>(f: &Series<S>, n_max: usize) -> Vec<S> {
    autocorrelation(f.coeffs(), n_max)
}

fn column_tail<S: Scalar>(f: &Series<S>, column: &[S]) -> f64 {
    if f.is_exact_polynomial() {
        return 0.0;
    }
    let n_max = column.len() - 1;
    let [quarter, half, _] = doubling_levels(f.truncation_degree());
    let coarse = autocorrelation(&f.coeffs()[..=quarter], n_max);
    let mid = autocorrelation(&f.coeffs()[..=half], n_max);
    (0..=n_max)
        .map(|k| {
            let prev = (mid[k].clone() - coarse[k].clone()).modulus();
            let last = (column[k].clone() - mid[k].clone()).modulus();
            TailEstimate::from_differences(prev, last).bound()
        })
        .fold(0.0, f64::max)
}

/// Run the recursion up to degree `n`.
pub fn levinson_solve<S: Scalar>(f: &Series<S>, n: usize) -> Result<LevinsonState<S>> {
    let f0 = f.coeff(0);
    if f0.is_negligible() {
        return Err(Error::ZeroAtOrigin);
    }
    let r = toeplitz_column(f, n + 1);
    let tail_error_bound = column_tail(f, &r);
    let one = S::one();
    let mut x = vec![one.clone() / r[0].clone()];
    let mut gammas = Vec::with_capacity(n);
    let mut history = vec![x.clone()];
    for step in 0..n {
        let gamma = (0..=step).fold(S::zero(), |acc, k| acc + x[k].clone() * r[step + 1 - k].conj());
        let modulus = gamma.modulus();
        let shrink = one.clone() - gamma.abs_sq();
        if !shrink.real_gt(&S::zero()) || modulus >= 1.0 {
            return Err(Error::Breakdown { step, modulus });
        }
        let next: Vec<S> = (0..=step + 1)
            .map(|k| {
                let own = x.get(k).cloned().unwrap_or_else(S::zero);
                let mirrored = if k == 0 { S::zero() } else { x[step + 1 - k].conj() };
                (own - gamma.clone() * mirrored) / shrink.clone()
            })
            .collect();
        x = next;
        gammas.push(gamma);
        history.push(x.clone());
    }
    let scale = f0.conj();
    let history: Vec<Vec<S>> = history
        .into_iter()
        .map(|h| h.into_iter().map(|c| c * scale.clone()).collect())
        .collect();
    let mut autocorr = r;
    autocorr.truncate(n + 1);
    Ok(LevinsonState {
        n,
        coeffs: history[n].clone(),
        gammas,
        autocorr,
        history,
        tail_error_bound,
    })
}

/// `G_m = -c_{m+1,m+1} / c_{0,m+1}` for `m = 0..n-1`, recomputed from the coefficients.
pub fn reflection_coefficients<S: Scalar>(state: &LevinsonState<S>) -> Result<Vec<S>> {
    state.history[1..]
        .iter()
        .map(|c| {
            let c0 = &c[0];
            if c0.is_zero() {
                return Err(Error::Degenerate("c_{0,n} = 0 in reflection coefficient".into()));
            }
            Ok(-(c[c.len() - 1].clone() / c0.clone()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterCriterion<S> {
    /// `prod_{k <= n} (1 - |G_k|^2)` for `n = 0..N`.
    pub partial_products: Vec<S>,
    /// `conj(f(0)) / ||f||^2`.
    pub target: S,
    /// `|f(0)|^2 / ||f||^2`, the limit of the product exactly when `f` is outer.
    /// Coincides with `target` when `f(0) > 0`.
    pub modulus_target: S,
    /// `p_{n+1}(0) = conj(f(0)) / (||f||^2 prod_{k <= n} (1 - |G_k|^2))`.
    pub pn_at_zero: Vec<S>,
}

pub fn outer_criterion_partial<S: Scalar>(f: &Series<S>, big_n: usize) -> Result<OuterCriterion<S>> {
    let state = levinson_solve(f, big_n)?;
    let norm = state.autocorr[0].clone();
    let f0 = f.coeff(0);
    let mut acc = S::one();
    let mut partial_products = Vec::with_capacity(big_n);
    let mut pn_at_zero = Vec::with_capacity(big_n);
    for g in &state.gammas {
        acc = acc * (S::one() - g.abs_sq());
        pn_at_zero.push(f0.conj() / (norm.clone() * acc.clone()));
        partial_products.push(acc.clone());
    }
    Ok(OuterCriterion {
        partial_products,
        target: f0.conj() / norm.clone(),
        modulus_target: f0.abs_sq() / norm,
        pn_at_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximant::optimal;
    use crate::dalpha::gram;
    use crate::families;
    use crate::roots::poly_roots;
    use crate::scalar::{Alpha, Exact, Float};
    use num::complex::Complex64;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn ints(c: &[i64]) -> Series<Exact> {
        Series::from_ints(c)
    }

    #[test]
    fn column_examples() {
        assert_eq!(
            toeplitz_column(&ints(&[1, -1]), 3),
            vec![q(2, 1), q(-1, 1), q(0, 1), q(0, 1)]
        );
        assert_eq!(toeplitz_column(&ints(&[1]), 2), vec![q(1, 1), q(0, 1), q(0, 1)]);
        let f = families::blaschke::<Float>(Complex64::new(0.5, 0.0), 10_000).unwrap();
        let col = toeplitz_column(&f, 4);
        assert!((col[0].re - 1.0).abs() < 1e-12);
        for v in &col[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn cesaro_recursion() {
        let s = levinson_solve(&ints(&[1, -1]), 3).unwrap();
        let expected: Vec<Exact> = (0..=3).map(|k| q(1, 1) - q(k + 1, 5)).collect();
        assert_eq!(s.coeffs, expected);
        for (n, g) in s.gammas.iter().enumerate() {
            assert_eq!(*g, q(-1, n as i64 + 2));
        }
        assert_eq!(reflection_coefficients(&s).unwrap(), s.gammas);
    }

    #[test]
    fn constant_function() {
        let s = levinson_solve(&ints(&[1]), 4).unwrap();
        assert_eq!(s.coeffs, ints(&[1, 0, 0, 0, 0]).into_coeffs());
        assert!(s.gammas.iter().all(|g| *g == q(0, 1)));
        assert!(reflection_coefficients(&s).unwrap().iter().all(|g| *g == q(0, 1)));
    }

    #[test]
    fn inner_function_has_vanishing_reflections() {
        let lambda = Complex64::new(0.3, -0.4);
        let f = families::blaschke::<Float>(lambda, 10_000).unwrap();
        let s = levinson_solve(&f, 8).unwrap();
        for g in reflection_coefficients(&s).unwrap() {
            assert!(g.norm() < 1e-12);
        }
        for h in &s.history {
            assert!((h[0] - lambda.conj()).norm() < 1e-12);
            for c in &h[1..] {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn outer_criterion_for_one_minus_z() {
        let o = outer_criterion_partial(&ints(&[1, -1]), 25).unwrap();
        assert_eq!(o.target, q(1, 2));
        for (n, (prod, p0)) in o.partial_products.iter().zip(&o.pn_at_zero).enumerate() {
            let n = n as i64;
            assert_eq!(*prod, q(n + 3, 2 * (n + 2)));
            assert_eq!(*p0, q(n + 2, n + 3));
        }
    }

    #[test]
    fn outer_criterion_for_constant_and_blaschke() {
        let o = outer_criterion_partial(&ints(&[1]), 5).unwrap();
        assert!(o.partial_products.iter().all(|p| *p == q(1, 1)));
        assert_eq!(o.target, q(1, 1));
        let f = families::blaschke::<Float>(Complex64::new(0.5, 0.0), 10_000).unwrap();
        let o = outer_criterion_partial(&f, 10).unwrap();
        for p in &o.partial_products {
            assert!((p.re - 1.0).abs() < 1e-12);
        }
        assert!((o.target - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_at_origin() {
        assert_eq!(levinson_solve(&ints(&[0, 1]), 2).unwrap_err(), Error::ZeroAtOrigin);
    }

    fn poly_with_origin(max_len: usize) -> impl Strategy<Value = Series<Float>> {
        (
            0.2f64..1.0,
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..max_len),
        )
            .prop_map(|(c0, rest)| {
                let mut v = vec![Complex64::new(c0, 0.0)];
                v.extend(rest.into_iter().map(|(re, im)| Complex64::new(re, im)));
                Series::polynomial(v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_direct_solve(f in poly_with_origin(13), n in 0usize..=20) {
            let s = levinson_solve(&f, n).unwrap();
            let direct = optimal(&f, n, Alpha::int(0)).unwrap().p;
            let scale = direct.max_modulus();
            for k in 0..=n {
                prop_assert!((s.coeffs[k] - direct.coeff(k)).norm() <= 1e-9 * scale);
            }
            for g in &s.gammas {
                prop_assert!(g.norm() < 1.0);
            }
            prop_assert!(s.coeffs[0].im.abs() <= 1e-12 * s.coeffs[0].norm());
        }

        #[test]
        fn matches_direct_solve_exactly(mut c in prop::collection::vec(-5i64..5, 1..5), im in prop::collection::vec(-3i64..3, 5), n in 0usize..5) {
            if c[0] == 0 { c[0] = 1; }
            let coeffs = c.iter().zip(&im).map(|(&re, &im)| Exact::new(q(re, 1).re, q(im, 1).re)).collect();
            let f = Series::polynomial(coeffs);
            let s = levinson_solve(&f, n).unwrap();
            prop_assert_eq!(s.approximant(), optimal(&f, n, Alpha::int(0)).unwrap().p);
            prop_assert_eq!(reflection_coefficients(&s).unwrap(), s.gammas.clone());
        }

        #[test]
        fn toeplitz_matches_gram(f in poly_with_origin(8), n in 0usize..8) {
            let col = toeplitz_column(&f, n);
            let g = gram(&f, n, Alpha::int(0)).unwrap().matrix;
            for j in 0..=n {
                for k in 0..=n {
                    let expected = if k >= j { col[k - j] } else { col[j - k].conj() };
                    prop_assert!((g.get(j, k) - expected).norm() <= 1e-14 * (1.0 + expected.norm()));
                }
            }
        }

        #[test]
        fn toeplitz_matches_gram_exactly(mut c in prop::collection::vec(-5i64..5, 1..6), n in 0usize..6) {
            if c[0] == 0 { c[0] = 1; }
            let f = ints(&c);
            let col = toeplitz_column(&f, n);
            let g = gram(&f, n, Alpha::int(0)).unwrap().matrix;
            for j in 0..=n {
                for k in 0..=n {
                    let expected = if k >= j { col[k - j].clone() } else { col[j - k].conj() };
                    prop_assert_eq!(g.get(j, k), &expected);
                }
            }
        }

        #[test]
        fn leading_ratio_is_product_of_inverse_roots(f in poly_with_origin(8), n in 1usize..8) {
            let s = levinson_solve(&f, n).unwrap();
            let p = s.approximant();
            prop_assume!(p.effective_degree() == Some(n));
            let zs = poly_roots(&p).unwrap();
            let product: f64 = zs.roots.iter().map(|z| 1.0 / z.norm()).product();
            let ratio = (s.coeffs[n] / s.coeffs[0]).norm();
            prop_assert!((ratio - product).abs() <= 1e-8 * ratio.max(1.0));
        }
    }
}

//! Optimal approximants `p_n` and the distance `d_n^2 = dist^2(1, f P_n)`.

use rayon::prelude::*;

use crate::dalpha::{self, gram, GramSystem};
use crate::error::{Error, Result};
use crate::kernel;
use crate::orthopoly;
use crate::scalar::{Alpha, Scalar};
use crate::series::Series;

/// The optimal approximant of degree at most `n` together with its distance data.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantResult<S> {
    pub n: usize,
    /// Coefficients `c_0..c_n`; trailing coefficients may vanish.
    pub p: Series<S>,
    pub p_at_zero: S,
    /// `1 - p_n(0) f(0)`.
    pub distance_sq: S,
    /// `||p_n f - 1||^2_alpha` recomputed from the product.
    pub residual_norm_sq: S,
    pub tail_error_bound: f64,
}

impl<S: Scalar> ApproximantResult<S> {
    /// Degree actually attained, which can be below `n`.
    pub fn effective_degree(&self) -> usize {
        self.p.effective_degree().unwrap_or(0)
    }
}

/// Solve an already assembled Gram system for `p_n`.
pub fn solve_system<S: Scalar>(f: &Series<S>, system: &GramSystem<S>, alpha: Alpha) -> Result<ApproximantResult<S>> {
    let n = system.degree();
    let coeffs = S::solve_hermitian(&system.matrix, &system.rhs)?;
    let p = Series::polynomial(coeffs);
    let p_at_zero = p.coeff(0);
    let distance_sq = S::one() - p_at_zero.clone() * f.coeff(0);
    let residual = &p.mul(f) - &Series::one();
    let residual_norm_sq = dalpha::norm_sq(&residual, alpha)?;
    Ok(ApproximantResult {
        n,
        p,
        p_at_zero,
        distance_sq,
        residual_norm_sq,
        tail_error_bound: system.tail_error_bound,
    })
}

/// The polynomial `p` of degree at most `n` minimising `||p f - 1||_alpha`.
pub fn optimal<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<ApproximantResult<S>> {
    let system = gram(f, n, alpha)?;
    solve_system(f, &system, alpha)
}

/// `p_0..p_{max_n}` from one Gram matrix assembled at `max_n`.
pub fn sweep<S: Scalar>(f: &Series<S>, max_n: usize, alpha: Alpha) -> Result<Vec<ApproximantResult<S>>> {
    sweep_system(f, &gram(f, max_n, alpha)?, alpha)
}

/// Solve every leading principal subsystem of `system`.
pub fn sweep_system<S: Scalar>(
    f: &Series<S>,
    system: &GramSystem<S>,
    alpha: Alpha,
) -> Result<Vec<ApproximantResult<S>>> {
    (0..=system.degree())
        .into_par_iter()
        .map(|n| solve_system(f, &system.principal(n), alpha))
        .collect()
}

/// `d_n^2 = 1 - p_n(0) f(0)`.
pub fn distance<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<S> {
    optimal(f, n, alpha).map(|r| r.distance_sq)
}

/// `p_n(0) = conj(f(0)) det(M_hat) / det(M)`, `M_hat` the lower-right `n x n` block.
pub fn pn0_via_determinants<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<S> {
    let system = gram(f, n, alpha)?;
    pn0_from_system(&system)
}

fn pn0_from_system<S: Scalar>(system: &GramSystem<S>) -> Result<S> {
    let det = S::determinant(&system.matrix)?;
    if det.is_zero() {
        return Err(Error::Degenerate("singular Gram matrix".into()));
    }
    let minor = S::determinant(&system.matrix.lower_right())?;
    Ok(system.f0_conj().clone() * minor / det)
}

/// Six expressions for `d_n^2` that coincide for the exact problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualQuantities<S> {
    /// `||1||^2 - ||p_n f||^2`, the squared distance from 1 to its projection.
    pub distance_sq: S,
    /// `||p_n f - 1||^2_alpha`.
    pub residual_norm_sq: S,
    /// `1 - p_n(0) f(0)`.
    pub gram_lemma: S,
    /// `1 - (M_n^{-1})_{00} |f(0)|^2`, the inverse entry taken from determinants.
    pub inverse_entry: S,
    /// `1 - |f(0)|^2 sum_k |phi_k(0)|^2`.
    pub orthogonal_sum: S,
    /// `1 - K_n(0, 0)`.
    pub kernel_diagonal: S,
}

impl<S: Scalar> EqualQuantities<S> {
    pub fn values(&self) -> [&S; 6] {
        [
            &self.distance_sq,
            &self.residual_norm_sq,
            &self.gram_lemma,
            &self.inverse_entry,
            &self.orthogonal_sum,
            &self.kernel_diagonal,
        ]
    }

    /// Largest `|x - y| / max(1, |x|, |y|)` over all pairs.
    pub fn max_relative_deviation(&self) -> f64 {
        let v: Vec<_> = self.values().iter().map(|x| x.to_c64()).collect();
        let mut worst = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let scale = 1f64.max(v[i].norm()).max(v[j].norm());
                worst = worst.max((v[i] - v[j]).norm() / scale);
            }
        }
        worst
    }

    pub fn all_identical(&self) -> bool {
        let v = self.values();
        v.iter().all(|x| *x == v[0])
    }
}

pub fn equal_quantities<S: Scalar>(f: &Series<S>, n: usize, alpha: Alpha) -> Result<EqualQuantities<S>> {
    let system = gram(f, n, alpha)?;
    let result = solve_system(f, &system, alpha)?;
    let one = S::one();
    let f0 = f.coeff(0);
    let f0_sq = f0.abs_sq();

    let projection_norm = system.weighted_inner(&result.p, &result.p);
    let pn0_det = pn0_from_system(&system)?;
    let inverse_entry = pn0_det / f0.conj();

    let basis = orthopoly::OrthogonalBasis::from_gram(&system)?;
    let orth_sum = basis.phi_at_zero_sq_partial_sums().pop().unwrap_or_else(S::zero);
    let k00 = kernel::kernel_eval_with(&basis, f, &S::zero(), &S::zero()).value;

    Ok(EqualQuantities {
        distance_sq: one.clone() - projection_norm,
        residual_norm_sq: result.residual_norm_sq,
        gram_lemma: result.distance_sq,
        inverse_entry: one.clone() - inverse_entry * f0_sq.clone(),
        orthogonal_sum: one.clone() - f0_sq * orth_sum,
        kernel_diagonal: one - k00,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dalpha::inner;
    use crate::families;
    use crate::scalar::{Exact, Float};
    use num::complex::Complex64;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn ints(c: &[i64]) -> Series<Exact> {
        Series::from_ints(c)
    }

    fn frac(c: &[(i64, i64)]) -> Series<Exact> {
        Series::polynomial(c.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn cesaro_degree_one() {
        let r = optimal(&ints(&[1, -1]), 1, Alpha::int(0)).unwrap();
        assert_eq!(r.p, frac(&[(2, 3), (1, 3)]));
        assert_eq!(r.distance_sq, q(1, 3));
        assert_eq!(r.residual_norm_sq, q(1, 3));
    }

    #[test]
    fn cube_in_weighted_bergman_space() {
        let f = ints(&[1, 3, 3, 1]);
        let a = Alpha::int(-2);
        assert_eq!(optimal(&f, 1, a).unwrap().p, frac(&[(741, 1694), (-775, 1694)]));
        let p2 = optimal(&f, 2, a).unwrap().p;
        assert_eq!(p2, frac(&[(961, 1638), (-1571, 1638), (1032, 1638)]));
    }

    #[test]
    fn constant_function() {
        for n in 0..4 {
            let r = optimal(&ints(&[1]), n, Alpha::int(-1)).unwrap();
            let mut expected = vec![0; n + 1];
            expected[0] = 1;
            assert_eq!(r.p, ints(&expected));
            assert_eq!(r.distance_sq, q(0, 1));
            assert_eq!(r.effective_degree(), 0);
        }
    }

    #[test]
    fn degree_zero_is_the_one_by_one_solve() {
        let f = ints(&[2, -1, 3]);
        let a = Alpha::int(1);
        let r = optimal(&f, 0, a).unwrap();
        let expected = q(2, 1) / crate::dalpha::norm_sq(&f, a).unwrap();
        assert_eq!(r.p.coeff(0), expected);
    }

    #[test]
    fn zero_at_origin_is_rejected() {
        assert_eq!(
            optimal(&ints(&[0, 1]), 2, Alpha::int(0)).unwrap_err(),
            Error::ZeroAtOrigin
        );
        assert_eq!(
            distance(&ints(&[0, 1]), 2, Alpha::int(0)).unwrap_err(),
            Error::ZeroAtOrigin
        );
    }

    #[test]
    fn blaschke_distance() {
        let f = families::blaschke::<Float>(Complex64::new(0.5, 0.0), 2000).unwrap();
        for n in [0, 3, 7] {
            let d = distance(&f, n, Alpha::int(0)).unwrap();
            assert!((d.re - 0.75).abs() < 1e-12, "n={n}: {d}");
        }
    }

    #[test]
    fn determinant_route() {
        assert_eq!(
            pn0_via_determinants(&ints(&[1, -1]), 1, Alpha::int(0)).unwrap(),
            q(2, 3)
        );
        assert_eq!(pn0_via_determinants(&ints(&[1]), 4, Alpha::int(2)).unwrap(), q(1, 1));
        assert_eq!(
            pn0_via_determinants(&ints(&[1, 3, 3, 1]), 1, Alpha::int(-2)).unwrap(),
            q(741, 1694)
        );
    }

    #[test]
    fn six_quantities_exact() {
        let e = equal_quantities(&ints(&[1, -1]), 1, Alpha::int(0)).unwrap();
        assert!(e.all_identical());
        assert_eq!(e.gram_lemma, q(1, 3));
        let e = equal_quantities(&ints(&[1]), 3, Alpha::int(-1)).unwrap();
        assert!(e.all_identical());
        assert_eq!(e.gram_lemma, q(0, 1));
        let e = equal_quantities(&ints(&[1, 3, 3, 1]), 3, Alpha::int(-2)).unwrap();
        assert!(e.all_identical());
    }

    #[test]
    fn six_quantities_blaschke() {
        let f = families::blaschke::<Float>(Complex64::new(0.5, 0.0), 2000).unwrap();
        let e = equal_quantities(&f, 3, Alpha::int(0)).unwrap();
        for v in e.values() {
            assert!((v.re - 0.75).abs() < 1e-12);
        }
        assert!(e.max_relative_deviation() < 1e-9);
    }

    #[test]
    fn sweep_matches_individual_solves() {
        let f = ints(&[2, 1, -1, 3]);
        let a = Alpha::int(-1);
        let all = sweep(&f, 4, a).unwrap();
        for (n, r) in all.iter().enumerate() {
            assert_eq!(r, &optimal(&f, n, a).unwrap());
        }
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

    fn alphas() -> impl Strategy<Value = f64> {
        prop::sample::select(vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn residual_is_orthogonal(f in poly_with_origin(8), n in 0usize..7, a in alphas()) {
            let a = Alpha::new(a).unwrap();
            let r = optimal(&f, n, a).unwrap();
            let residual = &r.p.mul(&f) - &Series::one();
            let scale = 1.0 + crate::dalpha::norm_sq(&f, a).unwrap().re;
            for l in 0..=n {
                let ip = inner(&residual, &f.shift(l), a).unwrap();
                prop_assert!(ip.norm() <= 1e-10 * scale, "l={} ip={}", l, ip);
            }
        }

        #[test]
        fn residual_is_orthogonal_exactly(mut c in prop::collection::vec(-6i64..6, 1..5), n in 0usize..4, a in -2i32..3) {
            if c[0] == 0 { c[0] = 1; }
            let f = ints(&c);
            let a = Alpha::int(a);
            let r = optimal(&f, n, a).unwrap();
            let residual = &r.p.mul(&f) - &Series::one();
            for l in 0..=n {
                prop_assert!(inner(&residual, &f.shift(l), a).unwrap() == q(0, 1));
            }
            prop_assert_eq!(r.p_at_zero.clone(), pn0_via_determinants(&f, n, a).unwrap());
            prop_assert!(equal_quantities(&f, n, a).unwrap().all_identical());
        }

        #[test]
        fn distance_is_monotone(f in poly_with_origin(8), a in alphas()) {
            let a = Alpha::new(a).unwrap();
            let d: Vec<f64> = sweep(&f, 7, a).unwrap().iter().map(|r| r.distance_sq.re).collect();
            for w in d.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12);
            }
            for v in &d {
                prop_assert!(*v >= -1e-12 && *v <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn perturbation_does_not_improve(f in poly_with_origin(8), n in 0usize..6, a in alphas(),
                                         pert in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7)) {
            let a = Alpha::new(a).unwrap();
            let r = optimal(&f, n, a).unwrap();
            let base = r.residual_norm_sq.re;
            let dir = Series::polynomial(pert[..=n].iter().map(|&(re, im)| Complex64::new(re, im)).collect());
            for eps in [1e-3, -1e-3] {
                let perturbed = &r.p + &dir.scale(&Complex64::new(eps, 0.0));
                let res = &perturbed.mul(&f) - &Series::one();
                let value = crate::dalpha::norm_sq(&res, a).unwrap().re;
                prop_assert!(value >= base - 1e-14 * (1.0 + base));
            }
        }

        #[test]
        fn determinant_route_agrees(f in poly_with_origin(8), n in 0usize..7, a in alphas()) {
            let a = Alpha::new(a).unwrap();
            let direct = optimal(&f, n, a).unwrap().p_at_zero;
            let det = pn0_via_determinants(&f, n, a).unwrap();
            prop_assert!((direct - det).norm() <= 1e-10 * direct.norm().max(1e-300));
        }

        #[test]
        fn six_quantities_agree(f in poly_with_origin(8), n in 0usize..7, a in alphas()) {
            let a = Alpha::new(a).unwrap();
            let e = equal_quantities(&f, n, a).unwrap();
            prop_assert!(e.max_relative_deviation() <= 1e-9, "{:?}", e);
        }
    }
}

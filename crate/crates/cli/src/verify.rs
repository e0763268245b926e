//! Golden checks: known closed forms and exact fractions, plus property sweeps.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use optapprox::approximant::{equal_quantities, optimal, sweep_system};
use optapprox::dalpha::gram;
use optapprox::families::{self, cesaro_closed_form, hardy_power_closed_form};
use optapprox::levinson::{levinson_solve, outer_criterion_partial};
use optapprox::roots::{doubling_lengths, first_zero, first_zero_estimate, poly_roots, zero_bound};
use optapprox::{Alpha, Error, Exact, Float, Scalar, Series};

use crate::commands::zero_sweep;
use crate::encode::Encode;
use crate::output::{Format, Report, Table};
use crate::{CliError, DegreeRange};

/// Every check, in the order they run.
pub const CHECKS: &[&str] = &[
    "cube-exact",
    "cesaro",
    "beta",
    "blaschke",
    "euler",
    "bergman-zero",
    "zero-location",
    "levinson",
    "equal-quantities",
    "zero-sweep",
];

pub const ZERO_LOCATION_ALPHAS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
const ZERO_LOCATION_SEED: u64 = 43;
const LEVINSON_SEED: u64 = 61;
const LONG_TRUNCATION: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub case: String,
    pub observed: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
}

impl Check {
    fn new(
        group: &'static str,
        case: impl Into<String>,
        observed: impl Into<String>,
        expected: impl Into<String>,
        tolerance: impl Into<String>,
        pass: bool,
    ) -> Self {
        Check {
            group,
            case: case.into(),
            observed: observed.into(),
            expected: expected.into(),
            tolerance: tolerance.into(),
            pass,
        }
    }

    fn within(group: &'static str, case: impl Into<String>, observed: f64, expected: f64, tol: f64) -> Self {
        let pass = (observed - expected).abs() <= tol;
        Check::new(
            group,
            case,
            format!("{observed}"),
            format!("{expected}"),
            format!("{tol:e}"),
            pass,
        )
    }

    fn at_most(group: &'static str, case: impl Into<String>, observed: f64, tol: f64) -> Self {
        Check::new(
            group,
            case,
            format!("{observed:e}"),
            "0",
            format!("{tol:e}"),
            observed <= tol,
        )
    }

    fn failed(group: &'static str, e: &Error) -> Self {
        Check::new(group, "run", format!("error {}: {e}", e.kind()), "no error", "", false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.group,
            "case": self.case,
            "observed": self.observed,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Shift `f(0)` by `1/1000` when `on`, keeping the truncation metadata.
fn nudge<S: Scalar>(f: Series<S>, on: bool) -> Series<S> {
    if !on {
        return f;
    }
    let exact = f.is_exact_polynomial();
    let mut c = f.into_coeffs();
    c[0] = c[0].clone() + S::from_ratio(1, 1000);
    if exact {
        Series::polynomial(c)
    } else {
        Series::truncated(c)
    }
}

/// Random polynomial of degree at most `max_degree`: `f(0)` real in `[f0_min, 1]`,
/// other coefficients with real and imaginary parts drawn from `lo..1`.
pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize, f0_min: f64, lo: f64) -> Series<Float> {
    let degree = rng.gen_range(0..=max_degree);
    let mut c = vec![Complex64::new(rng.gen_range(f0_min..=1.0), 0.0)];
    c.extend((0..degree).map(|_| Complex64::new(rng.gen_range(lo..1.0), rng.gen_range(lo..1.0))));
    Series::polynomial(c)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn strings(c: &[Exact]) -> String {
    let v: Vec<String> = c.iter().map(Encode::to_cell).collect();
    v.join(", ")
}

fn exact_real(c: &[BigRational]) -> Vec<Exact> {
    c.iter().map(|r| Exact::new(r.clone(), q(0, 1))).collect()
}

fn cube_exact(perturb: bool) -> Result<Vec<Check>, Error> {
    let f = nudge(families::one_plus_z_pow::<Exact>(3)?, perturb);
    let alpha = Alpha::int(-2);
    let scaled = |scale: BigRational, v: &[BigRational]| -> Vec<BigRational> { v.iter().map(|x| &scale * x).collect() };
    let expected = [
        vec![q(741, 1694), q(-775, 1694)],
        scaled(q(961, 1638), &[q(1, 1), q(-1571, 961), q(1032, 961)]),
        scaled(q(571, 826), &[q(1, 1), q(-3427, 1713), q(1182, 571), q(-1862, 1713)]),
    ];
    let mut out = Vec::new();
    for (i, e) in expected.iter().enumerate() {
        let n = i + 1;
        let got = optimal(&f, n, alpha)?.p;
        let e = exact_real(e);
        out.push(Check::new(
            "cube-exact",
            format!("(1+z)^3 alpha=-2 n={n}"),
            strings(got.coeffs()),
            strings(&e),
            "exact",
            got.coeffs() == e.as_slice(),
        ));
    }
    Ok(out)
}

fn cesaro(perturb: bool) -> Result<Vec<Check>, Error> {
    let f = nudge(families::one_minus_z_pow::<Exact>(1)?, perturb);
    let mut closed_ok = 0;
    let mut formula_ok = 0;
    for n in 0..=20usize {
        let got = optimal(&f, n, Alpha::int(0))?.p;
        let formula: Vec<BigRational> = (0..=n as i64).map(|k| q(1, 1) - q(k + 1, n as i64 + 2)).collect();
        if got.coeffs() == exact_real(&formula).as_slice() {
            formula_ok += 1;
        }
        if got == cesaro_closed_form::<Exact>(n, Alpha::int(0))? {
            closed_ok += 1;
        }
    }
    Ok(vec![
        Check::new(
            "cesaro",
            "1-z n=0..20 vs 1-(k+1)/(n+2)",
            format!("{formula_ok}/21 match"),
            "21/21 match",
            "exact",
            formula_ok == 21,
        ),
        Check::new(
            "cesaro",
            "1-z n=0..20 vs closed form",
            format!("{closed_ok}/21 match"),
            "21/21 match",
            "exact",
            closed_ok == 21,
        ),
    ])
}

fn beta(perturb: bool) -> Result<Vec<Check>, Error> {
    let mut ok = 0;
    let mut total = 0;
    let mut first_miss = String::new();
    for big_n in 1..=6u32 {
        let f = nudge(families::one_minus_z_pow::<Exact>(big_n)?, perturb);
        let system = gram(&f, 12, Alpha::int(0))?;
        let direct = sweep_system(&f, &system, Alpha::int(0))?;
        for r in direct {
            total += 1;
            if r.p == hardy_power_closed_form::<Exact>(big_n, r.n)? {
                ok += 1;
            } else if first_miss.is_empty() {
                first_miss = format!(" (first miss N={big_n} n={})", r.n);
            }
        }
    }
    Ok(vec![Check::new(
        "beta",
        "(1-z)^N N<=6 n<=12 vs Gram solve",
        format!("{ok}/{total} match{first_miss}"),
        format!("{total}/{total} match"),
        "exact",
        ok == total,
    )])
}

fn blaschke(perturb: bool) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    for lambda in [Complex64::new(0.5, 0.0), Complex64::new(0.3, -0.4)] {
        let f = nudge(families::blaschke::<Float>(lambda, 10_000)?, perturb);
        let system = gram(&f, 30, Alpha::int(0))?;
        let rows = sweep_system(&f, &system, Alpha::int(0))?;
        let target = Series::constant(lambda.conj());
        let p_err = rows.iter().map(|r| (&r.p - &target).max_modulus()).fold(0.0, f64::max);
        let d_err = rows
            .iter()
            .map(|r| (r.distance_sq - (1.0 - lambda.norm_sqr())).norm())
            .fold(0.0, f64::max);
        out.push(Check::at_most(
            "blaschke",
            format!("lambda={lambda} n<=30 max|p_n - conj(lambda)|"),
            p_err,
            1e-10,
        ));
        out.push(Check::at_most(
            "blaschke",
            format!("lambda={lambda} n<=30 max|d_n^2 - (1-|lambda|^2)|"),
            d_err,
            1e-10,
        ));
    }
    Ok(out)
}

/// `(8 pi^2 - 57) / (8 pi^2 - 54)`.
pub fn euler_value() -> f64 {
    let e = 8.0 * PI * PI;
    (e - 57.0) / (e - 54.0)
}

fn euler(perturb: bool) -> Result<Vec<Check>, Error> {
    let f = nudge(families::eta(1.0, LONG_TRUNCATION)?, perturb);
    let z = match first_zero(&f, Alpha::int(-2))? {
        optapprox::FirstZero::Finite(z) => z,
        optapprox::FirstZero::AtInfinity => return Err(Error::Degenerate("first zero at infinity".into())),
    };
    Ok(vec![
        Check::within(
            "euler",
            "eta=1 alpha=-2 M=1e7 first zero (real part)",
            z.re,
            euler_value(),
            1e-5,
        ),
        Check::at_most(
            "euler",
            "eta=1 alpha=-2 M=1e7 first zero (imaginary part)",
            z.im.abs(),
            1e-12,
        ),
    ])
}

fn bergman_zero(perturb: bool) -> Result<Vec<Check>, Error> {
    let f = nudge(families::eta(0.8, LONG_TRUNCATION)?, perturb);
    let lengths = doubling_lengths(100_000, f.len());
    let e = first_zero_estimate(&f, Alpha::int(-1), &lengths)?;
    let target = 119.0 / 121.0;
    Ok(vec![
        Check::within(
            "bergman-zero",
            "eta=4/5 alpha=-1 M=1e7 first zero",
            e.value().re,
            target,
            1e-2,
        ),
        Check::within(
            "bergman-zero",
            "eta=4/5 alpha=-1 extrapolated first zero",
            e.extrapolated_value.re,
            target,
            1e-2,
        ),
        Check::new(
            "bergman-zero",
            "tail bracket contains 119/121",
            format!("[{}, {}]", e.bracket.0.re, e.bracket.1.re),
            format!("{target}"),
            "bracket",
            e.brackets_real(target),
        ),
        Check::new(
            "bergman-zero",
            format!(
                "monotone over prefixes {}..{}",
                e.lengths[0],
                e.lengths[e.lengths.len() - 1]
            ),
            e.monotone.to_string(),
            "true",
            "",
            e.monotone,
        ),
    ])
}

/// The seeded functions of the zero-location sweep.
pub fn zero_location_functions() -> Vec<Series<Float>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ZERO_LOCATION_SEED);
    (0..200).map(|_| random_polynomial(&mut rng, 10, 0.2, 0.0)).collect()
}

fn zero_location(_perturb: bool) -> Result<Vec<Check>, Error> {
    let fs = zero_location_functions();
    let mut out = Vec::new();
    for alpha in ZERO_LOCATION_ALPHAS {
        let a = Alpha::new(alpha)?;
        let bound = zero_bound(a);
        let mut min_modulus = f64::INFINITY;
        for f in &fs {
            let system = gram(f, 8, a)?;
            for r in sweep_system(f, &system, a)? {
                min_modulus = min_modulus.min(poly_roots(&r.p)?.min_modulus());
            }
        }
        let pass = min_modulus > bound - 1e-9;
        out.push(Check::new(
            "zero-location",
            format!("200 random f alpha={alpha} n<=8 min |zero|"),
            format!("{min_modulus}"),
            format!("> {bound}"),
            "1e-9",
            pass,
        ));
    }
    Ok(out)
}

fn levinson(perturb: bool) -> Result<Vec<Check>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(LEVINSON_SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = random_polynomial(&mut rng, 12, 0.2, -1.0);
        let state = levinson_solve(&f, 20)?;
        let system = gram(&f, 20, Alpha::int(0))?;
        for r in sweep_system(&f, &system, Alpha::int(0))? {
            let lev = Series::polynomial(state.history[r.n].clone());
            worst = worst.max((&lev - &r.p).max_modulus());
        }
    }
    let f = nudge(families::one_minus_z_pow::<Exact>(1)?, perturb);
    let outer = outer_criterion_partial(&f, 20)?;
    let matches = outer
        .partial_products
        .iter()
        .enumerate()
        .filter(|(n, v)| **v == Exact::from_ratio(*n as i64 + 3, 2 * (*n as i64 + 2)))
        .count();
    Ok(vec![
        Check::at_most(
            "levinson",
            "100 random f deg<=12 n<=20 max coefficient deviation",
            worst,
            1e-9,
        ),
        Check::new(
            "levinson",
            "1-z partial products vs (n+3)/(2(n+2))",
            format!("{matches}/20 match"),
            "20/20 match",
            "exact",
            matches == 20,
        ),
        Check::new(
            "levinson",
            "1-z outer target",
            outer.target.to_cell(),
            "1/2",
            "exact",
            outer.target == Exact::from_ratio(1, 2),
        ),
    ])
}

fn equal_quantities_check(_perturb: bool) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    let exact: [(&str, Series<Exact>, i32); 4] = [
        ("(1+z)^3", families::one_plus_z_pow(3)?, -2),
        ("1-z", families::one_minus_z_pow(1)?, 0),
        ("(1-z)^2", families::one_minus_z_pow(2)?, -1),
        ("(1-z)^3", families::one_minus_z_pow(3)?, 1),
    ];
    for (name, f, alpha) in &exact {
        let mut identical = 0;
        for n in 0..=10 {
            if equal_quantities(f, n, Alpha::int(*alpha))?.all_identical() {
                identical += 1;
            }
        }
        out.push(Check::new(
            "equal-quantities",
            format!("{name} alpha={alpha} n<=10 (exact)"),
            format!("{identical}/11 identical"),
            "11/11 identical",
            "exact",
            identical == 11,
        ));
    }
    let float: [(&str, Series<Float>, f64); 3] = [
        (
            "blaschke(1/2)",
            families::blaschke(Complex64::new(0.5, 0.0), 10_000)?,
            0.0,
        ),
        ("eta=1 M=2000", families::eta(1.0, 2000)?, -2.0),
        ("eta=4/5 M=2000", families::eta(0.8, 2000)?, -1.0),
    ];
    for (name, f, alpha) in &float {
        let mut worst = 0.0f64;
        for n in 0..=10 {
            worst = worst.max(equal_quantities(f, n, Alpha::new(*alpha)?)?.max_relative_deviation());
        }
        out.push(Check::at_most(
            "equal-quantities",
            format!("{name} alpha={alpha} n<=10 max relative spread"),
            worst,
            1e-9,
        ));
    }
    Ok(out)
}

/// Row count, moduli and real negative roots of the zero sweep of `1 - z`.
pub fn zero_sweep_summary(sets: &[(usize, optapprox::ZeroSet)]) -> (usize, f64, bool) {
    let rows = sets.iter().map(|(_, z)| z.roots.len()).sum();
    let min_modulus = sets.iter().map(|(_, z)| z.min_modulus()).fold(f64::INFINITY, f64::min);
    let parity_ok = sets.iter().all(|(n, z)| {
        let negative_real = z.roots.iter().filter(|r| r.im == 0.0 && r.re < 0.0).count();
        negative_real == n % 2
    });
    (rows, min_modulus, parity_ok)
}

fn zero_sweep_check(perturb: bool) -> Result<Vec<Check>, Error> {
    let f = nudge(families::one_minus_z_pow::<Float>(1)?, perturb);
    let sets = zero_sweep(&f, Alpha::int(0), DegreeRange { start: 0, end: 50 }).map_err(|e| match e {
        CliError::Library(e) => e,
        other => Error::Degenerate(other.to_string()),
    })?;
    let (rows, min_modulus, parity_ok) = zero_sweep_summary(&sets);
    let expected_rows: usize = (1..=50).sum();
    Ok(vec![
        Check::new(
            "zero-sweep",
            "1-z alpha=0 n=0..50 root rows",
            rows.to_string(),
            expected_rows.to_string(),
            "exact",
            rows == expected_rows,
        ),
        Check::new(
            "zero-sweep",
            "min modulus",
            format!("{min_modulus}"),
            "> 1",
            "",
            min_modulus > 1.0,
        ),
        Check::new(
            "zero-sweep",
            "one real negative root for odd n, none for even n",
            parity_ok.to_string(),
            "true",
            "",
            parity_ok,
        ),
    ])
}

fn run_group(name: &str, perturb: bool) -> Vec<Check> {
    let (group, result) = match name {
        "cube-exact" => ("cube-exact", cube_exact(perturb)),
        "cesaro" => ("cesaro", cesaro(perturb)),
        "beta" => ("beta", beta(perturb)),
        "blaschke" => ("blaschke", blaschke(perturb)),
        "euler" => ("euler", euler(perturb)),
        "bergman-zero" => ("bergman-zero", bergman_zero(perturb)),
        "zero-location" => ("zero-location", zero_location(perturb)),
        "levinson" => ("levinson", levinson(perturb)),
        "equal-quantities" => ("equal-quantities", equal_quantities_check(perturb)),
        "zero-sweep" => ("zero-sweep", zero_sweep_check(perturb)),
        _ => unreachable!("names are validated first"),
    };
    result.unwrap_or_else(|e| vec![Check::failed(group, &e)])
}

/// Run the selected checks (all when `only` is empty).
pub fn run(only: &[String], perturb: bool) -> Result<Vec<Check>, CliError> {
    for name in only {
        if !CHECKS.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown check {name:?}; available: {}",
                CHECKS.join(", ")
            )));
        }
    }
    let selected: Vec<&str> = CHECKS
        .iter()
        .copied()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c))
        .collect();
    Ok(selected.into_iter().flat_map(|name| run_group(name, perturb)).collect())
}

pub fn report(only: &[String], perturb: bool) -> Result<Report, CliError> {
    let checks = run(only, perturb)?;
    let pass = checks.iter().all(|c| c.pass);
    let mut table = Table::new(&["check", "case", "observed", "expected", "tolerance", "result"]);
    for c in &checks {
        table.push(vec![
            c.group.to_string(),
            c.case.clone(),
            c.observed.clone(),
            c.expected.clone(),
            c.tolerance.clone(),
            if c.pass { "pass" } else { "FAIL" }.to_string(),
        ]);
    }
    let json = json!({ "pass": pass, "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>() });
    Ok(Report {
        json,
        table: Some(table),
        default_format: Format::Text,
        success: pass,
    })
}

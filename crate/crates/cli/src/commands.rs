//! One runner per subcommand, generic over the arithmetic backend.

use num::complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use optapprox::approximant::{optimal, sweep_system};
use optapprox::dalpha::{gram, gram_any};
use optapprox::kernel::{cyclicity_report, extremal_value, kernel_eval_with, kernel_section, mccarthy_reference};
use optapprox::levinson::{levinson_solve, outer_criterion_partial, reflection_coefficients};
use optapprox::orthopoly::{szego_identity_residual, OrthogonalBasis};
use optapprox::roots::{doubling_lengths, first_zero, first_zero_estimate, poly_roots};
use optapprox::{
    Alpha, ApproximantResult, Backend, Error, Exact, FirstZero, Float, FunctionSpec, Scalar, Series, ZeroSet,
};

use crate::encode::{self, Encode};
use crate::output::{Format, Report, Table};
use crate::{spec, CliError, Command, DegreeRange, FunctionArgs};

/// Run `$run::<S>(args..)` with `S` picked from a [`Backend`].
macro_rules! dispatch {
    ($backend:expr, $run:ident($($arg:expr),* $(,)?)) => {
        match $backend {
            Backend::Exact => $run::<Exact>($($arg),*),
            Backend::Float => $run::<Float>($($arg),*),
        }
    };
}

/// Validated function, exponent and backend of a command.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: FunctionSpec,
    pub alpha: Alpha,
    pub backend: Backend,
}

impl Problem {
    pub fn new(spec: FunctionSpec, alpha: f64, backend: Backend) -> Result<Self, CliError> {
        let alpha = Alpha::new(alpha)?;
        if backend == Backend::Exact {
            if !spec.is_rational() {
                return Err(Error::BackendMismatch(format!(
                    "{} is an infinite series; use the float backend",
                    spec.name()
                ))
                .into());
            }
            if alpha.as_integer().is_none() {
                return Err(Error::BackendMismatch(format!(
                    "exact backend needs an integer alpha, got {}",
                    alpha.value()
                ))
                .into());
            }
        }
        Ok(Problem { spec, alpha, backend })
    }

    fn from_args(args: &FunctionArgs) -> Result<Self, CliError> {
        Problem::new(spec::parse_spec(&args.f)?, args.alpha, args.backend.into())
    }

    fn header(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("alpha".into(), encode::float(self.alpha.value()));
        m.insert("backend".into(), Value::String(self.backend.name().into()));
        m
    }
}

fn with_header(p: &Problem, body: Value) -> Value {
    let mut m = p.header();
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Approximant(a) => {
            let p = Problem::from_args(&a.f)?;
            dispatch!(p.backend, approximant(&p, a.range(), a.n.is_some()))
        }
        Command::Zeros(a) => {
            let p = Problem::from_args(&a.f)?;
            dispatch!(p.backend, zeros(&p, a.range()))
        }
        Command::Orthopoly { f, n } => {
            let p = Problem::from_args(f)?;
            dispatch!(p.backend, orthopoly(&p, *n))
        }
        Command::Kernel { f, n, z, w } => {
            let p = Problem::from_args(f)?;
            let (z, w) = (spec::parse_point(z)?, spec::parse_point(w)?);
            dispatch!(p.backend, kernel(&p, *n, &z, &w))
        }
        Command::Cyclicity { f, max_n } => {
            let p = Problem::from_args(f)?;
            dispatch!(p.backend, cyclicity(&p, *max_n))
        }
        Command::Levinson { f, n } => {
            let p = Problem::from_args(f)?;
            dispatch!(p.backend, levinson(&p, *n))
        }
        Command::FirstZero { f, start } => {
            let p = Problem::from_args(f)?;
            dispatch!(p.backend, first_zero_report(&p, *start))
        }
        Command::Verify(v) => crate::verify::report(&v.only, v.inject_perturbation),
    }
}

/// Optimal approximants for every degree in `range`, in ascending order.
pub fn approximants<S: Scalar>(
    f: &Series<S>,
    alpha: Alpha,
    range: DegreeRange,
) -> Result<Vec<ApproximantResult<S>>, CliError> {
    if range.len() == 1 {
        return Ok(vec![optimal(f, range.start, alpha)?]);
    }
    let system = gram(f, range.end, alpha)?;
    let mut all = sweep_system(f, &system, alpha)?;
    all.retain(|r| range.contains(r.n));
    Ok(all)
}

/// Zero sets of `p_n` for every degree in `range`, in ascending order.
pub fn zero_sweep<S: Scalar>(
    f: &Series<S>,
    alpha: Alpha,
    range: DegreeRange,
) -> Result<Vec<(usize, ZeroSet)>, CliError> {
    let results = approximants(f, alpha, range)?;
    let sets: Vec<ZeroSet> = results.par_iter().map(|r| poly_roots(&r.p)).collect::<Result<_, _>>()?;
    Ok(results.iter().map(|r| r.n).zip(sets).collect())
}

fn roots_json(z: &ZeroSet) -> Value {
    Value::Array(z.roots.iter().map(|&r| encode::root(r)).collect())
}

fn approximant<S: Encode>(p: &Problem, range: DegreeRange, single: bool) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let results = approximants(&f, p.alpha, range)?;
    let sets: Vec<ZeroSet> = results.par_iter().map(|r| poly_roots(&r.p)).collect::<Result<_, _>>()?;
    let mut table = Table::new(&["n", "k", "coefficient"]);
    let objects: Vec<Value> = results
        .iter()
        .zip(&sets)
        .map(|(r, z)| {
            for (k, c) in r.p.coeffs().iter().enumerate() {
                table.push(vec![r.n.to_string(), k.to_string(), c.to_cell()]);
            }
            with_header(
                p,
                json!({
                    "n": r.n,
                    "effective_degree": r.effective_degree(),
                    "coefficients": encode::series(&r.p),
                    "p0": r.p_at_zero.to_json(),
                    "distance_sq": r.distance_sq.to_json(),
                    "zeros": roots_json(z),
                    "tail_error_bound": encode::float(r.tail_error_bound),
                }),
            )
        })
        .collect();
    let json = if single {
        objects.into_iter().next().expect("one degree")
    } else {
        Value::Array(objects)
    };
    Ok(Report::json(json).with_table(table))
}

fn zeros<S: Encode>(p: &Problem, range: DegreeRange) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let sweep = zero_sweep(&f, p.alpha, range)?;
    let mut table = Table::new(&["n", "root_index", "re", "im", "modulus"]);
    let mut groups = Vec::with_capacity(sweep.len());
    for (n, z) in &sweep {
        for (i, r) in z.roots.iter().enumerate() {
            table.push(vec![
                n.to_string(),
                i.to_string(),
                r.re.to_string(),
                r.im.to_string(),
                r.norm().to_string(),
            ]);
        }
        groups.push(json!({ "n": n, "effective_degree": z.effective_degree, "roots": roots_json(z) }));
    }
    let json = with_header(p, json!({ "sweep": groups }));
    Ok(Report {
        default_format: Format::Csv,
        ..Report::json(json).with_table(table)
    })
}

fn orthopoly<S: Encode>(p: &Problem, n: usize) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let system = gram_any(&f, n, p.alpha)?;
    let b = OrthogonalBasis::from_gram(&system)?;
    let f0 = f.coeff(0);
    let approximant = if f0.is_negligible() {
        Value::Null
    } else {
        encode::series(&b.approximant(&f0))
    };
    let szego = if p.alpha.is_hardy() {
        encode::float(szego_identity_residual(&f, n, p.alpha)?)
    } else {
        Value::Null
    };
    let mut table = Table::new(&["k", "norm_sq", "leading_coefficient", "phi_at_zero_sq_partial_sum"]);
    let sums = b.phi_at_zero_sq_partial_sums();
    for (k, sum) in sums.iter().enumerate() {
        table.push(vec![
            k.to_string(),
            b.norm_sq(k).to_cell(),
            b.leading_coefficient(k).to_string(),
            sum.to_cell(),
        ]);
    }
    let json = json!({
        "n": n,
        "monic": (0..=n).map(|k| encode::series(b.monic(k))).collect::<Vec<_>>(),
        "norms_sq": (0..=n).map(|k| b.norm_sq(k).to_json()).collect::<Vec<_>>(),
        "leading_coefficients": (0..=n).map(|k| encode::float(b.leading_coefficient(k))).collect::<Vec<_>>(),
        "phis": b.phis().iter().map(encode::series).collect::<Vec<_>>(),
        "phi_at_zero_sq_partial_sums": encode::list(&sums),
        "orthonormality_residual": encode::float(b.orthonormality_residual(&system)),
        "approximant": approximant,
        "szego_residual": szego,
    });
    Ok(Report::json(with_header(p, json)).with_table(table))
}

fn kernel<S: Encode>(p: &Problem, n: usize, z: &Exact, w: &Exact) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let (zs, ws) = (S::from_rational(&z.re, &z.im), S::from_rational(&w.re, &w.im));
    let system = gram_any(&f, n, p.alpha)?;
    let b = OrthogonalBasis::from_gram(&system)?;
    let k = kernel_eval_with(&b, &f, &zs, &ws);
    let section = kernel_section(&b, &f, &S::zero());
    let extremal = if f.coeff(0).is_negligible() {
        Value::Null
    } else {
        let e = extremal_value(&f, n, p.alpha)?;
        json!({ "value": encode::float(e.value), "g_norm": encode::float(e.g_norm), "g_at_zero": encode::float(e.g_at_zero) })
    };
    // Reference limit only exists for alpha < 0 and points inside the disk.
    let mccarthy = if p.alpha.value() < 0.0 {
        mccarthy_reference(&f, p.alpha, zs.to_c64(), ws.to_c64()).map_or(Value::Null, encode::complex)
    } else {
        Value::Null
    };
    let json = json!({
        "n": n,
        "z": k.z.to_json(),
        "w": k.w.to_json(),
        "value": k.value.to_json(),
        "kernel_at_zero": encode::series(&section),
        "extremal": extremal,
        "mccarthy": mccarthy,
    });
    Ok(Report::json(with_header(p, json)))
}

fn cyclicity<S: Encode>(p: &Problem, max_n: usize) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let r = cyclicity_report(&f, p.alpha, max_n)?;
    let mut table = Table::new(&["n", "p0", "partial_sum", "distance_sq"]);
    for n in 0..=max_n {
        table.push(vec![
            n.to_string(),
            r.pn_at_zero[n].to_cell(),
            r.partial_sums[n].to_cell(),
            r.distances[n].to_cell(),
        ]);
    }
    let json = json!({
        "max_n": max_n,
        "target": r.target.to_json(),
        "pn_at_zero": encode::list(&r.pn_at_zero),
        "partial_sums": encode::list(&r.partial_sums),
        "distances": encode::list(&r.distances),
        "trend": r.trend.as_str(),
        "chain_residual": encode::float(r.chain_residual()),
    });
    Ok(Report::json(with_header(p, json)).with_table(table))
}

fn levinson<S: Encode>(p: &Problem, n: usize) -> Result<Report, CliError> {
    if !p.alpha.is_hardy() {
        return Err(Error::UnsupportedAlpha {
            alpha: p.alpha.value(),
            operation: "levinson",
        }
        .into());
    }
    let f = p.spec.realize::<S>()?;
    let state = levinson_solve(&f, n)?;
    let reflections = reflection_coefficients(&state)?;
    let outer = outer_criterion_partial(&f, n)?;
    let mut table = Table::new(&["k", "gamma", "partial_product", "pn_at_zero"]);
    for k in 0..n {
        table.push(vec![
            k.to_string(),
            state.gammas[k].to_cell(),
            outer.partial_products[k].to_cell(),
            outer.pn_at_zero[k].to_cell(),
        ]);
    }
    let json = json!({
        "n": n,
        "coefficients": encode::list(&state.coeffs),
        "gammas": encode::list(&state.gammas),
        "reflection_coefficients": encode::list(&reflections),
        "autocorrelation": encode::list(&state.autocorr),
        "outer_criterion": {
            "partial_products": encode::list(&outer.partial_products),
            "target": outer.target.to_json(),
            "modulus_target": outer.modulus_target.to_json(),
            "pn_at_zero": encode::list(&outer.pn_at_zero),
        },
        "tail_error_bound": encode::float(state.tail_error_bound),
    });
    Ok(Report::json(with_header(p, json)).with_table(table))
}

fn first_zero_report<S: Encode>(p: &Problem, start: usize) -> Result<Report, CliError> {
    let f = p.spec.realize::<S>()?;
    let value = match first_zero(&f, p.alpha)? {
        FirstZero::Finite(v) => v.to_json(),
        FirstZero::AtInfinity => Value::String("infinity".into()),
    };
    let estimate = if f.is_exact_polynomial() {
        Value::Null
    } else {
        let fc: Series<Complex64> = f.map(|c| c.to_c64());
        let lengths = doubling_lengths(start.clamp(1, fc.len()), fc.len());
        let e = first_zero_estimate(&fc, p.alpha, &lengths)?;
        json!({
            "lengths": e.lengths,
            "values": e.values.iter().map(|&v| encode::complex(v)).collect::<Vec<_>>(),
            "tail": { "difference": encode::float(e.tail.difference), "extrapolated": encode::float(e.tail.extrapolated) },
            "extrapolated_value": encode::complex(e.extrapolated_value),
            "bracket": [encode::complex(e.bracket.0), encode::complex(e.bracket.1)],
            "monotone": e.monotone,
        })
    };
    let json = json!({ "truncation_degree": f.truncation_degree(), "value": value, "estimate": estimate });
    Ok(Report::json(with_header(p, json)))
}

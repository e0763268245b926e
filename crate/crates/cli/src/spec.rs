//! JSON form of [`FunctionSpec`] and of complex command-line values.
//!
//! ```text
//! {"family": "one_minus_z_pow", "params": {"N": 2}}
//! {"family": "blaschke", "params": {"lambda": {"re": 0.5, "im": 0}, "truncation": 10000}}
//! {"family": "eta_family", "params": {"eta": "4/5", "truncation": 1000000}}
//! {"coefficients": ["1", "-1/2", {"re": 0, "im": "3/4"}]}
//! ```
//!
//! Numbers are read from their decimal text, so `0.1` means exactly `1/10`.

use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{ToPrimitive, Zero};
use num::BigRational;
use serde_json::Value;

use optapprox::families::{DEFAULT_BLASCHKE_TRUNCATION, DEFAULT_ETA_TRUNCATION};
use optapprox::{Error, Exact, FunctionSpec, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::SpecValidation(msg.into())
}

/// Exact value of a decimal (`-1.25e-3`) or fraction (`-5/4`) literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.contains('/') {
        return BigRational::from_str(t).map_err(|_| invalid(format!("bad fraction {t:?}")));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..]
                .parse()
                .map_err(|_| invalid(format!("bad exponent in {t:?}")))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all = format!("{int_part}{frac_part}");
    if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid(format!("bad number {t:?}")));
    }
    let numer = BigInt::from_str(&all).map_err(|_| invalid(format!("bad number {t:?}")))?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return Err(invalid(format!("exponent out of range in {t:?}")));
    }
    let ten = BigInt::from(10);
    let pow = num::pow(ten, scale.unsigned_abs() as usize);
    let mut r = if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

fn rational_of(v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => Err(invalid(format!("{what} must be a number or a string"))),
    }
}

/// A complex value: a number, a string, or `{"re": .., "im": ..}`.
pub fn exact_complex(v: &Value, what: &str) -> Result<Exact> {
    match v {
        Value::Object(map) => {
            for key in map.keys() {
                if key != "re" && key != "im" {
                    return Err(invalid(format!("unknown key {key:?} in {what}")));
                }
            }
            let part = |k: &str| match map.get(k) {
                Some(x) => rational_of(x, what),
                None => Ok(BigRational::zero()),
            };
            Ok(Exact::new(part("re")?, part("im")?))
        }
        other => Ok(Exact::new(rational_of(other, what)?, BigRational::zero())),
    }
}

pub fn float_complex(v: &Value, what: &str) -> Result<Complex64> {
    let e = exact_complex(v, what)?;
    let re = e.re.to_f64().unwrap_or(f64::NAN);
    let im = e.im.to_f64().unwrap_or(f64::NAN);
    if !(re.is_finite() && im.is_finite()) {
        return Err(invalid(format!("{what} is out of range")));
    }
    Ok(Complex64::new(re, im))
}

/// A point given on the command line, either a JSON value or `re,im`.
pub fn parse_point(text: &str) -> Result<Exact> {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return exact_complex(&v, "point");
    }
    match text.split_once(',') {
        Some((re, im)) => Ok(Exact::new(parse_rational(re)?, parse_rational(im)?)),
        None => Ok(Exact::new(parse_rational(text)?, BigRational::zero())),
    }
}

fn integer_param(params: &serde_json::Map<String, Value>, key: &str) -> Result<Option<u64>> {
    match params.get(key) {
        None => Ok(None),
        Some(Value::Number(n)) => n
            .as_u64()
            .map(Some)
            .ok_or_else(|| invalid(format!("{key} must be a nonnegative integer"))),
        Some(_) => Err(invalid(format!("{key} must be a nonnegative integer"))),
    }
}

fn check_keys(params: &serde_json::Map<String, Value>, allowed: &[&str], family: &str) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(invalid(format!("unknown parameter {k:?} for {family}"))),
        None => Ok(()),
    }
}

fn coefficients(v: &Value) -> Result<Vec<Exact>> {
    let arr = v.as_array().ok_or_else(|| invalid("coefficients must be an array"))?;
    arr.iter()
        .enumerate()
        .map(|(k, c)| exact_complex(c, &format!("coefficient {k}")))
        .collect()
}

pub fn parse_spec(text: &str) -> Result<FunctionSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("function spec is not valid JSON: {e}")))?;
    spec_from_value(&v)
}

pub fn spec_from_value(v: &Value) -> Result<FunctionSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("function spec must be a JSON object"))?;
    if let Some(c) = obj.get("coefficients") {
        if obj.len() != 1 {
            return Err(invalid("a coefficient spec takes no other keys"));
        }
        let spec = FunctionSpec::Explicit {
            coeffs: coefficients(c)?,
        };
        spec.validate()?;
        return Ok(spec);
    }
    let family = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("function spec needs \"family\" or \"coefficients\""))?;
    let empty = serde_json::Map::new();
    let params = match obj.get("params") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(invalid("params must be an object")),
    };
    let spec = match family {
        "one_minus_z_pow" | "one_plus_z_pow" => {
            check_keys(params, &["N"], family)?;
            let n = integer_param(params, "N")?.ok_or_else(|| invalid(format!("{family} needs N")))?;
            let n = u32::try_from(n).map_err(|_| invalid("N is too large"))?;
            if family == "one_minus_z_pow" {
                FunctionSpec::OneMinusZPow { n }
            } else {
                FunctionSpec::OnePlusZPow { n }
            }
        }
        "blaschke" => {
            check_keys(params, &["lambda", "truncation"], family)?;
            let lambda = params.get("lambda").ok_or_else(|| invalid("blaschke needs lambda"))?;
            FunctionSpec::Blaschke {
                lambda: float_complex(lambda, "lambda")?,
                truncation: integer_param(params, "truncation")?.map_or(DEFAULT_BLASCHKE_TRUNCATION, |m| m as usize),
            }
        }
        "eta_family" => {
            check_keys(params, &["eta", "truncation"], family)?;
            let eta = params.get("eta").ok_or_else(|| invalid("eta_family needs eta"))?;
            let eta = rational_of(eta, "eta")?.to_f64().unwrap_or(f64::NAN);
            FunctionSpec::Eta {
                eta,
                truncation: integer_param(params, "truncation")?.map_or(DEFAULT_ETA_TRUNCATION, |m| m as usize),
            }
        }
        "explicit" => {
            check_keys(params, &["coefficients"], family)?;
            let c = params
                .get("coefficients")
                .ok_or_else(|| invalid("explicit needs coefficients"))?;
            FunctionSpec::Explicit {
                coeffs: coefficients(c)?,
            }
        }
        other => return Err(invalid(format!("unknown family {other:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

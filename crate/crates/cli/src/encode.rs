//! Serialisation of scalars: rationals as `"p/q"` strings, floats as
//! shortest round-trip numbers, complex values as `{"re": .., "im": ..}`.

use num::complex::Complex64;
use num::traits::Zero;
use serde_json::{json, Value};

use optapprox::{Exact, Float, Scalar, Series};

pub trait Encode: Scalar {
    fn to_json(&self) -> Value;
    /// Real and imaginary parts as text, for CSV.
    fn to_parts(&self) -> (String, String);

    /// Single CSV cell: the real part alone when the value is real, else `re+imi`.
    fn to_cell(&self) -> String {
        let (re, im) = self.to_parts();
        if self.is_real() {
            re
        } else if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl Encode for Exact {
    fn to_json(&self) -> Value {
        if self.im.is_zero() {
            Value::String(self.re.to_string())
        } else {
            json!({ "re": self.re.to_string(), "im": self.im.to_string() })
        }
    }

    fn to_parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
}

impl Encode for Float {
    fn to_json(&self) -> Value {
        if self.im == 0.0 {
            float(self.re)
        } else {
            complex(*self)
        }
    }

    fn to_parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(x.to_string()), Value::Number)
}

/// Always an object, for quantities that are complex in general (roots).
pub fn complex(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}

pub fn root(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im), "modulus": float(z.norm()) })
}

pub fn series<S: Encode>(p: &Series<S>) -> Value {
    Value::Array(p.coeffs().iter().map(Encode::to_json).collect())
}

pub fn list<S: Encode>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Encode::to_json).collect())
}

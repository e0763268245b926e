//! Optimal polynomial approximants to `1/f` in the Dirichlet-type spaces
//! `D_alpha`, where `||f||^2_alpha = sum_k (k+1)^alpha |a_k|^2`.
//!
//! The optimal approximant `p_n` minimises `||p f - 1||_alpha` over
//! polynomials of degree at most `n`. Besides the direct Gram solve the crate
//! computes the orthogonal polynomials of the weighted space `D_{alpha,f}`,
//! the reproducing kernels of `f P_n`, the Levinson recursion of the Hardy
//! case (`alpha = 0`), zero sets and cyclicity diagnostics. Every routine is
//! generic over [`Scalar`], with an exact rational backend ([`Exact`]) and a
//! double precision backend ([`Float`]).

pub mod approximant;
pub mod dalpha;
pub mod error;
pub mod families;
pub mod kernel;
pub mod levinson;
pub mod linalg;
pub mod orthopoly;
pub mod roots;
pub mod scalar;
pub mod series;

pub use approximant::{
    distance, equal_quantities, optimal, pn0_via_determinants, sweep, ApproximantResult, EqualQuantities,
};
pub use dalpha::{gram, inner, norm_sq, shifted_inner, weighted_inner, GramSystem, TailEstimate};
pub use error::{Error, Result};
pub use families::FunctionSpec;
pub use kernel::{CyclicityReport, Extremal, KernelEvaluation, Trend};
pub use levinson::{LevinsonState, OuterCriterion};
pub use orthopoly::OrthogonalBasis;
pub use roots::{FirstZero, FirstZeroEstimate, ZeroBoundCheck, ZeroSet};
pub use scalar::{Alpha, Backend, Exact, Float, Scalar, DEGREE_EPSILON};
pub use series::Series;

//! Dense Hermitian solvers: fraction-free elimination for the exact backend,
//! Cholesky with a condition estimate for the float backend.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Float solves refuse matrices whose 1-norm condition number exceeds this.
pub const MAX_CONDITION: f64 = 1e14;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut entry: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(entry(i, j));
            }
        }
        Matrix { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Leading `k x k` block.
    pub fn principal(&self, k: usize) -> Self {
        assert!(k <= self.dim);
        Matrix::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// The block obtained by deleting the first row and column.
    pub fn lower_right(&self) -> Self {
        let k = self.dim.saturating_sub(1);
        Matrix::from_fn(k, |i, j| self.get(i + 1, j + 1).clone())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let a = self.get(i, j);
                let b = self.get(j, i).conj();
                crate::scalar::close(a, &b, tol)
            })
        })
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

/// Bareiss fraction-free elimination on `[m | rhs]`.
///
/// Returns the solution and `det(m)`. Row swaps are only needed when a
/// leading minor vanishes, which cannot happen for a positive definite `m`,
/// but they are handled so the routine works for any nonsingular input.
pub fn bareiss_solve<S: Scalar>(m: &Matrix<S>, rhs: &[S]) -> Result<(Vec<S>, S)> {
    let n = m.dim();
    assert_eq!(rhs.len(), n, "right-hand side length must match the matrix");
    if n == 0 {
        return Ok((Vec::new(), S::one()));
    }
    let width = n + 1;
    let mut a: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();

    let mut prev = S::one();
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or_else(|| Error::Degenerate("singular matrix in exact elimination".into()))?;
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone()) / prev.clone();
                a[i][j] = v;
            }
            a[i][k] = S::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if negate { -prev } else { prev };

    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in i + 1..n {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    Ok((x, det))
}

/// Determinant via Bareiss elimination (exact for rational input).
pub fn bareiss_determinant<S: Scalar>(m: &Matrix<S>) -> S {
    let zeros = vec![S::zero(); m.dim()];
    match bareiss_solve(m, &zeros) {
        Ok((_, det)) => det,
        Err(_) => S::zero(),
    }
}

/// Lower-triangular factor `l` with `m = l l^H`.
pub fn cholesky(m: &Matrix<Complex64>) -> Result<Matrix<Complex64>> {
    let n = m.dim();
    let mut l = Matrix::<Complex64>::zeros(n);
    for j in 0..n {
        let mut d = m.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::IllConditioned {
                estimate: f64::INFINITY,
            });
        }
        let ljj = d.sqrt();
        l.set(j, j, Complex64::new(ljj, 0.0));
        for i in j + 1..n {
            let mut s = *m.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

fn cholesky_apply(l: &Matrix<Complex64>, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.dim();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l.get(i, k) * y[k];
            y[i] -= t;
        }
        y[i] /= l.get(i, i);
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let t = l.get(k, i).conj() * y[k];
            y[i] -= t;
        }
        y[i] /= l.get(i, i);
    }
    y
}

fn one_norm(m: &Matrix<Complex64>) -> f64 {
    (0..m.dim())
        .map(|j| (0..m.dim()).map(|i| m.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `||m||_1 ||m^{-1}||_1` computed from an existing Cholesky factor.
pub fn condition_number(m: &Matrix<Complex64>, l: &Matrix<Complex64>) -> f64 {
    let n = m.dim();
    let mut inv_norm = 0.0f64;
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = cholesky_apply(l, &e);
        inv_norm = inv_norm.max(col.iter().map(|v| v.norm()).sum());
    }
    one_norm(m) * inv_norm
}

/// Solve a Hermitian positive definite system, refusing ill-conditioned input.
pub fn cholesky_solve(m: &Matrix<Complex64>, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    assert_eq!(rhs.len(), m.dim(), "right-hand side length must match the matrix");
    let l = cholesky(m)?;
    let estimate = condition_number(m, &l);
    if estimate.is_nan() || estimate > MAX_CONDITION {
        return Err(Error::IllConditioned { estimate });
    }
    Ok(cholesky_apply(&l, rhs))
}

pub fn cholesky_determinant(m: &Matrix<Complex64>) -> Result<Complex64> {
    let l = cholesky(m)?;
    let det = (0..m.dim()).map(|i| l.get(i, i).re.powi(2)).product::<f64>();
    Ok(Complex64::new(det, 0.0))
}

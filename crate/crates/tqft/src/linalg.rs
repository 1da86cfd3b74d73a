//! Exact rational scalars and dense matrices.
//!
//! Everything downstream (Frobenius evaluation, degroupoidification,
//! manifold invariants) works over `Q`, so all comparisons in the test
//! suites are exact equalities. Kronecker products use the convention
//! that the leftmost tensor factor is the slowest-varying index.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parse "p/q" or a bare integer "p".
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let mk_err = || Error::BadInput(format!("malformed rational {s:?}, expected \"p\" or \"p/q\""));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| mk_err())?;
            let den: BigInt = den.trim().parse().map_err(|_| mk_err())?;
            if den.is_zero() {
                return Err(Error::BadInput(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(Q::from_integer(num))
        }
    }
}

/// Render as "p/q", omitting "/1".
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product, `self` slowest-varying.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..rhs.rows {
                    for r in 0..rhs.cols {
                        let b = rhs.get(p, r);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + p, j * rhs.cols + r, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &p;
                a.set(col, j, v);
                let v = inv.get(col, j) / &p;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    /// n-fold Kronecker power; the 0th power is the 1x1 identity.
    pub fn kron_pow(&self, n: usize) -> Matrix {
        let mut out = Matrix::identity(1);
        for _ in 0..n {
            out = out.kron(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(self.get(i, j))).collect();
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

/// A linear map between tensor powers of a fixed state space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    pub dim: usize,
    pub in_arity: usize,
    pub out_arity: usize,
    pub mat: Matrix,
}

impl LinearMap {
    pub fn new(dim: usize, in_arity: usize, out_arity: usize, mat: Matrix) -> Self {
        assert_eq!(mat.rows(), dim.pow(out_arity as u32), "row count is not dim^out");
        assert_eq!(mat.cols(), dim.pow(in_arity as u32), "column count is not dim^in");
        LinearMap { dim, in_arity, out_arity, mat }
    }

    /// The unique entry of a 1x1 map (a closed-surface scalar).
    pub fn scalar(&self) -> Option<&Q> {
        if self.mat.rows() == 1 && self.mat.cols() == 1 {
            Some(self.mat.get(0, 0))
        } else {
            None
        }
    }
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

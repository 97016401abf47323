//! Exact integer and rational matrices.
//!
//! Entries are arbitrary precision throughout; nothing in here can overflow.
//! The Smith normal form follows the convention `U·M·V = D` with `U`, `V`
//! unimodular and `D` diagonal with a nonnegative divisibility chain.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    /// Builds a matrix from rows of anything convertible to `BigInt`.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone, R: AsRef<[T]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch("entry count does not match shape"));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Submatrix with row and column `k` removed.
    pub fn delete_row_col(&self, k: usize) -> Self {
        assert!(self.is_square() && k < self.rows);
        let n = self.rows - 1;
        let mut out = Self::zeros(n, n);
        for (oi, i) in (0..self.rows).filter(|&i| i != k).enumerate() {
            for (oj, j) in (0..self.cols).filter(|&j| j != k).enumerate() {
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("inner dimensions differ"));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] -= q * row[src]`, restricted to columns `from..`.
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        let c = self.cols;
        for j in from..c {
            let s = &self.data[src * c + j];
            if s.is_zero() {
                continue;
            }
            let t = q * s;
            self.data[dst * c + j] -= t;
        }
    }

    /// `col[dst] -= q * col[src]`, restricted to rows `from..`.
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        let c = self.cols;
        for i in from..self.rows {
            let s = &self.data[i * c + src];
            if s.is_zero() {
                continue;
            }
            let t = q * s;
            self.data[i * c + dst] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.data[i * self.cols + j];
            *e = -core::mem::take(e);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Dense matrix of exact rationals, always kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let e = &self[(i, j)];
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul_int(&self, rhs: &IntMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("inner dimensions differ"));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * BigRational::from_integer(rhs[(k, j)].clone());
                }
                data.push(acc);
            }
        }
        Ok(RationalMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    /// Bilinear form `yᵀ · self · x` for integer vectors.
    pub fn bilinear(&self, y: &[BigInt], x: &[BigInt]) -> BigRational {
        assert!(y.len() == self.rows && x.len() == self.cols);
        let mut acc = BigRational::zero();
        for i in 0..self.rows {
            if y[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if x[j].is_zero() {
                    continue;
                }
                acc += &self[(i, j)] * BigRational::from_integer(&y[i] * &x[j]);
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// `U·M·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Lifts to `Z^rows` of the cokernel generators: column `i` of `U⁻¹`
    /// maps to the generator of the `Z/d_i` factor.
    pub fn cokernel_generator_lifts(&self) -> Result<IntMatrix> {
        integer_inverse_of_unimodular(&self.u)
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    reduce(&mut d, Some((&mut u, &mut v)));
    SnfResult { u, d, v }
}

/// Diagonal of the Smith normal form, without tracking transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut d = m.clone();
    reduce(&mut d, None);
    (0..d.rows().min(d.cols())).map(|i| core::mem::take(&mut d[(i, i)])).collect()
}

fn reduce(a: &mut IntMatrix, mut transforms: Option<(&mut IntMatrix, &mut IntMatrix)>) {
    let (rows, cols) = (a.rows(), a.cols());
    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        // minimal nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let e = &a[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => e.magnitude() < a[(bi, bj)].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if e.magnitude().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[(bi, bj)].magnitude().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        rank = t + 1;
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some((u, v)) = transforms.as_mut() {
            u.swap_rows(t, pi);
            v.swap_cols(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[(i, t)], &a[(t, t)]);
                a.row_axpy(i, t, &q, t);
                if let Some((u, _)) = transforms.as_mut() {
                    u.row_axpy(i, t, &q, 0);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[(t, j)], &a[(t, t)]);
                a.col_axpy(j, t, &q, t);
                if let Some((_, v)) = transforms.as_mut() {
                    v.col_axpy(j, t, &q, 0);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // a remainder smaller than the pivot survived; promote it
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() && a[(i, t)].magnitude() < a[best].magnitude() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() && a[(t, j)].magnitude() < a[best].magnitude() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                if let Some((u, _)) = transforms.as_mut() {
                    u.swap_rows(t, best.0);
                }
            } else if best.1 != t {
                a.swap_cols(t, best.1);
                if let Some((_, v)) = transforms.as_mut() {
                    v.swap_cols(t, best.1);
                }
            }
        }
    }
    // diagonal now; enforce the divisibility chain pairwise
    for i in 0..rank {
        for j in i + 1..rank {
            let (di, dj) = (a[(i, i)].clone(), a[(j, j)].clone());
            if di.is_zero() || dj.is_multiple_of(&di) {
                continue;
            }
            let egcd = di.extended_gcd(&dj);
            let (g, s, tt) = (egcd.gcd, egcd.x, egcd.y);
            let (di_g, dj_g) = (&di / &g, &dj / &g);
            a[(i, i)] = g.clone();
            a[(j, j)] = &di * &dj_g;
            if let Some((u, v)) = transforms.as_mut() {
                // rows: [r_i, r_j] <- [s r_i + t r_j, -(dj/g) r_i + (di/g) r_j]
                for c in 0..u.cols() {
                    let (ri, rj) = (u[(i, c)].clone(), u[(j, c)].clone());
                    u[(i, c)] = &s * &ri + &tt * &rj;
                    u[(j, c)] = &di_g * &rj - &dj_g * &ri;
                }
                // cols: [c_i, c_j] <- [c_i + c_j, -(t dj/g) c_i + (s di/g) c_j]
                let (f1, f2) = (&tt * &dj_g, &s * &di_g);
                for r in 0..v.rows() {
                    let (ci, cj) = (v[(r, i)].clone(), v[(r, j)].clone());
                    v[(r, i)] = &ci + &cj;
                    v[(r, j)] = &f2 * &cj - &f1 * &ci;
                }
            }
        }
    }
    for i in 0..rank {
        if a[(i, i)].is_negative() {
            a.negate_row(i);
            if let Some((u, _)) = transforms.as_mut() {
                u.negate_row(i);
            }
        }
    }
}

/// `round(a / b)`, so that the remainder has magnitude at most `|b|/2`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    // r has the sign of b; shift if |r| > |b|/2
    let twice: BigInt = &r * 2;
    if twice.magnitude() > b.magnitude() {
        q + 1
    } else {
        q
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = t / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if sign { -det } else { det })
}

/// Exact inverse over the rationals by Gauss–Jordan elimination.
pub fn rational_inverse(m: &IntMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = RationalMatrix::from_int(m);
    let mut inv = RationalMatrix::from_int(&IntMatrix::identity(n));
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return Err(Error::SingularMatrix);
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
                inv.data.swap(p * n + j, c * n + j);
            }
        }
        let pivot = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] / &pivot;
            inv[(c, j)] = &inv[(c, j)] / &pivot;
        }
        for r in 0..n {
            if r == c || a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].clone();
            for j in 0..n {
                let (x, y) = (&a[(c, j)] * &f, &inv[(c, j)] * &f);
                a[(r, j)] -= x;
                inv[(r, j)] -= y;
            }
        }
    }
    Ok(inv)
}

/// Inverse of a unimodular matrix as an integer matrix.
pub fn integer_inverse_of_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    let inv = rational_inverse(m)?;
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = &inv[(i, j)];
            if !e.is_integer() {
                return Err(Error::InvalidArgument("matrix is not unimodular"));
            }
            out[(i, j)] = e.to_integer();
        }
    }
    Ok(out)
}

/// Invariant factors of the torsion part of `Z^rows / M·Z^cols`.
pub fn cokernel_invariants(m: &IntMatrix) -> FiniteAbelianGroup {
    let diag = smith_diagonal(m);
    FiniteAbelianGroup::from_chain(
        diag.into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.into_parts().1)
            .collect(),
    )
    .expect("Smith diagonal is a divisibility chain")
}

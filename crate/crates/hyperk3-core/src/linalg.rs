//! Dense integer matrices.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::IntPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Companion matrix of a monic polynomial: `M e_j = e_{j+1}` and the last
    /// column holds minus the low coefficients.
    pub fn companion(f: &IntPoly) -> Self {
        assert!(f.is_monic() && f.degree() > 0, "companion of a non-monic polynomial");
        let n = f.degree();
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = BigInt::one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -f.coeff(i);
        }
        m
    }

    /// Symmetric Toeplitz matrix `T[i][j] = t[|i-j|]`.
    pub fn toeplitz(t: &[BigInt], n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = t[i.abs_diff(j)].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_cols(cols: &[Vec<BigInt>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, o: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(BigInt::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let mv = self.mul_vec(v);
        dot(u, &mv)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate a polynomial at this matrix.
    pub fn poly_eval(&self, p: &IntPoly) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// `det(xI - M)` by Berkowitz's division-free algorithm.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        // v holds coefficients highest degree first.
        let mut v: Vec<BigInt> = alloc::vec![BigInt::one()];
        for r in 0..n {
            let a = &self[(r, r)];
            // column of the Toeplitz factor: 1, -a, -R C, -R M C, ...
            let mut t: Vec<BigInt> = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-a);
            let mut x: Vec<BigInt> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(BigInt::zero(), |acc, j| acc + &self[(r, j)] * &x[j]);
                t.push(-rc);
                x = (0..r)
                    .map(|i| (0..r).fold(BigInt::zero(), |acc, j| acc + &self[(i, j)] * &x[j]))
                    .collect();
            }
            let mut nv = alloc::vec![BigInt::zero(); r + 2];
            for (i, slot) in nv.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *slot += &t[i - j] * vj;
                    }
                }
            }
            v = nv;
        }
        v.reverse();
        IntPoly::new(v)
    }

    /// Signature `(p, q)` of a nondegenerate symmetric matrix by rational
    /// LDLᵀ with symmetric pivoting.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (p, q, z) = self.inertia()?;
        if z > 0 {
            return Err(Error::pre("degenerate Gram matrix"));
        }
        Ok((p, q))
    }

    /// `(positive, negative, zero)` counts of a symmetric matrix.
    pub fn inertia(&self) -> Result<(usize, usize, usize)> {
        if !self.is_symmetric() {
            return Err(Error::pre("Gram matrix is not symmetric"));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(self[(i, j)].clone())).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            let piv = (k..n).find(|&i| !a[i][i].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => {
                    // All diagonal entries vanish; use an off-diagonal pair.
                    let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                    let Some((i, j)) = pair else { break };
                    // row/col i += row/col j
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[i][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][i] += v;
                    }
                    i
                }
            };
            a.swap(k, piv);
            for row in a.iter_mut() {
                row.swap(k, piv);
            }
            let d = a[k][k].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &d;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
            }
            for i in k + 1..n {
                a[k][i] = BigRational::zero();
                a[i][k] = BigRational::zero();
            }
            k += 1;
        }
        Ok((pos, neg, n - pos - neg))
    }
}

pub fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
}

impl Index<(usize, usize)> for Matrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * &o[(k, j)];
                }
            }
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

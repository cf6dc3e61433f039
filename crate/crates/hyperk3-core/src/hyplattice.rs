//! The hypergeometric lattice of a pair `(φ, ψ)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyring::{resultant, trace_polynomial_pair, IntPoly, PalindromeClass};

/// `ξ_1..ξ_count` from `ψ/φ = 1 + Σ ξ_i z^{-i}`.
pub fn taylor_coeffs(phi: &IntPoly, psi: &IntPoly, count: usize) -> Result<Vec<BigInt>> {
    if !phi.is_monic() || !psi.is_monic() {
        return Err(Error::pre("phi and psi must be monic"));
    }
    let n = phi.degree();
    if psi.degree() != n {
        return Err(Error::pre("deg phi = deg psi fails"));
    }
    let q = psi - phi;
    let coef = |p: &IntPoly, i: isize| if i < 0 { BigInt::zero() } else { p.coeff(i as usize) };
    let mut xi: Vec<BigInt> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut v = coef(&q, n as isize - k as isize);
        for i in 1..k {
            v -= coef(phi, n as isize - k as isize + i as isize) * &xi[i - 1];
        }
        xi.push(v);
    }
    Ok(xi)
}

#[derive(Clone, Debug)]
pub struct HgLattice {
    pub phi: IntPoly,
    pub psi: IntPoly,
    pub n: usize,
    /// `ξ_0 = 2, ξ_1, ..., ξ_{n-1}`.
    pub xi: Vec<BigInt>,
    pub gram_a: Matrix,
    pub mat_a: Matrix,
    pub mat_b: Matrix,
    pub mat_c: Matrix,
    pub disc: BigInt,
}

fn check_pair(phi: &IntPoly, psi: &IntPoly) -> Result<()> {
    if phi.is_zero() || psi.is_zero() || phi.degree() == 0 {
        return Err(Error::pre("phi and psi must have positive degree"));
    }
    if !phi.is_monic() {
        return Err(Error::pre("phi must be monic"));
    }
    if !psi.is_monic() {
        return Err(Error::pre("psi must be monic"));
    }
    if phi.degree() != psi.degree() {
        return Err(Error::pre("deg phi = deg psi fails"));
    }
    if phi.palindrome_class() != PalindromeClass::AntiPalindromic {
        return Err(Error::pre("phi must be anti-palindromic"));
    }
    if psi.palindrome_class() != PalindromeClass::Palindromic {
        return Err(Error::pre("psi must be palindromic"));
    }
    if phi.gcd(psi).degree() > 0 {
        return Err(Error::pre("phi and psi must be coprime"));
    }
    Ok(())
}

/// Lattice with Gram `ξ_{|i-j|}` in the basis `r, Ar, ..., A^{n-1} r`.
pub fn build_lattice(phi: &IntPoly, psi: &IntPoly) -> Result<HgLattice> {
    check_pair(phi, psi)?;
    let n = phi.degree();
    let mut xi = alloc::vec![BigInt::from(2)];
    xi.extend(taylor_coeffs(phi, psi, n - 1)?);
    let gram_a = Matrix::toeplitz(&xi, n);
    let mat_a = Matrix::companion(phi);
    // C e_j = e_j - (e_j, r) r
    let mut mat_c = Matrix::identity(n);
    for j in 0..n {
        mat_c[(0, j)] -= &xi[j];
    }
    let mat_b = &mat_a * &mat_c;
    let disc = gram_a.det();
    let l = HgLattice { phi: phi.clone(), psi: psi.clone(), n, xi, gram_a, mat_a, mat_b, mat_c, disc };
    l.self_check()?;
    Ok(l)
}

impl HgLattice {
    fn self_check(&self) -> Result<()> {
        let n = self.n;
        if &self.mat_c * &self.mat_c != Matrix::identity(n) {
            return Err(Error::bug("C is not an involution"));
        }
        for m in [&self.mat_a, &self.mat_b, &self.mat_c] {
            if &(&m.transpose() * &self.gram_a) * m != self.gram_a {
                return Err(Error::bug("generator does not preserve the Gram matrix"));
            }
        }
        if self.disc.abs() != resultant(&self.phi, &self.psi).abs() {
            return Err(Error::bug("|det Gram| differs from |Res(phi, psi)|"));
        }
        Ok(())
    }

    /// Columns are the A-basis coordinates of `r, Br, ..., B^{n-1} r`.
    pub fn b_basis_change(&self) -> Matrix {
        let mut cols = Vec::with_capacity(self.n);
        let mut v: Vec<BigInt> = (0..self.n).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        for _ in 0..self.n {
            cols.push(v.clone());
            v = self.mat_b.mul_vec(&v);
        }
        Matrix::from_cols(&cols)
    }

    /// Gram in the basis `r, Br, ...`, from `φ/ψ = 1 + Σ ξ'_i z^{-i}`.
    pub fn gram_b(&self) -> Matrix {
        let mut xi = alloc::vec![BigInt::from(2)];
        xi.extend(taylor_coeffs(&self.psi, &self.phi, self.n - 1).expect("validated pair"));
        Matrix::toeplitz(&xi, self.n)
    }

    /// Generator in its own cyclic basis: companion of `φ` or `ψ`.
    pub fn generator_basis(&self, side_b: bool) -> (Matrix, Matrix) {
        if side_b {
            (Matrix::companion(&self.psi), self.gram_b())
        } else {
            (self.mat_a.clone(), self.gram_a.clone())
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.disc.abs().is_one()
    }
}

/// Unimodularity from the trace polynomials, cross-checked against the
/// resultant of `φ` and `ψ`.
pub fn is_unimodular(phi: &IntPoly, psi: &IntPoly) -> Result<bool> {
    check_pair(phi, psi)?;
    let direct = resultant(phi, psi).abs().is_one();
    if phi.degree() % 2 == 1 {
        if direct {
            return Err(Error::bug("odd rank pair with unit resultant"));
        }
        return Ok(false);
    }
    let (fa, fb) = trace_polynomial_pair(phi, psi)?;
    let via_trace =
        fb.eval_i64(2).abs().is_one() && fb.eval_i64(-2).abs().is_one() && resultant(&fa, &fb).abs().is_one();
    if via_trace != direct {
        return Err(Error::bug("trace criterion disagrees with Res(phi, psi)"));
    }
    Ok(direct)
}

/// `(p, q)` of a nondegenerate symmetric integer matrix.
pub fn signature_oracle(gram: &Matrix) -> Result<(usize, usize)> {
    gram.signature()
}

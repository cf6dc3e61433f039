//! Hypergeometric lattices as lattices in Salem number fields.
//!
//! With `F` acting on `L_H` through a cyclic vector `r`, the pair
//! `(L_H, F)` is `Z[z]/(S)` with multiplication by `z` and the trace form
//! `(g1, g2) = Tr(U(w) g1(z) g2(1/z) / R'(w))`. Everything here is exact
//! linear algebra modulo `R`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hyplattice::HgLattice;
use crate::k3class::K3Certificate;
use crate::linalg::Matrix;
use crate::polyring::{isolate_real_roots, trace_of_palindromic, AlgebraicReal, IntPoly, PalindromeClass};

pub use crate::polyring::chebyshev_p;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    /// `U(w) = u_1 w^{N-1} + ... + u_N`.
    pub unit: IntPoly,
    pub r: IntPoly,
    /// `u_1, ..., u_N`.
    pub coeffs: Vec<BigInt>,
    /// `c[j][k]` for `j, k` in `0..N`.
    pub c_matrix: Vec<Vec<BigInt>>,
}

fn monic_r(r: &IntPoly) -> Result<usize> {
    if r.is_zero() || r.degree() == 0 || !r.is_monic() {
        return Err(Error::pre("R must be monic of positive degree"));
    }
    Ok(r.degree())
}

/// `[g]_R`: the coefficient of `w^{N-1}` in `g mod R`.
pub fn bracket(g: &IntPoly, r: &IntPoly) -> BigInt {
    let (_, rem) = g.div_rem_monic(r);
    rem.coeff(r.degree() - 1)
}

/// `c_{jk} = [P_{j-1}(w) w^{N-k}]_R`, zero-based.
pub fn c_matrix(r: &IntPoly) -> Result<Vec<Vec<BigInt>>> {
    let n = monic_r(r)?;
    Ok((0..n)
        .map(|j| {
            let p = chebyshev_p(j);
            (0..n).map(|k| bracket(&p.shift(n - 1 - k), r)).collect()
        })
        .collect())
}

/// Solve the triangular recurrence for `U` from `(F^{j-1} r, r)`, `j = 1..N`.
pub fn unit_from_gram(gram_row: &[BigInt], r: &IntPoly) -> Result<UnitData> {
    let n = monic_r(r)?;
    if gram_row.len() != n {
        return Err(Error::pre(alloc::format!("gram row must have length deg R = {n}")));
    }
    let c = c_matrix(r)?;
    for j in 0..n {
        let diag = if j == 0 { BigInt::from(2) } else { BigInt::one() };
        if c[j][j] != diag || c[j][j + 1..].iter().any(|x| !x.is_zero()) {
            return Err(Error::bug("c matrix is not unit lower triangular"));
        }
    }
    let (u1, rem) = gram_row[0].div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(Error::pre("(r, r) must be even"));
    }
    let mut u = alloc::vec![u1];
    for j in 1..n {
        let s: BigInt = (0..j).map(|k| &c[j][k] * &u[k]).sum();
        u.push(&gram_row[j] - s);
    }
    let mut asc = u.clone();
    asc.reverse();
    Ok(UnitData { unit: IntPoly::new(asc), r: r.clone(), coeffs: u, c_matrix: c })
}

/// `(z^i, z^j)_S = [U P_{|i-j|}]_R` for `i, j < size`.
pub fn trace_form_gram(unit: &IntPoly, r: &IntPoly, size: usize) -> Result<Matrix> {
    monic_r(r)?;
    let t: Vec<BigInt> = (0..size).map(|m| bracket(&(unit * &chebyshev_p(m)), r)).collect();
    Ok(Matrix::toeplitz(&t, size))
}

/// Matrix of `g ↦ U g` on `Z[w]/(R)` in the power basis.
pub fn multiplication_matrix(unit: &IntPoly, r: &IntPoly) -> Result<Matrix> {
    let n = monic_r(r)?;
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let (_, rem) = unit.shift(i).div_rem_monic(r);
            (0..n).map(|k| rem.coeff(k)).collect()
        })
        .collect();
    Ok(Matrix::from_cols(&cols))
}

/// Roots `τ` of `R` in `(-2, 2)` with `U(τ) R'(τ) > 0`.
pub fn compatible_roots(unit: &IntPoly, r: &IntPoly) -> Vec<AlgebraicReal> {
    let dr = r.derivative();
    let mut v: Vec<AlgebraicReal> = isolate_real_roots(r)
        .into_iter()
        .filter(|t| t.cmp_int(-2) == Ordering::Greater && t.cmp_int(2) == Ordering::Less)
        .filter(|t| t.sign_of(unit) * t.sign_of(&dr) > 0)
        .collect();
    v.sort_by(|a, b| b.cmp_value(a));
    v
}

/// `Ok` when `U` is a unit modulo `R` and, if `τ` is given, `τ` is the only
/// root in `(-2, 2)` with `U(τ) R'(τ) > 0`. `Err` names the failed clause.
pub fn verify_unit(unit: &IntPoly, r: &IntPoly, tau: Option<&AlgebraicReal>) -> Result<core::result::Result<(), String>> {
    let n = monic_r(r)?;
    if !unit.is_zero() && unit.degree() >= n {
        return Err(Error::pre("deg U < deg R required"));
    }
    if !multiplication_matrix(unit, r)?.det().abs().is_one() {
        return Ok(Err(String::from("det of multiplication by U is not +-1")));
    }
    if let Some(t) = tau {
        let roots = compatible_roots(unit, r);
        if !roots.iter().any(|x| x.same_value(t)) {
            return Ok(Err(String::from("U(tau) R'(tau) > 0 fails")));
        }
        if roots.len() != 1 {
            return Ok(Err(alloc::format!("{} roots in (-2, 2) satisfy U R' > 0", roots.len())));
        }
    }
    Ok(Ok(()))
}

/// Trace polynomial `R` of a palindromic `S` of even degree.
pub fn salem_trace_of(s: &IntPoly) -> Result<IntPoly> {
    if s.palindrome_class() != PalindromeClass::Palindromic || s.degree() % 2 != 0 {
        return Err(Error::pre("S must be palindromic of even degree"));
    }
    trace_of_palindromic(s)
}

/// `Φ` from number-field data: reflect in `1`, compose with `M_z`, and take
/// the trace polynomial of the characteristic polynomial.
pub fn recover_phi(unit: &IntPoly, s: &IntPoly) -> Result<IntPoly> {
    let r = salem_trace_of(s)?;
    let n2 = s.degree();
    let gram = trace_form_gram(unit, &r, n2)?;
    let g11 = gram[(0, 0)].clone();
    let eps = if g11 == BigInt::from(2) {
        BigInt::one()
    } else if g11 == BigInt::from(-2) {
        -BigInt::one()
    } else {
        return Err(Error::pre(alloc::format!("(1, 1)_S = {g11}, must be +-2")));
    };
    // C e_j = e_j - eps (e_j, 1) 1
    let mut c = Matrix::identity(n2);
    for j in 0..n2 {
        c[(0, j)] -= &eps * &gram[(0, j)];
    }
    let mz = Matrix::companion(s);
    let a = &mz * &c;
    if &(&a.transpose() * &gram) * &a != gram {
        return Err(Error::bug("M_z C is not an isometry of the trace form"));
    }
    let phi = a.charpoly();
    let q = phi
        .div_exact(&crate::polyring::desc(&[1, 0, -1]))
        .ok_or_else(|| Error::pre("characteristic polynomial of A lacks z^2 - 1"))?;
    trace_of_palindromic(&q)
}

/// First row `(B^{j-1} r, r)`, `j = 1..N`, of the B-basis Gram, scaled by
/// `sign`.
pub fn b_gram_row(l: &HgLattice, sign: i32) -> Vec<BigInt> {
    let g = l.gram_b();
    (0..l.n / 2).map(|j| &g[(0, j)] * BigInt::from(sign)).collect()
}

/// `U` for a side-B certificate, using the K3 form (negated when the
/// hypergeometric index was +16).
pub fn unit_for_certificate(l: &HgLattice, cert: &K3Certificate) -> Result<UnitData> {
    if cert.side != crate::clusters::Side::B {
        return Err(Error::pre("the number-field bridge needs psi Salem (side B)"));
    }
    let r = salem_trace_of(&l.psi)?;
    unit_from_gram(&b_gram_row(l, if cert.renormalized { -1 } else { 1 }), &r)
}

//! Integer polynomials, cyclotomic and Salem data, trace polynomials and
//! real roots.

mod poly;
mod roots;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use poly::{product, IntPoly, PalindromeClass};
pub use roots::{format_decimal, isolate_real_roots, isolate_squarefree, root_bound, sort_values, AlgebraicReal, SturmSequence};
pub(crate) use roots::rational_to_f64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Polynomial from coefficients listed highest degree first.
pub fn desc(c: &[i64]) -> IntPoly {
    let mut v: Vec<i64> = c.to_vec();
    v.reverse();
    IntPoly::from_i64s(&v)
}

/// Euler's totient.
pub fn totient(k: u64) -> u64 {
    let mut n = k;
    let mut r = k;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Is `k` a power of a prime (k ≥ 2)?
pub fn is_prime_power(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            let mut m = k;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloConvention {
    Standard,
    /// `C_1 = (z-1)^2`, `C_2 = (z+1)^2`, standard otherwise.
    Squared,
}

/// The k-th cyclotomic polynomial.
pub fn cyclotomic(k: u64, conv: CycloConvention) -> Result<IntPoly> {
    if k == 0 {
        return Err(Error::pre("cyclotomic index must be at least 1"));
    }
    let base = cyclotomic_standard(k);
    Ok(match (conv, k) {
        (CycloConvention::Squared, 1 | 2) => base.pow(2),
        _ => base,
    })
}

/// Standard cyclotomic by dividing `z^k - 1` by the lower ones.
fn cyclotomic_standard(k: u64) -> IntPoly {
    let mut f = &IntPoly::monomial(k as usize, BigInt::one()) - &IntPoly::one();
    for d in 1..k {
        if k % d == 0 {
            f = f.div_exact(&cyclotomic_standard(d)).expect("cyclotomic divisor");
        }
    }
    f
}

/// The cyclotomic trace polynomial `CT_k`.
pub fn cyclotomic_trace(k: u64) -> Result<IntPoly> {
    match k {
        0 => Err(Error::pre("cyclotomic index must be at least 1")),
        1 => Ok(IntPoly::linear(2)),
        2 => Ok(IntPoly::linear(-2)),
        _ => trace_of_palindromic(&cyclotomic_standard(k)),
    }
}

/// `P_j(w)` with `P_0 = 2`, `P_1 = w`, `P_{j+1} = w P_j - P_{j-1}`.
pub fn chebyshev_p(j: usize) -> IntPoly {
    let mut a = IntPoly::constant(BigInt::from(2));
    let mut b = IntPoly::x();
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let c = &(&IntPoly::x() * &b) - &a;
        a = b;
        b = c;
    }
    b
}

/// `T` with `z^m T(z + 1/z) = P(z)` for palindromic `P` of degree `2m`.
pub fn trace_of_palindromic(p: &IntPoly) -> Result<IntPoly> {
    if p.is_zero() || p.degree() % 2 != 0 || p.palindrome_class() != PalindromeClass::Palindromic {
        return Err(Error::pre(alloc::format!("z^deg P(1/z) = P(z) with even degree fails for {}", p.to_string_var('z'))));
    }
    let m = p.degree() / 2;
    let mut t = IntPoly::constant(p.coeff(m));
    for j in 1..=m {
        t = &t + &chebyshev_p(j).scale(&p.coeff(m + j));
    }
    Ok(t)
}

/// `z^d T(z + 1/z)` where `d = deg T`.
pub fn from_trace(t: &IntPoly) -> IntPoly {
    if t.is_zero() {
        return IntPoly::zero();
    }
    let m = t.degree();
    let zz1 = desc(&[1, 0, 1]);
    let mut acc = IntPoly::zero();
    let mut pw = IntPoly::one();
    for i in 0..=m {
        acc = &acc + &pw.shift(m - i).scale(&t.coeff(i));
        pw = &pw * &zz1;
    }
    acc
}

/// Trace polynomials `(Φ, Ψ)` of an anti-palindromic/palindromic pair.
pub fn trace_polynomial_pair(phi: &IntPoly, psi: &IntPoly) -> Result<(IntPoly, IntPoly)> {
    let n = phi.degree();
    if phi.is_zero() || psi.is_zero() || n == 0 {
        return Err(Error::pre("phi and psi must have positive degree"));
    }
    if psi.degree() != n {
        return Err(Error::pre("deg phi = deg psi fails"));
    }
    if phi.coeff(0).is_zero() || psi.coeff(0).is_zero() {
        return Err(Error::pre("phi(0) psi(0) != 0 fails"));
    }
    if phi.palindrome_class() != PalindromeClass::AntiPalindromic {
        return Err(Error::pre("z^n phi(1/z) = -phi(z) fails"));
    }
    if psi.palindrome_class() != PalindromeClass::Palindromic {
        return Err(Error::pre("z^n psi(1/z) = psi(z) fails"));
    }
    let (fphi, fpsi) = if n % 2 == 0 {
        (desc(&[1, 0, -1]), IntPoly::one())
    } else {
        (desc(&[1, -1]), desc(&[1, 1]))
    };
    let qphi = phi.div_exact(&fphi).ok_or_else(|| Error::pre("phi not divisible by its forced factor"))?;
    let qpsi = psi.div_exact(&fpsi).ok_or_else(|| Error::pre("psi not divisible by its forced factor"))?;
    let big_phi = trace_of_palindromic(&qphi)?;
    let big_psi = trace_of_palindromic(&qpsi)?;
    debug_assert_eq!(&(&from_trace(&big_phi) * &fphi), phi);
    Ok((big_phi, big_psi))
}

/// Rebuild `(φ, ψ)` of rank `n` from trace polynomials.
pub fn pair_from_traces(big_phi: &IntPoly, big_psi: &IntPoly, n: usize) -> Result<(IntPoly, IntPoly)> {
    let even = n % 2 == 0;
    let (dphi, dpsi) = if even { (n / 2 - 1, n / 2) } else { (n / 2, n / 2) };
    if big_phi.degree() != dphi || big_psi.degree() != dpsi || big_phi.is_zero() || big_psi.is_zero() {
        return Err(Error::pre(alloc::format!("trace degrees must be ({dphi}, {dpsi}) for rank {n}")));
    }
    let phi = if even {
        &from_trace(big_phi) * &desc(&[1, 0, -1])
    } else {
        &from_trace(big_phi) * &desc(&[1, -1])
    };
    let psi = if even { from_trace(big_psi) } else { &from_trace(big_psi) * &desc(&[1, 1]) };
    Ok((phi, psi))
}

/// Sylvester matrix of `f`, `g`.
pub fn sylvester(f: &IntPoly, g: &IntPoly) -> Matrix {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for i in 0..n {
        for j in 0..=m {
            s[(i, i + j)] = f.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[(n + i, i + j)] = g.coeff(n - j);
        }
    }
    s
}

/// Resultant as the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of the zero polynomial");
    if f.degree() + g.degree() == 0 {
        return BigInt::one();
    }
    sylvester(f, g).det()
}

/// Both sides of the resultant identity relating `Res(φ,ψ)` to `Res(Φ,Ψ)`.
pub fn resultant_relation(phi: &IntPoly, psi: &IntPoly) -> Result<(BigInt, BigInt)> {
    let (fa, fb) = trace_polynomial_pair(phi, psi)?;
    let n = phi.degree();
    let big_n = n / 2;
    let lhs = resultant(phi, psi);
    let r = resultant(&fa, &fb);
    let sign = if big_n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let rhs = if n % 2 == 0 {
        sign * fb.eval_i64(2) * fb.eval_i64(-2) * &r * &r
    } else {
        BigInt::from(2) * sign * fb.eval_i64(2) * fa.eval_i64(-2) * &r * &r
    };
    Ok((lhs, rhs))
}

/// m-th power sum of the roots of a monic polynomial.
pub fn newton_power_sum(chi: &IntPoly, m: usize) -> Result<BigInt> {
    if !chi.is_monic() {
        return Err(Error::pre("chi must be monic"));
    }
    let n = chi.degree();
    let e: Vec<BigInt> = (0..=n)
        .map(|k| {
            let c = chi.coeff(n - k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    Ok(power_sum_from_elementary(&e[1..], m))
}

/// Newton's identities from `e_1, e_2, ...`.
pub fn power_sum_from_elementary(e: &[BigInt], m: usize) -> BigInt {
    let ek = |k: usize| if k >= 1 && k <= e.len() { e[k - 1].clone() } else { BigInt::zero() };
    let mut p: Vec<BigInt> = alloc::vec![BigInt::zero(); m + 1];
    for k in 1..=m {
        let mut acc = BigInt::zero();
        for i in 1..k {
            let t = ek(i) * &p[k - i];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        let t = ek(k) * BigInt::from(k);
        if k % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
        p[k] = acc;
    }
    p[m].clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

pub fn is_unramified(p: &IntPoly, var: Var) -> bool {
    let pt = match var {
        Var::W => 2,
        Var::Z => 1,
    };
    p.eval_i64(pt).abs().is_one() && p.eval_i64(-pt).abs().is_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorTag {
    Cyclotomic(u64),
    Salem,
    SalemTrace,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: IntPoly,
    pub multiplicity: usize,
    pub tag: FactorTag,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorList {
    pub factors: Vec<Factor>,
}

impl FactorList {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::one();
        for f in &self.factors {
            acc = &acc * &f.poly.pow(f.multiplicity as u32);
        }
        acc
    }

    pub fn cyclotomic_indices(&self) -> Vec<(u64, usize)> {
        self.factors
            .iter()
            .filter_map(|f| match f.tag {
                FactorTag::Cyclotomic(k) => Some((k, f.multiplicity)),
                _ => None,
            })
            .collect()
    }

    pub fn salem(&self) -> Option<&IntPoly> {
        self.factors.iter().find(|f| f.tag == FactorTag::Salem).map(|f| &f.poly)
    }

    /// Compact text such as `(z-1)^9*(z+1)*(z^2+1)*S`.
    pub fn display(&self, var: char) -> String {
        let mut parts = Vec::new();
        for f in &self.factors {
            let body = f.poly.to_string_var(var);
            let body = if f.poly.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                alloc::format!("({body})")
            } else {
                body
            };
            if f.multiplicity > 1 {
                parts.push(alloc::format!("{body}^{}", f.multiplicity));
            } else {
                parts.push(body);
            }
        }
        if parts.is_empty() {
            return String::from("1");
        }
        parts.join("*")
    }
}

/// Indices `k` with `totient(k) <= d`, using `totient(k) >= sqrt(k/2)`.
pub fn cyclotomic_indices_up_to_degree(d: u64) -> Vec<u64> {
    let bound = 2 * d * d + 2;
    (1..=bound).filter(|&k| totient(k) <= d).collect()
}

/// Strip cyclotomic factors and tag what remains.
pub fn classify_product(f: &IntPoly) -> Result<FactorList> {
    if !f.is_monic() {
        return Err(Error::pre("classify_product needs a monic polynomial"));
    }
    if !f.coeff(0).abs().is_one() {
        return Err(Error::pre("classify_product needs f(0) = ±1"));
    }
    let mut rest = f.clone();
    let mut out = FactorList::default();
    for k in cyclotomic_indices_up_to_degree(f.degree() as u64) {
        if rest.degree() == 0 {
            break;
        }
        if totient(k) as usize > rest.degree() {
            continue;
        }
        let c = cyclotomic_standard(k);
        let mut m = 0;
        while let Some(q) = rest.div_exact(&c) {
            rest = q;
            m += 1;
        }
        if m > 0 {
            out.factors.push(Factor { poly: c, multiplicity: m, tag: FactorTag::Cyclotomic(k) });
        }
    }
    if rest.degree() > 0 {
        let tag = if is_salem(&rest) { FactorTag::Salem } else { FactorTag::Other };
        out.factors.push(Factor { poly: rest, multiplicity: 1, tag });
    } else if rest.coeff(0) != BigInt::one() {
        out.factors.push(Factor { poly: rest, multiplicity: 1, tag: FactorTag::Other });
    }
    Ok(out)
}

/// Salem test through the trace polynomial.
///
/// A palindromic polynomial without cyclotomic factors whose trace has one
/// real root above 2 and all others in (-2, 2) is irreducible: any factor
/// would be palindromic or pair with its reciprocal, and a factor with all
/// roots on the unit circle is cyclotomic by Kronecker.
pub fn is_salem(p: &IntPoly) -> bool {
    if p.degree() < 4 || !p.is_monic() {
        return false;
    }
    match trace_of_palindromic(p) {
        Ok(t) => is_salem_trace(&t),
        Err(_) => false,
    }
}

/// Exactly one real root > 2, the rest real and in (-2, 2), all simple.
pub fn is_salem_trace(t: &IntPoly) -> bool {
    if t.degree() < 2 {
        return false;
    }
    let roots = isolate_real_roots(t);
    if roots.len() != t.degree() || roots.iter().any(|r| r.multiplicity() != 1) {
        return false;
    }
    let above = roots.iter().filter(|r| r.cmp_int(2).is_gt()).count();
    let inside = roots.iter().filter(|r| r.cmp_int(2).is_lt() && r.cmp_int(-2).is_gt()).count();
    above == 1 && inside + 1 == roots.len()
}

/// Built-in named polynomials.
pub mod builtin {
    use super::*;

    fn w() -> IntPoly {
        IntPoly::x()
    }

    fn minus_one(p: IntPoly) -> IntPoly {
        &p - &IntPoly::one()
    }

    /// Lehmer's polynomial.
    pub fn lehmer() -> IntPoly {
        desc(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    /// Trace of Lehmer's polynomial.
    pub fn lt() -> IntPoly {
        minus_one(product(&[desc(&[1, 1]), desc(&[1, 0, -1]), desc(&[1, 0, -4])]))
    }

    pub fn mt() -> IntPoly {
        minus_one(product(&[desc(&[1, 1]), desc(&[1, -2]), desc(&[1, -1, -4, 1])]))
    }

    pub fn nt() -> IntPoly {
        minus_one(&desc(&[1, -2, -2]) * &desc(&[1, 0, -3, 1]))
    }

    /// The degree 10 polynomial whose trace is `MT`.
    pub fn m() -> IntPoly {
        desc(&[1, -2, 0, -1, 2, -1, 2, -1, 0, -2, 1])
    }

    /// Salem trace polynomials of degree 11, `i` in 1..=10.
    pub fn salem_trace_r(i: usize) -> Result<IntPoly> {
        let x = w();
        let wp1 = desc(&[1, 1]);
        let wm1 = desc(&[1, -1]);
        let w2m4 = desc(&[1, 0, -4]);
        let parts: Vec<IntPoly> = match i {
            1 => alloc::vec![x, wm1, wp1.pow(2), w2m4, desc(&[1, 0, -6, 0, 8, -2])],
            2 => alloc::vec![wp1, w2m4, desc(&[1, 0, -8, -1, 19, 3, -12, 0, 1])],
            3 => alloc::vec![x, wm1, wp1.pow(2), w2m4, desc(&[1, 0, -6, -1, 8, 1])],
            4 => alloc::vec![x.pow(2), wp1, w2m4, desc(&[1, 1, -1]), desc(&[1, -1, -5, 3, 5])],
            5 => alloc::vec![wm1, wp1.pow(2), w2m4, desc(&[1, 0, -7, -1, 12, 2, -1])],
            6 => alloc::vec![x, wp1.pow(2), w2m4, desc(&[1, 1, -1]), desc(&[1, -2, -3, 6, -1])],
            7 => alloc::vec![wp1, w2m4, desc(&[1, 0, -8, -1, 19, 2, -14, 0, 2])],
            8 => alloc::vec![x, wp1.pow(2), w2m4, desc(&[1, -1, -7, 5, 13, -6, -2])],
            9 => alloc::vec![x, wp1, w2m4, desc(&[1, 0, -9, -2, 25, 9, -20, -8])],
            10 => alloc::vec![x, wp1.pow(2), desc(&[1, 0, -3]), w2m4, desc(&[1, -1, -4, 2, 1])],
            _ => return Err(Error::pre(alloc::format!("R({i}) is defined for i in 1..=10"))),
        };
        Ok(minus_one(product(&parts)))
    }

    /// `z^11 R_i(z + 1/z)`.
    pub fn salem_r(i: usize) -> Result<IntPoly> {
        Ok(from_trace(&salem_trace_r(i)?))
    }

    /// Lehmer number field traces `L_1..L_8`.
    pub fn lnf(i: usize) -> Result<IntPoly> {
        let ks: &[u64] = match i {
            1 => &[21],
            2 => &[28],
            3 => &[36],
            4 => &[42],
            5 => &[12, 15],
            6 => &[12, 20],
            7 => &[12, 24],
            8 => &[12, 30],
            _ => return Err(Error::pre(alloc::format!("LNF({i}) is defined for i in 1..=8"))),
        };
        let mut acc = lt();
        for &k in ks {
            acc = &acc * &cyclotomic_trace(k)?;
        }
        Ok(acc)
    }

    /// Product of `CT_k` over a multiset of indices.
    pub fn ct_product(ks: &[u64]) -> Result<IntPoly> {
        let mut acc = IntPoly::one();
        for &k in ks {
            acc = &acc * &cyclotomic_trace(k)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev_p(2), desc(&[1, 0, -2]));
        assert_eq!(chebyshev_p(3), desc(&[1, 0, -3, 0]));
    }

    #[test]
    fn lehmer_trace() {
        assert_eq!(trace_of_palindromic(&builtin::lehmer()).unwrap(), builtin::lt());
        assert_eq!(trace_of_palindromic(&builtin::m()).unwrap(), builtin::mt());
    }
}

//! Siegel disks versus hyperbolic fixed points.
//!
//! A fixed point (or a period-3 cycle) of the automorphism with special trace
//! `τ` contributes a rational function `q(w)` of the trace. When
//! `0 < q(τ) < 4` and some conjugate `τ'` has `q(τ') > 4`, the point is the
//! centre of a Siegel disk. When `q(τ) > 4` it is hyperbolic.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::polyring::builtin::{lt, mt, nt};
use crate::polyring::rational_to_f64;
use crate::polyring::{
    cyclotomic, cyclotomic_trace, desc, from_trace, isolate_real_roots, is_salem_trace, AlgebraicReal,
    CycloConvention, IntPoly,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QLabel {
    FixedPoint,
    E8A2A2,
    D10,
    A2,
}

impl QLabel {
    pub const ALL: [QLabel; 4] = [QLabel::FixedPoint, QLabel::E8A2A2, QLabel::D10, QLabel::A2];
}

impl fmt::Display for QLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QLabel::FixedPoint => "fixed_point",
            QLabel::E8A2A2 => "e8a2a2",
            QLabel::D10 => "d10",
            QLabel::A2 => "a2",
        })
    }
}

impl FromStr for QLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QLabel::ALL
            .into_iter()
            .find(|l| alloc::format!("{l}") == s)
            .ok_or_else(|| Error::pre(alloc::format!("unknown q label `{s}` (fixed_point, e8a2a2, d10, a2)")))
    }
}

/// `q(w) = numerator / denominator`, stored coprime with positive leading
/// denominator coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFunction {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
    pub label: QLabel,
}

impl QFunction {
    pub fn new(numerator: IntPoly, denominator: IntPoly, label: QLabel) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::pre("q has zero denominator"));
        }
        let g = numerator.gcd(&denominator);
        let (mut n, mut d) = if g.degree() > 0 {
            (numerator.div_exact(&g).expect("gcd divides"), denominator.div_exact(&g).expect("gcd divides"))
        } else {
            (numerator, denominator)
        };
        if d.lc() < BigInt::from(0) {
            n = -n;
            d = -d;
        }
        Ok(QFunction { numerator: n, denominator: d, label })
    }

    /// `numerator - c * denominator`, whose sign at `w` times the sign of the
    /// denominator is the sign of `q(w) - c`.
    fn shifted(&self, c: i64) -> IntPoly {
        &self.numerator - &self.denominator.scale(&BigInt::from(c))
    }

    /// Exact comparison of `q(τ)` with the integer `c`; `None` at a pole.
    pub fn cmp_at(&self, tau: &AlgebraicReal, c: i64) -> Option<Ordering> {
        let sd = tau.sign_of(&self.denominator);
        if sd == 0 {
            return None;
        }
        Some((tau.sign_of(&self.shifted(c)) * sd).cmp(&0))
    }

    /// Decimal value of `q(τ)`, display only.
    pub fn approx_at(&self, tau: &AlgebraicReal) -> f64 {
        let mut t = tau.clone();
        t.refine_bits(80);
        let (lo, hi) = t.interval();
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        rational_to_f64(&(self.numerator.eval_rational(&mid) / self.denominator.eval_rational(&mid)))
    }
}

impl fmt::Display for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator.to_string_var('w'), self.denominator.to_string_var('w'))
    }
}

/// `w^3 - 3w`, the trace of the cube.
fn cube_trace() -> IntPoly {
    desc(&[1, 0, -3, 0])
}

pub fn builtin_q(label: QLabel) -> QFunction {
    let w3 = cube_trace();
    let (num, den) = match label {
        QLabel::FixedPoint => (desc(&[1, 1]).pow(2), desc(&[1, 2])),
        QLabel::E8A2A2 => (
            &(&desc(&[1, 2]) * &desc(&[1, -1]).pow(2)) * &mt().compose(&w3).pow(2),
            lt().compose(&w3).pow(2),
        ),
        QLabel::D10 => (
            &(&desc(&[1, 2]) * &desc(&[1, -1]).pow(2)) * &nt().compose(&w3).pow(2),
            lt().compose(&w3).pow(2),
        ),
        QLabel::A2 => (desc(&[1, 0, -3]).pow(2), desc(&[1, 2])),
    };
    QFunction::new(num, den, label).expect("builtin q has nonzero denominator")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SH {
    S,
    H,
}

impl fmt::Display for SH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SH::S => "S",
            SH::H => "H",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// A conjugate `τ'` in `(-2, 2)` with `q(τ') > 4`.
    Conjugate(AlgebraicReal),
    /// `q(τ) > 4` at `τ` itself.
    AboveFour,
}

#[derive(Clone, Debug)]
pub struct SiegelVerdict {
    pub verdict: SH,
    pub tau: AlgebraicReal,
    pub witness: Witness,
    pub q_label: QLabel,
}

/// Outcome of the test: a verdict, or the reason none can be given.
pub type SiegelOutcome = core::result::Result<SiegelVerdict, String>;

/// Decide S or H for `τ` under `q`.
///
/// `Ok(Err(reason))` means the proposition does not apply: `q(τ)` is exactly
/// 0 or 4, negative, a pole, or no conjugate witness exists.
pub fn siegel_test(tau: &AlgebraicReal, q: &QFunction) -> Result<SiegelOutcome> {
    // exact degeneracy checks first so that the sign refinements terminate
    if tau.is_root_of(&q.denominator) {
        return Ok(Err(String::from("q has a pole at tau")));
    }
    if tau.is_root_of(&q.numerator) {
        return Ok(Err(String::from("q(tau) = 0 exactly")));
    }
    if tau.is_root_of(&q.shifted(4)) {
        return Ok(Err(String::from("q(tau) = 4 exactly")));
    }
    let mp = tau.minpoly();
    if !is_salem_trace(mp) {
        return Err(Error::pre(alloc::format!(
            "minimal polynomial of tau is not a Salem trace polynomial: {}",
            mp.to_string_var('w')
        )));
    }
    let above = q.cmp_at(tau, 4).expect("pole excluded");
    if above == Ordering::Greater {
        return Ok(Ok(SiegelVerdict { verdict: SH::H, tau: tau.clone(), witness: Witness::AboveFour, q_label: q.label }));
    }
    if q.cmp_at(tau, 0).expect("pole excluded") == Ordering::Less {
        return Ok(Err(String::from("q(tau) < 0")));
    }
    for c in conjugates_in_open_interval(tau) {
        if c.same_value(tau) {
            continue;
        }
        if q.cmp_at(&c, 4) == Some(Ordering::Greater) {
            return Ok(Ok(SiegelVerdict {
                verdict: SH::S,
                tau: tau.clone(),
                witness: Witness::Conjugate(c),
                q_label: q.label,
            }));
        }
    }
    Ok(Err(String::from("no conjugate in (-2, 2) with q > 4")))
}

/// Real roots of the minimal polynomial in `(-2, 2)`, descending.
fn conjugates_in_open_interval(tau: &AlgebraicReal) -> Vec<AlgebraicReal> {
    let mut v: Vec<AlgebraicReal> = isolate_real_roots(tau.minpoly())
        .into_iter()
        .filter(|r| r.cmp_int(-2) == Ordering::Greater && r.cmp_int(2) == Ordering::Less)
        .collect();
    v.sort_by(|a, b| b.cmp_value(a));
    v
}

/// `τ0 = 1 - 2√2`, where `(w+1)^2/(w+2)` crosses 4 inside `(-2, 2)`.
pub fn tau0() -> AlgebraicReal {
    AlgebraicReal::from_interval(
        desc(&[1, -2, -7]),
        BigRational::from_integer(BigInt::from(-2)),
        BigRational::from_integer(BigInt::from(-1)),
        1,
    )
}

/// Shortcut for roots of degree-11 Salem traces: S iff `τ > τ0` and some
/// conjugate lies below `τ0`. Cross-checked against [`siegel_test`].
pub fn threshold_classify_deg22(tau: &AlgebraicReal) -> Result<SH> {
    let mp = tau.minpoly();
    if mp.degree() != 11 || !is_salem_trace(mp) {
        return Err(Error::pre("tau must be a root of a degree 11 Salem trace polynomial"));
    }
    if tau.cmp_int(-2) != Ordering::Greater || tau.cmp_int(2) != Ordering::Less {
        return Err(Error::pre("tau must lie in (-2, 2)"));
    }
    let t0 = tau0();
    let shortcut = if tau.cmp_value(&t0) == Ordering::Less {
        Some(SH::H)
    } else if conjugates_in_open_interval(tau).iter().any(|c| c.cmp_value(&t0) == Ordering::Less) {
        Some(SH::S)
    } else {
        None
    };
    let full = siegel_test(tau, &builtin_q(QLabel::FixedPoint))?.ok().map(|v| v.verdict);
    if shortcut != full {
        return Err(Error::bug(alloc::format!("threshold {shortcut:?} disagrees with siegel test {full:?}")));
    }
    shortcut.ok_or_else(|| Error::pre("no conjugate below tau0"))
}

/// Rational function over the integers, kept unreduced.
#[derive(Clone, Debug)]
struct Frac {
    num: IntPoly,
    den: IntPoly,
}

impl Frac {
    fn new(num: IntPoly, den: IntPoly) -> Self {
        Frac { num, den }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    fn sub(&self, o: &Frac) -> Frac {
        Frac::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    fn equals(&self, o: &Frac) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

/// `z / (1 - (z^{-j} + z^{j+1}) + z)`, cleared of negative powers.
fn fixed_point_term(j: usize) -> Frac {
    let one = BigInt::from(1);
    let num = IntPoly::monomial(j + 1, one.clone());
    // z^j (1 + z) - 1 - z^{2j+1}
    let den = &(&IntPoly::monomial(j, one.clone()) + &IntPoly::monomial(j + 1, one.clone()))
        - &(&IntPoly::one() + &IntPoly::monomial(2 * j + 1, one));
    Frac::new(num, den)
}

/// `1 + z` minus the summed contributions for arms of the given lengths and
/// the parabolic term `z(z+1)/(z-1)^2`.
fn d_series(arms: &[usize]) -> Frac {
    let mut rhs = Frac::new(desc(&[1, 1, 0]), desc(&[1, -1]).pow(2));
    for &len in arms {
        for j in 1..=len {
            rhs = rhs.add(&fixed_point_term(j));
        }
    }
    Frac::new(desc(&[1, 1]), IntPoly::one()).sub(&rhs)
}

fn d_identity_holds(arms: &[usize]) -> bool {
    let d = d_series(arms);
    let c = |k| cyclotomic(k, CycloConvention::Squared).expect("k >= 1");
    let l = crate::polyring::builtin::lehmer();
    let closed = Frac::new(l, crate::polyring::product(&[desc(&[1, 1]), c(1), c(3), c(5)]));
    // the same closed form written through traces, w = z + 1/z
    let ct = |k| from_trace(&cyclotomic_trace(k).expect("k >= 1"));
    let w_form = Frac::new(
        from_trace(&lt()),
        crate::polyring::product(&[desc(&[1, 1]), ct(1), ct(3), ct(5)]),
    );
    d.equals(&closed) && d.equals(&w_form)
}

/// The fixed-point series of the `E8 + A2 + A2` automorphism sums to
/// `L(z) / ((z+1) C1 C3 C5)`.
pub fn verify_d_identity() -> bool {
    d_identity_holds(&[4, 2, 1])
}

/// The same check with the arm lengths supplied, for sanity inversions.
pub fn verify_d_identity_with(arms: &[usize]) -> bool {
    d_identity_holds(arms)
}

//! Real-root isolation by Sturm sequences and exact real algebraic numbers.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{sign_of, IntPoly};

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<IntPoly>,
}

/// Divide by the content but keep the sign of every coefficient.
fn content_reduce(p: &IntPoly) -> IntPoly {
    let g = p.content();
    if g.is_zero() || g.is_one() {
        return p.clone();
    }
    IntPoly::new(p.coeffs().iter().map(|c| c / &g).collect())
}

impl SturmSequence {
    pub fn new(f: &IntPoly) -> Self {
        let mut seq = Vec::new();
        if f.is_zero() {
            return SturmSequence { seq };
        }
        seq.push(content_reduce(f));
        let d = f.derivative();
        if d.is_zero() {
            return SturmSequence { seq };
        }
        seq.push(content_reduce(&d));
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let delta = a.degree() - b.degree();
            let mut r = a.pseudo_rem(b);
            // prem = lc^(delta+1) * rem; flip so that r has the sign of -rem.
            let odd = (delta + 1) % 2 == 1;
            if !(odd && b.lc().is_negative()) {
                r = -&r;
            }
            if r.is_zero() {
                break;
            }
            seq.push(content_reduce(&r));
        }
        SturmSequence { seq }
    }

    /// Sign variations at a rational point.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Sign variations at minus or plus infinity.
    fn variations_inf(&self, positive: bool) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let mut s = sign_of(&p.lc());
            if !positive && p.degree() % 2 == 1 {
                s = -s;
            }
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_inf(false).saturating_sub(self.variations_inf(true))
    }

    /// Number of distinct roots strictly greater than `x`.
    pub fn count_above(&self, x: &BigRational) -> usize {
        self.variations(x).saturating_sub(self.variations_inf(true))
    }
}

/// A power of two strictly above the modulus of every complex root.
pub fn root_bound(f: &IntPoly) -> BigRational {
    let lc = f.lc().abs();
    let mut m = BigInt::zero();
    for c in &f.coeffs()[..f.degree()] {
        let q = c.abs().div_ceil(&lc);
        if q > m {
            m = q;
        }
    }
    let target = m + BigInt::one();
    let mut b = BigInt::one();
    while b <= target {
        b <<= 1;
    }
    BigRational::from_integer(b)
}

/// A real algebraic number given by a squarefree integer polynomial and an
/// open rational interval holding exactly one of its roots.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    minpoly: IntPoly,
    lo: BigRational,
    hi: BigRational,
    multiplicity: u32,
    exact: Option<BigRational>,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl AlgebraicReal {
    /// Build from a squarefree polynomial and an isolating interval.
    ///
    /// The caller guarantees that `(lo, hi)` isolates one root and that the
    /// endpoints are not roots; `debug_assert` checks the sign change.
    pub fn from_interval(minpoly: IntPoly, lo: BigRational, hi: BigRational, multiplicity: u32) -> Self {
        let minpoly = minpoly.primitive_part();
        debug_assert!(lo < hi);
        debug_assert!(minpoly.sign_at(&lo) * minpoly.sign_at(&hi) < 0);
        AlgebraicReal { minpoly, lo, hi, multiplicity, exact: None }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let minpoly = IntPoly::new(alloc::vec![-r.numer().clone(), r.denom().clone()]).primitive_part();
        let one = BigRational::one();
        AlgebraicReal { minpoly, lo: &r - &one, hi: &r + &one, multiplicity: 1, exact: Some(r) }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn with_multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = m;
        self
    }

    /// Exact value when the number is known to be rational.
    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if let Some(r) = &self.exact {
            let w = (&self.hi - &self.lo) / BigInt::from(4);
            self.lo = r - &w;
            self.hi = r + &w;
            return;
        }
        let mid = (&self.lo + &self.hi) * half();
        let sm = self.minpoly.sign_at(&mid);
        if sm == 0 {
            let w = (&self.hi - &self.lo) / BigInt::from(4);
            self.lo = &mid - &w;
            self.hi = &mid + &w;
            self.exact = Some(mid);
            return;
        }
        let sl = self.minpoly.sign_at(&self.lo);
        if sl == sm {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Bisect until the interval is narrower than `width`.
    pub fn refine(&mut self, width: &BigRational) {
        while &self.width() >= width {
            self.bisect();
        }
    }

    /// Refine to width `2^-bits`.
    pub fn refine_bits(&mut self, bits: u32) {
        let w = BigRational::new(BigInt::one(), BigInt::one() << bits);
        self.refine(&w);
    }

    pub fn refined(mut self, bits: u32) -> Self {
        self.refine_bits(bits);
        self
    }

    /// Does `g` vanish at this number?
    pub fn is_root_of(&self, g: &IntPoly) -> bool {
        if g.is_zero() {
            return true;
        }
        if let Some(r) = &self.exact {
            return g.sign_at(r) == 0;
        }
        let h = self.minpoly.gcd(g);
        if h.degree() == 0 {
            return false;
        }
        h.sign_at(&self.lo) * h.sign_at(&self.hi) < 0
    }

    /// Sign of `g` at this number, exact.
    pub fn sign_of(&self, g: &IntPoly) -> i32 {
        if let Some(r) = &self.exact {
            return g.sign_at(r);
        }
        if self.is_root_of(g) {
            return 0;
        }
        let gs = g.squarefree_part();
        let st = SturmSequence::new(&gs);
        let mut a = self.clone();
        loop {
            if let Some(r) = &a.exact {
                return g.sign_at(r);
            }
            let (sl, sh) = (gs.sign_at(&a.lo), gs.sign_at(&a.hi));
            if sl != 0 && sh != 0 && st.count(&a.lo, &a.hi) == 0 {
                return g.sign_at(&a.lo);
            }
            a.bisect();
        }
    }

    /// Compare against a rational number.
    pub fn cmp_rational(&self, c: &BigRational) -> Ordering {
        if let Some(r) = &self.exact {
            return r.cmp(c);
        }
        let mut a = self.clone();
        loop {
            if let Some(r) = &a.exact {
                return r.cmp(c);
            }
            if c <= &a.lo {
                return Ordering::Greater;
            }
            if c >= &a.hi {
                return Ordering::Less;
            }
            if a.minpoly.sign_at(c) == 0 {
                // c is the unique root inside the interval.
                return Ordering::Equal;
            }
            a.bisect();
        }
    }

    pub fn cmp_int(&self, n: i64) -> Ordering {
        self.cmp_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact equality of two algebraic reals.
    pub fn same_value(&self, other: &AlgebraicReal) -> bool {
        if let Some(r) = &other.exact {
            return self.cmp_rational(r) == Ordering::Equal;
        }
        if !self.is_root_of(&other.minpoly) {
            return false;
        }
        self.cmp_rational(&other.lo) == Ordering::Greater && self.cmp_rational(&other.hi) == Ordering::Less
    }

    /// Exact comparison, refining both intervals until they separate.
    pub fn cmp_value(&self, other: &AlgebraicReal) -> Ordering {
        if self.hi <= other.lo {
            return Ordering::Less;
        }
        if other.hi <= self.lo {
            return Ordering::Greater;
        }
        if self.same_value(other) {
            return Ordering::Equal;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.bisect();
            b.bisect();
        }
    }

    /// Midpoint after refining to `2^-60`, as a float for display only.
    pub fn approx(&self) -> f64 {
        if let Some(r) = &self.exact {
            return rational_to_f64(r);
        }
        let mut a = self.clone();
        a.refine_bits(60);
        rational_to_f64(&((&a.lo + &a.hi) * half()))
    }

    /// Decimal text with `digits` digits after the point (display only).
    pub fn decimal(&self, digits: usize) -> String {
        let mut a = self.clone();
        a.refine(&BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits as u32 + 3)));
        let mid = a.exact.clone().unwrap_or_else(|| (&a.lo + &a.hi) * half());
        format_decimal(&mid, digits)
    }
}

/// Round a rational to `digits` decimals and print it.
pub fn format_decimal(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let r = scaled.round().to_integer();
    let neg = r.is_negative();
    let a = r.abs();
    let (ip, fp) = a.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    let _ = write!(s, "{ip}");
    if digits > 0 {
        let f = alloc::format!("{fp}");
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    let scaled = (r * BigRational::from_integer(BigInt::one() << 60u32)).round().to_integer();
    scaled.to_f64().unwrap_or(f64::NAN) / 1_152_921_504_606_846_976.0
}

/// Isolate the real roots of a squarefree polynomial; multiplicity is `mult`.
pub fn isolate_squarefree(g: &IntPoly, mult: u32) -> Vec<AlgebraicReal> {
    let g = g.primitive_part();
    if g.degree() == 0 {
        return Vec::new();
    }
    let st = SturmSequence::new(&g);
    let b = root_bound(&g);
    let mut out = Vec::new();
    let mut stack = alloc::vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = st.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(AlgebraicReal::from_interval(g.clone(), lo, hi, mult));
            continue;
        }
        let mid = split_point(&g, &lo, &hi);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out
}

/// A non-root rational close to the midpoint of `(lo, hi)`.
fn split_point(g: &IntPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let mid = (lo + hi) * half();
    if g.sign_at(&mid) != 0 {
        return mid;
    }
    let w = hi - lo;
    let mut k = 3u32;
    loop {
        let off = &w / BigInt::from(1u64 << k.min(62));
        for cand in [&mid + &off, &mid - &off] {
            if g.sign_at(&cand) != 0 {
                return cand;
            }
        }
        k += 1;
    }
}

/// All distinct real roots of `f` in increasing order, with multiplicities.
pub fn isolate_real_roots(f: &IntPoly) -> Vec<AlgebraicReal> {
    let mut all = Vec::new();
    for (i, g) in f.squarefree_decomposition().iter().enumerate() {
        all.extend(isolate_squarefree(g, i as u32 + 1));
    }
    sort_values(&mut all);
    separate(&mut all);
    all
}

/// Refine neighbours of a sorted list until their intervals are disjoint.
pub fn separate(v: &mut [AlgebraicReal]) {
    for i in 1..v.len() {
        let (l, r) = v.split_at_mut(i);
        let (a, b) = (&mut l[i - 1], &mut r[0]);
        while a.hi > b.lo {
            a.bisect();
            b.bisect();
        }
    }
}

/// Sort algebraic reals by value with exact comparisons.
pub fn sort_values(v: &mut [AlgebraicReal]) {
    v.sort_by(|a, b| a.cmp_value(b));
}

//! Trace clusters of a real hypergeometric pair and the index formulas.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::polyring::{isolate_real_roots, trace_polynomial_pair, AlgebraicReal, IntPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// Interlacing decomposition of the roots of `Φ·Ψ` in `[-2, 2]`.
///
/// Clusters are listed from `+2` downward: `A_1, B_1, A_2, ...`. Elements
/// inside a cluster are sorted increasingly and carry their multiplicity.
#[derive(Clone, Debug)]
pub struct TraceClusters {
    pub rank: usize,
    pub phi: IntPoly,
    pub psi: IntPoly,
    /// `None` when the rank is even and `B_on` is empty.
    pub s: Option<usize>,
    pub a_clusters: Vec<Vec<AlgebraicReal>>,
    pub b_clusters: Vec<Vec<AlgebraicReal>>,
    pub a_gt2: usize,
    pub b_gt2: usize,
    pub a_off: usize,
    pub b_off: usize,
    pub mult_at_2: usize,
    pub mult_at_neg2: usize,
    /// Every real root of `Φ·Ψ`, increasing.
    pub real_roots: Vec<(AlgebraicReal, Side)>,
}

fn msize(c: &[AlgebraicReal]) -> usize {
    c.iter().map(|r| r.multiplicity() as usize).sum()
}

/// Sort and merge equal values, adding multiplicities.
pub fn merge_roots(mut v: Vec<AlgebraicReal>) -> Vec<AlgebraicReal> {
    v.sort_by(|a, b| a.cmp_value(b));
    let mut out: Vec<AlgebraicReal> = Vec::with_capacity(v.len());
    for r in v {
        if let Some(last) = out.last_mut() {
            if last.cmp_value(&r) == Ordering::Equal {
                let m = last.multiplicity() + r.multiplicity();
                *last = last.clone().with_multiplicity(m);
                continue;
            }
        }
        out.push(r);
    }
    out
}

/// Paper-style multiset text: sizes sorted, `0^2 1^7 2`.
pub fn signature_string(sizes: &[usize]) -> String {
    let mut v = sizes.to_vec();
    v.sort_unstable();
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let c = j - i;
        parts.push(if c == 1 { alloc::format!("{}", v[i]) } else { alloc::format!("{}^{}", v[i], c) });
        i = j;
    }
    parts.join(" ")
}

/// Parse `0^2 1^7 2` back into a sorted size list.
pub fn parse_signature(s: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (b, e): (usize, usize) = match tok.split_once('^') {
            Some((b, e)) => (b.parse().ok()?, e.parse().ok()?),
            None => (tok.parse().ok()?, 1usize),
        };
        out.extend(core::iter::repeat(b).take(e));
    }
    out.sort_unstable();
    Some(out)
}

impl TraceClusters {
    /// Build from the trace polynomials of a rank `rank` pair.
    pub fn new(phi: &IntPoly, psi: &IntPoly, rank: usize) -> Result<Self> {
        let ra = isolate_real_roots(phi);
        let rb = isolate_real_roots(psi);
        Self::from_roots(phi, psi, rank, ra, rb)
    }

    /// Build from `(φ, ψ)` directly.
    pub fn from_pair(phi: &IntPoly, psi: &IntPoly) -> Result<Self> {
        let (fa, fb) = trace_polynomial_pair(phi, psi)?;
        Self::new(&fa, &fb, phi.degree())
    }

    /// Build from already isolated real roots (distinct values, with
    /// multiplicities). Used by the searches, which cache roots per factor.
    pub fn from_roots(phi: &IntPoly, psi: &IntPoly, rank: usize, ra: Vec<AlgebraicReal>, rb: Vec<AlgebraicReal>) -> Result<Self> {
        let even = rank % 2 == 0;
        let half = rank / 2;
        let (dphi, dpsi) = if even { (half.wrapping_sub(1), half) } else { (half, half) };
        if rank == 0 || phi.is_zero() || psi.is_zero() || phi.degree() != dphi || psi.degree() != dpsi {
            return Err(Error::pre(alloc::format!("trace degrees ({dphi}, {dpsi}) expected for rank {rank}")));
        }
        if phi.gcd(psi).degree() > 0 {
            return Err(Error::pre("Res(Phi, Psi) != 0 fails: shared roots"));
        }
        let two = |p: &IntPoly, x: i64| p.eval_i64(x) == num_bigint::BigInt::from(0);
        if two(psi, 2) || (even && two(psi, -2)) || (!even && two(phi, -2)) {
            return Err(Error::pre("phi and psi share a root at z = 1 or z = -1"));
        }
        let mut all: Vec<(AlgebraicReal, Side)> = Vec::with_capacity(ra.len() + rb.len());
        all.extend(ra.into_iter().map(|r| (r.refined(24), Side::A)));
        all.extend(rb.into_iter().map(|r| (r.refined(24), Side::B)));
        all.sort_by(|x, y| x.0.cmp_value(&y.0));

        let (mut a_gt2, mut b_gt2, mut mult_at_2, mut mult_at_neg2) = (0, 0, 0, 0);
        // runs read from +2 downward
        let mut runs: Vec<(Side, Vec<AlgebraicReal>)> = Vec::new();
        for (r, side) in all.iter().rev() {
            let m = r.multiplicity() as usize;
            let c2 = r.cmp_int(2);
            let cm2 = r.cmp_int(-2);
            if c2 == Ordering::Greater {
                match side {
                    Side::A => a_gt2 += m,
                    Side::B => b_gt2 += m,
                }
                continue;
            }
            if cm2 == Ordering::Less {
                continue;
            }
            if c2 == Ordering::Equal {
                mult_at_2 += m;
            }
            if cm2 == Ordering::Equal {
                mult_at_neg2 += m;
            }
            match runs.last_mut() {
                Some((s, v)) if s == side => v.push(r.clone()),
                _ => runs.push((*side, alloc::vec![r.clone()])),
            }
        }
        for (_, v) in runs.iter_mut() {
            v.reverse();
        }
        let mut a_clusters = Vec::new();
        let mut b_clusters = Vec::new();
        let has_b = runs.iter().any(|(s, _)| *s == Side::B);
        let s;
        if even && !has_b {
            s = None;
            a_clusters.push(runs.into_iter().flat_map(|(_, v)| v).collect());
        } else {
            let mut it = runs.into_iter().peekable();
            if matches!(it.peek(), Some((Side::B, _))) {
                a_clusters.push(Vec::new());
            }
            for (side, v) in it {
                match side {
                    Side::A => a_clusters.push(v),
                    Side::B => b_clusters.push(v),
                }
            }
            if even {
                if a_clusters.len() == b_clusters.len() {
                    a_clusters.push(Vec::new());
                }
                debug_assert_eq!(a_clusters.len(), b_clusters.len() + 1);
            } else {
                if a_clusters.is_empty() {
                    a_clusters.push(Vec::new());
                }
                if b_clusters.len() < a_clusters.len() {
                    b_clusters.push(Vec::new());
                }
                debug_assert_eq!(a_clusters.len(), b_clusters.len());
            }
            s = Some(b_clusters.len());
        }
        let a_on: usize = a_clusters.iter().map(|c| msize(c)).sum();
        let b_on: usize = b_clusters.iter().map(|c| msize(c)).sum();
        Ok(TraceClusters {
            rank,
            phi: phi.clone(),
            psi: psi.clone(),
            s,
            a_off: phi.degree() - a_on,
            b_off: psi.degree() - b_on,
            a_clusters,
            b_clusters,
            a_gt2,
            b_gt2,
            mult_at_2,
            mult_at_neg2,
            real_roots: all,
        })
    }

    pub fn is_even(&self) -> bool {
        self.rank % 2 == 0
    }

    pub fn a_sizes(&self) -> Vec<usize> {
        self.a_clusters.iter().map(|c| msize(c)).collect()
    }

    pub fn b_sizes(&self) -> Vec<usize> {
        self.b_clusters.iter().map(|c| msize(c)).collect()
    }

    /// `|A_i|`, 1-based; 0 when out of range.
    pub fn a_size(&self, i: usize) -> usize {
        self.a_clusters.get(i.wrapping_sub(1)).map_or(0, |c| msize(c))
    }

    pub fn b_size(&self, i: usize) -> usize {
        self.b_clusters.get(i.wrapping_sub(1)).map_or(0, |c| msize(c))
    }

    pub fn a_on(&self) -> usize {
        self.a_sizes().iter().sum()
    }

    pub fn b_on(&self) -> usize {
        self.b_sizes().iter().sum()
    }

    /// `|A_in| = |A_2| + ... + |A_s|`.
    pub fn a_in(&self) -> usize {
        match self.s {
            Some(s) => (2..=s).map(|i| self.a_size(i)).sum(),
            None => 0,
        }
    }

    pub fn a_in_sizes(&self) -> Vec<usize> {
        match self.s {
            Some(s) => (2..=s).map(|i| self.a_size(i)).collect(),
            None => Vec::new(),
        }
    }

    pub fn a_signature(&self) -> String {
        signature_string(&self.a_sizes())
    }

    pub fn b_signature(&self) -> String {
        signature_string(&self.b_sizes())
    }

    pub fn a_in_signature(&self) -> String {
        signature_string(&self.a_in_sizes())
    }

    /// All distinct elements of `A_on`, increasing.
    pub fn a_elements(&self) -> Vec<AlgebraicReal> {
        let mut v: Vec<AlgebraicReal> = self.a_clusters.iter().flatten().cloned().collect();
        v.sort_by(|x, y| x.cmp_value(y));
        v
    }

    pub fn b_elements(&self) -> Vec<AlgebraicReal> {
        let mut v: Vec<AlgebraicReal> = self.b_clusters.iter().flatten().cloned().collect();
        v.sort_by(|x, y| x.cmp_value(y));
        v
    }

    /// Which side an element of `[-2, 2]` belongs to, with multiplicity.
    pub fn locate(&self, tau: &AlgebraicReal) -> Option<(Side, usize)> {
        self.real_roots
            .iter()
            .find(|(r, _)| r.cmp_value(tau) == Ordering::Equal)
            .filter(|(r, _)| r.cmp_int(2) != Ordering::Greater && r.cmp_int(-2) != Ordering::Less)
            .map(|(r, s)| (*s, r.multiplicity() as usize))
    }

    /// Roots of `Φ·Ψ` above `τ` (at least 2 when `τ = 2`), with multiplicity.
    pub fn rho(&self, tau: &AlgebraicReal) -> usize {
        let at2 = tau.cmp_int(2) == Ordering::Equal;
        self.real_roots
            .iter()
            .filter(|(r, _)| {
                let c = r.cmp_value(tau);
                c == Ordering::Greater || (at2 && c == Ordering::Equal)
            })
            .map(|(r, _)| r.multiplicity() as usize)
            .sum()
    }

    pub fn rho_int(&self, t: i64) -> usize {
        self.rho(&AlgebraicReal::from_integer(t))
    }
}

/// `ε = (-1)^{|A_1| + |A_{>2}| + |B_{>2}|}`.
pub fn epsilon_sign(tc: &TraceClusters) -> Result<i32> {
    if tc.s.is_none() {
        return Err(Error::pre("B_on is empty in even rank: the index is zero"));
    }
    Ok(parity_sign(tc.a_size(1) + tc.a_gt2 + tc.b_gt2))
}

fn parity_sign(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexData {
    pub epsilon: i32,
    pub delta: i32,
    pub s_sum: i64,
    pub p_minus_q: i64,
    pub i_set: Vec<usize>,
    /// `σ_i` for `i = 2..=s`; entry `k` is `σ_{k+2}`.
    pub sigma: Vec<usize>,
    pub s: Option<usize>,
    pub a_in: usize,
    pub b_on: usize,
}

impl IndexData {
    /// The numerical constraints on `S`, `I`, `s`, `A_in` and `B_on`.
    pub fn check_constraints(&self, even: bool, b_s_null: bool) -> Result<()> {
        let Some(s) = self.s else { return Ok(()) };
        let i = self.i_set.len() as i64;
        let ain = self.a_in as i64;
        let sm1 = s as i64 - 1;
        let ok_par = (self.s_sum - i).rem_euclid(2) == 0 && (i - ain).rem_euclid(2) == 0;
        let ok_chain = self.s_sum.abs() <= i && i <= sm1 && 2 * sm1 <= i + ain && i + ain <= 2 * ain;
        // In odd rank B_s may be null; the bound then applies to s - 1.
        let s_eff = if !even && b_s_null { s - 1 } else { s };
        let ok_b = s_eff <= self.b_on;
        if ok_par && ok_chain && ok_b {
            Ok(())
        } else {
            Err(Error::bug(alloc::format!("index constraints violated: {self:?}")))
        }
    }
}

/// Index `p - q` of the invariant form from the cluster data.
pub fn index(tc: &TraceClusters) -> Result<IndexData> {
    let even = tc.is_even();
    let Some(s) = tc.s else {
        return Ok(IndexData {
            epsilon: parity_sign(tc.a_size(1) + tc.a_gt2 + tc.b_gt2),
            delta: 0,
            s_sum: 0,
            p_minus_q: 0,
            i_set: Vec::new(),
            sigma: Vec::new(),
            s: None,
            a_in: 0,
            b_on: 0,
        });
    };
    let epsilon = epsilon_sign(tc)?;
    let a_in = tc.a_in();
    let b_on = tc.b_on();
    let delta = if even { parity_sign(a_in + b_on + 1) } else { 0 };
    let mut sigma = Vec::new();
    let mut acc = tc.b_size(1);
    let mut i_set = Vec::new();
    let mut s_sum = 0i64;
    for i in 2..=s {
        if i > 2 {
            acc += tc.a_size(i - 1) + tc.b_size(i - 1);
        }
        sigma.push(acc);
        if tc.a_size(i) % 2 == 1 {
            i_set.push(i);
            s_sum += parity_sign(acc) as i64;
        }
    }
    let p_minus_q = epsilon as i64 * (1 + delta as i64 - 2 * s_sum);
    let d = IndexData { epsilon, delta, s_sum, p_minus_q, i_set, sigma, s: Some(s), a_in, b_on };
    let b_s_null = tc.b_size(s) == 0;
    d.check_constraints(even, b_s_null)?;
    if (p_minus_q - tc.rank as i64).rem_euclid(2) != 0 {
        return Err(Error::bug("p - q and the rank differ in parity"));
    }
    Ok(d)
}

/// Local index `Idx(τ)` of an element of `A_on ∪ B_on` other than `±2`.
pub fn local_index(tc: &TraceClusters, tau: &AlgebraicReal) -> Result<i32> {
    if tau.cmp_int(2) != Ordering::Less || tau.cmp_int(-2) != Ordering::Greater {
        return Err(Error::pre("local index at ±2 is given by idx(±1)"));
    }
    let (side, m) = tc.locate(tau).ok_or_else(|| Error::pre("tau is not a root of Phi Psi in [-2, 2]"))?;
    if m % 2 == 0 {
        return Ok(0);
    }
    let rho = tc.rho(tau);
    Ok(match side {
        Side::A => parity_sign(rho + 1),
        Side::B => parity_sign(rho),
    })
}

/// `idx(1) = (-1)^{ρ(2)}`.
pub fn idx_one(tc: &TraceClusters) -> i32 {
    parity_sign(tc.rho_int(2))
}

/// `idx(-1) = (-1)^{ρ(-2) + n + 1}`.
pub fn idx_minus_one(tc: &TraceClusters) -> i32 {
    parity_sign(tc.rho_int(-2) + tc.rank + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGroupIndices {
    pub idx_one: i32,
    pub idx_minus_one: i32,
    pub idx_a1: i32,
    pub idx_a_last: i32,
    pub idx_a_in: i32,
    pub idx_b_on: i32,
    /// `|A_1°|` and `|A_{s+1}°|`.
    pub a1_circ: usize,
    pub a_last_circ: usize,
}

impl ClusterGroupIndices {
    /// Compare with the closed forms in terms of `ε`, `δ`, `S`, `p - q`.
    pub fn matches(&self, d: &IndexData) -> bool {
        let e = d.epsilon;
        let ed = d.epsilon * d.delta;
        let par = |k: usize| (k % 2) as i32;
        self.idx_one == e * parity_sign(self.a1_circ)
            && self.idx_minus_one == ed * parity_sign(self.a_last_circ)
            && self.idx_a1 == e * par(self.a1_circ)
            && self.idx_a_last == ed * par(self.a_last_circ)
            && self.idx_a_in as i64 == -(e as i64) * d.s_sum
            && 2 * self.idx_b_on as i64 == d.p_minus_q
            && e == self.idx_one + 2 * self.idx_a1
            && ed == self.idx_minus_one + 2 * self.idx_a_last
    }
}

/// Sums of local indices over the cluster groups, computed root by root.
pub fn cluster_group_indices(tc: &TraceClusters) -> Result<ClusterGroupIndices> {
    let Some(s) = tc.s else {
        return Err(Error::pre("even rank with B_on nonempty required"));
    };
    if !tc.is_even() {
        return Err(Error::pre("cluster group indices need even rank"));
    }
    let sum = |els: &mut dyn Iterator<Item = &AlgebraicReal>| -> Result<i32> {
        let mut t = 0;
        for r in els {
            if r.multiplicity() % 2 == 1 {
                t += local_index(tc, r)?;
            }
        }
        Ok(t)
    };
    let a1: Vec<&AlgebraicReal> = tc.a_clusters[0].iter().filter(|r| r.cmp_int(2) == Ordering::Less).collect();
    let al: Vec<&AlgebraicReal> = tc.a_clusters[s].iter().filter(|r| r.cmp_int(-2) == Ordering::Greater).collect();
    let ms = |v: &[&AlgebraicReal]| v.iter().map(|r| r.multiplicity() as usize).sum::<usize>();
    Ok(ClusterGroupIndices {
        idx_one: idx_one(tc),
        idx_minus_one: idx_minus_one(tc),
        idx_a1: sum(&mut a1.iter().copied())?,
        idx_a_last: sum(&mut al.iter().copied())?,
        idx_a_in: sum(&mut tc.a_clusters[1..s].iter().flatten())?,
        idx_b_on: sum(&mut tc.b_clusters.iter().flatten())?,
        a1_circ: ms(&a1),
        a_last_circ: ms(&al),
    })
}

/// Cluster sizes on the unit circle, listed cyclically `a_1, b_1, a_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirclePattern {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub a_off: usize,
    pub b_off: usize,
}

impl CirclePattern {
    /// Lift the trace-level clusters to the circle.
    pub fn from_clusters(tc: &TraceClusters) -> Option<Self> {
        let s = tc.s?;
        let a = tc.a_sizes();
        let b = tc.b_sizes();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        if tc.is_even() {
            // a1 b1 a2 ... b_s a_{s+1} b'_s a'_s ... a'_2 b'_1
            ca.push(2 * a[0] + 1);
            for i in 0..s {
                cb.push(b[i]);
                ca.push(if i + 1 == s { 2 * a[s] + 1 } else { a[i + 1] });
            }
            for i in (0..s).rev() {
                cb.push(b[i]);
                if i > 0 {
                    ca.push(a[i]);
                }
            }
        } else {
            // a1 b1 ... a_s b_s a'_s b'_{s-1} ... a'_2 b'_1
            ca.push(2 * a[0] + 1);
            for i in 0..s {
                cb.push(if i + 1 == s { 2 * b[i] + 1 } else { b[i] });
                if i + 1 < s {
                    ca.push(a[i + 1]);
                }
            }
            for i in (1..s).rev() {
                ca.push(a[i]);
                cb.push(b[i - 1]);
            }
        }
        Some(CirclePattern { a: ca, b: cb, a_off: 2 * tc.a_off, b_off: 2 * tc.b_off })
    }

    pub fn rank(&self) -> usize {
        self.a.iter().sum::<usize>() + self.a_off
    }

    fn sig(v: &[usize]) -> Vec<usize> {
        let mut s: Vec<usize> = v.iter().copied().filter(|&x| x > 0).collect();
        s.sort_unstable();
        s
    }

    fn pattern(ones: usize, top: Option<usize>) -> Vec<usize> {
        let mut v = alloc::vec![1; ones];
        v.extend(top);
        v
    }

    /// Unique size-2 clusters on both sides are cyclic neighbours.
    pub fn doubles_adjacent(&self) -> bool {
        let m = self.a.len();
        let ia = self.a.iter().position(|&x| x == 2);
        let ib = self.b.iter().position(|&x| x == 2);
        match (ia, ib) {
            // a_i sits between b_{i-1} and b_i
            (Some(i), Some(j)) if m == self.b.len() => j == i || (j + 1) % m == i,
            _ => false,
        }
    }

    /// Match against the five Lorentzian patterns; pattern only.
    pub fn lorentz_type(&self) -> Option<u8> {
        let n = self.rank();
        if n < 3 {
            return None;
        }
        let (sa, sb) = (Self::sig(&self.a), Self::sig(&self.b));
        let p12 = Self::pattern(n - 2, Some(2));
        let p13 = Self::pattern(n - 3, Some(3));
        let p1 = Self::pattern(n - 2, None);
        let off = (self.a_off, self.b_off);
        if sa == p12 && sb == p12 && off == (0, 0) && self.doubles_adjacent() {
            Some(1)
        } else if sa == p13 && sb == p13 && off == (0, 0) {
            Some(2)
        } else if sa == p13 && sb == p1 && off == (0, 2) {
            Some(3)
        } else if sa == p1 && sb == p13 && off == (2, 0) {
            Some(4)
        } else if sa == p1 && sb == p1 && off == (2, 2) {
            Some(5)
        } else {
            None
        }
    }
}

/// Lorentzian type 1..=5, or `None` when `|p - q| != n - 2` or no row fits.
pub fn lorentz_classify(tc: &TraceClusters) -> Result<Option<u8>> {
    let d = index(tc)?;
    if d.p_minus_q.unsigned_abs() as usize + 2 != tc.rank {
        return Ok(None);
    }
    Ok(CirclePattern::from_clusters(tc).and_then(|c| c.lorentz_type()))
}

//! Hypergeometric K3 lattices: rank-22 classification, positive Hodge
//! isometries and their special traces.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::clusters::{index, local_index, idx_minus_one, idx_one, signature_string, IndexData, Side, TraceClusters};
use crate::error::{Error, Result};
use crate::polyring::{
    classify_product, pair_from_traces, trace_of_palindromic, trace_polynomial_pair, AlgebraicReal, FactorTag, IntPoly,
    PalindromeClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HodgeType {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for HodgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HodgeType::Elliptic => "elliptic",
            HodgeType::Parabolic => "parabolic",
            HodgeType::Hyperbolic => "hyperbolic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    EpA,
    HypA,
    HypB,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::EpA => "ep-A",
            Table::HypA => "hyp-A",
            Table::HypB => "hyp-B",
        })
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Rank-22 index ±16 configuration: case 1..=8 and the value of `ε(p - q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank22Case {
    pub case: u8,
    pub eps_index: i64,
}

fn sizes_sig(v: &[usize]) -> String {
    signature_string(v)
}

/// The unique size-2 A cluster (among `range`) and B cluster, if adjacent.
fn adjacent_doubles(tc: &TraceClusters, a_from: usize) -> Option<(usize, usize)> {
    let a = tc.a_sizes();
    let b = tc.b_sizes();
    let ia: Vec<usize> = (a_from..=a.len()).filter(|&i| a[i - 1] == 2).collect();
    let ib: Vec<usize> = (1..=b.len()).filter(|&j| b[j - 1] == 2).collect();
    if ia.len() != 1 || ib.len() != 1 {
        return None;
    }
    let (k, l) = (ia[0], ib[0]);
    // A_k lies between B_{k-1} and B_k
    if l == k || l + 1 == k {
        Some((k, l))
    } else {
        None
    }
}

/// Match the rank-22 index ±16 table.
pub fn classify_rank22(tc: &TraceClusters) -> Option<Rank22Case> {
    if tc.rank != 22 {
        return None;
    }
    let s = tc.s?;
    let ain = sizes_sig(&tc.a_in_sizes());
    let bon = tc.b_signature();
    let m = |sv: usize, a: &str, b: &str| s == sv && ain == a && bon == b;
    let (case, eps) = if m(8, "1^7", "1^8") {
        (1, 16)
    } else if m(8, "1^6 3", "1^8") {
        (2, 16)
    } else if m(8, "1^7", "1^7 3") {
        (3, 16)
    } else if m(8, "1^6 3", "1^7 3") {
        (4, 16)
    } else if m(9, "1^7 2", "1^8 2") && adjacent_doubles(tc, 2).is_some() {
        (5, 16)
    } else if (m(9, "1^8", "1^8 2") || m(9, "1^7 3", "1^8 2")) && (tc.b_size(9) == 2 || tc.b_size(1) == 2) {
        let c = if tc.a_in() == 8 { 6 } else { 7 };
        (c, if tc.b_size(9) == 2 { 16 } else { -16 })
    } else if m(10, "1^8 2", "1^10") && (tc.a_size(10) == 2 || tc.a_size(2) == 2) {
        (8, if tc.a_size(10) == 2 { 16 } else { -16 })
    } else {
        return None;
    };
    Some(Rank22Case { case, eps_index: eps })
}

/// Any non-null `A_on` cluster has size 1 except at most one of size 2 or 3;
/// likewise for `B_on`.
pub fn check_cluster_simpleness(tc: &TraceClusters) -> Result<()> {
    for (name, sizes) in [("A", tc.a_sizes()), ("B", tc.b_sizes())] {
        let big: Vec<usize> = sizes.iter().copied().filter(|&x| x > 1).collect();
        if big.len() > 1 || big.iter().any(|&x| x > 3) {
            return Err(Error::bug(alloc::format!("{name}_on clusters {sizes:?} break the simpleness lemma")));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
enum Cond {
    A(usize, usize),
    B(usize, usize),
    Adjacent,
}

#[derive(Clone, Copy, Debug)]
enum St {
    MiddleTriple,
    MinA(usize),
    MaxA(usize),
    MinB(usize),
    MaxB(usize),
    InnerAp,
    ElemA(usize),
    ElemB(usize),
}

struct Row {
    case: u8,
    s: usize,
    a: &'static str,
    b: &'static str,
    /// ep-A: Some(true) when `A_1` is null.
    a1_null: Option<bool>,
    /// `|B_off|` for side A tables.
    b_off: Option<usize>,
    conds: &'static [Cond],
    st: St,
}

const EP_A: &[Row] = &[
    Row { case: 1, s: 8, a: "0 1^7 3", b: "1^8", a1_null: Some(false), b_off: Some(3), conds: &[], st: St::MiddleTriple },
    Row { case: 2, s: 8, a: "0 1^7 3", b: "1^7 3", a1_null: Some(false), b_off: Some(1), conds: &[], st: St::MiddleTriple },
    Row { case: 3, s: 9, a: "0^2 1^7 3", b: "1^8 2", a1_null: Some(true), b_off: Some(1), conds: &[Cond::B(1, 2)], st: St::MiddleTriple },
    Row { case: 4, s: 8, a: "1^8 2", b: "1^8", a1_null: Some(false), b_off: Some(3), conds: &[Cond::A(9, 2)], st: St::MinA(9) },
    Row { case: 5, s: 8, a: "1^8 2", b: "1^7 3", a1_null: Some(false), b_off: Some(1), conds: &[Cond::A(9, 2)], st: St::MinA(9) },
    Row { case: 6, s: 9, a: "0 1^8 2", b: "1^8 2", a1_null: Some(false), b_off: Some(1), conds: &[Cond::Adjacent], st: St::InnerAp },
    Row { case: 7, s: 9, a: "0 1^8 2", b: "1^8 2", a1_null: Some(true), b_off: Some(1), conds: &[Cond::A(10, 2), Cond::B(1, 2)], st: St::MinA(10) },
    Row { case: 8, s: 10, a: "0^2 1^8 2", b: "1^10", a1_null: Some(true), b_off: Some(1), conds: &[Cond::A(2, 2)], st: St::MaxA(2) },
    Row { case: 9, s: 9, a: "1^10", b: "1^8 2", a1_null: Some(false), b_off: Some(1), conds: &[Cond::B(9, 2)], st: St::ElemA(10) },
];

const HYP_A: &[Row] = &[
    Row { case: 1, s: 8, a: "0^2 1^6 3", b: "1^8", a1_null: None, b_off: Some(3), conds: &[], st: St::MiddleTriple },
    Row { case: 2, s: 8, a: "0^2 1^6 3", b: "1^7 3", a1_null: None, b_off: Some(1), conds: &[], st: St::MiddleTriple },
    Row { case: 3, s: 8, a: "0 1^7 2", b: "1^8", a1_null: None, b_off: Some(3), conds: &[Cond::A(1, 2)], st: St::MaxA(1) },
    Row { case: 4, s: 8, a: "0 1^7 2", b: "1^8", a1_null: None, b_off: Some(3), conds: &[Cond::A(9, 2)], st: St::MinA(9) },
    Row { case: 5, s: 8, a: "0 1^7 2", b: "1^7 3", a1_null: None, b_off: Some(1), conds: &[Cond::A(1, 2)], st: St::MaxA(1) },
    Row { case: 6, s: 8, a: "0 1^7 2", b: "1^7 3", a1_null: None, b_off: Some(1), conds: &[Cond::A(9, 2)], st: St::MinA(9) },
    Row { case: 7, s: 9, a: "0^2 1^7 2", b: "1^8 2", a1_null: None, b_off: Some(1), conds: &[Cond::Adjacent], st: St::InnerAp },
    Row { case: 8, s: 9, a: "0 1^9", b: "1^8 2", a1_null: None, b_off: Some(1), conds: &[Cond::A(1, 1), Cond::B(1, 2)], st: St::ElemA(1) },
    Row { case: 9, s: 9, a: "0 1^9", b: "1^8 2", a1_null: None, b_off: Some(1), conds: &[Cond::A(10, 1), Cond::B(9, 2)], st: St::ElemA(10) },
];

/// Side B: `a` is `[A_in]`.
const HYP_B: &[Row] = &[
    Row { case: 1, s: 8, a: "1^7", b: "1^7 3", a1_null: None, b_off: None, conds: &[], st: St::MiddleTriple },
    Row { case: 2, s: 8, a: "1^6 3", b: "1^7 3", a1_null: None, b_off: None, conds: &[], st: St::MiddleTriple },
    Row { case: 3, s: 9, a: "1^7 2", b: "1^8 2", a1_null: None, b_off: None, conds: &[Cond::Adjacent], st: St::InnerAp },
    Row { case: 4, s: 9, a: "1^8", b: "1^8 2", a1_null: None, b_off: None, conds: &[Cond::B(1, 2)], st: St::MaxB(1) },
    Row { case: 5, s: 9, a: "1^8", b: "1^8 2", a1_null: None, b_off: None, conds: &[Cond::B(9, 2)], st: St::MinB(9) },
    Row { case: 6, s: 9, a: "1^7 3", b: "1^8 2", a1_null: None, b_off: None, conds: &[Cond::B(1, 2)], st: St::MaxB(1) },
    Row { case: 7, s: 9, a: "1^7 3", b: "1^8 2", a1_null: None, b_off: None, conds: &[Cond::B(9, 2)], st: St::MinB(9) },
    Row { case: 8, s: 10, a: "1^8 2", b: "1^10", a1_null: None, b_off: None, conds: &[Cond::A(2, 2)], st: St::ElemB(1) },
    Row { case: 9, s: 10, a: "1^8 2", b: "1^10", a1_null: None, b_off: None, conds: &[Cond::A(10, 2)], st: St::ElemB(10) },
];

fn sorted_cluster(c: &[AlgebraicReal]) -> Vec<AlgebraicReal> {
    let mut v = c.to_vec();
    v.sort_by(|x, y| x.cmp_value(y));
    v
}

fn locate_st(tc: &TraceClusters, st: St, side: Side) -> Option<AlgebraicReal> {
    let ac = |i: usize| tc.a_clusters.get(i.wrapping_sub(1)).map(|c| sorted_cluster(c));
    let bc = |i: usize| tc.b_clusters.get(i.wrapping_sub(1)).map(|c| sorted_cluster(c));
    match st {
        St::MiddleTriple => {
            let clusters = match side {
                Side::A => &tc.a_clusters,
                Side::B => &tc.b_clusters,
            };
            let t: Vec<&Vec<AlgebraicReal>> = clusters.iter().filter(|c| c.len() == 3).collect();
            if t.len() != 1 {
                return None;
            }
            Some(sorted_cluster(t[0])[1].clone())
        }
        St::MinA(i) => ac(i)?.first().cloned(),
        St::MaxA(i) => ac(i)?.last().cloned(),
        St::MinB(i) => bc(i)?.first().cloned(),
        St::MaxB(i) => bc(i)?.last().cloned(),
        St::ElemA(i) => ac(i).filter(|c| c.len() == 1).map(|c| c[0].clone()),
        St::ElemB(i) => bc(i).filter(|c| c.len() == 1).map(|c| c[0].clone()),
        St::InnerAp => {
            let (k, l) = adjacent_doubles(tc, if side == Side::B { 2 } else { 1 })?;
            let mut four: Vec<(AlgebraicReal, Side)> = Vec::new();
            // a double A cluster may be one integer root of multiplicity 2
            for r in ac(k)? {
                for _ in 0..r.multiplicity() {
                    four.push((r.clone(), Side::A));
                }
            }
            four.extend(bc(l)?.into_iter().map(|r| (r, Side::B)));
            if four.len() != 4 {
                return None;
            }
            four.sort_by(|x, y| x.0.cmp_value(&y.0));
            four[1..3].iter().find(|(_, s)| *s == side).map(|(r, _)| r.clone())
        }
    }
}

fn row_matches(tc: &TraceClusters, row: &Row, side: Side) -> bool {
    let Some(s) = tc.s else { return false };
    if s != row.s {
        return false;
    }
    let a_sig = match side {
        Side::A => tc.a_signature(),
        Side::B => tc.a_in_signature(),
    };
    if a_sig != row.a || tc.b_signature() != row.b {
        return false;
    }
    if let Some(null) = row.a1_null {
        if (tc.a_size(1) == 0) != null {
            return false;
        }
    }
    if let Some(bo) = row.b_off {
        if tc.b_off != bo {
            return false;
        }
    }
    row.conds.iter().all(|c| match *c {
        Cond::A(i, k) => tc.a_size(i) == k,
        Cond::B(i, k) => tc.b_size(i) == k,
        Cond::Adjacent => adjacent_doubles(tc, if side == Side::B { 2 } else { 1 }).is_some(),
    })
}

/// Result of the table path: table, case, special trace.
#[derive(Clone, Debug)]
pub struct TableMatch {
    pub table: Table,
    pub case: u8,
    pub special_trace: AlgebraicReal,
}

/// Table path. Assumes the simpleness and endpoint conditions of the side
/// were already checked.
pub fn match_tables(tc: &TraceClusters, side: Side) -> Option<TableMatch> {
    let tables: &[(Table, &[Row])] = match side {
        Side::A if tc.a_gt2 == 0 && tc.a_off == 0 => &[(Table::EpA, EP_A)],
        Side::A if tc.a_gt2 == 1 && tc.a_off == 1 && tc.mult_at_2 == 0 => &[(Table::HypA, HYP_A)],
        Side::A => return None,
        Side::B if tc.b_gt2 == 1 && tc.b_off == 1 => &[(Table::HypB, HYP_B)],
        Side::B => return None,
    };
    for (t, rows) in tables {
        for row in rows.iter() {
            if row_matches(tc, row, side) {
                let st = locate_st(tc, row.st, side)?;
                return Some(TableMatch { table: *t, case: row.case, special_trace: st });
            }
        }
    }
    None
}

/// `κ = -1` when the hypergeometric index is `+16`.
fn kappa(d: &IndexData) -> i32 {
    if d.p_minus_q == 16 {
        -1
    } else {
        1
    }
}

/// Local-index path: the unique element of `A_on` (side A) or `B_on`
/// (side B) with K3-normalized local index `+1`; errors carry the first
/// failed condition.
pub fn local_index_path(tc: &TraceClusters, side: Side) -> Result<core::result::Result<(AlgebraicReal, HodgeType), String>> {
    let d = index(tc)?;
    if d.p_minus_q.abs() != 16 {
        return Ok(Err(alloc::format!("index p - q = {} is not ±16", d.p_minus_q)));
    }
    let k = kappa(&d);
    let hodge;
    let elements = match side {
        Side::A => {
            if tc.mult_at_neg2 != 0 || k * idx_minus_one(tc) != -1 {
                return Ok(Err("M(-2) = 0 and idx(-1) = -1 fail".into()));
            }
            hodge = match (tc.mult_at_2, k * idx_one(tc)) {
                (0, 1) => HodgeType::Elliptic,
                (1, -1) => HodgeType::Parabolic,
                (0, -1) => HodgeType::Hyperbolic,
                _ => return Ok(Err("(M(2), idx(1)) is not (0, 1), (1, -1) or (0, -1)".into())),
            };
            let want = if hodge == HodgeType::Hyperbolic { 1 } else { 0 };
            if tc.a_off != want || tc.a_gt2 != want {
                return Ok(Err(alloc::format!("|A_off| = |A_>2| = {want} fails")));
            }
            tc.a_elements()
        }
        Side::B => {
            hodge = HodgeType::Hyperbolic;
            if tc.b_off != 1 || tc.b_gt2 != 1 {
                return Ok(Err("|B_off| = |B_>2| = 1 fails".into()));
            }
            tc.b_elements()
        }
    };
    let mut plus = Vec::new();
    for e in elements.iter() {
        if e.cmp_int(2) != Ordering::Less || e.cmp_int(-2) != Ordering::Greater {
            continue;
        }
        match k * local_index(tc, e)? {
            1 => plus.push(e.clone()),
            -1 => {}
            _ => return Ok(Err("a multiple root carries local index 0".into())),
        }
    }
    if plus.len() != 1 {
        return Ok(Err(alloc::format!("{} elements with local index +1, expected exactly one", plus.len())));
    }
    Ok(Ok((plus.pop().unwrap(), hodge)))
}

/// The special trace via local indices; errors when not unique.
pub fn special_trace_by_local_index(tc: &TraceClusters, side: Side) -> Result<AlgebraicReal> {
    match local_index_path(tc, side)? {
        Ok((t, _)) => Ok(t),
        Err(why) => Err(Error::bug(why)),
    }
}

/// `χ = χ₀ χ₁` where `χ₀` is the irreducible factor whose trace vanishes at `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiFactorization {
    pub chi0: IntPoly,
    pub chi1: IntPoly,
    pub rho: usize,
    /// `χ₀` is cyclotomic.
    pub projective: bool,
    pub chi0_trace: IntPoly,
}

pub fn chi_factorization(chi: &IntPoly, tau: &AlgebraicReal) -> Result<ChiFactorization> {
    if chi.palindrome_class() == PalindromeClass::Neither {
        return Err(Error::pre("chi must be palindromic or anti-palindromic"));
    }
    let fl = classify_product(chi)?;
    let mut hit = None;
    for f in &fl.factors {
        if matches!(f.tag, FactorTag::Cyclotomic(1) | FactorTag::Cyclotomic(2)) || f.poly.degree() % 2 == 1 {
            continue;
        }
        let Ok(t) = trace_of_palindromic(&f.poly) else { continue };
        if tau.is_root_of(&t) {
            if hit.is_some() {
                return Err(Error::pre("tau is a root of two factors of chi"));
            }
            hit = Some((f.poly.clone(), f.tag, f.multiplicity, t));
        }
    }
    let (chi0, tag, mult, t) = hit.ok_or_else(|| Error::pre("tau is not a trace of a root of chi"))?;
    if mult != 1 {
        return Err(Error::pre("special factor of chi is not simple"));
    }
    let chi1 = chi.div_exact(&chi0).ok_or_else(|| Error::bug("chi0 does not divide chi"))?;
    Ok(ChiFactorization {
        rho: chi.degree() - chi0.degree(),
        projective: matches!(tag, FactorTag::Cyclotomic(_)),
        chi0,
        chi1,
        chi0_trace: t,
    })
}

#[derive(Clone, Debug)]
pub struct K3Certificate {
    pub side: Side,
    pub table: Table,
    pub case: u8,
    pub hodge_type: HodgeType,
    /// Special trace with minimal polynomial the trace of `χ₀`.
    pub special_trace: AlgebraicReal,
    /// Hypergeometric index was +16 and the form was negated.
    pub renormalized: bool,
    /// The pair was replaced by its antipode to make the isometry positive.
    pub antipode: bool,
    pub chi0: IntPoly,
    pub chi1: IntPoly,
    pub rho: usize,
    pub projective: bool,
    pub rank22_case: Rank22Case,
    pub phi: IntPoly,
    pub psi: IntPoly,
}

/// Why a pair did not certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection(pub String);

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Verdict = core::result::Result<K3Certificate, Rejection>;

fn reject(msg: impl Into<String>) -> Result<Verdict> {
    Ok(Err(Rejection(msg.into())))
}

fn squarefree(p: &IntPoly) -> bool {
    p.degree() == 0 || p.gcd(&p.derivative()).degree() == 0
}

/// At most one multiple root, an integer of multiplicity 2 or 3.
fn check_phi_multiple_roots(phi: &IntPoly) -> Result<()> {
    let parts = phi.squarefree_decomposition();
    let mut multiple = 0;
    for (i, g) in parts.iter().enumerate().skip(1) {
        if g.degree() == 0 {
            continue;
        }
        multiple += g.degree();
        if i + 1 > 3 || g.degree() != 1 || !g.coeff(1).magnitude().eq(&num_bigint::BigUint::from(1u32)) {
            return Err(Error::bug(alloc::format!("Phi has a non-integer or high multiple root: {phi}")));
        }
    }
    if multiple > 1 {
        return Err(Error::bug("Phi has more than one multiple root"));
    }
    Ok(())
}

/// Certification from trace clusters of a unimodular rank-22 pair.
///
/// The caller guarantees unimodularity; `phi`/`psi` in `tc` are the trace
/// polynomials.
pub fn certify_clusters(tc: &TraceClusters, side: Side) -> Result<Verdict> {
    if tc.rank != 22 {
        return reject("rank 22 required");
    }
    let d = index(tc)?;
    if d.p_minus_q.abs() != 16 {
        return reject(alloc::format!("index p - q = {} is not ±16", d.p_minus_q));
    }
    let r22 = classify_rank22(tc).ok_or_else(|| Error::bug("index ±16 but no rank-22 configuration matched"))?;
    if r22.eps_index != d.epsilon as i64 * d.p_minus_q {
        return Err(Error::bug("rank-22 table sign disagrees with the index formula"));
    }
    check_cluster_simpleness(tc)?;
    match side {
        Side::A => {
            if tc.phi.eval_i64(-2) == 0.into() {
                return reject("Phi(-2) != 0 fails");
            }
            if !squarefree(&tc.phi) || !squarefree(&tc.psi) {
                return reject("roots of Phi and Psi are not all simple");
            }
        }
        Side::B => {
            if !squarefree(&tc.psi) {
                return reject("roots of Psi are not all simple");
            }
            if tc.psi.eval_i64(2) == 0.into() || tc.psi.eval_i64(-2) == 0.into() {
                return reject("Psi(±2) != 0 fails");
            }
        }
    }
    let table = match_tables(tc, side);
    let local = local_index_path(tc, side)?;
    let (tm, (tau, hodge)) = match (table, local) {
        (None, Err(why)) => return reject(why),
        (Some(t), Ok(l)) => (t, l),
        (Some(t), Err(why)) => {
            return Err(Error::bug(alloc::format!("table {} case {} matched but local indices say: {why}", t.table, t.case)))
        }
        (None, Ok(_)) => return Err(Error::bug("local indices certify but no table row matched")),
    };
    if !tau.same_value(&tm.special_trace) {
        return Err(Error::bug("table and local-index special traces differ"));
    }
    let hodge_table = match tm.table {
        Table::EpA if tc.mult_at_2 > 0 => HodgeType::Parabolic,
        Table::EpA => HodgeType::Elliptic,
        _ => HodgeType::Hyperbolic,
    };
    if hodge != hodge_table {
        return Err(Error::bug("Hodge type differs between the two paths"));
    }
    if side == Side::B {
        check_phi_multiple_roots(&tc.phi)?;
    }
    let (phi, psi) = pair_from_traces(&tc.phi, &tc.psi, 22)?;
    let chi = match side {
        Side::A => &phi,
        Side::B => &psi,
    };
    let cf = chi_factorization(chi, &tau)?;
    let special_trace = reduce_to(&tau, &cf.chi0_trace)?;
    Ok(Ok(K3Certificate {
        side,
        table: tm.table,
        case: tm.case,
        hodge_type: hodge,
        special_trace,
        renormalized: d.p_minus_q == 16,
        antipode: false,
        chi0: cf.chi0,
        chi1: cf.chi1,
        rho: cf.rho,
        projective: cf.projective,
        rank22_case: r22,
        phi,
        psi,
    }))
}

/// Same number, defined by the factor `g` of its minimal polynomial.
fn reduce_to(tau: &AlgebraicReal, g: &IntPoly) -> Result<AlgebraicReal> {
    let h = tau.minpoly().gcd(g);
    if !tau.is_root_of(&h) {
        return Err(Error::bug("special trace is not a root of the chi0 trace"));
    }
    let (lo, hi) = tau.interval();
    Ok(AlgebraicReal::from_interval(h, lo.clone(), hi.clone(), 1))
}

/// `(-1)^n p(-z)`.
fn antipode(p: &IntPoly) -> IntPoly {
    let q = p.negate_var();
    if p.degree() % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Full test for a pair `(φ, ψ)`: rank 22, unimodular, then both paths.
/// When the pair fails, its antipode is tried and flagged.
pub fn k3_certificate(phi: &IntPoly, psi: &IntPoly, side: Side) -> Result<Verdict> {
    let v = k3_certificate_direct(phi, psi, side)?;
    if v.is_ok() || phi.degree() != 22 {
        return Ok(v);
    }
    match k3_certificate_direct(&antipode(phi), &antipode(psi), side)? {
        Ok(mut c) => {
            c.antipode = true;
            Ok(Ok(c))
        }
        Err(_) => Ok(v),
    }
}

/// As `k3_certificate` without the antipode fallback.
pub fn k3_certificate_direct(phi: &IntPoly, psi: &IntPoly, side: Side) -> Result<Verdict> {
    if phi.degree() != 22 || psi.degree() != 22 {
        return reject("rank 22 required");
    }
    let (fa, fb) = trace_polynomial_pair(phi, psi)?;
    if !crate::hyplattice::is_unimodular(phi, psi)? {
        return reject("lattice is not unimodular");
    }
    let tc = TraceClusters::new(&fa, &fb, 22)?;
    certify_clusters(&tc, side)
}

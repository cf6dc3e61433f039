//! Exhaustive search over products of cyclotomic trace polynomials.
//!
//! The drivers here are sequential. Each scan is split into
//! [`candidates`] and [`evaluate`] so that callers can spread the second
//! step over threads and sort the merged output with [`canonical_sort`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::clusters::Side;
use crate::error::{Error, Result};
use crate::hyplattice::build_lattice;
use crate::k3class::{k3_certificate_direct, K3Certificate};
use crate::linalg::Matrix;
use crate::picard::{cyclotomic_display, run_pipeline};
use crate::polyring::builtin::{lnf, lt, salem_trace_r};
use crate::polyring::{
    cyclotomic_trace, is_unramified, isolate_real_roots, pair_from_traces, resultant, totient, AlgebraicReal, IntPoly,
    Var,
};
use crate::siegel::{builtin_q, siegel_test, threshold_classify_deg22, QLabel, SiegelOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub k: u64,
    pub degree: usize,
    pub unramified: bool,
}

/// Largest index with `φ(k) ≤ 20`.
const CATALOG_BOUND: u64 = 93;

/// Every `CT_k` of degree at most 10, by degree then index.
pub fn list_ct_catalog() -> Vec<CatalogEntry> {
    let mut v: Vec<CatalogEntry> = (1..=CATALOG_BOUND)
        .filter(|&k| k <= 2 || totient(k) <= 20)
        .map(|k| {
            let ct = cyclotomic_trace(k).expect("k >= 1");
            CatalogEntry { k, degree: ct.degree(), unramified: is_unramified(&ct, Var::W) }
        })
        .collect();
    v.sort_by_key(|e| (e.degree, e.k));
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplicityRule {
    SetsOnly,
    /// At most one index repeated, from `{1, 2, 3, 4, 6}`, at most three times.
    OneMultipleLe3,
}

const REPEATABLE: [u64; 5] = [1, 2, 3, 4, 6];

/// All multisets from the catalog with `Σ deg CT_k = target`, each sorted.
pub fn enumerate_ct_products(target: usize, rule: MultiplicityRule) -> Vec<Vec<u64>> {
    let pool: Vec<(u64, usize)> = list_ct_catalog().iter().map(|e| (e.k, e.degree)).collect();
    enumerate_from(&pool, target, rule)
}

/// Same as [`enumerate_ct_products`] over a restricted pool of `(k, deg)`.
pub fn enumerate_from(pool: &[(u64, usize)], target: usize, rule: MultiplicityRule) -> Vec<Vec<u64>> {
    let mut pool = pool.to_vec();
    pool.sort();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    walk(&pool, 0, target, rule, false, &mut cur, &mut out);
    out.sort();
    out
}

fn walk(
    pool: &[(u64, usize)],
    i: usize,
    left: usize,
    rule: MultiplicityRule,
    used_multiple: bool,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    if i == pool.len() {
        return;
    }
    let (k, d) = pool[i];
    let max_mult = if rule == MultiplicityRule::OneMultipleLe3 && !used_multiple && REPEATABLE.contains(&k) { 3 } else { 1 };
    for m in (0..=max_mult).rev() {
        if m * d > left {
            continue;
        }
        for _ in 0..m {
            cur.push(k);
        }
        walk(pool, i + 1, left - m * d, rule, used_multiple || m > 1, cur, out);
        for _ in 0..m {
            cur.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PsiLabel {
    R(u8),
    L(u8),
    Explicit(u8),
}

impl fmt::Display for PsiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiLabel::R(i) => write!(f, "R{i}"),
            PsiLabel::L(i) => write!(f, "L{i}"),
            PsiLabel::Explicit(i) => write!(f, "P{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Deg22,
    LehmerA,
    LehmerB,
    /// Side A with `Φ = LT · CT-set` against caller-supplied `Ψ`.
    SideA,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Deg22 => "deg22",
            Family::LehmerA => "lehmerA",
            Family::LehmerB => "lehmerB",
            Family::SideA => "sideA",
        })
    }
}

/// One unit of work: `Φ = base · Π CT_k` against a fixed `Ψ`.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub family: Family,
    pub psi_label: PsiLabel,
    pub big_psi: IntPoly,
    pub base: IntPoly,
    pub k: Vec<u64>,
    pub side: Side,
}

#[derive(Clone, Debug)]
pub struct SearchEntry {
    pub family: Family,
    pub psi_label: PsiLabel,
    pub k: Vec<u64>,
    pub certificate: K3Certificate,
    /// `y_j` or `x_j`: the j-th largest conjugate in `(-2, 2)`.
    pub st_label: String,
    pub dynkin: Option<String>,
    pub chi1_tilde: Option<String>,
    pub trace_tilde: Option<BigInt>,
    pub action: Option<String>,
    pub verdict: SiegelOutcome,
}

impl SearchEntry {
    pub fn sh(&self) -> Option<crate::siegel::SH> {
        self.verdict.as_ref().ok().map(|v| v.verdict)
    }

    pub fn k_string(&self) -> String {
        join_k(&self.k)
    }
}

pub fn join_k(k: &[u64]) -> String {
    let parts: Vec<String> = k.iter().map(|x| alloc::format!("{x}")).collect();
    parts.join(",")
}

/// `|Res(CT_k, Ψ)| = 1`, needed for every factor of a unimodular `Φ`.
fn coprime_unit(k: u64, big_psi: &IntPoly) -> bool {
    resultant(&cyclotomic_trace(k).expect("k >= 1"), big_psi).abs().is_one()
}

fn pool_for(big_psi: &IntPoly) -> Vec<(u64, usize)> {
    list_ct_catalog().into_iter().filter(|e| coprime_unit(e.k, big_psi)).map(|e| (e.k, e.degree)).collect()
}

fn check_salem_traces() -> Result<()> {
    for i in 1..=10 {
        let r = salem_trace_r(i)?;
        // trace of the roots is minus the subleading coefficient
        if r.degree() != 11 || r.coeff(10) != BigInt::one() {
            return Err(Error::bug(alloc::format!("Tr R_{i} = -1 fails")));
        }
    }
    Ok(())
}

/// Work items for a scan against explicit `Ψ` polynomials.
///
/// Returns nothing for a `Ψ` that is not unramified, or whose base factor
/// already shares a non-unit resultant with it.
pub fn candidates_for(
    family: Family,
    psis: &[(PsiLabel, IntPoly)],
    base: &IntPoly,
    target: usize,
    rule: MultiplicityRule,
    side: Side,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (label, big_psi) in psis {
        if !is_unramified(big_psi, Var::W) {
            continue;
        }
        if base.degree() > 0 && !resultant(base, big_psi).abs().is_one() {
            continue;
        }
        for k in enumerate_from(&pool_for(big_psi), target, rule) {
            out.push(Candidate { family, psi_label: *label, big_psi: big_psi.clone(), base: base.clone(), k, side });
        }
    }
    out
}

fn r_family(only: Option<usize>) -> Result<Vec<(PsiLabel, IntPoly)>> {
    let idx: Vec<usize> = match only {
        Some(i) => alloc::vec![i],
        None => (1..=10).collect(),
    };
    idx.into_iter().map(|i| Ok((PsiLabel::R(i as u8), salem_trace_r(i)?))).collect()
}

/// Work items for one of the three families, optionally restricted to one `Ψ`.
pub fn candidates(family: Family, psi_index: Option<usize>) -> Result<Vec<Candidate>> {
    check_salem_traces()?;
    Ok(match family {
        Family::Deg22 => candidates_for(family, &r_family(psi_index)?, &IntPoly::one(), 10, MultiplicityRule::OneMultipleLe3, Side::B),
        Family::LehmerA => candidates_for(family, &r_family(psi_index)?, &lt(), 5, MultiplicityRule::SetsOnly, Side::A),
        Family::LehmerB => {
            let idx: Vec<usize> = match psi_index {
                Some(i) => alloc::vec![i],
                None => (1..=8).collect(),
            };
            let psis = idx.into_iter().map(|i| Ok((PsiLabel::L(i as u8), lnf(i)?))).collect::<Result<Vec<_>>>()?;
            candidates_for(family, &psis, &IntPoly::one(), 10, MultiplicityRule::OneMultipleLe3, Side::B)
        }
        Family::SideA => return Err(Error::pre("the side-A family takes explicit psi polynomials")),
    })
}

/// Label of `τ` among the conjugates in `(-2, 2)`, largest first.
pub fn st_label(tau: &AlgebraicReal) -> String {
    let mut c: Vec<AlgebraicReal> = isolate_real_roots(tau.minpoly())
        .into_iter()
        .filter(|r| r.cmp_int(-2) == Ordering::Greater && r.cmp_int(2) == Ordering::Less)
        .collect();
    c.sort_by(|a, b| b.cmp_value(a));
    let j = c.iter().position(|r| r.same_value(tau)).map_or(0, |p| p + 1);
    let prefix = if tau.minpoly() == &lt() { 'x' } else { 'y' };
    alloc::format!("{prefix}{j}")
}

/// `q` attached to the Dynkin type of the Picard lattice.
pub fn q_for_dynkin(dynkin: &str) -> Option<QLabel> {
    match dynkin {
        "E6+E6" => Some(QLabel::FixedPoint),
        "E8+A2+A2" => Some(QLabel::E8A2A2),
        "D10" => Some(QLabel::D10),
        "A2" => Some(QLabel::A2),
        _ => None,
    }
}

/// Certify one candidate; `None` when it is not a positive K3 isometry.
pub fn evaluate(c: &Candidate) -> Result<Option<SearchEntry>> {
    let big_phi = &c.base * &crate::polyring::builtin::ct_product(&c.k)?;
    let (phi, psi) = pair_from_traces(&big_phi, &c.big_psi, 22)?;
    let cert = match k3_certificate_direct(&phi, &psi, c.side)? {
        Ok(cert) => cert,
        Err(_) => return Ok(None),
    };
    let tau = cert.special_trace.clone();
    if matches!(c.family, Family::LehmerA | Family::LehmerB) && tau.minpoly() != &lt() {
        // not conjugate to Lehmer's number
        return Ok(None);
    }
    let st = st_label(&tau);
    let mut entry = SearchEntry {
        family: c.family,
        psi_label: c.psi_label,
        k: c.k.clone(),
        certificate: cert,
        st_label: st,
        dynkin: None,
        chi1_tilde: None,
        trace_tilde: None,
        action: None,
        verdict: Err(String::new()),
    };
    match c.family {
        Family::Deg22 => {
            let v = siegel_test(&tau, &builtin_q(QLabel::FixedPoint))?;
            let shortcut = threshold_classify_deg22(&tau)?;
            if v.as_ref().ok().map(|x| x.verdict) != Some(shortcut) {
                return Err(Error::bug("threshold shortcut disagrees with the Siegel test"));
            }
            entry.verdict = v;
        }
        Family::LehmerA | Family::LehmerB | Family::SideA if entry.certificate.projective => {
            entry.verdict = Err(String::from("projective: no Picard lattice modification"));
        }
        Family::LehmerA | Family::LehmerB | Family::SideA => {
            let lattice = build_lattice(&phi, &psi)?;
            let p = run_pipeline(&lattice, &entry.certificate)?;
            let dynkin = p.roots.dynkin_string();
            entry.verdict = match q_for_dynkin(&dynkin) {
                Some(l) => siegel_test(&tau, &builtin_q(l))?,
                None => Err(alloc::format!("no q function catalogued for {dynkin}")),
            };
            entry.chi1_tilde = Some(cyclotomic_display(&p.invariants.chi1_factors));
            entry.trace_tilde = Some(p.invariants.trace);
            entry.action = Some(alloc::format!("{}", p.action));
            entry.dynkin = Some(dynkin);
        }
    }
    Ok(Some(entry))
}

/// Sort by `(Ψ label, case, k)` and drop repeated rows.
pub fn canonical_sort(v: &mut Vec<SearchEntry>) {
    v.sort_by(|a, b| {
        (a.psi_label, a.certificate.case, &a.k).cmp(&(b.psi_label, b.certificate.case, &b.k))
    });
    v.dedup_by(|a, b| a.psi_label == b.psi_label && a.k == b.k);
}

fn run(cands: &[Candidate]) -> Result<Vec<SearchEntry>> {
    let mut out = Vec::new();
    for c in cands {
        if let Some(e) = evaluate(c)? {
            out.push(e);
        }
    }
    canonical_sort(&mut out);
    Ok(out)
}

/// `Ψ = R_i`, side B, `Φ` a product of `CT_k` of degree 10.
pub fn scan_deg22(i: usize) -> Result<Vec<SearchEntry>> {
    if !(1..=10).contains(&i) {
        return Err(Error::pre(alloc::format!("R({i}) is defined for i in 1..=10")));
    }
    run(&candidates(Family::Deg22, Some(i))?)
}

/// Special trace conjugate to Lehmer's number, on side A or B.
pub fn scan_lehmer(side: Side) -> Result<Vec<SearchEntry>> {
    let family = match side {
        Side::A => Family::LehmerA,
        Side::B => Family::LehmerB,
    };
    run(&candidates(family, None)?)
}

/// Side-A scan with `Φ = LT · CT-set` against arbitrary `Ψ` of degree 11.
pub fn scan_side_a_with(psis: &[(PsiLabel, IntPoly)], extra_degree: usize, rule: MultiplicityRule) -> Result<Vec<SearchEntry>> {
    run(&candidates_for(Family::SideA, psis, &lt(), extra_degree, rule, Side::A))
}

/// Lattice-level invariants of an entry: `C² = I`, `B = AC`, `A`, `B`, `C`
/// isometries, even Gram, and `ρ = 22 − deg χ₀`.
pub fn structural_invariants(e: &SearchEntry) -> Result<()> {
    let cert = &e.certificate;
    let l = build_lattice(&cert.phi, &cert.psi)?;
    let n = l.n;
    let g = &l.gram_a;
    let fail = |what: &str| Err(Error::bug(alloc::format!("{} {}: {what}", e.psi_label, join_k(&e.k))));
    if &l.mat_c * &l.mat_c != Matrix::identity(n) {
        return fail("C^2 != I");
    }
    if l.mat_b != &l.mat_a * &l.mat_c {
        return fail("B != AC");
    }
    for m in [&l.mat_a, &l.mat_b, &l.mat_c] {
        if &(&m.transpose() * g) * m != *g {
            return fail("not an isometry");
        }
    }
    if (0..n).any(|i| !(&g[(i, i)] % 2u32).is_zero()) {
        return fail("Gram not even");
    }
    if !l.disc.abs().is_one() {
        return fail("not unimodular");
    }
    if cert.rho != 22 - cert.chi0.degree() {
        return fail("rho != 22 - deg chi0");
    }
    Ok(())
}

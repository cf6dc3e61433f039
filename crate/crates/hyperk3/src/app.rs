//! Argument parsing and command dispatch.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperk3_core::clusters::Side;
use hyperk3_core::hyplattice::{build_lattice, HgLattice};
use hyperk3_core::k3class::{k3_certificate, K3Certificate};
use hyperk3_core::numfield::{compatible_roots, recover_phi, unit_for_certificate, verify_unit};
use hyperk3_core::picard::{
    bring_back, cyclotomic_display, dynkin_action, modified_invariants, picard_gram, root_system, TieBreak,
};
use hyperk3_core::polyring::{
    classify_product, cyclotomic_trace, desc, from_trace, isolate_real_roots, pair_from_traces, trace_of_palindromic,
    PalindromeClass,
};
use hyperk3_core::search::{join_k, list_ct_catalog, q_for_dynkin, st_label, Family, PsiLabel, SearchEntry};
use hyperk3_core::siegel::{builtin_q, siegel_test, QLabel, SiegelOutcome, Witness};
use hyperk3_core::{AlgebraicReal, BigInt, BigRational, IntPoly};
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::grammar::{parse_poly, Parsed, Variable};
use crate::report::{big, big_rows, big_vec, Format, Report};
use crate::scan::scan_family;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hyperk3", version, about = "Hypergeometric lattices of K3 type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    pub format: Format,
    /// Exit with status 4 when a classification comes back empty.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Interval width for displayed algebraic numbers, e.g. `1/1000000`.
    #[arg(long, global = true)]
    pub refine: Option<String>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Anti-palindromic `φ` (z-side) or its trace polynomial `Φ` (w-side).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// Palindromic `ψ` (z-side) or its trace polynomial `Ψ` (w-side).
    #[arg(long, allow_hyphen_values = true)]
    pub psi: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Lowest,
    Highest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "deg22")]
    Deg22,
    #[value(name = "lehmerA")]
    LehmerA,
    #[value(name = "lehmerB")]
    LehmerB,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram matrix and generators of the hypergeometric lattice.
    Build(PairArgs),
    /// K3 certificate of a rank-22 pair.
    Certify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Picard lattice and its root system.
    Picard {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Bring the Kähler chamber back and report the modified isometry.
    Bringback {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Choice among equally good reflections.
        #[arg(long, value_enum, default_value = "lowest")]
        tie: TieArg,
    },
    /// Siegel disk test for a root of a trace polynomial.
    Siegel {
        /// Polynomial whose root is the special trace.
        #[arg(long = "tau-from", alias = "tau", allow_hyphen_values = true)]
        tau_from: String,
        /// 1-based position among the roots in (-2, 2), largest first.
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value = "fixed_point")]
        q: String,
    },
    /// Exhaustive scan of one family.
    Scan {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Restrict to one `Ψ`, e.g. `R3` or `L6`.
        #[arg(long)]
        psi: Option<String>,
    },
    /// Unit `U(w)` of a side-B certificate.
    Unit(PairArgs),
    /// `Φ` from a unit and a Salem polynomial.
    Recover {
        /// `U(w)`.
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
        /// Salem polynomial `S(z)` or its trace `R(w)`.
        #[arg(long, allow_hyphen_values = true)]
        salem: String,
    },
    /// The cyclotomic trace polynomials of degree at most 10.
    Catalog,
}

/// What `main` prints and returns.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    pub report: Option<Report>,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { stdout, stderr, code, report: None };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome { stdout: report.render(cli.format), stderr: String::new(), code: report.exit_code, report: Some(report) },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code(), report: None },
    }
}

struct Ctx {
    strict: bool,
    width: BigRational,
    digits: usize,
}

fn parse_width(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Usage(format!("--refine expects a positive rational such as 1/1000000, got '{s}'"));
    let w: BigRational = if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        BigRational::new(n, num_traits::pow(BigInt::from(10), frac.len()))
    } else {
        s.parse().map_err(|_| bad())?
    };
    if !w.is_positive() {
        return Err(bad());
    }
    Ok(w)
}

/// Decimal places resolved by an interval of the given width.
fn digits_for(w: &BigRational) -> usize {
    let mut d = 0;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut x = w.clone();
    while &x * &ten <= BigRational::one() && d < 60 {
        x = &x * &ten;
        d += 1;
    }
    d
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (width, digits) = match &cli.refine {
        Some(s) => {
            let w = parse_width(s)?;
            let d = digits_for(&w);
            (w, d)
        }
        None => (BigRational::new(BigInt::one(), BigInt::from(10u64.pow(9))), 6),
    };
    let ctx = Ctx { strict: cli.strict, width, digits };
    let mut r = Report { command: String::new(), inputs: BTreeMap::new(), result: Value::Null, warnings: Vec::new(), exit_code: 0 };
    match &cli.command {
        Command::Build(p) => build(&ctx, p, &mut r)?,
        Command::Certify { pair, side } => certify(&ctx, pair, *side, &mut r)?,
        Command::Picard { pair, side } => picard(&ctx, pair, *side, &mut r)?,
        Command::Bringback { pair, side, tie } => bringback(&ctx, pair, *side, *tie, &mut r)?,
        Command::Siegel { tau_from, index, q } => siegel(&ctx, tau_from, *index, q, &mut r)?,
        Command::Scan { family, psi } => scan(&ctx, *family, psi.as_deref(), &mut r)?,
        Command::Unit(p) => unit(&ctx, p, &mut r)?,
        Command::Recover { unit, salem } => recover(&ctx, unit, salem, &mut r)?,
        Command::Catalog => catalog(&mut r),
    }
    Ok(r)
}

fn zs(p: &IntPoly) -> String {
    p.to_string_var('z')
}

fn ws(p: &IntPoly) -> String {
    p.to_string_var('w')
}

fn z_minus_z_inv() -> IntPoly {
    desc(&[1, 0, -1])
}

/// `(φ, ψ)` from the two texts. A w-side `Φ` is lifted by `(z²-1)`, and a
/// palindromic z-side `φ` two degrees short of `ψ` is read as the palindromic
/// part of `φ`.
pub fn resolve_pair(phi: &Parsed, psi: &Parsed) -> Result<(IntPoly, IntPoly), CliError> {
    if phi.var == Variable::W && psi.var == Variable::W && phi.poly.degree() == psi.poly.degree() {
        let n = 2 * psi.poly.degree() + 1;
        return Ok(pair_from_traces(&phi.poly, &psi.poly, n)?);
    }
    let psi_z = match psi.var {
        Variable::W => from_trace(&psi.poly),
        Variable::Z => psi.poly.clone(),
    };
    let n = psi_z.degree();
    let phi_z = match phi.var {
        Variable::W => &from_trace(&phi.poly) * &z_minus_z_inv(),
        Variable::Z => {
            let p = &phi.poly;
            if !p.is_zero() && p.degree() + 2 == n && p.palindrome_class() == PalindromeClass::Palindromic {
                p * &z_minus_z_inv()
            } else {
                p.clone()
            }
        }
    };
    Ok((phi_z, psi_z))
}

fn read_pair(p: &PairArgs, r: &mut Report) -> Result<(IntPoly, IntPoly), CliError> {
    let (phi, psi) = resolve_pair(&parse_poly(&p.phi)?, &parse_poly(&p.psi)?)?;
    r.inputs.insert("phi".into(), zs(&phi));
    r.inputs.insert("psi".into(), zs(&psi));
    Ok((phi, psi))
}

fn real_json(ctx: &Ctx, t: &AlgebraicReal) -> Value {
    let mut a = t.clone();
    a.refine(&ctx.width);
    let (lo, hi) = a.interval();
    json!({
        "minpoly": ws(t.minpoly()),
        "interval": [lo.to_string(), hi.to_string()],
        "decimal": a.decimal(ctx.digits),
        "label": st_label(t),
    })
}

fn cert_json(ctx: &Ctx, c: &K3Certificate) -> Value {
    json!({
        "certified": true,
        "side": c.side.to_string(),
        "table": c.table.to_string(),
        "case": c.case,
        "hodge_type": c.hodge_type.to_string(),
        "special_trace": real_json(ctx, &c.special_trace),
        "renormalized": c.renormalized,
        "antipode": c.antipode,
        "chi0": zs(&c.chi0),
        "chi1": zs(&c.chi1),
        "rho": c.rho,
        "projective": c.projective,
        "rank22_case": c.rank22_case.case,
        "eps_index": c.rank22_case.eps_index,
    })
}

fn sides(side: Option<SideArg>) -> Vec<Side> {
    match side {
        Some(SideArg::A) => vec![Side::A],
        Some(SideArg::B) => vec![Side::B],
        None => vec![Side::B, Side::A],
    }
}

/// First side that certifies; rejection reasons of the others go to the
/// warnings.
fn find_certificate(phi: &IntPoly, psi: &IntPoly, side: Option<SideArg>, r: &mut Report) -> Result<Result<K3Certificate, String>, CliError> {
    let mut reasons = Vec::new();
    for s in sides(side) {
        match k3_certificate(phi, psi, s)? {
            Ok(c) => {
                for why in reasons {
                    r.warnings.push(why);
                }
                return Ok(Ok(c));
            }
            Err(why) => reasons.push(format!("side {s}: {why}")),
        }
    }
    Ok(Err(reasons.join("; ")))
}

fn require_certificate(phi: &IntPoly, psi: &IntPoly, side: Option<SideArg>, r: &mut Report) -> Result<K3Certificate, CliError> {
    find_certificate(phi, psi, side, r)?.map_err(|why| CliError::Precondition(format!("no K3 certificate ({why})")))
}

fn none(ctx: &Ctx, r: &mut Report) {
    if ctx.strict {
        r.exit_code = 4;
    }
}

fn build(_ctx: &Ctx, p: &PairArgs, r: &mut Report) -> Result<(), CliError> {
    r.command = "build".into();
    let (phi, psi) = read_pair(p, r)?;
    let l = build_lattice(&phi, &psi)?;
    let (pos, neg) = l.gram_a.signature()?;
    r.result = json!({
        "rank": l.n,
        "gram": big_rows(&l.gram_a.to_rows()),
        "disc": big(&l.disc),
        "unimodular": l.is_unimodular(),
        "signature": [pos, neg],
        "a": big_rows(&l.mat_a.to_rows()),
        "b": big_rows(&l.mat_b.to_rows()),
        "c": big_rows(&l.mat_c.to_rows()),
    });
    Ok(())
}

fn certify(ctx: &Ctx, p: &PairArgs, side: Option<SideArg>, r: &mut Report) -> Result<(), CliError> {
    r.command = "certify".into();
    let (phi, psi) = read_pair(p, r)?;
    match find_certificate(&phi, &psi, side, r)? {
        Ok(c) => r.result = cert_json(ctx, &c),
        Err(why) => {
            r.result = json!({ "certified": false, "reason": why });
            none(ctx, r);
        }
    }
    Ok(())
}

fn lattice_of(c: &K3Certificate) -> Result<HgLattice, CliError> {
    Ok(build_lattice(&c.phi, &c.psi)?)
}

fn picard(ctx: &Ctx, p: &PairArgs, side: Option<SideArg>, r: &mut Report) -> Result<(), CliError> {
    r.command = "picard".into();
    let (phi, psi) = read_pair(p, r)?;
    let c = require_certificate(&phi, &psi, side, r)?;
    let pl = picard_gram(&lattice_of(&c)?, &c)?;
    let rs = root_system(&pl)?;
    r.result = json!({
        "certificate": cert_json(ctx, &c),
        "rho": pl.rho,
        "chi1": zs(&pl.chi1),
        "gram": pl.gram_pos,
        "roots": rs.all_roots.len(),
        "positive_roots": rs.positive.len(),
        "simple_roots": rs.simple_roots(),
        "dynkin": rs.dynkin_string(),
    });
    Ok(())
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn outcome_json(ctx: &Ctx, o: &SiegelOutcome) -> Value {
    match o {
        Ok(v) => json!({
            "verdict": v.verdict.to_string(),
            "q": v.q_label.to_string(),
            "witness": match &v.witness {
                Witness::AboveFour => json!("q(tau) > 4"),
                Witness::Conjugate(t) => real_json(ctx, t),
            },
        }),
        Err(why) => json!({ "verdict": Value::Null, "reason": why }),
    }
}

fn bringback(ctx: &Ctx, p: &PairArgs, side: Option<SideArg>, tie: TieArg, r: &mut Report) -> Result<(), CliError> {
    r.command = "bringback".into();
    let (phi, psi) = read_pair(p, r)?;
    let c = require_certificate(&phi, &psi, side, r)?;
    let pl = picard_gram(&lattice_of(&c)?, &c)?;
    let rs = root_system(&pl)?;
    let tie = match tie {
        TieArg::Lowest => TieBreak::LowestIndex,
        TieArg::Highest => TieBreak::HighestIndex,
    };
    let bb = bring_back(&pl, &rs, tie)?;
    let inv = modified_invariants(&pl, &bb)?;
    let action = dynkin_action(&bb, &rs)?;
    let preserves = rs.positive.iter().all(|u| rs.positive_index(&mat_vec(&bb.modified_pic, u)).is_some());
    let dynkin = rs.dynkin_string();
    let siegel = match q_for_dynkin(&dynkin) {
        Some(l) => outcome_json(ctx, &siegel_test(&c.special_trace, &builtin_q(l))?),
        None => json!({ "verdict": Value::Null, "reason": format!("no q function catalogued for {dynkin}") }),
    };
    r.result = json!({
        "certificate": cert_json(ctx, &c),
        "rho": pl.rho,
        "dynkin": dynkin,
        "roots": rs.all_roots.len(),
        "positive_roots": rs.positive.len(),
        "simple_roots": rs.simple.len(),
        "word": bb.word(),
        "preserves_positive_roots": preserves,
        "chi_tilde": zs(&inv.chi_tilde),
        "chi1_tilde": cyclotomic_display(&inv.chi1_factors),
        "trace": big(&inv.trace),
        "action": action.to_string(),
        "cycles": action.cycles,
        "siegel": siegel,
    });
    Ok(())
}

/// Strip cyclotomic trace factors so that a root's minimal polynomial is
/// the remaining Salem trace.
fn strip_cyclotomic(p: &IntPoly) -> IntPoly {
    let mut out = p.clone();
    for e in list_ct_catalog() {
        if out.degree() == 0 {
            break;
        }
        let ct = cyclotomic_trace(e.k).expect("catalog index");
        while let Some(q) = out.div_exact(&ct) {
            if q.is_zero() {
                break;
            }
            out = q;
        }
    }
    out
}

fn siegel(ctx: &Ctx, text: &str, index: usize, q: &str, r: &mut Report) -> Result<(), CliError> {
    r.command = "siegel".into();
    let parsed = parse_poly(text)?;
    let trace = match parsed.var {
        Variable::W => parsed.poly,
        Variable::Z => trace_of_palindromic(&parsed.poly)?,
    };
    let label: QLabel = q.parse().map_err(|_| CliError::Usage(format!("unknown q '{q}', expected fixed_point|e8a2a2|d10|a2")))?;
    let base = strip_cyclotomic(&trace);
    r.inputs.insert("tau_from".into(), ws(&base));
    r.inputs.insert("index".into(), index.to_string());
    r.inputs.insert("q".into(), label.to_string());
    let mut inside: Vec<AlgebraicReal> = isolate_real_roots(&base)
        .into_iter()
        .filter(|t| t.cmp_int(-2).is_gt() && t.cmp_int(2).is_lt())
        .collect();
    inside.sort_by(|a, b| b.cmp_value(a));
    let tau = inside
        .get(index.wrapping_sub(1))
        .ok_or_else(|| CliError::Precondition(format!("index {index} out of range: {} roots in (-2, 2)", inside.len())))?;
    let qf = builtin_q(label);
    let outcome = siegel_test(tau, &qf)?;
    if outcome.is_err() {
        none(ctx, r);
    }
    r.result = json!({
        "tau": real_json(ctx, tau),
        "q_function": qf.to_string(),
        "q_at_tau": if tau.is_root_of(&qf.denominator) { Value::Null } else { json!(qf.approx_at(tau)) },
        "outcome": outcome_json(ctx, &outcome),
    });
    Ok(())
}

fn parse_psi_label(s: &str, family: FamilyArg) -> Result<usize, CliError> {
    let t = s.trim();
    let digits = t.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let prefix = &t[..t.len() - digits.len()];
    let ok_prefix = match family {
        FamilyArg::Deg22 | FamilyArg::LehmerA => prefix.is_empty() || prefix == "R",
        FamilyArg::LehmerB => prefix.is_empty() || prefix == "L",
    };
    let i: usize = digits.parse().map_err(|_| CliError::Usage(format!("bad --psi '{s}'")))?;
    let max = if family == FamilyArg::LehmerB { 8 } else { 10 };
    if !ok_prefix || i == 0 || i > max {
        return Err(CliError::Usage(format!("--psi '{s}' is not a member of this family")));
    }
    Ok(i)
}

/// Columns shared with the golden tables.
pub fn entry_json(e: &SearchEntry) -> Value {
    json!({
        "psi": e.psi_label.to_string(),
        "case": e.certificate.case,
        "k": e.k_string(),
        "st": e.st_label,
        "sh": e.sh().map_or(Value::Null, |s| json!(s.to_string())),
        "dynkin": e.dynkin,
        "chi1_tilde": e.chi1_tilde,
        "trace": e.trace_tilde.as_ref().map(big),
        "action": e.action,
        "table": e.certificate.table.to_string(),
        "side": e.certificate.side.to_string(),
        "projective": e.certificate.projective,
        "note": e.verdict.as_ref().err(),
    })
}

fn scan(ctx: &Ctx, family: FamilyArg, psi: Option<&str>, r: &mut Report) -> Result<(), CliError> {
    r.command = "scan".into();
    let fam = match family {
        FamilyArg::Deg22 => Family::Deg22,
        FamilyArg::LehmerA => Family::LehmerA,
        FamilyArg::LehmerB => Family::LehmerB,
    };
    let idx = psi.map(|s| parse_psi_label(s, family)).transpose()?;
    r.inputs.insert("family".into(), fam.to_string());
    if let Some(i) = idx {
        let label = if fam == Family::LehmerB { PsiLabel::L(i as u8) } else { PsiLabel::R(i as u8) };
        r.inputs.insert("psi".into(), label.to_string());
    }
    let entries = scan_family(fam, idx)?;
    let count = |v: &str| entries.iter().filter(|e| e.sh().map(|s| s.to_string()).as_deref() == Some(v)).count();
    let mut psis: Vec<String> = entries.iter().map(|e| e.psi_label.to_string()).collect();
    psis.dedup();
    if entries.is_empty() {
        none(ctx, r);
    }
    r.result = json!({
        "family": fam.to_string(),
        "count": entries.len(),
        "s_count": count("S"),
        "h_count": count("H"),
        "psi_occurring": psis,
        "rows": entries.iter().map(entry_json).collect::<Vec<_>>(),
    });
    Ok(())
}

fn unit(ctx: &Ctx, p: &PairArgs, r: &mut Report) -> Result<(), CliError> {
    r.command = "unit".into();
    let (phi, psi) = read_pair(p, r)?;
    let c = require_certificate(&phi, &psi, Some(SideArg::B), r)?;
    let l = lattice_of(&c)?;
    let u = unit_for_certificate(&l, &c)?;
    let check = verify_unit(&u.unit, &u.r, Some(&c.special_trace))?;
    let compatible: Vec<Value> = compatible_roots(&u.unit, &u.r).iter().map(|t| real_json(ctx, t)).collect();
    r.result = json!({
        "certificate": cert_json(ctx, &c),
        "r": ws(&u.r),
        "unit": ws(&u.unit),
        "coefficients": big_vec(&u.coeffs),
        "form_sign": if c.renormalized { -1 } else { 1 },
        "verified": check.is_ok(),
        "verify_error": check.err(),
        "compatible_roots": compatible,
    });
    Ok(())
}

fn recover(_ctx: &Ctx, unit_text: &str, salem_text: &str, r: &mut Report) -> Result<(), CliError> {
    r.command = "recover".into();
    let u = parse_poly(unit_text)?;
    if u.var == Variable::Z && !u.poly.is_constant() {
        return Err(CliError::Usage("--unit must be a polynomial in w".into()));
    }
    let s = parse_poly(salem_text)?;
    let s = match s.var {
        Variable::W => from_trace(&s.poly),
        Variable::Z => s.poly,
    };
    r.inputs.insert("unit".into(), ws(&u.poly));
    r.inputs.insert("salem".into(), zs(&s));
    let big_phi = recover_phi(&u.poly, &s)?;
    let factors = classify_product(&from_trace(&big_phi)).ok().map(|f| f.display('z'));
    r.result = json!({
        "phi_trace": ws(&big_phi),
        "phi": zs(&(&from_trace(&big_phi) * &z_minus_z_inv())),
        "factors": factors,
    });
    Ok(())
}

fn catalog(r: &mut Report) {
    r.command = "catalog".into();
    let cat = list_ct_catalog();
    let rows: Vec<Value> = cat
        .iter()
        .map(|e| {
            json!({
                "k": e.k,
                "degree": e.degree,
                "unramified": e.unramified,
                "ct": ws(&cyclotomic_trace(e.k).expect("catalog index")),
            })
        })
        .collect();
    let unram: Vec<u64> = cat.iter().filter(|e| e.unramified).map(|e| e.k).collect();
    r.result = json!({
        "count": cat.len(),
        "unramified_count": unram.len(),
        "unramified": join_k(&unram),
        "rows": rows,
    });
}

//! Picard lattices of non-projective certificates, their root systems and
//! the bringing-back of the Kähler chamber.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::clusters::Side;
use crate::error::{Error, Result};
use crate::hyplattice::HgLattice;
use crate::k3class::K3Certificate;
use crate::linalg::Matrix;
use crate::polyring::{classify_product, FactorList, FactorTag, IntPoly};

#[derive(Clone, Debug)]
pub struct PicardLattice {
    pub rho: usize,
    /// `<s_i, s_j> = -(s_i, s_j)`, positive definite.
    pub gram_pos: Vec<Vec<i64>>,
    /// `F` on the standard basis `s, Fs, ...`: companion matrix of `χ₁`.
    pub f_on_pic: Vec<Vec<i64>>,
    /// Coordinates of `s_i` in the cyclic basis `r, Fr, ...` of `L`.
    pub basis: Vec<Vec<BigInt>>,
    /// K3-normalized intersection form on `L` in the cyclic basis.
    pub gram_l: Matrix,
    /// The generator on `L` in the cyclic basis.
    pub f_l: Matrix,
    pub chi0: IntPoly,
    pub chi1: IntPoly,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::pre("Picard Gram entry exceeds 64 bits"))
}

/// Gram of the standard basis `s_i = F^{i-1} χ₀(F) r`, negated.
pub fn picard_gram(lattice: &HgLattice, cert: &K3Certificate) -> Result<PicardLattice> {
    if cert.projective {
        return Err(Error::pre("projective certificates are not supported"));
    }
    let (f, g) = lattice.generator_basis(cert.side == Side::B);
    let gram_l = if cert.renormalized { g.scale(&BigInt::from(-1)) } else { g };
    let n = lattice.n;
    // s = χ₀(F) e_1 by Horner
    let mut s = vec![BigInt::zero(); n];
    for c in cert.chi0.coeffs().iter().rev() {
        s = f.mul_vec(&s);
        s[0] += c;
    }
    let rho = cert.rho;
    let mut basis = Vec::with_capacity(rho);
    for _ in 0..rho {
        basis.push(s.clone());
        s = f.mul_vec(&s);
    }
    let mut gram_pos = vec![vec![0i64; rho]; rho];
    for i in 0..rho {
        for j in 0..rho {
            gram_pos[i][j] = to_i64(&-gram_l.bilinear(&basis[i], &basis[j]))?;
        }
    }
    for i in 0..rho.saturating_sub(1) {
        for j in 0..rho - 1 {
            if gram_pos[i][j] != gram_pos[i + 1][j + 1] {
                return Err(Error::bug("Picard Gram is not Toeplitz"));
            }
        }
    }
    if gram_pos.iter().enumerate().any(|(i, r)| r[i] % 2 != 0) {
        return Err(Error::bug("Picard Gram is not even"));
    }
    if rho > 0 {
        let m = Matrix::from_rows(gram_pos.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        if m.inertia()? != (rho, 0, 0) {
            return Err(Error::bug("Picard lattice is not negative definite"));
        }
    }
    let chi1 = cert.chi1.clone();
    if chi1.degree() != rho {
        return Err(Error::bug("deg chi1 differs from the Picard number"));
    }
    let mut f_on_pic = vec![vec![0i64; rho]; rho];
    for i in 1..rho {
        f_on_pic[i][i - 1] = 1;
    }
    for i in 0..rho {
        f_on_pic[i][rho - 1] = -to_i64(&chi1.coeff(i))?;
    }
    Ok(PicardLattice { rho, gram_pos, f_on_pic, basis, gram_l, f_l: f, chi0: cert.chi0.clone(), chi1 })
}

pub(crate) fn ip(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        if u[i] == 0 {
            continue;
        }
        let mut r = 0i128;
        for (j, &x) in row.iter().enumerate() {
            r += x as i128 * v[j] as i128;
        }
        acc += u[i] as i128 * r;
    }
    acc
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `Q = Σ c_j (t_j - p_j(t_1..t_{j-1}))²`: `c_j` and the rows of `p_j`.
pub fn completed_square(gram: &[Vec<i64>]) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> =
        gram.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut c = vec![BigRational::zero(); n];
    let mut p = vec![Vec::new(); n];
    for j in (0..n).rev() {
        let cj = a[j][j].clone();
        if !cj.is_positive() {
            return Err(Error::pre("Gram matrix is not positive definite"));
        }
        p[j] = (0..j).map(|i| -&a[j][i] / &cj).collect();
        for i in 0..j {
            for k in 0..j {
                let v = &a[i][j] * &a[k][j] / &cj;
                a[i][k] -= v;
            }
        }
        c[j] = cj;
    }
    Ok((c, p))
}

/// All `t` with `Q(t) = 2`, by the depth-first walk of the rooted forest;
/// children in increasing order.
pub fn enumerate_roots(gram: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = gram.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if (0..n).any(|i| (0..n).any(|j| gram[i][j] != gram[j][i])) {
        return Err(Error::pre("Gram matrix is not symmetric"));
    }
    let (reduced, u) = lll_reduce(gram)?;
    let (c, p) = completed_square(&reduced)?;
    let two = BigRational::from_integer(2.into());
    let mut found = Vec::new();
    let mut t = vec![0i64; n];
    walk(0, &BigRational::zero(), &c, &p, &two, &mut t, &mut found)?;
    let mut out: Vec<Vec<i64>> = found.iter().map(|x| mat_vec(&u, x)).collect();
    out.sort();
    Ok(out)
}

/// LLL with `δ = 3/4` on a positive definite Gram matrix. Returns the
/// reduced Gram `Uᵀ G U` and the unimodular `U`.
fn lll_reduce(gram: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let n = gram.len();
    let mut g: Vec<Vec<i128>> = gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let rat = |x: i128| BigRational::from_integer(BigInt::from(x));
    // b_k <- b_k - r b_j
    let reduce = |g: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, k: usize, j: usize, r: i128| {
        for row in u.iter_mut() {
            row[k] -= r * row[j];
        }
        for i in 0..n {
            g[i][k] -= r * g[i][j];
        }
        for i in 0..n {
            g[k][i] = g[i][k];
        }
        g[k][k] = g[k][k] - r * g[j][k];
    };
    let gram_schmidt = |g: &Vec<Vec<i128>>| {
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut b = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut v = rat(g[i][j]);
                for k in 0..j {
                    v -= &mu[j][k] * &mu[i][k] * &b[k];
                }
                mu[i][j] = v / &b[j];
            }
            let mut v = rat(g[i][i]);
            for k in 0..i {
                v -= &mu[i][k] * &mu[i][k] * &b[k];
            }
            b[i] = v;
        }
        (mu, b)
    };
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::bug("LLL did not terminate"));
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let r = mu[k][j].round().to_integer().to_i128().ok_or_else(|| Error::bug("LLL overflow"))?;
            if r != 0 {
                reduce(&mut g, &mut u, k, j, r);
            }
        }
        let (mu, b) = gram_schmidt(&g);
        if b.iter().any(|x| !x.is_positive()) {
            return Err(Error::pre("Gram matrix is not positive definite"));
        }
        if b[k] < (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
    let narrow = |m: Vec<Vec<i128>>| -> Result<Vec<Vec<i64>>> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::bug("LLL overflow"))).collect())
            .collect()
    };
    Ok((narrow(g)?, narrow(u)?))
}

fn walk(
    k: usize,
    q: &BigRational,
    c: &[BigRational],
    p: &[Vec<BigRational>],
    two: &BigRational,
    t: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    let n = c.len();
    if k == n {
        if q.is_zero() {
            return Ok(());
        }
        if q != two {
            return Err(Error::bug("even lattice takes a value other than 0 or 2 below 2"));
        }
        out.push(t.clone());
        return Ok(());
    }
    let center: BigRational = p[k].iter().zip(t.iter()).map(|(m, &x)| m * BigRational::from_integer(x.into())).sum();
    let budget = two - q;
    let term = |x: i64| {
        let d = BigRational::from_integer(x.into()) - &center;
        &c[k] * &d * &d
    };
    let base = center.floor().to_integer().to_i64().ok_or_else(|| Error::bug("root coordinate overflow"))?;
    let mut lo = base;
    while term(lo - 1) <= budget {
        lo -= 1;
    }
    let mut x = lo;
    loop {
        let v = term(x);
        if v > budget {
            if x > base {
                break;
            }
            x += 1;
            continue;
        }
        t[k] = x;
        walk(k + 1, &(q + v), c, p, two, t, out)?;
        x += 1;
    }
    t[k] = 0;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ade {
    E,
    D,
    A,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinComponent {
    pub kind: Ade,
    pub rank: usize,
    /// Indices into `simple`, in the labeling `e_1, ..., e_n`.
    pub nodes: Vec<usize>,
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match self.kind {
            Ade::A => 'A',
            Ade::D => 'D',
            Ade::E => 'E',
        };
        write!(f, "{l}{}", self.rank)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystemData {
    pub all_roots: Vec<Vec<i64>>,
    /// Sorted increasingly in the lexicographic order; `u_1` is index 0.
    pub positive: Vec<Vec<i64>>,
    /// Indices into `positive`, increasing.
    pub simple: Vec<usize>,
    /// `2 δ_W = Σ_{u ∈ Δ⁺} u`.
    pub weyl2: Vec<i64>,
    pub dynkin: Vec<DynkinComponent>,
}

impl RootSystemData {
    pub fn simple_roots(&self) -> Vec<&Vec<i64>> {
        self.simple.iter().map(|&i| &self.positive[i]).collect()
    }

    pub fn dynkin_string(&self) -> String {
        if self.dynkin.is_empty() {
            return String::from("0");
        }
        let v: Vec<String> = self.dynkin.iter().map(|c| alloc::format!("{c}")).collect();
        v.join("+")
    }

    pub fn positive_index(&self, v: &[i64]) -> Option<usize> {
        self.positive.binary_search_by(|u| u.as_slice().cmp(v)).ok()
    }
}

fn is_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Positive roots, simple roots by the subtraction test, Weyl vector and
/// Dynkin type.
pub fn positive_simple_roots(roots: Vec<Vec<i64>>, gram: &[Vec<i64>]) -> Result<RootSystemData> {
    let mut positive: Vec<Vec<i64>> = roots.iter().filter(|u| is_positive(u)).cloned().collect();
    if positive.len() * 2 != roots.len() {
        return Err(Error::bug("roots do not come in ± pairs"));
    }
    // Vec<i64> ordering is exactly the lexicographic order
    positive.sort();
    let set: BTreeSet<&Vec<i64>> = positive.iter().collect();
    let mut simple = Vec::new();
    for (i, u) in positive.iter().enumerate() {
        let decomposable = positive.iter().any(|v| {
            let d: Vec<i64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
            set.contains(&d)
        });
        if !decomposable {
            simple.push(i);
        }
    }
    let n = gram.len();
    let mut weyl2 = vec![0i64; n];
    for u in &positive {
        for (w, x) in weyl2.iter_mut().zip(u) {
            *w += x;
        }
    }
    let simple_vecs: Vec<Vec<i64>> = simple.iter().map(|&i| positive[i].clone()).collect();
    for s in &simple_vecs {
        if ip(gram, s, &weyl2) != 2 {
            return Err(Error::bug("Weyl vector does not pair to 1 with a simple root"));
        }
    }
    let dynkin = dynkin_classify(&simple_vecs, gram)?;
    let rank: usize = dynkin.iter().map(|c| c.rank).sum();
    if rank != simple.len() {
        return Err(Error::bug("Dynkin components do not cover the simple roots"));
    }
    Ok(RootSystemData { all_roots: roots, positive, simple, weyl2, dynkin })
}

/// Walk an arm from `start` away from `from`.
fn arm(adj: &[Vec<usize>], from: usize, start: usize) -> Vec<usize> {
    let mut v = vec![start];
    let (mut prev, mut cur) = (from, start);
    while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
        v.push(nx);
        prev = cur;
        cur = nx;
    }
    v
}

/// Connected components recognized as A/D/E, each labeled `e_1..e_n`.
pub fn dynkin_classify(simple: &[Vec<i64>], gram: &[Vec<i64>]) -> Result<Vec<DynkinComponent>> {
    let m = simple.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        if ip(gram, &simple[i], &simple[i]) != 2 {
            return Err(Error::bug("simple root of norm other than 2"));
        }
        for j in i + 1..m {
            match ip(gram, &simple[i], &simple[j]) {
                0 => {}
                -1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                x => return Err(Error::bug(alloc::format!("Cartan entry {x} between simple roots"))),
            }
        }
    }
    let mut seen = vec![false; m];
    let mut comps = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut nodes = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < nodes.len() {
            for &x in &adj[nodes[k]] {
                if !seen[x] {
                    seen[x] = true;
                    nodes.push(x);
                }
            }
            k += 1;
        }
        nodes.sort();
        let edges: usize = nodes.iter().map(|&x| adj[x].len()).sum::<usize>() / 2;
        if edges + 1 != nodes.len() {
            return Err(Error::bug("Coxeter graph component is not a tree"));
        }
        comps.push(label_component(&adj, &nodes)?);
    }
    comps.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.kind.cmp(&b.kind)).then(a.nodes.iter().min().cmp(&b.nodes.iter().min())));
    Ok(comps)
}

fn label_component(adj: &[Vec<usize>], nodes: &[usize]) -> Result<DynkinComponent> {
    let n = nodes.len();
    let branches: Vec<usize> = nodes.iter().copied().filter(|&x| adj[x].len() >= 3).collect();
    if branches.is_empty() {
        let ends: Vec<usize> = nodes.iter().copied().filter(|&x| adj[x].len() <= 1).collect();
        let start = *ends.iter().min().unwrap();
        let chain = if n == 1 { vec![start] } else { arm(adj, usize::MAX, start) };
        return Ok(DynkinComponent { kind: Ade::A, rank: n, nodes: chain });
    }
    if branches.len() > 1 || adj[branches[0]].len() > 3 {
        return Err(Error::bug("Coxeter graph is not of type ADE"));
    }
    let b = branches[0];
    let mut arms: Vec<Vec<usize>> = adj[b].iter().map(|&x| arm(adj, b, x)).collect();
    // shortest arms first, ties by the tip's index
    arms.sort_by(|x, y| x.len().cmp(&y.len()).then(x.last().cmp(&y.last())));
    let lens = (arms[0].len(), arms[1].len(), arms[2].len());
    match lens {
        (1, 1, _) => {
            // D_n: long arm from its tip to the branch, then the two short arms
            let mut v: Vec<usize> = arms[2].iter().rev().copied().collect();
            v.push(b);
            v.push(arms[0][0]);
            v.push(arms[1][0]);
            Ok(DynkinComponent { kind: Ade::D, rank: n, nodes: v })
        }
        (1, 2, 2) | (1, 2, 3) | (1, 2, 4) => {
            let mut v = vec![arms[1][1], arms[0][0], arms[1][0], b];
            v.extend(arms[2].iter().copied());
            Ok(DynkinComponent { kind: Ade::E, rank: n, nodes: v })
        }
        _ => Err(Error::bug("Coxeter graph is not of type ADE")),
    }
}

/// Enumerate and complete the root system of a Picard lattice.
pub fn root_system(pl: &PicardLattice) -> Result<RootSystemData> {
    let roots = enumerate_roots(&pl.gram_pos)?;
    positive_simple_roots(roots, &pl.gram_pos)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LowestIndex,
    HighestIndex,
}

#[derive(Clone, Debug)]
pub struct BringBackResult {
    /// Indices (0-based into `positive`) in the order the reflections are
    /// applied; `w_F = σ_{steps[k-1]} ∘ ... ∘ σ_{steps[0]}`.
    pub steps: Vec<usize>,
    /// `F̃ = w_F ∘ F` on `L` in the cyclic basis.
    pub modified: Matrix,
    /// `w_F` on `L`.
    pub weyl: Matrix,
    /// `F̃` on the standard basis of `Pic`.
    pub modified_pic: Vec<Vec<i64>>,
}

impl BringBackResult {
    /// 1-based positive-root indices written left to right as a composition.
    pub fn word(&self) -> Vec<usize> {
        self.steps.iter().rev().map(|i| i + 1).collect()
    }
}

fn reflect(g: &[Vec<i64>], u: &[i64], v: &mut [i64]) {
    let c = ip(g, v, u) as i64;
    for (x, y) in v.iter_mut().zip(u) {
        *x -= c * y;
    }
}

/// Greedy ascent of `<d, δ_W>` by reflections; each step takes the positive
/// root minimizing `<d, u><u, δ_W>`.
pub fn bring_back(pl: &PicardLattice, rs: &RootSystemData, tie: TieBreak) -> Result<BringBackResult> {
    let g = &pl.gram_pos;
    let rho = pl.rho;
    let delta = &rs.weyl2;
    let mut d = mat_vec(&pl.f_on_pic, delta);
    let u_delta: Vec<i128> = rs.positive.iter().map(|u| ip(g, u, delta)).collect();
    if u_delta.iter().any(|&x| x <= 0) {
        return Err(Error::bug("Weyl vector is not in the positive chamber"));
    }
    let cap = 4 * rs.positive.len() + 16;
    let mut steps = Vec::new();
    let mut last = ip(g, &d, delta);
    loop {
        let mut best: Option<(i128, usize)> = None;
        for (i, u) in rs.positive.iter().enumerate() {
            let du = ip(g, &d, u);
            if du == 0 {
                return Err(Error::bug("F δ_W is not regular"));
            }
            let val = du * u_delta[i];
            if val >= 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bv, _)) => val < bv || (val == bv && tie == TieBreak::HighestIndex),
            };
            if better {
                best = Some((val, i));
            }
        }
        let Some((_, i)) = best else { break };
        reflect(g, &rs.positive[i], &mut d);
        let now = ip(g, &d, delta);
        if now <= last {
            return Err(Error::bug("reflection step did not increase <d, δ>"));
        }
        last = now;
        steps.push(i);
        if steps.len() > cap {
            return Err(Error::bug(alloc::format!("bringing back exceeded {cap} reflections at <d, δ> = {now}")));
        }
    }
    // w_F on Pic, then on L
    let mut modified_pic = vec![vec![0i64; rho]; rho];
    for j in 0..rho {
        let mut col: Vec<i64> = pl.f_on_pic.iter().map(|r| r[j]).collect();
        for &i in &steps {
            reflect(g, &rs.positive[i], &mut col);
        }
        for (r, x) in col.into_iter().enumerate() {
            modified_pic[r][j] = x;
        }
    }
    let n = pl.f_l.rows();
    let mut weyl = Matrix::identity(n);
    for &i in &steps {
        let u_l = to_l(pl, &rs.positive[i]);
        // v ↦ v - <v, u> u with <v, u> = -(v, u)
        let gu = pl.gram_l.mul_vec(&u_l);
        let mut refl = Matrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                refl[(r, c)] += &u_l[r] * &gu[c];
            }
        }
        weyl = &refl * &weyl;
    }
    let modified = &weyl * &pl.f_l;
    let res = BringBackResult { steps, modified, weyl, modified_pic };
    check_modified(pl, rs, &res)?;
    Ok(res)
}

/// `Σ t_i s_i` in the cyclic basis of `L`.
pub fn to_l(pl: &PicardLattice, t: &[i64]) -> Vec<BigInt> {
    let n = pl.f_l.rows();
    let mut v = vec![BigInt::zero(); n];
    for (ti, s) in t.iter().zip(&pl.basis) {
        if *ti != 0 {
            for (x, y) in v.iter_mut().zip(s) {
                *x += y * ti;
            }
        }
    }
    v
}

fn check_modified(pl: &PicardLattice, rs: &RootSystemData, res: &BringBackResult) -> Result<()> {
    let m = &res.modified;
    if &(&m.transpose() * &pl.gram_l) * m != pl.gram_l {
        return Err(Error::bug("modified matrix is not an isometry"));
    }
    // w_F fixes the complement χ₁(F) L of Pic
    let c1 = pl.f_l.poly_eval(&pl.chi1);
    if &res.weyl * &c1 != c1 {
        return Err(Error::bug("w_F moves the orthogonal complement of Pic"));
    }
    for u in &rs.positive {
        let img = mat_vec(&res.modified_pic, u);
        if rs.positive_index(&img).is_none() {
            return Err(Error::bug("modified matrix does not preserve the positive roots"));
        }
    }
    // the Pic action agrees with the action on L
    for j in 0..pl.rho {
        let mut e = vec![0i64; pl.rho];
        e[j] = 1;
        let lhs = m.mul_vec(&to_l(pl, &e));
        let rhs = to_l(pl, &mat_vec(&res.modified_pic, &e));
        if lhs != rhs {
            return Err(Error::bug("Pic and L actions of the modified matrix differ"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ModifiedInvariants {
    pub chi_tilde: IntPoly,
    pub chi1_tilde: IntPoly,
    pub chi1_factors: FactorList,
    pub trace: BigInt,
}

/// `χ̃ = χ₀ χ̃₁` with `χ̃₁` a product of cyclotomic polynomials.
pub fn modified_invariants(pl: &PicardLattice, res: &BringBackResult) -> Result<ModifiedInvariants> {
    let chi_tilde = res.modified.charpoly();
    let chi1_tilde = chi_tilde.div_exact(&pl.chi0).ok_or_else(|| Error::bug("chi0 does not divide the modified characteristic polynomial"))?;
    let pic = Matrix::from_rows(res.modified_pic.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
    if pl.rho > 0 && pic.charpoly() != chi1_tilde {
        return Err(Error::bug("chi1 tilde differs from the characteristic polynomial on Pic"));
    }
    let chi1_factors = classify_product(&chi1_tilde)?;
    if chi1_factors.factors.iter().any(|f| !matches!(f.tag, FactorTag::Cyclotomic(_))) {
        return Err(Error::bug("chi1 tilde has a non-cyclotomic factor"));
    }
    let trace = (0..res.modified.rows()).map(|i| res.modified[(i, i)].clone()).sum();
    Ok(ModifiedInvariants { chi_tilde, chi1_tilde, chi1_factors, trace })
}

/// `(z-1)^4*(z+1)^4*(z^2+1)^2`; cyclotomic factors of degree above 2 are
/// written `C(k)`.
pub fn cyclotomic_display(fl: &FactorList) -> String {
    let mut parts = Vec::new();
    for f in &fl.factors {
        let body = match f.tag {
            FactorTag::Cyclotomic(k) if f.poly.degree() > 2 => alloc::format!("C({k})"),
            _ => alloc::format!("({})", f.poly.to_string_var('z').replace(' ', "")),
        };
        parts.push(if f.multiplicity > 1 { alloc::format!("{body}^{}", f.multiplicity) } else { body });
    }
    if parts.is_empty() {
        return String::from("1");
    }
    parts.join("*")
}

#[derive(Clone, Debug)]
pub struct DynkinAction {
    /// `perm[i] = j` when `F̃` sends the `i`-th simple root to the `j`-th.
    pub perm: Vec<usize>,
    /// Label of each simple root, e.g. `e1'` or `c2`.
    pub labels: Vec<String>,
    /// Nontrivial cycles in labels.
    pub cycles: Vec<Vec<String>>,
}

impl fmt::Display for DynkinAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("id");
        }
        for c in &self.cycles {
            write!(f, "({})", c.join(", "))?;
        }
        Ok(())
    }
}

/// Action of `F̃` on the simple roots. Components in one orbit are labeled
/// through `F̃`: the image of `e_i` is `e_i'`, and for type A the second
/// component uses `d` instead of `c`.
pub fn dynkin_action(res: &BringBackResult, rs: &RootSystemData) -> Result<DynkinAction> {
    let m = rs.simple.len();
    let mut perm = vec![0usize; m];
    for (i, &si) in rs.simple.iter().enumerate() {
        let img = mat_vec(&res.modified_pic, &rs.positive[si]);
        let pi = rs.positive_index(&img).ok_or_else(|| Error::bug("image of a simple root is not positive"))?;
        perm[i] = rs.simple.iter().position(|&x| x == pi).ok_or_else(|| Error::bug("image of a simple root is not simple"))?;
    }
    let comp_of = |x: usize| rs.dynkin.iter().position(|c| c.nodes.contains(&x)).unwrap();
    let mut labels = vec![String::new(); m];
    let mut done = vec![false; rs.dynkin.len()];
    for ci in 0..rs.dynkin.len() {
        if done[ci] {
            continue;
        }
        let base = &rs.dynkin[ci];
        let mut cur: Vec<usize> = base.nodes.clone();
        let mut t = 0usize;
        loop {
            let c = comp_of(cur[0]);
            if done[c] {
                break;
            }
            done[c] = true;
            for (k, &x) in cur.iter().enumerate() {
                labels[x] = match base.kind {
                    Ade::A => alloc::format!("{}{}", (b'c' + t as u8) as char, k + 1),
                    _ => alloc::format!("e{}{}", k + 1, "'".repeat(t)),
                };
            }
            cur = cur.iter().map(|&x| perm[x]).collect();
            t += 1;
        }
    }
    let mut cycles = Vec::new();
    let mut seen = vec![false; m];
    let order: Vec<usize> = rs.dynkin.iter().flat_map(|c| c.nodes.iter().copied()).collect();
    for &start in &order {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(labels[x].clone());
            x = perm[x];
        }
        cycles.push(cyc);
    }
    Ok(DynkinAction { perm, labels, cycles })
}

/// Full pipeline for a certificate.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub picard: PicardLattice,
    pub roots: RootSystemData,
    pub bring_back: BringBackResult,
    pub invariants: ModifiedInvariants,
    pub action: DynkinAction,
}

pub fn run_pipeline(lattice: &HgLattice, cert: &K3Certificate) -> Result<Pipeline> {
    let picard = picard_gram(lattice, cert)?;
    let roots = root_system(&picard)?;
    let bb = bring_back(&picard, &roots, TieBreak::LowestIndex)?;
    let invariants = modified_invariants(&picard, &bb)?;
    let action = dynkin_action(&bb, &roots)?;
    Ok(Pipeline { picard, roots, bring_back: bb, invariants, action })
}

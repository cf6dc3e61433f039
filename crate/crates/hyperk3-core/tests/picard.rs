use hyperk3_core::clusters::Side;
use hyperk3_core::hyplattice::build_lattice;
use hyperk3_core::k3class::*;
use hyperk3_core::picard::*;
use hyperk3_core::polyring::builtin::*;
use hyperk3_core::polyring::*;
use hyperk3_core::IntPoly;
use proptest::prelude::*;

fn lehmer_a(r: usize, ks: &[u64]) -> (K3Certificate, Pipeline) {
    let big_phi = &lt() * &ct_product(ks).unwrap();
    let (phi, psi) = pair_from_traces(&big_phi, &salem_trace_r(r).unwrap(), 22).unwrap();
    let c = k3_certificate(&phi, &psi, Side::A).unwrap().unwrap();
    let lat = build_lattice(&c.phi, &c.psi).unwrap();
    let p = run_pipeline(&lat, &c).unwrap();
    (c, p)
}

/// Every `t` in a box with `Q(t) = 2`.
fn brute_roots(g: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut out = Vec::new();
    let mut t = vec![-bound; n];
    loop {
        let q: i64 = (0..n).map(|i| (0..n).map(|j| g[i][j] * t[i] * t[j]).sum::<i64>()).sum();
        if q == 2 {
            out.push(t.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            if t[k] < bound {
                t[k] += 1;
                break;
            }
            t[k] = -bound;
        }
    }
}

#[test]
fn a2_roots() {
    let g = vec![vec![2, -1], vec![-1, 2]];
    let mut r = enumerate_roots(&g).unwrap();
    r.sort();
    assert_eq!(r, brute_roots(&g, 3));
    assert_eq!(r.len(), 6);
    let rs = positive_simple_roots(r, &g).unwrap();
    assert_eq!(rs.positive.len(), 3);
    assert_eq!(rs.simple.len(), 2);
    assert_eq!(rs.dynkin_string(), "A2");
    assert!(enumerate_roots(&[]).unwrap().is_empty());
    assert!(enumerate_roots(&[vec![-2]]).is_err());
}

#[test]
fn worked_example() {
    let (c, p) = lehmer_a(3, &[3, 4, 6, 8]);
    assert_eq!((c.table, c.case), (Table::HypA, 7));
    assert_eq!(p.picard.rho, 12);
    assert_eq!(p.roots.all_roots.len(), 144);
    assert_eq!(p.roots.positive.len(), 72);
    let simple: Vec<usize> = p.roots.simple.iter().map(|i| i + 1).collect();
    assert_eq!(simple, vec![1, 2, 3, 5, 7, 8, 9, 16, 23, 24, 25, 35]);
    assert_eq!(p.roots.dynkin_string(), "E6+E6");
    assert_eq!(cyclotomic_display(&p.invariants.chi1_factors), "(z-1)^4*(z+1)^4*(z^2+1)^2");
    assert_eq!(p.invariants.trace, (-1).into());
    // the default tie-break applies commuting reflections in another order
    assert_eq!(p.bring_back.word(), vec![35, 23, 5, 41, 62, 57, 72]);
    let cyc: Vec<usize> = p.action.cycles.iter().map(|c| c.len()).collect();
    assert_eq!(cyc, vec![4, 2, 4, 2]);
    assert_eq!(p.action.to_string(), "(e1, e1', e6, e6')(e2, e2')(e3, e3', e5, e5')(e4, e4')");
}

#[test]
fn tie_break_gives_same_matrix() {
    let (_, p) = lehmer_a(1, &[4, 20]);
    let other = bring_back(&p.picard, &p.roots, TieBreak::HighestIndex).unwrap();
    assert_eq!(other.modified, p.bring_back.modified);
}

#[test]
fn picard_gram_is_toeplitz_even_definite() {
    let (_, p) = lehmer_a(3, &[3, 4, 6, 8]);
    let g = &p.picard.gram_pos;
    for i in 0..11 {
        assert_eq!(g[i][i] % 2, 0);
        for j in 0..11 {
            assert_eq!(g[i][j], g[i + 1][j + 1]);
        }
    }
}

#[test]
fn rho_zero_needs_no_modification() {
    let big_phi = ct_product(&[1, 1, 1, 3, 4, 6, 16]).unwrap();
    let (phi, psi) = pair_from_traces(&big_phi, &salem_trace_r(1).unwrap(), 22).unwrap();
    let c = k3_certificate(&phi, &psi, Side::B).unwrap().unwrap();
    let lat = build_lattice(&c.phi, &c.psi).unwrap();
    let p = run_pipeline(&lat, &c).unwrap();
    assert_eq!(p.picard.rho, 0);
    assert!(p.bring_back.steps.is_empty());
    assert_eq!(p.bring_back.modified, p.picard.f_l);
    assert_eq!(p.invariants.chi1_tilde, IntPoly::one());
}

#[test]
fn dynkin_types_of_min_a_rows() {
    let (_, p) = lehmer_a(1, &[4, 6, 7]);
    assert_eq!(p.roots.dynkin_string(), "D10");
    assert_eq!(p.invariants.trace, 7.into());
    assert_eq!(p.action.to_string(), "(e9, e10)");
    let (_, p) = lehmer_a(3, &[3, 15]);
    assert_eq!(p.roots.dynkin_string(), "A2");
    assert_eq!(cyclotomic_display(&p.invariants.chi1_factors), "(z-1)^2*(z^2+z+1)*C(15)");
    assert_eq!(p.action.to_string(), "id");
    let (_, p) = lehmer_a(4, &[4, 24]);
    assert_eq!(p.roots.dynkin_string(), "E8+A2+A2");
    assert_eq!(p.action.to_string(), "(c1, d1, c2, d2)");
}

/// `Uᵀ C U` with `C` a block sum of `A_k` Cartan matrices and `(4)`
/// blocks, `U` unit upper triangular.
fn even_pd_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|n| {
        (proptest::collection::vec(0u8..3, n), proptest::collection::vec(-1i64..=1, n * n)).prop_map(move |(cuts, u)| {
            let mut c = vec![vec![0i64; n]; n];
            for i in 0..n {
                c[i][i] = if cuts[i] == 2 { 4 } else { 2 };
                if i + 1 < n && cuts[i] == 0 && cuts[i + 1] != 2 {
                    c[i][i + 1] = -1;
                    c[i + 1][i] = -1;
                }
            }
            let um = |i: usize, j: usize| if i == j { 1 } else if i < j { u[i * n + j] } else { 0 };
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| um(a, i) * c[a][b] * um(b, j)).sum();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_walk_matches_box(g in even_pd_gram()) {
        let mut r = enumerate_roots(&g).unwrap();
        r.sort();
        let box_bound = r.iter().flatten().map(|x| x.abs()).max().unwrap_or(0) + 2;
        prop_assert_eq!(r.clone(), brute_roots(&g, box_bound));
        let rs = positive_simple_roots(r, &g).unwrap();
        prop_assert_eq!(rs.all_roots.len(), 2 * rs.positive.len());
        let k: usize = rs.dynkin.iter().map(|c| c.rank).sum();
        prop_assert_eq!(k, rs.simple.len());
    }
}

#[test]
fn worked_example_highest_tie() {
    let (_, p) = lehmer_a(3, &[3, 4, 6, 8]);
    let other = bring_back(&p.picard, &p.roots, TieBreak::HighestIndex).unwrap();
    assert_eq!(other.word(), vec![5, 23, 35, 41, 62, 57, 72]);
}

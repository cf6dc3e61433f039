use hyperk3_core::clusters::Side;
use hyperk3_core::k3class::Table;
use hyperk3_core::polyring::builtin::*;
use hyperk3_core::polyring::*;
use hyperk3_core::search::*;
use hyperk3_core::siegel::SH;
use hyperk3_core::IntPoly;
use proptest::prelude::*;

#[test]
fn catalog_counts() {
    let c = list_ct_catalog();
    assert_eq!(c.len(), 41);
    assert_eq!(c.iter().filter(|e| e.unramified).count(), 15);
    let deg = |d: usize, unram: bool| -> Vec<u64> {
        c.iter().filter(|e| e.degree == d && (!unram || e.unramified)).map(|e| e.k).collect()
    };
    assert_eq!(deg(1, false), vec![1, 2, 3, 4, 6]);
    assert_eq!(deg(6, true), vec![21, 28, 36, 42]);
    // nothing of degree <= 10 beyond the bound
    for k in 94..400u64 {
        assert!(totient(k) > 20, "k = {k}");
    }
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_ct_products(0, MultiplicityRule::SetsOnly), vec![Vec::<u64>::new()]);
    assert!(enumerate_ct_products(5, MultiplicityRule::SetsOnly).contains(&vec![4, 6, 7]));
    let ten = enumerate_ct_products(10, MultiplicityRule::OneMultipleLe3);
    assert!(ten.contains(&vec![1, 1, 1, 3, 4, 6, 16]));
    assert!(!ten.contains(&vec![1, 1, 2, 2, 3, 4, 16]));
    assert!(!ten.contains(&vec![5, 5, 3, 4, 6, 16]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumeration_respects_rule(target in 0usize..=6, sets in any::<bool>()) {
        let rule = if sets { MultiplicityRule::SetsOnly } else { MultiplicityRule::OneMultipleLe3 };
        let all = enumerate_ct_products(target, rule);
        let deg = |k: u64| cyclotomic_trace(k).unwrap().degree();
        for m in &all {
            prop_assert_eq!(m.iter().map(|&k| deg(k)).sum::<usize>(), target);
            let mut reps = Vec::new();
            for w in m.windows(2) {
                prop_assert!(w[0] <= w[1]);
                if w[0] == w[1] { reps.push(w[0]); }
            }
            reps.dedup();
            if sets { prop_assert!(reps.is_empty()); } else {
                prop_assert!(reps.len() <= 1);
                for r in reps {
                    prop_assert!([1, 2, 3, 4, 6].contains(&r));
                    prop_assert!(m.iter().filter(|&&k| k == r).count() <= 3);
                }
            }
        }
        // independent count by brute force over index subsets for small targets
        if sets && target <= 4 {
            let pool: Vec<usize> = list_ct_catalog().iter().filter(|e| e.degree <= target).map(|e| e.degree).collect();
            let mut n = 0;
            for mask in 0u32..(1 << pool.len()) {
                let d: usize = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).sum();
                if d == target { n += 1; }
            }
            prop_assert_eq!(all.len(), n);
        }
    }
}

#[test]
fn r1_scan() {
    let v = scan_deg22(1).unwrap();
    assert_eq!(v.len(), 26);
    let first = &v[0];
    assert_eq!(first.k, vec![1, 1, 1, 3, 4, 6, 16]);
    assert_eq!((first.certificate.table, first.certificate.case), (Table::HypB, 1));
    assert_eq!(first.st_label, "y8");
    assert_eq!(first.sh(), Some(SH::S));
    for e in &v {
        structural_invariants(e).unwrap();
    }
}

#[test]
fn ramified_psi_gives_nothing() {
    // Psi(2) = 0 for the factor w - 2
    let bad = &desc(&[1, -2]) * &ct_product(&[25]).unwrap();
    assert_eq!(bad.degree(), 11);
    let c = candidates_for(Family::Deg22, &[(PsiLabel::Explicit(1), bad)], &IntPoly::one(), 10, MultiplicityRule::OneMultipleLe3, Side::B);
    assert!(c.is_empty());
}

#[test]
fn widened_side_a() {
    let w = |c: &[i64]| desc(c);
    let p1 = &(&(&w(&[1, 1]) * &w(&[1, 0, -4])) - &IntPoly::one()) * &cyclotomic_trace(60).unwrap();
    let p9 = &(&product(&[w(&[1, 0]), w(&[1, 0, -1]), w(&[1, 0, -3]), w(&[1, 0, -4])]) - &IntPoly::one())
        * &cyclotomic_trace(24).unwrap();
    let v = scan_side_a_with(&[(PsiLabel::Explicit(1), p1), (PsiLabel::Explicit(9), p9)], 5, MultiplicityRule::SetsOnly).unwrap();
    let find = |l: u8, k: &[u64]| v.iter().find(|e| e.psi_label == PsiLabel::Explicit(l) && e.k == k);
    let e1 = find(1, &[5, 18]).expect("case 1 example");
    assert_eq!(e1.certificate.case, 1);
    let e9 = find(9, &[4, 15]).expect("case 9 example");
    assert_eq!(e9.certificate.case, 9);
}

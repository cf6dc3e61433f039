use std::cmp::Ordering;

use hyperk3_core::clusters::Side;
use hyperk3_core::hyplattice::build_lattice;
use hyperk3_core::k3class::k3_certificate;
use hyperk3_core::numfield::*;
use hyperk3_core::polyring::builtin::*;
use hyperk3_core::polyring::*;
use hyperk3_core::{AlgebraicReal, BigInt, IntPoly};
use proptest::prelude::*;

fn inner_roots(t: &IntPoly) -> Vec<AlgebraicReal> {
    let mut v: Vec<_> = isolate_real_roots(t)
        .into_iter()
        .filter(|r| r.cmp_int(-2) == Ordering::Greater && r.cmp_int(2) == Ordering::Less)
        .collect();
    v.sort_by(|a, b| b.cmp_value(a));
    v
}

#[test]
fn chebyshev_values() {
    assert_eq!(chebyshev_p(0), IntPoly::from_i64s(&[2]));
    assert_eq!(chebyshev_p(1), desc(&[1, 0]));
    assert_eq!(chebyshev_p(2), desc(&[1, 0, -2]));
    assert_eq!(chebyshev_p(3), desc(&[1, 0, -3, 0]));
}

#[test]
fn first_coefficient() {
    let r = salem_trace_r(1).unwrap();
    let mut row = vec![BigInt::from(2)];
    row.extend((1..11).map(|_| BigInt::from(0)));
    assert_eq!(unit_from_gram(&row, &r).unwrap().coeffs[0], BigInt::from(1));
    row[0] = BigInt::from(-2);
    assert_eq!(unit_from_gram(&row, &r).unwrap().coeffs[0], BigInt::from(-1));
    row[0] = BigInt::from(3);
    assert!(unit_from_gram(&row, &r).is_err());
}

#[test]
fn r1_top_entry_unit() {
    let big_phi = ct_product(&[1, 1, 1, 3, 4, 6, 16]).unwrap();
    let r1 = salem_trace_r(1).unwrap();
    let (phi, psi) = pair_from_traces(&big_phi, &r1, 22).unwrap();
    let l = build_lattice(&phi, &psi).unwrap();
    let cert = k3_certificate(&phi, &psi, Side::B).unwrap().unwrap();
    let u = unit_for_certificate(&l, &cert).unwrap();
    assert_eq!(u.unit, desc(&[-1, 6, -7, -22, 54, -4, -70, 36, 24, -16, 0]));
    for j in 0..11 {
        assert_eq!(u.c_matrix[j][j], BigInt::from(if j == 0 { 2 } else { 1 }));
    }
    let y = inner_roots(&r1);
    assert!(y[7].same_value(&cert.special_trace));
    assert_eq!(verify_unit(&u.unit, &r1, Some(&y[7])).unwrap(), Ok(()));
    assert!(verify_unit(&u.unit, &r1, Some(&y[0])).unwrap().is_err());
    // full 22 x 22 reconstruction in the basis r, Br, ...
    let sign = BigInt::from(if cert.renormalized { -1 } else { 1 });
    assert_eq!(trace_form_gram(&u.unit, &r1, 22).unwrap(), l.gram_b().scale(&sign));
    assert_eq!(recover_phi(&u.unit, &psi).unwrap(), big_phi);
}

#[test]
fn trivial_units() {
    let r1 = salem_trace_r(1).unwrap();
    assert!(verify_unit(&IntPoly::zero(), &r1, None).unwrap().is_err());
    assert_eq!(verify_unit(&IntPoly::one(), &r1, None).unwrap(), Ok(()));
    let y = inner_roots(&r1);
    let n = compatible_roots(&IntPoly::one(), &r1).len();
    assert!(n > 1);
    assert!(verify_unit(&IntPoly::one(), &r1, Some(&y[0])).unwrap().is_err());
}

/// Lattices with `(1,1)_S = -2` from the recovered table: the hypergeometric
/// unit has the same special trace as the number-field data, and `Φ` comes
/// back from `(U, S)`.
#[test]
fn recovered_cases() {
    let ct = |k| cyclotomic_trace(k).unwrap();
    let cases: Vec<(usize, IntPoly, usize)> = vec![
        (2, &ct(3) * &desc(&[1, 0, -9, 0, 25, -2, -21, 7, 2, -2]), 4),
        (4, product(&[ct(4), ct(42), desc(&[1, -1, -3, 1])]), 5),
        (5, desc(&[1, 0, -10, -2, 33, 12, -37, -16, 6, -3, -3]), 4),
        (9, desc(&[1, 0, -11, -3, 42, 22, -62, -49, 23, 33, 8]), 6),
        (10, &ct(4) * &desc(&[1, -1, -10, 7, 35, -14, -48, 7, 18, -1]), 5),
    ];
    for (i, big_phi, st) in cases {
        let r = salem_trace_r(i).unwrap();
        let (phi, psi) = pair_from_traces(&big_phi, &r, 22).unwrap();
        let l = build_lattice(&phi, &psi).unwrap();
        assert!(l.is_unimodular(), "case {i}");
        let cert = k3_certificate(&phi, &psi, Side::B).unwrap().unwrap_or_else(|e| panic!("case {i}: {e}"));
        let u = unit_for_certificate(&l, &cert).unwrap();
        assert_eq!(u.coeffs[0], BigInt::from(-1), "case {i}: (1,1)_S = -2");
        let y = inner_roots(&r);
        assert!(cert.special_trace.same_value(&y[st - 1]), "case {i}");
        assert_eq!(verify_unit(&u.unit, &r, Some(&y[st - 1])).unwrap(), Ok(()), "case {i}");
        assert_eq!(recover_phi(&u.unit, &psi).unwrap(), big_phi, "case {i}");
    }
}

#[test]
fn recover_rejects_bad_norm() {
    let psi = salem_r(1).unwrap();
    assert!(recover_phi(&desc(&[2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]), &psi).is_err());
}

/// Rank-6 unimodular pairs `Ψ = Φ·(w - c) + e` with `Ψ(±2) = ±1`.
fn unimodular_rank6() -> Vec<(IntPoly, IntPoly)> {
    let mut v = Vec::new();
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                for e in [-1i64, 1] {
                    let big_phi = desc(&[1, a, b]);
                    let big_psi = &(&big_phi * &desc(&[1, -c])) + &IntPoly::from_i64s(&[e]);
                    let units = [2, -2].iter().all(|&x| big_psi.eval_i64(x).magnitude() == &num_bigint::BigUint::from(1u32));
                    if units && big_psi.gcd(&big_psi.derivative()).degree() == 0 {
                        v.push((big_phi, big_psi));
                    }
                }
            }
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The unit reproduces the whole B-basis Gram and gives `Φ` back.
    #[test]
    fn round_trip((big_phi, big_psi) in proptest::sample::select(unimodular_rank6())) {
        let (phi, psi) = pair_from_traces(&big_phi, &big_psi, 6).unwrap();
        prop_assume!(phi.gcd(&psi).degree() == 0);
        let l = build_lattice(&phi, &psi).unwrap();
        prop_assert!(l.is_unimodular());
        let u = unit_from_gram(&b_gram_row(&l, 1), &big_psi).unwrap();
        for j in 0..3 {
            for k in j + 1..3 {
                prop_assert_eq!(&u.c_matrix[j][k], &BigInt::from(0));
            }
        }
        prop_assert_eq!(trace_form_gram(&u.unit, &big_psi, 6).unwrap(), l.gram_b());
        prop_assert_eq!(verify_unit(&u.unit, &big_psi, None).unwrap(), Ok(()));
        prop_assert_eq!(recover_phi(&u.unit, &psi).unwrap(), big_phi);
    }
}

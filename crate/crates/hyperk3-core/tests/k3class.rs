use hyperk3_core::clusters::*;
use hyperk3_core::k3class::*;
use hyperk3_core::polyring::builtin::*;
use hyperk3_core::polyring::*;
use hyperk3_core::{BigInt, IntPoly};

fn agrees(x: f64, printed: &str) -> bool {
    let d = printed.split('.').nth(1).map_or(0, |f| f.len());
    (x - printed.parse::<f64>().unwrap()).abs() < 10f64.powi(-(d as i32))
}

/// `Π (100 w - r)` for the given hundredths.
fn hundredths(rs: &[i64]) -> IntPoly {
    let ps: Vec<IntPoly> = rs.iter().map(|&r| IntPoly::from_i64s(&[-r, 100])).collect();
    product(&ps)
}

fn cert(phi_t: &IntPoly, psi_t: &IntPoly, side: Side) -> K3Certificate {
    let (phi, psi) = pair_from_traces(phi_t, psi_t, 22).unwrap();
    match k3_certificate(&phi, &psi, side).unwrap() {
        Ok(c) => c,
        Err(r) => panic!("rejected: {r}"),
    }
}

#[test]
fn side_b_first_svh_row() {
    let big_phi = ct_product(&[1, 1, 1, 3, 4, 6, 16]).unwrap();
    let r1 = salem_trace_r(1).unwrap();
    let c = cert(&big_phi, &r1, Side::B);
    assert_eq!((c.table, c.case), (Table::HypB, 1));
    assert_eq!(c.hodge_type, HodgeType::Hyperbolic);
    assert!(agrees(c.special_trace.approx(), "-1.667161"));
    assert_eq!(c.chi0, salem_r(1).unwrap());
    assert_eq!(c.chi1, IntPoly::one());
    assert_eq!(c.rho, 0);
    assert!(!c.projective && !c.antipode);

    let tc = TraceClusters::new(&big_phi, &r1, 22).unwrap();
    let t = special_trace_by_local_index(&tc, Side::B).unwrap();
    assert!(t.same_value(&c.special_trace));
    // the triple root w = 2 of Phi is allowed on side B only
    let (phi, psi) = pair_from_traces(&big_phi, &r1, 22).unwrap();
    assert!(k3_certificate_direct(&phi, &psi, Side::A).unwrap().is_err());
}

#[test]
fn side_a_min_entropy_row() {
    let big_phi = &(&lt() * &cyclotomic_trace(4).unwrap()) * &cyclotomic_trace(20).unwrap();
    let r1 = salem_trace_r(1).unwrap();
    let c = cert(&big_phi, &r1, Side::A);
    assert_eq!((c.table, c.case), (Table::HypA, 7));
    assert_eq!(c.hodge_type, HodgeType::Hyperbolic);
    assert!(agrees(c.special_trace.approx(), "-1.88660965"));
    assert_eq!(c.chi0, lehmer());
    assert_eq!(c.rho, 12);
    assert_eq!(&c.chi0 * &c.chi1, c.phi);
    assert_eq!(c.special_trace.minpoly(), &lt());
    let tc = TraceClusters::new(&big_phi, &r1, 22).unwrap();
    assert!(special_trace_by_local_index(&tc, Side::A).unwrap().same_value(&c.special_trace));
}

#[test]
fn rank_two_is_none() {
    let v = k3_certificate(&desc(&[1, 0, -1]), &desc(&[1, 1, 1]), Side::A).unwrap();
    assert_eq!(v.unwrap_err().0, "rank 22 required");
}

#[test]
fn rejection_names_unimodularity() {
    // Phi(2) Psi(2) etc. not units
    let big_phi = ct_product(&[3, 4, 5, 7, 9]).unwrap();
    let (phi, psi) = pair_from_traces(&big_phi, &salem_trace_r(1).unwrap(), 22).unwrap();
    if !hyperk3_core::hyplattice::is_unimodular(&phi, &psi).unwrap() {
        assert_eq!(k3_certificate(&phi, &psi, Side::B).unwrap().unwrap_err().0, "lattice is not unimodular");
    }
}

/// Clusters from roots given in tenths, top to bottom.
fn synthetic(a: &[i64], b: &[i64]) -> TraceClusters {
    let up = |v: &[i64]| v.iter().map(|x| x * 10).collect::<Vec<_>>();
    synthetic_100(&up(a), &up(b))
}

fn synthetic_100(a: &[i64], b: &[i64]) -> TraceClusters {
    TraceClusters::new(&hundredths(a), &hundredths(b), 22).unwrap()
}

#[test]
fn rank22_case_three() {
    // A_1 null, seven singleton pairs, triple B_8, A_9 null
    let tc = synthetic(
        &[17, 13, 9, 5, 1, -3, -7, 30, 40, -30],
        &[19, 15, 11, 7, 3, -1, -5, -9, -11, -13, 25],
    );
    assert_eq!(tc.s, Some(8));
    let c = classify_rank22(&tc).unwrap();
    assert_eq!(c, Rank22Case { case: 3, eps_index: 16 });
    let d = index(&tc).unwrap();
    assert_eq!(d.epsilon as i64 * d.p_minus_q, 16);
    assert_eq!(d.s_sum, -7);
}

#[test]
fn rank22_excluded_pattern() {
    // [A_in] = 1^9, [B_on] = 1^10
    let tc = synthetic(
        &[17, 13, 9, 5, 1, -3, -7, -11, -15, 30],
        &[19, 15, 11, 7, 3, -1, -5, -9, -13, -17, 25],
    );
    assert_eq!(tc.a_in_signature(), "1^9");
    assert_eq!(tc.b_signature(), "1^10");
    assert_eq!(classify_rank22(&tc), None);
    assert_ne!(index(&tc).unwrap().p_minus_q.abs(), 16);
}

#[test]
fn rank22_case_five_needs_adjacent_doubles() {
    // s = 9: A_1 B_1 ... B_9 A_10, A_1 and A_10 null
    let adjacent = synthetic(
        &[17, 16, 13, 9, 5, 1, -3, -7, -11, 30],
        &[19, 15, 14, 11, 7, 3, -1, -5, -9, -13, 25],
    );
    // A_2 = {1.7, 1.6} double, B_2 = {1.5, 1.4} double: adjacent
    assert_eq!(adjacent.s, Some(9));
    assert_eq!(classify_rank22(&adjacent).map(|c| c.case), Some(5));
    assert_eq!(index(&adjacent).unwrap().p_minus_q.abs(), 16);
    let apart = synthetic(
        &[17, 16, 13, 9, 5, 1, -3, -7, -11, 30],
        &[19, 15, 11, 7, 3, -1, -5, -9, -10, -13, 25],
    );
    assert_eq!(apart.s, Some(9));
    assert_eq!(apart.a_in_signature(), "1^7 2");
    assert_eq!(apart.b_signature(), "1^8 2");
    assert_eq!(classify_rank22(&apart), None);
    assert_ne!(index(&apart).unwrap().p_minus_q.abs(), 16);
}

#[test]
fn elliptic_synthetic_middle_of_triple() {
    // ep-A case 1: A_1 non-null, triple A_4, A_9 null, three B roots off the interval
    let a = [190, 170, 150, 130, 125, 120, 100, 80, 60, 40];
    let mut hits = 0;
    for b_off in [[300, 400, 500], [300, 400, -500], [300, -400, -500], [-300, -400, -500]] {
        let mut b = vec![180, 160, 140, 110, 90, 70, 50, 30];
        b.extend(b_off);
        let tc = synthetic_100(&a, &b);
        let table = match_tables(&tc, Side::A);
        let local = local_index_path(&tc, Side::A).unwrap();
        match (&table, &local) {
            (Some(t), Ok((tau, h))) => {
                assert_eq!((t.table, t.case), (Table::EpA, 1));
                assert_eq!(*h, HodgeType::Elliptic);
                assert!(tau.same_value(&t.special_trace));
                assert_eq!(tau.cmp_rational(&num_rational::BigRational::new(BigInt::from(5), BigInt::from(4))), std::cmp::Ordering::Equal);
                hits += 1;
            }
            // the table sees only the configuration; positivity still needs index ±16
            (Some(_), Err(why)) => assert!(index(&tc).unwrap().p_minus_q.abs() != 16, "{why}"),
            (None, Ok(_)) => panic!("local path without table row"),
            (None, Err(_)) => {}
        }
    }
    assert!(hits > 0);
}

mod common;

use std::collections::BTreeMap;

use common::*;
use lowlying::arith::primes_up_to;
use lowlying::cubic::*;
use proptest::prelude::*;

#[test]
fn enumeration_matches_oracle_up_to_500() {
    let oracle = oracle_fields(500);
    let fields = enumerate_cubic_fields(500.0, 1).unwrap();
    let mut mine: BTreeMap<i128, Vec<[i64; 3]>> = BTreeMap::new();
    for f in &fields {
        mine.entry(f.disc_field as i128).or_default().push(f.poly);
    }
    assert_eq!(
        mine.iter().map(|(d, v)| (*d, v.len())).collect::<Vec<_>>(),
        oracle.iter().map(|(d, v)| (*d, v.len())).collect::<Vec<_>>()
    );
    for (d, polys) in &mine {
        for &p in polys {
            assert_eq!(oracle_disc(p), *d);
            assert!(oracle[d].iter().any(|&r| same_field(r, p)), "{p:?} not in oracle class for {d}");
        }
    }
    let firsts: Vec<i64> = {
        let mut v: Vec<i64> = fields.iter().map(|f| f.disc_field.abs()).collect();
        v.sort();
        v.truncate(3);
        v
    };
    assert_eq!(firsts, [23, 31, 44]);
}

#[test]
fn census_examples() {
    assert!(enumerate_cubic_fields(22.0, 1).unwrap().is_empty());
    let d: Vec<i64> = enumerate_cubic_fields(50.0, 1).unwrap().iter().map(|f| f.disc_field).collect();
    assert_eq!(d, [-23, -31, -44]);
    let d: Vec<i64> = enumerate_cubic_fields(50.0, 23).unwrap().iter().map(|f| f.disc_field).collect();
    assert_eq!(d, [-31, -44]);
    // x^3 - 3x + 1 is cyclic with discriminant 81
    let cyc = CubicField::from_poly([0, -3, 1]).unwrap();
    assert!(cyc.is_cyclic());
    assert!(enumerate_cubic_fields(100.0, 1).unwrap().iter().all(|f| f.disc_field != 81 && f.disc_field != 49));
}

#[test]
fn field_invariants_up_to_3000() {
    for f in enumerate_cubic_fields(3000.0, 1).unwrap() {
        assert!(!has_rational_root(f.poly));
        assert!(!is_square(f.disc_field as i128));
        assert!(matches!(f.disc_field.rem_euclid(4), 0 | 1));
        assert_eq!(f.disc_field > 0, f.signature == Signature::TotallyReal);
        assert_eq!(poly_disc(f.poly), f.index_sq as i128 * f.disc_field as i128);
        for p in primes_up_to(200) {
            let s = f.splitting_type(p);
            assert_eq!(s.kind.is_ramified(), f.disc_field % p as i64 == 0, "{:?} at {p}", f.poly);
            assert_eq!((s.a_rho_p, s.a_rho_p2), s.kind.a_rho());
            if poly_disc(f.poly) % p as i128 != 0 {
                assert_eq!(s.a_rho_p, roots_mod(f.poly, p) as f64 - 1.0);
            }
        }
    }
}

#[test]
fn splitting_examples() {
    let f = CubicField::from_poly([0, -1, -1]).unwrap();
    assert_eq!(f.disc_field, -23);
    let s = f.splitting_type(2);
    assert_eq!((s.kind, s.a_rho_p), (SplittingKind::C123, -1.0));
    let s = f.splitting_type(23);
    assert_eq!((s.kind, s.a_rho_p), (SplittingKind::PartialRam, 1.0));
    let s = f.splitting_type(59);
    assert_eq!((s.kind, s.a_rho_p), (SplittingKind::C1, 2.0));

    let table = [
        (SplittingKind::C1, (2.0, 2.0)),
        (SplittingKind::C12, (0.0, 2.0)),
        (SplittingKind::C123, (-1.0, -1.0)),
        (SplittingKind::PartialRam, (1.0, 1.0)),
        (SplittingKind::TotalRam, (0.0, 0.0)),
    ];
    for (k, v) in table {
        assert_eq!(k.a_rho(), v);
    }
    // x^3 - 2: 2 and 3 are totally ramified
    let f = CubicField::from_poly([0, 0, -2]).unwrap();
    assert_eq!(f.disc_field, -108);
    assert_eq!(f.splitting_type(2).kind, SplittingKind::TotalRam);
    assert_eq!(f.splitting_type(3).kind, SplittingKind::TotalRam);
}

#[test]
fn predicted_local_densities() {
    let v = predicted_density(SplittingKind::C123, 5);
    assert!((v - 25.0 / 93.0).abs() < 1e-15);
    for p in [2u64, 3, 5, 7, 101] {
        let s: f64 = SplittingKind::ALL.iter().map(|&k| predicted_density(k, p)).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }
}

#[test]
fn csv_exports() {
    let fields = enumerate_cubic_fields(50.0, 1).unwrap();
    let csv = fields_csv(&fields);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "D_F,a,b,c,signature");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-23,"));
    let s = splitting_csv(&fields, &[2, 3]);
    assert_eq!(s.lines().next(), Some("D_F,p,kind"));
    assert_eq!(s.lines().count(), 1 + 3 * 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn field_discriminant_matches_integral_closure(a in -4i64..=4, b in -20i64..=20, c in -30i64..=30) {
        let poly = [a, b, c];
        prop_assume!(poly_disc(poly) != 0 && !has_rational_root(poly));
        let f = CubicField::from_poly(poly).unwrap();
        prop_assert_eq!(f.disc_field as i128, oracle_disc(poly));
    }

    #[test]
    fn a_rho_counts_roots(a in -4i64..=4, b in -30i64..=30, c in -30i64..=30, k in 0usize..40) {
        let poly = [a, b, c];
        prop_assume!(poly_disc(poly) != 0 && !has_rational_root(poly));
        let p = primes_up_to(200)[k];
        prop_assume!(poly_disc(poly) % p as i128 != 0);
        let f = CubicField::from_poly(poly).unwrap();
        prop_assert_eq!(f.splitting_type(p).a_rho_p, roots_mod(poly, p) as f64 - 1.0);
    }
}

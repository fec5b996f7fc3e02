use lowlying::arith::primes_up_to;
use lowlying::curve::{ApTable, EllipticCurve, Reduction};
use lowlying::Error;
use proptest::prelude::*;

/// Projective points on the long Weierstrass model over F_p, by enumeration.
fn brute_count(c: [i64; 5], p: u64) -> u64 {
    let p = p as i64;
    let [a1, a2, a3, a4, a6] = c.map(|v| v.rem_euclid(p));
    let mut n = 1;
    for x in 0..p {
        let rhs = (((x + a2) * x % p + a4) * x % p + a6) % p;
        for y in 0..p {
            if (y * y + a1 * x % p * y + a3 * y - rhs).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n as u64
}

fn curves() -> [EllipticCurve; 3] {
    [EllipticCurve::curve_11a1(), EllipticCurve::curve_37a1(), EllipticCurve::curve_389a1()]
}

#[test]
fn point_count_examples() {
    let e = EllipticCurve::curve_11a1();
    assert_eq!(e.discriminant, -161051);
    // the discriminant is -11^5, so 2 is a good prime
    assert!(e.has_good_reduction(2));
    assert_eq!(e.reduction_type(2).a_p, -2);
    assert!(matches!(e.count_points(11), Err(Error::BadReduction { p: 11 })));
    assert_eq!(e.reduction_type(3).a_p, -1);
    assert_eq!(e.count_points(3).unwrap(), brute_count(e.coeffs(), 3));

    let d = e.reduction_type(11);
    assert_eq!((d.reduction, d.a_p), (Reduction::SplitMultiplicative, 1));
    let d = e.reduction_type(7);
    assert_eq!((d.reduction, d.a_p), (Reduction::Good, -2));
    assert!((e.a_f(11) - 1.0 / 11f64.sqrt()).abs() < 1e-15);
    assert!((e.a_f(7) + 2.0 / 7f64.sqrt()).abs() < 1e-15);
    assert!((e.a_f_sq(11) - 1.0 / 11.0).abs() < 1e-15);
    assert!((e.a_f_sq(7) - (4.0 / 7.0 - 2.0)).abs() < 1e-15);

    // y^2 = x^3 + 1 at p = 5
    let f = EllipticCurve::new([0, 0, 0, 0, 1], 36, None).unwrap();
    assert_eq!(f.count_points(5).unwrap(), 6);
    assert_eq!(f.reduction_type(5).a_p, 0);
}

#[test]
fn additive_examples() {
    // y^2 = x^3 + p has c4 = 0, so additive at p
    for p in [5i64, 7, 13] {
        let e = EllipticCurve::new([0, 0, 0, 0, p], (p * p) as u64 * 36, None).unwrap();
        let d = e.reduction_type(p as u64);
        assert_eq!((d.reduction, d.a_p), (Reduction::Additive, 0));
        assert_eq!(e.a_f(p as u64), 0.0);
    }
    // 2 is additive for y^2 = x^3 + 1
    let e = EllipticCurve::new([0, 0, 0, 0, 1], 36, None).unwrap();
    assert_eq!(e.reduction_type(2).reduction, Reduction::Additive);
    assert_eq!(e.theta_f(2.0), 0.0);
}

#[test]
fn invalid_models() {
    assert!(matches!(EllipticCurve::new([0, 0, 0, 0, 0], 1, None), Err(Error::InvalidCurve(_))));
    // conductor with a prime not dividing the discriminant
    assert!(EllipticCurve::new([0, -1, 1, -10, -20], 11 * 3, None).is_err());
    // scaled model of 11a1 (u = 2) is not minimal
    let e = EllipticCurve::curve_11a1();
    let [a1, a2, a3, a4, a6] = e.coeffs();
    let scaled = [2 * a1, 4 * a2, 8 * a3, 16 * a4, 64 * a6];
    assert!(EllipticCurve::new(scaled, 11, None).is_err());
}

#[test]
fn hasse_and_long_model_agree() {
    for e in curves() {
        for p in primes_up_to(10_000) {
            let d = e.reduction_type(p);
            assert_eq!(d.reduction != Reduction::Good, e.conductor % p == 0, "p = {p}");
            if d.reduction == Reduction::Good {
                assert!(d.a_p * d.a_p <= 4 * p as i64, "Hasse fails at {p}");
                let sq = d.a_f_sq();
                let af = d.a_f();
                assert_eq!(sq, af * af - 2.0);
            }
        }
        for p in primes_up_to(100).into_iter().filter(|&p| p >= 5 && e.conductor % p != 0) {
            assert_eq!(e.count_points(p).unwrap(), brute_count(e.coeffs(), p), "p = {p}");
            assert_eq!(e.count_points_long(p), brute_count(e.coeffs(), p), "p = {p}");
        }
    }
}

#[test]
fn table_matches_direct_theta() {
    let e = EllipticCurve::curve_37a1();
    let table = ApTable::compute(&e, 5000);
    let direct: f64 = primes_up_to(5000)
        .into_iter()
        .map(|p| {
            let d = e.reduction_type(p);
            let a = d.a_p as f64;
            let v = match d.reduction {
                Reduction::Good => a * a / p as f64 - 2.0,
                _ => a * a / p as f64,
            };
            v * (p as f64).ln()
        })
        .sum();
    assert!((table.theta_f(5000.0) - direct).abs() < 1e-9);
    assert!((e.theta_f(5000.0) - direct).abs() < 1e-9);
    let r = table.theta_f(5000.0) / 5000.0;
    assert!((r + 1.0).abs() < 0.25, "{r}");
}

#[test]
fn fingerprint_distinguishes() {
    let [a, b, c] = curves();
    assert_ne!(a.fingerprint(), b.fingerprint());
    assert_ne!(b.fingerprint(), c.fingerprint());
    assert_eq!(a.fingerprint(), EllipticCurve::curve_11a1().fingerprint());
}

proptest! {
    #[test]
    fn reduction_type_is_pure(i in 0usize..3, k in 0usize..2262) {
        let p = primes_up_to(20_000)[k];
        let e = &curves()[i];
        prop_assert_eq!(e.reduction_type(p), e.reduction_type(p));
    }

    #[test]
    fn short_model_count_matches_enumeration(i in 0usize..3, k in 2usize..78) {
        let p = primes_up_to(400)[k];
        let e = &curves()[i];
        prop_assume!(e.conductor % p != 0);
        prop_assert_eq!(e.count_points(p).unwrap(), brute_count(e.coeffs(), p));
    }
}

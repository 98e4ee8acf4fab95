use std::collections::BTreeMap;

use hesse_core::curve::{divisor, qz, Field, HesseCurve, MotivicSymbol, QZeta, QZetaField};
use hesse_core::integrality::*;
use hesse_core::numerics::bernoulli3;
use hesse_core::Error;
use proptest::prelude::*;
use rug::{Integer, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn e(a: i64, b: i64) -> EisensteinInt {
    EisensteinInt::new(a, b)
}

fn degrees(pairs: &[(u32, i64)]) -> BTreeMap<u32, Rational> {
    pairs.iter().map(|&(k, v)| (k, Rational::from(v))).collect()
}

/// Every a + bζ with |a|, |b| ≤ r and the given norm.
fn with_norm(n: i64, r: i64) -> Vec<EisensteinInt> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            if a * a - a * b + b * b == n {
                out.push(e(a, b));
            }
        }
    }
    out
}

fn multiplicative_primes(t: &QZeta) -> Vec<(EisensteinInt, ReductionKind, u32)> {
    bad_primes(t)
        .unwrap()
        .into_iter()
        .filter(|r| r.kind.is_multiplicative())
        .map(|r| (r.v, r.kind, r.n))
        .collect()
}

#[test]
fn norms_and_splitting() {
    assert_eq!(EisensteinInt::one_minus_zeta().norm(), 3);
    assert_eq!(e(3, 1).norm(), 7);
    let sevens = with_norm(7, 6);
    assert_eq!(sevens.len(), 12);
    let above = primes_above(&Integer::from(7));
    assert_eq!(above.len(), 2);
    for pi in &above {
        assert!(sevens.contains(pi));
    }
    assert!(above[0].mul(&above[1]).div_exact(&EisensteinInt::int(7)).unwrap().is_unit());
    assert!(with_norm(2, 6).is_empty());
    assert_eq!(primes_above(&Integer::from(2)), vec![EisensteinInt::int(2)]);
    assert_eq!(primes_above(&Integer::from(3)), vec![EisensteinInt::one_minus_zeta().canonical()]);
    assert!(is_prime(&e(2, 0)) && is_prime(&e(3, 1)) && is_prime(&e(1, -1)));
    assert!(!is_prime(&e(7, 0)) && !is_prime(&e(1, 0)) && !is_prime(&e(6, 0)));
}

#[test]
fn units_and_associates() {
    let units = with_norm(1, 2);
    assert_eq!(units.len(), 6);
    let assoc = EisensteinInt::int(1).associates();
    for u in &units {
        assert!(assoc.contains(u));
    }
    let x = e(5, -3);
    for a in x.associates() {
        assert_eq!(a.canonical(), x.canonical());
    }
    let c = x.canonical();
    assert!(c.b >= 0 && c.b < c.a);
}

#[test]
fn known_reduction_types() {
    let r = multiplicative_primes(&qz(&q(-1, 2)));
    assert_eq!(r, vec![(e(2, 0), ReductionKind::SplitMultCaseII, 1)]);

    // 3t = 1: n³ − 27m³ = −26 = −2·13
    let r = multiplicative_primes(&qz(&q(1, 3)));
    let mut expected: Vec<EisensteinInt> = vec![e(2, 0)];
    expected.extend(primes_above(&Integer::from(13)));
    let got: Vec<EisensteinInt> = r.iter().map(|x| x.0.clone()).collect();
    assert_eq!(got, expected);
    assert!(r.iter().all(|x| matches!(x.1, ReductionKind::SplitMultCaseI { .. }) && x.2 == 1));

    for t in [q(1, 3), q(-2, 1), q(5, 7), q(1, 2)] {
        let report = reduction_type(&qz(&t), &EisensteinInt::one_minus_zeta()).unwrap();
        assert_eq!(report.kind, ReductionKind::Additive);
    }
    // 3t = −5/3: the triangle m(x³ + y³ + z³) = nxyz also degenerates over 3
    let report = reduction_type(&qz(&q(-5, 9)), &EisensteinInt::one_minus_zeta()).unwrap();
    assert_eq!((report.kind, report.n), (ReductionKind::SplitMultCaseII, 2));
    assert!(matches!(reduction_type(&qz(&q(1, 1)), &e(2, 0)), Err(Error::SingularParameter(_))));
    assert!(matches!(reduction_type(&qz(&q(1, 2)), &e(7, 0)), Err(Error::InvalidInput(_))));
}

#[test]
fn conductor_exponents_match_valuations() {
    // 3t = n/m: case i N = ord_v(n³ − 27m³), case ii N = ord_v(m)
    for (n, m) in [(-7i64, 4i64), (1, 8), (5, 2), (11, 6), (-13, 1), (29, 1)] {
        let t = qz(&q(n, 3 * m));
        let disc = EisensteinInt::int(n * n * n - 27 * m * m * m);
        for (v, kind, big_n) in multiplicative_primes(&t) {
            match kind {
                ReductionKind::SplitMultCaseI { .. } => assert_eq!(big_n, ord(&disc, &v)),
                ReductionKind::SplitMultCaseII => assert_eq!(big_n, ord(&EisensteinInt::int(m), &v)),
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn component_degrees_reproduce_case_tables() {
    // case i with n ≡ 3m mod v: 3t = 5 at v = (2)
    let t = qz(&q(5, 3));
    let report = reduction_type(&t, &e(2, 0)).unwrap();
    assert_eq!(report.kind, ReductionKind::SplitMultCaseI { k: 0 });
    let n = report.n;
    let curve = HesseCurve::new(QZetaField, t.clone()).unwrap();
    let tables = [
        (degrees(&[]), degrees(&[])),
        (degrees(&[(0, 3), (2 * n, -3)]), degrees(&[(n, 3), (0, -3)])),
        (degrees(&[(0, 3), (n, -3)]), degrees(&[(2 * n, 3), (0, -3)])),
    ];
    for (i, (d, dp)) in tables.iter().enumerate() {
        let sym = MotivicSymbol::xi_rho(t.clone(), i as u8);
        let df = divisor(&curve, &sym.terms[0].f).unwrap();
        let dg = divisor(&curve, &sym.terms[0].g).unwrap();
        assert_eq!(&component_degrees(&t, &df, &report).unwrap(), d, "i = {i}");
        assert_eq!(&component_degrees(&t, &dg, &report).unwrap(), dp, "i = {i}");
    }

    // case ii: 3t = 3/4 at v = (2), N = 2
    let t = qz(&q(1, 4));
    let report = reduction_type(&t, &e(2, 0)).unwrap();
    assert_eq!((report.kind.clone(), report.n), (ReductionKind::SplitMultCaseII, 2));
    let n = report.n;
    let curve = HesseCurve::new(QZetaField, t.clone()).unwrap();
    for i in 0..3u8 {
        let sym = MotivicSymbol::xi_rho(t.clone(), i);
        let df = divisor(&curve, &sym.terms[0].f).unwrap();
        let dg = divisor(&curve, &sym.terms[0].g).unwrap();
        assert_eq!(component_degrees(&t, &df, &report).unwrap(), degrees(&[(0, 3), (2 * n, -3)]));
        assert_eq!(component_degrees(&t, &dg, &report).unwrap(), degrees(&[(n, 3), (0, -3)]));
    }
}

#[test]
fn hesse_boundary_values() {
    // case i vanishes, case ii gives 1/(9N)
    assert_eq!(boundary(&qz(&q(5, 3)), Element::XiHesse, &e(2, 0)).unwrap(), 0);
    for (t, n) in [(q(1, 2), 1), (q(1, 4), 2), (q(1, 6), 1), (q(1, 12), 2), (q(5, 24), 3)] {
        let c = boundary(&qz(&t), Element::XiHesse, &e(2, 0)).unwrap();
        assert_eq!(Rational::from(c.abs_ref()), q(1, 9 * n), "t = {t}");
    }
    // the closed value (1/9N)(18B₃(1/3) − 9B₃(2/3)) = 1/(9N)
    let closed = bernoulli3(&q(1, 3)) * 18u32 - bernoulli3(&q(2, 3)) * 9u32;
    assert_eq!(closed, 1);
    assert_eq!(bernoulli3(&q(1, 3)) + bernoulli3(&q(2, 3)), 0);
    assert!(matches!(boundary(&qz(&q(1, 2)), Element::XiHesse, &e(5, 0)), Err(Error::NotMultiplicative(_))));
}

#[test]
fn xi_prime_is_integral_at_minus_half() {
    let t = qz(&q(-1, 2));
    assert_eq!(boundary(&t, Element::XiPrimeHalf, &e(2, 0)).unwrap(), 0);
    let v = is_integral(&t, Element::XiPrimeHalf).unwrap();
    assert!(v.integral);
    assert_eq!(v.coefficients.len(), 1);
    assert!(!is_integral(&t, Element::XiHesse).unwrap().integral);
}

#[test]
fn hesse_integrality_iff_3t_integral() {
    for n in -20i64..=20 {
        if n == 3 {
            continue;
        }
        let v = is_integral(&qz(&q(n, 3)), Element::XiHesse).unwrap();
        assert!(v.integral, "3t = {n}");
    }
    let samples = [(1, 2), (5, 2), (-7, 4), (1, 5), (2, 7), (11, 6), (-1, 2), (13, 10), (-5, 3), (7, 9)];
    for (n, m) in samples {
        let v = is_integral(&qz(&q(n, 3 * m)), Element::XiHesse).unwrap();
        assert!(!v.integral, "3t = {n}/{m}");
    }
}

#[test]
fn xi_zeta_integrality_set() {
    let f = QZetaField;
    let z = f.zeta();
    let mut integral = vec![QZeta::int(0), QZeta::int(-2), qz(&q(-1, 2))];
    for k in 1..3 {
        let u = f.zeta_pow(k);
        integral.push(f.mul(&u, &QZeta::int(-2)));
        integral.push(f.mul(&u, &qz(&q(-1, 2))));
    }
    for t in &integral {
        assert!(is_integral(t, Element::XiZeta).unwrap().integral, "t = {t}");
    }
    for t in [q(1, 2), q(2, 1), q(-1, 1), q(1, 3), q(3, 2), q(-3, 1), q(5, 3), q(-1, 4), q(1, 5)] {
        assert!(!is_integral(&qz(&t), Element::XiZeta).unwrap().integral, "t = {t}");
    }
    assert!(!is_integral(&f.mul(&z, &QZeta::int(2)), Element::XiZeta).unwrap().integral);
    let cm = is_integral(&QZeta::int(-2), Element::XiZeta).unwrap();
    assert!(cm.cm && cm.coefficients.is_empty());
}

#[test]
fn element_names_round_trip() {
    for el in [Element::XiHesse, Element::XiPrimeHalf, Element::XiZeta] {
        assert_eq!(el.name().parse::<Element>().unwrap(), el);
    }
    assert!("xi".parse::<Element>().is_err());
}

fn small_eisenstein() -> impl Strategy<Value = EisensteinInt> {
    (-60i64..60, -60i64..60).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| e(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_recovers_the_element(x in small_eisenstein()) {
        let mut prod = EisensteinInt::int(1);
        for (pi, k) in eisenstein_factor(&x) {
            prop_assert!(is_prime(&pi));
            prod = prod.mul(&pi.pow(k));
        }
        prop_assert!(x.div_exact(&prod).map(|u| u.is_unit()).unwrap_or(false));
    }

    #[test]
    fn multiplication_is_normed(x in small_eisenstein(), y in small_eisenstein()) {
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.mul(&y).div_exact(&y), Some(x.clone()));
    }

    #[test]
    fn bernoulli3_is_antisymmetric(n in 0i64..1000, d in 1i64..1000) {
        let x = q(n % d, d);
        let y = Rational::from(1) - x.clone();
        prop_assert_eq!(bernoulli3(&x), -bernoulli3(&y));
    }

    #[test]
    fn boundary_ignores_the_generator_choice(n in 1i64..40, k in 0usize..6) {
        // 3t = n/2: case ii at (2), case i at the primes of n³ − 216
        let t = qz(&q(n, 6));
        prop_assume!(n != 6);
        for r in bad_primes(&t).unwrap().into_iter().filter(|r| r.kind.is_multiplicative()).take(2) {
            let base = boundary(&t, Element::XiHesse, &r.v).unwrap();
            let other = r.v.associates()[k].clone();
            prop_assert_eq!(boundary(&t, Element::XiHesse, &other).unwrap(), base);
        }
    }
}

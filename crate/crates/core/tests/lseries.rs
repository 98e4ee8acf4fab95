use std::collections::BTreeMap;

use hesse_core::curve::weierstrass_model;
use hesse_core::lseries::*;
use hesse_core::numerics::PrecisionContext;
use hesse_core::regulator::{l_j3_closed_form, q_ratio_from_l};
use hesse_core::Error;
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::with_digits(d).unwrap()
}

fn ints(v: [i64; 5]) -> [Integer; 5] {
    v.map(Integer::from)
}

/// Affine solutions of the general Weierstrass equation mod p, plus infinity.
fn brute_count(a: &[Integer; 5], p: u64) -> u64 {
    let c: Vec<i64> = a.iter().map(|x| x.mod_u(p as u32) as i64).collect();
    let p = p as i64;
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = y * y + c[0] * x * y + c[2] * y;
            let rhs = x * x * x + c[1] * x * x + c[3] * x + c[4];
            if (lhs - rhs).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

/// Projective points of x³ + y³ + z³ = 3t·xyz over 𝔽_p.
fn hesse_count(t: i64, p: i64) -> i64 {
    let t3 = (3 * t).rem_euclid(p);
    let on = |x: i64, y: i64, z: i64| (x * x * x + y * y * y + z * z * z - t3 * x * y * z).rem_euclid(p) == 0;
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            if on(x, y, 1) {
                n += 1;
            }
        }
        if on(x, 1, 0) {
            n += 1;
        }
    }
    if on(1, 0, 0) {
        n += 1;
    }
    n
}

#[test]
fn conductors_of_named_fibres() {
    for (t, n) in [(q(-2, 1), 27), (q(-1, 1), 54), (q(-2, 3), 35), (q(-1, 3), 14), (q(0, 1), 27)] {
        let data = curve_data(&t).unwrap();
        assert_eq!(data.conductor, n, "t = {t}");
    }
}

#[test]
fn singular_fibre_is_rejected() {
    assert!(matches!(minimal_model(&q(0, 1), &q(0, 1)), Err(Error::SingularCurve)));
}

#[test]
fn minimal_model_keeps_j_and_shrinks_discriminant() {
    for n in [-20i64, -13, -7, -1, 1, 4, 11, 20] {
        let t = q(n, 3);
        let (a4, a6) = weierstrass_model(&t).unwrap();
        let data = curve_data(&t).unwrap();
        let m = data.model();
        let disc = m.discriminant();
        // j = c4³/Δ for the short model is −1728·(4a4)³/Δ_short
        let short_disc = Rational::from(-16i32) * ((4 * a4.clone().square() * &a4) + (27 * a6.square()));
        let short_j = Rational::from(-1728i32) * (64 * a4.clone().square() * &a4) / &short_disc;
        let c4 = m.c4();
        let j = Rational::from((Integer::from(c4.square_ref()) * &c4, disc.clone()));
        assert_eq!(j, short_j, "3t = {n}");
        let integral = Model::integral_short(&weierstrass_model(&t).unwrap().0, &weierstrass_model(&t).unwrap().1);
        assert!(integral.discriminant().is_divisible(&disc), "3t = {n}");
        for l in &data.local {
            assert!(disc.is_divisible(&l.p));
            assert!(l.conductor_exponent >= 1 && l.conductor_exponent <= 8);
        }
        let [a1, a2, a3, ..] = &m.a;
        assert!(*a1 >= 0 && *a1 <= 1 && *a3 >= 0 && *a3 <= 1 && *a2 >= -1 && *a2 <= 1);
    }
}

#[test]
fn point_counts_agree_with_brute_force() {
    for t in [q(-2, 1), q(-1, 3), q(5, 3)] {
        let data = curve_data(&t).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(data.model().count_points(p), brute_count(&data.a_invariants, p), "t = {t}, p = {p}");
        }
    }
}

#[test]
fn supersingular_at_inert_primes() {
    let data = curve_data(&q(-2, 1)).unwrap();
    for p in [2u64, 5, 11, 17, 23] {
        let brute = p as i64 + 1 - brute_count(&data.a_invariants, p) as i64;
        assert_eq!(brute, 0, "p = {p}");
        assert_eq!(ap(&data, p), 0, "p = {p}");
    }
}

#[test]
fn hasse_bound_and_bad_primes() {
    for t in [q(-2, 1), q(-1, 1), q(-2, 3), q(1, 3), q(20, 3)] {
        let mut data = curve_data(&t).unwrap();
        ensure_ap(&mut data, 500, None).unwrap();
        for (&p, &a) in &data.ap {
            if data.is_bad(p) {
                assert!((-1..=1).contains(&a), "t = {t}, p = {p}, a_p = {a}");
                let expected = data.local.iter().find(|l| l.p == p).unwrap().reduction.bad_ap();
                assert_eq!(a, expected, "t = {t}, p = {p}");
            } else {
                assert!((a * a) as u64 <= 4 * p, "t = {t}, p = {p}, a_p = {a}");
            }
        }
    }
}

#[test]
fn hesse_and_weierstrass_traces_agree() {
    let data = curve_data(&q(-2, 1)).unwrap();
    for p in primes_up_to(200) {
        // t³ − 1 = −9, so the Hesse model is smooth away from 3
        if p == 3 {
            continue;
        }
        let hesse = p as i64 + 1 - hesse_count(-2, p as i64);
        assert_eq!(ap(&data, p), hesse, "p = {p}");
    }
}

#[test]
fn e1_matches_mpfr_on_both_sides_of_split() {
    let c = ctx(40);
    for y in [0.25, 1.0, 3.5, 7.9, 8.1, 15.0, 40.0] {
        let x = c.float(y);
        let ours = e1(&x, &c).unwrap();
        // E1(y) = −Ei(−y)
        let oracle = -Float::with_val(c.prec(), (-x.clone()).eint_ref());
        let rel = (Float::with_val(c.prec(), &ours - &oracle) / &oracle).abs().to_f64();
        assert!(rel < 1e-38, "y = {y}: rel {rel:e}");
    }
    assert!(e1(&c.float(0), &c).is_err());
}

#[test]
fn gamma2_matches_integral() {
    let c = ctx(30);
    for y in [0.1, 1.0, 6.0] {
        let x = c.float(y);
        // Γ(2, y) = y·e^{−y} + Γ(1, y) = y·e^{−y} + e^{−y}
        let e = Float::with_val(c.prec(), (-x.clone()).exp_ref());
        let oracle = Float::with_val(c.prec(), &x * &e) + &e;
        let diff = Float::with_val(c.prec(), gamma2_upper(&x) - oracle).abs().to_f64();
        assert!(diff < 1e-30);
    }
}

fn coefficients_for(t: &Rational, c: &PrecisionContext, amax: f64) -> (Vec<i64>, u64) {
    let mut data = curve_data(t).unwrap();
    let n = data.conductor_u64().unwrap();
    let nmax = terms_needed(n, amax, c);
    ensure_ap(&mut data, nmax as u64, None).unwrap();
    let d = data.clone();
    (an_coefficients(&data.ap, |p| d.is_bad(p), nmax), n)
}

#[test]
fn cut_independence_and_sign_flip() {
    let c = ctx(30);
    let (an, n) = coefficients_for(&q(-2, 1), &c, 1.6);
    assert_eq!(n, 27);
    let mut data = curve_data(&q(-2, 1)).unwrap();
    let eps = root_number(&mut data, &c, None).unwrap();
    let value = |a: f64, e: i8| {
        let (s1, s2) = smoothed_halves(&an, n, a, &c).unwrap();
        if e == 1 {
            s1 + s2
        } else {
            s1 - s2
        }
    };
    let base = value(1.0, eps);
    for a in [1.3, 1.6, 0.8] {
        let d = Float::with_val(c.prec(), &base - value(a, eps)).abs().to_f64();
        assert!(d < 1e-28, "cut {a}: {d:e}");
        let flipped = Float::with_val(c.prec(), value(1.0, -eps) - value(a, -eps)).abs().to_f64();
        assert!(flipped > 1e6 * c.tol(), "cut {a}: flipped gap {flipped:e}");
    }
    let (plus, minus) = sign_discrepancies(&an, n, &c).unwrap();
    assert!(plus.min(minus) < 1e-28 && plus.max(minus) > 1e6 * c.tol());
}

#[test]
fn q_ratios_at_cm_and_isogeny_points() {
    let c = ctx(25);
    for (n, expected) in [(-6i64, q(-81, 4)), (-3, q(-27, 2)), (-2, q(-35, 4)), (-1, q(-7, 1)), (5, q(-49, 2))] {
        match q_ratio(&q(n, 3), DEFAULT_MAX_CONDUCTOR, &c, None).unwrap() {
            QEntry::Computed { ratio, .. } => assert_eq!(ratio.fraction, Some(expected), "3t = {n}"),
            QEntry::Skipped { .. } => panic!("3t = {n} skipped"),
        }
    }
}

#[test]
fn q_ratio_skips_large_conductors() {
    let c = ctx(20);
    match q_ratio(&q(-20, 3), 1000, &c, None).unwrap() {
        QEntry::Skipped { conductor } => assert_eq!(conductor, 8027),
        other => panic!("{other:?}"),
    }
}

#[test]
fn l_values_over_the_cm_field() {
    let c = ctx(32);
    let (l, e, tw) = l_value_quadratic(&q(-2, 1), &c, None).unwrap();
    let expected = Float::with_val(c.prec(), Float::parse("0.770263235106996761384701873629").unwrap());
    assert!(Float::with_val(c.prec(), &l - &expected).abs().to_f64() < 1e-29);
    assert!(e.cut_gap < 1e-28 && tw.cut_gap < 1e-28);
    let (l, _, _) = l_value_quadratic(&q(-1, 2), &c, None).unwrap();
    let expected = Float::with_val(c.prec(), Float::parse("0.991115983384380609583674632211").unwrap());
    assert!(Float::with_val(c.prec(), &l - &expected).abs().to_f64() < 1e-29);
}

#[test]
fn fermat_fibre_is_square_of_j3_value() {
    let c = ctx(30);
    let (l, _, _) = l_value_quadratic(&q(0, 1), &c, None).unwrap();
    let closed = l_j3_closed_form(&c).unwrap();
    let d = Float::with_val(c.prec(), l - closed.square()).abs().to_f64();
    assert!(d < 1e-25, "{d:e}");
}

#[test]
fn q_ratio_from_value_alone() {
    let c = ctx(25);
    let mut data = curve_data(&q(-2, 1)).unwrap();
    let l = l_value_s2(&mut data, &c, None).unwrap();
    let r = q_ratio_from_l(&q(-2, 1), &l.value, 1e-22, &c).unwrap();
    assert_eq!(r.fraction, Some(q(-81, 4)));
}

#[test]
fn cache_round_trip_preserves_data_and_sign() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ApCache::new(dir.path());
    let c = ctx(20);
    let mut data = curve_data(&q(-1, 1)).unwrap();
    let l1 = l_value_s2(&mut data, &c, Some(&cache)).unwrap();
    let path = cache.path_for(&data.a_invariants);
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = ApCacheFile::parse(&text).unwrap();
    assert_eq!(parsed.serialize(), text);
    assert_eq!(parsed.root_number, Some(l1.root_number));
    assert_eq!(parsed, data.to_cache_file());

    let mut fresh = curve_data(&q(-1, 1)).unwrap();
    let recomputed = root_number(&mut fresh, &c, None).unwrap();
    assert_eq!(recomputed, l1.root_number);

    let mut again = curve_data(&q(-1, 1)).unwrap();
    let l2 = l_value_s2(&mut again, &c, Some(&cache)).unwrap();
    assert_eq!(l1.value, l2.value);
    assert_eq!(again.ap, data.ap);
}

#[test]
fn wrong_cached_sign_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ApCache::new(dir.path());
    let c = ctx(20);
    let mut data = curve_data(&q(-2, 1)).unwrap();
    let eps = root_number(&mut data, &c, Some(&cache)).unwrap();
    let mut file = cache.load(&data.a_invariants).unwrap().unwrap();
    file.root_number = Some(-eps);
    cache.store(&file).unwrap();
    let mut again = curve_data(&q(-2, 1)).unwrap();
    assert!(matches!(l_value_s2(&mut again, &c, Some(&cache)), Err(Error::RootNumberUnresolved(_))));
}

#[test]
fn cache_parse_rejects_malformed_files() {
    let good = "curve 0 0 1 0 -7 conductor 27\nroot_number 1\n2 0\n3 0\n5 0\n";
    assert!(ApCacheFile::parse(good).is_ok());
    for bad in [
        "",
        "curve 0 0 1 0 conductor 27\n2 0\n",
        "curve 0 0 1 0 -7 conductor 0\n",
        "curve 0 0 1 0 -7 conductor 27\n3 0\n2 0\n",
        "curve 0 0 1 0 -7 conductor 27\n2 0\n2 0\n",
        "curve 0 0 1 0 -7 conductor 27\n2 +0\n",
        "curve 0 0 1 0 -7 conductor 027\n",
        "curve 0 0 1 0 -7 conductor 27\nroot_number 2\n",
        "curve 0 0 1 0 -7 conductor 27\n2 0",
        "curve 0 0 1 0 -7 conductor 27\n2 x\n",
    ] {
        assert!(matches!(ApCacheFile::parse(bad), Err(Error::CacheFormat(_))), "{bad:?}");
    }
}

#[test]
fn cache_conductor_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ApCache::new(dir.path());
    let mut data = curve_data(&q(-2, 1)).unwrap();
    let mut file = data.to_cache_file();
    file.conductor = Integer::from(28);
    cache.store(&file).unwrap();
    assert!(matches!(ensure_ap(&mut data, 50, Some(&cache)), Err(Error::CacheFormat(_))));
}

#[test]
fn an_from_known_curve() {
    // 11a: y² + y = x³ − x² − 10x − 20, q∏(1−qⁿ)²(1−q¹¹ⁿ)²
    let model = Model::new(ints([0, -1, 1, -10, -20]));
    let mut ap_map = BTreeMap::new();
    fill_ap(&model, &mut ap_map, 30);
    let an = an_coefficients(&ap_map, |p| p == 11, 30);
    let mut eta = vec![0i64; 31];
    eta[0] = 1;
    for n in 1..=30usize {
        let reps = if n % 11 == 0 { 4 } else { 2 };
        for _ in 0..reps {
            for k in (n..=30).rev() {
                eta[k] -= eta[k - n];
            }
        }
    }
    for n in 1..=30 {
        assert_eq!(an[n], eta[n - 1], "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_are_multiplicative(m in 1usize..60, n in 1usize..60, k in 0usize..4) {
        let tvals = [q(-1, 1), q(2, 3), q(-5, 3), q(7, 3)];
        let data = curve_data(&tvals[k]).unwrap();
        let mut d = data.clone();
        ensure_ap(&mut d, 3600, None).unwrap();
        let an = an_coefficients(&d.ap, |p| d.is_bad(p), 3600);
        if Integer::from(m).gcd(&Integer::from(n)) == 1 {
            prop_assert_eq!(an[m * n], an[m] * an[n]);
        }
        let primes = primes_up_to(59);
        let p = primes[m % primes.len()] as usize;
        let mut pk = p;
        while pk * p * p <= 3600 {
            let rhs = if d.is_bad(p as u64) {
                an[p] * an[pk]
            } else {
                an[p] * an[pk] - p as i64 * an[pk / p]
            };
            prop_assert_eq!(an[pk * p], rhs);
            pk *= p;
        }
    }
}

use hesse_core::numerics::*;
use hesse_core::Error;
use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn rel_err(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    (d / Float::with_val(a.prec(), b.abs_ref())).to_f64()
}

#[test]
fn context_validation() {
    assert!(matches!(PrecisionContext::new(10, 1e-5, 100), Err(Error::InvalidContext(_))));
    assert!(matches!(PrecisionContext::new(40, 1e-40, 100), Err(Error::InvalidContext(_))));
    assert!(matches!(PrecisionContext::new(40, 0.0, 100), Err(Error::InvalidContext(_))));
    assert!(matches!(PrecisionContext::new(40, 1e-30, 5), Err(Error::InvalidContext(_))));
    let c = PrecisionContext::new(40, 1e-35, 1000).unwrap();
    assert!(c.prec() >= 133);
    let d = c.doubled();
    assert_eq!(d.digits(), 80);
    assert!(d.tol() < 1e-70);
}

#[test]
fn gamma_matches_mpfr() {
    let c = ctx();
    let prec = c.prec();
    for (n, d) in [(1, 3), (2, 3), (1, 2), (7, 6), (-5, 3), (29, 4), (1, 1), (123, 7)] {
        let x = Rational::from((n, d));
        let ours = gamma_rational(&x, &c).unwrap();
        let mpfr = Float::with_val(prec, &x).gamma();
        assert!(rel_err(&ours, &mpfr) < 1e-38, "Γ({n}/{d})");
    }
}

#[test]
fn gamma_pole_is_reported() {
    assert!(matches!(gamma_rational(&Rational::from(-2), &ctx()), Err(Error::PoleAtNonpositiveInteger(_))));
    assert!(matches!(digamma_rational(&Rational::from(0), &ctx()), Err(Error::PoleAtNonpositiveInteger(_))));
}

#[test]
fn ln_gamma_matches_mpfr() {
    let c = ctx();
    for x in [0.25, 1.5, 10.0, 77.7] {
        let xf = c.float(x);
        let ours = ln_gamma(&xf, &c).unwrap();
        let mpfr = Float::with_val(c.prec(), xf.ln_gamma_ref());
        assert!(Float::with_val(c.prec(), &ours - &mpfr).abs().to_f64() < 1e-38, "lnΓ({x})");
    }
}

#[test]
fn digamma_matches_mpfr() {
    let c = ctx();
    for (n, d) in [(1, 3), (2, 3), (1, 1), (5, 2), (-7, 4), (11, 5)] {
        let x = Rational::from((n, d));
        let ours = digamma_rational(&x, &c).unwrap();
        let mpfr = Float::with_val(c.prec(), &x).digamma();
        assert!(Float::with_val(c.prec(), &ours - &mpfr).abs().to_f64() < 1e-38, "ψ({n}/{d})");
    }
}

#[test]
fn digamma_at_one_is_minus_euler() {
    let c = ctx();
    let v = digamma_rational(&Rational::from(1), &c).unwrap() + c.euler_gamma();
    assert!(v.abs().to_f64() < 1e-40);
}

#[test]
fn bernoulli_numbers() {
    let expected = [(0, (1, 1)), (1, (-1, 2)), (2, (1, 6)), (3, (0, 1)), (4, (-1, 30)), (6, (1, 42)), (8, (-1, 30)), (10, (5, 66)), (12, (-691, 2730))];
    for (n, (p, q)) in expected {
        assert_eq!(bernoulli_number(n), Rational::from((p, q)), "B_{n}");
    }
}

#[test]
fn beta_product_identity() {
    let c = ctx();
    let b13 = beta_sym(&Rational::from((1, 3)), &c).unwrap();
    let b23 = beta_sym(&Rational::from((2, 3)), &c).unwrap();
    let target = c.float(3).sqrt() * c.pi() * 2u32;
    assert!(Float::with_val(c.prec(), b13 * b23 - target).abs().to_f64() < 1e-30);
}

#[test]
fn beta_matches_gamma_ratio_from_mpfr() {
    let c = ctx();
    let prec = c.prec();
    let (s, t) = (Rational::from((2, 5)), Rational::from((7, 3)));
    let g = |x: &Rational| Float::with_val(prec, x).gamma();
    let expected = g(&s) * g(&t) / g(&Rational::from(&s + &t));
    assert!(rel_err(&beta(&s, &t, &c).unwrap(), &expected) < 1e-38);
}

#[test]
fn bernoulli_polynomial_values() {
    assert_eq!(bernoulli3(&Rational::from(0)), 0);
    assert_eq!(bernoulli3(&Rational::from((1, 2))), 0);
    let s = bernoulli3(&Rational::from((1, 3))) + bernoulli3(&Rational::from((2, 3)));
    assert_eq!(s, 0);
    assert_eq!(bernoulli3(&Rational::from((1, 3))), Rational::from((1, 27)));
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer_rational(&Rational::from(1), 5), 120);
    assert_eq!(pochhammer_rational(&Rational::from((1, 2)), 3), Rational::from((15, 8)));
    assert_eq!(pochhammer_rational(&Rational::from(-2), 4), 0);
}

#[test]
fn geometric_series_sum() {
    let c = ctx();
    let prec = c.prec();
    let r = Float::with_val(prec, 0.5);
    let s = sum_series(&c, |n| {
        let v = Complex::with_val(prec, Float::with_val(prec, r.clone().pow(n as u32)));
        Term { value: v, tail: TailBound::Geometric(0.5) }
    })
    .unwrap();
    assert!(Float::with_val(prec, s.value.real() - 2u32).abs().to_f64() < 1e-35);
    assert!(s.tail < c.tol());
}

#[test]
fn series_without_tail_certificate_runs_out_of_terms() {
    let c = ctx().with_max_terms(50).unwrap();
    let prec = c.prec();
    let s = sum_series(&c, |n| Term { value: Complex::with_val(prec, 1.0 / (n as f64 + 1.0)), tail: TailBound::Unknown });
    assert!(matches!(s, Err(Error::NonConvergent { terms: 50 })));
}

#[test]
fn cancellation_beyond_precision_is_reported() {
    let c = PrecisionContext::with_digits(20).unwrap();
    let prec = c.prec();
    // terms of size 2^200 exceed what the working precision can resolve
    let huge = Float::with_val(prec, Float::i_exp(1, 200));
    let s = sum_series(&c, |n| {
        let v = if n == 0 {
            Complex::with_val(prec, &huge)
        } else if n == 1 {
            Complex::with_val(prec, -huge.clone())
        } else {
            Complex::with_val(prec, 0)
        };
        Term { value: v, tail: TailBound::Absolute(0.0) }
    });
    assert!(matches!(s, Err(Error::PrecisionExhausted(_))));
}

#[test]
fn reconstruct_known_fractions() {
    let c = ctx();
    let x = c.from_rational(&Rational::from((-8027, 256)));
    assert_eq!(rational_reconstruct(&x, 10_000), Some(Rational::from((-8027, 256))));
    let pi = Float::with_val(c.prec(), Constant::Pi);
    assert_eq!(rational_reconstruct_tol(&pi, 10_000, 1e-30), None);
}

proptest! {
    #[test]
    fn reconstruct_recovers_fractions(p in -100_000i64..100_000, q in 1u64..10_000, noise in -1.0f64..1.0) {
        let c = ctx();
        let r = Rational::from((p, q));
        let x = c.from_rational(&r) + Float::with_val(c.prec(), noise * 1e-30);
        prop_assert_eq!(rational_reconstruct(&x, 10_000), Some(r.clone()));
        prop_assert_eq!(rational_reconstruct_tol(&x, 10_000, 1e-28), Some(r));
    }

    #[test]
    fn gamma_recurrence(n in 1i64..200, d in 1i64..30) {
        let c = ctx();
        let x = Rational::from((n, d));
        let g = gamma_rational(&x, &c).unwrap();
        let g1 = gamma_rational(&Rational::from(&x + 1u32), &c).unwrap();
        let lhs = g * c.from_rational(&x);
        prop_assert!(rel_err(&lhs, &g1) < 1e-37);
    }
}

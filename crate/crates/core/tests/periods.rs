use hesse_core::numerics::PrecisionContext;
use hesse_core::periods::*;
use hesse_core::Error;
use proptest::prelude::*;
use rug::{Complex, Float};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn gap(z: &Complex, w: &Complex) -> f64 {
    Float::with_val(z.prec().0, Complex::with_val(z.prec().0, z - w).abs_ref()).to_f64()
}

/// Γ(s)²/Γ(2s) from MPFR.
fn beta_oracle(c: &PrecisionContext, n: u32) -> Float {
    let s = Float::with_val(c.prec(), n) / 3u32;
    let g = s.clone().gamma();
    let g2 = Float::with_val(c.prec(), &s * 2u32).gamma();
    g.square() / g2
}

#[test]
fn periods_at_the_fermat_point() {
    let c = ctx();
    let v = period_vector(&c.complex(0), &c).unwrap();
    let b13 = Complex::with_val(c.prec(), beta_oracle(&c, 1));
    let b23 = Complex::with_val(c.prec(), beta_oracle(&c, 2));
    let z = c.zeta3();
    let one_m_z = Complex::with_val(c.prec(), 1 - &z);
    let one_m_z2 = Complex::with_val(c.prec(), 1 - c.zeta3_pow(2));
    assert!(gap(&v.b_omega, &b13) < 1e-38);
    assert!(gap(&v.b_eta, &b23) < 1e-38);
    assert!(gap(&v.a_omega, &-(one_m_z * &b13)) < 1e-38);
    assert!(gap(&v.a_eta, &-(one_m_z2 * &b23)) < 1e-38);
}

#[test]
fn beta_constants_match_gamma_quotients() {
    let c = ctx();
    let (b13, b23) = beta_constants(&c).unwrap();
    assert!(Float::with_val(c.prec(), &b13 - beta_oracle(&c, 1)).abs().to_f64() < 1e-38);
    assert!(Float::with_val(c.prec(), &b23 - beta_oracle(&c, 2)).abs().to_f64() < 1e-38);
}

#[test]
fn riemann_relation_on_a_grid() {
    let c = ctx();
    for i in 0..5 {
        for j in 0..4 {
            let r = 0.15 + 0.17 * i as f64;
            let th = 0.3 + 1.55 * j as f64;
            let t = Complex::with_val(c.prec(), (r * th.cos(), r * th.sin()));
            let d = riemann_defect(&t, &c).unwrap().to_f64();
            assert!(d < 1e-30, "t = {r}·e^(i{th}): {d:e}");
        }
    }
}

#[test]
fn hypergeometric_legendre_relation_on_a_grid() {
    let c = ctx();
    let mut pts: Vec<(f64, f64)> = (0..12).map(|k| (-0.9 + 0.15 * k as f64, 0.0)).collect();
    pts.extend([(0.2, 0.3), (-0.5, 0.5), (0.0, -0.8), (0.6, -0.1), (-0.3, -0.3), (0.1, 0.9), (0.7, 0.6), (-0.85, 0.1)]);
    for (re, im) in pts {
        let x = Complex::with_val(c.prec(), (re, im));
        let d = hgr_defect(&x, &c).unwrap().to_f64();
        assert!(d < 1e-30, "x = {re}+{im}i: {d:e}");
    }
}

#[test]
fn gauss_manin_system() {
    let c = ctx();
    let h = c.float(1e-8);
    for (re, im) in [(0.0, 0.0), (0.1, 0.0), (0.2, 0.1), (0.5, 0.0)] {
        let t = Complex::with_val(c.prec(), (re, im));
        let d = gauss_manin_defect(&t, &h, &c).unwrap().to_f64();
        assert!(d < 1e-12, "t = {re}+{im}i: {d:e}");
    }
}

#[test]
fn gauss_manin_defect_is_second_order_in_step() {
    let c = ctx();
    let t = Complex::with_val(c.prec(), (0.3, 0.1));
    let d1 = gauss_manin_defect(&t, &c.float(1e-3), &c).unwrap().to_f64();
    let d2 = gauss_manin_defect(&t, &c.float(5e-4), &c).unwrap().to_f64();
    let ratio = d1 / d2;
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn periods_over_real_parameters_are_real_on_b() {
    let c = ctx();
    let v = period_vector(&c.complex(-0.7), &c).unwrap();
    assert!(v.b_omega.imag().to_f64().abs() < 1e-38);
    assert!(v.b_eta.imag().to_f64().abs() < 1e-38);
}

#[test]
fn outside_the_disc_is_rejected() {
    let c = ctx();
    assert!(matches!(period_vector(&c.complex(1.2), &c), Err(Error::DivergentArgument(_))));
    assert!(matches!(period_vector(&c.complex(-1), &c), Err(Error::DivergentArgument(_))));
    assert!(matches!(hgr_defect(&c.complex(1), &c), Err(Error::DivergentArgument(_))));
}

#[test]
fn cycle_names_round_trip() {
    for cy in [Cycle::A, Cycle::B, Cycle::Gamma] {
        assert_eq!(cy.to_string().parse::<Cycle>().unwrap(), cy);
    }
    assert!("C".parse::<Cycle>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn riemann_relation_holds_anywhere_in_the_disc(r in 0.0f64..0.85, th in 0.0f64..6.283) {
        let c = ctx();
        let t = Complex::with_val(c.prec(), (r * th.cos(), r * th.sin()));
        prop_assert!(riemann_defect(&t, &c).unwrap().to_f64() < 1e-30);
    }
}

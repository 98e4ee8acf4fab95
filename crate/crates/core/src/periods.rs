//! Periods of ω_t and η_t over the cycles A and B as ₂F₁ combinations, with
//! the Riemann relation and Gauss–Manin consistency checks.

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::hyper::{pfq_q, q};
use crate::numerics::{beta_sym, PrecisionContext};

/// Cycles on X_t; γ = A − F_∞(A).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cycle {
    A,
    B,
    Gamma,
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cycle::A => write!(f, "A"),
            Cycle::B => write!(f, "B"),
            Cycle::Gamma => write!(f, "gamma"),
        }
    }
}

impl FromStr for Cycle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Cycle::A),
            "B" | "b" => Ok(Cycle::B),
            "gamma" | "G" | "g" => Ok(Cycle::Gamma),
            _ => Err(Error::InvalidInput(format!("unknown cycle {s}"))),
        }
    }
}

/// ∫_A ω, ∫_B ω, ∫_A η, ∫_B η.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodVector {
    pub a_omega: Complex,
    pub b_omega: Complex,
    pub a_eta: Complex,
    pub b_eta: Complex,
}

/// (B_{1/3}, B_{2/3}).
pub fn beta_constants(ctx: &PrecisionContext) -> Result<(Float, Float)> {
    Ok((beta_sym(&q(1, 3), ctx)?, beta_sym(&q(2, 3), ctx)?))
}

fn cube(t: &Complex) -> Complex {
    let t2 = Complex::with_val(t.prec().0, t * t);
    t2 * t
}

/// Requires |t³| < 1.
fn check_disc(t3: &Complex) -> Result<()> {
    let r = Float::with_val(t3.prec().0, t3.abs_ref());
    if r >= 1u32 {
        return Err(Error::DivergentArgument(format!("|t³| = {} ≥ 1", r.to_f64())));
    }
    Ok(())
}

/// The four periods on the principal sheet |t³| < 1.
pub fn period_vector(t: &Complex, ctx: &PrecisionContext) -> Result<PeriodVector> {
    let prec = ctx.prec();
    let t = Complex::with_val(prec, t);
    let t3 = cube(&t);
    check_disc(&t3)?;
    let (b13, b23) = beta_constants(ctx)?;
    let f1 = pfq_q(&[(1, 3), (1, 3)], &[(2, 3)], &t3, ctx)? * &b13;
    let f2 = pfq_q(&[(2, 3), (2, 3)], &[(4, 3)], &t3, ctx)? * &b23 * &t;
    let g1 = pfq_q(&[(-1, 3), (2, 3)], &[(1, 3)], &t3, ctx)? * &b23;
    let t2 = Complex::with_val(prec, &t * &t);
    let g2 = pfq_q(&[(1, 3), (4, 3)], &[(5, 3)], &t3, ctx)? * &b13 * t2 / 2u32;
    let z = ctx.zeta3();
    let one_m_z = Complex::with_val(prec, 1 - &z);
    let one_m_z2 = Complex::with_val(prec, 1 - ctx.zeta3_pow(2));
    let a_omega = -Complex::with_val(prec, &one_m_z * &f1) + Complex::with_val(prec, &one_m_z2 * &f2);
    let b_omega = Complex::with_val(prec, &f1 - &f2);
    let a_eta = -Complex::with_val(prec, &one_m_z2 * &g1) - Complex::with_val(prec, &one_m_z * &g2);
    let b_eta = Complex::with_val(prec, &g1 + &g2);
    Ok(PeriodVector { a_omega, b_omega, a_eta, b_eta })
}

/// |∫_Bω ∫_Aη − ∫_Aω ∫_Bη + 6πi|.
pub fn riemann_defect(t: &Complex, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec();
    let v = period_vector(t, ctx)?;
    let lhs = Complex::with_val(prec, &v.b_omega * &v.a_eta) - Complex::with_val(prec, &v.a_omega * &v.b_eta);
    let six_pi_i = Complex::with_val(prec, (0, ctx.pi() * 6u32));
    Ok(Float::with_val(prec, (lhs + six_pi_i).abs_ref()))
}

/// |₂F₁(1/3,1/3;2/3;x)₂F₁(−1/3,2/3;1/3;x) + (x/2)₂F₁(2/3,2/3;4/3;x)₂F₁(1/3,4/3;5/3;x) − 1|.
pub fn hgr_defect(x: &Complex, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec();
    let r = Float::with_val(prec, x.abs_ref());
    if r >= 1u32 {
        return Err(Error::DivergentArgument(format!("|x| = {} ≥ 1", r.to_f64())));
    }
    let a = pfq_q(&[(1, 3), (1, 3)], &[(2, 3)], x, ctx)? * pfq_q(&[(-1, 3), (2, 3)], &[(1, 3)], x, ctx)?;
    let b = pfq_q(&[(2, 3), (2, 3)], &[(4, 3)], x, ctx)? * pfq_q(&[(1, 3), (4, 3)], &[(5, 3)], x, ctx)?;
    let half_x = Complex::with_val(prec, x / 2u32);
    let total = a + b * half_x - 1u32;
    Ok(Float::with_val(prec, total.abs_ref()))
}

/// Right-hand side of the Gauss–Manin system: derivatives of (∫ω, ∫η)
/// over one cycle, ((t²∫ω − ∫η), (t∫ω − t²∫η))/(1 − t³).
pub fn gauss_manin_rhs(t: &Complex, omega: &Complex, eta: &Complex) -> (Complex, Complex) {
    let prec = omega.prec().0;
    let t2 = Complex::with_val(prec, t * t);
    let denom = Complex::with_val(prec, 1 - cube(t));
    let d_omega = (Complex::with_val(prec, &t2 * omega) - eta) / &denom;
    let d_eta = (Complex::with_val(prec, t * omega) - Complex::with_val(prec, &t2 * eta)) / &denom;
    (d_omega, d_eta)
}

/// Maximum over both cycles and both forms of the gap between central
/// differences of the periods and the Gauss–Manin right-hand side.
pub fn gauss_manin_defect(t: &Complex, h: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec();
    let t = Complex::with_val(prec, t);
    let tp = Complex::with_val(prec, &t + h);
    let tm = Complex::with_val(prec, &t - h);
    let v = period_vector(&t, ctx)?;
    let vp = period_vector(&tp, ctx)?;
    let vm = period_vector(&tm, ctx)?;
    let two_h = Float::with_val(prec, h * 2u32);
    let fd = |a: &Complex, b: &Complex| Complex::with_val(prec, a - b) / &two_h;
    let mut worst = Float::with_val(prec, 0);
    for (w, e, wp, ep, wm, em) in [
        (&v.a_omega, &v.a_eta, &vp.a_omega, &vp.a_eta, &vm.a_omega, &vm.a_eta),
        (&v.b_omega, &v.b_eta, &vp.b_omega, &vp.b_eta, &vm.b_omega, &vm.b_eta),
    ] {
        let (dw, de) = gauss_manin_rhs(&t, w, e);
        for (num, exact) in [(fd(wp, wm), dw), (fd(ep, em), de)] {
            let gap = Float::with_val(prec, (num - exact).abs_ref());
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(worst)
}

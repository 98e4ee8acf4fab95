use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

/// Below this argument E1 is summed from its power series, above it the
/// continued fraction is used.
pub const E1_SPLIT: f64 = 8.0;

/// Γ(2, y) = (1 + y)e^{−y}.
pub fn gamma2_upper(y: &Float) -> Float {
    let e = Float::with_val(y.prec(), (-y.clone()).exp_ref());
    Float::with_val(y.prec(), y + 1u32) * e
}

/// E1(y) = Γ(0, y) for y > 0.
pub fn e1(y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *y <= 0 {
        return Err(Error::InvalidInput(format!("E1 needs a positive argument, got {}", y.to_f64())));
    }
    if y.to_f64() < E1_SPLIT {
        e1_series(y, ctx)
    } else {
        e1_fraction(y, ctx)
    }
}

/// −γ − log y − Σ_{k≥1} (−y)^k/(k·k!), at extra precision to absorb the
/// cancellation of size e^y.
fn e1_series(y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let extra = (y.to_f64() * std::f64::consts::LOG2_E) as u32 + 16;
    let prec = ctx.prec() + extra;
    let y = Float::with_val(prec, y);
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 0);
    for k in 1..=ctx.max_terms() as u32 {
        term *= &y;
        term /= k;
        term = -term;
        let contrib = Float::with_val(prec, &term / k);
        sum += &contrib;
        if contrib.abs() < eps && k as f64 > y.to_f64() {
            let gamma = Float::with_val(prec, rug::float::Constant::Euler);
            let out = -gamma - y.ln() - sum;
            return Ok(Float::with_val(ctx.prec(), out));
        }
    }
    Err(Error::NonConvergent { terms: ctx.max_terms() })
}

/// e^{−y}/(y + 1 − 1²/(y + 3 − 2²/(y + 5 − …))) by the modified Lentz method.
fn e1_fraction(y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec() + 16;
    let y = Float::with_val(prec, y);
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) * 2));
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4));
    let mut b = Float::with_val(prec, &y + 1u32);
    let mut c = Float::with_val(prec, 1) / &tiny;
    let mut d = Float::with_val(prec, 1) / &b;
    let mut h = d.clone();
    for i in 1..=ctx.max_terms() as u64 {
        let an = -Float::with_val(prec, i * i);
        b += 2u32;
        d = Float::with_val(prec, &an * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = Float::with_val(prec, &an / &c) + &b;
        if c.is_zero() {
            c = tiny.clone();
        }
        d = d.recip();
        let delta = Float::with_val(prec, &c * &d);
        h *= &delta;
        if Float::with_val(prec, delta - 1u32).abs() < eps {
            let e = Float::with_val(prec, (-y.clone()).exp_ref());
            return Ok(Float::with_val(ctx.prec(), h * e));
        }
    }
    Err(Error::NonConvergent { terms: ctx.max_terms() })
}

/// The two halves of the smoothed sum for L(E, 2) at cut scale `a`:
/// S1 = Σ a_n Γ(2, a·x_n)/n² and S2 = (4π²/N) Σ a_n E1(x_n/a), x_n = 2πn/√N,
/// so that L(E, 2) = S1 + ε·S2.
pub fn smoothed_halves(an: &[i64], conductor: u64, a: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let prec = ctx.prec();
    let two_pi = ctx.pi() * 2u32;
    let sqrt_n = Float::with_val(prec, conductor).sqrt();
    let step = Float::with_val(prec, &two_pi / &sqrt_n);
    let cut = ctx.float(a);
    let mut s1 = Float::with_val(prec, 0);
    let mut s2 = Float::with_val(prec, 0);
    for (n, &c) in an.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let x = Float::with_val(prec, &step * n as u32);
        let w1 = gamma2_upper(&Float::with_val(prec, &x * &cut));
        let n2 = Float::with_val(prec, n as u64) * n as u64;
        s1 += w1 * c / n2;
        let w2 = e1(&Float::with_val(prec, &x / &cut), ctx)?;
        s2 += w2 * c;
    }
    let scale = Float::with_val(prec, two_pi.square_ref()) / conductor;
    Ok((s1, s2 * scale))
}

/// Same halves at s = 1: Σ a_n E1(a·x_n)/n and Σ a_n E1(x_n/a)/n.
pub fn smoothed_halves_s1(an: &[i64], conductor: u64, a: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let prec = ctx.prec();
    let sqrt_n = Float::with_val(prec, conductor).sqrt();
    let step = Float::with_val(prec, ctx.pi() * 2u32) / sqrt_n;
    let cut = ctx.float(a);
    let mut s1 = Float::with_val(prec, 0);
    let mut s2 = Float::with_val(prec, 0);
    for (n, &c) in an.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let x = Float::with_val(prec, &step * n as u32);
        s1 += e1(&Float::with_val(prec, &x * &cut), ctx)? * c / n as u64;
        s2 += e1(&Float::with_val(prec, &x / &cut), ctx)? * c / n as u64;
    }
    Ok((s1, s2))
}

/// Number of coefficients needed at cut scales in [1/amax, amax].
pub fn terms_needed(conductor: u64, amax: f64, ctx: &PrecisionContext) -> usize {
    let target = -ctx.tol().ln() + 20.0;
    let scale = (conductor as f64).sqrt() / (2.0 * std::f64::consts::PI);
    (target * amax * scale).ceil() as usize + 2
}

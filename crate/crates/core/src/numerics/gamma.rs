use std::sync::Mutex;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::PrecisionContext;
use crate::error::{Error, Result};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number B_n (with B_1 = −1/2), exact.
pub fn bernoulli_number(n: usize) -> Rational {
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n {
        let m = table.len();
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom = binom * (m + 1 - j) / (j + 1);
        }
        let bm = -acc / Integer::from(m + 1);
        table.push(bm);
    }
    table[n].clone()
}

fn check_pole(q: &Rational) -> Result<()> {
    if *q.denom() == 1 && *q.numer() <= 0 {
        return Err(Error::PoleAtNonpositiveInteger(q.to_string()));
    }
    Ok(())
}

/// ln Γ(x) for real x large enough that the Stirling series reaches the
/// working precision before its terms start to grow.
fn stirling_ln_gamma(x: &Float, prec: u32) -> Result<Float> {
    let half = Float::with_val(prec, 0.5);
    let ln_x = Float::with_val(prec, x.ln_ref());
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut s = Float::with_val(prec, x - &half) * &ln_x - x + two_pi.ln() / 2u32;
    let x2 = Float::with_val(prec, x.square_ref());
    let mut xpow = x.clone();
    let eps_log2 = -(prec as f64);
    for k in 1..2000usize {
        let b = bernoulli_number(2 * k);
        let denom = Integer::from(2 * k) * Integer::from(2 * k - 1);
        let term = Float::with_val(prec, &Rational::from(&b / &denom)) / &xpow;
        s += &term;
        xpow *= &x2;
        let next = Float::with_val(prec, bernoulli_number(2 * k + 2).abs())
            / Integer::from((2 * k + 2) * (2 * k + 1))
            / &xpow;
        let scale = s.to_f64().abs().max(1.0).log2();
        if next.is_zero() || next.to_f64().log2() < eps_log2 + scale {
            return Ok(s);
        }
        if next > term.abs() {
            break;
        }
    }
    Err(Error::PrecisionExhausted(format!("Stirling series at x = {x}")))
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::InvalidInput(format!("ln_gamma needs x > 0, got {x}")));
    }
    let prec = ctx.prec() + 32;
    let x0 = 0.12 * prec as f64 + 5.0;
    let shift = (x0 - x.to_f64()).ceil().max(0.0) as u64;
    let mut y = Float::with_val(prec, x);
    let mut prod = Float::with_val(prec, 1);
    for _ in 0..shift {
        prod *= &y;
        y += 1u32;
    }
    let lg = stirling_ln_gamma(&y, prec)? - prod.ln();
    Ok(Float::with_val(ctx.prec(), lg))
}

/// Γ(q) at a rational argument.
pub fn gamma_rational(q: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    check_pole(q)?;
    let prec = ctx.prec() + 32;
    let qf = Float::with_val(prec, q);
    let x0 = 0.12 * prec as f64 + 5.0;
    let shift = (x0 - qf.to_f64()).ceil().max(0.0) as u64;
    let mut y = qf.clone();
    let mut prod = Float::with_val(prec, 1);
    for _ in 0..shift {
        prod *= &y;
        y += 1u32;
    }
    let g = stirling_ln_gamma(&y, prec)?.exp() / prod;
    Ok(Float::with_val(ctx.prec(), g))
}

/// B(s, t) = Γ(s)Γ(t)/Γ(s+t).
pub fn beta(s: &Rational, t: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    let st = Rational::from(s + t);
    let wide = PrecisionContext::new(ctx.digits() + 10, ctx.tol(), ctx.max_terms())?;
    let v = gamma_rational(s, &wide)? * gamma_rational(t, &wide)? / gamma_rational(&st, &wide)?;
    Ok(Float::with_val(ctx.prec(), v))
}

/// B_s = B(s, s).
pub fn beta_sym(s: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    beta(s, s, ctx)
}

/// ψ(q) at a rational argument: Gauss's digamma theorem on the fractional
/// part, then the recurrence ψ(x+1) = ψ(x) + 1/x.
pub fn digamma_rational(q: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    check_pole(q)?;
    let prec = ctx.prec() + 32;
    let floor = q.clone().floor();
    let frac = Rational::from(q - &floor);
    let euler = Float::with_val(prec, Constant::Euler);
    let mut psi;
    let base: Rational;
    if frac == 0 {
        // ψ(1) = −γ, shift from 1
        psi = -euler;
        base = Rational::from(1);
    } else {
        let p = frac.numer().to_u64().expect("fractional numerator fits");
        let d = frac.denom().to_u64().ok_or_else(|| Error::InvalidInput(q.to_string()))?;
        let pi = Float::with_val(prec, Constant::Pi);
        let arg = Float::with_val(prec, &pi * p) / d;
        let cot = Float::with_val(prec, arg.tan_ref()).recip();
        psi = -euler - Float::with_val(prec, 2 * d).ln() - cot * &pi / 2u32;
        for n in 1..=((d - 1) / 2) {
            let c = (Float::with_val(prec, &pi * (2 * n * p)) / d).cos();
            let s = (Float::with_val(prec, &pi * n) / d).sin().ln();
            psi += c * s * 2u32;
        }
        base = frac.clone();
    }
    // move from base to q = base + shift
    let shift = Rational::from(q - &base);
    let steps = shift.numer().to_i64().expect("integer shift");
    let mut x = Float::with_val(prec, &base);
    if steps >= 0 {
        for _ in 0..steps {
            psi += Float::with_val(prec, x.recip_ref());
            x += 1u32;
        }
    } else {
        for _ in 0..(-steps) {
            x -= 1u32;
            psi -= Float::with_val(prec, x.recip_ref());
        }
    }
    Ok(Float::with_val(ctx.prec(), psi))
}

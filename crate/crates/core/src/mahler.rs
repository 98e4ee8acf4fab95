//! Mahler measure of x³ + y³ + 1 − 3t·xy by Jensen's formula and adaptive
//! Gauss–Legendre quadrature, membership in the curved triangle 𝒦, and the
//! comparison with the regulator of the Hesse symbol.

use rayon::join;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{abs_f64, PrecisionContext};
use crate::regulator::reg_hesse;

/// Gauss–Legendre order of one panel.
pub const GL_ORDER: usize = 20;

/// Bisection depth at which a panel is accepted regardless of its error.
pub const MAX_DEPTH: u32 = 40;

/// Numerical Mahler measure m(t).
#[derive(Clone, Debug)]
pub struct MahlerResult {
    pub t: Float,
    pub value: Float,
    /// Sum of the panel error estimates.
    pub quadrature_error: f64,
    pub panels: usize,
    /// Evaluated at a boundary point of 𝒦 ∩ ℝ, where the relation with the
    /// regulator holds as a one-sided limit.
    pub one_sided: bool,
}

/// The three roots in y of y³ − 3t·x·y + x³ + 1, by Cardano's formula with a
/// Newton polish.
pub fn cubic_roots(t: &Complex, x: &Complex, ctx: &PrecisionContext) -> Result<[Complex; 3]> {
    let prec = ctx.prec();
    let p = Complex::with_val(prec, t * x) * -3i32;
    let x3 = Complex::with_val(prec, x.square_ref()) * x;
    let q = x3 + 1u32;
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    if abs_f64(&p) < tiny.to_f64() && abs_f64(&q) < tiny.to_f64() {
        return Ok([ctx.complex(0), ctx.complex(0), ctx.complex(0)]);
    }
    let half_q = Complex::with_val(prec, &q / 2u32);
    let p3 = Complex::with_val(prec, p.square_ref()) * &p / 27u32;
    let s = (Complex::with_val(prec, half_q.square_ref()) + p3).sqrt();
    let c1 = Complex::with_val(prec, &s - &half_q);
    let c2 = Complex::with_val(prec, -Complex::with_val(prec, &s + &half_q));
    let u3 = if abs_f64(&c1) >= abs_f64(&c2) { c1 } else { c2 };
    let u = if abs_f64(&u3) == 0.0 { ctx.complex(0) } else { (u3.ln() / 3u32).exp() };
    let mut roots: [Complex; 3] = [0i64, 1, 2].map(|k| {
        let uk = Complex::with_val(prec, &u * ctx.zeta3_pow(k));
        if abs_f64(&uk) == 0.0 {
            ctx.complex(0)
        } else {
            let corr = Complex::with_val(prec, &p / Complex::with_val(prec, &uk * 3u32));
            uk - corr
        }
    });
    let eval = |y: &Complex| -> (Complex, Complex) {
        let y2 = Complex::with_val(prec, y.square_ref());
        let f = Complex::with_val(prec, &y2 * y) + Complex::with_val(prec, &p * y) + &q;
        let df = y2 * 3u32 + &p;
        (f, df)
    };
    for y in roots.iter_mut() {
        for _ in 0..6 {
            let (f, df) = eval(y);
            if abs_f64(&df) == 0.0 {
                break;
            }
            *y -= f / df;
        }
        let (f, _) = eval(y);
        let scale = 1.0 + abs_f64(y).powi(3) + abs_f64(&p) * abs_f64(y) + abs_f64(&q);
        if abs_f64(&f) > tiny.to_f64() * scale {
            return Err(Error::RootTrackingFailed(format!("x = {}", x.to_string_radix(10, Some(12)))));
        }
    }
    Ok(roots)
}

/// Σ log⁺|y_i| over the roots at x = e^{2πiθ}.
pub fn jensen_integrand(t: &Complex, theta: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec();
    let angle = Float::with_val(prec, theta * ctx.pi()) * 2u32;
    let x = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
    let mut sum = ctx.float(0);
    for y in cubic_roots(t, &x, ctx)? {
        let r = Float::with_val(prec, y.abs_ref());
        if r > 1 {
            sum += r.ln();
        }
    }
    Ok(sum)
}

/// Nodes and weights of Gauss–Legendre quadrature on [−1, 1].
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    let mut out = Vec::with_capacity(n);
    let pi = Float::with_val(prec, Constant::Pi);
    for k in 1..=n {
        let guess = (Float::with_val(prec, &pi * (k as f64 - 0.25)) / (n as f64 + 0.5)).cos();
        let mut x = guess;
        let mut dp = Float::with_val(prec, 0);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            dp = d;
            let step = Float::with_val(prec, &p / &dp);
            x -= &step;
            if step.abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 2)) {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let one_minus = Float::with_val(prec, 1) - Float::with_val(prec, x.square_ref());
        let w = Float::with_val(prec, 2) / (one_minus * Float::with_val(prec, dp.square_ref()));
        out.push((x, w));
    }
    out
}

/// (P_n(x), P_n′(x)).
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(prec, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = (Float::with_val(prec, x * &p1) - &p0) * n as u32 / den;
    (p1, d)
}

struct Quad<'a> {
    t: &'a Complex,
    ctx: &'a PrecisionContext,
    rule: Vec<(Float, Float)>,
}

impl Quad<'_> {
    fn panel(&self, a: &Float, b: &Float) -> Result<Float> {
        let prec = self.ctx.prec();
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, b + a) / 2u32;
        let mut s = self.ctx.float(0);
        for (x, w) in &self.rule {
            let theta = Float::with_val(prec, &half * x) + &mid;
            s += jensen_integrand(self.t, &theta, self.ctx)? * w;
        }
        Ok(s * half)
    }

    fn adapt(&self, a: Float, b: Float, whole: Float, tol: f64, depth: u32) -> Result<(Float, f64, usize)> {
        let prec = self.ctx.prec();
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let left = self.panel(&a, &mid)?;
        let right = self.panel(&mid, &b)?;
        let both = Float::with_val(prec, &left + &right);
        let err = Float::with_val(prec, &both - &whole).abs().to_f64();
        if err < tol || depth >= MAX_DEPTH {
            return Ok((both, err, 2));
        }
        let (l, r) = if depth < 4 {
            join(
                || self.adapt(a.clone(), mid.clone(), left.clone(), tol / 2.0, depth + 1),
                || self.adapt(mid.clone(), b.clone(), right.clone(), tol / 2.0, depth + 1),
            )
        } else {
            (
                self.adapt(a.clone(), mid.clone(), left, tol / 2.0, depth + 1),
                self.adapt(mid.clone(), b.clone(), right, tol / 2.0, depth + 1),
            )
        };
        let (l, r) = (l?, r?);
        Ok((l.0 + r.0, l.1 + r.1, l.2 + r.2))
    }
}

/// 6·∫₀^{1/6}: the integrand is even in θ and has period 1/3 for real t.
fn integrate(t: &Float, ctx: &PrecisionContext, one_sided: bool) -> Result<MahlerResult> {
    let prec = ctx.prec();
    let tc = Complex::with_val(prec, t);
    let quad = Quad { t: &tc, ctx, rule: gauss_legendre(GL_ORDER, prec) };
    let top = Float::with_val(prec, 1) / 6u32;
    let zero = ctx.float(0);
    let whole = quad.panel(&zero, &top)?;
    let (value, err, panels) = quad.adapt(zero, top, whole, ctx.tol() / 6.0, 0)?;
    Ok(MahlerResult { t: t.clone(), value: value * 6u32, quadrature_error: err * 6.0, panels, one_sided })
}

fn boundary_point(t: &Float, ctx: &PrecisionContext) -> bool {
    let third = Float::with_val(ctx.prec(), -1) / 3u32;
    let d1 = Float::with_val(ctx.prec(), t - &third).abs().to_f64();
    let d2 = Float::with_val(ctx.prec(), t - 1u32).abs().to_f64();
    d1 < ctx.tol() || d2 < ctx.tol()
}

fn check_outside(t: &Float, ctx: &PrecisionContext) -> Result<()> {
    let third = Float::with_val(ctx.prec(), -1) / 3u32;
    if *t > third && *t < 1 && !boundary_point(t, ctx) {
        return Err(Error::InvalidInput(format!(
            "t = {} lies inside the curved triangle",
            t.to_string_radix(10, Some(10))
        )));
    }
    Ok(())
}

/// m(t) for real t outside the interior of 𝒦 ∩ ℝ = [−1/3, 1].
pub fn mahler_measure(t: &Float, ctx: &PrecisionContext) -> Result<MahlerResult> {
    if boundary_point(t, ctx) {
        return Err(Error::OnBoundary(t.to_string_radix(10, Some(10))));
    }
    check_outside(t, ctx)?;
    integrate(t, ctx, false)
}

/// m(t) at a real t outside the interior of [−1/3, 1], boundary points
/// included and tagged; m is continuous in t, so the value there is the
/// one-sided limit.
pub fn mahler_measure_one_sided(t: &Float, ctx: &PrecisionContext) -> Result<MahlerResult> {
    check_outside(t, ctx)?;
    integrate(t, ctx, boundary_point(t, ctx))
}

/// Distance within which sampled membership is reported as inconclusive.
pub const MEMBERSHIP_MARGIN: f64 = 1e-6;

/// Whether t lies in 𝒦, the image of (x³ + y³ + 1)/(3xy) on the torus: exact
/// on the real line, by sampling otherwise.
pub fn in_curved_triangle(t: &Complex, ctx: &PrecisionContext) -> Result<bool> {
    if t.imag().is_zero() {
        let third = Float::with_val(ctx.prec(), -1) / 3u32;
        let r = t.real();
        return Ok(*r >= third && *r <= 1);
    }
    in_curved_triangle_sampled(t, ctx)
}

/// Sampled membership: t ∈ 𝒦 iff some root y of P_t(e^{2πiθ}, y) has |y| = 1.
/// Detected by a change in the number of roots outside the unit circle, or
/// rejected when every refined local minimum of ||y| − 1| stays above the
/// margin.
pub fn in_curved_triangle_sampled(t: &Complex, ctx: &PrecisionContext) -> Result<bool> {
    const SAMPLES: usize = 2048;
    let prec = ctx.prec();
    let probe = |theta: f64| -> Result<(usize, f64)> {
        let angle = Float::with_val(prec, theta) * ctx.pi() * 2u32;
        let x = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
        let roots = cubic_roots(t, &x, ctx)?;
        let mut outside = 0;
        let mut gap = f64::INFINITY;
        for y in &roots {
            let r = abs_f64(y);
            if r > 1.0 {
                outside += 1;
            }
            gap = gap.min((r - 1.0).abs());
        }
        Ok((outside, gap))
    };
    let h = 1.0 / (3.0 * SAMPLES as f64);
    let samples: Vec<(usize, f64)> = (0..SAMPLES).map(|i| probe(i as f64 * h)).collect::<Result<_>>()?;
    let count = samples[0].0;
    if samples.iter().any(|s| s.0 != count) {
        return Ok(true);
    }
    for i in 0..SAMPLES {
        let prev = samples[(i + SAMPLES - 1) % SAMPLES].1;
        let next = samples[(i + 1) % SAMPLES].1;
        let here = samples[i].1;
        if here > prev || here > next || here > 0.1 {
            continue;
        }
        let (mut lo, mut hi) = ((i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
        let golden = 0.618_033_988_749_894_9;
        for _ in 0..80 {
            let m1 = hi - golden * (hi - lo);
            let m2 = lo + golden * (hi - lo);
            let (c1, g1) = probe(m1)?;
            let (c2, g2) = probe(m2)?;
            if c1 != count || c2 != count {
                return Ok(true);
            }
            if g1 < g2 {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let (c, g) = probe((lo + hi) / 2.0)?;
        if c != count {
            return Ok(true);
        }
        if g < MEMBERSHIP_MARGIN {
            return Err(Error::Inconclusive);
        }
    }
    Ok(false)
}

/// |m(t) + reg_hesse(t)| for rational t outside the interior of [−1/3, 1].
pub fn mahler_vs_regulator_defect(t: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    let tf = ctx.from_rational(t);
    let m = mahler_measure_one_sided(&tf, ctx)?;
    let reg = reg_hesse(t, ctx)?;
    Ok(Float::with_val(ctx.prec(), m.value + reg).abs())
}

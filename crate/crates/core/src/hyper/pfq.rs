use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{abs_bound, sum_series, PrecisionContext, TailBound, Term};

/// Parameters and argument of pFq.
#[derive(Clone, Debug)]
pub struct PfqSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub x: Complex,
}

impl PfqSpec {
    pub fn new(upper: &[Rational], lower: &[Rational], x: Complex) -> Self {
        PfqSpec { upper: upper.to_vec(), lower: lower.to_vec(), x }
    }

    /// (p, q)
    pub fn order(&self) -> (usize, usize) {
        (self.upper.len(), self.lower.len())
    }

    /// Re(Σ lower − Σ upper)
    pub fn excess(&self) -> Rational {
        let lo: Rational = self.lower.iter().sum();
        let up: Rational = self.upper.iter().sum();
        lo - up
    }
}

fn is_nonpositive_integer(q: &Rational) -> bool {
    *q.denom() == 1 && *q.numer() <= 0
}

/// sup over k ≥ n of |k + a| / |k + b|, for n + b > 0.
///
/// |k + a|/(k + b) decreases while k < −a and is monotone towards 1 after.
fn ratio_sup(a: f64, b: f64, n: f64) -> f64 {
    let f = |k: f64| ((k + a) / (k + b)).abs();
    let turn = n.max((-a).ceil());
    f(n).max(f(turn)).max(1.0)
}

/// Bound r_n ≥ sup_{k≥n} |t_{k+1}/t_k| from a pairing of sorted parameters.
fn ratio_bound(upper: &[f64], lower: &[f64], xabs: f64, n: usize) -> f64 {
    let nf = n as f64;
    if lower.iter().any(|b| nf + b <= 0.0) {
        return f64::INFINITY;
    }
    let mut r = xabs;
    for (i, b) in lower.iter().enumerate() {
        match upper.get(i) {
            Some(a) => r *= ratio_sup(*a, *b, nf),
            None => r /= nf + b,
        }
    }
    for a in upper.iter().skip(lower.len()) {
        // more upper than lower parameters only happens for x = 0
        r *= (nf + a).abs().max(1.0);
    }
    r
}

fn sorted_f64(v: &[Rational]) -> Vec<f64> {
    let mut out: Vec<f64> = v.iter().map(|q| q.to_f64()).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Term sequence t_n of the pFq series (lower list includes the n! factor).
struct Terms {
    upper: Vec<Float>,
    lower: Vec<Float>,
    x: Complex,
    current: Complex,
}

impl Terms {
    fn new(spec: &PfqSpec, prec: u32) -> Self {
        let upper = spec.upper.iter().map(|q| Float::with_val(prec, q)).collect();
        let mut lower: Vec<Float> = spec.lower.iter().map(|q| Float::with_val(prec, q)).collect();
        lower.push(Float::with_val(prec, 1));
        Terms { upper, lower, x: Complex::with_val(prec, &spec.x), current: Complex::with_val(prec, 1) }
    }

    /// Returns t_n and advances to t_{n+1}.
    fn step(&mut self, n: usize) -> Complex {
        let out = self.current.clone();
        let prec = self.x.prec().0;
        let mut f = Float::with_val(prec, 1);
        for a in &self.upper {
            f *= Float::with_val(prec, a + n as u32);
        }
        for b in &self.lower {
            f /= Float::with_val(prec, b + n as u32);
        }
        self.current *= &f;
        self.current *= &self.x;
        out
    }
}

/// Generalized hypergeometric series pFq(upper; lower; x).
pub fn pfq(spec: &PfqSpec, ctx: &PrecisionContext) -> Result<Complex> {
    if let Some(b) = spec.lower.iter().find(|b| is_nonpositive_integer(b)) {
        return Err(Error::PoleAtNonpositiveInteger(format!("lower parameter {b}")));
    }
    let prec = ctx.prec();
    let (p, q) = spec.order();
    let terminating = spec.upper.iter().any(is_nonpositive_integer);
    if spec.x.is_zero() {
        return Ok(Complex::with_val(prec, 1));
    }
    let xabs = Float::with_val(prec, spec.x.abs_ref());
    let one_gap = Float::with_val(prec, &xabs - 1u32).abs();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));
    let on_circle = one_gap <= eps;
    if !terminating {
        if p > q + 1 {
            return Err(Error::DivergentArgument(format!("{p}F{q} at x ≠ 0")));
        }
        if p == q + 1 && xabs > 1u32 && !on_circle {
            return Err(Error::DivergentArgument(format!("|x| = {} > 1", xabs.to_f64())));
        }
        if p == q + 1 && on_circle {
            if spec.excess() <= 0 {
                return Err(Error::NonConvergentBoundary(format!(
                    "parameter excess {} ≤ 0",
                    spec.excess()
                )));
            }
            return boundary_sum(spec, ctx);
        }
    }
    let up = sorted_f64(&spec.upper);
    let mut lo = sorted_f64(&spec.lower);
    lo.push(1.0);
    lo.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let xf = xabs.to_f64();
    let mut terms = Terms::new(spec, prec);
    let zero_at = if terminating {
        spec.upper
            .iter()
            .filter(|a| is_nonpositive_integer(a))
            .map(|a| (-a.numer().to_i64().unwrap()) as usize)
            .min()
    } else {
        None
    };
    let sum = sum_series(ctx, |n| {
        let value = terms.step(n);
        let tail = match zero_at {
            Some(z) if n >= z => TailBound::Absolute(0.0),
            _ => {
                let r = ratio_bound(&up, &lo, xf, n);
                if r < 1.0 {
                    TailBound::Geometric(r)
                } else {
                    TailBound::Unknown
                }
            }
        };
        Term { value, tail }
    })?;
    Ok(sum.value)
}

/// Summation on |x| = 1 with positive excess.
///
/// The remainder Σ_{n≥N} t_n = t_N·φ(N) is obtained from the functional
/// equation φ(N) = 1 + R(N)φ(N+1), R the term ratio, solved as an
/// asymptotic series in h = 1/N (leading power h^{-1} when x = 1).
fn boundary_sum(spec: &PfqSpec, ctx: &PrecisionContext) -> Result<Complex> {
    let mut n_split = (0.25 * ctx.prec() as f64).ceil() as usize + 10;
    while n_split <= ctx.max_terms() {
        if let Some(v) = boundary_attempt(spec, ctx, n_split)? {
            return Ok(v);
        }
        n_split *= 2;
    }
    Err(Error::NonConvergent { terms: ctx.max_terms() })
}

fn boundary_attempt(spec: &PfqSpec, ctx: &PrecisionContext, n_split: usize) -> Result<Option<Complex>> {
    let prec = ctx.prec() + 32;
    let x = Complex::with_val(prec, &spec.x);
    let x_is_one = {
        let d = Complex::with_val(prec, &x - 1u32);
        abs_bound(&d) < 2f64.powi(-(ctx.prec() as i32) + 16)
    };
    // direct part
    let mut terms = Terms::new(spec, prec);
    let mut head = Complex::with_val(prec, 0);
    let mut max_mag = 0f64;
    for n in 0..n_split {
        let t = terms.step(n);
        max_mag = max_mag.max(abs_bound(&t));
        head += t;
    }
    let t_n = terms.current.clone();

    // ρ(h) = Π(1 + a h) / Π(1 + b h), lower including 1
    let kmax = 4 * n_split.min(200) + 8;
    let mut rho = vec![Float::with_val(prec, 0); kmax + 2];
    rho[0] = Float::with_val(prec, 1);
    let mut lower: Vec<Rational> = spec.lower.clone();
    lower.push(Rational::from(1));
    for a in &spec.upper {
        let af = Float::with_val(prec, a);
        for k in (1..rho.len()).rev() {
            let add = Float::with_val(prec, &rho[k - 1] * &af);
            rho[k] += add;
        }
    }
    for b in &lower {
        let mb = -Float::with_val(prec, b);
        // multiply by 1/(1 + b h) = Σ (−b h)^k
        for k in 1..rho.len() {
            let add = Float::with_val(prec, &rho[k - 1] * &mb);
            rho[k] += add;
        }
    }
    let e: i64 = if x_is_one { 1 } else { 0 };
    // w_{j,k} = Σ_i ρ_i binom(e − j, k − i)
    let binom_row = |j: usize, len: usize| -> Vec<Float> {
        let c = Float::with_val(prec, e - j as i64);
        let mut row = Vec::with_capacity(len);
        let mut v = Float::with_val(prec, 1);
        for k in 0..len {
            row.push(v.clone());
            let num = Float::with_val(prec, &c - k as u32);
            v = v * num / (k as u32 + 1);
        }
        row
    };
    let u_entry = |k: usize, binom: &Vec<Float>| -> Complex {
        let mut w = Float::with_val(prec, 0);
        for i in 0..=k {
            w += Float::with_val(prec, &rho[i] * &binom[k - i]);
        }
        let mut u = -Complex::with_val(prec, &x * w);
        if k == 0 {
            u += 1u32;
        }
        u
    };
    let h = Float::with_val(prec, n_split).recip();
    let mut d: Vec<Complex> = Vec::new();
    let mut binoms: Vec<Vec<Float>> = Vec::new();
    let mut phi = Complex::with_val(prec, 0);
    let mut hpow = Float::with_val(prec, if e == 1 { n_split } else { 1 });
    let tn_mag = abs_bound(&t_n).max(f64::MIN_POSITIVE);
    let target = ctx.tol() / 10.0;
    let mut prev_mag = f64::INFINITY;
    let offset = e as usize;
    for m in 0..kmax {
        binoms.push(binom_row(m, kmax + 2));
        let mut rhs = Complex::with_val(prec, if m == 0 { 1 } else { 0 });
        for j in 0..m {
            let u = u_entry(m + offset - j, &binoms[j]);
            rhs -= Complex::with_val(prec, &d[j] * &u);
        }
        let diag = u_entry(offset, &binoms[m]);
        let dm = Complex::with_val(prec, &rhs / &diag);
        let contrib = Complex::with_val(prec, &dm * &hpow);
        let mag = abs_bound(&contrib);
        d.push(dm);
        hpow *= &h;
        if mag * tn_mag < target && m > 2 {
            phi += contrib;
            crate::numerics::check_rounding(ctx, max_mag, n_split)?;
            let total = head + Complex::with_val(prec, &t_n * &phi);
            return Ok(Some(Complex::with_val(ctx.prec(), total)));
        }
        if mag > prev_mag && m > 4 {
            // asymptotic series started to diverge before reaching the target
            return Ok(None);
        }
        prev_mag = mag;
        phi += contrib;
    }
    Ok(None)
}

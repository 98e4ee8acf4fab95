use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{abs_bound, sum_series, PrecisionContext, TailBound, Term};

/// The double series
/// Σ (a)_{m+n} (b1)_m (b2)_m (b′)_n / ((c)_{m+n} (d)_m m! n!) x^m y^n.
#[derive(Clone, Debug)]
pub struct KdfSpec {
    pub a: Rational,
    pub c: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub d: Rational,
    pub bp: Rational,
    pub x: Complex,
    pub y: Complex,
}

impl KdfSpec {
    pub fn new(params: [Rational; 6], x: Complex, y: Complex) -> Self {
        let [a, c, b1, b2, d, bp] = params;
        KdfSpec { a, c, b1, b2, d, bp, x, y }
    }

    /// The three parameter excesses governing absolute convergence on the
    /// boundary.
    pub fn excesses(&self) -> [Rational; 3] {
        let e1 = Rational::from(&self.c + &self.d) - &self.a - &self.b1 - &self.b2;
        let e2 = Rational::from(&self.c - &self.a) - &self.bp;
        let e3 = Rational::from(&e1 - &self.bp);
        [e1, e2, e3]
    }
}

fn is_nonpositive_integer(q: &Rational) -> bool {
    *q.denom() == 1 && *q.numer() <= 0
}

/// True iff all three boundary excesses are positive.
pub fn kdf_converges(spec: &KdfSpec) -> bool {
    spec.excesses().iter().all(|e| *e > 0)
}

/// sup over m ≥ 0 of |m + p| / |m + q| (q not a nonpositive integer).
fn factor_sup(p: f64, q: f64) -> f64 {
    let f = |m: f64| ((m + p) / (m + q)).abs();
    let start = 0f64.max((-p).ceil()).max((-q).floor() + 1.0);
    let mut best = f(start).max(1.0);
    let mut m = 0.0;
    while m < start {
        best = best.max(f(m));
        m += 1.0;
    }
    best
}

/// Bound on every ratio T(m+1,n)/T(m,n) and T(m,n+1)/T(m,n) for terms on
/// diagonals m + n ≥ k.
fn diagonal_ratio(spec: &KdfSpec, xabs: f64, yabs: f64, k: usize) -> f64 {
    let kf = k as f64;
    let a = spec.a.to_f64();
    let c = spec.c.to_f64();
    if kf + c <= 0.0 {
        return f64::INFINITY;
    }
    let f = |j: f64| ((j + a) / (j + c)).abs();
    let alpha = f(kf).max(f(kf.max((-a).ceil()))).max(1.0);
    let mut lower = [spec.d.to_f64(), 1.0];
    let mut upper = [spec.b1.to_f64(), spec.b2.to_f64()];
    lower.sort_by(|u, v| u.partial_cmp(v).unwrap());
    upper.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let beta = factor_sup(upper[0], lower[0]) * factor_sup(upper[1], lower[1]);
    let gamma = factor_sup(spec.bp.to_f64(), 1.0);
    alpha * (xabs * beta).max(yabs * gamma)
}

/// Kampé de Fériet series summed along anti-diagonals m + n = k.
pub fn kdf(spec: &KdfSpec, ctx: &PrecisionContext) -> Result<Complex> {
    if is_nonpositive_integer(&spec.c) || is_nonpositive_integer(&spec.d) {
        return Err(Error::PoleAtNonpositiveInteger("lower parameter c or d".into()));
    }
    let prec = ctx.prec();
    let xabs = Float::with_val(prec, spec.x.abs_ref()).to_f64();
    let yabs = Float::with_val(prec, spec.y.abs_ref()).to_f64();
    let boundary = xabs >= 1.0 || yabs >= 1.0;
    if boundary && !kdf_converges(spec) {
        return Err(Error::NonConvergentBoundary(format!(
            "excesses {:?} at |x| = {xabs}, |y| = {yabs}",
            spec.excesses().iter().map(|e| e.to_string()).collect::<Vec<_>>()
        )));
    }
    if xabs > 1.0 || yabs > 1.0 {
        return Err(Error::DivergentArgument(format!("|x| = {xabs}, |y| = {yabs}")));
    }
    let a = Float::with_val(prec, &spec.a);
    let c = Float::with_val(prec, &spec.c);
    let b1 = Float::with_val(prec, &spec.b1);
    let b2 = Float::with_val(prec, &spec.b2);
    let d = Float::with_val(prec, &spec.d);
    let bp = Float::with_val(prec, &spec.bp);
    let x = &spec.x;
    let y = &spec.y;
    // row[m] = T(m, k − m)
    let mut row: Vec<Complex> = vec![Complex::with_val(prec, 1)];
    let mut stalled = false;
    let sum = sum_series(ctx, |k| {
        if k > 0 {
            let km = (k - 1) as u32;
            let joint = Float::with_val(prec, &a + km) / Float::with_val(prec, &c + km);
            let last = row.last().unwrap().clone();
            for (m, t) in row.iter_mut().enumerate() {
                let n = km - m as u32;
                let f = Float::with_val(prec, &bp + n) / (n + 1) * &joint;
                *t *= f;
                *t *= y;
            }
            let m = km;
            let f = Float::with_val(prec, &b1 + m) * Float::with_val(prec, &b2 + m)
                / Float::with_val(prec, &d + m)
                / (m + 1)
                * &joint;
            let mut t = last * f;
            t *= x;
            row.push(t);
        }
        let mut diag = Complex::with_val(prec, 0);
        let mut mk = 0f64;
        for t in &row {
            diag += t;
            mk = mk.max(abs_bound(t));
        }
        let tail = if mk == 0.0 {
            // every later diagonal is built from this one
            TailBound::Absolute(0.0)
        } else {
            let r = diagonal_ratio(spec, xabs, yabs, k);
            if r < 1.0 {
                let kk = k as f64 + 1.0;
                TailBound::Absolute(mk * (kk * r / (1.0 - r) + r / ((1.0 - r) * (1.0 - r))))
            } else {
                stalled = boundary;
                TailBound::Unknown
            }
        };
        Term { value: diag, tail }
    });
    match sum {
        Ok(s) => Ok(s.value),
        Err(Error::NonConvergent { .. }) if stalled => Err(Error::NonConvergentBoundary(
            "boundary summation is only certified for terminating double series".into(),
        )),
        Err(e) => Err(e),
    }
}

/// Olsson's F_P(a, b; x) = kdf(a; a+1; a, a; b; 1 | x, x).
pub fn olsson_fp(a: &Rational, b: &Rational, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let spec = KdfSpec::new(
        [a.clone(), Rational::from(a + 1u32), a.clone(), a.clone(), b.clone(), Rational::from(1)],
        x.clone(),
        x.clone(),
    );
    kdf(&spec, ctx)
}

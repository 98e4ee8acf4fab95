use rug::Complex;

use super::{abs_bound, PrecisionContext};
use crate::error::{Error, Result};

/// Certificate for the remainder after a term.
#[derive(Clone, Debug)]
pub enum TailBound {
    /// |t_{k+1}| ≤ r |t_k| for every later k, with r < 1.
    Geometric(f64),
    /// The remainder Σ_{k>n} |t_k| is at most this value.
    Absolute(f64),
    /// No bound is available yet.
    Unknown,
}

/// One summand together with a bound on what follows it.
#[derive(Clone, Debug)]
pub struct Term {
    pub value: Complex,
    pub tail: TailBound,
}

/// Result of [`sum_series`].
#[derive(Clone, Debug)]
pub struct SeriesSum {
    pub value: Complex,
    pub terms: usize,
    /// Certified bound on the discarded remainder.
    pub tail: f64,
}

/// Sums t_0 + t_1 + … produced by `next`.
///
/// Stops once three consecutive terms are below tol/10 and the tail
/// certificate of the last term is below tol/10.
pub fn sum_series<F>(ctx: &PrecisionContext, mut next: F) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Term,
{
    let prec = ctx.prec();
    let target = ctx.tol() / 10.0;
    let mut sum = Complex::with_val(prec, 0);
    let mut small_run = 0usize;
    let mut max_mag = 0f64;
    for n in 0..ctx.max_terms() {
        let Term { value, tail } = next(n);
        let mag = abs_bound(&value);
        max_mag = max_mag.max(mag);
        sum += &value;
        if mag < target {
            small_run += 1;
        } else {
            small_run = 0;
        }
        let bound = match tail {
            TailBound::Geometric(r) if r < 1.0 => mag * r / (1.0 - r),
            TailBound::Absolute(b) => b,
            _ => f64::INFINITY,
        };
        if small_run >= 3 && bound < target {
            check_rounding(ctx, max_mag, n + 1)?;
            return Ok(SeriesSum { value: sum, terms: n + 1, tail: bound });
        }
    }
    Err(Error::NonConvergent { terms: ctx.max_terms() })
}

/// Rejects sums whose accumulated rounding error can exceed the tolerance.
pub(crate) fn check_rounding(ctx: &PrecisionContext, max_mag: f64, terms: usize) -> Result<()> {
    if max_mag == 0.0 {
        return Ok(());
    }
    let err_log2 = max_mag.log2() + (terms as f64).log2() + 2.0 - ctx.prec() as f64;
    if err_log2 > ctx.tol_log2() {
        return Err(Error::PrecisionExhausted(format!(
            "largest term 2^{:.0} over {terms} terms at {} bits",
            max_mag.log2(),
            ctx.prec()
        )));
    }
    Ok(())
}

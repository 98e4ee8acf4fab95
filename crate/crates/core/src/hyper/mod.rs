//! Generalized hypergeometric pFq and the Kampé de Fériet double series
//! F^{1;2;1}_{1;1;0}.

mod kdf;
mod pfq;

pub use kdf::{kdf, kdf_converges, olsson_fp, KdfSpec};
pub use pfq::{pfq, PfqSpec};

use rug::{Complex, Rational};

use crate::error::Result;
use crate::numerics::PrecisionContext;

/// Shorthand for a rational literal n/d.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// pFq with parameters given as (num, den) pairs.
pub fn pfq_q(upper: &[(i64, i64)], lower: &[(i64, i64)], x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let up: Vec<Rational> = upper.iter().map(|&(n, d)| q(n, d)).collect();
    let lo: Vec<Rational> = lower.iter().map(|&(n, d)| q(n, d)).collect();
    pfq(&PfqSpec::new(&up, &lo, x.clone()), ctx)
}

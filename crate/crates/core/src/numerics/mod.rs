//! Precision policy, series summation and special constants at rational
//! arguments.

mod gamma;
mod rational;
mod series;

pub use gamma::{bernoulli_number, beta, beta_sym, digamma_rational, gamma_rational, ln_gamma};
pub use rational::{bernoulli3, pochhammer_rational, rational_reconstruct, rational_reconstruct_tol};
pub use series::{sum_series, SeriesSum, TailBound, Term};
pub(crate) use series::check_rounding;

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

/// Bits carried beyond the requested decimal digits.
pub const GUARD_BITS: u32 = 64;

/// Working precision, target absolute error and truncation guard.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionContext {
    digits: u32,
    tol: f64,
    max_terms: usize,
}

impl PrecisionContext {
    pub fn new(digits: u32, tol: f64, max_terms: usize) -> Result<Self> {
        if digits < 15 {
            return Err(Error::InvalidContext(format!("digits = {digits} < 15")));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidContext(format!("tol = {tol} is not positive")));
        }
        if tol.log10() < -(digits as f64) + 5.0 - 1e-9 {
            return Err(Error::InvalidContext(format!(
                "tol = {tol:e} is below 10^-(digits-5) for digits = {digits}"
            )));
        }
        if max_terms < 10 {
            return Err(Error::InvalidContext(format!("max_terms = {max_terms} < 10")));
        }
        Ok(PrecisionContext { digits, tol, max_terms })
    }

    /// Context with tolerance 10^-(digits-5) and the default term budget.
    pub fn with_digits(digits: u32) -> Result<Self> {
        Self::new(digits, 10f64.powi(-(digits as i32 - 5)), 400_000)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms < 10 {
            return Err(Error::InvalidContext(format!("max_terms = {max_terms} < 10")));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    /// Same tolerance policy at twice the digits.
    pub fn doubled(&self) -> Self {
        let digits = self.digits * 2;
        let tol = 10f64.powi(-(digits as i32 - 5)).max(f64::MIN_POSITIVE);
        PrecisionContext { digits, tol, max_terms: self.max_terms }
    }

    /// Binary precision of intermediate values.
    pub fn prec(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// log2 of the tolerance.
    pub fn tol_log2(&self) -> f64 {
        self.tol.log2()
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.prec(), v)
    }

    pub fn from_rational(&self, q: &Rational) -> Float {
        Float::with_val(self.prec(), q)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), Constant::Pi)
    }

    pub fn euler_gamma(&self) -> Float {
        Float::with_val(self.prec(), Constant::Euler)
    }

    /// ζ = e^{2πi/3}.
    pub fn zeta3(&self) -> Complex {
        let s3 = Float::with_val(self.prec(), 3).sqrt() / 2u32;
        Complex::with_val(self.prec(), (Float::with_val(self.prec(), -0.5), s3))
    }

    /// ζ^k for k modulo 3.
    pub fn zeta3_pow(&self, k: i64) -> Complex {
        match k.rem_euclid(3) {
            0 => self.complex(1),
            1 => self.zeta3(),
            _ => self.zeta3().conj(),
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::with_digits(40).expect("default context is valid")
    }
}

/// |z| as an f64 upper bound (|re| + |im|), adequate for tail estimates.
pub fn abs_bound(z: &Complex) -> f64 {
    z.real().to_f64().abs() + z.imag().to_f64().abs()
}

/// |z| as an f64.
pub fn abs_f64(z: &Complex) -> f64 {
    z.real().to_f64().hypot(z.imag().to_f64())
}

/// Absolute difference of two complex numbers as an f64.
pub fn dist(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0, a - b);
    abs_f64(&d)
}

/// Round a float to a decimal string with `digits` significant digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

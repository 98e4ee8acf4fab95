//! Exact arithmetic on the Hesse cubic x³ + y³ + z³ = 3t·xyz: points, group
//! law, 3-torsion, symbols in K₂, tame symbols and the Bloch map.

mod field;
mod point;
mod symbol;
mod weierstrass;

pub use field::{Field, PrimeField, QZeta, QZetaField};
#[allow(unused_imports)]
pub(crate) use field::{is_prime_u64, pow_mod};
pub use point::{HesseCurve, HessePoint};
pub use symbol::{
    bloch_beta, bloch_beta_of_divisors, bloch_beta_raw, divisor, reduce_mod_inverses, tame_symbol_check, tame_symbols, LinearForm,
    MotivicSymbol, RatFn, SymbolName, SymbolTerm, TorsionDivisor,
};
pub use weierstrass::{discriminant, weierstrass_model};

use rug::Rational;

/// t as an element of ℚ(ζ₃).
pub fn qz(t: &Rational) -> QZeta {
    QZeta::rational(t.clone())
}

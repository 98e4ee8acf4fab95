use rug::Rational;

use crate::error::{Error, Result};

/// Short Weierstrass model y² = x³ + a4·x + a6 of X_t:
/// a4 = −27t(t³ + 8), a6 = 54(t⁶ − 20t³ − 8).
pub fn weierstrass_model(t: &Rational) -> Result<(Rational, Rational)> {
    let t3 = t.clone() * t * t ;
    if t3 == 1 {
        return Err(Error::SingularParameter(format!("t = {t} (t³ = 1)")));
    }
    let a4 = (-27 * t.clone()) * Rational::from(&t3 + 8u32);
    let t6 = Rational::from(&t3 * &t3);
    let a6 = 54 * (t6 - (20 * t3) - 8u32);
    Ok((a4, a6))
}

/// Discriminant −16(4a4³ + 27a6²).
pub fn discriminant(a4: &Rational, a6: &Rational) -> Rational {
    let a43 = Rational::from(a4 * a4) * a4;
    let a62 = Rational::from(a6 * a6);
    -16 * (4 * a43 + 27 * a62)
}

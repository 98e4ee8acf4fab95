use rug::{Float, Integer, Rational};

/// Third Bernoulli polynomial x³ − (3/2)x² + (1/2)x.
pub fn bernoulli3(x: &Rational) -> Rational {
    let x2 = Rational::from(x * x);
    let x3 = Rational::from(&x2 * x);
    x3 - x2 * Rational::from((3, 2)) + (x * Rational::from((1, 2)))
}

/// Rising factorial (a)_n in exact arithmetic.
pub fn pochhammer_rational(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for k in 0..n {
        acc *= Rational::from(a + k);
    }
    acc
}

/// Continued-fraction convergents p/q of x with q ≤ max_den.
fn convergents(x: &Float, max_den: u64) -> Vec<Rational> {
    let Some(exact) = x.to_rational() else { return Vec::new() };
    let max_den = Integer::from(max_den);
    let (mut p0, mut q0) = (Integer::from(0), Integer::from(1));
    let (mut p1, mut q1) = (Integer::from(1), Integer::from(0));
    let mut r = exact;
    let mut out = Vec::new();
    loop {
        let a = r.clone().floor();
        let a = a.numer().clone();
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > max_den {
            break;
        }
        out.push(Rational::from((p2.clone(), q2.clone())));
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = r - Rational::from(a);
        if frac == 0 {
            break;
        }
        r = frac.recip();
    }
    out
}

fn distance(x: &Float, c: &Rational) -> Float {
    Float::with_val(x.prec(), x - c).abs()
}

/// The unique p/q with q ≤ max_den and |x − p/q| < 1/(2·max_den·q).
///
/// Such a fraction satisfies |x − p/q| < 1/(2q²), so it is a convergent of
/// x; only convergents are examined.
pub fn rational_reconstruct(x: &Float, max_den: u64) -> Option<Rational> {
    if max_den == 0 {
        return None;
    }
    let hits: Vec<Rational> = convergents(x, max_den)
        .into_iter()
        .filter(|c| {
            let window = Float::with_val(x.prec(), 1) / (Integer::from(c.denom() * 2u32) * max_den);
            distance(x, c) < window
        })
        .collect();
    match hits.len() {
        1 => hits.into_iter().next(),
        _ => None,
    }
}

/// [`rational_reconstruct`] with the additional requirement
/// |x − p/q| < 10·tol·q matching the accuracy of x.
pub fn rational_reconstruct_tol(x: &Float, max_den: u64, tol: f64) -> Option<Rational> {
    let c = rational_reconstruct(x, max_den)?;
    let q = c.denom().to_f64();
    if distance(x, &c).to_f64() < 10.0 * tol * q {
        Some(c)
    } else {
        None
    }
}

use std::fmt;

use rug::Integer;

use super::model::{ipow, modulo, valuation, Model};
use crate::error::{Error, Result};

/// Reduction type of a minimal model at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl Reduction {
    /// a_p at a bad prime.
    pub fn bad_ap(self) -> i64 {
        match self {
            Reduction::SplitMultiplicative => 1,
            Reduction::NonsplitMultiplicative => -1,
            _ => 0,
        }
    }
}

/// Kodaira symbol of the special fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IIStar => write!(f, "II*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IVStar => write!(f, "IV*"),
        }
    }
}

/// Output of Tate's algorithm at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub p: Integer,
    pub kodaira: Kodaira,
    pub reduction: Reduction,
    /// Exponent of p in the conductor.
    pub conductor_exponent: u32,
    /// v_p of the minimal discriminant.
    pub disc_valuation: u32,
}

fn md(x: &Integer, m: &Integer) -> Integer {
    modulo(x, m)
}

fn divisible(x: &Integer, p: &Integer, k: u32) -> bool {
    valuation(x, p) >= k
}

fn exact_div(x: &Integer, p: &Integer, k: u32) -> Integer {
    x / ipow(p, k) 
}

fn inverse(x: &Integer, p: &Integer) -> Result<Integer> {
    md(x, p)
        .invert(p)
        .map_err(|_| Error::InvalidInput(format!("{x} is not invertible mod {p}")))
}

/// Root of y² + a·y − b of multiplicity two mod p, when it exists.
fn quad_y_double_root(a: &Integer, b: &Integer, p: &Integer) -> Result<Option<Integer>> {
    if *p == 2 {
        if md(a, p) != 0 {
            return Ok(None);
        }
        return Ok(Some(md(b, p)));
    }
    let disc = Integer::from(a.square_ref()) + Integer::from(b * 4u32);
    if md(&disc, p) != 0 {
        return Ok(None);
    }
    let half = inverse(&Integer::from(2), p)?;
    Ok(Some(md(&(-Integer::from(a * &half)), p)))
}

/// Root of a·x² + b·x + c (p ∤ a) of multiplicity two mod p, when it exists.
fn quad_x_double_root(a: &Integer, b: &Integer, c: &Integer, p: &Integer) -> Result<Option<Integer>> {
    if *p == 2 {
        if md(b, p) != 0 {
            return Ok(None);
        }
        return Ok(Some(md(&Integer::from(c * a), p)));
    }
    let disc = Integer::from(b.square_ref()) - Integer::from(a * c) * 4u32;
    if md(&disc, p) != 0 {
        return Ok(None);
    }
    let inv = inverse(&Integer::from(a * 2u32), p)?;
    Ok(Some(md(&(-Integer::from(b * &inv)), p)))
}

fn cubic_disc(a: &Integer, b: &Integer, c: &Integer) -> Integer {
    let a2 = Integer::from(a.square_ref());
    let b2 = Integer::from(b.square_ref());
    let t1 = Integer::from(&a2 * &b2);
    let t2 = Integer::from(&b2 * b) * 4u32;
    let t3 = Integer::from(&a2 * a) * c * 4u32;
    let t4 = Integer::from(c.square_ref()) * 27u32;
    let t5 = Integer::from(a * b) * c * 18u32;
    t1 - t2 - t3 - t4 + t5
}

/// Multiplicity of α as a root of T³ + aT² + bT + c mod p.
fn multiplicity(coeffs: [&Integer; 3], alpha: &Integer, p: &Integer) -> u32 {
    let mut poly: Vec<Integer> = vec![Integer::from(1), coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone()];
    let mut m = 0;
    while poly.len() > 1 {
        // synthetic division by T − α
        let mut q = Vec::with_capacity(poly.len() - 1);
        let mut acc = Integer::new();
        for c in &poly {
            acc = md(&(Integer::from(&acc * alpha) + c), p);
            q.push(acc.clone());
        }
        let rem = q.pop().unwrap();
        if rem != 0 {
            break;
        }
        m += 1;
        poly = q;
    }
    m
}

/// A root of multiplicity ≥ 2 of T³ + aT² + bT + c mod p, with its
/// multiplicity; requires vanishing discriminant mod p.
fn cubic_multiple_root(a: &Integer, b: &Integer, c: &Integer, p: &Integer) -> Result<(Integer, u32)> {
    if *p <= 3 {
        let pu = p.to_u32().unwrap();
        for x in 0..pu {
            let alpha = Integer::from(x);
            let m = multiplicity([a, b, c], &alpha, p);
            if m >= 2 {
                return Ok((alpha, m));
            }
        }
        return Err(Error::InvalidInput(format!("no multiple root mod {p}")));
    }
    // T = S − a/3 gives S³ + P·S + Q
    let inv3 = inverse(&Integer::from(3), p)?;
    let shift = md(&Integer::from(a * &inv3), p);
    let pp = md(&(b - Integer::from(a * &shift)), p);
    let a3 = Integer::from(a.square_ref()) * a;
    let inv27 = inverse(&Integer::from(27), p)?;
    let qq = md(&(a3 * 2u32 * inv27 - Integer::from(a * b) * &inv3 + c), p);
    if pp == 0 {
        return Ok((md(&(-shift), p), 3));
    }
    let s = md(&(-(qq * 3u32) * inverse(&Integer::from(&pp * 2u32), p)?), p);
    Ok((md(&(s - shift), p), 2))
}

/// A singular point of the reduction mod p (p | Δ).
fn singular_point(m: &Model, p: &Integer) -> Result<(Integer, Integer)> {
    let [a1, a2, a3, a4, a6] = &m.a;
    if *p <= 3 {
        let pu = p.to_u32().unwrap();
        for x in 0..pu {
            for y in 0..pu {
                let (x, y) = (Integer::from(x), Integer::from(y));
                let x2 = Integer::from(x.square_ref());
                let f = Integer::from(y.square_ref()) + Integer::from(a1 * &x) * &y + Integer::from(a3 * &y)
                    - Integer::from(&x2 * &x)
                    - Integer::from(a2 * &x2)
                    - Integer::from(a4 * &x)
                    - a6;
                let fx = Integer::from(a1 * &y) - Integer::from(&x2 * 3u32) - Integer::from(a2 * &x) * 2u32 - a4;
                let fy = Integer::from(&y * 2u32) + Integer::from(a1 * &x) + a3;
                if md(&f, p) == 0 && md(&fx, p) == 0 && md(&fy, p) == 0 {
                    return Ok((x, y));
                }
            }
        }
        return Err(Error::InvalidInput(format!("no singular point mod {p}")));
    }
    // (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
    let inv4 = inverse(&Integer::from(4), p)?;
    let inv2 = inverse(&Integer::from(2), p)?;
    let ca = md(&(m.b2() * &inv4), p);
    let cb = md(&(m.b4() * &inv2), p);
    let cc = md(&(m.b6() * &inv4), p);
    let (x0, _) = cubic_multiple_root(&ca, &cb, &cc, p)?;
    let y0 = md(&(-(Integer::from(a1 * &x0) + a3) * inv2), p);
    Ok((x0, y0))
}

/// Tate's algorithm at p: a model minimal at p (integral everywhere) and
/// the local data.
pub fn tate(model: &Model, p: &Integer) -> Result<(Model, LocalData)> {
    let zero = Integer::new();
    let mut m = model.clone();
    loop {
        let disc = m.discriminant();
        if disc == 0 {
            return Err(Error::SingularCurve);
        }
        let n = valuation(&disc, p);
        let done = |m: Model, kodaira: Kodaira, reduction: Reduction, f: u32| {
            let data = LocalData { p: p.clone(), kodaira, reduction, conductor_exponent: f, disc_valuation: n };
            Ok((m, data))
        };
        if n == 0 {
            return done(m, Kodaira::I(0), Reduction::Good, 0);
        }
        let (x0, y0) = singular_point(&m, p)?;
        m = m.transform(&x0, &zero, &y0);
        if !m.b2().is_divisible(p) {
            // tangent cone T² + a1T − a2 splits over 𝔽_p
            let split = if *p == 2 { m.a[1].is_even() } else { m.b2().legendre(p) == 1 };
            let red = if split { Reduction::SplitMultiplicative } else { Reduction::NonsplitMultiplicative };
            return done(m, Kodaira::I(n), red, 1);
        }
        if !divisible(&m.a[4], p, 2) {
            return done(m, Kodaira::II, Reduction::Additive, n);
        }
        if !divisible(&m.b8(), p, 3) {
            return done(m, Kodaira::III, Reduction::Additive, n - 1);
        }
        if !divisible(&m.b6(), p, 3) {
            return done(m, Kodaira::IV, Reduction::Additive, n - 2);
        }
        let (s, t) = if *p == 2 {
            let s = md(&m.a[1], p);
            let t = md(&exact_div(&m.a[4], p, 2), p) * 2u32;
            (s, t)
        } else {
            let inv2 = inverse(&Integer::from(2), p)?;
            let p2 = Integer::from(p.square_ref());
            let s = md(&(-Integer::from(&m.a[0] * &inv2)), p);
            let inv2sq = inverse(&Integer::from(2), &p2)?;
            let t = md(&(-Integer::from(&m.a[2] * &inv2sq)), &p2);
            (s, t)
        };
        m = m.transform(&zero, &s, &t);
        let ok = divisible(&m.a[0], p, 1)
            && divisible(&m.a[1], p, 1)
            && divisible(&m.a[2], p, 2)
            && divisible(&m.a[3], p, 2)
            && divisible(&m.a[4], p, 3);
        if !ok {
            return Err(Error::InvalidInput(format!("Tate normalization failed at {p} for {m}")));
        }
        let ca = exact_div(&m.a[1], p, 1);
        let cb = exact_div(&m.a[3], p, 2);
        let cc = exact_div(&m.a[4], p, 3);
        if md(&cubic_disc(&ca, &cb, &cc), p) != 0 {
            return done(m, Kodaira::IStar(0), Reduction::Additive, n - 4);
        }
        let (alpha, mult) = cubic_multiple_root(&ca, &cb, &cc, p)?;
        m = m.transform(&Integer::from(&alpha * p), &zero, &zero);
        if mult == 2 {
            let mut k = 1u32;
            let mut mx = Integer::from(p.square_ref());
            let mut my = mx.clone();
            loop {
                let xa3 = Integer::from(&m.a[2] / &my);
                let xa6 = &m.a[4] / Integer::from(&mx * &my) ;
                match quad_y_double_root(&xa3, &xa6, p)? {
                    None => return done(m, Kodaira::IStar(k), Reduction::Additive, n - k - 4),
                    Some(root) => {
                        let t = Integer::from(&my * &root);
                        m = m.transform(&zero, &zero, &t);
                        my *= p;
                        k += 1;
                    }
                }
                let xa2 = exact_div(&m.a[1], p, 1);
                let xa4 = &m.a[3] / Integer::from(p * &mx) ;
                let xa6 = &m.a[4] / Integer::from(&mx * &my) ;
                match quad_x_double_root(&xa2, &xa4, &xa6, p)? {
                    None => return done(m, Kodaira::IStar(k), Reduction::Additive, n - k - 4),
                    Some(root) => {
                        let r = Integer::from(&mx * &root);
                        m = m.transform(&r, &zero, &zero);
                        mx *= p;
                        k += 1;
                    }
                }
            }
        }
        let xa3 = exact_div(&m.a[2], p, 2);
        let xa6 = exact_div(&m.a[4], p, 4);
        match quad_y_double_root(&xa3, &xa6, p)? {
            None => return done(m, Kodaira::IVStar, Reduction::Additive, n - 6),
            Some(root) => {
                let t = Integer::from(p.square_ref()) * root;
                m = m.transform(&zero, &zero, &t);
            }
        }
        if !divisible(&m.a[3], p, 4) {
            return done(m, Kodaira::IIIStar, Reduction::Additive, n - 7);
        }
        if !divisible(&m.a[4], p, 6) {
            return done(m, Kodaira::IIStar, Reduction::Additive, n - 8);
        }
        m = m.scale_down(p);
    }
}

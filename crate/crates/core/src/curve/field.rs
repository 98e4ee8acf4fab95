use std::fmt;

use rug::Rational;

/// A field with a chosen primitive cube root of unity.
pub trait Field: Clone + fmt::Debug {
    type E: Clone + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_i64(&self, n: i64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Primitive cube root of unity ζ.
    fn zeta(&self) -> Self::E;

    fn pow(&self, a: &Self::E, mut n: u64) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn zeta_pow(&self, k: i64) -> Self::E {
        self.pow(&self.zeta(), k.rem_euclid(3) as u64)
    }
}

/// a + bζ ∈ ℚ(ζ), ζ² = −1 − ζ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QZeta {
    pub a: Rational,
    pub b: Rational,
}

impl QZeta {
    pub fn new(a: Rational, b: Rational) -> Self {
        QZeta { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QZeta { a, b: Rational::new() }
    }

    pub fn int(n: i64) -> Self {
        QZeta::rational(Rational::from(n))
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// Galois conjugate a + bζ².
    pub fn conj(&self) -> QZeta {
        QZeta { a: Rational::from(&self.a - &self.b), b: Rational::from(-&self.b) }
    }

    /// N(a + bζ) = a² − ab + b².
    pub fn norm(&self) -> Rational {
        let aa = Rational::from(&self.a * &self.a);
        let ab = Rational::from(&self.a * &self.b);
        let bb = Rational::from(&self.b * &self.b);
        aa - ab + bb
    }
}

impl fmt::Display for QZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}ζ", self.a, self.b)
        }
    }
}

/// The cyclotomic field ℚ(ζ₃).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QZetaField;

impl Field for QZetaField {
    type E = QZeta;

    fn zero(&self) -> QZeta {
        QZeta::int(0)
    }
    fn one(&self) -> QZeta {
        QZeta::int(1)
    }
    fn from_i64(&self, n: i64) -> QZeta {
        QZeta::int(n)
    }
    fn add(&self, x: &QZeta, y: &QZeta) -> QZeta {
        QZeta { a: Rational::from(&x.a + &y.a), b: Rational::from(&x.b + &y.b) }
    }
    fn sub(&self, x: &QZeta, y: &QZeta) -> QZeta {
        QZeta { a: Rational::from(&x.a - &y.a), b: Rational::from(&x.b - &y.b) }
    }
    fn mul(&self, x: &QZeta, y: &QZeta) -> QZeta {
        // (a + bζ)(c + dζ) = (ac − bd) + (ad + bc − bd)ζ
        let ac = Rational::from(&x.a * &y.a);
        let bd = Rational::from(&x.b * &y.b);
        let ad = Rational::from(&x.a * &y.b);
        let bc = Rational::from(&x.b * &y.a);
        QZeta { a: Rational::from(&ac - &bd), b: ad + bc - bd }
    }
    fn neg(&self, x: &QZeta) -> QZeta {
        QZeta { a: Rational::from(-&x.a), b: Rational::from(-&x.b) }
    }
    fn inv(&self, x: &QZeta) -> Option<QZeta> {
        let n = x.norm();
        if n == 0 {
            return None;
        }
        let c = x.conj();
        Some(QZeta { a: Rational::from(&c.a / &n), b: Rational::from(&c.b / &n) })
    }
    fn is_zero(&self, x: &QZeta) -> bool {
        x.a == 0 && x.b == 0
    }
    fn zeta(&self) -> QZeta {
        QZeta::new(Rational::new(), Rational::from(1))
    }
}

/// 𝔽_p for a prime p ≡ 1 (mod 3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeField {
    p: u64,
    zeta: u64,
}

impl PrimeField {
    /// Returns None unless p is a prime with p ≡ 1 (mod 3).
    pub fn new(p: u64) -> Option<Self> {
        if p % 3 != 1 || !is_prime_u64(p) {
            return None;
        }
        // g^((p−1)/3) ≠ 1 for some g gives a primitive cube root
        for g in 2..p {
            let z = pow_mod(g, (p - 1) / 3, p);
            if z != 1 {
                return Some(PrimeField { p, zeta: z });
            }
        }
        None
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.p)
    }
    fn zeta(&self) -> u64 {
        self.zeta
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Integral Weierstrass model y² + a1xy + a3y = x³ + a2x² + a4x + a6.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub a: [Integer; 5],
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1}, {a2}, {a3}, {a4}, {a6}]")
    }
}

impl Model {
    pub fn new(a: [Integer; 5]) -> Self {
        Model { a }
    }

    pub fn short(a4: Integer, a6: Integer) -> Self {
        Model { a: [Integer::new(), Integer::new(), Integer::new(), a4, a6] }
    }

    /// Smallest integral model u⁴a4, u⁶a6 of y² = x³ + a4x + a6.
    pub fn integral_short(a4: &Rational, a6: &Rational) -> Self {
        let mut u = Integer::from(1);
        let den = Integer::from(a4.denom() * a6.denom());
        for (p, _) in factor(&den) {
            let need = |d: &Integer, k: u32| -> u32 { valuation(d, &p).div_ceil(k) };
            let e = need(a4.denom(), 4).max(need(a6.denom(), 6));
            u *= ipow(&p, e);
        }
        let u2 = Integer::from(u.square_ref());
        let u4 = Integer::from(u2.square_ref());
        let u6 = Integer::from(&u4 * &u2);
        let b4 = Rational::from(a4 * &u4);
        let b6 = Rational::from(a6 * &u6);
        Model::short(b4.numer().clone(), b6.numer().clone())
    }

    pub fn b2(&self) -> Integer {
        let [a1, a2, ..] = &self.a;
        Integer::from(a1.square_ref()) + Integer::from(a2 * 4u32)
    }

    pub fn b4(&self) -> Integer {
        let [a1, _, a3, a4, _] = &self.a;
        Integer::from(a1 * a3) + Integer::from(a4 * 2u32)
    }

    pub fn b6(&self) -> Integer {
        let [_, _, a3, _, a6] = &self.a;
        Integer::from(a3.square_ref()) + Integer::from(a6 * 4u32)
    }

    pub fn b8(&self) -> Integer {
        let [a1, a2, a3, a4, a6] = &self.a;
        let a1s = Integer::from(a1.square_ref());
        let a3s = Integer::from(a3.square_ref());
        let t1 = a1s * a6;
        let t2 = Integer::from(a2 * a6) * 4u32;
        let t3 = Integer::from(a1 * a3) * a4;
        let t4 = Integer::from(a2 * &a3s);
        let t5 = Integer::from(a4.square_ref());
        t1 + t2 - t3 + t4 - t5
    }

    pub fn c4(&self) -> Integer {
        let b2 = self.b2();
        Integer::from(b2.square_ref()) - self.b4() * 24u32
    }

    pub fn c6(&self) -> Integer {
        let b2 = self.b2();
        let b2c = Integer::from(b2.square_ref()) * &b2;
        -b2c + b2 * self.b4() * 36u32 - self.b6() * 216u32
    }

    pub fn discriminant(&self) -> Integer {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        let t1 = -Integer::from(b2.square_ref()) * &b8;
        let t2 = Integer::from(b4.square_ref()) * &b4 * 8u32;
        let t3 = Integer::from(b6.square_ref()) * 27u32;
        let t4 = b2 * b4 * b6 * 9u32;
        t1 - t2 - t3 + t4
    }

    /// The model after x = x′ + r, y = y′ + s·x′ + t.
    pub fn transform(&self, r: &Integer, s: &Integer, t: &Integer) -> Self {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + Integer::from(s * 2u32) ;
        let n2 = (a2 - Integer::from(s * a1)) + Integer::from(r * 3u32) - Integer::from(s.square_ref());
        let n3 = (a3 + Integer::from(r * a1)) + Integer::from(t * 2u32);
        let rs = Integer::from(r * s);
        let n4 = (a4 - Integer::from(s * a3)) + Integer::from(r * a2) * 2u32
            - Integer::from(t + &rs) * a1
            + Integer::from(r.square_ref()) * 3u32
            - Integer::from(s * t) * 2u32;
        let r2 = Integer::from(r.square_ref());
        let n6 = (a6 + Integer::from(r * a4))
            + Integer::from(&r2 * a2)
            + Integer::from(&r2 * r)
            - Integer::from(t * a3)
            - Integer::from(t.square_ref())
            - Integer::from(r * t) * a1;
        Model { a: [n1, n2, n3, n4, n6] }
    }

    /// The model with a_i replaced by a_i/p^i; requires p^i | a_i.
    pub fn scale_down(&self, p: &Integer) -> Self {
        let mut out = self.clone();
        for (k, e) in [1u32, 2, 3, 4, 6].iter().enumerate() {
            out.a[k] = &self.a[k] / ipow(p, *e) ;
        }
        out
    }

    /// The equivalent model with a1, a3 ∈ {0, 1} and a2 ∈ {−1, 0, 1}.
    pub fn reduced(&self) -> Self {
        let [a1, a2, a3, ..] = &self.a;
        let a1n = Integer::from(a1.mod_u(2));
        let s = Integer::from(&a1n - a1) / 2u32;
        let a2s = (a2 - Integer::from(&s * a1)) - Integer::from(s.square_ref());
        let a2n = modulo(&Integer::from(&a2s + 1u32), &Integer::from(3)) - 1u32;
        let r = Integer::from(&a2n - &a2s) / 3u32;
        let a3r = a3 + Integer::from(&r * a1) ;
        let a3n = Integer::from(a3r.mod_u(2));
        let t = (a3n - a3r) / 2u32;
        self.transform(&r, &s, &t)
    }

    /// Number of projective points of the reduction mod p (singular point
    /// included).
    pub fn count_points(&self, p: u64) -> u64 {
        let a: Vec<u64> = self.a.iter().map(|c| c.mod_u(p as u32) as u64).collect();
        let (a1, a2, a3, a4, a6) = (a[0], a[1], a[2], a[3], a[4]);
        if p == 2 {
            let mut n = 1;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                    if lhs == rhs {
                        n += 1;
                    }
                }
            }
            return n;
        }
        let b2 = (a1 * a1 + 4 * a2) % p;
        let b4 = (a1 * a3 + 2 * a4) % p;
        let b6 = (a3 * a3 + 4 * a6) % p;
        let squares = square_table(p);
        let mut total: i64 = 0;
        for x in 0..p {
            let x2 = x * x % p;
            let g = (4 * x2 % p * x + b2 * x2 + 2 * b4 * x + b6) % p;
            total += if g == 0 {
                0
            } else if squares[g as usize] {
                1
            } else {
                -1
            };
        }
        (p as i64 + 1 + total) as u64
    }
}

/// Table of quadratic residues mod an odd prime p.
pub(crate) fn square_table(p: u64) -> Vec<bool> {
    let mut sq = vec![false; p as usize];
    for i in 1..=(p / 2) {
        sq[(i * i % p) as usize] = true;
    }
    sq
}

/// p^e.
pub fn ipow(p: &Integer, e: u32) -> Integer {
    Integer::from(Pow::pow(p, e))
}

/// x mod m in [0, m) for m > 0.
pub fn modulo(x: &Integer, m: &Integer) -> Integer {
    let r = Integer::from(x % m);
    if r < 0 {
        r + m
    } else {
        r
    }
}

/// v_p(x); zero has valuation u32::MAX.
pub fn valuation(x: &Integer, p: &Integer) -> u32 {
    if *x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    let mut y = Integer::from(x.abs_ref());
    while y.is_divisible(p) {
        y /= p;
        v += 1;
    }
    v
}

/// Prime factorization of |x| (x ≠ 0).
pub fn factor(x: &Integer) -> BTreeMap<Integer, u32> {
    let n = Integer::from(x.abs_ref());
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    let big = BigUint::parse_bytes(n.to_string_radix(16).as_bytes(), 16).expect("hex digits");
    for (p, e) in num_prime::nt_funcs::factorize(big) {
        let p = Integer::from_str_radix(&p.to_str_radix(16), 16).expect("hex digits");
        out.insert(p, e as u32);
    }
    out
}

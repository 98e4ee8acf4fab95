use super::field::Field;
use crate::error::{Error, Result};

/// Projective point [x : y : z].
#[derive(Clone, Debug, PartialEq)]
pub struct HessePoint<E> {
    pub x: E,
    pub y: E,
    pub z: E,
}

impl<E> HessePoint<E> {
    pub fn new(x: E, y: E, z: E) -> Self {
        HessePoint { x, y, z }
    }
}

/// The cubic x³ + y³ + z³ = 3t·xyz over a field with cube roots of unity.
#[derive(Clone, Debug)]
pub struct HesseCurve<F: Field> {
    field: F,
    t: F::E,
}

impl<F: Field> HesseCurve<F> {
    pub fn new(field: F, t: F::E) -> Result<Self> {
        let t3 = field.pow(&t, 3);
        if t3 == field.one() {
            return Err(Error::SingularParameter(format!("{t:?} (t³ = 1)")));
        }
        Ok(HesseCurve { field, t })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn t(&self) -> &F::E {
        &self.t
    }

    pub fn point(&self, x: F::E, y: F::E, z: F::E) -> HessePoint<F::E> {
        HessePoint::new(x, y, z)
    }

    /// Value of x³ + y³ + z³ − 3t·xyz.
    pub fn equation(&self, p: &HessePoint<F::E>) -> F::E {
        let f = &self.field;
        let cubes = f.add(&f.add(&f.pow(&p.x, 3), &f.pow(&p.y, 3)), &f.pow(&p.z, 3));
        let xyz = f.mul(&f.mul(&p.x, &p.y), &p.z);
        let three_t = f.mul(&f.from_i64(3), &self.t);
        f.sub(&cubes, &f.mul(&three_t, &xyz))
    }

    pub fn contains(&self, p: &HessePoint<F::E>) -> bool {
        !self.is_null(p) && self.field.is_zero(&self.equation(p))
    }

    fn is_null(&self, p: &HessePoint<F::E>) -> bool {
        let f = &self.field;
        f.is_zero(&p.x) && f.is_zero(&p.y) && f.is_zero(&p.z)
    }

    /// Projective equality.
    pub fn same_point(&self, p: &HessePoint<F::E>, q: &HessePoint<F::E>) -> bool {
        let f = &self.field;
        let c = |a: &F::E, b: &F::E, c: &F::E, d: &F::E| f.is_zero(&f.sub(&f.mul(a, b), &f.mul(c, d)));
        c(&p.x, &q.y, &p.y, &q.x) && c(&p.x, &q.z, &p.z, &q.x) && c(&p.y, &q.z, &p.z, &q.y)
    }

    /// O = [−1 : 1 : 0].
    pub fn origin(&self) -> HessePoint<F::E> {
        let f = &self.field;
        HessePoint::new(f.from_i64(-1), f.one(), f.zero())
    }

    /// −[x : y : z] = [y : x : z].
    pub fn neg(&self, p: &HessePoint<F::E>) -> HessePoint<F::E> {
        HessePoint::new(p.y.clone(), p.x.clone(), p.z.clone())
    }

    /// P + Q, together with the index (0, 1, 2) of the first of the three
    /// addition expressions that does not vanish.
    ///
    /// The first expression vanishes exactly when P − Q = ρ²ζ^j(O) for some
    /// j; the second one is then used.
    pub fn add_indexed(&self, p: &HessePoint<F::E>, q: &HessePoint<F::E>) -> Result<(HessePoint<F::E>, usize)> {
        let f = &self.field;
        let (x, y, z) = (&p.x, &p.y, &p.z);
        let (xp, yp, zp) = (&q.x, &q.y, &q.z);
        let m = |a: &F::E, b: &F::E, c: &F::E, d: &F::E| f.mul(&f.mul(a, b), &f.mul(c, d));
        let sq = |a: &F::E| f.mul(a, a);
        let candidates = [
            [
                f.sub(&m(y, z, zp, zp), &m(&sq(x), xp, yp, &f.one())),
                f.sub(&m(x, y, yp, yp), &m(&sq(z), xp, zp, &f.one())),
                f.sub(&m(x, z, xp, xp), &m(&sq(y), yp, zp, &f.one())),
            ],
            [
                f.sub(&m(x, y, xp, xp), &m(&sq(z), yp, zp, &f.one())),
                f.sub(&m(x, z, zp, zp), &m(&sq(y), xp, yp, &f.one())),
                f.sub(&m(y, z, yp, yp), &m(&sq(x), xp, zp, &f.one())),
            ],
            [
                f.sub(&m(x, z, yp, yp), &m(&sq(y), xp, zp, &f.one())),
                f.sub(&m(y, z, xp, xp), &m(&sq(x), yp, zp, &f.one())),
                f.sub(&m(x, y, zp, zp), &m(&sq(z), xp, yp, &f.one())),
            ],
        ];
        for (i, [a, b, c]) in candidates.into_iter().enumerate() {
            let r = HessePoint::new(a, b, c);
            if !self.is_null(&r) {
                return Ok((r, i));
            }
        }
        Err(Error::DegenerateFormula)
    }

    pub fn add(&self, p: &HessePoint<F::E>, q: &HessePoint<F::E>) -> Result<HessePoint<F::E>> {
        Ok(self.add_indexed(p, q)?.0)
    }

    pub fn sub(&self, p: &HessePoint<F::E>, q: &HessePoint<F::E>) -> Result<HessePoint<F::E>> {
        self.add(p, &self.neg(q))
    }

    /// n·P by double-and-add.
    pub fn mul(&self, n: i64, p: &HessePoint<F::E>) -> Result<HessePoint<F::E>> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.origin();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// ρ[x : y : z] = [y : z : x].
    pub fn rho(&self, p: &HessePoint<F::E>) -> HessePoint<F::E> {
        HessePoint::new(p.y.clone(), p.z.clone(), p.x.clone())
    }

    /// ζ[x : y : z] = [ζx : ζ²y : z].
    pub fn zeta_act(&self, p: &HessePoint<F::E>) -> HessePoint<F::E> {
        let f = &self.field;
        HessePoint::new(f.mul(&f.zeta(), &p.x), f.mul(&f.zeta_pow(2), &p.y), p.z.clone())
    }

    /// ρ^i ζ^j (O).
    pub fn torsion_point(&self, i: u8, j: u8) -> HessePoint<F::E> {
        let mut p = self.origin();
        for _ in 0..(j % 3) {
            p = self.zeta_act(&p);
        }
        for _ in 0..(i % 3) {
            p = self.rho(&p);
        }
        p
    }

    /// The nine flexes with labels (i, j) for ρ^i ζ^j (O).
    pub fn three_torsion(&self) -> Vec<((u8, u8), HessePoint<F::E>)> {
        let mut out = Vec::with_capacity(9);
        for i in 0..3u8 {
            for j in 0..3u8 {
                out.push(((i, j), self.torsion_point(i, j)));
            }
        }
        out
    }

    /// Label of a 3-torsion point.
    pub fn label_of(&self, p: &HessePoint<F::E>) -> Option<(u8, u8)> {
        self.three_torsion().into_iter().find(|(_, q)| self.same_point(p, q)).map(|(l, _)| l)
    }

    /// Tangent line coefficients at P (the gradient of the cubic).
    pub fn tangent(&self, p: &HessePoint<F::E>) -> [F::E; 3] {
        let f = &self.field;
        let three = f.from_i64(3);
        let tt = f.mul(&three, &self.t);
        [
            f.sub(&f.mul(&three, &f.mul(&p.x, &p.x)), &f.mul(&tt, &f.mul(&p.y, &p.z))),
            f.sub(&f.mul(&three, &f.mul(&p.y, &p.y)), &f.mul(&tt, &f.mul(&p.x, &p.z))),
            f.sub(&f.mul(&three, &f.mul(&p.z, &p.z)), &f.mul(&tt, &f.mul(&p.x, &p.y))),
        ]
    }
}

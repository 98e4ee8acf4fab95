//! Boundary maps of symbols on the Hesse cubic over ℚ(ζ₃): Eisenstein
//! integers, reduction types at primes of ℚ(ζ₃), the Bernoulli-polynomial
//! boundary formula on Néron 3N-gons, and integrality verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::curve::{divisor, Field, HessePoint, MotivicSymbol, QZeta, QZetaField, TorsionDivisor};
use crate::error::{Error, Result};
use crate::lseries::factor;
use crate::numerics::bernoulli3;

/// a + bζ ∈ ℤ[ζ], ζ² = −1 − ζ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisensteinInt {
    pub a: Integer,
    pub b: Integer,
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a == 0, self.b == 0) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}ζ", self.b),
            (false, false) if self.b < 0 => write!(f, "{} - {}ζ", self.a, Integer::from(-&self.b)),
            _ => write!(f, "{} + {}ζ", self.a, self.b),
        }
    }
}

impl EisensteinInt {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn int(n: impl Into<Integer>) -> Self {
        EisensteinInt { a: n.into(), b: Integer::new() }
    }

    pub fn zeta() -> Self {
        EisensteinInt::new(0, 1)
    }

    /// The ramified prime 1 − ζ.
    pub fn one_minus_zeta() -> Self {
        EisensteinInt::new(1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        EisensteinInt { a: Integer::from(&self.a + &o.a), b: Integer::from(&self.b + &o.b) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        EisensteinInt { a: Integer::from(&self.a - &o.a), b: Integer::from(&self.b - &o.b) }
    }

    pub fn neg(&self) -> Self {
        EisensteinInt { a: Integer::from(-&self.a), b: Integer::from(-&self.b) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let bd = Integer::from(&self.b * &o.b);
        let a = Integer::from(&self.a * &o.a) - &bd;
        let b = Integer::from(&self.a * &o.b) + Integer::from(&self.b * &o.a) - bd;
        EisensteinInt { a, b }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(EisensteinInt::int(1), |acc, _| acc.mul(self))
    }

    /// Complex conjugate a + bζ².
    pub fn conj(&self) -> Self {
        EisensteinInt { a: Integer::from(&self.a - &self.b), b: Integer::from(-&self.b) }
    }

    /// N(a + bζ) = a² − ab + b².
    pub fn norm(&self) -> Integer {
        Integer::from(self.a.square_ref()) - Integer::from(&self.a * &self.b) + Integer::from(self.b.square_ref())
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// self/o when the quotient lies in ℤ[ζ].
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        if n == 0 {
            return None;
        }
        let p = self.mul(&o.conj());
        if p.a.is_divisible(&n) && p.b.is_divisible(&n) {
            Some(EisensteinInt { a: p.a / &n, b: p.b / n })
        } else {
            None
        }
    }

    pub fn divides(&self, o: &Self) -> bool {
        o.div_exact(self).is_some()
    }

    /// The six associates u·self.
    pub fn associates(&self) -> [Self; 6] {
        let w = EisensteinInt::new(1, 1);
        let mut out: [Self; 6] = Default::default();
        let mut x = self.clone();
        for slot in out.iter_mut() {
            *slot = x.clone();
            x = x.mul(&w);
        }
        out
    }

    /// The associate with 0 ≤ b < a (argument in [0, π/3)); zero maps to zero.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.associates().into_iter().find(|x| x.b >= 0 && x.b < x.a).expect("one associate lies in the sector")
    }
}

/// x = X/D with X ∈ ℤ[ζ] and D a positive integer.
fn split_denominator(x: &QZeta) -> (EisensteinInt, Integer) {
    let d = Integer::from(x.a.denom().lcm_ref(x.b.denom()));
    let a = Rational::from(&x.a * &d);
    let b = Rational::from(&x.b * &d);
    (EisensteinInt { a: a.numer().clone(), b: b.numer().clone() }, d)
}

/// The primes of ℤ[ζ] above a rational prime p, in canonical form.
pub fn primes_above(p: &Integer) -> Vec<EisensteinInt> {
    if *p == 3 {
        return vec![EisensteinInt::one_minus_zeta().canonical()];
    }
    if p.mod_u(3) == 2 {
        return vec![EisensteinInt::int(p.clone())];
    }
    // 4p = (2a − b)² + 3b²
    let four_p = Integer::from(p * 4u32);
    let mut b = Integer::from(1);
    loop {
        let r = &four_p - Integer::from(b.square_ref()) * 3u32;
        if r < 0 {
            unreachable!("p ≡ 1 mod 3 is a norm");
        }
        if r.is_perfect_square() {
            let s = r.sqrt();
            let a = (s + &b) / 2u32;
            let pi = EisensteinInt { a, b: b.clone() }.canonical();
            let bar = pi.conj().canonical();
            let mut out = vec![pi, bar];
            out.sort();
            return out;
        }
        b += 1;
    }
}

/// ord_π(x) for a prime π and x ≠ 0.
pub fn ord(x: &EisensteinInt, pi: &EisensteinInt) -> u32 {
    assert!(!x.is_zero(), "ord of zero");
    let mut k = 0;
    let mut y = x.clone();
    while let Some(q) = y.div_exact(pi) {
        y = q;
        k += 1;
    }
    k
}

/// ord_π(x) for x ∈ ℚ(ζ)^×.
pub fn ord_qzeta(x: &QZeta, pi: &EisensteinInt) -> i64 {
    let (num, den) = split_denominator(x);
    ord(&num, pi) as i64 - ord(&EisensteinInt::int(den), pi) as i64
}

/// Factorization of x ≠ 0 into canonical primes, up to a unit.
pub fn eisenstein_factor(x: &EisensteinInt) -> Vec<(EisensteinInt, u32)> {
    assert!(!x.is_zero(), "factorization of zero");
    let mut out = Vec::new();
    for p in factor(&x.norm()).into_keys() {
        for pi in primes_above(&p) {
            let e = ord(x, &pi);
            if e > 0 {
                out.push((pi, e));
            }
        }
    }
    out.sort_by(|a, b| a.0.norm().cmp(&b.0.norm()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Whether π generates a prime ideal of ℤ[ζ].
pub fn is_prime(pi: &EisensteinInt) -> bool {
    let n = pi.norm();
    if n < 2 {
        return false;
    }
    if n.is_probably_prime(30) != rug::integer::IsPrime::No {
        return true;
    }
    let f = factor(&n);
    if f.len() != 1 {
        return false;
    }
    let (p, e) = f.into_iter().next().expect("one factor");
    e == 2 && p.mod_u(3) == 2 && pi.canonical() == EisensteinInt::int(p)
}

/// Reduction type of X_t at a prime v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    Additive,
    /// v ∤ 3, ord_v t ≥ 0 and t ≡ ζ^k mod v.
    SplitMultCaseI { k: u8 },
    /// ord_v 3t < 0.
    SplitMultCaseII,
}

impl ReductionKind {
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, ReductionKind::SplitMultCaseI { .. } | ReductionKind::SplitMultCaseII)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReductionKind::Good => "good",
            ReductionKind::Additive => "additive",
            ReductionKind::SplitMultCaseI { .. } => "split_mult_case_i",
            ReductionKind::SplitMultCaseII => "split_mult_case_ii",
        }
    }
}

/// Reduction of X_{t,K} at v; the special fibre is a Néron 3N-gon in the
/// multiplicative cases (N = 0 otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub v: EisensteinInt,
    pub kind: ReductionKind,
    pub n: u32,
}

fn check_parameter(t: &QZeta) -> Result<()> {
    let f = QZetaField;
    if f.pow(t, 3) == f.one() {
        return Err(Error::SingularParameter(t.to_string()));
    }
    Ok(())
}

/// Reduction type of X_t at the prime v.
pub fn reduction_type(t: &QZeta, v: &EisensteinInt) -> Result<ReductionReport> {
    check_parameter(t)?;
    if !is_prime(v) {
        return Err(Error::InvalidInput(format!("{v} is not a prime of Z[ζ]")));
    }
    let v = v.canonical();
    let report = |kind, n| Ok(ReductionReport { v: v.clone(), kind, n });
    let f = QZetaField;
    let three_t = f.mul(&QZeta::int(3), t);
    let ot = if f.is_zero(t) { 0 } else { ord_qzeta(&three_t, &v) };
    if ot < 0 {
        return report(ReductionKind::SplitMultCaseII, (-ot) as u32);
    }
    if v.norm() == 3 {
        return report(ReductionKind::Additive, 0);
    }
    let u = f.sub(&f.pow(t, 3), &f.one());
    let ou = ord_qzeta(&u, &v);
    if ou > 0 {
        let k = (0..3u8)
            .find(|&k| {
                let d = f.sub(t, &f.zeta_pow(k as i64));
                !(d.a == 0 && d.b == 0) && ord_qzeta(&d, &v) > 0
            })
            .expect("t is a cube root of unity mod v");
        return report(ReductionKind::SplitMultCaseI { k }, ou as u32);
    }
    report(ReductionKind::Good, 0)
}

/// All primes of bad reduction of X_{t,K}, sorted by norm.
pub fn bad_primes(t: &QZeta) -> Result<Vec<ReductionReport>> {
    check_parameter(t)?;
    let f = QZetaField;
    let (_, den) = split_denominator(t);
    let u = f.sub(&f.pow(t, 3), &f.one());
    let (unum, _) = split_denominator(&u);
    let mut candidates: BTreeMap<(Integer, EisensteinInt), ()> = BTreeMap::new();
    for p in factor(&Integer::from(&den * 3u32)).into_keys() {
        for pi in primes_above(&p) {
            candidates.insert((pi.norm(), pi), ());
        }
    }
    for (pi, _) in eisenstein_factor(&unum) {
        candidates.insert((pi.norm(), pi), ());
    }
    let mut out = Vec::new();
    for (_, pi) in candidates.into_keys() {
        let r = reduction_type(t, &pi)?;
        if r.kind != ReductionKind::Good {
            out.push(r);
        }
    }
    Ok(out)
}

/// The elements whose integrality is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Element {
    XiHesse,
    XiPrimeHalf,
    XiZeta,
}

impl Element {
    pub fn symbol(self, t: &QZeta) -> MotivicSymbol {
        match self {
            Element::XiHesse => MotivicSymbol::xi_hesse(t.clone()),
            Element::XiPrimeHalf => MotivicSymbol::xi_prime(t.clone()),
            Element::XiZeta => MotivicSymbol::xi_zeta(t.clone()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Element::XiHesse => "xi_hesse",
            Element::XiPrimeHalf => "xi_prime_half",
            Element::XiZeta => "xi_zeta",
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xi_hesse" => Ok(Element::XiHesse),
            "xi_prime_half" => Ok(Element::XiPrimeHalf),
            "xi_zeta" => Ok(Element::XiZeta),
            _ => Err(Error::InvalidInput(format!("unknown element {s}"))),
        }
    }
}

/// Primitive integral coordinates of a point over ℚ(ζ).
fn integral_coordinates(p: &HessePoint<QZeta>, pi: &EisensteinInt) -> [EisensteinInt; 3] {
    let coords = [&p.x, &p.y, &p.z];
    let d = coords.iter().fold(Integer::from(1), |acc, c| {
        let l = Integer::from(c.a.denom().lcm_ref(c.b.denom()));
        acc.lcm(&l)
    });
    let mut out = coords.map(|c| {
        let (num, den) = split_denominator(c);
        num.mul(&EisensteinInt::int(&d / den))
    });
    while out.iter().all(|c| c.is_zero() || pi.divides(c)) {
        out = out.map(|c| if c.is_zero() { c } else { c.div_exact(pi).expect("checked") });
    }
    out
}

/// Index in ℤ/3Nℤ of the component containing the reduction of a flex:
/// case i numbers the lines x + ζ^j y + ζ^{k−j} z = 0 as C_{jN}; case ii uses
/// C_0, C_N, C_{2N} for z = 0, x = 0, y = 0.
fn component_of(p: &HessePoint<QZeta>, report: &ReductionReport) -> Result<u32> {
    let c = integral_coordinates(p, &report.v);
    let zero = |e: &EisensteinInt| e.is_zero() || report.v.divides(e);
    let n = report.n;
    let hits: Vec<u32> = match report.kind {
        ReductionKind::SplitMultCaseII => [(&c[2], 0), (&c[0], n), (&c[1], 2 * n)]
            .into_iter()
            .filter(|(e, _)| zero(e))
            .map(|(_, i)| i)
            .collect(),
        ReductionKind::SplitMultCaseI { k } => (0..3u32)
            .filter(|&j| {
                let alpha = EisensteinInt::zeta().pow(j);
                let beta = EisensteinInt::zeta().pow((k as u32 + 3 - j) % 3);
                zero(&c[0].add(&alpha.mul(&c[1])).add(&beta.mul(&c[2])))
            })
            .map(|j| j * n)
            .collect(),
        _ => return Err(Error::NotMultiplicative(report.v.to_string())),
    };
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::SupportComputationFailed(format!("flex reduces to a singular point mod {}", report.v))),
    }
}

/// Degrees d(ν) of the flat extension of a torsion divisor on each component.
pub fn component_degrees(t: &QZeta, div: &TorsionDivisor, report: &ReductionReport) -> Result<BTreeMap<u32, Rational>> {
    let curve = crate::curve::HesseCurve::new(QZetaField, t.clone())?;
    let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
    for (label, c) in &div.coefficients {
        let p = curve.torsion_point(label.0, label.1);
        let idx = component_of(&p, report)?;
        *out.entry(idx).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// (1/3M) Σ_{μ,ν ∈ ℤ/M} d(μ)d′(μ+ν) B₃(⟨ν/M⟩) for an M-gon.
pub fn bernoulli_pairing(d: &BTreeMap<u32, Rational>, dp: &BTreeMap<u32, Rational>, m: u32) -> Rational {
    let mut sum = Rational::new();
    for (mu, a) in d {
        for (mu2, b) in dp {
            let nu = (mu2 + m - mu) % m;
            sum += Rational::from(a * b) * bernoulli3(&Rational::from((nu, m)));
        }
    }
    sum / (3 * m)
}

/// (coefficient, div f, div g) for each term c·{f, g}.
fn term_divisors(sym: &MotivicSymbol) -> Result<Vec<(Rational, TorsionDivisor, TorsionDivisor)>> {
    let curve = sym.curve()?;
    sym.terms
        .iter()
        .map(|term| Ok((term.coeff.clone(), divisor(&curve, &term.f)?, divisor(&curve, &term.g)?)))
        .collect()
}

fn boundary_from_divisors(
    t: &QZeta,
    divisors: &[(Rational, TorsionDivisor, TorsionDivisor)],
    report: &ReductionReport,
) -> Result<Rational> {
    if !report.kind.is_multiplicative() {
        return Err(Error::NotMultiplicative(report.v.to_string()));
    }
    let m = 3 * report.n;
    let mut total = Rational::new();
    for (coeff, df, dg) in divisors {
        let d = component_degrees(t, df, report)?;
        let dp = component_degrees(t, dg, report)?;
        total += coeff * bernoulli_pairing(&d, &dp, m);
    }
    Ok(total)
}

/// Coefficient of Φ¹₁ in ∂_v of a symbol, with the global sign fixed to +.
pub fn boundary_of_symbol(sym: &MotivicSymbol, report: &ReductionReport) -> Result<Rational> {
    if !report.kind.is_multiplicative() {
        return Err(Error::NotMultiplicative(report.v.to_string()));
    }
    boundary_from_divisors(&sym.t, &term_divisors(sym)?, report)
}

/// Coefficient of Φ¹₁ in ∂_v(element) at a split multiplicative prime v.
pub fn boundary(t: &QZeta, element: Element, v: &EisensteinInt) -> Result<Rational> {
    let report = reduction_type(t, v)?;
    boundary_of_symbol(&element.symbol(t), &report)
}

/// Per-prime boundary coefficients and the resulting verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryVerdict {
    pub t: QZeta,
    pub element: Element,
    pub coefficients: Vec<(ReductionReport, Rational)>,
    /// X_t has complex multiplication (t³ ∈ {0, −8}), hence potentially good
    /// reduction everywhere.
    pub cm: bool,
    pub integral: bool,
}

/// Integrality of the element on X_t: all boundary coefficients vanish.
pub fn is_integral(t: &QZeta, element: Element) -> Result<BoundaryVerdict> {
    let f = QZetaField;
    let t3 = f.pow(t, 3);
    let cm = t3 == f.zero() || t3 == QZeta::int(-8);
    let reports: Vec<ReductionReport> = bad_primes(t)?.into_iter().filter(|r| r.kind.is_multiplicative()).collect();
    let divisors = if reports.is_empty() { Vec::new() } else { term_divisors(&element.symbol(t))? };
    let mut coefficients = Vec::new();
    for report in reports {
        let c = boundary_from_divisors(t, &divisors, &report)?;
        coefficients.push((report, c));
    }
    let integral = (cm && element == Element::XiZeta) || coefficients.iter().all(|(_, c)| *c == 0);
    Ok(BoundaryVerdict { t: t.clone(), element, coefficients, cm, integral })
}


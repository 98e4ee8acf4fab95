use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use super::field::{Field, QZeta, QZetaField};
use super::point::{HesseCurve, HessePoint};
use crate::error::{Error, Result};

/// Truncation order of local expansions; every linear form meets the curve
/// with multiplicity at most 3.
const SERIES_LEN: usize = 6;

/// c0·x0 + c1·y0 + c2·z0.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm(pub [QZeta; 3]);

impl LinearForm {
    pub fn new(c0: QZeta, c1: QZeta, c2: QZeta) -> Self {
        LinearForm([c0, c1, c2])
    }

    /// The coordinate function x0, y0 or z0.
    pub fn coordinate(i: usize) -> Self {
        let mut c = [QZeta::int(0), QZeta::int(0), QZeta::int(0)];
        c[i] = QZeta::int(1);
        LinearForm(c)
    }

    pub fn eval(&self, p: &HessePoint<QZeta>) -> QZeta {
        let f = QZetaField;
        let s = f.add(&f.mul(&self.0[0], &p.x), &f.mul(&self.0[1], &p.y));
        f.add(&s, &f.mul(&self.0[2], &p.z))
    }

    /// True iff the two forms are scalar multiples of each other.
    pub fn proportional(&self, other: &LinearForm) -> bool {
        let f = QZetaField;
        (0..3).all(|i| {
            (0..3).all(|j| f.is_zero(&f.sub(&f.mul(&self.0[i], &other.0[j]), &f.mul(&self.0[j], &other.0[i]))))
        })
    }
}

/// scale · Π num / Π den with equally many linear forms above and below.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    pub scale: QZeta,
    pub num: Vec<LinearForm>,
    pub den: Vec<LinearForm>,
}

impl RatFn {
    pub fn new(scale: QZeta, num: Vec<LinearForm>, den: Vec<LinearForm>) -> Result<Self> {
        if num.len() != den.len() {
            return Err(Error::InvalidInput("numerator and denominator degrees differ".into()));
        }
        if QZetaField.is_zero(&scale) {
            return Err(Error::InvalidInput("zero rational function".into()));
        }
        Ok(RatFn { scale, num, den })
    }

    /// −L1/L2.
    pub fn neg_ratio(l1: LinearForm, l2: LinearForm) -> Self {
        RatFn { scale: QZeta::int(-1), num: vec![l1], den: vec![l2] }
    }

    /// The affine coordinate x0/z0 or y0/z0.
    pub fn affine(i: usize) -> Self {
        RatFn { scale: QZeta::int(1), num: vec![LinearForm::coordinate(i)], den: vec![LinearForm::coordinate(2)] }
    }

    /// f^n for n ≥ 1.
    pub fn pow(&self, n: usize) -> Self {
        let mut out = RatFn { scale: QZetaField.pow(&self.scale, n as u64), num: vec![], den: vec![] };
        for _ in 0..n {
            out.num.extend(self.num.iter().cloned());
            out.den.extend(self.den.iter().cloned());
        }
        out
    }
}

/// Named elements of K₂ of the Hesse cubic.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolName {
    XiZeta,
    /// ξ(ρz) with z = ζ^k.
    XiRho(u8),
    XiHesse,
    XiPrimeHalf,
    XySymbol,
    Custom(String),
}

impl fmt::Display for SymbolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolName::XiZeta => write!(f, "xi_zeta"),
            SymbolName::XiRho(k) => write!(f, "xi_rho(zeta^{k})"),
            SymbolName::XiHesse => write!(f, "xi_hesse"),
            SymbolName::XiPrimeHalf => write!(f, "xi_prime_half"),
            SymbolName::XySymbol => write!(f, "xy_symbol"),
            SymbolName::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// One summand c·{f, g}.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTerm {
    pub coeff: Rational,
    pub f: RatFn,
    pub g: RatFn,
}

/// A formal ℚ-linear combination of symbols {f, g} on X_t.
#[derive(Clone, Debug, PartialEq)]
pub struct MotivicSymbol {
    pub name: SymbolName,
    pub t: QZeta,
    pub terms: Vec<SymbolTerm>,
}

fn lf(c0: QZeta, c1: QZeta, c2: QZeta) -> LinearForm {
    LinearForm::new(c0, c1, c2)
}

impl MotivicSymbol {
    /// ξ(ζ)_t.
    pub fn xi_zeta(t: QZeta) -> Self {
        let f = QZetaField;
        let one = f.one();
        let base = lf(one.clone(), one.clone(), t.clone());
        let a = lf(one.clone(), f.zeta_pow(2), f.mul(&f.zeta(), &t));
        let b = lf(one.clone(), f.zeta(), f.mul(&f.zeta_pow(2), &t));
        let term = SymbolTerm {
            coeff: Rational::from(1),
            f: RatFn::neg_ratio(base.clone(), a),
            g: RatFn::neg_ratio(b, base),
        };
        MotivicSymbol { name: SymbolName::XiZeta, t, terms: vec![term] }
    }

    fn xi_rho_term(t: &QZeta, k: u8) -> SymbolTerm {
        let f = QZetaField;
        let one = f.one();
        let z = f.zeta_pow(k as i64);
        let z2 = f.zeta_pow(2 * k as i64);
        let base = lf(one.clone(), one.clone(), t.clone());
        let a = lf(one.clone(), f.mul(&z2, t), z.clone());
        let b = lf(t.clone(), z, z2);
        SymbolTerm { coeff: Rational::from(1), f: RatFn::neg_ratio(base.clone(), a), g: RatFn::neg_ratio(b, base) }
    }

    /// ξ(ρz)_t with z = ζ^k.
    pub fn xi_rho(t: QZeta, k: u8) -> Self {
        let term = Self::xi_rho_term(&t, k % 3);
        MotivicSymbol { name: SymbolName::XiRho(k % 3), t, terms: vec![term] }
    }

    /// ξ_Hes = (1/3) Σ_z ξ(ρz).
    pub fn xi_hesse(t: QZeta) -> Self {
        let terms = (0..3)
            .map(|k| {
                let mut term = Self::xi_rho_term(&t, k);
                term.coeff = Rational::from((1, 3));
                term
            })
            .collect();
        MotivicSymbol { name: SymbolName::XiHesse, t, terms }
    }

    /// ξ′ = 2ξ(ρ) − ξ(ρζ) − ξ(ρζ²).
    pub fn xi_prime(t: QZeta) -> Self {
        let terms = (0..3)
            .map(|k| {
                let mut term = Self::xi_rho_term(&t, k);
                term.coeff = Rational::from(if k == 0 { 2 } else { -1 });
                term
            })
            .collect();
        MotivicSymbol { name: SymbolName::XiPrimeHalf, t, terms }
    }

    /// {x, y} with x = x0/z0, y = y0/z0.
    pub fn xy_symbol(t: QZeta) -> Self {
        let term = SymbolTerm { coeff: Rational::from(1), f: RatFn::affine(0), g: RatFn::affine(1) };
        MotivicSymbol { name: SymbolName::XySymbol, t, terms: vec![term] }
    }

    pub fn custom(name: &str, t: QZeta, terms: Vec<SymbolTerm>) -> Self {
        MotivicSymbol { name: SymbolName::Custom(name.to_string()), t, terms }
    }

    pub fn curve(&self) -> Result<HesseCurve<QZetaField>> {
        HesseCurve::new(QZetaField, self.t.clone())
    }
}

/// Integer (or rational) combination of the nine flexes, keyed by the label
/// (i, j) of ρ^i ζ^j (O).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TorsionDivisor {
    pub coefficients: BTreeMap<(u8, u8), Rational>,
}

impl TorsionDivisor {
    pub fn add_to(&mut self, label: (u8, u8), c: &Rational) {
        let e = self.coefficients.entry(label).or_default();
        *e += c;
        if *e == 0 {
            self.coefficients.remove(&label);
        }
    }

    pub fn get(&self, label: (u8, u8)) -> Rational {
        self.coefficients.get(&label).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Rational {
        self.coefficients.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Build from (label, coefficient) pairs.
    pub fn from_pairs(pairs: &[((u8, u8), i64)]) -> Self {
        let mut d = TorsionDivisor::default();
        for (l, c) in pairs {
            d.add_to(*l, &Rational::from(*c));
        }
        d
    }
}

impl fmt::Display for TorsionDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coefficients.iter().map(|((i, j), c)| format!("{c}·(ρ^{i}ζ^{j}O)")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Series truncated at SERIES_LEN.
type Series = Vec<QZeta>;

fn s_mul(a: &Series, b: &Series) -> Series {
    let f = QZetaField;
    let mut out = vec![f.zero(); SERIES_LEN];
    for i in 0..SERIES_LEN {
        if f.is_zero(&a[i]) {
            continue;
        }
        for j in 0..SERIES_LEN - i {
            out[i + j] = f.add(&out[i + j], &f.mul(&a[i], &b[j]));
        }
    }
    out
}

fn s_add(a: &Series, b: &Series) -> Series {
    a.iter().zip(b).map(|(x, y)| QZetaField.add(x, y)).collect()
}

fn s_scale(c: &QZeta, a: &Series) -> Series {
    a.iter().map(|x| QZetaField.mul(c, x)).collect()
}

fn s_const(c: QZeta) -> Series {
    let mut out = vec![QZeta::int(0); SERIES_LEN];
    out[0] = c;
    out
}

/// Local parametrization (x0(s), y0(s), z0(s)) of X_t at a smooth point P,
/// with one coordinate identically 1 and s a uniformizer.
fn local_expansion(curve: &HesseCurve<QZetaField>, p: &HessePoint<QZeta>) -> Result<[Series; 3]> {
    let f = QZetaField;
    let coords = [p.x.clone(), p.y.clone(), p.z.clone()];
    let k = (0..3).find(|&i| !f.is_zero(&coords[i])).ok_or(Error::DegenerateFormula)?;
    let inv = f.inv(&coords[k]).unwrap();
    let pt: Vec<QZeta> = coords.iter().map(|c| f.mul(c, &inv)).collect();
    let grad = curve.tangent(&HessePoint::new(pt[0].clone(), pt[1].clone(), pt[2].clone()));
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let (param, solve) = if !f.is_zero(&grad[others[1]]) {
        (others[0], others[1])
    } else if !f.is_zero(&grad[others[0]]) {
        (others[1], others[0])
    } else {
        return Err(Error::SingularCurve);
    };
    let mut series: [Series; 3] = [s_const(pt[0].clone()), s_const(pt[1].clone()), s_const(pt[2].clone())];
    series[param][1] = f.one();
    let three = f.from_i64(3);
    let three_t = f.mul(&three, curve.t());
    let g_inv = f.inv(&grad[solve]).unwrap();
    for i in 1..SERIES_LEN {
        let cube = |a: &Series| s_mul(&s_mul(a, a), a);
        let cubes = s_add(&s_add(&cube(&series[0]), &cube(&series[1])), &cube(&series[2]));
        let xyz = s_mul(&s_mul(&series[0], &series[1]), &series[2]);
        let g = s_add(&cubes, &s_scale(&f.neg(&three_t), &xyz));
        series[solve][i] = f.neg(&f.mul(&g[i], &g_inv));
    }
    Ok(series)
}

/// Order and leading coefficient of a linear form along a local expansion.
fn form_order(form: &LinearForm, exp: &[Series; 3]) -> Result<(i64, QZeta)> {
    let f = QZetaField;
    let v = s_add(&s_add(&s_scale(&form.0[0], &exp[0]), &s_scale(&form.0[1], &exp[1])), &s_scale(&form.0[2], &exp[2]));
    v.into_iter()
        .enumerate()
        .find(|(_, c)| !f.is_zero(c))
        .map(|(i, c)| (i as i64, c))
        .ok_or_else(|| Error::SupportComputationFailed(format!("form {form:?} vanishes to order ≥ {SERIES_LEN}")))
}

/// Order and leading coefficient of a rational function at a point.
fn fn_order(func: &RatFn, exp: &[Series; 3]) -> Result<(i64, QZeta)> {
    let f = QZetaField;
    let mut ord = 0;
    let mut lead = func.scale.clone();
    for l in &func.num {
        let (o, c) = form_order(l, exp)?;
        ord += o;
        lead = f.mul(&lead, &c);
    }
    for l in &func.den {
        let (o, c) = form_order(l, exp)?;
        ord -= o;
        lead = f.mul(&lead, &f.inv(&c).unwrap());
    }
    Ok((ord, lead))
}

/// Checks that every linear form not cancelled by a proportional form on the
/// other side meets the curve only at flexes.
fn check_support(curve: &HesseCurve<QZetaField>, func: &RatFn, flexes: &[((u8, u8), [Series; 3])]) -> Result<()> {
    let mut num: Vec<&LinearForm> = func.num.iter().collect();
    let mut den: Vec<&LinearForm> = func.den.iter().collect();
    let mut i = 0;
    while i < num.len() {
        if let Some(j) = den.iter().position(|d| d.proportional(num[i])) {
            den.remove(j);
            num.remove(i);
        } else {
            i += 1;
        }
    }
    for l in num.into_iter().chain(den) {
        if l.0.iter().all(|c| QZetaField.is_zero(c)) {
            return Err(Error::SupportComputationFailed("zero linear form".into()));
        }
        let mut total = 0;
        for (_, exp) in flexes {
            total += form_order(l, exp)?.0;
        }
        if total != 3 {
            return Err(Error::SupportComputationFailed(format!(
                "linear form {l:?} meets X_t at non-flex points (flex multiplicity {total}) for t = {}",
                curve.t()
            )));
        }
    }
    Ok(())
}

fn flex_expansions(curve: &HesseCurve<QZetaField>) -> Result<Vec<((u8, u8), [Series; 3])>> {
    curve.three_torsion().into_iter().map(|(l, p)| Ok((l, local_expansion(curve, &p)?))).collect()
}

/// Divisor of a rational function whose zeros and poles are flexes.
pub fn divisor(curve: &HesseCurve<QZetaField>, func: &RatFn) -> Result<TorsionDivisor> {
    let flexes = flex_expansions(curve)?;
    check_support(curve, func, &flexes)?;
    let mut d = TorsionDivisor::default();
    for (label, exp) in &flexes {
        let (o, _) = fn_order(func, exp)?;
        d.add_to(*label, &Rational::from(o));
    }
    Ok(d)
}

fn lcm_denominators(sym: &MotivicSymbol) -> Integer {
    sym.terms.iter().fold(Integer::from(1), |acc, t| acc.lcm(t.coeff.denom()))
}

fn qz_pow_signed(x: &QZeta, e: &Integer) -> Result<QZeta> {
    let f = QZetaField;
    let mag = Integer::from(e.abs_ref()).to_u64().ok_or_else(|| Error::InvalidInput("exponent too large".into()))?;
    let p = f.pow(x, mag);
    if *e < 0 {
        f.inv(&p).ok_or(Error::DegenerateFormula)
    } else {
        Ok(p)
    }
}

/// Coefficient-weighted tame symbol at each flex, raised to the common
/// denominator of the coefficients.
pub fn tame_symbols(sym: &MotivicSymbol) -> Result<Vec<((u8, u8), QZeta)>> {
    let curve = sym.curve()?;
    let f = QZetaField;
    let flexes = flex_expansions(&curve)?;
    for term in &sym.terms {
        check_support(&curve, &term.f, &flexes)?;
        check_support(&curve, &term.g, &flexes)?;
    }
    let denom = lcm_denominators(sym);
    let mut out = Vec::with_capacity(9);
    for (label, exp) in &flexes {
        let mut acc = f.one();
        for term in &sym.terms {
            let (a, lf_) = fn_order(&term.f, exp)?;
            let (b, lg) = fn_order(&term.g, exp)?;
            if a == 0 && b == 0 {
                continue;
            }
            // (−1)^{ab} f^b / g^a at the point
            let mut v = f.mul(&qz_pow_signed(&lf_, &Integer::from(b))?, &qz_pow_signed(&lg, &Integer::from(-a))?);
            if (a * b) % 2 != 0 {
                v = f.neg(&v);
            }
            let e = term.coeff.numer() * Integer::from(&denom / term.coeff.denom()) ;
            acc = f.mul(&acc, &qz_pow_signed(&v, &e)?);
        }
        out.push((*label, acc));
    }
    Ok(out)
}

/// True iff every tame symbol of sym is torsion in ℚ(ζ₃)^×, i.e. sym lies in
/// the kernel of the tame symbol after tensoring with ℚ.
pub fn tame_symbol_check(sym: &MotivicSymbol) -> Result<bool> {
    let f = QZetaField;
    Ok(tame_symbols(sym)?.iter().all(|(_, v)| f.pow(v, 6) == f.one()))
}

/// Σ m_i n_j (P_i − Q_j) for div f = Σ m_i (P_i), div g = Σ n_j (Q_j).
pub fn bloch_beta_of_divisors(
    curve: &HesseCurve<QZetaField>,
    df: &TorsionDivisor,
    dg: &TorsionDivisor,
) -> Result<TorsionDivisor> {
    let mut out = TorsionDivisor::default();
    for (lp, m) in &df.coefficients {
        for (lq, n) in &dg.coefficients {
            let p = curve.torsion_point(lp.0, lp.1);
            let q = curve.torsion_point(lq.0, lq.1);
            let diff = curve.sub(&p, &q)?;
            let label = curve.label_of(&diff).ok_or(Error::DegenerateFormula)?;
            out.add_to(label, &Rational::from(m * n));
        }
    }
    Ok(out)
}

/// Σ c·m_i n_j (P_i − Q_j) over all terms, without reduction.
pub fn bloch_beta_raw(sym: &MotivicSymbol) -> Result<TorsionDivisor> {
    let curve = sym.curve()?;
    let mut out = TorsionDivisor::default();
    for term in &sym.terms {
        let df = divisor(&curve, &term.f)?;
        let dg = divisor(&curve, &term.g)?;
        for (label, c) in bloch_beta_of_divisors(&curve, &df, &dg)?.coefficients {
            out.add_to(label, &(c * &term.coeff));
        }
    }
    Ok(out)
}

/// Bloch map modulo (P) + (−P): (O) is dropped and each pair {P, −P} is
/// represented by its lexicographically smaller label.
pub fn bloch_beta(sym: &MotivicSymbol) -> Result<TorsionDivisor> {
    let raw = bloch_beta_raw(sym)?;
    let curve = sym.curve()?;
    reduce_mod_inverses(&curve, &raw)
}

/// Image of a torsion divisor modulo the relations (P) + (−P) ≡ 0.
pub fn reduce_mod_inverses(curve: &HesseCurve<QZetaField>, d: &TorsionDivisor) -> Result<TorsionDivisor> {
    let mut out = TorsionDivisor::default();
    for (label, c) in &d.coefficients {
        let p = curve.torsion_point(label.0, label.1);
        let neg = curve.label_of(&curve.neg(&p)).ok_or(Error::DegenerateFormula)?;
        if neg == *label {
            continue;
        }
        if *label < neg {
            out.add_to(*label, c);
        } else {
            out.add_to(neg, &Rational::from(-c));
        }
    }
    Ok(out)
}

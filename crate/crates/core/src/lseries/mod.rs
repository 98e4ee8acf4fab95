//! L(E, 2) for the Weierstrass models of X_t: minimal models and conductors
//! by Tate's algorithm, a_p by point counting, the smoothed Dirichlet series
//! with incomplete-Gamma weights, root numbers and an a_p file cache.

mod cache;
mod count;
mod lvalue;
mod model;
mod tate;

pub use cache::{ApCache, ApCacheFile};
pub use count::{an_coefficients, fill_ap, primes_up_to};
pub use lvalue::{e1, gamma2_upper, smoothed_halves, smoothed_halves_s1, terms_needed, E1_SPLIT};
pub use model::{factor, ipow, valuation, Model};
pub use tate::{tate, Kodaira, LocalData, Reduction};

use std::collections::BTreeMap;

use rug::{Float, Integer, Rational};

use crate::curve::weierstrass_model;
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use crate::regulator::{q_ratio_from_l, QRatio};

/// The second cut scale used for root-number resolution.
pub const SECOND_CUT: f64 = 1.3;

/// Largest conductor for which L-values are attempted by default.
pub const DEFAULT_MAX_CONDUCTOR: u64 = 100_000;

/// Minimal model, conductor, root number and known a_p of a curve over ℚ.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveLData {
    pub a_invariants: [Integer; 5],
    pub conductor: Integer,
    pub root_number: Option<i8>,
    pub ap: BTreeMap<u64, i64>,
    pub local: Vec<LocalData>,
}

impl CurveLData {
    pub fn model(&self) -> Model {
        Model::new(self.a_invariants.clone())
    }

    pub fn is_bad(&self, p: u64) -> bool {
        self.local.iter().any(|l| l.p == p && l.reduction != Reduction::Good)
    }

    /// Conductor as a machine integer, if it fits.
    pub fn conductor_u64(&self) -> Result<u64> {
        self.conductor
            .to_u64()
            .ok_or_else(|| Error::InvalidInput(format!("conductor {} too large", self.conductor)))
    }

    pub fn to_cache_file(&self) -> ApCacheFile {
        ApCacheFile {
            a_invariants: self.a_invariants.clone(),
            conductor: self.conductor.clone(),
            root_number: self.root_number,
            ap: self.ap.clone(),
        }
    }
}

/// Global minimal model and conductor of y² = x³ + a4x + a6.
pub fn minimal_model(a4: &Rational, a6: &Rational) -> Result<CurveLData> {
    let mut m = Model::integral_short(a4, a6);
    let disc = m.discriminant();
    if disc == 0 {
        return Err(Error::SingularCurve);
    }
    let mut local = Vec::new();
    for p in factor(&disc).into_keys() {
        let (next, data) = tate(&m, &p)?;
        m = next;
        if data.reduction != Reduction::Good {
            local.push(data);
        }
    }
    let m = m.reduced();
    let mut conductor = Integer::from(1);
    for l in &local {
        conductor *= ipow(&l.p, l.conductor_exponent);
    }
    Ok(CurveLData { a_invariants: m.a, conductor, root_number: None, ap: BTreeMap::new(), local })
}

/// Minimal model data of the Weierstrass model of X_t.
pub fn curve_data(t: &Rational) -> Result<CurveLData> {
    let (a4, a6) = weierstrass_model(t)?;
    minimal_model(&a4, &a6)
}

/// The quadratic twist by −3 of y² = x³ + a4x + a6: (9a4, −27a6).
pub fn twist_minus3(a4: &Rational, a6: &Rational) -> (Rational, Rational) {
    (Rational::from(a4 * 9u32), Rational::from(a6 * -27i32))
}

/// a_p = p + 1 − #Ẽ(𝔽_p) on the minimal model.
pub fn ap(data: &CurveLData, p: u64) -> i64 {
    if let Some(v) = data.ap.get(&p) {
        return *v;
    }
    p as i64 + 1 - data.model().count_points(p) as i64
}

/// Makes a_p available for p ≤ bound, reading and updating the cache.
pub fn ensure_ap(data: &mut CurveLData, bound: u64, cache: Option<&ApCache>) -> Result<()> {
    if let Some(c) = cache {
        if let Some(file) = c.load(&data.a_invariants)? {
            if file.conductor != data.conductor {
                return Err(Error::CacheFormat(format!(
                    "cached conductor {} differs from computed {}",
                    file.conductor, data.conductor
                )));
            }
            data.ap.extend(file.ap);
            if data.root_number.is_none() {
                data.root_number = file.root_number;
            }
        }
    }
    let before = data.ap.len();
    let model = data.model();
    fill_ap(&model, &mut data.ap, bound);
    if let Some(c) = cache {
        if data.ap.len() != before {
            c.store(&data.to_cache_file())?;
        }
    }
    Ok(())
}

/// Result of an L(E, 2) evaluation.
#[derive(Clone, Debug)]
pub struct LValue {
    pub value: Float,
    pub conductor: u64,
    pub root_number: i8,
    /// Number of Dirichlet coefficients used.
    pub terms: usize,
    /// |L at cut 1 − L at the second cut| for the chosen sign.
    pub cut_gap: f64,
}

fn coefficients(data: &mut CurveLData, ctx: &PrecisionContext, cache: Option<&ApCache>) -> Result<(Vec<i64>, u64)> {
    let n = data.conductor_u64()?;
    let nmax = terms_needed(n, SECOND_CUT, ctx);
    ensure_ap(data, nmax as u64, cache)?;
    let snapshot = data.clone();
    Ok((an_coefficients(&data.ap, |p| snapshot.is_bad(p), nmax), n))
}

fn gap(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

/// Acceptance threshold for agreement between the two cut scales.
fn agreement_threshold(ctx: &PrecisionContext) -> f64 {
    ctx.tol() * 100.0
}

/// The sign ε for which the smoothed L(E, 2) agrees at both cut scales;
/// ties are broken by the same test at s = 1.
pub fn root_number(data: &mut CurveLData, ctx: &PrecisionContext, cache: Option<&ApCache>) -> Result<i8> {
    let (an, n) = coefficients(data, ctx, cache)?;
    let eps = resolve_sign(&an, n, ctx)?;
    data.root_number = Some(eps);
    if let Some(c) = cache {
        c.store(&data.to_cache_file())?;
    }
    Ok(eps)
}

/// Cut-scale discrepancies (for ε = +1, ε = −1) of the smoothed L(E, 2).
pub fn sign_discrepancies(an: &[i64], conductor: u64, ctx: &PrecisionContext) -> Result<(f64, f64)> {
    let (p1, q1) = smoothed_halves(an, conductor, 1.0, ctx)?;
    let (p2, q2) = smoothed_halves(an, conductor, SECOND_CUT, ctx)?;
    let plus = gap(&Float::with_val(ctx.prec(), &p1 + &q1), &Float::with_val(ctx.prec(), &p2 + &q2));
    let minus = gap(&Float::with_val(ctx.prec(), &p1 - &q1), &Float::with_val(ctx.prec(), &p2 - &q2));
    Ok((plus, minus))
}

fn resolve_sign(an: &[i64], n: u64, ctx: &PrecisionContext) -> Result<i8> {
    let thr = agreement_threshold(ctx);
    let (plus, minus) = sign_discrepancies(an, n, ctx)?;
    match (plus < thr, minus < thr) {
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (true, true) => {
            let (p1, q1) = smoothed_halves_s1(an, n, 1.0, ctx)?;
            let (p2, q2) = smoothed_halves_s1(an, n, SECOND_CUT, ctx)?;
            let plus = gap(&Float::with_val(ctx.prec(), &p1 + &q1), &Float::with_val(ctx.prec(), &p2 + &q2));
            let minus = gap(&Float::with_val(ctx.prec(), &p1 - &q1), &Float::with_val(ctx.prec(), &p2 - &q2));
            if plus < thr && minus >= thr {
                Ok(1)
            } else if minus < thr && plus >= thr {
                Ok(-1)
            } else {
                Err(Error::RootNumberUnresolved(format!("both signs consistent (gaps {plus:e}, {minus:e})")))
            }
        }
        (false, false) => Err(Error::RootNumberUnresolved(format!(
            "cut-scale gaps {plus:e} (ε = +1) and {minus:e} (ε = −1)"
        ))),
    }
}

/// L(E, 2) via the smoothed approximate functional equation.
pub fn l_value_s2(data: &mut CurveLData, ctx: &PrecisionContext, cache: Option<&ApCache>) -> Result<LValue> {
    let (an, n) = coefficients(data, ctx, cache)?;
    let eps = match data.root_number {
        Some(e) => e,
        None => {
            let e = resolve_sign(&an, n, ctx)?;
            data.root_number = Some(e);
            if let Some(c) = cache {
                c.store(&data.to_cache_file())?;
            }
            e
        }
    };
    let (p1, q1) = smoothed_halves(&an, n, 1.0, ctx)?;
    let (p2, q2) = smoothed_halves(&an, n, SECOND_CUT, ctx)?;
    let value = if eps == 1 { p1 + q1 } else { p1 - q1 };
    let other = if eps == 1 { p2 + q2 } else { p2 - q2 };
    let cut_gap = gap(&value, &other);
    if cut_gap >= agreement_threshold(ctx) {
        return Err(Error::RootNumberUnresolved(format!("cached sign {eps} gives cut gap {cut_gap:e}")));
    }
    Ok(LValue { value, conductor: n, root_number: eps, terms: an.len() - 1, cut_gap })
}

/// L(X_{t,K}, 2) over ℚ(ζ₃) as L(E_t, 2)·L(E_t ⊗ χ₋₃, 2).
pub fn l_value_quadratic(t: &Rational, ctx: &PrecisionContext, cache: Option<&ApCache>) -> Result<(Float, LValue, LValue)> {
    let (a4, a6) = weierstrass_model(t)?;
    let (b4, b6) = twist_minus3(&a4, &a6);
    let mut e = minimal_model(&a4, &a6)?;
    let mut tw = minimal_model(&b4, &b6)?;
    let l1 = l_value_s2(&mut e, ctx, cache)?;
    let l2 = l_value_s2(&mut tw, ctx, cache)?;
    let prod = Float::with_val(ctx.prec(), &l1.value * &l2.value);
    Ok((prod, l1, l2))
}

/// One row of the Q_t table.
#[derive(Clone, Debug)]
pub enum QEntry {
    Computed { conductor: u64, l_value: Float, ratio: QRatio },
    Skipped { conductor: Integer },
}

/// Q_t = reg_hesse(t)·π²/L(X_t, 2), skipped when the conductor exceeds
/// `max_conductor`.
pub fn q_ratio(t: &Rational, max_conductor: u64, ctx: &PrecisionContext, cache: Option<&ApCache>) -> Result<QEntry> {
    let mut data = curve_data(t)?;
    if data.conductor > max_conductor {
        return Ok(QEntry::Skipped { conductor: data.conductor });
    }
    let l = l_value_s2(&mut data, ctx, cache)?;
    let tol = ctx.tol() * 100.0;
    let ratio = q_ratio_from_l(t, &l.value, tol, ctx)?;
    Ok(QEntry::Computed { conductor: l.conductor, l_value: l.value, ratio })
}

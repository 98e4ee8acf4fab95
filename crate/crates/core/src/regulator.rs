//! Regulator formulas: the functions H1, H2, K_{1,z}, K_{2,z}, the constants
//! C1, C2, the regulator values of ξ(ζ), ξ(ρz), ξ_Hes and ξ′, the ratios
//! Q_t and the regulator determinants.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::hyper::{kdf, pfq_q, q, KdfSpec};
use crate::numerics::{digamma_rational, rational_reconstruct_tol, PrecisionContext};
use crate::periods::{beta_constants, Cycle};

/// H1, H2, K_{1,z}, K_{2,z} (indexed by k for z = ζ^k) and C1, C2 at one t.
#[derive(Clone, Debug)]
pub struct HBundle {
    pub h1: Complex,
    pub h2: Complex,
    pub k1: [Complex; 3],
    pub k2: [Complex; 3],
    pub c1: Float,
    pub c2: Float,
}

fn cube(t: &Complex) -> Complex {
    let t2 = Complex::with_val(t.prec().0, t * t);
    t2 * t
}

fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// H1(t) = B_{1/3}·t·₃F₂(1/3,1/3,1/3; 4/3,2/3; t³), |t³| ≤ 1, t³ ≠ 1.
pub fn h1(t: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let t3 = cube(t);
    let (b13, _) = beta_constants(ctx)?;
    let f = pfq_q(&[(1, 3), (1, 3), (1, 3)], &[(4, 3), (2, 3)], &t3, ctx)?;
    Ok(f * &b13 * t)
}

/// H2(t) = ½B_{2/3}·t²·₃F₂(2/3,2/3,2/3; 5/3,4/3; t³), |t³| ≤ 1, t³ ≠ 1.
pub fn h2(t: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let t3 = cube(t);
    let (_, b23) = beta_constants(ctx)?;
    let f = pfq_q(&[(2, 3), (2, 3), (2, 3)], &[(5, 3), (4, 3)], &t3, ctx)?;
    let t2 = Complex::with_val(ctx.prec(), t * t);
    Ok(f * &b23 * t2 / 2u32)
}

fn kdf_at(params: [(i64, i64); 6], t3: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = params.map(|(n, d)| q(n, d));
    kdf(&KdfSpec::new(p, t3.clone(), t3.clone()), ctx)
}

fn check_open_disc(t3: &Complex) -> Result<()> {
    if abs(t3) >= 1u32 {
        return Err(Error::DivergentArgument(format!("|t³| = {} ≥ 1", abs(t3).to_f64())));
    }
    Ok(())
}

/// The two Kampé de Fériet terms of K_1 without the z-factors:
/// (−(3/2)B_{1/3}t²·F[2/3;5/3;1/3,1/3;2/3;1], B_{1/3}t³·F[1;2;1/3,1/3;2/3;1]).
fn k1_parts(t: &Complex, ctx: &PrecisionContext) -> Result<(Complex, Complex)> {
    let prec = ctx.prec();
    let t3 = cube(t);
    check_open_disc(&t3)?;
    let (b13, _) = beta_constants(ctx)?;
    let t2 = Complex::with_val(prec, t * t);
    let f1 = kdf_at([(2, 3), (5, 3), (1, 3), (1, 3), (2, 3), (1, 1)], &t3, ctx)?;
    let f2 = kdf_at([(1, 1), (2, 1), (1, 3), (1, 3), (2, 3), (1, 1)], &t3, ctx)?;
    let p1 = -(f1 * &b13 * t2 * 3u32) / 2u32;
    let p2 = f2 * &b13 * &t3;
    Ok((p1, p2))
}

/// (−B_{2/3}t³·F[1;2;2/3,2/3;4/3;1], (3/4)B_{2/3}t⁴·F[4/3;7/3;2/3,2/3;4/3;1]).
fn k2_parts(t: &Complex, ctx: &PrecisionContext) -> Result<(Complex, Complex)> {
    let prec = ctx.prec();
    let t3 = cube(t);
    check_open_disc(&t3)?;
    let (_, b23) = beta_constants(ctx)?;
    let t4 = Complex::with_val(prec, &t3 * t);
    let f1 = kdf_at([(1, 1), (2, 1), (2, 3), (2, 3), (4, 3), (1, 1)], &t3, ctx)?;
    let f2 = kdf_at([(4, 3), (7, 3), (2, 3), (2, 3), (4, 3), (1, 1)], &t3, ctx)?;
    let p1 = -(f1 * &b23 * &t3);
    let p2 = f2 * &b23 * t4 * 3u32 / 4u32;
    Ok((p1, p2))
}

fn combine(parts: &(Complex, Complex), k: i64, ctx: &PrecisionContext) -> Complex {
    let z = ctx.zeta3_pow(k);
    let z2 = ctx.zeta3_pow(2 * k);
    Complex::with_val(ctx.prec(), &parts.0 * &z) + Complex::with_val(ctx.prec(), &parts.1 * &z2)
}

/// K_{1,z}(t) for z = ζ^k, |t³| < 1.
pub fn k1(t: &Complex, k: i64, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(combine(&k1_parts(t, ctx)?, k, ctx))
}

/// K_{2,z}(t) for z = ζ^k, |t³| < 1.
pub fn k2(t: &Complex, k: i64, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(combine(&k2_parts(t, ctx)?, k, ctx))
}

static C_MEMO: OnceLock<Mutex<HashMap<(u32, u64), (Float, Float)>>> = OnceLock::new();

/// C1 = 3B_{1/3}·₃F₂(1/3,1/3,1; 4/3,2/3; 1) and
/// C2 = (3/2)B_{2/3}·₃F₂(2/3,2/3,1; 5/3,4/3; 1), memoized per precision.
pub fn c_constants(ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let key = (ctx.prec(), ctx.tol().to_bits());
    let memo = C_MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = memo.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(v) = guard.get(&key) {
        return Ok(v.clone());
    }
    let one = ctx.complex(1);
    let (b13, b23) = beta_constants(ctx)?;
    let f1 = pfq_q(&[(1, 3), (1, 3), (1, 1)], &[(4, 3), (2, 3)], &one, ctx)?;
    let f2 = pfq_q(&[(2, 3), (2, 3), (1, 1)], &[(5, 3), (4, 3)], &one, ctx)?;
    let c1 = Float::with_val(ctx.prec(), f1.real()) * &b13 * 3u32;
    let c2 = Float::with_val(ctx.prec(), f2.real()) * &b23 * 3u32 / 2u32;
    guard.insert(key, (c1.clone(), c2.clone()));
    Ok((c1, c2))
}

/// All H, K and C quantities at t, |t³| < 1.
pub fn h_bundle(t: &Complex, ctx: &PrecisionContext) -> Result<HBundle> {
    let (c1, c2) = c_constants(ctx)?;
    let kp1 = k1_parts(t, ctx)?;
    let kp2 = k2_parts(t, ctx)?;
    Ok(HBundle {
        h1: h1(t, ctx)?,
        h2: h2(t, ctx)?,
        k1: [0, 1, 2].map(|k| combine(&kp1, k, ctx)),
        k2: [0, 1, 2].map(|k| combine(&kp2, k, ctx)),
        c1,
        c2,
    })
}

/// (1/2πi)·r as a real number: Im(r)/(2π).
pub fn normalized(value: &Complex, ctx: &PrecisionContext) -> Float {
    Float::with_val(ctx.prec(), value.imag()) / (ctx.pi() * 2u32)
}

/// γ = A − F_∞(A) evaluates as 2A + 3B.
fn assemble(a: Complex, b: Complex, cycle: Cycle) -> Complex {
    match cycle {
        Cycle::A => a,
        Cycle::B => b,
        Cycle::Gamma => a * 2u32 + b * 3u32,
    }
}

/// u = −t/(1 − t³)^{1/3} on the principal branch.
pub fn transformed_argument(t: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let w = Complex::with_val(prec, 1 - cube(t));
    if w.imag().is_zero() && *w.real() <= 0 {
        return Err(Error::BranchUndefined(format!("1 − t³ = {} on the cut (−∞, 0]", w.real().to_f64())));
    }
    let third = Float::with_val(prec, 3).recip();
    let root = Complex::with_val(prec, rug::ops::Pow::pow(&w, &third));
    Ok(-(Complex::with_val(prec, t / &root)))
}

/// r(ξ(ζ)_t)(κ): cycle A gives −9ζ²H1(u) + 9ζH2(u), cycle B gives
/// −3ζ(1−ζ)(H1(u) + H2(u)), u = −t/(1−t³)^{1/3}.
pub fn reg_xi_zeta(t: &Complex, cycle: Cycle, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let u = transformed_argument(t, ctx)?;
    let u3 = cube(&u);
    if abs(&u3) > 1u32 {
        return Err(Error::DivergentArgument(format!("|u³| = {} > 1", abs(&u3).to_f64())));
    }
    let a1 = h1(&u, ctx)?;
    let a2 = h2(&u, ctx)?;
    let z = ctx.zeta3();
    let z2 = ctx.zeta3_pow(2);
    let a = Complex::with_val(prec, &a2 * &z) * 9u32 - Complex::with_val(prec, &a1 * &z2) * 9u32;
    let zz = Complex::with_val(prec, &z - &z2);
    let b = -(Complex::with_val(prec, &a1 + &a2) * zz * 3u32);
    Ok(assemble(a, b, cycle))
}

/// r(ξ(ρz)_t)(κ) for z = ζ^k, from the bundle at t.
pub fn reg_xi_rho_from(bundle: &HBundle, k: i64, cycle: Cycle, ctx: &PrecisionContext) -> Complex {
    let prec = ctx.prec();
    let z = ctx.zeta3_pow(k);
    let z2 = ctx.zeta3_pow(2 * k);
    let zeta = ctx.zeta3();
    let one_m_zeta = Complex::with_val(prec, 1 - &zeta);
    let one_m_zeta2 = Complex::with_val(prec, 1 - ctx.zeta3_pow(2));
    let idx = |e: i64| e.rem_euclid(3) as usize;
    let k1_z2 = &bundle.k1[idx(2 * k)];
    let k2_z = &bundle.k2[idx(k)];
    let k2_z2 = &bundle.k2[idx(2 * k)];
    let c_part = Complex::with_val(prec, &z * &bundle.c1) + Complex::with_val(prec, &z2 * &bundle.c2);
    let p1 = Complex::with_val(prec, &bundle.h1 + k1_z2);
    let p2 = Complex::with_val(prec, &bundle.h2 + k2_z);
    let a = -Complex::with_val(prec, &one_m_zeta * &p1) + Complex::with_val(prec, &one_m_zeta2 * &p2)
        - Complex::with_val(prec, &z * &one_m_zeta) * &bundle.c1
        - Complex::with_val(prec, &z2 * &one_m_zeta2) * &bundle.c2;
    let b = Complex::with_val(prec, &bundle.h1 + k1_z2) - &bundle.h2 - k2_z2 + c_part;
    assemble(a, b, cycle)
}

/// r(ξ(ρz)_t)(κ) for z = ζ^k, |t³| < 1.
pub fn reg_xi_rho(t: &Complex, k: i64, cycle: Cycle, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(reg_xi_rho_from(&h_bundle(t, ctx)?, k, cycle, ctx))
}

/// r(ξ′_t)(κ) for ξ′ = 2ξ(ρ) − ξ(ρζ) − ξ(ρζ²), |t³| < 1.
pub fn reg_xi_prime(t: &Complex, cycle: Cycle, ctx: &PrecisionContext) -> Result<Complex> {
    let b = h_bundle(t, ctx)?;
    let r0 = reg_xi_rho_from(&b, 0, cycle, ctx);
    let r1 = reg_xi_rho_from(&b, 1, cycle, ctx);
    let r2 = reg_xi_rho_from(&b, 2, cycle, ctx);
    Ok(r0 * 2u32 - r1 - r2)
}

/// r(ξ_Hes,t)(κ) = (1/3)Σ_z r(ξ(ρz)_t)(κ), |t³| < 1.
pub fn reg_xi_hesse_cycle(t: &Complex, cycle: Cycle, ctx: &PrecisionContext) -> Result<Complex> {
    let b = h_bundle(t, ctx)?;
    let sum = reg_xi_rho_from(&b, 0, cycle, ctx) + reg_xi_rho_from(&b, 1, cycle, ctx) + reg_xi_rho_from(&b, 2, cycle, ctx);
    Ok(sum / 3u32)
}

/// (√3/2π)(H1(t) + H2(t)) for real t with |t| ≤ 1, t ≠ 1.
pub fn reg_hesse_series(t: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    if *t == 1 {
        return Err(Error::SingularParameter("1".into()));
    }
    let tc = ctx.complex(t);
    let s = h1(&tc, ctx)? + h2(&tc, ctx)?;
    let sqrt3 = ctx.float(3).sqrt();
    Ok(Float::with_val(ctx.prec(), s.real()) * sqrt3 / (ctx.pi() * 2u32))
}

/// −(1/3)(2ψ(1) − ψ(1/3) − ψ(2/3) + 3log|t| − (2/(9t³))·₄F₃(4/3,5/3,1,1; 2,2,2; 1/t³))
/// for real |t| ≥ 1, t ≠ 1.
pub fn reg_hesse_zudilin(t: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    if *t == 1 {
        return Err(Error::SingularParameter("1".into()));
    }
    if Rational::from(t.abs_ref()) < 1 {
        return Err(Error::DivergentArgument(format!("|t| = |{t}| < 1 for the 1/t³ expansion")));
    }
    let prec = ctx.prec();
    let t3 = Rational::from(t * t) * t;
    let inv = ctx.complex(&Rational::from(t3.recip_ref()));
    let f = pfq_q(&[(4, 3), (5, 3), (1, 1), (1, 1)], &[(2, 1), (2, 1), (2, 1)], &inv, ctx)?;
    let f = Float::with_val(prec, f.real());
    let psi = digamma_rational(&q(1, 1), ctx)? * 2u32 - digamma_rational(&q(1, 3), ctx)? - digamma_rational(&q(2, 3), ctx)?;
    let log = ctx.from_rational(&Rational::from(t.abs_ref())).ln() * 3u32;
    let corr = f * 2u32 / ctx.from_rational(&Rational::from(&t3 * 9u32));
    Ok(-(psi + log - corr) / 3u32)
}

/// (1/2πi)r(ξ_Hes,t)(γ) for real t ≠ 1: the series form for |t| ≤ 1 and the
/// 1/t³ expansion (with log|t|) for |t| > 1.
pub fn reg_hesse(t: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    if Rational::from(t.abs_ref()) <= 1 {
        reg_hesse_series(t, ctx)
    } else {
        reg_hesse_zudilin(t, ctx)
    }
}

/// Numeric Q_t with its rational reconstruction.
#[derive(Clone, Debug)]
pub struct QRatio {
    pub value: Float,
    pub fraction: Option<Rational>,
}

/// Largest denominator tried when reconstructing Q_t.
pub const Q_MAX_DEN: u64 = 10_000;

/// Q_t = reg_hesse(t)·π²/L(X_t, 2) given the L-value and its accuracy.
pub fn q_ratio_from_l(t: &Rational, l_value: &Float, l_tol: f64, ctx: &PrecisionContext) -> Result<QRatio> {
    if *t == 0 {
        return Err(Error::InvalidInput("t = 0 has trivial regulator".into()));
    }
    let reg = reg_hesse(t, ctx)?;
    let pi2 = Float::with_val(ctx.prec(), ctx.pi().square_ref());
    let value = reg * pi2 / l_value;
    // relative error of L carries over to Q
    let tol = (l_tol / l_value.to_f64().abs()).max(ctx.tol()) * value.to_f64().abs().max(1.0);
    let fraction = rational_reconstruct_tol(&value, Q_MAX_DEN, tol);
    Ok(QRatio { value, fraction })
}

/// Which regulator determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetKind {
    MinusTwo,
    MinusHalf,
    Zero,
}

impl fmt::Display for DetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetKind::MinusTwo => write!(f, "minus2"),
            DetKind::MinusHalf => write!(f, "minusHalf"),
            DetKind::Zero => write!(f, "zero"),
        }
    }
}

impl FromStr for DetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus2" | "-2" => Ok(DetKind::MinusTwo),
            "minusHalf" | "minushalf" | "-1/2" => Ok(DetKind::MinusHalf),
            "zero" | "0" => Ok(DetKind::Zero),
            _ => Err(Error::InvalidInput(format!("unknown determinant {s}"))),
        }
    }
}

/// Entries of a 2×2 regulator determinant, each already divided by 2πi.
#[derive(Clone, Debug)]
pub struct RegDet {
    pub kind: DetKind,
    /// [[γ-entry of first element, γ-entry of second], [B-entry of first, B-entry of second]]
    pub entries: [[Float; 2]; 2],
    pub value: Float,
}

/// R₋₂ = |det| for {ξ_Hes,−2, ξ(ζ)_−2}, R₋₁⁄₂ for {ξ′_−1/2, ξ(ζ)_−1/2} and R₀ for
/// {ξ(ρ)_0, ξ(ρζ)_0}.
pub fn reg_det(kind: DetKind, ctx: &PrecisionContext) -> Result<RegDet> {
    let prec = ctx.prec();
    let zero = Float::with_val(prec, 0);
    let entries = match kind {
        DetKind::MinusTwo => {
            let t = ctx.complex(-2);
            let g1 = reg_hesse(&q(-2, 1), ctx)?;
            let g2 = normalized(&reg_xi_zeta(&t, Cycle::Gamma, ctx)?, ctx);
            // ξ_Hes is defined over ℚ and its B-entry vanishes
            let b2 = normalized(&reg_xi_zeta(&t, Cycle::B, ctx)?, ctx);
            [[g1, g2], [zero, b2]]
        }
        DetKind::MinusHalf => {
            let t = ctx.complex(&q(-1, 2));
            let g1 = normalized(&reg_xi_prime(&t, Cycle::Gamma, ctx)?, ctx);
            let b1 = normalized(&reg_xi_prime(&t, Cycle::B, ctx)?, ctx);
            let g2 = normalized(&reg_xi_zeta(&t, Cycle::Gamma, ctx)?, ctx);
            let b2 = normalized(&reg_xi_zeta(&t, Cycle::B, ctx)?, ctx);
            [[g1, g2], [b1, b2]]
        }
        DetKind::Zero => {
            let b = h_bundle(&ctx.complex(0), ctx)?;
            let g1 = normalized(&reg_xi_rho_from(&b, 0, Cycle::Gamma, ctx), ctx);
            let g2 = normalized(&reg_xi_rho_from(&b, 1, Cycle::Gamma, ctx), ctx);
            let b1 = normalized(&reg_xi_rho_from(&b, 0, Cycle::B, ctx), ctx);
            let b2 = normalized(&reg_xi_rho_from(&b, 1, Cycle::B, ctx), ctx);
            [[g1, g2], [b1, b2]]
        }
    };
    let det = Float::with_val(prec, &entries[0][0] * &entries[1][1]) - Float::with_val(prec, &entries[0][1] * &entries[1][0]);
    Ok(RegDet { kind, entries, value: det.abs() })
}

/// X = B_{1/3}·₃F₂(1/3,1/3,1; 4/3,2/3; 1) − ½B_{2/3}·₃F₂(2/3,2/3,1; 5/3,4/3; 1) = C1/3 − C2/3.
pub fn fermat_combination(ctx: &PrecisionContext) -> Result<Float> {
    let (c1, c2) = c_constants(ctx)?;
    Ok((c1 - c2) / 3u32)
}

/// (27/4π²)·X², the stated closed form of R₀.
pub fn r0_closed_form(ctx: &PrecisionContext) -> Result<Float> {
    let x = fermat_combination(ctx)?;
    let pi2 = Float::with_val(ctx.prec(), ctx.pi().square_ref());
    Ok(x.square() * 27u32 / (pi2 * 4u32))
}

/// L(j₃, 2) = (2π/(27√3))·X.
pub fn l_j3_closed_form(ctx: &PrecisionContext) -> Result<Float> {
    let x = fermat_combination(ctx)?;
    let sqrt3 = ctx.float(3).sqrt();
    Ok(x * ctx.pi() * 2u32 / (sqrt3 * 27u32))
}

/// The three combinations of the final remark:
/// X at argument 1, −(H1 + H2)(−2) continued through the 1/t³ expansion, and
/// (H1 + H2)(2/∛9) (argument 8/9).
pub fn final_remark_values(ctx: &PrecisionContext) -> Result<[Float; 3]> {
    let prec = ctx.prec();
    let x1 = fermat_combination(ctx)?;
    let sqrt3 = ctx.float(3).sqrt();
    let x2 = -reg_hesse_zudilin(&q(-2, 1), ctx)? * ctx.pi() * 2u32 / sqrt3;
    let u = Float::with_val(prec, 2) / ctx.float(9).cbrt();
    let uc = Complex::with_val(prec, &u);
    let s = h1(&uc, ctx)? + h2(&uc, ctx)?;
    let x3 = Float::with_val(prec, s.real());
    Ok([x1, x2, x3])
}

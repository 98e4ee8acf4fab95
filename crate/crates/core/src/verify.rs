//! Acceptance criteria as runnable checks, one report per criterion.
//!
//! Criteria listed in [`KNOWN_DEVIATIONS`] are expected to fail.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Integer, Rational};

use crate::curve::*;
use crate::integrality::{is_integral, Element};
use crate::lseries::*;
use crate::mahler::mahler_vs_regulator_defect;
use crate::numerics::PrecisionContext;
use crate::periods::*;
use crate::regulator::*;
use crate::Error;

const DIGITS: u32 = 40;
const TOL_HGR: f64 = 1e-25;
const TOL_RIEMANN: f64 = 1e-25;
const TOL_BETA_PRODUCT: f64 = 1e-30;
const GM_STEP: f64 = 1e-6;
const TOL_GM: f64 = 1e-8;
const TOL_GM_ORDER: f64 = 0.1;
const TOL_CONSTANTS: f64 = 1e-15;
const TOL_Q_DIGITS: f64 = 1e-12;
const TOL_MAHLER: f64 = 1e-8;
const TOL_R0: f64 = 1e-15;
const TOL_FINAL_REMARK: f64 = 1e-15;
const TOL_DOUBLING: f64 = 1e-28;

/// Criteria expected to fail under the pinned regulator normalization.
pub const KNOWN_DEVIATIONS: &[u32] = &[8];

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn ctx() -> PrecisionContext {
    PrecisionContext::with_digits(DIGITS).unwrap()
}

fn lit(c: &PrecisionContext, s: &str) -> Float {
    Float::with_val(c.prec(), Float::parse(s).unwrap())
}

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

fn rel(a: &Float, b: &Float) -> f64 {
    diff(a, b) / b.to_f64().abs().max(1e-300)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let c = ctx();
    let mut pts: Vec<(f64, f64)> = (0..12).map(|k| (-0.9 + 0.16 * k as f64, 0.0)).collect();
    pts.extend([(0.3, 0.4), (-0.5, 0.5), (0.0, -0.9), (0.6, -0.2), (-0.4, -0.6), (0.1, 0.85), (0.7, 0.5), (-0.85, 0.2)]);
    let mut worst = 0f64;
    for (re, im) in pts {
        let x = Complex::with_val(c.prec(), (re, im));
        worst = worst.max(hgr_defect(&x, &c).map_err(err)?.to_f64());
    }
    check(worst < TOL_HGR, format!("20 points, max defect {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let c = ctx();
    let mut worst = 0f64;
    for i in 0..5 {
        for j in 0..4 {
            // |t³| ≤ 0.9
            let r = 0.2 + 0.19 * i as f64;
            let th = 0.4 + 1.57 * j as f64;
            let t = Complex::with_val(c.prec(), (r * th.cos(), r * th.sin()));
            worst = worst.max(riemann_defect(&t, &c).map_err(err)?.to_f64());
        }
    }
    let (b13, b23) = beta_constants(&c).map_err(err)?;
    let prod = Float::with_val(c.prec(), &b13 * &b23);
    let target = c.float(3).sqrt() * c.pi() * 2u32;
    let beta = diff(&prod, &target);
    check(
        worst < TOL_RIEMANN && beta < TOL_BETA_PRODUCT,
        format!("20-point grid max defect {worst:.2e}, |B13·B23 − 2√3π| = {beta:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let c = ctx();
    let mut worst = 0f64;
    for (re, im) in [(0.1, 0.0), (0.2, 0.1), (0.5, 0.0)] {
        let t = Complex::with_val(c.prec(), (re, im));
        worst = worst.max(gauss_manin_defect(&t, &c.float(GM_STEP), &c).map_err(err)?.to_f64());
    }
    let t = Complex::with_val(c.prec(), (0.2, 0.1));
    let d1 = gauss_manin_defect(&t, &c.float(1e-3), &c).map_err(err)?.to_f64();
    let d2 = gauss_manin_defect(&t, &c.float(5e-4), &c).map_err(err)?.to_f64();
    let ratio = d1 / d2;
    check(
        worst < TOL_GM && (ratio - 4.0).abs() < TOL_GM_ORDER,
        format!("max defect {worst:.2e} at h = {GM_STEP:e}, halving ratio {ratio:.4}"),
    )
}

fn criterion_4() -> Outcome {
    let c = ctx();
    let lc = PrecisionContext::with_digits(32).map_err(err)?;
    let m2 = c.complex(-2);
    let mh = c.complex(&q(-1, 2));
    let values = [
        ("gamma(-2)", reg_hesse(&q(-2, 1), &c).map_err(err)?, "-1.80071452138923251950118540574"),
        (
            "gamma'(-1/2)",
            normalized(&reg_xi_prime(&mh, Cycle::Gamma, &c).map_err(err)?, &c),
            "14.4089573238768907909417772888",
        ),
        ("B(-2)", normalized(&reg_xi_zeta(&m2, Cycle::B, &c).map_err(err)?, &c), "-5.40214356416769755850355621723"),
        ("B(-1/2)", normalized(&reg_xi_zeta(&mh, Cycle::B, &c).map_err(err)?, &c), "-2.31650091536356314247467082900"),
        ("L_K(-2)", l_value_quadratic(&q(-2, 1), &lc, None).map_err(err)?.0, "0.770263235106996761384701873629"),
        ("L_K(-1/2)", l_value_quadratic(&q(-1, 2), &lc, None).map_err(err)?.0, "0.991115983384380609583674632211"),
    ];
    let mut detail = String::new();
    let mut ok = true;
    for (name, v, printed) in &values {
        let r = rel(v, &lit(&c, printed));
        ok &= r < TOL_CONSTANTS;
        let _ = write!(detail, "{name} {r:.1e}; ");
    }
    check(ok, format!("relative errors: {}", detail.trim_end_matches("; ")))
}

/// Stored Q_t table as (3t, fraction) pairs.
pub fn golden_q_table() -> Vec<(i64, Rational)> {
    let text = include_str!("../data/qtable.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let (n, f) = line.split_once(',').unwrap();
            (n.parse().unwrap(), f.parse::<Rational>().unwrap())
        })
        .collect()
}

fn criterion_5(suite: Suite) -> Outcome {
    let c = PrecisionContext::with_digits(25).map_err(err)?;
    let table = golden_q_table();
    let expected = |n: i64| table.iter().find(|(m, _)| *m == n).map(|(_, f)| f.clone()).unwrap();
    let mut ok = true;
    let mut worst = 0f64;
    for n in [-6, -3, -2, -1, 1, 2, 5] {
        let target = expected(n);
        match q_ratio(&q(n, 3), DEFAULT_MAX_CONDUCTOR, &c, None).map_err(err)? {
            QEntry::Computed { ratio, .. } => {
                let r = rel(&ratio.value, &Float::with_val(c.prec(), &target));
                worst = worst.max(r);
                ok &= r < TOL_Q_DIGITS && ratio.fraction.as_ref() == Some(&target);
            }
            QEntry::Skipped { .. } => ok = false,
        }
    }
    let mut detail = format!("core subset max rel {worst:.1e}");
    if suite == Suite::Core {
        return check(ok, detail);
    }
    let (mut matched, mut skipped, mut mismatched) = (0, 0, Vec::new());
    for (n, target) in &table {
        match q_ratio(&q(*n, 3), DEFAULT_MAX_CONDUCTOR, &c, None).map_err(err)? {
            QEntry::Computed { ratio, .. } if ratio.fraction.as_ref() == Some(target) => matched += 1,
            QEntry::Computed { ratio, .. } => {
                let got = ratio.fraction.map_or_else(|| format!("{:.15}", ratio.value.to_f64()), |f| f.to_string());
                mismatched.push(format!("3t={n}: computed {got}, table {target}"));
            }
            QEntry::Skipped { .. } => skipped += 1,
        }
    }
    let _ = write!(detail, "; stretch {matched}/{} match, {skipped} skipped", table.len());
    if !mismatched.is_empty() {
        let _ = write!(detail, ", differs: {}", mismatched.join("; "));
    }
    check(ok, detail)
}

fn criterion_6() -> Outcome {
    let f = QZetaField;
    let mut bad = Vec::new();
    for n in -20i64..=20 {
        if n == 3 {
            continue;
        }
        if !is_integral(&qz(&q(n, 3)), Element::XiHesse).map_err(err)?.integral {
            bad.push(format!("3t={n}"));
        }
    }
    let samples = [
        (1, 2), (5, 2), (-7, 4), (1, 5), (2, 7), (11, 6), (-1, 2), (13, 10), (-5, 3), (7, 9),
        (3, 4), (-9, 5), (17, 8), (1, 9), (-4, 7), (19, 2), (-11, 3), (6, 5), (-13, 4), (2, 11),
    ];
    for (n, m) in samples {
        if is_integral(&qz(&q(n, 3 * m)), Element::XiHesse).map_err(err)?.integral {
            bad.push(format!("3t={n}/{m}"));
        }
    }
    let prime = is_integral(&qz(&q(-1, 2)), Element::XiPrimeHalf).map_err(err)?.integral;
    if !prime {
        bad.push("xi_prime_half".into());
    }
    let mut sample: Vec<QZeta> = [(0, 1), (-2, 1), (-1, 2), (1, 2), (2, 1), (-1, 1), (1, 3), (3, 2), (-3, 1), (5, 3), (-1, 4)]
        .iter()
        .chain(&[(1, 5), (4, 1), (-4, 1), (3, 1), (-1, 3), (1, 6), (-5, 2), (7, 3), (-2, 3), (2, 5)])
        .map(|&(n, d)| qz(&q(n, d)))
        .collect();
    for k in 1..3 {
        let u = f.zeta_pow(k);
        sample.push(f.mul(&u, &QZeta::int(-2)));
        sample.push(f.mul(&u, &qz(&q(-1, 2))));
        sample.push(f.mul(&u, &QZeta::int(2)));
    }
    sample.push(f.mul(&f.zeta(), &qz(&q(1, 2))));
    sample.push(f.mul(&f.zeta(), &QZeta::int(-3)));
    sample.push(QZeta::new(q(2, 1), q(-1, 1)));
    let special = [QZeta::int(0), QZeta::int(-8), qz(&q(-1, 8))];
    for t in &sample {
        let expected = special.contains(&f.pow(t, 3));
        if is_integral(t, Element::XiZeta).map_err(err)?.integral != expected {
            bad.push(format!("xi_zeta at {t}"));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            format!("xi_hesse 40+20 parameters, xi_prime_half, xi_zeta {} parameters", sample.len())
        } else {
            format!("wrong verdicts: {}", bad.join(", "))
        },
    )
}

fn criterion_7() -> Outcome {
    let c = PrecisionContext::with_digits(25).map_err(err)?;
    let mut detail = String::new();
    let mut worst = 0f64;
    for (n, d) in [(-2, 1), (-1, 1), (-1, 2), (5, 3), (2, 1)] {
        let v = mahler_vs_regulator_defect(&q(n, d), &c).map_err(err)?.to_f64();
        worst = worst.max(v);
        let _ = write!(detail, "{}: {v:.1e}; ", q(n, d));
    }
    check(worst < TOL_MAHLER, format!("defects {}", detail.trim_end_matches("; ")))
}

fn criterion_8() -> Outcome {
    let c = ctx();
    let r0 = reg_det(DetKind::Zero, &c).map_err(err)?.value;
    let closed = r0_closed_form(&c).map_err(err)?;
    let l = l_j3_closed_form(&c).map_err(err)?;
    let pi4 = Float::with_val(c.prec(), c.pi() * 2u32).square().square();
    let via_l = Float::with_val(c.prec(), 59049u32) / pi4 * l.clone().square();
    let lc = PrecisionContext::with_digits(32).map_err(err)?;
    let lk = l_value_quadratic(&q(0, 1), &lc, None).map_err(err)?.0;
    let d_closed = diff(&r0, &closed);
    let d_l = diff(&closed, &via_l);
    let d_lk = diff(&lk, &Float::with_val(lc.prec(), l.square_ref()));
    let ratio = Float::with_val(c.prec(), &r0 / &closed).to_f64();
    check(
        d_closed < TOL_R0 && d_l < TOL_R0 && d_lk < TOL_R0,
        format!("|R0 − closed| = {d_closed:.2e} (ratio {ratio:.15}), |closed − 3^10 L²/(2π)^4| = {d_l:.2e}, |L(X0/K) − L(j3)²| = {d_lk:.2e}"),
    )
}

fn criterion_9() -> Outcome {
    let c = ctx();
    let [x1, x2, x3] = final_remark_values(&c).map_err(err)?;
    let (a, b, d) = (diff(&x1, &x2), diff(&x1, &x3), diff(&x2, &x3));
    check(
        a.max(b).max(d) < TOL_FINAL_REMARK,
        format!("pairwise differences {a:.1e}, {b:.1e}, {d:.1e}"),
    )
}

fn random_point(c: &HesseCurve<PrimeField>, rng: &mut ChaCha8Rng) -> HessePoint<u64> {
    let p = c.field().p();
    loop {
        let x = rng.gen_range(0..p);
        let ys: Vec<u64> = (0..p).filter(|&y| c.contains(&c.point(x, y, 1))).collect();
        if !ys.is_empty() {
            return c.point(x, ys[rng.gen_range(0..ys.len())], 1);
        }
    }
}

fn group_law_suite() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e55e);
    let primes = [7u64, 13, 103, 307, 613, 997];
    let mut done = 0;
    while done < 50 {
        let p = primes[rng.gen_range(0..primes.len())];
        let t = rng.gen_range(0..p);
        if t * t % p * t % p == 1 {
            continue;
        }
        let c = HesseCurve::new(PrimeField::new(p).unwrap(), t).map_err(err)?;
        let (a, b, d) = (random_point(&c, &mut rng), random_point(&c, &mut rng), random_point(&c, &mut rng));
        let l = c.add(&c.add(&a, &b).map_err(err)?, &d).map_err(err)?;
        let r = c.add(&a, &c.add(&b, &d).map_err(err)?).map_err(err)?;
        if !c.same_point(&l, &r) {
            return Err(format!("associativity fails over F_{p} at t = {t}"));
        }
        done += 1;
    }
    Ok(())
}

fn symbol_suite() -> Result<(), String> {
    let expected_beta = TorsionDivisor::from_pairs(&[((1, 0), 9), ((1, 1), 9), ((1, 2), 9)]);
    for t in [qz(&q(-2, 1)), qz(&q(-1, 2)), qz(&q(4, 3))] {
        let symbols = [
            MotivicSymbol::xi_zeta(t.clone()),
            MotivicSymbol::xi_rho(t.clone(), 1),
            MotivicSymbol::xi_hesse(t.clone()),
            MotivicSymbol::xi_prime(t.clone()),
            MotivicSymbol::xy_symbol(t.clone()),
        ];
        for s in &symbols {
            if !tame_symbol_check(s).map_err(err)? {
                return Err(format!("tame symbol of {} at {t}", s.name));
            }
        }
        let b_xy = bloch_beta(&symbols[4]).map_err(err)?;
        if b_xy != expected_beta || bloch_beta(&symbols[2]).map_err(err)? != b_xy {
            return Err(format!("Bloch β identity at {t}"));
        }
    }
    Ok(())
}

fn ap_suite() -> Result<(), String> {
    for t in [q(-2, 1), q(-1, 1), q(5, 3), q(20, 3)] {
        let mut data = curve_data(&t).map_err(err)?;
        ensure_ap(&mut data, 1000, None).map_err(err)?;
        for (&p, &a) in &data.ap {
            if !data.is_bad(p) && (a * a) as u64 > 4 * p {
                return Err(format!("Hasse bound at t = {t}, p = {p}"));
            }
        }
        let an = an_coefficients(&data.ap, |p| data.is_bad(p), 1000);
        for m in 1..32usize {
            for n in 1..32usize {
                if Integer::from(m).gcd(&Integer::from(n)) == 1 && an[m * n] != an[m] * an[n] {
                    return Err(format!("multiplicativity at t = {t}, {m}·{n}"));
                }
            }
        }
    }
    Ok(())
}

fn cache_suite() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let cache = ApCache::new(dir.path());
    let c = PrecisionContext::with_digits(20).map_err(err)?;
    let mut data = curve_data(&q(-1, 1)).map_err(err)?;
    let l1 = l_value_s2(&mut data, &c, Some(&cache)).map_err(err)?;
    let text = std::fs::read_to_string(cache.path_for(&data.a_invariants)).map_err(err)?;
    let parsed = ApCacheFile::parse(&text).map_err(err)?;
    if parsed.serialize() != text || parsed.root_number != Some(l1.root_number) {
        return Err("cache file round trip".into());
    }
    let mut again = curve_data(&q(-1, 1)).map_err(err)?;
    let l2 = l_value_s2(&mut again, &c, Some(&cache)).map_err(err)?;
    if l1.value != l2.value || again.ap != data.ap {
        return Err("cached L-value differs".into());
    }
    Ok(())
}

fn doubling_suite() -> Result<(), String> {
    let c = PrecisionContext::with_digits(30).map_err(err)?;
    let d = c.doubled();
    for t in [q(-2, 1), q(5, 3), q(-1, 2)] {
        let a = reg_hesse(&t, &c).map_err(err)?;
        let b = reg_hesse(&t, &d).map_err(err)?;
        if diff(&b, &a) > TOL_DOUBLING {
            return Err(format!("reg_hesse at {t} moves under doubling"));
        }
    }
    let x = c.complex(&q(-1, 2));
    let xd = d.complex(&q(-1, 2));
    let a = period_vector(&x, &c).map_err(err)?.b_omega;
    let b = period_vector(&xd, &d).map_err(err)?.b_omega;
    if Float::with_val(d.prec(), Complex::with_val(d.prec(), &a - &b).abs_ref()).to_f64() > TOL_DOUBLING {
        return Err("periods move under doubling".into());
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let suites: [(&str, fn() -> Result<(), String>); 5] = [
        ("group law", group_law_suite),
        ("symbols", symbol_suite),
        ("a_p", ap_suite),
        ("cache", cache_suite),
        ("doubling", doubling_suite),
    ];
    let mut failed = Vec::new();
    for (name, run) in suites {
        if let Err(e) = run() {
            failed.push(format!("{name}: {e}"));
        }
    }
    check(
        failed.is_empty(),
        if failed.is_empty() {
            "group law, tame symbols, Bloch β, a_p, cache, precision doubling".into()
        } else {
            failed.join("; ")
        },
    )
}

/// Which criteria set to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Required checks only; the Q_t table is limited to its rigorous subset.
    Core,
    /// Also the full Q_t table.
    Full,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "core" => Ok(Suite::Core),
            "full" => Ok(Suite::Full),
            _ => Err(Error::InvalidInput(format!("unknown suite {s}"))),
        }
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub passed: bool,
    pub known_deviation: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    /// A failure not listed in [`KNOWN_DEVIATIONS`].
    pub fn unexpected_failure(&self) -> bool {
        !self.passed && !self.known_deviation
    }
}

/// Number of criteria.
pub const CRITERIA: u32 = 10;

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u32, suite: Suite) -> Result<CriterionReport, Error> {
    let run = || match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(suite),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        _ => criterion_10(),
    };
    if !(1..=CRITERIA).contains(&id) {
        return Err(Error::InvalidInput(format!("no criterion {id}")));
    }
    let start = Instant::now();
    let outcome = run();
    let seconds = start.elapsed().as_secs_f64();
    let passed = outcome.is_ok();
    let detail = outcome.unwrap_or_else(|e| e);
    Ok(CriterionReport { id, passed, known_deviation: !passed && KNOWN_DEVIATIONS.contains(&id), detail, seconds })
}

/// Runs every criterion in order.
pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run_criterion(id, suite).expect("criterion ids are in range")).collect()
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let note = if self.known_deviation { " (known deviation)" } else { "" };
        write!(f, "criterion {:>2}: {status}{note} [{:.1}s] {}", self.id, self.seconds, self.detail)
    }
}

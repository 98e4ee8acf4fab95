//! Implementations of the subcommands.

use hesse_core::curve::{Field, QZeta, QZetaField};
use hesse_core::hyper::{kdf, pfq, KdfSpec, PfqSpec};
use hesse_core::integrality::{is_integral, Element};
use hesse_core::lseries::{curve_data, l_value_quadratic, l_value_s2, q_ratio, ApCache, QEntry};
use hesse_core::mahler::{in_curved_triangle, mahler_measure, mahler_measure_one_sided, mahler_vs_regulator_defect};
use hesse_core::numerics::PrecisionContext;
use hesse_core::periods::{period_vector, Cycle};
use hesse_core::regulator::*;
use hesse_core::verify::{golden_q_table, run_suite, Suite};
use hesse_core::Error;
use rayon::prelude::*;
use rug::{Complex, Rational};
use serde_json::{json, Map, Value};

use crate::output::{cplx, frac, real, CommandResult};
use crate::CliError;

/// Settings shared by all subcommands.
pub struct Env {
    /// Working context, carrying guard digits beyond `digits`.
    pub ctx: PrecisionContext,
    /// Significant digits printed.
    pub digits: u32,
    pub cache: Option<ApCache>,
}

impl Env {
    fn digits(&self) -> u32 {
        self.digits
    }

    fn complex(&self, z: &(Rational, Rational)) -> Complex {
        Complex::with_val(self.ctx.prec(), (&z.0, &z.1))
    }
}

fn show(z: &(Rational, Rational)) -> String {
    match (z.0.is_zero(), z.1.is_zero()) {
        (_, true) => z.0.to_string(),
        (true, false) => format!("{}i", z.1),
        _ if z.1 < 0 => format!("{}{}i", z.0, z.1),
        _ => format!("{}+{}i", z.0, z.1),
    }
}

pub fn hyper_pfq(env: &Env, upper: &[Rational], lower: &[Rational], x: &(Rational, Rational)) -> Result<CommandResult, CliError> {
    let spec = PfqSpec::new(upper, lower, env.complex(x));
    let v = pfq(&spec, &env.ctx)?;
    let mut r = CommandResult::new("hyper pfq");
    r.input("upper", upper.iter().map(frac).collect::<Vec<_>>())
        .input("lower", lower.iter().map(frac).collect::<Vec<_>>())
        .input("x", show(x))
        .output("value", cplx(&v, env.digits()))
        .output("excess", frac(&spec.excess()));
    if spec.excess() > 0 && x.1.is_zero() && Rational::from(x.0.abs_ref()) == 1 {
        r.note("unit-circle argument: tail summed by asymptotic expansion");
    }
    Ok(r)
}

pub fn hyper_kdf(env: &Env, params: [Rational; 6], x: &(Rational, Rational), y: &(Rational, Rational)) -> Result<CommandResult, CliError> {
    let spec = KdfSpec::new(params.clone(), env.complex(x), env.complex(y));
    let v = kdf(&spec, &env.ctx)?;
    let mut r = CommandResult::new("hyper kdf");
    let names = ["a", "c", "b1", "b2", "d", "bp"];
    let p: Map<String, Value> = names.iter().zip(&params).map(|(n, q)| (n.to_string(), frac(q))).collect();
    r.input("params", p).input("x", show(x)).input("y", show(y)).output("value", cplx(&v, env.digits()));
    Ok(r)
}

pub fn periods(env: &Env, t: &(Rational, Rational)) -> Result<CommandResult, CliError> {
    let v = period_vector(&env.complex(t), &env.ctx)?;
    let d = env.digits();
    let mut r = CommandResult::new("periods");
    r.input("t", show(t))
        .output("A_omega", cplx(&v.a_omega, d))
        .output("B_omega", cplx(&v.b_omega, d))
        .output("A_eta", cplx(&v.a_eta, d))
        .output("B_eta", cplx(&v.b_eta, d));
    Ok(r)
}

pub fn regulator(env: &Env, t: &(Rational, Rational), element: &str, k: i64, cycle: Cycle) -> Result<CommandResult, CliError> {
    let ctx = &env.ctx;
    let tc = env.complex(t);
    let mut r = CommandResult::new("regulator");
    r.input("t", show(t)).input("element", element).input("cycle", cycle.to_string());
    let raw = match element {
        "xi_zeta" => {
            r.note("argument u = -t/(1-t^3)^(1/3), principal branch");
            reg_xi_zeta(&tc, cycle, ctx)?
        }
        "xi_rho" => {
            r.input("k", k);
            reg_xi_rho(&tc, k, cycle, ctx)?
        }
        "xi_prime" => reg_xi_prime(&tc, cycle, ctx)?,
        "xi_hesse" => {
            if cycle == Cycle::Gamma && t.1.is_zero() && Rational::from(t.0.abs_ref()) > 1 {
                r.note("1/t^3 expansion with log|t|");
                let v = reg_hesse(&t.0, ctx)?;
                r.output("normalized", real(&v, env.digits()));
                return Ok(r);
            }
            reg_xi_hesse_cycle(&tc, cycle, ctx)?
        }
        other => return Err(CliError::Usage(format!("--element: unknown element {other}"))),
    };
    r.output("raw", cplx(&raw, env.digits())).output("normalized", real(&normalized(&raw, ctx), env.digits()));
    r.note("normalized = Im(r)/(2*pi)");
    Ok(r)
}

fn q_row(env: &Env, n: i64, max_conductor: u64, expected: Option<&Rational>) -> Map<String, Value> {
    let t = Rational::from((n, 3));
    let mut row = Map::new();
    row.insert("three_t".into(), json!(n));
    row.insert("t".into(), frac(&t));
    row.insert("expected".into(), expected.map(frac).unwrap_or(Value::Null));
    match q_ratio(&t, max_conductor, &env.ctx, env.cache.as_ref()) {
        Ok(QEntry::Computed { conductor, l_value, ratio }) => {
            row.insert("conductor".into(), json!(conductor));
            row.insert("l_value".into(), real(&l_value, env.digits()));
            row.insert("q".into(), real(&ratio.value, env.digits()));
            row.insert("fraction".into(), ratio.fraction.as_ref().map(frac).unwrap_or(Value::Null));
            let status = match (expected, &ratio.fraction) {
                (None, _) => "computed",
                (Some(e), Some(f)) if e == f => "match",
                _ => "differs",
            };
            row.insert("status".into(), json!(status));
        }
        Ok(QEntry::Skipped { conductor }) => {
            row.insert("conductor".into(), json!(conductor.to_string()));
            row.insert("status".into(), json!("skipped"));
        }
        Err(e) => {
            row.insert("status".into(), json!("error"));
            row.insert("error".into(), json!(e.to_string()));
        }
    }
    row
}

pub fn qtable(env: &Env, from: i64, to: i64, max_conductor: u64) -> Result<CommandResult, CliError> {
    if from > to {
        return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let golden = golden_q_table();
    let ns: Vec<i64> = (from..=to).filter(|&n| n != 0 && n != 3).collect();
    let mut r = CommandResult::new("qtable");
    r.input("from", from).input("to", to).input("max_conductor", max_conductor);
    r.rows = ns
        .par_iter()
        .map(|&n| q_row(env, n, max_conductor, golden.iter().find(|(m, _)| *m == n).map(|(_, f)| f)))
        .collect();
    let count = |s: &str| r.rows.iter().filter(|row| row["status"] == s).count();
    let summary = json!({
        "match": count("match"),
        "differs": count("differs"),
        "skipped": count("skipped"),
        "error": count("error"),
    });
    r.output("summary", summary);
    r.note("3t = 0 (trivial regulator) and 3t = 3 (singular fibre) are omitted");
    Ok(r)
}

fn l_json(l: &hesse_core::lseries::LValue, digits: u32) -> Value {
    json!({
        "value": real(&l.value, digits),
        "conductor": l.conductor,
        "root_number": l.root_number,
        "terms": l.terms,
        "cut_gap": format!("{:e}", l.cut_gap),
    })
}

pub fn lvalue(env: &Env, t: &Rational, field: &str) -> Result<CommandResult, CliError> {
    let mut r = CommandResult::new("lvalue");
    r.input("t", frac(t)).input("field", field);
    match field {
        "Q" | "q" => {
            let mut data = curve_data(t)?;
            let l = l_value_s2(&mut data, &env.ctx, env.cache.as_ref())?;
            r.output("L", l_json(&l, env.digits()));
            r.output("minimal_model", data.model().to_string());
        }
        "K" | "k" => {
            let (v, e, tw) = l_value_quadratic(t, &env.ctx, env.cache.as_ref())?;
            r.output("value", real(&v, env.digits()))
                .output("L_E", l_json(&e, env.digits()))
                .output("L_twist", l_json(&tw, env.digits()));
            r.note("L(X/K, s) = L(E, s) L(E^(-3), s)");
        }
        other => return Err(CliError::Usage(format!("--field: expected Q or K, got {other}"))),
    }
    Ok(r)
}

pub fn integrality(t: &QZeta, element: Element) -> Result<CommandResult, CliError> {
    let v = is_integral(t, element)?;
    let mut r = CommandResult::new("integrality");
    r.input("t", t.to_string()).input("element", element.name());
    r.output("integral", v.integral).output("cm", v.cm);
    r.rows = v
        .coefficients
        .iter()
        .map(|(rep, c)| {
            let mut row = Map::new();
            row.insert("prime".into(), json!(rep.v.to_string()));
            row.insert("norm".into(), json!(rep.v.norm().to_string()));
            row.insert("reduction".into(), json!(rep.kind.label()));
            row.insert("n".into(), json!(rep.n));
            row.insert("boundary".into(), frac(c));
            row
        })
        .collect();
    if v.cm {
        r.note("CM parameter: K'_1 of the special fibres is torsion");
    }
    Ok(r)
}

pub fn mahler(env: &Env, t: &(Rational, Rational), one_sided: bool) -> Result<CommandResult, CliError> {
    let ctx = &env.ctx;
    let mut r = CommandResult::new("mahler");
    r.input("t", show(t)).input("one_sided", one_sided);
    match in_curved_triangle(&env.complex(t), ctx) {
        Ok(b) => r.output("in_curved_triangle", b),
        Err(Error::Inconclusive) => r.output("in_curved_triangle", "inconclusive"),
        Err(e) => return Err(e.into()),
    };
    if !t.1.is_zero() {
        r.note("complex parameter: membership only");
        return Ok(r);
    }
    let tf = ctx.from_rational(&t.0);
    let m = if one_sided { mahler_measure_one_sided(&tf, ctx)? } else { mahler_measure(&tf, ctx)? };
    r.output("value", real(&m.value, env.digits()))
        .output("quadrature_error", format!("{:e}", m.quadrature_error))
        .output("panels", m.panels)
        .output("edge", m.one_sided);
    if t.0 != 1 {
        let d = mahler_vs_regulator_defect(&t.0, ctx)?;
        r.output("regulator_defect", format!("{:e}", d.to_f64()));
    }
    Ok(r)
}

pub fn regdet(env: &Env, kind: DetKind) -> Result<CommandResult, CliError> {
    let ctx = &env.ctx;
    let d = reg_det(kind, ctx)?;
    let digits = env.digits();
    let mut r = CommandResult::new("regdet");
    r.input("kind", kind.to_string());
    let entries: Vec<Vec<Value>> = d.entries.iter().map(|row| row.iter().map(|x| real(x, digits)).collect()).collect();
    r.output("value", real(&d.value, digits)).output("entries", entries);
    if kind == DetKind::Zero {
        let closed = r0_closed_form(ctx)?;
        r.output("closed_form", real(&closed, digits))
            .output("ratio_to_closed_form", real(&(d.value.clone() / &closed), digits));
    }
    Ok(r)
}

pub fn verify(suite: Suite) -> Result<(CommandResult, bool), CliError> {
    let reports = run_suite(suite);
    let mut r = CommandResult::new("verify");
    r.input("suite", if suite == Suite::Core { "core" } else { "full" });
    let ok = !reports.iter().any(|x| x.unexpected_failure());
    r.rows = reports
        .iter()
        .map(|x| {
            let mut row = Map::new();
            row.insert("criterion".into(), json!(x.id));
            row.insert("status".into(), json!(if x.passed { "pass" } else { "fail" }));
            row.insert("known_deviation".into(), json!(x.known_deviation));
            row.insert("detail".into(), json!(x.detail));
            row.insert("seconds".into(), json!(format!("{:.2}", x.seconds)));
            row
        })
        .collect();
    r.output("passed", reports.iter().filter(|x| x.passed).count()).output("all_expected", ok);
    Ok((r, ok))
}

/// a + bζ.
pub fn qzeta(a: Rational, b: Rational) -> QZeta {
    let f = QZetaField;
    f.add(&QZeta::rational(a), &f.mul(&QZeta::rational(b), &f.zeta()))
}

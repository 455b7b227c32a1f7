use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use lieval::chevalley::build_chevalley;
use lieval::cohomology::{hodge_dims_check, kostant_check, semidirect_degeneration_check};
use lieval::coinvariants::{coinvariant_algebra, cross_validate};
use lieval::gradedlie::{build_gbar, build_tilde_g, verify_mod_epsilon_iso};
use lieval::morava::{
    build_division_graded, check_nonsplit_weight_lemma, morava_cohomology, predicted_morava_poincare,
    verify_base_change,
};
use lieval::padicgroups::verify_mp_suite;
use lieval::rootsys::{check_weight_lemma, Weight};

use crate::{render_poly, Outcome, TypeArgs, Warnings};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Mp,
    Kostant,
    Morava,
    Hodge,
    Semidirect,
    Coinvariants,
    Weight,
    ModEpsilon,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub what: Check,
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub f: u32,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    /// Matrix size for `mp` and `morava` (default 2); lattice index for `weight` (default p^f - 1).
    #[arg(long)]
    pub n: Option<usize>,
    /// p-adic precision.
    #[arg(long = "N", default_value_t = 12)]
    pub precision: u32,
    /// Degree bound of g~ in whole degrees for `mod-epsilon`.
    #[arg(long, default_value_t = 3)]
    pub truncation: u32,
    /// Random trials for `mp`.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

struct CheckResult {
    name: &'static str,
    passed: bool,
    summary: String,
    detail: Value,
}

impl VerifyArgs {
    fn p(&self) -> anyhow::Result<u64> {
        let p = self.p.ok_or_else(|| anyhow!("--p is required"))?;
        if !lieval::linfp::is_prime(p) {
            return Err(anyhow!("--p {p} is not prime"));
        }
        Ok(p)
    }
}

fn mp(a: &VerifyArgs, seed: u64) -> anyhow::Result<CheckResult> {
    let (n, p) = (a.n.unwrap_or(2), a.p()?);
    let reports = verify_mp_suite(n, p, a.precision, a.trials, seed)?;
    let passed = reports.iter().all(|r| r.passed());
    let parts: Vec<String> = reports.iter().map(|r| format!("{} {}/{}", r.op, r.trials - r.failures.len() as u64, r.trials)).collect();
    Ok(CheckResult {
        name: "mp",
        passed,
        summary: format!("SL{n} p={p} N={}: {}", a.precision, parts.join(", ")),
        detail: serde_json::to_value(&reports)?,
    })
}

fn kostant(a: &VerifyArgs) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let r = kostant_check(&rs, p, &Weight::zero(rs.rank()))?;
    let counts: Vec<usize> = r.degrees.iter().map(|d| d.0.len()).collect();
    Ok(CheckResult {
        name: "kostant",
        passed: r.ok,
        summary: format!("{} p={p}: H^i(n) dims {counts:?}, total {} vs |W| = {}", rs.cartan_type, r.total, r.weyl_order),
        detail: serde_json::to_value(&r)?,
    })
}

fn hodge(a: &VerifyArgs) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let r = hodge_dims_check(&rs, p)?;
    Ok(CheckResult {
        name: "hodge",
        passed: r.ok,
        summary: format!("{} p={p}: diagonal {:?}", rs.cartan_type, r.length_counts),
        detail: serde_json::to_value(&r)?,
    })
}

fn semidirect(a: &VerifyArgs) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let r = semidirect_degeneration_check(&rs, p, false)?;
    Ok(CheckResult {
        name: "semidirect",
        passed: r.ok,
        summary: format!("{} p={p}: H(gbar) {} vs E2 {}", rs.cartan_type, render_poly(&r.gbar), render_poly(&r.spectral)),
        detail: serde_json::to_value(&r)?,
    })
}

fn coinvariants(a: &VerifyArgs, strict: bool, warnings: &mut Warnings) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let q = coinvariant_algebra(&rs, p)?;
    let r = cross_validate(&rs, p)?;
    let h = rs.coxeter_number;
    warnings.check(r.hypothesis_ok, format!("p = {p} violates p > h + 1 = {}; cross-validation recorded without a claim", h + 1), strict)?;
    let passed = q.dims() == rs.length_polynomial() && r.agree.unwrap_or(true);
    Ok(CheckResult {
        name: "coinvariants",
        passed,
        summary: format!(
            "{} p={p}: coinvariants dim {} ({}), CE {} vs Koszul {}",
            rs.cartan_type,
            q.total_dim(),
            render_poly(&q.dims()),
            render_poly(&r.ce),
            r.koszul.as_deref().map_or("n/a".into(), render_poly)
        ),
        detail: json!({ "coinvariant_dims": q.dims(), "cross_validation": r }),
    })
}

fn weight(a: &VerifyArgs, strict: bool, warnings: &mut Warnings) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let n = match a.n {
        Some(n) => n as u64,
        None => p.checked_pow(a.f).context("p^f overflows")? - 1,
    };
    let r = check_weight_lemma(&rs, p, a.f, n)?;
    warnings.check(r.hypothesis_ok, format!("n = {n} violates n > h (1 + p + ... + p^(f-1))"), strict)?;
    Ok(CheckResult {
        name: "weight",
        passed: r.holds,
        summary: format!("{} p={p} f={} n={n}: {} tuples, holds = {}", rs.cartan_type, a.f, r.tuples_checked, r.holds),
        detail: serde_json::to_value(&r)?,
    })
}

fn mod_epsilon(a: &VerifyArgs) -> anyhow::Result<CheckResult> {
    let (rs, p) = (a.ty.root_system()?, a.p()?);
    let ch = build_chevalley(&rs, false)?;
    let tg = build_tilde_g(&ch, a.e, p, a.truncation, 1)?;
    let gb = build_gbar(&ch, p)?;
    let iso = verify_mod_epsilon_iso(&tg, &gb)?;
    let eps = tg.epsilon_violation();
    let grading = tg.grading_violation();
    let jacobi = tg.lie.jacobi_violation();
    Ok(CheckResult {
        name: "mod-epsilon",
        passed: iso.ok && eps.is_none() && grading.is_none() && jacobi.is_none(),
        summary: format!("{} p={p} e={}: g~ dim {}, gbar dim {}", rs.cartan_type, a.e, tg.lie.dim(), gb.dim()),
        detail: json!({
            "iso": iso,
            "epsilon_violation": eps,
            "grading_violation": grading,
            "jacobi_violation": jacobi,
        }),
    })
}

fn morava(a: &VerifyArgs, seed: u64) -> anyhow::Result<CheckResult> {
    let (n, p) = (a.n.unwrap_or(2), a.p()?);
    let p32 = u32::try_from(p)?;
    let base = verify_base_change(n, p32, a.f)?;
    let table = morava_cohomology(n, p32, a.f)?;
    let predicted = predicted_morava_poincare(n, a.f);
    let lemma = check_nonsplit_weight_lemma(n, p32, a.f)?;
    let jacobi = build_division_graded(n, p32, a.f, 2 * n + 2)?.jacobi_violation(seed)?;
    let passed = base.ok && table.poincare == predicted && lemma.holds && jacobi.is_none();
    Ok(CheckResult {
        name: "morava",
        passed,
        summary: format!(
            "n={n} p={p} f={}: base change {} ({} pairs), H* {} vs {}",
            a.f,
            if base.ok { "ok" } else { "FAILED" },
            base.pairs_checked,
            render_poly(&table.poincare),
            render_poly(&predicted)
        ),
        detail: json!({
            "base_change": base,
            "table": table.to_json(),
            "predicted": predicted,
            "nonsplit_weight_lemma": lemma,
            "jacobi_violation": jacobi,
        }),
    })
}

pub fn cmd_verify(a: &VerifyArgs, seed: u64, strict: bool) -> anyhow::Result<Outcome> {
    let mut warnings = Warnings::default();
    let selected: Vec<Check> = match a.what {
        Check::All => vec![
            Check::Kostant,
            Check::Hodge,
            Check::Semidirect,
            Check::Coinvariants,
            Check::Weight,
            Check::ModEpsilon,
            Check::Mp,
            Check::Morava,
        ],
        c => vec![c],
    };
    let mut results = Vec::new();
    for c in selected {
        results.push(match c {
            Check::Mp => mp(a, seed)?,
            Check::Kostant => kostant(a)?,
            Check::Hodge => hodge(a)?,
            Check::Semidirect => semidirect(a)?,
            Check::Coinvariants => coinvariants(a, strict, &mut warnings)?,
            Check::Weight => weight(a, strict, &mut warnings)?,
            Check::ModEpsilon => mod_epsilon(a)?,
            Check::Morava => morava(a, seed)?,
            Check::All => unreachable!(),
        });
    }
    let passed = results.iter().all(|r| r.passed);
    let json = json!({
        "command": "verify",
        "params": {
            "type": a.ty.ty, "rank": a.ty.rank, "p": a.p, "f": a.f, "e": a.e, "n": a.n,
            "N": a.precision, "truncation": a.truncation, "trials": a.trials,
        },
        "seed": seed,
        "checks": results.iter().map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail })).collect::<Vec<_>>(),
        "passed": passed,
        "warnings": warnings.0,
    });
    let mut pretty: String = warnings.0.iter().map(|w| format!("warning: {w}\n")).collect();
    for r in &results {
        pretty.push_str(&format!("{} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.summary));
    }
    Ok(Outcome { json, pretty, csv: None, passed })
}

//! `lieval`: compute and verify cohomology of graded Lie algebras attached to
//! split reductive p-adic groups.
//!
//! Exit codes: 0 pass, 1 mathematical mismatch, 2 hypothesis or configuration error.

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lieval::chevalley::build_chevalley;
use lieval::cohomology::{gbar_table, kunneth_twist, predicted_poincare, CohomologyTable, Lattice, WeightFilter};
use lieval::gradedlie::{build_gbar, build_tilde_g, tilde_g_json};
use lieval::rootsys::{CartanType, RootSystem};

#[derive(Parser)]
#[command(name = "lieval", version, about = "Mod-p cohomology of graded Lie algebras of p-adic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// CSV rows `degree,weight_coords,dim` (tables only).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat hypothesis warnings as errors (exit 2).
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone, Debug)]
pub struct TypeArgs {
    /// Cartan type such as `A2`, or a family letter combined with `--rank`.
    #[arg(long = "type")]
    pub ty: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
}

impl TypeArgs {
    pub fn root_system(&self) -> anyhow::Result<RootSystem> {
        let ty = self.ty.as_deref().ok_or_else(|| anyhow!("--type is required"))?;
        let name = match self.rank {
            Some(r) if ty.len() == 1 => format!("{ty}{r}"),
            Some(r) => bail!("--rank {r} given together with the full type {ty}"),
            None => ty.to_string(),
        };
        let ct: CartanType = name.parse().map_err(|e| anyhow!("{e}"))?;
        Ok(RootSystem::new(ct)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Weight-zero cohomology of gbar compared with prod (1 + t^{2m+1})^f.
    Cohomology {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
    },
    /// Closed-form Poincaré polynomial for Iwahori cohomology (no computation).
    Predict {
        /// Comma-separated simple factors such as `A1,B2`; `GLn` adds `A(n-1)` and a central torus.
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long, default_value_t = 0)]
        center_rank: u32,
        #[arg(long, default_value_t = 1)]
        f: u32,
        /// Checks `p > h + 1` for every factor when given.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Run verification suites.
    Verify(verify::VerifyArgs),
    /// Print structure constants as JSON.
    Dump {
        #[arg(value_enum)]
        what: DumpKind,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Degree bound of g~ in whole degrees.
        #[arg(long, default_value_t = 3)]
        truncation: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DumpKind {
    Chevalley,
    TildeG,
    Gbar,
}

/// Rendered result plus its exit status.
pub struct Outcome {
    pub json: serde_json::Value,
    pub pretty: String,
    pub csv: Option<String>,
    pub passed: bool,
}

/// Hypothesis violations that are warnings unless `--strict`.
#[derive(Default)]
pub struct Warnings(pub Vec<String>);

impl Warnings {
    pub fn check(&mut self, ok: bool, message: String, strict: bool) -> anyhow::Result<()> {
        if !ok {
            if strict {
                return Err(lieval::Error::Hypothesis(message).into());
            }
            self.0.push(message);
        }
        Ok(())
    }
}

pub fn render_poly(c: &[u64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(k, &x)| match (k, x) {
            (0, x) => x.to_string(),
            (1, 1) => "t".into(),
            (1, x) => format!("{x}t"),
            (k, 1) => format!("t^{k}"),
            (k, x) => format!("{x}t^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn trimmed(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn cmd_cohomology(ty: &TypeArgs, p: u64, f: u32, strict: bool) -> anyhow::Result<Outcome> {
    let rs = ty.root_system()?;
    if !lieval::linfp::is_prime(p) {
        bail!("--p {p} is not prime");
    }
    let mut warnings = Warnings::default();
    let h = rs.coxeter_number;
    warnings.check(p as i64 > h + 1, format!("p = {p} violates p > h + 1 = {}", h + 1), strict)?;
    let ch = build_chevalley(&rs, false)?;
    let table: CohomologyTable = if f == 1 {
        gbar_table(&ch, p, &WeightFilter::Zero)?
    } else {
        let all = gbar_table(&ch, p, &WeightFilter::All)?;
        let q = i64::try_from(p.checked_pow(f).context("p^f overflows")?)?;
        kunneth_twist(&all, f, &Lattice::scalar(rs.rank(), q - 1)?)?
    };
    let predicted = predicted_poincare(&rs.exponents, f);
    let passed = trimmed(table.poincare.clone()) == predicted;
    let json = json!({
        "command": "cohomology",
        "table": table.to_json(),
        "predicted": predicted,
        "match": passed,
        "warnings": warnings.0,
    });
    let mut pretty = String::new();
    for w in &warnings.0 {
        pretty.push_str(&format!("warning: {w}\n"));
    }
    pretty.push_str(&format!(
        "{} p={p} f={f}\ncomputed:  {}\npredicted: {}\n{}\n",
        rs.cartan_type,
        render_poly(&table.poincare),
        render_poly(&predicted),
        if passed { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome { json, pretty, csv: Some(table.to_csv()), passed })
}

fn cmd_predict(ty: Option<&str>, center_rank: u32, f: u32, p: Option<u64>, strict: bool) -> anyhow::Result<Outcome> {
    let mut warnings = Warnings::default();
    let mut center = center_rank;
    let mut factors = Vec::new();
    for token in ty.into_iter().flat_map(|s| s.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
        let upper = token.to_ascii_uppercase();
        let name = if let Some(n) = upper.strip_prefix("GL") {
            let n: usize = n.parse().with_context(|| format!("bad factor {token}"))?;
            center += 1;
            if n < 2 {
                continue;
            }
            format!("A{}", n - 1)
        } else {
            upper
        };
        let rs = RootSystem::from_name(&name)?;
        if let Some(p) = p {
            let h = rs.coxeter_number;
            warnings.check(p as i64 > h + 1, format!("p = {p} violates p > h + 1 = {} for {name}", h + 1), strict)?;
        }
        factors.push(rs);
    }
    let mut poly = vec![1u64];
    for _ in 0..center * f {
        poly = lieval::rootsys::poly_mul(&poly, &[1, 1]);
    }
    for rs in &factors {
        poly = lieval::rootsys::poly_mul(&poly, &predicted_poincare(&rs.exponents, f));
    }
    let names: Vec<String> = factors.iter().map(|r| r.cartan_type.to_string()).collect();
    let json = json!({
        "command": "predict",
        "factors": names,
        "center_rank": center,
        "f": f,
        "poincare": poly,
        "warnings": warnings.0,
    });
    let mut pretty: String = warnings.0.iter().map(|w| format!("warning: {w}\n")).collect();
    pretty.push_str(&format!("{}\n", render_poly(&poly)));
    Ok(Outcome { json, pretty, csv: None, passed: true })
}

fn cmd_dump(what: DumpKind, ty: &TypeArgs, p: u64, e: u32, truncation: u32) -> anyhow::Result<Outcome> {
    let rs = ty.root_system()?;
    let ch = build_chevalley(&rs, false)?;
    let json = match what {
        DumpKind::Chevalley => ch.to_json(),
        DumpKind::TildeG => tilde_g_json(&build_tilde_g(&ch, e, p, truncation, 1)?),
        DumpKind::Gbar => {
            let gb = build_gbar(&ch, p)?;
            json!({ "lie": gb.lie.to_json(), "degrees": gb.degrees, "denominator": gb.denominator })
        }
    };
    let pretty = serde_json::to_string_pretty(&json)? + "\n";
    Ok(Outcome { json, pretty, csv: None, passed: true })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Cohomology { ty, p, f } => cmd_cohomology(ty, *p, *f, cli.strict),
        Command::Predict { ty, center_rank, f, p } => cmd_predict(ty.as_deref(), *center_rank, *f, *p, cli.strict),
        Command::Verify(args) => verify::cmd_verify(args, cli.seed, cli.strict),
        Command::Dump { what, ty, p, e, truncation } => cmd_dump(*what, ty, *p, *e, *truncation),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> anyhow::Result<()> {
    let text = if cli.json {
        serde_json::to_string_pretty(&outcome.json)? + "\n"
    } else if cli.csv {
        outcome.csv.clone().ok_or_else(|| anyhow!("--csv is only available for tables"))?
    } else {
        outcome.pretty.clone()
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("LIEVAL_THREADS") {
        match n.parse::<usize>() {
            Ok(n) => {
                lieval::par::set_threads(n);
            }
            Err(_) => {
                eprintln!("error: LIEVAL_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli).and_then(|o| emit(&cli, &o).map(|_| o.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

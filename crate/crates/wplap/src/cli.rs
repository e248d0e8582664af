//! Command-line front end.
//!
//! Subcommands: `mu`, `bounds`, `table`, `verify-sharpness`, `verify-bound`,
//! `verify-gradient`, `verify-lich`, `ptrig`. Each prints a human summary to
//! stdout and optionally writes a machine-readable artifact (`--out`, JSON or
//! CSV via `--format`). Artifacts are deterministic for a fixed command line
//! and seed, except for the timestamp, which is confined to the header
//! object. Relative `--out` paths resolve under `$WPLAP_OUT_DIR` when set.
//!
//! Exit codes: 0 success, 1 usage error (including precondition/regime
//! violations), 2 verification verdict failure, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundsError};
use crate::eigensolve::{
    model_eigenfunction, mu_shoot, EigenError, EigenQuery, EigenRecord,
};
use crate::prufer::ModelError;
use crate::ptrig::{PExponent, PtrigError};
use crate::verify::{self, PerturbationSpec, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wplap",
    version,
    about = "Sharp first-eigenvalue machinery for the weighted p-Laplacian model problem"
)]
pub struct CommandSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Artifact file; relative paths resolve under $WPLAP_OUT_DIR.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the model eigenvalue μ_p(κ, D) by Prüfer shooting.
    Mu {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: f64,
        /// Relative bisection tolerance on λ.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Theorem-level bound report for (p, κ[, D]).
    Bounds {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep a Cartesian grid of comma-separated p, κ, D values.
    Table {
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        kappa: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        diameter: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check sharpness: the discrete model segment eigenvalue vs μ_p(κ, D).
    VerifySharpness {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: f64,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check λ_h ≥ μ_p(κ, D) on seeded convex-perturbed segments.
    VerifyBound {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: f64,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds to run.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Run a full campaign spec (JSON file) instead of seeded defaults.
        #[arg(long)]
        campaign: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the gradient comparison |u'| ≤ φ'(Ψ(u)) on a seeded segment.
    VerifyGradient {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: f64,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the Lichnerowicz-type bound on a Gaussian-type segment (κ > 0).
    VerifyLich {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        diameter: f64,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate p-trigonometric functions.
    Ptrig {
        #[arg(long)]
        p: f64,
        /// Evaluation point for sin_p/cos_p/tan_p.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Artifact envelope: everything except the header is deterministic for a
/// fixed command line and seed.
#[derive(Debug, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub header: Header,
    pub record: T,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub timestamp_unix: u64,
}

impl Header {
    fn now() -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: "wplap".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Ptrig(#[from] PtrigError),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Eigen(#[from] EigenError),
    #[error("{0}")]
    Bounds(#[from] BoundsError),
    #[error("{0}")]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    /// A check ran to completion and its verdict is negative.
    #[error("verdict failure: {0}")]
    Verdict(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Verdict(_) => EXIT_VERDICT,
            CliError::Ptrig(_) => EXIT_USAGE,
            CliError::Model(e) => match e {
                ModelError::Ptrig(_)
                | ModelError::InvalidLambda(_)
                | ModelError::InvalidKappa(_)
                | ModelError::PositiveKappa(_) => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            },
            CliError::Eigen(e) => match e {
                EigenError::InvalidDiameter(_) | EigenError::InvalidTolerance(_) => EXIT_USAGE,
                EigenError::Model(m) => match m {
                    ModelError::InvalidLambda(_)
                    | ModelError::InvalidKappa(_)
                    | ModelError::PositiveKappa(_) => EXIT_USAGE,
                    _ => EXIT_NUMERICAL,
                },
                EigenError::BracketNotFound { .. } => EXIT_NUMERICAL,
            },
            CliError::Bounds(e) => match e {
                BoundsError::Eigen(_) => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            },
            CliError::Verify(e) => match e {
                VerifyError::RegimeViolation(_)
                | VerifyError::GridTooSmall(_)
                | VerifyError::InvalidSegment(_)
                | VerifyError::CertificateViolation { .. } => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            },
            CliError::Io(_) | CliError::Json(_) => EXIT_NUMERICAL,
        }
    }
}

/// Resolve an artifact path against `$WPLAP_OUT_DIR` for relative inputs.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("WPLAP_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn write_json_artifact<T: Serialize>(out: &Path, record: &T) -> Result<(), CliError> {
    let artifact = Artifact { header: Header::now(), record };
    let path = resolve_out(out);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&path, serde_json::to_string_pretty(&artifact)? + "\n")?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_text_artifact(out: &Path, text: &str) -> Result<(), CliError> {
    let path = resolve_out(out);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn pexp(p: f64) -> Result<PExponent, CliError> {
    Ok(PExponent::new(p)?)
}

fn run_mu(
    p: f64,
    kappa: f64,
    diameter: f64,
    tol: f64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let query = EigenQuery::new(pexp(p)?, kappa, diameter)?;
    let result = mu_shoot(&query, tol)?;
    let record = EigenRecord::new(&query, &result);
    println!(
        "mu_p(kappa, D) for p={p} kappa={kappa} D={diameter}:\n  mu = {:.12}\n  bracket = [{:.12e}, {:.12e}]\n  half-interval hit = {:.9}, neumann residual = {:.3e}, {} shots",
        record.mu,
        record.bracket[0],
        record.bracket[1],
        result.abar,
        result.neumann_residual,
        record.iterations
    );
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &record)?,
            Format::Csv => {
                // CSV artifact for `mu` is the model eigenfunction trajectory.
                let traj = model_eigenfunction(&query, &result)?;
                let mut text = String::from("t,theta,log_r,w,dw\n");
                for s in traj.samples() {
                    text += &format!("{},{},{},{},{}\n", s.t, s.theta, s.log_r, s.w, s.dw);
                }
                write_text_artifact(out, &text)?;
            }
        }
    }
    Ok(())
}

fn run_bounds(
    p: f64,
    kappa: f64,
    diameter: Option<f64>,
    tol: f64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let report = bounds::bound_report(&pexp(p)?, kappa, diameter, tol)?;
    println!(
        "bound report p={p} kappa={kappa} D={}:\n  regime = {:?}\n  sharp = {:?}\n  lichnerowicz = {:?}\n  wang_li = {:?}\n  best proved = {:.12}",
        diameter.map_or("-".into(), |d| d.to_string()),
        report.regime,
        report.sharp_mu,
        report.lichnerowicz,
        report.wang_li,
        report.best
    );
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &report)?,
            Format::Csv => {
                let mut text = String::from("p,kappa,D,sharp,status,lichnerowicz,wang_li,best\n");
                text += &bound_csv_row(&report);
                write_text_artifact(out, &text)?;
            }
        }
    }
    Ok(())
}

fn bound_csv_row(r: &bounds::BoundReport) -> String {
    let (status, sharp) = match r.sharp_mu {
        bounds::SharpValue::Proved(v) => ("proved", v.to_string()),
        bounds::SharpValue::Conjectured(v) => ("conjectured", v.to_string()),
        bounds::SharpValue::NotAvailable => ("n.a.", String::new()),
    };
    format!(
        "{},{},{},{},{},{},{},{}\n",
        r.p,
        r.kappa,
        r.diameter.map_or(String::new(), |d| d.to_string()),
        sharp,
        status,
        r.lichnerowicz.map_or(String::new(), |v| v.to_string()),
        r.wang_li.map_or(String::new(), |v| v.to_string()),
        r.best
    )
}

fn run_table(
    ps: &[f64],
    kappas: &[f64],
    diameters: &[f64],
    tol: f64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let mut tuples = Vec::new();
    for &p in ps {
        for &k in kappas {
            for &d in diameters {
                tuples.push((p, k, d));
            }
        }
    }
    let mut reports = tuples
        .par_iter()
        .map(|&(p, k, d)| {
            let pe = PExponent::new(p)?;
            bounds::bound_report(&pe, k, Some(d), tol).map_err(|e| match e {
                BoundsError::Eigen(inner) => CliError::Eigen(inner),
                other => CliError::Bounds(other),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    reports.sort_by(|a, b| {
        (a.p, a.kappa, a.diameter.unwrap_or(0.0))
            .partial_cmp(&(b.p, b.kappa, b.diameter.unwrap_or(0.0)))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    println!("{:>6} {:>8} {:>8} {:>16} {:>13} {:>12}", "p", "kappa", "D", "sharp", "status", "best");
    for r in &reports {
        let (status, sharp) = match r.sharp_mu {
            bounds::SharpValue::Proved(v) => ("proved", format!("{v:.8}")),
            bounds::SharpValue::Conjectured(v) => ("conjectured", format!("{v:.8}")),
            bounds::SharpValue::NotAvailable => ("n.a.", "-".into()),
        };
        println!(
            "{:>6} {:>8} {:>8} {:>16} {:>13} {:>12.8}",
            r.p,
            r.kappa,
            r.diameter.unwrap_or(f64::NAN),
            sharp,
            status,
            r.best
        );
    }
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &reports)?,
            Format::Csv => {
                let mut text = String::from("p,kappa,D,sharp,status,lichnerowicz,wang_li,best\n");
                for r in &reports {
                    text += &bound_csv_row(r);
                }
                write_text_artifact(out, &text)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct SharpnessRecord {
    p: f64,
    kappa: f64,
    #[serde(rename = "D")]
    diameter: f64,
    n: usize,
    lambda_h: f64,
    mu: f64,
    rel_margin: f64,
    rel_margin_half_grid: f64,
    refinement_decreasing: bool,
}

fn run_verify_sharpness(
    p: f64,
    kappa: f64,
    diameter: f64,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let pe = pexp(p)?;
    let query = EigenQuery::new(pe.clone(), kappa, diameter)?;
    let mu = mu_shoot(&query, 1e-10)?.mu;
    let lambda_at = |n: usize| -> Result<f64, CliError> {
        let seg = verify::make_segment(kappa, diameter, &verify::BumpSpec::none(), n)?;
        Ok(verify::discrete_first_eigenvalue(&seg, &pe, 3e-8)?.lambda_h)
    };
    let lam = lambda_at(grid)?;
    let lam_half = lambda_at(grid / 2)?;
    let record = SharpnessRecord {
        p,
        kappa,
        diameter,
        n: grid,
        lambda_h: lam,
        mu,
        rel_margin: (lam - mu) / mu,
        rel_margin_half_grid: (lam_half - mu) / mu,
        refinement_decreasing: ((lam - mu) / mu).abs() < ((lam_half - mu) / mu).abs(),
    };
    println!(
        "sharpness p={p} kappa={kappa} D={diameter} N={grid}:\n  lambda_h = {:.10}\n  mu       = {:.10}\n  relative margin = {:+.3e} (half grid: {:+.3e}, decreasing: {})",
        record.lambda_h, record.mu, record.rel_margin, record.rel_margin_half_grid,
        record.refinement_decreasing
    );
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &record)?,
            Format::Csv => {
                let text = format!(
                    "p,kappa,D,n,lambda_h,mu,rel_margin,rel_margin_half_grid\n{},{},{},{},{},{},{},{}\n",
                    p, kappa, diameter, grid, record.lambda_h, record.mu, record.rel_margin,
                    record.rel_margin_half_grid
                );
                write_text_artifact(out, &text)?;
            }
        }
    }
    if record.rel_margin.abs() >= 0.01 {
        return Err(CliError::Verdict(format!(
            "sharpness margin {:.3e} is not below 1%",
            record.rel_margin
        )));
    }
    Ok(())
}

fn default_campaign(
    p: f64,
    kappa: f64,
    diameter: f64,
    grid: usize,
    seed: u64,
    count: u64,
) -> verify::CampaignSpec {
    verify::CampaignSpec {
        p,
        kappa,
        diameter,
        n_list: vec![grid],
        seeds: (seed..seed + count.max(1)).collect(),
        perturbation: PerturbationSpec::ConvexKinks {
            kinks: 2,
            coeff_range: [0.2, 2.0],
            center_span: 0.8,
        },
    }
}

fn emit_campaign(outcome: &verify::CampaignOutcome, output: &OutputArgs) -> Result<(), CliError> {
    println!(
        "campaign p={} kappa={} D={}: {} records, mu = {:.10}",
        outcome.spec.p,
        outcome.spec.kappa,
        outcome.spec.diameter,
        outcome.records.len(),
        outcome.mu
    );
    println!(
        "{:>6} {:>6} {:>14} {:>11} {:>9} {:>9}",
        "seed", "N", "lambda_h", "rel_margin", "bound", "gradient"
    );
    for r in &outcome.records {
        println!(
            "{:>6} {:>6} {:>14.8} {:>+11.3e} {:>9} {:>9}",
            r.seed,
            r.n,
            r.lambda_h,
            r.rel_margin,
            if r.bound_ok { "ok" } else { "VIOLATED" },
            r.gradient_ok.map_or("-".into(), |ok| if ok { "ok".to_string() } else { "VIOLATED".into() }),
        );
    }
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => {
                let mut buf = Vec::new();
                verify::write_jsonl(outcome, &mut buf)?;
                write_text_artifact(out, &String::from_utf8_lossy(&buf))?;
            }
            Format::Csv => {
                let mut buf = Vec::new();
                verify::write_csv_summary(outcome, &mut buf)?;
                write_text_artifact(out, &String::from_utf8_lossy(&buf))?;
            }
        }
    }
    Ok(())
}

fn run_verify_bound(
    p: f64,
    kappa: f64,
    diameter: f64,
    grid: usize,
    seed: u64,
    count: u64,
    campaign: Option<&Path>,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let spec = match campaign {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
        None => default_campaign(p, kappa, diameter, grid, seed, count),
    };
    let outcome = verify::run_campaign(&spec)?;
    emit_campaign(&outcome, output)?;
    if !outcome.all_bounds_hold() {
        return Err(CliError::Verdict("adjusted lower-bound violation in campaign".into()));
    }
    if !outcome.all_gradients_hold() {
        return Err(CliError::Verdict("gradient-comparison violation in campaign".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct GradientRecord {
    p: f64,
    kappa: f64,
    #[serde(rename = "D")]
    diameter: f64,
    n: usize,
    seed: u64,
    lambda_h: f64,
    max_excess: f64,
    tolerance_h: f64,
    checked: usize,
    violations: usize,
}

fn run_verify_gradient(
    p: f64,
    kappa: f64,
    diameter: f64,
    grid: usize,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let pe = pexp(p)?;
    let perturbation = PerturbationSpec::ConvexKinks {
        kinks: 2,
        coeff_range: [0.2, 2.0],
        center_span: 0.8,
    };
    let bump = perturbation.draw(diameter, seed);
    let seg = verify::make_segment(kappa, diameter, &bump, grid)?;
    let result = verify::discrete_first_eigenvalue(&seg, &pe, 3e-8)?;
    let model = verify::gradient_model(&pe, kappa, result.lambda_h)?;
    let tol_h = verify::calibrate_gradient_tolerance(kappa, diameter, grid, &pe)?;
    let report = verify::check_gradient_comparison(&seg, &pe, &result, &model, tol_h)?;
    let record = GradientRecord {
        p,
        kappa,
        diameter,
        n: grid,
        seed,
        lambda_h: result.lambda_h,
        max_excess: report.max_excess,
        tolerance_h: report.tolerance_h,
        checked: report.checked,
        violations: report.violations,
    };
    println!(
        "gradient comparison p={p} kappa={kappa} D={diameter} N={grid} seed={seed}:\n  lambda_h = {:.10}\n  max excess = {:+.3e} (tolerance_h = {:.3e}), {} nodes checked, {} violations",
        record.lambda_h, record.max_excess, record.tolerance_h, record.checked, record.violations
    );
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &record)?,
            Format::Csv => {
                let text = format!(
                    "p,kappa,D,n,seed,lambda_h,max_excess,tolerance_h,checked,violations\n{},{},{},{},{},{},{},{},{},{}\n",
                    p, kappa, diameter, grid, seed, record.lambda_h, record.max_excess,
                    record.tolerance_h, record.checked, record.violations
                );
                write_text_artifact(out, &text)?;
            }
        }
    }
    if record.violations > 0 {
        return Err(CliError::Verdict(format!(
            "{} gradient-comparison violations",
            record.violations
        )));
    }
    Ok(())
}

fn run_verify_lich(
    p: f64,
    kappa: f64,
    diameter: f64,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let pe = pexp(p)?;
    if p < 2.0 || kappa <= 0.0 {
        return Err(VerifyError::RegimeViolation(format!(
            "verify-lich needs p >= 2 and kappa > 0 (got p = {p}, kappa = {kappa})"
        ))
        .into());
    }
    let seg = verify::make_segment(kappa, diameter, &verify::BumpSpec::none(), grid)?;
    let result = verify::discrete_first_eigenvalue(&seg, &pe, 3e-8)?;
    let report = verify::check_lichnerowicz(&seg, &pe, &result)?;
    println!(
        "lichnerowicz p={p} kappa={kappa} D={diameter} N={grid}:\n  lambda_h = {:.10}\n  bound = {:.10} (wang-li {:.10}), epsilon_h = {:.3e}\n  verdict: {}",
        report.lambda_h,
        report.bound,
        report.wang_li,
        report.epsilon_h,
        if report.ok { "ok" } else { "VIOLATED" }
    );
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &report)?,
            Format::Csv => {
                let text = format!(
                    "p,kappa,D,n,lambda_h,bound,wang_li,epsilon_h,ok\n{},{},{},{},{},{},{},{},{}\n",
                    p, kappa, diameter, grid, report.lambda_h, report.bound, report.wang_li,
                    report.epsilon_h, report.ok
                );
                write_text_artifact(out, &text)?;
            }
        }
    }
    if !report.ok {
        return Err(CliError::Verdict("Lichnerowicz-type bound violated".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct PtrigRecord {
    p: f64,
    pi_p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sin_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cos_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tan_p: Option<f64>,
}

fn run_ptrig(p: f64, t: Option<f64>, output: &OutputArgs) -> Result<(), CliError> {
    let pe = pexp(p)?;
    let record = match t {
        Some(t) => {
            let (s, c) = pe.sin_cos_p(t);
            PtrigRecord {
                p,
                pi_p: pe.pi_p(),
                t: Some(t),
                sin_p: Some(s),
                cos_p: Some(c),
                tan_p: Some(s / c),
            }
        }
        None => PtrigRecord { p, pi_p: pe.pi_p(), t: None, sin_p: None, cos_p: None, tan_p: None },
    };
    println!("pi_p({p}) = {:.15}", record.pi_p);
    if let Some(t) = record.t {
        println!(
            "sin_p({t}) = {:.15}\ncos_p({t}) = {:.15}\ntan_p({t}) = {:.15}",
            record.sin_p.unwrap(),
            record.cos_p.unwrap(),
            record.tan_p.unwrap()
        );
    }
    if let Some(out) = &output.out {
        match output.format {
            Format::Json => write_json_artifact(out, &record)?,
            Format::Csv => {
                let text = format!(
                    "p,pi_p,t,sin_p,cos_p,tan_p\n{},{},{},{},{},{}\n",
                    p,
                    record.pi_p,
                    record.t.map_or(String::new(), |v| v.to_string()),
                    record.sin_p.map_or(String::new(), |v| v.to_string()),
                    record.cos_p.map_or(String::new(), |v| v.to_string()),
                    record.tan_p.map_or(String::new(), |v| v.to_string()),
                );
                write_text_artifact(out, &text)?;
            }
        }
    }
    Ok(())
}

/// Execute a parsed command; returns the process exit code.
pub fn run(spec: CommandSpec) -> i32 {
    let result = match &spec.command {
        Command::Mu { p, kappa, diameter, tol, output } => {
            run_mu(*p, *kappa, *diameter, *tol, output)
        }
        Command::Bounds { p, kappa, diameter, tol, output } => {
            run_bounds(*p, *kappa, *diameter, *tol, output)
        }
        Command::Table { p, kappa, diameter, tol, output } => {
            run_table(p, kappa, diameter, *tol, output)
        }
        Command::VerifySharpness { p, kappa, diameter, grid, output } => {
            run_verify_sharpness(*p, *kappa, *diameter, *grid, output)
        }
        Command::VerifyBound { p, kappa, diameter, grid, seed, count, campaign, output } => {
            run_verify_bound(
                *p,
                *kappa,
                *diameter,
                *grid,
                *seed,
                *count,
                campaign.as_deref(),
                output,
            )
        }
        Command::VerifyGradient { p, kappa, diameter, grid, seed, output } => {
            run_verify_gradient(*p, *kappa, *diameter, *grid, *seed, output)
        }
        Command::VerifyLich { p, kappa, diameter, grid, output } => {
            run_verify_lich(*p, *kappa, *diameter, *grid, output)
        }
        Command::Ptrig { p, t, output } => run_ptrig(*p, *t, output),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("wplap: {err}");
            err.exit_code()
        }
    }
}

/// Parse `std::env::args` and run; usage errors exit 1 with clap's
/// diagnostic.
pub fn run_main() -> i32 {
    match CommandSpec::try_parse() {
        Ok(spec) => run(spec),
        Err(e) => {
            // Help/version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            code
        }
    }
}

//! Front end for `covnot-core`: argument parsing, command implementations
//! and CSV/JSON rendering. `main.rs` only maps outcomes to exit codes.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use covnot_core::channel::{choi_spectrum, CORNER_A, CORNER_B, CORNER_C, CORNER_D};
use covnot_core::operator::Operator4;
use covnot_core::unot::{g_not, magic_algebra_check, u_me, u_sep};
use covnot_core::{
    apply, check_covariance, choi_matrix, convex_decompose, covariant_error, cp_check,
    distance_to_complement, numerical_optimal_not, optimal_not, twirl, ChannelParams,
    DensityMatrix, KrausSet, PureState, RngState,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// The domain answer is negative (non-CP triple, failed relation).
    Negative,
}

#[derive(Debug, Parser)]
#[command(
    name = "covnot",
    about = "Covariant two-qubit channels and optimal NOT operations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; plain text when omitted (CSV for `sweep`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TripleArgs {
    #[arg(short = 'V', allow_negative_numbers = true)]
    pub v: f64,
    #[arg(short = 'X', allow_negative_numbers = true)]
    pub x: f64,
    #[arg(short = 'Y', allow_negative_numbers = true)]
    pub y: f64,
}

impl TripleArgs {
    fn params(&self) -> ChannelParams {
        ChannelParams::new(self.v, self.x, self.y)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complete-positivity margins, Choi minimum eigenvalue and convex weights.
    Validate(TripleArgs),
    /// Output of the channel on α|↑↑⟩ + β|↓↓⟩ and its NOT error.
    Apply {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = FRAC_1_SQRT_2)]
        alpha: f64,
    },
    /// Choi matrix spectrum, numerical and closed form.
    Choi(TripleArgs),
    /// Weights on the identity, U_SEP and the two perfect ME-NOT corners.
    Decompose(TripleArgs),
    /// Optimal covariant NOT for one entanglement class.
    OptimizeNot {
        #[arg(long)]
        alpha: f64,
        /// Also run the brute-force grid search.
        #[arg(long)]
        numerical: bool,
    },
    /// Optimal-NOT error curve with the U_SEP, U_ME and G_NOT references.
    Sweep(SweepArgs),
    /// Monte-Carlo twirl of a channel given as a Kraus file.
    Twirl {
        kraus_file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Integer-exact check of the magic-basis generator algebra.
    MagicCheck,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// `V` of the U_ME reference channel; its error does not depend on it.
    #[arg(long, default_value_t = 1.0 / 3.0, allow_negative_numbers = true)]
    pub ume_v: f64,
}

/// Sweep grid and overlays, as echoed in JSON output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub points: usize,
    pub channels: Vec<String>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        let ok = 0.0 <= self.alpha_min
            && self.alpha_min <= self.alpha_max
            && self.alpha_max <= FRAC_1_SQRT_2 + 1e-15;
        if !ok {
            bail!(
                "need 0 <= alpha-min <= alpha-max <= 1/sqrt(2), got [{}, {}]",
                self.alpha_min,
                self.alpha_max
            );
        }
        if self.points < 2 {
            bail!("need at least 2 points, got {}", self.points);
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|k| self.alpha_min + (self.alpha_max - self.alpha_min) * k as f64 / n as f64)
            .collect()
    }
}

/// One row of the sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultRecord {
    pub alpha: f64,
    pub delta_opt: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    pub branch: String,
    pub delta_usep: f64,
    pub delta_ume: f64,
    pub delta_gnot: f64,
}

pub const CSV_HEADER: &str = "alpha,delta_opt,V,X,Y,branch,delta_usep,delta_ume,delta_gnot";

/// At most 12 significant digits, shortest form; exponent notation outside
/// `[1e-4, 1e12)`.
pub fn fmt12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let mag = rounded.abs();
    if rounded == 0.0 {
        // avoid "-0"
        "0".to_string()
    } else if !(1e-4..1e12).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn delta_of(p: &ChannelParams, alpha: f64) -> f64 {
    covariant_error(p.z(), p.y, alpha).max(0.0)
}

pub fn sweep_records(config: &SweepConfig, ume_v: f64) -> anyhow::Result<Vec<ResultRecord>> {
    config.validate()?;
    let ume = u_me(ume_v)?;
    let (sep, gnot) = (u_sep(), g_not());
    config
        .grid()
        .par_iter()
        .map(|&alpha| {
            // The last grid point may overshoot 1/√2 by rounding.
            let alpha = alpha.min(FRAC_1_SQRT_2);
            let best = optimal_not(alpha)?;
            Ok(ResultRecord {
                alpha,
                delta_opt: best.delta,
                v: best.point.v,
                x: best.point.x,
                y: best.point.y,
                branch: best.family.label().to_string(),
                delta_usep: delta_of(&sep, alpha),
                delta_ume: delta_of(&ume, alpha),
                delta_gnot: delta_of(&gnot, alpha),
            })
        })
        .collect()
}

pub fn render_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt12(r.alpha),
            fmt12(r.delta_opt),
            fmt12(r.v),
            fmt12(r.x),
            fmt12(r.y),
            r.branch,
            fmt12(r.delta_usep),
            fmt12(r.delta_ume),
            fmt12(r.delta_gnot)
        );
    }
    out
}

/// One entry of a Kraus file: `ρ ↦ weight · L ρ L†`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KrausEntry {
    pub weight: f64,
    /// Row-major 4×4 matrix of `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Trace-preservation tolerance for Kraus files.
pub const KRAUS_FILE_TOL: f64 = 1e-8;

pub fn parse_kraus(text: &str) -> anyhow::Result<KrausSet> {
    let entries: Vec<KrausEntry> = serde_json::from_str(text).context("malformed Kraus file")?;
    if entries.is_empty() {
        bail!("Kraus file has no operators");
    }
    let mut terms = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        if e.matrix.len() != 4 || e.matrix.iter().any(|row| row.len() != 4) {
            bail!("Kraus operator {k} is not 4x4");
        }
        let op = Operator4::from_fn(|r, col| {
            let [re, im] = e.matrix[r][col];
            Complex64::new(re, im)
        });
        terms.push((e.weight, op));
    }
    Ok(KrausSet::with_tolerance(terms, KRAUS_FILE_TOL)?)
}

pub fn kraus_entries(set: &KrausSet) -> Vec<KrausEntry> {
    set.terms()
        .iter()
        .map(|(w, l)| KrausEntry {
            weight: *w,
            matrix: (0..4)
                .map(|r| (0..4).map(|col| [l[(r, col)].re, l[(r, col)].im]).collect())
                .collect(),
        })
        .collect()
}

/// Rendered output plus the verdict that decides the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub verdict: Verdict,
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Ok
    } else {
        Verdict::Negative
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Renders a flat list of named values as text, one-row CSV or JSON.
fn render_fields(
    fields: &[(&str, serde_json::Value)],
    format: Option<Format>,
) -> anyhow::Result<String> {
    let plain = |v: &serde_json::Value| match v {
        serde_json::Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt12),
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|x| x.as_f64().map_or_else(|| x.to_string(), fmt12))
                .collect();
            parts.join(" ")
        }
        other => other.to_string(),
    };
    Ok(match format {
        Some(Format::Json) => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            json(&map)?
        }
        Some(Format::Csv) => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| plain(v)).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        None => {
            let mut out = String::new();
            for (k, v) in fields {
                let _ = writeln!(out, "{k}: {}", plain(v));
            }
            out
        }
    })
}

fn weights_value(p: &ChannelParams) -> serde_json::Value {
    serde_json::json!(convex_decompose(p).as_array())
}

pub fn cmd_validate(p: &ChannelParams, format: Option<Format>) -> anyhow::Result<Report> {
    let report = cp_check(p);
    let fields = [
        ("V", serde_json::json!(p.v)),
        ("X", serde_json::json!(p.x)),
        ("Y", serde_json::json!(p.y)),
        ("cp", serde_json::json!(report.is_cp)),
        ("margins", serde_json::json!(report.margins)),
        (
            "choi_min_eigenvalue",
            serde_json::json!(choi_matrix(p).min_eigenvalue()),
        ),
        ("weights_identity_sep_me1_me2", weights_value(p)),
    ];
    Ok(Report {
        text: render_fields(&fields, format)?,
        verdict: verdict(report.is_cp),
    })
}

fn not_cp(p: &ChannelParams) -> anyhow::Result<Report> {
    let report = cp_check(p);
    Ok(Report {
        text: format!("not completely positive: margins {:?}\n", report.margins),
        verdict: Verdict::Negative,
    })
}

pub fn cmd_apply(p: &ChannelParams, alpha: f64, format: Option<Format>) -> anyhow::Result<Report> {
    if !cp_check(p).is_cp {
        return not_cp(p);
    }
    let phi = PureState::schmidt(alpha)?;
    let out = apply(p, &DensityMatrix::from_pure(&phi))?;
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|r| {
            (0..4)
                .map(|col| [out.operator()[(r, col)].re, out.operator()[(r, col)].im])
                .collect()
        })
        .collect();
    let text = match format {
        Some(Format::Json) => json(&serde_json::json!({
            "V": p.v, "X": p.x, "Y": p.y, "alpha": alpha,
            "output": rows,
            "not_error": distance_to_complement(&out, &phi),
        }))?,
        _ => {
            let mut s = String::new();
            for r in 0..4 {
                let cells: Vec<String> = (0..4)
                    .map(|col| {
                        let z = out.operator()[(r, col)];
                        let sign = if z.im < 0.0 { '-' } else { '+' };
                        format!("{}{sign}{}i", fmt12(z.re), fmt12(z.im.abs()))
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    "{}",
                    cells.join(if format == Some(Format::Csv) {
                        ","
                    } else {
                        "  "
                    })
                );
            }
            if format.is_none() {
                let _ = writeln!(
                    s,
                    "not_error: {}",
                    fmt12(distance_to_complement(&out, &phi))
                );
            }
            s
        }
    };
    Ok(Report {
        text,
        verdict: Verdict::Ok,
    })
}

pub fn cmd_choi(p: &ChannelParams, format: Option<Format>) -> anyhow::Result<Report> {
    let choi = choi_matrix(p);
    let closed: Vec<serde_json::Value> = choi_spectrum(p)
        .iter()
        .map(|(v, m)| serde_json::json!({"eigenvalue": v, "multiplicity": m}))
        .collect();
    let text = match format {
        Some(Format::Json) => json(&serde_json::json!({
            "V": p.v, "X": p.x, "Y": p.y,
            "trace": choi.trace(),
            "eigenvalues": choi.eigenvalues(),
            "closed_form": closed,
        }))?,
        _ => render_fields(
            &[
                ("trace", serde_json::json!(choi.trace())),
                ("eigenvalues", serde_json::json!(choi.eigenvalues())),
                (
                    "closed_form",
                    serde_json::json!(choi_spectrum(p).iter().map(|(v, _)| *v).collect::<Vec<_>>()),
                ),
                (
                    "multiplicities",
                    serde_json::json!(choi_spectrum(p).map(|(_, m)| m)),
                ),
            ],
            format,
        )?,
    };
    Ok(Report {
        text,
        verdict: verdict(cp_check(p).is_cp),
    })
}

pub fn cmd_decompose(p: &ChannelParams, format: Option<Format>) -> anyhow::Result<Report> {
    let w = convex_decompose(p);
    let corners = [CORNER_D, CORNER_B, CORNER_A, CORNER_C];
    let fields = [
        ("identity", serde_json::json!(w.identity)),
        ("sep", serde_json::json!(w.sep)),
        ("me1", serde_json::json!(w.me1)),
        ("me2", serde_json::json!(w.me2)),
        (
            "nonnegative",
            serde_json::json!(w.is_nonnegative(covnot_core::CP_TOL)),
        ),
        (
            "reconstruction_error",
            serde_json::json!(w.reconstruct().max_abs_diff(p)),
        ),
        (
            "corners",
            serde_json::json!(corners
                .iter()
                .flat_map(|c| [c.v, c.x, c.y])
                .collect::<Vec<_>>()),
        ),
    ];
    Ok(Report {
        text: render_fields(&fields, format)?,
        verdict: verdict(w.is_nonnegative(covnot_core::CP_TOL)),
    })
}

pub fn cmd_optimize_not(
    alpha: f64,
    numerical: bool,
    format: Option<Format>,
) -> anyhow::Result<Report> {
    let best = optimal_not(alpha)?;
    let mut fields = vec![
        ("alpha", serde_json::json!(alpha)),
        ("delta_opt", serde_json::json!(best.delta)),
        ("V", serde_json::json!(best.point.v)),
        ("X", serde_json::json!(best.point.x)),
        ("Y", serde_json::json!(best.point.y)),
        ("branch", serde_json::json!(best.family.label())),
    ];
    if numerical {
        let num = numerical_optimal_not(alpha)?;
        fields.extend([
            ("numerical_delta", serde_json::json!(num.delta)),
            ("numerical_V", serde_json::json!(num.point.v)),
            ("numerical_X", serde_json::json!(num.point.x)),
            ("numerical_Y", serde_json::json!(num.point.y)),
        ]);
    }
    Ok(Report {
        text: render_fields(&fields, format)?,
        verdict: Verdict::Ok,
    })
}

pub fn cmd_sweep(args: &SweepArgs, cli: &Cli) -> anyhow::Result<Report> {
    let config = SweepConfig {
        alpha_min: args.alpha_min,
        alpha_max: args.alpha_max,
        points: args.points,
        channels: vec![
            "U_SEP".into(),
            format!("U_ME(V={})", args.ume_v),
            "G_NOT".into(),
        ],
        out: cli.out.clone(),
        seed: cli.seed,
    };
    let records = sweep_records(&config, args.ume_v)?;
    let text = match cli.format {
        Some(Format::Json) => json(&serde_json::json!({"config": config, "records": records}))?,
        _ => render_csv(&records),
    };
    Ok(Report {
        text,
        verdict: Verdict::Ok,
    })
}

pub fn cmd_twirl(
    path: &Path,
    samples: usize,
    seed: u64,
    format: Option<Format>,
) -> anyhow::Result<Report> {
    if samples == 0 {
        bail!("--samples must be at least 1");
    }
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let kraus = parse_kraus(&text)?;
    let result = twirl(|rho| kraus.apply(rho), samples, &mut RngState::new(seed, 0));
    let cov = check_covariance(
        |rho| result.map.apply(rho),
        100,
        &mut RngState::new(seed, 1),
    );
    let report = cp_check(&result.params);
    let fields = [
        ("V", serde_json::json!(result.params.v)),
        ("X", serde_json::json!(result.params.x)),
        ("Y", serde_json::json!(result.params.y)),
        ("cp", serde_json::json!(report.is_cp)),
        ("margins", serde_json::json!(report.margins)),
        (
            "covariance_max_deviation",
            serde_json::json!(cov.max_deviation),
        ),
        ("fit_residual", serde_json::json!(result.residual)),
        ("samples", serde_json::json!(result.samples)),
        ("tasks", serde_json::json!(result.tasks)),
        ("seed", serde_json::json!(seed)),
    ];
    Ok(Report {
        text: render_fields(&fields, format)?,
        verdict: verdict(report.is_cp),
    })
}

pub fn cmd_magic_check(format: Option<Format>) -> anyhow::Result<Report> {
    let report = magic_algebra_check();
    let text = match format {
        Some(Format::Json) => json(&serde_json::json!({
            "consistent": report.consistent(),
            "u_orientation": report.u_orientation,
            "v_orientation": report.v_orientation,
            "checks": report.checks.iter().map(|c| serde_json::json!({
                "relation": c.name, "holds": c.holds, "expected": c.expected,
            })).collect::<Vec<_>>(),
        }))?,
        _ => {
            let mut s = String::new();
            if format == Some(Format::Csv) {
                s.push_str("relation,holds,expected\n");
            }
            for c in &report.checks {
                if format == Some(Format::Csv) {
                    let _ = writeln!(s, "\"{}\",{},{}", c.name, c.holds, c.expected);
                } else {
                    let mark = if c.holds == c.expected { "ok " } else { "BAD" };
                    let _ = writeln!(s, "[{mark}] {} (holds: {})", c.name, c.holds);
                }
            }
            if format.is_none() {
                let _ = writeln!(
                    s,
                    "structure constants: U {:+}, V {:+}",
                    report.u_orientation, report.v_orientation
                );
            }
            s
        }
    };
    Ok(Report {
        text,
        verdict: verdict(report.consistent()),
    })
}

pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Validate(t) => cmd_validate(&t.params(), cli.format),
        Command::Apply { triple, alpha } => cmd_apply(&triple.params(), *alpha, cli.format),
        Command::Choi(t) => cmd_choi(&t.params(), cli.format),
        Command::Decompose(t) => cmd_decompose(&t.params(), cli.format),
        Command::OptimizeNot { alpha, numerical } => {
            cmd_optimize_not(*alpha, *numerical, cli.format)
        }
        Command::Sweep(args) => cmd_sweep(args, cli),
        Command::Twirl {
            kraus_file,
            samples,
        } => cmd_twirl(kraus_file, *samples, cli.seed, cli.format),
        Command::MagicCheck => cmd_magic_check(cli.format),
    }
}

/// Writes the report to `--out` or stdout.
pub fn emit(cli: &Cli, report: &Report) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, &report.text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", report.text);
            Ok(())
        }
    }
}

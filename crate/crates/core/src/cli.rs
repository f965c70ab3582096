//! Command-line front end.
//!
//! Every subcommand writes one JSON document (or CSV for curves) to standard
//! output or `--out`. Exit codes: 0 success, 1 numerical or domain failure,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cryptoherm::{
    assemble_metric, build_h4, convergence_study, metric_component, solve_metric_space, spectral_metric,
    spectrum_reality, FdStarOperator, MetricCandidate,
};
use crate::error::{Error, Result};
use crate::linalg::DEFAULT_RANK_TOL;
use crate::roots::{
    compare_closed_form, find_exceptional_point, locate_complex_roots, scan_real_roots, ContourOptions, EpOptions,
    Interval, Rect, ScanOptions,
};
use crate::stargraph::{evaluate, StarGraphSpec};

#[derive(Debug, Parser)]
#[command(name = "pt-star", version, about = "Spectra of non-Hermitian star graphs and their metric operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the secular function and its six-arm factors over a k grid.
    Secular(SecularArgs),
    /// Real roots in a window, optionally complex roots in a box.
    Roots(RootsArgs),
    /// Coupling at which two real roots merge.
    Ep(EpArgs),
    /// Metric operators of the four-site toy chain.
    Metric(MetricArgs),
    /// Run the closed-form and finite-difference oracles.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Number of arms.
    #[arg(long, default_value_t = 6)]
    pub q: usize,
    /// Arm length.
    #[arg(long = "length", short = 'L', default_value_t = 1.0)]
    pub length: f64,
    /// Window in k as `lo,hi`.
    #[arg(long, value_parser = parse_pair, default_value = "0.05,2")]
    pub window: (f64, f64),
    /// Grid points across the window.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SecularArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Tip coupling.
    #[arg(long, default_value_t = 0.7)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0.7)]
    pub alpha: f64,
    /// Bisection tolerance in k.
    #[arg(long, default_value_t = 1e-12)]
    pub bisect_tol: f64,
    /// Also locate complex roots by the argument principle.
    #[arg(long)]
    pub complex: bool,
    /// Imaginary range of the search box as `lo,hi`; the real range is the window.
    #[arg(long, value_parser = parse_pair, default_value = "0.01,1")]
    pub im_window: (f64, f64),
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EpArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Coupling bracket `a,b` (either order).
    #[arg(long, value_parser = parse_pair)]
    pub alpha_bracket: (f64, f64),
    /// Root-count bisection width before Newton.
    #[arg(long, default_value_t = 1e-4)]
    pub coarse_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

// comma lists are spelled `std::vec::Vec` so clap parses them as one value
#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["alphas", "basis", "kappas"])))]
pub struct MetricArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Family coefficients `a1,a2,a3,a4`.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub alphas: Option<std::vec::Vec<f64>>,
    /// Solve for the whole metric space.
    #[arg(long)]
    pub basis: bool,
    /// Spectral-expansion weights, one per eigenvalue.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub kappas: Option<std::vec::Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    /// Random positive combinations tried when looking for a metric.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Couplings to check.
    #[arg(long, value_parser = parse_list, default_value = "0.3,0.7,1")]
    pub alpha: std::vec::Vec<f64>,
    /// Run the finite-difference convergence study.
    #[arg(long)]
    pub fd: bool,
    /// Grid sizes per arm for the finite-difference study.
    #[arg(long, value_parser = parse_usize_list, default_value = "200,400,800")]
    pub n: std::vec::Vec<usize>,
    /// Window for the closed-form comparison.
    #[arg(long, value_parser = parse_pair, default_value = "0.05,6")]
    pub oracle_window: (f64, f64),
    #[arg(long, default_value_t = 1e-9)]
    pub root_tol: f64,
    #[arg(long, default_value_t = 1.8)]
    pub min_order: f64,
    #[command(flatten)]
    pub output: Output,
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_usize_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
    }
}

/// What a subcommand produced: the document and whether its checks passed.
struct Report {
    body: String,
    ok: bool,
    warnings: Vec<String>,
}

impl Report {
    fn json(v: &impl Serialize) -> Result<Self> {
        Ok(Self {
            body: to_json(v)?,
            ok: true,
            warnings: Vec::new(),
        })
    }
}

fn to_json(v: &impl Serialize) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn window(graph: &GraphArgs) -> Result<Interval> {
    Interval::new(graph.window.0, graph.window.1)
}

fn cmd_secular(a: &SecularArgs) -> Result<Report> {
    let spec = StarGraphSpec::with_length(a.graph.q, a.alpha, a.graph.length)?;
    let w = window(&a.graph)?;
    if a.graph.samples < 2 {
        return Err(Error::Argument("need at least two samples".into()));
    }
    let ks: Vec<f64> = (0..a.graph.samples)
        .map(|i| w.lo + w.width() * i as f64 / (a.graph.samples - 1) as f64)
        .collect();
    match a.format {
        Format::Csv => {
            if spec.q() % 2 != 0 {
                return Err(Error::Argument("the secular function is complex for odd q; use --format json".into()));
            }
            let mut wtr = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
            wtr.write_record(["k", "factor_tan", "factor_ratio", "product", "scalar_F"]).map_err(io)?;
            for &k in &ks {
                let ev = evaluate(&spec, Complex64::new(k, 0.0))?;
                let (t, r, p) = match ev.closed_form {
                    Some(c) => (num(c.factor_tan.re), num(c.factor_ratio.re), num(c.product.re)),
                    None => (String::new(), String::new(), String::new()),
                };
                let f = ev.scalar_value.map(|z| num(z.re)).unwrap_or_default();
                wtr.write_record([num(k), t, r, p, f]).map_err(io)?;
            }
            let bytes = wtr.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
            Ok(Report {
                body: String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))?,
                ok: true,
                warnings: Vec::new(),
            })
        }
        Format::Json => {
            let mut rows = Vec::with_capacity(ks.len());
            for &k in &ks {
                let ev = evaluate(&spec, Complex64::new(k, 0.0))?;
                rows.push(json!({
                    "k": k,
                    "det": [ev.det_value.re, ev.det_value.im],
                    "scalar_F": ev.scalar_value.map(|z| [z.re, z.im]),
                    "factor_tan": ev.closed_form.map(|c| c.factor_tan.re),
                    "factor_ratio": ev.closed_form.map(|c| c.factor_ratio.re),
                    "product": ev.closed_form.map(|c| c.product.re),
                }));
            }
            Report::json(&json!({ "q": spec.q(), "alpha": spec.alpha(), "length": spec.length(), "rows": rows }))
        }
    }
}

fn cmd_roots(a: &RootsArgs) -> Result<Report> {
    let spec = StarGraphSpec::with_length(a.graph.q, a.alpha, a.graph.length)?;
    let w = window(&a.graph)?;
    let scan = ScanOptions {
        samples: a.graph.samples,
        bisect_tol: a.bisect_tol,
        ..ScanOptions::default()
    };
    let real = scan_real_roots(&spec, w, &scan)?;
    let complex = if a.complex {
        let rect = Rect::new(w, Interval::new(a.im_window.0, a.im_window.1)?);
        locate_complex_roots(&spec, rect, &ContourOptions::default())?
    } else {
        Vec::new()
    };
    let mut doc = json!({
        "q": spec.q(),
        "alpha": spec.alpha(),
        "length": spec.length(),
        "window": [w.lo, w.hi],
        "real_roots": real,
        "complex_roots": complex
            .iter()
            .map(|r| json!({ "re": r.k.re, "im": r.k.im, "residual": r.residual, "multiplicity": r.multiplicity }))
            .collect::<Vec<_>>(),
        "counts": { "real": real.len(), "complex_pairs": complex.iter().map(|r| r.multiplicity).sum::<usize>() },
    });
    if a.complex {
        doc["im_window"] = json!([a.im_window.0, a.im_window.1]);
    }
    if spec.alpha() == 0.0 {
        // k = 0 carries the constant mode; k = (m + 1/2) pi / L carries modes
        // vanishing at the center, which the reduced function cannot see
        let half = std::f64::consts::PI / spec.length();
        let nodes: Vec<f64> = (0..)
            .map(|m| (m as f64 + 0.5) * half)
            .take_while(|k| *k <= w.hi)
            .filter(|k| *k >= w.lo)
            .collect();
        doc["constant_mode"] = json!(true);
        doc["center_node_momenta"] = json!(nodes);
    }
    Report::json(&doc)
}

fn cmd_ep(a: &EpArgs) -> Result<Report> {
    let base = StarGraphSpec::with_length(a.graph.q, 0.0, a.graph.length)?;
    let bracket = Interval::sorted(a.alpha_bracket.0, a.alpha_bracket.1)?;
    let opts = EpOptions {
        scan: ScanOptions {
            samples: a.graph.samples,
            ..ScanOptions::default()
        },
        coarse_tol: a.coarse_tol,
        ..EpOptions::default()
    };
    let ep = find_exceptional_point(&base, bracket, window(&a.graph)?, &opts)?;
    Report::json(&json!({
        "q": base.q(),
        "alpha_star": ep.alpha_star,
        "k_star": ep.k_star,
        "bracket": [ep.bracket.lo, ep.bracket.hi],
        "residuals": { "f": ep.residual_f, "df_dk": ep.residual_df },
        "counts": [ep.counts.0, ep.counts.1],
        "method": ep.method,
    }))
}

fn candidate_json(lambda: f64, c: &MetricCandidate) -> Value {
    json!({
        "lambda": lambda,
        "coefficients": c.coefficients,
        "residual": c.residual,
        "hermiticity_defect": c.hermiticity_defect,
        "min_eigenvalue": c.min_eigenvalue,
        "is_metric": c.is_metric,
        "eigenvalues": c.eigenvalues,
    })
}

const COMPLEX_SPECTRUM_WARNING: &str = "spectrum complex: no metric exists";

fn cmd_metric(a: &MetricArgs) -> Result<Report> {
    let h = build_h4(a.lambda);
    let reality = spectrum_reality(&h, 1e-12)?;
    let mut warnings = Vec::new();
    if !reality.is_real() {
        warnings.push(COMPLEX_SPECTRUM_WARNING.to_string());
    }
    let spectrum = json!({
        "class": reality.class,
        "eigenvalues": reality.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    });
    let mut doc = if let Some(alphas) = &a.alphas {
        let arr: [f64; 4] = alphas
            .as_slice()
            .try_into()
            .map_err(|_| Error::Argument(format!("--alphas needs 4 values, got {}", alphas.len())))?;
        candidate_json(a.lambda, &assemble_metric(a.lambda, arr)?)
    } else if let Some(kappas) = &a.kappas {
        candidate_json(a.lambda, &spectral_metric(&h, kappas)?)
    } else {
        let space = solve_metric_space(&h, a.rank_tol)?;
        let mut residuals = Vec::with_capacity(4);
        for j in 1..=4 {
            residuals.push(space.project(&metric_component(j, a.lambda)?)?.relative_residual);
        }
        let positive = space.search_positive(&h, a.trials, a.seed)?;
        json!({
            "lambda": a.lambda,
            "dimension": space.dimension(),
            "contains_M_family": residuals.iter().all(|r| *r <= 1e-10),
            "projection_residuals": residuals,
            "positive_member_found": positive.is_some(),
        })
    };
    doc["spectrum"] = spectrum;
    if !warnings.is_empty() {
        doc["warning"] = json!(warnings.join("; "));
    }
    let mut r = Report::json(&doc)?;
    r.warnings = warnings;
    Ok(r)
}

fn cmd_validate(a: &ValidateArgs) -> Result<Report> {
    let mut checks = Vec::new();
    let mut ok = true;
    let mut record = |name: String, pass: bool, detail: Value| {
        ok &= pass;
        checks.push(json!({ "check": name, "pass": pass, "detail": detail }));
    };
    let ow = Interval::new(a.oracle_window.0, a.oracle_window.1)?;
    for &alpha in &a.alpha {
        let agreement = compare_closed_form(alpha, 1.0, ow, 6000)?;
        record(
            format!("closed-form roots alpha={alpha}"),
            agreement.agrees(a.root_tol),
            json!({
                "max_deviation": agreement.max_deviation,
                "count": agreement.determinant.len(),
                "closed_form_count": agreement.closed_form.len(),
                "center_node_roots": agreement.center_node,
            }),
        );
    }
    let n_max = a.n.iter().copied().max().unwrap_or(800);
    for &alpha in &a.alpha {
        let spec = StarGraphSpec::new(6, alpha)?;
        if alpha == 0.0 {
            let op = FdStarOperator::new(&spec, n_max)?;
            let ks = op.real_momenta(Interval::new(0.05, 3.5)?, 4000)?;
            let lowest = ks.first().copied().unwrap_or(f64::NAN);
            // first FD momentum whose mode does not vanish at the center
            let lowest_center = ks
                .iter()
                .copied()
                .find(|k| op.mode(Complex64::new(k * k, 0.0)).is_some())
                .unwrap_or(f64::NAN);
            record(
                format!("fd lowest nonzero k near pi, alpha=0, n={n_max}"),
                (lowest - std::f64::consts::PI).abs() <= 1e-3,
                json!({
                    "lowest_nonzero_k": lowest,
                    "lowest_with_center_amplitude": lowest_center,
                    "fd_momenta": ks,
                }),
            );
        } else if a.fd {
            let targets: Vec<f64> = scan_real_roots(&spec, Interval::new(0.05, 2.0)?, &ScanOptions::default())?
                .iter()
                .map(|r| r.k)
                .collect();
            let study = convergence_study(&spec, &a.n, &targets)?;
            record(
                format!("fd convergence order alpha={alpha}"),
                study.min_order >= a.min_order,
                json!({
                    "min_order": study.min_order,
                    "points_per_arm": study.points_per_arm,
                    "targets": study.targets.iter().map(|t| json!({
                        "k": t.target,
                        "errors": t.errors,
                        "order": t.order,
                    })).collect::<Vec<_>>(),
                }),
            );
        }
    }
    let mut r = Report::json(&json!({ "pass": ok, "checks": checks }))?;
    r.ok = ok;
    if !ok {
        r.warnings = checks
            .iter()
            .filter(|c| c["pass"] == json!(false))
            .map(|c| format!("check failed: {}", c["check"].as_str().unwrap_or("?")))
            .collect();
    }
    Ok(r)
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Secular(a) => &a.output,
        Command::Roots(a) => &a.output,
        Command::Ep(a) => &a.output,
        Command::Metric(a) => &a.output,
        Command::Validate(a) => &a.output,
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Secular(a) => cmd_secular(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Ep(a) => cmd_ep(a),
        Command::Metric(a) => cmd_metric(a),
        Command::Validate(a) => cmd_validate(a),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                Error::Argument(_) => 2,
                _ => 1,
            };
        }
    };
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let written = match &output_of(&cli.command).out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(report.body.as_bytes())),
        None => stdout.write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 1;
    }
    if report.ok {
        0
    } else {
        1
    }
}

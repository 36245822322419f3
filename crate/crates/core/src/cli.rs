//! `h1dil` command-line front end.
//!
//! Commands compute everything in memory first; output files are written
//! only after the run completes, each through a temporary file that is
//! renamed into place. Configuration errors exit with status 2 before any
//! computation, property violations with status 1.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauges::{check_gauge, default_check_grid, Gauge, GaugeSpec, ValidGauge};
use crate::h1::H1Point;
use crate::limits::{
    a4_equivalence_check, a_probe, beta_probe, default_a4_samples, default_v_grid, id_derivability_probe,
    metric_diff_probe, uniform_probe, AgreementReport, Classification, EpsGrid, LimitParams, Outcome, TraceSummary,
};
use crate::metrics::SampleBox;
use crate::report::{Check, VerificationReport, Witness};
use crate::verify::{verify_suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "h1dil", version, about = "Gauge-deformed dilatations on the Heisenberg group H(1)")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Gauge: `linear`, `oscillatory`, inline JSON, or a path to a JSON file.
    #[arg(long, global = true)]
    pub gauge: Option<String>,
    /// Coarsest scale of the ε grid.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub eps0: f64,
    /// Ratio between consecutive grid scales.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub ratio: f64,
    /// Number of grid scales.
    #[arg(long, global = true, default_value_t = 37)]
    pub count: usize,
    /// Classifier window length.
    #[arg(long, global = true, default_value_t = 6)]
    pub window: usize,
    /// Classifier tolerance.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub atol: f64,
    /// Values beyond this bound in the tail count as divergence.
    #[arg(long, global = true, default_value_t = 1e6)]
    pub divergence_bound: f64,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Samples per randomized check.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    /// Sampling box as `horizontal,vertical` half-widths.
    #[arg(long = "box", global = true, default_value = "2,4")]
    pub region: String,
    /// Directory for reports and traces.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauge checks, group axioms, distance samplers and dilatation identities.
    Verify,
    /// Sample an ε → 0 limit and classify it.
    Probe {
        #[command(subcommand)]
        probe: Probe,
    },
    /// Reproduce the non-convergence pattern of the oscillatory gauge.
    Counterexample,
    /// Check the gauge conditions only.
    GaugeCheck,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Probe {
    /// `A_ε(ū) = g(ε²|ū|)/ε`; several values also test uniformity.
    A {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
        ubar: Vec<f64>,
    },
    /// Rescaled product `δ̄_{1/ε}(δ̄_ε p · δ̄_ε q)`.
    Beta {
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,0", value_parser = parse_point)]
        p: H1Point,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1,0", value_parser = parse_point)]
        q: H1Point,
    },
    /// `δ̄_{1/ε} δ_ε u`.
    Derivability {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,1", value_parser = parse_point)]
        u: H1Point,
    },
    /// Difference quotients of `ρ` along intrinsic dilatations.
    MetricDiff {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0", value_parser = parse_point)]
        base: H1Point,
        /// Tolerance for the seminorm laws.
        #[arg(long, default_value_t = 1e-3)]
        seminorm_tol: f64,
    },
}

fn parse_point(s: &str) -> std::result::Result<H1Point, String> {
    H1Point::parse_triplet(s).map_err(|e| e.to_string())
}

/// Loads a gauge from a shorthand, inline JSON or a file.
pub fn load_gauge(source: &str) -> Result<Gauge> {
    let spec = match source.trim() {
        "linear" => GaugeSpec::Linear {},
        "oscillatory" => GaugeSpec::default_oscillatory(),
        s if s.starts_with('{') => GaugeSpec::from_json(s)?,
        _ => {
            let text = fs::read_to_string(source).map_err(|e| Error::Io(format!("{source}: {e}")))?;
            GaugeSpec::from_json(&text)?
        }
    };
    spec.build()
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub gauge: Gauge,
    pub grid: EpsGrid,
    pub params: LimitParams,
    pub verify: VerifyConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_options(o: &Options, default_gauge: &str) -> Result<Self> {
        let gauge = load_gauge(o.gauge.as_deref().unwrap_or(default_gauge))?;
        let grid = EpsGrid::new(o.eps0, o.ratio, o.count)?;
        let params = LimitParams { window: o.window, atol: o.atol, divergence_bound: o.divergence_bound };
        params.validate()?;
        if o.samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        let region = SampleBox::parse(&o.region)?;
        Ok(RunConfig {
            gauge,
            grid,
            params,
            verify: VerifyConfig { samples: o.samples, seed: o.seed, region },
            out: o.out.clone(),
            format: o.format,
        })
    }

    fn valid_gauge(&self) -> Result<ValidGauge> {
        ValidGauge::new(self.gauge.clone())
    }

    /// Probes need room for two classifier windows.
    fn require_probe_grid(&self) -> Result<()> {
        self.params.require_len(self.grid.count)
    }
}

/// Everything a command produced, before anything touches the filesystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
    pub files: Vec<(String, String)>,
}

impl Execution {
    fn usage(err: &Error) -> Self {
        Execution { status: 2, stdout: String::new(), stderr: format!("error: {err}\n"), files: Vec::new() }
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Table => report.to_string(),
        Format::Structured => json(report),
    }
}

fn report_file(report: &VerificationReport, format: Format) -> (String, String) {
    match format {
        Format::Table => ("report.csv".into(), report.to_table()),
        Format::Structured => ("report.json".into(), json(report)),
    }
}

/// Runs a parsed command line without touching the filesystem (gauge files
/// aside).
pub fn execute(cli: &Cli) -> Execution {
    let default_gauge = match cli.command {
        Command::Counterexample => "oscillatory",
        _ => "linear",
    };
    let cfg = match RunConfig::from_options(&cli.options, default_gauge) {
        Ok(c) => c,
        Err(e) => return Execution::usage(&e),
    };
    let result = match &cli.command {
        Command::Verify => cmd_verify(&cfg),
        Command::GaugeCheck => cmd_gauge_check(&cfg),
        Command::Probe { probe } => cmd_probe(&cfg, probe),
        Command::Counterexample => cmd_counterexample(&cfg),
    };
    result.unwrap_or_else(|e| Execution::usage(&e))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Execution> {
    let report = verify_suite(&cfg.gauge, &cfg.verify)?;
    let passed = report.passed();
    let stderr = match report.first_failure() {
        Some(c) => format!("violation: {} (worst {:e}, witness {:?})\n", c.name, c.worst, c.witness),
        None => String::new(),
    };
    Ok(Execution {
        status: if passed { 0 } else { 1 },
        stdout: render_report(&report, cfg.format),
        stderr,
        files: vec![report_file(&report, cfg.format)],
    })
}

pub fn cmd_gauge_check(cfg: &RunConfig) -> Result<Execution> {
    let mut report = check_gauge(&cfg.gauge, &default_check_grid());
    report.subject = format!("gauge check {}", cfg.gauge.label());
    Ok(Execution {
        status: if report.passed() { 0 } else { 1 },
        stdout: render_report(&report, cfg.format),
        stderr: String::new(),
        files: vec![report_file(&report, cfg.format)],
    })
}

fn outcome_line<T: std::fmt::Debug + Copy>(label: &str, c: &Classification<T>) -> String {
    match c {
        Classification::Converged { limit } => format!("{label}: converged, limit {limit:?}\n"),
        Classification::Oscillating { liminf, limsup } => format!("{label}: oscillating, liminf {liminf:?}, limsup {limsup:?}\n"),
        Classification::Unsettled { liminf, limsup } => format!("{label}: unsettled, liminf {liminf:?}, limsup {limsup:?}\n"),
        Classification::Diverging => format!("{label}: diverging\n"),
    }
}

#[derive(Serialize)]
struct ProbeOutput<T> {
    traces: Vec<TraceSummary<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
}

fn point_args(name: &str, p: H1Point) -> Vec<(String, f64)> {
    vec![(format!("{name}.x1"), p.x[0]), (format!("{name}.x2"), p.x[1]), (format!("{name}.xbar"), p.xbar)]
}

pub fn cmd_probe(cfg: &RunConfig, probe: &Probe) -> Result<Execution> {
    cfg.require_probe_grid()?;
    let gauge = cfg.valid_gauge()?;
    let (grid, params) = (&cfg.grid, &cfg.params);
    let mut stdout = String::new();
    let mut files = Vec::new();
    let summary = match probe {
        Probe::A { ubar } => {
            if ubar.is_empty() {
                return Err(Error::Usage("probe a needs at least one ubar".into()));
            }
            let uniform = uniform_probe(ubar, grid, params, |u, g, p| a_probe(&gauge, *u, g, p))?;
            let single = uniform.traces.len() == 1;
            let mut traces = Vec::new();
            for (i, (u, t)) in ubar.iter().zip(&uniform.traces).enumerate() {
                stdout.push_str(&outcome_line(&format!("a(ubar={u})"), &t.classification));
                if let Some(gap) = t.classification.gap() {
                    stdout.push_str(&format!("  gap {gap:e}\n"));
                }
                let name = if single { "a.csv".to_string() } else { format!("a-{i}.csv") };
                files.push((name, t.to_csv()));
                traces.push(t.summary(vec![("ubar".into(), *u)]));
            }
            let report = (!single).then(|| {
                let mut r = VerificationReport::new("uniformity over ubar");
                r.push(uniform.to_check("A converges uniformly", Witness::scalars(vec![uniform.witness_point()])));
                stdout.push_str(&r.to_string());
                r
            });
            json(&ProbeOutput { traces, report })
        }
        Probe::Beta { p, q } => {
            let t = beta_probe(&gauge, *p, *q, grid, params)?;
            stdout.push_str(&outcome_line(&format!("beta(p={p}, q={q})"), &t.classification));
            files.push(("beta.csv".into(), t.to_csv()));
            let mut args = point_args("p", *p);
            args.extend(point_args("q", *q));
            json(&ProbeOutput { traces: vec![t.summary(args)], report: None })
        }
        Probe::Derivability { u } => {
            let d = id_derivability_probe(&gauge, *u, grid, params)?;
            stdout.push_str(&outcome_line(&format!("derivability(u={u})"), &d.trace.classification));
            let mut r = VerificationReport::new("closed form");
            r.push(Check::bounded(
                "trace matches closed form",
                d.trace.values.len(),
                d.closed_form_residual,
                crate::metrics::INVERSION_TOL,
                Witness::points(vec![*u]),
            ));
            stdout.push_str(&r.to_string());
            files.push(("derivability.csv".into(), d.trace.to_csv()));
            json(&ProbeOutput { traces: vec![d.trace.summary(point_args("u", *u))], report: Some(r) })
        }
        Probe::MetricDiff { base, seminorm_tol } => {
            if !(*seminorm_tol > 0.0) {
                return Err(Error::Usage(format!("seminorm tolerance must be > 0, got {seminorm_tol}")));
            }
            let r = metric_diff_probe(&gauge, *base, &default_v_grid(), grid, params, *seminorm_tol)?;
            match r.witness() {
                Some(w) => stdout.push_str(&format!("metric-diff(base={base}): not differentiable, witness v={w}\n")),
                None => stdout.push_str(&format!("metric-diff(base={base}): difference quotients converge uniformly\n")),
            }
            let report = r.to_report();
            stdout.push_str(&report.to_string());
            files.push(("metric-diff-sup.csv".into(), r.uniform.sup_trace.to_csv()));
            let traces = r
                .uniform
                .traces
                .iter()
                .zip(&r.uniform.points)
                .map(|(t, v)| {
                    let mut args = point_args("base", *base);
                    args.extend(point_args("v", *v));
                    t.summary(args)
                })
                .collect();
            json(&ProbeOutput { traces, report: Some(report) })
        }
    };
    files.push(("summary.json".into(), summary.clone()));
    if cfg.format == Format::Structured {
        stdout = summary;
    }
    Ok(Execution { status: 0, stdout, stderr: String::new(), files })
}

#[derive(Serialize)]
struct CounterexampleBundle {
    gauge: String,
    pattern: VerificationReport,
    verify: VerificationReport,
    a_probe: TraceSummary<f64>,
    beta_probe: TraceSummary<H1Point>,
    metric_diff: VerificationReport,
    a4: AgreementReport,
}

pub fn cmd_counterexample(cfg: &RunConfig) -> Result<Execution> {
    cfg.require_probe_grid()?;
    let gauge = cfg.valid_gauge()?;
    let (grid, params) = (&cfg.grid, &cfg.params);
    let verify = verify_suite(&gauge, &cfg.verify)?;
    let a = a_probe(&gauge, 1.0, grid, params)?;
    let (p, q) = (H1Point::new(1.0, 0.0, 0.0), H1Point::new(0.0, 1.0, 0.0));
    let beta = beta_probe(&gauge, p, q, grid, params)?;
    let md = metric_diff_probe(&gauge, H1Point::identity(), &default_v_grid(), grid, params, 1e-3)?;
    let a4 = a4_equivalence_check(&gauge, &default_a4_samples(), grid, params)?;

    let flag = |name: &str, ok: bool, note: String| Check {
        name: name.into(),
        passed: ok,
        samples: 1,
        worst: if ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        witness: Witness::default(),
        note,
    };
    let gap = a.classification.gap().unwrap_or(0.0);
    let mut pattern = VerificationReport::new(format!("counterexample pattern for {}", gauge.label()));
    pattern.push(flag(
        "verify passes",
        verify.passed(),
        verify.first_failure().map(|c| format!("first failure: {}", c.name)).unwrap_or_default(),
    ));
    pattern.push(flag(
        "A(1) oscillates with gap >= 0.5",
        a.classification.outcome() == Outcome::Oscillating && gap >= 0.5,
        format!("{}, gap {gap:e}", a.classification.outcome()),
    ));
    pattern.push(flag(
        "beta((1,0),0; (0,1),0) does not converge",
        !beta.classification.is_converged(),
        beta.classification.outcome().to_string(),
    ));
    pattern.push(flag(
        "metric differentiability fails at e",
        md.witness().is_some(),
        md.witness().map(|w| format!("witness v={w}")).unwrap_or_else(|| "no witness".into()),
    ));
    pattern.push(flag(
        "A4 and existence of A agree",
        a4.all_agree(),
        format!("{} samples, {} excluded", a4.entries.len(), a4.excluded.len()),
    ));

    let all_converge = a.classification.is_converged() && beta.classification.is_converged() && md.differentiable();
    let stderr = if pattern.passed() {
        String::new()
    } else if all_converge {
        "counterexample pattern not reproduced: all limits converge\n".to_string()
    } else {
        let c = pattern.first_failure().expect("failed pattern has a failing check");
        format!("counterexample pattern not reproduced: {} ({})\n", c.name, c.note)
    };

    let bundle = CounterexampleBundle {
        gauge: gauge.label().to_string(),
        pattern: pattern.clone(),
        verify,
        a_probe: a.summary(vec![("ubar".into(), 1.0)]),
        beta_probe: beta.summary({
            let mut v = point_args("p", p);
            v.extend(point_args("q", q));
            v
        }),
        metric_diff: md.to_report(),
        a4,
    };
    let structured = json(&bundle);
    let stdout = match cfg.format {
        Format::Table => pattern.to_string(),
        Format::Structured => structured.clone(),
    };
    Ok(Execution {
        status: if pattern.passed() { 0 } else { 1 },
        stdout,
        stderr,
        files: vec![
            ("counterexample.json".into(), structured),
            ("a.csv".into(), a.to_csv()),
            ("beta.csv".into(), beta.to_csv()),
            ("metric-diff-sup.csv".into(), md.uniform.sup_trace.to_csv()),
        ],
    })
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, &target)?;
    Ok(())
}

/// Writes the produced files into `out`; nothing is written on status 2.
pub fn persist(exec: &Execution, out: Option<&Path>) -> Result<()> {
    let Some(dir) = out else { return Ok(()) };
    if exec.status == 2 {
        return Ok(());
    }
    fs::create_dir_all(dir)?;
    for (name, contents) in &exec.files {
        write_atomic(dir, name, contents)?;
    }
    Ok(())
}

/// Parses `args`, runs, prints and persists. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let exec = execute(&cli);
    if let Err(e) = persist(&exec, cli.options.out.as_deref()) {
        eprintln!("error: {e}");
        return 2;
    }
    print!("{}", exec.stdout);
    eprint!("{}", exec.stderr);
    exec.status
}

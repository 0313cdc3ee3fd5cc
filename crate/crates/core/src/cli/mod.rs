//! Command-line front end: `plan`, `pareto`, `compare-greedy` and `converge`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 the discrete approximation
//! is infeasible (no sample within ε, or a target without samples), 3 the
//! mission itself is infeasible.

mod output;
mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::gtsp::{Effort, SolverMode, SolverOptions};
use crate::mission::{parse_mission, Mission};
use crate::planner::{
    checked_samples, convergence_sweep, envelope, nearest_start, InlPolicy, PlanError,
    PreparedMission, RunRecord, DEFAULT_ROUTE_STEP,
};
use crate::sampling::{SpacingParams, SPACING_CONDITIONS};

pub use output::{plan_document, PlanDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISCRETE_INFEASIBLE: i32 = 2;
pub const EXIT_MISSION_INFEASIBLE: i32 = 3;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "DWELLTOUR_THREADS";

/// Number of ε points in the default Pareto grid.
pub const DEFAULT_EPSILON_POINTS: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "dwelltour", version, about = "Surveillance tour planning for a fixed-wing UAV")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan one tour for a fixed ε.
    Plan(PlanArgs),
    /// Sweep ε and write the approximate Pareto front.
    Pareto(ParetoArgs),
    /// Compare the planner against the nearest-next baseline over loop counts.
    CompareGreedy(GreedyArgs),
    /// Re-plan at a fixed ε over a list of sampling spacings.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// First-stop policy: auto, best_of_all, or target:ID.
    #[arg(long, default_value = "auto")]
    pub policy: String,
    #[arg(long, default_value = "heuristic", value_parser = ["exact", "heuristic"])]
    pub mode: String,
    #[arg(long, default_value = "default")]
    pub effort: Effort,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub mission: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    /// conditionN or dr=..,dtheta=..,dalpha=..
    #[arg(long, default_value = "condition5")]
    pub spacing: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Plan JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Route sampling step in meters.
    #[arg(long, default_value_t = DEFAULT_ROUTE_STEP)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    #[arg(long)]
    pub mission: PathBuf,
    /// A:B:N (N evenly spaced values) or a comma list; defaults to 0..max start time.
    #[arg(long)]
    pub epsilons: Option<String>,
    /// Repeat to overlay several spacings.
    #[arg(long, default_value = "condition5")]
    pub spacing: Vec<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Summary JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GreedyArgs {
    #[arg(long)]
    pub mission: PathBuf,
    /// Loop counts applied to every target, as a comma list.
    #[arg(long, default_value = "0,1,2,4")]
    pub loops_sweep: String,
    #[arg(long)]
    pub epsilons: Option<String>,
    #[arg(long, default_value = "condition5")]
    pub spacing: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub mission: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    /// Repeat for each spacing; defaults to condition1..condition7.
    #[arg(long)]
    pub spacing: Vec<String>,
    /// Known optimum for relative errors.
    #[arg(long)]
    pub reference: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    InfeasibleMission,
    InfeasibleDiscrete,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub initial_time: f64,
    pub closed_time: f64,
    pub node_counts: Vec<usize>,
    /// Omitted from files so that outputs stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub mission_digest: String,
    pub spacing: Vec<String>,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub outcome: Outcome,
    pub metrics: Option<Metrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Failure of a command, already mapped to an exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub fn exit_code(e: &PlanError) -> i32 {
    match e {
        PlanError::MissionInfeasible(_) => EXIT_MISSION_INFEASIBLE,
        PlanError::Sampling(_) | PlanError::DiscreteInfeasible { .. } => EXIT_DISCRETE_INFEASIBLE,
        _ => EXIT_USAGE,
    }
}

fn outcome_of(code: i32) -> Outcome {
    match code {
        EXIT_MISSION_INFEASIBLE => Outcome::InfeasibleMission,
        EXIT_DISCRETE_INFEASIBLE => Outcome::InfeasibleDiscrete,
        _ => Outcome::Ok,
    }
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
/// Results go to the files named by the flags; the run summary goes to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    configure_threads();
    let started = Instant::now();
    let result = match &cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Pareto(a) => cmd_pareto(a),
        Command::CompareGreedy(a) => cmd_compare_greedy(a),
        Command::Converge(a) => cmd_converge(a),
    };
    match result {
        Ok(mut summary) => {
            if let Some(m) = summary.metrics.as_mut() {
                m.wall_time = Some(started.elapsed().as_secs_f64());
            }
            let _ = writeln!(stdout, "{}", serde_json::to_string(&summary).unwrap_or_default());
            if let Some(msg) = &summary.message {
                let _ = writeln!(stderr, "{msg}");
            }
            match summary.outcome {
                Outcome::Ok => EXIT_OK,
                Outcome::InfeasibleDiscrete => EXIT_DISCRETE_INFEASIBLE,
                Outcome::InfeasibleMission => EXIT_MISSION_INFEASIBLE,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn configure_threads() {
    let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) else {
        return;
    };
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
}

struct Loaded {
    mission: Mission,
    digest: String,
}

fn load_mission(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::usage(format!("{} is not UTF-8", path.display())))?;
    let mission = parse_mission(&text).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Loaded {
        mission,
        digest: Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect(),
    })
}

pub fn parse_spacing(text: &str) -> Result<SpacingParams, CliError> {
    SpacingParams::parse(text).map_err(|e| CliError::usage(e.to_string()))
}

/// Preset name when `sp` is one of the seven conditions, else its triple.
pub fn spacing_label(sp: &SpacingParams) -> String {
    SPACING_CONDITIONS
        .iter()
        .position(|c| c == sp)
        .map(|i| format!("condition{}", i + 1))
        .unwrap_or_else(|| sp.to_string())
}

fn solver_options(a: &SolverArgs, m: &Mission) -> Result<(InlPolicy, SolverOptions), CliError> {
    let policy = match a.policy.strip_prefix("target:") {
        Some(id) => InlPolicy::Target(
            m.target_index(id)
                .ok_or_else(|| CliError::usage(format!("unknown target `{id}` in --policy")))?,
        ),
        None => a.policy.parse().map_err(CliError::usage)?,
    };
    let mode = match a.mode.as_str() {
        "exact" => SolverMode::Exact,
        _ => SolverMode::Heuristic,
    };
    Ok((
        policy,
        SolverOptions {
            mode,
            effort: a.effort,
            seed: a.seed,
        },
    ))
}

/// `A:B:N` gives N evenly spaced values from A to B; otherwise a comma list.
pub fn parse_epsilons(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("malformed --epsilons `{text}`"));
    let values: Vec<f64> = if let [a, b, n] = text.split(':').collect::<Vec<_>>()[..] {
        let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        linspace(a, b, n)
    } else {
        text.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.iter().any(|e| !e.is_finite() || *e < 0.0) {
        return Err(CliError::usage("epsilons must be finite and non-negative"));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::usage("epsilons must be ascending"));
    }
    Ok(values)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::usage(e.to_string()))?;
    text.push('\n');
    write_file(path, &text)
}

fn summary(command: &str, digest: &str, spacing: Vec<String>, epsilons: Vec<f64>, seed: u64) -> RunSummary {
    RunSummary {
        command: command.to_string(),
        mission_digest: digest.to_string(),
        spacing,
        epsilons,
        seed,
        outcome: Outcome::Ok,
        metrics: None,
        message: None,
    }
}

fn fail(mut s: RunSummary, e: &PlanError) -> Result<RunSummary, CliError> {
    let code = exit_code(e);
    if code == EXIT_USAGE {
        return Err(CliError {
            code,
            message: e.to_string(),
        });
    }
    s.outcome = outcome_of(code);
    s.metrics = None;
    s.message = Some(e.to_string());
    Ok(s)
}

pub fn cmd_plan(a: &PlanArgs) -> Result<RunSummary, CliError> {
    if !(a.epsilon >= 0.0 && a.epsilon.is_finite()) {
        return Err(CliError::usage("--epsilon must be finite and non-negative"));
    }
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(CliError::usage("--step must be positive"));
    }
    let loaded = load_mission(&a.mission)?;
    let m = &loaded.mission;
    let sp = parse_spacing(&a.spacing)?;
    let (policy, opts) = solver_options(&a.solver, m)?;
    let s = summary("plan", &loaded.digest, vec![spacing_label(&sp)], vec![a.epsilon], opts.seed);

    let samples = match checked_samples(m, &sp) {
        Ok(x) => x,
        Err(e) => return fail(s, &e),
    };
    let nearest = nearest_start(&samples, m);
    if nearest > a.epsilon {
        return fail(s, &PlanError::DiscreteInfeasible { epsilon: a.epsilon, nearest });
    }
    let prepared = PreparedMission::from_samples(m, &sp, samples);
    let result = match prepared.plan(a.epsilon, policy, opts, a.step) {
        Ok(r) => r,
        Err(e) => return fail(s, &e),
    };
    let mut s = s;
    s.metrics = Some(Metrics {
        initial_time: result.discrete.initial_time,
        closed_time: result.discrete.closed_time,
        node_counts: prepared.counts.clone(),
        wall_time: None,
    });
    let doc = plan_document(m, &s, a.epsilon, &result);
    if let Some(p) = &a.out {
        write_json(p, &doc)?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &svg::route_svg(&doc))?;
    }
    Ok(s)
}

/// One spacing's sweep, or the reason it has no data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub spacing: String,
    pub node_counts: Vec<usize>,
    pub runs: Vec<RunRecord>,
    pub envelope: Vec<Option<f64>>,
    pub note: Option<String>,
}

fn default_epsilons(m: &Mission, spacings: &[SpacingParams]) -> Vec<f64> {
    let max = spacings
        .iter()
        .filter_map(|sp| checked_samples(m, sp).ok())
        .flat_map(|s| {
            s.nodes
                .iter()
                .map(|n| crate::dubins::dubins_time(&m.uav.start, &n.config, m.uav.turn_radius, m.uav.speed))
                .collect::<Vec<_>>()
        })
        .fold(0.0f64, f64::max);
    linspace(0.0, max, DEFAULT_EPSILON_POINTS)
}

/// Runs every ε on one spacing and records raw runs plus the envelope.
fn sweep_curve(
    m: &Mission,
    sp: &SpacingParams,
    epsilons: &[f64],
    policy: InlPolicy,
    opts: SolverOptions,
) -> Result<SweepCurve, PlanError> {
    let mut curve = SweepCurve {
        spacing: spacing_label(sp),
        node_counts: Vec::new(),
        runs: Vec::new(),
        envelope: Vec::new(),
        note: None,
    };
    let empty = |epsilon| RunRecord {
        epsilon,
        initial_time: None,
        closed_time: None,
    };
    let samples = match checked_samples(m, sp) {
        Ok(s) => s,
        Err(e @ PlanError::Sampling(_)) => {
            curve.note = Some(e.to_string());
            curve.runs = epsilons.iter().map(|&e| empty(e)).collect();
            curve.envelope = vec![None; epsilons.len()];
            return Ok(curve);
        }
        Err(e) => return Err(e),
    };
    curve.node_counts = samples.counts.clone();
    let nearest = nearest_start(&samples, m);
    curve.runs = if epsilons.iter().all(|&e| e < nearest) {
        epsilons.iter().map(|&e| empty(e)).collect()
    } else {
        PreparedMission::from_samples(m, sp, samples).sweep(epsilons, policy, opts)?
    };
    curve.envelope = epsilons.iter().map(|&e| envelope(&curve.runs, e)).collect();
    Ok(curve)
}

fn best_point(curves: &[SweepCurve]) -> Option<(f64, f64, Vec<usize>)> {
    curves
        .iter()
        .flat_map(|c| {
            c.runs
                .iter()
                .filter_map(move |r| Some((r.initial_time?, r.closed_time?, c.node_counts.clone())))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
}

pub fn cmd_pareto(a: &ParetoArgs) -> Result<RunSummary, CliError> {
    let loaded = load_mission(&a.mission)?;
    let m = &loaded.mission;
    let spacings: Vec<SpacingParams> = a.spacing.iter().map(|s| parse_spacing(s)).collect::<Result<_, _>>()?;
    let (policy, opts) = solver_options(&a.solver, m)?;
    let epsilons = match &a.epsilons {
        Some(t) => parse_epsilons(t)?,
        None => default_epsilons(m, &spacings),
    };
    let labels = spacings.iter().map(spacing_label).collect();
    let mut s = summary("pareto", &loaded.digest, labels, epsilons.clone(), opts.seed);

    let mut curves = Vec::new();
    for sp in &spacings {
        match sweep_curve(m, sp, &epsilons, policy, opts) {
            Ok(c) => curves.push(c),
            Err(e) => return fail(s, &e),
        }
    }
    if let Some(p) = &a.csv {
        write_file(p, &output::pareto_csv(&curves))?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &svg::pareto_svg(&curves))?;
    }
    match best_point(&curves) {
        Some((init, closed, counts)) => {
            s.metrics = Some(Metrics {
                initial_time: init,
                closed_time: closed,
                node_counts: counts,
                wall_time: None,
            })
        }
        None => {
            s.outcome = Outcome::InfeasibleDiscrete;
            s.message = Some("Discrete Approximation Infeasible at every epsilon".into());
        }
    }
    if let Some(p) = &a.out {
        write_json(p, &output::SweepDocument { summary: &s, curves: &curves })?;
    }
    Ok(s)
}

/// One compare-greedy row; planner columns are empty where ε is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyRow {
    pub tau: u32,
    pub epsilon: f64,
    pub greedy_closed: f64,
    pub planner_closed: Option<f64>,
    pub gap: Option<f64>,
}

pub fn cmd_compare_greedy(a: &GreedyArgs) -> Result<RunSummary, CliError> {
    let loaded = load_mission(&a.mission)?;
    let base = &loaded.mission;
    let sp = parse_spacing(&a.spacing)?;
    let (policy, opts) = solver_options(&a.solver, base)?;
    let taus: Vec<u32> = a
        .loops_sweep
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::usage(format!("malformed --loops-sweep `{}`", a.loops_sweep))))
        .collect::<Result<_, _>>()?;
    let epsilons = match &a.epsilons {
        Some(t) => parse_epsilons(t)?,
        None => default_epsilons(base, &[sp]),
    };
    let mut s = summary("compare-greedy", &loaded.digest, vec![spacing_label(&sp)], epsilons.clone(), opts.seed);

    let mut rows = Vec::new();
    let mut last = None;
    for &tau in &taus {
        let m = base.with_uniform_loops(tau);
        let prepared = match PreparedMission::new(&m, &sp) {
            Ok(p) => p,
            Err(e) => return fail(s, &e),
        };
        let greedy = match prepared.greedy(DEFAULT_ROUTE_STEP) {
            Ok(g) => g,
            Err(e) => return fail(s, &e),
        };
        let runs = match prepared.sweep(&epsilons, policy, opts) {
            Ok(r) => r,
            Err(e) => return fail(s, &e),
        };
        let greedy_closed = greedy.discrete.closed_time;
        for &epsilon in &epsilons {
            let planner_closed = envelope(&runs, epsilon);
            rows.push(GreedyRow {
                tau,
                epsilon,
                greedy_closed,
                planner_closed,
                gap: planner_closed.map(|p| greedy_closed - p),
            });
        }
        last = Some((greedy.discrete.initial_time, greedy_closed, prepared.counts.clone()));
    }
    if let Some(p) = &a.csv {
        write_file(p, &output::greedy_csv(&rows))?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &svg::greedy_svg(&rows))?;
    }
    if let Some((init, closed, counts)) = last {
        s.metrics = Some(Metrics {
            initial_time: init,
            closed_time: closed,
            node_counts: counts,
            wall_time: None,
        });
    }
    if let Some(p) = &a.out {
        write_json(p, &output::GreedyDocument { summary: &s, rows: &rows })?;
    }
    Ok(s)
}

pub fn cmd_converge(a: &ConvergeArgs) -> Result<RunSummary, CliError> {
    if !(a.epsilon >= 0.0 && a.epsilon.is_finite()) {
        return Err(CliError::usage("--epsilon must be finite and non-negative"));
    }
    let loaded = load_mission(&a.mission)?;
    let m = &loaded.mission;
    let spacings: Vec<SpacingParams> = if a.spacing.is_empty() {
        SPACING_CONDITIONS.to_vec()
    } else {
        a.spacing.iter().map(|s| parse_spacing(s)).collect::<Result<_, _>>()?
    };
    let (policy, opts) = solver_options(&a.solver, m)?;
    let labels = spacings.iter().map(spacing_label).collect();
    let mut s = summary("converge", &loaded.digest, labels, vec![a.epsilon], opts.seed);
    let rows = match convergence_sweep(m, a.epsilon, &spacings, policy, opts, a.reference) {
        Ok(r) => r,
        Err(e) => return fail(s, &e),
    };
    if let Some(p) = &a.csv {
        write_file(p, &output::converge_csv(&rows))?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &svg::converge_svg(&rows))?;
    }
    match rows.iter().rev().find(|r| r.closed_time.is_some()) {
        Some(r) => {
            s.metrics = Some(Metrics {
                initial_time: r.initial_time.unwrap_or_default(),
                closed_time: r.closed_time.unwrap_or_default(),
                node_counts: r.node_counts.clone(),
                wall_time: None,
            })
        }
        None => {
            s.outcome = Outcome::InfeasibleDiscrete;
            s.message = Some("Discrete Approximation Infeasible for every spacing".into());
        }
    }
    if let Some(p) = &a.out {
        write_json(p, &output::ConvergeDocument { summary: &s, rows: &rows })?;
    }
    Ok(s)
}

//! Batch front end: scenario parsing, command dispatch and artifact writing.
//!
//! Every command writes `config.resolved` (the scenario that reproduces the
//! run) and a JSON report into the output directory, plus its own CSV and SVG
//! files. Output bytes depend only on the resolved scenario; the thread count
//! is an execution setting and is not echoed.

mod config;
mod format;
mod svg;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use config::{ConfigError, ResolvedConfig, Scenario};
pub use format::{g17, g17_opt, to_json};

use crate::experiments::{
    fixed_point_targets, monte_carlo, run_stats, sup_deviation, sweep_d, sweep_pbar, EnsembleOptions,
    MonteCarloSummary, Predicate, RunStats, SweepParameter, SweepResult,
};
use crate::meanfield::{classify_regime, solve, PiecewiseSolution, RegimeReport, Segment};
use crate::model::{initial_state, ModelParams, ReputationState};
use crate::rng::{derive_seed, GENERATOR_NAME};
use crate::sim::{simulate, SimulationConfig, Trajectory};
use svg::{Plot, Style};

const TOOL: &str = "devrep";
const VERSION: &str = env!("CARGO_PKG_VERSION");
const RESOLVED_FILE: &str = "config.resolved";

const BLUE: &str = "#1f77b4";
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Simulate,
    Montecarlo,
    Sweep,
    Ode,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Analyze,
        Command::Simulate,
        Command::Montecarlo,
        Command::Sweep,
        Command::Ode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Simulate => "simulate",
            Command::Montecarlo => "montecarlo",
            Command::Sweep => "sweep",
            Command::Ode => "ode",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Runtime(crate::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for configuration errors, 3 for runtime or numerical errors, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Runtime(e) => write!(f, "error: {e}"),
            CliError::Io { path, source } => write!(f, "I/O error on {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e)
    }
}

/// Files written by one command, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

struct Writer {
    dir: PathBuf,
    files: Vec<String>,
}

impl Writer {
    fn new(dir: &str) -> Result<Self, CliError> {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        write_file(&self.dir.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let text = to_json(value).map_err(|e| CliError::Io {
            path: self.dir.join(name),
            source: e.into(),
        })?;
        self.write(name, &text)
    }

    fn finish(self) -> RunOutput {
        RunOutput {
            out_dir: self.dir,
            files: self.files,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    generator: &'static str,
    command: &'static str,
    config: &'a ResolvedConfig,
    analysis: &'a RegimeReport,
    results: T,
}

/// Runs `cmd` and writes its artifacts into `config.out_dir`. Unless `quiet`,
/// a short summary goes to stdout.
pub fn run(cmd: Command, config: &ResolvedConfig, quiet: bool) -> Result<RunOutput, CliError> {
    let analysis = classify_regime(&config.params);
    let mut w = Writer::new(&config.out_dir)?;
    w.write(RESOLVED_FILE, &config.to_scenario_text())?;
    let summary = match cmd {
        Command::Analyze => cmd_analyze(config, &analysis, &mut w)?,
        Command::Simulate => cmd_simulate(config, &analysis, &mut w)?,
        Command::Montecarlo => cmd_montecarlo(config, &analysis, &mut w)?,
        Command::Sweep => cmd_sweep(config, &analysis, &mut w)?,
        Command::Ode => cmd_ode(config, &analysis, &mut w)?,
    };
    if !quiet {
        print!("{summary}");
        println!("wrote {} files to {}", w.files.len(), w.dir.display());
    }
    Ok(w.finish())
}

fn report<'a, T: Serialize>(
    cmd: Command,
    config: &'a ResolvedConfig,
    analysis: &'a RegimeReport,
    results: T,
) -> Report<'a, T> {
    Report {
        tool: TOOL,
        version: VERSION,
        generator: GENERATOR_NAME,
        command: cmd.name(),
        config,
        analysis,
        results,
    }
}

fn analysis_summary(p: &ModelParams, a: &RegimeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "theta={} p={} pbar={} d={} omega={} u={}",
        p.theta(),
        p.p(),
        p.pbar(),
        p.d(),
        p.omega(),
        p.u()
    );
    let _ = writeln!(s, "regime: {}", a.regime.label());
    match a.pbar_critical {
        Some(c) => {
            let _ = writeln!(s, "critical pbar: {}", g17(c));
        }
        None => s.push_str("critical pbar: none (theta <= d)\n"),
    }
    let _ = writeln!(s, "pi (false reputation): {}", g17(a.false_reputation));
    let _ = writeln!(s, "d_c1 = {}  d_c2 = {}", g17(a.d_c1), g17(a.d_c2));
    for fp in &a.fixed_points {
        let _ = writeln!(
            s,
            "fixed point {:?}: alpha={} beta={} R={}",
            fp.kind,
            g17(fp.alpha),
            g17(fp.beta),
            g17(fp.reputation_value)
        );
    }
    s
}

#[derive(Serialize)]
struct AnalyzeResults {
    pbar: f64,
    decay_rate: f64,
    max_increment: f64,
}

fn cmd_analyze(config: &ResolvedConfig, analysis: &RegimeReport, w: &mut Writer) -> Result<String, CliError> {
    let p = &config.params;
    let results = AnalyzeResults {
        pbar: p.pbar(),
        decay_rate: 1.0 - p.u(),
        max_increment: p.max_increment(),
    };
    w.json("analyze.json", &report(Command::Analyze, config, analysis, results))?;
    Ok(analysis_summary(p, analysis))
}

fn sim_config(config: &ResolvedConfig) -> SimulationConfig {
    SimulationConfig::new(config.params, config.r0, config.n_steps, config.seed)
        .with_timestamps(config.timestamps)
        .with_scaling(config.scaling_n)
}

fn ensemble_options(config: &ResolvedConfig) -> EnsembleOptions {
    EnsembleOptions {
        targets: fixed_point_targets(&config.params, config.epsilon),
        epsilon: config.epsilon,
        burn_in: Some(config.burn_in),
        hit_band: config.band,
        threads: config.thread_option(),
    }
}

/// Trajectory CSV. Row `n` holds the state before event `n + 1`, that event,
/// and whether it was taken into account; `t` is the time the state was
/// reached. The state after the last event is not a row.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::with_capacity(64 * (traj.len() + 1));
    s.push_str("step,t,alpha,beta,R,event,accepted\n");
    let timed = traj.config.record_timestamps;
    let mut state = (traj.initial.alpha(), traj.initial.beta());
    let mut t = 0.0;
    for (n, rec) in traj.steps.iter().enumerate() {
        let stamp = if timed { g17(t) } else { String::new() };
        let _ = writeln!(
            s,
            "{n},{stamp},{},{},{},{},{}",
            g17(state.0),
            g17(state.1),
            g17(state.0 / (state.0 + state.1)),
            rec.event.label(),
            rec.accepted as u8
        );
        state = (rec.alpha, rec.beta);
        t = rec.t.unwrap_or(t);
    }
    s
}

fn reference_lines(plot: Plot, analysis: &RegimeReport, theta: f64) -> Plot {
    plot.h_line(theta, &format!("θ = {}", short(theta))).h_line(
        analysis.false_reputation,
        &format!("π = {}", short(analysis.false_reputation)),
    )
}

fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn trajectory_points(traj: &Trajectory) -> Vec<(f64, f64)> {
    std::iter::once((0.0, traj.initial.reputation()))
        .chain(traj.steps.iter().map(|r| (r.step as f64, r.reputation())))
        .collect()
}

#[derive(Serialize)]
struct SimulateResults {
    initial: ReputationState,
    final_state: ReputationState,
    final_time: Option<f64>,
    rows: usize,
    accepted_indirect: usize,
    rejected_indirect: usize,
    stats: RunStats,
}

fn cmd_simulate(config: &ResolvedConfig, analysis: &RegimeReport, w: &mut Writer) -> Result<String, CliError> {
    let traj = simulate(&sim_config(config))?;
    let stats = run_stats(0, &traj, &ensemble_options(config))?;
    w.write("trajectory.csv", &trajectory_csv(&traj))?;

    let plot = Plot::new(
        &format!("Reputation path (seed {})", config.seed),
        "step n",
        "R",
        (0.0, config.n_steps as f64),
        (0.0, 1.0),
    )
    .series("R_n", BLUE, Style::Steps, trajectory_points(&traj));
    w.write(
        "trajectory.svg",
        &reference_lines(plot, analysis, config.params.theta()).render(),
    )?;

    let indirect: Vec<bool> = traj
        .steps
        .iter()
        .filter(|r| r.event == crate::sim::ObservationEvent::IndirectReport)
        .map(|r| r.accepted)
        .collect();
    let accepted = indirect.iter().filter(|a| **a).count();
    let results = SimulateResults {
        initial: traj.initial,
        final_state: traj.final_state(),
        final_time: traj.steps.last().and_then(|r| r.t),
        rows: traj.len(),
        accepted_indirect: accepted,
        rejected_indirect: indirect.len() - accepted,
        stats,
    };
    let summary = format!(
        "simulated {} steps: final R = {}, mean R after burn-in = {}\n",
        traj.len(),
        g17(results.final_state.reputation()),
        g17(results.stats.mean_r)
    );
    w.json("simulate.json", &report(Command::Simulate, config, analysis, results))?;
    Ok(summary)
}

fn predicates(config: &ResolvedConfig, n_targets: usize) -> Vec<Predicate> {
    let thr = config.occupancy_threshold;
    let mut preds = vec![Predicate::MeanInBand {
        lo: config.band.0,
        hi: config.band.1,
    }];
    for target in 0..n_targets {
        preds.push(Predicate::OccupancyAbove { target, min: thr });
        preds.push(Predicate::OccupancyBelow { target, max: thr });
    }
    if n_targets > 1 {
        preds.push(Predicate::All(
            (0..n_targets)
                .map(|target| Predicate::OccupancyAbove { target, min: thr })
                .collect(),
        ));
    }
    preds
}

fn runs_csv(summary: &MonteCarloSummary) -> String {
    let n_targets = summary.runs.first().map_or(0, |r| r.occupancy.fractions.len());
    let mut s = String::from("run,seed,mean_r,std_r,final_r,first_hit");
    for k in 0..n_targets {
        let _ = write!(s, ",occupancy_{k}");
    }
    s.push_str(",occupancy_elsewhere\n");
    for r in &summary.runs {
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            r.index,
            r.seed,
            g17(r.mean_r),
            g17(r.std_r),
            g17(r.final_r),
            r.first_hit.map(|h| h.to_string()).unwrap_or_default()
        );
        for f in &r.occupancy.fractions {
            let _ = write!(s, ",{}", g17(*f));
        }
        let _ = writeln!(s, ",{}", g17(r.occupancy.elsewhere));
    }
    s
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| CliError::Runtime(crate::Error::InvalidArgument(format!("thread pool: {e}")))),
    }
}

#[derive(Serialize)]
struct MonteCarloResults<'a> {
    targets: &'a [f64],
    summary: &'a MonteCarloSummary,
}

fn cmd_montecarlo(config: &ResolvedConfig, analysis: &RegimeReport, w: &mut Writer) -> Result<String, CliError> {
    let cfg = sim_config(config);
    let opts = ensemble_options(config);
    let preds = predicates(config, opts.targets.len());
    let summary = monte_carlo(&cfg, config.runs, config.seed, &preds, &opts)?;
    w.write("montecarlo_runs.csv", &runs_csv(&summary))?;

    if config.per_run_csv {
        let dir = w.dir.join("runs");
        with_pool(config.thread_option(), || {
            (0..config.runs).into_par_iter().try_for_each(|i| {
                let traj = simulate(&cfg.with_seed(derive_seed(config.seed, i as u64)))?;
                write_file(&dir.join(format!("run_{i:04}.csv")), &trajectory_csv(&traj))
            })
        })??;
        w.files.extend((0..config.runs).map(|i| format!("runs/run_{i:04}.csv")));
    }

    let mut text = format!("{} runs, targets {:?}\n", config.runs, opts.targets);
    for pc in &summary.aggregate.predicate_counts {
        let _ = writeln!(text, "  {}: {}/{}", pc.predicate, pc.count, config.runs);
    }
    let results = MonteCarloResults {
        targets: &opts.targets,
        summary: &summary,
    };
    w.json(
        "montecarlo.json",
        &report(Command::Montecarlo, config, analysis, results),
    )?;
    Ok(text)
}

fn sweep_csv(result: &SweepResult) -> String {
    let mut s = String::from("swept_value,regime,n_fixed_points,rep_true,rep_false\n");
    for row in &result.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            g17(row.value),
            row.report.regime.label(),
            row.n_fixed_points(),
            g17_opt(row.rep_true),
            g17_opt(row.rep_false)
        );
    }
    s
}

/// Present values as a solid series, absent ones (at `at`) as a dashed one.
type Points = Vec<(f64, f64)>;

fn branch(result: &SweepResult, value: impl Fn(usize) -> Option<f64>, at: impl Fn(usize) -> f64) -> (Points, Points) {
    let mut solid = Vec::new();
    let mut dashed = Vec::new();
    for (i, row) in result.rows.iter().enumerate() {
        match value(i) {
            Some(v) => {
                solid.push((row.value, v));
                dashed.push((row.value, f64::NAN));
            }
            None => {
                solid.push((row.value, f64::NAN));
                dashed.push((row.value, at(i)));
            }
        }
    }
    (solid, dashed)
}

fn bifurcation_svg(result: &SweepResult, theta: f64) -> String {
    let grid = &result.grid;
    let x_range = (grid[0], grid[grid.len() - 1]);
    let (true_solid, true_dashed) = branch(result, |i| result.rows[i].rep_true, |_| theta);
    let (false_solid, false_dashed) = branch(
        result,
        |i| result.rows[i].rep_false,
        |i| result.rows[i].report.false_reputation,
    );
    Plot::new(
        &format!("Fixed points vs {}", result.parameter.label()),
        result.parameter.label(),
        "fixed-point reputation",
        x_range,
        (0.0, 1.0),
    )
    .series("true branch (θ)", BLUE, Style::Line, true_solid)
    .series("true branch absent", BLUE, Style::Dashed, true_dashed)
    .series("false branch (π)", RED, Style::Line, false_solid)
    .series("false branch absent", RED, Style::Dashed, false_dashed)
    .render()
}

#[derive(Serialize)]
struct SweepResults<'a> {
    transitions: Vec<Transition>,
    sweep: &'a SweepResult,
}

#[derive(Serialize)]
struct Transition {
    after: f64,
    at: f64,
    from: &'static str,
    to: &'static str,
}

fn cmd_sweep(config: &ResolvedConfig, analysis: &RegimeReport, w: &mut Writer) -> Result<String, CliError> {
    let result = match config.sweep {
        SweepParameter::D => sweep_d(&config.params, &config.sweep_grid)?,
        SweepParameter::Pbar => sweep_pbar(&config.params, &config.sweep_grid)?,
    };
    w.write("sweep.csv", &sweep_csv(&result))?;
    w.write("bifurcation.svg", &bifurcation_svg(&result, config.params.theta()))?;
    let transitions: Vec<Transition> = result
        .transitions()
        .into_iter()
        .map(|(i, from, to)| Transition {
            after: result.grid[i - 1],
            at: result.grid[i],
            from: from.label(),
            to: to.label(),
        })
        .collect();
    let mut text = format!("swept {} over {} values\n", result.parameter.label(), result.grid.len());
    for t in &transitions {
        let _ = writeln!(text, "  {} -> {} between {} and {}", t.from, t.to, t.after, t.at);
    }
    let results = SweepResults {
        transitions,
        sweep: &result,
    };
    w.json("sweep.json", &report(Command::Sweep, config, analysis, results))?;
    Ok(text)
}

fn segments_csv(solution: &PiecewiseSolution) -> String {
    let mut s = String::from("segment,region,t_start,t_end,alpha_start,beta_start,asymptote_alpha,asymptote_beta\n");
    for (i, seg) in solution.segments.iter().enumerate() {
        let (a, b) = seg.start_state();
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{}",
            seg.region.label(),
            g17(seg.t_start),
            g17_opt(seg.t_end),
            g17(a),
            g17(b),
            g17(seg.asymptote_alpha),
            g17(seg.asymptote_beta)
        );
    }
    s
}

fn sample_times(config: &ResolvedConfig) -> impl Iterator<Item = f64> + '_ {
    let k = config.ode_samples;
    (0..=k).map(move |i| {
        if i == k {
            config.t_end
        } else {
            config.t_end * i as f64 / k as f64
        }
    })
}

#[derive(Serialize)]
struct OdeResults<'a> {
    initial: ReputationState,
    segments: &'a [Segment],
    crossings: Vec<f64>,
    terminal_state: (f64, f64),
    terminal_reputation: f64,
    overlay_events: usize,
    overlay_sup_deviation: f64,
}

fn cmd_ode(config: &ResolvedConfig, analysis: &RegimeReport, w: &mut Writer) -> Result<String, CliError> {
    let p = &config.params;
    let initial = initial_state(config.r0, p.u())?;
    let solution = solve(&initial, p, config.t_end)?;
    w.write("ode_segments.csv", &segments_csv(&solution))?;

    let mut samples = String::from("t,alpha,beta,R\n");
    let mut curve = Vec::with_capacity(config.ode_samples + 1);
    for t in sample_times(config) {
        let (a, b) = solution.state_at(t).expect("sample time within horizon");
        let r = a / (a + b);
        curve.push((t, r));
        let _ = writeln!(samples, "{},{},{},{}", g17(t), g17(a), g17(b), g17(r));
    }
    w.write("ode_samples.csv", &samples)?;

    // Overlay path: the N-scaled process with rate-N event times over the horizon.
    let n = config.scaling_n;
    let events = (n as f64 * config.t_end).ceil() as usize;
    let cfg = SimulationConfig::new(*p, config.r0, events.max(1), config.seed)
        .with_timestamps(true)
        .with_scaling(n);
    let traj = simulate(&cfg)?;
    let sup = sup_deviation(&traj, p, config.t_end)?;
    let path: Vec<(f64, f64)> = std::iter::once((0.0, traj.initial.reputation()))
        .chain(
            traj.steps
                .iter()
                .filter_map(|r| r.t.filter(|t| *t <= config.t_end).map(|t| (t, r.reputation()))),
        )
        .collect();
    let plot = Plot::new(
        &format!("Simulation (N = {n}) and mean-field ODE"),
        "t",
        "R",
        (0.0, config.t_end),
        (0.0, 1.0),
    )
    .series("simulation", GREEN, Style::Steps, path)
    .series("ODE", RED, Style::Line, curve);
    w.write("ode_overlay.svg", &reference_lines(plot, analysis, p.theta()).render())?;

    let crossings: Vec<f64> = solution.crossings().filter(|t| *t <= config.t_end).collect();
    let terminal = solution.terminal_state();
    let mut text = format!("{} segment(s)", solution.segments.len());
    for t in &crossings {
        let _ = write!(text, ", crossing at t = {}", g17(*t));
    }
    let _ = writeln!(text, "\nR(t_end) = {}", g17(terminal.0 / (terminal.0 + terminal.1)));
    let results = OdeResults {
        initial,
        segments: &solution.segments,
        crossings,
        terminal_state: terminal,
        terminal_reputation: terminal.0 / (terminal.0 + terminal.1),
        overlay_events: traj.len(),
        overlay_sup_deviation: sup,
    };
    w.json("ode.json", &report(Command::Ode, config, analysis, results))?;
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolved(extra: &str) -> ResolvedConfig {
        Scenario::parse(extra).unwrap().resolve().unwrap()
    }

    #[test]
    fn csv_rows_hold_pre_event_state() {
        let cfg = resolved("n_steps = 50\nseed = 3\n");
        let traj = simulate(&sim_config(&cfg)).unwrap();
        let csv = trajectory_csv(&traj);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 51);
        assert_eq!(lines[0], "step,t,alpha,beta,R,event,accepted");
        let row1: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(&row1[..3], &["0", "", "0"]);
        assert!((row1[3].parse::<f64>().unwrap() - 100.0).abs() < 1e-9);
        // Row n+1 is the state after the event of row n.
        let row2: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(row2[2].parse::<f64>().unwrap(), traj.steps[0].alpha);
        assert_eq!(row2[3].parse::<f64>().unwrap(), traj.steps[0].beta);
    }

    #[test]
    fn timestamps_column() {
        let cfg = resolved("n_steps = 5\ntimestamps = true\n");
        let traj = simulate(&sim_config(&cfg)).unwrap();
        let csv = trajectory_csv(&traj);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[1].starts_with("0,0,"));
        let t1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(t1, traj.steps[0].t.unwrap());
    }

    #[test]
    fn predicate_set() {
        let cfg = resolved("");
        assert_eq!(predicates(&cfg, 1).len(), 3);
        assert_eq!(predicates(&cfg, 2).len(), 6);
    }

    #[test]
    fn sample_grid_ends_exactly() {
        let cfg = resolved("t_end = 0.3\node_samples = 7\n");
        let ts: Vec<f64> = sample_times(&cfg).collect();
        assert_eq!(ts.len(), 8);
        assert_eq!(ts[0], 0.0);
        assert_eq!(*ts.last().unwrap(), 0.3);
    }

    #[test]
    fn exit_codes() {
        let cfg_err = Scenario::parse("d = 1.5\n").unwrap().resolve().unwrap_err();
        assert_eq!(CliError::from(cfg_err).exit_code(), 2);
        assert_eq!(CliError::from(crate::Error::DegenerateState).exit_code(), 3);
        let io = CliError::Io {
            path: "x".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(io.exit_code(), 4);
    }
}

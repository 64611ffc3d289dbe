//! Ensembles, occupancy statistics, parameter sweeps and the mean-field
//! convergence study.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanfield::{classify_regime, solve, FixedPointKind, Regime, RegimeReport};
use crate::model::{initial_state, ModelParams};
use crate::rng::derive_seed;
use crate::sim::{simulate, SimulationConfig, Trajectory};

/// Default neighbourhood half-width for occupancy.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Default burn-in: the first 20% of the steps.
pub fn default_burn_in(n_steps: usize) -> usize {
    n_steps / 5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyStats {
    pub targets: Vec<f64>,
    pub epsilon: f64,
    pub burn_in: usize,
    /// Fraction of post-burn-in steps with `|R - target| <= epsilon`, per target.
    pub fractions: Vec<f64>,
    pub elsewhere: f64,
}

fn check_targets(targets: &[f64], epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    for (i, &a) in targets.iter().enumerate() {
        if !a.is_finite() {
            return Err(Error::InvalidArgument("occupancy target is not finite".into()));
        }
        for &b in &targets[i + 1..] {
            if !((a - b).abs() > 2.0 * epsilon) {
                return Err(Error::OverlappingTargets { a, b, epsilon });
            }
        }
    }
    Ok(())
}

/// Occupancy of a reputation series.
pub fn occupancy_of_series(
    reputations: &[f64],
    targets: &[f64],
    epsilon: f64,
    burn_in: usize,
) -> Result<OccupancyStats> {
    check_targets(targets, epsilon)?;
    if burn_in >= reputations.len() {
        return Err(Error::BurnInTooLarge {
            burn_in,
            len: reputations.len(),
        });
    }
    let window = &reputations[burn_in..];
    let mut counts = vec![0usize; targets.len()];
    for &r in window {
        // Targets are disjoint, so at most one matches.
        if let Some(i) = targets.iter().position(|&t| (r - t).abs() <= epsilon) {
            counts[i] += 1;
        }
    }
    let total = window.len();
    let inside: usize = counts.iter().sum();
    Ok(OccupancyStats {
        targets: targets.to_vec(),
        epsilon,
        burn_in,
        fractions: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        elsewhere: (total - inside) as f64 / total as f64,
    })
}

pub fn occupancy(trajectory: &Trajectory, targets: &[f64], epsilon: f64, burn_in: usize) -> Result<OccupancyStats> {
    let reps: Vec<f64> = trajectory.reputations().collect();
    occupancy_of_series(&reps, targets, epsilon, burn_in)
}

/// Occupancy targets `{pi, theta}`, or just `{theta}` when the two
/// neighbourhoods of half-width `epsilon` would overlap.
pub fn fixed_point_targets(params: &ModelParams, epsilon: f64) -> Vec<f64> {
    let (pi, theta) = crate::meanfield::critical_d(params);
    if (theta - pi).abs() > 2.0 * epsilon {
        vec![pi, theta]
    } else {
        vec![theta]
    }
}

/// Settings shared by every member of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    pub targets: Vec<f64>,
    pub epsilon: f64,
    /// `None` means [`default_burn_in`].
    pub burn_in: Option<usize>,
    /// Band whose first entry time is reported per run.
    pub hit_band: (f64, f64),
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub threads: Option<usize>,
}

impl EnsembleOptions {
    /// Defaults with targets from [`fixed_point_targets`].
    pub fn for_params(params: &ModelParams) -> Self {
        Self::with_epsilon(params, DEFAULT_EPSILON)
    }

    pub fn with_epsilon(params: &ModelParams, epsilon: f64) -> Self {
        Self {
            targets: fixed_point_targets(params, epsilon),
            epsilon,
            burn_in: None,
            hit_band: (0.75, 0.85),
            threads: None,
        }
    }

    fn burn_in_for(&self, n_steps: usize) -> usize {
        self.burn_in.unwrap_or_else(|| default_burn_in(n_steps))
    }
}

/// Per-run summary kept by an ensemble (trajectories themselves are dropped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub index: usize,
    pub seed: u64,
    /// Mean reputation after burn-in.
    pub mean_r: f64,
    /// Population standard deviation of reputation after burn-in.
    pub std_r: f64,
    pub final_r: f64,
    /// First step whose reputation lies in the hit band.
    pub first_hit: Option<u64>,
    pub occupancy: OccupancyStats,
}

pub fn run_stats(index: usize, trajectory: &Trajectory, opts: &EnsembleOptions) -> Result<RunStats> {
    let reps: Vec<f64> = trajectory.reputations().collect();
    let burn_in = opts.burn_in_for(reps.len());
    let occupancy = occupancy_of_series(&reps, &opts.targets, opts.epsilon, burn_in)?;
    let window = &reps[burn_in..];
    let n = window.len() as f64;
    let mean_r = window.iter().sum::<f64>() / n;
    let var = window.iter().map(|r| (r - mean_r).powi(2)).sum::<f64>() / n;
    let (lo, hi) = opts.hit_band;
    let first_hit = trajectory
        .steps
        .iter()
        .find(|s| (lo..=hi).contains(&s.reputation()))
        .map(|s| s.step);
    Ok(RunStats {
        index,
        seed: trajectory.config.seed,
        mean_r,
        std_r: var.sqrt(),
        final_r: *reps.last().expect("non-empty trajectory"),
        first_hit,
        occupancy,
    })
}

/// A yes/no question asked of every run in an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Predicate {
    MeanInBand {
        lo: f64,
        hi: f64,
    },
    /// Occupancy of target `target` strictly below `max`.
    OccupancyBelow {
        target: usize,
        max: f64,
    },
    /// Occupancy of target `target` strictly above `min`.
    OccupancyAbove {
        target: usize,
        min: f64,
    },
    All(Vec<Predicate>),
}

impl Predicate {
    pub fn holds(&self, run: &RunStats) -> bool {
        let occ = |i: usize| run.occupancy.fractions.get(i).copied();
        match self {
            Predicate::MeanInBand { lo, hi } => (*lo..=*hi).contains(&run.mean_r),
            Predicate::OccupancyBelow { target, max } => occ(*target).is_some_and(|f| f < *max),
            Predicate::OccupancyAbove { target, min } => occ(*target).is_some_and(|f| f > *min),
            Predicate::All(ps) => ps.iter().all(|p| p.holds(run)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Predicate::MeanInBand { lo, hi } => format!("mean_r in [{lo}, {hi}]"),
            Predicate::OccupancyBelow { target, max } => format!("occupancy[{target}] < {max}"),
            Predicate::OccupancyAbove { target, min } => format!("occupancy[{target}] > {min}"),
            Predicate::All(ps) => ps.iter().map(Predicate::describe).collect::<Vec<_>>().join(" and "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateCount {
    pub predicate: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub predicate_counts: Vec<PredicateCount>,
    pub mean_of_means: f64,
    pub min_of_means: f64,
    pub max_of_means: f64,
    /// Ensemble mean of each target's occupancy fraction.
    pub mean_occupancy: Vec<f64>,
    pub runs_hit: usize,
    /// Mean first-hit step over runs that hit the band.
    pub mean_first_hit: Option<f64>,
}

/// Aggregates per-run records in index order.
pub fn aggregate(runs: &[RunStats], predicates: &[Predicate]) -> Aggregate {
    let n = runs.len() as f64;
    let means = runs.iter().map(|r| r.mean_r);
    let n_targets = runs.first().map_or(0, |r| r.occupancy.fractions.len());
    let mean_occupancy = (0..n_targets)
        .map(|i| runs.iter().map(|r| r.occupancy.fractions[i]).sum::<f64>() / n)
        .collect();
    let hits: Vec<f64> = runs.iter().filter_map(|r| r.first_hit).map(|h| h as f64).collect();
    Aggregate {
        predicate_counts: predicates
            .iter()
            .map(|p| PredicateCount {
                predicate: p.describe(),
                count: runs.iter().filter(|r| p.holds(r)).count(),
            })
            .collect(),
        mean_of_means: means.clone().sum::<f64>() / n,
        min_of_means: means.clone().fold(f64::INFINITY, f64::min),
        max_of_means: means.fold(f64::NEG_INFINITY, f64::max),
        mean_occupancy,
        runs_hit: hits.len(),
        mean_first_hit: (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub n_runs: usize,
    pub base_seed: u64,
    pub runs: Vec<RunStats>,
    pub aggregate: Aggregate,
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(Error::InvalidArgument("threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}"))),
    }
}

/// Runs `n_runs` independent simulations; run `i` uses `derive_seed(base_seed, i)`
/// (the seed in `config` is ignored).
pub fn monte_carlo(
    config: &SimulationConfig,
    n_runs: usize,
    base_seed: u64,
    predicates: &[Predicate],
    opts: &EnsembleOptions,
) -> Result<MonteCarloSummary> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be >= 1".into()));
    }
    config.validate()?;
    check_targets(&opts.targets, opts.epsilon)?;
    let burn_in = opts.burn_in_for(config.n_steps);
    if burn_in >= config.n_steps {
        return Err(Error::BurnInTooLarge {
            burn_in,
            len: config.n_steps,
        });
    }
    let runs = in_pool(opts.threads, || {
        (0..n_runs)
            .into_par_iter()
            .map(|i| {
                let cfg = config.with_seed(derive_seed(base_seed, i as u64));
                let traj = simulate(&cfg)?;
                run_stats(i, &traj, opts)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let aggregate = aggregate(&runs, predicates);
    Ok(MonteCarloSummary {
        n_runs,
        base_seed,
        runs,
        aggregate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    D,
    Pbar,
}

impl SweepParameter {
    pub fn label(self) -> &'static str {
        match self {
            SweepParameter::D => "d",
            SweepParameter::Pbar => "pbar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub report: RegimeReport,
    pub rep_true: Option<f64>,
    pub rep_false: Option<f64>,
}

impl SweepRow {
    pub fn n_fixed_points(&self) -> usize {
        self.report.fixed_points.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn regimes(&self) -> Vec<Regime> {
        self.rows.iter().map(|r| r.report.regime).collect()
    }

    /// Grid positions where the regime label changes, with the labels on either side.
    pub fn transitions(&self) -> Vec<(usize, Regime, Regime)> {
        self.rows
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].report.regime != w[1].report.regime)
            .map(|(i, w)| (i + 1, w[0].report.regime, w[1].report.regime))
            .collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("grid contains a non-finite value".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidGrid("grid must be sorted ascending".into()));
    }
    Ok(())
}

fn sweep(parameter: SweepParameter, grid: &[f64], at: impl Fn(f64) -> Result<ModelParams>) -> Result<SweepResult> {
    check_grid(grid)?;
    let rows = grid
        .iter()
        .map(|&value| {
            let report = classify_regime(&at(value)?);
            Ok(SweepRow {
                value,
                rep_true: report.point(FixedPointKind::True).map(|f| f.reputation_value),
                rep_false: report.point(FixedPointKind::False).map(|f| f.reputation_value),
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        parameter,
        grid: grid.to_vec(),
        rows,
    })
}

/// Regime per deviation threshold; `base`'s own `d` is ignored.
pub fn sweep_d(base: &ModelParams, grid: &[f64]) -> Result<SweepResult> {
    sweep(SweepParameter::D, grid, |d| base.with_d(d))
}

/// Regime per lying probability `pbar` (sets `p = 1 - pbar`); `base`'s own `p` is ignored.
pub fn sweep_pbar(base: &ModelParams, grid: &[f64]) -> Result<SweepResult> {
    sweep(SweepParameter::Pbar, grid, |pbar| base.with_pbar(pbar))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub median_sup_deviation: f64,
    /// Per-run sup deviations, in run order.
    pub deviations: Vec<f64>,
}

/// Sup over event times of the Euclidean distance between the (piecewise
/// constant) simulated path and the ODE solution from the same start.
/// Both the pre-jump and post-jump simulated states are compared at each event
/// time. Requires recorded timestamps.
pub fn sup_deviation(trajectory: &Trajectory, params: &ModelParams, horizon: f64) -> Result<f64> {
    let last_t = match trajectory.steps.last() {
        Some(s) => {
            s.t.ok_or_else(|| Error::InvalidArgument("trajectory has no timestamps".into()))?
        }
        None => return Ok(0.0),
    };
    let sol = solve(&trajectory.initial, params, horizon.max(last_t))?;
    let dist = |a: f64, b: f64, (oa, ob): (f64, f64)| ((a - oa).powi(2) + (b - ob).powi(2)).sqrt();
    let mut prev = (trajectory.initial.alpha(), trajectory.initial.beta());
    let mut sup = 0.0f64;
    for s in &trajectory.steps {
        let t = s.t.expect("timestamps recorded for every step");
        let ode = sol
            .state_at(t)
            .ok_or_else(|| Error::InvalidArgument(format!("ODE solution does not cover t = {t}")))?;
        sup = sup.max(dist(prev.0, prev.1, ode)).max(dist(s.alpha, s.beta, ode));
        prev = (s.alpha, s.beta);
    }
    Ok(sup)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// True when `values` is nonincreasing except for at most one adjacent inversion.
pub fn nonincreasing_with_one_inversion(values: &[f64]) -> bool {
    values.windows(2).filter(|w| w[1] > w[0]).count() <= 1
}

/// Median sup-deviation between the `N`-scaled process and the ODE, per `N`.
///
/// Run `r` at the `k`-th entry of `n_list` uses
/// `derive_seed(base_seed, k * runs + r)` and simulates `ceil(N * t_horizon)`
/// events with rate-`N` timestamps.
pub fn convergence_study(
    params: &ModelParams,
    r0: f64,
    t_horizon: f64,
    n_list: &[u64],
    runs: usize,
    base_seed: u64,
    threads: Option<usize>,
) -> Result<Vec<ConvergenceRow>> {
    if !(t_horizon > 0.0) || !t_horizon.is_finite() {
        return Err(Error::InvalidArgument("t_horizon must be positive".into()));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "N list must be non-empty and strictly increasing".into(),
        ));
    }
    if n_list[0] == 0 {
        return Err(Error::InvalidScale(0));
    }
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be >= 1".into()));
    }
    initial_state(r0, params.u())?;
    in_pool(threads, || {
        n_list
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let n_steps = (n as f64 * t_horizon).ceil() as usize;
                let deviations = (0..runs)
                    .into_par_iter()
                    .map(|r| {
                        let seed = derive_seed(base_seed, (k * runs + r) as u64);
                        let cfg = SimulationConfig::new(*params, r0, n_steps, seed)
                            .with_timestamps(true)
                            .with_scaling(n);
                        sup_deviation(&simulate(&cfg)?, params, t_horizon)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ConvergenceRow {
                    n,
                    median_sup_deviation: median(&deviations),
                    deviations,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, ReputationState};
    use crate::sim::{ObservationEvent, StepRecord};
    use proptest::prelude::*;

    fn set1(p: f64) -> ModelParams {
        validate_params(0.8, p, 0.4, 1.0, 0.99).unwrap()
    }

    fn synthetic(reps: &[f64]) -> Trajectory {
        let params = set1(0.8);
        Trajectory {
            config: SimulationConfig::new(params, 0.0, reps.len(), 0),
            initial: ReputationState::new(0.0, 100.0).unwrap(),
            steps: reps
                .iter()
                .enumerate()
                .map(|(i, &r)| StepRecord {
                    step: i as u64 + 1,
                    t: None,
                    alpha: r,
                    beta: 1.0 - r,
                    event: ObservationEvent::PositiveDirect,
                    accepted: true,
                })
                .collect(),
        }
    }

    #[test]
    fn occupancy_constant_path() {
        let traj = synthetic(&[0.8; 50]);
        let occ = occupancy(&traj, &[0.8, 0.16], 0.05, 10).unwrap();
        assert_eq!(occ.fractions, vec![1.0, 0.0]);
        assert_eq!(occ.elsewhere, 0.0);
    }

    #[test]
    fn occupancy_counting() {
        let mut reps = vec![0.8; 5];
        reps.extend([0.16; 5]);
        let occ = occupancy(&synthetic(&reps), &[0.8, 0.16], 0.05, 0).unwrap();
        assert_eq!(occ.fractions, vec![0.5, 0.5]);
        assert_eq!(occ.elsewhere, 0.0);
    }

    #[test]
    fn occupancy_errors() {
        let traj = synthetic(&[0.5; 10]);
        assert!(matches!(
            occupancy(&traj, &[0.5, 0.55], 0.05, 0),
            Err(Error::OverlappingTargets { .. })
        ));
        assert!(matches!(
            occupancy(&traj, &[0.5, 0.6], 0.05, 0),
            Err(Error::OverlappingTargets { .. })
        ));
        assert_eq!(
            occupancy(&traj, &[0.5], 0.05, 10),
            Err(Error::BurnInTooLarge { burn_in: 10, len: 10 })
        );
        assert!(occupancy(&traj, &[0.5], 0.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn occupancy_sums_to_one(reps in proptest::collection::vec(0.0f64..=1.0, 1..400), burn in 0usize..50) {
            prop_assume!(burn < reps.len());
            let occ = occupancy_of_series(&reps, &[0.1, 0.5, 0.9], 0.1, burn).unwrap();
            let total: f64 = occ.fractions.iter().sum::<f64>() + occ.elsewhere;
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn occupancy_permutation_invariant(reps in proptest::collection::vec(0.0f64..=1.0, 1..200)) {
            let a = occupancy_of_series(&reps, &[0.16, 0.8, 0.5], 0.05, 0).unwrap();
            let b = occupancy_of_series(&reps, &[0.8, 0.5, 0.16], 0.05, 0).unwrap();
            prop_assert_eq!(a.fractions[0], b.fractions[2]);
            prop_assert_eq!(a.fractions[1], b.fractions[0]);
            prop_assert_eq!(a.fractions[2], b.fractions[1]);
            prop_assert_eq!(a.elsewhere, b.elsewhere);
        }
    }

    #[test]
    fn single_run_summary_is_that_run() {
        let cfg = SimulationConfig::new(set1(0.8), 0.0, 5_000, 0);
        let opts = EnsembleOptions::for_params(&cfg.params);
        let summary = monte_carlo(&cfg, 1, 17, &[], &opts).unwrap();
        let traj = simulate(&cfg.with_seed(derive_seed(17, 0))).unwrap();
        let direct = run_stats(0, &traj, &opts).unwrap();
        assert_eq!(summary.runs, vec![direct.clone()]);
        assert_eq!(summary.aggregate.mean_of_means, direct.mean_r);
        assert_eq!(summary.aggregate.min_of_means, direct.mean_r);
        assert_eq!(summary.aggregate.max_of_means, direct.mean_r);
    }

    #[test]
    fn aggregate_recomputes_from_records() {
        let cfg = SimulationConfig::new(set1(0.8), 0.0, 3_000, 0);
        let opts = EnsembleOptions::for_params(&cfg.params);
        let preds = [
            Predicate::MeanInBand { lo: 0.75, hi: 0.85 },
            Predicate::OccupancyBelow { target: 0, max: 0.01 },
        ];
        let summary = monte_carlo(&cfg, 12, 5, &preds, &opts).unwrap();
        assert_eq!(summary.aggregate, aggregate(&summary.runs, &preds));
        let mut seeds: Vec<u64> = summary.runs.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 12);
    }

    #[test]
    fn ensemble_independent_of_threads() {
        let cfg = SimulationConfig::new(set1(0.8), 0.0, 4_000, 0);
        let mut opts = EnsembleOptions::for_params(&cfg.params);
        opts.threads = Some(1);
        let a = monte_carlo(&cfg, 16, 99, &[], &opts).unwrap();
        opts.threads = Some(4);
        let b = monte_carlo(&cfg, 16, 99, &[], &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn zero_runs_rejected() {
        let cfg = SimulationConfig::new(set1(0.8), 0.0, 100, 0);
        let opts = EnsembleOptions::for_params(&cfg.params);
        assert!(monte_carlo(&cfg, 0, 1, &[], &opts).is_err());
    }

    #[test]
    fn sweep_d_matches_thresholds() {
        let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let res = sweep_d(&set1(0.8), &grid).unwrap();
        for row in &res.rows {
            let expected = if row.value < 0.64 {
                Regime::Subcritical
            } else if row.value < 0.8 {
                Regime::Bistable
            } else {
                Regime::FalseOnly
            };
            assert_eq!(row.report.regime, expected, "d = {}", row.value);
        }
        assert_eq!(res.transitions().len(), 2);
    }

    #[test]
    fn sweep_single_point_matches_direct_classification() {
        let res = sweep_d(&set1(0.8), &[0.4]).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].report, classify_regime(&set1(0.8)));
    }

    #[test]
    fn sweep_straddling_theta_only() {
        // d_c1 = 0.64, so every value below is > d_c1.
        let res = sweep_d(&set1(0.8), &[0.7, 0.75, 0.79, 0.8, 0.85]).unwrap();
        assert_eq!(
            res.regimes(),
            vec![
                Regime::Bistable,
                Regime::Bistable,
                Regime::Bistable,
                Regime::FalseOnly,
                Regime::FalseOnly
            ]
        );
        assert_eq!(res.transitions(), vec![(3, Regime::Bistable, Regime::FalseOnly)]);
    }

    #[test]
    fn sweep_pbar_examples() {
        let base = set1(0.8);
        let sub = sweep_pbar(&base, &[0.2, 0.4, 0.45]).unwrap();
        assert!(sub.regimes().iter().all(|r| *r == Regime::Subcritical));
        let sup = sweep_pbar(&base, &[0.55, 0.6, 0.8]).unwrap();
        assert!(sup.regimes().iter().all(|r| *r == Regime::Bistable));
        let low = validate_params(0.3, 0.5, 0.4, 1.0, 0.99).unwrap();
        let fo = sweep_pbar(&low, &[0.0, 0.3, 0.9, 1.0]).unwrap();
        assert!(fo.regimes().iter().all(|r| *r == Regime::FalseOnly));
    }

    #[test]
    fn sweep_grid_errors() {
        assert!(matches!(sweep_d(&set1(0.8), &[]), Err(Error::InvalidGrid(_))));
        assert!(matches!(sweep_d(&set1(0.8), &[0.5, 0.4]), Err(Error::InvalidGrid(_))));
        assert!(sweep_d(&set1(0.8), &[0.0, 0.5]).is_err());
        assert!(sweep_pbar(&set1(0.8), &[0.5, 1.5]).is_err());
    }

    #[test]
    fn convergence_single_n() {
        let rows = convergence_study(&set1(0.8), 0.0, 50.0, &[1], 3, 7, None).unwrap();
        assert_eq!(rows.len(), 1);
        let seed = derive_seed(7, 0);
        let cfg = SimulationConfig::new(set1(0.8), 0.0, 50, seed).with_timestamps(true);
        let direct = sup_deviation(&simulate(&cfg).unwrap(), &set1(0.8), 50.0).unwrap();
        assert_eq!(rows[0].deviations[0], direct);
    }

    #[test]
    fn convergence_deterministic_dynamics() {
        let params = validate_params(1.0, 1.0, 0.4, 1.0, 0.99).unwrap();
        let rows = convergence_study(&params, 1.0, 20.0, &[1, 10, 100], 2, 3, None).unwrap();
        for row in rows {
            assert!(row.median_sup_deviation < 1e-9, "{row:?}");
        }
    }

    #[test]
    fn convergence_argument_errors() {
        let p = set1(0.8);
        assert!(convergence_study(&p, 0.0, 0.0, &[1], 1, 0, None).is_err());
        assert!(convergence_study(&p, 0.0, 10.0, &[10, 1], 1, 0, None).is_err());
        assert!(convergence_study(&p, 0.0, 10.0, &[], 1, 0, None).is_err());
        assert!(convergence_study(&p, 0.0, 10.0, &[0, 1], 1, 0, None).is_err());
    }

    #[test]
    fn one_inversion_rule() {
        assert!(nonincreasing_with_one_inversion(&[3.0, 2.0, 1.0]));
        assert!(nonincreasing_with_one_inversion(&[3.0, 3.5, 1.0]));
        assert!(!nonincreasing_with_one_inversion(&[3.0, 3.5, 1.0, 2.0]));
    }
}

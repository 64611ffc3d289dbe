//! Mean-field limit of the counter process.
//!
//! The limit ODE is
//!
//! ```text
//! alpha' = (u-1) alpha + p theta
//! beta'  = (u-1) beta  + p (1-theta) + omega pbar 1{alpha/(alpha+beta) <= d}
//! ```
//!
//! It is linear on either side of the line `alpha/(alpha+beta) = d`, and both
//! components relax at the same rate `1-u` in both regions. Each region's
//! solution is therefore a straight-line exponential approach to that region's
//! asymptote, and the exit time from a region has a closed form. [`solve`]
//! stitches those pieces together without any numerical integration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, ReputationState};

/// Maximum number of region switches [`solve`] tolerates by default.
pub const DEFAULT_CROSSING_CAP: usize = 64;

/// Side of the discontinuity line. The line itself belongs to `Below`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `alpha/(alpha+beta) > d`: indirect reports are rejected.
    Above,
    /// `alpha/(alpha+beta) <= d`: indirect reports are accepted.
    Below,
}

impl Region {
    /// Region of a state with positive mass, using the same test as the simulator.
    pub fn of(alpha: f64, beta: f64, d: f64) -> Region {
        if alpha / (alpha + beta) <= d {
            Region::Below
        } else {
            Region::Above
        }
    }

    pub fn other(self) -> Region {
        match self {
            Region::Above => Region::Below,
            Region::Below => Region::Above,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Above => "above",
            Region::Below => "below",
        }
    }
}

/// Right-hand side of the mean ODE; the region is read off the state.
pub fn ode_rhs(alpha: f64, beta: f64, params: &ModelParams) -> Result<(f64, f64)> {
    if !(alpha + beta > 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(ode_rhs_in_region(
        alpha,
        beta,
        Region::of(alpha, beta, params.d()),
        params,
    ))
}

/// Right-hand side of the linear field that governs `region`.
pub fn ode_rhs_in_region(alpha: f64, beta: f64, region: Region, params: &ModelParams) -> (f64, f64) {
    let decay = params.u() - 1.0;
    let p = params.p();
    let lies = match region {
        Region::Above => 0.0,
        Region::Below => params.omega() * params.pbar(),
    };
    (
        decay * alpha + p * params.theta(),
        decay * beta + p * (1.0 - params.theta()) + lies,
    )
}

/// Equilibrium of the linear field governing `region`, whether or not it lies
/// inside that region.
pub fn asymptote(region: Region, params: &ModelParams) -> (f64, f64) {
    let rate = 1.0 - params.u();
    let p = params.p();
    let alpha = p * params.theta() / rate;
    let beta = match region {
        Region::Above => p * (1.0 - params.theta()) / rate,
        Region::Below => (p * (1.0 - params.theta()) + params.omega() * params.pbar()) / rate,
    };
    (alpha, beta)
}

/// One exponential piece: for `t` in the segment,
/// `alpha(t) = c_alpha * exp(-rate (t - t_start)) + asymptote_alpha`, same for beta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t_start: f64,
    /// End of validity; `None` if the trajectory never leaves the region.
    pub t_end: Option<f64>,
    pub region: Region,
    pub c_alpha: f64,
    pub c_beta: f64,
    pub asymptote_alpha: f64,
    pub asymptote_beta: f64,
    /// Common decay rate `1 - u`.
    pub rate: f64,
}

impl Segment {
    /// State at absolute time `t`; no check that `t` lies inside the segment.
    pub fn state_at(&self, t: f64) -> (f64, f64) {
        let e = (-self.rate * (t - self.t_start)).exp();
        (
            self.c_alpha * e + self.asymptote_alpha,
            self.c_beta * e + self.asymptote_beta,
        )
    }

    pub fn start_state(&self) -> (f64, f64) {
        (self.c_alpha + self.asymptote_alpha, self.c_beta + self.asymptote_beta)
    }

    fn contains(&self, t: f64) -> bool {
        t >= self.t_start && self.t_end.map_or(true, |end| t <= end)
    }
}

/// Closed-form solution of the linear field of `region` from `initial` at time 0.
pub fn segment_solution(initial: (f64, f64), region: Region, params: &ModelParams) -> Segment {
    segment_from(0.0, initial, region, params)
}

fn segment_from(t_start: f64, initial: (f64, f64), region: Region, params: &ModelParams) -> Segment {
    let (asymptote_alpha, asymptote_beta) = asymptote(region, params);
    Segment {
        t_start,
        t_end: None,
        region,
        c_alpha: initial.0 - asymptote_alpha,
        c_beta: initial.1 - asymptote_beta,
        asymptote_alpha,
        asymptote_beta,
        rate: 1.0 - params.u(),
    }
}

/// Time (relative to the segment start) at which the segment leaves its region.
///
/// Along the segment, `f(t) = (1-d) alpha - d beta = C e^{-rate t} + K` and the
/// region boundary is `f = 0`. An exit from `Below` needs `K > 0`, from `Above`
/// `K < 0`; in both cases it happens at `-ln(-K/C) / rate` provided
/// `-K/C` is in `(0, 1)`.
pub fn crossing_time(segment: &Segment, d: f64) -> Option<f64> {
    let c = (1.0 - d) * segment.c_alpha - d * segment.c_beta;
    let k = (1.0 - d) * segment.asymptote_alpha - d * segment.asymptote_beta;
    let exits = match segment.region {
        Region::Below => k > 0.0,
        Region::Above => k < 0.0,
    };
    if !exits || c == 0.0 {
        return None;
    }
    let ratio = -k / c;
    if ratio > 0.0 && ratio < 1.0 {
        Some(-ratio.ln() / segment.rate)
    } else {
        None
    }
}

/// Exact piecewise solution on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSolution {
    pub horizon: f64,
    pub segments: Vec<Segment>,
}

impl PiecewiseSolution {
    /// State at time `t`, or `None` when `t` is negative or past the last
    /// segment's end.
    pub fn state_at(&self, t: f64) -> Option<(f64, f64)> {
        if !(t >= 0.0) {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.t_start <= t);
        let seg = self.segments.get(idx.checked_sub(1)?)?;
        seg.contains(t).then(|| seg.state_at(t))
    }

    pub fn reputation_at(&self, t: f64) -> Option<f64> {
        self.state_at(t).map(|(a, b)| a / (a + b))
    }

    /// State at the horizon.
    pub fn terminal_state(&self) -> (f64, f64) {
        self.state_at(self.horizon).expect("solution covers its horizon")
    }

    /// Times at which the solution switches region.
    pub fn crossings(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments
            .iter()
            .take(self.segments.len().saturating_sub(1))
            .filter_map(|s| s.t_end)
    }
}

/// Region the flow actually moves into from `state`.
///
/// A state on the line belongs to `Below`, but if the `Below` field points
/// straight across the line the solution leaves immediately.
fn starting_region(alpha: f64, beta: f64, params: &ModelParams) -> Region {
    let d = params.d();
    let region = Region::of(alpha, beta, d);
    if region == Region::Below {
        let f0 = (1.0 - d) * alpha - d * beta;
        let (aa, ab) = asymptote(Region::Below, params);
        let k = (1.0 - d) * aa - d * ab;
        if f0 >= 0.0 && k > 0.0 {
            return Region::Above;
        }
    }
    region
}

/// Event-driven exact integration up to `horizon` with the default crossing cap.
pub fn solve(initial: &ReputationState, params: &ModelParams, horizon: f64) -> Result<PiecewiseSolution> {
    solve_with_cap(initial, params, horizon, DEFAULT_CROSSING_CAP)
}

pub fn solve_with_cap(
    initial: &ReputationState,
    params: &ModelParams,
    horizon: f64,
    cap: usize,
) -> Result<PiecewiseSolution> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let d = params.d();
    let mut state = (initial.alpha(), initial.beta());
    let mut region = starting_region(state.0, state.1, params);
    let mut t0 = 0.0;
    let mut segments = Vec::new();
    loop {
        let mut seg = segment_from(t0, state, region, params);
        match crossing_time(&seg, d) {
            Some(dt) => {
                let t_cross = t0 + dt;
                seg.t_end = Some(t_cross);
                segments.push(seg);
                if t_cross >= horizon {
                    break;
                }
                if segments.len() > cap {
                    return Err(Error::ChatterDetected { cap });
                }
                state = seg.state_at(t_cross);
                t0 = t_cross;
                region = region.other();
            }
            None => {
                segments.push(seg);
                break;
            }
        }
    }
    Ok(PiecewiseSolution { horizon, segments })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedPointKind {
    /// Reputation equals the true behaviour `theta`.
    True,
    /// Reputation dragged down to `pi` by accepted lies.
    False,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub alpha: f64,
    pub beta: f64,
    pub reputation_value: f64,
    pub kind: FixedPointKind,
    pub region: Region,
    /// Both Jacobian eigenvalues inside the region equal `-(1-u)`; every
    /// returned point is asymptotically stable within its region.
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Only the true fixed point.
    Subcritical,
    /// True and false fixed points coexist.
    Bistable,
    /// Only the false fixed point.
    FalseOnly,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Subcritical => "subcritical",
            Regime::Bistable => "bistable",
            Regime::FalseOnly => "false_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub pbar_critical: Option<f64>,
    pub d_c1: f64,
    pub d_c2: f64,
    /// Reputation value of the false fixed point, `p theta / (p + omega pbar)`.
    pub false_reputation: f64,
    pub fixed_points: Vec<FixedPoint>,
    pub two_sided_unique: bool,
}

impl RegimeReport {
    pub fn point(&self, kind: FixedPointKind) -> Option<&FixedPoint> {
        self.fixed_points.iter().find(|fp| fp.kind == kind)
    }
}

/// Critical lying probability `(theta-d)/(theta-d+omega d)`; absent when
/// `theta <= d` (no subcritical regime).
pub fn critical_pbar(theta: f64, d: f64, omega: f64) -> Option<f64> {
    (theta > d).then(|| (theta - d) / (theta - d + omega * d))
}

/// False reputation value `pi = p theta / (p + omega pbar)`.
pub fn false_reputation(params: &ModelParams) -> Result<f64> {
    let denom = params.p() + params.omega() * params.pbar();
    if !(denom > 0.0) {
        return Err(Error::DegenerateDenominator);
    }
    Ok(params.p() * params.theta() / denom)
}

// p + omega*pbar >= min(1, omega) > 0 for validated params.
fn pi_of(params: &ModelParams) -> f64 {
    params.p() * params.theta() / (params.p() + params.omega() * params.pbar())
}

/// Thresholds on `d`: `(d_c1, d_c2) = (pi, theta)`.
pub fn critical_d(params: &ModelParams) -> (f64, f64) {
    (pi_of(params), params.theta())
}

fn is_subcritical(params: &ModelParams) -> bool {
    critical_pbar(params.theta(), params.d(), params.omega()).is_some_and(|c| params.pbar() < c)
}

/// Fixed points of the mean ODE; never empty.
pub fn fixed_points(params: &ModelParams) -> Vec<FixedPoint> {
    let eigenvalue = params.u() - 1.0;
    let mut out = Vec::with_capacity(2);
    if params.theta() > params.d() {
        let (alpha, beta) = asymptote(Region::Above, params);
        out.push(FixedPoint {
            alpha,
            beta,
            reputation_value: params.theta(),
            kind: FixedPointKind::True,
            region: Region::Above,
            eigenvalue,
        });
    }
    if !is_subcritical(params) {
        let (alpha, beta) = asymptote(Region::Below, params);
        out.push(FixedPoint {
            alpha,
            beta,
            reputation_value: pi_of(params),
            kind: FixedPointKind::False,
            region: Region::Below,
            eigenvalue,
        });
    }
    out
}

/// Robustness condition when the liar may lie in both directions:
/// `m > d` and `pbar < (m-d)/(m-d+omega d)` with `m = min{theta, 1-theta}`.
pub fn two_sided_unique(params: &ModelParams) -> bool {
    let m = params.theta().min(1.0 - params.theta());
    critical_pbar(m, params.d(), params.omega()).is_some_and(|c| params.pbar() < c)
}

pub fn classify_regime(params: &ModelParams) -> RegimeReport {
    let regime = if params.theta() <= params.d() {
        Regime::FalseOnly
    } else if is_subcritical(params) {
        Regime::Subcritical
    } else {
        Regime::Bistable
    };
    let (d_c1, d_c2) = critical_d(params);
    RegimeReport {
        regime,
        pbar_critical: critical_pbar(params.theta(), params.d(), params.omega()),
        d_c1,
        d_c2,
        false_reputation: d_c1,
        fixed_points: fixed_points(params),
        two_sided_unique: two_sided_unique(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{initial_state, validate_params};
    use proptest::prelude::*;

    fn params(theta: f64, p: f64, d: f64, omega: f64, u: f64) -> ModelParams {
        validate_params(theta, p, d, omega, u).unwrap()
    }

    fn set1() -> ModelParams {
        params(0.8, 0.8, 0.4, 1.0, 0.99)
    }

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rhs_examples() {
        let (da, db) = ode_rhs(64.0, 16.0, &set1()).unwrap();
        assert!(near(da, 0.0, 1e-12) && near(db, 0.0, 1e-12));

        let (da, db) = ode_rhs(0.0, 100.0, &set1()).unwrap();
        assert!(near(da, 0.64, 1e-12) && near(db, -0.64, 1e-12), "{da} {db}");

        let fig5 = params(0.8, 0.2, 0.4, 1.0, 0.95);
        let (da, db) = ode_rhs(3.2, 16.8, &fig5).unwrap();
        assert!(near(da, 0.0, 1e-12) && near(db, 0.0, 1e-12), "{da} {db}");

        assert_eq!(ode_rhs(0.0, 0.0, &set1()), Err(Error::DegenerateState));
    }

    #[test]
    fn boundary_belongs_below() {
        assert_eq!(Region::of(40.0, 60.0, 0.4), Region::Below);
        assert_eq!(Region::of(40.0001, 60.0, 0.4), Region::Above);
    }

    #[test]
    fn segment_examples() {
        let seg = segment_solution((0.0, 100.0), Region::Below, &set1());
        assert!(near(seg.asymptote_alpha, 64.0, 1e-12));
        assert!(near(seg.asymptote_beta, 36.0, 1e-12));
        assert!(near(seg.c_alpha, -64.0, 1e-12));
        assert!(near(seg.c_beta, 64.0, 1e-12));
        let (ra, rb) = ode_rhs_in_region(seg.asymptote_alpha, seg.asymptote_beta, Region::Below, &set1());
        assert!(near(ra, 0.0, 1e-12) && near(rb, 0.0, 1e-12));

        let seg = segment_solution((64.0, 16.0), Region::Above, &set1());
        assert!(near(seg.c_alpha, 0.0, 1e-12) && near(seg.c_beta, 0.0, 1e-12));
        let (a, b) = seg.state_at(500.0);
        assert!(near(a, 64.0, 1e-12) && near(b, 16.0, 1e-12));
    }

    #[test]
    fn crossing_examples() {
        let seg = segment_solution((0.0, 100.0), Region::Below, &set1());
        let t = crossing_time(&seg, 0.4).unwrap();
        let expected = -(24.0f64 / 64.0).ln() / 0.01;
        assert!(near(t, expected, 1e-9), "{t}");
        assert!(near(t, 98.083, 1e-3));

        let seg = segment_solution((64.0, 16.0), Region::Above, &set1());
        assert_eq!(crossing_time(&seg, 0.4), None);

        let sup = params(0.8, 0.2, 0.4, 1.0, 0.95);
        let seg = segment_solution((16.0, 4.0), Region::Above, &sup);
        let c = 0.6 * seg.c_alpha - 0.4 * seg.c_beta;
        let k = 0.6 * seg.asymptote_alpha - 0.4 * seg.asymptote_beta;
        assert!(c > 0.0 && k > 0.0, "f(t) = C e^-rt + K stays positive");
        assert_eq!(crossing_time(&seg, 0.4), None);
    }

    #[test]
    fn solve_subcritical_from_zero() {
        let start = initial_state(0.0, 0.99).unwrap();
        let sol = solve(&start, &set1(), 2000.0).unwrap();
        assert_eq!(sol.segments.len(), 2);
        assert_eq!(sol.segments[0].region, Region::Below);
        assert_eq!(sol.segments[1].region, Region::Above);
        let (a, b) = sol.terminal_state();
        assert!(near(a, 64.0, 1e-6) && near(b, 16.0, 1e-6), "{a} {b}");
        let tc = sol.crossings().next().unwrap();
        assert!(near(sol.reputation_at(tc).unwrap(), 0.4, 1e-12));
    }

    #[test]
    fn solve_false_only_converges_to_false_point() {
        let p = params(0.3, 0.5, 0.4, 1.0, 0.99);
        let start = ReputationState::new(30.0, 70.0).unwrap();
        // 30/(30+70) = 0.3 is already below d = 0.4: no crossing needed.
        assert_eq!(Region::of(30.0, 70.0, 0.4), Region::Below);
        let sol = solve(&start, &p, 3000.0).unwrap();
        let (a, b) = sol.terminal_state();
        assert!(near(a, 15.0, 1e-6) && near(b, 85.0, 1e-6), "{a} {b}");

        let above = ReputationState::new(70.0, 30.0).unwrap();
        let sol = solve(&above, &p, 3000.0).unwrap();
        assert_eq!(sol.segments.len(), 2);
        assert_eq!(sol.segments[0].region, Region::Above);
        let (a, b) = sol.terminal_state();
        assert!(near(a, 15.0, 1e-6) && near(b, 85.0, 1e-6), "{a} {b}");
        assert!(near(a / (a + b), 0.15, 1e-9));
    }

    #[test]
    fn solve_from_fixed_points_is_constant() {
        for p in [
            set1(),
            params(0.8, 0.2, 0.4, 1.0, 0.95),
            params(0.3, 0.5, 0.4, 1.0, 0.99),
        ] {
            for fp in fixed_points(&p) {
                let s = ReputationState::new(fp.alpha, fp.beta).unwrap();
                let sol = solve(&s, &p, 1000.0).unwrap();
                assert_eq!(sol.segments.len(), 1);
                let (a, b) = sol.terminal_state();
                assert!(near(a, fp.alpha, 1e-9) && near(b, fp.beta, 1e-9));
            }
        }
    }

    #[test]
    fn start_on_line_with_outward_field_moves_above() {
        // (40, 60) sits on the d = 0.4 line; below-field asymptote (64, 36) is above it.
        let s = ReputationState::new(40.0, 60.0).unwrap();
        let sol = solve(&s, &set1(), 100.0).unwrap();
        assert_eq!(sol.segments.len(), 1);
        assert_eq!(sol.segments[0].region, Region::Above);
    }

    #[test]
    fn solve_rejects_bad_horizon() {
        let s = initial_state(0.0, 0.99).unwrap();
        assert!(solve(&s, &set1(), 0.0).is_err());
        assert!(solve(&s, &set1(), -1.0).is_err());
        assert!(solve(&s, &set1(), f64::NAN).is_err());
    }

    #[test]
    fn chatter_cap_is_enforced() {
        let s = initial_state(0.0, 0.99).unwrap();
        assert_eq!(
            solve_with_cap(&s, &set1(), 2000.0, 0),
            Err(Error::ChatterDetected { cap: 0 })
        );
    }

    #[test]
    fn state_at_outside_range() {
        let s = initial_state(0.0, 0.99).unwrap();
        let sol = solve(&s, &set1(), 50.0).unwrap();
        assert!(sol.state_at(-1.0).is_none());
        // The single segment ends at the crossing (~98.08), beyond the horizon.
        assert_eq!(sol.segments.len(), 1);
        assert!(sol.state_at(50.0).is_some());
        assert!(sol.state_at(99.0).is_none());
    }

    #[test]
    fn fixed_point_examples() {
        let fps = fixed_points(&set1());
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].kind, FixedPointKind::True);
        assert_eq!(fps[0].reputation_value, 0.8);
        assert!(near(fps[0].alpha, 64.0, 1e-9) && near(fps[0].beta, 16.0, 1e-9));

        let fps = fixed_points(&params(0.8, 0.2, 0.4, 1.0, 0.95));
        assert_eq!(fps.len(), 2);
        assert!(near(fps[0].alpha, 3.2, 1e-12) && near(fps[0].beta, 0.8, 1e-12));
        assert_eq!(fps[1].kind, FixedPointKind::False);
        assert!(near(fps[1].alpha, 3.2, 1e-12) && near(fps[1].beta, 16.8, 1e-12));
        assert!(near(fps[1].reputation_value, 0.16, 1e-12));

        let fps = fixed_points(&params(0.3, 0.5, 0.4, 1.0, 0.99));
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].kind, FixedPointKind::False);
        assert!(near(fps[0].reputation_value, 0.15, 1e-12));
    }

    #[test]
    fn critical_values() {
        assert!(near(critical_pbar(0.8, 0.4, 1.0).unwrap(), 0.5, 1e-12));
        assert!(near(critical_pbar(0.8, 0.4, 2.0).unwrap(), 1.0 / 3.0, 1e-12));
        assert_eq!(critical_pbar(0.4, 0.4, 1.0), None);

        let (c1, c2) = critical_d(&params(0.8, 0.8, 0.4, 1.0, 0.99));
        assert!(near(c1, 0.64, 1e-12) && c2 == 0.8);
        let (c1, c2) = critical_d(&params(0.8, 0.2, 0.4, 1.0, 0.99));
        assert!(near(c1, 0.16, 1e-12) && c2 == 0.8);
        let (c1, c2) = critical_d(&params(0.7, 1.0, 0.4, 1.0, 0.99));
        assert_eq!(c1, c2);
    }

    #[test]
    fn false_reputation_values() {
        let pi = |p| false_reputation(&params(0.8, p, 0.4, 1.0, 0.99)).unwrap();
        assert!(near(pi(0.4), 0.32, 1e-12));
        assert!(near(pi(0.45), 0.36, 1e-12));
        assert_eq!(pi(1.0), 0.8);
    }

    #[test]
    fn regime_examples() {
        assert_eq!(
            classify_regime(&params(0.8, 0.55, 0.4, 1.0, 0.99)).regime,
            Regime::Subcritical
        );
        assert_eq!(
            classify_regime(&params(0.8, 0.45, 0.4, 1.0, 0.95)).regime,
            Regime::Bistable
        );
        for (p, omega) in [(0.1, 1.0), (0.9, 3.0), (1.0, 0.5)] {
            assert_eq!(
                classify_regime(&params(0.3, p, 0.4, omega, 0.99)).regime,
                Regime::FalseOnly
            );
        }
        // pbar exactly at the critical value counts as bistable.
        let at = params(0.8, 0.5, 0.4, 1.0, 0.99);
        let rep = classify_regime(&at);
        assert_eq!(rep.regime, Regime::Bistable);
        assert!(near(
            rep.point(FixedPointKind::False).unwrap().reputation_value,
            0.4,
            1e-15
        ));
    }

    #[test]
    fn two_sided_examples() {
        for p in [0.0, 0.3, 0.8, 1.0] {
            assert!(!two_sided_unique(&params(0.8, p, 0.4, 1.0, 0.99)));
        }
        let q = params(0.5, 0.5, 0.2, 1.0, 0.99);
        assert!(two_sided_unique(&q));
        let via_pbar_c = critical_pbar(0.5, 0.2, 1.0).unwrap();
        assert!(near(via_pbar_c, 0.6, 1e-12) && 0.5 < via_pbar_c);
        assert!(two_sided_unique(&params(0.5, 1.0, 0.3, 1.0, 0.99)));
        assert!(two_sided_unique(&params(0.45, 1.0, 0.3, 2.0, 0.99)));
    }

    proptest! {
        #[test]
        fn false_reputation_monotone(
            theta in 0.0f64..=1.0, pbar in 0.0f64..0.99, dp in 0.0f64..0.01,
            omega in 0.1f64..5.0, domega in 0.0f64..1.0,
        ) {
            let base = params(theta, 1.0 - pbar, 0.5, omega, 0.9);
            let more_lies = base.with_pbar(pbar + dp).unwrap();
            let heavier = base.with_omega(omega + domega).unwrap();
            let pi = false_reputation(&base).unwrap();
            prop_assert!(false_reputation(&more_lies).unwrap() <= pi + 1e-15);
            prop_assert!(false_reputation(&heavier).unwrap() <= pi + 1e-15);
        }

        #[test]
        fn critical_pbar_monotone(d in 0.01f64..0.9, excess in 0.001f64..0.09, dt in 0.0f64..0.05, omega in 0.1f64..5.0, domega in 0.0f64..2.0) {
            let theta = d + excess;
            let c = critical_pbar(theta, d, omega).unwrap();
            prop_assert!(critical_pbar(theta, d, omega + domega).unwrap() <= c + 1e-15);
            prop_assert!(critical_pbar((theta + dt).min(1.0), d, omega).unwrap() >= c - 1e-15);
        }
    }
}

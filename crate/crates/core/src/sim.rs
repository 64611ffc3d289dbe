//! The two-counter stochastic process and its `N`-rescaled family.
//!
//! One event per step. With probability `p*theta` a positive direct
//! observation, with `p*(1-theta)` a negative direct one, otherwise a maximally
//! negative indirect report from the liar, which is accepted (with weight
//! `omega`) only when the pre-step reputation passes the deviation test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{deviation_test, initial_state, ModelParams, ReputationState};
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservationEvent {
    PositiveDirect,
    NegativeDirect,
    IndirectReport,
}

impl ObservationEvent {
    /// Stable short label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            ObservationEvent::PositiveDirect => "pos",
            ObservationEvent::NegativeDirect => "neg",
            ObservationEvent::IndirectReport => "ind",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "pos" => Some(ObservationEvent::PositiveDirect),
            "neg" => Some(ObservationEvent::NegativeDirect),
            "ind" => Some(ObservationEvent::IndirectReport),
            _ => None,
        }
    }
}

/// Draws exactly one uniform from `rng` and maps it onto the three branches.
pub fn sample_event(params: &ModelParams, rng: &mut Stream) -> ObservationEvent {
    let v = rng.uniform();
    let p = params.p();
    if v < p * params.theta() {
        ObservationEvent::PositiveDirect
    } else if v < p {
        ObservationEvent::NegativeDirect
    } else {
        ObservationEvent::IndirectReport
    }
}

/// One step of the unscaled process. Returns the new state and whether the
/// observation was taken into account (always true for direct observations).
pub fn step(state: &ReputationState, event: ObservationEvent, params: &ModelParams) -> (ReputationState, bool) {
    let u = params.u();
    let (alpha, beta) = (u * state.alpha(), u * state.beta());
    match event {
        ObservationEvent::PositiveDirect => (ReputationState::from_parts(alpha + 1.0, beta), true),
        ObservationEvent::NegativeDirect => (ReputationState::from_parts(alpha, beta + 1.0), true),
        ObservationEvent::IndirectReport => {
            if deviation_test(state, params.d()) {
                (ReputationState::from_parts(alpha, beta + params.omega()), true)
            } else {
                (ReputationState::from_parts(alpha, beta), false)
            }
        }
    }
}

/// One step of the process indexed by `n`: discount `1 - (1-u)/n`, increments
/// scaled by `1/n`. `n = 1` is exactly [`step`].
pub fn scaled_step(
    state: &ReputationState,
    event: ObservationEvent,
    params: &ModelParams,
    n: u64,
) -> Result<(ReputationState, bool)> {
    match n {
        0 => Err(Error::InvalidScale(n)),
        1 => Ok(step(state, event, params)),
        _ => Ok(scaled_step_unchecked(state, event, params, n as f64)),
    }
}

#[inline]
fn scaled_step_unchecked(
    state: &ReputationState,
    event: ObservationEvent,
    params: &ModelParams,
    n: f64,
) -> (ReputationState, bool) {
    let discount = 1.0 - (1.0 - params.u()) / n;
    let inc = 1.0 / n;
    let (alpha, beta) = (discount * state.alpha(), discount * state.beta());
    match event {
        ObservationEvent::PositiveDirect => (ReputationState::from_parts(alpha + inc, beta), true),
        ObservationEvent::NegativeDirect => (ReputationState::from_parts(alpha, beta + inc), true),
        ObservationEvent::IndirectReport => {
            if deviation_test(state, params.d()) {
                (ReputationState::from_parts(alpha, beta + params.omega() * inc), true)
            } else {
                (ReputationState::from_parts(alpha, beta), false)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: ModelParams,
    /// Initial reputation; the start state is `initial_state(r0, u)`.
    pub r0: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub record_timestamps: bool,
    /// Index of the rescaled process; 1 is the unscaled process.
    pub scaling_n: u64,
}

impl SimulationConfig {
    pub fn new(params: ModelParams, r0: f64, n_steps: usize, seed: u64) -> Self {
        Self {
            params,
            r0,
            n_steps,
            seed,
            record_timestamps: false,
            scaling_n: 1,
        }
    }

    pub fn with_timestamps(mut self, on: bool) -> Self {
        self.record_timestamps = on;
        self
    }

    pub fn with_scaling(mut self, n: u64) -> Self {
        self.scaling_n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::InvalidArgument("n_steps must be >= 1".into()));
        }
        if self.scaling_n == 0 {
            return Err(Error::InvalidScale(0));
        }
        initial_state(self.r0, self.params.u()).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based event index.
    pub step: u64,
    /// Event time, when timestamps are recorded.
    pub t: Option<f64>,
    /// Counters after the event.
    pub alpha: f64,
    pub beta: f64,
    pub event: ObservationEvent,
    pub accepted: bool,
}

impl StepRecord {
    pub fn reputation(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: SimulationConfig,
    pub initial: ReputationState,
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reputations(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(StepRecord::reputation)
    }

    pub fn final_state(&self) -> ReputationState {
        self.steps
            .last()
            .map(|r| ReputationState::from_parts(r.alpha, r.beta))
            .unwrap_or(self.initial)
    }
}

/// Runs the process for `config.n_steps` events.
///
/// Per step the stream yields one uniform for the event and, when timestamps
/// are on, one exponential interarrival (rate `scaling_n`) right after it.
pub fn simulate(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let params = config.params;
    let initial = initial_state(config.r0, params.u())?;
    let mut rng = Stream::new(config.seed);
    let rate = config.scaling_n as f64;
    let mut state = initial;
    let mut t = 0.0;
    let mut steps = Vec::with_capacity(config.n_steps);
    for n in 1..=config.n_steps {
        let event = sample_event(&params, &mut rng);
        let stamp = if config.record_timestamps {
            t += rng.exponential(rate);
            Some(t)
        } else {
            None
        };
        let (next, accepted) = if config.scaling_n == 1 {
            step(&state, event, &params)
        } else {
            scaled_step_unchecked(&state, event, &params, rate)
        };
        state = next;
        steps.push(StepRecord {
            step: n as u64,
            t: stamp,
            alpha: state.alpha(),
            beta: state.beta(),
            event,
            accepted,
        });
    }
    Ok(Trajectory {
        config: *config,
        initial,
        steps,
    })
}

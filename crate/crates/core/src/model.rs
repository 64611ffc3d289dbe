//! Parameter model, reputation counters and the deviation test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five system parameters of a single honest-node / liar / subject instance.
///
/// Only obtainable through [`ModelParams::new`] (or deserialization, which
/// routes through the same checks), so every value in circulation satisfies
/// the range invariants. `pbar` is always derived as `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    theta: f64,
    p: f64,
    d: f64,
    omega: f64,
    u: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    theta: f64,
    p: f64,
    d: f64,
    omega: f64,
    u: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.theta, raw.p, raw.d, raw.omega, raw.u)
    }
}

impl From<ModelParams> for RawParams {
    fn from(m: ModelParams) -> Self {
        RawParams {
            theta: m.theta,
            p: m.p,
            d: m.d,
            omega: m.omega,
            u: m.u,
        }
    }
}

fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { field })
    }
}

fn closed_unit(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            field,
            value,
            expected: "0 <= x <= 1",
        })
    }
}

fn open_unit(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            field,
            value,
            expected: "0 < x < 1",
        })
    }
}

impl ModelParams {
    /// Validates `(theta, p, d, omega, u)`.
    pub fn new(theta: f64, p: f64, d: f64, omega: f64, u: f64) -> Result<Self> {
        let theta = closed_unit("theta", theta)?;
        let p = closed_unit("p", p)?;
        let d = open_unit("d", d)?;
        let omega = finite("omega", omega)?;
        if omega <= 0.0 {
            return Err(Error::OutOfRange {
                field: "omega",
                value: omega,
                expected: "x > 0",
            });
        }
        let u = open_unit("u", u)?;
        Ok(Self { theta, p, d, omega, u })
    }

    /// Probability that a subject interaction is positive.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Probability that an observation is direct.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Probability that an observation is an (always lying) indirect report.
    pub fn pbar(&self) -> f64 {
        1.0 - self.p
    }

    /// Deviation-test threshold.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Weight of an accepted indirect report.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Discount factor.
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(theta, self.p, self.d, self.omega, self.u)
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.theta, p, self.d, self.omega, self.u)
    }

    /// Sets `p = 1 - pbar`.
    pub fn with_pbar(self, pbar: f64) -> Result<Self> {
        closed_unit("pbar", pbar)?;
        Self::new(self.theta, 1.0 - pbar, self.d, self.omega, self.u)
    }

    pub fn with_d(self, d: f64) -> Result<Self> {
        Self::new(self.theta, self.p, d, self.omega, self.u)
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.theta, self.p, self.d, omega, self.u)
    }

    pub fn with_u(self, u: f64) -> Result<Self> {
        Self::new(self.theta, self.p, self.d, self.omega, u)
    }

    /// `max{1, omega}`, the largest per-event increment of the weighted mass.
    pub fn max_increment(&self) -> f64 {
        self.omega.max(1.0)
    }
}

/// Free-function form of [`ModelParams::new`]; argument order is
/// `(theta, p, d, omega, u)`.
pub fn validate_params(theta: f64, p: f64, d: f64, omega: f64, u: f64) -> Result<ModelParams> {
    ModelParams::new(theta, p, d, omega, u)
}

/// Discounted counters of positive (`alpha`) and negative (`beta`) observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReputationState {
    alpha: f64,
    beta: f64,
}

impl ReputationState {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        finite("alpha", alpha)?;
        finite("beta", beta)?;
        if alpha < 0.0 {
            return Err(Error::OutOfRange {
                field: "alpha",
                value: alpha,
                expected: "x >= 0",
            });
        }
        if beta < 0.0 {
            return Err(Error::OutOfRange {
                field: "beta",
                value: beta,
                expected: "x >= 0",
            });
        }
        if alpha + beta <= 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(Self { alpha, beta })
    }

    /// Unchecked constructor for the update rules, which preserve the invariants.
    pub(crate) fn from_parts(alpha: f64, beta: f64) -> Self {
        debug_assert!(alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0);
        Self { alpha, beta }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Total discounted observation mass ("certainty").
    pub fn mass(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `alpha / (alpha + beta)`.
    pub fn reputation(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Slack in the triangle bound `m*alpha + beta <= m/(1-u)` with `m = max{1, omega}`.
    /// Non-negative (up to rounding) for every state reachable from
    /// [`initial_state`] through the update rules.
    pub fn triangle_slack(&self, omega: f64, u: f64) -> f64 {
        let m = omega.max(1.0);
        m / (1.0 - u) - (m * self.alpha + self.beta)
    }
}

/// The state `(R0, 1 - R0) / (1 - u)`: initial reputation `R0` at full mass.
pub fn initial_state(r0: f64, u: f64) -> Result<ReputationState> {
    let r0 = closed_unit("r0", r0)?;
    let u = open_unit("u", u)?;
    let scale = 1.0 / (1.0 - u);
    Ok(ReputationState::from_parts(r0 * scale, (1.0 - r0) * scale))
}

/// Reputation of a raw counter pair.
pub fn reputation(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha + beta > 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(alpha / (alpha + beta))
}

/// Accept an extremely negative report iff the current reputation is `<= d`.
///
/// Equality accepts, so the line `alpha/(alpha+beta) = d` belongs to the
/// accepting side everywhere in the crate.
pub fn deviation_test(state: &ReputationState, d: f64) -> bool {
    state.reputation() <= d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parameter_set_one_is_valid() {
        let m = validate_params(0.8, 0.8, 0.4, 1.0, 0.99).unwrap();
        assert!((m.pbar() - 0.2).abs() < 1e-15);
        assert_eq!(m.pbar() + m.p(), 1.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            validate_params(0.8, 0.8, 0.4, 1.0, 1.0),
            Err(Error::OutOfRange { field: "u", .. })
        ));
        assert!(matches!(
            validate_params(0.8, 1.2, 0.4, 1.0, 0.99),
            Err(Error::OutOfRange { field: "p", .. })
        ));
        assert!(matches!(
            validate_params(0.8, 0.8, 0.0, 1.0, 0.99),
            Err(Error::OutOfRange { field: "d", .. })
        ));
        assert!(matches!(
            validate_params(0.8, 0.8, 0.4, 0.0, 0.99),
            Err(Error::OutOfRange { field: "omega", .. })
        ));
        assert!(matches!(
            validate_params(-0.1, 0.8, 0.4, 1.0, 0.99),
            Err(Error::OutOfRange { field: "theta", .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            validate_params(f64::NAN, 0.8, 0.4, 1.0, 0.99),
            Err(Error::NonFinite { field: "theta" })
        );
        assert_eq!(
            validate_params(0.8, 0.8, 0.4, f64::INFINITY, 0.99),
            Err(Error::NonFinite { field: "omega" })
        );
    }

    #[test]
    fn initial_states() {
        let s = initial_state(0.0, 0.99).unwrap();
        assert_eq!(s.alpha(), 0.0);
        assert!((s.beta() - 100.0).abs() < 1e-12);

        let s = initial_state(1.0, 0.95).unwrap();
        assert!((s.alpha() - 20.0).abs() < 1e-12);
        assert_eq!(s.beta(), 0.0);

        let s = initial_state(0.5, 0.99).unwrap();
        assert!((s.alpha() - 50.0).abs() < 1e-12);
        assert_eq!(s.alpha(), s.beta());

        assert!(initial_state(1.5, 0.99).is_err());
        assert!(initial_state(0.5, 1.0).is_err());
    }

    #[test]
    fn reputation_values() {
        assert_eq!(reputation(64.0, 16.0).unwrap(), 0.8);
        assert_eq!(reputation(0.0, 100.0).unwrap(), 0.0);
        assert!((reputation(3.2, 16.8).unwrap() - 0.16).abs() < 1e-15);
        assert_eq!(reputation(0.0, 0.0), Err(Error::DegenerateState));
        assert_eq!(ReputationState::new(0.0, 0.0), Err(Error::DegenerateState));
    }

    #[test]
    fn deviation_test_cases() {
        let s = |a, b| ReputationState::new(a, b).unwrap();
        assert!(!deviation_test(&s(80.0, 20.0), 0.4));
        assert!(deviation_test(&s(20.0, 80.0), 0.4));
        assert!(deviation_test(&s(40.0, 60.0), 0.4));
    }

    #[test]
    fn serde_goes_through_validation() {
        let ok: ModelParams = serde_json::from_str(r#"{"theta":0.8,"p":0.8,"d":0.4,"omega":1.0,"u":0.99}"#).unwrap();
        assert_eq!(ok, validate_params(0.8, 0.8, 0.4, 1.0, 0.99).unwrap());
        let bad: std::result::Result<ModelParams, _> =
            serde_json::from_str(r#"{"theta":0.8,"p":0.8,"d":1.5,"omega":1.0,"u":0.99}"#);
        assert!(bad.is_err());
    }

    proptest! {
        #[test]
        fn reputation_in_unit_interval(a in 0.0f64..1e4, b in 0.0f64..1e4) {
            prop_assume!(a + b > 0.0);
            let r = ReputationState::new(a, b).unwrap().reputation();
            prop_assert!((0.0..=1.0).contains(&r));
        }

        #[test]
        fn initial_state_inside_triangle(r0 in 0.0f64..=1.0, u in 0.01f64..0.999, omega in 0.0f64..10.0) {
            let s = initial_state(r0, u).unwrap();
            let bound = omega.max(1.0) / (1.0 - u);
            prop_assert!(s.triangle_slack(omega, u) >= -1e-12 * bound);
        }

        #[test]
        fn deviation_test_is_monotone(r in 0.0f64..=1.0, lower in 0.0f64..=1.0, d in 0.01f64..0.99) {
            let r_low = r * lower;
            let hi = ReputationState::new(r, 1.0 - r + 1e-300).unwrap();
            let lo = ReputationState::new(r_low, 1.0 - r_low + 1e-300).unwrap();
            if deviation_test(&hi, d) {
                prop_assert!(deviation_test(&lo, d));
            }
        }

        #[test]
        fn validation_is_idempotent(
            theta in 0.0f64..=1.0, p in 0.0f64..=1.0, d in 0.001f64..0.999,
            omega in 0.001f64..10.0, u in 0.001f64..0.999,
        ) {
            let m = validate_params(theta, p, d, omega, u).unwrap();
            let again = validate_params(m.theta(), m.p(), m.d(), m.omega(), m.u()).unwrap();
            prop_assert_eq!(m, again);
        }
    }
}

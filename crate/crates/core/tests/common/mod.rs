//! Test-only oracles, independent of the closed-form solver: a classical RK4
//! integrator with bisection event location on the switching line, and a
//! bisection crossing-time finder. The vector field is re-derived here from
//! the raw parameters rather than borrowed from the library.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy)]
pub struct RawParams {
    pub theta: f64,
    pub p: f64,
    pub d: f64,
    pub omega: f64,
    pub u: f64,
}

impl RawParams {
    pub fn field(&self, a: f64, b: f64, below: bool) -> (f64, f64) {
        let lie = if below { self.omega * (1.0 - self.p) } else { 0.0 };
        (
            (self.u - 1.0) * a + self.p * self.theta,
            (self.u - 1.0) * b + self.p * (1.0 - self.theta) + lie,
        )
    }

    /// Positive strictly above the line, `<= 0` on or below it.
    pub fn switching(&self, a: f64, b: f64) -> f64 {
        (1.0 - self.d) * a - self.d * b
    }
}

pub fn rk4_step(prm: &RawParams, (a, b): (f64, f64), below: bool, h: f64) -> (f64, f64) {
    let f = |x: f64, y: f64| prm.field(x, y, below);
    let k1 = f(a, b);
    let k2 = f(a + 0.5 * h * k1.0, b + 0.5 * h * k1.1);
    let k3 = f(a + 0.5 * h * k2.0, b + 0.5 * h * k2.1);
    let k4 = f(a + h * k3.0, b + h * k3.1);
    (
        a + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        b + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

fn left_region(prm: &RawParams, s: (f64, f64), below: bool) -> bool {
    let g = prm.switching(s.0, s.1);
    if below {
        g > 0.0
    } else {
        g <= 0.0
    }
}

/// Bisects the sub-step length in `(0, h]` at which an RK4 step from `s`
/// leaves the region. Returns the sub-step length.
fn locate(prm: &RawParams, s: (f64, f64), below: bool, h: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, h);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if left_region(prm, rk4_step(prm, s, below, mid), below) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Integrates the switched ODE with fixed step `h` to `t_end`, calling
/// `visit(t, alpha, beta)` at every grid time including 0. A step that
/// leaves its region is split at the bisected crossing and finished with
/// the other region's field.
pub fn integrate(
    prm: &RawParams,
    start: (f64, f64),
    t_end: f64,
    h: f64,
    mut visit: impl FnMut(f64, f64, f64),
) -> Vec<f64> {
    let mut s = start;
    let mut below = s.0 / (s.0 + s.1) <= prm.d;
    let mut crossings = Vec::new();
    let steps = (t_end / h).round() as usize;
    visit(0.0, s.0, s.1);
    for k in 0..steps {
        let t0 = k as f64 * h;
        let next = rk4_step(prm, s, below, h);
        if left_region(prm, next, below) {
            let tau = locate(prm, s, below, h);
            let at_line = rk4_step(prm, s, below, tau);
            crossings.push(t0 + tau);
            below = !below;
            s = rk4_step(prm, at_line, below, h - tau);
        } else {
            s = next;
        }
        visit((k + 1) as f64 * h, s.0, s.1);
    }
    crossings
}

/// First time the field of the starting region carries `start` across the
/// line: RK4 with step `h` until the sign of the switching function flips,
/// then bisection on the last sub-step.
pub fn bisect_crossing(prm: &RawParams, start: (f64, f64), h: f64, t_max: f64) -> Option<f64> {
    let below = start.0 / (start.0 + start.1) <= prm.d;
    let mut s = start;
    let mut t = 0.0;
    while t < t_max {
        let next = rk4_step(prm, s, below, h);
        if left_region(prm, next, below) {
            return Some(t + locate(prm, s, below, h));
        }
        s = next;
        t += h;
    }
    None
}

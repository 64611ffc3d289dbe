//! Scenario files: flat UTF-8 `key = value` lines, `#` starts a comment.
//!
//! Every key is optional; omitted keys take the defaults below, which
//! reproduce the subcritical reference scenario. Unknown or repeated keys are
//! errors. `p` and `pbar` are alternatives (`p = 1 - pbar`); give at most one.
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `theta` | 0.8 | probability of positive subject behaviour |
//! | `p` / `pbar` | 0.8 / – | probability of a direct / lying indirect observation |
//! | `d` | 0.4 | deviation-test threshold |
//! | `omega` | 1 | weight of an accepted indirect report |
//! | `u` | 0.99 | discount factor |
//! | `r0` | 0 | initial reputation |
//! | `n_steps` | 100000 | events per simulated path |
//! | `seed` | 1 | seed (base seed for ensembles) |
//! | `scaling_n` | 1 | index of the rescaled process |
//! | `timestamps` | false | record Poisson event times |
//! | `epsilon` | 0.05 | occupancy neighbourhood half-width |
//! | `burn_in` | n_steps/5 | steps discarded before statistics |
//! | `runs` | 100 | ensemble size |
//! | `threads` | 0 | worker threads, 0 = all cores (results do not depend on it; not echoed) |
//! | `band` | 0.75,0.85 | mean-reputation band counted by `montecarlo`, also the hit band |
//! | `occupancy_threshold` | 0.01 | occupancy fraction counted by `montecarlo` |
//! | `per_run_csv` | false | write one trajectory CSV per ensemble member |
//! | `sweep` | d | swept parameter, `d` or `pbar` |
//! | `sweep_grid` | 0.01..0.99 (d) or 0..1 (pbar), step 0.01 | comma-separated ascending values |
//! | `t_end` | 2000 | ODE horizon |
//! | `ode_samples` | 2000 | sampling intervals of the ODE solution on `[0, t_end]` |
//! | `out_dir` | out | output directory |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::experiments::{default_burn_in, SweepParameter};
use crate::model::ModelParams;
use crate::Error;

const KEYS: &[&str] = &[
    "theta",
    "p",
    "pbar",
    "d",
    "omega",
    "u",
    "r0",
    "n_steps",
    "seed",
    "scaling_n",
    "timestamps",
    "epsilon",
    "burn_in",
    "runs",
    "threads",
    "band",
    "occupancy_threshold",
    "per_run_csv",
    "sweep",
    "sweep_grid",
    "t_end",
    "ode_samples",
    "out_dir",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line in the scenario file; `None` for command-line overrides.
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: ")?,
            None if self.key.is_some() => write!(f, "override: ")?,
            None => {}
        }
        if let Some(k) = &self.key {
            write!(f, "key `{k}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: Option<usize>,
}

/// A parsed but unresolved scenario: raw values plus where they came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scenario {
    entries: Vec<Entry>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sc = Scenario::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
                line: Some(line),
                key: None,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            check_key(key, Some(line))?;
            if let Some(prev) = sc.entries.iter().find(|e| e.key == key) {
                return Err(ConfigError {
                    line: Some(line),
                    key: Some(key.into()),
                    message: format!("duplicate key (first set on line {})", prev.line.unwrap_or(0)),
                });
            }
            sc.entries.push(Entry {
                key: key.into(),
                value: value.trim().into(),
                line: Some(line),
            });
        }
        Ok(sc)
    }

    /// Sets or replaces a key, as `--set key=value` does.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        check_key(key, None)?;
        // p and pbar describe the same quantity; an override of one drops the other.
        let twin = match key {
            "p" => Some("pbar"),
            "pbar" => Some("p"),
            _ => None,
        };
        self.entries.retain(|e| e.key != key && Some(e.key.as_str()) != twin);
        self.entries.push(Entry {
            key: key.into(),
            value: value.trim().into(),
            line: None,
        });
        Ok(())
    }

    /// Applies a `key=value` override string.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), ConfigError> {
        let (k, v) = pair.split_once('=').ok_or_else(|| ConfigError {
            line: None,
            key: None,
            message: format!("override `{pair}` is not of the form key=value"),
        })?;
        self.set(k.trim(), v)
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.entry(key).and_then(|e| e.line),
            key: Some(key.into()),
            message: message.into(),
        }
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse()
                .map_err(|_| self.err(key, format!("cannot parse `{}`", e.value))),
        }
    }

    fn get_f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v: f64 = self.get(key, default)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.err(key, "value must be finite"))
        }
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        let items: Vec<&str> = e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        items
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(key, format!("cannot parse list item `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// Applies defaults and validates every value.
    pub fn resolve(&self) -> Result<ResolvedConfig, ConfigError> {
        let theta = self.get_f64("theta", 0.8)?;
        let (p, p_key) = match (self.entry("p"), self.entry("pbar")) {
            (Some(_), Some(_)) => return Err(self.err("pbar", "give either `p` or `pbar`, not both")),
            (_, Some(_)) => (1.0 - self.get_f64("pbar", 0.2)?, "pbar"),
            _ => (self.get_f64("p", 0.8)?, "p"),
        };
        if let Some(e) = self.entry("pbar") {
            let v: f64 = self.get_f64("pbar", 0.0)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(self.err("pbar", format!("out of range: {} (0 <= x <= 1)", e.value)));
            }
        }
        let d = self.get_f64("d", 0.4)?;
        let omega = self.get_f64("omega", 1.0)?;
        let u = self.get_f64("u", 0.99)?;
        let params = ModelParams::new(theta, p, d, omega, u).map_err(|e| match &e {
            Error::OutOfRange { field, .. } | Error::NonFinite { field } => {
                let key = if *field == "p" { p_key } else { field };
                self.err(key, e.to_string())
            }
            _ => self.err("theta", e.to_string()),
        })?;

        let r0 = self.get_f64("r0", 0.0)?;
        if !(0.0..=1.0).contains(&r0) {
            return Err(self.err("r0", format!("out of range: {r0} (0 <= x <= 1)")));
        }
        let n_steps: usize = self.get("n_steps", 100_000)?;
        if n_steps == 0 {
            return Err(self.err("n_steps", "must be >= 1"));
        }
        let seed: u64 = self.get("seed", 1)?;
        let scaling_n: u64 = self.get("scaling_n", 1)?;
        if scaling_n == 0 {
            return Err(self.err("scaling_n", "must be >= 1"));
        }
        let timestamps: bool = self.get("timestamps", false)?;
        let epsilon = self.get_f64("epsilon", crate::experiments::DEFAULT_EPSILON)?;
        if !(epsilon > 0.0) {
            return Err(self.err("epsilon", "must be > 0"));
        }
        let burn_in: usize = self.get("burn_in", default_burn_in(n_steps))?;
        if burn_in >= n_steps {
            return Err(self.err("burn_in", format!("must be smaller than n_steps ({n_steps})")));
        }
        let runs: usize = self.get("runs", 100)?;
        if runs == 0 {
            return Err(self.err("runs", "must be >= 1"));
        }
        let threads: usize = self.get("threads", 0)?;
        let band = match self.get_list("band")? {
            None => (0.75, 0.85),
            Some(v) if v.len() == 2 && v[0] <= v[1] => (v[0], v[1]),
            Some(_) => return Err(self.err("band", "expected `lo,hi` with lo <= hi")),
        };
        let occupancy_threshold = self.get_f64("occupancy_threshold", 0.01)?;
        let per_run_csv: bool = self.get("per_run_csv", false)?;
        let sweep = match self.entry("sweep").map(|e| e.value.as_str()) {
            None | Some("d") => SweepParameter::D,
            Some("pbar") => SweepParameter::Pbar,
            Some(other) => return Err(self.err("sweep", format!("expected `d` or `pbar`, got `{other}`"))),
        };
        let sweep_grid = match self.get_list("sweep_grid")? {
            Some(v) => v,
            None => match sweep {
                SweepParameter::D => (1..=99).map(|i| i as f64 / 100.0).collect(),
                SweepParameter::Pbar => (0..=100).map(|i| i as f64 / 100.0).collect(),
            },
        };
        if sweep_grid.is_empty() {
            return Err(self.err("sweep_grid", "grid is empty"));
        }
        if sweep_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(self.err("sweep_grid", "grid must be sorted ascending"));
        }
        let in_range = |v: &f64| match sweep {
            SweepParameter::D => *v > 0.0 && *v < 1.0,
            SweepParameter::Pbar => (0.0..=1.0).contains(v),
        };
        if let Some(v) = sweep_grid.iter().find(|v| !in_range(v)) {
            return Err(self.err("sweep_grid", format!("value {v} out of range for `{}`", sweep.label())));
        }
        let t_end = self.get_f64("t_end", 2000.0)?;
        if !(t_end > 0.0) {
            return Err(self.err("t_end", "must be > 0"));
        }
        let ode_samples: usize = self.get("ode_samples", 2000)?;
        if ode_samples == 0 {
            return Err(self.err("ode_samples", "must be >= 1"));
        }
        let out_dir: String = self.get("out_dir", "out".to_string())?;
        if out_dir.is_empty() {
            return Err(self.err("out_dir", "must not be empty"));
        }
        Ok(ResolvedConfig {
            params,
            r0,
            n_steps,
            seed,
            scaling_n,
            timestamps,
            epsilon,
            burn_in,
            runs,
            threads,
            band,
            occupancy_threshold,
            per_run_csv,
            sweep,
            sweep_grid,
            t_end,
            ode_samples,
            out_dir,
        })
    }
}

fn check_key(key: &str, line: Option<usize>) -> Result<(), ConfigError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError {
            line,
            key: Some(key.into()),
            message: "unknown key".into(),
        })
    }
}

/// A fully defaulted, validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub params: ModelParams,
    pub r0: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub scaling_n: u64,
    pub timestamps: bool,
    pub epsilon: f64,
    pub burn_in: usize,
    pub runs: usize,
    /// Execution setting only; left out of echoes and reports.
    #[serde(skip)]
    pub threads: usize,
    pub band: (f64, f64),
    pub occupancy_threshold: f64,
    pub per_run_csv: bool,
    pub sweep: SweepParameter,
    pub sweep_grid: Vec<f64>,
    pub t_end: f64,
    pub ode_samples: usize,
    pub out_dir: String,
}

impl ResolvedConfig {
    /// Thread count for the ensemble runner; `None` means the global pool.
    pub fn thread_option(&self) -> Option<usize> {
        (self.threads > 0).then_some(self.threads)
    }

    /// The scenario file that resolves back to `self` (with `threads` reset). Floats use the shortest
    /// representation that parses back to the same value.
    pub fn to_scenario_text(&self) -> String {
        let m = &self.params;
        let grid: Vec<String> = self.sweep_grid.iter().map(|v| v.to_string()).collect();
        let lines = [
            ("theta", m.theta().to_string()),
            ("p", m.p().to_string()),
            ("d", m.d().to_string()),
            ("omega", m.omega().to_string()),
            ("u", m.u().to_string()),
            ("r0", self.r0.to_string()),
            ("n_steps", self.n_steps.to_string()),
            ("seed", self.seed.to_string()),
            ("scaling_n", self.scaling_n.to_string()),
            ("timestamps", self.timestamps.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("burn_in", self.burn_in.to_string()),
            ("runs", self.runs.to_string()),
            ("band", format!("{},{}", self.band.0, self.band.1)),
            ("occupancy_threshold", self.occupancy_threshold.to_string()),
            ("per_run_csv", self.per_run_csv.to_string()),
            ("sweep", self.sweep.label().to_string()),
            ("sweep_grid", grid.join(",")),
            ("t_end", self.t_end.to_string()),
            ("ode_samples", self.ode_samples.to_string()),
            ("out_dir", self.out_dir.clone()),
        ];
        let mut s = format!("# resolved by devrep {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in lines {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

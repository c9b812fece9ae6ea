//! Every tunable value and tolerance of the command-line experiments, with
//! defaults, overridable by a line-oriented `key = value` file.

use crate::error::{Error, Result};
use crate::flow::run::{FlowConfig, CAUCHY_TOL, GROWTH_MODEL_TOL};
use crate::flow::BackgroundKind;
use crate::spectral::EigenOptions;
use std::collections::BTreeMap;
use std::str::FromStr;

/// All settings; `Default` is the defaults table.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Seed of the radius sampler.
    pub seed: u64,
    pub samples: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Largest accepted relative closed-form/oracle discrepancy.
    pub parity_rel_tol: f64,
    /// Largest accepted |Ric_ij| of g₀.
    pub ricci_tol: f64,
    /// Accepted excess of max |K_ij| r³ over 1.
    pub sectional_slack: f64,

    /// Ramp parameter of the explicit test tensor.
    pub lemma36_n: u32,
    /// The bracket must lie below this.
    pub lemma36_total_bound: f64,

    pub eigen_grid_n: usize,
    pub eigen_residual_tol: f64,
    pub eigen_shift: f64,
    pub eigen_tol: f64,
    pub eigen_vector_tol: f64,
    pub eigen_max_iterations: usize,

    pub epsilon: f64,
    pub t_end: Option<f64>,
    pub grid_n: usize,
    pub s_max: f64,
    pub dt: Option<f64>,
    pub background: BackgroundKind,
    pub records: usize,
    pub iota: f64,
    pub growth_model_tol: f64,

    /// Strictly decreasing sequence of ε for the limit experiment.
    pub epsilons: Vec<f64>,
    /// Common comparison time; defaults to the start of the largest ε.
    pub t_common: Option<f64>,
    pub ancient_background: BackgroundKind,
    pub ancient_records: usize,
    pub cauchy_tol: f64,
    /// Largest accepted ratio of the Ricci-flow to the de Turck residual.
    pub deturck_ratio_max: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let flow = FlowConfig::default();
        let eig = EigenOptions::default();
        Self {
            seed: 20_250_101,
            samples: 50,
            r_min: 1.05,
            r_max: 50.0,
            parity_rel_tol: 1e-6,
            ricci_tol: 1e-9,
            sectional_slack: 1e-12,
            lemma36_n: 1000,
            lemma36_total_bound: crate::functional::certificate::TOTAL_BOUND,
            eigen_grid_n: 4096,
            eigen_residual_tol: 1e-4,
            eigen_shift: eig.shift,
            eigen_tol: eig.tol,
            eigen_vector_tol: eig.vector_tol,
            eigen_max_iterations: eig.max_iterations,
            epsilon: flow.epsilon,
            t_end: flow.t_end,
            grid_n: flow.grid_n,
            s_max: flow.s_max,
            dt: flow.dt,
            background: flow.background,
            records: flow.records,
            iota: flow.iota,
            growth_model_tol: GROWTH_MODEL_TOL,
            epsilons: (4..=8).map(|k| 2f64.powi(-k)).collect(),
            t_common: None,
            ancient_background: BackgroundKind::G0,
            ancient_records: 200,
            cauchy_tol: CAUCHY_TOL,
            deturck_ratio_max: 10.0,
        }
    }
}

/// Recognized keys with a one-line description, in snapshot order.
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "seed of the radius sampler"),
    ("samples", "number of sampled radii (>= 10)"),
    ("r_min", "smallest sampled radius"),
    ("r_max", "largest sampled radius"),
    ("parity_rel_tol", "closed form vs oracle relative tolerance"),
    ("ricci_tol", "largest accepted |Ric| component"),
    ("sectional_slack", "accepted excess of max |K| r^3 over 1"),
    ("lemma36_n", "ramp parameter of the test tensor"),
    ("lemma36_total_bound", "the bracket must lie below this"),
    ("eigen_grid_n", "p-grid resolution of the eigensolver"),
    ("eigen_residual_tol", "largest accepted eigen residual"),
    ("eigen_shift", "shift of the inverse iteration (below the spectrum)"),
    ("eigen_tol", "eigenvalue convergence threshold"),
    ("eigen_vector_tol", "eigenvector convergence threshold"),
    ("eigen_max_iterations", "iteration cap of the eigensolver"),
    ("epsilon", "mode amplitude of a single flow run"),
    ("t_end", "final time (auto = two e-foldings after the start)"),
    ("grid_n", "s-grid cells of the flow"),
    ("s_max", "outer end of the s-grid"),
    ("dt", "time step (auto = stability default)"),
    ("background", "de Turck background of single runs: g0 | g0_plus_eps_h"),
    ("records", "recorded states per flow run"),
    ("iota", "largest epsilon treated as linear"),
    ("growth_model_tol", "relative model allowance of the growth-rate interval"),
    ("epsilons", "comma-separated, strictly decreasing epsilon sequence"),
    ("t_common", "comparison time (auto = start of the largest epsilon)"),
    ("ancient_background", "de Turck background of the limit runs: g0 | g0_plus_eps_h"),
    ("ancient_records", "recorded states per limit run"),
    ("cauchy_tol", "relative slack of the tolerant decrease check"),
    ("deturck_ratio_max", "largest accepted Ricci-flow / de Turck residual ratio"),
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

fn parse_opt(key: &str, value: &str) -> Result<Option<f64>> {
    if value == "auto" {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |v| v.to_string())
}

fn background_name(b: BackgroundKind) -> &'static str {
    match b {
        BackgroundKind::G0 => "g0",
        BackgroundKind::G0PlusEpsH => "g0_plus_eps_h",
    }
}

impl Settings {
    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "seed" => self.seed = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "r_min" => self.r_min = parse(key, value)?,
            "r_max" => self.r_max = parse(key, value)?,
            "parity_rel_tol" => self.parity_rel_tol = parse(key, value)?,
            "ricci_tol" => self.ricci_tol = parse(key, value)?,
            "sectional_slack" => self.sectional_slack = parse(key, value)?,
            "lemma36_n" => self.lemma36_n = parse(key, value)?,
            "lemma36_total_bound" => self.lemma36_total_bound = parse(key, value)?,
            "eigen_grid_n" => self.eigen_grid_n = parse(key, value)?,
            "eigen_residual_tol" => self.eigen_residual_tol = parse(key, value)?,
            "eigen_shift" => self.eigen_shift = parse(key, value)?,
            "eigen_tol" => self.eigen_tol = parse(key, value)?,
            "eigen_vector_tol" => self.eigen_vector_tol = parse(key, value)?,
            "eigen_max_iterations" => self.eigen_max_iterations = parse(key, value)?,
            "epsilon" => self.epsilon = parse(key, value)?,
            "t_end" => self.t_end = parse_opt(key, value)?,
            "grid_n" => self.grid_n = parse(key, value)?,
            "s_max" => self.s_max = parse(key, value)?,
            "dt" => self.dt = parse_opt(key, value)?,
            "background" => self.background = value.parse()?,
            "records" => self.records = parse(key, value)?,
            "iota" => self.iota = parse(key, value)?,
            "growth_model_tol" => self.growth_model_tol = parse(key, value)?,
            "epsilons" => {
                self.epsilons = value.split(',').map(|v| parse(key, v.trim())).collect::<Result<Vec<f64>>>()?;
            }
            "t_common" => self.t_common = parse_opt(key, value)?,
            "ancient_background" => self.ancient_background = value.parse()?,
            "ancient_records" => self.ancient_records = parse(key, value)?,
            "cauchy_tol" => self.cauchy_tol = parse(key, value)?,
            "deturck_ratio_max" => self.deturck_ratio_max = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Textual value of a key, in the syntax `set` accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "seed" => self.seed.to_string(),
            "samples" => self.samples.to_string(),
            "r_min" => self.r_min.to_string(),
            "r_max" => self.r_max.to_string(),
            "parity_rel_tol" => self.parity_rel_tol.to_string(),
            "ricci_tol" => self.ricci_tol.to_string(),
            "sectional_slack" => self.sectional_slack.to_string(),
            "lemma36_n" => self.lemma36_n.to_string(),
            "lemma36_total_bound" => self.lemma36_total_bound.to_string(),
            "eigen_grid_n" => self.eigen_grid_n.to_string(),
            "eigen_residual_tol" => self.eigen_residual_tol.to_string(),
            "eigen_shift" => self.eigen_shift.to_string(),
            "eigen_tol" => self.eigen_tol.to_string(),
            "eigen_vector_tol" => self.eigen_vector_tol.to_string(),
            "eigen_max_iterations" => self.eigen_max_iterations.to_string(),
            "epsilon" => self.epsilon.to_string(),
            "t_end" => fmt_opt(self.t_end),
            "grid_n" => self.grid_n.to_string(),
            "s_max" => self.s_max.to_string(),
            "dt" => fmt_opt(self.dt),
            "background" => background_name(self.background).to_string(),
            "records" => self.records.to_string(),
            "iota" => self.iota.to_string(),
            "growth_model_tol" => self.growth_model_tol.to_string(),
            "epsilons" => self.epsilons.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
            "t_common" => fmt_opt(self.t_common),
            "ancient_background" => background_name(self.ancient_background).to_string(),
            "ancient_records" => self.ancient_records.to_string(),
            "cauchy_tol" => self.cauchy_tol.to_string(),
            "deturck_ratio_max" => self.deturck_ratio_max.to_string(),
            _ => return None,
        })
    }

    /// Apply a config file's contents: one `key = value` per line, `#`
    /// starts a comment, blank lines are ignored, keys may appear once.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", i + 1)));
            }
            self.set(key, value).map_err(|e| {
                let msg = match e {
                    Error::Config(m) => m,
                    other => other.to_string(),
                };
                Error::Config(format!("line {}: {msg}", i + 1))
            })?;
        }
        Ok(())
    }

    /// Every key with its current value.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        KEYS.iter().map(|(k, _)| (k.to_string(), self.get(k).expect("listed key"))).collect()
    }

    /// Solver options of the eigen command.
    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions {
            shift: self.eigen_shift,
            tol: self.eigen_tol,
            vector_tol: self.eigen_vector_tol,
            max_iterations: self.eigen_max_iterations,
            ..EigenOptions::default()
        }
    }

    /// Parameters of a single flow run.
    pub fn flow_config(&self) -> FlowConfig {
        FlowConfig {
            epsilon: self.epsilon,
            t_end: self.t_end,
            grid_n: self.grid_n,
            s_max: self.s_max,
            dt: self.dt,
            background: self.background,
            records: self.records,
            iota: self.iota,
            growth_model_tol: self.growth_model_tol,
            cauchy_tol: self.cauchy_tol,
            ..FlowConfig::default()
        }
    }

    /// Shared parameters of the limit runs (ε and t_end are set per run).
    pub fn ancient_config(&self) -> FlowConfig {
        FlowConfig {
            background: self.ancient_background,
            records: self.ancient_records,
            keep_snapshots: true,
            ..self.flow_config()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trips_through_set() {
        let s = Settings::default();
        let mut t = Settings { seed: 1, epsilons: vec![1.0], t_end: Some(3.0), ..Settings::default() };
        for (k, v) in s.snapshot() {
            t.set(&k, &v).unwrap();
        }
        assert_eq!(s, t);
    }

    #[test]
    fn every_listed_key_is_settable() {
        let s = Settings::default();
        assert_eq!(s.snapshot().len(), KEYS.len());
    }

    #[test]
    fn config_text_overrides_defaults() {
        let mut s = Settings::default();
        s.apply_config("# run\nepsilon = 0.5  # large\n\n background=g0\nt_end = 3\ndt = auto\nepsilons = 0.1, 0.05\n")
            .unwrap();
        assert_eq!(s.epsilon, 0.5);
        assert_eq!(s.background, BackgroundKind::G0);
        assert_eq!(s.t_end, Some(3.0));
        assert_eq!(s.dt, None);
        assert_eq!(s.epsilons, vec![0.1, 0.05]);
    }

    #[test]
    fn malformed_config_is_rejected_with_line_numbers() {
        for (text, needle) in [
            ("epsilon 0.5", "line 1"),
            ("\nfoo = 1", "unknown key"),
            ("grid_n = many", "cannot parse"),
            ("epsilon = 1\nepsilon = 2", "duplicate"),
            ("background = flat", "background"),
        ] {
            let err = Settings::default().apply_config(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn flow_configs_carry_the_settings() {
        let s = Settings { grid_n: 512, ..Settings::default() };
        assert_eq!(s.flow_config().grid_n, 512);
        let a = s.ancient_config();
        assert!(a.keep_snapshots);
        assert_eq!(a.background, BackgroundKind::G0);
    }
}

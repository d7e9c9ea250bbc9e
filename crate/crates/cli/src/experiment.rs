//! Experiment documents and the shipped presets.

use std::f64::consts::PI;

use num_complex::Complex64;
use polydress::oracle::{required_halfwidth, DEFAULT_HALFWIDTH};
use polydress::{ModeConfig64, WeakFieldConfig64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Cascade,
    #[value(name = "two_mode")]
    TwoMode,
    #[value(name = "weak_field")]
    WeakField,
    Oracle,
    #[default]
    All,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Cascade => "cascade",
            Engine::TwoMode => "two_mode",
            Engine::WeakField => "weak_field",
            Engine::Oracle => "oracle",
            Engine::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSpec {
    pub j: i64,
    pub m: Vec<i64>,
    /// `[re, im]` per mode.
    pub omega: Vec<[f64; 2]>,
    pub delta0: f64,
}

impl ModesSpec {
    pub fn real(j: i64, m: Vec<i64>, omega: &[f64], delta0: f64) -> Self {
        Self {
            j,
            m,
            omega: omega.iter().map(|&w| [w, 0.0]).collect(),
            delta0,
        }
    }

    pub fn to_config(&self) -> Result<ModeConfig64, CliError> {
        let omega = self
            .omega
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Ok(ModeConfig64::new(
            self.j,
            self.m.clone(),
            omega,
            self.delta0,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl TauGrid {
    pub fn points(&self) -> Vec<f64> {
        polydress::linspace(self.start, self.stop, self.count)
    }

    /// Parses `start:stop:count`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(Self {
            start: num(a)?,
            stop: num(b)?,
            count: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightsSpec {
    #[default]
    Flat,
    Gaussian {
        /// Coherent amplitude `[re, im]` of modes `k = 1, 2, ...`.
        alpha: Vec<[f64; 2]>,
        window: usize,
    },
}

fn default_window() -> usize {
    DEFAULT_HALFWIDTH
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    /// Prefix for every output file.
    pub name: String,
    pub modes: ModesSpec,
    #[serde(default)]
    pub engine: Engine,
    pub tau: TauGrid,
    #[serde(default)]
    pub weights: WeightsSpec,
    /// Channel shifts to emit alongside the total.
    #[serde(default)]
    pub channels: Vec<i64>,
    /// Oracle lattice halfwidth.
    #[serde(default = "default_window")]
    pub window: usize,
}

impl Experiment {
    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Validation(format!("{}: {msg}", self.name)));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad("name must be a non-empty file stem".into());
        }
        let cfg = self.modes.to_config()?;
        if self.tau.count < 2 {
            return bad(format!("tau count {} < 2", self.tau.count));
        }
        let finite = self.tau.start.is_finite() && self.tau.stop.is_finite();
        if !finite || self.tau.stop <= self.tau.start {
            return bad(format!(
                "tau stop {} must exceed start {}",
                self.tau.stop, self.tau.start
            ));
        }
        match self.engine {
            Engine::TwoMode if cfg.n_modes() != 2 => {
                return bad(format!("two_mode needs 2 modes, got {}", cfg.n_modes()))
            }
            Engine::WeakField => {
                WeakFieldConfig64::from_modes(&cfg)?;
            }
            _ => {}
        }
        if self.runs_oracle() {
            let required = required_halfwidth(&cfg);
            if self.window <= required {
                return bad(format!("window {} must exceed {required}", self.window));
            }
        }
        if let WeightsSpec::Gaussian { alpha, window } = &self.weights {
            if alpha.iter().all(|[re, im]| *re == 0.0 && *im == 0.0) {
                return bad("gaussian weights need a nonzero alpha".into());
            }
            if self.runs_oracle() && *window > self.window {
                return bad(format!(
                    "weight window {window} exceeds oracle window {}",
                    self.window
                ));
            }
        }
        Ok(())
    }

    pub fn runs_oracle(&self) -> bool {
        matches!(self.engine, Engine::Oracle | Engine::All)
    }
}

/// Names accepted by `--preset`.
pub const PRESETS: [&str; 4] = ["fig1", "fig3a", "fig3bcd", "rwa"];

fn four_pi() -> TauGrid {
    TauGrid {
        start: 0.0,
        stop: 4.0 * PI,
        count: 1000,
    }
}

pub fn preset(name: &str) -> Option<Vec<Experiment>> {
    let base = |name: String, modes: ModesSpec, tau: TauGrid, channels: Vec<i64>| Experiment {
        name,
        modes,
        engine: Engine::All,
        tau,
        weights: WeightsSpec::Flat,
        channels,
        window: DEFAULT_HALFWIDTH,
    };
    let j = 3;
    match name {
        // total plus channels j, j+2, j-2
        "fig1" => Some(vec![base(
            "fig1".into(),
            ModesSpec::real(j, vec![0, 2], &[0.5, 0.5], 1.0),
            four_pi(),
            vec![j, j + 2, j - 2],
        )]),
        "fig3a" => Some(
            [
                ("fig3a_d2", 2.0),
                ("fig3a_d13_7", 13.0 / 7.0),
                ("fig3a_d6_7", 6.0 / 7.0),
            ]
            .into_iter()
            .map(|(n, d0)| {
                base(
                    n.into(),
                    ModesSpec::real(j, vec![0, 1, 2], &[1.0 / 7.0; 3], d0),
                    four_pi(),
                    vec![],
                )
            })
            .collect(),
        ),
        // one full Rabi cycle of the resonant top mode
        "fig3bcd" => Some(
            [
                ("fig3b_om7", 7.0),
                ("fig3c_om11", 11.0),
                ("fig3d_om15", 15.0),
            ]
            .into_iter()
            .map(|(n, inv)| {
                base(
                    n.into(),
                    ModesSpec::real(j, (0..10).collect(), &[1.0 / inv; 10], 9.0),
                    TauGrid {
                        start: 0.0,
                        stop: 2.0 * PI * inv,
                        count: 1000,
                    },
                    vec![j + 9],
                )
            })
            .collect(),
        ),
        // modes at -1 and +1, spin at +1
        "rwa" => Some(vec![base(
            "rwa".into(),
            ModesSpec::real(-1, vec![0, 2], &[0.5, 0.5], 2.0),
            four_pi(),
            vec![-1, 1],
        )]),
        _ => None,
    }
}

/// A config file holds one experiment or a list.
pub fn parse_document(text: &str) -> Result<Vec<Experiment>, CliError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        One(Experiment),
        Many(Vec<Experiment>),
    }
    let doc: Doc =
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
    Ok(match doc {
        Doc::One(e) => vec![e],
        Doc::Many(v) => v,
    })
}

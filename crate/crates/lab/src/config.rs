//! TOML run configuration. Every key is optional at parse time; each command
//! asks for the keys it needs and reports the first missing one by name.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use ghostlab_core::dynamics::GalerkinSpec;
use ghostlab_core::sampling::{random_on_shells, synthetic_ghost_state};
use ghostlab_core::spectral::{make_eigenforce, EigenforceSpec, ScalarAmplitudeField, SpectralField, WaveVector};
use ghostlab_core::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{LabError, Result};
use crate::fieldio::parse_field;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lambda: Option<i64>,
    #[serde(rename = "G")]
    pub g: Option<f64>,
    pub shells: Option<Vec<i64>>,
    /// Scalar amplitudes of the force on the shell `lambda`; uniform when absent.
    pub force_pattern: Option<Vec<ModeAmplitude>>,
    pub u0: Option<InitialData>,
    pub system: Option<SystemKind>,
    /// Truncation radius of the full system; the largest shell when absent.
    pub radius_sq: Option<i64>,
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub t_end: Option<f64>,
    pub sample_every: Option<usize>,
    pub eps_eta: Option<f64>,
    pub eps_chained: Option<f64>,
    pub transient_fraction: Option<f64>,
    /// Number of random starts for an ensemble ghost check.
    pub ensemble: Option<usize>,
    pub c_bg: Option<f64>,
    pub mu_plus: Option<Vec<f64>>,
    pub e_grid: Option<EGrid>,
    pub samples: Option<usize>,
    pub oracle_samples: Option<usize>,
    pub oracle_grid: Option<usize>,
    pub reference_constraints: Option<PathBuf>,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeAmplitude {
    pub k: [i32; 2],
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `u* = g / lambda`.
    Stationary,
    /// Random amplitudes on every mode of the shells, `|u| = scale` (default `G`).
    Random { seed: Option<u64>, scale: Option<f64> },
    Inline { amplitudes: Vec<ModeAmplitude> },
    File { path: PathBuf },
    /// `eta g + u_mu- + u_mu+` with the ghost relations. `ghost-check` turns it into
    /// a manufactured trajectory rotating at `omega` instead of integrating it.
    Chained {
        eta: f64,
        omega: Option<f64>,
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    #[default]
    Full,
    Compressed,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EGrid {
    /// Uniform points on `[0, max]`, both ends included.
    pub n: Option<usize>,
    /// Defaults to `G^2 / 4`.
    pub max: Option<f64>,
    /// Explicit values; overrides `n` and `max`.
    pub values: Option<Vec<f64>>,
}

/// File names of the exports, relative to `--out`.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub trajectory: Option<String>,
    pub final_state: Option<String>,
    pub report: Option<String>,
    pub series: Option<String>,
    pub ensemble: Option<String>,
    pub curve_prefix: Option<String>,
    pub transcript: Option<String>,
    pub constraints: Option<String>,
    pub identities: Option<String>,
    pub enstrophy: Option<String>,
}

pub fn output_name<'a>(custom: &'a Option<String>, default: &'a str) -> &'a str {
    custom.as_deref().unwrap_or(default)
}

/// Force, shells and Galerkin spec shared by the dynamics commands.
#[derive(Clone, Debug)]
pub struct Problem {
    pub lambda: i64,
    pub g: f64,
    pub shells: BTreeSet<i64>,
    pub force: SpectralField,
    pub spec: GalerkinSpec,
}

pub(crate) fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(LabError::config(format!("`{name}` must be positive and finite, got {v}")))
    }
}

fn amplitudes(list: &[ModeAmplitude], what: &str) -> Result<ScalarAmplitudeField> {
    ScalarAmplitudeField::new(list.iter().map(|m| (WaveVector::new(m.k[0], m.k[1]), Complex64::new(m.re, m.im))))
        .map_err(|e| LabError::config(format!("{what}: {e}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::config(e.message()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(m) => LabError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn require<T: Copy>(v: Option<T>, key: &'static str) -> Result<T> {
        v.ok_or(LabError::MissingKey(key))
    }

    pub fn g_value(&self) -> Result<f64> {
        positive("G", Self::require(self.g, "G")?)
    }

    pub fn problem(&self) -> Result<Problem> {
        let lambda = Self::require(self.lambda, "lambda")?;
        let g = self.g_value()?;
        let shells: BTreeSet<i64> = match &self.shells {
            Some(s) if s.is_empty() => return Err(LabError::config("`shells` must be nonempty")),
            Some(s) => s.iter().copied().collect(),
            None if lambda == 2 => [1, 2, 5].into_iter().collect(),
            None => return Err(LabError::MissingKey("shells")),
        };
        if let Some(&m) = shells.iter().find(|&&m| m <= 0) {
            return Err(LabError::config(format!("shell {m} is not positive")));
        }
        let spec = match &self.force_pattern {
            Some(p) => EigenforceSpec {
                lambda,
                pattern: amplitudes(p, "force_pattern")?,
                magnitude: g,
            },
            None => EigenforceSpec::uniform(lambda, g).map_err(LabError::config)?,
        };
        let force = make_eigenforce(&spec).map_err(LabError::config)?;
        let spec = GalerkinSpec::new(shells.clone(), force.clone(), lambda)?;
        Ok(Problem {
            lambda,
            g,
            shells,
            force,
            spec,
        })
    }

    /// The initial state; `seed` is used when the config does not fix one.
    pub fn initial_state(&self, p: &Problem, seed: u64, base: &Path) -> Result<SpectralField> {
        let radius = *p.shells.iter().next_back().expect("nonempty");
        let shells: Vec<i64> = p.shells.iter().copied().collect();
        let u = match self.u0.as_ref().unwrap_or(&InitialData::Random { seed: None, scale: None }) {
            InitialData::Stationary => (1.0 / p.lambda as f64) * &p.force,
            InitialData::Random { seed: s, scale } => {
                let scale = positive("u0.scale", scale.unwrap_or(p.g))?;
                random_on_shells(&mut ChaCha8Rng::seed_from_u64(s.unwrap_or(seed)), &shells, scale)
            }
            InitialData::Inline { amplitudes: a } => {
                let amps = amplitudes(a, "u0.amplitudes")?;
                SpectralField::from_scalar(&amps, amps.max_norm_sq().max(radius)).map_err(|e| LabError::config(format!("u0: {e}")))?
            }
            InitialData::File { path } => {
                let path = base.join(path);
                let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
                parse_field(&text, radius)?
            }
            InitialData::Chained { eta, seed: s, .. } => self.chained_state(p, *eta, s.unwrap_or(seed))?,
        };
        Ok(u)
    }

    pub(crate) fn chained_state(&self, p: &Problem, eta: f64, seed: u64) -> Result<SpectralField> {
        let below = p.shells.iter().copied().filter(|&m| m < p.lambda).max();
        let above = p.shells.iter().copied().filter(|&m| m > p.lambda).min();
        let (Some(lo), Some(hi)) = (below, above) else {
            return Err(LabError::config("a chained state needs shells on both sides of lambda"));
        };
        synthetic_ghost_state(&mut ChaCha8Rng::seed_from_u64(seed), &p.force, p.lambda, eta, &[lo, hi])
            .map_err(|e| LabError::config(format!("u0: {e}")))
    }

    /// `e` values for the curves: the explicit list, or `n` uniform points on `[0, max]`.
    pub fn e_values(&self, g: f64) -> Result<Vec<f64>> {
        let grid = self.e_grid.clone().unwrap_or_default();
        if let Some(v) = grid.values {
            if v.is_empty() {
                return Err(LabError::config("`e_grid.values` must be nonempty"));
            }
            if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(LabError::config(format!("`e_grid.values` entry {x} is not a nonnegative number")));
            }
            return Ok(v);
        }
        let n = grid.n.unwrap_or(101);
        if n < 2 {
            return Err(LabError::config("`e_grid.n` must be at least 2"));
        }
        let max = positive("e_grid.max", grid.max.unwrap_or(0.25 * g * g))?;
        let mut v: Vec<f64> = (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect();
        v[n - 1] = max;
        Ok(v)
    }
}

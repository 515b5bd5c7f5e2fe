//! Experiment configuration: a TOML file with a `[measure]` section plus
//! per-command parameter sections. All seeds, grids and budgets are
//! explicit so a config plus a build identifies every output byte.

use crate::error::{Error, Result};
use crate::measures::{AxisSpec, DigitAxis, MeasureModel, Mode};
use serde::{Deserialize, Serialize};

/// Declarative measure description (mirrors [`MeasureModel`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureSpec {
    Subtorus {
        n: usize,
        s: usize,
        normal_offset: Vec<f64>,
    },
    Digit {
        n: usize,
        axes: Vec<AxisConfig>,
        #[serde(default)]
        normal_offset: Vec<f64>,
    },
    FourierWeighted {
        n: usize,
        s: usize,
        normal_offset: Vec<f64>,
        modes: Vec<ModeConfig>,
    },
    Mixture {
        components: Vec<MeasureSpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AxisConfig {
    Full {},
    Digits { base: u32, digits: Vec<u32> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeConfig {
    pub k: Vec<i64>,
    pub amplitude: f64,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<MeasureModel> {
        match self {
            MeasureSpec::Subtorus { n, s, normal_offset } => {
                MeasureModel::subtorus(*n, *s, normal_offset.clone())
            }
            MeasureSpec::Digit { n, axes, normal_offset } => {
                let mut specs = Vec::with_capacity(axes.len());
                for a in axes {
                    specs.push(match a {
                        AxisConfig::Full {} => AxisSpec::Full,
                        AxisConfig::Digits { base, digits } => {
                            AxisSpec::Digits(DigitAxis::new(*base, digits.clone())?)
                        }
                    });
                }
                MeasureModel::digit_self_similar(*n, specs, normal_offset.clone())
            }
            MeasureSpec::FourierWeighted { n, s, normal_offset, modes } => {
                let modes = modes
                    .iter()
                    .map(|m| Mode { k: m.k.clone(), amplitude: m.amplitude })
                    .collect();
                MeasureModel::fourier_weighted(*n, *s, normal_offset.clone(), modes)
            }
            MeasureSpec::Mixture { components } => {
                let mut built = Vec::with_capacity(components.len());
                for c in components {
                    built.push(c.build()?);
                }
                MeasureModel::mixture(built)
            }
        }
    }
}

fn default_per_decade() -> usize {
    40
}

fn default_epsilon() -> f64 {
    1e-10
}

fn default_pairs() -> usize {
    1_000_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridParams {
    pub min: f64,
    pub max: f64,
    #[serde(default = "default_per_decade")]
    pub per_decade: usize,
    /// when set, the grid uses multiples of `period_base^(1/per_decade)`
    /// so log-periodic oscillations are sampled phase-uniformly
    #[serde(default)]
    pub period_base: Option<f64>,
}

impl GridParams {
    pub fn build(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max > self.min) {
            return Err(Error::Config(format!(
                "grid needs 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(match self.period_base {
            Some(b) => crate::asymptotics::period_grid(self.min, self.max, b, self.per_decade),
            None => crate::asymptotics::geometric_grid(self.min, self.max, self.per_decade),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KuznecovParams {
    pub lambda: GridParams,
    /// overrides the closed-form averaged density in the ratio column
    #[serde(default)]
    pub a_override: Option<f64>,
    /// multiplicative window for oscillation amplitudes (default one decade)
    #[serde(default)]
    pub amplitude_period: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeatParams {
    pub t: GridParams,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKindConfig {
    Empirical,
    Renewal,
    TorusExact,
    Exact,
    Synthetic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistprofParams {
    pub profile: ProfileKindConfig,
    #[serde(default = "default_pairs")]
    pub pair_count: usize,
    pub r: GridParams,
    /// synthetic profiles: (breakpoint, level) blocks and the dimension
    #[serde(default)]
    pub blocks: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub diam: Option<f64>,
    /// also evaluate G(t) on this grid
    #[serde(default)]
    pub gaussian_t: Option<GridParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyParams {
    pub u: f64,
    #[serde(default = "default_pairs")]
    pub pair_count: usize,
    /// profile used for the layer-cake side
    pub profile: ProfileKindConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KaramataMode {
    Synthetic,
    Spectral,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KaramataParams {
    pub mode: KaramataMode,
    pub beta: f64,
    /// synthetic amplitude of N(S) = a S^beta
    #[serde(default)]
    pub amplitude: Option<f64>,
    pub t: GridParams,
    /// spectral mode: lambda sweep for the counting direction
    #[serde(default)]
    pub lambda: Option<GridParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureParams {
    pub n: usize,
    pub s1: usize,
    pub offset1: Vec<f64>,
    pub s2: usize,
    pub offset2: Vec<f64>,
    pub lambda: GridParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlocksParams {
    pub s: u32,
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    pub base_freq: i64,
    /// quadrature refinements to report (1.0 and 2.0 by default)
    #[serde(default)]
    pub quad_scales: Option<Vec<f64>>,
}

/// Top-level experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget_points: Option<u64>,
    #[serde(default)]
    pub kuznecov: Option<KuznecovParams>,
    #[serde(default)]
    pub heat: Option<HeatParams>,
    #[serde(default)]
    pub distprof: Option<DistprofParams>,
    #[serde(default)]
    pub energy: Option<EnergyParams>,
    #[serde(default)]
    pub karamata: Option<KaramataParams>,
    #[serde(default)]
    pub mixture: Option<MixtureParams>,
    #[serde(default)]
    pub blocks: Option<BlocksParams>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn measure(&self) -> Result<MeasureModel> {
        self.measure
            .as_ref()
            .ok_or_else(|| Error::Config("missing [measure] section".into()))?
            .build()
    }
}

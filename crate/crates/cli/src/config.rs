//! Run configuration: one JSON document per run, presets, and `key=value`
//! overrides addressed by dotted paths.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use gup_jcm::rwa::ZetaMapSpec;
use gup_jcm::wigner::GridSpec;
use gup_jcm::{Atom, GupParams};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// GUP parameters; γ in J^{-1/2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GupSection {
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
}

impl GupSection {
    pub fn params(&self) -> gup_jcm::Result<GupParams> {
        GupParams::from_gamma(self.gamma, self.delta, self.epsilon)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RabiSection {
    /// Field frequency ω, rad/s.
    pub omega: f64,
    /// Coupling λ, rad/s.
    pub lambda: f64,
    /// Photon number of the inversion time series.
    pub n: usize,
    /// Photon numbers of the ΔΩ table.
    pub n_values: Vec<usize>,
    /// Inversion periods covered by the time series.
    pub periods: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersiveSection {
    /// Field frequency ω, rad/s, for φ.
    pub omega: f64,
    /// μ = λ²/Δ, rad/s.
    pub mu: f64,
    pub alpha: Complex64,
    /// Evolution time, s.
    pub t: f64,
    pub ncut: usize,
    pub atom: Atom,
    /// Samples of the fidelity-vs-time curve over [0, t].
    pub curve_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSection {
    pub grid: GridSpec,
    /// Compare the reference coherent state with itself.
    pub self_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Random draws for the coefficient-identity check.
    pub identity_draws: usize,
    /// Grid points per axis for the Wigner closed-form check.
    pub wigner_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    /// Output directory; `--out` takes precedence.
    pub output_dir: Option<PathBuf>,
    pub gup: GupSection,
    pub rabi: RabiSection,
    pub dispersive: DispersiveSection,
    pub wigner: WignerSection,
    pub zeta: ZetaMapSpec,
    pub verify: VerifySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            output_dir: None,
            gup: GupSection {
                gamma: 1e3,
                delta: 1.0,
                epsilon: 1.0,
            },
            rabi: RabiSection {
                omega: 1e16,
                lambda: 1.0,
                n: 1,
                n_values: (0..=10).collect(),
                periods: 10.0,
                points: 1001,
            },
            dispersive: DispersiveSection {
                omega: 1e15,
                mu: 1e5,
                alpha: Complex64::new(1.0, 0.0),
                t: 1e3,
                ncut: 30,
                atom: Atom::Ground,
                curve_points: 101,
            },
            wigner: WignerSection {
                grid: GridSpec::default(),
                self_reference: false,
            },
            zeta: ZetaMapSpec::fig2(),
            verify: VerifySection {
                identity_draws: 10_000,
                wigner_points: 201,
            },
        }
    }
}

/// Built-in parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// γ = 1e3, |α| = 1, μ = 1e5 rad/s, t = 1e3 s, ω = 1e15 rad/s, δ = ε = 1.
    Fig1,
    /// ζ map with n = 50, γ = 0.5, δ = ε = 1.
    Fig2,
    /// ζ map with n = 50, γ = 5e3, δ = ε = 1.
    Fig3,
}

impl std::str::FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            other => bail!("unknown preset {other:?} (expected fig1, fig2 or fig3)"),
        }
    }
}

impl RunConfig {
    pub fn preset(p: Preset) -> Self {
        let mut cfg = Self::default();
        match p {
            Preset::Fig1 => {
                cfg.gup = GupSection {
                    gamma: 1e3,
                    delta: 1.0,
                    epsilon: 1.0,
                };
                cfg.dispersive.omega = 1e15;
                cfg.dispersive.mu = 1e5;
                cfg.dispersive.alpha = Complex64::new(1.0, 0.0);
                cfg.dispersive.t = 1e3;
                cfg.dispersive.atom = Atom::Ground;
            }
            Preset::Fig2 => cfg.zeta = ZetaMapSpec::fig2(),
            Preset::Fig3 => cfg.zeta = ZetaMapSpec::fig3(),
        }
        cfg
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.check_version()?;
        Ok(cfg)
    }

    fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "config schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            );
        }
        Ok(())
    }

    /// Apply `path.to.field=value` overrides. Values are parsed as JSON and
    /// fall back to plain strings.
    pub fn with_overrides(self, overrides: &[String]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self);
        }
        let mut doc = serde_json::to_value(&self)?;
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("override {item:?} is not key=value"))?;
            let value =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut doc, key, value)?;
        }
        let cfg: Self = serde_json::from_value(doc).context("applying overrides")?;
        cfg.check_version()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn set_path(doc: &mut Value, key: &str, value: Value) -> Result<()> {
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if !map.contains_key(*part) {
                    bail!("unknown config field {key:?}");
                }
                let slot = map.get_mut(*part).expect("checked");
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .with_context(|| format!("{part:?} is not an index in {key:?}"))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| anyhow!("index {idx} out of range ({len}) in {key:?}"))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => bail!("{key:?} descends into a scalar"),
        };
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = RunConfig::preset(Preset::Fig3);
        let back: RunConfig = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn overrides() {
        let cfg = RunConfig::default()
            .with_overrides(&[
                "gup.gamma=0".into(),
                "rabi.n_values.1=7".into(),
                "dispersive.atom=excited".into(),
            ])
            .unwrap();
        assert_eq!(cfg.gup.gamma, 0.0);
        assert_eq!(cfg.rabi.n_values[1], 7);
        assert_eq!(cfg.dispersive.atom, Atom::Excited);
        assert!(RunConfig::default()
            .with_overrides(&["gup.nope=1".into()])
            .is_err());
        assert!(RunConfig::default()
            .with_overrides(&["gup.gamma".into()])
            .is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(RunConfig::preset(Preset::Fig2).zeta.gamma, 0.5);
        assert_eq!(RunConfig::preset(Preset::Fig3).zeta.gamma, 5e3);
        assert_eq!(RunConfig::preset(Preset::Fig1).dispersive.omega, 1e15);
        assert!("fig4".parse::<Preset>().is_err());
    }
}

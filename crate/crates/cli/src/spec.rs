//! Sweep specifications and the figure presets.
//!
//! A spec file is a JSON object whose fields mirror [`SweepSpec`]. It may
//! name a `preset`, in which case the preset is expanded first and every
//! other field present in the file overrides it.

use relaysec::monte_carlo::MAX_TRIALS;
use relaysec::SelectionScheme;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, Result};

/// Which hop is held at a fixed mean SNR in an unbalanced sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hop {
    #[serde(rename = "SR", alias = "sr")]
    Sr,
    #[serde(rename = "RD", alias = "rd")]
    Rd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedHop {
    pub which: Hop,
    /// One series per level.
    #[serde(deserialize_with = "one_or_many")]
    pub snr_db: Vec<f64>,
}

/// Eavesdropper mean SNR for one series: shared by every relay or listed
/// per relay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EavesLevel {
    Common(f64),
    PerRelay(Vec<f64>),
}

impl EavesLevel {
    /// `1/alpha_ke` in dB for relay `k`.
    pub fn db_for(&self, k: usize) -> f64 {
        match self {
            EavesLevel::Common(d) => *d,
            EavesLevel::PerRelay(v) => v[k],
        }
    }

    pub fn label(&self) -> String {
        match self {
            EavesLevel::Common(d) => format!("{d}"),
            EavesLevel::PerRelay(v) => v
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("/"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    Many(Vec<T>),
    One(T),
}

impl<T> From<OneOrMany<T>> for Vec<T> {
    fn from(v: OneOrMany<T>) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    OneOrMany::deserialize(d).map(Vec::from)
}

fn one_or_many_opt<'de, D, T>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    OneOrMany::deserialize(d).map(|v| Some(Vec::from(v)))
}

/// A fully resolved sweep.
///
/// Balanced sweeps read `snr_grid_db` as the total main-channel SNR, split
/// between the hops by `power_split_sr`. With `fixed_hop` set the grid is
/// the mean SNR of the other hop and the split is unused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub snr_grid_db: Vec<f64>,
    /// Either one fraction for every rate or one per entry of `rates`.
    #[serde(deserialize_with = "one_or_many")]
    pub power_split_sr: Vec<f64>,
    pub rates: Vec<f64>,
    /// One series per entry; a bare number is a single shared level.
    #[serde(deserialize_with = "one_or_many")]
    pub eaves_snr_db: Vec<EavesLevel>,
    pub schemes: Vec<SelectionScheme>,
    pub relay_counts: Vec<usize>,
    pub mc_trials: u64,
    pub seed: u64,
    pub fixed_hop: Option<FixedHop>,
}

/// Spec file contents before preset expansion.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    preset: Option<String>,
    snr_grid_db: Option<Vec<f64>>,
    #[serde(default, deserialize_with = "one_or_many_opt")]
    power_split_sr: Option<Vec<f64>>,
    rates: Option<Vec<f64>>,
    #[serde(default, deserialize_with = "one_or_many_opt")]
    eaves_snr_db: Option<Vec<EavesLevel>>,
    schemes: Option<Vec<SelectionScheme>>,
    relay_counts: Option<Vec<usize>>,
    mc_trials: Option<u64>,
    seed: Option<u64>,
    fixed_hop: Option<FixedHop>,
}

pub const PRESETS: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

/// Expands a figure preset. Simulation is off (`mc_trials = 0`) until
/// overridden.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let single = vec![SelectionScheme::Single(0)];
    let spec = match name {
        "fig2" => SweepSpec {
            snr_grid_db: grid(0.0, 60.0, 2.5),
            power_split_sr: vec![0.5],
            rates: vec![0.1, 1.0, 2.0],
            eaves_snr_db: vec![EavesLevel::Common(3.0), EavesLevel::Common(6.0)],
            schemes: single,
            relay_counts: vec![1],
            mc_trials: 0,
            seed: 0,
            fixed_hop: None,
        },
        "fig3" => SweepSpec {
            snr_grid_db: grid(0.0, 60.0, 2.5),
            power_split_sr: vec![0.5],
            rates: vec![0.1, 1.0, 2.0],
            eaves_snr_db: vec![EavesLevel::Common(6.0)],
            schemes: single,
            relay_counts: vec![1],
            mc_trials: 0,
            seed: 0,
            fixed_hop: Some(FixedHop {
                which: Hop::Sr,
                snr_db: vec![25.0, 30.0, 35.0],
            }),
        },
        "fig4" => SweepSpec {
            snr_grid_db: grid(0.0, 40.0, 2.5),
            power_split_sr: vec![0.5],
            rates: vec![1.0],
            eaves_snr_db: vec![EavesLevel::Common(3.0)],
            schemes: SelectionScheme::ALL.to_vec(),
            relay_counts: vec![2, 4],
            mc_trials: 0,
            seed: 0,
            fixed_hop: None,
        },
        "fig5" => SweepSpec {
            snr_grid_db: grid(0.0, 40.0, 2.5),
            power_split_sr: vec![0.3, 0.7],
            rates: vec![0.1, 1.0],
            eaves_snr_db: vec![EavesLevel::PerRelay(vec![0.0, 3.0, 6.0, 9.0])],
            schemes: SelectionScheme::ALL.to_vec(),
            relay_counts: vec![4],
            mc_trials: 0,
            seed: 0,
            fixed_hop: None,
        },
        other => {
            return Err(CliError::config(format!(
                "unknown preset `{other}`, expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(spec)
}

fn required<T>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| CliError::config(format!("missing field `{field}`")))
}

impl SweepSpec {
    /// Parses a spec file, expanding `preset` if present, and validates it.
    pub fn from_json(text: &str) -> Result<SweepSpec> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        let spec = match file.preset.as_deref() {
            Some(name) => {
                let base = figure_preset(name)?;
                SweepSpec {
                    snr_grid_db: file.snr_grid_db.unwrap_or(base.snr_grid_db),
                    power_split_sr: file.power_split_sr.unwrap_or(base.power_split_sr),
                    rates: file.rates.unwrap_or(base.rates),
                    eaves_snr_db: file.eaves_snr_db.unwrap_or(base.eaves_snr_db),
                    schemes: file.schemes.unwrap_or(base.schemes),
                    relay_counts: file.relay_counts.unwrap_or(base.relay_counts),
                    mc_trials: file.mc_trials.unwrap_or(base.mc_trials),
                    seed: file.seed.unwrap_or(base.seed),
                    fixed_hop: file.fixed_hop.or(base.fixed_hop),
                }
            }
            None => SweepSpec {
                snr_grid_db: required(file.snr_grid_db, "snr_grid_db")?,
                power_split_sr: file.power_split_sr.unwrap_or_else(|| vec![0.5]),
                rates: required(file.rates, "rates")?,
                eaves_snr_db: required(file.eaves_snr_db, "eaves_snr_db")?,
                schemes: required(file.schemes, "schemes")?,
                relay_counts: file.relay_counts.unwrap_or_else(|| vec![1]),
                mc_trials: file.mc_trials.unwrap_or(0),
                seed: file.seed.unwrap_or(0),
                fixed_hop: file.fixed_hop,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_ascending("snr_grid_db", &self.snr_grid_db)?;
        if self.rates.is_empty() {
            return Err(CliError::config("`rates` is empty"));
        }
        if let Some(r) = self.rates.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(CliError::config(format!("rate {r} must be positive")));
        }
        let splits = self.power_split_sr.len();
        if splits != 1 && splits != self.rates.len() {
            return Err(CliError::config(format!(
                "`power_split_sr` needs 1 or {} entries, got {splits}",
                self.rates.len()
            )));
        }
        if let Some(f) = self
            .power_split_sr
            .iter()
            .find(|f| !(**f > 0.0 && **f < 1.0))
        {
            return Err(CliError::config(format!(
                "power split {f} is outside (0, 1)"
            )));
        }
        if self.relay_counts.is_empty() || self.relay_counts.contains(&0) {
            return Err(CliError::config("`relay_counts` needs positive entries"));
        }
        if self.eaves_snr_db.is_empty() {
            return Err(CliError::config("`eaves_snr_db` is empty"));
        }
        for level in &self.eaves_snr_db {
            let values = match level {
                EavesLevel::Common(d) => vec![*d],
                EavesLevel::PerRelay(v) => {
                    if let Some(n) = self.relay_counts.iter().find(|&&n| n != v.len()) {
                        return Err(CliError::config(format!(
                            "per-relay eavesdropper list has {} entries but the sweep uses {n} relays",
                            v.len()
                        )));
                    }
                    v.clone()
                }
            };
            if values.iter().any(|d| !d.is_finite()) {
                return Err(CliError::config("eavesdropper SNR must be finite"));
            }
        }
        if self.schemes.is_empty() {
            return Err(CliError::config("`schemes` is empty"));
        }
        let min_n = *self.relay_counts.iter().min().unwrap();
        for s in &self.schemes {
            if let SelectionScheme::Single(k) = s {
                if *k >= min_n {
                    return Err(CliError::config(format!(
                        "{s} needs at least {} relays",
                        k + 1
                    )));
                }
            }
        }
        if let Some(fixed) = &self.fixed_hop {
            if fixed.snr_db.is_empty() || fixed.snr_db.iter().any(|d| !d.is_finite()) {
                return Err(CliError::config("`fixed_hop.snr_db` needs finite levels"));
            }
        }
        if self.mc_trials > MAX_TRIALS {
            return Err(CliError::config(format!("mc_trials exceeds {MAX_TRIALS}")));
        }
        Ok(())
    }

    pub fn split_for(&self, rate_index: usize) -> f64 {
        if self.power_split_sr.len() == 1 {
            self.power_split_sr[0]
        } else {
            self.power_split_sr[rate_index]
        }
    }

    /// Fixed-hop levels, or a single `None` for balanced sweeps.
    pub fn fixed_levels(&self) -> Vec<Option<(Hop, f64)>> {
        match &self.fixed_hop {
            Some(f) => f.snr_db.iter().map(|&d| Some((f.which, d))).collect(),
            None => vec![None],
        }
    }
}

fn check_ascending(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(CliError::config(format!("`{name}` is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::config(format!("`{name}` has non-finite entries")));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::config(format!(
            "`{name}` must be strictly ascending"
        )));
    }
    Ok(())
}

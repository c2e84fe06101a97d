//! Problem-instance data model: per-relay link rates, the system
//! configuration, selection schemes and decibel conversions.
//!
//! Link SNRs are exponentially distributed. Everything here stores the
//! exponential *rate* (the reciprocal of the mean SNR); callers that think
//! in dB go through [`RelayLinkParams::from_mean_snr_db`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

fn check_rate(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::domain(
            name,
            format!("must be positive and finite, got {value}"),
        ));
    }
    Ok(value)
}

/// Exponential rate parameters of the three links attached to one relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayLinkParams {
    beta_sk: f64,
    beta_kd: f64,
    alpha_ke: f64,
}

impl RelayLinkParams {
    /// Builds from the rates of the source-relay, relay-destination and
    /// relay-eavesdropper links.
    pub fn new(beta_sk: f64, beta_kd: f64, alpha_ke: f64) -> Result<Self> {
        Ok(Self {
            beta_sk: check_rate("beta_sk", beta_sk)?,
            beta_kd: check_rate("beta_kd", beta_kd)?,
            alpha_ke: check_rate("alpha_ke", alpha_ke)?,
        })
    }

    /// Builds from mean link SNRs given in dB.
    pub fn from_mean_snr_db(sr_db: f64, rd_db: f64, re_db: f64) -> Result<Self> {
        Self::new(
            1.0 / db_to_linear(Decibel(sr_db))?,
            1.0 / db_to_linear(Decibel(rd_db))?,
            1.0 / db_to_linear(Decibel(re_db))?,
        )
    }

    pub fn beta_sk(&self) -> f64 {
        self.beta_sk
    }

    pub fn beta_kd(&self) -> f64 {
        self.beta_kd
    }

    pub fn alpha_ke(&self) -> f64 {
        self.alpha_ke
    }

    /// Rate of `min(gamma_sk, gamma_kd)`, itself exponential.
    pub fn composite_beta(&self) -> f64 {
        self.beta_sk + self.beta_kd
    }

    /// Same relay with the two hops exchanged.
    pub fn swap_hops(&self) -> Self {
        Self {
            beta_sk: self.beta_kd,
            beta_kd: self.beta_sk,
            alpha_ke: self.alpha_ke,
        }
    }
}

/// A complete problem instance: the relay set and the target secrecy rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    relays: Vec<RelayLinkParams>,
    rate_rs: f64,
    rho: f64,
}

impl SystemConfig {
    pub fn new(relays: Vec<RelayLinkParams>, rate_rs: f64) -> Result<Self> {
        if relays.is_empty() {
            return Err(Error::domain("relays", "at least one relay is required"));
        }
        let rho = rho_of_rate(rate_rs)?;
        Ok(Self {
            relays,
            rate_rs,
            rho,
        })
    }

    pub fn relays(&self) -> &[RelayLinkParams] {
        &self.relays
    }

    pub fn relay(&self, index: usize) -> Result<&RelayLinkParams> {
        self.relays.get(index).ok_or(Error::RelayIndex {
            index,
            count: self.relays.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.relays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relays.is_empty()
    }

    /// Target secrecy rate R_s in bits per channel use.
    pub fn rate_rs(&self) -> f64 {
        self.rate_rs
    }

    /// SNR-ratio threshold `2^(2 R_s)`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Configuration with every relay's two hops exchanged.
    pub fn swap_hops(&self) -> Self {
        Self {
            relays: self.relays.iter().map(RelayLinkParams::swap_hops).collect(),
            rate_rs: self.rate_rs,
            rho: self.rho,
        }
    }

    /// Same relays with a different target rate.
    pub fn with_rate(&self, rate_rs: f64) -> Result<Self> {
        Self::new(self.relays.clone(), rate_rs)
    }
}

/// Relay selection policy.
///
/// `Single` holds a zero-based index; its text form (`SINGLE-1`, ...) is
/// one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectionScheme {
    /// Maximum instantaneous secrecy rate (all links known).
    Os,
    /// Maximum main-channel SNR `min(gamma_sk, gamma_kd)`.
    Ts,
    /// Maximum main-channel SNR scaled by the eavesdropper rate.
    SsRe,
    /// Maximum relay-destination SNR.
    SsRd,
    /// Maximum source-relay SNR.
    SsSr,
    /// Minimum single-relay outage, from statistics only.
    Ps,
    Single(usize),
}

impl SelectionScheme {
    /// The six multi-relay policies, in canonical order.
    pub const ALL: [SelectionScheme; 6] = [
        SelectionScheme::Os,
        SelectionScheme::Ts,
        SelectionScheme::SsRe,
        SelectionScheme::SsRd,
        SelectionScheme::SsSr,
        SelectionScheme::Ps,
    ];

    /// Stable small integer used when deriving per-cell seeds.
    pub fn id(&self) -> u64 {
        match self {
            SelectionScheme::Os => 0,
            SelectionScheme::Ts => 1,
            SelectionScheme::SsRe => 2,
            SelectionScheme::SsRd => 3,
            SelectionScheme::SsSr => 4,
            SelectionScheme::Ps => 5,
            SelectionScheme::Single(k) => 16 + *k as u64,
        }
    }

    pub fn check_against(&self, cfg: &SystemConfig) -> Result<()> {
        if let SelectionScheme::Single(k) = *self {
            cfg.relay(k)?;
        }
        Ok(())
    }
}

impl fmt::Display for SelectionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionScheme::Os => f.write_str("OS"),
            SelectionScheme::Ts => f.write_str("TS"),
            SelectionScheme::SsRe => f.write_str("SS-RE"),
            SelectionScheme::SsRd => f.write_str("SS-RD"),
            SelectionScheme::SsSr => f.write_str("SS-SR"),
            SelectionScheme::Ps => f.write_str("PS"),
            SelectionScheme::Single(k) => write!(f, "SINGLE-{}", k + 1),
        }
    }
}

impl FromStr for SelectionScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-");
        let scheme = match norm.as_str() {
            "OS" => SelectionScheme::Os,
            "TS" => SelectionScheme::Ts,
            "SS-RE" | "SSRE" => SelectionScheme::SsRe,
            "SS-RD" | "SSRD" => SelectionScheme::SsRd,
            "SS-SR" | "SSSR" => SelectionScheme::SsSr,
            "PS" => SelectionScheme::Ps,
            other => {
                let k = other
                    .strip_prefix("SINGLE-")
                    .or_else(|| other.strip_prefix("SINGLE:"))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::domain("scheme", format!("unknown scheme `{s}`")))?;
                SelectionScheme::Single(k - 1)
            }
        };
        Ok(scheme)
    }
}

impl Serialize for SelectionScheme {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SelectionScheme {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A power ratio in decibels (`10 log10`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decibel(pub f64);

impl Decibel {
    pub fn from_linear(linear: f64) -> Result<Self> {
        check_rate("linear", linear)?;
        Ok(Decibel(10.0 * linear.log10()))
    }

    pub fn to_linear(self) -> Result<f64> {
        db_to_linear(self)
    }
}

/// `rho = 2^(2 R_s)`.
pub fn rho_of_rate(rate_rs: f64) -> Result<f64> {
    check_rate("rate_rs", rate_rs)?;
    Ok((2.0 * rate_rs).exp2())
}

pub fn db_to_linear(d: Decibel) -> Result<f64> {
    if !d.0.is_finite() {
        return Err(Error::domain(
            "dB value",
            format!("must be finite, got {}", d.0),
        ));
    }
    Ok(10f64.powf(d.0 / 10.0))
}

/// Splits a total main-channel SNR between the two hops and returns the
/// resulting `(beta_sk, beta_kd)` rates.
pub fn split_total_snr(total_snr_linear: f64, fraction_sr: f64) -> Result<(f64, f64)> {
    check_rate("total_snr_linear", total_snr_linear)?;
    if !(fraction_sr > 0.0 && fraction_sr < 1.0) {
        return Err(Error::domain(
            "fraction_sr",
            format!("must lie strictly inside (0, 1), got {fraction_sr}"),
        ));
    }
    Ok((
        1.0 / (fraction_sr * total_snr_linear),
        1.0 / ((1.0 - fraction_sr) * total_snr_linear),
    ))
}

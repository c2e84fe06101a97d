//! Single problem instances for the `outage` and `simulate` subcommands.

use relaysec::{RelayLinkParams, SystemConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Mean link SNRs of one relay, in dB.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelayDb {
    pub sr_db: f64,
    pub rd_db: f64,
    pub re_db: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub rate_rs: f64,
    pub relays: Vec<RelayDb>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn to_config(&self) -> Result<SystemConfig> {
        let relays = self
            .relays
            .iter()
            .map(|r| RelayLinkParams::from_mean_snr_db(r.sr_db, r.rd_db, r.re_db))
            .collect::<relaysec::Result<Vec<_>>>()
            .map_err(|e| CliError::config(e.to_string()))?;
        SystemConfig::new(relays, self.rate_rs).map_err(|e| CliError::config(e.to_string()))
    }
}

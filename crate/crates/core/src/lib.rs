//! Secrecy outage of dual-hop decode-and-forward relay networks with relay
//! selection.
//!
//! A source reaches a destination through one of `N` decode-and-forward
//! relays while a passive eavesdropper listens to the relay broadcast. All
//! links are independent Rayleigh-faded, so every link SNR is exponential.
//! The crate provides
//!
//! - closed-form outage probabilities for optimal (OS), traditional (TS),
//!   eavesdropper-aware (SS-RE), partial (SS-RD, SS-SR) and statistics-only
//!   (PS) selection ([`closed_form`]),
//! - a seeded, thread-count-independent Monte Carlo simulator for the same
//!   rules ([`monte_carlo`]),
//! - high-SNR expansions, outage floors and diversity-order fitting
//!   ([`asymptotics`]).

pub mod asymptotics;
pub mod closed_form;
pub mod combinatorics;
pub mod dd;
pub mod error;
pub mod monte_carlo;
pub mod types;

pub use closed_form::{
    outage, outage_os, outage_ps, outage_ss_rd, outage_ss_re, outage_ss_sr, outage_ts, select_ps,
    single_relay_outage, Limits, OutageProbability,
};
pub use error::{Error, Result};
pub use monte_carlo::{simulate_outage, simulate_schemes, MonteCarloEstimate};
pub use types::{
    db_to_linear, rho_of_rate, split_total_snr, Decibel, RelayLinkParams, SelectionScheme,
    SystemConfig,
};

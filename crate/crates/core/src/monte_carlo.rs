//! Monte Carlo estimation of secrecy outage.
//!
//! Each trial draws an independent exponential SNR for every link, runs the
//! selection rule on that realization and records whether the selected
//! relay's secrecy rate falls strictly below the target.
//!
//! Trials are cut into blocks of [`BLOCK_TRIALS`]. Block `b` draws from a
//! ChaCha8 stream keyed by `(seed, b)`, so the estimate depends only on
//! `(cfg, trials, seed)` and not on how many threads execute the blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::select_ps;
use crate::error::{Error, Result};
use crate::types::{SelectionScheme, SystemConfig};

pub const BLOCK_TRIALS: u64 = 1 << 14;

/// Largest trial count accepted; keeps outage counts exact in an `f64`.
pub const MAX_TRIALS: u64 = 1 << 53;

/// Instantaneous SNRs of the three links of one relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSnrs {
    pub gamma_sk: f64,
    pub gamma_kd: f64,
    pub gamma_ke: f64,
}

impl LinkSnrs {
    /// End-to-end main-channel SNR of the decode-and-forward branch.
    pub fn main_snr(&self) -> f64 {
        self.gamma_sk.min(self.gamma_kd)
    }
}

/// One draw of every link SNR in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    links: Vec<LinkSnrs>,
}

impl ChannelRealization {
    pub fn new(links: Vec<LinkSnrs>) -> Result<Self> {
        let ok = links.iter().all(|l| {
            [l.gamma_sk, l.gamma_kd, l.gamma_ke]
                .iter()
                .all(|g| g.is_finite() && *g >= 0.0)
        });
        if !ok {
            return Err(Error::domain(
                "realization",
                "SNRs must be finite and non-negative",
            ));
        }
        Ok(Self { links })
    }

    pub fn links(&self) -> &[LinkSnrs] {
        &self.links
    }

    fn resample<R: Rng + ?Sized>(&mut self, cfg: &SystemConfig, rng: &mut R) {
        self.links.clear();
        self.links.extend(cfg.relays().iter().map(|r| LinkSnrs {
            gamma_sk: sample_exp(rng, r.beta_sk()),
            gamma_kd: sample_exp(rng, r.beta_kd()),
            gamma_ke: sample_exp(rng, r.alpha_ke()),
        }));
    }
}

fn sample_exp<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return -u.ln() / rate;
        }
    }
}

/// Draws a realization; per relay the order is S-R, R-D, R-E.
pub fn sample_realization<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelRealization {
    let mut real = ChannelRealization {
        links: Vec::with_capacity(cfg.len()),
    };
    real.resample(cfg, rng);
    real
}

/// `max(0, log2((1 + gamma_k) / (1 + gamma_ke)) / 2)`.
pub fn secrecy_rate(gamma_k: f64, gamma_ke: f64) -> f64 {
    (0.5 * ((1.0 + gamma_k) / (1.0 + gamma_ke)).log2()).max(0.0)
}

fn argmax_by(links: &[LinkSnrs], metric: impl Fn(usize, &LinkSnrs) -> f64) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (k, l) in links.iter().enumerate() {
        let v = metric(k, l);
        if v > best_value {
            best = k;
            best_value = v;
        }
    }
    best
}

/// A selection rule bound to one configuration.
#[derive(Debug, Clone)]
pub struct Selector {
    scheme: SelectionScheme,
    alphas: Vec<f64>,
    fixed: Option<usize>,
}

impl Selector {
    pub fn new(scheme: SelectionScheme, cfg: &SystemConfig) -> Result<Self> {
        scheme.check_against(cfg)?;
        let fixed = match scheme {
            SelectionScheme::Ps => Some(select_ps(cfg)?),
            SelectionScheme::Single(k) => Some(k),
            _ => None,
        };
        Ok(Self {
            scheme,
            alphas: cfg.relays().iter().map(|r| r.alpha_ke()).collect(),
            fixed,
        })
    }

    pub fn scheme(&self) -> SelectionScheme {
        self.scheme
    }

    /// Zero-based index of the relay chosen for `real`.
    pub fn select(&self, real: &ChannelRealization) -> usize {
        if let Some(k) = self.fixed {
            return k;
        }
        let links = real.links();
        match self.scheme {
            SelectionScheme::Os => argmax_by(links, |_, l| secrecy_rate(l.main_snr(), l.gamma_ke)),
            SelectionScheme::Ts => argmax_by(links, |_, l| l.main_snr()),
            SelectionScheme::SsRe => argmax_by(links, |k, l| l.main_snr() * self.alphas[k]),
            SelectionScheme::SsRd => argmax_by(links, |_, l| l.gamma_kd),
            SelectionScheme::SsSr => argmax_by(links, |_, l| l.gamma_sk),
            SelectionScheme::Ps | SelectionScheme::Single(_) => unreachable!(),
        }
    }

    /// Whether the relay this rule picks is in secrecy outage at `rate_rs`.
    pub fn is_outage(&self, real: &ChannelRealization, rate_rs: f64) -> bool {
        let l = &real.links()[self.select(real)];
        secrecy_rate(l.main_snr(), l.gamma_ke) < rate_rs
    }
}

/// Zero-based index chosen by `scheme` on `real`; ties go to the lowest index.
pub fn apply_selection(
    scheme: SelectionScheme,
    cfg: &SystemConfig,
    real: &ChannelRealization,
) -> Result<usize> {
    if real.links().len() != cfg.len() {
        return Err(Error::domain(
            "realization",
            format!(
                "has {} relays, config has {}",
                real.links().len(),
                cfg.len()
            ),
        ));
    }
    Ok(Selector::new(scheme, cfg)?.select(real))
}

/// Empirical outage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub p_hat: f64,
    pub outages: u64,
    pub trials: u64,
    /// Wald standard error `sqrt(p (1 - p) / n)`.
    pub std_err: f64,
    pub seed: u64,
}

impl MonteCarloEstimate {
    fn new(outages: u64, trials: u64, seed: u64) -> Self {
        let p_hat = outages as f64 / trials as f64;
        Self {
            p_hat,
            outages,
            trials,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            seed,
        }
    }

    /// `|p - p_hat| / std_err`; infinite when the estimate is degenerate
    /// and disagrees with `p`.
    pub fn z_score(&self, p: f64) -> f64 {
        let diff = (p - self.p_hat).abs();
        if self.std_err > 0.0 {
            diff / self.std_err
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Random stream for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Estimates the outage of `scheme`.
pub fn simulate_outage(
    cfg: &SystemConfig,
    scheme: SelectionScheme,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    Ok(simulate_schemes(cfg, &[scheme], trials, seed)?[0])
}

/// Estimates several schemes on one shared realization stream. Each entry
/// equals what [`simulate_outage`] returns for that scheme alone.
pub fn simulate_schemes(
    cfg: &SystemConfig,
    schemes: &[SelectionScheme],
    trials: u64,
    seed: u64,
) -> Result<Vec<MonteCarloEstimate>> {
    if trials == 0 {
        return Err(Error::domain("trials", "must be at least 1"));
    }
    if trials > MAX_TRIALS {
        return Err(Error::TrialOverflow(trials));
    }
    let selectors = schemes
        .iter()
        .map(|&s| Selector::new(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let rate = cfg.rate_rs();

    let per_block: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            let mut rng = block_rng(seed, b);
            let mut real = ChannelRealization {
                links: Vec::with_capacity(cfg.len()),
            };
            let mut counts = vec![0u64; selectors.len()];
            for _ in 0..n {
                real.resample(cfg, &mut rng);
                for (c, sel) in counts.iter_mut().zip(&selectors) {
                    *c += sel.is_outage(&real, rate) as u64;
                }
            }
            counts
        })
        .collect();

    let mut totals = vec![0u64; selectors.len()];
    for counts in &per_block {
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(totals
        .into_iter()
        .map(|o| MonteCarloEstimate::new(o, trials, seed))
        .collect())
}

//! Closed-form secrecy outage probabilities for every selection scheme.
//!
//! Every scheme is assembled from one building block, the single-relay
//! outage with a composite main-channel rate `c`:
//!
//! ```text
//! g(c) = 1 - alpha e^{-c (rho - 1)} / (c rho + alpha)
//! ```
//!
//! which is `E_z[P(min-hop SNR < lambda)]` for `lambda = rho (1 + z) - 1` and
//! `z ~ Exp(alpha)`. The ranking schemes (TS, SS-RE, SS-RD, SS-SR) split the
//! outage by the law of total probability over the selected relay `k` and
//! expand the CDF of the best competing metric by inclusion-exclusion
//! (see [`crate::combinatorics`]). The empty subset contributes the leading
//! `g(beta_k)` term, so a single relay reduces to `g` exactly.

use crate::combinatorics::{subset_terms, DEFAULT_MAX_RELAYS};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::types::{RelayLinkParams, SelectionScheme, SystemConfig};

/// Excursions outside `[0, 1]` up to this size are clamped; larger ones are
/// reported as cancellation failures.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// A secrecy outage probability produced by one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageProbability {
    pub p: f64,
    pub scheme: SelectionScheme,
    /// Set when the raw value fell slightly outside `[0, 1]` and was clamped.
    pub clamped: bool,
}

impl OutageProbability {
    pub fn from_raw(raw: f64, scheme: SelectionScheme) -> Result<Self> {
        if !raw.is_finite() {
            return Err(Error::NonFinite {
                context: "outage probability",
            });
        }
        if !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&raw) {
            return Err(Error::Cancellation {
                scheme: scheme.to_string(),
                raw,
            });
        }
        let p = raw.clamp(0.0, 1.0);
        Ok(Self {
            p,
            scheme,
            clamped: p != raw,
        })
    }
}

/// Pessimistic per-term rounding of the double-double evaluation.
const DD_ROUNDING: f64 = 1e-30;

/// Ranking-scheme results whose estimated relative error exceeds this are
/// rejected as cancellation failures.
pub const MAX_RELATIVE_ERROR: f64 = 1e-6;

/// Evaluation limits shared by the subset-enumerating schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_relays: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_relays: DEFAULT_MAX_RELAYS,
        }
    }
}

/// `1 - alpha e^{-c(rho-1)} / (c rho + alpha)`, written without the
/// subtraction so that small outages keep full relative precision.
pub(crate) fn hop_outage(c: f64, rho: f64, alpha: f64) -> f64 {
    let denom = c * rho + alpha;
    (c * rho - alpha * (-c * (rho - 1.0)).exp_m1()) / denom
}

/// [`hop_outage`] in double-double.
fn hop_outage_dd(c: DoubleDouble, rho: f64, rho_m1: DoubleDouble, alpha: f64) -> DoubleDouble {
    let c_rho = c * rho;
    (c_rho - (-(c * rho_m1)).exp_m1() * alpha) / (c_rho + alpha)
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::domain(
            "rho",
            format!("must be finite and >= 1, got {rho}"),
        ));
    }
    Ok(())
}

/// Outage of one relay used on its own. Accepts `rho >= 1`.
pub fn single_relay_outage(r: &RelayLinkParams, rho: f64) -> Result<OutageProbability> {
    single_relay_outage_as(r, rho, SelectionScheme::Single(0))
}

fn single_relay_outage_as(
    r: &RelayLinkParams,
    rho: f64,
    scheme: SelectionScheme,
) -> Result<OutageProbability> {
    check_rho(rho)?;
    OutageProbability::from_raw(hop_outage(r.composite_beta(), rho, r.alpha_ke()), scheme)
}

/// Per-relay outages of `cfg`, in relay order.
pub fn single_relay_outages(cfg: &SystemConfig) -> Result<Vec<f64>> {
    cfg.relays()
        .iter()
        .map(|r| single_relay_outage(r, cfg.rho()).map(|o| o.p))
        .collect()
}

/// Optimal selection: the product of the single-relay outages.
pub fn outage_os(cfg: &SystemConfig) -> Result<OutageProbability> {
    let p = single_relay_outages(cfg)?.into_iter().product();
    OutageProbability::from_raw(p, SelectionScheme::Os)
}

/// Shared evaluator for the ranking schemes.
///
/// For relay `k` with competitor weights `w` (excluding `k`), the selected
/// relay's metric has rate `own_rate`; the competitor subset aggregate
/// `beta'` enters the selection density as `own_rate + scale * beta'` and
/// the outage exponent as `beta_k + scale * beta'`, with `scale` = 1 except
/// for SS-RE where the metric is scaled by `alpha_k`.
///
/// The terms are `O(beta)` while their sum is `O(beta^N)`, so everything
/// below runs in double-double, subset sums included.
fn ranking_outage(
    cfg: &SystemConfig,
    scheme: SelectionScheme,
    limits: Limits,
    weights: &[f64],
    own_rate: impl Fn(&RelayLinkParams) -> f64,
    scale: impl Fn(&RelayLinkParams) -> f64,
) -> Result<OutageProbability> {
    let rho = cfg.rho();
    let rho_m1 = DoubleDouble::sum_of(rho, -1.0);
    let mut acc = DoubleDouble::ZERO;
    let mut magnitude = 0.0;
    for (k, relay) in cfg.relays().iter().enumerate() {
        let beta_k = relay.composite_beta();
        let alpha = relay.alpha_ke();
        let own = own_rate(relay);
        let s = scale(relay);
        let lead = hop_outage_dd(beta_k.into(), rho, rho_m1, alpha);
        magnitude += lead.hi.abs();
        acc = acc + lead;
        for term in subset_terms(weights, Some(k), limits.max_relays)? {
            let b = term.beta_prime_dd() * s;
            let v = hop_outage_dd(b + beta_k, rho, rho_m1, alpha) * own / (b + own);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "ranking scheme term",
                });
            }
            magnitude += v.hi.abs();
            if term.sign > 0.0 {
                acc = acc + v;
            } else {
                acc = acc - v;
            }
        }
    }
    let raw = acc.to_f64();
    if magnitude * DD_ROUNDING > MAX_RELATIVE_ERROR * raw.abs() {
        return Err(Error::Cancellation {
            scheme: scheme.to_string(),
            raw,
        });
    }
    OutageProbability::from_raw(raw, scheme)
}

fn check_cap(cfg: &SystemConfig, limits: Limits) -> Result<()> {
    if cfg.len() > limits.max_relays {
        return Err(Error::TooManyRelays {
            count: cfg.len(),
            cap: limits.max_relays,
        });
    }
    Ok(())
}

/// Traditional selection: largest `min(gamma_sk, gamma_kd)`.
pub fn outage_ts(cfg: &SystemConfig) -> Result<OutageProbability> {
    outage_ts_with(cfg, Limits::default())
}

pub fn outage_ts_with(cfg: &SystemConfig, limits: Limits) -> Result<OutageProbability> {
    check_cap(cfg, limits)?;
    let w: Vec<f64> = cfg.relays().iter().map(|r| r.composite_beta()).collect();
    ranking_outage(
        cfg,
        SelectionScheme::Ts,
        limits,
        &w,
        |r| r.composite_beta(),
        |_| 1.0,
    )
}

/// Suboptimal selection weighting the main SNR by the eavesdropper rate:
/// largest `gamma_k * alpha_ke`.
pub fn outage_ss_re(cfg: &SystemConfig) -> Result<OutageProbability> {
    outage_ss_re_with(cfg, Limits::default())
}

pub fn outage_ss_re_with(cfg: &SystemConfig, limits: Limits) -> Result<OutageProbability> {
    check_cap(cfg, limits)?;
    // gamma_i * alpha_ie ~ Exp(beta_i / alpha_ie)
    let w: Vec<f64> = cfg
        .relays()
        .iter()
        .map(|r| r.composite_beta() / r.alpha_ke())
        .collect();
    ranking_outage(
        cfg,
        SelectionScheme::SsRe,
        limits,
        &w,
        |r| r.composite_beta(),
        |r| r.alpha_ke(),
    )
}

/// Partial selection on the relay-destination SNR.
pub fn outage_ss_rd(cfg: &SystemConfig) -> Result<OutageProbability> {
    outage_ss_rd_with(cfg, Limits::default())
}

pub fn outage_ss_rd_with(cfg: &SystemConfig, limits: Limits) -> Result<OutageProbability> {
    partial_hop_outage(cfg, limits, SelectionScheme::SsRd)
}

/// Partial selection on the source-relay SNR; the hop-swapped mirror of
/// [`outage_ss_rd`].
pub fn outage_ss_sr(cfg: &SystemConfig) -> Result<OutageProbability> {
    outage_ss_sr_with(cfg, Limits::default())
}

pub fn outage_ss_sr_with(cfg: &SystemConfig, limits: Limits) -> Result<OutageProbability> {
    partial_hop_outage(&cfg.swap_hops(), limits, SelectionScheme::SsSr)
}

fn partial_hop_outage(
    cfg: &SystemConfig,
    limits: Limits,
    scheme: SelectionScheme,
) -> Result<OutageProbability> {
    check_cap(cfg, limits)?;
    let w: Vec<f64> = cfg.relays().iter().map(|r| r.beta_kd()).collect();
    ranking_outage(cfg, scheme, limits, &w, |r| r.beta_kd(), |_| 1.0)
}

/// Statistics-only choice: the relay with the smallest single-relay outage,
/// lowest index on ties.
pub fn select_ps(cfg: &SystemConfig) -> Result<usize> {
    let outages = single_relay_outages(cfg)?;
    let mut best = 0;
    for (k, &p) in outages.iter().enumerate().skip(1) {
        if p < outages[best] {
            best = k;
        }
    }
    Ok(best)
}

pub fn outage_ps(cfg: &SystemConfig) -> Result<OutageProbability> {
    let k = select_ps(cfg)?;
    single_relay_outage_as(&cfg.relays()[k], cfg.rho(), SelectionScheme::Ps)
}

/// Dispatches on `scheme`.
pub fn outage(
    cfg: &SystemConfig,
    scheme: SelectionScheme,
    limits: Limits,
) -> Result<OutageProbability> {
    match scheme {
        SelectionScheme::Os => outage_os(cfg),
        SelectionScheme::Ts => outage_ts_with(cfg, limits),
        SelectionScheme::SsRe => outage_ss_re_with(cfg, limits),
        SelectionScheme::SsRd => outage_ss_rd_with(cfg, limits),
        SelectionScheme::SsSr => outage_ss_sr_with(cfg, limits),
        SelectionScheme::Ps => outage_ps(cfg),
        SelectionScheme::Single(k) => single_relay_outage_as(cfg.relay(k)?, cfg.rho(), scheme),
    }
}

#[cfg(test)]
mod printed;

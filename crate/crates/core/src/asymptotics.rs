//! High-SNR expansions, outage floors, the eavesdropper SNR-gap formula and
//! an empirical diversity-order fit.
//!
//! "Balanced" means both hops share the mean SNR `1/beta` which grows without
//! bound; "unbalanced" holds one hop at a fixed rate while the other grows,
//! which leaves a non-vanishing outage floor.

use crate::error::{Error, Result};

/// An asymptotic outage expression evaluated at one SNR.
///
/// `value` is returned as computed and can exceed 1 below the regime where
/// the expansion holds; see [`AsymptoteResult::out_of_regime`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteResult {
    pub value: f64,
    /// SNR-independent constant, present for the unbalanced forms.
    pub floor: Option<f64>,
    /// Power of `1/SNR` in the varying part.
    pub slope_order: u32,
}

impl AsymptoteResult {
    pub fn out_of_regime(&self) -> bool {
        self.value > 1.0
    }
}

fn secrecy_penalty(alpha: f64, rho: f64) -> f64 {
    rho / alpha + (rho - 1.0)
}

/// Single relay, balanced hops with per-hop mean SNR `inv_beta`:
/// `2 beta (rho / alpha + rho - 1)`.
pub fn asymp_single_balanced(alpha_ke: f64, rho: f64, inv_beta: f64) -> AsymptoteResult {
    AsymptoteResult {
        value: 2.0 / inv_beta * secrecy_penalty(alpha_ke, rho),
        floor: None,
        slope_order: 1,
    }
}

/// Outage floor of one relay whose other hop has rate `beta_fixed`.
fn single_floor(beta_fixed: f64, alpha: f64, rho: f64) -> f64 {
    1.0 - alpha * (-beta_fixed * (rho - 1.0)).exp() / (rho * beta_fixed + alpha)
}

/// Single relay with one hop held at rate `beta_fixed` and the other hop's
/// mean SNR `inv_beta` growing. Either hop may be the fixed one.
pub fn asymp_single_unbalanced(
    beta_fixed: f64,
    alpha_ke: f64,
    rho: f64,
    inv_beta: f64,
) -> AsymptoteResult {
    let floor = single_floor(beta_fixed, alpha_ke, rho);
    let leak = alpha_ke * (-beta_fixed * (rho - 1.0)).exp();
    let varying = (rho + (rho - 1.0) * leak) / (rho * beta_fixed + alpha_ke) / inv_beta;
    AsymptoteResult {
        value: floor + varying,
        floor: Some(floor),
        slope_order: 1,
    }
}

/// Optimal selection over balanced relays: `(2 beta)^N prod_k (rho/alpha_k + rho - 1)`.
pub fn asymp_os_balanced(alphas: &[f64], rho: f64, inv_beta: f64) -> AsymptoteResult {
    let n = alphas.len() as i32;
    let product: f64 = alphas.iter().map(|&a| secrecy_penalty(a, rho)).product();
    AsymptoteResult {
        value: (2.0 / inv_beta).powi(n) * product,
        floor: None,
        slope_order: n as u32,
    }
}

/// Floor of optimal selection when every relay has one hop fixed; the
/// product of the per-relay floors.
pub fn asymp_os_unbalanced_floor(
    fixed_rates: &[f64],
    alphas: &[f64],
    rho: f64,
) -> Result<AsymptoteResult> {
    if fixed_rates.len() != alphas.len() || alphas.is_empty() {
        return Err(Error::domain(
            "alphas",
            format!(
                "need one eavesdropper rate per fixed rate, got {} and {}",
                alphas.len(),
                fixed_rates.len()
            ),
        ));
    }
    let floor: f64 = fixed_rates
        .iter()
        .zip(alphas)
        .map(|(&b, &a)| single_floor(b, a, rho))
        .product();
    Ok(AsymptoteResult {
        value: floor,
        floor: Some(floor),
        slope_order: alphas.len() as u32,
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Traditional selection over balanced relays.
///
/// `inv_beta` is the mean of each relay's end-to-end SNR `min(gamma_sk,
/// gamma_kd)`, i.e. `1 / (beta_sk + beta_kd)`. Evaluates
///
/// ```text
/// beta^N sum_k sum_i sum_{j=0..N} C(N,j) (rho-1)^j rho^(N-j) (N-j)! / (N alpha_k^(N-j))
/// ```
///
/// with the index `i` running over `1..=N` and not appearing in the summand.
pub fn asymp_ts_balanced(alphas: &[f64], rho: f64, inv_beta: f64) -> AsymptoteResult {
    let n = alphas.len() as u32;
    let nf = f64::from(n);
    let per_relay = |alpha: f64| -> f64 {
        (0..=n)
            .map(|j| {
                binomial(n, j)
                    * (rho - 1.0).powi(j as i32)
                    * rho.powi((n - j) as i32)
                    * factorial(n - j)
                    / (nf * alpha.powi((n - j) as i32))
            })
            .sum()
    };
    let inner: f64 = alphas.iter().map(|&a| nf * per_relay(a)).sum();
    AsymptoteResult {
        value: inv_beta.powi(-(n as i32)) * inner,
        floor: None,
        slope_order: n,
    }
}

/// Extra main-channel SNR in dB needed to hold a balanced single-relay
/// outage when the eavesdropper rate drops from `alpha1` to `alpha2`.
pub fn snr_gap_db(alpha1: f64, alpha2: f64, rho: f64) -> f64 {
    let shift = (rho - 1.0) / rho;
    10.0 * ((1.0 / alpha2 + shift) / (1.0 / alpha1 + shift)).log10()
}

/// Fit window used by [`diversity_order_estimate`], in dB below the highest
/// SNR point.
pub const DEFAULT_FIT_WINDOW_DB: f64 = 20.0;

/// Diversity order from the top [`DEFAULT_FIT_WINDOW_DB`] of an outage curve.
pub fn diversity_order_estimate(points: &[(f64, f64)]) -> Result<f64> {
    diversity_order_estimate_window(points, DEFAULT_FIT_WINDOW_DB)
}

/// Least-squares slope of `-log10 p` against `snr_db / 10` over the points
/// within `window_db` of the highest SNR. Pass `f64::INFINITY` to use every
/// point.
pub fn diversity_order_estimate_window(points: &[(f64, f64)], window_db: f64) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain("points", "need at least two points"));
    }
    if let Some(&(_, p)) = points.iter().find(|&&(_, p)| !(p > 0.0 && p.is_finite())) {
        return Err(Error::domain(
            "points",
            format!("outage must be positive, got {p}"),
        ));
    }
    if points
        .windows(2)
        .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::domain(
            "points",
            "SNR values must be strictly ascending",
        ));
    }
    let top = points[points.len() - 1].0;
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(db, _)| top - db <= window_db)
        .map(|&(db, p)| (db / 10.0, -p.log10()))
        .collect();
    if used.len() < 2 {
        return Err(Error::domain(
            "points",
            "fewer than two points inside the fit window",
        ));
    }
    let n = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
    let my = used.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = used.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = used.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

//! Term-by-term transcriptions of the typeset TS, SS-RE and SS-RD
//! expressions, kept as cross-checks for the evaluators in the parent
//! module. Plain (uncompensated) summation on purpose.

use crate::combinatorics::subset_terms;
use crate::types::SystemConfig;

fn leading(beta_k: f64, rho: f64, alpha: f64) -> f64 {
    -alpha * (-(rho - 1.0) * beta_k).exp() / (beta_k * rho + alpha)
}

pub fn ts(cfg: &SystemConfig) -> f64 {
    let rho = cfg.rho();
    let w: Vec<f64> = cfg.relays().iter().map(|r| r.composite_beta()).collect();
    let mut total = 0.0;
    for (k, r) in cfg.relays().iter().enumerate() {
        let (bk, a) = (r.composite_beta(), r.alpha_ke());
        total += leading(bk, rho, a);
        for t in subset_terms(&w, Some(k), 64).unwrap() {
            let (s, bp) = (t.sign, t.beta_prime);
            let c = bk + bp;
            let e = (-(rho - 1.0) * c).exp();
            total += s * bp * a * e / (c * (c * rho + a)) - s * bp / c - s * a * e / (c * rho + a);
        }
    }
    total
}

pub fn ss_re(cfg: &SystemConfig) -> f64 {
    let rho = cfg.rho();
    let w: Vec<f64> = cfg
        .relays()
        .iter()
        .map(|r| r.composite_beta() / r.alpha_ke())
        .collect();
    let mut total = 0.0;
    for (k, r) in cfg.relays().iter().enumerate() {
        let (bk, a) = (r.composite_beta(), r.alpha_ke());
        total += leading(bk, rho, a);
        for t in subset_terms(&w, Some(k), 64).unwrap() {
            let (s, bp) = (t.sign, t.beta_prime);
            let q = bk / a + bp;
            let c = bk + a * bp;
            total += s * bp * a * q * (-a * (rho - 1.0)).exp() / (q * (c * rho + a))
                - s * bp / q
                - s * a * (-(rho - 1.0) * c).exp() / (c * rho + a);
        }
    }
    total
}

pub fn ss_rd(cfg: &SystemConfig) -> f64 {
    let rho = cfg.rho();
    let w: Vec<f64> = cfg.relays().iter().map(|r| r.beta_kd()).collect();
    let mut total = 0.0;
    for (k, r) in cfg.relays().iter().enumerate() {
        let (bk, bkd, a) = (r.composite_beta(), r.beta_kd(), r.alpha_ke());
        total += leading(bk, rho, a);
        for t in subset_terms(&w, Some(k), 64).unwrap() {
            let (s, bp) = (t.sign, t.beta_prime);
            let c = bk + bp;
            let e = (-(rho - 1.0) * c).exp();
            total += s
                * (-bp / (bkd + bp) - a * e / (rho * c + a)
                    + a * bp * e / ((bkd + bp) * (rho * c + a)));
        }
    }
    total
}

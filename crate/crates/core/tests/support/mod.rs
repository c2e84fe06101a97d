//! Quadrature oracles written directly from the outage integrals, without
//! any inclusion-exclusion expansion.

#![allow(dead_code)]

use relaysec::{RelayLinkParams, SelectionScheme, SystemConfig};

/// `int_a^inf f` through `x = a + t / (1 - t)`.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let v = f(a + t / s) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    quadrature::integrate(g, 0.0, 1.0, tol).integral
}

/// `E_z[1 - e^{-beta_k lambda}]` with `lambda = rho (1 + z) - 1`, `z ~ Exp(alpha)`.
pub fn single_relay_integral(r: &RelayLinkParams, rho: f64) -> f64 {
    let (bk, a) = (r.composite_beta(), r.alpha_ke());
    integrate_half_line(
        |z| {
            let lambda = rho * (1.0 + z) - 1.0;
            -(-bk * lambda).exp_m1() * a * (-a * z).exp()
        },
        0.0,
        1e-14,
    )
}

/// `P(lambda > x)` for relay `r`.
fn lambda_tail(x: f64, rho: f64, alpha: f64) -> f64 {
    if x <= rho - 1.0 {
        1.0
    } else {
        (-alpha * (x + 1.0 - rho) / rho).exp()
    }
}

fn cdf(rate: f64, x: f64) -> f64 {
    -(-rate * x).exp_m1()
}

/// Integrates a per-relay density on `[0, rho-1]` and `[rho-1, inf)`
/// separately, relative to the supplied scale.
fn split_integral(f: impl Fn(f64) -> f64, rho: f64, scale: f64) -> f64 {
    let tol = 1e-13 * scale;
    let knee = rho - 1.0;
    let head = if knee > 0.0 {
        quadrature::integrate(&f, 0.0, knee, tol).integral
    } else {
        0.0
    };
    head + integrate_half_line(&f, knee, tol)
}

/// Outage of a ranking scheme from `sum_k P(k selected, k in outage)`.
pub fn ranking_integral(cfg: &SystemConfig, scheme: SelectionScheme, scale: f64) -> f64 {
    let rho = cfg.rho();
    let relays = cfg.relays();
    let mut total = 0.0;
    for (k, rk) in relays.iter().enumerate() {
        let others = || {
            relays
                .iter()
                .enumerate()
                .filter(move |&(i, _)| i != k)
                .map(|(_, r)| r)
        };
        let (bk, ak) = (rk.composite_beta(), rk.alpha_ke());
        let pk = match scheme {
            SelectionScheme::Ts => split_integral(
                |x| {
                    bk * (-bk * x).exp()
                        * others()
                            .map(|r| cdf(r.composite_beta(), x))
                            .product::<f64>()
                        * lambda_tail(x, rho, ak)
                },
                rho,
                scale,
            ),
            SelectionScheme::SsRe => split_integral(
                |x| {
                    bk * (-bk * x).exp()
                        * others()
                            .map(|r| cdf(r.composite_beta() * ak / r.alpha_ke(), x))
                            .product::<f64>()
                        * lambda_tail(x, rho, ak)
                },
                rho,
                scale,
            ),
            SelectionScheme::SsRd | SelectionScheme::SsSr => {
                let (sel, other) = if scheme == SelectionScheme::SsRd {
                    (rk.beta_kd(), rk.beta_sk())
                } else {
                    (rk.beta_sk(), rk.beta_kd())
                };
                let comp = |r: &RelayLinkParams| {
                    if scheme == SelectionScheme::SsRd {
                        r.beta_kd()
                    } else {
                        r.beta_sk()
                    }
                };
                // P(min(gamma_other, y) < lambda) = 1 - E[e^{-other lambda} 1{lambda <= y}]
                let no_outage = |y: f64| {
                    if y <= rho - 1.0 {
                        return 0.0;
                    }
                    let zmax = (y + 1.0 - rho) / rho;
                    let c = other * rho + ak;
                    (-other * (rho - 1.0)).exp() * ak / c * cdf(c, zmax)
                };
                split_integral(
                    |y| {
                        sel * (-sel * y).exp()
                            * others().map(|r| cdf(comp(r), y)).product::<f64>()
                            * (1.0 - no_outage(y))
                    },
                    rho,
                    scale,
                )
            }
            _ => panic!("not a ranking scheme: {scheme}"),
        };
        total += pk;
    }
    total
}

pub fn relay(s: f64, d: f64, a: f64) -> RelayLinkParams {
    RelayLinkParams::new(s, d, a).unwrap()
}

pub fn config(relays: &[(f64, f64, f64)], rate: f64) -> SystemConfig {
    SystemConfig::new(
        relays.iter().map(|&(s, d, a)| relay(s, d, a)).collect(),
        rate,
    )
    .unwrap()
}

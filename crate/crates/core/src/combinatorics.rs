//! Inclusion-exclusion over relay subsets.
//!
//! The CDF of the maximum of independent exponentials expands as
//!
//! ```text
//! prod_m (1 - e^{-x w_m}) = 1 + sum over non-empty subsets S of (-1)^|S| e^{-x sum_{l in S} w_l}
//! ```
//!
//! [`subset_terms`] yields one [`SignedSubsetTerm`] per non-empty subset and
//! [`signed_sum`] accumulates a function of those terms with compensated
//! summation. Subsets are visited in ascending bitmask order so sums are
//! reproducible bit for bit.

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Default cap on the number of enumerated indices.
pub const DEFAULT_MAX_RELAYS: usize = 20;

/// One subset of the inclusion-exclusion expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedSubsetTerm {
    /// `(-1)^cardinality`.
    pub sign: f64,
    /// Sum of the weights of the subset members, rounded.
    pub beta_prime: f64,
    /// Rounding error of `beta_prime`; `beta_prime + beta_prime_lo` is the
    /// sum to double-double precision.
    pub beta_prime_lo: f64,
    pub cardinality: usize,
}

/// Iterator over all non-empty subsets of the effective index set.
#[derive(Debug, Clone)]
pub struct SubsetTerms {
    weights: Vec<f64>,
    mask: u64,
    end: u64,
}

impl Iterator for SubsetTerms {
    type Item = SignedSubsetTerm;

    fn next(&mut self) -> Option<SignedSubsetTerm> {
        if self.mask >= self.end {
            return None;
        }
        let mask = self.mask;
        self.mask += 1;

        let mut sum = DoubleDouble::ZERO;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            sum = sum + self.weights[i];
            bits &= bits - 1;
        }
        let cardinality = mask.count_ones() as usize;
        Some(SignedSubsetTerm {
            sign: if cardinality.is_multiple_of(2) {
                1.0
            } else {
                -1.0
            },
            beta_prime: sum.hi,
            beta_prime_lo: sum.lo,
            cardinality,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.mask) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetTerms {}

impl SignedSubsetTerm {
    pub fn beta_prime_dd(&self) -> DoubleDouble {
        DoubleDouble {
            hi: self.beta_prime,
            lo: self.beta_prime_lo,
        }
    }
}

/// Enumerates the non-empty subsets of `weights`, skipping index `exclude`
/// (zero-based) when given.
///
/// Fails when the number of effective indices exceeds `max_relays`.
pub fn subset_terms(
    weights: &[f64],
    exclude: Option<usize>,
    max_relays: usize,
) -> Result<SubsetTerms> {
    if weights.len() > max_relays {
        return Err(Error::TooManyRelays {
            count: weights.len(),
            cap: max_relays,
        });
    }
    if weights.len() >= 64 {
        return Err(Error::TooManyRelays {
            count: weights.len(),
            cap: 63,
        });
    }
    if let Some(k) = exclude {
        if k >= weights.len() {
            return Err(Error::RelayIndex {
                index: k,
                count: weights.len(),
            });
        }
    }
    let kept: Vec<f64> = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(_, &w)| w)
        .collect();
    Ok(SubsetTerms {
        end: 1u64 << kept.len(),
        weights: kept,
        mask: 1,
    })
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of `sign * f(term)` over `terms`.
pub fn signed_sum<I, F>(terms: I, mut f: F) -> Result<f64>
where
    I: IntoIterator<Item = SignedSubsetTerm>,
    F: FnMut(&SignedSubsetTerm) -> f64,
{
    let mut acc = CompensatedSum::new();
    for term in terms {
        let v = f(&term);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "signed subset sum",
            });
        }
        acc.add(term.sign * v);
    }
    Ok(acc.value())
}

/// [`signed_sum`] with double-double terms and accumulator.
pub fn signed_sum_dd<I, F>(terms: I, mut f: F) -> Result<DoubleDouble>
where
    I: IntoIterator<Item = SignedSubsetTerm>,
    F: FnMut(&SignedSubsetTerm) -> DoubleDouble,
{
    let mut acc = DoubleDouble::ZERO;
    for term in terms {
        let v = f(&term);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "signed subset sum",
            });
        }
        acc = if term.sign > 0.0 { acc + v } else { acc - v };
    }
    Ok(acc)
}

/// CDF at `x >= 0` of the maximum of independent exponentials with rates
/// `weights`, by inclusion-exclusion in double-double.
pub fn max_exp_cdf(weights: &[f64], x: f64, max_relays: usize) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(
            "x",
            format!("must be finite and >= 0, got {x}"),
        ));
    }
    let terms = subset_terms(weights, None, max_relays)?;
    let sum = signed_sum_dd(terms, |t| (-(t.beta_prime_dd() * x)).exp_m1() + 1.0)?;
    Ok((sum + 1.0).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn collect(weights: &[f64], exclude: Option<usize>) -> Vec<(f64, f64, usize)> {
        subset_terms(weights, exclude, DEFAULT_MAX_RELAYS)
            .unwrap()
            .map(|t| (t.sign, t.beta_prime, t.cardinality))
            .collect()
    }

    #[test]
    fn excluding_middle_of_three() {
        let (a, c) = (0.3, 1.7);
        assert_eq!(
            collect(&[a, 5.0, c], Some(1)),
            vec![(-1.0, a, 1), (-1.0, c, 1), (1.0, a + c, 2)]
        );
    }

    #[test]
    fn excluding_the_only_index_is_empty() {
        assert!(collect(&[2.0], Some(0)).is_empty());
    }

    #[test]
    fn pair_without_exclusion() {
        let (a, b) = (0.25, 4.0);
        assert_eq!(
            collect(&[a, b], None),
            vec![(-1.0, a, 1), (-1.0, b, 1), (1.0, a + b, 2)]
        );
    }

    #[test]
    fn counting_with_signs() {
        let terms = subset_terms(&[1.0, 2.0], None, 20).unwrap();
        assert_eq!(signed_sum(terms, |_| 1.0).unwrap(), -1.0);
        let terms = subset_terms(&[1.0, 2.0], None, 20).unwrap();
        assert_eq!(
            signed_sum(terms, |t| (-0.0 * t.beta_prime).exp()).unwrap(),
            -1.0
        );
    }

    #[test]
    fn cdf_of_max_of_two_unit_exponentials() {
        let x = std::f64::consts::LN_2;
        let terms = subset_terms(&[1.0, 1.0], None, 20).unwrap();
        let cdf = 1.0 + signed_sum(terms, |t| (-x * t.beta_prime).exp()).unwrap();
        assert!((cdf - 0.25).abs() < 1e-15);
    }

    #[test]
    fn subset_sums_carry_their_rounding_error() {
        let t: Vec<_> = subset_terms(&[1.0, 1e-20], None, 20).unwrap().collect();
        assert_eq!((t[2].beta_prime, t[2].beta_prime_lo), (1.0, 1e-20));
        assert_eq!((t[2].beta_prime_dd() - 1.0).to_f64(), 1e-20);
    }

    #[test]
    fn cap_is_enforced() {
        let w = vec![1.0; 21];
        assert!(matches!(
            subset_terms(&w, None, DEFAULT_MAX_RELAYS),
            Err(Error::TooManyRelays { count: 21, cap: 20 })
        ));
        assert!(subset_terms(&w, None, 21).is_ok());
        assert!(subset_terms(&[1.0], Some(1), 20).is_err());
    }

    #[test]
    fn non_finite_terms_fail() {
        let terms = subset_terms(&[1.0], None, 20).unwrap();
        assert!(signed_sum(terms, |_| f64::NAN).is_err());
    }

    #[test]
    fn compensation_recovers_small_addends() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-17);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-14).abs() < 1e-26);
    }

    proptest! {
        #[test]
        fn term_count(n in 1usize..12, exclude in proptest::option::of(0usize..12)) {
            let w: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
            let exclude = exclude.filter(|&k| k < n);
            let count = subset_terms(&w, exclude, 20).unwrap().count();
            let eff = if exclude.is_some() { n - 1 } else { n };
            prop_assert_eq!(count, (1usize << eff) - 1);
        }

        #[test]
        fn exclusion_matches_removal(w in proptest::collection::vec(0.01f64..10.0, 1..8), k in 0usize..8) {
            let k = k % w.len();
            let mut removed = w.clone();
            removed.remove(k);
            let a: Vec<_> = subset_terms(&w, Some(k), 20).unwrap().collect();
            let b: Vec<_> = subset_terms(&removed, None, 20).unwrap().collect();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cdf_reconstruction(w in proptest::collection::vec(0.01f64..10.0, 1..=10), x in 0.0f64..3.0) {
            let brute: f64 = w.iter().map(|wi| -(-x * wi).exp_m1()).product();
            let terms = subset_terms(&w, None, 20).unwrap();
            let series = 1.0 + signed_sum(terms, |t| (-x * t.beta_prime).exp()).unwrap();
            // absolute slack covers the regime where the product underflows toward 0
            prop_assert!((series - brute).abs() <= 1e-10 * brute.abs() + 1e-13);
        }

        #[test]
        fn dd_cdf_keeps_relative_accuracy(w in proptest::collection::vec(0.1f64..10.0, 1..=10), x in 0.25f64..3.0) {
            let brute: f64 = w.iter().map(|wi| -(-x * wi).exp_m1()).product();
            let cdf = max_exp_cdf(&w, x, 20).unwrap();
            prop_assert!(((cdf - brute) / brute).abs() <= 1e-12, "{} vs {}", cdf, brute);
        }
    }
}

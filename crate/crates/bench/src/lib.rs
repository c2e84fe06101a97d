//! Fixtures shared by the benchmarks.

use relaysec::{split_total_snr, RelayLinkParams, SystemConfig};

/// `n` identical relays at total main SNR `snr_db`, equal split, with the
/// eavesdropper at 3 dB and `R_s = 1`.
pub fn iid_config(n: usize, snr_db: f64) -> SystemConfig {
    let (bs, bd) = split_total_snr(10f64.powf(snr_db / 10.0), 0.5).unwrap();
    let alpha = 10f64.powf(-0.3);
    let relay = RelayLinkParams::new(bs, bd, alpha).unwrap();
    SystemConfig::new(vec![relay; n], 1.0).unwrap()
}

/// `n` relays with distinct eavesdropper SNRs cycling through 0, 3, 6, 9 dB
/// and a 30/70 power split.
pub fn mixed_config(n: usize, snr_db: f64) -> SystemConfig {
    let (bs, bd) = split_total_snr(10f64.powf(snr_db / 10.0), 0.3).unwrap();
    let relays = (0..n)
        .map(|k| RelayLinkParams::new(bs, bd, 10f64.powf(-0.3 * (k % 4) as f64)).unwrap())
        .collect();
    SystemConfig::new(relays, 0.1).unwrap()
}

//! CSV emission and the run manifest.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spec::SweepSpec;
use crate::sweep::SweepRow;

pub const HEADER: [&str; 8] = [
    "scheme",
    "rate_rs",
    "snr_db",
    "p_closed",
    "p_mc",
    "mc_stderr",
    "p_asymp",
    "floor",
];

/// Shortest decimal that parses back to `x`, switching to exponent form for
/// very small or very large magnitudes.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.clone(),
            format_number(r.rate_rs),
            format_number(r.snr_db),
            format_number(r.p_closed),
            opt(r.p_mc),
            opt(r.mc_stderr),
            opt(r.p_asymp),
            opt(r.floor),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct RawRow {
    scheme: String,
    rate_rs: f64,
    snr_db: f64,
    p_closed: f64,
    p_mc: Option<f64>,
    mc_stderr: Option<f64>,
    p_asymp: Option<f64>,
    floor: Option<f64>,
}

/// Reads rows written by [`emit_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<RawRow>()
        .map(|row| {
            let row = row?;
            Ok(SweepRow {
                scheme: row.scheme,
                rate_rs: row.rate_rs,
                snr_db: row.snr_db,
                p_closed: row.p_closed,
                p_mc: row.p_mc,
                mc_stderr: row.mc_stderr,
                p_asymp: row.p_asymp,
                floor: row.floor,
            })
        })
        .collect()
}

/// Closed-form versus simulation agreement over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    /// Cells with a simulated value.
    pub compared: usize,
    /// Cells whose estimate has zero standard error (no outage observed, or
    /// outage on every trial); excluded from `max_z`.
    pub degenerate: usize,
    /// Largest `|p_closed - p_mc| / mc_stderr` over the remaining cells.
    pub max_z: Option<f64>,
    pub over_3: usize,
}

impl Agreement {
    pub fn of(rows: &[SweepRow]) -> Self {
        let mut a = Agreement {
            compared: 0,
            degenerate: 0,
            max_z: None,
            over_3: 0,
        };
        for r in rows {
            let (Some(p), Some(se)) = (r.p_mc, r.mc_stderr) else {
                continue;
            };
            a.compared += 1;
            if se == 0.0 {
                a.degenerate += 1;
                continue;
            }
            let z = (r.p_closed - p).abs() / se;
            if z > 3.0 {
                a.over_3 += 1;
            }
            a.max_z = Some(a.max_z.map_or(z, |m: f64| m.max(z)));
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub preset: Option<String>,
    pub spec: SweepSpec,
    pub seed: u64,
    pub mc_trials: u64,
    pub max_relays: usize,
    pub rows: usize,
    pub agreement: Agreement,
}

pub fn run_manifest(
    spec: &SweepSpec,
    preset: Option<&str>,
    max_relays: usize,
    rows: &[SweepRow],
    tool_version: &str,
) -> Manifest {
    Manifest {
        tool: "relaysec".to_string(),
        version: tool_version.to_string(),
        preset: preset.map(str::to_string),
        spec: spec.clone(),
        seed: spec.seed,
        mc_trials: spec.mc_trials,
        max_relays,
        rows: rows.len(),
        agreement: Agreement::of(rows),
    }
}

//! Sweeps, figure presets and CSV output on top of [`relaysec`].

pub mod error;
pub mod instance;
pub mod output;
pub mod spec;
pub mod sweep;

pub use error::{CliError, Result};
pub use instance::InstanceFile;
pub use output::{emit_csv, read_csv, run_manifest, Agreement, Manifest, HEADER};
pub use spec::{figure_preset, EavesLevel, FixedHop, Hop, SweepSpec, PRESETS};
pub use sweep::{cell_seed, run_sweep, SweepRow};

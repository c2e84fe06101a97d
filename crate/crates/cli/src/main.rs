use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relaysec::asymptotics::{diversity_order_estimate_window, snr_gap_db, DEFAULT_FIT_WINDOW_DB};
use relaysec::combinatorics::DEFAULT_MAX_RELAYS;
use relaysec::{
    db_to_linear, outage, rho_of_rate, simulate_schemes, Decibel, Limits, SelectionScheme,
};
use relaysec_cli::output::format_number;
use relaysec_cli::{
    emit_csv, figure_preset, read_csv, run_manifest, run_sweep, CliError, InstanceFile, Result,
    SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "relaysec",
    version,
    about = "Secrecy outage of dual-hop DF relay selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form outage of every scheme for one instance.
    Outage {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_RELAYS)]
        max_n: usize,
    },
    /// Monte Carlo estimates for one instance.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Schemes to simulate; all six when omitted.
        #[arg(long = "scheme")]
        schemes: Vec<SelectionScheme>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep described by a spec file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run one of the figure presets.
    Figure {
        #[arg(value_parser = ["fig2", "fig3", "fig4", "fig5"])]
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fit diversity orders to a sweep CSV, per scheme cell and rate.
    Diversity {
        input: PathBuf,
        /// Fit over the top this-many dB of each curve.
        #[arg(long, default_value_t = DEFAULT_FIT_WINDOW_DB)]
        window_db: f64,
        /// Fit the asymptote column instead of the closed form.
        #[arg(long)]
        asymptote: bool,
    },
    /// Extra main-channel SNR needed when the eavesdropper SNR rises.
    Gap {
        /// Eavesdropper mean SNR before, in dB.
        #[arg(long)]
        from_db: f64,
        /// Eavesdropper mean SNR after, in dB.
        #[arg(long)]
        to_db: f64,
        #[arg(long = "rate", required = true)]
        rates: Vec<f64>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json` when `--out` is set.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_RELAYS)]
    max_n: usize,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn with_output<F>(out: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush().map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn write_lines(w: &mut dyn Write, lines: &[String]) -> Result<()> {
    for l in lines {
        writeln!(w, "{l}").map_err(|e| CliError::io("<output>", e))?;
    }
    Ok(())
}

fn run(mut spec: SweepSpec, preset: Option<&str>, args: RunArgs) -> Result<()> {
    if let Some(t) = args.trials {
        spec.mc_trials = t;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    spec.validate()?;
    let rows = run_sweep(
        &spec,
        Limits {
            max_relays: args.max_n,
        },
    )?;
    with_output(args.out.as_deref(), |w| emit_csv(&rows, w))?;

    let manifest_path = args.manifest.or_else(|| {
        args.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = manifest_path {
        let m = run_manifest(&spec, preset, args.max_n, &rows, env!("CARGO_PKG_VERSION"));
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Outage { config, out, max_n } => {
            let cfg = InstanceFile::from_json(&read_text(&config)?)?.to_config()?;
            let limits = Limits { max_relays: max_n };
            let mut lines = vec!["scheme,p".to_string()];
            for s in SelectionScheme::ALL {
                let p = outage(&cfg, s, limits)?;
                lines.push(format!("{s},{}", format_number(p.p)));
            }
            with_output(out.as_deref(), |w| write_lines(w, &lines))
        }
        Command::Simulate {
            config,
            trials,
            seed,
            schemes,
            out,
        } => {
            let cfg = InstanceFile::from_json(&read_text(&config)?)?.to_config()?;
            let schemes = if schemes.is_empty() {
                SelectionScheme::ALL.to_vec()
            } else {
                schemes
            };
            for s in &schemes {
                s.check_against(&cfg)
                    .map_err(|e| CliError::config(e.to_string()))?;
            }
            let est = simulate_schemes(&cfg, &schemes, trials, seed)?;
            let mut lines = vec!["scheme,p_mc,mc_stderr,trials,seed".to_string()];
            for (s, e) in schemes.iter().zip(&est) {
                lines.push(format!(
                    "{s},{},{},{},{}",
                    format_number(e.p_hat),
                    format_number(e.std_err),
                    e.trials,
                    e.seed
                ));
            }
            with_output(out.as_deref(), |w| write_lines(w, &lines))
        }
        Command::Sweep { config, run: args } => {
            let text = read_text(&config)?;
            let spec = SweepSpec::from_json(&text)?;
            let preset = serde_json::from_str::<serde_json::Value>(&text)
                .ok()
                .and_then(|v| v.get("preset")?.as_str().map(str::to_string));
            run(spec, preset.as_deref(), args)
        }
        Command::Figure { name, run: args } => {
            let spec = figure_preset(&name)?;
            run(spec, Some(&name), args)
        }
        Command::Diversity {
            input,
            window_db,
            asymptote,
        } => {
            let file = File::open(&input).map_err(|e| CliError::io(&input, e))?;
            let rows = read_csv(file)?;
            let mut curves: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
            for r in rows {
                let p = if asymptote {
                    r.p_asymp
                } else {
                    Some(r.p_closed)
                };
                if let Some(p) = p.filter(|p| *p > 0.0) {
                    curves
                        .entry((r.scheme, format_number(r.rate_rs)))
                        .or_default()
                        .push((r.snr_db, p));
                }
            }
            let mut lines = vec!["scheme,rate_rs,diversity_order".to_string()];
            for ((scheme, rate), points) in curves {
                let d = diversity_order_estimate_window(&points, window_db)?;
                lines.push(format!("{scheme},{rate},{}", format_number(d)));
            }
            with_output(None, |w| write_lines(w, &lines))
        }
        Command::Gap {
            from_db,
            to_db,
            rates,
        } => {
            if from_db >= to_db {
                return Err(CliError::config("--to-db must exceed --from-db"));
            }
            let alpha1 = 1.0 / db_to_linear(Decibel(from_db))?;
            let alpha2 = 1.0 / db_to_linear(Decibel(to_db))?;
            let mut lines = vec!["rate_rs,gap_db".to_string()];
            for r in rates {
                let rho = rho_of_rate(r).map_err(|e| CliError::config(e.to_string()))?;
                lines.push(format!(
                    "{},{}",
                    format_number(r),
                    format_number(snr_gap_db(alpha1, alpha2, rho))
                ));
            }
            with_output(None, |w| write_lines(w, &lines))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `nclink`: design reports, KL tables, and Monte Carlo BER sweeps for the
//! noncoherent multiuser massive SIMO uplink.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use nclink_sim::config::{Scheme, SimConfig};
use nclink_sim::engine::run_ber_sweep;
use nclink_sim::output::emit_outputs;
use nclink_sim::profile::{parse_profiles, ProfileEntry};
use nclink_sim::report::{design_report, kl_table};

#[derive(Parser)]
#[command(name = "nclink", version, about = "noncoherent massive SIMO uplink toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the optimal two-slot constellation design for a profile file.
    Design(DesignArgs),
    /// Print or write the pairwise KL table for a profile's codebook.
    Kl(KlArgs),
    /// Run a BER sweep (proposed scheme unless configured otherwise).
    Ber(RunArgs),
    /// Run a baseline BER sweep (med or zf-train).
    Baseline(RunArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Profile file: one `P_dBm beta_dB` pair per line, `#` comments.
    #[arg(long)]
    profile: PathBuf,
    /// Config file supplying radio parameter overrides.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct KlArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Directory to write kl_table.csv into; prints to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Config file with `key = value` lines; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// proposed, med, or zf-train.
    #[arg(long)]
    scheme: Option<String>,
    /// Number of users K.
    #[arg(long)]
    users: Option<usize>,
    /// Comma-separated antenna counts, e.g. 16,32,64,128.
    #[arg(long = "m-list")]
    m_list: Option<String>,
    /// Users placed uniformly over a disk of this radius (meters).
    #[arg(long = "radius-m")]
    radius_m: Option<f64>,
    /// All users at this fixed distance (meters).
    #[arg(long = "distance-m")]
    distance_m: Option<f64>,
    /// Per-user transmit powers in dBm, comma separated or one for all.
    #[arg(long = "p-dbm")]
    p_dbm: Option<String>,
    /// Trial cap per antenna count.
    #[arg(long)]
    trials: Option<u64>,
    /// Stop a point once this many bit errors accumulate.
    #[arg(long = "error-target")]
    error_target: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory for results.csv, run_manifest.txt, ber_plot.py.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn read_config_file(path: &Path, cfg: &mut SimConfig) -> anyhow::Result<()> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    cfg.merge_text(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(())
}

fn build_config(args: &RunArgs, default_scheme: Scheme) -> anyhow::Result<SimConfig> {
    let mut cfg = SimConfig { scheme: default_scheme, ..SimConfig::default() };
    if let Some(path) = &args.config {
        read_config_file(path, &mut cfg)?;
    }
    let mut overrides: Vec<(&str, String)> = Vec::new();
    if let Some(v) = &args.scheme {
        overrides.push(("scheme", v.clone()));
    }
    if let Some(v) = args.users {
        overrides.push(("users", v.to_string()));
    }
    if let Some(v) = &args.m_list {
        overrides.push(("m_list", v.clone()));
    }
    if let Some(v) = args.radius_m {
        overrides.push(("radius_m", v.to_string()));
    }
    if let Some(v) = args.distance_m {
        overrides.push(("distance_m", v.to_string()));
    }
    if let Some(v) = &args.p_dbm {
        overrides.push(("p_dbm", v.clone()));
    }
    if let Some(v) = args.trials {
        overrides.push(("trials", v.to_string()));
    }
    if let Some(v) = args.error_target {
        overrides.push(("error_target", v.to_string()));
    }
    if let Some(v) = args.seed {
        overrides.push(("seed", v.to_string()));
    }
    if let Some(v) = args.workers {
        overrides.push(("workers", v.to_string()));
    }
    for (key, value) in overrides {
        cfg.apply_kv(key, &value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_entries(path: &Path) -> anyhow::Result<Vec<ProfileEntry>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_profiles(&text).with_context(|| format!("in {}", path.display()))
}

fn radio_from(config: &Option<PathBuf>) -> anyhow::Result<nclink_core::channel::RadioParams> {
    let mut cfg = SimConfig::default();
    if let Some(path) = config {
        read_config_file(path, &mut cfg)?;
    }
    Ok(cfg.radio)
}

fn run_sweep(args: &RunArgs, default_scheme: Scheme, baseline_only: bool) -> anyhow::Result<()> {
    let cfg = build_config(args, default_scheme)?;
    if baseline_only && cfg.scheme == Scheme::Proposed {
        anyhow::bail!("the baseline subcommand runs med or zf-train; use `ber` for proposed");
    }
    let records = run_ber_sweep(&cfg)?;
    for rec in &records {
        println!(
            "{} K={} M={} trials={} bits={} bit_errors={} ber={:.4e} wilson95=[{:.4e}, {:.4e}]",
            rec.scheme.name(),
            rec.users,
            rec.antennas,
            rec.trials,
            rec.bits,
            rec.bit_errors,
            rec.ber,
            rec.wilson_lo,
            rec.wilson_hi,
        );
    }
    emit_outputs(&records, &cfg, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Design(args) => {
            let entries = load_entries(&args.profile)?;
            let radio = radio_from(&args.config)?;
            print!("{}", design_report(&entries, &radio)?);
        }
        Command::Kl(args) => {
            let entries = load_entries(&args.design.profile)?;
            let radio = radio_from(&args.design.config)?;
            let table = kl_table(&entries, &radio)?;
            match &args.out {
                Some(dir) => {
                    fs::create_dir_all(dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                    let path = dir.join("kl_table.csv");
                    fs::write(&path, table)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
                None => print!("{table}"),
            }
        }
        Command::Ber(args) => run_sweep(&args, Scheme::Proposed, false)?,
        Command::Baseline(args) => run_sweep(&args, Scheme::Med, true)?,
    }
    Ok(())
}

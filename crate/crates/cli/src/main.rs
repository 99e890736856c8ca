use clap::{Args, Parser, Subcommand};
use icfs_wearsim::config::{default_config, ConfigFile, Overrides};
use icfs_wearsim::{exports, report, sweep, trace_file, HarnessError};
use icfs_wearsim_core::engine::{run, SimConfig};
use icfs_wearsim_core::PolicyKind;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Wear simulator for an intermittently powered NVM file system.
#[derive(Parser)]
#[command(name = "icfs-wearsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write its CSVs.
    Run(RunArgs),
    /// Run a pfr x cf x policy grid with replicated seeds.
    Sweep(SweepArgs),
    /// Turn prior outputs into plot-ready CSV files.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file (defaults apply when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pfr: Option<f64>,
    #[arg(long)]
    cf: Option<u32>,
    /// bl | tp | tm | bf
    #[arg(long)]
    policy: Option<PolicyKind>,
    /// Output directory (default: $ICFS_WEARSIM_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay a recorded failure trace instead of drawing outcomes.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Record the failure outcomes of this run to a trace file.
    #[arg(long)]
    record_trace: Option<PathBuf>,
    /// Keep the write buffer on for the whole run.
    #[arg(long)]
    force_buffer_active: bool,
    /// Also export the raw event log (events.csv).
    #[arg(long)]
    event_log: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file providing the base cell configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated failure rates, e.g. 0.2,0.3,0.4
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.3, 0.4])]
    pfr: Vec<f64>,
    /// Comma-separated checkpoint frequencies, e.g. 5,10,15,20
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 15, 20])]
    cf: Vec<u32>,
    /// Comma-separated policies, e.g. bl,tp,tm,bf
    #[arg(long, value_delimiter = ',', default_values_t = PolicyKind::ALL)]
    policy: Vec<PolicyKind>,
    /// Replicated runs per cell.
    #[arg(long, default_value_t = 30)]
    replicates: u32,
    /// Base seed for the per-cell seed derivation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the write buffer on for every run.
    #[arg(long)]
    force_buffer_active: bool,
    /// Output directory (default: $ICFS_WEARSIM_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding run/sweep outputs (default: the out dir).
    results_dir: Option<PathBuf>,
    /// Where the plot files go (default: the results dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("ICFS_WEARSIM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<SimConfig, HarnessError> {
    match path {
        Some(path) => ConfigFile::load(path)?.resolve(overrides),
        None => default_config(overrides),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), HarnessError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(HarnessError::io(path))
}

fn cmd_run(args: RunArgs) -> Result<(), HarnessError> {
    let overrides = Overrides {
        pfr: args.pfr,
        cf: args.cf,
        policy: args.policy,
        seed: args.seed,
        force_buffer_active: args.force_buffer_active,
        record_events: args.event_log,
        record_trace: args.record_trace.is_some(),
    };
    let mut cfg = load_config(args.config.as_deref(), &overrides)?;
    if let Some(trace_path) = &args.replay {
        cfg.replay = Some(trace_file::load(trace_path)?);
    }
    let result = run(cfg)?;

    let dir = out_dir(args.out);
    std::fs::create_dir_all(&dir).map_err(HarnessError::io(&dir))?;
    write_file(&dir, exports::SUMMARY_FILE, &exports::summary_csv(&result))?;
    write_file(&dir, exports::WEAR_FILE, &exports::wear_csv(&result))?;
    write_file(&dir, exports::DETECTOR_FILE, &exports::detector_csv(&result))?;
    write_file(&dir, exports::BUFFER_FILE, &exports::buffer_csv(&result))?;
    if args.event_log {
        write_file(&dir, exports::EVENTS_FILE, &exports::events_csv(&result))?;
    }
    if let Some(trace_path) = &args.record_trace {
        let trace = result
            .recorded_trace
            .as_ref()
            .expect("trace recording was requested");
        trace_file::save(trace, trace_path)?;
    }
    println!("{}", exports::summary_row(&result));
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), HarnessError> {
    // the base config supplies everything but the swept axes; without a
    // file, the built-in defaults are the base
    let overrides = Overrides {
        pfr: Some(args.pfr[0]),
        cf: Some(args.cf[0]),
        policy: Some(args.policy[0]),
        seed: Some(0),
        force_buffer_active: args.force_buffer_active,
        ..Overrides::default()
    };
    let base = load_config(args.config.as_deref(), &overrides)?;
    let spec = sweep::SweepSpec {
        pfr_list: args.pfr,
        cf_list: args.cf,
        policies: args.policy,
        replicates: args.replicates,
        base_seed: args.seed,
        base,
    };
    let output = sweep::run_sweep(&spec)?;

    let dir = out_dir(args.out);
    std::fs::create_dir_all(&dir).map_err(HarnessError::io(&dir))?;
    write_file(&dir, exports::RUNS_FILE, &sweep::runs_csv(&output))?;
    write_file(&dir, exports::AGGREGATE_FILE, &sweep::aggregate_csv(&output))?;
    println!(
        "{} runs over {} cells -> {}",
        output.runs.len(),
        output.cells.len(),
        dir.display()
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), HarnessError> {
    let results = args.results_dir.unwrap_or_else(|| out_dir(None));
    let out = args.out.unwrap_or_else(|| results.clone());
    let written = report::write_reports(&results, &out)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

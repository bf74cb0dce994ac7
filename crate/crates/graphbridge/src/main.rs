use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use graphbridge::server::{self, ServeOptions, DEFAULT_PORT};
use graphbridge_core::graph::{load_dataset, slice, ViewSpec};
use graphbridge_core::layout::{compute_layout, DEFAULT_ITERATIONS, DEFAULT_SEED};
use graphbridge_core::scenario::{run_scenario_file, validate};

#[derive(Parser)]
#[command(name = "graphbridge", version, about = "Drag-and-drop coordination between small-multiple graph views")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset document and list every violated invariant.
    Validate { dataset: PathBuf },
    /// Print the layout of each view as JSON.
    Layout {
        dataset: PathBuf,
        /// JSON array of view specs.
        #[arg(long)]
        views: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iterations: u32,
    },
    /// Replay a scenario and write events, frame dumps and a manifest.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the session protocol over a websocket at /ws.
    Serve {
        #[arg(long, env = server::PORT_ENV, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory of static client assets.
        #[arg(long)]
        assets: Option<PathBuf>,
        /// Directory that loadDataset paths resolve against.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { dataset } => {
            let report = validate(&dataset)?;
            print!("{report}");
            Ok(report.exit_code() as u8)
        }
        Command::Layout {
            dataset,
            views,
            seed,
            iterations,
        } => {
            let file = std::fs::File::open(&dataset).with_context(|| format!("open {}", dataset.display()))?;
            let graph = load_dataset(std::io::BufReader::new(file))?;
            let text = std::fs::read_to_string(&views).with_context(|| format!("read {}", views.display()))?;
            let specs: Vec<ViewSpec> = serde_json::from_str(&text).context("parse view specs")?;
            let mut layouts = Vec::with_capacity(specs.len());
            for spec in &specs {
                let view = slice(&graph, spec).with_context(|| format!("view {}", spec.view_id))?;
                layouts.push(compute_layout(&view, seed, iterations)?);
            }
            println!("{}", serde_json::to_string_pretty(&layouts)?);
            Ok(0)
        }
        Command::Run { scenario, out } => {
            let report = run_scenario_file(&scenario, &out)?;
            println!("{} files written to {}", report.files.len(), out.display());
            if report.exit_code != 0 {
                eprintln!("scenario stopped on an error event");
            }
            Ok(report.exit_code as u8)
        }
        Command::Serve { port, assets, data_dir } => {
            tracing_subscriber::fmt()
                .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
                .init();
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = server::bind(port).await?;
                server::serve(listener, ServeOptions { assets, data_dir }).await
            })?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

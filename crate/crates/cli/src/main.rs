use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use exsplash::verify::{dump, run, run_all_towers, Artifact, Suite, SuiteConfig, World};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Verify the exterior splash of an order-q-subplane of PG(2,q³) in its
/// Bruck-Bose representation in PG(6,q).
#[derive(Parser, Debug)]
#[command(name = "exsplash", version)]
struct Args {
    /// Order of the base field: 2, 3, 4, 5, 7, 8 or 9.
    #[arg(long)]
    q: u32,
    /// Tower token p^d:basepoly:t0,t1,t2 naming a primitive cubic over GF(q).
    #[arg(long)]
    poly: Option<String>,
    /// Suite to run; repeatable. Defaults to every suite, without the
    /// subline suites for q >= 5.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Repeat the run under every primitive polynomial and compare outcomes.
    #[arg(long)]
    all_towers: bool,
    /// Write ARTIFACT.csv; repeatable. Without --suite only the dumps are written.
    #[arg(long = "dump", value_name = "ARTIFACT")]
    dumps: Vec<String>,
    /// Directory for the dump files.
    #[arg(long, default_value = ".")]
    dump_dir: PathBuf,
    /// Record elapsed milliseconds per check (reports then differ between runs).
    #[arg(long)]
    timings: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("exsplash: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let suites = match args.suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>, _>>() {
        Ok(s) => s,
        Err(e) => return config_error(e),
    };
    let artifacts = match args.dumps.iter().map(|s| s.parse()).collect::<Result<Vec<Artifact>, _>>() {
        Ok(a) => a,
        Err(e) => return config_error(e),
    };
    let config = SuiteConfig {
        q: args.q,
        poly: args.poly.clone(),
        suites,
        jobs: args.jobs,
        timings: args.timings,
    };
    let tower = match config.tower() {
        Ok(t) => t,
        Err(e) => return config_error(e),
    };

    if !artifacts.is_empty() {
        let world = World::build(tower);
        for a in &artifacts {
            let path = args.dump_dir.join(a.file_name());
            let text = match dump(&world, *a) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{a}: {e}")),
            };
            if let Err(e) = fs::write(&path, text) {
                return config_error(format!("{}: {e}", path.display()));
            }
        }
        if config.suites.is_empty() && !args.all_towers {
            return ExitCode::SUCCESS;
        }
    }

    let report = if args.all_towers {
        run_all_towers(&config)
    } else {
        run(&config)
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &args.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text) {
                return config_error(format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

mod args;
mod run;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use graphconf::cache::ComplexCache;
use graphconf::complex::BuildOptions;
use graphconf::Error;
use serde_json::json;

use args::{Cli, Format};
use run::{Context, Report};

fn csv_text(r: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&r.header).expect("in-memory csv");
    for row in &r.rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn write_files(dir: &Path, r: &Report) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{}.json", r.command)), pretty(&r.json) + "\n")?;
    fs::write(dir.join(format!("{}.csv", r.command)), csv_text(r))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write to stdout: {e}");
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("thread pool is configured once");
    }
    let ctx = Context {
        cache: ComplexCache::from_env(cli.cache_dir.clone()),
        opts: BuildOptions {
            max_cells: cli.max_cells,
        },
    };
    match run::run(&cli.command, &ctx) {
        Ok(report) => {
            if let Some(dir) = &cli.out {
                if let Err(e) = write_files(dir, &report) {
                    eprintln!("error: cannot write reports to {}: {e}", dir.display());
                    return ExitCode::from(2);
                }
            }
            match cli.format {
                Format::Json => emit(&format!("{}\n", pretty(&report.json))),
                Format::Csv => emit(&csv_text(&report)),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed: {}", report.command);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (code, status) = match &e {
                Error::InvalidArgument(_) | Error::Io(_) | Error::Json(_) => (2, "invalid_config"),
                Error::BudgetExceeded { .. } => (3, "budget_exceeded"),
                Error::InvalidState(_) | Error::CorruptedCharacter(_) => (1, "failed"),
            };
            let mut report = json!({ "status": status, "message": e.to_string() });
            if let Error::BudgetExceeded { what, count, limit } = &e {
                report["what"] = json!(what);
                report["count"] = json!(count);
                report["limit"] = json!(limit);
            }
            emit(&format!("{}\n", pretty(&report)));
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

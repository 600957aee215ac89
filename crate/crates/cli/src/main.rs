//! `qgraph`: exact eigensolutions of two δ-interacting particles on a star
//! graph, from the command line.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use serde_json::{json, Map, Value};

use commands::Outcome;
use config::{Command, Flags, Format, InvalidParams, RunConfig};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

fn run_one(cfg: &RunConfig, n: usize) -> Result<Outcome> {
    let params = cfg.params(n)?;
    match &cfg.cmd {
        Command::Basis { kind } => commands::basis(cfg, &params, kind.as_deref().unwrap_or("cbas")),
        Command::Families => Ok(commands::families(&params)),
        Command::Enumerate => Ok(commands::enumerate(cfg, &params)),
        Command::Certify => Ok(commands::certify(&params)),
        Command::Check { input } => commands::check(&params, input.as_deref()),
        Command::Defects => Ok(commands::defects(&params)),
        Command::NumericCheck => commands::numeric_check(cfg, &params),
    }
}

/// Runs every `n` concurrently; results come back in `n` order.
fn run_all(cfg: &RunConfig) -> Result<Vec<(usize, Outcome)>> {
    if let [n] = cfg.n[..] {
        return Ok(vec![(n, run_one(cfg, n)?)]);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .n
            .iter()
            .map(|&n| (n, s.spawn(move || run_one(cfg, n))))
            .collect();
        handles
            .into_iter()
            .map(|(n, h)| Ok((n, h.join().expect("worker panicked")?)))
            .collect()
    })
}

fn render_json(cfg: &RunConfig, outcomes: &[(usize, Outcome)], pass: bool) -> String {
    let mut top = Map::new();
    top.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    top.insert("command".into(), json!(cfg.command));
    top.insert(
        "config".into(),
        serde_json::to_value(cfg).expect("config serializes"),
    );
    match outcomes {
        [(n, o)] => {
            top.insert("n".into(), json!(n));
            if let Value::Object(m) = &o.json {
                for (k, v) in m {
                    top.insert(k.clone(), v.clone());
                }
            }
        }
        _ => {
            let reports: Vec<Value> = outcomes
                .iter()
                .map(|(n, o)| {
                    let mut m = Map::new();
                    m.insert("n".into(), json!(n));
                    if let Value::Object(inner) = &o.json {
                        m.extend(inner.clone());
                    }
                    Value::Object(m)
                })
                .collect();
            top.insert("reports".into(), Value::Array(reports));
        }
    }
    top.insert("pass".into(), json!(pass));
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::resolve(cli.command, &cli.flags)?;
    let outcomes = run_all(&cfg)?;
    let pass = outcomes.iter().all(|(_, o)| o.pass);
    let out = match cfg.format {
        Format::Json => render_json(&cfg, &outcomes, pass),
        Format::Tsv | Format::Pretty => outcomes.iter().map(|(_, o)| o.text.as_str()).collect(),
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.as_bytes())?;
    stdout.flush()?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<InvalidParams>().is_some() => {
            eprintln!("qgraph: invalid parameters: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("qgraph: {e:#}");
            ExitCode::from(2)
        }
    }
}

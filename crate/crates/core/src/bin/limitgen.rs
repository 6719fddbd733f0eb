use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use limitgen::family::BUILTINS;
use limitgen::scenario::{demo, exit_status, preset_sweep, sweep, sweep_csv, RunConfig, SweepConfig, DEMOS, SWEEPS};
use limitgen::topology::{render_table, verdict_table};
use limitgen::{Error, Family};

#[derive(Parser)]
#[command(name = "limitgen", version, about = "Language generation and identification in the limit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated prefix lengths for the density curve.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<u64>>,
    /// Output directory.
    #[arg(long, env = "LIMITGEN_OUT", default_value = "limitgen-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one configuration and write transcript.jsonl, report.json and density.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        over: Overrides,
    },
    /// Run scenarios across horizons and seeds; writes sweep.csv.
    Sweep {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Built-in sweep (alpha-pod, alpha-weak).
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long, env = "LIMITGEN_OUT", default_value = "limitgen-out")]
        out: PathBuf,
    },
    /// Print full and partial identifiability verdicts.
    Topology {
        /// Builtin names or JSON family files; every builtin when omitted.
        families: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a named scenario (`--list` to see them).
    Demo {
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        over: Overrides,
    },
    /// Check a run or sweep configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn apply(mut cfg: RunConfig, over: &Overrides) -> RunConfig {
    if let Some(h) = over.horizon {
        cfg.horizon = h;
        cfg.checkpoints.retain(|&n| n <= h);
    }
    if let Some(s) = over.seed {
        cfg.seed = s;
    }
    if let Some(c) = &over.checkpoints {
        cfg.checkpoints = c.clone();
    }
    cfg
}

fn run_one(cfg: RunConfig, out: &Path) -> Result<(), Error> {
    let result = cfg.execute()?;
    result.write_to(out)?;
    let r = &result.report;
    println!(
        "{}: horizon {} invalid {} last_invalid {} mind_changes {} full {} stabilization {} lower_density {}",
        if cfg.name.is_empty() { "run" } else { &cfg.name },
        r.horizon,
        r.invalid_count,
        r.last_invalid_t.map_or("-".into(), |t| t.to_string()),
        r.mind_changes,
        r.full_count.map_or("n/a".into(), |n| n.to_string()),
        r.stabilization_t.map_or("-".into(), |t| t.to_string()),
        result.lower,
    );
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn load_family(arg: &str) -> Result<Family, Error> {
    if BUILTINS.contains(&arg) {
        Family::builtin(arg)
    } else {
        Family::parse(&std::fs::read_to_string(arg)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run { config, over } => RunConfig::load(&config).and_then(|c| run_one(apply(c, &over), &over.out)),
        Cmd::Demo { list: true, .. } => {
            DEMOS.iter().for_each(|d| println!("{d}"));
            Ok(())
        }
        Cmd::Demo { name: None, .. } => Err(Error::Config("give a demo name or --list".into())),
        Cmd::Demo { name: Some(name), over, .. } => {
            let out = over.out.join(&name);
            demo(&name).and_then(|c| run_one(apply(c, &over), &out))
        }
        Cmd::Sweep { config, preset, parallel, out } => {
            let cfg = match (config, preset) {
                (Some(p), _) => std::fs::read_to_string(&p).map_err(Error::from).and_then(|t| SweepConfig::from_json(&t)),
                (None, Some(name)) => preset_sweep(&name),
                (None, None) => Err(Error::Config(format!("give --config or --preset ({})", SWEEPS.join(", ")))),
            };
            cfg.and_then(|cfg| sweep(&cfg, parallel)).and_then(|rows| {
                std::fs::create_dir_all(&out)?;
                let path = out.join("sweep.csv");
                std::fs::write(&path, sweep_csv(&rows))?;
                print!("{}", sweep_csv(&rows));
                println!("wrote {}", path.display());
                match rows.iter().filter(|r| !r.ok()).count() {
                    0 => Ok(()),
                    n => Err(Error::Domain(format!("{n} sweep runs failed; see the status column"))),
                }
            })
        }
        Cmd::Topology { families, json } => {
            let names: Vec<String> =
                if families.is_empty() { BUILTINS.iter().map(|s| s.to_string()).collect() } else { families };
            names.iter().map(|n| load_family(n)).collect::<Result<Vec<_>, _>>().and_then(|fs| {
                let rows = verdict_table(&fs)?;
                if json {
                    println!("{}", serde_json::to_string_pretty(&rows).expect("verdicts serialize"));
                } else {
                    print!("{}", render_table(&rows));
                }
                Ok(())
            })
        }
        Cmd::Validate { config } => std::fs::read_to_string(&config).map_err(Error::from).and_then(|text| {
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))?;
            if value.get("scenarios").is_some() {
                let sweep = SweepConfig::from_json(&text)?;
                for c in sweep.expand()? {
                    c.validate()?;
                }
                println!("ok: sweep of {} scenarios", sweep.scenarios.len());
            } else {
                RunConfig::from_json(&text)?.validate()?;
                println!("ok");
            }
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

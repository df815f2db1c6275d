//! Command-line front end: construction, evaluation, bounds, design checks,
//! minimization, sweeps, the conjecture protocol, and certificates.
//!
//! Primary outputs go to stdout, or to `--out FILE` together with a sibling
//! `FILE.run.json` run record. Identical argv and master seed produce
//! byte-identical primary outputs; the run record (wall time) is metadata and
//! exempt from that contract. Exit codes: 0 success, 1 computation error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use framepot::bounds::{self, BoundKind, BoundReport};
use framepot::certify;
use framepot::constructions::NamedConfig;
use framepot::designs;
use framepot::optimizer::{self, OptimizerSettings, SweepResult};
use framepot::potentials::{self, PExponent};
use framepot::Configuration;

#[derive(Parser)]
#[command(name = "framepot", version, about = "Frame potential toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelChoice {
    /// |<x,y>|^p summed over ordered pairs
    Gp,
    /// largest absolute off-diagonal inner product
    Coherence,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named configuration as JSON.
    Construct {
        /// half-circle | onb-copies | onb-plus | simplex | lifted-etf |
        /// random; prefix with `sym-` to symmetrize (e.g. sym-half-circle)
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an energy of a configuration file.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// exponent; `inf` selects the coherence
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "gp")]
        kernel: KernelChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print all applicable closed-form bounds as a JSON record.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// exponent; `inf` for the coherence bound only
        #[arg(long)]
        p: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify spherical design strength of a configuration file.
    DesignCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-start minimization of the p-frame potential.
    Minimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize over an increasing exponent grid; emits CSV.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        pmin: f64,
        #[arg(long)]
        pmax: f64,
        /// number of grid points (inclusive endpoints)
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// descend the previous grid point's minimizer as an extra candidate
        #[arg(long)]
        warm_start: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fifty-trial comparison against the lifted simplex reference.
    Conjecture {
        #[arg(long)]
        d: usize,
        /// lifted block size; omitted runs every k = 1..=d
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// LP certificate for the equally spaced half-circle candidate.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// ambient dimension; the half-circle certificate is d = 2 only
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunRecord {
    command: String,
    args: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    master_seed: Option<u64>,
    outputs: Vec<String>,
    wall_time: f64,
    tool_version: String,
}

/// Default master seed: the FRAMEPOT_SEED environment variable when set,
/// otherwise 0. An explicit --seed always wins.
fn master_seed(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::env::var("FRAMEPOT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn significant(value: f64) -> String {
    format!("{value:.16e}")
}

fn require(param: Option<usize>, name: &str) -> framepot::Result<usize> {
    param.ok_or_else(|| {
        framepot::Error::InvalidParameter(format!("--{name} is required for this kind"))
    })
}

fn parse_kind(
    kind: &str,
    n: Option<usize>,
    d: Option<usize>,
    k: Option<usize>,
    seed: u64,
) -> framepot::Result<NamedConfig> {
    if let Some(base) = kind.strip_prefix("sym-") {
        return Ok(NamedConfig::SymmetrizedPair {
            base: Box::new(parse_kind(base, n, d, k, seed)?),
        });
    }
    match kind {
        "half-circle" => Ok(NamedConfig::HalfCircle {
            n: require(n, "n")?,
        }),
        "onb-copies" => Ok(NamedConfig::OnbCopies {
            d: require(d, "d")?,
            k: require(k, "k")?,
        }),
        "onb-plus" => Ok(NamedConfig::OnbPlus {
            d: require(d, "d")?,
        }),
        "simplex" => Ok(NamedConfig::Simplex {
            n: require(n, "n")?,
        }),
        "lifted-etf" => Ok(NamedConfig::LiftedEtf {
            d: require(d, "d")?,
            k: require(k, "k")?,
        }),
        "random" => Ok(NamedConfig::RandomUniform {
            n: require(n, "n")?,
            d: require(d, "d")?,
            seed,
        }),
        other => Err(framepot::Error::InvalidParameter(format!(
            "unknown kind '{other}'; see --help"
        ))),
    }
}

fn load_config(path: &PathBuf) -> framepot::Result<Configuration> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        framepot::Error::InvalidParameter(format!("cannot read {}: {e}", path.display()))
    })?;
    Configuration::from_json(&text)
}

fn settings(restarts: usize, seed: u64) -> OptimizerSettings {
    OptimizerSettings {
        restarts,
        seed,
        ..OptimizerSettings::default()
    }
}

fn bounds_record(n: usize, d: usize, p: &PExponent) -> serde_json::Value {
    let welch = bounds::welch_bound(n, d);
    let design = match p {
        PExponent::Finite(p) if p.fract() == 0.0 && *p >= 2.0 && (*p as usize) % 2 == 0 => {
            bounds::design_bound(n, d, *p as usize).ok()
        }
        _ => None,
    };
    let lifted = match p {
        PExponent::Finite(p) if n == d + 1 => {
            let (best_k, value) = (1..=d)
                .map(|k| (k, bounds::lifted_etf_value(k, *p)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
                .expect("d >= 2");
            Some(json!({
                "report": BoundReport {
                    value,
                    kind: BoundKind::LiftedEtfValue,
                    applicability: "conjectured minimum for N = d + 1".to_string(),
                },
                "k": best_k,
            }))
        }
        _ => None,
    };
    let tau = match p {
        PExponent::Finite(p) => bounds::tau_reference(d, *p),
        PExponent::Infinity => None,
    };
    json!({
        "n": n,
        "d": d,
        "p": match p {
            PExponent::Finite(v) => json!(v),
            PExponent::Infinity => json!("inf"),
        },
        "welch": welch,
        "design": design,
        "lifted_etf": lifted,
        "tau": tau,
    })
}

/// CSV rows `p,value,invariant_digest,seed` at 17 significant digits,
/// ascending in p.
fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("p,value,invariant_digest,seed\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            significant(row.p),
            significant(row.value),
            row.invariant_digest,
            row.seed
        ));
    }
    out
}

struct Execution {
    output: String,
    record_seed: Option<u64>,
}

fn execute(command: &Command) -> framepot::Result<Execution> {
    match command {
        Command::Construct {
            kind,
            n,
            d,
            k,
            seed,
            ..
        } => {
            let seed = master_seed(*seed);
            let named = parse_kind(kind, *n, *d, *k, seed)?;
            let config = named.build()?;
            let recorded = named_uses_seed(&named).then_some(seed);
            Ok(Execution {
                output: config.to_json(),
                record_seed: recorded,
            })
        }
        Command::Eval {
            config, p, kernel, ..
        } => {
            let config = load_config(config)?;
            let exponent = PExponent::parse(p)?;
            let value = match (kernel, exponent) {
                (KernelChoice::Coherence, _) | (_, PExponent::Infinity) => {
                    potentials::coherence(&config)
                }
                (KernelChoice::Gp, PExponent::Finite(p)) => potentials::fp_eval(&config, p)?.value,
            };
            Ok(Execution {
                output: significant(value),
                record_seed: None,
            })
        }
        Command::Bounds { n, d, p, .. } => {
            let exponent = PExponent::parse(p)?;
            let record = bounds_record(*n, *d, &exponent);
            Ok(Execution {
                output: serde_json::to_string_pretty(&record).expect("serializable"),
                record_seed: None,
            })
        }
        Command::DesignCheck { config, t, tol, .. } => {
            let config = load_config(config)?;
            let report = designs::design_check(&config, *t, *tol)?;
            Ok(Execution {
                output: serde_json::to_string_pretty(&report).expect("serializable"),
                record_seed: None,
            })
        }
        Command::Minimize {
            n,
            d,
            p,
            restarts,
            seed,
            ..
        } => {
            let seed = master_seed(*seed);
            let result = optimizer::minimize(*n, *d, *p, &settings(*restarts, seed))?;
            Ok(Execution {
                output: serde_json::to_string_pretty(&result).expect("serializable"),
                record_seed: Some(seed),
            })
        }
        Command::Sweep {
            n,
            d,
            pmin,
            pmax,
            steps,
            restarts,
            warm_start,
            seed,
            ..
        } => {
            if *steps < 2 || pmax <= pmin {
                return Err(framepot::Error::InvalidParameter(
                    "sweep needs steps >= 2 and pmax > pmin".into(),
                ));
            }
            let seed = master_seed(*seed);
            let grid: Vec<f64> = (0..*steps)
                .map(|i| pmin + (pmax - pmin) * i as f64 / (*steps - 1) as f64)
                .collect();
            let result = optimizer::sweep(*n, *d, &grid, &settings(*restarts, seed), *warm_start)?;
            Ok(Execution {
                output: sweep_csv(&result),
                record_seed: Some(seed),
            })
        }
        Command::Conjecture { d, k, seed, .. } => {
            let seed = master_seed(*seed);
            let ks: Vec<usize> = match k {
                Some(k) => vec![*k],
                None => (1..=*d).collect(),
            };
            let mut reports = Vec::new();
            for k in ks {
                let report = optimizer::conjecture_test(*d, k, &settings(1, seed))?;
                reports.push(json!({
                    "d": d,
                    "k": k,
                    "seed": seed,
                    "trials": report.trials,
                    "beat_count": report.beat_count,
                    "max_gap": report.max_gap,
                }));
            }
            let value = if reports.len() == 1 {
                reports.into_iter().next().expect("one report")
            } else {
                json!(reports)
            };
            Ok(Execution {
                output: serde_json::to_string_pretty(&value).expect("serializable"),
                record_seed: Some(seed),
            })
        }
        Command::Certify { n, p, d, .. } => {
            if *d != 2 {
                return Err(framepot::Error::InvalidParameter(
                    "the half-circle certificate is specific to d = 2".into(),
                ));
            }
            let run = certify::certify_half_circle(*n, *p)?;
            let value = json!({
                "n": n,
                "p": p,
                "certificate": run.certificate,
                "achieved": run.achieved,
                "gap": run.gap,
            });
            Ok(Execution {
                output: serde_json::to_string_pretty(&value).expect("serializable"),
                record_seed: None,
            })
        }
    }
}

fn named_uses_seed(named: &NamedConfig) -> bool {
    match named {
        NamedConfig::RandomUniform { .. } => true,
        NamedConfig::SymmetrizedPair { base } => named_uses_seed(base),
        _ => false,
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Construct { out, .. }
        | Command::Eval { out, .. }
        | Command::Bounds { out, .. }
        | Command::DesignCheck { out, .. }
        | Command::Minimize { out, .. }
        | Command::Sweep { out, .. }
        | Command::Conjecture { out, .. }
        | Command::Certify { out, .. } => out.as_ref(),
    }
}

fn describe(command: &Command) -> (String, BTreeMap<String, String>) {
    let mut args = BTreeMap::new();
    let mut put = |key: &str, value: String| {
        args.insert(key.to_string(), value);
    };
    let name = match command {
        Command::Construct {
            kind,
            n,
            d,
            k,
            seed,
            ..
        } => {
            put("kind", kind.clone());
            if let Some(n) = n {
                put("n", n.to_string());
            }
            if let Some(d) = d {
                put("d", d.to_string());
            }
            if let Some(k) = k {
                put("k", k.to_string());
            }
            if let Some(seed) = seed {
                put("seed", seed.to_string());
            }
            if kind.contains("random") {
                // replayability: the PRNG behind --seed, by name and family
                put("rng", "chacha8".to_string());
            }
            "construct"
        }
        Command::Eval {
            config, p, kernel, ..
        } => {
            put("config", config.display().to_string());
            put("p", p.clone());
            put(
                "kernel",
                match kernel {
                    KernelChoice::Gp => "gp".to_string(),
                    KernelChoice::Coherence => "coherence".to_string(),
                },
            );
            "eval"
        }
        Command::Bounds { n, d, p, .. } => {
            put("n", n.to_string());
            put("d", d.to_string());
            put("p", p.clone());
            "bounds"
        }
        Command::DesignCheck { config, t, tol, .. } => {
            put("config", config.display().to_string());
            put("t", t.to_string());
            put("tol", tol.to_string());
            "design-check"
        }
        Command::Minimize {
            n,
            d,
            p,
            restarts,
            seed,
            ..
        } => {
            put("n", n.to_string());
            put("d", d.to_string());
            put("p", p.to_string());
            put("restarts", restarts.to_string());
            if let Some(seed) = seed {
                put("seed", seed.to_string());
            }
            "minimize"
        }
        Command::Sweep {
            n,
            d,
            pmin,
            pmax,
            steps,
            restarts,
            warm_start,
            seed,
            ..
        } => {
            put("n", n.to_string());
            put("d", d.to_string());
            put("pmin", pmin.to_string());
            put("pmax", pmax.to_string());
            put("steps", steps.to_string());
            put("restarts", restarts.to_string());
            put("warm_start", warm_start.to_string());
            if let Some(seed) = seed {
                put("seed", seed.to_string());
            }
            "sweep"
        }
        Command::Conjecture { d, k, seed, .. } => {
            put("d", d.to_string());
            if let Some(k) = k {
                put("k", k.to_string());
            }
            if let Some(seed) = seed {
                put("seed", seed.to_string());
            }
            "conjecture"
        }
        Command::Certify { n, p, d, .. } => {
            put("n", n.to_string());
            put("p", p.to_string());
            put("d", d.to_string());
            "certify"
        }
    };
    (name.to_string(), args)
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match execute(&cli.command) {
        Ok(execution) => {
            let mut output = execution.output;
            if !output.ends_with('\n') {
                output.push('\n');
            }
            match out_path(&cli.command) {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &output) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(1);
                    }
                    let (command, args) = describe(&cli.command);
                    let record = RunRecord {
                        command,
                        args,
                        master_seed: execution.record_seed,
                        outputs: vec![path.display().to_string()],
                        wall_time: started.elapsed().as_secs_f64(),
                        tool_version: env!("CARGO_PKG_VERSION").to_string(),
                    };
                    let record_path = format!("{}.run.json", path.display());
                    let text = serde_json::to_string_pretty(&record).expect("record serializes");
                    if let Err(e) = std::fs::write(&record_path, text) {
                        eprintln!("error: cannot write {record_path}: {e}");
                        std::process::exit(1);
                    }
                }
                None => print!("{output}"),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

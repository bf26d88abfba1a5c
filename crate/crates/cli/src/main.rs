//! `bnchain`: exact Brill-Noether structure on chains of cycles.
//!
//! Chains and divisors are given as file paths or inline JSON; shapes and
//! torsion profiles as comma lists. Output is plain text or canonical JSON
//! (sorted keys); identical inputs and seeds produce identical bytes.
//! Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bnchain_core::brill_noether::{
    self, components, dimension, expected_class, is_general_bruteforce, is_general_marked,
    is_general_unmarked,
};
use bnchain_core::chain::{ChainSpec, TorsionProfile};
use bnchain_core::divisors::{rank, standard_form, weierstrass_partition};
use bnchain_core::partitions::Partition;
use bnchain_core::random::verify_suite;
use bnchain_core::tableaux;
use bnchain_core::ChainDivisor;

#[derive(Parser)]
#[command(name = "bnchain", version, about = "Brill-Noether loci on chains of cycles")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Torsion profile of a chain.
    Profile {
        /// Chain spec: a JSON file path or inline JSON.
        chain: String,
    },
    /// Brill-Noether generality of a chain or profile.
    General(GeneralArgs),
    /// Displacement tableaux on a shape.
    Tableaux(TableauxArgs),
    /// Components and dimension of the locus of a shape on a chain.
    Locus {
        chain: String,
        /// Partition as a comma list, e.g. 2,2 (empty string for the empty
        /// partition).
        #[arg(long)]
        shape: String,
        /// Keep only maximal tori.
        #[arg(long)]
        maximal: bool,
    },
    /// Rank of a divisor on a chain.
    Rank { chain: String, divisor: String },
    /// Weierstrass partition of a divisor at the marked point.
    Wpartition { chain: String, divisor: String },
    /// Unique one-chip-per-cycle representative of a divisor class.
    StandardForm { chain: String, divisor: String },
    /// Expected class data of a shape: hook coefficient, dimension, count.
    Class {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        genus: usize,
    },
    /// Seeded random rank cross-validation against the chip-firing oracle.
    Verify {
        chain: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest divisor degree to draw (default 2g - 2).
        #[arg(long)]
        max_degree: Option<i64>,
    },
}

#[derive(Args)]
struct GeneralArgs {
    /// Chain spec (file or inline JSON); alternative to --profile.
    chain: Option<String>,
    /// Torsion orders m_2..m_g as a comma list, e.g. 2,0,0.
    #[arg(long, conflicts_with = "chain")]
    profile: Option<String>,
    /// Genus; must equal the profile length plus one.
    #[arg(long)]
    genus: Option<usize>,
    /// Check generality as a marked chain.
    #[arg(long)]
    marked: bool,
    /// Decide by exhaustive tableau search instead of the closed form.
    #[arg(long)]
    brute: bool,
}

#[derive(Args)]
struct TableauxArgs {
    /// Partition as a comma list, e.g. 2,2.
    #[arg(long)]
    shape: String,
    /// Torsion orders m_2..m_g as a comma list.
    #[arg(long)]
    profile: String,
    /// Genus; must equal the profile length plus one.
    #[arg(long)]
    genus: Option<usize>,
    /// Print only the number of tableaux.
    #[arg(long, conflicts_with = "list")]
    count: bool,
    /// List every tableau (the default).
    #[arg(long)]
    list: bool,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: 1 }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { message: e.to_string(), code: 1 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))
    }
}

fn parse_chain(arg: &str) -> Result<ChainSpec, Failure> {
    let text = read_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("chain: {e}")))
}

fn parse_divisor(arg: &str) -> Result<ChainDivisor, Failure> {
    let text = read_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("divisor: {e}")))
}

fn parse_shape(arg: &str) -> Result<Partition, Failure> {
    let trimmed = arg.trim();
    if trimmed.is_empty() || trimmed == "-" {
        return Ok(Partition::empty());
    }
    let rows = trimmed
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("shape: {e}")))?;
    Partition::new(rows).map_err(|e| Failure::usage(format!("shape: {e}")))
}

fn parse_profile(arg: &str, genus: Option<usize>) -> Result<TorsionProfile, Failure> {
    let trimmed = arg.trim();
    let interior = if trimmed.is_empty() {
        Vec::new()
    } else {
        trimmed
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::usage(format!("profile: {e}")))?
    };
    let g = interior.len() + 1;
    if let Some(given) = genus {
        if given != g {
            return Err(Failure::usage(format!(
                "genus {given} does not match profile of length {} (expected genus {g})",
                interior.len()
            )));
        }
    }
    TorsionProfile::new(g, None, interior).map_err(|e| Failure::usage(format!("profile: {e}")))
}

fn canonical(value: &Value) -> String {
    // serde_json maps are ordered; construction already sorts keys.
    serde_json::to_string(value).expect("serializable")
}

fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn worker_threads() -> usize {
    std::env::var("BNCHAIN_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Profile { chain } => {
            let spec = parse_chain(chain)?;
            let profile = spec.torsion_profile();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    canonical(&json!({
                        "genus": profile.genus(),
                        "profile": profile.interior(),
                        "m1": profile.m1(),
                    }))
                ),
                Format::Text => {
                    let interior: Vec<String> =
                        profile.interior().iter().map(|m| m.to_string()).collect();
                    println!("genus {}", profile.genus());
                    println!("profile (m_2..m_g) = ({})", interior.join(","));
                    match profile.m1() {
                        Some(m1) => println!("m_1 = {m1}"),
                        None => println!("m_1 unknown"),
                    }
                }
            }
            Ok(())
        }
        Command::General(args) => run_general(cli, args),
        Command::Tableaux(args) => run_tableaux(cli, args),
        Command::Locus { chain, shape, maximal } => {
            let spec = parse_chain(chain)?;
            let shape = parse_shape(shape)?;
            let mut comps = components(&spec, &shape);
            if *maximal {
                comps = brill_noether::maximal_components(&spec, comps);
            }
            let dim = dimension(&spec, &shape);
            let value = json!({
                "shape": to_value(&shape),
                "count": comps.len(),
                "dimension": dim,
                "components": comps.iter().map(to_value).collect::<Vec<_>>(),
            });
            match cli.format {
                Format::Json => println!("{}", canonical(&value)),
                Format::Text => {
                    match dim {
                        Some(d) => println!(
                            "{} component(s), dimension {d}",
                            comps.len()
                        ),
                        None => println!("empty locus"),
                    }
                    for c in &comps {
                        println!("{}", canonical(&to_value(c)));
                    }
                }
            }
            Ok(())
        }
        Command::Rank { chain, divisor } => {
            let spec = parse_chain(chain)?;
            let d = parse_divisor(divisor)?;
            let r = rank(&spec, &d)?;
            match cli.format {
                Format::Json => println!("{}", canonical(&json!({ "rank": r }))),
                Format::Text => println!("{r}"),
            }
            Ok(())
        }
        Command::Wpartition { chain, divisor } => {
            let spec = parse_chain(chain)?;
            let d = parse_divisor(divisor)?;
            let wp = weierstrass_partition(&spec, &d)?;
            println!("{}", canonical(&to_value(&wp)));
            Ok(())
        }
        Command::StandardForm { chain, divisor } => {
            let spec = parse_chain(chain)?;
            let d = parse_divisor(divisor)?;
            let sf = standard_form(&spec, &d)?;
            println!("{}", canonical(&to_value(&sf)));
            Ok(())
        }
        Command::Class { shape, genus } => {
            let shape = parse_shape(shape)?;
            let e = expected_class(&shape, *genus);
            println!("{}", canonical(&to_value(&e)));
            Ok(())
        }
        Command::Verify { chain, trials, seed, max_degree } => {
            let spec = parse_chain(chain)?;
            if !spec.is_metric() {
                return Err(Failure::usage(
                    "verify needs a metric chain (the oracle builds a finite model from lengths)",
                ));
            }
            let max_degree = max_degree.unwrap_or(2 * spec.genus() as i64 - 2);
            let reports = verify_suite(&spec, *trials, *seed, max_degree, worker_threads())?;
            let mismatches = reports.iter().filter(|r| !r.matched).count();
            for (i, r) in reports.iter().enumerate() {
                match cli.format {
                    Format::Json => println!("{}", canonical(&to_value(r))),
                    Format::Text => println!(
                        "trial {i}: degree {} rank_wp={} rank_oracle={} {}",
                        r.degree,
                        r.rank_wp,
                        r.rank_oracle,
                        if r.matched { "ok" } else { "MISMATCH" }
                    ),
                }
            }
            match cli.format {
                Format::Json => println!(
                    "{}",
                    canonical(&json!({
                        "trials": trials,
                        "seed": seed,
                        "mismatches": mismatches,
                    }))
                ),
                Format::Text => println!("{} trials, {mismatches} mismatch(es)", reports.len()),
            }
            if mismatches > 0 {
                return Err(Failure {
                    message: format!("{mismatches} rank mismatch(es)"),
                    code: 2,
                });
            }
            Ok(())
        }
    }
}

fn run_general(cli: &Cli, args: &GeneralArgs) -> Result<(), Failure> {
    let profile = match (&args.chain, &args.profile) {
        (Some(chain), None) => parse_chain(chain)?.torsion_profile(),
        (None, Some(p)) => parse_profile(p, args.genus)?,
        _ => return Err(Failure::usage("general needs a chain or --profile")),
    };
    let g = profile.genus() as i64;
    let mode = if args.marked { "marked" } else { "unmarked" };

    let (ok, witness_value, text_reason) = if args.brute {
        let (ok, found) = is_general_bruteforce(&profile, args.marked, 2 * profile.genus());
        let (witness, reason) = match &found {
            Some((shape, t)) => (
                json!({ "shape": to_value(shape), "tableau": to_value(t) }),
                format!(
                    "repeated-symbol tableau on {shape} found by search: {}",
                    canonical(&to_value(t))
                ),
            ),
            None => (Value::Null, String::new()),
        };
        (ok, witness, reason)
    } else {
        let (ok, found) = if args.marked {
            is_general_marked(&profile)
        } else {
            is_general_unmarked(&profile)
        };
        let (witness, reason) = match &found {
            Some(w) => {
                let i = w.cycle as i64;
                let mut reason = format!("m_{}={} <= ", w.cycle, profile.torsion(w.cycle));
                if args.marked {
                    let _ = write!(reason, "{i}");
                } else {
                    let _ = write!(reason, "min({i},{})={}", g + 1 - i, w.bound);
                }
                let _ = write!(
                    reason,
                    "; witness tableau {}",
                    canonical(&to_value(&w.tableau))
                );
                (to_value(w), reason)
            }
            None => (Value::Null, String::new()),
        };
        (ok, witness, reason)
    };

    match cli.format {
        Format::Json => println!(
            "{}",
            canonical(&json!({
                "general": ok,
                "mode": mode,
                "method": if args.brute { "brute-force" } else { "closed-form" },
                "genus": profile.genus(),
                "profile": profile.interior(),
                "witness": witness_value,
            }))
        ),
        Format::Text => {
            if ok {
                println!("general ({mode})");
            } else {
                println!("not general ({mode}): {text_reason}");
            }
        }
    }
    Ok(())
}

fn run_tableaux(cli: &Cli, args: &TableauxArgs) -> Result<(), Failure> {
    let shape = parse_shape(&args.shape)?;
    let profile = parse_profile(&args.profile, args.genus)?;
    if args.count {
        let n = tableaux::enumerate(&shape, &profile).count();
        match cli.format {
            Format::Json => println!("{}", canonical(&json!({ "count": n }))),
            Format::Text => println!("{n}"),
        }
        return Ok(());
    }
    let all: Vec<_> = tableaux::enumerate(&shape, &profile).collect();
    match cli.format {
        Format::Json => {
            let value = Value::Array(all.iter().map(to_value).collect());
            println!("{}", canonical(&value));
        }
        Format::Text => {
            for t in &all {
                println!("{}", canonical(&to_value(t.rows())));
            }
        }
    }
    Ok(())
}

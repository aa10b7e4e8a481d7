use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cohiggs::cache::{CensusCache, OracleTable};
use cohiggs::chains::{self, ChainComponent, ComponentPoincare};
use cohiggs::ffcount;
use cohiggs::higgs::{canonical_stable_higgs, spectral_smooth_r2, CharCoeffs, HiggsField, SplittingType};
use cohiggs::rank2::{self, E0Class, E0Field, E11Field, OddField, SPoint};
use cohiggs::rational::fmt_q;
use cohiggs::{Error, Result};

mod payload;

#[derive(Parser)]
#[command(name = "cohiggs", version, about = "Exact computations for co-Higgs bundles on the projective line")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Whether a splitting type carries a semistable Higgs field.
    #[command(allow_negative_numbers = true)]
    Admissible {
        #[arg(required = true)]
        splitting: Vec<i64>,
    },
    /// The canonical stable field on an admissible splitting type.
    #[command(allow_negative_numbers = true)]
    CanonicalHiggs {
        #[arg(required = true)]
        splitting: Vec<i64>,
    },
    /// Characteristic coefficients of a Higgs field given as JSON.
    Charpoly { payload: String },
    /// Smoothness of the spectral curve of rank-2 coefficients `[rho_1, rho_2]`.
    SpectralSmooth { payload: String },
    /// Rank-2 moduli descriptions.
    #[command(subcommand)]
    Rank2(Rank2Command),
    /// Fixed-point components and Betti numbers.
    #[command(subcommand)]
    Chains(ChainsCommand),
    /// Same as `chains betti`.
    #[command(allow_negative_numbers = true)]
    Betti(CensusArgs),
    /// Finite-field oracle for one component, e.g. "[0|0 0|-1]".
    Ffcount {
        component: String,
        /// Primes to count over; the last one is held out. Defaults to the
        /// first dim + 2 primes.
        #[arg(long, num_args = 1..)]
        primes: Vec<u64>,
        /// Oracle table to append the record to.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Rank2Command {
    /// Odd-degree field `{"a", "b", "c"}` on O + O(-1) to its point of S.
    ToS { payload: String },
    /// Point `{"z0", "y0", "rho"}` of S to a representative field.
    FromS { payload: String },
    /// Field `{"a", "b", "c"}` on O(1) + O(-1) to the Hitchin section.
    NormalizeEven { payload: String },
    /// Field `{"entries"}` on O + O: stable or strictly semistable.
    ClassifyE0 { payload: String },
}

#[derive(Subcommand)]
enum ChainsCommand {
    /// The census of fixed-point components.
    #[command(allow_negative_numbers = true)]
    List(CensusArgs),
    /// The Poincaré series of the moduli space.
    #[command(allow_negative_numbers = true)]
    Betti(CensusArgs),
    /// The dual component under `E -> E*(-1)`.
    Dualize { component: String },
}

#[derive(clap::Args)]
struct CensusArgs {
    rank: i64,
    degree: i64,
    /// Oracle table (JSON lines) for mixed-type components.
    #[arg(long)]
    oracle: Option<PathBuf>,
    /// Census cache file (JSON lines).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Largest rank accepted.
    #[arg(long, default_value_t = 4)]
    max_rank: i64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MissingOracle(_) => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.format) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Compact JSON with keys in declaration order.
fn render<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn run(cmd: Command, fmt: Format) -> Result<String> {
    match cmd {
        Command::Admissible { splitting } => {
            let t = SplittingType::new(splitting)?;
            let gap = t.first_violation();
            Ok(match fmt {
                Format::Json => render(&json!({ "admissible": gap.is_none(), "violation": gap.map(|(a, b)| [a, b]) })),
                Format::Text => match gap {
                    None => "true".into(),
                    Some((a, b)) => format!("false (gap {a} {b})"),
                },
            })
        }
        Command::CanonicalHiggs { splitting } => {
            let phi = canonical_stable_higgs(&SplittingType::new(splitting)?)?;
            let rho = phi.char_coeffs()?;
            Ok(render(&json!({ "field": to_json(&phi), "char_coeffs": to_json(&rho) })))
        }
        Command::Charpoly { payload } => {
            let phi: HiggsField = payload::decode(payload::higgs(payload::read(&payload)?)?)?;
            Ok(render(&json!({ "char_coeffs": to_json(&phi.char_coeffs()?) })))
        }
        Command::SpectralSmooth { payload } => {
            let rho: CharCoeffs = payload::decode(payload::char_coeffs(payload::read(&payload)?)?)?;
            let smooth = spectral_smooth_r2(&rho)?;
            Ok(match fmt {
                Format::Json => render(&json!({ "smooth": smooth })),
                Format::Text => smooth.to_string(),
            })
        }
        Command::Rank2(sub) => run_rank2(sub),
        Command::Chains(ChainsCommand::List(args)) => list(args, fmt),
        Command::Chains(ChainsCommand::Betti(args)) | Command::Betti(args) => betti(args, fmt),
        Command::Chains(ChainsCommand::Dualize { component }) => {
            let c: ChainComponent = component.parse()?;
            let dc = chains::dualize(&c);
            Ok(match fmt {
                Format::Json => render(&dc),
                Format::Text => format!("{} (degree {}, index {})", dc.key(), dc.degree(), dc.morse_index()),
            })
        }
        Command::Ffcount { component, primes, out } => {
            let c: ChainComponent = component.parse()?;
            let primes = if primes.is_empty() { ffcount::default_primes(&c)? } else { primes };
            let rec = ffcount::count_record(&c, &primes)?;
            if let Some(path) = out {
                OracleTable::append(&path, &rec)?;
            }
            Ok(match fmt {
                Format::Json => render(&rec),
                Format::Text => {
                    let counts: Vec<String> = rec.counts.iter().map(|(q, n)| format!("{q}:{n}")).collect();
                    format!("{}  {}  [{}]", rec.component, rec.poincare, counts.join(" "))
                }
            })
        }
    }
}

fn run_rank2(sub: Rank2Command) -> Result<String> {
    let v = match sub {
        Rank2Command::ToS { payload } => {
            let phi: OddField = payload::decode(payload::fields(payload::read(&payload)?, &[("a", 2), ("b", 3), ("c", 1)])?)?;
            return Ok(render(&rank2::to_s(&phi)?));
        }
        Rank2Command::FromS { payload } => {
            let p: SPoint = payload::decode(payload::read(&payload)?)?;
            return Ok(render(&rank2::from_s(&p)));
        }
        Rank2Command::NormalizeEven { payload } => {
            let phi: E11Field =
                payload::decode(payload::fields(payload::read(&payload)?, &[("a", 2), ("b", 4), ("c", 0)])?)?;
            let rho = rank2::normalize_even_e11(&phi)?;
            json!({ "rho": rho.coeffs().iter().map(fmt_q).collect::<Vec<_>>() })
        }
        Rank2Command::ClassifyE0 { payload } => {
            let phi: E0Field = payload::decode(payload::e0(payload::read(&payload)?)?)?;
            match rank2::classify_even_e0(&phi)? {
                E0Class::Stable => json!({ "class": "stable" }),
                E0Class::Semistable { graded, radicand } => json!({
                    "class": "semistable",
                    "graded": graded.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
                    "radicand": fmt_q(&radicand),
                }),
            }
        }
    };
    Ok(render(&v))
}

fn census(args: &CensusArgs) -> Result<(Vec<ChainComponent>, Option<OracleTable>)> {
    if args.rank > args.max_rank {
        return Err(Error::Unsupported(format!("rank {} above --max-rank {}", args.rank, args.max_rank)));
    }
    let mut oracle = args.oracle.as_deref().map(OracleTable::load).transpose()?;
    let comps = match &args.cache {
        Some(path) => {
            let mut cache = CensusCache::open(path)?;
            let comps = match cache.census(args.rank, args.degree) {
                Some(c) => c,
                None => {
                    let c = chains::enumerate_components(args.rank, args.degree)?;
                    cache.store_census(args.rank, args.degree, &c)?;
                    c
                }
            };
            let cached = cache.oracle();
            if !cached.is_empty() {
                let table = oracle.get_or_insert_with(OracleTable::new);
                for rec in cached.records() {
                    table.insert(rec.clone())?;
                }
            }
            comps
        }
        None => chains::enumerate_components(args.rank, args.degree)?,
    };
    Ok((comps, oracle))
}

fn list(args: CensusArgs, fmt: Format) -> Result<String> {
    let (comps, oracle) = census(&args)?;
    let resolved: Vec<(ChainComponent, Option<chains::PoincarePolynomial>)> = comps
        .into_iter()
        .map(|c| {
            let p = chains::component_poincare(&c, oracle.as_ref()).ok();
            (c, p)
        })
        .collect();
    Ok(match fmt {
        Format::Json => {
            let items: Vec<Value> = resolved
                .iter()
                .map(|(c, p)| {
                    let mut v = to_json(c);
                    if let (Some(p), ComponentPoincare::External) = (p, c.poincare()) {
                        v["poincare"] = to_json(p);
                    }
                    v
                })
                .collect();
            render(&Value::Array(items))
        }
        Format::Text => resolved
            .iter()
            .map(|(c, p)| {
                let p = p.as_ref().map_or_else(|| "external".to_string(), |p| p.to_string());
                format!("{:?} {:<16} index {:>2}  {}", c.shape().rtype, c.key(), c.morse_index(), p)
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn betti(args: CensusArgs, fmt: Format) -> Result<String> {
    let (comps, oracle) = census(&args)?;
    let p = chains::series_of(&comps, oracle.as_ref())?;
    Ok(match fmt {
        Format::Json => render(&json!({ "r": args.rank, "d": args.degree, "poincare": to_json(&p) })),
        Format::Text => p.to_string(),
    })
}

//! `meshperm`: pattern classification, constructive avoiders, exact
//! enumeration and closed-form verification for singleton mesh patterns in
//! multidimensional permutations.
//!
//! Exit codes: 0 success, 1 domain error (e.g. an unavoidable pattern given
//! to `avoider`), 2 usage error, 3 enumeration budget exceeded.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cache::{Cache, TableJson};
use meshperm::construct::{
    build_avoider, one_occurrence_perm_to_string, string_to_one_occurrence_perm,
    witness_n_occurrences,
};
use meshperm::enumerate::{
    distribution_marked, distribution_mesh, distribution_smp, hyperplane_reduction_count,
    projective_lift_check, DistributionTable, EnumOptions,
};
use meshperm::occurrence::{MarkedSmp, MeshPattern};
use meshperm::pattern::{format_smp, parse_smp};
use meshperm::rank::Rank;
use meshperm::series::{
    case_formula, case_pattern, f3d_polynomial, plus_antipodal_pattern, plus_antipodal_series,
    reconcile, smmp_avoider_count, ReconcileReport, SeriesQ,
};
use meshperm::{MultiPerm, Smp};

#[derive(Parser)]
#[command(
    name = "meshperm",
    version,
    about = "Exact avoidability, construction and enumeration for singleton mesh patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Maximum number of elementary occurrence checks for enumeration.
    #[arg(long, global = true, default_value_t = 1_000_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true,
          value_parser = clap::value_parser!(u64).range(1..=1024))]
    workers: Option<u64>,
    /// Directory for the distribution cache; the MESHPERM_CACHE environment
    /// variable overrides this flag.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Smp,
    Mesh,
    Marked,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceMode {
    Projective,
    Hyperplane,
}

#[derive(Args)]
struct PatternArgs {
    /// Pattern text over {+,-,*}, e.g. "+-,-+"; pass "" with --d for the
    /// empty pattern.
    #[arg(short = 'p', long, allow_hyphen_values = true)]
    pattern: String,
    /// Dimension; required only when the pattern text is empty.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Pattern in the kind's own syntax: SMP text, marked text like
    /// "++:#,--:2", or mesh-pattern JSON.
    #[arg(short = 'p', long, allow_hyphen_values = true)]
    pattern: String,
    /// Dimension; required only for an empty SMP pattern.
    #[arg(long)]
    d: Option<usize>,
    /// Permutation length to enumerate.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Kind::Smp)]
    kind: Kind,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pattern: avoidable with its rank, or strongly unavoidable.
    Classify(PatternArgs),
    /// Compute the rank of a pattern (same output as classify).
    Rank(PatternArgs),
    /// Construct a verified avoider of the given length.
    Avoider {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        length: usize,
    },
    /// Construct a permutation of the given length with exactly that many
    /// occurrences of the pattern.
    Witness {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        length: usize,
    },
    /// Inflate element --index (or every element with --all) of --perm by
    /// --sigma.
    Inflate {
        /// Base permutation in text form, e.g. "2 4 1 3; 1 2 4 3".
        #[arg(long)]
        perm: String,
        /// Permutation to insert.
        #[arg(long)]
        sigma: String,
        /// 1-based element to inflate.
        #[arg(long, conflicts_with = "all")]
        index: Option<usize>,
        /// Inflate every element.
        #[arg(long)]
        all: bool,
    },
    /// Exact occurrence distribution over S^d_n.
    Enumerate(EnumerateArgs),
    /// Alias of enumerate.
    Distribution(EnumerateArgs),
    /// Verify a closed form against enumeration. Targets: 1..5,
    /// plus-antipodal, f3d, smmp.
    Verify {
        #[arg(long)]
        case: String,
        #[arg(long)]
        d: usize,
        /// Largest length to enumerate (defaults per target).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dimension-reduction cross-checks.
    Reduce {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long, value_enum)]
        mode: ReduceMode,
        /// The direction (row) to reduce along, 1-based.
        #[arg(long)]
        direction: usize,
        #[arg(long)]
        n: usize,
    },
    /// Map a {0,1,2}-string to its one-occurrence permutation, or invert
    /// with --perm.
    Bijection {
        #[arg(long, conflicts_with = "perm")]
        string: Option<String>,
        #[arg(long)]
        perm: Option<String>,
    },
}

enum AppError {
    Usage(String),
    Domain(meshperm::Error),
    /// A verification ran to completion and found mismatches.
    VerificationFailed,
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Domain(meshperm::Error::BudgetExceeded { .. }) => 3,
            AppError::Domain(_) | AppError::VerificationFailed => 1,
        }
    }
}

impl From<meshperm::Error> for AppError {
    fn from(e: meshperm::Error) -> Self {
        AppError::Domain(e)
    }
}

type AppResult<T> = Result<T, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

/// Parse user-supplied pattern text; parse failures are usage errors.
fn parse_pattern(args: &PatternArgs) -> AppResult<Smp> {
    let p = if args.pattern.trim().is_empty() {
        let d = args
            .d
            .ok_or_else(|| usage("an empty pattern needs an explicit --d"))?;
        Smp::empty(d).map_err(|e| usage(e.to_string()))?
    } else {
        parse_smp(&args.pattern).map_err(|e| usage(e.to_string()))?
    };
    if let Some(d) = args.d {
        if d != p.d() {
            return Err(usage(format!(
                "--d {d} disagrees with the pattern dimension {}",
                p.d()
            )));
        }
    }
    Ok(p)
}

fn parse_perm(text: &str) -> AppResult<MultiPerm> {
    MultiPerm::from_str(text).map_err(|e| usage(e.to_string()))
}

#[derive(Serialize)]
struct ClassifyOut {
    avoidable: bool,
    rank: Option<usize>,
}

#[derive(Serialize)]
struct MismatchOut {
    n: usize,
    q: usize,
    expected: String,
    actual: String,
}

#[derive(Serialize)]
struct VerifyOut {
    target: String,
    d: usize,
    n: usize,
    pass: bool,
    mismatches: Vec<MismatchOut>,
}

#[derive(Serialize)]
struct ReduceProjectiveOut {
    mode: &'static str,
    pattern: String,
    direction: usize,
    n: usize,
    pass: bool,
}

#[derive(Serialize)]
struct ReduceHyperplaneOut {
    mode: &'static str,
    pattern: String,
    direction: usize,
    n: usize,
    via_formula: String,
    direct: String,
    pass: bool,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn table_json(t: &DistributionTable) -> TableJson {
    TableJson {
        d: t.d,
        n: t.n,
        counts: t.counts_decimal(),
    }
}

fn emit_table(table: &TableJson, format: Format) {
    match format {
        Format::Json => print_json(table),
        Format::Csv => {
            println!("k,count");
            for (k, c) in table.counts.iter().enumerate() {
                println!("{k},{c}");
            }
        }
        Format::Text => {
            for (k, c) in table.counts.iter().enumerate() {
                println!("{k} {c}");
            }
        }
    }
}

fn enum_options(cli: &Cli) -> EnumOptions {
    EnumOptions {
        budget: cli.budget,
        workers: cli.workers.map(|w| w as usize),
    }
}

fn cache_for(cli: &Cli) -> Option<Cache> {
    let dir = std::env::var_os("MESHPERM_CACHE")
        .map(PathBuf::from)
        .or_else(|| cli.cache_dir.clone());
    dir.map(Cache::new)
}

fn run_enumerate(cli: &Cli, args: &EnumerateArgs) -> AppResult<()> {
    let opts = enum_options(cli);
    // canonical pattern text keys the cache; symmetric but distinct patterns
    // stay distinct on purpose
    let (canonical, d, kind_name): (String, usize, &str) = match args.kind {
        Kind::Smp => {
            let p = parse_pattern(&PatternArgs {
                pattern: args.pattern.clone(),
                d: args.d,
            })?;
            (format_smp(&p), p.d(), "smp")
        }
        Kind::Mesh => {
            let m: MeshPattern =
                serde_json::from_str(&args.pattern).map_err(|e| usage(e.to_string()))?;
            (
                serde_json::to_string(&m).expect("serializable"),
                m.d(),
                "mesh",
            )
        }
        Kind::Marked => {
            let m = MarkedSmp::from_str(&args.pattern).map_err(|e| usage(e.to_string()))?;
            (m.to_string(), m.d(), "marked")
        }
    };
    let cache = cache_for(cli);
    let key = Cache::key(kind_name, &canonical, d, args.n);
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key)) {
        emit_table(&hit, cli.format);
        return Ok(());
    }
    let table = match args.kind {
        Kind::Smp => {
            let p = parse_pattern(&PatternArgs {
                pattern: args.pattern.clone(),
                d: args.d,
            })?;
            distribution_smp(&p, args.n, &opts)?
        }
        Kind::Mesh => {
            let m: MeshPattern =
                serde_json::from_str(&args.pattern).map_err(|e| usage(e.to_string()))?;
            distribution_mesh(&m, args.n, &opts)?
        }
        Kind::Marked => {
            let m = MarkedSmp::from_str(&args.pattern).map_err(|e| usage(e.to_string()))?;
            distribution_marked(&m, args.n, &opts)?
        }
    };
    let json = table_json(&table);
    if let Some(c) = &cache {
        c.store(&key, &json);
    }
    emit_table(&json, cli.format);
    Ok(())
}

fn report_to_out(target: &str, d: usize, n: usize, report: &ReconcileReport) -> VerifyOut {
    VerifyOut {
        target: target.to_string(),
        d,
        n,
        pass: report.passed(),
        mismatches: report
            .mismatches
            .iter()
            .map(|m| MismatchOut {
                n: m.n,
                q: m.q_power,
                expected: m.expected.to_string(),
                actual: m.actual.to_string(),
            })
            .collect(),
    }
}

fn verify_series_against_pattern(
    target: &str,
    formula: &SeriesQ,
    pattern: &Smp,
    d: usize,
    max_n: usize,
    opts: &EnumOptions,
) -> AppResult<VerifyOut> {
    let tables: Vec<DistributionTable> = (0..=max_n)
        .map(|n| distribution_smp(pattern, n, opts))
        .collect::<meshperm::Result<_>>()?;
    let report = reconcile(formula, &tables)?;
    Ok(report_to_out(target, d, max_n, &report))
}

fn run_verify(cli: &Cli, case: &str, d: usize, n: Option<usize>) -> AppResult<()> {
    let opts = enum_options(cli);
    let out = match case {
        "1" | "2" | "3" | "4" | "5" => {
            let id: usize = case.parse().expect("single digit");
            let max_n = n.unwrap_or(4);
            let formula = case_formula(id, d, max_n)?;
            let pattern = case_pattern(id, d)?;
            verify_series_against_pattern(
                &format!("case-{id}"),
                &formula,
                &pattern,
                d,
                max_n,
                &opts,
            )?
        }
        "plus-antipodal" => {
            let max_n = n.unwrap_or(4);
            let (_, f) = plus_antipodal_series(d, max_n);
            let pattern = plus_antipodal_pattern(d)?;
            verify_series_against_pattern("plus-antipodal", &f, &pattern, d, max_n, &opts)?
        }
        "f3d" => {
            let table = distribution_mesh(&MeshPattern::ascending_pair(d)?, 3, &opts)?;
            let poly = f3d_polynomial(d);
            let mut mismatches = Vec::new();
            for k in 0..=3usize {
                let actual = table
                    .counts
                    .get(k)
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "0".into());
                let expected = poly.coeff(k).to_string();
                if expected != actual {
                    mismatches.push(MismatchOut {
                        n: 3,
                        q: k,
                        expected,
                        actual,
                    });
                }
            }
            VerifyOut {
                target: "f3d".into(),
                d,
                n: 3,
                pass: mismatches.is_empty(),
                mismatches,
            }
        }
        "smmp" => {
            let table = distribution_marked(&MarkedSmp::all_plus_at_least(d, 1)?, 3, &opts)?;
            let expected = smmp_avoider_count(d).to_string();
            let actual = table.avoiders().to_string();
            let pass = expected == actual;
            VerifyOut {
                target: "smmp".into(),
                d,
                n: 3,
                pass,
                mismatches: if pass {
                    vec![]
                } else {
                    vec![MismatchOut {
                        n: 3,
                        q: 0,
                        expected,
                        actual,
                    }]
                },
            }
        }
        other => return Err(usage(format!("unknown verify target {other:?}"))),
    };
    let pass = out.pass;
    print_json(&out);
    if pass {
        Ok(())
    } else {
        Err(AppError::VerificationFailed)
    }
}

fn run(cli: &Cli) -> AppResult<()> {
    match &cli.command {
        Command::Classify(args) | Command::Rank(args) => {
            let p = parse_pattern(args)?;
            let out = match meshperm::rank::rank(&p)? {
                Rank::Finite(r) => ClassifyOut {
                    avoidable: true,
                    rank: Some(r),
                },
                Rank::Infinite => ClassifyOut {
                    avoidable: false,
                    rank: None,
                },
            };
            print_json(&out);
            Ok(())
        }
        Command::Avoider { pattern, length } => {
            let p = parse_pattern(pattern)?;
            println!("{}", build_avoider(&p, *length)?);
            Ok(())
        }
        Command::Witness { pattern, length } => {
            let p = parse_pattern(pattern)?;
            println!("{}", witness_n_occurrences(&p, *length)?);
            Ok(())
        }
        Command::Inflate {
            perm,
            sigma,
            index,
            all,
        } => {
            let base = parse_perm(perm)?;
            let sigma = parse_perm(sigma)?;
            let result = match (index, all) {
                (Some(i), false) => base.inflate(*i, &sigma)?,
                (None, true) => base.inflate_all(&sigma)?,
                _ => return Err(usage("pass exactly one of --index or --all")),
            };
            println!("{result}");
            Ok(())
        }
        Command::Enumerate(args) | Command::Distribution(args) => run_enumerate(cli, args),
        Command::Verify { case, d, n } => run_verify(cli, case, *d, *n),
        Command::Reduce {
            pattern,
            mode,
            direction,
            n,
        } => {
            let p = parse_pattern(pattern)?;
            let opts = enum_options(cli);
            match mode {
                ReduceMode::Projective => {
                    let pass = projective_lift_check(&p, *direction, *n, &opts)?;
                    print_json(&ReduceProjectiveOut {
                        mode: "projective",
                        pattern: format_smp(&p),
                        direction: *direction,
                        n: *n,
                        pass,
                    });
                    if pass {
                        Ok(())
                    } else {
                        Err(AppError::VerificationFailed)
                    }
                }
                ReduceMode::Hyperplane => {
                    let (via_formula, direct) =
                        hyperplane_reduction_count(&p, *direction, *n, &opts)?;
                    let pass = via_formula == direct;
                    print_json(&ReduceHyperplaneOut {
                        mode: "hyperplane",
                        pattern: format_smp(&p),
                        direction: *direction,
                        n: *n,
                        via_formula: via_formula.to_string(),
                        direct: direct.to_string(),
                        pass,
                    });
                    if pass {
                        Ok(())
                    } else {
                        Err(AppError::VerificationFailed)
                    }
                }
            }
        }
        Command::Bijection { string, perm } => match (string, perm) {
            (Some(s), None) => {
                println!("{}", string_to_one_occurrence_perm(s)?);
                Ok(())
            }
            (None, Some(p)) => {
                let mp = parse_perm(p)?;
                println!("{}", one_occurrence_perm_to_string(&mp)?);
                Ok(())
            }
            _ => Err(usage("pass exactly one of --string or --perm")),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                AppError::Usage(msg) => eprintln!("error: {msg}"),
                AppError::Domain(err) => eprintln!("error: {err}"),
                AppError::VerificationFailed => eprintln!("error: verification failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

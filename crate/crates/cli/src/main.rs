//! Command-line interface for the patternex toolkit.
//!
//! Exit codes: 0 for a definitive answer (including "not contained" and
//! "no embedding"), 2 when the result is inconclusive or a search budget ran
//! out, 1 for usage, I/O, and malformed-input errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use patternex_core as core;
use patternex_core::wire::{CertificateWire, EmbeddingWire};
use patternex_core::{
    BlockStructure, BoundCheck, EmbedResult, ExOptions, Matrix01, Pattern, RelaxedCutPolicy,
    SparsityBound, TheoremParameters,
};

#[derive(Parser)]
#[command(
    name = "patternex",
    version,
    about = "Forbidden-pattern search, classification and extremal numbers for 0-1 matrices",
    disable_help_subcommand = true
)]
struct Cli {
    /// Parallelism hint for library operations (falls back to
    /// PATTERNEX_JOBS). Current operations are sequential and deterministic.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the taxonomy of a pattern: acyclicity, separability, class
    /// numbers, and the interval chromatic number of its ordered graph.
    Classify(ClassifyArgs),
    /// Decide containment of a pattern in a matrix and print a witness.
    Contains(ContainsArgs),
    /// Search for a block-respecting embedding; with a sparsity bound, run
    /// the full embed-or-densify recursion.
    Embed(EmbedArgs),
    /// Exact extremal numbers by branch-and-bound.
    Extremal(ExtremalArgs),
    /// Audit a heavy matrix: exhibit the pattern or a denser submatrix.
    Verify(VerifyArgs),
    /// Print the reduction parameters derived from a pattern.
    Params(ParamsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Tsv,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Pattern file, or @NAME for a built-in (Q1, Q2, R, S, I2, rowK).
    #[arg(short, long)]
    pattern: String,
    /// How simultaneous cuts share spanning columns in the relaxed classifier.
    #[arg(long, value_enum, default_value_t = RelaxedPolicyArg::Independent)]
    relaxed_policy: RelaxedPolicyArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RelaxedPolicyArg {
    Independent,
    Joint,
}

#[derive(Args)]
struct ContainsArgs {
    /// Host matrix file.
    #[arg(short, long)]
    matrix: String,
    /// Pattern file or @NAME.
    #[arg(short, long)]
    pattern: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct EmbedArgs {
    /// Pattern file or @NAME; its column count must equal -k.
    #[arg(short, long)]
    pattern: String,
    /// Host matrix file; its width must be divisible by -k.
    #[arg(short, long)]
    matrix: String,
    /// Number of vertical blocks.
    #[arg(short)]
    k: usize,
    /// Completeness level of the host (ones per row per block).
    #[arg(short)]
    u: usize,
    /// Sparsity exponent coefficient; with -c and -d enables the recursion.
    #[arg(long)]
    b: Option<f64>,
    /// Sparsity exponent power in (0,1).
    #[arg(long)]
    c: Option<f64>,
    /// Sparsity scale factor.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Pattern file or @NAME.
    #[arg(short, long)]
    pattern: String,
    /// Single size to solve.
    #[arg(short)]
    n: Option<usize>,
    /// Inclusive size range N1..N2 to tabulate.
    #[arg(long)]
    table: Option<String>,
    /// Node budget; exceeding it is an explicit failure, never a wrong value.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Seed for the greedy warm start.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the witness matrices in the output.
    #[arg(long)]
    witnesses: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Pattern file or @NAME; must be vertically degenerate.
    #[arg(short, long)]
    pattern: String,
    /// Square host matrix file.
    #[arg(short, long)]
    matrix: String,
    /// Override the derived exponent coefficient.
    #[arg(long)]
    b: Option<f64>,
    /// Override the derived exponent power.
    #[arg(long)]
    c: Option<f64>,
    /// Calibration constant (default 1).
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ParamsArgs {
    /// Pattern file or @NAME; must be vertically degenerate.
    #[arg(short, long)]
    pattern: String,
    /// Calibration constant (default 1).
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are definitive answers, not usage errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(EXIT_OK);
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let _jobs = resolve_jobs(cli.jobs);
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("PATTERNEX_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Classify(args) => classify(args),
        Command::Contains(args) => contains_cmd(args),
        Command::Embed(args) => embed_cmd(args),
        Command::Extremal(args) => extremal_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Params(args) => params_cmd(args),
    }
}

fn load_pattern(spec: &str) -> Result<Pattern, String> {
    if let Some(name) = spec.strip_prefix('@') {
        return core::fixtures::fixture(name)
            .ok_or_else(|| format!("unknown built-in pattern {name:?}"));
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    Pattern::parse(&text).map_err(|e| format!("{spec}: {e}"))
}

fn load_matrix(path: &str) -> Result<Matrix01, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    Matrix01::parse(&text).map_err(|e| format!("{path}: {e}"))
}

fn emit<T: Serialize>(value: &T) -> Result<(), String> {
    let json = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{json}");
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CutWire {
    cut_after: usize,
    spanning_col: Option<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyReport {
    pattern: String,
    rows: usize,
    cols: usize,
    weight: usize,
    acyclic: bool,
    /// `null` for single-row patterns, where separability is undefined.
    vertically_separable: Option<bool>,
    vertical_cut: Option<CutWire>,
    vertically_degenerate: bool,
    class_number: Option<usize>,
    relaxed_class_number: Option<usize>,
    horizontally_separable: Option<bool>,
    horizontally_degenerate: bool,
    horizontal_class_number: Option<usize>,
    relaxed_horizontal_class_number: Option<usize>,
    interval_chromatic_number: usize,
}

fn classify(args: ClassifyArgs) -> Result<u8, String> {
    let p = load_pattern(&args.pattern)?;
    let policy = match args.relaxed_policy {
        RelaxedPolicyArg::Independent => RelaxedCutPolicy::Independent,
        RelaxedPolicyArg::Joint => RelaxedCutPolicy::JointColumnBudget,
    };
    let t = p.transpose();

    let vertical_cut = if p.rows() >= 2 {
        core::vertical_separation(&p).map_err(|e| e.to_string())?
    } else {
        None
    };
    let report = ClassifyReport {
        pattern: p.to_string(),
        rows: p.rows(),
        cols: p.cols(),
        weight: p.weight(),
        acyclic: core::is_acyclic(&p),
        vertically_separable: (p.rows() >= 2).then(|| vertical_cut.is_some()),
        vertical_cut: vertical_cut.map(|cut| CutWire {
            cut_after: cut.cut_after,
            spanning_col: cut.spanning_col.map(|c| c + 1),
        }),
        vertically_degenerate: core::is_vertically_degenerate(&p),
        class_number: core::class_number(&p).map(|(s, _)| s),
        relaxed_class_number: core::relaxed_class_number_with(&p, policy),
        horizontally_separable: (t.rows() >= 2)
            .then(|| core::is_vertically_separable(&t).unwrap_or(false)),
        horizontally_degenerate: core::is_vertically_degenerate(&t),
        horizontal_class_number: core::class_number(&t).map(|(s, _)| s),
        relaxed_horizontal_class_number: core::relaxed_class_number_with(&t, policy),
        interval_chromatic_number: core::interval_chromatic_number(
            &core::pattern_to_ordered_graph(&p),
        ),
    };
    match args.format {
        Format::Text => {
            println!("pattern ({} x {}, weight {}):", report.rows, report.cols, report.weight);
            println!("{}", report.pattern);
            println!("acyclic: {}", report.acyclic);
            println!("vertically separable: {:?}", report.vertically_separable);
            println!("class number: {:?}", report.class_number);
            println!("relaxed class number: {:?}", report.relaxed_class_number);
            println!("horizontal class number: {:?}", report.horizontal_class_number);
            println!(
                "interval chromatic number: {}",
                report.interval_chromatic_number
            );
        }
        _ => emit(&report)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ContainsReport {
    contains: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding: Option<EmbeddingWire>,
}

fn contains_cmd(args: ContainsArgs) -> Result<u8, String> {
    let a = load_matrix(&args.matrix)?;
    let p = load_pattern(&args.pattern)?;
    let witness = core::contains(&a, &p);
    let report = ContainsReport {
        contains: witness.is_some(),
        embedding: witness.as_ref().map(EmbeddingWire::from),
    };
    match args.format {
        Format::Text => match &report.embedding {
            Some(e) => println!("contained: rows {:?}, cols {:?}", e.rows, e.cols),
            None => println!("not contained"),
        },
        _ => emit(&report)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase", tag = "outcome")]
enum EmbedReport {
    Embedding { embedding: EmbeddingWire },
    Absent,
    Certificate { certificate: CertificateWire },
    Inconclusive { reason: String },
}

fn embed_cmd(args: EmbedArgs) -> Result<u8, String> {
    let p = load_pattern(&args.pattern)?;
    let a = load_matrix(&args.matrix)?;
    if args.k == 0 || a.cols() % args.k != 0 {
        return Err(format!(
            "matrix width {} is not divisible into {} blocks",
            a.cols(),
            args.k
        ));
    }
    let blocks = BlockStructure::new(args.k, a.cols() / args.k).map_err(|e| e.to_string())?;

    let bound = match (args.b, args.c, args.d) {
        (None, None, None) => None,
        (Some(b), Some(c), Some(d)) => {
            Some(SparsityBound::new(b, c, d).map_err(|e| e.to_string())?)
        }
        _ => return Err("provide all of --b, --c, --d or none".into()),
    };

    let (report, code) = match bound {
        None => match core::find_block_embedding(&p, &a, &blocks).map_err(|e| e.to_string())? {
            Some(e) => (
                EmbedReport::Embedding {
                    embedding: EmbeddingWire::from(&e),
                },
                EXIT_OK,
            ),
            None => (EmbedReport::Absent, EXIT_OK),
        },
        Some(bound) => {
            let (_, tree) = core::class_number(&p)
                .ok_or("pattern is not vertically degenerate; no separation tree exists")?;
            match core::recursive_embed(&p, &tree, &a, &blocks, args.u, &bound)
                .map_err(|e| e.to_string())?
            {
                EmbedResult::Embedding(e) => (
                    EmbedReport::Embedding {
                        embedding: EmbeddingWire::from(&e),
                    },
                    EXIT_OK,
                ),
                EmbedResult::Certificate(cert) => (
                    EmbedReport::Certificate {
                        certificate: CertificateWire::from_certificate(&cert),
                    },
                    EXIT_OK,
                ),
                EmbedResult::Inconclusive(reason) => {
                    (EmbedReport::Inconclusive { reason }, EXIT_INCONCLUSIVE)
                }
            }
        }
    };
    match args.format {
        Format::Text => println!("{}", serde_json::to_string(&report).map_err(|e| e.to_string())?),
        _ => emit(&report)?,
    }
    Ok(code)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExtremalRow {
    n: usize,
    max_weight: usize,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn parse_range(spec: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| format!("range must look like N1..N2, got {spec:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("range {spec:?} is empty or starts at zero"));
    }
    Ok((lo, hi))
}

fn extremal_cmd(args: ExtremalArgs) -> Result<u8, String> {
    let p = load_pattern(&args.pattern)?;
    let opts = ExOptions {
        budget: args.budget,
        seed: args.seed,
    };
    let (lo, hi) = match (args.n, &args.table) {
        (Some(n), None) => (n, n),
        (None, Some(spec)) => parse_range(spec)?,
        _ => return Err("provide exactly one of -n or --table".into()),
    };
    let results = match core::ex_table(lo..=hi, &p, &opts) {
        Ok(results) => results,
        Err(core::Error::BudgetExceeded { budget, explored }) => {
            eprintln!("inconclusive: node budget of {budget} exhausted after {explored} nodes");
            return Ok(EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(e.to_string()),
    };
    let rows: Vec<ExtremalRow> = results
        .iter()
        .map(|r| ExtremalRow {
            n: r.n,
            max_weight: r.max_weight,
            nodes_explored: r.nodes_explored,
            witness: args.witnesses.then(|| r.witness.to_string()),
        })
        .collect();
    match args.format {
        Format::Tsv => {
            println!("n\tmaxWeight\tnodesExplored");
            for row in &rows {
                println!("{}\t{}\t{}", row.n, row.max_weight, row.nodes_explored);
            }
            if args.witnesses {
                for row in &rows {
                    if let Some(w) = &row.witness {
                        println!("# witness n={}\n{w}", row.n);
                    }
                }
            }
        }
        Format::Text => {
            for row in &rows {
                println!("ex({}) = {}", row.n, row.max_weight);
                if let Some(w) = &row.witness {
                    println!("{w}");
                }
            }
        }
        Format::Json => emit(&rows)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase", tag = "outcome")]
enum VerifyReport {
    Embedding { embedding: EmbeddingWire },
    Certificate { certificate: CertificateWire },
    Inconclusive { reason: String },
}

fn verify_cmd(args: VerifyArgs) -> Result<u8, String> {
    let p = load_pattern(&args.pattern)?;
    let a = load_matrix(&args.matrix)?;
    let defaults = TheoremParameters::for_pattern(&p, args.d).map_err(|e| e.to_string())?;
    let params = TheoremParameters {
        b: args.b.unwrap_or(defaults.b),
        c: args.c.unwrap_or(defaults.c),
        ..defaults
    };
    let (report, code) = match core::verify_bound(&a, &p, &params).map_err(|e| e.to_string())? {
        BoundCheck::Embedding(e) => (
            VerifyReport::Embedding {
                embedding: EmbeddingWire::from(&e),
            },
            EXIT_OK,
        ),
        BoundCheck::Certificate(cert) => (
            VerifyReport::Certificate {
                certificate: CertificateWire::from_certificate(&cert),
            },
            EXIT_OK,
        ),
        BoundCheck::Inconclusive(reason) => {
            (VerifyReport::Inconclusive { reason }, EXIT_INCONCLUSIVE)
        }
    };
    emit(&report)?;
    Ok(code)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ParamsReport {
    s: usize,
    k: usize,
    c: f64,
    b: f64,
    d: f64,
    /// `x(n) < 1/10` exactly when `log2(n)` exceeds this.
    log2_n0: f64,
}

fn params_cmd(args: ParamsArgs) -> Result<u8, String> {
    let p = load_pattern(&args.pattern)?;
    let params = TheoremParameters::for_pattern(&p, args.d).map_err(|e| e.to_string())?;
    let report = ParamsReport {
        s: params.s,
        k: params.k,
        c: params.c,
        b: params.b,
        d: params.d,
        log2_n0: params.log2_n0(),
    };
    emit(&report)?;
    Ok(EXIT_OK)
}

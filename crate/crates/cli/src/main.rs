use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use selfinj::amplify::{ComultiplicationReport, Preset, SpreadSpec};
use selfinj::families::{generate, Family, Profile, Provenance};
use selfinj::io::{functional_to_json, parse_algebra, tensor_to_json, AnyAlgebra, PairJson};
use selfinj::pipeline::{analyze, prepare, verify_algebra, verify_corpus, AnalysisReport, CorpusReport, DEFAULT_SEED};
use selfinj::scalar::{FieldSpec, GroundField};
use selfinj::FinDimAlgebra;

/// Exit status for a result that contradicts an expected theorem.
const FINDING: u8 = 2;

#[derive(Parser)]
#[command(name = "selfinj", version, about = "Structure and comultiplications of self-injective algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated algebra as JSON.
    Generate(GenerateArgs),
    /// Decompose an algebra and report its Nakayama permutation.
    Analyze(InputArgs),
    /// Build and check the comultiplication for a spread spec.
    Comul(ComulArgs),
    /// Run every check on a corpus profile or a single input.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Work over GF(p).
    #[arg(long, conflicts_with = "rational")]
    prime: Option<u64>,
    /// Work over the rationals (default).
    #[arg(long)]
    rational: bool,
}

impl FieldArgs {
    fn spec(&self) -> Result<FieldSpec> {
        match self.prime {
            Some(p) => FieldSpec::prime(p).with_context(|| format!("--prime {p}")),
            None => Ok(FieldSpec::Rationals),
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// nsy, nakayama, matrix, truncated, diagonal, group or path-a2.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Comma-separated multiplicities; for `matrix`, the size.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Matrix size.
    #[arg(long)]
    size: Option<usize>,
    /// Cyclic factor orders for `group`.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<usize>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Algebra JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComulArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Spread spec JSON file.
    #[arg(long, conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// singleton, diagonal or full.
    #[arg(long, default_value = "singleton")]
    preset: Preset,
}

#[derive(Args)]
struct VerifyArgs {
    /// small or standard; ignored when --input is given.
    #[arg(long, default_value = "small")]
    profile: Profile,
    /// Verify one algebra file instead of a corpus.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Comul(args) => cmd_comul(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_algebra(path: &Path) -> Result<(AnyAlgebra, Option<Provenance>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_algebra(&text).with_context(|| format!("parsing {}", path.display()))
}

fn family(args: &GenerateArgs) -> Result<Family> {
    let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("--family {} needs --{flag}", args.family));
    Ok(match args.family.as_str() {
        "nsy" => {
            let n = need(args.n, "n")?;
            if args.m.len() != n {
                bail!("--m must list {n} multiplicities");
            }
            Family::Nsy { n, l: need(args.l, "l")?, m: args.m.clone() }
        }
        "nakayama" => {
            let n = need(args.n, "n")?;
            Family::Nsy { n, l: need(args.l, "l")?, m: vec![1; n] }
        }
        "matrix" => {
            let size = match (args.size, args.m.as_slice()) {
                (Some(s), _) => s,
                (None, [s]) => *s,
                _ => bail!("--family matrix needs --size or a single --m"),
            };
            Family::Matrix { size }
        }
        "truncated" => Family::Truncated { l: need(args.l, "l")? },
        "diagonal" => Family::Diagonal { n: need(args.n, "n")? },
        "group" => {
            if args.factors.is_empty() {
                bail!("--family group needs --factors");
            }
            Family::Group { factors: args.factors.clone() }
        }
        "path-a2" => Family::PathA2,
        other => bail!("unknown family {other:?}"),
    })
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let prov = Provenance { family: family(args)?, field: args.field.spec()? };
    let alg = generate(&prov)?;
    write_json(&alg.to_json(Some(&prov)), args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn analysis_report<F: GroundField>(alg: &FinDimAlgebra<F>, seed: u64) -> Result<AnalysisReport> {
    Ok(analyze(alg, seed)?.report(alg))
}

fn cmd_analyze(args: &InputArgs) -> Result<ExitCode> {
    let (alg, _) = read_algebra(&args.input)?;
    let report = match &alg {
        AnyAlgebra::Rational(a) => analysis_report(a, args.seed)?,
        AnyAlgebra::Prime(a) => analysis_report(a, args.seed)?,
    };
    write_json(&report, args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ComulOutput {
    analysis: AnalysisReport,
    spec: SpreadSpec,
    /// Frobenius pair of the basic algebra.
    basic_pair: PairJson,
    report: ComultiplicationReport,
    /// Counit transported to the input basis, when one was built.
    counit: Option<Vec<String>>,
}

fn comul_typed<F: GroundField>(alg: &FinDimAlgebra<F>, args: &ComulArgs) -> Result<ComulOutput> {
    let prep = prepare(alg, args.input.seed)?;
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing spec {}", path.display()))?
        }
        None => prep.preset(args.preset),
    };
    let c = prep.comultiply(alg, &spec)?;
    Ok(ComulOutput {
        analysis: prep.analysis.report(alg),
        spec: c.spec,
        basic_pair: PairJson { epsilon: functional_to_json(&prep.pair.epsilon), y: tensor_to_json(&prep.pair.y) },
        counit: c.counit.as_ref().map(functional_to_json),
        report: c.report,
    })
}

fn cmd_comul(args: &ComulArgs) -> Result<ExitCode> {
    let (alg, _) = read_algebra(&args.input.input)?;
    let out = match &alg {
        AnyAlgebra::Rational(a) => comul_typed(a, args)?,
        AnyAlgebra::Prime(a) => comul_typed(a, args)?,
    };
    write_json(&out, args.input.output.as_deref())?;
    let r = &out.report;
    if r.consistent() {
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(w) = r.invariance_witness {
        eprintln!("finding: x is not invariant under basis element {w}");
    } else if let Some(w) = r.coassociativity_witness {
        eprintln!("finding: coassociativity fails at {w:?}");
    } else {
        eprintln!(
            "finding: counit feasible = {}, constructed = {}, bijection graphs = {:?}",
            r.counit_feasible, r.counital, r.bijection_graphs
        );
    }
    Ok(ExitCode::from(FINDING))
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let report = match &args.input {
        Some(path) => {
            let (alg, prov) = read_algebra(path)?;
            alg.validate().with_context(|| format!("checking {}", path.display()))?;
            let key = prov.as_ref().map_or_else(|| path.display().to_string(), |p| p.key());
            let entry = verify_algebra(key, prov, &alg, args.seed);
            CorpusReport {
                profile: "input".into(),
                seed: args.seed,
                passed: entry.passed,
                entries: vec![entry],
            }
        }
        None => verify_corpus(args.profile, args.seed),
    };
    for e in &report.entries {
        let specs_ok = e.specs.iter().filter(|s| s.consistent).count();
        println!(
            "{:<32} dim {:>3}  specs {:>2}/{:<2}  {}",
            e.key,
            e.dim,
            specs_ok,
            e.specs.len(),
            if e.passed { "ok" } else { "FAIL" }
        );
    }
    println!(
        "{} algebras, {} passed",
        report.entries.len(),
        report.entries.iter().filter(|e| e.passed).count()
    );
    if let Some(path) = &args.report {
        write_json(&report, Some(path))?;
    }
    match report.entries.iter().find_map(|e| e.first_failure().map(|f| (e, f))) {
        None => Ok(ExitCode::SUCCESS),
        Some((e, failure)) => {
            eprintln!("first failure: {}: {failure}", e.key);
            Ok(ExitCode::from(FINDING))
        }
    }
}

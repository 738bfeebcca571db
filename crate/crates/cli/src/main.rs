//! Command-line driver: classify an ideal's Tor-algebra class, trim chosen
//! generators and compare against the closed-form prediction, or run a batch
//! verification sweep. All output is JSON (or a plain text table for
//! `verify`); identical inputs produce byte-identical output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use trimcx::dg::{check_leibniz, reduce_mod_m, DGProduct};
use trimcx::complex::FreeComplex;
use trimcx::families::{build_family, predicted_tuple, FamilySpec, Prediction};
use trimcx::tor::{
    classify, compute_profile, homology_algebra, koszul_homology_oracle, oracle_default_dmax,
    Report, TorClass, TorProfile,
};
use trimcx::trimming::trim;
use trimcx::{FieldSpec, Polynomial};

#[derive(Parser)]
#[command(name = "trimcx", version, about = "Trimming complexes and Tor-algebra classification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the Tor algebra of R/I for a family member or an ideal file.
    Classify(ClassifyArgs),
    /// Trim generators of a family member and classify the result, with the
    /// closed-form prediction when its hypotheses hold.
    Trim(TrimArgs),
    /// Batch verification sweep over families and trim index sets.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Field characteristic (an odd prime, or 0 for the rationals).
    #[arg(long, default_value_t = trimcx::DEFAULT_PRIME)]
    char: u64,
    /// Seed for the randomized homothety-rank discriminator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the internal-degree bound of the homology oracle.
    #[arg(long)]
    dmax: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Family id, e.g. pfaffian:m=3,j=1 | jp:p=4 | jpprime:p=4.
    #[arg(long, conflicts_with = "ideal")]
    family: Option<String>,
    /// JSON ideal file: {"vars":["x1","x2","x3"],"char":32003,"generators":[...]}.
    #[arg(long)]
    ideal: Option<PathBuf>,
    /// trim-dg (resolution route, families only) or koszul-oracle.
    #[arg(long)]
    method: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TrimArgs {
    /// Family id, e.g. pfaffian:m=3,j=1 | jp:p=4 | jpprime:p=4.
    #[arg(long, conflicts_with = "ideal")]
    family: Option<String>,
    /// JSON ideal file; classified through the oracle, prediction absent.
    #[arg(long)]
    ideal: Option<PathBuf>,
    /// Comma-separated 1-based generator indices to trim, e.g. 1,3.
    #[arg(long)]
    sigma: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family id to sweep (repeatable); default sweeps pfaffian m in {2,3}
    /// (all j) and jp/jpprime p in {3,4,5}.
    #[arg(long = "family")]
    families: Vec<String>,
    /// Size of the trim index sets to sweep (1 or 2).
    #[arg(long, default_value_t = 1)]
    sigma_size: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Deserialize)]
struct IdealFile {
    vars: Vec<String>,
    #[serde(rename = "char")]
    characteristic: u64,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct PredictedJson {
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    r: usize,
    class: String,
    golod_allowed: bool,
}

impl From<&Prediction> for PredictedJson {
    fn from(pr: &Prediction) -> Self {
        PredictedJson {
            m: pr.profile.m,
            n: pr.profile.n,
            p: pr.profile.p,
            q: pr.profile.q,
            r: pr.profile.r,
            class: pr.class.to_string(),
            golod_allowed: pr.golod_allowed,
        }
    }
}

#[derive(Serialize)]
struct TrimReport {
    #[serde(flatten)]
    report: Report,
    sigma: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<PredictedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

/// Input errors (exit 2) vs verification failures (exit 1).
enum CliError {
    Input(String),
    Verification(String),
}

impl From<trimcx::Error> for CliError {
    fn from(e: trimcx::Error) -> Self {
        use trimcx::Error::*;
        match e {
            Parse { .. } | Precondition(_) | IndexOutOfRange { .. } | UnsupportedInput(_)
            | Inhomogeneous { .. } | DimensionMismatch(_) | IncompatibleOperands(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Trim(a) => cmd_trim(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn field_from_char(c: u64) -> Result<FieldSpec, CliError> {
    if c == 0 {
        return Ok(FieldSpec::Rational);
    }
    if !FieldSpec::is_prime_char(c) {
        return Err(CliError::Input(format!("characteristic {c} is not prime")));
    }
    Ok(FieldSpec::Fp(c))
}

fn parse_family(s: &str) -> Result<FamilySpec, CliError> {
    s.parse::<FamilySpec>().map_err(|e| CliError::Input(e.to_string()))
}

fn parse_sigma(s: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad trim index '{part}'")))?;
        out.push(v);
    }
    Ok(out)
}

fn load_ideal(path: &PathBuf, field: FieldSpec) -> Result<Vec<Polynomial>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: IdealFile =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("ideal file: {e}")))?;
    if file.vars != ["x1", "x2", "x3"] {
        return Err(CliError::Input("ideal file must use vars [\"x1\",\"x2\",\"x3\"]".into()));
    }
    if file.characteristic != field.characteristic() {
        return Err(CliError::Input(format!(
            "ideal file characteristic {} does not match {}",
            file.characteristic,
            field.characteristic()
        )));
    }
    file.generators
        .iter()
        .map(|s| Polynomial::parse(s, field, 3).map_err(CliError::from))
        .collect()
}

fn emit(common: &CommonArgs, json: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(json)
        .map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Classify via the resolution route: homology of the reduced complex with
/// its product structure.
fn classify_resolution(
    cx: &FreeComplex,
    pr: &DGProduct,
    seed: u64,
) -> Result<(TorProfile, TorClass), CliError> {
    let h = homology_algebra(&reduce_mod_m(cx, pr))?;
    let profile = compute_profile(&h);
    let class = classify(&h, &profile, seed);
    Ok((profile, class))
}

fn oracle_classify(
    field: FieldSpec,
    gens: &[Polynomial],
    common: &CommonArgs,
) -> Result<(TorProfile, TorClass), CliError> {
    let dmax = common.dmax.unwrap_or_else(|| oracle_default_dmax(gens));
    koszul_homology_oracle(field, 3, gens, dmax, common.seed).map_err(CliError::from)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, CliError> {
    let field = field_from_char(args.common.char)?;
    let (gens, resolution, default_method) = match (&args.family, &args.ideal) {
        (Some(fspec), None) => {
            let fam = build_family(field, parse_family(fspec)?)?;
            (fam.ideal.clone(), Some((fam.complex, fam.product)), "trim-dg")
        }
        (None, Some(path)) => (load_ideal(path, field)?, None, "koszul-oracle"),
        _ => return Err(CliError::Input("provide exactly one of --family or --ideal".into())),
    };
    let method = args.method.as_deref().unwrap_or(default_method);
    let (profile, class) = match method {
        "trim-dg" => {
            let (cx, pr) = resolution.as_ref().ok_or_else(|| {
                CliError::Input("method trim-dg needs --family (no resolution for a raw ideal)".into())
            })?;
            classify_resolution(cx, pr, args.common.seed)?
        }
        "koszul-oracle" => oracle_classify(field, &gens, &args.common)?,
        other => return Err(CliError::Input(format!("unknown method '{other}'"))),
    };
    let ideal_strs: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    let report = Report::new(ideal_strs, &profile, class, method);
    emit(&args.common, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trim(args: TrimArgs) -> Result<ExitCode, CliError> {
    let field = field_from_char(args.common.char)?;
    let sigma = parse_sigma(&args.sigma)?;
    match (&args.family, &args.ideal) {
        (Some(fspec), None) => {
            let fam = build_family(field, parse_family(fspec)?)?;
            let tr = trim(&fam.complex, &fam.product, &sigma)?;
            let (profile, class) = classify_resolution(&tr.complex, &tr.product, args.common.seed)?;
            let predicted = predicted_tuple(&fam, &sigma)?;
            let agrees = predicted.as_ref().map(|pr| {
                (class == pr.class && profile == pr.profile)
                    || (pr.golod_allowed && class == TorClass::Golod)
            });
            let ideal_strs: Vec<String> = tr.generators.iter().map(|g| g.to_string()).collect();
            let report = TrimReport {
                report: Report::new(ideal_strs, &profile, class, "trim-dg"),
                sigma,
                predicted: predicted.as_ref().map(PredictedJson::from),
                agrees,
            };
            emit(&args.common, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(path)) => {
            let gens = load_ideal(path, field)?;
            let trimmed =
                trimcx::trimming::trimmed_ideal_generators(&gens, &sigma).map_err(CliError::from)?;
            let (profile, class) = oracle_classify(field, &trimmed, &args.common)?;
            let ideal_strs: Vec<String> = trimmed.iter().map(|g| g.to_string()).collect();
            let report = TrimReport {
                report: Report::new(ideal_strs, &profile, class, "koszul-oracle"),
                sigma,
                predicted: None,
                agrees: None,
            };
            emit(&args.common, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(CliError::Input("provide exactly one of --family or --ideal".into())),
    }
}

fn default_sweep() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for m in 2..=3usize {
        for j in 0..=m + 1 {
            specs.push(FamilySpec::Pfaffian { m, j });
        }
    }
    for p in 3..=5usize {
        specs.push(FamilySpec::Jp { p });
        specs.push(FamilySpec::JpPrime { p });
    }
    specs
}

fn sigma_sets(n1: usize, size: usize) -> Vec<Vec<usize>> {
    match size {
        1 => (1..=n1).map(|i| vec![i]).collect(),
        2 => {
            let mut out = Vec::new();
            for a in 1..=n1 {
                for b in a + 1..=n1 {
                    out.push(vec![a, b]);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let field = field_from_char(args.common.char)?;
    if !(1..=2).contains(&args.sigma_size) {
        return Err(CliError::Input("sigma_size must be 1 or 2".into()));
    }
    let specs: Vec<FamilySpec> = if args.families.is_empty() {
        default_sweep()
    } else {
        args.families.iter().map(|s| parse_family(s.trim())).collect::<Result<_, _>>()?
    };
    let mut failures = 0usize;
    let mut total = 0usize;
    for spec in specs {
        let fam = match build_family(field, spec) {
            Ok(f) => f,
            Err(e) => {
                println!("{spec}: FAIL build ({e})");
                failures += 1;
                continue;
            }
        };
        for sigma in sigma_sets(fam.complex.rank(1), args.sigma_size) {
            total += 1;
            match verify_instance(field, &fam.complex, &fam.product, &fam, &sigma, &args.common) {
                Ok(line) => println!("{spec} sigma={sigma:?}: {line}"),
                Err(msg) => {
                    println!("{spec} sigma={sigma:?}: FAIL {msg}");
                    failures += 1;
                }
            }
        }
    }
    println!("verified {total} instance(s), {failures} failure(s)");
    if failures > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn verify_instance(
    field: FieldSpec,
    cx: &FreeComplex,
    pr: &DGProduct,
    fam: &trimcx::families::BuiltFamily,
    sigma: &[usize],
    common: &CommonArgs,
) -> Result<String, String> {
    let tr = trim(cx, pr, sigma).map_err(|e| format!("trim ({e})"))?;
    if !tr.complex.check_complex().pass() {
        return Err("check_complex".into());
    }
    if !tr.complex.exactness_check(tr.complex.default_dmax()).acyclic() {
        return Err("exactness".into());
    }
    if !check_leibniz(&tr.complex, &tr.product).map_err(|e| e.to_string())?.pass() {
        return Err("leibniz".into());
    }
    let h = homology_algebra(&reduce_mod_m(&tr.complex, &tr.product)).map_err(|e| e.to_string())?;
    let profile = compute_profile(&h);
    let class = classify(&h, &profile, common.seed);
    let dmax = common.dmax.unwrap_or_else(|| oracle_default_dmax(&tr.generators));
    let (opr, ocl) = koszul_homology_oracle(field, 3, &tr.generators, dmax, common.seed)
        .map_err(|e| e.to_string())?;
    if profile != opr || class != ocl {
        return Err(format!("oracle disagreement ({class} vs {ocl})"));
    }
    let prediction = match predicted_tuple(fam, sigma).map_err(|e| e.to_string())? {
        None => "prediction=n/a".to_string(),
        Some(pred) => {
            let ok = (class == pred.class && profile == pred.profile)
                || (pred.golod_allowed && class == TorClass::Golod);
            if !ok {
                return Err(format!("prediction disagreement ({class} vs {})", pred.class));
            }
            "prediction=ok".to_string()
        }
    };
    Ok(format!(
        "check_complex=ok exactness=ok leibniz=ok oracle=ok {prediction} class={class}"
    ))
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use kuga_forge::checks::{fibration_identities, FibrationMeta};
use kuga_forge::corestriction::{corestriction_class, TotallyRealInput};
use kuga_forge::exactnum::{Mat, Rat};
use kuga_forge::fek::{compile_family, FekRecipe};
use kuga_forge::kuga::{
    frobenius_reduce, rat_mat_json, replicate_family, verify_family, FamilyData, PeriodJson, Skeleton, Tau,
    VerifyOptions,
};
use kuga_forge::quaternion::{classify_algebra, hilbert_symbol, prime_factors, Place};
use kuga_forge::{Error, Result, SCHEMA};

/// Exact verification toolkit for Kuga families over Shimura curves.
#[derive(Parser, Debug)]
#[command(name = "kuga-forge", version)]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled test vectors.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of seeded moduli samples.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Sample point `x,y` meaning `x + iy`; repeatable. Replaces the default samples.
    #[arg(long = "tau", global = true)]
    taus: Vec<Tau>,
    /// Unit search height for `fek-compile`.
    #[arg(long, global = true)]
    height: Option<u32>,
    /// Congruence level for `fek-compile`.
    #[arg(long, global = true)]
    level: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert symbol (a, b) at one place, or at every relevant place.
    #[command(allow_negative_numbers = true)]
    Symbol { a: Rat, b: Rat, place: Option<Place> },
    /// Ramification set of the quaternion algebra (a, b).
    #[command(allow_negative_numbers = true)]
    Classify { a: Rat, b: Rat },
    /// Compile a fake elliptic curve recipe into family data.
    FekCompile { recipe: PathBuf },
    /// Run the full verification suite on a family.
    Verify { family: PathBuf },
    /// Symplectic basis of an integral alternating Gram matrix.
    Reduce { gram: PathBuf },
    /// Period matrices of a family at the sample points.
    Period { family: PathBuf },
    /// The r-fold fiber product of a family.
    Replicate { family: PathBuf, r: usize },
    /// Corestriction class of a quaternion algebra over a totally real field.
    Cor { input: PathBuf },
    /// Numeric identities for fibration metadata.
    Checks { meta: PathBuf },
}

#[derive(Deserialize)]
struct GramDoc {
    gram: Vec<Vec<Rat>>,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut v: Value = serde_json::from_str(&text)?;
    if let Some(obj) = v.as_object_mut() {
        match obj.remove("schema") {
            None => {}
            Some(Value::String(s)) if s == SCHEMA => {}
            Some(other) => return Err(Error::InvalidInput(format!("unsupported schema {other}"))),
        }
    }
    Ok(v)
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_value(read_json(path)?)?)
}

fn read_family(path: &Path) -> Result<FamilyData> {
    FamilyData::from_json(read_json(path)?)
}

fn with_schema(doc: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    match doc {
        Value::Object(m) => out.extend(m.into_iter().filter(|(k, _)| k != "schema")),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

fn emit(doc: Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&with_schema(doc))? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn relevant_places(a: &Rat, b: &Rat) -> Result<Vec<Place>> {
    let mut primes = vec![2u64];
    for x in [a, b] {
        primes.extend(prime_factors(x.numer())?);
        primes.extend(prime_factors(x.denom())?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    Ok(places)
}

fn taus(cli: &Cli) -> Vec<Tau> {
    if cli.taus.is_empty() {
        Tau::default_samples()
    } else {
        cli.taus.clone()
    }
}

/// Runs one command; `Ok(false)` means the document records failures.
fn run(cli: &Cli) -> Result<bool> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Symbol { a, b, place: Some(p) } => {
            let s = hilbert_symbol(a, b, *p)?;
            emit(json!({"a": a, "b": b, "place": p.to_string(), "symbol": s}), out)?;
        }
        Command::Symbol { a, b, place: None } => {
            let mut symbols = Map::new();
            for p in relevant_places(a, b)? {
                symbols.insert(p.to_string(), json!(hilbert_symbol(a, b, p)?));
            }
            emit(json!({"a": a, "b": b, "symbols": symbols}), out)?;
        }
        Command::Classify { a, b } => {
            let alg = kuga_forge::quaternion::QuatAlgebra::new(a.clone(), b.clone())?;
            let ram = classify_algebra(&alg)?;
            emit(
                json!({
                    "a": a,
                    "b": b,
                    "ramification": ram,
                    "split": ram.is_split(),
                    "division": ram.is_division(),
                    "indefinite": ram.is_indefinite(),
                }),
                out,
            )?;
        }
        Command::FekCompile { recipe } => {
            let mut r: FekRecipe = read_doc(recipe)?;
            if let Some(h) = cli.height {
                r.unit_height = h;
            }
            if let Some(n) = cli.level {
                r.level = n;
            }
            emit(compile_family(&r)?.to_json(), out)?;
        }
        Command::Verify { family } => {
            let f = read_family(family)?;
            let opts = VerifyOptions { taus: taus(cli), seed: cli.seed, samples: cli.samples, ..VerifyOptions::default() };
            let outcome = verify_family(&f, &opts)?;
            let passed = outcome.report.all_passed();
            emit(
                json!({
                    "summary": outcome.summary,
                    "checks": outcome.report.checks,
                    "failures": outcome.report.failures(),
                    "all_passed": passed,
                }),
                out,
            )?;
            return Ok(passed);
        }
        Command::Reduce { gram } => {
            let doc: GramDoc = read_doc(gram)?;
            let m = Mat::from_rows(doc.gram)?;
            let basis = frobenius_reduce(&m)?;
            let mut v = serde_json::to_value(&basis)?;
            v["standard_form"] = json!(rat_mat_json(&basis.standard_form()));
            emit(v, out)?;
        }
        Command::Period { family } => {
            let skel = Skeleton::new(&read_family(family)?)?;
            let mut ok = true;
            let periods: Vec<Value> = taus(cli)
                .iter()
                .map(|t| match skel.period_matrices(&t.point()) {
                    Ok(p) => serde_json::to_value(PeriodJson::new(t, &p)).expect("serializable"),
                    Err(e) => {
                        ok = false;
                        json!({"tau": t, "error": {"kind": e.kind(), "message": e.to_string()}})
                    }
                })
                .collect();
            emit(json!({"delta": skel.delta(), "periods": periods}), out)?;
            return Ok(ok);
        }
        Command::Replicate { family, r } => {
            emit(replicate_family(&read_family(family)?, *r)?.to_json(), out)?;
        }
        Command::Cor { input } => {
            let inp: TotallyRealInput = read_doc(input)?;
            emit(serde_json::to_value(corestriction_class(&inp)?)?, out)?;
        }
        Command::Checks { meta } => {
            let m: FibrationMeta = read_doc(meta)?;
            let report = fibration_identities(&m)?;
            let passed = report.all_passed();
            emit(json!({"checks": report.checks, "failures": report.failures(), "all_passed": passed}), out)?;
            return Ok(passed);
        }
    }
    Ok(true)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KUGA_FORGE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("KUGA_FORGE_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    Ok(())
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprintln!("error: {message}");
    let doc = with_schema(json!({"error": {"kind": kind, "message": message}}));
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            return fail("Usage", first.to_string());
        }
    };
    match configure_threads().and_then(|_| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(e.kind(), e.to_string()),
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semidual_core::bundle::{bundle_field, read_chain_json, verify_bundle, write_bundle};
use semidual_core::constructions::{default_identity_order, default_order, dualizing_module};
use semidual_core::modcalc::{regular_module, residue_field_module};
use semidual_core::report::status_exit_code;
use semidual_core::series::{bass_series, infer_rational_form, poincare_series};
use semidual_core::{
    build_example, build_instance, load_bundle, Engine, ExampleSpec, Field, FieldSpec, FiniteModule, PrimeField, Rationals,
    Report, DEFAULT_PRIME,
};

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "semidual", version, about = "Semidualizing modules over tensor products of trivial extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct the example for the given exponents, verify it, and
    /// optionally write a bundle.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Bundle directory to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a bundle written by `build`.
    Verify {
        bundle: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Also write the report JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Poincaré (default) or Bass series of a module.
    Series {
        /// R, k, D, C0..Cn or B1..Bn.
        module: String,
        /// Read modules from this bundle instead of constructing them.
        #[arg(long, conflicts_with = "a")]
        bundle: Option<PathBuf>,
        #[command(flatten)]
        spec: OptSpecArgs,
        #[arg(long)]
        order: Option<usize>,
        /// Bass series instead of Poincaré series.
        #[arg(long)]
        bass: bool,
        /// Also infer a rational form.
        #[arg(long)]
        infer: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Exponents a_1,..,a_n, each at least 2.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<usize>,
    /// A prime p, or Q for the rationals.
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
}

#[derive(Args, Debug)]
struct OptSpecArgs {
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Homological bound for Ext and Tor vanishing (default 8).
    #[arg(long)]
    bound: Option<usize>,
    /// Series truncation order; overrides both per-n defaults.
    #[arg(long)]
    order: Option<usize>,
    /// Seed for randomized isomorphism tests.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    if matches!(s, "Q" | "q" | "rationals") {
        return Ok(FieldSpec::Rationals);
    }
    let p: u64 = s.parse().map_err(|_| usage(format!("--field expects a prime or Q, got {s}")))?;
    PrimeField::new(p).map_err(|e| usage(e.to_string()))?;
    Ok(FieldSpec::Prime(p))
}

fn make_spec(a: Vec<usize>, field: FieldSpec, run: &RunArgs, base: Option<&ExampleSpec>) -> Result<ExampleSpec, Failure> {
    let n = a.len();
    let bound = run.bound.or(base.map(|s| s.bound)).unwrap_or(semidual_core::constructions::DEFAULT_BOUND);
    let (order, identity) = match (run.order, base) {
        (Some(o), _) => (o, o),
        (None, Some(s)) => (s.order, s.identity_order),
        (None, None) => (default_order(n), default_identity_order(n)),
    };
    if bound == 0 || order == 0 {
        return Err(usage("--bound and --order must be at least 1"));
    }
    ExampleSpec::new(a, field, bound, order)
        .and_then(|s| s.with_identity_order(identity))
        .map_err(|e| usage(e.to_string()))
}

fn emit_report(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn exit_for(report: &Report) -> u8 {
    status_exit_code(report.status) as u8
}

fn build<K: Field>(field: K, spec: &ExampleSpec, run: &RunArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let (inst, report) = build_example(spec, field, run.seed).map_err(|e| usage(e.to_string()))?;
    eprintln!(
        "dim {}  n {}  nilpotency index {}",
        inst.algebra.dim(),
        inst.chain.length(),
        inst.algebra.nilpotency_index()
    );
    if let Some(dir) = out {
        write_bundle(dir, spec, &inst, &report).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
        eprintln!("wrote {}", dir.display());
    }
    emit_report(&report, run.format);
    Ok(exit_for(&report))
}

fn verify<K: Field>(field: K, dir: &Path, spec: &ExampleSpec, run: &RunArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let report = verify_bundle(dir, field, spec, run.seed).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(p, text + "\n").map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", p.display()),
        })?;
    }
    emit_report(&report, run.format);
    Ok(exit_for(&report))
}

struct SeriesArgs<'a> {
    module: &'a str,
    bundle: Option<&'a Path>,
    exponents: Option<Vec<usize>>,
    order: Option<usize>,
    bass: bool,
    infer: bool,
    format: Format,
}

fn lookup<K: Field>(field: K, args: &SeriesArgs, field_spec: FieldSpec) -> Result<(FiniteModule<K>, usize), Failure> {
    let name = args.module;
    if let Some(dir) = args.bundle {
        let b = load_bundle(dir, field).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
        let n = b.chain.spec.n();
        let m = match name {
            "R" => regular_module(&b.algebra),
            "k" => residue_field_module(&b.algebra),
            "D" => dualizing_module(&b.algebra),
            _ => b.module(name).map_err(|e| usage(e.to_string()))?.clone(),
        };
        return Ok((m, n));
    }
    let a = args.exponents.clone().ok_or_else(|| usage("series needs --bundle or --a"))?;
    let n = a.len();
    let spec = ExampleSpec::with_defaults(a, field_spec).map_err(|e| usage(e.to_string()))?;
    let inst = build_instance(&spec, field).map_err(|e| usage(e.to_string()))?;
    let m = match name {
        "R" => regular_module(&inst.algebra),
        "k" => residue_field_module(&inst.algebra),
        "D" => dualizing_module(&inst.algebra),
        _ => {
            let idx = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
            match (idx("C"), idx("B")) {
                (Some(i), _) if i <= n => inst.chain.module(i).clone(),
                (_, Some(j)) if (1..=n).contains(&j) => inst.family.b(j).clone(),
                _ => return Err(usage(format!("unknown module {name}"))),
            }
        }
    };
    Ok((m, n))
}

fn series<K: Field>(field: K, args: &SeriesArgs, field_spec: FieldSpec) -> Result<u8, Failure> {
    let (m, n) = lookup(field, args, field_spec)?;
    let order = args.order.unwrap_or(default_order(n));
    let engine = Engine::new(0);
    let s = if args.bass {
        bass_series(&engine, &m, order).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?
    } else {
        poincare_series(&engine, &m, order)
    };
    let inferred = args.infer.then(|| {
        let deg = n.max(1).min(order / 2);
        infer_rational_form(&s, deg).map(|f| f.to_string()).map_err(|e| e.to_string())
    });
    match args.format {
        Format::Text => {
            println!("{s}");
            match &inferred {
                Some(Ok(f)) => println!("inferred {f}"),
                Some(Err(e)) => println!("inferred none ({e})"),
                None => {}
            }
        }
        Format::Json => {
            let mut v = serde_json::json!({
                "module": args.module,
                "kind": if args.bass { "bass" } else { "poincare" },
                "series": s,
            });
            if let Some(i) = &inferred {
                v["inferred"] = match i {
                    Ok(f) => serde_json::json!(f),
                    Err(e) => serde_json::json!({ "error": e }),
                };
            }
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Build { spec, run, out } => {
            let field = parse_field(&spec.field)?;
            let es = make_spec(spec.a, field, &run, None)?;
            match field {
                FieldSpec::Prime(p) => build(PrimeField::new(p).unwrap(), &es, &run, out.as_deref()),
                FieldSpec::Rationals => build(Rationals, &es, &run, out.as_deref()),
            }
        }
        Command::Verify { bundle, run, out } => {
            let recorded = read_chain_json(&bundle).map_err(|e| usage(e.to_string()))?;
            let field = bundle_field(&bundle).map_err(|e| usage(e.to_string()))?;
            let es = make_spec(recorded.spec.exponents.clone(), field, &run, Some(&recorded.spec))?;
            match field {
                FieldSpec::Prime(p) => {
                    let f = PrimeField::new(p).map_err(|e| usage(e.to_string()))?;
                    verify(f, &bundle, &es, &run, out.as_deref())
                }
                FieldSpec::Rationals => verify(Rationals, &bundle, &es, &run, out.as_deref()),
            }
        }
        Command::Series {
            module,
            bundle,
            spec,
            order,
            bass,
            infer,
            format,
        } => {
            if order == Some(0) {
                return Err(usage("--order must be at least 1"));
            }
            let field = match &bundle {
                Some(dir) => bundle_field(dir).map_err(|e| usage(e.to_string()))?,
                None => parse_field(&spec.field)?,
            };
            let args = SeriesArgs {
                module: &module,
                bundle: bundle.as_deref(),
                exponents: spec.a,
                order,
                bass,
                infer,
                format,
            };
            match field {
                FieldSpec::Prime(p) => {
                    let f = PrimeField::new(p).map_err(|e| usage(e.to_string()))?;
                    series(f, &args, field)
                }
                FieldSpec::Rationals => series(Rationals, &args, field),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

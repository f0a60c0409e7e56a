use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kkschur::cache::CacheFile;
use kkschur::cores::{bdd_shape, core_shape, is_core, k_conjugate_shape};
use kkschur::verify::{
    binom_fold_check, nla_instances, sort_reports, step_a_sweep, NlaInstance, StepAInstance, VerificationReport,
    Verifier, DEFAULT_BUDGET, DEFAULT_SEED,
};
use kkschur::{Error, ExpansionTable, LevelContext, Partition, Result, VERSION};

#[derive(Parser, Debug)]
#[command(name = "kkschur", version, about = "Exact K-k-Schur expansions and identity checks")]
struct Cli {
    /// Expansion cache file
    #[arg(long, global = true, env = "KKSCHUR_CACHE")]
    cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The (k+1)-core of a k-bounded partition
    Core(ShapeArgs),
    /// The k-bounded partition of a (k+1)-core
    Bdd(ShapeArgs),
    /// The k-conjugate of a k-bounded partition
    Kconj(ShapeArgs),
    /// kks{λ} as a polynomial in h_1, ..., h_k
    Expand(ShapeArgs),
    /// Check one of the factorization identities
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(short)]
    k: usize,
    /// Partition such as 3,3,1; "-" for the empty partition
    #[arg(allow_hyphen_values = true)]
    shape: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    BinomFold,
    StepA,
    Samek,
    Rta,
    Split,
    Divisibility,
    RegimeScan,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[arg(short, default_value_t = 4)]
    k: usize,
    #[arg(short)]
    t: Option<usize>,
    /// Exponent (rta), or a range lo..hi (binom-fold, step-a)
    #[arg(short = 'a', long = "a", allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long = "q", allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long = "b", allow_hyphen_values = true)]
    b: Option<String>,
    /// Range of d = e for step-a
    #[arg(long = "d", allow_hyphen_values = true)]
    d: Option<String>,
    /// Largest |R_t ∪ λ| for samek and regime-scan
    #[arg(long, default_value_t = 14)]
    max_size: usize,
    /// Largest partition size any expansion may reach
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Rectangles as t:a,t:a
    #[arg(long)]
    rects: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("bad range {:?}, expected lo..hi", s));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            Ok((lo, hi))
        }
        None => {
            let v: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

fn parse_rects(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|item| {
            let bad = || Error::Parse(format!("bad rectangle {:?}, expected t:a", item));
            let (t, a) = item.split_once(':').ok_or_else(bad)?;
            Ok((t.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn range_or(arg: &Option<String>, default: (i64, i64)) -> Result<Vec<i64>> {
    let (lo, hi) = match arg {
        Some(s) => parse_range(s)?,
        None => default,
    };
    Ok((lo..=hi).collect())
}

struct Session {
    table: ExpansionTable,
    cache: Option<CacheFile>,
}

impl Session {
    fn open(k: usize, cache: &Option<PathBuf>) -> Result<Self> {
        let table = ExpansionTable::new(LevelContext::new(k)?);
        let cache = match cache {
            Some(p) => Some(CacheFile::load(p, &table)?),
            None => None,
        };
        Ok(Session { table, cache })
    }

    fn close(mut self) -> Result<()> {
        if let Some(c) = &mut self.cache {
            c.sync(&self.table)?;
        }
        Ok(())
    }
}

fn envelope(k: usize, body: Value) -> Value {
    let mut v = json!({"tool": "kkschur", "version": VERSION, "k": k});
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn shape_command(cli: &Cli, args: &ShapeArgs, name: &str) -> Result<ExitCode> {
    let k = LevelContext::new(args.k)?.k();
    let shape = Partition::from_str(&args.shape)?;
    let out = match name {
        "core" => {
            if !shape.is_bounded(k) {
                return Err(Error::NotBounded { shape: shape.to_string(), k });
            }
            core_shape(&shape, k)
        }
        "bdd" => {
            if !is_core(&shape, k) {
                return Err(Error::NotACore { shape: shape.to_string(), k });
            }
            bdd_shape(&shape, k)
        }
        _ => {
            if !shape.is_bounded(k) {
                return Err(Error::NotBounded { shape: shape.to_string(), k });
            }
            k_conjugate_shape(&shape, k)
        }
    };
    match cli.format {
        Format::Text => println!("{}", out),
        Format::Json => {
            println!("{}", envelope(k, json!({"command": name, "input": shape.to_string(), "output": out.to_string()})))
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn expand(cli: &Cli, args: &ShapeArgs) -> Result<ExitCode> {
    let session = Session::open(args.k, &cli.cache)?;
    let shape = Partition::from_str(&args.shape)?;
    let poly = session.table.kks_in_h(&shape)?;
    match cli.format {
        Format::Text => print!("{}", poly.to_text()),
        Format::Json => {
            let terms: Vec<Value> =
                poly.terms().map(|(m, c)| json!({"monomial": m.to_string(), "coefficient": c.to_string()})).collect();
            println!("{}", envelope(args.k, json!({"partition": shape.to_string(), "terms": terms})));
        }
    }
    session.close()?;
    Ok(ExitCode::SUCCESS)
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let session = Session::open(args.k, &cli.cache)?;
    let ctx = session.table.ctx();
    let k = ctx.k();
    let v = Verifier::new(&session.table).with_seed(args.seed).with_budget(args.budget);
    let ts: Vec<usize> = match args.t {
        Some(t) => vec![t],
        None => (1..=k).collect(),
    };
    let mut extra = json!({});
    let mut reports: Vec<VerificationReport> = Vec::new();
    match args.identity {
        Identity::BinomFold => {
            for q in range_or(&args.q, (-6, 6))? {
                for a in range_or(&args.a, (-2, 6))? {
                    for b in range_or(&args.b, (-2, 6))? {
                        reports.push(binom_fold_check(q, a, b));
                    }
                }
            }
        }
        Identity::StepA => {
            let ds = range_or(&args.d, (0, 2))?;
            let as_ = range_or(&args.a, (0, 3))?;
            if let Some(mu) = &args.mu {
                let mu = Partition::from_str(mu)?;
                for &t in &ts {
                    for &d in &ds {
                        for &a in &as_ {
                            reports.push(v.step_a_verify(&StepAInstance::new(mu.clone(), t, d, d, a, ctx)?)?);
                        }
                    }
                }
            } else {
                let (r, c) = step_a_sweep(&v, &ds, &as_)?;
                reports = r;
                extra = json!({"coverage": {
                    "short": c.short, "long_vacuous": c.long_vacuous, "long_binding": c.long_binding
                }});
            }
        }
        Identity::Samek => {
            if let Some(l) = &args.lambda {
                let lambda = Partition::from_str(l)?;
                for &t in &ts {
                    reports.push(v.theorem_samek_verify(&NlaInstance::new(lambda.clone(), t, ctx)?)?);
                }
            } else {
                for &t in &ts {
                    reports.extend(v.samek_sweep(t, args.max_size)?);
                }
            }
        }
        Identity::Rta => {
            let a = match &args.a {
                Some(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {:?}", s)))?,
                None => 2,
            };
            for &t in &ts {
                reports.push(v.theorem_rta_verify(t, a)?);
            }
        }
        Identity::Split => {
            let spec = parse_rects(args.rects.as_deref().ok_or_else(|| Error::Parse("--rects is required".into()))?)?;
            reports.push(v.splitting_verify(&spec)?);
        }
        Identity::Divisibility => {
            let spec = parse_rects(args.rects.as_deref().ok_or_else(|| Error::Parse("--rects is required".into()))?)?;
            let lambda = match &args.lambda {
                Some(l) => vec![Partition::from_str(l)?],
                None => {
                    let t = spec.first().map(|s| s.0).unwrap_or(1);
                    nla_instances(t, args.max_size, true, ctx).into_iter().map(|i| i.lambda).collect()
                }
            };
            for l in &lambda {
                reports.push(v.divisibility_verify(&spec, l)?);
            }
        }
        Identity::RegimeScan => {
            let mut total = kkschur::verify::RegimeSummary::default();
            for &t in &ts {
                let (r, s) = v.extended_regime_scan(t, args.max_size)?;
                reports.extend(r);
                total.within_confirmed += s.within_confirmed;
                total.within_counterexamples += s.within_counterexamples;
                total.beyond_confirmed += s.beyond_confirmed;
                total.beyond_counterexamples += s.beyond_counterexamples;
            }
            extra = json!({"summary": total});
        }
    }
    sort_reports(&mut reports);
    let pass = reports.iter().all(|r| r.pass);
    let name = args.identity.to_possible_value().unwrap().get_name().to_string();
    match cli.format {
        Format::Text => {
            for r in &reports {
                let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                match &r.witness {
                    Some(w) => {
                        println!("{} {} {} : {}", if r.pass { "PASS" } else { "FAIL" }, r.identity, p.join(" "), w)
                    }
                    None => println!("{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.identity, p.join(" ")),
                }
            }
            if let Some(s) = extra.get("summary") {
                println!("summary {}", s);
            }
            if let Some(c) = extra.get("coverage") {
                println!("coverage {}", c);
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            println!("{}: {} instances, {} failed", name, reports.len(), failed);
        }
        Format::Json => {
            let mut body = json!({"identity": name, "pass": pass, "reports": reports});
            if let (Value::Object(m), Value::Object(e)) = (&mut body, extra) {
                m.extend(e);
            }
            println!("{}", envelope(k, body));
        }
    }
    session.close()?;
    if pass || args.identity == Identity::RegimeScan {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Core(a) => shape_command(cli, a, "core"),
        Command::Bdd(a) => shape_command(cli, a, "bdd"),
        Command::Kconj(a) => shape_command(cli, a, "kconj"),
        Command::Expand(a) => expand(cli, a),
        Command::Verify(a) => verify(cli, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

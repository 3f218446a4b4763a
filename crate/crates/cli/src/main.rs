mod reproduce;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use cosetperm::classes::{binomial_check, trinomial_classify, Shape};
use cosetperm::construction::{assemble, sample_input};
use cosetperm::format::{parse_basis_pair, read_poly_doc, CertificateDoc, FieldDef, InputDoc, SpecDoc, VerifyDoc};
use cosetperm::oracle::{criterion_for_extracted, extract_coset_monomial, is_permutation};
use cosetperm::{coset_system, FieldCtx};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Exit codes: 0 verified, 1 refuted, 2 ill-posed input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Refuted,
}

#[derive(Parser, Debug)]
#[command(name = "cosetperm", version, about = "Permutation polynomials of F_{q^2} that are monomial on cosets of mu_{q+1}")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Opts {
    /// Characteristic of the base field.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// q = p^m.
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Monic quadratic over F_q defining F_{q^2}: "x^2+x+13" or "c0,c1".
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Primitive element in basis form, e.g. "x" or "3+2x".
    #[arg(long, global = true)]
    gamma: Option<String>,
    #[arg(long, global = true)]
    r: Option<u64>,
    #[arg(long, global = true)]
    d: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for exhaustive scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a permutation polynomial from per-coset data (random unless --input).
    Generate,
    /// Check that a polynomial permutes F_{q^2}.
    Verify,
    /// Place a sparse binomial or trinomial spec in its family.
    Classify,
    /// Closed-form counts against enumeration.
    Census,
    /// Recompute a worked result and compare it with the checked-in copy.
    Reproduce {
        #[arg(value_enum)]
        target: reproduce::Target,
    },
}

/// Failures that make the request ill-posed (exit 2).
#[derive(Debug)]
struct IllPosed(anyhow::Error);

fn ill<E: Into<anyhow::Error>>(e: E) -> IllPosed {
    IllPosed(e.into())
}

type Res<T> = std::result::Result<T, IllPosed>;

impl Opts {
    fn has_field_flags(&self) -> bool {
        self.p.is_some()
    }

    fn field_def(&self) -> anyhow::Result<FieldDef> {
        let p = self.p.ok_or_else(|| anyhow!("--p is required (or a field inside --input)"))?;
        let modulus2 = self.modulus.as_deref().map(parse_modulus).transpose()?.map(|[c0, c1]| vec![c0, c1, 1]);
        if let Some(g) = &self.gamma {
            parse_basis_pair(g)?;
        }
        Ok(FieldDef { p, m: self.m.unwrap_or(1), modulus2, gamma: self.gamma.clone() })
    }

    /// Flags win over a field stored in the input document.
    fn field(&self, from_doc: Option<&FieldDef>) -> Res<FieldCtx> {
        let def = match from_doc {
            Some(def) if !self.has_field_flags() => def.clone(),
            _ => self.field_def().map_err(ill)?,
        };
        def.build().map_err(ill)
    }

    fn read_input(&self) -> Res<String> {
        let path = self.input.as_ref().ok_or_else(|| ill(anyhow!("--input is required")))?;
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(ill)
    }
}

/// `x^2 + c1 x + c0` as text, or `c0,c1` / `c0,c1,1`.
fn parse_modulus(s: &str) -> anyhow::Result<[u32; 2]> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if t.contains(',') {
        let v: Vec<u32> = t.split(',').map(|x| x.parse()).collect::<Result<_, _>>()?;
        return match v.as_slice() {
            [c0, c1] | [c0, c1, 1] => Ok([*c0, *c1]),
            _ => bail!("modulus {s:?}: expected c0,c1"),
        };
    }
    let (mut c0, mut c1, mut lead) = (0, 0, false);
    for term in t.split('+') {
        if term == "x^2" {
            lead = true;
        } else if let Some(c) = term.strip_suffix('x') {
            let c = c.trim_end_matches('*');
            c1 = if c.is_empty() { 1 } else { c.parse()? };
        } else {
            c0 = term.parse().with_context(|| format!("modulus term {term:?}"))?;
        }
    }
    if !lead {
        bail!("modulus {s:?} must be monic of degree 2");
    }
    Ok([c0, c1])
}

fn emit<T: Serialize>(opts: &Opts, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    let body = match opts.format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    };
    match &opts.output {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn generate(opts: &Opts) -> Res<Status> {
    let (ctx, input) = if opts.input.is_some() {
        let doc: InputDoc = serde_json::from_str(&opts.read_input()?).map_err(ill)?;
        let ctx = opts.field(doc.field.as_ref())?;
        let input = doc.to_input(&ctx).map_err(ill)?;
        (ctx, input)
    } else {
        let ctx = opts.field(None)?;
        let (r, d) = match (opts.r, opts.d) {
            (Some(r), Some(d)) => (r, d),
            _ => return Err(ill(anyhow!("--r and --d are required without --input"))),
        };
        let sys = coset_system(&ctx, d).map_err(ill)?;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let input = sample_input(&ctx, &sys, r, &mut rng).map_err(ill)?;
        (ctx, input)
    };
    let sys = coset_system(&ctx, input.d).map_err(ill)?;
    let cert = assemble(&ctx, &sys, &input).map_err(ill)?;
    // self-check before anything is written
    let rep = is_permutation(&ctx, &cert.f);
    let criterion = extract_coset_monomial(&ctx, &sys, &cert.h, cert.r).map(|e| criterion_for_extracted(&sys, &e).holds);
    if !rep.is_permutation || criterion != Some(true) {
        eprintln!("assembled polynomial failed verification: {rep:?}");
        return Ok(Status::Refuted);
    }
    let doc = CertificateDoc::of(&ctx, &cert);
    emit(opts, &doc, || text::certificate(&ctx, &doc)).map_err(ill)?;
    Ok(Status::Verified)
}

fn verify(opts: &Opts) -> Res<Status> {
    let src = opts.read_input()?;
    let doc = match serde_json::from_str::<CertificateDoc>(&src) {
        Ok(cert) => {
            let ctx = opts.field(Some(&cert.field))?;
            let sys = coset_system(&ctx, cert.d).map_err(ill)?;
            let h = cert.h_poly(&ctx);
            VerifyDoc::plain(is_permutation(&ctx, &cert.f_poly(&ctx))).with_cosets(&ctx, &sys, &h, cert.r)
        }
        Err(_) => {
            let pd = read_poly_doc(&src).map_err(ill)?;
            let ctx = opts.field(pd.field.as_ref())?;
            let f = pd.f.to_poly(&ctx).map_err(ill)?;
            VerifyDoc::plain(is_permutation(&ctx, &f))
        }
    };
    emit(opts, &doc, || text::verify(&doc)).map_err(ill)?;
    Ok(if doc.report.is_permutation { Status::Verified } else { Status::Refuted })
}

#[derive(Serialize)]
struct ClassifyDoc {
    spec: SpecDoc,
    #[serde(flatten)]
    verdict: cosetperm::ClassVerdict,
    /// Exhaustive check of the same polynomial.
    oracle: bool,
}

fn classify(opts: &Opts) -> Res<Status> {
    let doc: SpecDoc = serde_json::from_str(&opts.read_input()?).map_err(ill)?;
    let ctx = opts.field(doc.field.as_ref())?;
    let spec = doc.to_spec(&ctx).map_err(ill)?;
    let sys = coset_system(&ctx, spec.d).map_err(ill)?;
    spec.validate(&sys).map_err(ill)?;
    let verdict = match spec.shape {
        Shape::Binomial { .. } => binomial_check(&ctx, &sys, &spec),
        Shape::Trinomial { .. } => trinomial_classify(&ctx, &sys, &spec),
    }
    .map_err(ill)?;
    let oracle = is_permutation(&ctx, &spec.pp(&ctx)).is_permutation;
    let out = ClassifyDoc { spec: SpecDoc::of(&spec), verdict, oracle };
    emit(opts, &out, || text::classify(&out.verdict, oracle)).map_err(ill)?;
    match out.verdict.pp {
        Some(true) => Ok(Status::Verified),
        Some(false) => Ok(Status::Refuted),
        None => Err(ill(anyhow!("no recognized family decides this spec (oracle: {oracle})"))),
    }
}

fn census(opts: &Opts) -> Res<Status> {
    let ctx = opts.field(None)?;
    let (r, d) = match (opts.r, opts.d) {
        (Some(r), Some(d)) => (r, d),
        _ => return Err(ill(anyhow!("--r and --d are required"))),
    };
    let sys = coset_system(&ctx, d).map_err(ill)?;
    let rows = cosetperm::census::census_rows(&ctx, &sys, r).map_err(ill)?;
    emit(opts, &rows, || text::census(&rows)).map_err(ill)?;
    Ok(if rows.iter().all(|r| r.agree) { Status::Verified } else { Status::Refuted })
}

fn run(cli: &Cli) -> Res<Status> {
    if let Some(j) = cli.opts.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(ill)?;
    }
    match &cli.cmd {
        Command::Generate => generate(&cli.opts),
        Command::Verify => verify(&cli.opts),
        Command::Classify => classify(&cli.opts),
        Command::Census => census(&cli.opts),
        Command::Reproduce { target } => {
            let out = reproduce::run(*target, &cli.opts).map_err(ill)?;
            emit(&cli.opts, &out, || out.to_text()).map_err(ill)?;
            Ok(if out.pass { Status::Verified } else { Status::Refuted })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Verified) => ExitCode::from(0),
        Ok(Status::Refuted) => ExitCode::from(1),
        Err(IllPosed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

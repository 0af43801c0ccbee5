//! Argument parsing and the three subcommands. Exit codes: 0 success,
//! 1 verification mismatch, 2 invalid input.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ltperm_core::field::{DEFAULT_MAX_FIELD_BITS, HARD_MAX_FIELD_BITS};
use ltperm_core::translator::{find_translators, QuadTraceParams};
use ltperm_core::{Domain, Field, FuncTable};

use crate::catalog::{self, CatalogFamily, Summary, Sweep};
use crate::sample::DEFAULT_SEED;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ltperm", version, about = "Permutations of finite fields from linear translators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the linear translators of a function into a subfield.
    Search(SearchArgs),
    /// Construct a family over a field and verify every member.
    Catalog(CatalogArgs),
    /// Replay recipes from a JSON Lines file and compare stored verdicts.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Modulus coefficients, little-endian and comma separated, e.g. 1,1,0,0,1.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Raise or lower the field size cap (log2 of the element count).
    #[arg(long, default_value_t = DEFAULT_MAX_FIELD_BITS)]
    pub max_field_bits: u32,
}

impl FieldArgs {
    fn max_bits(&self) -> u32 {
        self.max_field_bits.min(HARD_MAX_FIELD_BITS)
    }

    fn build(&self, p: Option<u32>, n: Option<u32>) -> anyhow::Result<Field> {
        let p = p.ok_or_else(|| anyhow!("--p is required"))?;
        let n = n.ok_or_else(|| anyhow!("--n is required"))?;
        Ok(Field::with_cap(p, n, self.modulus.as_deref(), self.max_bits())?)
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub k: u32,
    /// trace[:beta] | monomial:d | binomial:beta:i:j | quadtrace:beta:i:l | const:c
    /// (elements are enumeration indices).
    #[arg(long = "f")]
    pub f: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CatalogFamily::NAMES))]
    pub family: String,
    /// Sweep every admissible δ.
    #[arg(long)]
    pub all_delta: bool,
    /// Sweep every exponent s in [0, p^n - 2].
    #[arg(long)]
    pub all_s: bool,
    /// δ as an enumeration index when not sweeping.
    #[arg(long)]
    pub delta: Option<u32>,
    #[arg(long)]
    pub s: Option<u64>,
    /// Subfield degree m of the trinomial family (field GF(2^{3m})).
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sampled h tables per translator.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
    /// Number of β values (β = 1 first, then seeded).
    #[arg(long, default_value_t = 1)]
    pub betas: usize,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    /// Also emit an inverse recipe after each entry with a closed-form inverse.
    #[arg(long)]
    pub with_inverses: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record per-entry wall time (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = HARD_MAX_FIELD_BITS)]
    pub max_field_bits: u32,
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Search(a) => search(a),
        Command::Catalog(a) => catalog(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn elem(field: &Field, s: &str) -> anyhow::Result<ltperm_core::Element> {
    let i: u32 = s.parse().with_context(|| format!("bad element index {s:?}"))?;
    Ok(field.element_at(i)?)
}

fn num<T: std::str::FromStr>(s: &str) -> anyhow::Result<T> {
    s.parse().map_err(|_| anyhow!("bad integer {s:?}"))
}

/// Parses the `--f` mini-language into a table of GF(p^n) into GF(p^k).
pub fn parse_function(field: &Field, k: u32, spec: &str) -> anyhow::Result<FuncTable> {
    let parts: Vec<&str> = spec.split(':').collect();
    let sub = Domain::Subfield(k);
    let t = match parts.as_slice() {
        ["trace"] => ltperm_core::construct::affine_trace(field, k, field.one(), field.zero())?,
        ["trace", b] => ltperm_core::construct::affine_trace(field, k, elem(field, b)?, field.zero())?,
        ["monomial", d] => {
            let d: u64 = num(d)?;
            FuncTable::tabulate(field, Domain::Full, sub, |x| field.pow(x, d))?
        }
        ["binomial", b, i, j] => {
            let beta = elem(field, b)?;
            let (i, j): (u64, u64) = (num(i)?, num(j)?);
            FuncTable::tabulate(field, Domain::Full, sub, |x| {
                field.add(field.mul(beta, field.pow(x, i)), field.pow(x, j))
            })?
        }
        ["quadtrace", b, i, l] => {
            QuadTraceParams::new(field, elem(field, b)?, num(i)?, num(l)?, k)?.table(field)
        }
        ["const", c] => {
            let c = elem(field, c)?;
            FuncTable::tabulate(field, Domain::Full, sub, |_| c)?
        }
        _ => bail!("unrecognised function spec {spec:?}"),
    };
    Ok(t)
}

fn search(a: SearchArgs) -> anyhow::Result<i32> {
    let field = a.field.build(a.field.p, a.field.n)?;
    let f = parse_function(&field, a.k, &a.f)?;
    let found = find_translators(&f)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for w in &found {
        let line = serde_json::json!({
            "field": field.desc(),
            "k": a.k,
            "f": a.f,
            "gamma": field.index_of(w.gamma()),
            "b": field.index_of(w.b()),
            "gamma_poly": field.format(w.gamma()),
            "b_poly": field.format(w.b()),
        });
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    eprintln!("translators={}", found.len());
    Ok(EXIT_OK)
}

fn catalog(a: CatalogArgs) -> anyhow::Result<i32> {
    let family = CatalogFamily::parse(&a.family).ok_or_else(|| anyhow!("unknown family"))?;
    let (p, n) = match family {
        CatalogFamily::TrinomialCpp => {
            let m = a.m.unwrap_or(2);
            if a.field.p.is_some_and(|p| p != 2) || a.field.n.is_some_and(|n| n != 3 * m) {
                bail!("trinomial family is defined over GF(2^(3m))");
            }
            (Some(2), Some(3 * m))
        }
        _ => (a.field.p, a.field.n),
    };
    let field = a.field.build(p, n)?;
    let k = match (a.k, family) {
        (Some(k), _) => k,
        (None, CatalogFamily::TrinomialCpp) => field.n(),
        (None, _) if field.n() % 2 == 0 => field.n() / 2,
        (None, _) => bail!("--k is required for odd n"),
    };
    let sweep = Sweep {
        family,
        field,
        k,
        all_delta: a.all_delta,
        all_s: a.all_s,
        delta: a.delta,
        s: a.s,
        seed: a.seed,
        samples: a.samples,
        betas: a.betas,
        i: a.i,
        l: a.l,
        with_inverses: a.with_inverses,
        max_bits: a.field.max_bits(),
    };
    let recipes = catalog::recipes(&sweep)?;
    let entries = catalog::evaluate_all(&recipes, sweep.max_bits, a.timing)?;
    let summary = Summary::of(&entries);
    match &a.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_entries(BufWriter::new(file), &entries, a.format)?;
            println!("{summary}");
        }
        None => {
            write_entries(BufWriter::new(io::stdout().lock()), &entries, a.format)?;
            eprintln!("{summary}");
        }
    }
    Ok(if summary.mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

fn write_entries(mut out: impl Write, entries: &[catalog::CatalogEntry], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Json => catalog::write_jsonl(&mut out, entries)?,
        Format::Csv => catalog::write_csv(&mut out, entries)?,
    }
    out.flush()?;
    Ok(())
}

fn verify(a: VerifyArgs) -> anyhow::Result<i32> {
    let max_bits = a.max_field_bits.min(HARD_MAX_FIELD_BITS);
    let file = File::open(&a.file).with_context(|| format!("opening {}", a.file.display()))?;
    let mut inputs = Vec::new();
    for (no, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = catalog::parse_line(&line).with_context(|| format!("line {}", no + 1))?;
        inputs.push((no + 1, parsed));
    }
    let mut failures = 0usize;
    for (no, input) in &inputs {
        let diffs = catalog::verify_line(input, max_bits).with_context(|| format!("line {no}"))?;
        if !diffs.is_empty() {
            failures += 1;
            for d in diffs {
                eprintln!("line {no}: {d}");
            }
        }
    }
    println!("checked={} mismatches={}", inputs.len(), failures);
    Ok(if failures == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

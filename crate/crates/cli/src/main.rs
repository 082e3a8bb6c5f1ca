//! Command-line front end for the factsum engines.
//!
//! Five subcommands cover the library surface: `poly` solves one
//! closed-form polynomial, `uv` prints constant tables, `verify`
//! re-derives the summation identity over grids and random combinations,
//! `kurepa-scan` hunts for congruence violations across prime ranges, and
//! `padic` prints digit expansions and convergence tables.
//!
//! Two output modes, never mixed on one stream: the default human tables,
//! and `--format records` writing one JSON object per line to stdout with
//! diagnostics on stderr. Exit codes: 0 clean, 1 usage or I/O error, 2 a
//! mathematical claim failed.

use std::env;
use std::fs::OpenOptions;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use factsum::exact::{factorial, Integer, Sign};
use factsum::padic::{convergence_profile, left_factorial_digits, series_digits};
use factsum::poly::Polynomial;
use factsum::scan::{scan_with_sink, LineSink, NullSink, RecordSink, ScanOptions, ScanReport};
use factsum::seq::{sum_vector, uv_table_eps, uv_table_mod, UvTable};
use factsum::sums::{verify_closed_form, verify_general, worked_examples, GeneralPolySpec, SumVerdict};

/// Exact summation identities, left-factorial scans, and p-adic digits.
#[derive(Parser, Debug)]
#[command(name = "factsum", version, about)]
struct Cli {
    /// Output mode: human tables or line-delimited JSON records
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tables and summaries for reading
    Human,
    /// One JSON object per line, schema stable
    Records,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Solve the closed-form polynomial for one power and print (u, v)
    Poly(PolyArgs),
    /// Print the (u_k, v_k) table, exact or reduced mod a prime
    Uv(UvArgs),
    /// Re-derive the summation identity across grids and random combinations
    Verify(VerifyArgs),
    /// Scan primes for left-factorial congruence violations
    KurepaScan(ScanArgs),
    /// Print p-adic digit expansions and convergence tables
    Padic(PadicArgs),
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Power k of the summand i^k + u
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Sign eps weighting each term as eps^i
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    eps: Sign,
}

#[derive(Args, Debug)]
struct UvArgs {
    /// Largest power k in the table
    #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u32).range(1..))]
    max_k: u32,
    /// Sign eps weighting each term as eps^i
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    eps: Sign,
    /// Reduce the table mod this prime (eps = +1 only)
    #[arg(long = "mod", value_name = "P")]
    modulus: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Largest n in every grid
    #[arg(long, default_value_t = 40)]
    n_max: u64,
    /// Largest power k in every grid
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    k_max: u32,
    /// Restrict to one sign; omitted checks both
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    eps: Option<Sign>,
    /// Random integer combinations to draw
    #[arg(long, default_value_t = 25)]
    general_cases: u32,
    /// Coefficient bound for the random combinations
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(i64).range(1..))]
    coeff_bound: i64,
    /// RNG seed; a fixed seed makes structured output byte-identical
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Lower end of the prime range (inclusive, at least 3)
    #[arg(long, default_value_t = 3)]
    from: u64,
    /// Upper end of the prime range (exclusive)
    #[arg(long)]
    to: u64,
    /// Powers k to track; must include 0
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 2, 3, 4])]
    ks: Vec<u32>,
    /// Worker threads
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Checkpoint file; relative paths join FACTSUM_CHECKPOINT_DIR when set
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Blocks merged between checkpoint writes
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    checkpoint_interval: u32,
    /// Largest p given the quadratic wraparound checks
    #[arg(long, default_value_t = factsum::kurepa::DEFAULT_WRAPAROUND_CAP)]
    wraparound_cap: u64,
    /// Append the record stream to this file (human mode only)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PadicArgs {
    /// Prime base
    #[arg(long)]
    p: u64,
    /// Digits to print (precision p^m)
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    digits: u32,
    /// Power k of the summand; omitted means the plain left factorial
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: Option<u32>,
    /// Sign eps weighting each term as eps^i
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    eps: Sign,
    /// Convergence table for partial sums to M = 1..=N instead of digits
    #[arg(long, value_name = "N")]
    profile: Option<u64>,
}

/// What a subcommand established. Exit code 2 is reserved for a
/// mathematical claim failing; plain errors exit 1.
enum Verdict {
    Pass,
    MathFailure,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version leave through the same Err path but are not
            // errors; real usage errors take exit code 1, keeping 2 free
            // for mathematical failures.
            let code: u8 = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::MathFailure) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match cli.command {
        Commands::Poly(args) => cmd_poly(args, cli.format),
        Commands::Uv(args) => cmd_uv(args, cli.format),
        Commands::Verify(args) => cmd_verify(args, cli.format),
        Commands::KurepaScan(args) => cmd_scan(args, cli.format),
        Commands::Padic(args) => cmd_padic(args, cli.format),
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse()
}

fn cmd_poly(args: PolyArgs, format: Format) -> anyhow::Result<Verdict> {
    let poly = Polynomial::solve(args.k, args.eps);
    let entry = poly.uv();
    match format {
        Format::Human => println!("{poly}, u={}, v={}", entry.u, entry.v),
        Format::Records => {
            let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
            println!(
                "{}",
                json!({
                    "type": "polynomial",
                    "k": args.k,
                    "eps": args.eps.to_string(),
                    "coeffs": coeffs,
                    "rendered": poly.to_string(),
                    "u": entry.u.to_string(),
                    "v": entry.v.to_string(),
                })
            );
        }
    }
    Ok(Verdict::Pass)
}

fn cmd_uv(args: UvArgs, format: Format) -> anyhow::Result<Verdict> {
    let table = match args.modulus {
        Some(p) => {
            if args.eps == Sign::Minus {
                bail!("--mod runs the eps = +1 recurrences; drop --eps or pass +1");
            }
            uv_table_mod(args.max_k, p)?
        }
        None => uv_table_eps(args.max_k, args.eps),
    };
    match format {
        Format::Human => print_uv_table(&table),
        Format::Records => {
            for e in table.entries() {
                let mut rec = json!({
                    "type": "uv",
                    "k": e.k,
                    "eps": e.eps.to_string(),
                    "u": e.u.to_string(),
                    "v": e.v.to_string(),
                });
                if let Some(p) = table.modulus {
                    rec["modulus"] = json!(p);
                }
                println!("{rec}");
            }
        }
    }
    Ok(Verdict::Pass)
}

fn print_uv_table(table: &UvTable) {
    if let Some(p) = table.modulus {
        println!("mod {p}");
    }
    let rows: Vec<[String; 3]> = table
        .entries()
        .iter()
        .map(|e| [e.k.to_string(), e.u.to_string(), e.v.to_string()])
        .collect();
    let mut width = [1usize; 3];
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let [wk, wu, wv] = width;
    println!("{:>wk$} {:>wu$} {:>wv$}", "k", "u", "v");
    for row in &rows {
        println!("{:>wk$} {:>wu$} {:>wv$}", row[0], row[1], row[2]);
    }
}

/// Per-group counters for `verify`, plus the first mismatch in full so a
/// failure is diagnosable from one run.
struct Tally {
    name: &'static str,
    cases: u64,
    mismatches: u64,
    first_mismatch: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            cases: 0,
            mismatches: 0,
            first_mismatch: None,
        }
    }

    fn observe(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(detail());
            }
        }
    }

    fn observe_verdict(&mut self, v: &SumVerdict) {
        self.observe(v.matched, || {
            format!(
                "{} at n={} eps={}: {} != {}",
                v.case, v.n, v.eps, v.lhs, v.rhs
            )
        });
    }
}

fn cmd_verify(args: VerifyArgs, format: Format) -> anyhow::Result<Verdict> {
    let eps_set = match args.eps {
        Some(eps) => vec![eps],
        None => vec![Sign::Plus, Sign::Minus],
    };
    let mut tallies = Vec::new();

    let mut grid = Tally::new("closed form grid");
    for &eps in &eps_set {
        for k in 1..=args.k_max {
            for n in 0..=args.n_max {
                grid.observe_verdict(&verify_closed_form(n, k, eps));
            }
        }
    }
    tallies.push(grid);

    let mut examples = Tally::new("worked examples");
    for v in worked_examples(args.n_max) {
        examples.observe_verdict(&v);
    }
    tallies.push(examples);

    let mut routes = Tally::new("uv recurrence vs solver");
    for &eps in &eps_set {
        let table = uv_table_eps(args.k_max, eps);
        for k in 1..=args.k_max {
            let solved = Polynomial::solve(k, eps).uv();
            let entry = table.get(k);
            routes.observe(entry.u == solved.u && entry.v == solved.v, || {
                format!(
                    "k={k} eps={eps}: recurrence ({}, {}) vs solver ({}, {})",
                    entry.u, entry.v, solved.u, solved.v
                )
            });
        }
    }
    tallies.push(routes);

    // The sum-vector route assembles the same closed form from the other
    // direction: S_k + u S_0 must equal v + eps^(n-1) n! A(n).
    let mut recombined = Tally::new("power sum recombination");
    for &eps in &eps_set {
        let solved: Vec<Polynomial> = (1..=args.k_max)
            .map(|k| Polynomial::solve(k, eps))
            .collect();
        for n in 0..=args.n_max {
            let sv = sum_vector(n, args.k_max, eps);
            let nf = factorial(n);
            let nb = Integer::from(n);
            for poly in &solved {
                let e = poly.uv();
                let lhs = &sv.values[e.k as usize] + &e.u * &sv.values[0];
                let rhs = &e.v + eps.pow_pred(n).apply(&nf * poly.eval(&nb));
                recombined.observe(lhs == rhs, || {
                    format!("k={} eps={eps} n={n}: {lhs} != {rhs}", e.k)
                });
            }
        }
    }
    tallies.push(recombined);

    let mut general = Tally::new("general combinations");
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for _ in 0..args.general_cases {
        let spec = GeneralPolySpec::random(&mut rng, args.k_max, args.coeff_bound);
        for &eps in &eps_set {
            for n in 0..=args.n_max {
                general.observe_verdict(&verify_general(&spec, n, eps));
            }
        }
    }
    tallies.push(general);

    let pass = tallies.iter().all(|t| t.mismatches == 0);
    match format {
        Format::Human => {
            for t in &tallies {
                println!("{}: {} cases, {} mismatches", t.name, t.cases, t.mismatches);
            }
            println!("verify: {}", if pass { "pass" } else { "FAIL" });
        }
        Format::Records => {
            for t in &tallies {
                println!(
                    "{}",
                    json!({
                        "type": "check",
                        "name": t.name,
                        "cases": t.cases,
                        "mismatches": t.mismatches,
                    })
                );
            }
            println!("{}", json!({"type": "summary", "pass": pass}));
        }
    }
    for t in &tallies {
        if let Some(detail) = &t.first_mismatch {
            eprintln!("{}: first mismatch: {detail}", t.name);
        }
    }
    Ok(if pass { Verdict::Pass } else { Verdict::MathFailure })
}

fn cmd_scan(args: ScanArgs, format: Format) -> anyhow::Result<Verdict> {
    if format == Format::Records && args.report.is_some() {
        bail!("--report duplicates the record stream that structured mode already prints; use one or the other");
    }
    let mut opts = ScanOptions::new(args.from, args.to, args.ks.clone());
    opts.workers = args.workers as usize;
    opts.checkpoint = args.checkpoint.map(resolve_checkpoint);
    opts.checkpoint_interval = args.checkpoint_interval as usize;
    opts.wraparound_cap = args.wraparound_cap;
    // The sink is the destination; holding every record in memory as well
    // would defeat streaming on long ranges.
    opts.keep_records = false;

    let report = match (format, &args.report) {
        (Format::Records, _) => {
            let stdout = io::stdout();
            let mut sink = LineSink(stdout.lock());
            let report = scan_with_sink(&opts, &mut sink)?;
            sink.flush()?;
            report
        }
        (Format::Human, Some(path)) => {
            let file = OpenOptions::new().create(true).append(true).open(path)?;
            let mut sink = LineSink(BufWriter::new(file));
            let report = scan_with_sink(&opts, &mut sink)?;
            sink.flush()?;
            report
        }
        (Format::Human, None) => scan_with_sink(&opts, &mut NullSink)?,
    };

    match format {
        Format::Human => print_scan_summary(&report),
        Format::Records => eprintln!(
            "scanned {} primes in {:?}",
            report.primes_scanned, report.elapsed
        ),
    }
    Ok(if report.pass() {
        Verdict::Pass
    } else {
        Verdict::MathFailure
    })
}

/// Relative checkpoint paths land under FACTSUM_CHECKPOINT_DIR when the
/// variable is set, so wrappers can pin one directory for every scan.
fn resolve_checkpoint(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = env::var_os("FACTSUM_CHECKPOINT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path
}

fn print_scan_summary(report: &ScanReport) {
    let ks: Vec<String> = report.ks.iter().map(|k| k.to_string()).collect();
    println!("range [{}, {}), k-set {}", report.lo, report.hi, ks.join(","));
    if let Some(from) = report.resumed_from {
        println!("resumed from {from}");
    }
    println!("primes scanned: {}", report.primes_scanned);
    println!("skipped pairs: {}", report.skipped_pairs);
    println!("wraparound checked: {}", report.wraparound_checked);
    println!("verified through: {}", report.verified_through);
    println!("elapsed: {:?}", report.elapsed);
    for v in &report.violations {
        let k = v.k.map(|k| format!(" k={k}")).unwrap_or_default();
        println!("violation p={} check={}{}: {}", v.p, v.check, k, v.detail);
    }
    println!(
        "result: {}",
        if report.pass() { "clean" } else { "violations found" }
    );
}

fn cmd_padic(args: PadicArgs, format: Format) -> anyhow::Result<Verdict> {
    if let Some(m_max) = args.profile {
        let k = args
            .k
            .ok_or_else(|| anyhow!("--profile needs --k; the convergence table is per power"))?;
        let profile = convergence_profile(k, args.eps, args.p, m_max)?;
        match format {
            Format::Human => {
                println!("{:>8} {:>8} {:>8}", "upper", "sum", "fact");
                for row in &profile.rows {
                    println!(
                        "{:>8} {:>8} {:>8}",
                        row.upper,
                        row.sum_valuation.to_string(),
                        row.factorial_valuation
                    );
                }
            }
            Format::Records => {
                for row in &profile.rows {
                    println!(
                        "{}",
                        json!({
                            "type": "convergence",
                            "k": k,
                            "eps": args.eps.to_string(),
                            "p": args.p,
                            "upper": row.upper,
                            "sum_valuation": row.sum_valuation.to_string(),
                            "factorial_valuation": row.factorial_valuation,
                        })
                    );
                }
            }
        }
        return Ok(Verdict::Pass);
    }

    let expansion = match args.k {
        Some(k) => series_digits(k, args.eps, args.p, args.digits)?,
        None => {
            let e = left_factorial_digits(args.p, args.digits)?;
            if args.p == 2 {
                eprintln!("note: p = 2 is the excluded case; the leading digit is 0 because !2 = 2");
            }
            e
        }
    };
    match format {
        Format::Human => println!("{expansion}"),
        Format::Records => {
            let mut rec = json!({
                "type": "digits",
                "p": args.p,
                "digits": expansion.digits,
            });
            match args.k {
                Some(k) => {
                    rec["series"] = json!("power_sum");
                    rec["k"] = json!(k);
                    rec["eps"] = json!(args.eps.to_string());
                }
                None => rec["series"] = json!("left_factorial"),
            }
            println!("{rec}");
        }
    }
    Ok(Verdict::Pass)
}

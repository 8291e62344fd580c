use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use dupsub::blocks::count_blocks_upto;
use dupsub::codec::{decode, encode, parse_message, render_message, CodeParams};
use dupsub::eigen::{best_sigma, graph_eigenvalue};
use dupsub::graph::{parse_marker, IrrGraph};
use dupsub::rates::rates_at_max_length;
use dupsub::verify::{graph_report, lemma1, simulate, theorem1};
use dupsub::{Error, Word};

mod seqfile;

/// Thread count for `simulate` when `--threads` is absent.
const THREADS_ENV: &str = "DUPSUB_THREADS";

#[derive(Parser)]
#[command(
    name = "dupsub",
    version,
    about = "Codes for tandem duplications and one substitution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode hex messages, one per line, into codewords.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Write codewords as ACGT (q = 4 only).
        #[arg(long)]
        dna: bool,
    },
    /// Decode channel outputs, one per line, and print a report for each.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the decoded messages, one per line.
        #[arg(long = "out")]
        output: Option<PathBuf>,
        /// Read sequences as ACGT (q = 4 only).
        #[arg(long)]
        dna: bool,
    },
    /// Random messages through the channel and back.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long = "max-dups", default_value_t = 20)]
        max_dups: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "no-substitution")]
        no_substitution: bool,
        /// File receiving the message and trace of every failed trial.
        #[arg(long)]
        failures: Option<PathBuf>,
        /// Worker threads (defaults to DUPSUB_THREADS, then all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Rate table as CSV.
    Rates {
        #[arg(long)]
        q: u8,
        /// Inclusive range of block lengths, `a..b`.
        #[arg(long = "m-range", value_parser = parse_range)]
        m_range: (usize, usize),
        #[arg(long, conflicts_with = "best_sigma")]
        sigma: Option<String>,
        /// Use the marker with the largest eigenvalue (the default).
        #[arg(long = "best-sigma")]
        best_sigma: bool,
    },
    /// Numerical checks of the construction.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand)]
enum Verify {
    /// Longest root after duplications and one substitution of a short word.
    Lemma1 {
        #[arg(long)]
        base: String,
        /// Length cap on intermediate words.
        #[arg(long, default_value_t = 13)]
        cap: usize,
        /// Alphabet size (defaults to the largest base symbol plus two).
        #[arg(long)]
        q: Option<u8>,
    },
    /// Root change of random words under the channel.
    Theorem1 {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        q: u8,
        #[arg(long = "max-len", default_value_t = 30)]
        max_len: usize,
        #[arg(long = "max-dups", default_value_t = 8)]
        max_dups: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Out-degrees, marker reachability and block growth of G_q.
    Graph {
        #[arg(long)]
        q: u8,
        #[arg(long, default_value = "01020")]
        marker: String,
        #[arg(long = "max-m", default_value_t = 40)]
        max_m: usize,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, default_value_t = 4)]
    q: u8,
    #[arg(long, default_value = "01201")]
    sigma: String,
    #[arg(long, default_value_t = 18)]
    m: usize,
    #[arg(long = "field-degree", default_value_t = 4)]
    field_degree: u32,
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams, Failure> {
        let sigma = parse_marker(self.q, &self.sigma)?;
        let graph = Arc::new(IrrGraph::build(self.q)?);
        Ok(CodeParams::with_graph(
            graph,
            &sigma,
            self.m,
            self.field_degree,
        )?)
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= a <= b, got {a}..{b}"));
    }
    Ok((a, b))
}

/// An error with its exit code.
enum Failure {
    /// Bad input or parameters: exit 2.
    Usage(String),
    /// A check failed or a word did not decode: exit 1.
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn init_pool(threads: Option<usize>) -> Result<(), Failure> {
    let n = match threads {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Failure::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))
            })?,
            Err(_) => 0,
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run_encode(code: &CodeArgs, input: &Path, output: &Path, dna: bool) -> Result<(), Failure> {
    let params = code.params()?;
    seqfile::check_dna(params.q(), dna)?;
    let mut out = String::new();
    for (i, line) in read(input)?.lines().enumerate() {
        if seqfile::is_blank(line) {
            continue;
        }
        let message = parse_message(&params, line, i + 1)?;
        let x = encode(&params, &message)?;
        out.push_str(&seqfile::render(x.symbols(), dna));
        out.push('\n');
    }
    write(output, &out)
}

fn run_decode(
    code: &CodeArgs,
    input: &Path,
    output: Option<&Path>,
    dna: bool,
) -> Result<(), Failure> {
    let params = code.params()?;
    seqfile::check_dna(params.q(), dna)?;
    let words = seqfile::parse(&read(input)?, params.q(), dna)?;
    let mut messages = String::new();
    let mut failed = 0;
    for (line, y) in &words {
        println!("word: {line}");
        match decode(&params, y) {
            Ok(r) => {
                print!("status: ok\n{r}");
                messages.push_str(&render_message(&params, &r.message));
            }
            Err(e) => {
                failed += 1;
                println!("status: failed\nerror: {e}");
            }
        }
        println!();
        messages.push('\n');
    }
    println!("decoded: {}/{}", words.len() - failed, words.len());
    if let Some(path) = output {
        write(path, &messages)?;
    }
    if failed > 0 {
        Err(Failure::Failed)
    } else {
        Ok(())
    }
}

fn run_simulate(
    code: &CodeArgs,
    trials: usize,
    max_dups: usize,
    seed: u64,
    substitution: bool,
    failures: Option<&Path>,
) -> Result<(), Failure> {
    let params = code.params()?;
    let r = simulate(&params, trials, max_dups, substitution, seed)?;
    println!("trials: {}", r.trials);
    println!("successes: {}", r.successes);
    println!("success_rate: {:.6}", r.success_rate());
    if let Some(path) = failures {
        let mut text = String::new();
        for f in &r.failures {
            let _ = writeln!(text, "# trial {}: {}", f.trial, f.error);
            let _ = writeln!(text, "# message {}", render_message(&params, &f.message));
            let _ = writeln!(text, "{}", f.trace);
        }
        write(path, &text)?;
    }
    if r.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn run_rates(q: u8, range: (usize, usize), sigma: Option<&str>) -> Result<(), Failure> {
    const L: usize = 5;
    let graph = IrrGraph::build(q)?;
    let (sigma, eigen) = match sigma {
        Some(s) => {
            let w = parse_marker(q, s)?;
            let e = graph_eigenvalue(&graph, Some(&w))?;
            (w, e)
        }
        None => best_sigma(&graph),
    };
    let counts = count_blocks_upto(&graph, &sigma, range.1)?;
    let mut out = String::from("sigma,m,M,lambda,rate_exact,rate_lb,rate_asymptotic\n");
    for m in range.0..=range.1 {
        let count = &counts[m - 1];
        let _ = write!(out, "{sigma},{m},{count},{:.6}", eigen.value);
        match rates_at_max_length(m, L, count) {
            Some(r) => {
                let _ = writeln!(
                    out,
                    ",{:.6},{:.6},{:.6}",
                    // Adding zero turns -0 into 0.
                    r.exact + 0.0,
                    r.lower_bound + 0.0,
                    r.asymptotic
                );
            }
            None => out.push_str(",,,\n"),
        }
    }
    print!("{out}");
    Ok(())
}

fn run_lemma1(base: &str, cap: usize, q: Option<u8>) -> Result<(), Failure> {
    let base = base.trim();
    let q = match q {
        Some(q) => q,
        None => {
            let top = base
                .chars()
                .map(|c| c.to_digit(16).map(|d| d as u8))
                .max()
                .flatten()
                .ok_or_else(|| Failure::Usage(format!("base {base:?} is not a word")))?;
            top.saturating_add(2).max(3)
        }
    };
    let word = Word::parse(q, base)?;
    // Known maxima: 13 for three symbols, at most 17 for five.
    let bound = match word.len() {
        3 => 13,
        5 => 17,
        n => {
            return Err(Failure::Usage(format!(
                "base must have length 3 or 5, got {n}"
            )))
        }
    };
    let g = lemma1(&word, cap)?;
    let mut pass = g.max_root_len <= bound;
    if word.len() == 3 && cap >= 13 {
        pass &= g.max_root_len == 13;
    }
    println!(
        "base={word} q={q} cap={cap} descendants={} max={} witness={}",
        g.descendants, g.max_root_len, g.witness
    );
    println!("bound {bound}: {}", verdict(pass));
    if pass {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn run_theorem1(
    trials: usize,
    q: u8,
    max_len: usize,
    max_dups: usize,
    seed: u64,
) -> Result<(), Failure> {
    const BOUND: usize = 17;
    let r = theorem1(trials, q, max_len, max_dups, BOUND, seed)?;
    println!(
        "trials={} max_removed={} max_inserted={}",
        r.trials, r.max_removed, r.max_inserted
    );
    for (x, trace) in &r.violations {
        println!(
            "violation input={x} trace={}",
            trace.to_string().replace('\n', ";")
        );
    }
    let pass = r.violations.is_empty();
    println!("window <= {BOUND}: {}", verdict(pass));
    if pass {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn run_graph(q: u8, marker: &str, max_m: usize) -> Result<(), Failure> {
    if max_m == 0 {
        return Err(Failure::Usage("--max-m must be positive".into()));
    }
    let r = graph_report(q, marker, max_m)?;
    println!("q={} vertices={} edges={}", r.q, r.vertices, r.edges);
    let degrees = r.degree_mismatches.is_empty();
    println!(
        "out-degree formula: {} ({} mismatches)",
        verdict(degrees),
        r.degree_mismatches.len()
    );
    let c = r.c.map_or("-".to_string(), |c| c.to_string());
    println!(
        "marker {} reachable: {} (c={c})",
        r.marker,
        verdict(r.reaches_marker)
    );
    let growth = r.reaches_marker && r.bound_failures.is_empty();
    let failing: Vec<String> = r
        .bound_failures
        .iter()
        .map(|&m| format!("M({m})={}", r.counts[m - 1]))
        .collect();
    println!(
        "growth bound m=1..{max_m}: {} [{}]",
        verdict(growth),
        failing.join(", ")
    );
    if degrees && growth {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = match &cli.command {
        Command::Simulate { threads, .. } => *threads,
        _ => Some(1),
    };
    init_pool(threads)?;
    match cli.command {
        Command::Encode {
            code,
            input,
            output,
            dna,
        } => run_encode(&code, &input, &output, dna),
        Command::Decode {
            code,
            input,
            output,
            dna,
        } => run_decode(&code, &input, output.as_deref(), dna),
        Command::Simulate {
            code,
            trials,
            max_dups,
            seed,
            no_substitution,
            failures,
            ..
        } => run_simulate(
            &code,
            trials,
            max_dups,
            seed,
            !no_substitution,
            failures.as_deref(),
        ),
        Command::Rates {
            q, m_range, sigma, ..
        } => run_rates(q, m_range, sigma.as_deref()),
        Command::Verify(Verify::Lemma1 { base, cap, q }) => run_lemma1(&base, cap, q),
        Command::Verify(Verify::Theorem1 {
            trials,
            q,
            max_len,
            max_dups,
            seed,
        }) => run_theorem1(trials, q, max_len, max_dups, seed),
        Command::Verify(Verify::Graph { q, marker, max_m }) => run_graph(q, &marker, max_m),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("dupsub: {msg}");
            ExitCode::from(2)
        }
    }
}

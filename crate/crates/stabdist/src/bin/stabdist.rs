//! Command-line front-end: exact distributions, averages, tails, bounds,
//! Page comparisons, sampling and verification, emitted as pretty text,
//! JSON (`stabdist/1` schema) or RFC-4180 CSV.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use stabdist::counts::{self, rational_to_f64, TailMode};
use stabdist::error::Error;
use stabdist::report::{self, CheckResult, CompareRow};
use stabdist::sampling::{self, SamplerConfig};

/// Exact Page evaluation cap; above this the Kahan float fallback is used.
const PAGE_EXACT_CLI_MAX: usize = 24;
/// Only emit the exact Page rational when its digits stay printable.
const PAGE_RATIONAL_PRINT_MAX: usize = 20;
/// Soft cap for the sampling tier; per-sample cost grows as N^3.
const SAMPLING_MAX_QUBITS: usize = 24;

#[derive(Parser)]
#[command(
    name = "stabdist",
    version,
    about = "Entanglement statistics of uniformly random stabilizer states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Sum from E = 1, exactly as the closed form is stated.
    PaperLiteral,
    /// Sum from E = 0, including the unentangled mass.
    Inclusive,
}

impl From<ModeArg> for TailMode {
    fn from(m: ModeArg) -> TailMode {
        match m {
            ModeArg::PaperLiteral => TailMode::PaperLiteral,
            ModeArg::Inclusive => TailMode::Inclusive,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact entanglement distribution across one cut.
    Dist {
        /// Total number of qubits.
        #[arg(long)]
        n: usize,
        /// Qubits on side A of the cut.
        #[arg(long)]
        na: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact average entanglement in ebits.
    Avg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact lower-tail probability P(S_A < mean - eps).
    Tail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        /// Exact rational, e.g. `2` or `5/2`.
        #[arg(long)]
        epsilon: String,
        /// Lower limit of the tail sum.
        #[arg(long, value_enum, default_value_t = ModeArg::Inclusive)]
        mode: ModeArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gaussian-integral upper bound on the lower tail.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        /// Exact rational in [1, N_A - 1].
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Average entanglement of Haar-random general states (Page value).
    Page {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample uniform stabilizer states and histogram their entanglement.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        /// Number of states to draw.
        #[arg(long)]
        samples: u64,
        /// RNG seed; runs are bit-reproducible given (seed, workers).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to $STABDIST_WORKERS, then 1.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the closed forms against the enumerator or the sampler.
    Verify {
        #[arg(long)]
        n: usize,
        /// Single cut to check (defaults to all cuts).
        #[arg(long, conflicts_with = "all_cuts")]
        na: Option<usize>,
        /// Check every cut 1..N-1.
        #[arg(long)]
        all_cuts: bool,
        /// Switch to the sampling tier with this many samples.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        /// Minimum acceptable chi-square p-value in the sampling tier.
        #[arg(long, default_value_t = 1e-3)]
        p_threshold: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List every stabilizer state (N <= 5).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stabilizer vs Page average for every cut of an N-qubit system.
    Compare {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact ratio of the two topmost state counts, n_(NA-1)/n_NA.
    Ratio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        na: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn writer_for(out: &OutputArgs) -> io::Result<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Error> {
    let mut w = writer_for(out).map_err(io_error)?;
    w.write_all(text.as_bytes()).and_then(|()| w.flush()).map_err(io_error)
}

fn io_error(e: io::Error) -> Error {
    Error::Domain(format!("output failed: {e}"))
}

fn default_workers(flag: Option<usize>) -> Result<usize, Error> {
    if let Some(w) = flag {
        if w == 0 {
            return Err(Error::Domain("workers must be at least 1".into()));
        }
        return Ok(w);
    }
    match std::env::var("STABDIST_WORKERS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| Error::Domain(format!("invalid STABDIST_WORKERS value {v:?}"))),
        Err(_) => Ok(1),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Dist { n, na, out } => cmd_dist(n, na, &out),
        Command::Avg { n, na, out } => cmd_avg(n, na, &out),
        Command::Tail { n, na, epsilon, mode, out } => cmd_tail(n, na, &epsilon, mode, &out),
        Command::Bound { n, na, epsilon, out } => cmd_bound(n, na, &epsilon, &out),
        Command::Page { n, na, out } => cmd_page(n, na, &out),
        Command::Sample { n, na, samples, seed, workers, out } => {
            cmd_sample(n, na, samples, seed, workers, &out)
        }
        Command::Verify { n, na, all_cuts, samples, seed, workers, p_threshold, out } => {
            cmd_verify(n, na, all_cuts, samples, seed, workers, p_threshold, &out)
        }
        Command::Enumerate { n, out } => cmd_enumerate(n, &out),
        Command::Compare { n, out } => cmd_compare(n, &out),
        Command::Ratio { n, na, out } => cmd_ratio(n, na, &out),
    }
}

fn cmd_dist(n: usize, na: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    let d = counts::distribution(n, na)?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::distribution_json(&d)),
        Format::Csv => report::distribution_csv(&d)?,
        Format::Pretty => {
            let mut s = format!(
                "entanglement distribution for N={n}, N_A={na} ({} states)\n",
                report::display_big(&d.total_states().to_string())
            );
            s.push_str("E  count  probability\n");
            for (e, (c, p)) in d.counts().iter().zip(d.probs()).enumerate() {
                s.push_str(&format!(
                    "{e}  {}  {} = {:.6e}\n",
                    report::display_big(&c.to_string()),
                    report::display_big(&report::rational_compact(p)),
                    rational_to_f64(p)
                ));
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_avg(n: usize, na: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    let avg = counts::average_entanglement(n, na)?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::average_json(n, na, &avg)),
        Format::Csv => report::average_csv(n, na, &avg)?,
        Format::Pretty => format!(
            "average entanglement for N={n}, N_A={na}: {} = {:.12} ebits\n",
            report::display_big(&report::rational_compact(&avg)),
            rational_to_f64(&avg)
        ),
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tail(
    n: usize,
    na: usize,
    epsilon: &str,
    mode: ModeArg,
    out: &OutputArgs,
) -> Result<ExitCode, Error> {
    let eps = report::parse_rational(epsilon)?;
    let tail = counts::tail_probability(n, na, &eps, mode.into())?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::tail_json(n, na, &tail)),
        Format::Csv => report::tail_csv(n, na, &tail)?,
        Format::Pretty => {
            let mut s = format!(
                "P(S_A < mean - {}) for N={n}, N_A={na} ({} mode)\n",
                report::rational_compact(&tail.epsilon),
                tail.mode.as_str()
            );
            s.push_str(&format!("threshold (largest E summed): {}\n", tail.threshold));
            s.push_str(&format!(
                "exact tail: {} = {:.6e}\n",
                report::display_big(&report::rational_compact(&tail.exact_tail)),
                rational_to_f64(&tail.exact_tail)
            ));
            match tail.gaussian_bound {
                Some(b) => s.push_str(&format!("gaussian bound: {b:.6e}\n")),
                None => s.push_str("gaussian bound: undefined for these parameters\n"),
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(n: usize, na: usize, epsilon: &str, out: &OutputArgs) -> Result<ExitCode, Error> {
    let eps = report::parse_rational(epsilon)?;
    let bound = counts::tail_bound_gaussian(n, na, &eps)?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::bound_json(n, na, &eps, bound)),
        Format::Csv => report::bound_csv(n, na, &eps, bound)?,
        Format::Pretty => format!(
            "gaussian tail bound for N={n}, N_A={na}, eps={}: {bound:.6e}\n",
            report::rational_compact(&eps)
        ),
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_page(n: usize, na: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    let (page, ebits, method) = if n <= PAGE_EXACT_CLI_MAX {
        let p = counts::page_average(n, na)?;
        let ebits = p.ebits;
        (Some(p), ebits, "exact")
    } else {
        (None, counts::page_average_float(n, na)?, "kahan-float")
    };
    let include_rational = n <= PAGE_RATIONAL_PRINT_MAX;
    let text = match out.format {
        Format::Json => format!(
            "{}\n",
            report::page_json(n, na, page.as_ref(), ebits, method, include_rational)
        ),
        Format::Csv => report::page_csv(n, na, page.as_ref(), ebits, method, include_rational)?,
        Format::Pretty => {
            let mut s =
                format!("Page average for N={n}, N_A={na}: {ebits:.12} ebits ({method})\n");
            if let (Some(p), true) = (&page, include_rational) {
                s.push_str(&format!(
                    "pre-ln2 value: {}\n",
                    report::display_big(&report::rational_compact(&p.pre_ln2))
                ));
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(
    n: usize,
    na: usize,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
    out: &OutputArgs,
) -> Result<ExitCode, Error> {
    if n > SAMPLING_MAX_QUBITS {
        return Err(Error::Domain(format!("sampling is capped at N = {SAMPLING_MAX_QUBITS}")));
    }
    let config = SamplerConfig::new(n, samples, seed, default_workers(workers)?)?;
    let hist = sampling::empirical_distribution(&config, na)?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::histogram_json(&hist)),
        Format::Csv => report::histogram_csv(&hist)?,
        Format::Pretty => {
            let mut s = format!(
                "sampled entanglement histogram for N={n}, N_A={na} \
                 ({samples} samples, seed {seed}, {} workers, {})\n",
                config.worker_count,
                sampling::SAMPLER_VERSION
            );
            s.push_str("E  count  frequency\n");
            for (e, c) in hist.counts_by_e().iter().enumerate() {
                s.push_str(&format!("{e}  {c}  {:.6}\n", *c as f64 / samples as f64));
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_enumeration_tier(n: usize, cuts: &[usize]) -> Result<Vec<CheckResult>, Error> {
    let mut checks = Vec::new();
    let total = counts::n_total(n)?;
    let enumerated = sampling::enumerate_all_states(n)?.count();
    checks.push(CheckResult::new(
        "enumeration-count",
        total == enumerated.into(),
        format!("enumerated {enumerated}, closed form {total}"),
    ));
    for &na in cuts {
        let oracle = sampling::brute_force_counts(n, na)?;
        let d = counts::distribution(n, na)?;
        let closed: Vec<u64> = d
            .counts()
            .iter()
            .map(|c| u64::try_from(c).expect("small-N counts fit u64"))
            .collect();
        checks.push(CheckResult::new(
            format!("oracle-equality-na{na}"),
            oracle == closed,
            format!("enumerated counts {oracle:?}, closed form {closed:?}"),
        ));
        let psum: BigRational = d.probs().iter().sum();
        checks.push(CheckResult::new(
            format!("normalization-na{na}"),
            psum == BigRational::from_integer(1.into()),
            format!("sum of probabilities = {}", report::rational_compact(&psum)),
        ));
    }
    Ok(checks)
}

fn verify_sampling_tier(
    n: usize,
    cuts: &[usize],
    samples: u64,
    seed: u64,
    workers: usize,
    p_threshold: f64,
) -> Result<Vec<CheckResult>, Error> {
    if n > SAMPLING_MAX_QUBITS {
        return Err(Error::Domain(format!(
            "the sampling tier is capped at N = {SAMPLING_MAX_QUBITS}"
        )));
    }
    let config = SamplerConfig::new(n, samples, seed, workers)?;
    let mut checks = Vec::new();
    for &na in cuts {
        let hist = sampling::empirical_distribution(&config, na)?;
        let exact = counts::distribution(n, na)?;
        let chi = sampling::chi_square_test(&hist, &exact)?;
        let tv = hist.total_variation_distance(&exact)?;
        checks.push(CheckResult::new(
            format!("chi-square-na{na}"),
            chi.p_value >= p_threshold,
            format!("{}, tv distance = {tv:.6}", report::chi_square_detail(&chi)),
        ));
    }
    Ok(checks)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    n: usize,
    na: Option<usize>,
    all_cuts: bool,
    samples: Option<u64>,
    seed: u64,
    workers: Option<usize>,
    p_threshold: f64,
    out: &OutputArgs,
) -> Result<ExitCode, Error> {
    if n < 2 {
        return Err(Error::Domain("verification needs at least two qubits".into()));
    }
    let cuts: Vec<usize> = match (na, all_cuts) {
        (Some(k), false) => vec![k],
        _ => (1..n).collect(),
    };
    let checks = match samples {
        None => verify_enumeration_tier(n, &cuts)?,
        Some(s) => {
            verify_sampling_tier(n, &cuts, s, seed, default_workers(workers)?, p_threshold)?
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    let text = match out.format {
        Format::Json => format!("{}\n", report::verification_json(n, &checks)),
        Format::Csv => report::verification_csv(&checks)?,
        Format::Pretty => {
            let mut s = String::new();
            for c in &checks {
                s.push_str(&format!(
                    "{} {}: {}\n",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    emit(out, &text)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_enumerate(n: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    let total = counts::n_total(n)?;
    let states = sampling::enumerate_all_states(n)?;
    let mut w = writer_for(out).map_err(io_error)?;
    let stream = || -> io::Result<()> {
        match out.format {
            Format::Json => {
                write!(
                    w,
                    "{{\"schema\":\"{}\",\"kind\":\"states\",\"n\":{n},\"count\":\"{total}\",\"states\":[",
                    report::SCHEMA_VERSION
                )?;
                for (i, state) in states.enumerate() {
                    let gens: Vec<String> =
                        state.generators().iter().map(|g| g.to_string()).collect();
                    let sep = if i == 0 { "" } else { "," };
                    write!(w, "{sep}{}", serde_json::json!(gens))?;
                }
                writeln!(w, "]}}")?;
            }
            Format::Csv => {
                writeln!(w, "index,generators")?;
                for (i, state) in states.enumerate() {
                    let gens: Vec<String> =
                        state.generators().iter().map(|g| g.to_string()).collect();
                    writeln!(w, "{i},{}", gens.join(";"))?;
                }
            }
            Format::Pretty => {
                writeln!(w, "{total} stabilizer states on {n} qubits")?;
                for (i, state) in states.enumerate() {
                    let gens: Vec<String> =
                        state.generators().iter().map(|g| g.to_string()).collect();
                    writeln!(w, "{i}: {}", gens.join(" "))?;
                }
            }
        }
        w.flush()
    };
    stream().map_err(io_error)?;
    Ok(ExitCode::SUCCESS)
}

fn page_value_for(n: usize, na: usize) -> Result<f64, Error> {
    if n <= PAGE_EXACT_CLI_MAX {
        Ok(counts::page_average(n, na)?.ebits)
    } else {
        counts::page_average_float(n, na)
    }
}

fn cmd_compare(n: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    if n < 2 {
        return Err(Error::Domain("comparison needs at least two qubits".into()));
    }
    let mut rows = Vec::with_capacity(n - 1);
    for na in 1..n {
        rows.push(CompareRow {
            n_a: na,
            stab_avg: counts::average_entanglement(n, na)?,
            page_avg: page_value_for(n, na)?,
        });
    }
    let text = match out.format {
        Format::Json => format!("{}\n", report::compare_json(n, &rows)),
        Format::Csv => report::compare_csv(&rows)?,
        Format::Pretty => {
            let mut s = format!("average entanglement for N={n}: stabilizer vs Haar-random\n");
            s.push_str("na  stabilizer  page\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}  {:.6}  {:.6}\n",
                    r.n_a,
                    rational_to_f64(&r.stab_avg),
                    r.page_avg
                ));
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio(n: usize, na: usize, out: &OutputArgs) -> Result<ExitCode, Error> {
    let ratio = counts::mode_ratio(n, na)?;
    let text = match out.format {
        Format::Json => format!("{}\n", report::ratio_json(n, na, &ratio)),
        Format::Csv => report::ratio_csv(n, na, &ratio)?,
        Format::Pretty => format!(
            "n_(N_A-1)/n_(N_A) for N={n}, N_A={na}: {} = {:.9}\n",
            report::display_big(&report::rational_compact(&ratio)),
            rational_to_f64(&ratio)
        ),
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

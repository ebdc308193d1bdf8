//! Command-line interface: bounds, witness extraction, avoidance search,
//! structure analysis, batch verification, and coloring generation.
//!
//! Exit codes are a stable contract:
//! - 0: success (for `search`: an avoiding coloring was found)
//! - 10: `search` exhausted the space without finding an avoiding coloring
//! - 20: `search` ran out of budget
//! - 30: `extract` failed and wrote a counterexample certificate
//! - 1: `verify` saw at least one failing trial
//! - 2: usage errors, unreadable or malformed inputs, dimension mismatches

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use hypermatch::{
    afl_bound, analyze, certify, conjecture_bound, extraction_certificate, generate_coloring,
    pipelines, search_avoiding_parallel, thm1_extract, thm2_extract, thm3_extract, BoundParams,
    Budget, Coloring, Error, GeneratorSpec, Matching, SearchOutcome, SearchProblem,
};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Matchings in edge-colored complete uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the two vertex-count bounds for (t, s, k, r).
    Bounds {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Extract a 2-colored matching witness from a coloring file.
    Extract {
        /// Coloring file (format: `n r t` line, then one color digit per edge).
        #[arg(long)]
        input: PathBuf,
        /// Extraction target: 1 (n=12, size 4), 2 (n=16, size 5), 3 (n=19, size 6).
        #[arg(long)]
        which: u8,
        /// Certificate destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for a t-coloring with no s-colored matching of size k.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        /// Node budget; 0 means unlimited.
        #[arg(long, default_value_t = 1_000_000_000)]
        node_limit: u64,
        /// Wall-clock budget in seconds; 0 means unlimited.
        #[arg(long, default_value_t = 600)]
        time_limit_secs: u64,
        /// Enable the vertex lex-leader test every D depth levels.
        #[arg(long, value_name = "D")]
        vertex_symmetry: Option<usize>,
        /// Parallel workers over disjoint subtrees.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Certificate destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every structure detector over a coloring file and print the census.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Batch-verify an extraction target over seeded generated colorings.
    Verify {
        /// Extraction target: 1, 2, or 3.
        #[arg(long)]
        which: u8,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator: uniform, split, near-mono(M), or planted-disk.
        #[arg(long, default_value = "uniform")]
        generator: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Generate a coloring file from a seeded generator.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        /// Generator: uniform, split, near-mono(M), or planted-disk.
        #[arg(long, default_value = "uniform")]
        generator: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coloring destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_EXHAUSTED: i32 = 10;
const EXIT_BUDGET: i32 = 20;
const EXIT_COUNTEREXAMPLE: i32 = 30;
const EXIT_INTERNAL: i32 = 70;

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli.command));
}

fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn write_output(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn read_coloring(path: &PathBuf) -> Result<Coloring, i32> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_error(format_args!("cannot read {}: {e}", path.display())))?;
    Coloring::deserialize(&text).map_err(usage_error)
}

fn run(command: Command) -> i32 {
    match command {
        Command::Bounds { t, s, k, r } => cmd_bounds(t, s, k, r),
        Command::Extract { input, which, out } => cmd_extract(&input, which, &out),
        Command::Search {
            n,
            r,
            t,
            s,
            k,
            node_limit,
            time_limit_secs,
            vertex_symmetry,
            workers,
            out,
        } => cmd_search(n, r, t, s, k, node_limit, time_limit_secs, vertex_symmetry, workers, &out),
        Command::Analyze { input, out } => cmd_analyze(&input, &out),
        Command::Verify { which, trials, seed, generator, workers } => {
            cmd_verify(which, trials, seed, &generator, workers)
        }
        Command::Generate { n, r, t, generator, seed, out } => {
            cmd_generate(n, r, t, &generator, seed, &out)
        }
    }
}

fn cmd_bounds(t: usize, s: usize, k: usize, r: usize) -> i32 {
    let params = match BoundParams::new(t, s, k, r) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    println!("params: t={t} s={s} k={k} r={r}");
    println!("conjecture bound: {}", conjecture_bound(&params));
    println!("afl bound: {}", afl_bound(&params));
    let target = match (t, s, k, r) {
        (3, 2, 4, 3) => Some((1, 12, 4)),
        (3, 2, 5, 3) => Some((2, 16, 5)),
        (3, 2, 6, 3) => Some((3, 19, 6)),
        _ => None,
    };
    match target {
        Some((which, n, size)) => println!(
            "extraction target: {which} (2-colored matching of size {size} on {n} vertices)"
        ),
        None => println!("extraction target: none"),
    }
    EXIT_OK
}

fn extractor_dims(which: u8) -> Option<(usize, usize)> {
    match which {
        1 => Some((12, 4)),
        2 => Some((16, 5)),
        3 => Some((19, 6)),
        _ => None,
    }
}

fn run_extractor(which: u8, coloring: &Coloring) -> hypermatch::Result<(Matching, Option<hypermatch::ExtractionTrace>)> {
    match which {
        1 => thm1_extract(coloring).map(|m| (m, None)),
        2 => thm2_extract(coloring).map(|(m, t)| (m, Some(t))),
        3 => thm3_extract(coloring).map(|(m, t)| (m, Some(t))),
        _ => unreachable!("validated by caller"),
    }
}

fn cmd_extract(input: &PathBuf, which: u8, out: &Option<PathBuf>) -> i32 {
    let Some((n, size)) = extractor_dims(which) else {
        return usage_error(format_args!("--which must be 1, 2, or 3, got {which}"));
    };
    let coloring = match read_coloring(input) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if coloring.n() != n || coloring.r() != 3 || coloring.t() != 3 {
        return usage_error(format_args!(
            "target {which} needs (n, r, t) = ({n}, 3, 3), input has ({}, {}, {})",
            coloring.n(),
            coloring.r(),
            coloring.t()
        ));
    }
    match run_extractor(which, &coloring) {
        Ok((matching, trace)) => {
            if let Err(e) = matching.validate(&coloring) {
                eprintln!("error: witness failed re-validation: {e}");
                return EXIT_INTERNAL;
            }
            debug_assert_eq!(matching.len(), size);
            let cert = match extraction_certificate(which, &coloring, &matching, trace.as_ref()) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            if let Err(e) = write_output(out, &cert) {
                return usage_error(e);
            }
            EXIT_OK
        }
        Err(Error::ExtractionFailed(reason)) => {
            let cert = pipelines::counterexample_certificate(which, &coloring, &reason);
            if let Err(e) = write_output(out, &cert) {
                return usage_error(e);
            }
            eprintln!("extraction failed: {reason}");
            eprintln!("counterexample certificate written");
            EXIT_COUNTEREXAMPLE
        }
        Err(e) => usage_error(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    n: usize,
    r: usize,
    t: usize,
    s: usize,
    k: usize,
    node_limit: u64,
    time_limit_secs: u64,
    vertex_symmetry: Option<usize>,
    workers: usize,
    out: &Option<PathBuf>,
) -> i32 {
    let mut problem = match SearchProblem::new(n, r, t, s, k) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    problem = problem.with_budget(Budget {
        max_nodes: if node_limit == 0 { u64::MAX } else { node_limit },
        max_time: (time_limit_secs > 0).then(|| Duration::from_secs(time_limit_secs)),
    });
    if let Some(d) = vertex_symmetry {
        problem = problem.with_vertex_lex_leader(d);
    }
    let outcome = match search_avoiding_parallel(&problem, workers.max(1)) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    let cert = match certify(&outcome, &problem) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    if let Err(e) = write_output(out, &cert.text) {
        return usage_error(e);
    }
    match outcome {
        SearchOutcome::Found { .. } => EXIT_OK,
        SearchOutcome::Exhausted { .. } => EXIT_EXHAUSTED,
        SearchOutcome::BudgetExceeded { .. } => EXIT_BUDGET,
    }
}

fn cmd_analyze(input: &PathBuf, out: &Option<PathBuf>) -> i32 {
    let coloring = match read_coloring(input) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match analyze(&coloring) {
        Ok(report) => {
            if let Err(e) = write_output(out, &report.render()) {
                return usage_error(e);
            }
            EXIT_OK
        }
        Err(e) => usage_error(e),
    }
}

/// Per-trial seed derivation: all randomness flows from the single seed.
fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn cmd_verify(which: u8, trials: usize, seed: u64, generator: &str, workers: usize) -> i32 {
    let Some((n, size)) = extractor_dims(which) else {
        return usage_error(format_args!("--which must be 1, 2, or 3, got {which}"));
    };
    if trials == 0 {
        return usage_error("--trials must be positive");
    }
    let spec = match GeneratorSpec::parse(generator) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    if spec == GeneratorSpec::PlantedDisk && which != 1 {
        return usage_error("planted-disk colorings have 12 vertices; only --which 1 applies");
    }

    let run_trial = |trial: usize| -> Result<(), String> {
        let tseed = trial_seed(seed, trial);
        let coloring = generate_coloring(n, 3, 3, &spec, tseed)
            .map_err(|e| format!("trial {trial}: generator: {e}"))?;
        let (matching, _trace) = run_extractor(which, &coloring)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        matching
            .validate(&coloring)
            .map_err(|e| format!("trial {trial}: invalid witness: {e}"))?;
        if matching.len() != size {
            return Err(format!("trial {trial}: witness size {} != {size}", matching.len()));
        }
        if matching.colorset().len() > 2 {
            return Err(format!("trial {trial}: witness uses {} colors", matching.colorset().len()));
        }
        Ok(())
    };

    let start = Instant::now();
    let failures: Vec<String> = if workers > 1 {
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(p) => p,
            Err(e) => return usage_error(e),
        };
        pool.install(|| {
            (0..trials)
                .into_par_iter()
                .filter_map(|i| run_trial(i).err())
                .collect()
        })
    } else {
        (0..trials).filter_map(|i| run_trial(i).err()).collect()
    };
    let elapsed = start.elapsed();

    println!("VERIFY target={which} generator={spec} trials={trials} seed={seed}");
    println!("PASS {}/{trials}", trials - failures.len());
    eprintln!("time: {:.3}s", elapsed.as_secs_f64());
    if failures.is_empty() {
        EXIT_OK
    } else {
        for f in failures.iter().take(10) {
            eprintln!("FAIL {f}");
        }
        EXIT_VERIFY_FAILED
    }
}

fn cmd_generate(
    n: usize,
    r: usize,
    t: usize,
    generator: &str,
    seed: u64,
    out: &Option<PathBuf>,
) -> i32 {
    let spec = match GeneratorSpec::parse(generator) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    match generate_coloring(n, r, t, &spec, seed) {
        Ok(coloring) => {
            if let Err(e) = write_output(out, &coloring.serialize()) {
                return usage_error(e);
            }
            eprintln!("generated n={n} r={r} t={t} generator={spec} seed={seed}");
            EXIT_OK
        }
        Err(e) => usage_error(e),
    }
}

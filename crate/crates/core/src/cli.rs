//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 ok, 1 a guarantee was violated (invalid solution, failed
//! internal audit, or `opt > r · alg` in the bench), 2 bad input or
//! parameters.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{exact_opt, ExactConfig};
use crate::format::{dump_graph, load_graph, solution_from_json, solution_to_json};
use crate::generate::{self, Family};
use crate::graph::Graph;
use crate::ratio::within_ratio;
use crate::solution::verify_solution;
use crate::solver::{first_level, solve_with_report, SolverConfig};

#[derive(Parser, Debug)]
#[command(name = "pathcover", version, about = "Vertex-disjoint paths of order at least four")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Approximate solution of a graph file, as JSON.
    Solve {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check the solution and fail on any internal audit.
        #[arg(long)]
        verify: bool,
        /// Print phase and move logs to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Optimal solution by exhaustive search.
    Exact {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest vertex count to accept.
        #[arg(long, default_value_t = 20)]
        cap: usize,
    },
    /// Checks a solution JSON against a graph file.
    Verify { graph: PathBuf, solution: PathBuf },
    /// Writes a random graph file.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Component census after the rescue loop, as JSON.
    Census {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solves a batch of random instances and compares against the exact
    /// optimum where the instance is small enough.
    Bench {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exact optimum only for instances with at most this many vertices.
        #[arg(long, default_value_t = 12)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write 0 in the ms column so reruns are byte-identical.
        #[arg(long)]
        no_time: bool,
        /// Worker threads; rows stay in instance order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// gnm, regular or planted-paths.
    pub family: Family,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Edge count for gnm; drawn per instance when absent.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree for regular.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Planted path count.
    #[arg(long, default_value_t = 2)]
    pub paths: usize,
    /// Isolated vertices added to planted paths.
    #[arg(long, default_value_t = 2)]
    pub extra: usize,
    /// Random edges added to planted paths.
    #[arg(long, default_value_t = 3)]
    pub noise: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            _ => 2,
        }
    }
}

impl From<generate::GenError> for CliError {
    fn from(e: generate::GenError) -> Self {
        CliError::Params(e.to_string())
    }
}

/// One bench row.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub alg: usize,
    /// Exact optimum, or the planted lower bound for planted paths when the
    /// instance is above the cap.
    pub opt: Option<usize>,
    /// `opt <= r · alg`; present only when `opt` is.
    pub ratio_ok: Option<bool>,
    pub moves: usize,
    pub depth: usize,
    pub ms: f64,
    /// Invalid solution or failed audits.
    pub problems: Vec<String>,
}

impl RunReport {
    fn ratio_text(&self) -> String {
        match self.opt {
            None => String::new(),
            Some(0) => "1.0000".into(),
            Some(_) if self.alg == 0 => "inf".into(),
            Some(o) => format!("{:.4}", o as f64 / self.alg as f64),
        }
    }
}

pub const CSV_HEADER: &str = "instance,n,m,alg,opt,ratio,moves,depth,ms";

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve {
            input,
            out,
            verify,
            trace,
        } => cmd_solve(input, out.as_deref(), *verify, *trace),
        Command::Exact { input, out, cap } => cmd_exact(input, out.as_deref(), *cap),
        Command::Verify { graph, solution } => cmd_verify(graph, solution),
        Command::Gen { family, seed, out } => {
            let g = generate_instance(family, *seed)?.0;
            emit(out.as_deref(), &dump_graph(&g))
        }
        Command::Census { input, out } => cmd_census(input, out.as_deref()),
        Command::Bench {
            family,
            count,
            seed,
            cap,
            out,
            no_time,
            jobs,
        } => {
            let reports = bench(family, *count, *seed, *cap, (*jobs).max(1))?;
            emit(out.as_deref(), &bench_csv(&reports, *no_time))?;
            let bad: Vec<String> = reports
                .iter()
                .filter(|r| r.ratio_ok == Some(false) || !r.problems.is_empty())
                .map(|r| {
                    let mut s = format!("instance {}: alg {} opt {:?}", r.instance, r.alg, r.opt);
                    for p in &r.problems {
                        let _ = write!(s, "; {p}");
                    }
                    s
                })
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Violation(bad.join("\n")))
            }
        }
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_graph(path: &FsPath) -> Result<Graph, CliError> {
    load_graph(&read(path)?).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(out: Option<&FsPath>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            Ok(())
        }
    }
}

fn cmd_solve(input: &FsPath, out: Option<&FsPath>, verify: bool, trace: bool) -> Result<(), CliError> {
    let g = read_graph(input)?;
    let cfg = SolverConfig {
        trace,
        ..SolverConfig::default()
    };
    let report = solve_with_report(&g, &cfg);
    if trace {
        for line in &report.trace {
            eprintln!("{line}");
        }
        for l in &report.levels {
            eprintln!(
                "level {}: phase1 {:.1} ms, cover {:.1} ms, rescue {:.1} ms, total {:.1} ms",
                l.depth, l.times.phase1_ms, l.times.cover_ms, l.times.rescue_ms, l.times.total_ms
            );
        }
    }
    emit(out, &solution_to_json(&report.solution))?;
    if verify {
        let mut problems: Vec<String> = verify_solution(&g, &report.solution)
            .problems
            .iter()
            .map(ToString::to_string)
            .collect();
        problems.extend(report.audits());
        if !problems.is_empty() {
            return Err(CliError::Violation(problems.join("\n")));
        }
    }
    Ok(())
}

fn cmd_exact(input: &FsPath, out: Option<&FsPath>, cap: usize) -> Result<(), CliError> {
    let g = read_graph(input)?;
    let outcome = exact_opt(&g, &ExactConfig::with_cap(cap)).map_err(|e| CliError::Params(e.to_string()))?;
    emit(out, &solution_to_json(&outcome.solution))
}

fn cmd_verify(graph: &FsPath, solution: &FsPath) -> Result<(), CliError> {
    let g = read_graph(graph)?;
    let s = solution_from_json(&read(solution)?).map_err(|e| CliError::Input {
        path: solution.display().to_string(),
        message: e.to_string(),
    })?;
    let v = verify_solution(&g, &s);
    if v.is_valid() {
        println!("valid: value {}", s.value());
        Ok(())
    } else {
        let lines: Vec<String> = v.problems.iter().map(ToString::to_string).collect();
        Err(CliError::Violation(lines.join("\n")))
    }
}

#[derive(Serialize)]
struct CensusDump<'a> {
    n: usize,
    m: usize,
    branch: crate::solver::Branch,
    census: &'a crate::components::Census,
    /// Vertex labels are 1-based, as in graph files.
    components: Vec<crate::components::ComponentSummary>,
    audits: &'a [String],
}

fn cmd_census(input: &FsPath, out: Option<&FsPath>) -> Result<(), CliError> {
    let g = read_graph(input)?;
    let level = first_level(&g);
    let dump = CensusDump {
        n: level.n,
        m: level.m,
        branch: level.branch,
        census: &level.census,
        components: level.components.iter().map(|k| k.relabeled(|v| v + 1)).collect(),
        audits: &level.audits,
    };
    emit(out, &serde_json::to_string_pretty(&dump).expect("plain data"))?;
    if level.audits.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(level.audits.join("\n")))
    }
}

/// The instance for `seed`, with the planted lower bound when there is one.
pub fn generate_instance(fa: &FamilyArgs, seed: u64) -> Result<(Graph, Option<usize>), CliError> {
    Ok(match fa.family {
        Family::Gnm => {
            let max = fa.n * fa.n.saturating_sub(1) / 2;
            let m = match fa.m {
                Some(m) => m,
                None => generate::rng(seed ^ 0x9e37_79b9_7f4a_7c15).gen_range(0..=max),
            };
            (generate::gnm(fa.n, m, seed)?, None)
        }
        Family::Regular => (generate::regular(fa.n, fa.d, seed)?, None),
        Family::PlantedPaths => {
            let (g, planted) = generate::planted_paths(fa.paths, fa.extra, fa.noise, seed)?;
            (g, Some(planted))
        }
    })
}

/// Runs one bench instance.
pub fn bench_one(fa: &FamilyArgs, instance: usize, seed: u64, cap: usize) -> Result<RunReport, CliError> {
    let (g, planted) = generate_instance(fa, seed.wrapping_add(instance as u64))?;
    let start = Instant::now();
    let report = solve_with_report(&g, &SolverConfig::default());
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut problems: Vec<String> = verify_solution(&g, &report.solution)
        .problems
        .iter()
        .map(ToString::to_string)
        .collect();
    problems.extend(report.audits());
    let alg = report.solution.value();
    let opt = if g.n() <= cap {
        let v = exact_opt(&g, &ExactConfig::with_cap(cap))
            .map_err(|e| CliError::Params(e.to_string()))?
            .solution
            .value();
        if let Some(p) = planted {
            if v < p {
                problems.push(format!("optimum {v} below planted {p}"));
            }
        }
        Some(v)
    } else {
        planted
    };
    Ok(RunReport {
        instance,
        n: g.n(),
        m: g.m(),
        alg,
        opt,
        ratio_ok: opt.map(|o| within_ratio(o, alg)),
        moves: report.move_count(),
        depth: report.depth(),
        ms,
        problems,
    })
}

/// Runs `count` instances on `jobs` threads, in instance order.
pub fn bench(fa: &FamilyArgs, count: usize, seed: u64, cap: usize, jobs: usize) -> Result<Vec<RunReport>, CliError> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunReport, CliError>>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(count.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = bench_one(fa, i, seed, cap);
                slots.lock().expect("no worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// CSV with a trailing summary row: the largest observed `opt / alg` in
/// the ratio column, total moves, largest depth and total time.
pub fn bench_csv(reports: &[RunReport], no_time: bool) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    if reports.is_empty() {
        return s;
    }
    for r in reports {
        let opt = r.opt.map(|o| o.to_string()).unwrap_or_default();
        let ms = if no_time { 0.0 } else { r.ms };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{:.3}",
            r.instance,
            r.n,
            r.m,
            r.alg,
            opt,
            r.ratio_text(),
            r.moves,
            r.depth,
            ms
        );
    }
    // Compare fractions exactly; the worst is the largest opt / alg.
    let worst = reports
        .iter()
        .filter(|r| r.opt.is_some())
        .max_by(|a, b| {
            let (oa, ob) = (a.opt.unwrap() as u128, b.opt.unwrap() as u128);
            (oa * b.alg as u128).cmp(&(ob * a.alg as u128))
        });
    let ratio = worst.map(RunReport::ratio_text).unwrap_or_default();
    let moves: usize = reports.iter().map(|r| r.moves).sum();
    let depth = reports.iter().map(|r| r.depth).max().unwrap_or(0);
    let ms: f64 = if no_time { 0.0 } else { reports.iter().map(|r| r.ms).sum() };
    let _ = writeln!(s, "summary,,,,,{ratio},{moves},{depth},{ms:.3}");
    s
}

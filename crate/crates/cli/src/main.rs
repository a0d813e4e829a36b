use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use fracmatch::engine::CheckMode;
use fracmatch::instances::{builtin, load_instance, minindex_family1, minindex_family2, random_stream, ArrivalStream};
use fracmatch::lp::{build_deg4_lp, build_integral_deg3_lp, build_minindex_lp, simplex_max, LinearProgram, LpStatus};
use fracmatch::minindex::{family_ratio, optimal_parameters, MinIndexState};
use fracmatch::numeric::{golden_c, parse_rational, rat, rational_to_string, Golden};
use fracmatch::oracle::{max_matching, mu_sequence, run_stream, run_stream_with, Checkpoints, Graph};

const EXIT_CONFIG: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "fracmatch", version, about = "Exact experiments on online fractional matching at degree three")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an instance through the online algorithm.
    Run {
        /// Builtin name such as `consistent:4`, or `file:<path>`.
        #[arg(long)]
        instance: String,
        #[arg(long, value_enum, default_value_t = CheckpointArg::Arrival)]
        checkpoints: CheckpointArg,
        /// Check invariants only once, after the last arrival.
        #[arg(long)]
        no_strict: bool,
        /// Write the JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run random degree-three streams with every invariant checked.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 40)]
        edges: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Corrupt each finished run to exercise the failure path.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Solve the three upper-bound programs exactly.
    Bounds {
        /// Directory, or file name whose stem prefixes each program's file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Replay a MinIndex family instance.
    Minindex {
        #[arg(long)]
        family: u8,
        #[arg(long)]
        n: usize,
        /// Comma-separated probabilities such as `5/9,3/9,1/9,0`.
        #[arg(long)]
        p: Option<String>,
        /// Write one JSON line per placement here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Maximum matching sizes of an instance at each checkpoint.
    Oracle {
        #[arg(long)]
        instance: String,
        #[arg(long, value_enum, default_value_t = CheckpointArg::Batch)]
        checkpoints: CheckpointArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckpointArg {
    Arrival,
    Batch,
}

impl From<CheckpointArg> for Checkpoints {
    fn from(c: CheckpointArg) -> Self {
        match c {
            CheckpointArg::Arrival => Checkpoints::EveryArrival,
            CheckpointArg::Batch => Checkpoints::EveryBatch,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Instance(#[from] fracmatch::instances::InstanceError),
    #[error("{0}")]
    Io(#[from] io::Error),
    /// Already reported on standard output.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => EXIT_FAILURE,
            _ => EXIT_CONFIG,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { instance, checkpoints, no_strict, trace } => {
            cmd_run(&instance, checkpoints.into(), !no_strict, trace.as_deref())
        }
        Command::Fuzz { count, edges, seed, inject_fault } => cmd_fuzz(count, edges, seed, inject_fault),
        Command::Bounds { dump } => cmd_bounds(dump.as_deref()),
        Command::Minindex { family, n, p, trace } => cmd_minindex(family, n, p.as_deref(), trace.as_deref()),
        Command::Oracle { instance, checkpoints } => cmd_oracle(&instance, checkpoints.into()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(source: &str) -> Result<ArrivalStream, CliError> {
    let stream = match source.strip_prefix("file:") {
        Some(path) => load_instance(Path::new(path)).map_err(|e| CliError::Config(format!("{path}: {e}")))?,
        None => builtin(source)?,
    };
    stream.validate()?;
    Ok(stream)
}

fn writer(path: Option<&Path>) -> Result<Option<BufWriter<File>>, CliError> {
    Ok(match path {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    })
}

fn show(x: &Golden) -> String {
    format!("{x} = {}", x.to_decimal(6))
}

fn show_rational(r: &BigRational, places: usize) -> String {
    format!("{} = {}", rational_to_string(r), Golden::from_rational(r.clone()).to_decimal(places))
}

fn cmd_run(source: &str, checkpoints: Checkpoints, strict: bool, trace: Option<&Path>) -> Result<(), CliError> {
    let stream = load(source)?;
    let mut out = writer(trace)?;
    let mut io_error = None;
    let mode = if strict { CheckMode::Strict } else { CheckMode::OnDemand };
    let run = run_stream_with(&stream, checkpoints, mode, |state, outcome, report, record| {
        let Some(w) = out.as_mut() else { return };
        let event = serde_json::to_string(&state.trace_event(outcome, report)).expect("serializable");
        let mut result = writeln!(w, "{event}");
        if let Some(r) = record {
            result = result.and_then(|_| writeln!(w, "{}", r.to_json()));
        }
        if let Err(e) = result {
            io_error.get_or_insert(e);
        }
    })
    .map_err(|e| CliError::Config(format!("{}: {e}", stream.name)))?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if let Some(w) = out.as_mut() {
        w.flush()?;
    }

    let mut failure = run.invariant_failure.map(|(step, p, at)| format!("step {step}: {} at {at}", p.label()));
    if failure.is_none() {
        let report = run.state.check_invariants();
        if let Some((p, loc)) = report.first_failure() {
            failure = Some(format!("final state: {} at {}", p.label(), run.state.describe(&loc)));
        }
    }
    let c = golden_c();
    let opt = run.trace.records.last().map_or(0, |r| r.opt);
    println!("instance: {} ({} arrivals)", stream.name, stream.len());
    println!("sum y: {}", show(&run.state.alg_value()));
    println!("opt: {opt}");
    match &run.trace.min_ratio {
        Some(m) if *m == c => println!("min ratio: c ({}…)", c.to_decimal(4)),
        Some(m) => println!("min ratio: {}", show(m)),
        None => println!("min ratio: none (empty graph)"),
    }
    println!("invariants: {}", failure.as_deref().unwrap_or("pass"));
    if let Some(step) = run.trace.below_c_at {
        println!("ratio below c at step {step}");
        return Err(CliError::Failed(format!("ratio below c at step {step}")));
    }
    match failure {
        Some(f) => Err(CliError::Failed(format!("invariant failure, {f}"))),
        None => Ok(()),
    }
}

struct FuzzFailure {
    seed: u64,
    detail: String,
}

fn fuzz_one(seed: u64, edges: usize, inject_fault: bool) -> Result<usize, FuzzFailure> {
    let fail = |detail: String| FuzzFailure { seed, detail };
    let stream = random_stream(seed, edges, 3).map_err(|e| fail(e.to_string()))?;
    let mut run = run_stream(&stream, Checkpoints::EveryArrival, CheckMode::Strict).map_err(|e| fail(e.to_string()))?;
    if let Some((step, p, at)) = run.invariant_failure {
        return Err(fail(format!("step {step}: {} at {at}", p.label())));
    }
    if let Some(step) = run.trace.below_c_at {
        return Err(fail(format!("ratio below c at step {step}")));
    }
    if inject_fault && !run.state.edges().is_empty() {
        run.state.inject_fault(0, &Golden::from_rational(rat(1, 1000)));
    }
    if let Some((p, loc)) = run.state.check_invariants().first_failure() {
        return Err(fail(format!("final state: {} at {}", p.label(), run.state.describe(&loc))));
    }
    Ok(stream.len())
}

fn cmd_fuzz(count: u64, edges: usize, seed: u64, inject_fault: bool) -> Result<(), CliError> {
    if edges == 0 {
        return Err(CliError::Config("--edges must be positive".into()));
    }
    let seeds: Vec<u64> = (0..count).map(|i| seed.wrapping_add(i)).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(workers).max(1);
    // Chunks are contiguous, so concatenating them keeps seed order.
    let results: Vec<Result<usize, FuzzFailure>> = std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&sd| fuzz_one(sd, edges, inject_fault)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    let arrivals: usize = results.iter().filter_map(|r| r.as_ref().ok()).sum();
    let failures = results.iter().filter(|r| r.is_err()).count();
    println!("fuzz: {count} runs, {arrivals} arrivals, {failures} failures");
    match results.into_iter().find_map(Result::err) {
        None => Ok(()),
        Some(f) => {
            println!("first failure: seed {} ({})", f.seed, f.detail);
            println!("replay: fracmatch run --instance random:{}:{edges}", f.seed);
            Err(CliError::Failed(format!("fuzz failure at seed {}", f.seed)))
        }
    }
}

struct Bound {
    name: &'static str,
    lp: LinearProgram,
    target: &'static str,
    target_value: BigRational,
}

fn cmd_bounds(dump: Option<&Path>) -> Result<(), CliError> {
    let degree4 = builtin("degree4")?;
    let bounds = [
        Bound { name: "minindex", lp: build_minindex_lp(), target: "5/9", target_value: rat(5, 9) },
        Bound {
            name: "integral-deg3",
            lp: build_integral_deg3_lp(),
            target: "0.58065",
            target_value: rat(58065, 100000),
        },
        Bound {
            name: "degree4",
            lp: build_deg4_lp(&degree4).map_err(|e| CliError::Config(e.to_string()))?,
            target: "0.58884",
            target_value: rat(58884, 100000),
        },
    ];
    let tolerance = rat(1, 100000);
    let mut mismatches = 0;
    for b in &bounds {
        let s = simplex_max(&b.lp);
        if s.status != LpStatus::Optimal || !b.lp.certify(&s) {
            return Err(CliError::Failed(format!("{}: no certified optimum ({:?})", b.name, s.status)));
        }
        let exact = b.target.contains('/');
        let close = if exact { s.value == b.target_value } else { (&s.value - &b.target_value).abs() <= tolerance };
        if !close {
            mismatches += 1;
        }
        let verdict = if close { "match" } else { "mismatch" };
        if exact {
            println!("{}: {} (target {}: {verdict})", b.name, show_rational(&s.value, 4), b.target);
        } else {
            let rounded = Golden::from_rational(s.value.clone()).to_decimal(5);
            println!(
                "{}: {} ≈ {rounded} (target {}: {verdict})",
                b.name,
                show_rational(&s.value, 6),
                b.target
            );
        }
    }
    if mismatches > 0 {
        println!("{mismatches} bound(s) differ from their targets");
    }
    if let Some(target) = dump {
        for b in &bounds {
            let path = dump_path(target, b.name);
            std::fs::write(&path, b.lp.to_text())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn dump_path(target: &Path, name: &str) -> PathBuf {
    if target.is_dir() || target.extension().is_none() {
        return target.join(format!("{name}.lp"));
    }
    let stem = target.file_stem().map_or("bounds".into(), |s| s.to_string_lossy().into_owned());
    let ext = target.extension().map_or("lp".into(), |e| e.to_string_lossy().into_owned());
    target.with_file_name(format!("{stem}-{name}.{ext}"))
}

fn parse_probabilities(text: &str) -> Result<Vec<BigRational>, CliError> {
    text.split(',')
        .map(|p| parse_rational(p.trim()).map_err(|e| CliError::Config(format!("probability {p:?}: {e}"))))
        .collect()
}

fn cmd_minindex(family: u8, n: usize, p: Option<&str>, trace: Option<&Path>) -> Result<(), CliError> {
    let (stream, k) = match family {
        1 => (minindex_family1(n)?, 4),
        2 => (minindex_family2(n)?, 3),
        _ => return Err(CliError::Config(format!("unknown family {family}; expected 1 or 2"))),
    };
    let probabilities = match p {
        Some(text) => parse_probabilities(text)?,
        None => optimal_parameters().into_iter().take(k).collect(),
    };
    let mut state = MinIndexState::new(probabilities.len(), probabilities.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = writer(trace)?;
    for (u, v) in &stream.arrivals {
        let placement = state.feed(u, v);
        if let Some(w) = out.as_mut() {
            writeln!(w, "{}", state.trace_event(u, v, placement))?;
        }
    }
    if let Some(w) = out.as_mut() {
        w.flush()?;
    }
    let opt = max_matching(&Graph::from_edges(&stream.arrivals)).len();
    let sizes = state.sizes();
    let list: Vec<String> = sizes.iter().map(usize::to_string).collect();
    println!("instance: {} ({} arrivals)", stream.name, stream.len());
    println!("sizes: {}", list.join(","));
    println!("rejected: {}", state.rejected());
    println!("E[|M|]: {}", show_rational(&state.expected(), 4));
    println!("opt: {opt}");
    println!("ratio: {}", show_rational(&family_ratio(&sizes, &probabilities, opt), 4));
    Ok(())
}

fn cmd_oracle(source: &str, checkpoints: Checkpoints) -> Result<(), CliError> {
    let stream = load(source)?;
    let mut inc = fracmatch::oracle::IncrementalMatching::new();
    let per_arrival: Vec<usize> = stream.arrivals.iter().map(|(u, v)| inc.add_edge(u, v)).collect();
    let values: Vec<String> = match checkpoints {
        Checkpoints::EveryArrival => per_arrival.iter().map(usize::to_string).collect(),
        Checkpoints::EveryBatch => mu_sequence(&stream).iter().map(usize::to_string).collect(),
    };
    println!("instance: {} ({} arrivals)", stream.name, stream.len());
    println!("opt: {}", values.join(","));
    if let (Checkpoints::EveryBatch, Some(expected)) = (checkpoints, &stream.expected_opt_per_batch) {
        if *expected != mu_sequence(&stream) {
            println!("expected: mismatch");
            return Err(CliError::Failed("matching sizes differ from the declared sequence".into()));
        }
        println!("expected: match");
    }
    Ok(())
}

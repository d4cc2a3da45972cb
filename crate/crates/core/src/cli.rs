//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
//! 3 time limit reached, 4 verification failed.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Biclique, BipartiteGraph, Vertex};
use crate::io::{gen_random, read_instance, write_native, RandomSpec};
use crate::mip::{self, Integrality};
use crate::oracle;
use crate::solvers::{solve, Algorithm, SolveResult, Status};
use crate::ubp::{self, DEFAULT_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mbbp", version, about = "Maximum balanced biclique toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random bipartite graph with n vertices per side.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the per-vertex upper bounds as `<id> <ub>` lines.
    Ubp {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
    },
    /// Solve an instance.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Write the integer program in LP format.
    Mip {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Add the lifted inequalities derived from the vertex bounds.
        #[arg(long)]
        tighten: bool,
        /// Write the LP relaxation (bounds instead of binaries).
        #[arg(long)]
        relax: bool,
    },
    /// Check a solution file against the graph and, for small graphs, the optimum.
    Verify {
        file: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Run a batch described by a CSV file.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// One solver run, flattened for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algo: String,
    pub half_size: usize,
    pub nodes: u64,
    pub time_ms: f64,
    pub status: String,
    pub ubp_iters: usize,
    pub ubp_time_ms: f64,
}

impl RunRecord {
    pub fn new(instance: &str, algo: Algorithm, res: &SolveResult) -> Self {
        RunRecord {
            instance: instance.to_string(),
            algo: algo.tag().to_string(),
            half_size: res.half_size,
            nodes: res.stats.nodes,
            time_ms: millis(res.stats.elapsed),
            status: res.stats.status.as_str().to_string(),
            ubp_iters: res.stats.ubp_iterations,
            ubp_time_ms: millis(res.stats.ubp_elapsed),
        }
    }
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_USAGE, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Gen {
            n,
            p,
            seed,
            out: path,
        } => cmd_gen(n, p, seed, &path),
        Command::Ubp { file, threshold } => cmd_ubp(&file, threshold, out, err),
        Command::Solve {
            file,
            algo,
            time_limit,
            json,
        } => cmd_solve(&file, algo, time_limit, json, out),
        Command::Mip {
            file,
            out: path,
            tighten,
            relax,
        } => cmd_mip(&file, &path, tighten, relax),
        Command::Verify { file, solution } => cmd_verify(&file, &solution, out),
        Command::Bench { spec, json } => cmd_bench(&spec, json, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_graph(path: &Path) -> Result<BipartiteGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    read_instance(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn time_limit(seconds: Option<f64>) -> Result<Option<Duration>, Failure> {
    seconds
        .map(|s| {
            Duration::try_from_secs_f64(s)
                .map_err(|_| Failure::new(EXIT_USAGE, format!("invalid time limit {s}")))
        })
        .transpose()
}

fn instance_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_gen(n: usize, p: f64, seed: u64, path: &Path) -> Outcome {
    if n == 0 {
        return Err(Failure::new(EXIT_USAGE, "--n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::new(EXIT_USAGE, "--p must lie in [0, 1]"));
    }
    let g = gen_random(&RandomSpec { n, p, seed });
    let mut buf = Vec::new();
    write_native(&g, &mut buf).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    fs::write(path, buf)?;
    Ok(EXIT_OK)
}

fn cmd_ubp(file: &Path, threshold: usize, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = load_graph(file)?;
    let b = ubp::run_ubp(&g, threshold);
    for v in g.vertices() {
        writeln!(out, "{v} {}", b.get(v))?;
    }
    writeln!(
        err,
        "ubp: {} sweeps, {:.3} ms",
        b.iterations,
        millis(b.elapsed)
    )?;
    Ok(EXIT_OK)
}

fn join(ids: &[Vertex]) -> String {
    ids.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_solve(
    file: &Path,
    algo: Algorithm,
    limit: Option<f64>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let g = load_graph(file)?;
    let res =
        solve(&g, algo, time_limit(limit)?).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let record = RunRecord::new(&instance_name(file), algo, &res);
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&record).expect("record serializes")
        )?;
    } else {
        writeln!(out, "half_size {}", res.half_size)?;
        writeln!(out, "a {}", join(&res.best.side_a))?;
        writeln!(out, "b {}", join(&res.best.side_b))?;
        writeln!(out, "status {}", record.status)?;
        writeln!(out, "nodes {}", record.nodes)?;
        writeln!(out, "time_ms {:.3}", record.time_ms)?;
        if algo.uses_ubp() {
            writeln!(out, "ubp_iters {}", record.ubp_iters)?;
            writeln!(out, "ubp_time_ms {:.3}", record.ubp_time_ms)?;
        }
    }
    Ok(match res.stats.status {
        Status::Optimal => EXIT_OK,
        Status::TimeLimit => EXIT_TIMEOUT,
    })
}

fn cmd_mip(file: &Path, path: &Path, tighten: bool, relax: bool) -> Outcome {
    let g = load_graph(file)?;
    let model = if tighten {
        let b = ubp::run_ubp(&g, DEFAULT_THRESHOLD);
        mip::build_tightened(&g, &b)
    } else {
        mip::build_original(&g)
    };
    let kind = if relax {
        Integrality::Relaxed
    } else {
        Integrality::Binary
    };
    let mut buf = Vec::new();
    mip::write_lp_with(&model, &mut buf, kind)
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    fs::write(path, buf)?;
    Ok(EXIT_OK)
}

/// Two lines: `A` ids, then `B` ids. Missing lines mean empty sides.
fn read_solution(path: &Path) -> Result<Biclique, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let mut side = |lineno: usize| -> Result<Vec<Vertex>, Failure> {
        lines
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|f| {
                f.parse::<Vertex>().map_err(|_| {
                    Failure::new(
                        EXIT_PARSE,
                        format!("{}: line {lineno}: bad vertex id `{f}`", path.display()),
                    )
                })
            })
            .collect()
    };
    let a = side(1)?;
    let b = side(2)?;
    Ok(Biclique::new(a, b))
}

fn cmd_verify(file: &Path, solution: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(file)?;
    let claimed = read_solution(solution)?;
    match g.verify_balanced_biclique(&claimed) {
        Ok(true) => {}
        Ok(false) => {
            return Err(Failure::new(
                EXIT_VERIFY,
                "solution is not a balanced biclique of the graph",
            ))
        }
        Err(e) => return Err(Failure::new(EXIT_VERIFY, e.to_string())),
    }
    let k = claimed.half_size();
    match oracle::brute_force_max_balanced(&g) {
        Ok((opt, _)) if opt == k => {
            writeln!(out, "verified optimal half_size {k}")?;
            Ok(EXIT_OK)
        }
        Ok((opt, _)) => Err(Failure::new(
            EXIT_VERIFY,
            format!("valid balanced biclique of half_size {k}, but the optimum is {opt}"),
        )),
        Err(Error::BudgetExceeded(_)) => {
            writeln!(
                out,
                "valid balanced biclique of half_size {k} (optimality not checked)"
            )?;
            Ok(EXIT_OK)
        }
        Err(e) => Err(Failure::new(EXIT_USAGE, e.to_string())),
    }
}

/// Bench rows: `instance,algo[,time_limit]`. `instance` is a path (relative
/// to the CSV file) or `random:<n>:<p>:<seed>`; `algo` is one tag or several
/// joined by `;`; `time_limit` is in seconds and may be empty.
fn cmd_bench(spec: &Path, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let text = fs::read_to_string(spec)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", spec.display())))?;
    let base = spec.parent().unwrap_or(Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut jobs = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let lineno = idx + 2;
        let row = row.map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", spec.display())))?;
        let bad = |msg: String| {
            Failure::new(
                EXIT_PARSE,
                format!("{}: line {lineno}: {msg}", spec.display()),
            )
        };
        let instance = row.get(0).unwrap_or("").to_string();
        if instance.is_empty() {
            return Err(bad("missing instance".into()));
        }
        let algos = row
            .get(1)
            .unwrap_or("")
            .split(';')
            .map(|a| {
                a.trim()
                    .parse::<Algorithm>()
                    .map_err(|e| bad(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let limit = match row.get(2).filter(|s| !s.is_empty()) {
            Some(s) => Some(
                s.parse::<f64>()
                    .ok()
                    .and_then(|x| Duration::try_from_secs_f64(x).ok())
                    .ok_or_else(|| bad(format!("bad time limit `{s}`")))?,
            ),
            None => None,
        };
        jobs.push((instance, algos, limit));
    }

    let mut graphs: HashMap<String, BipartiteGraph> = HashMap::new();
    let mut csv_out = (!json).then(|| csv::Writer::from_writer(Vec::new()));
    let mut code = EXIT_OK;
    for (instance, algos, limit) in jobs {
        if !graphs.contains_key(&instance) {
            let g = match parse_random_instance(&instance) {
                Some(spec) => gen_random(&spec?),
                None => load_graph(&base.join(&instance))?,
            };
            graphs.insert(instance.clone(), g);
        }
        let g = &graphs[&instance];
        for algo in algos {
            let res = match solve(g, algo, limit) {
                Ok(res) => res,
                Err(e) => {
                    writeln!(err, "{instance} {algo}: {e}")?;
                    code = EXIT_USAGE;
                    continue;
                }
            };
            if res.stats.status == Status::TimeLimit && code == EXIT_OK {
                code = EXIT_TIMEOUT;
            }
            let record = RunRecord::new(&instance, algo, &res);
            match csv_out.as_mut() {
                Some(w) => w
                    .serialize(&record)
                    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?,
                None => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&record).expect("record serializes")
                )?,
            }
        }
    }
    if let Some(w) = csv_out {
        let bytes = w
            .into_inner()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
        out.write_all(&bytes)?;
    }
    Ok(code)
}

fn parse_random_instance(s: &str) -> Option<Result<RandomSpec, Failure>> {
    let rest = s.strip_prefix("random:")?;
    let parts: Vec<&str> = rest.split(':').collect();
    let parsed = (|| {
        if parts.len() != 3 {
            return None;
        }
        let n = parts[0].parse::<usize>().ok().filter(|&n| n >= 1)?;
        let p = parts[1]
            .parse::<f64>()
            .ok()
            .filter(|p| (0.0..=1.0).contains(p))?;
        let seed = parts[2].parse::<u64>().ok()?;
        Some(RandomSpec { n, p, seed })
    })();
    Some(parsed.ok_or_else(|| {
        Failure::new(
            EXIT_PARSE,
            format!("bad random instance `{s}`, expected random:<n>:<p>:<seed>"),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instance_strings() {
        let spec = parse_random_instance("random:50:0.3:7")
            .unwrap()
            .ok()
            .unwrap();
        assert_eq!(
            spec,
            RandomSpec {
                n: 50,
                p: 0.3,
                seed: 7
            }
        );
        assert!(parse_random_instance("sample.mbbp").is_none());
        assert!(parse_random_instance("random:50:1.5:7").unwrap().is_err());
        assert!(parse_random_instance("random:50:0.5").unwrap().is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["mbbp"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(
            run(
                ["mbbp", "solve", "x", "--algo", "simplex"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
        assert_eq!(run(["mbbp", "--help"], &mut out, &mut err), EXIT_OK);
    }
}

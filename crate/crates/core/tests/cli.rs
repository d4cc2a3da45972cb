use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mbbp::cli::RunRecord;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn mbbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbbp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn gen(n: &str, p: &str, seed: &str, out: &Path) -> Output {
    let out = path_str(out);
    mbbp(&["gen", "--n", n, "--p", p, "--seed", seed, "--out", out])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_json_on_sample() {
    let sample = fixture("sample.mbbp");
    for algo in ["bbclq", "extbbclq", "extunibbclq", "oracle"] {
        let o = mbbp(&["solve", path_str(&sample), "--algo", algo, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
        let rec: RunRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(rec.half_size, 2);
        assert_eq!(rec.status, "optimal");
        assert_eq!(rec.algo, algo);
        assert_eq!(rec.instance, "sample.mbbp");
        if algo == "bbclq" || algo == "oracle" {
            assert_eq!((rec.ubp_iters, rec.ubp_time_ms), (0, 0.0));
        } else {
            assert!(rec.ubp_iters >= 1);
        }
    }
}

#[test]
fn solve_text_output() {
    let o = mbbp(&[
        "solve",
        path_str(&fixture("sample.mbbp")),
        "--algo",
        "extunibbclq",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        &lines[..4],
        ["half_size 2", "a 2 3", "b 7 8", "status optimal"]
    );
    assert!(lines.iter().any(|l| l.starts_with("ubp_iters ")));
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.mbbp");
    let o = gen("30", "0.4", "5", &inst);
    assert_eq!(o.status.code(), Some(0));
    for algo in ["bbclq", "extbbclq", "extunibbclq"] {
        let run = || {
            let o = mbbp(&["solve", path_str(&inst), "--algo", algo, "--json"]);
            let r: RunRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
            (r.half_size, r.nodes, r.status)
        };
        assert_eq!(run(), run());
    }
}

#[test]
fn zero_time_limit_times_out() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.mbbp");
    gen("60", "0.8", "1", &inst);
    let o = mbbp(&[
        "solve",
        path_str(&inst),
        "--algo",
        "bbclq",
        "--time-limit",
        "0",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let rec: RunRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec.status, "timeout");
}

#[test]
fn verify_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let sample = fixture("sample.mbbp");
    let sol = dir.path().join("s.sol");
    let check = |content: &str| {
        fs::write(&sol, content).unwrap();
        mbbp(&["verify", path_str(&sample), "--solution", path_str(&sol)])
            .status
            .code()
    };
    assert_eq!(check("2 3\n7 8\n"), Some(0));
    // valid but not optimal
    assert_eq!(check("1\n6\n"), Some(4));
    // (1, 8) is not an edge
    assert_eq!(check("1 2\n7 8\n"), Some(4));
    // unbalanced
    assert_eq!(check("2 3\n7\n"), Some(4));
    // ids on the wrong side
    assert_eq!(check("7\n2\n"), Some(4));
    assert_eq!(check("2 x\n7 8\n"), Some(2));
}

#[test]
fn gen_and_ubp() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mbbp");
    let b = dir.path().join("b.mbbp");
    for p in [&a, &b] {
        let o = gen("12", "0.3", "9", p);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(gen("5", "2", "1", &a).status.code(), Some(1));

    let o = mbbp(&["ubp", path_str(&fixture("sample.mbbp"))]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let expected: Vec<String> = [1, 2, 2, 1, 1, 1, 2, 2, 2, 1]
        .iter()
        .enumerate()
        .map(|(i, ub)| format!("{} {ub}", i + 1))
        .collect();
    assert_eq!(values, expected);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mbbp");
    fs::write(&bad, "p mbbp 2 2 3\ne 1 3\n").unwrap();
    let o = mbbp(&["solve", path_str(&bad), "--algo", "bbclq"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let missing = dir.path().join("missing.mbbp");
    assert_eq!(mbbp(&["ubp", path_str(&missing)]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mbbp(&[]).status.code(), Some(1));
    let sample = fixture("sample.mbbp");
    assert_eq!(
        mbbp(&["solve", path_str(&sample), "--algo", "nope"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mbbp(&[
            "solve",
            path_str(&sample),
            "--algo",
            "bbclq",
            "--time-limit",
            "-1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(mbbp(&["--version"]).status.code(), Some(0));
}

#[test]
fn mip_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let sample = fixture("sample.mbbp");
    for (flags, golden) in [
        (&[][..], "sample_original.lp"),
        (&["--tighten"][..], "sample_tightened.lp"),
    ] {
        let out = dir.path().join(golden);
        let mut args = vec!["mip", path_str(&sample), "--out", path_str(&out)];
        args.extend_from_slice(flags);
        assert_eq!(mbbp(&args).status.code(), Some(0));
        assert_eq!(fs::read(&out).unwrap(), fs::read(fixture(golden)).unwrap());
    }
    let out = dir.path().join("relaxed.lp");
    mbbp(&["mip", path_str(&sample), "--out", path_str(&out), "--relax"]);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("Bounds\n 0 <= x1 <= 1\n"));
    assert!(!text.contains("Binaries"));
}

#[test]
fn bench_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("sample.mbbp"), dir.path().join("sample.mbbp")).unwrap();
    let spec = dir.path().join("runs.csv");
    fs::write(
        &spec,
        "instance,algo,time_limit\n# comment\nsample.mbbp,bbclq;extunibbclq,\nrandom:10:0.5:3,extbbclq,5\n",
    )
    .unwrap();

    let o = mbbp(&["bench", "--spec", path_str(&spec)]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<RunRecord> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[0].algo.as_str(), rows[0].half_size), ("bbclq", 2));
    assert_eq!(rows[1].algo, "extunibbclq");
    assert_eq!(rows[2].instance, "random:10:0.5:3");

    let o = mbbp(&["bench", "--spec", path_str(&spec), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<RunRecord> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r.status == "optimal"));

    fs::write(&spec, "instance,algo\nsample.mbbp,simplex\n").unwrap();
    assert_eq!(
        mbbp(&["bench", "--spec", path_str(&spec)]).status.code(),
        Some(2)
    );
}

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn dnormal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dnormal"))
        .args(args)
        .current_dir(dir)
        .env_remove("DNORMAL_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) {
    std::fs::write(dir.path().join(name), text).unwrap();
}

fn read(dir: &TempDir, name: &str) -> String {
    std::fs::read_to_string(dir.path().join(name)).unwrap()
}

const SQUARE: &str = r#"{"dim": 2, "points": [[0,0],[1,0],[0,1],[1,1]]}"#;

#[test]
fn verify_cube_is_complete() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &["construct", "hypercube", "--dim", "3", "--out", "cube.json"],
    );
    assert_eq!(code(&o), 0);
    let o = dnormal(
        dir.path(),
        &[
            "verify",
            "cube.json",
            "--mode",
            "standard",
            "--expect",
            "complete",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("edges 28"));
}

#[test]
fn verify_square_strict_lists_four_violations() {
    let dir = TempDir::new().unwrap();
    write(&dir, "square.json", SQUARE);
    let o = dnormal(
        dir.path(),
        &[
            "verify",
            "square.json",
            "--mode",
            "strict",
            "--expect",
            "complete",
        ],
    );
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let listed: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("violation "))
        .collect();
    assert_eq!(
        listed,
        [
            "violation 0 1",
            "violation 0 2",
            "violation 1 3",
            "violation 2 3"
        ]
    );
}

#[test]
fn verify_angle_expectations() {
    let dir = TempDir::new().unwrap();
    write(&dir, "square.csv", "x,y\n0,0\n1,0\n0,1\n1,1\n");
    let o = dnormal(
        dir.path(),
        &["verify", "square.csv", "--expect", "nonobtuse"],
    );
    assert_eq!(code(&o), 0);
    let o = dnormal(
        dir.path(),
        &[
            "verify",
            "square.csv",
            "--expect",
            "acute",
            "--out",
            "v.json",
        ],
    );
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_str(&read(&dir, "v.json")).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["violations"].as_array().unwrap().len(), 4);
    assert_eq!(report["graph"]["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.json", r#"{"dim": 2, "points": [[0,0],[1,"#);
    assert_eq!(code(&dnormal(dir.path(), &["verify", "bad.json"])), 2);
    write(
        &dir,
        "ragged.json",
        r#"{"dim": 2, "points": [[0,0],[1,0,0]]}"#,
    );
    assert_eq!(code(&dnormal(dir.path(), &["verify", "ragged.json"])), 2);
    assert_eq!(code(&dnormal(dir.path(), &["verify", "missing.json"])), 2);
    write(&dir, "square.json", SQUARE);
    let o = dnormal(
        dir.path(),
        &[
            "verify",
            "square.json",
            "--mode",
            "strict",
            "--delta",
            "0.1",
        ],
    );
    assert_eq!(code(&o), 2);
    assert_eq!(code(&dnormal(dir.path(), &["verify"])), 2);
}

#[test]
fn km_embedding_from_simplex() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "construct",
            "km-embedding",
            "--simplex",
            "3",
            "--parts-size",
            "2",
            "--out",
            "km.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let cfg: serde_json::Value = serde_json::from_str(&read(&dir, "km.json")).unwrap();
    assert_eq!(cfg["dim"], 5);
    assert_eq!(cfg["points"].as_array().unwrap().len(), 6);
    assert_eq!(cfg["parts"], serde_json::json!([1, 1, 2, 2, 3, 3]));
    let trace: serde_json::Value = serde_json::from_str(&read(&dir, "km.trace.json")).unwrap();
    assert_eq!(trace["certificate"]["pass"], true);
    assert!(dir.path().join("km.manifest.json").exists());

    // The written configuration passes the verifier on its own.
    let o = dnormal(dir.path(), &["verify", "km.json", "--mode", "strict"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn km_embedding_rejects_right_triangle() {
    let dir = TempDir::new().unwrap();
    write(
        &dir,
        "right_triangle.json",
        r#"{"dim": 2, "points": [[0,0],[1,0],[0,1]]}"#,
    );
    let o = dnormal(
        dir.path(),
        &[
            "construct",
            "km-embedding",
            "--acute-input",
            "right_triangle.json",
            "--out",
            "km.json",
        ],
    );
    assert_eq!(code(&o), 1);
    assert!(!dir.path().join("km.json").exists());
    assert!(!dir.path().join("km.manifest.json").exists());
}

#[test]
fn construct_hypercube_and_simplex_to_stdout() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(dir.path(), &["construct", "hypercube", "--dim", "4"]);
    assert_eq!(code(&o), 0);
    let p: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p["points"].as_array().unwrap().len(), 16);
    let o = dnormal(dir.path(), &["construct", "simplex", "--m", "5"]);
    let p: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p["dim"], 4);
    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["construct", "hypercube", "--dim", "0"]
        )),
        2
    );
}

#[test]
fn random_acute_output_is_acute() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "construct",
            "random-acute",
            "--dim",
            "10",
            "--seed",
            "42",
            "--rounds",
            "64",
            "--out",
            "r.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let o = dnormal(dir.path(), &["verify", "r.json", "--expect", "acute"]);
    assert_eq!(code(&o), 0);
    let trace: serde_json::Value = serde_json::from_str(&read(&dir, "r.trace.json")).unwrap();
    assert_eq!(trace["size"], 6);
}

#[test]
fn bounds_table_rows() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &["bounds", "--from", "3", "--to", "7", "--out", "table.txt"],
    );
    assert_eq!(code(&o), 0);
    let rows: serde_json::Value = serde_json::from_str(&read(&dir, "table.json")).unwrap();
    let got: Vec<(u64, u64, String)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["k_lower"].as_u64().unwrap(),
                r["k_upper"].as_u64().unwrap(),
                r["status"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let want = [
        (2, 2, "tight"),
        (2, 2, "tight"),
        (3, 3, "tight"),
        (3, 4, "open"),
        (4, 4, "tight"),
    ];
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_eq!((g.0, g.1, g.2.as_str()), w);
    }
    assert_eq!(read(&dir, "table.txt"), stdout(&o));

    let o = dnormal(dir.path(), &["bounds", "--from", "2", "--to", "2"]);
    let row = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(String::from)
        .collect::<Vec<_>>();
    assert_eq!(&row[..3], ["2", "1", "1"]);

    let start = std::time::Instant::now();
    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["bounds", "--from", "64", "--to", "64"]
        )),
        0
    );
    assert!(start.elapsed().as_secs_f64() < 1.0);

    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["bounds", "--from", "7", "--to", "3"]
        )),
        2
    );
    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["bounds", "--from", "1", "--to", "3"]
        )),
        2
    );
    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["bounds", "--from", "2", "--to", "65"]
        )),
        2
    );
}

#[test]
fn bounds_use_recorded_witnesses() {
    let dir = TempDir::new().unwrap();
    write(
        &dir,
        "sets.jsonl",
        include_str!("../../../data/acute_sets.jsonl"),
    );
    let lower = |o: &Output| {
        let row = stdout(o).lines().nth(1).unwrap().to_string();
        row.split_whitespace().map(String::from).collect::<Vec<_>>()
    };
    let plain = dnormal(dir.path(), &["bounds", "--from", "8", "--to", "8"]);
    assert_eq!(lower(&plain)[1..3], ["4", "5"]);
    assert!(lower(&plain).ends_with(&["open".to_string()]));
    // 5 acute points in dimension 3 give 5 + 3 <= 8.
    let with = dnormal(
        dir.path(),
        &[
            "bounds",
            "--from",
            "8",
            "--to",
            "8",
            "--results",
            "sets.jsonl",
        ],
    );
    assert_eq!(lower(&with)[1..3], ["5", "5"]);
    assert!(lower(&with).ends_with(&["tight".to_string()]));
}

#[test]
fn density_planar_envelope() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "density",
            "--dim",
            "2",
            "--n-list",
            "4,6,8,10,12",
            "--samples",
            "1000",
            "--seed",
            "3",
        ],
    );
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("source,n,samples,max_edges,turan_fit,graph_edges")
    );
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let n: usize = f[1].parse().unwrap();
        let e: usize = f[3].parse().unwrap();
        assert!(e <= 3 * (n / 2), "{line}");
        rows += 1;
    }
    assert_eq!(rows, 5);
}

#[test]
fn density_embedding_rows_fit_three() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "density",
            "--dim",
            "5",
            "--km-simplex",
            "3",
            "--km-sizes",
            "1,2,3,4",
        ],
    );
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[4].parse::<f64>().unwrap(), 3.0, "{line}");
        assert!(f[5].parse::<u64>().unwrap() >= f[3].parse::<u64>().unwrap());
    }
    let o = dnormal(
        dir.path(),
        &[
            "density",
            "--dim",
            "4",
            "--km-simplex",
            "3",
            "--km-sizes",
            "2",
        ],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn density_without_inputs_is_empty() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &["density", "--dim", "2", "--n-list", "4,5", "--samples", "0"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(code(&dnormal(dir.path(), &["density", "--dim", "1"])), 2);
}

#[test]
fn density_ignores_thread_count() {
    let dir = TempDir::new().unwrap();
    let args = [
        "density",
        "--dim",
        "3",
        "--n-list",
        "7,9",
        "--samples",
        "200",
        "--seed",
        "11",
    ];
    let serial = Command::new(env!("CARGO_BIN_EXE_dnormal"))
        .args(args)
        .env("DNORMAL_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    let parallel = dnormal(dir.path(), &args);
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn search_pinned_runs() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "search",
            "--dim",
            "3",
            "--target",
            "5",
            "--seed",
            "7",
            "--results",
            "sets.jsonl",
            "--out",
            "s.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let records = read(&dir, "sets.jsonl");
    assert_eq!(records.lines().count(), 1);
    let rec: serde_json::Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
    assert_eq!(rec["size"], 5);
    assert_eq!(rec["seed"], 7);

    let o = dnormal(
        dir.path(),
        &[
            "search",
            "--dim",
            "2",
            "--target",
            "4",
            "--results",
            "sets.jsonl",
        ],
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("verified false"));
    assert_eq!(read(&dir, "sets.jsonl").lines().count(), 1);
}

#[test]
fn probe_reports_without_claiming_proof() {
    let dir = TempDir::new().unwrap();
    let o = dnormal(
        dir.path(),
        &[
            "probe",
            "--dim",
            "2",
            "--delta",
            "0.05",
            "--restarts",
            "4",
            "--steps",
            "2000",
            "--out",
            "p.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&read(&dir, "p.json")).unwrap();
    assert_eq!(report["size"], 5);
    assert_eq!(report["satisfied"], false);
    assert!(stdout(&o).contains("not a proof"));
}

fn assert_replay_identical(dir: &TempDir, args: &[&str], outputs: &[&str], manifest: &str) {
    let o = dnormal(dir.path(), args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let before: Vec<Vec<u8>> = outputs
        .iter()
        .map(|f| std::fs::read(dir.path().join(f)).unwrap())
        .collect();
    for f in outputs {
        std::fs::remove_file(dir.path().join(f)).unwrap();
    }
    let o = dnormal(dir.path(), &["replay", manifest]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for (f, old) in outputs.iter().zip(before) {
        assert_eq!(
            std::fs::read(dir.path().join(f)).unwrap(),
            old,
            "{f} differs after replay"
        );
    }
}

#[test]
fn replay_reproduces_outputs() {
    let dir = TempDir::new().unwrap();
    assert_replay_identical(
        &dir,
        &[
            "construct",
            "km-embedding",
            "--simplex",
            "4",
            "--parts-size",
            "3",
            "--out",
            "km.json",
        ],
        &["km.json", "km.trace.json"],
        "km.manifest.json",
    );
    assert_replay_identical(
        &dir,
        &[
            "construct",
            "random-acute",
            "--dim",
            "12",
            "--seed",
            "5",
            "--out",
            "r.json",
        ],
        &["r.json", "r.trace.json"],
        "r.manifest.json",
    );
    assert_replay_identical(
        &dir,
        &[
            "density",
            "--dim",
            "2",
            "--n-list",
            "5,6",
            "--samples",
            "100",
            "--seed",
            "9",
            "--out",
            "d.csv",
        ],
        &["d.csv"],
        "d.manifest.json",
    );
    assert_replay_identical(
        &dir,
        &[
            "search",
            "--dim",
            "3",
            "--target",
            "5",
            "--seed",
            "7",
            "--restarts",
            "4",
            "--steps",
            "5000",
            "--out",
            "s.json",
        ],
        &["s.json"],
        "s.manifest.json",
    );
    assert_replay_identical(
        &dir,
        &["bounds", "--from", "2", "--to", "12", "--out", "b.txt"],
        &["b.txt", "b.json"],
        "b.manifest.json",
    );
    write(&dir, "square.json", SQUARE);
    assert_replay_identical(
        &dir,
        &["verify", "square.json", "--out", "v.json"],
        &["v.json"],
        "v.manifest.json",
    );

    let m: serde_json::Value = serde_json::from_str(&read(&dir, "v.manifest.json")).unwrap();
    assert_eq!(m["subcommand"], "verify");
    assert_eq!(m["input_digests"][0][0], "square.json");
    assert_eq!(m["input_digests"][0][1].as_str().unwrap().len(), 64);
}

#[test]
fn replay_refuses_changed_inputs() {
    let dir = TempDir::new().unwrap();
    write(&dir, "square.json", SQUARE);
    assert_eq!(
        code(&dnormal(
            dir.path(),
            &["verify", "square.json", "--out", "v.json"]
        )),
        0
    );
    write(
        &dir,
        "square.json",
        r#"{"dim": 2, "points": [[0,0],[2,0],[0,1],[1,1]]}"#,
    );
    assert_eq!(
        code(&dnormal(dir.path(), &["replay", "v.manifest.json"])),
        2
    );
    write(&dir, "junk.json", "{}");
    assert_eq!(code(&dnormal(dir.path(), &["replay", "junk.json"])), 2);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dnormal"))
        .args(["bounds", "--from", "2", "--to", "3"])
        .env("DNORMAL_THREADS", "many")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairkit::cli::io;
use fairkit::model::{Dataset, Metric};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn fairkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairkit")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn six() -> Vec<String> {
    let p = data("six_points.csv");
    ["--points", p.to_str().unwrap(), "--inline-groups", "--k", "2", "--alpha", "1/2,1/2", "--beta", "1/2,1/2"]
        .map(String::from)
        .to_vec()
}

fn with(cmd: &str, base: &[String], extra: &[&str]) -> Vec<String> {
    let mut v = vec![cmd.to_string()];
    v.extend_from_slice(base);
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run(args: &[String]) -> Output {
    fairkit(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn same_seed_same_bytes() {
    for cmd in ["cluster", "coreset", "stream", "reduce"] {
        let args = with(cmd, &six(), &["--seed", "17", "--sample-size", "1"]);
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn result_files_are_identical_and_path_is_printed() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    let path = dir.path().join("r.json");
    for _ in 0..2 {
        let out = run(&with("cluster", &six(), &["--seed", "2", "--output", path.to_str().unwrap()]));
        assert!(out.status.success());
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), path.to_str().unwrap());
        outs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn assign_reproduces_cluster_cost() {
    let dir = tempfile::tempdir().unwrap();
    for (constraint, regime) in [("fair", "metric"), ("fair", "euclidean"), ("cap:3", "metric"), ("div:2", "euclidean")] {
        let path = dir.path().join("c.json");
        let extra = ["--seed", "5", "--constraint", constraint, "--regime", regime];
        let mut args = with("cluster", &six(), &extra);
        args.extend(["--output".into(), path.to_str().unwrap().into()]);
        assert!(run(&args).status.success());
        let cluster: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        let assign = json(&run(&with("assign", &six(), &[&extra[..], &["--centers", path.to_str().unwrap()]].concat())));
        assert_eq!(cluster["cost"], assign["cost"], "{constraint} {regime}");
        assert_eq!(cluster["assignment"], assign["assignment"]);
    }
}

#[test]
fn cluster_within_factor_of_oracle_on_fixture() {
    let oracle = json(&run(&with("oracle", &six(), &[])));
    let opt = oracle["cost"].as_f64().unwrap();
    for seed in 0..5 {
        let c = json(&run(&with("cluster", &six(), &["--seed", &seed.to_string(), "--regime", "metric"])));
        assert!(c["cost"].as_f64().unwrap() <= 3.5 * opt);
        assert_eq!(c["diagnostics"]["guess_space_exhaustive"], true);
    }
}

#[test]
fn output_has_the_documented_fields() {
    let v = json(&run(&with("cluster", &six(), &["--seed", "1", "--timing"])));
    for key in ["config", "centers", "assignment", "cost", "constraint_matrix", "diagnostics"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["guess_space_exhaustive", "coreset_size", "elapsed_ms"] {
        assert!(v["diagnostics"].get(key).is_some(), "{key}");
    }
    assert!(v["diagnostics"]["elapsed_ms"].is_u64());
    assert_eq!(v["config"]["seed"], 1);
    assert_eq!(v["config"]["constraint"], "fair");
    let triples = v["assignment"].as_array().unwrap();
    assert_eq!(triples.len(), 6);
    assert!(triples.iter().all(|t| t.as_array().unwrap().len() == 3));
}

#[test]
fn exit_codes() {
    let out = run(&with("cluster", &six(), &["--constraint", "cap:2"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));

    let out = run(&with("oracle", &six(), &["--max-points", "4"]));
    assert_eq!(out.status.code(), Some(3));

    let out = fairkit(&["cluster", "--points", "/nonexistent.csv", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&with("cluster", &six(), &["--epsilon", "2"]));
    assert_eq!(out.status.code(), Some(1));
    let out = run(&with("bench", &six(), &[]));
    assert_eq!(out.status.code(), Some(1));
    let out = fairkit(&["cluster", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_inputs_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ragged.csv", "0,0\n1,2\n3\n", "--points", "line 3"),
        ("nan.csv", "0,0\nnan,1\n", "--points", "line 2"),
        ("asym.csv", "0,1\n2,0\n", "--distance-matrix", "asymmetric"),
        ("neg.csv", "0,-1\n-1,0\n", "--distance-matrix", "line 1"),
    ];
    for (name, text, flag, needle) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let out = fairkit(&["coreset", flag, p.to_str().unwrap(), "--k", "1"]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
    let pts = dir.path().join("p.csv");
    std::fs::write(&pts, "0,0\n1,1\n").unwrap();
    let mem = dir.path().join("m.csv");
    std::fs::write(&mem, "0,0\n7,1\n").unwrap();
    let out = fairkit(&["coreset", "--points", pts.to_str().unwrap(), "--membership", mem.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown point id 7"));
}

#[test]
fn fixtures_round_trip() {
    let cases: [io::InputSpec; 4] = [
        io::InputSpec { points: Some(data("six_points.csv")), inline_groups: true, ..Default::default() },
        io::InputSpec { points: Some(data("six_points.csv")), membership: Some(data("six_points.membership.csv")), ..Default::default() },
        io::InputSpec { distance_matrix: Some(data("six_points.matrix.csv")), groups: Some(data("six_points.groups")), ..Default::default() },
        io::InputSpec { distance_matrix: Some(data("six_points.matrix.csv")), membership: Some(data("six_points.membership.csv")), ..Default::default() },
    ];
    for spec in cases {
        let ds = io::load_dataset(&spec).unwrap();
        assert_eq!(round_trip(&ds), ds, "{spec:?}");
    }
}

#[test]
fn random_instances_round_trip() {
    for seed in 0..40 {
        // The file formats only know groups that some point belongs to.
        let raw = common::points(seed, 1 + seed as usize % 9, 1 + seed as usize % 4, 3, true);
        let ds = Dataset::new(raw.metric().clone(), raw.groups().to_vec()).unwrap();
        assert_eq!(round_trip(&ds), ds);
        let m = common::as_matrix(&ds);
        assert_eq!(round_trip(&m), m);
    }
}

fn round_trip(ds: &Dataset) -> Dataset {
    let mut groups = Vec::new();
    io::write_group_lines(ds, &mut groups).unwrap();
    let groups = io::read_group_lines(groups.as_slice(), "groups").unwrap();
    let metric = match ds.metric() {
        Metric::Euclidean { .. } => {
            let mut buf = Vec::new();
            io::write_points(ds, &mut buf).unwrap();
            let (x, inline) = io::read_points(buf.as_slice(), "points", true).unwrap();
            assert_eq!(inline.as_ref(), Some(&groups));
            Metric::euclidean(x).unwrap()
        }
        _ => {
            let mut buf = Vec::new();
            io::write_matrix(ds, &mut buf).unwrap();
            Metric::matrix(io::read_matrix(buf.as_slice(), "matrix").unwrap(), false).unwrap()
        }
    };
    Dataset::new(metric, groups).unwrap()
}

#[test]
fn stream_reads_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_fairkit"))
        .args(["stream", "--points", "-", "--inline-groups", "--k", "2", "--universe", "0|1", "--bucket-size", "2", "--sample-size", "1"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(std::fs::read(data("six_points.csv")).unwrap().as_slice()).unwrap();
    let out = child.wait_with_output().unwrap();
    let v = json(&out);
    let total: u64 = v["coreset"].as_array().unwrap().iter().map(|it| it["weight"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
    assert_eq!(v["diagnostics"]["seen"], 6);
}

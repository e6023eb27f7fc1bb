use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use schurlab_cli::MatrixDocument;
use serde_json::Value;
use tempfile::TempDir;

const INTRO: &str = r#"{"rows":2,"cols":2,"data":[[[1,0],[0,1]],[[0,-1],[1,0]]]}"#;

fn schurlab() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_schurlab"));
    cmd.env_remove("SCHURLAB_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    schurlab().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = schurlab()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_intro_matrix() {
    let files = Files::new();
    let path = files.write("intro.json", INTRO);
    let o = run(&["check", "--star", s(&path)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("multiplicative: yes, star-preserving: yes"));
    assert!(stdout(&o).contains("tolerance: rel=1e-10"));
}

#[test]
fn check_json_report() {
    let files = Files::new();
    let path = files.write("intro.json", INTRO);
    let o = run(&["check", "--star", "--json", s(&path)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tolerance"]["rel"], 1e-10);
    assert_eq!(v["multiplicative"]["verdict"], true);
    assert_eq!(v["multiplicative"]["conditions"].as_object().unwrap().len(), 5);
    assert_eq!(v["star_preserving"]["conditions"].as_object().unwrap().len(), 6);
    assert_eq!(
        v["multiplicative"]["scaling"],
        serde_json::json!([[1.0, 0.0], [0.0, -1.0]])
    );
}

#[test]
fn check_verdicts_and_exit_codes() {
    let files = Files::new();
    let ones = files.write("j3.csv", "1,1,1\n1,1,1\n1,1,1\n");
    assert_eq!(code(&run(&["check", s(&ones)])), 0);

    let zero = files.write(
        "zero.json",
        r#"{"rows":2,"cols":2,"data":[[[1,0],[1,0]],[[0,0],[1,0]]]}"#,
    );
    let o = run(&["check", s(&zero)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("multiplicative: no"));
    assert!(stdout(&o).contains("FAIL"));

    // Multiplicative but not *-preserving.
    let scaled = files.write("f12.csv", "1,0.5\n2,1\n");
    let o = run(&["check", "--star", s(&scaled)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("multiplicative: yes, star-preserving: no"));

    let rect = files.write("rect.csv", "1,1\n");
    assert_eq!(code(&run(&["check", s(&rect)])), 2);
    let broken = files.write("broken.json", "{\"rows\":2");
    assert_eq!(code(&run(&["check", s(&broken)])), 2);
    assert_eq!(code(&run(&["check", "/nonexistent/a.json"])), 2);
    let nulls = files.write("nulls.json", r#"{"rows":1,"cols":1,"data":[[null]]}"#);
    assert_eq!(code(&run(&["check", s(&nulls)])), 2);
}

#[test]
fn tolerance_sources() {
    let files = Files::new();
    let path = files.write("intro.json", INTRO);
    let from_env = schurlab()
        .args(["check", "--json", s(&path)])
        .env("SCHURLAB_TOL", "1e-6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["tolerance"]["rel"], 1e-6);

    let both = schurlab()
        .args(["--tol", "1e-8", "check", "--json", s(&path)])
        .env("SCHURLAB_TOL", "1e-6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&both.stdout).unwrap();
    assert_eq!(v["tolerance"]["rel"], 1e-8);

    let bad = schurlab()
        .args(["check", s(&path)])
        .env("SCHURLAB_TOL", "loose")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
    assert_eq!(code(&run(&["--tol", "-1", "check", s(&path)])), 2);
}

#[test]
fn factor_examples() {
    let files = Files::new();
    let f12 = files.write("f12.csv", "1,0.5\n2,1\n");
    let o = run(&["factor", s(&f12)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("f = (1, 2)\n"));
    assert!(stdout(&o).contains("Λ = diag(f)"));

    let intro = files.write("intro.json", INTRO);
    assert!(stdout(&run(&["factor", s(&intro)])).starts_with("f = (1, -i)\n"));

    let o = run(&["factor", "--json", s(&intro)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scaling"], serde_json::json!([[1.0, 0.0], [0.0, -1.0]]));

    let bad = files.write("bad.csv", "1,2\n3,1\n");
    let o = run(&["factor", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cocycle"));
}

#[test]
fn complete_examples() {
    let files = Files::new();
    let chain = files.write("chain.csv", ",2,\n,,3\n,,\n");
    let o = run(&["complete", s(&chain)]);
    assert_eq!(code(&o), 0);
    let m = MatrixDocument::from_json(&stdout(&o)).unwrap().to_matrix().unwrap();
    // a_13 = a_12 a_23 and a_31 = 1 / a_13.
    assert!((m[(0, 2)].re - 2.0 * 3.0).abs() < 1e-12);
    assert!((m[(2, 0)].re - 1.0 / 6.0).abs() < 1e-12);

    let cycle = files.write("cycle.csv", ",2,5\n,,3\n,,\n");
    let o = run(&["complete", s(&cycle)]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "inconsistent");
    assert_eq!(v["violations"][0]["cycle"], serde_json::json!([1, 2, 3]));

    let single = files.write("single.csv", ",2,,\n,,,\n,,,\n,,,\n");
    let o = run(&["complete", s(&single)]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "underdetermined");
    assert_eq!(v["components"], serde_json::json!([[1, 2], [3], [4]]));

    // Star mode rejects non-unimodular entries.
    assert_eq!(code(&run(&["complete", "--star", s(&chain)])), 1);
    let star = files.write("star.csv", ",i,\n,,-1\n,,\n");
    let o = run(&["complete", "--star", s(&star)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn enumerate_outputs() {
    let o = run(&["enumerate", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "{\"rows\":1,\"cols\":1,\"data\":[[[1.0,0.0]]]}\n");

    let o = run(&["enumerate", "4", "--format", "array"]);
    let docs: Vec<MatrixDocument> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(docs.len(), 8);

    assert_eq!(code(&run(&["enumerate", "0"])), 2);
    assert_eq!(code(&run(&["enumerate", "25"])), 2);
    assert_eq!(code(&run(&["enumerate", "three"])), 2);
}

#[test]
fn enumerate_pipes_into_star_check() {
    let o = run(&["enumerate", "5"]);
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 16);
    for line in lines {
        let c = run_stdin(&["check", "--star", "-"], line);
        assert_eq!(code(&c), 0, "{line}");
        assert!(stdout(&c).contains("multiplicative: yes, star-preserving: yes"));
    }
}

#[test]
fn written_documents_reparse_to_identical_bytes() {
    let files = Files::new();
    let awkward = files.write("awkward.csv", ",0.1,\n,,3.3333333333333335\n,,\n");
    let o = run(&["complete", s(&awkward)]);
    let first = stdout(&o);
    let doc = MatrixDocument::from_json(&first).unwrap();
    assert_eq!(format!("{}\n", doc.to_json()), first);
    let again = MatrixDocument::from_matrix(&doc.to_matrix().unwrap()).to_json();
    assert_eq!(format!("{again}\n"), first);
}

#[test]
fn norm_examples() {
    let files = Files::new();
    let f12 = files.write("f12.csv", "1,0.5\n2,1\n");
    let o = run(&["norm", "--json", s(&f12)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ‖[[1, 1/2], [2, 1]]‖ = sqrt(1/4 + 2 + 4) = 2.5 and ‖S_A‖ = max |f_i/f_j| = 2.
    assert!((v["operator_norm"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    assert!((v["schur_map_norm"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let bad = files.write("bad.csv", "1,2\n3,1\n");
    let o = run(&["norm", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("schur_map_norm: undefined"));
}

#[test]
fn witness_examples() {
    let o = run(&["witness", "--gen", "toeplitz:1,0", "10", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["lower_bound"].as_f64().unwrap() - 10.0).abs() < 1e-12);

    let o = run(&["witness", "--gen", "toeplitz:-1,0", "4", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // A_4 x for x = ((-1)^i)/2: each row sums four unit terms, so ‖A_4 x‖ = 4.
    let x: Vec<[f64; 2]> = serde_json::from_value(v["x"].clone()).unwrap();
    let ax: Vec<(f64, f64)> = (0..4)
        .map(|i| {
            (0..4).fold((0.0, 0.0), |(re, im), j| {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                (re + sign * x[j][0], im + sign * x[j][1])
            })
        })
        .collect();
    let norm = ax.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
    assert!((norm - 4.0).abs() < 1e-12);
    assert!((v["lower_bound"].as_f64().unwrap() - 4.0).abs() < 1e-12);

    let files = Files::new();
    let table = files.write("table.csv", "1,0.3\n-2,1\n");
    let o = run(&["witness", "--gen", &format!("table:{}", s(&table)), "2"]);
    assert_eq!(code(&o), 1);

    let scaling = files.write("f.json", "[[1,0],[0,1],[-1,0]]");
    let spec = format!("scaling:{}", s(&scaling));
    assert_eq!(code(&run(&["witness", "--gen", &spec, "3"])), 0);
    assert_eq!(code(&run(&["witness", "--gen", &spec, "4"])), 2);
    assert_eq!(code(&run(&["witness", "--gen", "toeplitz:1", "3"])), 2);
    assert_eq!(code(&run(&["witness", "--gen", "toeplitz:1,0", "0"])), 2);

    let o = run(&["witness", "--gen", "toeplitz:0,1", "20", "--series"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(rows[0], "n,lower_bound");
    let sizes: Vec<usize> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 4, 8, 16, 20]);
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "--suite", "thm21", "--trials", "20", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "thm21");
    assert_eq!(v["trials"], 20);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert!(v["elapsed"].as_f64().unwrap() >= 0.0);

    assert_eq!(code(&run(&["verify", "--suite", "bogus"])), 2);
}

#[test]
fn verify_is_reproducible() {
    // A tolerance loose enough to make negative cases pass guarantees failures.
    let args = [
        "--tol", "10", "verify", "--suite", "thm21", "--trials", "30", "--seed", "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 1);
    let fa: Value = serde_json::from_slice(&a.stdout).unwrap();
    let fb: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert!(!fa["failures"].as_array().unwrap().is_empty());
    assert_eq!(fa["failures"], fb["failures"]);
}

#[test]
fn verify_all_is_quick() {
    let start = std::time::Instant::now();
    let o = run(&["verify", "--suite", "all", "--trials", "10", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(start.elapsed().as_secs() < 60);
}

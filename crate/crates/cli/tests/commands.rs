use std::path::Path;
use std::process::{Command, Output};

fn quadalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gs_series() {
    let o = quadalg(&["gs", "--n", "7", "--d", "19"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 + 7t + 30t^2 + 77t^3");
    let o = quadalg(&["gs", "--n", "3", "--d", "3"]);
    assert_eq!(stdout(&o).trim(), "1 + 3t + 6t^2 + 9t^3 + 9t^4");
    let o = quadalg(&["gs", "--n", "2", "--d", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = quadalg(&["gs", "--n", "3", "--d", "3", "-D", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!([1, 3, 6, 9, 9, 0]));
}

#[test]
fn hilbert_builtins_and_files() {
    let o = quadalg(&["hilbert", "--builtin", "lemma3-4", "-D", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "1 + 3t + 5t^2 + 4t^3");
    let o = quadalg(&["hilbert", "--builtin", "ex4-6", "--field", "gf2", "-D", "6"]);
    assert!(stdout(&o).starts_with("1 + 4t + 10t^2 + 16t^3"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("comm.pres");
    std::fs::write(&file, "gens 2\nrel x1*x2 - x2*x1\n").unwrap();
    let o = quadalg(&["hilbert", path(&file), "-D", "4", "--dump-basis"]);
    let text = stdout(&o);
    assert!(text.starts_with("1 + 2t + 3t^2 + 4t^3 + 5t^4\n"), "{text}");
    assert!(text.contains("x1*x2 - x2*x1"));
    let o = quadalg(&["hilbert", path(&file), "-D", "3", "--order", "x2 > x1"]);
    assert!(stdout(&o).starts_with("1 + 2t + 3t^2 + 4t^3"));
    let o = quadalg(&["hilbert", "--builtin", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generic_is_seeded_and_reproducible() {
    let args = ["generic", "--n", "5", "--d", "10", "-D", "4", "--trials", "5", "--seed", "42"];
    let a = quadalg(&args);
    let b = quadalg(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# seed 42 prime 2147483647 trials 5");
    assert_eq!(lines.next().unwrap(), "1 + 5t + 15t^2 + 25t^3");
}

#[test]
fn size_guard_exit_code() {
    let o = quadalg(&["generic", "--n", "9", "--d", "10", "-D", "9"]);
    assert_eq!(o.status.code(), Some(3));
    let o = quadalg(&["dsearch", "--n", "9", "--q", "8", "--max-ambient", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dsearch_output() {
    let o = quadalg(&["dsearch", "--n", "3", "--q", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], 4);
    assert_eq!(v["gs_lower"], 4);
}

#[test]
fn construct_then_tensor_and_inflate() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.sub");
    let o = quadalg(&["construct", "gfield", "--n", "5", "--out", path(&w)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = quadalg(&["tensor", "eq", path(&w), "--q", "4"]);
    assert_eq!(stdout(&o).trim(), "dim E_4 = 0");
    let o = quadalg(&["tensor", "dim", path(&w)]);
    assert!(stdout(&o).starts_with("n 5  dim L 13  d 12"));

    let base = dir.path().join("lemma3-4.sub");
    quadalg(&["construct", "cor3-41", "--out", path(&base)]);
    let big = dir.path().join("big.sub");
    let o = quadalg(&["inflate", "--in", path(&base), "--m", "2", "--out", path(&big)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certificate: h_4(K, 6, 16) = 0"), "{}", stdout(&o));
    let o = quadalg(&["tensor", "eq", path(&big), "--q", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eq_dim"], 0);

    let g = dir.path().join("g30.sub");
    quadalg(&["construct", "g30", "--field", "gf 2147483647", "--out", path(&g)]);
    let o = quadalg(&["tensor", "blocks", path(&g), "--sizes", "4,5,6,7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"][3][3], 30);
    assert_eq!(v["dims"][0][0], 9);

    let o = quadalg(&["construct", "alp4", "--n", "3", "--r", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("= 0: true"));
    let o = quadalg(&["construct", "alp4", "--n", "3", "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inflating_a_nonvanishing_witness_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("full.sub");
    std::fs::write(&w, "n 2; construction full\nambient 4; field rational\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n").unwrap();
    let o = quadalg(&["inflate", "--in", path(&w), "--m", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn alpha_table_rows() {
    let o = quadalg(&["alpha", "--q", "5", "--n-max", "3", "--trials", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["n"] == 3).unwrap();
    assert_eq!(row["d_upper"], 3);
    assert_eq!(v["reference"]["name"], "1/3");
}

#[test]
fn verify_filter_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("out.rep");
    let o = quadalg(&["verify", "--filter", "series", "--json", path(&rep)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("01-gs-series") && text.contains("13-generic-series"));
    assert!(!text.contains("02-lemma3-4"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    let ids: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

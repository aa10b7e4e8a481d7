use std::fs;
use std::process::{Command, Output};

fn cohiggs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohiggs")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cohiggs(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    cohiggs(args).status.code().expect("exit code")
}

const P4: &str = "1 + x^2 + 3x^4 + 5x^6 + 9x^8 + 13x^10 + 18x^12 + 22x^14 + 20x^16 + 10x^18";

#[test]
fn admissible() {
    assert_eq!(stdout(&["admissible", "0", "-1"]), "true");
    assert_eq!(stdout(&["admissible", "3", "0"]), "false (gap 3 0)");
    assert_eq!(stdout(&["admissible", "5"]), "true");
    assert_eq!(stdout(&["--format", "json", "admissible", "3", "0"]), r#"{"admissible":false,"violation":[3,0]}"#);
    assert_eq!(code(&["admissible"]), 2);
    assert_eq!(code(&["admissible", "x"]), 2);
}

#[test]
fn betti_without_oracle() {
    assert_eq!(stdout(&["betti", "2", "-1"]), "1 + x^2");
    assert_eq!(stdout(&["betti", "3", "-1"]), "1 + x^2 + 3x^4 + 4x^6 + 3x^8");
    assert_eq!(stdout(&["chains", "betti", "3", "-2"]), "1 + x^2 + 3x^4 + 4x^6 + 3x^8");
    assert_eq!(stdout(&["--format", "json", "betti", "2", "-1"]), r#"{"r":2,"d":-1,"poincare":[1,0,1]}"#);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["betti", "4", "-1"]), 3);
    assert_eq!(code(&["betti", "2", "0"]), 2);
    assert_eq!(code(&["betti", "5", "-1"]), 2);
    assert_eq!(code(&["rank2", "to-s", "{\"a\":1,\"b\":0,\"c\":0}"]), 2);
    assert_eq!(code(&["rank2", "to-s", "not json"]), 2);
    assert_eq!(code(&["ffcount", "[0|-1]", "--primes", "2", "4"]), 2);
}

#[test]
fn ffcount_builds_an_oracle_for_betti() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("counts.jsonl");
    let t = table.to_str().unwrap();
    let mixed: Vec<String> = stdout(&["chains", "list", "4", "-1"])
        .lines()
        .filter(|l| l.ends_with("external"))
        .map(|l| {
            let start = l.find("] [").unwrap() + 2;
            let end = l.find(" index").unwrap();
            l[start..end].trim().to_string()
        })
        .collect();
    assert_eq!(mixed.len(), 5);
    for key in &mixed {
        stdout(&["ffcount", key, "--out", t]);
    }
    let before = fs::read_to_string(&table).unwrap();
    assert_eq!(before.lines().count(), 5);
    // idempotent per key
    stdout(&["ffcount", &mixed[0], "--out", t]);
    assert_eq!(fs::read_to_string(&table).unwrap(), before);

    assert_eq!(stdout(&["betti", "4", "-1", "--oracle", t]), P4);
    assert_eq!(stdout(&["betti", "4", "-3", "--oracle", t]), P4);
    let listed = stdout(&["chains", "list", "4", "-1", "--oracle", t]);
    assert!(!listed.contains("external"));
    assert!(listed.contains("[0|0 0|-1]"));
}

#[test]
fn ffcount_examples() {
    let json = stdout(&["--format", "json", "ffcount", "[0|-1]", "--primes", "2", "3", "5", "7"]);
    assert_eq!(json, r#"{"component":"[0|-1]","counts":[[2,3],[3,4],[5,6],[7,8]],"q_poly":[1,1],"poincare":[1,0,1]}"#);
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--format", "json", "ffcount", "[0|0 0|-1]"])).unwrap();
    assert_eq!(v["poincare"][0], 1);
    assert_eq!(stdout(&["ffcount", "[0|0|-1]"]).split("  ").nth(1), Some("1 + 2x^2 + 2x^4 + x^6"));
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("census.jsonl");
    let c = cache.to_str().unwrap();
    let cold = stdout(&["chains", "list", "4", "-1"]);
    assert_eq!(stdout(&["chains", "list", "4", "-1", "--cache", c]), cold);
    let size = fs::metadata(&cache).unwrap().len();
    assert_eq!(stdout(&["chains", "list", "4", "-1", "--cache", c]), cold);
    assert_eq!(fs::metadata(&cache).unwrap().len(), size);
    assert_eq!(stdout(&["betti", "3", "-1", "--cache", c]), "1 + x^2 + 3x^4 + 4x^6 + 3x^8");
}

#[test]
fn rank2_round_trip() {
    let p = stdout(&["rank2", "to-s", r#"{"a":2,"b":0,"c":[0,1]}"#]);
    assert_eq!(p, r#"{"z0":"[0:1]","y0":"2","rho":["4","0","0","0","0"]}"#);
    let field = stdout(&["rank2", "from-s", &p]);
    let v: serde_json::Value = serde_json::from_str(&field).unwrap();
    assert_eq!(v["c"]["coeffs"], serde_json::json!(["0", "1"]));
    assert_eq!(stdout(&["rank2", "to-s", &field]), p);
    assert_eq!(code(&["rank2", "from-s", r#"{"z0":"[0:1]","y0":"3","rho":["4","0","0","0","0"]}"#]), 2);
}

#[test]
fn rank2_even() {
    assert_eq!(stdout(&["rank2", "normalize-even", r#"{"a":0,"b":1,"c":1}"#]), r#"{"rho":["1","0","0","0","0"]}"#);
    assert_eq!(
        stdout(&["rank2", "classify-e0", r#"{"entries":[[[1,0,0],[0,1,0]],[[0,1,0],[-1,0,0]]]}"#]),
        r#"{"class":"stable"}"#
    );
    let semi = stdout(&["rank2", "classify-e0", r#"{"entries":[[[1,0,0],[0,1,0]],[0,[-1,0,0]]]}"#]);
    assert!(semi.starts_with(r#"{"class":"semistable""#));
}

#[test]
fn higgs_commands() {
    let out = stdout(&["canonical-higgs", "1", "0", "-1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["char_coeffs"][2]["coeffs"][1], "1");
    let payload = r#"{"splitting":[0,-1],"entries":[[[1,0,0],[0,0,0,1]],[[0,1],[-1,0,0]]]}"#;
    let rho: serde_json::Value = serde_json::from_str(&stdout(&["charpoly", payload])).unwrap();
    assert_eq!(rho["char_coeffs"][1]["coeffs"], serde_json::json!(["1", "0", "0", "0", "1"]));
    assert_eq!(stdout(&["spectral-smooth", "[0, [-1,0,0,0,1]]"]), "true");
    assert_eq!(stdout(&["spectral-smooth", "[0, [0,0,1,0,0]]"]), "false");
    assert_eq!(code(&["charpoly", r#"{"splitting":[-1,0],"entries":[]}"#]), 2);
}

#[test]
fn dualize() {
    assert_eq!(stdout(&["chains", "dualize", "[0 0|-1]"]), "[0|-1 -1] (degree -2, index 0)");
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--format", "json", "chains", "dualize", "[1|0|-2]"])).unwrap();
    assert_eq!(v["dvec"], serde_json::json!([1, -1, -2]));
    assert_eq!(v["morse_index"], 6);
}

#[test]
fn payload_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("phi.json");
    fs::write(&f, r#"{"a":2,"b":0,"c":[0,1]}"#).unwrap();
    let arg = format!("@{}", f.display());
    assert_eq!(stdout(&["rank2", "to-s", &arg]), r#"{"z0":"[0:1]","y0":"2","rho":["4","0","0","0","0"]}"#);
}

use assert_cmd::Command;
use serde_json::Value;

fn grmw() -> Command {
    Command::cargo_bin("grmw").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = grmw().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn weights_report_provenance() {
    let v = json_of(&["weights", "4", "2", "3"]);
    assert_eq!(v["w1"]["value"], 4);
    assert_eq!(v["w2"]["value"], 6);
    assert_eq!(v["w3"]["value"], 7);
    assert_eq!(v["w3"]["status"], "Exact");
    assert_eq!(v["w3"]["provenance"], "lem:c3");

    let v = json_of(&["weights", "5", "2", "4"]);
    assert_eq!(v["w3"]["value"], 9);
    assert_eq!(v["w3"]["status"], "BoundOnly");
    assert_eq!(v["w3"]["provenance"], "thm:3hyp");
}

#[test]
fn bad_flags_exit_two() {
    grmw().args(["weights", "4", "2"]).assert().code(2);
    grmw().args(["weights", "6", "2", "3"]).assert().code(2);
    grmw().args(["weights", "4", "2", "99"]).assert().code(2);
    grmw().args(["verify", "--suite", "nonsense"]).assert().code(2);
    grmw().args(["construct", "--family", "nonsense", "5", "2", "0", "4"]).assert().code(2);
}

#[test]
fn spectrum_is_deterministic() {
    let first = grmw().args(["spectrum", "3", "2", "2"]).assert().success().get_output().stdout.clone();
    let second =
        grmw().args(["spectrum", "3", "2", "2", "--shards", "7"]).assert().success().get_output().stdout.clone();
    assert_eq!(first, second);
    let v: Value = serde_json::from_slice(&first).unwrap();
    let weights: Vec<u64> =
        v["distinct_weights"].as_array().unwrap().iter().map(|w| w["weight"].as_u64().unwrap()).collect();
    assert_eq!(&weights[..4], &[0, 3, 4, 5]);
    assert_eq!(v["representatives"]["9"], "010101010101010101");
}

#[test]
fn spectrum_csv() {
    let out =
        grmw().args(["spectrum", "3", "2", "1", "--format", "csv"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "weight,count,representative_hex");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,1,"));
    assert!(lines[2].starts_with("6,24,"));
    assert!(lines[3].starts_with("9,2,"));
}

#[test]
fn budgets_exit_three() {
    grmw().args(["spectrum", "5", "2", "4"]).assert().code(3);
    grmw().args(["spectrum", "3", "2", "2"]).env("GRMW_BUDGET", "100").assert().code(3);
    grmw().args(["spectrum", "3", "2", "2"]).env("GRMW_BUDGET", "729").assert().success();
}

#[test]
fn arrangements_csv() {
    let out = grmw().args(["arrangements", "4", "2", "3", "--top", "3"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(
        text.lines().collect::<Vec<_>>(),
        vec!["q,m,d,t,s,rank,N,tags", "4,2,3,1,0,1,12,Tmax", "4,2,3,1,0,2,10,T1|T1a", "4,2,3,1,0,3,8,T1e"]
    );
}

#[test]
fn construct_measures_weight() {
    let v = json_of(&["construct", "--family", "triangle", "4", "2", "0", "3"]);
    assert_eq!(v["measured_weight"], 7);
    assert_eq!(v["claimed_weight"], 7);
    let v = json_of(&["construct", "--family", "two-lines", "5", "2", "0", "4"]);
    assert_eq!(v["measured_weight"], 9);
    let v = json_of(&["construct", "--family", "third", "7", "5", "2", "3"]);
    assert_eq!(v["measured_weight"], 216);
    let v = json_of(&["construct", "--family", "d", "9", "3", "1", "4"]);
    assert_eq!(v["measured_weight"], 49);
    assert_eq!(v["poly"]["modulus"], serde_json::json!([1, 0, 1]));
}

#[test]
fn modulus_override() {
    let v = json_of(&["--modulus", "2,2,1", "construct", "--family", "d", "9", "2", "0", "4"]);
    assert_eq!(v["poly"]["modulus"], serde_json::json!([2, 2, 1]));
    assert_eq!(v["measured_weight"], 49);
    grmw().args(["--modulus", "1,1,1", "construct", "--family", "d", "9", "2", "0", "4"]).assert().code(2);
}

#[test]
fn verify_suites() {
    let v = json_of(&["verify", "--suite", "quadratic"]);
    assert_eq!(v["suite"], "quadratic");
    assert!(v["elapsed_ms"].is_null());
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let v = json_of(&["verify", "--suite", "constructors", "--timing"]);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("grmw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    grmw().args(["weights", "3", "2", "2", "--output", path.to_str().unwrap()]).assert().success().stdout("");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["w3"]["value"], 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_all_passes() {
    let out = grmw().args(["verify", "--suite", "all"]).assert().code(0).get_output().stdout.clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.len() > 100);
    assert!(claims.iter().all(|c| c["pass"] == true && c["provenance"].is_string()));
}

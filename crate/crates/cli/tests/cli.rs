use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use agorum::formats;
use agorum::rules::kemeny::build_kemeny_agenda;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    status: i32,
    stdout: String,
    json: Value,
}

fn agorum(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_agorum"));
    cmd.args(args).env_remove("AGORUM_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, .. } = cmd.output().unwrap();
    let stdout = String::from_utf8(stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { status: status.code().unwrap(), stdout, json }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn doctrinal(dir: &TempDir) -> (String, String) {
    (write(dir, "agenda.txt", "p\nq\np & q\n"), write(dir, "profile.txt", "111\n100\n010\n"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn majority_on_doctrinal_profile_is_inconsistent() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "majority"], &[]);
    assert_eq!(r.status, 0);
    let out = &r.json["result"]["outcomes"][0];
    assert_eq!(strings(&out["formulas"]), ["p", "q", "~(p & q)"]);
    assert_eq!(out["consistent"], false);
    assert_eq!(r.json["result"]["consistent"], false);
    assert_eq!(strings(&r.json["witnesses"][0]["mi_subset"]), ["p", "q", "~(p & q)"]);
}

#[test]
fn field_order_is_fixed() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p], &[]);
    let keys: Vec<&String> = r.json.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "options", "inputs_digest", "result", "witnesses"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let args = ["safety", "--agenda", &a, "--class", "wraui", "--brute-force"];
    let first = agorum(&args, &[]);
    assert_eq!(first.status, 0);
    assert_eq!(agorum(&args, &[]).stdout, first.stdout);
}

#[test]
fn digest_tracks_inputs() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let p2 = write(&d, "other.txt", "111\n111\n010\n");
    let x = agorum(&["aggregate", "--agenda", &a, "--profile", &p], &[]);
    let y = agorum(&["aggregate", "--agenda", &a, "--profile", &p2], &[]);
    let z = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "pbp"], &[]);
    assert_ne!(x.json["inputs_digest"], y.json["inputs_digest"]);
    assert_ne!(x.json["inputs_digest"], z.json["inputs_digest"]);
    assert_eq!(x.json["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn pbp_and_dbp_on_doctrinal_profile() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "pbp"], &[]);
    assert_eq!(strings(&r.json["result"]["outcomes"][0]["formulas"]), ["p", "q", "p & q"]);
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "dbp"], &[]);
    let winners: Vec<&str> =
        r.json["result"]["outcomes"].as_array().unwrap().iter().map(|o| o["symbols"].as_str().unwrap()).collect();
    assert_eq!(winners, ["111", "100", "010"]);
    assert_eq!(r.json["result"]["min_distance"], 4);
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "dbp", "--tie-break", "lex"], &[]);
    assert_eq!(r.json["result"]["outcomes"].as_array().unwrap().len(), 1);
}

#[test]
fn windet_modes() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let r = agorum(&["windet", "--agenda", &a, "--profile", &p, "--formula", "~(p & q)"], &[]);
    assert_eq!(r.json["result"]["mode"], "outcome");
    assert_eq!(r.json["result"]["accepted"], true);
    let r = agorum(&["windet", "--agenda", &a, "--profile", &p, "--rule", "dbp", "--formula", "p & q"], &[]);
    assert_eq!(r.json["result"]["mode"], "some_winner");
    assert_eq!(r.json["result"]["accepted"], true);
    let r = agorum(&["windet", "--agenda", &a, "--profile", &p, "--formula", "r"], &[]);
    assert_eq!(r.status, 2);
    assert_eq!(r.json["error"]["code"], "not_in_agenda");
}

#[test]
fn quota_file_rule() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let q = write(&d, "quotas.txt", "1 3\n1 3\n1 3\n");
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "quota-file", "--quotas", &q], &[]);
    assert_eq!(r.status, 0, "{}", r.stdout);
    assert_eq!(r.json["result"]["outcomes"][0]["symbols"], "111");
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "quota-file"], &[]);
    assert_eq!(r.json["error"]["code"], "usage");
    let short = write(&d, "short.txt", "1 3\n");
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p, "--rule", "quota-file", "--quotas", &short], &[]);
    assert_eq!(r.json["error"]["code"], "width_mismatch");
}

#[test]
fn majority_safety_gives_a_witness_profile() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let r = agorum(&["safety", "--agenda", &a, "--class", "majority"], &[]);
    assert_eq!(r.status, 0);
    assert_eq!(r.json["result"]["safe"], false);
    assert_eq!(r.json["result"]["property"]["name"], "MP");
    let w = &r.json["witnesses"][0];
    assert_eq!(strings(&w["profile"]), ["010", "111", "100"]);
    assert_eq!(w["outcome"]["consistent"], false);
}

#[test]
fn safe_agenda_reports_its_property() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.txt", "p\nq\n");
    let r = agorum(&["safety", "--agenda", &a, "--class", "quota-range:2", "--brute-force"], &[]);
    assert_eq!(r.json["result"]["safe"], true);
    assert_eq!(r.json["result"]["certificate"]["kind"], "property_holds");
    assert_eq!(r.json["result"]["brute_force"]["agrees"], true);
    assert!(r.json["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn irrational_row_carries_its_mi_subset() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let p = write(&d, "bad.txt", "110\n100\n010\n");
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &p], &[]);
    assert_eq!(r.status, 2);
    assert_eq!(r.json["error"]["code"], "irrational_agent");
    assert_eq!(r.json["error"]["witness"]["agent"], 1);
    assert_eq!(strings(&r.json["error"]["witness"]["mi_subset"]), ["p", "q", "~(p & q)"]);
}

#[test]
fn input_errors() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let two = write(&d, "two.txt", "111\n100\n");
    assert_eq!(agorum(&["aggregate", "--agenda", &a, "--profile", &two], &[]).json["error"]["code"], "agent_count");
    let neg = write(&d, "neg.txt", "p\n~q\n");
    let r = agorum(&["props", "--agenda", &neg], &[]);
    assert_eq!(r.json["error"]["code"], "invalid_agenda");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("line 2"));
    let empty = write(&d, "empty.txt", "# nothing\n");
    assert_eq!(agorum(&["props", "--agenda", &empty], &[]).json["error"]["code"], "invalid_agenda");
    let missing = d.path().join("missing.txt");
    assert_eq!(agorum(&["props", "--agenda", missing.to_str().unwrap()], &[]).json["error"]["code"], "io");
    let r = agorum(&["aggregate", "--agenda", &a, "--profile", &a, "--rule", "borda"], &[]);
    assert_eq!(r.status, 2);
    assert_eq!(r.json, Value::Null);
}

#[test]
fn budget_flag_and_environment() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let args = ["axioms", "--agenda", &a, "--axiom", "I"];
    assert_eq!(agorum(&args, &[]).status, 0);
    let r = agorum(&args, &[("AGORUM_BUDGET", "5")]);
    assert_eq!(r.status, 3);
    assert_eq!(r.json["error"]["code"], "budget_exceeded");
    let mut with_flag = args.to_vec();
    with_flag.extend(["--budget", "64"]);
    assert_eq!(agorum(&with_flag, &[("AGORUM_BUDGET", "5")]).status, 0);
}

#[test]
fn axioms_of_majority() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let r = agorum(&["axioms", "--agenda", &a], &[]);
    let holds: Vec<(String, bool)> = r.json["result"]["axioms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["axiom"].as_str().unwrap().to_string(), x["holds"].as_bool().unwrap()))
        .collect();
    let failing: Vec<&str> = holds.iter().filter(|(_, h)| !h).map(|(a, _)| a.as_str()).collect();
    assert_eq!(failing, ["Consistent"]);
    assert_eq!(r.json["witnesses"][0]["axiom"], "Consistent");
}

#[test]
fn manipulation_commands() {
    let d = TempDir::new().unwrap();
    let (a, p) = doctrinal(&d);
    let r = agorum(&["manipulate", "--agenda", &a, "--profile", &p, "--rule", "pbp", "--agent", "2"], &[]);
    assert_eq!(r.status, 0);
    assert_eq!(r.json["result"]["manipulable"], false);
    let r = agorum(&["manipulate", "--agenda", &a, "--profile", &p, "--agent", "4"], &[]);
    assert_eq!(r.json["error"]["code"], "agent_out_of_range");
    let r = agorum(&["strategy-proof", "--agenda", &a, "--rule", "majority"], &[]);
    assert_eq!(r.json["result"]["strategy_proof"], true);
}

#[test]
fn props_and_separations() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.txt", "p\np & q\n");
    let r = agorum(&["props", "--agenda", &a], &[]);
    let holds: Vec<bool> =
        r.json["result"]["properties"].as_array().unwrap().iter().map(|x| x["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, [true, false, false]);
    let b = write(&d, "b.txt", "p\np & p\n");
    let r = agorum(&["props", "--agenda", &b, "--prop", "smp", "--prop", "ssmp"], &[]);
    let holds: Vec<bool> =
        r.json["result"]["properties"].as_array().unwrap().iter().map(|x| x["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, [true, false]);
}

#[test]
fn enumerate_judgment_sets_and_classes() {
    let d = TempDir::new().unwrap();
    let (a, _) = doctrinal(&d);
    let r = agorum(&["enumerate", "--agenda", &a], &[]);
    assert_eq!(r.json["result"]["count"], 4);
    let r = agorum(&["enumerate", "--agenda", &a, "--class", "wraus"], &[]);
    assert_eq!(r.json["result"]["count"], 2);
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn kemeny_reduction_writes_parseable_files() {
    let d = TempDir::new().unwrap();
    let pr = write(&d, "prefs.txt", "a > b > c\nc > b > a\nb > a > c\n");
    let out = d.path().join("out");
    let r = agorum(&["reduce", "kemeny", "--preferences", &pr, "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(r.status, 0, "{}", r.stdout);
    assert_eq!(strings(&r.json["result"]["winners_via_dbp"]), ["b"]);
    assert_eq!(r.json["result"]["agree"], true);
    let agenda = formats::parse_agenda(&read(&out, "agenda.txt")).unwrap();
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    assert_eq!(agenda, build_kemeny_agenda(&names).unwrap());
    let profile = formats::parse_profile(&read(&out, "profile.txt"), &agenda).unwrap();
    assert_eq!(profile.n(), 3);
}

#[test]
fn sat_reduction_follows_satisfiability() {
    for (phi, sat) in [("p1 & ~p2", true), ("p1 & ~p1", false)] {
        let r = agorum(&["reduce", "sat-manip", "--formula", phi], &[]);
        assert_eq!(r.json["result"]["satisfiable"], sat);
        assert_eq!(r.json["result"]["manipulable"], sat);
        assert_eq!(r.json["result"]["files"][0]["file"], "agenda.txt");
    }
}

#[test]
fn qbf_reductions() {
    let d = TempDir::new().unwrap();
    let q = write(&d, "q.txt", "forall x exists y : x <-> y\n");
    let r = agorum(&["reduce", "qbf-lift", "--qbf", &q], &[]);
    assert_eq!(r.json["result"]["lifted"], "forall x a exists y b : ((x <-> y) | a) & b");
    assert_eq!(r.json["result"]["lifted_true"], r.json["result"]["true"]);
    let r = agorum(&["reduce", "qbf-ssmp", "--qbf", &q], &[]);
    assert_eq!(r.json["result"]["agrees"], true);
    let f = write(&d, "f.txt", "forall x : x\n");
    let r = agorum(&["reduce", "qbf-ssmp", "--qbf", &f], &[]);
    assert_eq!(r.json["error"]["code"], "side_condition");
    let a = write(&d, "a.txt", "p\np & q\n");
    let r = agorum(&["reduce", "ssmp-mp", "--agenda", &a], &[]);
    assert_eq!(r.json["result"]["copied_size"], 6);
    assert_eq!(r.json["result"]["ssmp"], false);
    assert_eq!(r.json["result"]["mp"], false);
}

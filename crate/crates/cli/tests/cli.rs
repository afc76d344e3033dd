use extrsa_cli::{dispatch, format_report, Dispatch, Format, Status};
use extrsa_core::big_phi::{big_phi_count, big_phi_set};
use extrsa_core::factor::{factorize, is_prime};
use extrsa_core::rsa::{correctness_set, decrypt, encrypt, make_keypair, KeyPair};
use extrsa_core::totient::{multiplicative_order, phi, phi_set};
use extrsa_core::{EnumerationLimit, Natural};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_extrsa"));
    cmd.env_remove("EXTRSA_ENUM_LIMIT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// In-process run, returning the parsed JSON document.
fn json(args: &[&str]) -> (Status, Value) {
    let argv = std::iter::once("extrsa").chain(["--format", "json"]).chain(args.iter().copied());
    match dispatch(argv) {
        Dispatch::Run(format, result) => {
            assert_eq!(format, Format::Json);
            let bytes = format_report(&result, format);
            (result.status, serde_json::from_slice(&bytes).unwrap())
        }
        Dispatch::Info(text) => panic!("unexpected info output: {text}"),
    }
}

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

fn members(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn text_output_examples() {
    let cases: &[(&[&str], &str)] = &[
        (&["factor", "20"], "20 = 2^2 * 5\n"),
        (&["phiset", "--big", "10"], "1 2 3 4 5 6 7 8 9 10\n"),
        (&["phiset", "20"], "1 3 7 9 11 13 17 19\n"),
        (&["encrypt", "--n", "20", "--e", "3", "--m", "2"], "8\n"),
        (&["decrypt", "--n", "20", "--e", "3", "--c", "8"], "12\n"),
        (&["phi", "0x14"], "8\n"),
        (&["phicount", "20"], "15\n"),
        (&["order", "3", "10"], "4\n"),
        (&["prime", "97"], "97 is prime\n"),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), *expected, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["examples"], 0),
        (&["verify", "--n-max", "40"], 0),
        (&["sweep", "--n-max", "60"], 0),
        (&["--help"], 0),
        (&["--version"], 0),
        (&[], 1),
        (&["frobnicate"], 1),
        (&["factor", "twelve"], 1),
        (&["factor", "-5"], 1),
        (&["phi", "0"], 1),
        (&["encrypt", "--n", "20", "--e", "3", "--m", "21"], 1),
        (&["encrypt", "--n", "20", "--e", "2", "--m", "3"], 1),
        (&["decrypt", "--n", "20", "--e", "3", "--c", "20"], 1),
        (&["keygen", "--n", "2", "--e", "1"], 1),
        (&["order", "2", "10"], 1),
        (&["sweep", "--n-min", "10", "--n-max", "5"], 1),
        (&["verify-key", "--n", "20", "--e", "3", "--d", "4"], 2),
        (&["sweep", "--n-max", "30", "--include-e1"], 2),
    ];
    for (args, code) in cases {
        assert_eq!(run(args).status.code(), Some(*code), "{args:?}");
    }
}

#[test]
fn usage_errors_go_to_stderr_in_text_mode() {
    let out = run(&["factor", "abc"]);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
    assert!(!err.starts_with("error: error:"), "{err}");

    let out = run(&["--format", "json", "factor", "abc"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "usage-error");
    assert_eq!(doc["result"]["error"]["kind"], "usage");
}

#[test]
fn enumeration_limit_from_env_and_flag() {
    let out = bin().env("EXTRSA_ENUM_LIMIT", "5").args(["phiset", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().env("EXTRSA_ENUM_LIMIT", "5").args(["phiset", "5"]).output().unwrap();
    assert_eq!(stdout(&out), "1 2 3 4\n");
    assert_eq!(run(&["--enum-limit", "19", "correctness-set", "--n", "20", "--e", "3"]).status.code(), Some(1));
    let (status, doc) = json(&["--enum-limit", "19", "phiset", "--big", "20"]);
    assert_eq!(status, Status::UsageError);
    assert_eq!(doc["result"]["error"]["kind"], "capacity");
}

#[test]
fn adapters_match_library() {
    let limit = EnumerationLimit::default();
    for n in [3u64, 4, 10, 12, 20, 36, 97, 360, 1001] {
        let ns = n.to_string();
        let (_, doc) = json(&["phi", &ns]);
        assert_eq!(doc["result"]["phi"], phi(&nat(n)).unwrap().to_string());
        let (_, doc) = json(&["phicount", &ns]);
        assert_eq!(doc["result"]["count"], big_phi_count(&nat(n)).unwrap().to_string());
        let (_, doc) = json(&["phiset", &ns]);
        assert_eq!(members(&doc["result"]["members"]), phi_set(n, limit).unwrap().members);
        let (_, doc) = json(&["phiset", "--big", &ns]);
        assert_eq!(members(&doc["result"]["members"]), big_phi_set(n, limit).unwrap().members);
        let (_, doc) = json(&["prime", &ns]);
        assert_eq!(doc["result"]["prime"], is_prime(&nat(n)));
        let (_, doc) = json(&["factor", &ns]);
        let f = factorize(&nat(n)).unwrap();
        let factors: Vec<(String, u64)> = doc["result"]["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| (x["prime"].as_str().unwrap().to_string(), x["exponent"].as_u64().unwrap()))
            .collect();
        let expected: Vec<(String, u64)> = f.factors().iter().map(|(p, a)| (p.to_string(), *a as u64)).collect();
        assert_eq!(factors, expected);

        for m in 1..n.min(40) {
            let ms = m.to_string();
            let (status, doc) = json(&["order", &ms, &ns]);
            match multiplicative_order(&nat(m), &nat(n)) {
                Ok(t) => assert_eq!(doc["result"]["order"], t.to_string()),
                Err(_) => assert_eq!(status, Status::UsageError),
            }
        }

        for e in [3u64, 5, 7] {
            let Ok(key) = make_keypair(&nat(n), &nat(e)) else {
                assert_eq!(json(&["keygen", "--n", &ns, "--e", &e.to_string()]).0, Status::UsageError);
                continue;
            };
            let es = e.to_string();
            let (_, doc) = json(&["keygen", "--n", &ns, "--e", &es]);
            assert_eq!(doc["result"]["d"], key.d().to_string());
            assert_eq!(doc["result"]["k"], key.k().to_string());
            let report = correctness_set(&key, limit).unwrap();
            let (_, doc) = json(&["correctness-set", "--n", &ns, "--e", &es]);
            assert_eq!(members(&doc["result"]["correct_set"]), report.correct_set);
            assert_eq!(doc["result"]["phi_set_equal"], report.phi_set_equal);
            for m in 1..=n.min(25) {
                let c = encrypt(&key, &nat(m)).unwrap();
                let (_, doc) = json(&["encrypt", "--n", &ns, "--e", &es, "--m", &m.to_string()]);
                assert_eq!(doc["result"]["c"], c.to_string());
                let (_, doc) = json(&["decrypt", "--n", &ns, "--e", &es, "--c", &c.to_string()]);
                assert_eq!(doc["result"]["m"], decrypt(&key, &c).unwrap().to_string());
            }
        }
    }
}

#[test]
fn text_and_json_come_from_the_same_result() {
    let out = run(&["correctness-set", "--n", "20", "--e", "3"]);
    assert_eq!(
        stdout(&out),
        "correct: 1 3 4 5 7 8 9 11 12 13 15 16 17 19 20\nfailures: 2->12 6->16 10->0 14->4 18->8\nphi_set_equal: true\n"
    );
    let out = run(&["sweep", "--n-min", "3", "--n-max", "9", "--policy", "first", "--include-e1"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "counterexample n=4 e=1 correct-but-not-member m=[2]");
    assert_eq!(lines[1], "counterexample n=8 e=1 correct-but-not-member m=[2 4 6]");
    assert_eq!(lines[2], "counterexample n=9 e=1 correct-but-not-member m=[3 6]");
    assert!(lines[3].starts_with("checked 7 (n, e) pairs for n in [3, 9]: 6 counterexamples"), "{}", lines[3]);
    assert_eq!(lines.len(), 4);
}

#[test]
fn json_is_sorted_and_newline_terminated() {
    let out = run(&["--format", "json", "keygen", "--n", "20", "--e", "3"]);
    let text = stdout(&out);
    assert!(text.ends_with("}\n"));
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("    \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

fn normalize(mut doc: Value) -> Value {
    if let Some(elapsed) = doc["result"].get_mut("elapsed_seconds") {
        *elapsed = Value::from(0.0);
    }
    doc
}

#[test]
fn golden_json() {
    let cases: &[(&str, &[&str])] = &[
        ("factor", &["factor", "20"]),
        ("prime", &["prime", "97"]),
        ("phi", &["phi", "20"]),
        ("phiset", &["phiset", "20"]),
        ("phiset-big", &["phiset", "--big", "20"]),
        ("phicount", &["phicount", "20"]),
        ("order", &["order", "3", "10"]),
        ("keygen", &["keygen", "--n", "20", "--e", "3"]),
        ("encrypt", &["encrypt", "--n", "20", "--e", "3", "--m", "2"]),
        ("decrypt", &["decrypt", "--n", "20", "--e", "3", "--c", "8"]),
        ("verify-key", &["verify-key", "--n", "10", "--e", "3", "--d", "7"]),
        ("verify-key-invalid", &["verify-key", "--n", "20", "--e", "3", "--d", "4"]),
        ("correctness-set", &["correctness-set", "--n", "20", "--e", "3"]),
        ("examples", &["examples"]),
        ("verify", &["verify", "--n-max", "30"]),
        ("sweep", &["sweep", "--n-min", "3", "--n-max", "12", "--policy", "first", "--include-e1"]),
        ("usage-error", &["factor", "abc"]),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in cases {
        let expected: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap();
        let (_, actual) = json(args);
        assert_eq!(normalize(actual), expected, "golden {name}");
    }
}

#[test]
fn key_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("key.txt");
    let p = path.to_str().unwrap();

    let out = run(&["keygen", "--n", "20", "--e", "3", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "20\n3\n3\n");
    assert_eq!(stdout(&run(&["encrypt", "--keyfile", p, "--m", "2"])), "8\n");
    assert_eq!(stdout(&run(&["decrypt", "--keyfile", p, "--c", "8"])), "12\n");
    assert_eq!(run(&["verify-key", "--keyfile", p]).status.code(), Some(0));

    // Another representative of d's class is accepted.
    std::fs::write(&path, "10\n3\n7\n").unwrap();
    let (status, doc) = json(&["verify-key", "--keyfile", p]);
    assert_eq!(status, Status::Ok);
    assert_eq!(doc["result"]["d"], "3");
    assert_eq!(doc["result"]["d_supplied"], "7");

    std::fs::write(&path, "10\n3\n5\n").unwrap();
    assert_eq!(run(&["verify-key", "--keyfile", p]).status.code(), Some(2));
    std::fs::write(&path, "10\n3\n").unwrap();
    assert_eq!(run(&["verify-key", "--keyfile", p]).status.code(), Some(1));
    assert_eq!(run(&["encrypt", "--keyfile", p, "--m", "2"]).status.code(), Some(1));
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["encrypt", "--keyfile", missing.to_str().unwrap(), "--m", "2"]).status.code(), Some(1));
}

#[test]
fn random_keys_round_trip_through_key_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.key");
    let p = path.to_str().unwrap();
    let out = run(&["--format", "json", "keygen", "--bits", "128", "--rng-seed", "7", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let n: Natural = doc["result"]["n"].as_str().unwrap().parse().unwrap();
    assert!(n.bits() >= 255);

    let key = KeyPair::from_key_file(&std::fs::read_to_string(&path).unwrap(), &Default::default()).unwrap();
    assert_eq!(key.n(), &n);
    assert_eq!(run(&["verify-key", "--keyfile", p]).status.code(), Some(0));
    let m = "123456789012345678901234567890";
    let c = stdout(&run(&["encrypt", "--keyfile", p, "--m", m]));
    let back = stdout(&run(&["decrypt", "--keyfile", p, "--c", c.trim()]));
    assert_eq!(back.trim(), m);

    // Same seed, same key.
    let again = run(&["--format", "json", "keygen", "--bits", "128", "--rng-seed", "7"]);
    let doc2: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(doc["result"], doc2["result"]);
}

#[test]
fn formatting_is_deterministic() {
    for args in [&["extrsa", "verify", "--n-max", "20"][..], &["extrsa", "correctness-set", "--n", "36", "--e", "5"]] {
        let Dispatch::Run(_, result) = dispatch(args.iter().copied()) else { panic!() };
        for format in [Format::Text, Format::Json] {
            assert_eq!(format_report(&result, format), format_report(&result, format));
        }
        let Dispatch::Run(_, again) = dispatch(args.iter().copied()) else { panic!() };
        assert_eq!(result, again);
    }
}

#[test]
fn unknown_flags_report_usage() {
    let out = run(&["factor", "20", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Usage:"), "{err}");
}

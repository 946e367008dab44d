use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qalg(args: &[&str], cap: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qalg"));
    cmd.args(args).env_remove("QALG_MAX_QUBITS");
    if let Some(c) = cap {
        cmd.env("QALG_MAX_QUBITS", c);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, body: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn close(v: &Value, want: f64) -> bool {
    v.as_f64().is_some_and(|x| (x - want).abs() < 1e-9)
}

/// One golden example per module, reached through the front end.
#[test]
fn every_module_has_a_golden_subcommand() {
    let bell = scratch("golden_bell.qc", "h 0\ncx 0 1\n");
    let toffoli = scratch("golden_toffoli.qc", "qubits 3\nx 0\nx 1\nccx 0 1 2\n");
    type Check = fn(&Value) -> bool;
    let cases: Vec<(&str, Vec<&str>, Check)> = vec![
        ("statevector-core", vec!["circuit-run", "--file", &bell], |v| {
            close(&v["distribution"]["00"], 0.5) && close(&v["distribution"]["11"], 0.5)
        }),
        ("circuit", vec!["circuit-run", "--file", &toffoli], |v| close(&v["distribution"]["111"], 1.0)),
        ("oracles", vec!["dj", "--table", "0110"], |v| v["result"] == "balanced"),
        ("foundations", vec!["bv", "--s", "101"], |v| v["result"] == "101"),
        ("foundations", vec!["mitigate"], |v| {
            close(&v["predicted"]["00"], 0.455) && close(&v["predicted"]["11"], 0.465)
        }),
        ("foundations", vec!["simon", "--p", "010"], |v| v["result"] == "010"),
        ("fourier-phase", vec!["qpe", "--gate", "t", "--c", "3"], |v| v["raw"] == "001" && close(&v["theta_hat"], 0.125)),
        ("fourier-phase", vec!["ipe", "--theta", "0.125", "--m", "3"], |v| v["bits"] == "001"),
        ("period-factor", vec!["shor", "--n", "15", "--seed", "7"], |v| v["factors"] == serde_json::json!([3, 5])),
        ("period-factor", vec!["rsa", "--p", "7", "--q", "13", "--e", "5", "--m", "6"], |v| {
            v["d"] == 29 && v["ciphertext"] == 41 && v["decrypted"] == 6
        }),
        ("period-factor", vec!["period", "--a", "2", "--n", "15", "--t", "4"], |v| {
            ["0000", "0100", "1000", "1100"].iter().all(|k| close(&v["distribution"][k], 0.25)) && v["r"] == 4
        }),
        ("grover", vec!["grover", "--n", "3", "--marked", "5", "--r", "2"], |v| (v["success"].as_f64().unwrap() - 0.94529).abs() < 1e-4),
        ("grover", vec!["count", "--n", "4", "--marked", "1,6,9,14", "--c", "5"], |v| v["mu_hat"] == 4),
        ("hamsim", vec!["lcu"], |v| close(&v["success"], 0.5)),
        ("hamsim", vec!["trotter", "--order", "2"], |v| {
            let r = v["ratio"].as_f64().unwrap();
            (3.2..=4.8).contains(&r)
        }),
        ("variational", vec!["hhl"], |v| v["fidelity"].as_f64().unwrap() > 1.0 - 1e-6),
        ("variational", vec!["qaoa", "--p", "1", "--budget", "100"], |v| close(&v["optimum"], 10.0)),
        ("fermion", vec!["fermion-encode", "--term", "1^", "--state", "1011", "--modes", "4"], |v| {
            v["occupation_result"]["state"] == "1111" && close(&v["occupation_result"]["amplitude"][0], -1.0)
        }),
    ];
    for (module, args, check) in &cases {
        let out = qalg(args, None);
        assert_eq!(out.status.code(), Some(0), "{module}: {args:?}");
        let v = json(&out);
        assert!(check(&v), "{module}: {args:?} gave {v}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn inputs_are_echoed_with_globals() {
    let v = json(&qalg(&["grover", "--n", "3", "--marked", "2,5", "--seed", "4", "--shots", "10"], None));
    assert_eq!(v["inputs"]["n"], 3);
    assert_eq!(v["inputs"]["marked"], serde_json::json!([2, 5]));
    assert_eq!(v["inputs"]["seed"], 4);
    assert_eq!(v["inputs"]["shots"], 10);
    let counts: u64 = v["distribution"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(counts, 10);
}

#[test]
fn output_is_sorted_compact_json() {
    let out = qalg(&["bell", "--x", "1", "--y", "1"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("}\n") && !text.contains(": "));
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn different_seeds_change_sampled_output() {
    let a = qalg(&["grover", "--n", "2", "--marked", "1", "--r", "0", "--shots", "200", "--seed", "1"], None);
    let b = qalg(&["grover", "--n", "2", "--marked", "1", "--r", "0", "--shots", "200", "--seed", "2"], None);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["no-such-command"],
        vec!["bv"],
        vec!["bv", "--s", "10x"],
        vec!["shor", "--n", "13"],
        vec!["rsa", "--p", "4", "--q", "13", "--e", "5", "--m", "6"],
        vec!["bell", "--json", "--text"],
        vec!["circuit-run"],
    ] {
        let out = qalg(&args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let v = json(&qalg(&["shor", "--n", "13"], None));
    assert_eq!(v["status"], "invalid");
    assert!(v["error"].as_str().is_some());
}

#[test]
fn inconclusive_runs_exit_one() {
    let out = qalg(&["simon", "--p", "011", "--max-runs", "1"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "inconclusive");
}

#[test]
fn qubit_cap_only_lowers_the_limit() {
    assert_eq!(qalg(&["qft", "--input", "000"], Some("3")).status.code(), Some(0));
    let out = qalg(&["qft", "--input", "000"], Some("2"));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(qalg(&["qft", "--input", "000"], Some("1000")).status.code(), Some(0));
    assert_eq!(qalg(&["qft", "--input", "000"], Some("zero")).status.code(), Some(2));
    let wide = "0".repeat(25);
    assert_eq!(qalg(&["qft", "--input", &wide], Some("1000")).status.code(), Some(2));
}

#[test]
fn text_mode_draws_histograms() {
    let out = qalg(&["bell", "--text"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("command: bell"));
    assert!(text.lines().any(|l| l.contains("00") && l.contains('#')));
}

#[test]
fn file_inputs_drive_each_format() {
    let table = scratch("simon.tt", "# p = 110\n000 00\n001 01\n010 10\n011 11\n100 10\n101 11\n110 00\n111 01\n");
    let v = json(&qalg(&["simon", "--file", &table, "--seed", "3"], None));
    assert_eq!(v["result"], "110");

    let dj = scratch("dj.tt", "00 0\n01 0\n10 0\n11 0\n");
    assert_eq!(json(&qalg(&["dj", "--file", &dj], None))["result"], "constant");

    let terms = scratch("h.pauli", "# X + Z\n1.0 X\n1.0 Z\n");
    assert!(close(&json(&qalg(&["lcu", "--file", &terms], None))["success"], 0.5));

    let grid = scratch("h.grid", "0 0 0 0.7\n0 -0.4 0 0\n0 0 1.1 0\n0.7 0 0 0\n");
    let v = json(&qalg(&["sparse1", "--file", &grid], None));
    assert!(v["error"].as_f64().unwrap() < 1e-8);

    let graph = scratch("g.graph", "5\n0 1 2\n0 3 1\n0 4 1\n1 2 2\n2 3 2\n3 4 3\n");
    let v = json(&qalg(&["qaoa", "--file", &graph, "--p", "1", "--budget", "50"], None));
    assert!(close(&v["optimum"], 10.0));
    assert_eq!(v["maximizers"], serde_json::json!(["01010", "10101"]));

    let ham = scratch("h.fermion", "2\n[h1]\n0 0 1 0\n1 1 -0.5 0\n0 1 0.2 0.1\n1 0 0.2 -0.1\n");
    let bk = json(&qalg(&["fermion-encode", "--file", &ham, "--encoding", "bk", "--spectrum"], None));
    let jw = json(&qalg(&["fermion-encode", "--file", &ham, "--encoding", "jw", "--spectrum"], None));
    assert_eq!(bk["spectrum"], jw["spectrum"]);
    assert!(bk["spectrum"].is_array());

    let broken = scratch("broken.qc", "h 0\nfoo 1\n");
    let out = qalg(&["circuit-run", "--file", &broken], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = qalg(&["circuit-run", "--file", "/definitely/not/here.qc"], None);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn circuit_run_reports_amplitudes() {
    let path = scratch("minus.qc", "x 0\nh 0\n");
    let v = json(&qalg(&["circuit-run", "--file", &path, "--amplitudes"], None));
    assert!(close(&v["state"]["1"][0], -std::f64::consts::FRAC_1_SQRT_2));
}

use serde_json::Value;
use std::f64::consts::PI;
use wzterm_cli::{leaves, parse_text, run, ResultEnvelope, EXIT_BAD_INPUT, EXIT_NO_CONVERGENCE};

fn value(env: &ResultEnvelope, key: &str) -> f64 {
    env.values[key]["value"].as_f64().unwrap_or_else(|| panic!("{key} missing"))
}

#[test]
fn clifford_values() {
    let env = run(["clifford"]).unwrap();
    assert_eq!(env.command, "clifford");
    assert!((value(&env, "E") - 16.0 * PI * PI).abs() < 1e-12);
    assert!((value(&env, "gamma_raw") - 3.0 * PI).abs() < 1e-8);
    assert!((value(&env, "gamma_canonical") - PI).abs() < 1e-8);
    assert_eq!(env.values["gamma_pi"]["multiple"], Value::from(1));
    for (k, v) in &env.values {
        assert!(v.get("tolerance").is_some() || v.get("stderr").is_some(), "{k} has no tolerance");
    }
}

#[test]
fn spectral_alpha() {
    let env = run(["spectral", "--alpha", "0,0.3"]).unwrap();
    assert!((value(&env, "gamma_canonical") - 4.0 * PI * 0.3 / 1.09).abs() < 1e-8);
    assert!((value(&env, "E") - 32.0 * PI * PI).abs() < 1e-9);
    let neg = run(["spectral", "--alpha", "-0.2,-0.4"]).unwrap();
    assert!((value(&neg, "gamma_raw") - value(&neg, "gamma_closed_form")).abs() < 1e-8);
}

#[test]
fn torus_hom_a2() {
    let env = run(["wz-torus-hom", "--group", "A2", "--m", "1,0", "--n", "0,1"]).unwrap();
    assert!((value(&env, "gamma_canonical") - PI).abs() < 1e-12);
    assert_eq!(env.values["gamma_pi"]["multiple"], Value::from(1));
}

#[test]
fn rerunning_echoed_inputs_reproduces_values() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["clifford", "--intervals", "512"],
        vec!["spectral", "--alpha", "0.2,-0.5", "--quad-tol", "1e-11"],
        vec!["wz-torus-hom", "--group", "g2", "--m", "1,-2", "--n", "3,1"],
        vec!["wz-sphere", "--group", "B3", "--energy", "150.79644737231007", "--theta", "1.3"],
        vec!["wz-degree", "--deg", "-3"],
        vec!["wz-symmetric", "--n", "5"],
        vec!["group-info", "--group", "E6", "--oracle"],
        vec!["moduli-holonomy", "--group", "A2", "--lambda1", "1,0", "--lambda2", "0,1", "--samples", "2001"],
        vec!["volume", "--surface", "equator", "--samples", "20000", "--seed", "9"],
        vec!["energy-numeric", "--grid", "32"],
        vec!["flat-check", "--grid", "16", "--perturb", "0.01"],
    ];
    for argv in cases {
        let a = run(argv.clone()).unwrap();
        let b = run(a.argv()).unwrap();
        assert_eq!(a.values, b.values, "{argv:?}");
        assert_eq!(a.inputs, b.inputs, "{argv:?}");
    }
}

#[test]
fn text_and_json_agree() {
    let env = run(["spectral", "--alpha", "0.5,0"]).unwrap();
    let json: Value = serde_json::from_str(&env.to_json()).unwrap();
    let (l, t) = (leaves(&json), parse_text(&env.to_text()));
    for (k, v) in &l {
        assert_eq!(Some(v), t.get(k), "{k}");
    }
    assert_eq!(l.len(), t.len());
    let text = run(["--format", "text", "clifford"]).unwrap();
    assert!(text.render().lines().any(|l| l.starts_with("values.gamma_raw.value = ")));
}

#[test]
fn dump_samples_writes_csv() {
    let dir = std::env::temp_dir().join(format!("wzterm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("clifford.csv");
    let env = run(["clifford", "--dump-samples", p.to_str().unwrap()]).unwrap();
    let csv = std::fs::read_to_string(&p).unwrap();
    assert!(csv.starts_with("theta,re_eta,im_eta,im_logmu1,im_logmu2,integrand\n"));
    assert_eq!(csv.lines().count(), 1026);
    assert_eq!(env.diagnostics["samples_written"]["rows"], Value::from(1025));
    let p = dir.join("moduli.csv");
    run(["moduli-holonomy", "--group", "A1", "--lambda1", "1", "--lambda2", "1", "--dump-samples", p.to_str().unwrap()])
        .unwrap();
    assert!(std::fs::read_to_string(&p).unwrap().starts_with("t,value\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_files() {
    let dir = std::env::temp_dir().join(format!("wzterm-cli-in-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let curve = dir.join("curve.json");
    std::fs::write(&curve, r#"{"kind":"nonconformal","alpha":[0,0.3]}"#).unwrap();
    let env = run(["spectral", "--input", curve.to_str().unwrap()]).unwrap();
    assert!((value(&env, "gamma_raw") - 4.0 * PI * 0.3 / 1.09).abs() < 1e-8);
    let path = dir.join("path.json");
    std::fs::write(&path, r#"{"group":"A1","t":[0,0.5,1],"a1":[[0],[0.5],[1]],"a2":[[0],[0.5],[1]]}"#).unwrap();
    let env = run(["moduli-holonomy", "--path", path.to_str().unwrap()]).unwrap();
    assert!((env.values["holonomy"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let map = dir.join("map.json");
    let q = vec![[1.0, 0.0, 0.0, 0.0]; 64];
    std::fs::write(&map, serde_json::json!({"nx": 8, "ny": 8, "q": q}).to_string()).unwrap();
    let env = run(["energy-numeric", "--map", map.to_str().unwrap()]).unwrap();
    assert_eq!(value(&env, "E"), 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(["no-such-command"]).unwrap_err().code, EXIT_BAD_INPUT);
    assert_eq!(run(["wz-torus-hom", "--group", "Z9", "--m", "1", "--n", "1"]).unwrap_err().code, EXIT_BAD_INPUT);
    assert_eq!(run(["spectral", "--alpha", "0.6,0.8"]).unwrap_err().code, EXIT_BAD_INPUT);
    assert_eq!(run(["spectral", "--input", "/nonexistent/curve.json"]).unwrap_err().code, EXIT_BAD_INPUT);
    assert_eq!(run(["volume", "--surface", "clifford", "--samples", "10"]).unwrap_err().code, EXIT_BAD_INPUT);
    let e = run(["clifford", "--intervals", "64", "--quad-tol", "1e-300"]).unwrap_err();
    assert_eq!(e.code, EXIT_NO_CONVERGENCE);
}

#[test]
fn thread_count_does_not_change_results() {
    let a = run(["volume", "--surface", "clifford", "--samples", "200000", "--threads", "1"]).unwrap();
    let b = run(["volume", "--surface", "clifford", "--samples", "200000", "--threads", "3"]).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.metadata.threads, Some(1));
    assert!(a.metadata.rng.as_deref().unwrap().starts_with("ChaCha8"));
}

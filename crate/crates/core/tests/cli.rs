use std::path::PathBuf;
use std::process::Command;

use gradlc::cli::{corpus_examples, run, RingSpecFile};
use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut argv = vec!["gradlc"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

fn scratch_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gradlc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn lc_table_on_pinched_quartic() {
    let (v, code) = json(&["lc-table", &corpus("pinched_quartic.ring"), "--window=-4:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["depth"], 1);
    let rows = v["result"]["rows"].as_array().unwrap();
    let h1: Vec<&Value> = rows.iter().filter(|r| r["i"] == 1).collect();
    assert_eq!(h1.len(), 1);
    assert_eq!((h1[0]["t"].as_i64(), h1[0]["dim"].as_u64()), (Some(1), Some(1)));
    assert!(rows.iter().filter(|r| r["i"] == 2).all(|r| r["t"].as_i64().unwrap() <= -1));
    assert!(rows.iter().any(|r| r["i"] == 2 && r["t"] == -4));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["koszul-check", "SEGRE", "--seed", "3"],
        vec!["finjective", "FERMAT", "-p", "5,7"],
        vec!["betti", "SEGRE", "--pretty"],
    ] {
        let argv: Vec<String> = std::iter::once("gradlc".to_string())
            .chain(args.iter().map(|a| match *a {
                "SEGRE" => corpus("segre_fermat.ring"),
                "FERMAT" => corpus("fermat_cubic.ring"),
                other => other.to_string(),
            }))
            .collect();
        let a = run(argv.clone());
        let b = run(argv);
        assert_eq!(a, b);
        assert!(!a.stdout.contains("timing"));
    }
}

#[test]
fn batch_results_keep_input_order() {
    let (v, code) = json(&["fedder", &corpus("fermat_cubic.ring"), "-p", "13,5,11,7"]);
    assert_eq!(code, 1);
    let got: Vec<(u64, bool)> = v["result"]["runs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["p"].as_u64().unwrap(), r["f_pure"].as_bool().unwrap()))
        .collect();
    assert_eq!(got, vec![(13, true), (5, false), (11, false), (7, true)]);
    let (v, code) = json(&["fedder", &corpus("fermat_cubic.ring"), "-p", "7,13"]);
    assert_eq!((v["verdict"].as_bool(), code), (Some(true), 0));
}

#[test]
fn power_and_frobenius_ext_maps() {
    let (v, code) = json(&["ext-inject", &corpus("pinched_quartic.ring"), "--power", "1,2"]);
    assert_eq!(code, 1);
    let runs = v["result"]["runs"].as_array().unwrap();
    assert_eq!(runs[0]["t"], 1);
    assert_eq!(runs[0]["injective"], true);
    let w = &runs[1]["rows"][3]["witness"];
    assert_eq!((w["j"].as_u64(), w["degree"].as_i64()), (Some(3), Some(-5)));
    let (v, code) = json(&["ext-inject", &corpus("fermat_cubic.ring"), "--frobenius", "-p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["runs"][0]["injective"], true);
}

#[test]
fn check_commands_and_verdicts() {
    let (v, code) = json(&["dubois-criterion", &corpus("segre_elliptic.ring")]);
    assert_eq!((v["verdict"].as_bool(), code), (Some(true), 0));
    assert!(!v["hypotheses"].as_array().unwrap().is_empty());
    assert!(v["result"].get("hypotheses").is_none());
    let (v, code) = json(&["stcm-obstruction", &corpus("segre_elliptic.ring")]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["hits"][0]["i"], 2);
    assert_eq!(v["result"]["hits"][0]["t"], 0);
    let (_, code) = json(&["vanishing", &corpus("pinched_quartic.ring")]);
    assert_eq!(code, 0);
    let (v, _) = json(&["dim", &corpus("segre_fermat.ring")]);
    assert_eq!(v["result"]["dim"], 4);
    let (v, _) = json(&["depth", &corpus("segre_fermat.ring")]);
    assert_eq!(v["result"]["depth"], 2);
    let (v, code) = json(&["deform", &corpus("fermat_cubic.ring"), "--element", "z", "-p", "7"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["runs"][0]["leg1"], false);
    assert_eq!(v["result"]["runs"][0]["leg2"], true);
    let (v, code) = json(&["koszul-check", &corpus("segre_fermat.ring")]);
    assert_eq!((code, v["seed"].as_u64()), (0, Some(0)));
}

#[test]
fn corpus_replays_cleanly() {
    let out = run(["gradlc", "corpus"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
    for (name, text) in corpus_examples() {
        let once = RingSpecFile::parse(text).unwrap();
        assert_eq!(RingSpecFile::parse(&once.serialize()).unwrap(), once, "{name}");
    }
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch_file("bad.ring", "field = Q\nvars = x, y\ngen = x^2 + y\n");
    let out = run(["gradlc", "depth", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    let comp = scratch_file("comp.ring", "field = Fp:15\nvars = x\n");
    assert_eq!(run(["gradlc", "dim", &comp]).code, 2);
    assert_eq!(run(["gradlc", "fedder", &corpus("fermat_cubic.ring")]).code, 2);
    assert_eq!(run(["gradlc", "fedder", &corpus("fermat_cubic.ring"), "-p", "9"]).code, 2);
    let fp = scratch_file("fp.ring", "field = Fp:5\nvars = x, y, z\ngen = x^3 + y^3 + z^3\n");
    assert_eq!(run(["gradlc", "fedder", &fp, "-p", "7"]).code, 2);
    let (v, code) = json(&["finjective", &fp]);
    assert_eq!((code, v["result"]["runs"][0]["p"].as_u64()), (1, Some(5)));
    assert_eq!(
        run(["gradlc", "ext-inject", &corpus("fermat_cubic.ring"), "--power", "2", "--frobenius", "-p", "5"]).code,
        2
    );
}

/// Caps are process-wide, so these run in a child process.
#[test]
fn resource_caps_exit_3() {
    let bin = env!("CARGO_BIN_EXE_gradlc");
    let out = Command::new(bin)
        .args(["depth", &corpus("segre_fermat.ring"), "--max-pairs", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource cap"));
    let out = Command::new(bin)
        .args(["koszul-check", &corpus("segre_fermat.ring"), "--max-strand-dim", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(bin).args(["corpus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pretty_and_timing_flags() {
    let out = run(["gradlc", "lc-table", &corpus("pinched_quartic.ring"), "--pretty"]);
    assert!(out.stdout.starts_with("gradlc "));
    assert!(out.stdout.contains("rows:\n  i  t"));
    let (v, _) = json(&["dim", &corpus("pinched_quartic.ring"), "--timing"]);
    assert!(v["timing_ms"].is_u64());
    assert_eq!(v["command"].as_str().unwrap().split(' ').next(), Some("dim"));
}

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

const FILES: [&str; 4] = ["cdga.jlw", "charvar.jlw", "torus.jlw", "hodge.jlw"];

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
    json: Value,
}

fn run_with(args: &[&str], files: &[&str], env_cache: Option<&Path>) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jumploci"));
    for f in files {
        cmd.arg("--workspace").arg(data(f));
    }
    cmd.args(args);
    cmd.env_remove("JUMPLOCI_CACHE");
    if let Some(dir) = env_cache {
        cmd.env("JUMPLOCI_CACHE", dir);
    }
    let o = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(o.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {stdout}"));
    Out { code: o.status.code().unwrap(), stdout, stderr: String::from_utf8(o.stderr).unwrap(), json }
}

fn run(args: &[&str]) -> Out {
    run_with(args, &FILES, None)
}

/// The report without its timing block.
fn payload(v: &Value) -> String {
    let mut v = v.clone();
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string(&v).unwrap()
}

fn suite() -> Vec<Vec<&'static str>> {
    [
        "validate",
        "resonance --algebra heis --i 1 --k 1 --point 0,0",
        "resonance --algebra pencil --i 1 --k 1 --subspace sum-zero",
        "resonance --algebra pencil --i 1 --k 1 --subspace diagonal",
        "resonance --algebra pencil --i 1 --k 1 --probe",
        "resonance --algebra torus --module torus-trunc --i 0 --k 1 --point 1,0",
        "charvar betti --complex torus2 --char 1/2,1/3",
        "charvar member --complex pencil --char 1/3,1/3,1/3 --i 1 --k 1",
        "charvar sweep --complex torus2 --i 1 --k 1",
        "charvar verify-torus --complex pencil --torus T111 --i 1 --k 1",
        "charvar verify-torus --complex pencil --torus axis --i 1 --k 1",
        "compare-exp --algebra pencil --complex pencil --i 1 --k 1 --samples 12",
        "torus exp-image --affine L-third",
        "torus member --torus T111-half --point 1/2,1/4,-1/4",
        "torus contain --torus S --in T",
        "torus intersect --torus diag2 --with anti2",
        "torus vanish --zeroset cubic --affine L-third",
        "torus axl --affine V1 --zeroset W1 --dim 1",
        "hodge check --hodge mixed",
        "hodge numbers --hodge mixed",
        "hodge lambda0 --hodge mixed",
        "hodge sub --hodge mixed --lattice 1_0_0;0_1_0",
        "hodge quotient --hodge mixed --lattice 1_0_0;0_1_0",
        "hodge bdr-verify --bdr pencil-pieces",
        "hodge bdr-verify --bdr mixed-pieces",
        "hodge ses --hodge E",
    ]
    .iter()
    .map(|s| s.split_whitespace().collect())
    .collect()
}

fn unspace(args: &[&str]) -> Vec<String> {
    args.iter().map(|a| a.replace('_', " ")).collect()
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn heisenberg_origin_is_member() {
    let o = run(&["resonance", "--algebra", "heis", "--i", "1", "--k", "1", "--point", "0,0"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.json["result"]["member"], true);
    assert_eq!(o.json["kind"], "exact");
    assert!(o.stderr.contains("[computed]"));
}

#[test]
fn torus_model_resonance_is_the_origin() {
    let o = run(&["resonance", "--algebra", "torus", "--i", "1", "--k", "1", "--probe"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.json["kind"], "heuristic");
    assert_eq!(o.json["result"]["candidates"], serde_json::json!([{"basis": [], "dim": 0}]));
    for (p, member) in [("0,0", true), ("1,0", false), ("-2/3,5", false)] {
        let o = run(&["resonance", "--algebra", "torus", "--i", "1", "--k", "1", "--point", p]);
        assert_eq!(o.json["result"]["member"], member, "{p}");
    }
}

#[test]
fn axl_diagonal_predicts_subtorus() {
    let o = run(&["torus", "axl", "--affine", "V1", "--zeroset", "W1", "--dim", "1"]);
    assert_eq!(o.code, 0);
    let p = &o.json["result"]["predicted"];
    assert_eq!(p["dim"], 1);
    assert_eq!(p["lattice"], serde_json::json!([["1", "1"]]));
    assert_eq!(o.json["result"]["predicted_verified"], true);
}

#[test]
fn pencil_torus_certified_exactly() {
    let o = run(&["charvar", "verify-torus", "--complex", "pencil", "--torus", "T111", "--i", "1", "--k", "1"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.json["status"], "certified");
    assert_eq!(o.json["kind"], "exact");
    assert_eq!(o.json["result"]["certificate"]["generic_betti"], 1);
}

#[test]
fn refutations_exit_1_with_witness() {
    for args in [
        vec!["charvar", "verify-torus", "--complex", "pencil", "--torus", "axis", "--i", "1", "--k", "1"],
        vec!["resonance", "--algebra", "pencil", "--i", "1", "--k", "1", "--subspace", "diagonal"],
        vec!["hodge", "bdr-verify", "--bdr", "mixed-pieces"],
        vec!["torus", "vanish", "--zeroset", "W1", "--torus", "anti2"],
    ] {
        let o = run(&args);
        assert_eq!(o.code, 1, "{args:?}");
        assert_eq!(o.json["status"], "refuted");
        assert!(!o.json["witnesses"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn refuted_torus_witness_is_off_the_variety() {
    let o = run(&["charvar", "verify-torus", "--complex", "pencil", "--torus", "axis", "--i", "1", "--k", "1"]);
    let ch: Vec<String> = o.json["witnesses"][0]["character"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let m = run(&["charvar", "member", "--complex", "pencil", "--char", &ch.join(","), "--i", "1", "--k", "1"]);
    assert_eq!(m.json["result"]["member"], false);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jlw");
    std::fs::write(&bad, "[torus T]\nn = 2\nlattice = 1 q\n").unwrap();
    let o = run_with(&["--workspace", bad.to_str().unwrap(), "validate"], &[], None);
    assert_eq!(o.code, 2);
    let e = &o.json["result"]["error"];
    assert_eq!((e["type"].as_str(), e["line"].as_u64(), e["column"].as_u64()), (Some("syntax"), Some(3), Some(13)));

    let dup = dir.path().join("dup.jlw");
    std::fs::write(&dup, "[torus S]\nn = 1\nlattice = 1\n").unwrap();
    let o = run_with(&["--workspace", dup.to_str().unwrap(), "validate"], &["torus.jlw"], None);
    assert_eq!(o.code, 2);
    assert_eq!(o.json["result"]["error"]["invariant"], "names unique per kind");

    let o = run_with(&["--workspace", "/nonexistent/x.jlw", "validate"], &[], None);
    assert_eq!((o.code, o.json["result"]["error"]["type"].as_str()), (2, Some("io")));
    let o = run(&["torus", "member", "--torus", "S", "--point", "1/2"]);
    assert_eq!(o.code, 2);
    let o = run(&["hodge", "numbers"]);
    assert_eq!((o.code, o.json["status"].as_str()), (2, Some("error")));
    // a strict load refuses invalid objects; validate lists them
    let o = run_with(&["hodge", "numbers", "--hodge", "degenerate"], &["invalid.jlw"], None);
    assert_eq!(o.code, 2);
    assert_eq!(o.json["result"]["error"]["type"], "semantic");
}

#[test]
fn validate_reports_violations() {
    let o = run_with(&["validate"], &["invalid.jlw"], None);
    assert_eq!(o.code, 1);
    let objs = o.json["result"]["objects"].as_array().unwrap();
    assert!(objs.iter().all(|x| x["valid"] == false));
    assert!(objs[0]["violations"].as_array().unwrap().iter().any(|v| v["invariant"] == "omega_squared"));
    let o = run_with(&["hodge", "check", "--hodge", "degenerate"], &["invalid.jlw"], None);
    assert_eq!(o.code, 1);
    let o = run(&["validate"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.json["result"]["objects"].as_array().unwrap().len(), 25);
}

#[test]
fn references_span_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pieces.jlw");
    std::fs::write(&f, "[bdr elsewhere]\nhodge = pencil\npiece = 1 1 1\n").unwrap();
    let o = run_with(&["--workspace", f.to_str().unwrap(), "hodge", "bdr-verify", "--bdr", "elsewhere"], &["hodge.jlw"], None);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn dual_inverts_the_character() {
    let a = run(&["--dual", "charvar", "betti", "--complex", "pencil", "--char", "1/3,1/3,1/3"]);
    let b = run(&["charvar", "betti", "--complex", "pencil", "--char", "-1/3,-1/3,-1/3"]);
    assert_eq!(a.json["result"]["betti"], b.json["result"]["betti"]);
    assert_eq!(a.json["result"]["groups"], "cohomology");
    let t = run(&["--dual", "charvar", "verify-torus", "--complex", "pencil", "--torus", "T111", "--i", "1", "--k", "1"]);
    assert_eq!(t.code, 0);
}

#[test]
fn json_flag_is_compact_and_quiet() {
    let o = run(&["--json", "hodge", "numbers", "--hodge", "E"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.is_empty());
    assert_eq!(o.stdout.trim_end().lines().count(), 1);
    assert_eq!(o.json["result"]["h10"], 1);
}

#[test]
fn deterministic_payloads() {
    for args in suite() {
        let args = unspace(&args);
        let a = run(&refs(&args));
        let b = run(&refs(&args));
        assert_eq!(payload(&a.json), payload(&b.json), "{args:?}");
        assert_eq!(a.code, b.code);
        assert!(a.code == 0 || a.code == 1, "{args:?}: {}", a.stdout);
    }
}

#[test]
fn cache_is_sound() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap().to_string();
    for args in suite() {
        let args = unspace(&args);
        let plain = run(&refs(&args));
        let mut with: Vec<&str> = vec!["--cache-dir", &cache];
        with.extend(refs(&args));
        let first = run(&with);
        let second = run(&with);
        assert_eq!(payload(&plain.json), payload(&first.json), "{args:?}");
        assert_eq!(payload(&plain.json), payload(&second.json), "{args:?}");
        assert_eq!((plain.code, first.code), (second.code, second.code));
        let used = (first.json["timing"]["cache"].as_str().unwrap().to_string(), second.json["timing"]["cache"].as_str().unwrap().to_string());
        assert!(used == ("miss".into(), "hit".into()) || used == ("not-applicable".into(), "not-applicable".into()), "{args:?}: {used:?}");
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 6);
}

#[test]
fn env_overrides_cache_dir_and_bad_entries_are_recomputed() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let args = ["--cache-dir", flag.path().to_str().unwrap(), "charvar", "verify-torus", "--complex", "pencil", "--torus", "T111", "--i", "1", "--k", "1"];
    let o = run_with(&args, &FILES, Some(env.path()));
    assert_eq!(o.json["timing"]["cache"], "miss");
    assert_eq!(std::fs::read_dir(flag.path()).unwrap().count(), 0);
    let entries: Vec<PathBuf> = std::fs::read_dir(env.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    std::fs::write(&entries[0], "not json").unwrap();
    let again = run_with(&args, &FILES, Some(env.path()));
    assert_eq!(again.json["timing"]["cache"], "miss");
    assert_eq!(payload(&again.json), payload(&o.json));
    let third = run_with(&args, &FILES, Some(env.path()));
    assert_eq!(third.json["timing"]["cache"], "hit");
}

#[test]
fn cache_keys_track_content_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let probe = ["--cache-dir", cache, "resonance", "--algebra", "pencil", "--i", "1", "--k", "1", "--probe"];
    assert_eq!(run(&probe).json["timing"]["cache"], "miss");
    let mut seeded = vec!["--seed", "5"];
    seeded.extend(probe);
    assert_eq!(run(&seeded).json["timing"]["cache"], "miss");
    // reformatting shares the entry; renaming does not, since names appear in results
    let ws = tempfile::tempdir().unwrap();
    let f = ws.path().join("respaced.jlw");
    let text = std::fs::read_to_string(data("cdga.jlw")).unwrap().replace("product e1 e2 = e12", "product   e1 e2 =    e12  # spaced");
    std::fs::write(&f, &text).unwrap();
    let cmd = |file: &Path, name: &str| {
        run_with(&["--workspace", file.to_str().unwrap(), "--cache-dir", cache, "resonance", "--algebra", name, "--i", "1", "--k", "1", "--probe"], &[], None)
    };
    assert_eq!(cmd(&f, "pencil").json["timing"]["cache"], "hit");
    let g = ws.path().join("renamed.jlw");
    std::fs::write(&g, text.replace("[algebra pencil]", "[algebra pencil2]")).unwrap();
    let o = cmd(&g, "pencil2");
    assert_eq!(o.json["timing"]["cache"], "miss");
    assert_eq!(o.json["result"]["target"], "algebra pencil2");
    // editing the object invalidates the entry
    let h = ws.path().join("edited.jlw");
    std::fs::write(&h, text.replace("product e2 e3 = -1 e12, 1 e13", "product e2 e3 = -1 e12, 2 e13")).unwrap();
    assert_eq!(cmd(&h, "pencil").json["timing"]["cache"], "miss");
}

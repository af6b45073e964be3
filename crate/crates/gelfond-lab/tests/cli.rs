//! End-to-end checks of the command-line front end and its exit-code
//! contract: 0 success, 2 usage/parse, 3 not found, 4 hypothesis
//! rejection, 5 undecided at cap, 1 internal failure.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gelfond-lab"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gelfond-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn zarankiewicz_reproduces_known_value() {
    let out = bin().args(["zarankiewicz", "2", "2", "2", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4 (bound 4)");

    let out = bin().args(["zarankiewicz", "2", "2", "3", "3"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "7 (bound 7)");

    let out = bin().args(["zarankiewicz", "5", "5", "5", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_exit_codes() {
    let out = bin().args(["verify", "detid", "--trials", "5", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 5, "one JSON line per trial");
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["verdict"], "HOLDS");
    }

    let out = bin().args(["verify", "no-such-suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let run = || {
        bin()
            .args(["verify", "gauss", "--trials", "4", "--seed", "3", "--workers", "2"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_single_instance_mode() {
    let dir = workdir("single");
    fs::write(dir.join("f.poly"), "1 -4 4\n").unwrap();
    fs::write(dir.join("g.poly"), "-1 2\n").unwrap();
    fs::write(dir.join("pts.txt"), "1/2 0\n").unwrap();
    let out = bin()
        .args(["verify", "propfg", "--t", "1"])
        .arg("--points")
        .arg(dir.join("pts.txt"))
        .arg("--f")
        .arg(dir.join("f.poly"))
        .arg("--g")
        .arg(dir.join("g.poly"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(v["verdict"], "HOLDS");
}

#[test]
fn pipeline_hypothesis_rejection_is_exit_4() {
    let dir = workdir("pipe");
    fs::write(dir.join("p.poly"), "1 -4 4\n").unwrap();
    fs::write(dir.join("m.maps"), "1 0\n").unwrap();
    fs::write(dir.join("e.pts"), "1/2 0\n").unwrap();
    let bundle = serde_json::json!({
        "kind": "propR", "poly": "p.poly", "maps": "m.maps", "points": "e.pts",
        "n": 2, "s": 1, "t": 1, "x": "6561", "kappa": "20",
    });
    fs::write(dir.join("b.json"), serde_json::to_string(&bundle).unwrap()).unwrap();
    let out = bin().arg("pipeline").arg(dir.join("b.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));

    fs::write(dir.join("bad.json"), "{not json").unwrap();
    let out = bin().arg("pipeline").arg(dir.join("bad.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_success_writes_trace() {
    let dir = workdir("pipe-ok");
    fs::write(dir.join("p.poly"), "1 -4 4\n").unwrap();
    fs::write(dir.join("m.maps"), "1 0\n").unwrap();
    fs::write(dir.join("e.pts"), "1/2 0\n").unwrap();
    let bundle = serde_json::json!({
        "kind": "propQ", "poly": "p.poly", "maps": "m.maps", "points": "e.pts",
        "n": 2, "t": 1,
    });
    fs::write(dir.join("b.json"), serde_json::to_string(&bundle).unwrap()).unwrap();
    let out = bin()
        .arg("pipeline")
        .arg(dir.join("b.json"))
        .arg("--out")
        .arg(dir.join("trace.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace["holds"], true);
    assert_eq!(trace["result_poly"], "1 -4 4");
}

#[test]
fn construct_not_found_is_exit_3() {
    let dir = workdir("construct");
    let spec = serde_json::json!({
        "n": 2, "beta": "1/10", "sigma": ["1/10"], "tau": "1/10", "nu": "6",
        "xi": ["1/3"],
    });
    fs::write(dir.join("spec.json"), serde_json::to_string(&spec).unwrap()).unwrap();
    let out = bin().arg("construct").arg(dir.join("spec.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    fs::write(dir.join("bad.json"), "nonsense").unwrap();
    let out = bin().arg("construct").arg(dir.join("bad.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_degenerate_point_succeeds() {
    let dir = workdir("construct-ok");
    let spec = serde_json::json!({
        "n": 6, "beta": "2", "sigma": ["1/5"], "tau": "1/10", "nu": "6/5",
        "xi": ["0"],
    });
    fs::write(dir.join("spec.json"), serde_json::to_string(&spec).unwrap()).unwrap();
    let out = bin().arg("construct").arg(dir.join("spec.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(v["certificate"]["verdict"], "HOLDS");
}

#[test]
fn partition_and_gcd_translates_commands() {
    let dir = workdir("misc");
    fs::write(dir.join("e.lat"), "8\n1 0 0 0 0 0 0 0\n").unwrap();
    let out = bin().arg("partition").arg("--e").arg(dir.join("e.lat")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    fs::write(dir.join("p.poly"), "-2 4 6\n").unwrap();
    let out = bin()
        .arg("gcd-translates")
        .arg("--poly")
        .arg(dir.join("p.poly"))
        .args(["--scales", "2", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

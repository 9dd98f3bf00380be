use std::path::Path;
use std::process::{Command, Output};

fn lab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicorn-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("MULTICORN_LAB_THREADS")
        .output()
        .expect("run multicorn-lab")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn index_of_the_main_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["index", "--family", "tricorn", "--c", "0.25", "--period", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("index.json"));
    assert!((v["tau"].as_f64().unwrap() - 0.5).abs() <= 1e-8, "{v}");
    assert!(dir.path().join("index.manifest").exists());
}

#[test]
fn airplane_root_height() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["ecalle", "--family", "tricorn", "--c", "-1.75", "--period", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("ecalle.json"));
    assert!(v["h"].as_f64().unwrap().abs() <= 1e-6, "{v}");
}

#[test]
fn manifest_reproduces_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = lab(a.path(), &["centers", "--family", "multicorn", "--degree", "3", "--period", "2"]);
    assert!(o.status.success());
    let manifest = a.path().join("centers.manifest");
    let o = lab(b.path(), &["centers", "--config", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["centers.json", "centers.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_configuration_exits_2_with_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "# typo\nfamly = tricorn\n").unwrap();
    let o = lab(dir.path(), &["index", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let rec: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(rec["error"], "config");
    assert_eq!(rec["exit_code"], 2);

    let o = lab(dir.path(), &["render", "--res", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lab(dir.path(), &["index", "--nope", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // c = 0 has no parabolic cycle
    let o = lab(dir.path(), &["ecalle", "--family", "tricorn", "--c", "0", "--period", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let rec: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(rec["exit_code"], 3);
}

#[test]
fn baby_render_writes_an_image() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["render", "--baby", "--center", "-1.754878", "--period", "3", "--res", "48", "--max_iter", "64"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ppm = std::fs::read(dir.path().join("render.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n48 48\n255\n"));
    assert_eq!(ppm.len(), b"P6\n48 48\n255\n".len() + 48 * 48 * 3);
}

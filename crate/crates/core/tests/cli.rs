use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfk"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("run gfk")
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("small.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = "trial = \"fn5\"\nlambda0 = -2.1742305\nscale = 6\ncheckpoints = [1, 2, 3, 4]\npaths = 120\nseed = 4\n";

#[test]
fn dry_run_prints_the_manifest() {
    let out = gfk(&[configs().join("fn5-desk.toml").to_str().unwrap(), "--dry-run"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# trial preset: fn5"));
    assert!(stdout.contains("trial = \"node-polynomial\""));
    assert!(stdout.contains("r0 = 0.73351723"));
    assert!(stdout.contains("20000 replications x 9600 steps"));
}

#[test]
fn invalid_config_exits_2() {
    let out = gfk(&[configs().join("pz.toml").to_str().unwrap(), "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha1"));

    let out = gfk(&["/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");

    let out = gfk(&[&config, "-o", a.to_str().unwrap(), "-w", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("λ0 = -2.1742305  λ1 = "));
    for f in ["table.tsv", "plot.dat", "summary.json", "manifest.toml"] {
        assert!(a.join(f).is_file(), "{f}");
    }

    assert!(gfk(&[&config, "-o", b.to_str().unwrap(), "-w", "1"]).status.success());
    assert!(gfk(&[&config, "-o", c.to_str().unwrap(), "--seed", "5"]).status.success());
    let table = |d: &Path| std::fs::read_to_string(d.join("table.tsv")).unwrap();
    assert_eq!(table(&a), table(&b));
    assert_ne!(table(&a), table(&c));
    assert!(table(&c).contains("seed = 5"));

    let replay = gfk(&[a.join("manifest.toml").to_str().unwrap(), "-o", dir.path().join("r").to_str().unwrap()]);
    assert!(replay.status.success());
    assert_eq!(
        std::fs::read(a.join("plot.dat")).unwrap(),
        std::fs::read(dir.path().join("r").join("plot.dat")).unwrap()
    );
}

#[test]
fn failed_fit_exits_3_and_keeps_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &format!("{SMALL}fit = \"both\"\n"));
    let out_dir = dir.path().join("out");
    let out = gfk(&[&config, "-o", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let table = std::fs::read_to_string(out_dir.join("table.tsv")).unwrap();
    assert!(table.contains("nlin fit failed"));
    assert!(table.contains("lin fit"));
}

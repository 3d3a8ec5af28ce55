//! The `voigt` binary and the file formats it writes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use voigt::config::RunConfig;
use voigt::io;
use voigt::Error;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_voigt"));
    c.env("VOIGT_THREADS", "2");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("voigt-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

const SWEEP: &str = "\
# inviscid and viscous BBM
model = bbm
n = 256
alpha = 8/256, 9/256, 12/256
nu = 0, 0.01
t_end = 1.2
sample_interval = 0.02
horizons = 0.6:0.02:1.2
spectrum_every = 30
checkpoint_every = 60
";

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(files(&p));
        } else {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[test]
fn sweep_twice_gives_identical_files() {
    let root = scratch("repeat");
    let cfg = root.join("sweep.cfg");
    fs::write(&cfg, SWEEP).unwrap();
    for run in ["a", "b"] {
        let out = bin()
            .args(["sweep", cfg.to_str().unwrap(), "--output", root.join(run).to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("blow-up indicated"));
    }
    let a = files(&root.join("a"));
    let b = files(&root.join("b"));
    assert_eq!(a.len(), b.len());
    assert!(a.len() > 10);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.file_name(), y.file_name());
        if x.file_name().unwrap() == "config.txt" {
            continue;
        }
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }

    let verdicts = fs::read_to_string(root.join("a/verdicts.csv")).unwrap();
    assert!(verdicts.starts_with("nu,blow_up_indicated,earliest_T,min_slope,min_slope_T,threshold,note\n"));
    let series = fs::read_to_string(root.join("a/series_a00_n00.csv")).unwrap();
    assert!(series.starts_with(io::SERIES_HEADER));
    let slopes = fs::read_to_string(root.join("a/slopes_n00.csv")).unwrap();
    assert!(slopes.starts_with("T,alpha_lo,alpha_hi,slope,p_estimate\n"));
    let spectrum = root.join("a/spectra/a00_n00_s00030.csv");
    assert_eq!(fs::read_to_string(&spectrum).unwrap().lines().next(), Some("kappa,E_kappa"));

    let ckpt = io::read_checkpoint(&root.join("a/checkpoints/a02_n01_s00060.ckpt")).unwrap();
    assert_eq!(ckpt.alpha, 12.0 / 256.0);
    assert_eq!(ckpt.nu, 0.01);
    assert_eq!(ckpt.t, 1.2);
    let copy = root.join("copy.ckpt");
    io::write_checkpoint(&copy, &ckpt).unwrap();
    assert_eq!(io::read_checkpoint(&copy).unwrap(), ckpt);
}

#[test]
fn analyze_reproduces_the_sweep_tables() {
    let root = scratch("analyze");
    let cfg = root.join("sweep.cfg");
    fs::write(&cfg, SWEEP).unwrap();
    let dir = root.join("out");
    let out = bin()
        .args(["sweep", cfg.to_str().unwrap(), "--output", dir.to_str().unwrap(), "--spectrum-every", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let before = fs::read(dir.join("slopes_n01.csv")).unwrap();
    let verdicts = fs::read(dir.join("verdicts.csv")).unwrap();
    fs::remove_file(dir.join("slopes_n01.csv")).unwrap();

    let out = bin().args(["analyze", dir.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(dir.join("slopes_n01.csv")).unwrap(), before);
    assert_eq!(fs::read(dir.join("verdicts.csv")).unwrap(), verdicts);

    // A looser threshold can only bring the verdict forward.
    let out = bin()
        .args(["analyze", dir.to_str().unwrap(), "--threshold", "-0.1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(dir.join("verdicts.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
}

#[test]
fn run_writes_series_and_final_state() {
    let dir = scratch("run");
    let out = bin()
        .args(["run", "--model", "ev3d", "--n", "8", "--alpha", "1/8", "--t-end", "0.2", "--sample-interval", "0.1"])
        .args(["--output", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = io::read_series(&dir.join("series.csv"), 0.125, 0.0).unwrap();
    assert_eq!(s.times, vec![0.0, 0.1, 0.2]);
    assert!(s.vort_max.is_some());
    let c = io::read_checkpoint(&dir.join("final.ckpt")).unwrap();
    assert_eq!(c.t, 0.2);
    assert_eq!(c.field.components(), 3);
}

#[test]
fn bad_input_fails_with_a_message() {
    let out = bin().args(["sweep"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("model"));

    let out = bin()
        .args(["run", "--model", "bbm", "--n", "64", "--alpha", "0.1, 0.2", "--t-end", "1", "--sample-interval", "0.1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("one alpha"));

    let out = bin().args(["oracle", "--t", "1.5"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn oracle_prints_a_table() {
    let out = bin().args(["oracle", "--t", "0.5", "--points", "4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,u");
    assert_eq!(rows.len(), 5);
    let u: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(u, 0.0);
}

#[test]
fn config_parsing_rules() {
    let cfg = RunConfig::parse("model = ev3d\nn = 16\nalpha = 12/1024, 16/1024\nt_end = 5\nsample_interval = 0.1\n").unwrap();
    assert_eq!(cfg.alphas, vec![0.01171875, 0.015625]);
    assert!(matches!(
        RunConfig::parse("model = ev3d\nalpha = 0.1\nt_end = 1\nsample_interval = 0.1\n"),
        Err(Error::MissingKey("n"))
    ));
    assert!(RunConfig::parse("").is_err());
    assert!(RunConfig::parse("model = bbm\nn = 64\nalpha = 1/0\nt_end = 1\nsample_interval = 0.1\n").is_err());
    assert!(RunConfig::parse("model = bbm\nn = 64\nalpha = 0.1\nt_end = 1\nsample_interval = 0.1\ncolour = red\n").is_err());
}

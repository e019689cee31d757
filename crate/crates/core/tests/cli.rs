use std::fs;
use std::path::Path;
use std::process::Command;

use ris_gbsm::cli;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risgbsm"))
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = dir.path().join("small.cfg");
    fs::write(&cfg, "sweep.seeds = 2\nsweep.sides = 1, 2\nris.size_x = 4\nris.size_y = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    for (cmd, file, want) in [
        ("pattern", "pattern_cut.csv", "strategy,model,pol_in,pol_out,theta_out_deg,gain_db"),
        ("snr-sweep", "snr_sweep.csv", "freq_ghz,n_side,strategy,snr_db"),
        ("asa-sweep", "asa_sweep.csv", "asa_deg,model,seed,snr_db"),
        ("dump-channel", "channel_dump.csv", "p,q,tap_index,delay_s,amp_re,amp_im"),
    ] {
        let r = cli::run(["risgbsm", cmd, "--config", cfg, "--out", out]).unwrap();
        assert_eq!(r.csv, dir.path().join(file));
        assert_eq!(header(&r.csv), want);
        assert!(r.manifest.exists());
    }
    assert!(!dir.path().join(".risgbsm.lock").exists());
}

#[test]
fn binary_runs_and_repeats_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let o = bin().args(["snr-sweep", "--seed", "9", "--out"]).arg(d).output().unwrap();
        assert!(o.status.success());
    }
    assert_eq!(fs::read(a.join("snr_sweep.csv")).unwrap(), fs::read(b.join("snr_sweep.csv")).unwrap());
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let r = cli::run([
        "risgbsm".as_ref(),
        "dump-channel".as_ref(),
        "--seed".as_ref(),
        "77".as_ref(),
        "--out".as_ref(),
        first.as_os_str(),
    ])
    .unwrap();
    let manifest = fs::read_to_string(&r.manifest).unwrap();
    assert!(manifest.contains("run.seed = 77"));
    assert!(manifest.contains("# command: dump-channel"));
    let again = dir.path().join("again");
    let r2 = cli::run([
        "risgbsm".as_ref(),
        "dump-channel".as_ref(),
        "--config".as_ref(),
        r.manifest.as_os_str(),
        "--out".as_ref(),
        again.as_os_str(),
    ])
    .unwrap();
    assert_eq!(fs::read(&r.csv).unwrap(), fs::read(&r2.csv).unwrap());
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "ris.size_x = 0\n").unwrap();
    let o = bin().args(["pattern", "--config"]).arg(&bad).arg("--out").arg(dir.path()).output().unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert!(!dir.path().join("pattern_cut.csv").exists());

    assert!(!bin().arg("bogus").output().unwrap().status.success());
    let missing = bin().args(["pattern", "--config", "/nonexistent/x.cfg"]).output().unwrap();
    assert!(!missing.status.success());
}

#[test]
fn locked_directory_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join(".risgbsm.lock"), "123\n").unwrap();
    let err = cli::run(["risgbsm", "pattern", "--out", dir.path().to_str().unwrap()]).unwrap_err();
    assert!(matches!(err, ris_gbsm::Error::Locked(_)));
    assert!(!dir.path().join("pattern_cut.csv").exists());
}

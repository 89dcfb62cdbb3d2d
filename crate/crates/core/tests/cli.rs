use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_holobraid"));
    c.env("HOLOBRAID_THREADS", "1");
    c
}

#[test]
fn suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = bin()
        .args(["suite", "--ell", "3", "--trials", "50", "--seed", "42", "--tol", "1e-9", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["trials"].as_array().unwrap().len(), 50);
    assert!(v["trials"][0]["comparison"].is_object());
    assert!(v["adjudications"]["orbit-step"]["chosen"].is_string());
    assert_eq!(v["summary"]["all_pass"], true);
}

#[test]
fn even_degree_is_a_usage_error() {
    let out = bin().args(["suite", "--ell", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn oracle_only_route_has_no_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.json");
    let out = bin()
        .args(["suite", "--ell", "3", "--trials", "3", "--route", "oracle", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["trials"][0]["comparison"].is_null());
}

#[test]
fn rmatrix_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.tsv");
    let out = bin().args(["rmatrix", "--ell", "3", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let (header, m) = holobraid::linalg::from_tsv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(header.contains("kind=R") && header.contains("kernel_dim=1"));
    assert_eq!(m.shape(), (9, 9));
    assert!((holobraid::linalg::det(&m).norm() - 1.0).abs() < 1e-9);
}

#[test]
fn dump_dir_holds_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["suite", "--ell", "3", "--trials", "2", "--dump-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    for name in ["trial0000_K.tsv", "trial0000_U.tsv", "trial0001_R_oracle.tsv", "trial0001_R_closed.tsv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn other_subcommands_succeed() {
    for args in [&["braid-map", "--ell", "5"][..], &["hybe", "--ell", "3"], &["series", "--ell", "3", "--q", "0.4"]] {
        let out = bin().args(args).output().unwrap();
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let _: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    }
}

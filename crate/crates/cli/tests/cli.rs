use std::path::Path;
use std::process::{Command, Output};

fn pshcert(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pshcert"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run pshcert")
}

const QUICK: &[&str] = &["certify", "--claims", "coefficients,zero_set,intersection", "--samples", "50"];

#[test]
fn passing_claims_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(QUICK, tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert_eq!(
        summary.lines().next().unwrap(),
        "claim,verdict,k,alpha,c,r,epsilon,samples,min_minor,wall_time"
    );
    assert!(summary.lines().count() > 1);
    let manifest_sha = String::from_utf8_lossy(&o.stdout)
        .lines()
        .find_map(|l| l.strip_prefix("manifest sha256 ").map(str::to_string))
        .unwrap();
    for e in std::fs::read_dir(tmp.path().join("claims")).unwrap() {
        let text = std::fs::read_to_string(e.unwrap().path()).unwrap();
        assert!(text.starts_with("[config]\n"));
        assert!(text.contains("k = 2"));
        assert!(text.contains(&format!("manifest_sha256 = {manifest_sha}")));
    }
}

#[test]
fn tampered_a_fails_the_identity_claim() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(&["certify", "--claims", "coefficients,identity.p_zzbar", "--tamper-a", "1/100"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("identity.p_zzbar") && l.contains("failed")), "{stdout}");
}

#[test]
fn alpha_beyond_threshold_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(&["certify", "--alpha", "1/2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("0.46"), "{err}");
    assert!(!tmp.path().join("summary.csv").exists());
}

#[test]
fn malformed_values_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["certify", "--radius", "x"][..],
        &["certify", "--convention", "other"][..],
        &["feasibility", "--range", "1/2"][..],
        &["hull", "--experiment", "none"][..],
    ] {
        let o = pshcert(args, tmp.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    std::fs::write(&cfg, "k = 3\nsamples = 20\nclaims = \"zero_set\"\nseed = 7\n").unwrap();
    let out = tmp.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_pshcert"))
        .arg("--config")
        .arg(&cfg)
        .args(["certify", "--seed", "9", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let row = summary.lines().nth(1).unwrap();
    assert!(row.starts_with("zero_set"));
    assert_eq!(row.split(',').nth(2), Some("3"));
    let report = std::fs::read_dir(out.join("claims")).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.contains("seed = 9"));

    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pshcert"))
        .arg("--config")
        .arg(&cfg)
        .arg("report")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn feasibility_writes_one_row_per_step() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(&["feasibility", "--range", "0:1/2", "--step", "1/100"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(tmp.path().join("feasibility.csv")).unwrap();
    assert_eq!(csv.lines().count(), 52);
    assert!(csv.lines().next().unwrap().starts_with("alpha,c_upper_bound,binding_numerator"));
    let feasible = |alpha: &str| {
        csv.lines().find(|l| l.starts_with(&format!("{alpha},"))).unwrap().ends_with("true")
    };
    assert!(feasible("23/50"));
    assert!(!feasible("47/100"));
    assert!(tmp.path().join("threshold.txt").exists());
}

#[test]
fn hull_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(&["hull", "--experiment", "kallin"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(tmp.path().join("hull/summary.csv")).unwrap();
    assert!(summary.lines().skip(1).all(|l| l.starts_with("kallin")));
    assert!(tmp.path().join("hull/kallin.txt").exists());

    let o = pshcert(QUICK, tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let r = pshcert(&["report"], tmp.path());
    assert_eq!(r.status.code(), Some(0));
    assert!(!r.stdout.is_empty());
}

#[test]
fn report_on_missing_directory_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pshcert(&["report"], &tmp.path().join("absent"));
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn worker_count_does_not_change_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for workers in ["1", "3"] {
        let out = tmp.path().join(workers);
        let o = Command::new(env!("CARGO_BIN_EXE_pshcert"))
            .env("PSHCERT_WORKERS", workers)
            .args(["certify", "--claims", "rho.nonneg,kernel[", "--samples", "200", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let mut files: Vec<_> = std::fs::read_dir(out.join("claims")).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        let body: Vec<String> = files
            .iter()
            .map(|f| {
                std::fs::read_to_string(f)
                    .unwrap()
                    .lines()
                    .filter(|l| !l.starts_with("wall_time") && !l.starts_with("out = "))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
            .collect();
        texts.push(body);
    }
    assert_eq!(texts[0], texts[1]);
}

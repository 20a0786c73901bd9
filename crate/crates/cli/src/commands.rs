//! The subcommands. Each writes its files under the configured output
//! directory; every text report starts with the full run configuration and
//! the construction manifest hash.

use std::fs;
use std::path::{Path, PathBuf};

use pshcert_core::certify::{
    binding_sign_change, feasibility_scan, run_suite, suite_manifest, threshold_root, CertReport, SuiteConfig,
};
use pshcert_core::constructions::{binding_numerator, ConstructionManifest};
use pshcert_core::scalar::{fmt_rational, rat, to_f64};
use pshcert_hull::{
    default_balls, fiber_density_experiment, Complex64, kallin_separation_demo, probe_experiment, HullOutcome, KallinOptions,
    ProbeOptions,
};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

fn header(cfg: &RunConfig, manifest_sha: &str) -> String {
    format!("[config]\n{}manifest_sha256 = {manifest_sha}\n\n", cfg.render())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// File name for a claim, e.g. `rho.psh[1/4]` → `rho.psh_1-4.txt`.
pub fn claim_file_name(claim: &str) -> String {
    let s: String = claim
        .chars()
        .filter(|&c| c != ']')
        .map(|c| match c {
            '[' | ',' => '_',
            '/' => '-',
            c => c,
        })
        .collect();
    format!("{s}.txt")
}

fn suite_config(cfg: &RunConfig) -> Result<SuiteConfig, CliError> {
    let mut sc = SuiteConfig::new(cfg.k).map_err(|e| CliError::Config(e.to_string()))?;
    sc.systems = cfg.systems()?;
    sc.convention = cfg.convention()?;
    sc.radius = cfg.radius()?;
    sc.eps = cfg.eps()?;
    sc.samples = cfg.samples;
    sc.value_samples = cfg.value_samples;
    sc.scheme = cfg.scheme()?;
    sc.seed = cfg.seed;
    sc.kernel_points = cfg.kernel_points;
    sc.select = cfg.claim_prefixes();
    sc.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(sc)
}

/// Validated suite configuration and its construction manifest.
pub fn manifest(cfg: &RunConfig) -> Result<(SuiteConfig, ConstructionManifest), CliError> {
    let sc = suite_config(cfg)?;
    let m = suite_manifest(&sc).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((sc, m))
}

pub struct CertifyOutcome {
    pub reports: Vec<CertReport>,
    pub manifest_sha256: String,
    pub out_dir: PathBuf,
}

impl CertifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(CertReport::passed)
    }
}

pub fn certify(cfg: &RunConfig) -> Result<CertifyOutcome, CliError> {
    let (sc, manifest) = manifest(cfg)?;
    let reports = run_suite(&sc).map_err(|e| CliError::Run(e.to_string()))?;
    let out = cfg.out.clone();
    let head = header(cfg, &manifest.sha256);
    write(&out.join("manifest.txt"), &format!("{head}{}", manifest.text))?;
    let mut csv_out = csv::Writer::from_writer(Vec::new());
    csv_out.write_record([
        "claim", "verdict", "k", "alpha", "c", "r", "epsilon", "samples", "min_minor", "wall_time",
    ])?;
    let opt = |r: &Option<pshcert_core::Rational>| r.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into());
    for r in &reports {
        write(&out.join("claims").join(claim_file_name(&r.claim)), &format!("{head}[claim]\n{}", r.render()))?;
        csv_out.write_record([
            r.claim.clone(),
            r.verdict.name().to_string(),
            cfg.k.to_string(),
            opt(&r.params.alpha),
            opt(&r.params.c),
            r.params.radius.as_ref().map(fmt_rational).unwrap_or_else(|| fmt_rational(&sc.radius)),
            r.params.eps.as_ref().map(fmt_rational).unwrap_or_else(|| fmt_rational(&sc.eps)),
            r.samples.to_string(),
            r.min_minor_text(),
            format!("{:.3}", r.wall_time.as_secs_f64()),
        ])?;
    }
    let bytes = csv_out.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    write(&out.join("summary.csv"), &String::from_utf8_lossy(&bytes))?;
    Ok(CertifyOutcome {
        reports,
        manifest_sha256: manifest.sha256,
        out_dir: out,
    })
}

pub struct FeasibilityOutcome {
    pub rows: usize,
    pub threshold: (pshcert_core::Rational, pshcert_core::Rational),
    pub sign_change: Option<(pshcert_core::Rational, pshcert_core::Rational)>,
}

pub fn feasibility(cfg: &RunConfig) -> Result<FeasibilityOutcome, CliError> {
    let (lo, hi, step) = cfg.scan_range()?;
    let tol = cfg.tolerance()?;
    let (_, manifest) = manifest(cfg)?;
    let rows = feasibility_scan(&lo, &hi, &step).map_err(|e| CliError::Config(e.to_string()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "alpha", "c_upper_bound", "binding_numerator", "margin4", "margin5", "margin6", "margin7", "feasible",
    ])?;
    for r in &rows {
        let mut rec = vec![
            fmt_rational(&r.alpha),
            r.bound.as_ref().map(fmt_rational).unwrap_or_else(|e| format!("error: {e}")),
            fmt_rational(&r.binding),
        ];
        for i in 0..4 {
            rec.push(r.margins.get(i).map(|(_, m)| fmt_rational(m)).unwrap_or_else(|| "-".into()));
        }
        rec.push(r.feasible().to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    write(&cfg.out.join("feasibility.csv"), &String::from_utf8_lossy(&bytes))?;

    let threshold = threshold_root(&tol).map_err(|e| CliError::Config(e.to_string()))?;
    let sign_change = binding_sign_change(&rows);
    let (a, b) = (rat(46, 100), rat(47, 100));
    let mut text = header(cfg, &manifest.sha256);
    text.push_str("[feasibility]\n");
    text.push_str(&format!("rows = {}\n", rows.len()));
    text.push_str(&format!(
        "threshold_interval = [{}, {}]\n",
        fmt_rational(&threshold.0),
        fmt_rational(&threshold.1)
    ));
    text.push_str(&format!(
        "threshold_interval_decimal = [{:.6}, {:.6}]\n",
        to_f64(&threshold.0),
        to_f64(&threshold.1)
    ));
    text.push_str(&format!(
        "scan_sign_change = {}\n",
        sign_change
            .as_ref()
            .map(|(x, y)| format!("({}, {})", fmt_rational(x), fmt_rational(y)))
            .unwrap_or_else(|| "none in range".into())
    ));
    text.push_str(&format!("binding_numerator(46/100) = {}\n", fmt_rational(&binding_numerator(&a))));
    text.push_str(&format!("binding_numerator(47/100) = {}\n", fmt_rational(&binding_numerator(&b))));
    write(&cfg.out.join("threshold.txt"), &text)?;
    Ok(FeasibilityOutcome {
        rows: rows.len(),
        threshold,
        sign_change,
    })
}

/// One line of the hull summary.
#[derive(Debug, Clone, PartialEq)]
pub struct HullRow {
    pub experiment: String,
    pub query: String,
    pub verdict: String,
    pub margin: String,
    pub degree: String,
    pub value: String,
}

pub struct HullRun {
    pub rows: Vec<HullRow>,
    /// Experiment name and whether it met its pass condition.
    pub experiments: Vec<(String, bool)>,
}

impl HullRun {
    pub fn all_passed(&self) -> bool {
        self.experiments.iter().all(|(_, ok)| *ok)
    }
}

fn outcome_row(experiment: &str, query: String, o: &HullOutcome) -> HullRow {
    let (margin, degree) = match o.certificate() {
        Some(c) => (format!("{:.6e}", c.margin), c.degree.to_string()),
        None => ("-".into(), "-".into()),
    };
    HullRow {
        experiment: experiment.into(),
        query,
        verdict: o.verdict().into(),
        margin,
        degree,
        value: "-".into(),
    }
}

fn point_text(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
    format!("({})", parts.join(" "))
}

pub fn hull(cfg: &RunConfig) -> Result<HullRun, CliError> {
    let experiments = cfg.experiments()?;
    let degrees = cfg.probe_degrees()?;
    let fiber_degrees = cfg.fiber_degrees()?;
    if cfg.grid == 0 || cfg.fiber_grid == 0 || cfg.probes == 0 {
        return Err(CliError::Config("grid, fiber_grid and probes must be positive".into()));
    }
    let (sc, manifest) = manifest(cfg)?;
    let head = header(cfg, &manifest.sha256);
    let dir = cfg.out.join("hull");
    let run_err = |e: pshcert_hull::HullError| CliError::Run(e.to_string());
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for exp in experiments {
        match exp {
            "kallin" => {
                let r = kallin_separation_demo(default_balls(), &KallinOptions::default()).map_err(run_err)?;
                let gap = (r.disks[0].center - r.disks[1].center).norm() - r.disks[0].radius - r.disks[1].radius;
                rows.push(HullRow {
                    experiment: "kallin".into(),
                    query: "separation".into(),
                    verdict: if r.separated { "separated" } else { "not-separated" }.into(),
                    margin: format!("{gap:.6e}"),
                    degree: "1".into(),
                    value: "-".into(),
                });
                for (i, (p, o)) in r.queries.iter().enumerate() {
                    rows.push(outcome_row("kallin", point_text(p), o));
                    write(&dir.join("certificates").join(format!("kallin_q{}.txt", i + 1)), &format!("{head}{}", o.render()))?;
                }
                write(&dir.join("kallin.txt"), &format!("{head}{}", r.render()))?;
                verdicts.push(("kallin".to_string(), r.passed()));
            }
            "fiber" => {
                let t = fiber_density_experiment(&fiber_degrees, cfg.fiber_grid).map_err(run_err)?;
                let monotone = t.is_monotone(1e-12);
                let mut text = format!("{head}experiment: fiber\nfiber: {}\ngrid: {}\npoints: {}\n", t.fiber, t.grid, t.points);
                for r in &t.rows {
                    text.push_str(&format!("degree {} basis {} error {:.12e}\n", r.degree, r.basis_size, r.error));
                    rows.push(HullRow {
                        experiment: "fiber".into(),
                        query: format!("degree {}", r.degree),
                        verdict: if monotone { "monotone" } else { "non-monotone" }.into(),
                        margin: "-".into(),
                        degree: r.degree.to_string(),
                        value: format!("{:.12e}", r.error),
                    });
                }
                text.push_str(&format!("monotone: {monotone}\n"));
                write(&dir.join("fiber.txt"), &text)?;
                verdicts.push(("fiber".to_string(), monotone));
            }
            _ => {
                let opts = ProbeOptions {
                    k: 2,
                    radius: to_f64(&sc.radius),
                    grid: cfg.grid,
                    probes: cfg.probes,
                    seed: cfg.seed,
                    degrees: degrees.clone(),
                    ..ProbeOptions::default()
                };
                let r = probe_experiment(&opts).map_err(run_err)?;
                for (i, (p, o)) in r.results.iter().enumerate() {
                    rows.push(outcome_row("probes", point_text(&p.point), o));
                    write(
                        &dir.join("certificates").join(format!("probe_{:03}.txt", i + 1)),
                        &format!("{head}{}", o.render()),
                    )?;
                }
                write(&dir.join("probes.txt"), &format!("{head}{}", r.render()))?;
                verdicts.push(("probes".to_string(), r.fraction_excluded() >= 0.95));
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["experiment", "query", "verdict", "margin", "degree", "value"])?;
    for r in &rows {
        w.write_record([&r.experiment, &r.query, &r.verdict, &r.margin, &r.degree, &r.value])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    write(&dir.join("summary.csv"), &String::from_utf8_lossy(&bytes))?;
    Ok(HullRun { rows, experiments: verdicts })
}

/// Reads the summaries under `out` and prints an overview. Returns the
/// overview and whether every recorded claim and experiment passed.
pub fn report(out: &Path) -> Result<(String, bool), CliError> {
    let mut text = String::new();
    let mut ok = true;
    let mut found = false;
    let summary = out.join("summary.csv");
    if summary.exists() {
        found = true;
        let mut r = csv::Reader::from_path(&summary)?;
        let (mut pass, mut fail) = (0, 0);
        let mut failed = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.get(1) == Some("failed") {
                fail += 1;
                failed.push(rec.get(0).unwrap_or("?").to_string());
            } else {
                pass += 1;
            }
        }
        ok &= fail == 0;
        text.push_str(&format!("certify: {pass} passed, {fail} failed (summary sha256 {})\n", file_sha256(&summary)?));
        for f in failed {
            text.push_str(&format!("  failed: {f}\n"));
        }
        if let Ok(m) = fs::read_to_string(out.join("manifest.txt")) {
            if let Some(line) = m.lines().find(|l| l.starts_with("manifest_sha256")) {
                text.push_str(&format!("  {line}\n"));
            }
        }
    }
    let threshold = out.join("threshold.txt");
    if threshold.exists() {
        found = true;
        let t = fs::read_to_string(&threshold)?;
        for line in t.lines().filter(|l| l.starts_with("threshold_interval =") || l.starts_with("rows =")) {
            text.push_str(&format!("feasibility: {line}\n"));
        }
    }
    let hull = out.join("hull").join("summary.csv");
    if hull.exists() {
        found = true;
        let mut r = csv::Reader::from_path(&hull)?;
        let (mut excluded, mut unknown) = (0, 0);
        let mut kallin_ok = true;
        let mut fiber_ok = true;
        for rec in r.records() {
            let rec = rec?;
            match (rec.get(0), rec.get(2)) {
                (Some("probes"), Some(v)) if v.starts_with("excluded") => excluded += 1,
                (Some("probes"), _) => unknown += 1,
                (Some("kallin"), Some(v)) => kallin_ok &= v == "separated" || v == "excluded",
                (Some("fiber"), Some(v)) => fiber_ok &= v == "monotone",
                _ => {}
            }
        }
        let probes_ok = excluded + unknown == 0 || excluded as f64 >= 0.95 * (excluded + unknown) as f64;
        ok &= kallin_ok && fiber_ok && probes_ok;
        text.push_str(&format!(
            "hull: kallin {}, fiber {}, probes {excluded} excluded / {unknown} unknown (one-sided)\n",
            if kallin_ok { "pass" } else { "fail" },
            if fiber_ok { "monotone" } else { "non-monotone" }
        ));
    }
    if !found {
        return Err(CliError::Config(format!("no reports under {}", out.display())));
    }
    Ok((text, ok))
}

/// Hex SHA-256 of a file's bytes.
pub fn file_sha256(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

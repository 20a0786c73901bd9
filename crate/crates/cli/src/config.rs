//! The flat key-value run configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pshcert_core::constructions::{alpha_threshold, CoefficientSystem, ShiftConvention};
use pshcert_core::sampling::Scheme;
use pshcert_core::scalar::{fmt_rational, int, parse_rational};
use pshcert_core::Rational;
use serde::Deserialize;

use crate::CliError;

/// Every field has a default; a config file may set any subset.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub k: usize,
    /// Comma-separated rationals.
    pub alpha: String,
    /// A rational, or `half-bound` for `c_upper_bound(α)/2`.
    pub c: String,
    pub radius: String,
    pub eps: String,
    pub samples: usize,
    pub value_samples: usize,
    /// `halton`, `random` or `grid`.
    pub scheme: String,
    pub seed: u64,
    /// Comma-separated claim-name prefixes; empty selects every claim.
    pub claims: String,
    /// `summed` or `averaged`.
    pub convention: String,
    pub kernel_points: usize,
    /// Added to `A` after solving; nonzero values break equality (1).
    pub tamper_a: String,
    pub out: PathBuf,
    /// `RAT:RAT`.
    pub range: String,
    pub step: String,
    pub tol: String,
    /// `all`, `kallin`, `fiber` or `probes`.
    pub experiment: String,
    pub degree: usize,
    pub grid: usize,
    pub fiber_grid: usize,
    pub fiber_degrees: String,
    pub probes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 2,
            alpha: "1/4,1/3".into(),
            c: "half-bound".into(),
            radius: "1/10".into(),
            eps: "1/100".into(),
            samples: 1000,
            value_samples: 10_000,
            scheme: "halton".into(),
            seed: 1,
            claims: String::new(),
            convention: "summed".into(),
            kernel_points: 5,
            tamper_a: "0".into(),
            out: PathBuf::from("pshcert-out"),
            range: "0:1/2".into(),
            step: "1/100".into(),
            tol: "1/1000".into(),
            experiment: "all".into(),
            degree: 6,
            grid: 9,
            fiber_grid: 64,
            fiber_degrees: "0,2,4,8,12".into(),
            probes: 100,
        }
    }
}

fn rational(key: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::Config(format!("{key}: '{s}' is not a rational number")))
}

fn list<T>(key: &str, s: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| f(t).ok_or_else(|| CliError::Config(format!("{key}: bad entry '{t}'"))))
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Canonical `key = value` text; it parses back to the same config.
    pub fn render(&self) -> String {
        let mut t = String::new();
        let q = |s: &str| format!("{s:?}");
        let _ = writeln!(t, "k = {}", self.k);
        let _ = writeln!(t, "alpha = {}", q(&self.alpha));
        let _ = writeln!(t, "c = {}", q(&self.c));
        let _ = writeln!(t, "radius = {}", q(&self.radius));
        let _ = writeln!(t, "eps = {}", q(&self.eps));
        let _ = writeln!(t, "samples = {}", self.samples);
        let _ = writeln!(t, "value_samples = {}", self.value_samples);
        let _ = writeln!(t, "scheme = {}", q(&self.scheme));
        let _ = writeln!(t, "seed = {}", self.seed);
        let _ = writeln!(t, "claims = {}", q(&self.claims));
        let _ = writeln!(t, "convention = {}", q(&self.convention));
        let _ = writeln!(t, "kernel_points = {}", self.kernel_points);
        let _ = writeln!(t, "tamper_a = {}", q(&self.tamper_a));
        let _ = writeln!(t, "out = {}", q(&self.out.display().to_string()));
        let _ = writeln!(t, "range = {}", q(&self.range));
        let _ = writeln!(t, "step = {}", q(&self.step));
        let _ = writeln!(t, "tol = {}", q(&self.tol));
        let _ = writeln!(t, "experiment = {}", q(&self.experiment));
        let _ = writeln!(t, "degree = {}", self.degree);
        let _ = writeln!(t, "grid = {}", self.grid);
        let _ = writeln!(t, "fiber_grid = {}", self.fiber_grid);
        let _ = writeln!(t, "fiber_degrees = {}", q(&self.fiber_degrees));
        let _ = writeln!(t, "probes = {}", self.probes);
        t
    }

    pub fn alphas(&self) -> Result<Vec<Rational>, CliError> {
        let v = list("alpha", &self.alpha, |t| parse_rational(t).ok())?;
        if v.is_empty() {
            return Err(CliError::Config("alpha: at least one value required".into()));
        }
        let threshold = alpha_threshold();
        for a in &v {
            if *a < int(0) {
                return Err(CliError::Config(format!("alpha = {} must be non-negative", fmt_rational(a))));
            }
            if *a >= threshold {
                return Err(CliError::Config(format!(
                    "alpha = {} rejected: the coefficient conditions are only feasible for alpha < 0.46 \
                     (the binding numerator 16 + 8a - 64a^2 - 60a^3 changes sign in (0.46, 0.47))",
                    fmt_rational(a)
                )));
            }
        }
        Ok(v)
    }

    /// Coefficient systems for the configured `α`, `c` policy and tampering.
    pub fn systems(&self) -> Result<Vec<CoefficientSystem>, CliError> {
        let tamper = rational("tamper_a", &self.tamper_a)?;
        let mut out = Vec::new();
        for a in self.alphas()? {
            let sys = match self.c.trim() {
                "half-bound" => CoefficientSystem::half_bound(a),
                s => CoefficientSystem::solve(a, rational("c", s)?),
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            out.push(if tamper == int(0) {
                sys
            } else {
                let a = &sys.a + &tamper;
                CoefficientSystem::from_parts(sys.alpha, sys.c, a, sys.a_prime, sys.b)
            });
        }
        Ok(out)
    }

    pub fn radius(&self) -> Result<Rational, CliError> {
        rational("radius", &self.radius)
    }

    pub fn eps(&self) -> Result<Rational, CliError> {
        rational("eps", &self.eps)
    }

    pub fn scheme(&self) -> Result<Scheme, CliError> {
        match self.scheme.trim() {
            "halton" => Ok(Scheme::Halton),
            "random" => Ok(Scheme::Random { seed: self.seed }),
            "grid" => Ok(Scheme::FullGrid),
            s => Err(CliError::Config(format!("scheme: unknown '{s}' (halton, random, grid)"))),
        }
    }

    pub fn convention(&self) -> Result<ShiftConvention, CliError> {
        match self.convention.trim() {
            "summed" => Ok(ShiftConvention::Summed),
            "averaged" => Ok(ShiftConvention::Averaged),
            s => Err(CliError::Config(format!("convention: unknown '{s}' (summed, averaged)"))),
        }
    }

    pub fn claim_prefixes(&self) -> Vec<String> {
        self.claims
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }

    pub fn scan_range(&self) -> Result<(Rational, Rational, Rational), CliError> {
        let (lo, hi) = self
            .range
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("range: expected RAT:RAT, got '{}'", self.range)))?;
        let (lo, hi) = (rational("range", lo)?, rational("range", hi)?);
        let step = rational("step", &self.step)?;
        if lo > hi {
            return Err(CliError::Config("range: lower end above upper end".into()));
        }
        if step <= int(0) {
            return Err(CliError::Config("step must be positive".into()));
        }
        Ok((lo, hi, step))
    }

    pub fn tolerance(&self) -> Result<Rational, CliError> {
        let t = rational("tol", &self.tol)?;
        if t <= int(0) {
            return Err(CliError::Config("tol must be positive".into()));
        }
        Ok(t)
    }

    pub fn fiber_degrees(&self) -> Result<Vec<usize>, CliError> {
        let v = list("fiber_degrees", &self.fiber_degrees, |t| t.parse().ok())?;
        if v.is_empty() {
            return Err(CliError::Config("fiber_degrees: at least one degree required".into()));
        }
        Ok(v)
    }

    /// Degrees tried per probe: the standard ladder cut at `degree`.
    pub fn probe_degrees(&self) -> Result<Vec<usize>, CliError> {
        if self.degree == 0 {
            return Err(CliError::Config("degree must be at least 1".into()));
        }
        let mut v: Vec<usize> = [1, 2, 4, 6].into_iter().filter(|&d| d < self.degree).collect();
        v.push(self.degree);
        Ok(v)
    }

    pub fn experiments(&self) -> Result<Vec<&'static str>, CliError> {
        match self.experiment.trim() {
            "all" => Ok(vec!["kallin", "fiber", "probes"]),
            "kallin" => Ok(vec!["kallin"]),
            "fiber" => Ok(vec!["fiber"]),
            "probes" => Ok(vec!["probes"]),
            s => Err(CliError::Config(format!("experiment: unknown '{s}' (all, kallin, fiber, probes)"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parses_back() {
        let mut c = RunConfig::default();
        c.alpha = "1/5".into();
        c.seed = 9;
        assert_eq!(RunConfig::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = RunConfig::parse("k = 3\nalpha = \"1/4\"\n").unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(c.samples, 1000);
        assert!(RunConfig::parse("bogus = 1").is_err());
    }

    #[test]
    fn alpha_half_is_rejected() {
        let c = RunConfig { alpha: "1/2".into(), ..RunConfig::default() };
        let e = c.alphas().unwrap_err().to_string();
        assert!(e.contains("0.46"), "{e}");
    }

    #[test]
    fn probe_ladder() {
        let c = RunConfig { degree: 6, ..RunConfig::default() };
        assert_eq!(c.probe_degrees().unwrap(), vec![1, 2, 4, 6]);
        let c = RunConfig { degree: 3, ..RunConfig::default() };
        assert_eq!(c.probe_degrees().unwrap(), vec![1, 2, 3]);
    }
}

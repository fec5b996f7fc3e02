//! Experiment configuration and dispatch behind the `lowlying` binary.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{atomic_write, cache_extend, sha256_hex};
use crate::central::{family_rank_statistics, required_terms, DEFAULT_THRESHOLD};
use crate::characters::{enumerate_family, WeightFunction, WeightKind};
use crate::cubic::{enumerate_cubic_fields, fields_csv, local_density_report};
use crate::curve::{ApTable, CurveInput, EllipticCurve};
use crate::density::{
    prime_cutoffs, rank_bound_cyclic, rank_bound_sd, series_csv, DensityReport, Fejer, TestFunction,
};
use crate::error::{Error, Result};
use crate::report::fmt_num;

/// Environment variable consulted when no cache directory is configured.
pub const CACHE_ENV: &str = "LOWLYING_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Ap,
    Chars,
    DensityCyclic,
    DensityCubic,
    Ranks,
    Fields,
    Bound,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[default]
    Cyclic,
    S3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub family: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, rename = "X", skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub weight: WeightKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thread_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Relative zero threshold for rank estimation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Primes for the local density table in `fields` mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn need<T: Copy>(v: Option<T>, name: &str, mode: Mode) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("{name} is required for mode {}", mode_name(mode))))
    }

    pub fn mode(&self) -> Result<Mode> {
        self.mode.ok_or_else(|| Error::Config("mode is required".into()))
    }

    /// Checks ranges and the fields each mode needs.
    pub fn validate(&self) -> Result<()> {
        let mode = self.mode()?;
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::Config(format!("sigma = {s} must lie in (0, 1]")));
            }
        }
        if let Some(x) = self.x {
            if !(x >= 1.0 && x.is_finite()) {
                return Err(Error::Config(format!("X = {x} must be >= 1")));
            }
        }
        if let Some(l) = self.l {
            if l < 3 || !crate::arith::is_prime(l as u64) {
                return Err(Error::Config(format!("l = {l} must be an odd prime")));
            }
        }
        if self.thread_count == Some(0) {
            return Err(Error::Config("thread_count must be positive".into()));
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0) {
                return Err(Error::Config("threshold must be positive".into()));
            }
        }
        let needs_curve = !matches!(mode, Mode::Chars | Mode::Fields | Mode::Bound);
        if needs_curve && self.curve.is_none() {
            return Err(Error::Config(format!("curve is required for mode {}", mode_name(mode))));
        }
        match mode {
            Mode::Ap => {
                Self::need(self.prime_cap, "prime_cap", mode)?;
            }
            Mode::Chars | Mode::Ranks | Mode::DensityCyclic => {
                Self::need(self.l, "l", mode)?;
                Self::need(self.x, "X", mode)?;
            }
            Mode::DensityCubic | Mode::Fields | Mode::Theta => {
                Self::need(self.x, "X", mode)?;
            }
            Mode::Bound => {}
        }
        if matches!(mode, Mode::DensityCyclic | Mode::DensityCubic | Mode::Bound) {
            Self::need(self.sigma, "sigma", mode)?;
        }
        Ok(())
    }

    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
    }

    fn weight(&self) -> WeightFunction {
        WeightFunction { kind: self.weight }
    }

    fn curve(&self) -> Result<EllipticCurve> {
        let input = self
            .curve
            .as_ref()
            .ok_or_else(|| Error::Config("curve block missing".into()))?;
        // bad models are configuration errors at this boundary
        EllipticCurve::from_input(input).map_err(|e| match e {
            Error::InvalidCurve(m) => Error::Config(format!("invalid curve: {m}")),
            other => other,
        })
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Ap => "ap",
        Mode::Chars => "chars",
        Mode::DensityCyclic => "density-cyclic",
        Mode::DensityCubic => "density-cubic",
        Mode::Ranks => "ranks",
        Mode::Fields => "fields",
        Mode::Bound => "bound",
        Mode::Theta => "theta",
    }
}

/// Result of a run: a JSON summary plus named artifact files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: Value,
    pub artifacts: Vec<(String, String)>,
    /// Non-fatal conditions (e.g. a rebuilt cache).
    pub warnings: Vec<Value>,
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            let r: f64 = fmt_num(x).parse().unwrap_or(x);
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn error_record(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn load_table(config: &ExperimentConfig, curve: &EllipticCurve, limit: u64, warnings: &mut Vec<Value>) -> Result<ApTable> {
    if let Some(cap) = config.prime_cap {
        if limit > cap {
            return Err(Error::Config(format!("prime cutoff {limit} exceeds prime_cap {cap}")));
        }
    }
    match config.cache_dir() {
        Some(dir) => {
            let out = cache_extend(&dir, curve, limit)?;
            if let Some(e) = out.corruption {
                warnings.push(json!({ "warning": e.kind(), "message": e.to_string(), "action": "rebuilt" }));
            }
            let mut table = out.table;
            table.entries.retain(|d| d.p <= limit);
            table.limit = limit;
            Ok(table)
        }
        None => Ok(ApTable::compute(curve, limit)),
    }
}

fn density_json(report: &DensityReport) -> Value {
    let mut v = to_value(report);
    v["gap"] = json!(report.gap());
    v
}

/// Runs one experiment inside a pool of `thread_count` workers.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.thread_count {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &ExperimentConfig) -> Result<RunOutput> {
    let mode = config.mode()?;
    let mut artifacts = Vec::new();
    let mut warnings = Vec::new();
    let summary = match mode {
        Mode::Bound => {
            let phi = Fejer::new(config.sigma.unwrap())?;
            let bound = match config.family {
                FamilyKind::Cyclic => rank_bound_cyclic(&phi),
                FamilyKind::S3 => rank_bound_sd(&phi),
            };
            let known = config.curve.as_ref().and_then(|c| c.rank);
            json!({
                "family": config.family,
                "sigma": config.sigma,
                "bound": bound,
                "bound_with_rank": known.map(|r| bound + r as f64),
            })
        }
        Mode::Ap => {
            let curve = config.curve()?;
            let cap = config.prime_cap.unwrap();
            let table = load_table(config, &curve, cap, &mut warnings)?;
            artifacts.push((
                "ap.csv".to_string(),
                format!("p,reduction,a_p\n{}", crate::cache::ap_rows(&table.entries)),
            ));
            json!({ "fingerprint": curve.fingerprint(), "prime_cap": cap, "primes": table.entries.len() })
        }
        Mode::Theta => {
            let curve = config.curve()?;
            let x = config.x.unwrap();
            let table = load_table(config, &curve, x.floor() as u64, &mut warnings)?;
            let theta = table.theta_f(x);
            json!({ "X": x, "theta": theta, "ratio": theta / x })
        }
        Mode::Chars => {
            let conductor = config.curve.as_ref().map_or(1, |c| c.conductor);
            let family = enumerate_family(config.l.unwrap(), config.x.unwrap(), conductor, config.weight())?;
            artifacts.push(("family.csv".to_string(), family.to_csv()));
            json!({
                "l": family.l,
                "X": family.x,
                "size": family.len(),
                "weighted_count": family.weighted_count(),
                "conductor_log_sum": family.conductor_log_sum(),
                "fields": family.fields().len(),
            })
        }
        Mode::DensityCyclic => {
            let curve = config.curve()?;
            let phi = Fejer::new(config.sigma.unwrap())?;
            let x = config.x.unwrap();
            let (cut, _) = prime_cutoffs(x, phi.sigma());
            let table = load_table(config, &curve, cut, &mut warnings)?;
            let family = enumerate_family(config.l.unwrap(), x, curve.conductor, config.weight())?;
            let report = crate::density::family_average_over(&curve, &family, &table, &phi, 1.0)?;
            artifacts.push(("density.csv".to_string(), series_csv(&[(x, report.clone())])));
            density_json(&report)
        }
        Mode::DensityCubic => {
            let curve = config.curve()?;
            let phi = Fejer::new(config.sigma.unwrap())?;
            let x = config.x.unwrap();
            let (cut, _) = prime_cutoffs(x, phi.sigma());
            let table = load_table(config, &curve, cut, &mut warnings)?;
            let fields = enumerate_cubic_fields(x, curve.conductor)?;
            let report = crate::cubic::family_average_cubic_over(&curve, &fields, &table, x, &phi, 1.0)?;
            artifacts.push(("density.csv".to_string(), series_csv(&[(x, report.clone())])));
            density_json(&report)
        }
        Mode::Ranks => {
            let curve = config.curve()?;
            let x = config.x.unwrap();
            let l = config.l.unwrap();
            if let Some(cap) = config.coefficient_cap {
                let q_max = (x * config.weight().support_end()).floor() as u64;
                let required = required_terms(curve.conductor * q_max * q_max);
                if required > cap {
                    return Err(Error::InsufficientCoefficients { required, available: cap });
                }
            }
            let threshold = config.threshold.unwrap_or(DEFAULT_THRESHOLD);
            let summary = family_rank_statistics(&curve, l, x, config.weight(), threshold)?;
            artifacts.push(("ranks.csv".to_string(), summary.to_csv()));
            to_value(&summary)
        }
        Mode::Fields => {
            let conductor = config.curve.as_ref().map_or(1, |c| c.conductor);
            let x = config.x.unwrap();
            let fields = enumerate_cubic_fields(x, conductor)?;
            artifacts.push(("fields.csv".to_string(), fields_csv(&fields)));
            let primes = config.primes.clone().unwrap_or_else(|| vec![2, 3, 5, 7]);
            let reports: Vec<_> = primes.iter().map(|&p| local_density_report(&fields, p)).collect();
            json!({ "X": x, "count": fields.len(), "local_densities": reports })
        }
    };
    Ok(RunOutput {
        summary: round_json(summary),
        artifacts,
        warnings,
    })
}

/// Writes artifacts, `summary.json` and `manifest.json` into `dir`.
pub fn write_outputs(dir: &Path, config: &ExperimentConfig, out: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut checksums = serde_json::Map::new();
    let mut files: Vec<(String, Vec<u8>)> = out
        .artifacts
        .iter()
        .map(|(n, c)| (n.clone(), c.clone().into_bytes()))
        .collect();
    let mut summary = serde_json::to_vec_pretty(&out.summary).expect("summary serializes");
    summary.push(b'\n');
    files.push(("summary.json".to_string(), summary));
    for (name, bytes) in &files {
        atomic_write(&dir.join(name), bytes)?;
        checksums.insert(name.clone(), json!(sha256_hex(bytes)));
    }
    let mut echoed = config.clone();
    echoed.output_path = None;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": echoed,
        "files": checksums,
        "warnings": out.warnings,
    });
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    atomic_write(&dir.join("manifest.json"), &bytes)
}

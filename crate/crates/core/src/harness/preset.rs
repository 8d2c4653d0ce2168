//! Sweep spec files.
//!
//! One `key = value` pair per line; `#` starts a comment. Keys:
//!
//! ```text
//! name       = fig3a                       # output file stem
//! family     = uniform_ridge               # or family1..family4, corr_gaussian
//! axis       = alpha                       # alpha | n
//! grid       = logspace(-1, -5, 9)         # values of the varying parameter
//! n          = 10000                       # fixed n (alpha sweeps)
//! alpha      = 0.01                        # fixed alpha (n sweeps)
//! seeds      = 1..10                       # inclusive range or comma list
//! estimators = gknn:20, ksg:2..6           # method:k, k may be a range
//! timing     = false                       # record wall-clock times
//! ```
//!
//! `grid` is a comma list of numbers, `logspace(a, b, m)` for m values of
//! 10^e with e evenly spaced from a to b, or `pow2(a, b)` for 2^j with j
//! stepping by one from a to b. Estimator names are `gknn` (g-knn mutual
//! information) and `ksg`, or the full method names.

use std::collections::HashSet;
use std::path::Path;

use super::{Axis, HarnessError, SweepSpec};
use crate::estimators::{EstimatorConfig, Method};
use crate::models::Family;

/// Built-in presets, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1", include_str!("../../presets/fig1.sweep")),
    ("fig3a", include_str!("../../presets/fig3a.sweep")),
    ("fig3b", include_str!("../../presets/fig3b.sweep")),
    ("fig3c", include_str!("../../presets/fig3c.sweep")),
    ("fig3d", include_str!("../../presets/fig3d.sweep")),
    ("fig3e", include_str!("../../presets/fig3e.sweep")),
    ("fig3f", include_str!("../../presets/fig3f.sweep")),
    ("fig4a", include_str!("../../presets/fig4a.sweep")),
    ("fig4b", include_str!("../../presets/fig4b.sweep")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<SweepSpec, HarnessError> {
    let text = PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or_else(|| {
        HarnessError::UnknownPreset { name: name.to_string(), available: preset_names().join(", ") }
    })?;
    text.parse()
}

impl SweepSpec {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
        let mut spec: SweepSpec = text.parse()?;
        if spec.name.is_empty() {
            spec.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(spec)
    }
}

impl std::str::FromStr for SweepSpec {
    type Err = HarnessError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut name = String::new();
        let mut family = None;
        let mut axis = None;
        let mut grid = None;
        let mut alpha = None;
        let mut n = None;
        let mut seeds = None;
        let mut estimators = None;
        let mut timing = false;
        let mut seen = HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| HarnessError::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            match key {
                "name" => name = value.to_string(),
                "family" => family = Some(value.parse::<Family>().map_err(|e| err(e.to_string()))?),
                "axis" => axis = Some(value.parse::<Axis>().map_err(|e| err(e.to_string()))?),
                "grid" => grid = Some(parse_grid(value).map_err(err)?),
                "alpha" => alpha = Some(parse_f64(value).map_err(err)?),
                "n" => n = Some(value.parse::<usize>().map_err(|e| err(format!("n: {e}")))?),
                "seeds" => seeds = Some(parse_seeds(value).map_err(err)?),
                "estimators" => estimators = Some(parse_estimators(value).map_err(err)?),
                "timing" => {
                    timing = value.parse::<bool>().map_err(|_| err(format!("timing must be true or false, got '{value}'")))?
                }
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }

        let missing = |key: &str| HarnessError::InvalidSpec(format!("missing key '{key}'"));
        let spec = SweepSpec {
            name,
            family: family.ok_or_else(|| missing("family"))?,
            axis: axis.ok_or_else(|| missing("axis"))?,
            grid: grid.ok_or_else(|| missing("grid"))?,
            alpha,
            n,
            seeds: seeds.unwrap_or_else(|| (1..=10).collect()),
            estimators: estimators.ok_or_else(|| missing("estimators"))?,
            timing,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{}' is not a number", s.trim()))
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim().parse::<i64>().map_err(|_| format!("'{}' is not an integer", s.trim()))
}

fn call_args<'a>(s: &'a str, func: &str) -> Option<Vec<&'a str>> {
    let inner = s.strip_prefix(func)?.trim_start().strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').collect())
}

/// 10^e, exact for integral e.
fn pow10(e: f64) -> f64 {
    if e.fract() == 0.0 {
        format!("1e{}", e as i64).parse().expect("valid literal")
    } else {
        libm::pow(10.0, e)
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    if let Some(args) = call_args(s, "logspace") {
        let [a, b, m] = args.as_slice() else {
            return Err("logspace takes (start, stop, count)".into());
        };
        let (a, b, m) = (parse_f64(a)?, parse_f64(b)?, parse_int(m)?);
        if m < 1 {
            return Err("logspace count must be positive".into());
        }
        if m == 1 {
            return Ok(vec![pow10(a)]);
        }
        return Ok((0..m).map(|i| pow10(a + (b - a) * i as f64 / (m - 1) as f64)).collect());
    }
    if let Some(args) = call_args(s, "pow2") {
        let [a, b] = args.as_slice() else {
            return Err("pow2 takes (start, stop)".into());
        };
        let (a, b) = (parse_int(a)?, parse_int(b)?);
        let step = if b >= a { 1 } else { -1 };
        let mut out = Vec::new();
        let mut j = a;
        loop {
            out.push(2f64.powi(j as i32));
            if j == b {
                break;
            }
            j += step;
        }
        return Ok(out);
    }
    s.split(',').map(parse_f64).collect()
}

fn parse_range(s: &str) -> Result<Vec<i64>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse_int(a)?, parse_int(b)?);
            if b < a {
                return Err(format!("empty range {a}..{b}"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![parse_int(s)?]),
    }
}

/// Seed list: comma-separated values or inclusive `a..b` ranges.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        for v in parse_range(part.trim())? {
            out.push(u64::try_from(v).map_err(|_| format!("seed {v} is negative"))?);
        }
    }
    Ok(out)
}

fn parse_estimators(s: &str) -> Result<Vec<EstimatorConfig>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let (name, ks) = part.split_once(':').ok_or_else(|| format!("estimator '{part}' needs method:k"))?;
        let method = match name.trim() {
            "gknn" => Method::GknnMi,
            other => other.parse::<Method>().map_err(|e| e.to_string())?,
        };
        for k in parse_range(ks.trim())? {
            let k = usize::try_from(k).map_err(|_| format!("k = {k} is negative"))?;
            out.push(EstimatorConfig::new(method, k));
        }
    }
    Ok(out)
}

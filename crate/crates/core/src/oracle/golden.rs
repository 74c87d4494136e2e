use std::fmt::Write as _;

use super::generic;
use super::report::Verdict;
use super::verify::{verify_fixture_with, VerifyOptions};
use crate::error::{GeometryError, Result};
use crate::hypersurface::Params;
use crate::ruled::RuledHypersurface;

/// One pinned oracle value.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenEntry {
    pub formula: String,
    pub point: Params,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

/// Named oracle quantities, each of which may fail on its own.
pub type OracleValues = Vec<(&'static str, Result<Vec<f64>>)>;

/// The oracle quantities written to golden files, in file order.
pub fn oracle_values(h: &RuledHypersurface, u: Params, step: f64) -> Result<OracleValues> {
    let s = generic::sample(&h.metric, h, u, step)?;
    let det_h = s.second.clone().map(|h| vec![crate::linalg::det3(&h.0)]);
    Ok(vec![
        ("first_form.det", s.first.clone().map(|f| vec![f.det])),
        ("gauss_map.raw", s.gauss.clone().map(|g| g.raw.0.to_vec())),
        ("curvature.gaussian", s.gaussian().map(|k| vec![k])),
        ("curvature.mean", s.trace().map(|t| vec![t / 3.0])),
        ("second_form.det", det_h),
    ])
}

/// Structural formulas are everything except the finite-difference
/// Laplace-Beltrami comparison.
pub fn is_structural(formula: &str) -> bool {
    !formula.starts_with("laplace_beltrami")
}

fn csv(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
}

/// Verifies the fixture and, when every structural record matches, renders
/// the oracle values as golden-file text.
pub fn pin_golden(h: &RuledHypersurface, points: &[Params], opts: &VerifyOptions) -> Result<String> {
    if points.is_empty() {
        return Err(GeometryError::Argument("cannot pin an empty point list".into()));
    }
    let report = verify_fixture_with(h, points, opts);
    let bad: Vec<&str> = report
        .records
        .iter()
        .filter(|r| r.verdict == Verdict::Mismatch && is_structural(&r.formula))
        .map(|r| r.formula.as_str())
        .collect();
    if !bad.is_empty() {
        return Err(GeometryError::Argument(format!(
            "refusing to pin: {} structural mismatches (first: {})",
            bad.len(),
            bad[0]
        )));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# provenance: oracle v{}, step={:e}",
        env!("CARGO_PKG_VERSION"),
        opts.step
    );
    let _ = writeln!(
        out,
        "# scene: type={} f={} alpha={} beta={} gamma={}",
        h.kind.index(),
        h.field().source(),
        h.alpha.source().join(","),
        h.beta.source().join(","),
        h.gamma.source().join(",")
    );
    for &u in points {
        for (formula, value) in oracle_values(h, u, opts.step)? {
            if let Ok(values) = value {
                let tol = opts.tolerances.get(formula).abs;
                let _ = writeln!(out, "{formula} {} {} {tol:e}", csv(&u), csv(&values));
            }
        }
    }
    Ok(out)
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || GeometryError::Argument(format!("golden line {}: `{line}`", n + 1));
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let nums =
            |s: &str| -> Result<Vec<f64>> { s.split(',').map(|x| x.parse::<f64>().map_err(|_| bad())).collect() };
        let point = nums(parts[1])?;
        if point.len() != 3 {
            return Err(bad());
        }
        out.push(GoldenEntry {
            formula: parts[0].to_string(),
            point: [point[0], point[1], point[2]],
            values: nums(parts[2])?,
            tolerance: parts[3].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

/// Recomputes every entry and returns the ones that no longer agree.
pub fn check_golden(h: &RuledHypersurface, entries: &[GoldenEntry], step: f64) -> Vec<(GoldenEntry, String)> {
    let mut failures = Vec::new();
    for entry in entries {
        let fresh = oracle_values(h, entry.point, step).and_then(|vals| {
            vals.into_iter()
                .find(|(f, _)| *f == entry.formula)
                .map(|(_, v)| v)
                .unwrap_or_else(|| Err(GeometryError::Argument(format!("unknown formula {}", entry.formula))))
        });
        match fresh {
            Ok(v)
                if v.len() == entry.values.len()
                    && v.iter()
                        .zip(&entry.values)
                        .all(|(a, b)| (a - b).abs() <= entry.tolerance) => {}
            Ok(v) => failures.push((entry.clone(), format!("recomputed {}", csv(&v)))),
            Err(e) => failures.push((entry.clone(), e.to_string())),
        }
    }
    failures
}

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use walker_ruled::oracle::{Tolerance, ToleranceTable};
use walker_ruled::ruled::{construct, construct_strict};
use walker_ruled::{CurveJet, Params, RuledHypersurface, RuledType, ScalarField2};

use crate::error::CliError;

/// A scene file:
///
/// ```toml
/// name = "optional label"
///
/// [field]
/// f = "u3*u4"
///
/// [curves]
/// type = 1
/// alpha = "t, 0, 0, 0"
/// beta = "0.5, 0, 1, 0"
/// gamma = "0, 0.5, 0, 1"
///
/// [grid]
/// u1 = { start = -1.0, stop = 1.0, count = 3 }
/// u2 = { start = 0.0, stop = 0.0, count = 1 }
/// u3 = { start = -0.5, stop = 0.5, count = 2 }
///
/// [tolerances]
/// default = { abs = 1e-6, rel = 1e-5 }
/// second_form = { abs = 1e-7, rel = 1e-6 }
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub field: FieldSection,
    pub curves: CurveSection,
    pub grid: GridSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, ToleranceEntry>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    #[serde(rename = "type")]
    pub kind: u8,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    /// Parameters at which the director norms are validated; defaults to the
    /// `u1` grid values.
    #[serde(default)]
    pub director_samples: Option<Vec<f64>>,
    /// Validate the director norms at every grid point instead of at the
    /// base-curve footpoints.
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    /// Maps `x ∈ [0, 1)` onto the axis range.
    pub fn lerp(&self, x: f64) -> f64 {
        if self.count == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub u1: Axis,
    pub u2: Axis,
    pub u3: Axis,
}

impl GridSection {
    pub fn axes(&self) -> [&Axis; 3] {
        [&self.u1, &self.u2, &self.u3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceEntry {
    pub abs: f64,
    pub rel: f64,
}

impl SceneConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: SceneConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        RuledType::from_index(self.curves.kind).map_err(|e| CliError::Config(format!("curves.type: {e}")))?;
        for (name, axis) in ["u1", "u2", "u3"].iter().zip(self.grid.axes()) {
            if axis.count == 0 {
                return Err(CliError::Config(format!("grid.{name}: count must be at least 1")));
            }
            if !axis.start.is_finite() || !axis.stop.is_finite() {
                return Err(CliError::Config(format!("grid.{name}: bounds must be finite")));
            }
        }
        for (id, t) in &self.tolerances {
            if !(t.abs >= 0.0 && t.rel >= 0.0 && t.abs.is_finite() && t.rel.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerances.{id}: abs and rel must be finite and nonnegative"
                )));
            }
        }
        if let Some(s) = &self.curves.director_samples {
            if s.is_empty() || s.iter().any(|t| !t.is_finite()) {
                return Err(CliError::Config(
                    "curves.director_samples: need at least one finite value".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> RuledType {
        RuledType::from_index(self.curves.kind).expect("validated")
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("type {} with f = {}", self.curves.kind, self.field.f))
    }

    /// Grid points in row order: `u1` outermost, `u3` innermost.
    pub fn grid_points(&self) -> Vec<Params> {
        let [a, b, c] = self.grid.axes().map(Axis::values);
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
        for &u1 in &a {
            for &u2 in &b {
                for &u3 in &c {
                    out.push([u1, u2, u3]);
                }
            }
        }
        out
    }

    pub fn tolerance_table(&self) -> ToleranceTable {
        let mut table = ToleranceTable::shipped();
        for (id, t) in &self.tolerances {
            let tol = Tolerance { abs: t.abs, rel: t.rel };
            if id == "default" {
                table.default = tol;
            } else {
                table.set(id, tol);
            }
        }
        table
    }

    /// Parses the expressions and builds the hypersurface, validating the
    /// director norms.
    pub fn build(&self) -> Result<RuledHypersurface, CliError> {
        let expr = |section: &str, text: &str| CliError::Config(format!("{section} `{text}`"));
        let field = ScalarField2::parse(&self.field.f)
            .map_err(|e| CliError::Config(format!("{}: {e}", expr("field.f", &self.field.f))))?;
        let curve = |name: &str, text: &str| {
            CurveJet::parse(text)
                .map_err(|e| CliError::Config(format!("{}: {e}", expr(&format!("curves.{name}"), text))))
        };
        let alpha = curve("alpha", &self.curves.alpha)?;
        let beta = curve("beta", &self.curves.beta)?;
        let gamma = curve("gamma", &self.curves.gamma)?;
        let built = if self.curves.strict {
            construct_strict(self.kind(), alpha, beta, gamma, field, &self.grid_points())
        } else {
            let samples = self
                .curves
                .director_samples
                .clone()
                .unwrap_or_else(|| self.grid.u1.values());
            construct(self.kind(), alpha, beta, gamma, field, &samples)
        };
        built.map_err(|e| CliError::Config(format!("invalid scene: {e}")))
    }
}

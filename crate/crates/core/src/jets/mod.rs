//! Exact-derivative evaluation of curves `R -> R^4` and of the scalar field
//! `f(u3, u4)` that parameterizes the Walker metric.

mod dual;
pub mod expr;

pub use dual::Dual3;
pub use expr::Expr;

use crate::error::{GeometryError, Result};

/// Highest derivative order tracked for curves.
pub const MAX_ORDER: usize = 3;

/// A curve with four symbolic components and their derivative trees up to
/// order three.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveJet {
    // derivs[k][i]: k-th derivative of component i
    derivs: [[Expr; 4]; MAX_ORDER + 1],
    source: [String; 4],
}

impl CurveJet {
    pub fn from_exprs(components: [Expr; 4]) -> Self {
        let source = components.clone().map(|c| c.to_string());
        Self::build(components, source)
    }

    fn build(components: [Expr; 4], source: [String; 4]) -> Self {
        let d1 = components.clone().map(|c| c.diff(0));
        let d2 = d1.clone().map(|c| c.diff(0));
        let d3 = d2.clone().map(|c| c.diff(0));
        CurveJet {
            derivs: [components, d1, d2, d3],
            source,
        }
    }

    /// Parses four comma-separated component expressions in the variable `t`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = Vec::with_capacity(4);
        let mut offset = 0;
        for piece in text.split(',') {
            let e = expr::parse(piece, &["t"]).map_err(|err| shift_position(err, offset))?;
            parts.push((e, piece.trim().to_string()));
            offset += piece.len() + 1;
        }
        if parts.len() != 4 {
            return Err(GeometryError::Syntax {
                position: text.len(),
                message: format!("expected 4 comma-separated components, found {}", parts.len()),
            });
        }
        let mut it = parts.into_iter();
        let mut next = || it.next().expect("four components");
        let (a, b, c, d) = (next(), next(), next(), next());
        Ok(Self::build([a.0, b.0, c.0, d.0], [a.1, b.1, c.1, d.1]))
    }

    /// The component sources as written by the user.
    pub fn source(&self) -> &[String; 4] {
        &self.source
    }

    pub fn component(&self, order: usize, index: usize) -> &Expr {
        &self.derivs[order][index]
    }

    /// Value and derivatives `0..=order` at `t`.
    pub fn eval(&self, t: f64, order: usize) -> Result<Vec<[f64; 4]>> {
        if order > MAX_ORDER {
            return Err(GeometryError::Argument(format!(
                "derivative order {order} exceeds {MAX_ORDER}"
            )));
        }
        if !t.is_finite() {
            return Err(GeometryError::Argument(format!("non-finite parameter {t}")));
        }
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let row = &self.derivs[k];
            out.push([
                row[0].eval(&[t])?,
                row[1].eval(&[t])?,
                row[2].eval(&[t])?,
                row[3].eval(&[t])?,
            ]);
        }
        Ok(out)
    }

    /// Fixed-size jet (value, 1st, 2nd, 3rd) at `t`.
    pub fn jet(&self, t: f64) -> Result<[[f64; 4]; 4]> {
        let v = self.eval(t, MAX_ORDER)?;
        Ok([v[0], v[1], v[2], v[3]])
    }

    /// True when every component is constant in `t`.
    pub fn is_constant(&self) -> bool {
        self.derivs[0].iter().all(Expr::is_constant)
    }
}

fn shift_position(err: GeometryError, offset: usize) -> GeometryError {
    match err {
        GeometryError::Syntax { position, message } => GeometryError::Syntax {
            position: position + offset,
            message,
        },
        GeometryError::UnknownIdentifier { name, position } => GeometryError::UnknownIdentifier {
            name,
            position: position + offset,
        },
        other => other,
    }
}

/// `f` and its partials to order two at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldJet {
    pub f: f64,
    pub f3: f64,
    pub f4: f64,
    pub f33: f64,
    pub f34: f64,
    pub f44: f64,
}

/// The defining function `f(u3, u4)` of the Walker metric, with symbolic
/// partials.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2 {
    f: Expr,
    f3: Expr,
    f4: Expr,
    f33: Expr,
    f34: Expr,
    f44: Expr,
    source: String,
}

impl ScalarField2 {
    pub fn parse(text: &str) -> Result<Self> {
        let f = expr::parse(text, &["u3", "u4"])?;
        Ok(Self::build(f, text.trim().to_string()))
    }

    pub fn from_expr(f: Expr) -> Self {
        let source = f.to_string();
        Self::build(f, source)
    }

    pub fn constant(c: f64) -> Self {
        Self::build(Expr::Const(c), format!("{c}"))
    }

    fn build(f: Expr, source: String) -> Self {
        let f3 = f.diff(0);
        let f4 = f.diff(1);
        let f33 = f3.diff(0);
        let f34 = f3.diff(1);
        let f44 = f4.diff(1);
        ScalarField2 {
            f,
            f3,
            f4,
            f33,
            f34,
            f44,
            source,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_constant(&self) -> bool {
        self.f.is_constant()
    }

    pub fn value(&self, u3: f64, u4: f64) -> Result<f64> {
        self.f.eval(&[u3, u4])
    }

    pub fn eval(&self, u3: f64, u4: f64) -> Result<FieldJet> {
        let x = [u3, u4];
        Ok(FieldJet {
            f: self.f.eval(&x)?,
            f3: self.f3.eval(&x)?,
            f4: self.f4.eval(&x)?,
            f33: self.f33.eval(&x)?,
            f34: self.f34.eval(&x)?,
            f44: self.f44.eval(&x)?,
        })
    }
}

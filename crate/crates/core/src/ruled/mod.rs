//! 2-ruled hypersurfaces `φ(u1,u2,u3) = α(u1) + u2 β(u1) + u3 γ(u1)` whose
//! director curves lie on the de Sitter space (type 1), the hyperbolic space
//! (type 2) or the light cone (type 3) of the Walker metric, together with the
//! closed-form expressions for their invariants.

mod closed;
mod coefficients;
mod laplace;
pub mod literal;

pub use closed::{
    first_form_closed, flatness_check, gauss_map_closed, minimality_residual, second_form_closed, ClosedFirstForm,
    ClosedGaussMap, Flatness, MinimalityResidual, MinimalityVariant,
};
pub use coefficients::{coefficients, CoefficientSet};
pub use laplace::{lb_closed, lb_weighted};

use crate::error::{GeometryError, Result};
use crate::hypersurface::{Immersion, ImmersionJet, Params, ThirdPartials};
use crate::jets::{CurveJet, FieldJet, ScalarField2};
use crate::walker::{inner_with, ChartPoint, TangentVector, WalkerMetric};

/// Absolute tolerance on `g(X, X) - target` for director curves, scaled by
/// `max(1, |X|²)`.
pub const DIRECTOR_TOLERANCE: f64 = 1e-8;

/// Tolerance on `|e| = |g(β, γ)|` for the orthogonal-director forms.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuledType {
    /// Directors on the de Sitter space, `g(β,β) = g(γ,γ) = 1`.
    Type1,
    /// Directors on the hyperbolic space, `g(β,β) = g(γ,γ) = -1`.
    Type2,
    /// Directors on the light cone, `g(β,β) = g(γ,γ) = 0`.
    Type3,
}

impl RuledType {
    pub fn target(&self) -> f64 {
        match self {
            RuledType::Type1 => 1.0,
            RuledType::Type2 => -1.0,
            RuledType::Type3 => 0.0,
        }
    }

    pub fn from_index(n: u8) -> Result<Self> {
        match n {
            1 => Ok(RuledType::Type1),
            2 => Ok(RuledType::Type2),
            3 => Ok(RuledType::Type3),
            other => Err(GeometryError::Argument(format!(
                "ruled type must be 1, 2 or 3, got {other}"
            ))),
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            RuledType::Type1 => 1,
            RuledType::Type2 => 2,
            RuledType::Type3 => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuledHypersurface {
    pub kind: RuledType,
    pub alpha: CurveJet,
    pub beta: CurveJet,
    pub gamma: CurveJet,
    pub metric: WalkerMetric,
}

/// Everything the closed forms need at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuledFrame {
    pub u: Params,
    /// value, 1st, 2nd and 3rd derivative of each curve at `u1`
    pub alpha: [[f64; 4]; 4],
    pub beta: [[f64; 4]; 4],
    pub gamma: [[f64; 4]; 4],
    /// `φ(u)`
    pub point: ChartPoint,
    /// `φ_{u1} = α' + u2 β' + u3 γ'`
    pub dphi: [f64; 4],
    /// `α'' + u2 β'' + u3 γ''`
    pub ddphi: [f64; 4],
    /// `f` and partials at `φ(u)`
    pub field: FieldJet,
}

fn combine(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4], u2: f64, u3: f64) -> [f64; 4] {
    std::array::from_fn(|i| a[i] + u2 * b[i] + u3 * c[i])
}

impl RuledHypersurface {
    pub fn field(&self) -> &ScalarField2 {
        self.metric.field()
    }

    pub fn frame(&self, u: Params) -> Result<RuledFrame> {
        if !u.iter().all(|x| x.is_finite()) {
            return Err(GeometryError::Argument(format!("non-finite parameters {u:?}")));
        }
        let alpha = self.alpha.jet(u[0])?;
        let beta = self.beta.jet(u[0])?;
        let gamma = self.gamma.jet(u[0])?;
        let point = ChartPoint(combine(&alpha[0], &beta[0], &gamma[0], u[1], u[2]));
        let field = self.metric.field_jet(&point)?;
        Ok(RuledFrame {
            u,
            alpha,
            beta,
            gamma,
            point,
            dphi: combine(&alpha[1], &beta[1], &gamma[1], u[1], u[2]),
            ddphi: combine(&alpha[2], &beta[2], &gamma[2], u[1], u[2]),
            field,
        })
    }
}

impl Immersion for RuledHypersurface {
    fn jet(&self, u: Params) -> Result<ImmersionJet> {
        let fr = self.frame(u)?;
        let v = TangentVector;
        let zero = TangentVector::ZERO;
        let beta_p = v(fr.beta[1]);
        let gamma_p = v(fr.gamma[1]);
        Ok(ImmersionJet {
            point: fr.point,
            first: [v(fr.dphi), v(fr.beta[0]), v(fr.gamma[0])],
            second: [
                [v(fr.ddphi), beta_p, gamma_p],
                [beta_p, zero, zero],
                [gamma_p, zero, zero],
            ],
        })
    }

    fn third_partials(&self, u: Params) -> Result<ThirdPartials> {
        let fr = self.frame(u)?;
        let v = TangentVector;
        let mut out = [[[TangentVector::ZERO; 3]; 3]; 3];
        let dddphi = combine(&fr.alpha[3], &fr.beta[3], &fr.gamma[3], u[1], u[2]);
        out[0][0][0] = v(dddphi);
        // any permutation of (1,1,2) or (1,1,3)
        for (k, curve) in [(1, fr.beta[2]), (2, fr.gamma[2])] {
            out[0][0][k] = v(curve);
            out[0][k][0] = v(curve);
            out[k][0][0] = v(curve);
        }
        Ok(out)
    }
}

fn check_director(t: f64, f: f64, x: &[f64; 4], target: f64, worst: &mut Option<(f64, GeometryError)>) {
    let xv = TangentVector(*x);
    let value = inner_with(f, &xv, &xv);
    let excess = (value - target).abs() - DIRECTOR_TOLERANCE * xv.euclid_norm_sq().max(1.0);
    if excess > 0.0 && worst.as_ref().is_none_or(|(w, _)| excess > *w) {
        *worst = Some((excess, GeometryError::DirectorConstraintViolated { t, value, target }));
    }
}

/// Builds a ruled hypersurface, validating `g(β,β)` and `g(γ,γ)` at every
/// sample parameter with `f` taken at the base-curve footpoint
/// `(α3(t), α4(t))`. On failure the worst offender is reported.
pub fn construct(
    kind: RuledType,
    alpha: CurveJet,
    beta: CurveJet,
    gamma: CurveJet,
    field: ScalarField2,
    samples: &[f64],
) -> Result<RuledHypersurface> {
    if samples.is_empty() {
        return Err(GeometryError::Argument(
            "at least one director sample is required".into(),
        ));
    }
    let h = RuledHypersurface {
        kind,
        alpha,
        beta,
        gamma,
        metric: WalkerMetric::new(field),
    };
    let mut worst = None;
    for &t in samples {
        let a = h.alpha.eval(t, 0)?[0];
        let f = h.metric.field().value(a[2], a[3])?;
        check_director(t, f, &h.beta.eval(t, 0)?[0], kind.target(), &mut worst);
        check_director(t, f, &h.gamma.eval(t, 0)?[0], kind.target(), &mut worst);
    }
    match worst {
        Some((_, err)) => Err(err),
        None => Ok(h),
    }
}

/// Like [`construct`], but validates the directors with `f` evaluated on the
/// surface point `φ(u)` itself, for every supplied parameter triple.
pub fn construct_strict(
    kind: RuledType,
    alpha: CurveJet,
    beta: CurveJet,
    gamma: CurveJet,
    field: ScalarField2,
    samples: &[Params],
) -> Result<RuledHypersurface> {
    if samples.is_empty() {
        return Err(GeometryError::Argument(
            "at least one director sample is required".into(),
        ));
    }
    let h = RuledHypersurface {
        kind,
        alpha,
        beta,
        gamma,
        metric: WalkerMetric::new(field),
    };
    let mut worst = None;
    for &u in samples {
        let fr = h.frame(u)?;
        check_director(u[0], fr.field.f, &fr.beta[0], kind.target(), &mut worst);
        check_director(u[0], fr.field.f, &fr.gamma[0], kind.target(), &mut worst);
    }
    match worst {
        Some((_, err)) => Err(err),
        None => Ok(h),
    }
}

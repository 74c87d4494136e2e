//! Generic invariants of an immersion `φ: I1×I2×I3 -> M` into the Walker
//! manifold. Nothing in here knows about rulings: the Gauss map comes from the
//! triple product of the coordinate tangents, the second fundamental form from
//! covariant second partials, and the Laplace-Beltrami operator from central
//! differences of its divergence form.

use crate::error::{GeometryError, Result};
use crate::jets::expr::{self, Expr};
use crate::linalg::{self, Mat3};
use crate::walker::{
    classify, cofactor_vector, inner_with, CausalCharacter, ChartPoint, TangentVector, WalkerChristoffels,
    WalkerMetric, NULL_TOLERANCE,
};

/// Relative degeneracy threshold for 3×3 first fundamental forms.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Default central-difference step for the divergence-form Laplacian.
pub const DEFAULT_LB_STEP: f64 = 1e-4;

/// Surface parameters `(u1, u2, u3)`.
pub type Params = [f64; 3];

/// Position, coordinate tangents and raw (connection-free) second partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmersionJet {
    pub point: ChartPoint,
    pub first: [TangentVector; 3],
    pub second: [[TangentVector; 3]; 3],
}

pub type ThirdPartials = [[[TangentVector; 3]; 3]; 3];

pub trait Immersion: Sync {
    fn jet(&self, u: Params) -> Result<ImmersionJet>;

    fn third_partials(&self, u: Params) -> Result<ThirdPartials>;
}

/// An immersion given by four closed-form components in `u1, u2, u3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricImmersion {
    comps: [Expr; 4],
    d1: [[Expr; 4]; 3],
    d2: [[[Expr; 4]; 3]; 3],
    d3: Vec<[Expr; 4]>,
}

impl ParametricImmersion {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            return Err(GeometryError::Syntax {
                position: text.len(),
                message: format!("expected 4 comma-separated components, found {}", parts.len()),
            });
        }
        let mut comps = Vec::with_capacity(4);
        for p in parts {
            comps.push(expr::parse(p, &["u1", "u2", "u3"])?);
        }
        let comps: [Expr; 4] = comps.try_into().expect("four components");
        let d1: [[Expr; 4]; 3] = std::array::from_fn(|i| comps.clone().map(|c| c.diff(i)));
        let d2: [[[Expr; 4]; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| d1[i].clone().map(|c| c.diff(j))));
        let mut d3 = Vec::with_capacity(27);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    d3.push(d2[i][j].clone().map(|c| c.diff(k)));
                }
            }
        }
        Ok(ParametricImmersion { comps, d1, d2, d3 })
    }
}

fn eval4(e: &[Expr; 4], u: &Params) -> Result<TangentVector> {
    Ok(TangentVector([
        e[0].eval(u)?,
        e[1].eval(u)?,
        e[2].eval(u)?,
        e[3].eval(u)?,
    ]))
}

impl Immersion for ParametricImmersion {
    fn jet(&self, u: Params) -> Result<ImmersionJet> {
        let pos = eval4(&self.comps, &u)?;
        let mut first = [TangentVector::ZERO; 3];
        let mut second = [[TangentVector::ZERO; 3]; 3];
        for i in 0..3 {
            first[i] = eval4(&self.d1[i], &u)?;
            for j in 0..3 {
                second[i][j] = eval4(&self.d2[i][j], &u)?;
            }
        }
        Ok(ImmersionJet {
            point: ChartPoint(pos.0),
            first,
            second,
        })
    }

    fn third_partials(&self, u: Params) -> Result<ThirdPartials> {
        let mut out = [[[TangentVector::ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j][k] = eval4(&self.d3[9 * i + 3 * j + k], &u)?;
                }
            }
        }
        Ok(out)
    }
}

/// `[g_ij]`, its determinant and inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub matrix: Mat3,
    pub det: f64,
    pub inverse: Mat3,
}

/// `|det| <= 1e-9 · max(1, max|g_ij|)³`.
pub fn degeneracy_threshold(matrix: &Mat3) -> f64 {
    DEGENERACY_TOLERANCE * linalg::max_abs3(matrix).max(1.0).powi(3)
}

impl FirstForm {
    pub fn from_matrix(matrix: Mat3) -> Result<Self> {
        let det = linalg::det3(&matrix);
        Self::with_det(matrix, det, linalg::adj3(&matrix))
    }

    /// Builds the form from an externally computed determinant and adjugate.
    pub fn with_det(matrix: Mat3, det: f64, adjugate: Mat3) -> Result<Self> {
        if !det.is_finite() || det.abs() <= degeneracy_threshold(&matrix) {
            return Err(GeometryError::DegenerateMetric { det });
        }
        Ok(FirstForm {
            matrix,
            det,
            inverse: linalg::scale3(&adjugate, 1.0 / det),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm(pub Mat3);

/// Unit normal together with the unnormalized triple product it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMap {
    pub normal: TangentVector,
    /// `φ_{u1} × φ_{u2} × φ_{u3}` before normalization.
    pub raw: TangentVector,
    /// `g(raw, raw)`; equals the determinant of the first fundamental form.
    pub raw_norm_sq: f64,
    pub character: CausalCharacter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvatures {
    pub gaussian: f64,
    pub mean: f64,
    pub shape: Mat3,
}

/// Pointwise record of every invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantBundle {
    pub first: FirstForm,
    pub second: SecondForm,
    pub shape: Mat3,
    pub gaussian: f64,
    pub mean: f64,
    pub gauss_map: TangentVector,
    pub normal_character: CausalCharacter,
}

/// `K = det h / det g`, `H = trace(g⁻¹ h) / 3`.
pub fn curvatures(first: &FirstForm, second: &SecondForm) -> Curvatures {
    let shape = linalg::mul3(&first.inverse, &second.0);
    Curvatures {
        gaussian: linalg::det3(&second.0) / first.det,
        mean: linalg::trace3(&shape) / 3.0,
        shape,
    }
}

/// An immersion viewed inside a particular Walker metric.
pub struct Hypersurface<'a, I: ?Sized> {
    pub metric: &'a WalkerMetric,
    pub immersion: &'a I,
}

impl<'a, I: Immersion + ?Sized> Hypersurface<'a, I> {
    pub fn new(metric: &'a WalkerMetric, immersion: &'a I) -> Self {
        Hypersurface { metric, immersion }
    }

    /// Raw second partials plus `Σ Γᵏᵢⱼ φⁱ_u φʲ_v ∂_k`, with the symbols
    /// evaluated at `φ(u)`.
    pub fn covariant_second_partials(&self, u: Params) -> Result<[[TangentVector; 3]; 3]> {
        let jet = self.immersion.jet(u)?;
        let gamma = self.metric.christoffels_closed(&jet.point)?;
        Ok(covariant_from_jet(&jet, &gamma))
    }

    pub fn gauss_map(&self, u: Params) -> Result<GaussMap> {
        let jet = self.immersion.jet(u)?;
        let f = self.metric.field_value(&jet.point)?;
        gauss_from_tangents(f, &jet.first)
    }

    pub fn first_form(&self, u: Params) -> Result<FirstForm> {
        let jet = self.immersion.jet(u)?;
        let f = self.metric.field_value(&jet.point)?;
        FirstForm::from_matrix(first_form_matrix(f, &jet.first))
    }

    pub fn second_form(&self, u: Params) -> Result<SecondForm> {
        let jet = self.immersion.jet(u)?;
        let fj = self.metric.field_jet(&jet.point)?;
        let gauss = gauss_from_tangents(fj.f, &jet.first)?;
        let cov = covariant_from_jet(&jet, &WalkerChristoffels::from_jet(&fj));
        Ok(second_from(fj.f, &cov, &gauss.normal))
    }

    pub fn invariants(&self, u: Params) -> Result<InvariantBundle> {
        let jet = self.immersion.jet(u)?;
        let fj = self.metric.field_jet(&jet.point)?;
        let gauss = gauss_from_tangents(fj.f, &jet.first)?;
        let first = FirstForm::from_matrix(first_form_matrix(fj.f, &jet.first))?;
        let cov = covariant_from_jet(&jet, &WalkerChristoffels::from_jet(&fj));
        let second = second_from(fj.f, &cov, &gauss.normal);
        let c = curvatures(&first, &second);
        Ok(InvariantBundle {
            first,
            second,
            shape: c.shape,
            gaussian: c.gaussian,
            mean: c.mean,
            gauss_map: gauss.normal,
            normal_character: gauss.character,
        })
    }

    /// Flux `√|det g| · gᵏʲ ∂_j φ` for each `k`.
    fn flux(&self, u: Params) -> Result<[TangentVector; 3]> {
        let jet = self.immersion.jet(u)?;
        let f = self.metric.field_value(&jet.point)?;
        let form = FirstForm::from_matrix(first_form_matrix(f, &jet.first))?;
        let root = form.det.abs().sqrt();
        Ok(std::array::from_fn(|k| {
            (0..3).fold(TangentVector::ZERO, |acc, j| {
                acc + jet.first[j] * (root * form.inverse[k][j])
            })
        }))
    }

    fn divergence(&self, u: Params, step: f64) -> Result<TangentVector> {
        let mut sum = TangentVector::ZERO;
        for k in 0..3 {
            let mut up = u;
            let mut down = u;
            up[k] += step;
            down[k] -= step;
            let fp = self.flux(up)?[k];
            let fm = self.flux(down)?[k];
            sum = sum + (fp - fm) * (0.5 / step);
        }
        Ok(sum)
    }

    /// `Δφ = (1/√|det g|) Σ ∂_i(√|det g| gⁱʲ ∂_j φ)` by central differences,
    /// optionally Richardson-extrapolated from steps `h` and `h/2`.
    pub fn laplace_beltrami_fd(&self, u: Params, step: f64, richardson: bool) -> Result<[f64; 4]> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeometryError::Argument(format!("invalid step {step}")));
        }
        let jet = self.immersion.jet(u)?;
        let f = self.metric.field_value(&jet.point)?;
        let form = FirstForm::from_matrix(first_form_matrix(f, &jet.first))?;
        let div = if richardson {
            let coarse = self.divergence(u, step)?;
            let fine = self.divergence(u, step / 2.0)?;
            fine * (4.0 / 3.0) - coarse * (1.0 / 3.0)
        } else {
            self.divergence(u, step)?
        };
        Ok((div * (1.0 / form.det.abs().sqrt())).0)
    }
}

pub fn covariant_from_jet(jet: &ImmersionJet, gamma: &WalkerChristoffels) -> [[TangentVector; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| jet.second[i][j] + gamma.contract(&jet.first[i], &jet.first[j])))
}

pub fn first_form_matrix(f: f64, tangents: &[TangentVector; 3]) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| inner_with(f, &tangents[i], &tangents[j])))
}

pub fn gauss_from_tangents(f: f64, t: &[TangentVector; 3]) -> Result<GaussMap> {
    let cof = cofactor_vector(&t[0], &t[1], &t[2]);
    let cof_norm = linalg::norm4_sq(&cof).sqrt();
    let scale: f64 = t.iter().map(|v| v.euclid_norm_sq().sqrt()).product();
    if cof_norm <= 1e-12 * scale || cof_norm == 0.0 {
        return Err(GeometryError::RankDeficient);
    }
    let raw = crate::walker::triple_with(f, &t[0], &t[1], &t[2]);
    // g(N, N) = N · cofactor since N = g⁻¹ · cofactor
    let q = linalg::dot4(&raw.0, &cof);
    let scale = raw.euclid_norm_sq();
    if q.abs() <= NULL_TOLERANCE * scale {
        return Err(GeometryError::DegenerateNormal { radicand: q });
    }
    Ok(GaussMap {
        normal: raw * (1.0 / q.abs().sqrt()),
        raw,
        raw_norm_sq: q,
        character: classify(q, scale),
    })
}

pub fn second_from(f: f64, cov: &[[TangentVector; 3]; 3], normal: &TangentVector) -> SecondForm {
    SecondForm(std::array::from_fn(|i| {
        std::array::from_fn(|j| inner_with(f, &cov[i][j], normal))
    }))
}

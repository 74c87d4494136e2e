use std::ops::{Add, Mul, Neg, Sub};

use super::RuledFrame;
use crate::jets::Dual3;

/// Scalars the coefficient formulas can be evaluated over: plain values, or
/// dual numbers when their parameter derivatives are needed as well.
pub(crate) trait Coef:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn lift(x: f64) -> Self;
}

impl Coef for f64 {
    fn lift(x: f64) -> Self {
        x
    }
}

impl Coef for Dual3 {
    fn lift(x: f64) -> Self {
        Dual3::constant(x)
    }
}

/// `g_f(x, y)` written out over an arbitrary scalar type.
pub(crate) fn pair<T: Coef>(f: T, x: &[T; 4], y: &[T; 4]) -> T {
    x[0] * y[2] + x[2] * y[0] + x[1] * y[3] + x[3] * y[1] + f * (x[2] * y[3] + x[3] * y[2])
}

/// `[a, b, c, e]` from the field value and the three tangent directions
/// `φ_{u1}`, `β` and `γ`.
pub(crate) fn abce<T: Coef>(f: T, dphi: &[T; 4], beta: &[T; 4], gamma: &[T; 4]) -> [T; 4] {
    [
        pair(f, dphi, dphi),
        pair(f, beta, dphi),
        pair(f, gamma, dphi),
        pair(f, beta, gamma),
    ]
}

/// Adjugate of the closed first-form matrix `[[a, b, c], [b, t, e], [c, e, t]]`
/// (with `t` the director target) and its determinant.
pub(crate) fn closed_adjugate<T: Coef>(target: f64, a: T, b: T, c: T, e: T) -> ([[T; 3]; 3], T) {
    let t = T::lift(target);
    let a11 = t * t - e * e;
    let a12 = c * e - t * b;
    let a13 = b * e - t * c;
    let a22 = t * a - c * c;
    let a23 = b * c - a * e;
    let a33 = t * a - b * b;
    let det = a * a11 + b * a12 + c * a13;
    ([[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]], det)
}

/// The scalar coefficients of a ruled hypersurface at one point, together with
/// the component tables `E_ij = β_i γ_j`, `F_ij = β_i φ_{u1,j}` and
/// `G_ij = γ_i φ_{u1,j}` they are assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    /// `g(φ_{u1}, φ_{u1})`
    pub a: f64,
    /// `g(β, φ_{u1})`
    pub b: f64,
    /// `g(γ, φ_{u1})`
    pub c: f64,
    /// `g(β, γ)`
    pub e: f64,
    pub e_table: [[f64; 4]; 4],
    pub f_table: [[f64; 4]; 4],
    pub g_table: [[f64; 4]; 4],
}

fn outer(x: &[f64; 4], y: &[f64; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| x[i] * y[j]))
}

/// Symmetric table contraction `f (T34 + T43) + Σ_{i=1,2} (T_{i,i+2} + T_{i+2,i})`.
pub(crate) fn contract_table(f: f64, t: &[[f64; 4]; 4]) -> f64 {
    f * (t[2][3] + t[3][2]) + t[0][2] + t[2][0] + t[1][3] + t[3][1]
}

pub fn coefficients(frame: &RuledFrame) -> CoefficientSet {
    let f = frame.field.f;
    let dphi = &frame.dphi;
    let beta = &frame.beta[0];
    let gamma = &frame.gamma[0];
    let e_table = outer(beta, gamma);
    let f_table = outer(beta, dphi);
    let g_table = outer(gamma, dphi);
    let a = 2.0 * f * dphi[2] * dphi[3] + 2.0 * (dphi[0] * dphi[2] + dphi[1] * dphi[3]);
    CoefficientSet {
        a,
        b: contract_table(f, &f_table),
        c: contract_table(f, &g_table),
        e: contract_table(f, &e_table),
        e_table,
        f_table,
        g_table,
    }
}

/// `a, b, c, e` as dual numbers carrying their `(u1, u2, u3)` gradients, plus
/// the dual tangent directions they were built from.
pub(crate) struct DualCoefficients {
    pub abce: [Dual3; 4],
    pub dphi: [Dual3; 4],
    pub beta: [Dual3; 4],
    pub gamma: [Dual3; 4],
}

pub(crate) fn dual_coefficients(frame: &RuledFrame) -> DualCoefficients {
    let fr = frame;
    let dphi: [Dual3; 4] =
        std::array::from_fn(|i| Dual3::new(fr.dphi[i], [fr.ddphi[i], fr.beta[1][i], fr.gamma[1][i]]));
    let beta: [Dual3; 4] = std::array::from_fn(|i| Dual3::new(fr.beta[0][i], [fr.beta[1][i], 0.0, 0.0]));
    let gamma: [Dual3; 4] = std::array::from_fn(|i| Dual3::new(fr.gamma[0][i], [fr.gamma[1][i], 0.0, 0.0]));
    // chain rule through φ: ∂_k f = f3 ∂_k φ3 + f4 ∂_k φ4
    let grad_f = |v: &[f64; 4]| fr.field.f3 * v[2] + fr.field.f4 * v[3];
    let f = Dual3::new(
        fr.field.f,
        [grad_f(&fr.dphi), grad_f(&fr.beta[0]), grad_f(&fr.gamma[0])],
    );
    DualCoefficients {
        abce: abce(f, &dphi, &beta, &gamma),
        dphi,
        beta,
        gamma,
    }
}

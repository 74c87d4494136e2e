//! Formulas as they are printed in the source derivation, kept so that the
//! oracle can show which reading is consistent with first principles. Each
//! function changes only the one formula it names; every shared input
//! (coefficients, normal, adjugate) is the adopted one from the parent module.
//!
//! Nothing outside verification should call these.

use super::closed::{first_form_from_frame, gauss_from_frame, pair_normal, second_numerators};
use super::coefficients::dual_coefficients;
use super::{RuledFrame, RuledHypersurface, RuledType};
use crate::error::{GeometryError, Result};
use crate::hypersurface::Params;
use crate::linalg::Mat3;

/// `b` and `c` with the antisymmetric `f(T34 - T43)` twist term.
pub fn twisted_coefficients(h: &RuledHypersurface, u: Params) -> Result<[f64; 2]> {
    let fr = h.frame(u)?;
    let f = fr.field.f;
    let tw = |x: &[f64; 4]| {
        let t = |i: usize, j: usize| x[i - 1] * fr.dphi[j - 1];
        f * (t(3, 4) - t(4, 3)) + t(1, 3) + t(3, 1) + t(2, 4) + t(4, 2)
    };
    Ok([tw(&fr.beta[0]), tw(&fr.gamma[0])])
}

/// The third component as it appears in the expanded triple product of the
/// proof, which is the negative of the stated one.
pub fn gauss_third_from_proof(h: &RuledHypersurface, u: Params) -> Result<f64> {
    let fr = h.frame(u)?;
    let b = &fr.beta[0];
    let e = |i: usize, j: usize| fr.gamma[0][i - 1] * fr.dphi[j - 1];
    Ok(b[1] * (e(4, 3) - e(3, 4)) + b[2] * (e(2, 4) - e(4, 2)) + b[3] * (e(3, 2) - e(2, 3)))
}

/// `sqrt|2f G3 G4 + Σ G_i G_{i+2}|`, the denominator printed for `h_ij`.
pub fn second_form_normalizer(h: &RuledHypersurface, u: Params) -> Result<f64> {
    let fr = h.frame(u)?;
    let g = gauss_from_frame(&fr)?.components;
    Ok((2.0 * fr.field.f * g[2] * g[3] + g[0] * g[2] + g[1] * g[3])
        .abs()
        .sqrt())
}

fn half_pairing(g: &[f64; 4], x: &[f64; 4]) -> f64 {
    g[2] * x[0] + g[3] * x[1]
}

/// `h12` with the ruling term `sign · u3 γ'4` inside the `f4` bracket; the
/// printed sign is `-1`.
pub fn h12_with_ruling_sign(h: &RuledHypersurface, u: Params, sign: f64) -> Result<f64> {
    let fr = h.frame(u)?;
    let gauss = gauss_from_frame(&fr)?;
    let g = &gauss.components;
    let (f, f3, f4) = (fr.field.f, fr.field.f3, fr.field.f4);
    let (a, b, c) = (&fr.alpha[1], &fr.beta[1], &fr.gamma[1]);
    let bracket4 = a[3] + u[1] * b[3] + sign * u[2] * c[3];
    let num = f3 * fr.beta[0][2] * g[3] * fr.dphi[2] + f4 * fr.beta[0][3] * g[2] * bracket4 + pair_normal(f, b, g);
    Ok(num / gauss.normalizer)
}

/// `h11` with the connection term raised to `power` in `φ_{u1}`; the printed
/// power is one.
pub fn h11_with_connection_power(h: &RuledHypersurface, u: Params, power: i32) -> Result<f64> {
    let fr = h.frame(u)?;
    let gauss = gauss_from_frame(&fr)?;
    let g = &gauss.components;
    let (f, f3, f4) = (fr.field.f, fr.field.f3, fr.field.f4);
    let num = f3 * g[3] * fr.dphi[2].powi(power) + f4 * g[2] * fr.dphi[3].powi(power) + pair_normal(f, &fr.ddphi, g);
    Ok(num / gauss.normalizer)
}

/// `h13` with the second partial paired against `G` through `Σ G_{i+2} X_i`
/// only, as printed.
pub fn h13_with_half_pairing(h: &RuledHypersurface, u: Params) -> Result<f64> {
    let fr = h.frame(u)?;
    let gauss = gauss_from_frame(&fr)?;
    let g = &gauss.components;
    let (f3, f4) = (fr.field.f3, fr.field.f4);
    let gm = &fr.gamma[0];
    let num = f3 * gm[2] * g[3] * fr.dphi[2] + f4 * gm[3] * g[2] * fr.dphi[3] + half_pairing(g, &fr.gamma[1]);
    Ok(num / gauss.normalizer)
}

/// The printed bracket terms of the minimality conditions.
struct Brackets {
    b11: f64,
    b12: f64,
    b13: f64,
    b22: f64,
    b23: f64,
    b33: f64,
    /// `f3 β3² G4 + f4 γ4² G3`, the mixed bracket of the orthogonal corollaries
    mixed22: f64,
    /// `b13` with `u2 β'2` in place of `u2 β'4`
    b13_swapped: f64,
    /// `b12` with `u3 γ'4` in the `f3` bracket and `u3` dropped in the `f4` one
    b12_orthogonal: f64,
}

fn brackets(kind: RuledType, fr: &RuledFrame, g: &[f64; 4]) -> Brackets {
    let (f3, f4) = (fr.field.f3, fr.field.f4);
    let (a1, b1, c1) = (&fr.alpha[1], &fr.beta[1], &fr.gamma[1]);
    let (u2, u3) = (fr.u[1], fr.u[2]);
    let (be, gm) = (&fr.beta[0], &fr.gamma[0]);
    let d3 = fr.dphi[2];
    let d4 = fr.dphi[3];
    let (b11_3, b11_4) = match kind {
        RuledType::Type1 => (a1[2] + u2 * b1[1] + u3 * c1[2], d4),
        _ => (d3, a1[3] + u2 * c1[3] + u3 * c1[3]),
    };
    Brackets {
        b11: f3 * g[3] * b11_3 + f4 * g[2] * b11_4 + half_pairing(g, &fr.ddphi),
        b12: f3 * be[2] * g[3] * d3 + f4 * be[3] * g[2] * d4 + half_pairing(g, b1),
        b13: f3 * gm[2] * g[3] * d3 + f4 * gm[3] * g[2] * d4 + half_pairing(g, c1),
        b22: f3 * be[2] * be[2] * g[3] + f4 * be[3] * be[3] * g[2],
        b23: f3 * be[2] * gm[2] * g[3] + f4 * be[3] * gm[3] * g[2],
        b33: f3 * gm[2] * gm[2] * g[3] + f4 * gm[3] * gm[3] * g[2],
        mixed22: f3 * be[2] * be[2] * g[3] + f4 * gm[3] * gm[3] * g[2],
        b13_swapped: f3 * gm[2] * g[3] * d3
            + f4 * gm[3] * g[2] * (a1[3] + u2 * b1[1] + u3 * c1[3])
            + half_pairing(g, c1),
        b12_orthogonal: f3 * be[2] * g[3] * (a1[2] + u2 * b1[2] + u3 * c1[3])
            + f4 * be[3] * g[2] * (a1[3] + u2 * b1[3] + c1[3])
            + half_pairing(g, b1),
    }
}

/// The printed minimality condition for general directors.
pub fn minimality_residual(h: &RuledHypersurface, u: Params) -> Result<f64> {
    let fr = h.frame(u)?;
    let first = first_form_from_frame(h.kind.target(), &fr)?;
    let g = gauss_from_frame(&fr)?.components;
    let cs = first.coefficients;
    let (a, b, c, e) = (cs.a, cs.b, cs.c, cs.e);
    let br = brackets(h.kind, &fr, &g);
    Ok(match h.kind {
        RuledType::Type1 => {
            (1.0 - e * e) * br.b11
                + 2.0 * (c * e - b) * br.b12
                + 2.0 * (b * e - c) * br.b13
                + 2.0 * (b * c - a * e) * br.b23
                + (a - c * c) * br.b22
                + (a - b * b) * br.b33
        }
        RuledType::Type2 => {
            (1.0 - e * e) * br.b11
                + 2.0 * (c * e + b) * br.b12
                + 2.0 * (b * e + c) * br.b13
                + 2.0 * (b * c - a * e) * br.b23
                + (-a - c * c) * br.b22
                + (-a - b * b) * br.b33
        }
        RuledType::Type3 => {
            -e * e * br.b11 + 2.0 * c * e * br.b12 + 2.0 * b * e * br.b13 + 2.0 * (b * c - a * e) * br.b23
                - c * c * br.b22
                - b * b * br.b33
        }
    })
}

/// The printed minimality condition for orthogonal directors.
pub fn minimality_orthogonal(h: &RuledHypersurface, u: Params) -> Result<f64> {
    let fr = h.frame(u)?;
    let first = first_form_from_frame(h.kind.target(), &fr)?;
    let g = gauss_from_frame(&fr)?.components;
    let cs = first.coefficients;
    let (a, b, c) = (cs.a, cs.b, cs.c);
    let br = brackets(h.kind, &fr, &g);
    // the leading bracket of both orthogonal corollaries carries no misprint
    let lead = fr.field.f3 * g[3] * fr.dphi[2] + fr.field.f4 * g[2] * fr.dphi[3] + half_pairing(&g, &fr.ddphi);
    Ok(match h.kind {
        RuledType::Type1 => {
            lead - 2.0 * b * br.b12_orthogonal - 2.0 * c * br.b13
                + 2.0 * b * c * br.b23
                + (a - c * c) * br.mixed22
                + (a - b * b) * br.b33
        }
        RuledType::Type2 => {
            lead + 2.0 * b * br.b12
                + 2.0 * c * br.b13_swapped
                + 2.0 * b * c * br.b23
                + (-a - c * c) * br.mixed22
                + (-a - b * b) * br.b33
        }
        RuledType::Type3 => 2.0 * b * c * br.b23 - c * c * br.mixed22 - b * b * br.b33,
    })
}

/// `2bce - a e^exponent`; the type-3 Laplace-Beltrami denominator is printed
/// with exponent 22.
pub fn null_determinant(h: &RuledHypersurface, u: Params, exponent: i32) -> Result<f64> {
    let cs = super::coefficients(&h.frame(u)?);
    Ok(2.0 * cs.b * cs.c * cs.e - cs.a * cs.e.powi(exponent))
}

/// The printed Laplace-Beltrami expansion with its derivative weights,
/// denominators and index slips transcribed.
pub fn laplace_beltrami(h: &RuledHypersurface, u: Params) -> Result<[f64; 4]> {
    let fr = h.frame(u)?;
    let dc = dual_coefficients(&fr);
    let [a, b, c, e] = dc.abce;
    let u2 = fr.u[1];
    let denom = match h.kind {
        RuledType::Type1 => a - b * b - c * c,
        RuledType::Type2 => a + b * b + c * c,
        RuledType::Type3 => 2.0 * b * c * e - a * e.powi(22),
    };
    if denom.v == 0.0 || !denom.v.is_finite() {
        return Err(GeometryError::DegenerateDenominator { value: denom.v });
    }
    // derivative factors as printed
    let weights: [f64; 3] = match h.kind {
        RuledType::Type1 => std::array::from_fn(|k| denom.d[k]),
        RuledType::Type2 => [a.d[0] + 2.0 * b.v * b.d[1] + 2.0 * c.v * c.d[0], denom.d[1], denom.d[2]],
        RuledType::Type3 => std::array::from_fn(|k| {
            2.0 * b.d[k] * c.v * e.v + 2.0 * b.v * c.d[k] * e.v + 2.0 * b.v * c.v * e.d[k] - 2.0 * a.v * a.d[k]
        }),
    };
    let s = if h.kind == RuledType::Type1 { -1.0 } else { 1.0 };
    let (m22, m33) = match h.kind {
        RuledType::Type1 => (a - c * c, a - b * b),
        _ => (-(a + c * c), -(a + b * b)),
    };
    let scale = denom.v.abs().sqrt() * denom.v.abs().powf(1.5);
    Ok(std::array::from_fn(|i| {
        let dphi = dc.dphi[i];
        let bi = dc.beta[i];
        let gi = dc.gamma[i];
        let ddphi = fr.ddphi[i];
        // first row: the printed value term repeats u2 on γ' in type 1
        let p1_value = match h.kind {
            RuledType::Type1 => fr.alpha[1][i] + u2 * fr.beta[1][i] + u2 * fr.gamma[1][i],
            _ => dphi.v,
        } + s * (b.v * bi.v + c.v * gi.v);
        let t1 = (ddphi + s * ((b * bi).d[0] + (c * gi).d[0])) * denom.v - weights[0] * p1_value;
        let p2 = s * b * dphi + m22 * bi + b * c * gi;
        let t2 = (s * b.v * fr.beta[1][i] + (m22 * bi).d[1] + (b * c * gi).d[1]) * denom.v - weights[1] * p2.v;
        // the type-3 third row writes bare y, z for u2, u3
        let p3 = s * c * dphi + b * c * bi + m33 * gi;
        let t3 = (s * c.v * fr.gamma[1][i] + (b * c * bi).d[2] + (m33 * gi).d[2]) * denom.v - weights[2] * p3.v;
        (t1 + t2 + t3) / scale
    }))
}

/// The second fundamental form with every printed detail at once: printed
/// normalizer, half pairing, unsquared connection term in `h11` and the
/// `h12` ruling sign.
pub fn second_form(h: &RuledHypersurface, u: Params) -> Result<Mat3> {
    let fr = h.frame(u)?;
    let g = gauss_from_frame(&fr)?.components;
    let norm = second_form_normalizer(h, u)?;
    let (f3, f4) = (fr.field.f3, fr.field.f4);
    let (be, gm) = (&fr.beta[0], &fr.gamma[0]);
    let d = &fr.dphi;
    let a1 = &fr.alpha[1];
    let c1 = &fr.gamma[1];
    let b1 = &fr.beta[1];
    let h11 = f3 * g[3] * d[2] + f4 * g[2] * d[3] + half_pairing(&g, &fr.ddphi);
    let h12 = f3 * be[2] * g[3] * d[2]
        + f4 * be[3] * g[2] * (a1[3] + fr.u[1] * b1[3] - fr.u[2] * c1[3])
        + half_pairing(&g, b1);
    let h13 = f3 * gm[2] * g[3] * d[2] + f4 * gm[3] * g[2] * d[3] + half_pairing(&g, c1);
    let full = second_numerators(&fr, &g);
    let m = [
        [h11, h12, h13],
        [h12, full[1][1], full[1][2]],
        [h13, full[1][2], full[2][2]],
    ];
    Ok(m.map(|row| row.map(|x| x / norm)))
}

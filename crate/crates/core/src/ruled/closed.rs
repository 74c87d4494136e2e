use super::coefficients::{closed_adjugate, coefficients, CoefficientSet};
use super::{RuledFrame, RuledHypersurface, ORTHOGONALITY_TOLERANCE};
use crate::error::{GeometryError, Result};
use crate::hypersurface::{FirstForm, Params, SecondForm};
use crate::linalg::{self, Mat3};
use crate::walker::{classify, CausalCharacter, TangentVector, NULL_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFirstForm {
    pub form: FirstForm,
    pub coefficients: CoefficientSet,
    /// `B`, `C` or `D` depending on the type.
    pub det_closed: f64,
    /// Direct cofactor expansion of the assembled matrix.
    pub det_direct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedGaussMap {
    /// `G1..G4` before normalization.
    pub components: [f64; 4],
    /// `2G1G3 + 2G2G4 + 2fG3G4`
    pub radicand: f64,
    /// `A = sqrt|radicand|`
    pub normalizer: f64,
    pub normal: TangentVector,
    pub character: CausalCharacter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinimalityVariant {
    General,
    OrthogonalDirectors,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalityResidual {
    pub variant: MinimalityVariant,
    /// `Σ adj(g)_ij · (A h_ij)`
    pub value: f64,
    /// `A · det g`; `value / normalizer` is the trace of the shape operator.
    pub normalizer: f64,
}

impl MinimalityResidual {
    pub fn trace(&self) -> f64 {
        self.value / self.normalizer
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flatness {
    pub det_h: f64,
    pub threshold: f64,
    pub is_flat: bool,
}

pub(crate) fn first_form_from_frame(kind_target: f64, fr: &RuledFrame) -> Result<ClosedFirstForm> {
    let cs = coefficients(fr);
    let (a, b, c, e, t) = (cs.a, cs.b, cs.c, cs.e, kind_target);
    let matrix = [[a, b, c], [b, t, e], [c, e, t]];
    let (adj, det_closed) = closed_adjugate(t, a, b, c, e);
    let det_direct = linalg::det3(&matrix);
    let form = FirstForm::with_det(matrix, det_closed, adj)?;
    Ok(ClosedFirstForm {
        form,
        coefficients: cs,
        det_closed,
        det_direct,
    })
}

pub fn first_form_closed(h: &RuledHypersurface, u: Params) -> Result<ClosedFirstForm> {
    first_form_from_frame(h.kind.target(), &h.frame(u)?)
}

/// `G1..G4` written through `E_ij = γ_i φ_{u1,j}` and `β`.
pub(crate) fn gauss_components(fr: &RuledFrame) -> [f64; 4] {
    let b = &fr.beta[0];
    let g = &fr.gamma[0];
    let e = |i: usize, j: usize| g[i - 1] * fr.dphi[j - 1];
    let f = fr.field.f;
    let g3 = b[1] * (e(3, 4) - e(4, 3)) + b[2] * (e(4, 2) - e(2, 4)) + b[3] * (e(2, 3) - e(3, 2));
    let g4 = b[0] * (e(4, 3) - e(3, 4)) + b[2] * (e(1, 4) - e(4, 1)) + b[3] * (e(3, 1) - e(1, 3));
    let g1 = -f * g4 + b[0] * (e(2, 4) - e(4, 2)) + b[1] * (e(4, 1) - e(1, 4)) + b[3] * (e(1, 2) - e(2, 1));
    let g2 = -f * g3 + b[0] * (e(3, 2) - e(2, 3)) + b[1] * (e(1, 3) - e(3, 1)) + b[2] * (e(2, 1) - e(1, 2));
    [g1, g2, g3, g4]
}

pub(crate) fn gauss_from_frame(fr: &RuledFrame) -> Result<ClosedGaussMap> {
    let g = gauss_components(fr);
    let f = fr.field.f;
    let radicand = 2.0 * g[0] * g[2] + 2.0 * g[1] * g[3] + 2.0 * f * g[2] * g[3];
    let scale = linalg::norm4_sq(&g);
    if !radicand.is_finite() || radicand.abs() <= NULL_TOLERANCE * scale {
        return Err(GeometryError::DegenerateNormal { radicand });
    }
    let normalizer = radicand.abs().sqrt();
    Ok(ClosedGaussMap {
        components: g,
        radicand,
        normalizer,
        normal: TangentVector(g) * (1.0 / normalizer),
        character: classify(radicand, scale),
    })
}

pub fn gauss_map_closed(h: &RuledHypersurface, u: Params) -> Result<ClosedGaussMap> {
    gauss_from_frame(&h.frame(u)?)
}

/// `g(X, G)` for the unnormalized normal.
pub(crate) fn pair_normal(f: f64, x: &[f64; 4], g: &[f64; 4]) -> f64 {
    x[0] * g[2] + x[2] * g[0] + x[1] * g[3] + x[3] * g[1] + f * (x[2] * g[3] + x[3] * g[2])
}

/// `A h_ij`: the connection term `f3 X3 Y3 G4 + f4 X4 Y4 G3` plus the pairing
/// of the raw second partial with `G`.
pub(crate) fn second_numerators(fr: &RuledFrame, g: &[f64; 4]) -> Mat3 {
    let (f, f3, f4) = (fr.field.f, fr.field.f3, fr.field.f4);
    let tangents = [fr.dphi, fr.beta[0], fr.gamma[0]];
    let zero = [0.0; 4];
    let raw = |i: usize, j: usize| match (i.min(j), i.max(j)) {
        (0, 0) => &fr.ddphi,
        (0, 1) => &fr.beta[1],
        (0, 2) => &fr.gamma[1],
        _ => &zero,
    };
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (x, y) = (&tangents[i], &tangents[j]);
            f3 * x[2] * y[2] * g[3] + f4 * x[3] * y[3] * g[2] + pair_normal(f, raw(i, j), g)
        })
    })
}

pub(crate) fn second_from_frame(fr: &RuledFrame) -> Result<(SecondForm, ClosedGaussMap)> {
    let gauss = gauss_from_frame(fr)?;
    let num = second_numerators(fr, &gauss.components);
    Ok((SecondForm(linalg::scale3(&num, 1.0 / gauss.normalizer)), gauss))
}

pub fn second_form_closed(h: &RuledHypersurface, u: Params) -> Result<SecondForm> {
    Ok(second_from_frame(&h.frame(u)?)?.0)
}

pub fn minimality_residual(h: &RuledHypersurface, u: Params, variant: MinimalityVariant) -> Result<MinimalityResidual> {
    let fr = h.frame(u)?;
    let first = first_form_from_frame(h.kind.target(), &fr)?;
    let cs = first.coefficients;
    let e = match variant {
        MinimalityVariant::General => cs.e,
        MinimalityVariant::OrthogonalDirectors => {
            if cs.e.abs() > ORTHOGONALITY_TOLERANCE {
                return Err(GeometryError::OrthogonalityViolated { e: cs.e });
            }
            0.0
        }
    };
    let (adj, _) = closed_adjugate(h.kind.target(), cs.a, cs.b, cs.c, e);
    let gauss = gauss_from_frame(&fr)?;
    let num = second_numerators(&fr, &gauss.components);
    let value = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| adj[i][j] * num[i][j])
        .sum();
    Ok(MinimalityResidual {
        variant,
        value,
        normalizer: gauss.normalizer * first.det_closed,
    })
}

/// `det[h_ij]` against `1e-9 · max(1, |det g|)`.
pub fn flatness_check(h: &RuledHypersurface, u: Params) -> Result<Flatness> {
    let fr = h.frame(u)?;
    let first = first_form_from_frame(h.kind.target(), &fr)?;
    let (second, _) = second_from_frame(&fr)?;
    let det_h = linalg::det3(&second.0);
    let threshold = 1e-9 * first.det_closed.abs().max(1.0);
    Ok(Flatness {
        det_h,
        threshold,
        is_flat: det_h.abs() <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::RuledType;
    use super::*;
    use crate::hypersurface::{curvatures, Hypersurface};

    const POINTS: [Params; 4] = [[0.0, 0.0, 0.0], [0.3, -0.4, 0.7], [-0.8, 0.25, 0.1], [0.6, 1.1, -0.5]];

    #[test]
    fn e0_first_form_and_coefficients() {
        let h = e0();
        let ff = first_form_closed(&h, [0.0, 0.0, 0.0]).unwrap();
        let cs = ff.coefficients;
        assert_eq!([cs.a, cs.b, cs.c, cs.e], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(ff.det_closed, -1.0);
        assert_eq!(ff.det_direct, -1.0);
    }

    #[test]
    fn e3_first_form() {
        let h = e3();
        let ff = first_form_closed(&h, [0.0, 0.0, 0.0]).unwrap();
        let cs = ff.coefficients;
        assert_eq!([cs.a, cs.b, cs.c, cs.e], [0.0, 1.0, 1.0, 1.0]);
        assert_eq!(ff.det_closed, 2.0);
        assert_eq!(ff.det_direct, 2.0);
    }

    #[test]
    fn all_zero_coefficients_are_degenerate() {
        let h = build(RuledType::Type3, "0", "0,0,0,0", "1,0,0,0", "0,1,0,0");
        assert!(matches!(
            first_form_closed(&h, [0.0, 0.0, 0.0]),
            Err(GeometryError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn closed_forms_match_generic_pipeline() {
        for h in [e0(), e3(), curved_type1(), curved_type2(), curved_type3()] {
            let generic = Hypersurface::new(&h.metric, &h);
            for u in POINTS {
                let ff = first_form_closed(&h, u).unwrap_or_else(|e| panic!("{:?} {u:?} {e}", h.kind));
                let gf = generic.first_form(u).unwrap();
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((ff.form.matrix[i][j] - gf.matrix[i][j]).abs() < 1e-10);
                    }
                }
                assert!((ff.det_closed - ff.det_direct).abs() < 1e-10);
                let gm = gauss_map_closed(&h, u).unwrap();
                let gg = generic.gauss_map(u).unwrap();
                for k in 0..4 {
                    assert!((gm.components[k] - gg.raw.0[k]).abs() < 1e-10);
                }
                assert!((gm.radicand - gg.raw_norm_sq).abs() < 1e-10);
                let hs = second_form_closed(&h, u).unwrap();
                let hg = generic.second_form(u).unwrap();
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((hs.0[i][j] - hg.0[i][j]).abs() < 1e-10, "{:?} {i}{j}", h.kind);
                    }
                }
                let m = minimality_residual(&h, u, MinimalityVariant::General).unwrap();
                let trace = curvatures(&gf, &hg).mean * 3.0;
                assert!((m.trace() - trace).abs() < 1e-9 * trace.abs().max(1.0));
            }
        }
    }

    #[test]
    fn e0_is_totally_geodesic() {
        let h = e0();
        for u in POINTS {
            let g = gauss_map_closed(&h, u).unwrap();
            assert_eq!(g.components, [0.0, 0.5, 0.0, -1.0]);
            assert_eq!(g.character, CausalCharacter::Timelike);
            assert_eq!(second_form_closed(&h, u).unwrap().0, [[0.0; 3]; 3]);
            for variant in [MinimalityVariant::General, MinimalityVariant::OrthogonalDirectors] {
                assert_eq!(minimality_residual(&h, u, variant).unwrap().value, 0.0);
            }
            assert!(flatness_check(&h, u).unwrap().is_flat);
        }
    }

    #[test]
    fn non_orthogonal_directors_are_rejected() {
        let err = minimality_residual(&e3(), [0.0, 0.0, 0.0], MinimalityVariant::OrthogonalDirectors).unwrap_err();
        assert_eq!(err, GeometryError::OrthogonalityViolated { e: 1.0 });
    }

    #[test]
    fn flat_limit_has_null_normal() {
        let h = build(RuledType::Type3, "0", "t,0,0,0", "0,1,0,0", "0,0,1,0");
        assert!(matches!(
            gauss_map_closed(&h, [0.2, 0.1, 0.3]),
            Err(GeometryError::DegenerateNormal { .. })
        ));
    }

    #[test]
    fn constant_field_is_flat() {
        let h = build(
            RuledType::Type1,
            "5",
            "sin(t), t, 0.5*t^2, cos(t)",
            "0.5*exp(t), 0, exp(-t), 0",
            "0, 0.5, 0, 1",
        );
        for u in POINTS {
            let hs = second_form_closed(&h, u).unwrap();
            assert_eq!([hs.0[1][1], hs.0[1][2], hs.0[2][2]], [0.0; 3]);
            let fl = flatness_check(&h, u).unwrap();
            assert!(fl.is_flat, "{fl:?}");
        }
    }
}

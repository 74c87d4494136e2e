use super::coefficients::{closed_adjugate, dual_coefficients};
use super::{RuledHypersurface, RuledType, ORTHOGONALITY_TOLERANCE};
use crate::error::{GeometryError, Result};
use crate::hypersurface::{degeneracy_threshold, Params};
use crate::jets::Dual3;

/// Closed-form Laplace-Beltrami operator applied to the coordinate functions
/// of the immersion.
///
/// Types 1 and 2 require orthogonal directors (`e` and its gradient vanish);
/// the adjugate is then taken with `e = 0` and the denominator is
/// `W = a - b² - c²` or `T = a + b² + c²`. Type 3 uses `D = 2bce - ae²`.
/// Coefficient derivatives are exact.
pub fn lb_closed(h: &RuledHypersurface, u: Params) -> Result<[f64; 4]> {
    lb_weighted(h, u, 0.5)
}

/// Same as [`lb_closed`] with the weight of the `∂_k D` term exposed; the
/// divergence form fixes it at one half.
pub fn lb_weighted(h: &RuledHypersurface, u: Params, weight: f64) -> Result<[f64; 4]> {
    let fr = h.frame(u)?;
    let dc = dual_coefficients(&fr);
    let [a, b, c, mut e] = dc.abce;
    if h.kind != RuledType::Type3 {
        let worst = std::iter::once(e.v).chain(e.d).fold(0.0_f64, |m, x| m.max(x.abs()));
        if worst > ORTHOGONALITY_TOLERANCE {
            return Err(GeometryError::OrthogonalityViolated { e: worst });
        }
        e = Dual3::ZERO;
    }
    let target = h.kind.target();
    let (adj, det) = closed_adjugate(target, a, b, c, e);
    let matrix = [[a.v, b.v, c.v], [b.v, target, e.v], [c.v, e.v, target]];
    if !det.v.is_finite() || det.v.abs() <= degeneracy_threshold(&matrix) {
        return Err(GeometryError::DegenerateDenominator { value: det.v });
    }
    let partials = [dc.dphi, dc.beta, dc.gamma];
    Ok(std::array::from_fn(|i| {
        (0..3)
            .map(|k| {
                let p = (0..3).fold(Dual3::ZERO, |acc, j| acc + adj[k][j] * partials[j][i]);
                (p.d[k] * det.v - weight * det.d[k] * p.v) / (det.v * det.v)
            })
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::hypersurface::{Hypersurface, DEFAULT_LB_STEP};

    fn close(a: &[f64; 4], b: &[f64; 4], rel: f64) -> bool {
        let err = a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        let scale = b.iter().fold(1.0_f64, |m, y| m.max(y.abs()));
        err / scale < rel
    }

    #[test]
    fn e0_is_harmonic() {
        let h = e0();
        assert_eq!(lb_closed(&h, [0.3, 0.2, -0.1]).unwrap(), [0.0; 4]);
        let fd = Hypersurface::new(&h.metric, &h)
            .laplace_beltrami_fd([0.3, 0.2, -0.1], DEFAULT_LB_STEP, true)
            .unwrap();
        assert!(fd.iter().all(|x| x.abs() < 1e-8));
    }

    #[test]
    fn type3_matches_divergence_form() {
        let h = curved_type3();
        let generic = Hypersurface::new(&h.metric, &h);
        for u in [[0.1, 0.2, 0.3], [-0.4, 0.5, 0.2]] {
            let closed = lb_closed(&h, u).unwrap();
            let fd = generic.laplace_beltrami_fd(u, DEFAULT_LB_STEP, true).unwrap();
            assert!(close(&closed, &fd, 1e-6), "{closed:?} vs {fd:?}");
        }
    }

    #[test]
    fn orthogonal_type1_matches_divergence_form() {
        // constant f keeps e ≡ 0 along the whole surface
        let h = build(
            RuledType::Type1,
            "0.7",
            "sin(t), t^2, 1 + 0.5*t, cos(t)",
            "0.5*exp(-t), 0, exp(t), 0",
            "-0.7/(2 + t), 0.5*(2 + t), 0, 1/(2 + t)",
        );
        let generic = Hypersurface::new(&h.metric, &h);
        let u = [0.2, 0.4, -0.3];
        let closed = lb_closed(&h, u).unwrap();
        let fd = generic.laplace_beltrami_fd(u, DEFAULT_LB_STEP, true).unwrap();
        assert!(close(&closed, &fd, 1e-6), "{closed:?} vs {fd:?}");
        let unit_weight = lb_weighted(&h, u, 1.0).unwrap();
        assert!(!close(&unit_weight, &fd, 1e-3));
    }

    #[test]
    fn non_orthogonal_type1_is_rejected() {
        assert!(matches!(
            lb_closed(&curved_type1(), [0.1, 0.1, 0.1]),
            Err(GeometryError::OrthogonalityViolated { .. })
        ));
    }
}

//! First-principles pipeline: metric derivatives by central differences of
//! the metric matrix, curve and field data from jets, and nothing else.

use crate::error::{GeometryError, Result};
use crate::hypersurface::{
    curvatures, first_form_matrix, gauss_from_tangents, FirstForm, GaussMap, Hypersurface, Immersion, Params,
    SecondForm,
};
use crate::linalg::{self, Mat4};
use crate::walker::{inner_with, ChartPoint, ChristoffelTable, TangentVector, WalkerMetric};

/// `Γᵏᵢⱼ = ½ gᵏˡ (∂_i g_jl + ∂_j g_il - ∂_l g_ij)` with the metric partials
/// taken by central differences of step `step`.
pub fn christoffels_generic(metric: &WalkerMetric, p: &ChartPoint, step: f64) -> Result<ChristoffelTable> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(GeometryError::Argument(format!("invalid step {step}")));
    }
    let g = metric.metric_at(p)?;
    let det = g.det();
    if (det - 1.0).abs() > 1e-12 {
        return Err(GeometryError::DegenerateMetric { det });
    }
    let inv = g.inverse();
    let mut dg = [[[0.0; 4]; 4]; 4];
    for (l, slot) in dg.iter_mut().enumerate() {
        let mut up = *p;
        let mut down = *p;
        up.0[l] += step;
        down.0[l] -= step;
        let gu = metric.metric_at(&up)?.0;
        let gd = metric.metric_at(&down)?.0;
        *slot = std::array::from_fn(|i| std::array::from_fn(|j| (gu[i][j] - gd[i][j]) / (2.0 * step)));
    }
    // lowered symbols Γ_lij
    let lowered: [Mat4; 4] = std::array::from_fn(|l| {
        std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])))
    });
    let mut table = ChristoffelTable::default();
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                table.0[k][i][j] = (0..4).map(|l| inv[k][l] * lowered[l][i][j]).sum();
            }
        }
    }
    Ok(table)
}

fn contract(table: &ChristoffelTable, x: &TangentVector, y: &TangentVector) -> TangentVector {
    TangentVector(std::array::from_fn(|k| {
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| table.0[k][i][j] * x[i] * y[j])
            .sum()
    }))
}

/// Everything the oracle knows about one parameter point. Each quantity
/// fails independently so that partial degeneracy is still reported.
#[derive(Debug, Clone)]
pub struct OracleSample {
    pub point: ChartPoint,
    pub field_value: f64,
    pub tangents: [TangentVector; 3],
    pub first_matrix: linalg::Mat3,
    pub first: Result<FirstForm>,
    pub gauss: Result<GaussMap>,
    pub second: Result<SecondForm>,
}

impl OracleSample {
    /// `trace(g⁻¹ h)`.
    pub fn trace(&self) -> Result<f64> {
        let first = self.first.clone()?;
        let second = self.second.clone()?;
        Ok(3.0 * curvatures(&first, &second).mean)
    }

    pub fn gaussian(&self) -> Result<f64> {
        Ok(curvatures(&self.first.clone()?, &self.second.clone()?).gaussian)
    }

    pub fn inner(&self, x: &TangentVector, y: &TangentVector) -> f64 {
        inner_with(self.field_value, x, y)
    }
}

pub fn sample<I: Immersion + ?Sized>(
    metric: &WalkerMetric,
    immersion: &I,
    u: Params,
    step: f64,
) -> Result<OracleSample> {
    let jet = immersion.jet(u)?;
    let f = metric.field_value(&jet.point)?;
    let first_matrix = first_form_matrix(f, &jet.first);
    let first = FirstForm::from_matrix(first_matrix);
    let gauss = gauss_from_tangents(f, &jet.first);
    let second = match (&gauss, &christoffels_generic(metric, &jet.point, step)) {
        (Ok(gm), Ok(table)) => Ok(SecondForm(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let cov = jet.second[i][j] + contract(table, &jet.first[i], &jet.first[j]);
                inner_with(f, &cov, &gm.normal)
            })
        }))),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    Ok(OracleSample {
        point: jet.point,
        field_value: f,
        tangents: jet.first,
        first_matrix,
        first,
        gauss,
        second,
    })
}

/// Divergence-form Laplace-Beltrami operator by Richardson-extrapolated
/// central differences.
pub fn laplace_beltrami<I: Immersion + ?Sized>(
    metric: &WalkerMetric,
    immersion: &I,
    u: Params,
    step: f64,
) -> Result<[f64; 4]> {
    Hypersurface::new(metric, immersion).laplace_beltrami_fd(u, step, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::ScalarField2;

    fn metric(src: &str) -> WalkerMetric {
        WalkerMetric::new(ScalarField2::parse(src).unwrap())
    }

    #[test]
    fn flat_field_has_no_symbols() {
        let t = christoffels_generic(&metric("0"), &ChartPoint::new(0.1, 0.2, 0.3, 0.4), 1e-4).unwrap();
        assert!(t.symbols().all(|(_, v)| v.abs() < 1e-10));
        assert_eq!(t.symbols().count(), 40);
    }

    #[test]
    fn cubic_field_symbols() {
        let m = metric("u3^2*u4");
        let p = ChartPoint::new(0.0, 0.0, 1.0, 2.0);
        let t = christoffels_generic(&m, &p, 1e-4).unwrap();
        assert!((t.0[1][2][2] - 4.0).abs() < 1e-6);
        assert!((t.0[0][3][3] - 1.0).abs() < 1e-6);
        let closed = m.christoffels_closed(&p).unwrap().to_table();
        for ((_, a), (_, b)) in t.symbols().zip(closed.symbols()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn halving_the_step_reduces_error() {
        let m = metric("sin(u3)*exp(0.5*u4)");
        let p = ChartPoint::new(0.0, 0.0, 0.7, -0.3);
        let exact = m.christoffels_closed(&p).unwrap().to_table();
        let err = |h: f64| {
            let t = christoffels_generic(&m, &p, h).unwrap();
            t.symbols()
                .zip(exact.symbols())
                .fold(0.0_f64, |acc, ((_, a), (_, b))| acc.max((a - b).abs()))
        };
        let coarse = err(1e-2);
        let fine = err(5e-3);
        assert!(coarse / fine >= 3.0, "{coarse} {fine}");
    }

    #[test]
    fn bad_step_is_rejected() {
        assert!(christoffels_generic(&metric("0"), &ChartPoint::new(0.0, 0.0, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn pipeline_is_closed_form_free() {
        let src = include_str!("generic.rs");
        let code = &src[..src.find("#[cfg(test)]").unwrap()];
        for banned in [
            "ruled",
            "christoffels_closed",
            "WalkerChristoffels",
            "covariant_from_jet",
            "second_from(",
        ] {
            assert!(!code.contains(banned), "oracle pipeline references `{banned}`");
        }
    }
}

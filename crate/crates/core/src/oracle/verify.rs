use rayon::prelude::*;

use super::generic::{self, OracleSample};
use super::report::{Adjudication, Candidate, DiscrepancyReport, Record, ToleranceTable};
use crate::error::{GeometryError, Result};
use crate::hypersurface::{Params, DEFAULT_LB_STEP};
use crate::linalg;
use crate::ruled::{self, literal, MinimalityVariant, RuledHypersurface, RuledType};
use crate::walker::{ChartPoint, TangentVector};

/// Default central-difference step for metric derivatives.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: ToleranceTable,
    pub step: f64,
    /// Perturbs the closed second fundamental form so that the comparison
    /// machinery can be exercised end to end.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tolerances: ToleranceTable::shipped(),
            step: DEFAULT_STEP,
            inject_fault: false,
        }
    }
}

pub fn verify_fixture(h: &RuledHypersurface, points: &[Params], tolerances: &ToleranceTable) -> DiscrepancyReport {
    verify_fixture_with(
        h,
        points,
        &VerifyOptions {
            tolerances: tolerances.clone(),
            ..VerifyOptions::default()
        },
    )
}

pub fn verify_fixture_with(h: &RuledHypersurface, points: &[Params], opts: &VerifyOptions) -> DiscrepancyReport {
    let parts: Vec<DiscrepancyReport> = points.par_iter().map(|&u| verify_point(h, u, opts)).collect();
    let mut report = DiscrepancyReport::default();
    for p in parts {
        report.extend(p);
    }
    report
}

fn flat(m: &linalg::Mat3) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

fn lift<T, U>(r: &Result<T>, f: impl FnOnce(&T) -> U) -> Result<U> {
    r.as_ref().map(f).map_err(Clone::clone)
}

fn both<A, B, U>(a: &Result<A>, b: &Result<B>, f: impl FnOnce(&A, &B) -> U) -> Result<U> {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(f(x, y)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

/// Skips a record whose closed form does not apply at this point.
fn applicable<T>(r: &Result<T>) -> bool {
    !matches!(r, Err(GeometryError::OrthogonalityViolated { .. }))
}

struct Point<'a> {
    u: Params,
    opts: &'a VerifyOptions,
    out: DiscrepancyReport,
}

impl Point<'_> {
    fn record(&mut self, formula: &str, closed: Result<Vec<f64>>, oracle: Result<Vec<f64>>) {
        let tol = self.opts.tolerances.get(formula);
        self.out
            .records
            .push(Record::compare(formula, self.u, closed, oracle, tol));
    }

    fn adjudicate(&mut self, formula: &str, candidates: Result<Vec<(&str, Vec<f64>)>>, oracle: Result<Vec<f64>>) {
        if let (Ok(candidates), Ok(oracle)) = (candidates, oracle) {
            let tol = self.opts.tolerances.get(formula);
            let candidates = candidates
                .into_iter()
                .map(|(label, values)| Candidate {
                    label: label.to_string(),
                    values,
                })
                .collect();
            self.out
                .adjudications
                .push(Adjudication::decide(formula, self.u, candidates, oracle, tol));
        }
    }
}

fn oracle_normal_scale(s: &OracleSample) -> Result<f64> {
    lift(&s.gauss, |g| g.raw_norm_sq.abs().sqrt())
}

/// `g(β, β)` and `g(γ, γ)` with `f` at the base-curve footpoint.
fn director_norms(h: &RuledHypersurface, t: f64) -> Result<Vec<f64>> {
    let a = h.alpha.eval(t, 0)?[0];
    let foot = ChartPoint::new(a[0], a[1], a[2], a[3]);
    let b = TangentVector(h.beta.eval(t, 0)?[0]);
    let g = TangentVector(h.gamma.eval(t, 0)?[0]);
    Ok(vec![h.metric.inner(&foot, &b, &b)?, h.metric.inner(&foot, &g, &g)?])
}

fn verify_point(h: &RuledHypersurface, u: Params, opts: &VerifyOptions) -> DiscrepancyReport {
    let mut pt = Point {
        u,
        opts,
        out: DiscrepancyReport::default(),
    };
    let sample = match generic::sample(&h.metric, h, u, opts.step) {
        Ok(s) => s,
        Err(e) => {
            // nothing can be evaluated at this point on either side
            pt.record("parameters", Err(e.clone()), Err(e));
            return pt.out;
        }
    };
    let target = h.kind.target();
    let m = sample.first_matrix;

    // first fundamental form
    let coef = h.frame(u).map(|fr| ruled::coefficients(&fr));
    let ff = ruled::first_form_closed(h, u);
    pt.record(
        "coefficients",
        lift(&coef, |c| vec![c.a, c.b, c.c, c.e]),
        Ok(vec![m[0][0], m[0][1], m[0][2], m[1][2]]),
    );
    pt.record(
        "first_form.matrix",
        lift(&ff, |f| flat(&f.form.matrix)),
        lift(&sample.first, |f| flat(&f.matrix)),
    );
    pt.record(
        "first_form.det",
        lift(&ff, |f| vec![f.det_closed, f.det_direct]),
        lift(&sample.first, |f| vec![f.det, f.det]),
    );
    pt.adjudicate(
        "first_form.twist_sign",
        both(&literal::twisted_coefficients(h, u), &coef, |tw, c| {
            vec![("printed", tw.to_vec()), ("symmetric", vec![c.b, c.c])]
        }),
        Ok(vec![m[0][1], m[0][2]]),
    );

    // Gauss map
    let gm = ruled::gauss_map_closed(h, u);
    pt.record(
        "gauss_map.components",
        lift(&gm, |g| g.components.to_vec()),
        lift(&sample.gauss, |g| g.raw.0.to_vec()),
    );
    pt.record(
        "gauss_map.normalizer",
        lift(&gm, |g| vec![g.normalizer]),
        oracle_normal_scale(&sample).map(|x| vec![x]),
    );
    pt.adjudicate(
        "gauss_map.third_component",
        both(&literal::gauss_third_from_proof(h, u), &gm, |p, g| {
            vec![("proof", vec![*p]), ("theorem", vec![g.components[2]])]
        }),
        lift(&sample.gauss, |g| vec![g.raw.0[2]]),
    );

    // second fundamental form
    let mut hs = ruled::second_form_closed(h, u);
    if opts.inject_fault {
        if let Ok(s) = hs.as_mut() {
            s.0[0][0] = s.0[0][0] * 1.01 + 1e-3;
        }
    }
    pt.record(
        "second_form.matrix",
        lift(&hs, |s| flat(&s.0)),
        lift(&sample.second, |s| flat(&s.0)),
    );
    pt.adjudicate(
        "second_form.normalizer",
        both(&literal::second_form_normalizer(h, u), &gm, |p, g| {
            vec![("without factor 2", vec![*p]), ("with factor 2", vec![g.normalizer])]
        }),
        oracle_normal_scale(&sample).map(|x| vec![x]),
    );
    let entry = |i: usize, j: usize| lift(&sample.second, |s| vec![s.0[i][j]]);
    pt.adjudicate(
        "second_form.h12_ruling_sign",
        both(
            &literal::h12_with_ruling_sign(h, u, -1.0),
            &literal::h12_with_ruling_sign(h, u, 1.0),
            |m, p| vec![("minus", vec![*m]), ("plus", vec![*p])],
        ),
        entry(0, 1),
    );
    pt.adjudicate(
        "second_form.h11_connection_power",
        both(
            &literal::h11_with_connection_power(h, u, 1),
            &literal::h11_with_connection_power(h, u, 2),
            |l, q| vec![("linear", vec![*l]), ("quadratic", vec![*q])],
        ),
        entry(0, 0),
    );
    pt.adjudicate(
        "second_form.normal_pairing",
        both(&literal::h13_with_half_pairing(h, u), &hs, |p, s| {
            vec![("half pairing", vec![*p]), ("full metric pairing", vec![s.0[0][2]])]
        }),
        entry(0, 2),
    );

    // flatness
    pt.record(
        "flatness.det_h",
        ruled::flatness_check(h, u).map(|f| vec![f.det_h]),
        lift(&sample.second, |s| vec![linalg::det3(&s.0)]),
    );

    // minimality: the residual is A · det g · trace S
    let oracle_residual = both(&sample.first, &oracle_normal_scale(&sample), |f, a| (f.det, *a))
        .and_then(|(det, a)| Ok(vec![a * det * sample.trace()?]));
    let general = ruled::minimality_residual(h, u, MinimalityVariant::General);
    pt.record(
        "minimality.residual",
        lift(&general, |m| vec![m.value]),
        oracle_residual.clone(),
    );
    pt.adjudicate(
        "minimality.residual",
        both(&literal::minimality_residual(h, u), &general, |p, m| {
            vec![("printed", vec![*p]), ("adjugate contraction", vec![m.value])]
        }),
        oracle_residual.clone(),
    );
    let orth = ruled::minimality_residual(h, u, MinimalityVariant::OrthogonalDirectors);
    if applicable(&orth) {
        pt.record(
            "minimality.orthogonal",
            lift(&orth, |m| vec![m.value]),
            oracle_residual.clone(),
        );
        pt.adjudicate(
            "minimality.orthogonal",
            both(&literal::minimality_orthogonal(h, u), &orth, |p, m| {
                vec![("printed", vec![*p]), ("adjugate contraction", vec![m.value])]
            }),
            oracle_residual,
        );
    }

    // Laplace-Beltrami
    let lb = ruled::lb_closed(h, u);
    if applicable(&lb) {
        let fd = generic::laplace_beltrami(&h.metric, h, u, DEFAULT_LB_STEP).map(|v| v.to_vec());
        pt.record("laplace_beltrami", lift(&lb, |v| v.to_vec()), fd.clone());
        pt.adjudicate(
            "laplace_beltrami.expansion",
            both(&literal::laplace_beltrami(h, u), &lb, |p, c| {
                vec![("printed", p.to_vec()), ("divergence form", c.to_vec())]
            }),
            fd.clone(),
        );
        pt.adjudicate(
            "laplace_beltrami.derivative_weight",
            both(&ruled::lb_weighted(h, u, 1.0), &lb, |one, half| {
                vec![("one", one.to_vec()), ("one half", half.to_vec())]
            }),
            fd,
        );
    }

    // directors
    let norms = director_norms(h, u[0]);
    pt.record("director.norms", Ok(vec![target, target]), norms.clone());
    if h.kind == RuledType::Type3 {
        pt.adjudicate(
            "laplace_beltrami.determinant_exponent",
            both(
                &literal::null_determinant(h, u, 22),
                &literal::null_determinant(h, u, 2),
                |p, q| vec![("22", vec![*p]), ("2", vec![*q])],
            ),
            lift(&sample.first, |f| vec![f.det]),
        );
        pt.adjudicate(
            "director.null_target",
            Ok(vec![("-1", vec![-1.0, -1.0]), ("0", vec![0.0, 0.0])]),
            norms,
        );
    }

    pt.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::report::Verdict;
    use crate::ruled::fixtures::*;

    fn points(n: usize) -> Vec<Params> {
        (0..n)
            .map(|k| {
                let x = k as f64 / n as f64;
                [x - 0.5, 0.9 * (x * 7.0).sin(), 0.8 * (x * 3.0).cos() - 0.2]
            })
            .collect()
    }

    #[test]
    fn e0_matches_everywhere() {
        let report = verify_fixture(&e0(), &points(10), &ToleranceTable::shipped());
        assert_eq!(report.count(Verdict::Mismatch), 0, "{}", report.render());
        assert_eq!(report.count(Verdict::BothDegenerate), 0);
    }

    #[test]
    fn curved_fixtures_match_and_adopted_readings_win() {
        for h in [e3(), curved_type1(), curved_type2(), curved_type3()] {
            let report = verify_fixture(&h, &points(12), &ToleranceTable::shipped());
            let text = report.render();
            println!("{:?}\n{text}", h.kind);
            assert!(!report.has_mismatch(), "{text}");
            for s in report.summaries() {
                if let Some(r) = s.consistent_reading() {
                    assert_eq!(r, s.adopted, "{}: {text}", s.formula);
                }
            }
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let opts = VerifyOptions {
            inject_fault: true,
            ..VerifyOptions::default()
        };
        let report = verify_fixture_with(&curved_type1(), &points(3), &opts);
        assert!(report.mismatches().all(|r| r.formula == "second_form.matrix"));
        assert_eq!(report.count(Verdict::Mismatch), 3);
    }

    #[test]
    fn deterministic_under_parallelism() {
        let a = verify_fixture(&curved_type2(), &points(20), &ToleranceTable::shipped());
        let b = verify_fixture(&curved_type2(), &points(20), &ToleranceTable::shipped());
        assert_eq!(a, b);
    }
}

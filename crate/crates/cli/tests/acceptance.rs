use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walker_ruled::linalg::{det3, max_abs3};
use walker_ruled::oracle::{christoffels_generic, laplace_beltrami, sample, DEFAULT_STEP};
use walker_ruled::ruled::{
    construct, first_form_closed, flatness_check, gauss_map_closed, lb_closed, minimality_residual, MinimalityVariant,
};
use walker_ruled::walker::inner_with;
use walker_ruled::{
    ChartPoint, CurveJet, GeometryError, Hypersurface, Params, RuledHypersurface, RuledType, ScalarField2,
    TangentVector, WalkerMetric,
};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn num(x: f64) -> String {
    format!("({x:.12})")
}

fn uniform<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
}

fn nonzero(rng: &mut ChaCha8Rng) -> f64 {
    let m = rng.gen_range(0.5..1.5);
    if rng.gen::<bool>() {
        m
    } else {
        -m
    }
}

fn random_field(rng: &mut ChaCha8Rng) -> String {
    let c: [f64; 9] = uniform(rng);
    format!(
        "{} + {}*u3 + {}*u4 + {}*u3*u4 + {}*u3^2 + {}*u4^3 + {}*sin({}*u3 + u4) + {}*cos(u3)*exp(0.5*u4)",
        num(c[0]),
        num(c[1]),
        num(c[2]),
        num(c[3]),
        num(c[4]),
        num(c[5]),
        num(c[6]),
        num(2.0 * c[7]),
        num(c[8])
    )
}

fn random_base(rng: &mut ChaCha8Rng, linear: bool) -> String {
    (0..4)
        .map(|_| {
            let c: [f64; 3] = uniform(rng);
            if linear {
                format!("{} + {}*t", num(c[0]), num(c[1]))
            } else {
                format!("{} + {}*t + {}*sin(t)", num(c[0]), num(c[1]), num(c[2]))
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Director with `g(X, X) = target` whatever `f` is; `pattern` selects
/// which components vanish.
fn random_director(rng: &mut ChaCha8Rng, target: f64, pattern: u8, constant: bool) -> String {
    let q = nonzero(rng);
    let k = if constant { 0.0 } else { rng.gen_range(-0.5..0.5) };
    let c: [f64; 2] = uniform(rng);
    let lin = if constant {
        num(c[0])
    } else {
        format!("{} + {}*t", num(c[0]), num(c[1]))
    };
    let grow = format!("{}*exp({}*t)", num(q), num(k));
    let shrink = format!("{}*exp({}*t)", num(target / (2.0 * q)), num(-k));
    if target == 0.0 {
        match pattern % 3 {
            0 => format!("{lin}, {grow}, 0, 0"),
            1 => format!("{lin}, 0, 0, {grow}"),
            _ => format!("0, {lin}, {grow}, 0"),
        }
    } else if pattern.is_multiple_of(2) {
        format!("{lin}, {grow}, 0, {shrink}")
    } else {
        format!("{shrink}, {lin}, {grow}, 0")
    }
}

fn build(kind: RuledType, f: &str, alpha: &str, beta: &str, gamma: &str) -> RuledHypersurface {
    construct(
        kind,
        CurveJet::parse(alpha).unwrap(),
        CurveJet::parse(beta).unwrap(),
        CurveJet::parse(gamma).unwrap(),
        ScalarField2::parse(f).unwrap(),
        &[-1.0, 0.0, 1.0],
    )
    .unwrap()
}

enum FieldKind {
    Random,
    Constant,
}

/// Random admissible scene; with `affine` the base curve is linear and the
/// directors constant.
fn random_scene(rng: &mut ChaCha8Rng, kind: RuledType, field: FieldKind, affine: bool) -> RuledHypersurface {
    let f = match field {
        FieldKind::Random => random_field(rng),
        FieldKind::Constant => num(rng.gen_range(-2.0..2.0)),
    };
    let target = kind.target();
    let p1: u8 = rng.gen();
    let mut p2: u8 = rng.gen();
    if target == 0.0 && p1 % 3 == p2 % 3 {
        p2 = p2 % 3 + 1;
    }
    let alpha = random_base(rng, affine);
    let beta = random_director(rng, target, p1, affine);
    let gamma = random_director(rng, target, p2, affine);
    build(kind, &f, &alpha, &beta, &gamma)
}

/// Type 1 or 2 with `g(β, γ) ≡ 0` under a constant field `c`:
/// `β = (ε/2r, 0, r, 0)`, `γ = (-c w, ε/2w, 0, w)`.
fn orthogonal_scene(rng: &mut ChaCha8Rng, kind: RuledType) -> RuledHypersurface {
    let eps = kind.target();
    let c = rng.gen_range(-1.5..1.5);
    let (q1, k1, q2, k2) = (
        nonzero(rng),
        rng.gen_range(-0.5..0.5),
        nonzero(rng),
        rng.gen_range(-0.5..0.5),
    );
    let r = format!("{}*exp({}*t)", num(q1), num(k1));
    let beta = format!("{}*exp({}*t), 0, {r}, 0", num(eps / (2.0 * q1)), num(-k1));
    let gamma = format!(
        "{}*exp({}*t), {}*exp({}*t), 0, {}*exp({}*t)",
        num(-c * q2),
        num(k2),
        num(eps / (2.0 * q2)),
        num(-k2),
        num(q2),
        num(k2)
    );
    let alpha = random_base(rng, false);
    build(kind, &num(c), &alpha, &beta, &gamma)
}

fn kind_of(i: usize) -> RuledType {
    RuledType::from_index((i % 3) as u8 + 1).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn e0() -> RuledHypersurface {
    build(RuledType::Type1, "0", "t, 0, 0, 0", "0.5, 0, 1, 0", "0, 0.5, 0, 1")
}

fn first_form_well_conditioned(h: &RuledHypersurface, u: Params, ratio: f64) -> bool {
    match sample(&h.metric, h, u, DEFAULT_STEP) {
        Ok(s) => det3(&s.first_matrix).abs() >= ratio * max_abs3(&s.first_matrix).max(1.0).powi(3),
        Err(_) => false,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_main, mut worst_other) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let m = WalkerMetric::new(ScalarField2::parse(&random_field(&mut rng)).unwrap());
        for _ in 0..20 {
            let p = ChartPoint(uniform(&mut rng));
            let closed = m.christoffels_closed(&p).map_err(|e| e.to_string())?.to_table();
            let generic = christoffels_generic(&m, &p, DEFAULT_STEP).map_err(|e| e.to_string())?;
            for ((idx, a), (_, b)) in closed.symbols().zip(generic.symbols()) {
                if idx == (1, 2, 2) || idx == (0, 3, 3) {
                    worst_main = worst_main.max((a - b).abs());
                } else {
                    worst_other = worst_other.max(a.abs()).max(b.abs());
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("max error {worst_main:.2e}, other symbols {worst_other:.2e}, {secs:.2} s");
    if worst_main < 1e-6 && worst_other < 1e-7 && secs < 5.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut duality, mut ortho) = (0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let m = WalkerMetric::new(ScalarField2::parse(&random_field(&mut rng)).unwrap());
        let p = ChartPoint(uniform(&mut rng));
        let [u, v, w, x] = [0; 4].map(|_| TangentVector(uniform(&mut rng)));
        let n = m.triple_product(&p, &u, &v, &w).map_err(|e| e.to_string())?;
        let f = m.field_value(&p).map_err(|e| e.to_string())?;
        for probe in [&u, &v, &w, &x] {
            let rows = [probe, &u, &v, &w];
            let det = Matrix4::from_fn(|r, c| rows[r].0[c]).determinant();
            duality = duality.max((inner_with(f, &n, probe) - det).abs());
        }
        for t in [&u, &v, &w] {
            ortho = ortho.max(inner_with(f, &n, t).abs());
        }
    }
    let detail = format!("sign +1, duality residual {duality:.2e}, orthogonality residual {ortho:.2e}");
    if duality < 1e-9 && ortho < 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut coef, mut diag, mut det) = (0.0_f64, 0.0_f64, 0.0_f64);
    for n in 1..=3u8 {
        let kind = RuledType::from_index(n).unwrap();
        let mut done = 0;
        while done < 100 {
            let h = random_scene(&mut rng, kind, FieldKind::Random, false);
            let u = uniform(&mut rng);
            let closed = match first_form_closed(&h, u) {
                Ok(c) => c,
                Err(GeometryError::DegenerateMetric { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let g = sample(&h.metric, &h, u, DEFAULT_STEP)
                .map_err(|e| e.to_string())?
                .first_matrix;
            let cs = closed.coefficients;
            for (x, y) in [(cs.a, g[0][0]), (cs.b, g[0][1]), (cs.c, g[0][2]), (cs.e, g[1][2])] {
                coef = coef.max((x - y).abs());
            }
            let t = kind.target();
            for y in [closed.form.matrix[1][1], closed.form.matrix[2][2], g[1][1], g[2][2]] {
                diag = diag.max((y - t).abs());
            }
            det = det
                .max((closed.det_closed - closed.det_direct).abs())
                .max((closed.det_closed - det3(&g)).abs());
            done += 1;
        }
    }
    let detail = format!("300 fixtures: coefficients {coef:.2e}, diagonals {diag:.2e}, determinants {det:.2e}");
    if coef < 1e-10 && diag < 1e-10 && det < 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn unit(v: &[f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    let mut done = 0;
    let mut attempt = 0;
    while done < 100 {
        let h = random_scene(&mut rng, kind_of(attempt), FieldKind::Random, false);
        attempt += 1;
        let u = uniform(&mut rng);
        let (Ok(closed), Ok(generic)) = (gauss_map_closed(&h, u), Hypersurface::new(&h.metric, &h).gauss_map(u)) else {
            continue;
        };
        let (a, b) = (unit(&closed.components), unit(&generic.raw.0));
        let plus = (0..4).fold(0.0_f64, |m, i| m.max((a[i] - b[i]).abs()));
        let minus = (0..4).fold(0.0_f64, |m, i| m.max((a[i] + b[i]).abs()));
        worst = worst.max(plus.min(minus));
        done += 1;
    }
    let g = gauss_map_closed(&e0(), [0.0; 3]).map_err(|e| e.to_string())?.components;
    let e0_err = max_abs(&[g[0], g[1] - 0.5, g[2], g[3] + 1.0]);
    let detail = format!("collinearity residual {worst:.2e} over 100 samples, E0 error {e0_err:.2e}");
    if worst < 1e-8 && e0_err < 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut det_h, mut gauss) = (0.0_f64, 0.0_f64);
    let (mut evaluated, mut skipped) = (0, 0);
    let axis = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
    for i in 0..20 {
        let h = random_scene(&mut rng, kind_of(i), FieldKind::Constant, false);
        let surface = Hypersurface::new(&h.metric, &h);
        for &u1 in &axis {
            for &u2 in &axis {
                for &u3 in &axis {
                    let u = [u1, u2, u3];
                    match (flatness_check(&h, u), surface.invariants(u)) {
                        (Ok(f), Ok(inv)) => {
                            det_h = det_h.max(f.det_h.abs());
                            gauss = gauss.max(inv.gaussian.abs());
                            evaluated += 1;
                        }
                        _ => skipped += 1,
                    }
                }
            }
        }
    }
    let detail =
        format!("20 scenes, {evaluated} grid points ({skipped} degenerate): |det h| {det_h:.2e}, |K| {gauss:.2e}");
    if det_h < 1e-9 && gauss < 1e-9 && evaluated >= 1000 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut points, mut zero_pts, mut disagreements, mut sign_breaks, mut factor_err) = (0, 0, 0, 0, 0.0_f64);
    let mut segment = 0;
    while points < 200 {
        let affine = segment % 4 == 3;
        let field = if affine { FieldKind::Constant } else { FieldKind::Random };
        let h = random_scene(&mut rng, kind_of(segment), field, affine);
        segment += 1;
        let base: [f64; 3] = uniform(&mut rng);
        let dir = unit(&[
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            0.0,
        ]);
        let mut evaluated = Vec::new();
        for s in 0..5 {
            let u = std::array::from_fn(|i| base[i] + 0.005 * s as f64 * dir[i]);
            if !first_form_well_conditioned(&h, u, 1e-6) {
                break;
            }
            let res = minimality_residual(&h, u, MinimalityVariant::General);
            let trace = sample(&h.metric, &h, u, DEFAULT_STEP).and_then(|s| s.trace());
            match (res, trace) {
                (Ok(r), Ok(t)) => evaluated.push((r, t)),
                _ => break,
            }
        }
        if evaluated.len() < 5 {
            continue;
        }
        let mut signs = Vec::new();
        for (r, t) in &evaluated {
            points += 1;
            let trace_zero = t.abs() <= 1e-9;
            let residual_zero = r.value.abs() <= 1e-9 * r.normalizer.abs();
            if trace_zero != residual_zero {
                disagreements += 1;
            }
            if trace_zero {
                zero_pts += 1;
            } else if r.value != 0.0 {
                let factor = r.value / t;
                factor_err = factor_err.max((factor / r.normalizer - 1.0).abs());
                signs.push(factor > 0.0);
            }
        }
        if signs.windows(2).any(|w| w[0] != w[1]) {
            sign_breaks += 1;
        }
    }
    let e0_ok = [[0.0, 0.0, 0.0], [0.5, -1.0, 2.0]].iter().all(|&u| {
        let r = minimality_residual(&e0(), u, MinimalityVariant::General).unwrap();
        let t = sample(&e0().metric, &e0(), u, DEFAULT_STEP).unwrap().trace().unwrap();
        r.value == 0.0 && t == 0.0
    });
    let detail = format!(
        "{points} points ({zero_pts} minimal), {disagreements} zero-set disagreements, factor = A det g to {factor_err:.1e}, \
         {sign_breaks} sign changes along connected segments, E0 identically zero: {e0_ok}"
    );
    if disagreements == 0 && sign_breaks == 0 && factor_err < 1e-4 && zero_pts >= 40 && e0_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    let mut done = 0;
    let mut attempt = 0;
    while done < 50 {
        let kind = if attempt % 2 == 0 {
            RuledType::Type1
        } else {
            RuledType::Type2
        };
        attempt += 1;
        let h = orthogonal_scene(&mut rng, kind);
        let u = uniform(&mut rng);
        if !first_form_well_conditioned(&h, u, 1e-2) {
            continue;
        }
        let closed = lb_closed(&h, u).map_err(|e| e.to_string())?;
        let fd = laplace_beltrami(&h.metric, &h, u, DEFAULT_STEP).map_err(|e| e.to_string())?;
        let diff: Vec<f64> = closed.iter().zip(&fd).map(|(a, b)| a - b).collect();
        worst = worst.max(max_abs(&diff) / max_abs(&fd).max(1.0));
        done += 1;
    }
    let h = e0();
    let zeros = [[0.0, 0.0, 0.0], [0.3, -0.7, 1.1]].iter().all(|&u| {
        lb_closed(&h, u).unwrap() == [0.0; 4] && laplace_beltrami(&h.metric, &h, u, DEFAULT_STEP).unwrap() == [0.0; 4]
    });
    let detail = format!("50 orthogonal fixtures: max relative error {worst:.2e}; E0 exact zeros: {zeros}");
    if worst < 1e-5 && zeros {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn suite() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("suite");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_walker-ruled"))
}

fn criterion_8() -> Outcome {
    let files = suite();
    let out = binary()
        .arg("verify")
        .arg("--config")
        .args(&files)
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let summary = text.split("== suite").nth(1).ok_or("no suite summary")?;
    let required = [
        ("second_form.h12_ruling_sign", "consistent reading: plus (adopted)"),
        ("second_form.normalizer", "consistent reading: with factor 2 (adopted)"),
        (
            "laplace_beltrami.determinant_exponent",
            "consistent reading: 2 (adopted)",
        ),
        ("director.null_target", "consistent reading: 0 (adopted)"),
    ];
    let missing: Vec<&str> = required
        .iter()
        .filter(|(id, reading)| {
            !summary
                .lines()
                .any(|l| l.trim_start().starts_with(id) && l.contains(reading))
        })
        .map(|(id, _)| *id)
        .collect();
    let detail = format!(
        "{} scenes, exit {:?}, missing adjudications {missing:?}",
        files.len(),
        out.status.code()
    );
    if out.status.code() == Some(0) && missing.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9() -> Outcome {
    let config = suite()
        .into_iter()
        .find(|p| p.ends_with("curved_type2.toml"))
        .ok_or("missing scene")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (i, (format, threads)) in [("csv", "1"), ("csv", "4"), ("json", "1"), ("json", "4")]
        .iter()
        .enumerate()
    {
        let path = dir.path().join(format!("run{i}.{format}"));
        let status = binary()
            .env("RAYON_NUM_THREADS", threads)
            .args(["invariants", "--format", format, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("invariants exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let detail = format!(
        "csv {} bytes, json {} bytes, 1 vs 4 threads",
        outputs[0].len(),
        outputs[2].len()
    );
    if outputs[0] == outputs[1] && outputs[2] == outputs[3] && !outputs[0].is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("Christoffel agreement", criterion_1),
        ("triple-product duality", criterion_2),
        ("closed-vs-generic first form", criterion_3),
        ("Gauss map collinearity", criterion_4),
        ("flatness for constant f", criterion_5),
        ("minimality zero-set equivalence", criterion_6),
        ("Laplace-Beltrami cross-check", criterion_7),
        ("discrepancy audit", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

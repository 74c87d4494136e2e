use walker_ruled::oracle::{check_golden, parse_golden, pin_golden, VerifyOptions};
use walker_ruled::ruled::construct;
use walker_ruled::{CurveJet, GeometryError, RuledHypersurface, RuledType, ScalarField2};

fn build(kind: RuledType, f: &str, a: &str, b: &str, g: &str) -> RuledHypersurface {
    construct(
        kind,
        CurveJet::parse(a).unwrap(),
        CurveJet::parse(b).unwrap(),
        CurveJet::parse(g).unwrap(),
        ScalarField2::parse(f).unwrap(),
        &[0.0],
    )
    .unwrap()
}

fn e0() -> RuledHypersurface {
    build(RuledType::Type1, "0", "t,0,0,0", "0.5,0,1,0", "0,0.5,0,1")
}

fn e3() -> RuledHypersurface {
    build(RuledType::Type3, "0", "0,0,t,0", "1,0,0,0", "1,-1,1,1")
}

const POINTS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [0.5, -0.25, 1.0], [-1.0, 0.75, 0.1]];

#[test]
fn e0_golden_values() {
    let text = pin_golden(&e0(), &POINTS, &VerifyOptions::default()).unwrap();
    assert!(text.starts_with("# provenance: oracle v"));
    let entries = parse_golden(&text).unwrap();
    assert_eq!(entries.len(), 5 * POINTS.len());
    for e in &entries {
        let expected: &[f64] = match e.formula.as_str() {
            "first_form.det" => &[-1.0],
            "gauss_map.raw" => &[0.0, 0.5, 0.0, -1.0],
            _ => &[0.0],
        };
        assert_eq!(e.values.len(), expected.len(), "{}", e.formula);
        for (v, x) in e.values.iter().zip(expected) {
            assert!((v - x).abs() < 1e-12, "{} {:?}", e.formula, e.values);
        }
    }
    assert!(check_golden(&e0(), &entries, 1e-4).is_empty());
}

#[test]
fn e3_first_form_determinant() {
    let text = pin_golden(&e3(), &POINTS[..1], &VerifyOptions::default()).unwrap();
    let entries = parse_golden(&text).unwrap();
    let det = entries.iter().find(|e| e.formula == "first_form.det").unwrap();
    assert!((det.values[0] - 2.0).abs() < 1e-12);
}

#[test]
fn empty_point_list_is_rejected() {
    assert!(matches!(
        pin_golden(&e0(), &[], &VerifyOptions::default()),
        Err(GeometryError::Argument(_))
    ));
}

#[test]
fn injected_fault_blocks_pinning() {
    let h = build(
        RuledType::Type3,
        "u3*u4",
        "0.3*t, 2*sin(t), t, 0.5 + t^2",
        "0, 1 + 0.2*t, 1 + t^2, 0",
        "exp(0.3*t), 0, 0, 1 - 0.4*t",
    );
    let opts = VerifyOptions {
        inject_fault: true,
        ..VerifyOptions::default()
    };
    assert!(pin_golden(&h, &POINTS, &VerifyOptions::default()).is_ok());
    assert!(pin_golden(&h, &POINTS, &opts).is_err());
}

#[test]
fn tampered_values_are_detected() {
    let text = pin_golden(&e3(), &POINTS, &VerifyOptions::default()).unwrap();
    let mut entries = parse_golden(&text).unwrap();
    entries[0].values[0] += 1e-3;
    let failures = check_golden(&e3(), &entries, 1e-4);
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].0.formula, entries[0].formula);
}

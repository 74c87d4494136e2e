#![allow(dead_code)]

use walker_ruled::ruled::construct;
use walker_ruled::{CurveJet, Params, RuledHypersurface, RuledType, ScalarField2};

pub fn num(x: f64) -> String {
    format!("({x:.12})")
}

/// Nonzero scale in `±[0.5, 1.5]` from a coefficient in `[-1, 1]`.
pub fn scale(c: f64) -> f64 {
    let m = 0.5 + c.abs();
    if c < 0.0 {
        -m
    } else {
        m
    }
}

/// Director with `g(X, X) = target` independently of `f`: one of the
/// components multiplying `f` in the norm always vanishes.
pub fn director(target: f64, pattern: u8, c: &[f64]) -> String {
    let q = scale(c[0]);
    let k = 0.5 * c[1];
    let lin = format!("{} + {}*t", num(c[2]), num(c[3]));
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

pub fn base_curve(c: &[f64]) -> String {
    (0..4)
        .map(|i| {
            format!(
                "{} + {}*t + {}*sin(t)",
                num(c[3 * i]),
                num(c[3 * i + 1]),
                num(c[3 * i + 2])
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn field(constant: bool, c: &[f64]) -> String {
    if constant {
        num(2.0 * c[0])
    } else {
        format!(
            "{} + {}*u3 + {}*u4 + {}*u3*u4 + {}*sin(u3 + {}*u4)",
            num(c[0]),
            num(c[1]),
            num(c[2]),
            num(c[3]),
            num(c[4]),
            num(c[5])
        )
    }
}

pub fn kind(n: u8) -> RuledType {
    RuledType::from_index(n % 3 + 1).unwrap()
}

/// Random admissible scene from 32 coefficients in `[-1, 1]`.
pub fn scene(kind: RuledType, constant_field: bool, patterns: (u8, u8), c: &[f64; 32]) -> RuledHypersurface {
    let target = kind.target();
    // null directors sharing a totally null plane would make g(β, γ) vanish
    let second = if target == 0.0 && patterns.0 % 3 == patterns.1 % 3 {
        patterns.1 % 3 + 1
    } else {
        patterns.1
    };
    construct(
        kind,
        CurveJet::parse(&base_curve(&c[0..12])).unwrap(),
        CurveJet::parse(&director(target, patterns.0, &c[12..16])).unwrap(),
        CurveJet::parse(&director(target, second, &c[16..20])).unwrap(),
        ScalarField2::parse(&field(constant_field, &c[20..26])).unwrap(),
        &[-1.0, 0.0, 1.0],
    )
    .unwrap()
}

pub fn point(c: &[f64; 32]) -> Params {
    [c[26], c[27], c[28]]
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

//! Number formatting shared by every output: 17 significant digits, which
//! round-trips any `f64`.

pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        x.to_string()
    }
}

pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        number(x)
    } else {
        "null".into()
    }
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn vector(v: &[f64]) -> String {
    v.iter().map(|&x| number(x)).collect::<Vec<_>>().join(" ")
}

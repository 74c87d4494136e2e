use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use walker_ruled::hypersurface::first_form_matrix;
use walker_ruled::linalg::det3;
use walker_ruled::ruled::{minimality_residual, MinimalityVariant};
use walker_ruled::{CausalCharacter, GeometryError, Hypersurface, Immersion, Params, RuledHypersurface};

use crate::error::CliError;
use crate::format::{json_number, json_string, number};

pub const COLUMNS: [&str; 9] = [
    "u1",
    "u2",
    "u3",
    "det_g",
    "K",
    "H",
    "normal_char",
    "min_residual",
    "error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub u: Params,
    pub det_g: Option<f64>,
    pub gaussian: Option<f64>,
    pub mean: Option<f64>,
    pub normal_char: Option<CausalCharacter>,
    pub min_residual: Option<f64>,
    pub errors: Vec<&'static str>,
}

impl Row {
    pub fn error(&self) -> String {
        self.errors.join(";")
    }
}

fn note(errors: &mut Vec<&'static str>, e: &GeometryError) {
    if !errors.contains(&e.kind()) {
        errors.push(e.kind());
    }
}

pub fn evaluate_point(h: &RuledHypersurface, u: Params) -> Row {
    let mut row = Row {
        u,
        det_g: None,
        gaussian: None,
        mean: None,
        normal_char: None,
        min_residual: None,
        errors: Vec::new(),
    };
    let det = h
        .jet(u)
        .and_then(|jet| Ok(det3(&first_form_matrix(h.metric.field_value(&jet.point)?, &jet.first))));
    match det {
        Ok(d) => row.det_g = Some(d),
        Err(e) => {
            note(&mut row.errors, &e);
            return row;
        }
    }
    let surface = Hypersurface::new(&h.metric, h);
    match surface.gauss_map(u) {
        Ok(g) => row.normal_char = Some(g.character),
        Err(GeometryError::DegenerateNormal { .. }) => row.normal_char = Some(CausalCharacter::Null),
        Err(_) => {}
    }
    match surface.invariants(u) {
        Ok(inv) => {
            row.gaussian = Some(inv.gaussian);
            row.mean = Some(inv.mean);
        }
        Err(e) => note(&mut row.errors, &e),
    }
    match minimality_residual(h, u, MinimalityVariant::General) {
        Ok(r) => row.min_residual = Some(r.value),
        Err(e) => note(&mut row.errors, &e),
    }
    row
}

/// Evaluates every grid point; rows keep the order of `points`.
pub fn evaluate(h: &RuledHypersurface, points: &[Params]) -> Vec<Row> {
    points.par_iter().map(|&u| evaluate_point(h, u)).collect()
}

fn cell(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut s = COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let fields = [
            number(r.u[0]),
            number(r.u[1]),
            number(r.u[2]),
            cell(r.det_g),
            cell(r.gaussian),
            cell(r.mean),
            r.normal_char.map(|c| c.as_str().to_string()).unwrap_or_default(),
            cell(r.min_residual),
            r.error(),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

pub fn to_json(rows: &[Row]) -> String {
    let opt = |x: Option<f64>| x.map(json_number).unwrap_or_else(|| "null".into());
    let mut s = String::from("[\n");
    for (i, r) in rows.iter().enumerate() {
        let values = [
            json_number(r.u[0]),
            json_number(r.u[1]),
            json_number(r.u[2]),
            opt(r.det_g),
            opt(r.gaussian),
            opt(r.mean),
            r.normal_char
                .map(|c| json_string(c.as_str()))
                .unwrap_or_else(|| "null".into()),
            opt(r.min_residual),
            json_string(&r.error()),
        ];
        let body: Vec<String> = COLUMNS
            .iter()
            .zip(values)
            .map(|(k, v)| format!("{}: {v}", json_string(k)))
            .collect();
        let _ = write!(s, "  {{{}}}", body.join(", "));
        s.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}

fn color(v: Option<f64>, scale: f64) -> [u8; 3] {
    match v {
        None => [128, 128, 128],
        Some(v) if !v.is_finite() => [128, 128, 128],
        Some(v) => {
            let x = if scale > 0.0 { (v / scale).clamp(-1.0, 1.0) } else { 0.0 };
            let fade = |t: f64| (255.0 * (1.0 - t.abs())).round() as u8;
            if x >= 0.0 {
                [255, fade(x), fade(x)]
            } else {
                [fade(x), fade(x), 255]
            }
        }
    }
}

/// Writes K (left) and H (right) over the `(u1, u2)` slice at the middle `u3`
/// grid value as a PNG heat map; red is positive, blue negative, grey marks
/// points where the value is undefined.
pub fn plot(rows: &[Row], counts: [usize; 3], path: &Path) -> Result<(), CliError> {
    let [n1, n2, n3] = counts;
    let mid = n3 / 2;
    let slice: Vec<&Row> = (0..n1 * n2).map(|k| &rows[k * n3 + mid]).collect();
    let cell = (256 / n1.max(n2)).max(1) as u32;
    let gap = 4;
    let (w, h) = (n1 as u32 * cell, n2 as u32 * cell);
    let mut img = image::RgbImage::from_pixel(2 * w + gap, h, image::Rgb([255, 255, 255]));
    let pick: [fn(&Row) -> Option<f64>; 2] = [|r| r.gaussian, |r| r.mean];
    for (panel, get) in pick.iter().enumerate() {
        let scale = slice
            .iter()
            .filter_map(|r| get(r))
            .filter(|v| v.is_finite())
            .fold(0.0, |m: f64, v| m.max(v.abs()));
        let x0 = panel as u32 * (w + gap);
        for i in 0..n1 {
            for j in 0..n2 {
                let rgb = color(get(slice[i * n2 + j]), scale);
                for dx in 0..cell {
                    for dy in 0..cell {
                        let y = h - 1 - (j as u32 * cell + dy);
                        img.put_pixel(x0 + i as u32 * cell + dx, y, image::Rgb(rgb));
                    }
                }
            }
        }
    }
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| CliError::Argument(format!("cannot write plot {}: {e}", path.display())))
}

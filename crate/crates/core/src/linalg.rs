//! Fixed-size matrix helpers. Everything here is small enough that explicit
//! cofactor formulas are the clearest implementation.

pub type Mat3 = [[f64; 3]; 3];
pub type Mat4 = [[f64; 4]; 4];

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate (transposed cofactor matrix), so that `m * adj3(m) = det3(m) I`.
pub fn adj3(m: &Mat3) -> Mat3 {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

pub fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn scale3(m: &Mat3, s: f64) -> Mat3 {
    m.map(|row| row.map(|x| x * s))
}

pub fn trace3(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn max_abs3(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Laplace expansion along the first row.
pub fn det4(m: &Mat4) -> f64 {
    let mut det = 0.0;
    for col in 0..4 {
        det += if col % 2 == 0 { 1.0 } else { -1.0 } * m[0][col] * det3(&minor4(m, 0, col));
    }
    det
}

pub fn minor4(m: &Mat4, row: usize, col: usize) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    let mut r = 0;
    for i in 0..4 {
        if i == row {
            continue;
        }
        let mut c = 0;
        for j in 0..4 {
            if j == col {
                continue;
            }
            out[r][c] = m[i][j];
            c += 1;
        }
        r += 1;
    }
    out
}

pub fn mat4_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm4_sq(a: &[f64; 4]) -> f64 {
    dot4(a, a)
}

//! The ambient Walker 4-manifold with metric
//!
//! ```text
//!        | 0 0 1 0 |
//!  g_f = | 0 0 0 1 |      f = f(u3, u4)
//!        | 1 0 0 f |
//!        | 0 1 f 0 |
//! ```
//!
//! Its inverse is `[[0,-f,1,0],[-f,0,0,1],[1,0,0,0],[0,1,0,0]]`, and the
//! determinant is identically one. The only non-vanishing Christoffel symbols
//! are `Γ²₃₃ = f₃` and `Γ¹₄₄ = f₄`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{GeometryError, Result};
use crate::jets::{FieldJet, ScalarField2};
use crate::linalg::{self, Mat4};

/// Null-classification tolerance, relative to `max(1, |u|²)` (Euclidean).
pub const NULL_TOLERANCE: f64 = 1e-9;

/// Chart coordinates `(u1, u2, u3, u4)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChartPoint(pub [f64; 4]);

impl ChartPoint {
    pub fn new(u1: f64, u2: f64, u3: f64, u4: f64) -> Self {
        ChartPoint([u1, u2, u3, u4])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn u3(&self) -> f64 {
        self.0[2]
    }

    pub fn u4(&self) -> f64 {
        self.0[3]
    }
}

/// Components of a tangent vector in the coordinate basis `∂1..∂4`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector(pub [f64; 4]);

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector([0.0; 4]);

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        TangentVector([x1, x2, x3, x4])
    }

    /// Coordinate basis vector `∂_{i+1}` (zero-based `i`).
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        TangentVector(v)
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        linalg::norm4_sq(&self.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for TangentVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    fn add(self, o: Self) -> Self {
        TangentVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, o: Self) -> Self {
        TangentVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> Self {
        TangentVector(self.0.map(|x| x * s))
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> Self {
        TangentVector(self.0.map(|x| -x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl CausalCharacter {
    pub fn as_str(&self) -> &'static str {
        match self {
            CausalCharacter::Spacelike => "Spacelike",
            CausalCharacter::Timelike => "Timelike",
            CausalCharacter::Null => "Null",
        }
    }
}

/// The 4×4 matrix of `g_f` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricMatrix(pub Mat4);

impl MetricMatrix {
    pub fn from_field_value(f: f64) -> Self {
        MetricMatrix([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, f],
            [0.0, 1.0, f, 0.0],
        ])
    }

    /// The field value stored in the (3,4) slot.
    pub fn f(&self) -> f64 {
        self.0[2][3]
    }

    /// The matrix that raises the cofactor vector in the triple product.
    pub fn inverse(&self) -> Mat4 {
        inverse_for(self.f())
    }

    pub fn det(&self) -> f64 {
        linalg::det4(&self.0)
    }
}

fn inverse_for(f: f64) -> Mat4 {
    [
        [0.0, -f, 1.0, 0.0],
        [-f, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
}

/// `g_f(u, v)` for a known value of `f`.
pub fn inner_with(f: f64, u: &TangentVector, v: &TangentVector) -> f64 {
    let (u, v) = (&u.0, &v.0);
    u[0] * v[2] + u[2] * v[0] + u[1] * v[3] + u[3] * v[1] + f * (u[2] * v[3] + u[3] * v[2])
}

/// Generalized cross product of three vectors: the cofactor expansion of the
/// formal determinant with rows `(∂, u, v, w)`, as a covector. For every `x`,
/// `x · cofactor(u, v, w) = det[x; u; v; w]`.
pub fn cofactor_vector(u: &TangentVector, v: &TangentVector, w: &TangentVector) -> [f64; 4] {
    let rows: Mat4 = [[0.0; 4], u.0, v.0, w.0];
    std::array::from_fn(|k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * linalg::det3(&linalg::minor4(&rows, 0, k))
    })
}

/// Triple vector product for a known value of `f`.
pub fn triple_with(f: f64, u: &TangentVector, v: &TangentVector, w: &TangentVector) -> TangentVector {
    TangentVector(linalg::mat4_vec(&inverse_for(f), &cofactor_vector(u, v, w)))
}

/// Classifies `g(u,u) = q` against the null tolerance scaled by `scale`.
pub fn classify(q: f64, scale: f64) -> CausalCharacter {
    if q.abs() <= NULL_TOLERANCE * scale.max(1.0) {
        CausalCharacter::Null
    } else if q > 0.0 {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    }
}

/// Sparse table of the two non-vanishing symbols of the Levi-Civita
/// connection.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WalkerChristoffels {
    /// Γ²₃₃ = f₃
    pub g2_33: f64,
    /// Γ¹₄₄ = f₄
    pub g1_44: f64,
}

impl WalkerChristoffels {
    pub fn from_jet(j: &FieldJet) -> Self {
        WalkerChristoffels {
            g2_33: j.f3,
            g1_44: j.f4,
        }
    }

    pub fn to_table(&self) -> ChristoffelTable {
        let mut t = ChristoffelTable::default();
        t.0[1][2][2] = self.g2_33;
        t.0[0][3][3] = self.g1_44;
        t
    }

    /// `Σ Γᵏᵢⱼ Xⁱ Yʲ ∂_k`.
    pub fn contract(&self, x: &TangentVector, y: &TangentVector) -> TangentVector {
        TangentVector([self.g1_44 * x[3] * y[3], self.g2_33 * x[2] * y[2], 0.0, 0.0])
    }
}

/// Dense Christoffel symbols, indexed `[k][i][j]` (zero-based) for `Γᵏᵢⱼ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChristoffelTable(pub [[[f64; 4]; 4]; 4]);

impl ChristoffelTable {
    /// The 40 independent symbols `(k, i, j)` with `i <= j`.
    pub fn symbols(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        (0..4).flat_map(move |k| (0..4).flat_map(move |i| (i..4).map(move |j| ((k, i, j), self.0[k][i][j]))))
    }
}

/// The Walker metric determined by a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerMetric {
    field: ScalarField2,
}

impl WalkerMetric {
    pub fn new(field: ScalarField2) -> Self {
        WalkerMetric { field }
    }

    pub fn field(&self) -> &ScalarField2 {
        &self.field
    }

    fn check_point(p: &ChartPoint) -> Result<()> {
        if p.is_finite() {
            Ok(())
        } else {
            Err(GeometryError::Argument(format!("non-finite chart point {:?}", p.0)))
        }
    }

    pub fn field_value(&self, p: &ChartPoint) -> Result<f64> {
        Self::check_point(p)?;
        self.field.value(p.u3(), p.u4())
    }

    pub fn field_jet(&self, p: &ChartPoint) -> Result<FieldJet> {
        Self::check_point(p)?;
        self.field.eval(p.u3(), p.u4())
    }

    pub fn metric_at(&self, p: &ChartPoint) -> Result<MetricMatrix> {
        Ok(MetricMatrix::from_field_value(self.field_value(p)?))
    }

    pub fn inner(&self, p: &ChartPoint, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        Ok(inner_with(self.field_value(p)?, u, v))
    }

    /// Causal character and magnitude `sqrt|g(u,u)|`.
    pub fn causal_character(&self, p: &ChartPoint, u: &TangentVector) -> Result<(CausalCharacter, f64)> {
        let scale = u.euclid_norm_sq();
        if scale == 0.0 {
            return Err(GeometryError::Argument("zero vector has no causal character".into()));
        }
        let q = self.inner(p, u, u)?;
        Ok((classify(q, scale), q.abs().sqrt()))
    }

    pub fn triple_product(
        &self,
        p: &ChartPoint,
        u: &TangentVector,
        v: &TangentVector,
        w: &TangentVector,
    ) -> Result<TangentVector> {
        Ok(triple_with(self.field_value(p)?, u, v, w))
    }

    pub fn christoffels_closed(&self, p: &ChartPoint) -> Result<WalkerChristoffels> {
        Ok(WalkerChristoffels::from_jet(&self.field_jet(p)?))
    }
}

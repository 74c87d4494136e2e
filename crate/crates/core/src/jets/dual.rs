use std::ops::{Add, Div, Mul, Neg, Sub};

/// Forward-mode dual number carrying a value and its gradient with respect to
/// the three surface parameters `(u1, u2, u3)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual3 {
    pub v: f64,
    pub d: [f64; 3],
}

impl Dual3 {
    pub const ZERO: Dual3 = Dual3 { v: 0.0, d: [0.0; 3] };

    pub fn new(v: f64, d: [f64; 3]) -> Self {
        Dual3 { v, d }
    }

    pub fn constant(v: f64) -> Self {
        Dual3 { v, d: [0.0; 3] }
    }

    pub fn powi(self, n: i32) -> Self {
        let scale = n as f64 * self.v.powi(n - 1);
        Dual3 {
            v: self.v.powi(n),
            d: self.d.map(|x| scale * x),
        }
    }
}

impl Add for Dual3 {
    type Output = Dual3;
    fn add(self, o: Dual3) -> Dual3 {
        Dual3 {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]],
        }
    }
}

impl Sub for Dual3 {
    type Output = Dual3;
    fn sub(self, o: Dual3) -> Dual3 {
        Dual3 {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1], self.d[2] - o.d[2]],
        }
    }
}

impl Mul for Dual3 {
    type Output = Dual3;
    fn mul(self, o: Dual3) -> Dual3 {
        Dual3 {
            v: self.v * o.v,
            d: [
                self.d[0] * o.v + self.v * o.d[0],
                self.d[1] * o.v + self.v * o.d[1],
                self.d[2] * o.v + self.v * o.d[2],
            ],
        }
    }
}

impl Div for Dual3 {
    type Output = Dual3;
    fn div(self, o: Dual3) -> Dual3 {
        let inv = 1.0 / o.v;
        Dual3 {
            v: self.v * inv,
            d: [
                (self.d[0] * o.v - self.v * o.d[0]) * inv * inv,
                (self.d[1] * o.v - self.v * o.d[1]) * inv * inv,
                (self.d[2] * o.v - self.v * o.d[2]) * inv * inv,
            ],
        }
    }
}

impl Mul<f64> for Dual3 {
    type Output = Dual3;
    fn mul(self, s: f64) -> Dual3 {
        Dual3 {
            v: self.v * s,
            d: self.d.map(|x| x * s),
        }
    }
}

impl Mul<Dual3> for f64 {
    type Output = Dual3;
    fn mul(self, o: Dual3) -> Dual3 {
        o * self
    }
}

impl Add<f64> for Dual3 {
    type Output = Dual3;
    fn add(self, s: f64) -> Dual3 {
        Dual3 {
            v: self.v + s,
            d: self.d,
        }
    }
}

impl Sub<Dual3> for f64 {
    type Output = Dual3;
    fn sub(self, o: Dual3) -> Dual3 {
        Dual3 {
            v: self - o.v,
            d: o.d.map(|x| -x),
        }
    }
}

impl Neg for Dual3 {
    type Output = Dual3;
    fn neg(self) -> Dual3 {
        Dual3 {
            v: -self.v,
            d: self.d.map(|x| -x),
        }
    }
}

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

/// Degree-2 truncated Taylor jet: value, first and second derivative with
/// respect to a single variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn is_constant(&self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0
    }

    /// Chain rule through a scalar function given its value and first two
    /// derivatives at `self.value`.
    #[inline]
    pub fn compose(self, g: f64, dg: f64, ddg: f64) -> Self {
        Self {
            value: g,
            d1: dg * self.d1,
            d2: ddg * self.d1 * self.d1 + dg * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        self.compose(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.value;
        self.compose(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s)
    }

    pub fn tanh(self) -> Self {
        let th = self.value.tanh();
        let sech2 = 1.0 - th * th;
        self.compose(th, sech2, -2.0 * th * sech2)
    }

    pub fn acosh(self) -> Self {
        let x = self.value;
        let q = x * x - 1.0;
        let rq = q.sqrt();
        self.compose(x.acosh(), 1.0 / rq, -x / (q * rq))
    }

    /// Power with a constant exponent. Integral exponents go through `powi`,
    /// which keeps polynomial jets exact and allows negative bases.
    pub fn powf(self, p: f64) -> Self {
        let x = self.value;
        if p == 0.0 {
            return Self::constant(1.0);
        }
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            let n = p as i32;
            let (g, dg, ddg) = match n {
                1 => (x, 1.0, 0.0),
                2 => (x * x, 2.0 * x, 2.0),
                _ => (x.powi(n), p * x.powi(n - 1), p * (p - 1.0) * x.powi(n - 2)),
            };
            return self.compose(g, dg, ddg);
        }
        self.compose(
            x.powf(p),
            p * x.powf(p - 1.0),
            p * (p - 1.0) * x.powf(p - 2.0),
        )
    }

    /// General power `self ^ exponent` for a non-constant exponent, via
    /// `exp(exponent * ln(self))`.
    pub fn pow(self, exponent: Jet2) -> Self {
        if exponent.is_constant() {
            return self.powf(exponent.value);
        }
        (exponent * self.ln()).exp()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, o: Jet2) -> Jet2 {
        if o.is_constant() {
            return Jet2::new(self.value / o.value, self.d1 / o.value, self.d2 / o.value);
        }
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, c: f64) -> Jet2 {
        Jet2::new(self.value * c, self.d1 * c, self.d2 * c)
    }
}

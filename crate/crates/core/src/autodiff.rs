//! Forward-mode second-order automatic differentiation over a fixed number
//! of variables, used for exact Hessians of small per-element functions.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number type the per-element kernels are written against.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(x: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(self) -> Self;
    /// Four-quadrant `atan2(self, x)`.
    fn atan2(self, x: Self) -> Self;
}

impl Scalar for f64 {
    fn constant(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
}

/// Value, gradient and Hessian with respect to `N` variables.
#[derive(Clone, Copy, Debug)]
pub struct Dual2<const N: usize> {
    pub v: f64,
    pub g: [f64; N],
    pub h: [[f64; N]; N],
}

impl<const N: usize> Dual2<N> {
    pub fn constant(v: f64) -> Self {
        Self {
            v,
            g: [0.0; N],
            h: [[0.0; N]; N],
        }
    }

    /// The `index`-th independent variable at `v`.
    pub fn variable(v: f64, index: usize) -> Self {
        let mut out = Self::constant(v);
        out.g[index] = 1.0;
        out
    }

    /// `f(self)` given `f`, `f'` and `f''` at `self.v`.
    fn chain(&self, f: f64, df: f64, ddf: f64) -> Self {
        let mut out = Self::constant(f);
        for a in 0..N {
            out.g[a] = df * self.g[a];
        }
        for a in 0..N {
            for b in 0..N {
                out.h[a][b] = df * self.h[a][b] + ddf * self.g[a] * self.g[b];
            }
        }
        out
    }

    fn recip(&self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl<const N: usize> Add for Dual2<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.v += rhs.v;
        for a in 0..N {
            self.g[a] += rhs.g[a];
            for b in 0..N {
                self.h[a][b] += rhs.h[a][b];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Dual2<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.v -= rhs.v;
        for a in 0..N {
            self.g[a] -= rhs.g[a];
            for b in 0..N {
                self.h[a][b] -= rhs.h[a][b];
            }
        }
        self
    }
}

impl<const N: usize> Neg for Dual2<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.v = -self.v;
        for a in 0..N {
            self.g[a] = -self.g[a];
            for b in 0..N {
                self.h[a][b] = -self.h[a][b];
            }
        }
        self
    }
}

impl<const N: usize> Mul for Dual2<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::constant(self.v * rhs.v);
        for a in 0..N {
            out.g[a] = self.v * rhs.g[a] + rhs.v * self.g[a];
        }
        for a in 0..N {
            for b in 0..N {
                out.h[a][b] = self.v * rhs.h[a][b]
                    + rhs.v * self.h[a][b]
                    + self.g[a] * rhs.g[b]
                    + rhs.g[a] * self.g[b];
            }
        }
        out
    }
}

impl<const N: usize> Div for Dual2<N> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<const N: usize> Scalar for Dual2<N> {
    fn constant(x: f64) -> Self {
        Dual2::constant(x)
    }

    fn value(&self) -> f64 {
        self.v
    }

    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    fn atan2(self, x: Self) -> Self {
        let y = self;
        let r2 = x.v * x.v + y.v * y.v;
        let (gy, gx) = (x.v / r2, -y.v / r2);
        let gxx = 2.0 * x.v * y.v / (r2 * r2);
        let gyy = -gxx;
        let gxy = (y.v * y.v - x.v * x.v) / (r2 * r2);
        let mut out = Self::constant(y.v.atan2(x.v));
        for a in 0..N {
            out.g[a] = gx * x.g[a] + gy * y.g[a];
        }
        for a in 0..N {
            for b in 0..N {
                out.h[a][b] = gx * x.h[a][b]
                    + gy * y.h[a][b]
                    + gxx * x.g[a] * x.g[b]
                    + gyy * y.g[a] * y.g[b]
                    + gxy * (x.g[a] * y.g[b] + y.g[a] * x.g[b]);
            }
        }
        out
    }
}

/// Small vector helpers over any [`Scalar`].
pub mod vec3 {
    use super::Scalar;

    pub type V<S> = [S; 3];

    pub fn sub<S: Scalar>(a: V<S>, b: V<S>) -> V<S> {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn dot<S: Scalar>(a: V<S>, b: V<S>) -> S {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross<S: Scalar>(a: V<S>, b: V<S>) -> V<S> {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn normalize<S: Scalar>(a: V<S>) -> V<S> {
        let n = dot(a, a).sqrt();
        [a[0] / n, a[1] / n, a[2] / n]
    }

    /// Hamilton product of `(re, im)` pairs.
    pub fn qmul<S: Scalar>(a: (S, V<S>), b: (S, V<S>)) -> (S, V<S>) {
        let c = cross(a.1, b.1);
        (
            a.0 * b.0 - dot(a.1, b.1),
            [
                a.0 * b.1[0] + b.0 * a.1[0] + c[0],
                a.0 * b.1[1] + b.0 * a.1[1] + c[1],
                a.0 * b.1[2] + b.0 * a.1[2] + c[2],
            ],
        )
    }
}

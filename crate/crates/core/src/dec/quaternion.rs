use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Vector3;

/// Quaternion `re + im`, with ℝ³ identified with the imaginary quaternions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub re: f64,
    pub im: Vector3<f64>,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        re: 1.0,
        im: Vector3::new(0.0, 0.0, 0.0),
    };

    pub fn new(re: f64, im: Vector3<f64>) -> Self {
        Self { re, im }
    }

    pub fn pure(v: Vector3<f64>) -> Self {
        Self { re: 0.0, im: v }
    }

    pub fn real(r: f64) -> Self {
        Self {
            re: r,
            im: Vector3::zeros(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.re * self.re + self.im.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn inverse(&self) -> Self {
        let n2 = self.norm_squared();
        let c = self.conj();
        Self {
            re: c.re / n2,
            im: c.im / n2,
        }
    }
}

/// `x⁻¹ = −x / |x|²` for a pure quaternion.
pub fn pure_inverse(x: &Vector3<f64>) -> Vector3<f64> {
    -x / x.norm_squared()
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            re: self.re * rhs.re - self.im.dot(&rhs.im),
            im: rhs.im * self.re + self.im * rhs.re + self.im.cross(&rhs.im),
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion {
            re: -self.re,
            im: -self.im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: [f64; 4]) -> Quaternion {
        Quaternion::new(a[0], Vector3::new(a[1], a[2], a[3]))
    }

    fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        // Componentwise table of the Hamilton product.
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    fn component() -> impl Strategy<Value = f64> {
        -3.0f64..3.0
    }

    fn quat() -> impl Strategy<Value = [f64; 4]> {
        [component(), component(), component(), component()]
    }

    proptest! {
        #[test]
        fn product_matches_componentwise_table(a in quat(), b in quat()) {
            let p = q(a) * q(b);
            let r = q(hamilton(a, b));
            prop_assert!(close(p, r, 1e-14));
        }

        #[test]
        fn product_of_pure_is_minus_dot_plus_cross(a in quat(), b in quat()) {
            let (u, v) = (Vector3::new(a[1], a[2], a[3]), Vector3::new(b[1], b[2], b[3]));
            let p = Quaternion::pure(u) * Quaternion::pure(v);
            prop_assert!(close(p, Quaternion::new(-u.dot(&v), u.cross(&v)), 1e-14));
        }

        #[test]
        fn associative_and_conjugate_reverses(a in quat(), b in quat(), c in quat()) {
            let (a, b, c) = (q(a), q(b), q(c));
            prop_assert!(close((a * b) * c, a * (b * c), 1e-14));
            prop_assert!(close((a * b).conj(), b.conj() * a.conj(), 1e-14));
        }

        #[test]
        fn pure_inverse_is_inverse(a in quat()) {
            let x = Vector3::new(a[1], a[2], a[3]);
            prop_assume!(x.norm() > 1e-3);
            let p = Quaternion::pure(x) * Quaternion::pure(pure_inverse(&x));
            prop_assert!(close(p, Quaternion::ONE, 1e-14));
            prop_assert!(close(Quaternion::pure(pure_inverse(&x)), Quaternion::pure(x).inverse(), 1e-14));
        }
    }
}

//! Discrete differential forms on the primal and dual mesh.
//!
//! Primal 0-forms and dual 2-forms live on vertices; primal and dual
//! 1-forms live on edges with the antisymmetric orientation convention of
//! [`SimplicialSurface`]; edge 0-forms and edge 2-forms are unsigned edge
//! values. The payload is either `f64` or a 3-vector.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Vector3;

use super::SimplicialSurface;

/// Payload of a discrete form.
pub trait FormValue:
    Copy
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
}

impl FormValue for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl FormValue for Vector3<f64> {
    fn zero() -> Self {
        Vector3::zeros()
    }
}

macro_rules! form_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T>(pub Vec<T>);

        impl<T: FormValue> $name<T> {
            pub fn zeros(len: usize) -> Self {
                Self(vec![T::zero(); len])
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn values(&self) -> &[T] {
                &self.0
            }
        }

        impl<T> std::ops::Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl<T> std::ops::IndexMut<usize> for $name<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }
    };
}

form_type!(
    /// One value per vertex.
    PrimalForm0
);
form_type!(
    /// One value per edge, stored for the `min -> max` direction.
    PrimalForm1
);
form_type!(
    /// One value per dual edge, indexed by the primal edge it crosses and
    /// stored for the outgoing `min -> max` halfedge.
    DualForm1
);
form_type!(
    /// One value per dual cell, i.e. per vertex.
    DualForm2
);
form_type!(
    /// Unsigned edge function.
    EdgeForm0
);
form_type!(
    /// Unsigned edge density, dual to [`EdgeForm0`].
    EdgeForm2
);

macro_rules! oriented_access {
    ($name:ident) => {
        impl<T: FormValue> $name<T> {
            /// Value on the halfedge `a -> b`.
            pub fn get(&self, surface: &SimplicialSurface, a: usize, b: usize) -> Option<T> {
                let (e, sign) = surface.edge_between(a, b)?;
                Some(if sign > 0.0 { self.0[e] } else { -self.0[e] })
            }

            /// Adds `value` on the halfedge `a -> b`.
            pub fn add_oriented(&mut self, surface: &SimplicialSurface, a: usize, b: usize, value: T) {
                let (e, sign) = surface.edge_between(a, b).expect("edge exists");
                if sign > 0.0 {
                    self.0[e] += value;
                } else {
                    self.0[e] += -value;
                }
            }
        }
    };
}

oriented_access!(PrimalForm1);
oriented_access!(DualForm1);

/// `(dφ)_ij = φ_j − φ_i`.
pub fn d_primal0<T: FormValue>(surface: &SimplicialSurface, phi: &PrimalForm0<T>) -> PrimalForm1<T> {
    PrimalForm1(
        surface
            .edges()
            .iter()
            .map(|&[a, b]| phi[b] - phi[a])
            .collect(),
    )
}

/// `(dτ)_i = Σ_j τ_ij`, summed over halfedges leaving `i`.
pub fn d_dual1<T: FormValue>(surface: &SimplicialSurface, tau: &DualForm1<T>) -> DualForm2<T> {
    let mut out = DualForm2::zeros(surface.vertex_count());
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        out[a] += tau[e];
        out[b] += -tau[e];
    }
    out
}

/// `(Au)_ij = (u_i + u_j) / 2`.
pub fn average<T: FormValue>(surface: &SimplicialSurface, u: &PrimalForm0<T>) -> EdgeForm0<T> {
    EdgeForm0(
        surface
            .edges()
            .iter()
            .map(|&[a, b]| (u[a] + u[b]) * 0.5)
            .collect(),
    )
}

/// Adjoint of [`average`]: `(A*s)_i = ½ Σ_{ij} s_ij`.
pub fn average_adjoint<T: FormValue>(surface: &SimplicialSurface, s: &EdgeForm2<T>) -> DualForm2<T> {
    let mut out = DualForm2::zeros(surface.vertex_count());
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        let half = s[e] * 0.5;
        out[a] += half;
        out[b] += half;
    }
    out
}

/// `(α∧β)_ij = α_ij β_ij` with a caller-chosen pairing of the payloads.
pub fn wedge<A, B, C, F>(alpha: &PrimalForm1<A>, beta: &DualForm1<B>, pairing: F) -> EdgeForm2<C>
where
    A: FormValue,
    B: FormValue,
    C: FormValue,
    F: Fn(A, B) -> C,
{
    assert_eq!(alpha.len(), beta.len());
    EdgeForm2(
        alpha
            .0
            .iter()
            .zip(&beta.0)
            .map(|(&a, &b)| pairing(a, b))
            .collect(),
    )
}

/// Edgewise product of an edge function with a dual 1-form.
pub fn scale_dual1<A, B, C, F>(phi: &EdgeForm0<A>, alpha: &DualForm1<B>, product: F) -> DualForm1<C>
where
    A: FormValue,
    B: FormValue,
    C: FormValue,
    F: Fn(A, B) -> C,
{
    assert_eq!(phi.len(), alpha.len());
    DualForm1(
        phi.0
            .iter()
            .zip(&alpha.0)
            .map(|(&p, &a)| product(p, a))
            .collect(),
    )
}

/// Sum of `⟨⟨x | y⟩⟩` over entries, for scalar forms of equal length.
pub fn pairing(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> SimplicialSurface {
        SimplicialSurface::new(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    #[test]
    fn d_of_constant_vanishes() {
        let s = tetrahedron();
        let phi = PrimalForm0(vec![3.5; 4]);
        assert!(d_primal0(&s, &phi).0.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn d_on_single_edge_is_difference() {
        let s = SimplicialSurface::new(3, vec![[0, 1, 2]]).unwrap();
        let phi = PrimalForm0(vec![0.0, 1.0, 2.0]);
        let dphi = d_primal0(&s, &phi);
        assert_eq!(dphi.get(&s, 0, 1), Some(1.0));
        assert_eq!(dphi.get(&s, 1, 0), Some(-1.0));
    }

    #[test]
    fn d_squared_vanishes_around_faces() {
        let s = tetrahedron();
        let phi = PrimalForm0(vec![0.3, -1.7, 2.9, 0.11]);
        let dphi = d_primal0(&s, &phi);
        for tri in s.faces() {
            let sum: f64 = (0..3)
                .map(|c| dphi.get(&s, tri[c], tri[(c + 1) % 3]).unwrap())
                .sum();
            assert!(sum.abs() < 1e-15);
        }
    }

    #[test]
    fn average_of_constant_and_single_edge() {
        let s = tetrahedron();
        let u = PrimalForm0(vec![2.0; 4]);
        assert!(average(&s, &u).0.iter().all(|&x| x == 2.0));

        let tri = SimplicialSurface::new(3, vec![[0, 1, 2]]).unwrap();
        let au = average(&tri, &PrimalForm0(vec![0.0, 2.0, 0.0]));
        let (e, _) = tri.edge_between(0, 1).unwrap();
        assert_eq!(au[e], 1.0);
    }

    #[test]
    fn d_dual1_of_zero_and_total_sum() {
        let s = tetrahedron();
        let zero = DualForm1::<f64>::zeros(6);
        assert!(d_dual1(&s, &zero).0.iter().all(|&x| x == 0.0));
        let tau = DualForm1(vec![0.4, -1.2, 3.3, 0.7, -0.05, 2.0]);
        let total: f64 = d_dual1(&s, &tau).0.iter().sum();
        assert!(total.abs() < 1e-14);
    }

    #[test]
    fn wedge_is_orientation_independent() {
        let s = tetrahedron();
        let alpha = PrimalForm1(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let beta = DualForm1(vec![0.5, -1.0, 2.0, 0.0, 1.5, -2.5]);
        let w = wedge(&alpha, &beta, |a, b| a * b);
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            let flipped = alpha.get(&s, b, a).unwrap() * beta.get(&s, b, a).unwrap();
            assert_eq!(w[e], flipped);
        }
        let zero = wedge(&PrimalForm1::zeros(6), &beta, |a: f64, b: f64| a * b);
        assert!(zero.0.iter().all(|&x| x == 0.0));
    }
}

//! Combinatorics of an oriented manifold triangle mesh with boundary.
//!
//! Edges are stored once, as the lexicographic pair `(min, max)`. A value
//! attached to an oriented edge is stored for the `min -> max` direction, so
//! reading it along `max -> min` flips its sign.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Vertex quadruple around an interior edge `ij`.
///
/// `ijk` and `jil` are the two incident faces with their orientation, so the
/// oriented boundary of the quad is `i -> l -> j -> k -> i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeStencil {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

/// Oriented face `ijk` incident to a boundary edge `ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryStencil {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct SimplicialSurface {
    vertex_count: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_lookup: HashMap<(usize, usize), usize>,
    /// Edge ids of `(v0,v1)`, `(v1,v2)`, `(v2,v0)` per face.
    face_edges: Vec<[usize; 3]>,
    /// `[face containing min->max, face containing max->min]`.
    edge_faces: Vec<[Option<usize>; 2]>,
    vertex_edges: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    vertex_component: Vec<Option<usize>>,
    boundary_loops: Vec<Vec<usize>>,
    connected_components: usize,
}

impl SimplicialSurface {
    /// Builds the connectivity from oriented triangles.
    pub fn new(vertex_count: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                if v >= vertex_count {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        count: vertex_count,
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0] {
                return Err(Error::DegenerateFace { face: f });
            }
        }

        // Collect every unoriented edge with its incident halfedges.
        let mut incident: Vec<((usize, usize), usize, bool)> = Vec::with_capacity(3 * faces.len());
        for (f, tri) in faces.iter().enumerate() {
            for c in 0..3 {
                let (a, b) = (tri[c], tri[(c + 1) % 3]);
                incident.push(((a.min(b), a.max(b)), f, a < b));
            }
        }
        incident.sort_unstable();

        let mut edges = Vec::new();
        let mut edge_faces: Vec<[Option<usize>; 2]> = Vec::new();
        let mut idx = 0;
        while idx < incident.len() {
            let key = incident[idx].0;
            let mut end = idx;
            while end < incident.len() && incident[end].0 == key {
                end += 1;
            }
            if end - idx > 2 {
                return Err(Error::NonManifoldEdge(key.0, key.1));
            }
            let mut slots = [None, None];
            for &(_, f, forward) in &incident[idx..end] {
                let s = if forward { 0 } else { 1 };
                if slots[s].is_some() {
                    return Err(Error::InconsistentOrientation(key.0, key.1));
                }
                slots[s] = Some(f);
            }
            edges.push([key.0, key.1]);
            edge_faces.push(slots);
            idx = end;
        }

        let edge_lookup: HashMap<(usize, usize), usize> = edges
            .iter()
            .enumerate()
            .map(|(e, &[a, b])| ((a, b), e))
            .collect();

        let face_edges: Vec<[usize; 3]> = faces
            .iter()
            .map(|tri| {
                let mut out = [0; 3];
                for c in 0..3 {
                    let (a, b) = (tri[c], tri[(c + 1) % 3]);
                    out[c] = edge_lookup[&(a.min(b), a.max(b))];
                }
                out
            })
            .collect();

        let mut vertex_edges = vec![Vec::new(); vertex_count];
        for (e, &[a, b]) in edges.iter().enumerate() {
            vertex_edges[a].push(e);
            vertex_edges[b].push(e);
        }
        let mut vertex_faces = vec![Vec::new(); vertex_count];
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                vertex_faces[v].push(f);
            }
        }
        if let Some(v) = vertex_faces.iter().position(|fs| fs.is_empty()) {
            return Err(Error::IsolatedVertex(v));
        }

        // Boundary halfedges in face orientation: tail -> head.
        let mut boundary_next: Vec<Option<usize>> = vec![None; vertex_count];
        for (e, slots) in edge_faces.iter().enumerate() {
            let [a, b] = edges[e];
            let (tail, head) = match slots {
                [Some(_), None] => (a, b),
                [None, Some(_)] => (b, a),
                _ => continue,
            };
            if boundary_next[tail].is_some() {
                return Err(Error::NonManifoldVertex(tail));
            }
            boundary_next[tail] = Some(head);
        }
        let mut vertex_component = vec![None; vertex_count];
        let mut boundary_loops = Vec::new();
        for start in 0..vertex_count {
            if boundary_next[start].is_none() || vertex_component[start].is_some() {
                continue;
            }
            let id = boundary_loops.len();
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                if vertex_component[v].is_some() {
                    return Err(Error::NonManifoldVertex(v));
                }
                vertex_component[v] = Some(id);
                cycle.push(v);
                v = boundary_next[v].ok_or(Error::NonManifoldVertex(v))?;
                if v == start {
                    break;
                }
            }
            boundary_loops.push(cycle);
        }

        // Every vertex must be the apex of exactly one fan.
        for v in 0..vertex_count {
            let fan = fan_size(v, &faces, &vertex_faces[v], &edge_lookup, &edge_faces);
            if fan != vertex_faces[v].len() {
                return Err(Error::NonManifoldVertex(v));
            }
        }

        let connected_components = count_components(vertex_count, &edges);

        Ok(Self {
            vertex_count,
            faces,
            edges,
            edge_lookup,
            face_edges,
            edge_faces,
            vertex_edges,
            vertex_faces,
            vertex_component,
            boundary_loops,
            connected_components,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }

    pub fn edge_faces(&self, e: usize) -> [Option<usize>; 2] {
        self.edge_faces[e]
    }

    /// Edge incident to the given vertices, paired with the sign of the
    /// `a -> b` direction relative to the stored one.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<(usize, f64)> {
        let e = *self.edge_lookup.get(&(a.min(b), a.max(b)))?;
        Some((e, if a < b { 1.0 } else { -1.0 }))
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    /// Neighbors of `v`, in increasing index order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertex_edges[v]
            .iter()
            .map(|&e| self.other_end(e, v))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_faces[e].iter().any(Option::is_none)
    }

    pub fn is_interior_edge(&self, e: usize) -> bool {
        !self.is_boundary_edge(e)
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_component[v].is_some()
    }

    /// Boundary component label of a vertex, `None` for interior vertices.
    pub fn boundary_component(&self, v: usize) -> Option<usize> {
        self.vertex_component[v]
    }

    pub fn boundary_component_count(&self) -> usize {
        self.boundary_loops.len()
    }

    /// Boundary loops in face orientation, labeled by increasing first vertex.
    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_loops.is_empty()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count).filter(move |&v| !self.is_boundary_vertex(v))
    }

    pub fn interior_vertex_count(&self) -> usize {
        self.interior_vertices().count()
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&e| self.is_interior_edge(e))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn connected_components(&self) -> usize {
        self.connected_components
    }

    /// Total genus, summed over connected components.
    pub fn genus(&self) -> usize {
        let twice = 2 * self.connected_components as i64
            - self.boundary_loops.len() as i64
            - self.euler_characteristic();
        (twice / 2).max(0) as usize
    }

    /// Third vertex of face `f` opposite to its edge between `a` and `b`.
    pub fn opposite_vertex(&self, f: usize, a: usize, b: usize) -> usize {
        let tri = self.faces[f];
        *tri.iter()
            .find(|&&v| v != a && v != b)
            .expect("face contains the edge")
    }

    pub fn interior_stencil(&self, e: usize) -> Option<EdgeStencil> {
        let [a, b] = self.edges[e];
        let [fwd, bwd] = self.edge_faces[e];
        let (fwd, bwd) = (fwd?, bwd?);
        Some(EdgeStencil {
            i: a,
            j: b,
            k: self.opposite_vertex(fwd, a, b),
            l: self.opposite_vertex(bwd, a, b),
        })
    }

    pub fn boundary_stencil(&self, e: usize) -> Option<BoundaryStencil> {
        let [a, b] = self.edges[e];
        match self.edge_faces[e] {
            [Some(f), None] => Some(BoundaryStencil {
                i: a,
                j: b,
                k: self.opposite_vertex(f, a, b),
            }),
            [None, Some(f)] => Some(BoundaryStencil {
                i: b,
                j: a,
                k: self.opposite_vertex(f, a, b),
            }),
            _ => None,
        }
    }

    /// Number of interior endpoints of an edge.
    pub fn interior_endpoint_count(&self, e: usize) -> usize {
        self.edges[e]
            .iter()
            .filter(|&&v| !self.is_boundary_vertex(v))
            .count()
    }

    /// Relabels vertices: new index of old vertex `v` is `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count,
                got: perm.len(),
            });
        }
        let faces = self
            .faces
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        Self::new(self.vertex_count, faces)
    }
}

fn fan_size(
    v: usize,
    faces: &[[usize; 3]],
    incident: &[usize],
    lookup: &HashMap<(usize, usize), usize>,
    edge_faces: &[[Option<usize>; 2]],
) -> usize {
    // Walk across edges through v starting from the first incident face.
    let start = incident[0];
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        for &w in &faces[f] {
            if w == v {
                continue;
            }
            let e = lookup[&(v.min(w), v.max(w))];
            for g in edge_faces[e].iter().flatten() {
                if !seen.contains(g) {
                    seen.push(*g);
                    stack.push(*g);
                }
            }
        }
    }
    seen.len()
}

fn count_components(n: usize, edges: &[[usize; 2]]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &[a, b] in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> SimplicialSurface {
        SimplicialSurface::new(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    #[test]
    fn single_triangle() {
        let s = SimplicialSurface::new(3, vec![[0, 1, 2]]).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.edge_count(), 3);
        assert!((0..3).all(|e| s.is_boundary_edge(e)));
        assert_eq!(s.boundary_component_count(), 1);
        assert_eq!(s.interior_vertex_count(), 0);
        assert_eq!(s.genus(), 0);
    }

    #[test]
    fn tetrahedron_is_closed_sphere() {
        let s = tetrahedron();
        assert!(s.is_closed());
        assert_eq!(s.edge_count(), 6);
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.genus(), 0);
        assert_eq!(s.interior_vertex_count(), 4);
    }

    #[test]
    fn same_direction_twice_is_rejected() {
        let err = SimplicialSurface::new(4, vec![[0, 1, 2], [0, 1, 3]]).unwrap_err();
        assert!(matches!(err, Error::InconsistentOrientation(0, 1)));
    }

    #[test]
    fn three_faces_on_an_edge_is_rejected() {
        let err =
            SimplicialSurface::new(5, vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]]).unwrap_err();
        assert!(matches!(err, Error::NonManifoldEdge(0, 1)));
    }

    #[test]
    fn isolated_vertex_is_rejected() {
        let err = SimplicialSurface::new(4, vec![[0, 1, 2]]).unwrap_err();
        assert!(matches!(err, Error::IsolatedVertex(3)));
    }

    #[test]
    fn bowtie_vertex_is_rejected() {
        let err = SimplicialSurface::new(5, vec![[0, 1, 2], [0, 3, 4]]).unwrap_err();
        assert!(matches!(err, Error::NonManifoldVertex(0)));
    }

    #[test]
    fn stencil_follows_face_orientation() {
        // Two triangles sharing edge (0,2): faces 012 and 230.
        let s = SimplicialSurface::new(4, vec![[0, 1, 2], [2, 3, 0]]).unwrap();
        let (e, _) = s.edge_between(0, 2).unwrap();
        let st = s.interior_stencil(e).unwrap();
        // Halfedge 0->2 lives in face 230, so that face is `ijk`.
        assert_eq!(st, EdgeStencil { i: 0, j: 2, k: 3, l: 1 });
        let (b, _) = s.edge_between(0, 1).unwrap();
        assert_eq!(s.boundary_stencil(b).unwrap(), BoundaryStencil { i: 0, j: 1, k: 2 });
        let (b, _) = s.edge_between(2, 3).unwrap();
        assert_eq!(s.boundary_stencil(b).unwrap(), BoundaryStencil { i: 2, j: 3, k: 0 });
    }

    #[test]
    fn annulus_has_two_boundary_components() {
        // Square ring: outer 0..4, inner 4..8.
        let mut faces = Vec::new();
        for c in 0..4 {
            let (o0, o1, i0, i1) = (c, (c + 1) % 4, 4 + c, 4 + (c + 1) % 4);
            faces.push([o0, o1, i1]);
            faces.push([o0, i1, i0]);
        }
        let s = SimplicialSurface::new(8, faces).unwrap();
        assert_eq!(s.boundary_component_count(), 2);
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.genus(), 0);
        assert_eq!(s.boundary_component(0), Some(0));
        assert_eq!(s.boundary_component(5), Some(1));
    }
}

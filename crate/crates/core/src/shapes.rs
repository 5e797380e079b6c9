//! Procedural meshes: platonic solids, subdivided spheres, grids, annuli
//! and strips. All closed meshes are oriented with outward normals.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::dec::SimplicialSurface;
use crate::Point;

pub type Shape = (SimplicialSurface, Vec<Point>);

fn build(points: Vec<Point>, faces: Vec<[usize; 3]>) -> Shape {
    let s = SimplicialSurface::new(points.len(), faces).expect("procedural mesh is manifold");
    (s, points)
}

/// Regular tetrahedron inscribed in the sphere of radius √3.
pub fn tetrahedron() -> Shape {
    let p = vec![
        Vector3::new(1.0, 1.0, 1.0),
        Vector3::new(1.0, -1.0, -1.0),
        Vector3::new(-1.0, 1.0, -1.0),
        Vector3::new(-1.0, -1.0, 1.0),
    ];
    build(p, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
}

/// Unit cube `[0,1]³`, two triangles per side.
pub fn cube() -> Shape {
    let p = (0..8)
        .map(|v| Vector3::new((v & 1) as f64, ((v >> 1) & 1) as f64, ((v >> 2) & 1) as f64))
        .collect();
    // Each side as a quad (a, b, c, d) counterclockwise seen from outside.
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    let faces = quads
        .iter()
        .flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]])
        .collect();
    build(p, faces)
}

/// Icosahedron subdivided `level` times and projected to the unit sphere;
/// `10·4^level + 2` vertices.
pub fn icosphere(level: usize) -> Shape {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut points: Vec<Point> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |a: usize, b: usize, points: &mut Vec<Point>| {
            *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                points.push(((points[a] + points[b]) * 0.5).normalize());
                points.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut points);
            let bc = mid(b, c, &mut points);
            let ca = mid(c, a, &mut points);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    build(points, faces)
}

/// Latitude-longitude unit sphere with poles; `2 + (rings − 1)·segments`
/// vertices.
pub fn uv_sphere(rings: usize, segments: usize) -> Shape {
    assert!(rings >= 2 && segments >= 3);
    let mut points = vec![Vector3::new(0.0, 0.0, 1.0)];
    for r in 1..rings {
        let theta = PI * r as f64 / rings as f64;
        for s in 0..segments {
            let phi = 2.0 * PI * s as f64 / segments as f64;
            points.push(Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()));
        }
    }
    let south = points.len();
    points.push(Vector3::new(0.0, 0.0, -1.0));
    let ring = |r: usize, s: usize| 1 + (r - 1) * segments + s % segments;
    let mut faces = Vec::new();
    for s in 0..segments {
        faces.push([0, ring(1, s), ring(1, s + 1)]);
        faces.push([south, ring(rings - 1, s + 1), ring(rings - 1, s)]);
    }
    for r in 1..rings - 1 {
        for s in 0..segments {
            let (a, b, c, d) = (ring(r, s), ring(r + 1, s), ring(r + 1, s + 1), ring(r, s + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    build(points, faces)
}

/// Planar grid of `nx × ny` unit squares in the xy-plane, each split along
/// the diagonal from its lower-left corner unless its entry in `flip` is
/// set. Vertex `(x, y)` has index `y·(nx + 1) + x`.
pub fn grid_with_diagonals(nx: usize, ny: usize, flip: &[bool]) -> Shape {
    assert_eq!(flip.len(), nx * ny);
    let id = |x: usize, y: usize| y * (nx + 1) + x;
    let points = (0..=ny)
        .flat_map(|y| (0..=nx).map(move |x| Vector3::new(x as f64, y as f64, 0.0)))
        .collect();
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for y in 0..ny {
        for x in 0..nx {
            let (a, b, c, d) = (id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1));
            if flip[y * nx + x] {
                faces.extend([[a, b, d], [b, c, d]]);
            } else {
                faces.extend([[a, b, c], [a, c, d]]);
            }
        }
    }
    build(points, faces)
}

pub fn grid(nx: usize, ny: usize) -> Shape {
    grid_with_diagonals(nx, ny, &vec![false; nx * ny])
}

/// Patch of the equilateral triangle lattice with the vertex numbering of
/// [`grid`]: row `y` is shifted by `y/2` and every quad is split along its
/// short diagonal. Strictly Delaunay, so no stencil is concircular.
pub fn lattice(nx: usize, ny: usize) -> Shape {
    let (s, mut points) = grid_with_diagonals(nx, ny, &vec![true; nx * ny]);
    let h = 3f64.sqrt() / 2.0;
    for p in points.iter_mut() {
        *p = Vector3::new(p.x + 0.5 * p.y, h * p.y, 0.0);
    }
    (s, points)
}

/// Planar annulus with `radial` rings of quads between radii `inner` and
/// `outer`, each ring having `angular` quads.
pub fn annulus(radial: usize, angular: usize, inner: f64, outer: f64) -> Shape {
    assert!(radial >= 1 && angular >= 3);
    let id = |r: usize, a: usize| r * angular + a % angular;
    let mut points = Vec::new();
    for r in 0..=radial {
        let rad = inner + (outer - inner) * r as f64 / radial as f64;
        for a in 0..angular {
            let phi = 2.0 * PI * (a as f64 + 0.5 * r as f64) / angular as f64;
            points.push(Vector3::new(rad * phi.cos(), rad * phi.sin(), 0.0));
        }
    }
    let mut faces = Vec::new();
    for r in 0..radial {
        for a in 0..angular {
            // Ring r + 1 is turned half a step, so `t` sits between `p`
            // and `q` and the split along q–t is the short diagonal.
            let (p, q, s, t) = (id(r, a), id(r, a + 1), id(r + 1, a + 1), id(r + 1, a));
            faces.extend([[p, q, t], [q, s, t]]);
        }
    }
    build(points, faces)
}

/// Rectangular strip `[0, length] × [0, width]` with `n × m` quads, for
/// gluing experiments. Vertex `(x, y)` has index `y·(n + 1) + x`.
pub fn strip(n: usize, m: usize, length: f64, width: f64) -> Shape {
    let (s, p) = grid(n, m);
    let scaled = p
        .iter()
        .map(|q| Vector3::new(q.x * length / n as f64, q.y * width / m as f64, 0.0))
        .collect();
    (s, scaled)
}

/// Signed enclosed volume of an oriented closed mesh.
pub fn signed_volume(surface: &SimplicialSurface, f: &[Point]) -> f64 {
    surface
        .faces()
        .iter()
        .map(|&[a, b, c]| f[a].dot(&f[b].cross(&f[c])))
        .sum::<f64>()
        / 6.0
}

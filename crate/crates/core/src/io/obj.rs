//! Wavefront OBJ, restricted to `v` and triangular `f` records.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector3;

use super::{content_lines, format_float, parse_error, parse_float};
use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};
use crate::Point;

/// Records that carry no geometry we use.
const IGNORED: &[&str] = &["vn", "vt", "vp", "o", "g", "s", "l", "usemtl", "mtllib"];

pub fn read_obj(path: impl AsRef<Path>) -> Result<(SimplicialSurface, Vec<Point>)> {
    let path = path.as_ref();
    let text = super::read_text(path)?;
    parse_obj(&text, path)
}

/// Parses OBJ text; `path` only labels errors. Face indices are 1-based,
/// negative indices count back from the last vertex read so far, and
/// `v/vt/vn` references use only the vertex.
pub fn parse_obj(text: &str, path: &Path) -> Result<(SimplicialSurface, Vec<Point>)> {
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "v" => {
                // An optional fourth (weight) or color components are ignored.
                if rest.len() < 3 {
                    return Err(parse_error(path, line, "vertex needs three coordinates"));
                }
                let c: Vec<f64> = rest[..3]
                    .iter()
                    .map(|t| parse_float(path, line, t))
                    .collect::<Result<_>>()?;
                points.push(Vector3::new(c[0], c[1], c[2]));
            }
            "f" => {
                if rest.len() != 3 {
                    if rest.len() > 3 {
                        return Err(Error::NonTriangleFace {
                            path: path.display().to_string(),
                            line,
                        });
                    }
                    return Err(parse_error(path, line, "face needs three vertices"));
                }
                let mut face = [0; 3];
                for (slot, token) in face.iter_mut().zip(&rest) {
                    *slot = face_index(path, line, token, points.len())?;
                }
                faces.push(face);
            }
            t if IGNORED.contains(&t) => {}
            t => return Err(parse_error(path, line, format!("unsupported record `{t}`"))),
        }
    }
    if faces.is_empty() {
        return Err(parse_error(path, 0, "no faces"));
    }
    let surface = SimplicialSurface::new(points.len(), faces)?;
    Ok((surface, points))
}

fn face_index(path: &Path, line: usize, token: &str, count: usize) -> Result<usize> {
    let head = token.split('/').next().unwrap_or("");
    let k: i64 = head
        .parse()
        .map_err(|_| parse_error(path, line, format!("expected a vertex reference, found `{token}`")))?;
    let index = if k > 0 { k - 1 } else { count as i64 + k };
    if k == 0 || index < 0 || index as usize >= count {
        return Err(parse_error(path, line, format!("vertex reference {k} out of range")));
    }
    Ok(index as usize)
}

/// OBJ text with one `v` line per vertex and one 1-based `f` line per face.
pub fn write_obj_to(surface: &SimplicialSurface, f: &[Point]) -> Result<String> {
    crate::conformal::check_len(surface.vertex_count(), f.len())?;
    let mut out = String::new();
    for p in f {
        writeln!(out, "v {} {} {}", format_float(p.x), format_float(p.y), format_float(p.z)).expect("string write");
    }
    for &[a, b, c] in surface.faces() {
        writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1).expect("string write");
    }
    Ok(out)
}

pub fn write_obj(path: impl AsRef<Path>, surface: &SimplicialSurface, f: &[Point]) -> Result<()> {
    super::write_text(path.as_ref(), &write_obj_to(surface, f)?)?;
    Ok(())
}

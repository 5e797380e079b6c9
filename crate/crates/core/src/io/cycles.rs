//! Cycle files for flux reports. Each line is one closed dual chain:
//!
//! ```text
//! around 3 4 17        # boundary of the dual cells of these vertices
//! halfedges 0 1 1 2    # explicit halfedges (0,1), (1,2)
//! ```

use std::path::Path;

use super::{content_lines, parse_error, parse_index};
use crate::dec::SimplicialSurface;
use crate::diagnostics::{cycle_around, DualChain};
use crate::error::Result;

pub fn read_cycles(path: impl AsRef<Path>, surface: &SimplicialSurface) -> Result<Vec<(String, DualChain)>> {
    let path = path.as_ref();
    let text = super::read_text(path)?;
    parse_cycles(&text, path, surface)
}

/// Chains with the source line as their label. Closedness is checked when
/// the chains are integrated.
pub fn parse_cycles(text: &str, path: &Path, surface: &SimplicialSurface) -> Result<Vec<(String, DualChain)>> {
    let mut out = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let kind = tokens.next().unwrap_or("");
        let indices: Vec<usize> = tokens.map(|t| parse_index(path, line, t)).collect::<Result<_>>()?;
        if let Some(&v) = indices.iter().find(|&&v| v >= surface.vertex_count()) {
            return Err(parse_error(path, line, format!("vertex {v} out of range")));
        }
        let chain = match kind {
            "around" if !indices.is_empty() => cycle_around(surface, &indices),
            "halfedges" if !indices.is_empty() && indices.len().is_multiple_of(2) => {
                let chain: DualChain = indices.chunks(2).map(|p| (p[0], p[1])).collect();
                if let Some(&(a, b)) = chain.iter().find(|&&(a, b)| surface.edge_between(a, b).is_none()) {
                    return Err(parse_error(path, line, format!("({a}, {b}) is not an edge")));
                }
                chain
            }
            "around" | "halfedges" => return Err(parse_error(path, line, "malformed vertex list")),
            k => return Err(parse_error(path, line, format!("unknown cycle kind `{k}`"))),
        };
        out.push((content.to_string(), chain));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn both_kinds_parse() {
        let (s, _) = shapes::icosphere(0);
        let cycles = parse_cycles("around 0\n# comment\nhalfedges 0 11 11 0\n", Path::new("c"), &s).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].1.len(), 5);
        assert_eq!(cycles[1].1, vec![(0, 11), (11, 0)]);
        assert!(parse_cycles("halfedges 0 3\n", Path::new("c"), &s).is_err());
        assert!(parse_cycles("halfedges 0\n", Path::new("c"), &s).is_err());
        assert!(parse_cycles("ring 0\n", Path::new("c"), &s).is_err());
    }
}

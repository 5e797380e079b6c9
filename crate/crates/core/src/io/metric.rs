//! Per-edge tables: one `i j value` record per mesh edge with `i < j`.
//! The value is a log edge length for metrics or a target cross ratio for
//! conformal classes.

use std::fmt::Write as _;
use std::path::Path;

use super::{content_lines, format_float, parse_error, parse_float, parse_index};
use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};

pub fn read_sidecar(path: impl AsRef<Path>, surface: &SimplicialSurface) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = super::read_text(path)?;
    parse_sidecar(&text, path, surface)
}

/// Values in canonical edge order. Every edge must appear exactly once.
pub fn parse_sidecar(text: &str, path: &Path, surface: &SimplicialSurface) -> Result<Vec<f64>> {
    let mut values: Vec<Option<f64>> = vec![None; surface.edge_count()];
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_error(path, line, "expected `i j value`"));
        }
        let (i, j) = (parse_index(path, line, tokens[0])?, parse_index(path, line, tokens[1])?);
        if i >= j {
            return Err(parse_error(path, line, format!("edge ({i}, {j}) is not in canonical order")));
        }
        let value = parse_float(path, line, tokens[2])?;
        let (e, _) = surface
            .edge_between(i, j)
            .ok_or_else(|| parse_error(path, line, format!("({i}, {j}) is not a mesh edge")))?;
        if values[e].replace(value).is_some() {
            return Err(parse_error(path, line, format!("edge ({i}, {j}) listed twice")));
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(e, v)| {
            v.ok_or_else(|| {
                let [i, j] = surface.edges()[e];
                Error::Validation(format!("{}: edge ({i}, {j}) is missing", path.display()))
            })
        })
        .collect()
}

pub fn write_sidecar_to(surface: &SimplicialSurface, values: &[f64]) -> Result<String> {
    crate::conformal::check_len(surface.edge_count(), values.len())?;
    let mut out = String::new();
    for (&[i, j], v) in surface.edges().iter().zip(values) {
        writeln!(out, "{i} {j} {}", format_float(*v)).expect("string write");
    }
    Ok(out)
}

pub fn write_sidecar(path: impl AsRef<Path>, surface: &SimplicialSurface, values: &[f64]) -> Result<()> {
    super::write_text(path.as_ref(), &write_sidecar_to(surface, values)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn round_trip_and_shuffled_order() {
        let (s, f) = shapes::icosphere(0);
        let lambda = crate::conformal::induced_metric(&s, &f).unwrap().log_lengths;
        let text = write_sidecar_to(&s, &lambda).unwrap();
        let reversed: String = text.lines().rev().map(|l| format!("{l}\n")).collect();
        for t in [text, reversed] {
            assert_eq!(parse_sidecar(&t, Path::new("m"), &s).unwrap(), lambda);
        }
    }

    #[test]
    fn coverage_is_enforced() {
        let (s, _) = shapes::tetrahedron();
        let full = write_sidecar_to(&s, &[0.0; 6]).unwrap();
        let missing: String = full.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_sidecar(&missing, Path::new("m"), &s), Err(Error::Validation(_))));
        let twice = format!("{full}0 1 2\n");
        assert!(matches!(parse_sidecar(&twice, Path::new("m"), &s), Err(Error::Parse { line: 7, .. })));
        let flipped = full.replacen("0 1 0", "1 0 0", 1);
        assert!(matches!(parse_sidecar(&flipped, Path::new("m"), &s), Err(Error::Parse { line: 1, .. })));
    }
}

//! File formats: OBJ meshes, per-edge sidecar tables, scene files, cycle
//! files and reports.
//!
//! Every number written by this module uses the shortest decimal that
//! parses back to the same `f64`, so output is byte-identical across runs.

mod cycles;
mod metric;
mod obj;
mod report;
mod scene;

pub use cycles::{parse_cycles, read_cycles};
pub use metric::{parse_sidecar, read_sidecar, write_sidecar, write_sidecar_to};
pub use obj::{parse_obj, read_obj, write_obj, write_obj_to};
pub use report::{Report, Value};

pub use scene::{
    parse_scene, read_scene, AreaTarget, ConformalSource, LoadedScene, PointSpec, SceneConfig, SCENE_HEADER,
};

use std::path::Path;

use crate::error::Error;

/// Shortest decimal that reads back as the same `f64`, switching to
/// exponent notation for very large or small magnitudes.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Reads a whole file, naming it in the error.
pub fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| file_error(path, source))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| file_error(path, source))
}

fn file_error(path: &Path, source: std::io::Error) -> Error {
    Error::File {
        path: path.display().to_string(),
        source,
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Finite `f64` token.
fn parse_float(path: &Path, line: usize, token: &str) -> Result<f64, Error> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err(parse_error(path, line, format!("non-finite number `{token}`"))),
        Err(_) => Err(parse_error(path, line, format!("expected a number, found `{token}`"))),
    }
}

fn parse_index(path: &Path, line: usize, token: &str) -> Result<usize, Error> {
    token
        .parse::<usize>()
        .map_err(|_| parse_error(path, line, format!("expected a vertex index, found `{token}`")))
}

/// Content lines with their 1-based numbers; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

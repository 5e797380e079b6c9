//! Scene files describe one solve. The format is line oriented:
//!
//! ```text
//! confspline-scene 1
//! mesh = sphere.obj
//! objective = willmore
//! area = initial
//!
//! constraints
//!   point 0                  # pinned where it is
//!   point 7 = 0 0 1.2
//!   flux 3 = 0 0 1
//!   scale 5 = 0.3 link
//!   identify 2 9
//! end
//! ```
//!
//! Keys: `mesh` (required), `reference` (a sidecar table of log lengths or
//! an OBJ with the same faces; defaults to the mesh itself), `conformal`
//! (`mesh`, `reference`, `none` or `file PATH`), `boundary-rows` (`all`,
//! `none` or one `on`/`off` per boundary component), `objective`
//! (`willmore` or `area`), `area` and `volume` (`initial` or a number),
//! `tolerance`, `constraint-tolerance`, `max-iterations`, `output-mesh` and
//! `output-report`. Relative paths are resolved against the scene file.

use std::path::{Path, PathBuf};

use nalgebra::Vector3;

use super::report::Report;
use super::{content_lines, format_float, parse_error, parse_float, parse_index, read_obj, read_sidecar};
use crate::conformal::{extended_cross_ratio, induced_metric, ConformalClass, DiscreteMetric, Provenance, ScaleMode};
use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};
use crate::solver::{
    self, ConformalTarget, ConstraintSet, FluxConstraint, Objective, PointConstraint, ScaleConstraint,
    SolverOptions,
};
use crate::Point;

pub const SCENE_HEADER: &str = "confspline-scene 1";

#[derive(Clone, Debug, PartialEq)]
pub enum ConformalSource {
    Mesh,
    Reference,
    File(String),
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointSpec {
    /// Keep the vertex at its input position.
    Current,
    At(Point),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AreaTarget {
    Initial,
    Value(f64),
}

/// Parsed scene, with paths kept as written.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneConfig {
    /// Directory relative paths are resolved against.
    pub base: PathBuf,
    pub mesh: String,
    pub reference: Option<String>,
    pub conformal: ConformalSource,
    /// `None` keeps every boundary row.
    pub boundary_rows: Option<Vec<bool>>,
    pub objective: Objective,
    pub points: Vec<(usize, PointSpec)>,
    pub scales: Vec<ScaleConstraint>,
    pub fluxes: Vec<FluxConstraint>,
    pub identifications: Vec<(usize, usize)>,
    pub area: Option<AreaTarget>,
    pub volume: Option<AreaTarget>,
    pub options: SolverOptions,
    pub output_mesh: Option<String>,
    pub output_report: Option<String>,
}

impl SceneConfig {
    fn minimal(base: PathBuf, mesh: String) -> Self {
        Self {
            base,
            mesh,
            reference: None,
            conformal: ConformalSource::Mesh,
            boundary_rows: None,
            objective: Objective::Willmore,
            points: Vec::new(),
            scales: Vec::new(),
            fluxes: Vec::new(),
            identifications: Vec::new(),
            area: None,
            volume: None,
            options: SolverOptions::default(),
            output_mesh: None,
            output_report: None,
        }
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        self.base.join(path)
    }

    /// The full configuration, defaults included, as report entries.
    pub fn echo(&self, report: &mut Report) {
        let target = |t: &Option<AreaTarget>| match t {
            None => "free".to_string(),
            Some(AreaTarget::Initial) => "initial".to_string(),
            Some(AreaTarget::Value(x)) => format_float(*x),
        };
        report.push("scene.mesh", self.mesh.as_str());
        report.push("scene.reference", self.reference.as_deref().unwrap_or("mesh"));
        report.push(
            "scene.conformal",
            match &self.conformal {
                ConformalSource::Mesh => "mesh".to_string(),
                ConformalSource::Reference => "reference".to_string(),
                ConformalSource::File(p) => format!("file {p}"),
                ConformalSource::None => "none".to_string(),
            },
        );
        report.push(
            "scene.boundary-rows",
            match &self.boundary_rows {
                None => "all".to_string(),
                Some(rows) if rows.is_empty() => "none".to_string(),
                Some(rows) => rows.iter().map(|&b| if b { "on" } else { "off" }).collect::<Vec<_>>().join(" "),
            },
        );
        report.push(
            "scene.objective",
            match self.objective {
                Objective::Willmore => "willmore",
                Objective::Area => "area",
            },
        );
        report.push("scene.area", target(&self.area));
        report.push("scene.volume", target(&self.volume));
        report.push("scene.tolerance", self.options.tolerance);
        report.push("scene.constraint-tolerance", self.options.constraint_tolerance);
        report.push("scene.max-iterations", self.options.max_iterations);
        for (v, spec) in &self.points {
            match spec {
                PointSpec::Current => report.push(format!("scene.point.{v}"), "current"),
                PointSpec::At(p) => report.push(format!("scene.point.{v}"), *p),
            };
        }
        for c in &self.scales {
            let mode = match c.mode {
                ScaleMode::Vertex => "vertex",
                ScaleMode::Link => "link",
            };
            report.push(format!("scene.scale.{}", c.vertex), format!("{} {mode}", format_float(c.value)));
        }
        for c in &self.fluxes {
            report.push(format!("scene.flux.{}", c.vertex), c.flux);
        }
        for (a, b) in &self.identifications {
            report.push("scene.identify", format!("{a} {b}"));
        }
    }
}

pub fn parse_scene(text: &str, path: &Path) -> Result<SceneConfig> {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, SCENE_HEADER)) => {}
        Some((line, other)) => {
            return Err(parse_error(path, line, format!("expected `{SCENE_HEADER}`, found `{other}`")))
        }
        None => return Err(parse_error(path, 1, "empty scene file")),
    }
    let mut config = SceneConfig::minimal(base, String::new());
    let mut seen: Vec<String> = Vec::new();
    let mut in_block = false;
    let mut block_closed = false;
    for (line, content) in lines {
        if in_block {
            if content == "end" {
                in_block = false;
                block_closed = true;
            } else {
                parse_constraint(&mut config, content, path, line)?;
            }
            continue;
        }
        if content == "constraints" {
            if block_closed {
                return Err(parse_error(path, line, "second constraints block"));
            }
            in_block = true;
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| parse_error(path, line, "expected `key = value`"))?;
        if seen.iter().any(|k| k == key) {
            return Err(parse_error(path, line, format!("duplicate key `{key}`")));
        }
        seen.push(key.to_string());
        parse_key(&mut config, key, value, path, line)?;
    }
    if in_block {
        return Err(parse_error(path, text.lines().count(), "constraints block is not closed with `end`"));
    }
    if config.mesh.is_empty() {
        return Err(Error::Validation(format!("{}: scene has no `mesh`", path.display())));
    }
    if config.conformal == ConformalSource::Reference && config.reference.is_none() {
        return Err(Error::Validation("`conformal = reference` needs a `reference`".into()));
    }
    Ok(config)
}

fn parse_key(config: &mut SceneConfig, key: &str, value: &str, path: &Path, line: usize) -> Result<()> {
    let target = |value: &str| -> Result<AreaTarget> {
        if value == "initial" {
            Ok(AreaTarget::Initial)
        } else {
            match parse_float(path, line, value)? {
                x if x > 0.0 => Ok(AreaTarget::Value(x)),
                _ => Err(parse_error(path, line, "target must be positive")),
            }
        }
    };
    let positive = |value: &str| -> Result<f64> {
        match parse_float(path, line, value)? {
            x if x > 0.0 => Ok(x),
            _ => Err(parse_error(path, line, format!("`{key}` must be positive"))),
        }
    };
    match key {
        "mesh" => config.mesh = value.to_string(),
        "reference" => config.reference = Some(value.to_string()),
        "conformal" => {
            config.conformal = match value.split_once(char::is_whitespace) {
                Some(("file", p)) => ConformalSource::File(p.trim().to_string()),
                _ => match value {
                    "mesh" => ConformalSource::Mesh,
                    "reference" => ConformalSource::Reference,
                    "none" => ConformalSource::None,
                    _ => return Err(parse_error(path, line, format!("unknown conformal source `{value}`"))),
                },
            }
        }
        "boundary-rows" => {
            config.boundary_rows = match value {
                "all" => None,
                "none" => Some(Vec::new()),
                _ => Some(
                    value
                        .split_whitespace()
                        .map(|t| match t {
                            "on" => Ok(true),
                            "off" => Ok(false),
                            _ => Err(parse_error(path, line, format!("expected `on` or `off`, found `{t}`"))),
                        })
                        .collect::<Result<_>>()?,
                ),
            }
        }
        "objective" => {
            config.objective = match value {
                "willmore" => Objective::Willmore,
                "area" => Objective::Area,
                _ => return Err(parse_error(path, line, format!("unknown objective `{value}`"))),
            }
        }
        "area" => config.area = Some(target(value)?),
        "volume" => config.volume = Some(target(value)?),
        "tolerance" => config.options.tolerance = positive(value)?,
        "constraint-tolerance" => config.options.constraint_tolerance = positive(value)?,
        "max-iterations" => {
            config.options.max_iterations = value
                .parse()
                .map_err(|_| parse_error(path, line, format!("expected an iteration count, found `{value}`")))?
        }
        "output-mesh" => config.output_mesh = Some(value.to_string()),
        "output-report" => config.output_report = Some(value.to_string()),
        _ => return Err(parse_error(path, line, format!("unknown key `{key}`"))),
    }
    Ok(())
}

fn parse_constraint(config: &mut SceneConfig, content: &str, path: &Path, line: usize) -> Result<()> {
    let (head, tail) = match content.split_once('=') {
        Some((h, t)) => (h.trim(), Some(t.trim())),
        None => (content, None),
    };
    let head: Vec<&str> = head.split_whitespace().collect();
    let tail: Vec<&str> = tail.map(|t| t.split_whitespace().collect()).unwrap_or_default();
    let vector = |tokens: &[&str]| -> Result<Vector3<f64>> {
        if tokens.len() != 3 {
            return Err(parse_error(path, line, "expected three components"));
        }
        Ok(Vector3::new(
            parse_float(path, line, tokens[0])?,
            parse_float(path, line, tokens[1])?,
            parse_float(path, line, tokens[2])?,
        ))
    };
    match head.as_slice() {
        ["point", v] => {
            let vertex = parse_index(path, line, v)?;
            let spec = if tail.is_empty() { PointSpec::Current } else { PointSpec::At(vector(&tail)?) };
            config.points.push((vertex, spec));
        }
        ["flux", v] => config.fluxes.push(FluxConstraint {
            vertex: parse_index(path, line, v)?,
            flux: vector(&tail)?,
        }),
        ["scale", v] => {
            let mode = match tail.get(1).copied() {
                None | Some("vertex") => ScaleMode::Vertex,
                Some("link") => ScaleMode::Link,
                Some(m) => return Err(parse_error(path, line, format!("unknown scale mode `{m}`"))),
            };
            if tail.is_empty() || tail.len() > 2 {
                return Err(parse_error(path, line, "expected `scale V = u [vertex|link]`"));
            }
            config.scales.push(ScaleConstraint {
                vertex: parse_index(path, line, v)?,
                value: parse_float(path, line, tail[0])?,
                mode,
            });
        }
        ["identify", a, b] if tail.is_empty() => {
            config.identifications.push((parse_index(path, line, a)?, parse_index(path, line, b)?));
        }
        _ => return Err(parse_error(path, line, format!("unrecognized constraint `{content}`"))),
    }
    Ok(())
}

/// A scene with its mesh loaded and its constraints resolved and validated.
#[derive(Clone, Debug)]
pub struct LoadedScene {
    pub config: SceneConfig,
    pub surface: SimplicialSurface,
    pub positions: Vec<Point>,
    pub constraints: ConstraintSet,
}

pub fn read_scene(path: impl AsRef<Path>) -> Result<LoadedScene> {
    let path = path.as_ref();
    let text = super::read_text(path)?;
    let config = parse_scene(&text, path)?;
    load(config)
}

fn read_reference(config: &SceneConfig, surface: &SimplicialSurface, f: &[Point]) -> Result<DiscreteMetric> {
    let Some(p) = &config.reference else {
        return induced_metric(surface, f);
    };
    let p = config.resolve(p);
    if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj")) {
        let (other, g) = read_obj(&p)?;
        if other.faces() != surface.faces() || other.vertex_count() != surface.vertex_count() {
            return Err(Error::Validation(format!("{}: faces differ from the mesh", p.display())));
        }
        induced_metric(surface, &g)
    } else {
        let metric = DiscreteMetric::new(read_sidecar(&p, surface)?);
        metric.validate(surface)?;
        Ok(metric)
    }
}

fn load(config: SceneConfig) -> Result<LoadedScene> {
    let (surface, positions) = read_obj(config.resolve(&config.mesh))?;
    let mut constraints = ConstraintSet::new(config.objective);
    let needs_reference = !config.scales.is_empty() || config.conformal == ConformalSource::Reference;
    let reference = if needs_reference { Some(read_reference(&config, &surface, &positions)?) } else { None };

    let class = match &config.conformal {
        ConformalSource::None => None,
        ConformalSource::Mesh => Some(extended_cross_ratio(&surface, &induced_metric(&surface, &positions)?)),
        ConformalSource::Reference => Some(extended_cross_ratio(&surface, reference.as_ref().expect("loaded"))),
        ConformalSource::File(p) => Some(ConformalClass {
            values: read_sidecar(config.resolve(p), &surface)?,
            provenance: Provenance::UserSupplied,
        }),
    };
    if let Some(class) = class {
        let b = surface.boundary_component_count();
        let boundary_active = match &config.boundary_rows {
            None => vec![true; b],
            Some(rows) if rows.is_empty() => vec![false; b],
            Some(rows) if rows.len() == b => rows.clone(),
            Some(rows) => {
                return Err(Error::Validation(format!(
                    "boundary-rows lists {} components, the mesh has {b}",
                    rows.len()
                )))
            }
        };
        constraints.conformal = Some(ConformalTarget { class, boundary_active });
    }

    let n = surface.vertex_count();
    for &(v, spec) in &config.points {
        if v >= n {
            return Err(Error::Validation(format!("point constraint on unknown vertex {v}")));
        }
        let target = match spec {
            PointSpec::Current => positions[v],
            PointSpec::At(p) => p,
        };
        constraints.points.push(PointConstraint { vertex: v, target });
    }
    constraints.scales = config.scales.clone();
    constraints.reference = if config.scales.is_empty() { None } else { reference };
    constraints.fluxes = config.fluxes.clone();
    constraints.identifications = config.identifications.clone();
    constraints.area = config.area.map(|t| match t {
        AreaTarget::Initial => solver::area(&surface, &positions).value,
        AreaTarget::Value(x) => x,
    });
    constraints.volume = match config.volume {
        None => None,
        Some(AreaTarget::Value(x)) => Some(x),
        Some(AreaTarget::Initial) => Some(solver::volume(&surface, &positions)?.value),
    };
    constraints.validate(&surface)?;
    Ok(LoadedScene {
        config,
        surface,
        positions,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SceneConfig> {
        parse_scene(text, Path::new("dir/scene.txt"))
    }

    #[test]
    fn minimal_scene_takes_defaults() {
        let c = parse("confspline-scene 1\nmesh = m.obj\n").unwrap();
        assert_eq!(c, SceneConfig::minimal(PathBuf::from("dir"), "m.obj".into()));
        assert_eq!(c.resolve(&c.mesh), PathBuf::from("dir/m.obj"));
    }

    #[test]
    fn full_scene() {
        let text = "confspline-scene 1\n\
            mesh = m.obj   # comment\n\
            reference = r.metric\n\
            conformal = file xi.txt\n\
            boundary-rows = on off\n\
            objective = area\n\
            area = initial\n\
            volume = 2.5\n\
            tolerance = 1e-9\n\
            max-iterations = 7\n\
            constraints\n\
              point 0\n\
              point 4 = 1 2 3\n\
              scale 5 = 0.25 link\n\
              scale 6 = -1\n\
              flux 2 = 0 0 1\n\
              identify 1 3\n\
            end\n";
        let c = parse(text).unwrap();
        assert_eq!(c.conformal, ConformalSource::File("xi.txt".into()));
        assert_eq!(c.boundary_rows, Some(vec![true, false]));
        assert_eq!(c.objective, Objective::Area);
        assert_eq!((c.area, c.volume), (Some(AreaTarget::Initial), Some(AreaTarget::Value(2.5))));
        assert_eq!((c.options.tolerance, c.options.max_iterations), (1e-9, 7));
        assert_eq!(c.points, vec![(0, PointSpec::Current), (4, PointSpec::At(Vector3::new(1.0, 2.0, 3.0)))]);
        assert_eq!(c.scales[0].mode, ScaleMode::Link);
        assert_eq!((c.scales[1].value, c.scales[1].mode), (-1.0, ScaleMode::Vertex));
        assert_eq!(c.fluxes[0].vertex, 2);
        assert_eq!(c.identifications, vec![(1, 3)]);
        let mut r = Report::new("echo");
        c.echo(&mut r);
        assert!(r.to_key_value().contains("scene.scale.5 = 0.25 link\n"));
    }

    #[test]
    fn malformed_scenes_name_the_line() {
        let cases = [
            ("mesh = m.obj\n", 1),
            ("confspline-scene 1\nmesh = a\nmesh = b\n", 3),
            ("confspline-scene 1\nmesh = a\ncolour = red\n", 3),
            ("confspline-scene 1\nmesh = a\nconstraints\npoint x\nend\n", 4),
            ("confspline-scene 1\nmesh = a\nconstraints\nflux 1 = 0 1\nend\n", 4),
            ("confspline-scene 1\nmesh = a\nconstraints\nscale 1 = 0 cone\nend\n", 4),
            ("confspline-scene 1\nmesh = a\nconstraints\npoint 1\n", 4),
            ("confspline-scene 1\nmesh = a\ntolerance = -1\n", 3),
        ];
        for (text, expected) in cases {
            match parse(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(parse("confspline-scene 1\nobjective = area\n"), Err(Error::Validation(_))));
        assert!(matches!(
            parse("confspline-scene 1\nmesh = a\nconformal = reference\n"),
            Err(Error::Validation(_))
        ));
    }
}

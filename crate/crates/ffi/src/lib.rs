//! C interface to `confspline`.
//!
//! Meshes live behind an opaque [`ConfsplineMesh`] handle. Every function
//! returns a [`ConfsplineStatus`]; on failure a message is kept per thread
//! and can be read with [`confspline_last_error`]. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use confspline::conformal::induced_metric;
use confspline::diagnostics::conservation_report;
use confspline::io::{read_obj, write_obj};
use confspline::solver::{newton_solve, ConstraintSet, ConstraintSystem, Objective, PointConstraint, SolverOptions};
use confspline::willmore::{willmore_energy, willmore_gradient};
use confspline::{Error, Point, SimplicialSurface};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfsplineStatus {
    Ok = 0,
    /// A required pointer was null or a buffer had the wrong length.
    InvalidArgument = 1,
    /// Malformed or inconsistent input data.
    InputError = 2,
    /// The solver did not converge or the system was singular.
    NumericalError = 3,
    /// An internal panic was caught.
    Panic = 4,
}

/// Triangle mesh with vertex positions.
pub struct ConfsplineMesh {
    surface: SimplicialSurface,
    positions: Vec<Point>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ConfsplineStatus, message: &str) -> ConfsplineStatus {
    set_error(message);
    status
}

fn from_error(e: &Error) -> ConfsplineStatus {
    let status = if e.is_numerical() { ConfsplineStatus::NumericalError } else { ConfsplineStatus::InputError };
    fail(status, &e.to_string())
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), ConfsplineStatus>) -> ConfsplineStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ConfsplineStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ConfsplineStatus::Panic, &message)
        }
    }
}

fn check<T>(result: confspline::Result<T>) -> Result<T, ConfsplineStatus> {
    result.map_err(|e| from_error(&e))
}

fn invalid(message: &str) -> ConfsplineStatus {
    fail(ConfsplineStatus::InvalidArgument, message)
}

unsafe fn mesh_ref<'a>(mesh: *const ConfsplineMesh) -> Result<&'a ConfsplineMesh, ConfsplineStatus> {
    mesh.as_ref().ok_or_else(|| invalid("mesh is null"))
}

unsafe fn path_arg(path: *const c_char) -> Result<String, ConfsplineStatus> {
    if path.is_null() {
        return Err(invalid("path is null"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_string)
        .map_err(|_| invalid("path is not UTF-8"))
}

unsafe fn output<T>(out: *mut T, value: T) -> Result<(), ConfsplineStatus> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn confspline_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn confspline_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a mesh from `3 * vertex_count` coordinates and `3 * face_count`
/// zero-based vertex indices.
///
/// # Safety
/// `positions` and `faces` must point to arrays of the stated lengths and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_new(
    positions: *const f64,
    vertex_count: usize,
    faces: *const u32,
    face_count: usize,
    out: *mut *mut ConfsplineMesh,
) -> ConfsplineStatus {
    guard(|| {
        if positions.is_null() || faces.is_null() || out.is_null() {
            return Err(invalid("null argument"));
        }
        let p = std::slice::from_raw_parts(positions, 3 * vertex_count);
        let f = std::slice::from_raw_parts(faces, 3 * face_count);
        if p.iter().any(|x| !x.is_finite()) {
            return Err(fail(ConfsplineStatus::InputError, "non-finite position"));
        }
        let points = p.chunks(3).map(|c| Point::new(c[0], c[1], c[2])).collect();
        let tris = f.chunks(3).map(|c| [c[0] as usize, c[1] as usize, c[2] as usize]).collect();
        let surface = check(SimplicialSurface::new(vertex_count, tris))?;
        output(out, Box::into_raw(Box::new(ConfsplineMesh { surface, positions: points })))
    })
}

/// Reads a triangle OBJ file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_read_obj(path: *const c_char, out: *mut *mut ConfsplineMesh) -> ConfsplineStatus {
    guard(|| {
        let path = path_arg(path)?;
        let (surface, positions) = check(read_obj(path))?;
        output(out, Box::into_raw(Box::new(ConfsplineMesh { surface, positions })))
    })
}

/// # Safety
/// `mesh` must be a valid handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_write_obj(mesh: *const ConfsplineMesh, path: *const c_char) -> ConfsplineStatus {
    guard(|| {
        let m = mesh_ref(mesh)?;
        check(write_obj(path_arg(path)?, &m.surface, &m.positions))
    })
}

/// Releases a mesh. Null is ignored.
///
/// # Safety
/// `mesh` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_free(mesh: *mut ConfsplineMesh) {
    if !mesh.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(mesh))));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `mesh` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_vertex_count(mesh: *const ConfsplineMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.surface.vertex_count())
}

/// Number of faces, or 0 for a null handle.
///
/// # Safety
/// `mesh` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_face_count(mesh: *const ConfsplineMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.surface.face_count())
}

/// Copies the positions into `out`, which holds `len = 3 * vertex_count`
/// doubles.
///
/// # Safety
/// `mesh` must be a valid handle and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn confspline_mesh_positions(mesh: *const ConfsplineMesh, out: *mut f64, len: usize) -> ConfsplineStatus {
    guard(|| {
        let m = mesh_ref(mesh)?;
        if out.is_null() || len != 3 * m.positions.len() {
            return Err(invalid("output buffer must hold 3 * vertex_count doubles"));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (c, p) in dst.chunks_mut(3).zip(&m.positions) {
            c.copy_from_slice(p.as_slice());
        }
        Ok(())
    })
}

/// Total discrete Willmore energy.
///
/// # Safety
/// `mesh` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn confspline_willmore_energy(mesh: *const ConfsplineMesh, out: *mut f64) -> ConfsplineStatus {
    guard(|| {
        let m = mesh_ref(mesh)?;
        let w = check(willmore_energy(&m.surface, &m.positions))?;
        output(out, w.total)
    })
}

/// Energy gradient, `3 * vertex_count` doubles.
///
/// # Safety
/// `mesh` must be a valid handle and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn confspline_willmore_gradient(mesh: *const ConfsplineMesh, out: *mut f64, len: usize) -> ConfsplineStatus {
    guard(|| {
        let m = mesh_ref(mesh)?;
        if out.is_null() || len != 3 * m.positions.len() {
            return Err(invalid("output buffer must hold 3 * vertex_count doubles"));
        }
        let g = check(willmore_gradient(&m.surface, &m.positions))?;
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (c, v) in dst.chunks_mut(3).zip(g.values()) {
            c.copy_from_slice(v.as_slice());
        }
        Ok(())
    })
}

/// Largest relative residual of the four conservation identities.
///
/// # Safety
/// `mesh` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn confspline_conservation_residual(mesh: *const ConfsplineMesh, out: *mut f64) -> ConfsplineStatus {
    guard(|| {
        let m = mesh_ref(mesh)?;
        let r = check(conservation_report(&m.surface, &m.positions))?;
        output(out, r.max())
    })
}

/// Minimizes the Willmore energy in the mesh's own conformal class with the
/// listed vertices held at `targets` (`3 * count` doubles; null keeps them
/// in place). Positions are updated in place, also when the solver stops
/// without converging. `iterations` may be null.
///
/// # Safety
/// `mesh` must be a valid handle; `vertices` must hold `count` indices and
/// `targets`, when not null, `3 * count` doubles.
#[no_mangle]
pub unsafe extern "C" fn confspline_solve_pinned(
    mesh: *mut ConfsplineMesh,
    vertices: *const u32,
    targets: *const f64,
    count: usize,
    max_iterations: usize,
    iterations: *mut usize,
) -> ConfsplineStatus {
    guard(|| {
        let m = mesh.as_mut().ok_or_else(|| invalid("mesh is null"))?;
        if vertices.is_null() && count > 0 {
            return Err(invalid("vertices is null"));
        }
        let ids: &[u32] = if count == 0 { &[] } else { std::slice::from_raw_parts(vertices, count) };
        let goals: Option<&[f64]> = (!targets.is_null()).then(|| std::slice::from_raw_parts(targets, 3 * count));
        let metric = check(induced_metric(&m.surface, &m.positions))?;
        let mut cs = ConstraintSet::new(Objective::Willmore).with_conformal_class(&m.surface, &metric);
        for (k, &v) in ids.iter().enumerate() {
            let v = v as usize;
            let target = match goals {
                Some(t) => Point::new(t[3 * k], t[3 * k + 1], t[3 * k + 2]),
                None => *m.positions.get(v).ok_or_else(|| fail(ConfsplineStatus::InputError, "vertex out of range"))?,
            };
            cs.points.push(PointConstraint { vertex: v, target });
        }
        let options = SolverOptions { max_iterations, ..SolverOptions::default() };
        let system = check(ConstraintSystem::new(&m.surface, &cs))?;
        let sol = check(newton_solve(&m.surface, &m.positions, system, &options))?;
        m.positions.clone_from(&sol.state.positions);
        if !iterations.is_null() {
            iterations.write(sol.state.iterations);
        }
        match sol.error() {
            None => Ok(()),
            Some(e) => Err(from_error(&e)),
        }
    })
}

//! Damped Newton iteration with a backtracking line search on `‖r‖²`.

use nalgebra::Vector3;

use super::linsolve::{self, SparseSystem};
use super::system::ConstraintSystem;
use super::{assemble_jacobian, QuadraticDifferential};
use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};
use crate::Point;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Bound on the Euclidean norm of the stationarity residual.
    pub tolerance: f64,
    /// Bound on the ∞-norm of the constraint residual.
    pub constraint_tolerance: f64,
    pub max_iterations: usize,
    /// First nonzero Levenberg shift of the primal block.
    pub initial_damping: f64,
    pub damping_factor: f64,
    pub max_damping: f64,
    /// Shift `−δI` on the multiplier block; keeps the system solvable when
    /// constraint rows are linearly dependent.
    pub regularization: f64,
    pub armijo: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            constraint_tolerance: 1e-8,
            max_iterations: 200,
            initial_damping: 1e-8,
            damping_factor: 10.0,
            max_damping: 1e6,
            regularization: 1e-10,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub stationarity: f64,
    pub feasibility: f64,
    pub step: f64,
    pub damping: f64,
}

#[derive(Clone, Debug)]
pub struct SolverState {
    pub positions: Vec<Point>,
    pub multipliers: Vec<f64>,
    pub stationarity_norm: f64,
    pub feasibility_norm: f64,
    pub iterations: usize,
    pub damping: f64,
    pub history: Vec<IterationRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
    LineSearchFailure,
    SingularKkt,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max-iterations",
            Termination::LineSearchFailure => "line-search-failure",
            Termination::SingularKkt => "singular-kkt",
        }
    }
}

/// Final (or best) iterate together with the reason the iteration stopped.
#[derive(Clone, Debug)]
pub struct Solution {
    pub state: SolverState,
    pub termination: Termination,
    pub system: ConstraintSystem,
}

impl Solution {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn error(&self) -> Option<Error> {
        let s = &self.state;
        match self.termination {
            Termination::Converged => None,
            Termination::MaxIterations => Some(Error::MaxIterations {
                iterations: s.iterations,
                stationarity: s.stationarity_norm,
                feasibility: s.feasibility_norm,
            }),
            Termination::LineSearchFailure => Some(Error::LineSearchFailure(s.iterations)),
            Termination::SingularKkt => Some(Error::SingularKkt),
        }
    }

    pub fn into_result(self) -> Result<SolverState> {
        match self.error() {
            None => Ok(self.state),
            Some(e) => Err(e),
        }
    }

    /// Recovered flux at each point constraint.
    pub fn point_fluxes(&self) -> Vec<Vector3<f64>> {
        self.system.point_fluxes(&self.state.multipliers)
    }

    /// `q = Cᵀλ` of the conformal rows alone.
    pub fn quadratic_differential(&self) -> QuadraticDifferential {
        let lambda = self.system.conformal_multipliers(&self.state.multipliers);
        let rows = self.system.conformal_rows;
        let mut op = crate::sparse::SparseRows::new(self.system.log_rows.cols);
        op.rows = self.system.log_rows.rows[..rows].to_vec();
        QuadraticDifferential(op.apply_transpose(lambda))
    }
}

struct Evaluation {
    residual: Vec<f64>,
    merit: f64,
    stationarity: f64,
    feasibility: f64,
}

fn evaluate(surface: &SimplicialSurface, system: &ConstraintSystem, f: &[Point], lambda: &[f64]) -> Result<Evaluation> {
    let s = system.stationarity(surface, f, lambda)?;
    let c = system.values(surface, f)?;
    let mut residual: Vec<f64> = s.values().iter().flat_map(|v| v.iter().copied()).collect();
    let stationarity = residual.iter().map(|x| x * x).sum::<f64>().sqrt();
    let feasibility = c.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    residual.extend(c);
    let merit = residual.iter().map(|x| x * x).sum();
    if !(f64::is_finite(merit)) {
        return Err(Error::SingularConfiguration("non-finite residual".into()));
    }
    Ok(Evaluation {
        residual,
        merit,
        stationarity,
        feasibility,
    })
}

fn shifted(base: &SparseSystem, primal: usize, damping: f64, regularization: f64) -> SparseSystem {
    let mut out = base.clone();
    if damping > 0.0 {
        out.triplets.extend((0..primal).map(|i| (i, i, damping)));
    }
    if regularization > 0.0 {
        out.triplets.extend((primal..base.dim).map(|i| (i, i, -regularization)));
    }
    out
}

/// Runs Newton's method from `f0` with zero initial multipliers.
pub fn newton_solve(
    surface: &SimplicialSurface,
    f0: &[Point],
    system: ConstraintSystem,
    options: &SolverOptions,
) -> Result<Solution> {
    crate::conformal::check_len(surface.vertex_count(), f0.len())?;
    let np = system.primal_len();
    let mut f = f0.to_vec();
    let mut lambda = vec![0.0; system.multiplier_len()];
    let mut eval = evaluate(surface, &system, &f, &lambda)?;
    let mut damping = 0.0;
    let mut history = Vec::new();
    let mut iterations = 0;

    let finish = |f: Vec<Point>, lambda: Vec<f64>, eval: &Evaluation, iterations, damping, history, termination, system| {
        Ok(Solution {
            state: SolverState {
                positions: f,
                multipliers: lambda,
                stationarity_norm: eval.stationarity,
                feasibility_norm: eval.feasibility,
                iterations,
                damping,
                history,
            },
            termination,
            system,
        })
    };

    loop {
        if eval.stationarity < options.tolerance && eval.feasibility < options.constraint_tolerance {
            return finish(f, lambda, &eval, iterations, damping, history, Termination::Converged, system);
        }
        if iterations >= options.max_iterations {
            return finish(f, lambda, &eval, iterations, damping, history, Termination::MaxIterations, system);
        }
        let base = assemble_jacobian(surface, &system, &f, &lambda)?;
        let rhs: Vec<f64> = eval.residual.iter().map(|r| -r).collect();

        let mut rho = damping;
        let mut accepted = None;
        let mut last_failure = Termination::SingularKkt;
        loop {
            let kkt = shifted(&base, np, rho, options.regularization);
            if let Some(z) = linsolve::solve(&kkt, &rhs) {
                match line_search(surface, &system, &f, &lambda, &z, np, &eval, options) {
                    Some(step) => {
                        accepted = Some(step);
                        break;
                    }
                    None => last_failure = Termination::LineSearchFailure,
                }
            } else {
                last_failure = Termination::SingularKkt;
            }
            rho = if rho == 0.0 {
                options.initial_damping
            } else {
                rho * options.damping_factor
            };
            if rho > options.max_damping {
                break;
            }
        }
        let Some((alpha, nf, nl, ne)) = accepted else {
            return finish(f, lambda, &eval, iterations, rho, history, last_failure, system);
        };
        iterations += 1;
        f = nf;
        lambda = nl;
        eval = ne;
        history.push(IterationRecord {
            iteration: iterations,
            stationarity: eval.stationarity,
            feasibility: eval.feasibility,
            step: alpha,
            damping: rho,
        });
        damping = if rho / options.damping_factor < options.initial_damping {
            0.0
        } else {
            rho / options.damping_factor
        };
    }
}

#[allow(clippy::too_many_arguments)]
fn line_search(
    surface: &SimplicialSurface,
    system: &ConstraintSystem,
    f: &[Point],
    lambda: &[f64],
    z: &[f64],
    np: usize,
    eval: &Evaluation,
    options: &SolverOptions,
) -> Option<(f64, Vec<Point>, Vec<f64>, Evaluation)> {
    let mut alpha = 1.0;
    for _ in 0..options.max_backtracks {
        let nf: Vec<Point> = f
            .iter()
            .enumerate()
            .map(|(v, p)| p + Vector3::new(z[3 * v], z[3 * v + 1], z[3 * v + 2]) * alpha)
            .collect();
        let nl: Vec<f64> = lambda.iter().zip(&z[np..]).map(|(l, d)| l - alpha * d).collect();
        if let Ok(ne) = evaluate(surface, system, &nf, &nl) {
            if ne.merit <= (1.0 - 2.0 * options.armijo * alpha) * eval.merit {
                return Some((alpha, nf, nl, ne));
            }
        }
        alpha *= options.backtrack;
    }
    None
}

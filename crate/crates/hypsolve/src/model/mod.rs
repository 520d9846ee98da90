//! Hyperbolic-model contract and the concrete systems used in the
//! validation runs.
//!
//! A model supplies fluxes, Jacobians, a complete eigensystem of the
//! directional flux Jacobian, and the (possibly stiff) source term with its
//! Jacobian. All evaluations are pure functions of the state.

mod euler;
mod relaxation;
mod scalar;

pub use euler::{Primitives, ReactiveEuler};
pub use relaxation::{linear_relaxation, nonlinear_relaxation, LinearRelaxation, NonlinearRelaxation};
pub use scalar::{burgers_source, linear_advection, ScalarLaw};

use crate::error::{Result, SolverError};
use crate::linalg::{StateMat, StateVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

/// Eigendecomposition of a directional flux Jacobian: `left * A * right`
/// is diagonal with entries `lambda`, and `left * right = I`.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem {
    pub lambda: StateVec,
    /// Left eigenvectors as rows.
    pub left: StateMat,
    /// Right eigenvectors as columns.
    pub right: StateMat,
}

pub trait Model: Send + Sync {
    fn num_components(&self) -> usize;
    fn name(&self) -> &'static str;

    fn flux(&self, u: &StateVec, dir: Direction) -> StateVec;
    fn flux_jacobian(&self, u: &StateVec, dir: Direction) -> StateMat;
    fn eigensystem(&self, u: &StateVec, dir: Direction) -> Result<EigenSystem>;

    fn source(&self, u: &StateVec) -> StateVec;
    fn source_jacobian(&self, u: &StateVec) -> StateMat;

    /// Spectral radius of the directional flux Jacobian.
    fn max_wave_speed(&self, u: &StateVec, dir: Direction) -> Result<f64> {
        Ok(self.eigensystem(u, dir)?.lambda.norm_inf())
    }

    fn check_admissible(&self, _u: &StateVec) -> Result<()> {
        Ok(())
    }

    /// Whether the interior flux splitting should project onto
    /// characteristic variables (systems with genuinely nonlinear
    /// acoustic waves) or work component-wise.
    fn use_characteristic_splitting(&self) -> bool {
        false
    }

    /// Solve `U - coef * Q(U) = rhs` for `U` (the diagonally implicit
    /// per-point stage equation). The default is a Newton iteration with
    /// the analytic source Jacobian; models with special structure
    /// override this.
    fn implicit_solve(&self, rhs: &StateVec, coef: f64) -> Result<StateVec> {
        newton_implicit_solve(self, rhs, coef)
    }
}

pub(crate) const NEWTON_TOL: f64 = 1e-12;
pub(crate) const NEWTON_MAX_ITER: usize = 50;

/// Generic Newton iteration for `U - coef*Q(U) = rhs`, initial guess `rhs`.
pub fn newton_implicit_solve<M: Model + ?Sized>(
    model: &M,
    rhs: &StateVec,
    coef: f64,
) -> Result<StateVec> {
    let m = rhs.len();
    if coef == 0.0 {
        return Ok(*rhs);
    }
    let mut u = *rhs;
    for _ in 0..NEWTON_MAX_ITER {
        let q = model.source(&u);
        let mut res = u;
        res.axpy(-coef, &q);
        res.axpy(-1.0, rhs);
        // the residual's rounding floor scales with the stiff term
        let tol = NEWTON_TOL * (1.0 + rhs.norm_inf() + coef.abs() * q.norm_inf());
        if res.norm_inf() <= tol {
            return Ok(u);
        }
        let mut jac = StateMat::identity(m);
        let qj = model.source_jacobian(&u);
        for i in 0..m {
            for j in 0..m {
                jac.set(i, j, jac.get(i, j) - coef * qj.get(i, j));
            }
        }
        let delta = jac
            .solve(&res)
            .ok_or_else(|| SolverError::SingularStageMatrix("implicit point solve".into()))?;
        u.axpy(-1.0, &delta);
        // in the stiff regime the raw residual bottoms out at
        // ||coef Q_U|| * machine epsilon; the Newton step does not
        if delta.norm_inf() <= NEWTON_TOL * (1.0 + u.norm_inf()) {
            return Ok(u);
        }
    }
    // accept if the final residual is at tolerance
    let q = model.source(&u);
    let mut res = u;
    res.axpy(-coef, &q);
    res.axpy(-1.0, rhs);
    let tol = NEWTON_TOL * (1.0 + rhs.norm_inf() + coef.abs() * q.norm_inf());
    if res.norm_inf() <= tol {
        Ok(u)
    } else {
        Err(SolverError::NewtonDivergence(format!(
            "implicit point solve: residual {:.3e} after {} iterations",
            res.norm_inf(),
            NEWTON_MAX_ITER
        )))
    }
}

/// Central finite-difference Jacobian of a vector map; used as the
/// consistency oracle for the analytic Jacobians and as a fallback for
/// user-defined models without analytic derivatives.
pub fn fd_jacobian<F: Fn(&StateVec) -> StateVec>(f: F, u: &StateVec, h: f64) -> StateMat {
    let m = u.len();
    let mut jac = StateMat::zeros(m);
    for j in 0..m {
        let mut up = *u;
        let mut um = *u;
        let step = h * (1.0 + u[j].abs());
        up[j] += step;
        um[j] -= step;
        let fp = f(&up);
        let fm = f(&um);
        for i in 0..m {
            jac.set(i, j, (fp[i] - fm[i]) / (2.0 * step));
        }
    }
    jac
}

pub const MODEL_NAMES: &[&str] = &[
    "burgers_source",
    "linear_relax",
    "nonlinear_relax",
    "reactive_euler",
];

/// Look up a model by its config name. `params` carries the per-model
/// sub-keys (epsilon; gamma, q, T_act, K_rate).
pub fn model_by_name(name: &str, params: &ModelParams) -> Result<Box<dyn Model>> {
    match name {
        "burgers_source" => Ok(Box::new(burgers_source())),
        "linear_relax" => Ok(Box::new(linear_relaxation(
            params.epsilon.ok_or_else(|| missing("epsilon"))?,
        )?)),
        "nonlinear_relax" => Ok(Box::new(nonlinear_relaxation(
            params.epsilon.ok_or_else(|| missing("epsilon"))?,
        )?)),
        "reactive_euler" => {
            let gamma = params.gamma.unwrap_or(1.2);
            let q = params.q.unwrap_or(50.0);
            let t_act = params.t_act.unwrap_or(50.0);
            let k_rate = params.k_rate.unwrap_or(2566.4);
            Ok(Box::new(ReactiveEuler::new(gamma, q, t_act, k_rate)?))
        }
        other => Err(SolverError::Config(format!("unknown model '{other}'"))),
    }
}

fn missing(key: &str) -> SolverError {
    SolverError::Config(format!("model parameter '{key}' is required"))
}

#[derive(Clone, Debug, Default, serde::Deserialize, serde::Serialize)]
pub struct ModelParams {
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub q: Option<f64>,
    pub t_act: Option<f64>,
    pub k_rate: Option<f64>,
}

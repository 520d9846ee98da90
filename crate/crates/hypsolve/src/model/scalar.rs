//! Scalar conservation laws `u_t + f(u)_x = q(u)`.

use super::{Direction, EigenSystem, Model};
use crate::error::Result;
use crate::linalg::{StateMat, StateVec};

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar law defined by closures for the flux, its derivative, the
/// source and its derivative.
pub struct ScalarLaw {
    name: &'static str,
    f: ScalarFn,
    df: ScalarFn,
    q: ScalarFn,
    dq: ScalarFn,
}

impl ScalarLaw {
    pub fn new(name: &'static str, f: ScalarFn, df: ScalarFn, q: ScalarFn, dq: ScalarFn) -> Self {
        Self { name, f, df, q, dq }
    }
}

/// `u_t + u u_x = u^2 + u`, i.e. flux u^2/2 with a quadratic source.
pub fn burgers_source() -> ScalarLaw {
    ScalarLaw::new(
        "burgers_source",
        Box::new(|u| 0.5 * u * u),
        Box::new(|u| u),
        Box::new(|u| u * u + u),
        Box::new(|u| 2.0 * u + 1.0),
    )
}

/// `u_t + u_x = 0`; used by the intermediate-stage boundary oracle.
pub fn linear_advection() -> ScalarLaw {
    ScalarLaw::new(
        "linear_advection",
        Box::new(|u| u),
        Box::new(|_| 1.0),
        Box::new(|_| 0.0),
        Box::new(|_| 0.0),
    )
}

impl Model for ScalarLaw {
    fn num_components(&self) -> usize {
        1
    }

    fn name(&self) -> &'static str {
        self.name
    }

    fn flux(&self, u: &StateVec, dir: Direction) -> StateVec {
        debug_assert_eq!(dir, Direction::X);
        StateVec::scalar((self.f)(u[0]))
    }

    fn flux_jacobian(&self, u: &StateVec, dir: Direction) -> StateMat {
        debug_assert_eq!(dir, Direction::X);
        let mut a = StateMat::zeros(1);
        a.set(0, 0, (self.df)(u[0]));
        a
    }

    fn eigensystem(&self, u: &StateVec, dir: Direction) -> Result<EigenSystem> {
        debug_assert_eq!(dir, Direction::X);
        Ok(EigenSystem {
            lambda: StateVec::scalar((self.df)(u[0])),
            left: StateMat::identity(1),
            right: StateMat::identity(1),
        })
    }

    fn source(&self, u: &StateVec) -> StateVec {
        StateVec::scalar((self.q)(u[0]))
    }

    fn source_jacobian(&self, u: &StateVec) -> StateMat {
        let mut j = StateMat::zeros(1);
        j.set(0, 0, (self.dq)(u[0]));
        j
    }
}

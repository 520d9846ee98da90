//! The 2x2 relaxation systems with stiffness parameter epsilon.

use super::{Direction, EigenSystem, Model};
use crate::error::{Result, SolverError};
use crate::linalg::{StateMat, StateVec};

/// `u_t + v_x = 0`, `v_t + u_x = -(u+v)/eps`.
pub struct LinearRelaxation {
    eps: f64,
}

pub fn linear_relaxation(eps: f64) -> Result<LinearRelaxation> {
    if eps <= 0.0 {
        return Err(SolverError::NonpositiveEpsilon(eps));
    }
    Ok(LinearRelaxation { eps })
}

impl Model for LinearRelaxation {
    fn num_components(&self) -> usize {
        2
    }

    fn name(&self) -> &'static str {
        "linear_relax"
    }

    fn flux(&self, s: &StateVec, dir: Direction) -> StateVec {
        debug_assert_eq!(dir, Direction::X);
        StateVec::from_slice(&[s[1], s[0]])
    }

    fn flux_jacobian(&self, _s: &StateVec, dir: Direction) -> StateMat {
        debug_assert_eq!(dir, Direction::X);
        StateMat::from_rows(&[
            StateVec::from_slice(&[0.0, 1.0]),
            StateVec::from_slice(&[1.0, 0.0]),
        ])
    }

    fn eigensystem(&self, _s: &StateVec, dir: Direction) -> Result<EigenSystem> {
        debug_assert_eq!(dir, Direction::X);
        Ok(EigenSystem {
            lambda: StateVec::from_slice(&[1.0, -1.0]),
            left: StateMat::from_rows(&[
                StateVec::from_slice(&[0.5, 0.5]),
                StateVec::from_slice(&[0.5, -0.5]),
            ]),
            right: StateMat::from_rows(&[
                StateVec::from_slice(&[1.0, 1.0]),
                StateVec::from_slice(&[1.0, -1.0]),
            ]),
        })
    }

    fn source(&self, s: &StateVec) -> StateVec {
        StateVec::from_slice(&[0.0, -(s[0] + s[1]) / self.eps])
    }

    fn source_jacobian(&self, _s: &StateVec) -> StateMat {
        StateMat::from_rows(&[
            StateVec::from_slice(&[0.0, 0.0]),
            StateVec::from_slice(&[-1.0 / self.eps, -1.0 / self.eps]),
        ])
    }

    fn max_wave_speed(&self, _s: &StateVec, _dir: Direction) -> Result<f64> {
        Ok(1.0)
    }
}

/// `u_t + v_x = 0`, `v_t + [u + (u+v)^2/2]_x = -[u+v+(u+v)^2]/eps`;
/// admissible states satisfy `1 + u + v > 0`.
pub struct NonlinearRelaxation {
    eps: f64,
}

pub fn nonlinear_relaxation(eps: f64) -> Result<NonlinearRelaxation> {
    if eps <= 0.0 {
        return Err(SolverError::NonpositiveEpsilon(eps));
    }
    Ok(NonlinearRelaxation { eps })
}

impl NonlinearRelaxation {
    fn w(&self, s: &StateVec) -> f64 {
        s[0] + s[1]
    }
}

impl Model for NonlinearRelaxation {
    fn num_components(&self) -> usize {
        2
    }

    fn name(&self) -> &'static str {
        "nonlinear_relax"
    }

    fn flux(&self, s: &StateVec, dir: Direction) -> StateVec {
        debug_assert_eq!(dir, Direction::X);
        let w = self.w(s);
        StateVec::from_slice(&[s[1], s[0] + 0.5 * w * w])
    }

    fn flux_jacobian(&self, s: &StateVec, dir: Direction) -> StateMat {
        debug_assert_eq!(dir, Direction::X);
        let w = self.w(s);
        StateMat::from_rows(&[
            StateVec::from_slice(&[0.0, 1.0]),
            StateVec::from_slice(&[1.0 + w, w]),
        ])
    }

    fn eigensystem(&self, s: &StateVec, dir: Direction) -> Result<EigenSystem> {
        debug_assert_eq!(dir, Direction::X);
        let w = self.w(s);
        if 1.0 + w <= 0.0 {
            return Err(SolverError::InadmissibleState(format!(
                "1 + u + v = {} <= 0",
                1.0 + w
            )));
        }
        let left = StateMat::from_rows(&[
            StateVec::from_slice(&[1.0, 1.0]),
            StateVec::from_slice(&[1.0, -1.0 / (1.0 + w)]),
        ]);
        let d = 2.0 + w;
        let right = StateMat::from_rows(&[
            StateVec::from_slice(&[1.0 / d, (1.0 + w) / d]),
            StateVec::from_slice(&[(1.0 + w) / d, -(1.0 + w) / d]),
        ]);
        Ok(EigenSystem {
            lambda: StateVec::from_slice(&[1.0 + w, -1.0]),
            left,
            right,
        })
    }

    fn source(&self, s: &StateVec) -> StateVec {
        let w = self.w(s);
        StateVec::from_slice(&[0.0, -(w + w * w) / self.eps])
    }

    fn source_jacobian(&self, s: &StateVec) -> StateMat {
        let w = self.w(s);
        let d = -(1.0 + 2.0 * w) / self.eps;
        StateMat::from_rows(&[
            StateVec::from_slice(&[0.0, 0.0]),
            StateVec::from_slice(&[d, d]),
        ])
    }

    fn use_characteristic_splitting(&self) -> bool {
        true
    }

    fn check_admissible(&self, s: &StateVec) -> Result<()> {
        let w = self.w(s);
        if 1.0 + w <= 0.0 {
            return Err(SolverError::InadmissibleState(format!(
                "1 + u + v = {} <= 0",
                1.0 + w
            )));
        }
        Ok(())
    }

    // The characteristic polynomial factors as (lambda - 1 - w)(lambda + 1),
    // so the speed is available even at states where the eigensystem is not.
    fn max_wave_speed(&self, s: &StateVec, _dir: Direction) -> Result<f64> {
        Ok((1.0 + self.w(s)).abs().max(1.0))
    }

    /// The stage equation closes into a scalar quadratic in w = u + v:
    /// `k w^2 + (1 + k) w - r = 0` with `k = coef/eps`, `r = rhs_u + rhs_v`.
    /// Of the two roots only the one with `1 + 2w > 0` sits on the branch
    /// where the source is contractive; a Newton iterate started from a
    /// far-off guess can land on the other root (a repelling equilibrium
    /// at w = -1 in the stiff limit), so the root is picked explicitly.
    fn implicit_solve(&self, rhs: &StateVec, coef: f64) -> Result<StateVec> {
        let u = rhs[0];
        let r = rhs[0] + rhs[1];
        let k = coef / self.eps;
        let w = if k == 0.0 {
            r
        } else {
            let b = 1.0 + k;
            let disc = b * b + 4.0 * k * r;
            if disc < 0.0 {
                return Err(SolverError::InadmissibleState(format!(
                    "implicit stage equation has no real root (r = {r})"
                )));
            }
            // stable quadratic formula; the + branch has 1 + 2w > 0
            2.0 * r / (b + disc.sqrt())
        };
        Ok(StateVec::from_slice(&[u, w - u]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_relax_basics() {
        assert!(matches!(
            linear_relaxation(0.0),
            Err(SolverError::NonpositiveEpsilon(_))
        ));
        let m = linear_relaxation(0.5).unwrap();
        let s = StateVec::from_slice(&[1.0, -1.0]);
        // equilibrium u + v = 0
        assert_eq!(m.source(&s).norm_inf(), 0.0);
        let es = m.eigensystem(&s, Direction::X).unwrap();
        assert_eq!(es.lambda[0], 1.0);
        assert_eq!(es.lambda[1], -1.0);
        let j = m.source_jacobian(&s);
        assert_eq!(j.get(1, 0), -2.0);
        assert_eq!(j.get(1, 1), -2.0);
    }

    #[test]
    fn nonlinear_relax_eigensystem() {
        let m = nonlinear_relaxation(1.0).unwrap();
        let s = StateVec::from_slice(&[0.3, -0.1]);
        let es = m.eigensystem(&s, Direction::X).unwrap();
        assert!((es.lambda[0] - 1.2).abs() < 1e-14);
        assert!((es.lambda[1] + 1.0).abs() < 1e-14);
        // second left-eigenvector row matches the closed form
        assert!((es.left.get(1, 0) - 1.0).abs() < 1e-14);
        assert!((es.left.get(1, 1) + 1.0 / 1.2).abs() < 1e-14);
        // L R = I
        let prod = es.left.matmul(&es.right);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nonlinear_relax_rejects_inadmissible() {
        let m = nonlinear_relaxation(1.0).unwrap();
        let s = StateVec::from_slice(&[-0.7, -0.5]);
        assert!(m.eigensystem(&s, Direction::X).is_err());
    }
}

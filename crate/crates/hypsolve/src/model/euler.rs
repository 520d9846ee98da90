//! 2D reactive Euler equations with a one-step Arrhenius source.
//!
//! Conserved vector `U = (rho, rho*u, rho*v, E, rho*Y)` with
//! `E = rho*(u^2+v^2)/2 + p/(gamma-1) + rho*q*Y` and temperature `T = p/rho`.
//! The source acts on the reactant density only:
//! `omega = -K * rho*Y * exp(-T_act / T)`.

use super::{Direction, EigenSystem, Model};
use crate::error::{Result, SolverError};
use crate::linalg::{StateMat, StateVec};

#[derive(Clone, Copy, Debug)]
pub struct ReactiveEuler {
    pub gamma: f64,
    /// Heat release of reaction.
    pub q: f64,
    /// Activation temperature.
    pub t_act: f64,
    /// Rate coefficient.
    pub k_rate: f64,
}

/// Primitive view of a reactive Euler state.
#[derive(Clone, Copy, Debug)]
pub struct Primitives {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub y: f64,
}

impl ReactiveEuler {
    pub fn new(gamma: f64, q: f64, t_act: f64, k_rate: f64) -> Result<Self> {
        if gamma <= 1.0 || q <= 0.0 || t_act <= 0.0 || k_rate <= 0.0 {
            return Err(SolverError::InvalidModelParameter(format!(
                "reactive_euler requires gamma > 1, q > 0, T_act > 0, K > 0 (got {gamma}, {q}, {t_act}, {k_rate})"
            )));
        }
        Ok(Self {
            gamma,
            q,
            t_act,
            k_rate,
        })
    }

    /// The parameter set used throughout the 2D validation runs.
    pub fn standard() -> Self {
        Self::new(1.2, 50.0, 50.0, 2566.4).unwrap()
    }

    pub fn conserved(&self, prim: &Primitives) -> StateVec {
        let Primitives { rho, u, v, p, y } = *prim;
        let e = 0.5 * rho * (u * u + v * v) + p / (self.gamma - 1.0) + rho * self.q * y;
        StateVec::from_slice(&[rho, rho * u, rho * v, e, rho * y])
    }

    pub fn pressure(&self, s: &StateVec) -> f64 {
        let rho = s[0];
        let ke = 0.5 * (s[1] * s[1] + s[2] * s[2]) / rho;
        (self.gamma - 1.0) * (s[3] - ke - self.q * s[4])
    }

    pub fn primitives(&self, s: &StateVec) -> Primitives {
        let rho = s[0];
        Primitives {
            rho,
            u: s[1] / rho,
            v: s[2] / rho,
            p: self.pressure(s),
            y: s[4] / rho,
        }
    }

    /// Gradient of the pressure with respect to the conserved variables.
    fn pressure_gradient(&self, s: &StateVec) -> StateVec {
        let g1 = self.gamma - 1.0;
        let rho = s[0];
        let u = s[1] / rho;
        let v = s[2] / rho;
        StateVec::from_slice(&[
            g1 * 0.5 * (u * u + v * v),
            -g1 * u,
            -g1 * v,
            g1,
            -g1 * self.q,
        ])
    }

    fn sound_speed(&self, rho: f64, p: f64) -> Result<f64> {
        if rho <= 0.0 || p <= 0.0 {
            return Err(SolverError::NonphysicalState(format!(
                "rho = {rho}, p = {p}"
            )));
        }
        Ok((self.gamma * p / rho).sqrt())
    }

    /// Arrhenius factor with the continuous extension 0 for T <= 0.
    fn rate_factor(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            (-self.t_act / t).exp()
        }
    }
}

impl Model for ReactiveEuler {
    fn num_components(&self) -> usize {
        5
    }

    fn name(&self) -> &'static str {
        "reactive_euler"
    }

    fn flux(&self, s: &StateVec, dir: Direction) -> StateVec {
        let p = self.pressure(s);
        let rho = s[0];
        match dir {
            Direction::X => {
                let u = s[1] / rho;
                StateVec::from_slice(&[
                    s[1],
                    s[1] * u + p,
                    s[2] * u,
                    (s[3] + p) * u,
                    s[4] * u,
                ])
            }
            Direction::Y => {
                let v = s[2] / rho;
                StateVec::from_slice(&[
                    s[2],
                    s[1] * v,
                    s[2] * v + p,
                    (s[3] + p) * v,
                    s[4] * v,
                ])
            }
        }
    }

    fn flux_jacobian(&self, s: &StateVec, dir: Direction) -> StateMat {
        // Written for the x-direction; the y-direction swaps the roles of
        // the two momentum components.
        let (im, it) = match dir {
            Direction::X => (1, 2),
            Direction::Y => (2, 1),
        };
        let rho = s[0];
        let un = s[im] / rho; // normal velocity
        let ut = s[it] / rho; // transverse velocity
        let theta = self.pressure_gradient(s);
        let p = self.pressure(s);
        let h = (s[3] + p) / rho;

        let m = 5;
        let mut a = StateMat::zeros(m);
        // mass
        a.set(0, im, 1.0);
        // normal momentum
        for j in 0..m {
            a.set(1, j, theta[j]);
        }
        a.set(1, 0, a.get(1, 0) - un * un);
        a.set(1, im, a.get(1, im) + 2.0 * un);
        // transverse momentum
        a.set(2, 0, -un * ut);
        a.set(2, im, ut);
        a.set(2, it, un);
        // energy
        for j in 0..m {
            a.set(3, j, un * theta[j]);
        }
        a.set(3, 0, a.get(3, 0) - un * h);
        a.set(3, im, a.get(3, im) + h);
        a.set(3, 3, a.get(3, 3) + un);
        // species
        let y = s[4] / rho;
        a.set(4, 0, -un * y);
        a.set(4, im, y);
        a.set(4, 4, un);

        if dir == Direction::Y {
            // rows 1 and 2 were written as (normal, transverse); swap back.
            let r1 = a.row(1);
            let r2 = a.row(2);
            a.set_row(1, &r2);
            a.set_row(2, &r1);
        }
        a
    }

    fn eigensystem(&self, s: &StateVec, dir: Direction) -> Result<EigenSystem> {
        let (im, it) = match dir {
            Direction::X => (1, 2),
            Direction::Y => (2, 1),
        };
        let rho = s[0];
        let p = self.pressure(s);
        let c = self.sound_speed(rho, p)?;
        let un = s[im] / rho;
        let ut = s[it] / rho;
        let y = s[4] / rho;
        let h = (s[3] + p) / rho;
        let v2 = un * un + ut * ut;
        let theta = self.pressure_gradient(s);
        let c2 = c * c;

        let lambda = StateVec::from_slice(&[un - c, un, un, un, un + c]);

        // Right eigenvectors as columns; built in (normal, transverse)
        // component order then mapped to (im, it).
        let mut right = StateMat::zeros(5);
        let cols: [[f64; 5]; 5] = [
            [1.0, un - c, ut, h - un * c, y],
            [1.0, un, ut, 0.5 * v2 + self.q * y, y],
            [0.0, 0.0, 1.0, ut, 0.0],
            [0.0, 0.0, 0.0, self.q, 1.0],
            [1.0, un + c, ut, h + un * c, y],
        ];
        for (j, col) in cols.iter().enumerate() {
            right.set(0, j, col[0]);
            right.set(im, j, col[1]);
            right.set(it, j, col[2]);
            right.set(3, j, col[3]);
            right.set(4, j, col[4]);
        }

        // psi_n * dU = rho * d(un); psi_t, psi_y analogous.
        let mut psi_n = StateVec::zeros(5);
        psi_n[0] = -un;
        psi_n[im] = 1.0;
        let mut psi_t = StateVec::zeros(5);
        psi_t[0] = -ut;
        psi_t[it] = 1.0;
        let mut psi_y = StateVec::zeros(5);
        psi_y[0] = -y;
        psi_y[4] = 1.0;
        let mut e_rho = StateVec::zeros(5);
        e_rho[0] = 1.0;

        let mut left = StateMat::zeros(5);
        let mut l1 = theta.scale(0.5 / c2);
        l1.axpy(-0.5 / c, &psi_n);
        left.set_row(0, &l1);
        let mut l2 = e_rho;
        l2.axpy(-1.0 / c2, &theta);
        left.set_row(1, &l2);
        left.set_row(2, &psi_t);
        left.set_row(3, &psi_y);
        let mut l5 = theta.scale(0.5 / c2);
        l5.axpy(0.5 / c, &psi_n);
        left.set_row(4, &l5);

        Ok(EigenSystem {
            lambda,
            left,
            right,
        })
    }

    fn source(&self, s: &StateVec) -> StateVec {
        let t = self.pressure(s) / s[0];
        let omega = -self.k_rate * s[4] * self.rate_factor(t);
        let mut out = StateVec::zeros(5);
        out[4] = omega;
        out
    }

    fn source_jacobian(&self, s: &StateVec) -> StateMat {
        let mut jac = StateMat::zeros(5);
        let rho = s[0];
        let p = self.pressure(s);
        let t = p / rho;
        let factor = self.rate_factor(t);
        if factor == 0.0 {
            return jac;
        }
        let theta = self.pressure_gradient(s);
        // d(omega)/dU with omega = -K z exp(-T_act/T), z = rho Y, T = p/rho
        let z = s[4];
        for j in 0..5 {
            let dt = theta[j] / rho - if j == 0 { p / (rho * rho) } else { 0.0 };
            let mut d = z * self.t_act / (t * t) * dt;
            if j == 4 {
                d += 1.0;
            }
            jac.set(4, j, -self.k_rate * factor * d);
        }
        jac
    }

    fn max_wave_speed(&self, s: &StateVec, dir: Direction) -> Result<f64> {
        let rho = s[0];
        let p = self.pressure(s);
        let c = self.sound_speed(rho, p)?;
        let un = match dir {
            Direction::X => s[1] / rho,
            Direction::Y => s[2] / rho,
        };
        Ok(un.abs() + c)
    }

    fn check_admissible(&self, s: &StateVec) -> Result<()> {
        let rho = s[0];
        let p = self.pressure(s);
        if rho <= 0.0 || p <= 0.0 {
            return Err(SolverError::NonphysicalState(format!(
                "rho = {rho}, p = {p}"
            )));
        }
        Ok(())
    }

    fn use_characteristic_splitting(&self) -> bool {
        true
    }

    /// The source touches only the reactant density, so components 0..4
    /// pass through and the stage equation reduces to a scalar root solve
    /// for `z = rho*Y`, safeguarded by bisection.
    fn implicit_solve(&self, rhs: &StateVec, coef: f64) -> Result<StateVec> {
        let mut out = *rhs;
        if coef == 0.0 {
            return Ok(out);
        }
        let rho = rhs[0];
        let ke = 0.5 * (rhs[1] * rhs[1] + rhs[2] * rhs[2]) / rho;
        let g1 = self.gamma - 1.0;
        let e = rhs[3];
        // residual of z + coef*K*z*exp(-T_act/T(z)) - rhs_z, with
        // T(z) = (gamma-1)(E - KE - q z)/rho
        let rate = |z: f64| -> f64 {
            let t = g1 * (e - ke - self.q * z) / rho;
            self.k_rate * self.rate_factor(t)
        };
        let target = rhs[4];
        let f = |z: f64| z + coef * rate(z) * z - target;

        let (mut lo, mut hi) = if target >= 0.0 {
            (0.0, target)
        } else {
            (target, 0.0)
        };
        let tol = 1e-12 * (1.0 + target.abs());
        let mut z = target;
        let mut converged = f(z).abs() <= tol;
        if !converged {
            for _ in 0..super::NEWTON_MAX_ITER {
                let fz = f(z);
                if fz.abs() <= tol {
                    converged = true;
                    break;
                }
                // keep the bracket valid
                if fz > 0.0 {
                    hi = z;
                } else {
                    lo = z;
                }
                let h = 1e-8 * (1.0 + z.abs());
                let dfz = (f(z + h) - f(z - h)) / (2.0 * h);
                let mut z_next = if dfz.abs() > 1e-300 { z - fz / dfz } else { z };
                if !(z_next > lo && z_next < hi) || !z_next.is_finite() {
                    z_next = 0.5 * (lo + hi);
                }
                z = z_next;
            }
        }
        if !converged && f(z).abs() > tol {
            return Err(SolverError::NewtonDivergence(format!(
                "reactive source solve: residual {:.3e}",
                f(z).abs()
            )));
        }
        out[4] = z;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fd_jacobian;
    use rand::{Rng, SeedableRng};

    fn random_state(rng: &mut impl Rng, m: &ReactiveEuler) -> StateVec {
        let prim = Primitives {
            rho: rng.gen_range(0.5..5.0),
            u: rng.gen_range(-3.0..3.0),
            v: rng.gen_range(-3.0..3.0),
            p: rng.gen_range(0.5..20.0),
            y: rng.gen_range(0.0..1.0),
        };
        m.conserved(&prim)
    }

    #[test]
    fn total_energy_example() {
        let m = ReactiveEuler::standard();
        let s = m.conserved(&Primitives {
            rho: 1.0,
            u: 0.0,
            v: 0.0,
            p: 10.0,
            y: 0.8,
        });
        assert!((s[3] - 90.0).abs() < 1e-12);
    }

    #[test]
    fn pressure_roundtrip() {
        let m = ReactiveEuler::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let prim = Primitives {
                rho: rng.gen_range(0.5..5.0),
                u: rng.gen_range(-3.0..3.0),
                v: rng.gen_range(-3.0..3.0),
                p: rng.gen_range(0.5..20.0),
                y: rng.gen_range(0.0..1.0),
            };
            let s = m.conserved(&prim);
            assert!((m.pressure(&s) - prim.p).abs() < 1e-12 * prim.p.max(1.0));
        }
    }

    #[test]
    fn source_vanishes_without_reactant() {
        let m = ReactiveEuler::standard();
        let s = m.conserved(&Primitives {
            rho: 1.3,
            u: 0.5,
            v: -0.2,
            p: 2.0,
            y: 0.0,
        });
        assert_eq!(m.source(&s).norm_inf(), 0.0);
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let m = ReactiveEuler::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = random_state(&mut rng, &m);
            for dir in [Direction::X, Direction::Y] {
                let fd = fd_jacobian(|u| m.flux(u, dir), &s, 1e-6);
                let an = m.flux_jacobian(&s, dir);
                for i in 0..5 {
                    for j in 0..5 {
                        let scale = 1.0 + an.get(i, j).abs();
                        assert!(
                            (fd.get(i, j) - an.get(i, j)).abs() / scale < 1e-5,
                            "flux jac mismatch at ({i},{j}): fd {} vs {}",
                            fd.get(i, j),
                            an.get(i, j)
                        );
                    }
                }
            }
            let fd = fd_jacobian(|u| m.source(u), &s, 1e-6);
            let an = m.source_jacobian(&s);
            for i in 0..5 {
                for j in 0..5 {
                    let scale = 1.0 + an.get(i, j).abs();
                    assert!((fd.get(i, j) - an.get(i, j)).abs() / scale < 1e-5);
                }
            }
        }
    }

    #[test]
    fn eigensystem_diagonalizes_jacobian() {
        let m = ReactiveEuler::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let s = random_state(&mut rng, &m);
            for dir in [Direction::X, Direction::Y] {
                let es = m.eigensystem(&s, dir).unwrap();
                let a = m.flux_jacobian(&s, dir);
                let lr = es.left.matmul(&es.right);
                for i in 0..5 {
                    for j in 0..5 {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (lr.get(i, j) - want).abs() < 1e-12,
                            "LR != I at ({i},{j}): {}",
                            lr.get(i, j)
                        );
                    }
                }
                let lar = es.left.matmul(&a).matmul(&es.right);
                for i in 0..5 {
                    for j in 0..5 {
                        if i == j {
                            assert!((lar.get(i, j) - es.lambda[i]).abs() < 1e-9);
                        } else {
                            assert!(lar.get(i, j).abs() < 1e-9, "LAR off-diag {}", lar.get(i, j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn implicit_solve_passes_through_without_reactant() {
        let m = ReactiveEuler::standard();
        let rhs = m.conserved(&Primitives {
            rho: 1.0,
            u: 1.0,
            v: 0.0,
            p: 1.0,
            y: 0.0,
        });
        let out = m.implicit_solve(&rhs, 0.3).unwrap();
        for i in 0..5 {
            assert_eq!(out[i], rhs[i]);
        }
    }

    #[test]
    fn implicit_solve_consistent_with_residual() {
        let m = ReactiveEuler::standard();
        let rhs = m.conserved(&Primitives {
            rho: 2.0,
            u: 1.0,
            v: 0.5,
            p: 8.0,
            y: 0.6,
        });
        let coef = 0.05;
        let u = m.implicit_solve(&rhs, coef).unwrap();
        let mut res = u;
        res.axpy(-coef, &m.source(&u));
        res.axpy(-1.0, &rhs);
        assert!(res.norm_inf() < 1e-10);
        // untouched components pass through
        for i in 0..4 {
            assert_eq!(u[i], rhs[i]);
        }
    }
}

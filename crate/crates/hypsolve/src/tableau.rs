//! Double Butcher tableaux for IMEX Runge-Kutta schemes.
//!
//! An IMEX scheme advances
//! `U^(i) = U^n - dt * sum_{j<i} at[i][j] dF(U^(j)) + dt * sum_{j<=i} a[i][j] Q(U^(j))`
//! followed by the weighted combination with `wt`/`w`. The explicit matrix
//! `at` is strictly lower triangular, the implicit matrix `a` lower
//! triangular with diagonal allowed.
//!
//! Indices are 0-based throughout; stage `i` of the usual 1-based notation
//! is row `i-1` here.

use crate::error::{Result, SolverError};

const ABSCISSA_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct ImexTableau {
    /// Stage count.
    pub s: usize,
    /// Explicit coefficients, strictly lower triangular.
    pub a_tilde: Vec<Vec<f64>>,
    /// Implicit coefficients, lower triangular.
    pub a: Vec<Vec<f64>>,
    /// Explicit weights.
    pub w_tilde: Vec<f64>,
    /// Implicit weights.
    pub w: Vec<f64>,
    /// Explicit abscissae (row sums of `a_tilde`).
    pub c_tilde: Vec<f64>,
    /// Implicit abscissae (row sums of `a`).
    pub c: Vec<f64>,
}

impl ImexTableau {
    pub fn new(
        a_tilde: Vec<Vec<f64>>,
        a: Vec<Vec<f64>>,
        w_tilde: Vec<f64>,
        w: Vec<f64>,
    ) -> Result<Self> {
        let s = a_tilde.len();
        if s == 0 {
            return Err(SolverError::TableauShape("stage count must be >= 1".into()));
        }
        for (name, m) in [("a_tilde", &a_tilde), ("a", &a)] {
            if m.len() != s || m.iter().any(|r| r.len() != s) {
                return Err(SolverError::TableauShape(format!("{name} is not {s}x{s}")));
            }
        }
        if w_tilde.len() != s || w.len() != s {
            return Err(SolverError::TableauShape(format!(
                "weight vectors must have length {s}"
            )));
        }
        let c_tilde: Vec<f64> = a_tilde.iter().map(|r| r.iter().sum()).collect();
        let c: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
        let t = Self {
            s,
            a_tilde,
            a,
            w_tilde,
            w,
            c_tilde,
            c,
        };
        t.validate()
    }

    /// Check triangularity and abscissa consistency, returning the tableau
    /// unchanged on success.
    pub fn validate(self) -> Result<Self> {
        for i in 0..self.s {
            for j in 0..self.s {
                if j >= i && self.a_tilde[i][j] != 0.0 {
                    return Err(SolverError::TriangularityViolation(format!(
                        "a_tilde[{}][{}] = {} (must be strictly lower triangular)",
                        i + 1,
                        j + 1,
                        self.a_tilde[i][j]
                    )));
                }
                if j > i && self.a[i][j] != 0.0 {
                    return Err(SolverError::TriangularityViolation(format!(
                        "a[{}][{}] = {} (must be lower triangular)",
                        i + 1,
                        j + 1,
                        self.a[i][j]
                    )));
                }
            }
            let st: f64 = self.a_tilde[i].iter().sum();
            if (st - self.c_tilde[i]).abs() > ABSCISSA_TOL {
                return Err(SolverError::AbscissaMismatch(format!(
                    "c_tilde[{}] = {} but row sum is {}",
                    i + 1,
                    self.c_tilde[i],
                    st
                )));
            }
            let si: f64 = self.a[i].iter().sum();
            if (si - self.c[i]).abs() > ABSCISSA_TOL {
                return Err(SolverError::AbscissaMismatch(format!(
                    "c[{}] = {} but row sum is {}",
                    i + 1,
                    self.c[i],
                    si
                )));
            }
        }
        Ok(self)
    }

    /// Look up a tableau by its config name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "ars443" => Ok(ars_443()),
            "ssp_rk3" => Ok(ssp_rk3()),
            other => Err(SolverError::Config(format!("unknown tableau '{other}'"))),
        }
    }
}

/// The 5-stage, third-order IMEX scheme used for all the validation runs.
///
/// Labelled "ars443" after the Ascher-Ruuth-Spiteri family it belongs to.
pub fn ars_443() -> ImexTableau {
    let at = vec![
        vec![0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.0, 0.0, 0.0],
        vec![11.0 / 18.0, 1.0 / 18.0, 0.0, 0.0, 0.0],
        vec![5.0 / 6.0, -5.0 / 6.0, 0.5, 0.0, 0.0],
        vec![0.25, 1.75, 0.75, -1.75, 0.0],
    ];
    let a = vec![
        vec![0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.5, 0.0, 0.0, 0.0],
        vec![0.0, 1.0 / 6.0, 0.5, 0.0, 0.0],
        vec![0.0, -0.5, 0.5, 0.5, 0.0],
        vec![0.0, 1.5, -1.5, 0.5, 0.5],
    ];
    let wt = vec![0.25, 1.75, 0.75, -1.75, 0.0];
    let w = vec![0.0, 1.5, -1.5, 0.5, 0.5];
    ImexTableau::new(at, a, wt, w).expect("ars443 tableau is valid")
}

/// The explicit third-order strong-stability-preserving scheme in Butcher
/// form, with zero implicit part. Used by the boundary-treatment oracle
/// comparisons for problems without sources.
pub fn ssp_rk3() -> ImexTableau {
    let at = vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.25, 0.25, 0.0],
    ];
    let a = vec![vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]];
    let wt = vec![1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0];
    let w = vec![0.0; 3];
    ImexTableau::new(at, a, wt, w).expect("ssp_rk3 tableau is valid")
}

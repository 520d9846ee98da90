//! 1D meshes whose endpoints fall between grid nodes, plus the node-field
//! storage used by the solver.
//!
//! The first interior node sits `eta_left * dx` inside the left endpoint
//! and the last `eta_right * dx` inside the right endpoint; two ghost
//! nodes extend past each end for the WENO stencil.

use crate::error::{Result, SolverError};
use crate::linalg::StateVec;

pub const NUM_GHOST: i64 = 2;
const MIN_NODES: usize = 6;

#[derive(Clone, Debug)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    /// Interior node count; indices 0..n-1.
    pub n: usize,
    pub eta_left: f64,
    pub eta_right: f64,
    pub dx: f64,
}

pub fn build_grid_1d(a: f64, b: f64, n: usize, eta_left: f64, eta_right: f64) -> Result<Grid1D> {
    if b <= a {
        return Err(SolverError::Config(format!(
            "empty interval [{a}, {b}]"
        )));
    }
    if n < MIN_NODES {
        return Err(SolverError::TooFewNodes(format!(
            "{n} nodes (minimum {MIN_NODES})"
        )));
    }
    for eta in [eta_left, eta_right] {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(SolverError::InvalidEta(eta));
        }
    }
    let dx = (b - a) / (n as f64 - 1.0 + eta_left + eta_right);
    Ok(Grid1D {
        a,
        b,
        n,
        eta_left,
        eta_right,
        dx,
    })
}

impl Grid1D {
    /// Node coordinate; valid for interior indices and the two ghost
    /// indices past each end.
    pub fn x(&self, j: i64) -> f64 {
        debug_assert!(j >= -NUM_GHOST && j < self.n as i64 + NUM_GHOST);
        self.a + (self.eta_left + j as f64) * self.dx
    }
}

/// Conserved-variable field on a 1D grid, including ghost nodes. Ghost
/// entries start out as NaN so that use-before-fill is detectable.
#[derive(Clone, Debug)]
pub struct Field1D {
    pub n: usize,
    pub m: usize,
    data: Vec<StateVec>,
}

impl Field1D {
    pub fn new(n: usize, m: usize) -> Self {
        let mut nan = StateVec::zeros(m);
        for i in 0..m {
            nan[i] = f64::NAN;
        }
        Self {
            n,
            m,
            data: vec![nan; n + 2 * NUM_GHOST as usize],
        }
    }

    #[inline]
    fn slot(&self, j: i64) -> usize {
        debug_assert!(j >= -NUM_GHOST && j < self.n as i64 + NUM_GHOST);
        (j + NUM_GHOST) as usize
    }

    #[inline]
    pub fn get(&self, j: i64) -> StateVec {
        self.data[self.slot(j)]
    }

    #[inline]
    pub fn set(&mut self, j: i64, v: StateVec) {
        let s = self.slot(j);
        self.data[s] = v;
    }

    /// True if all four ghost entries hold finite data.
    pub fn ghosts_ready(&self) -> bool {
        [-2i64, -1, self.n as i64, self.n as i64 + 1]
            .iter()
            .all(|&j| {
                let v = self.get(j);
                (0..self.m).all(|c| v[c].is_finite())
            })
    }
}

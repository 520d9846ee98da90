//! Small fixed-capacity vectors and matrices for states with up to
//! [`MAX_M`] conserved components.
//!
//! Everything here is `Copy` and lives on the stack; the interior update
//! loops rely on that to stay allocation-free.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

/// Largest number of conserved components of any supported model
/// (the reactive Euler system has five).
pub const MAX_M: usize = 5;

/// A state vector with `m <= MAX_M` components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVec {
    m: usize,
    v: [f64; MAX_M],
}

impl StateVec {
    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1 && m <= MAX_M);
        Self { m, v: [0.0; MAX_M] }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        let mut out = Self::zeros(s.len());
        out.v[..s.len()].copy_from_slice(s);
        out
    }

    pub fn scalar(x: f64) -> Self {
        Self::from_slice(&[x])
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.m]
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.v[..self.m]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.as_slice().iter().copied()
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &StateVec) {
        debug_assert_eq!(self.m, x.m);
        for i in 0..self.m {
            self.v[i] += a * x.v[i];
        }
    }

    pub fn scale(&self, a: f64) -> StateVec {
        let mut out = *self;
        for i in 0..self.m {
            out.v[i] *= a;
        }
        out
    }

    pub fn dot(&self, other: &StateVec) -> f64 {
        debug_assert_eq!(self.m, other.m);
        let mut s = 0.0;
        for i in 0..self.m {
            s += self.v[i] * other.v[i];
        }
        s
    }

    pub fn norm_inf(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |a, &x| a.max(x.abs()))
    }
}

impl Index<usize> for StateVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.m);
        &self.v[i]
    }
}

impl IndexMut<usize> for StateVec {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.m);
        &mut self.v[i]
    }
}

impl Add for StateVec {
    type Output = StateVec;
    fn add(self, rhs: StateVec) -> StateVec {
        let mut out = self;
        out.axpy(1.0, &rhs);
        out
    }
}

impl Sub for StateVec {
    type Output = StateVec;
    fn sub(self, rhs: StateVec) -> StateVec {
        let mut out = self;
        out.axpy(-1.0, &rhs);
        out
    }
}

impl Mul<f64> for StateVec {
    type Output = StateVec;
    fn mul(self, a: f64) -> StateVec {
        self.scale(a)
    }
}

/// A dense `m x m` matrix with `m <= MAX_M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateMat {
    m: usize,
    a: [[f64; MAX_M]; MAX_M],
}

impl StateMat {
    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1 && m <= MAX_M);
        Self {
            m,
            a: [[0.0; MAX_M]; MAX_M],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.a[i][i] = 1.0;
        }
        out
    }

    pub fn from_rows(rows: &[StateVec]) -> Self {
        let m = rows.len();
        let mut out = Self::zeros(m);
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), m);
            out.a[i][..m].copy_from_slice(r.as_slice());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> StateVec {
        StateVec::from_slice(&self.a[i][..self.m])
    }

    pub fn set_row(&mut self, i: usize, r: &StateVec) {
        debug_assert_eq!(r.len(), self.m);
        self.a[i][..self.m].copy_from_slice(r.as_slice());
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.a[i][j] = x;
    }

    pub fn matvec(&self, x: &StateVec) -> StateVec {
        debug_assert_eq!(self.m, x.len());
        let mut out = StateVec::zeros(self.m);
        for i in 0..self.m {
            let mut s = 0.0;
            for j in 0..self.m {
                s += self.a[i][j] * x[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn matmul(&self, other: &StateMat) -> StateMat {
        debug_assert_eq!(self.m, other.m);
        let mut out = StateMat::zeros(self.m);
        for i in 0..self.m {
            for k in 0..self.m {
                let aik = self.a[i][k];
                if aik != 0.0 {
                    for j in 0..self.m {
                        out.a[i][j] += aik * other.a[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &StateMat) -> StateMat {
        debug_assert_eq!(self.m, other.m);
        let mut out = *self;
        for i in 0..self.m {
            for j in 0..self.m {
                out.a[i][j] += other.a[i][j];
            }
        }
        out
    }

    pub fn scale(&self, a: f64) -> StateMat {
        let mut out = *self;
        for i in 0..self.m {
            for j in 0..self.m {
                out.a[i][j] *= a;
            }
        }
        out
    }

    /// Solve `self * x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` if the matrix is numerically singular.
    pub fn solve(&self, b: &StateVec) -> Option<StateVec> {
        debug_assert_eq!(self.m, b.len());
        let m = self.m;
        let mut a = self.a;
        let mut x = *b;
        for col in 0..m {
            // pivot
            let mut piv = col;
            for r in col + 1..m {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            if a[piv][col].abs() < 1e-300 {
                return None;
            }
            if piv != col {
                a.swap(piv, col);
                let t = x[piv];
                x[piv] = x[col];
                x[col] = t;
            }
            let inv = 1.0 / a[col][col];
            for r in col + 1..m {
                let f = a[r][col] * inv;
                if f != 0.0 {
                    for c in col..m {
                        a[r][c] -= f * a[col][c];
                    }
                    x[r] -= f * x[col];
                }
            }
        }
        for col in (0..m).rev() {
            let mut s = x[col];
            for c in col + 1..m {
                s -= a[col][c] * x[c];
            }
            x[col] = s / a[col][col];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<StateMat> {
        let m = self.m;
        let mut out = StateMat::zeros(m);
        for j in 0..m {
            let mut e = StateVec::zeros(m);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..m {
                out.a[i][j] = col[i];
            }
        }
        Some(out)
    }

    pub fn norm_inf(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.m {
            let s: f64 = self.a[i][..self.m].iter().map(|x| x.abs()).sum();
            best = best.max(s);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_roundtrip() {
        let a = StateMat::from_rows(&[
            StateVec::from_slice(&[2.0, 1.0, 0.0]),
            StateVec::from_slice(&[1.0, 3.0, -1.0]),
            StateVec::from_slice(&[0.0, -1.0, 4.0]),
        ]);
        let x = StateVec::from_slice(&[1.0, -2.0, 0.5]);
        let b = a.matvec(&x);
        let xs = a.solve(&b).unwrap();
        for i in 0..3 {
            assert!((xs[i] - x[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = StateMat::from_rows(&[
            StateVec::from_slice(&[1.0, 2.0]),
            StateVec::from_slice(&[2.0, 4.0]),
        ]);
        assert!(a.solve(&StateVec::from_slice(&[1.0, 1.0])).is_none());
    }

    #[test]
    fn inverse_identity() {
        let a = StateMat::from_rows(&[
            StateVec::from_slice(&[1.0, 1.0]),
            StateVec::from_slice(&[1.0, -2.0]),
        ]);
        let inv = a.inverse().unwrap();
        let prod = a.matmul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - want).abs() < 1e-14);
            }
        }
    }
}

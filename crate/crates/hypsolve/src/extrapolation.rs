//! WENO-type extrapolation of grid data to a boundary point.
//!
//! Given values at the three uniformly spaced nodes nearest a boundary,
//! nested Lagrange extrapolants of degree 0, 1, 2 are blended with
//! smoothness-dependent weights. For smooth data the result is
//! (3-k)-order accurate in the k-th derivative while degrading gracefully
//! to the low-order extrapolant across discontinuities.

use crate::error::{Result, SolverError};

pub const WENO_EPS: f64 = 1e-6;

/// How the three nested extrapolants are blended. Linear weights give
/// clean third-order results on smooth data (including at critical
/// points, where the nonlinear weights lose accuracy); the nonlinear
/// weights are essential near discontinuities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationMode {
    Linear,
    #[default]
    Weno,
}

/// Extrapolated values and first/second derivatives at the boundary
/// point, together with the weights actually used.
#[derive(Clone, Copy, Debug)]
pub struct ExtrapolationResult {
    /// `V*^(0)`, `V*^(1)`, `V*^(2)`: value and derivatives at the
    /// boundary point.
    pub v_star: [f64; 3],
    /// Weights `omega_0..2`; nonnegative, summing to one.
    pub weights: [f64; 3],
}

/// Smoothness indicators of the three nested extrapolants, measured over
/// the length-dx interval just outside the first node (toward the
/// boundary). Closed forms obtained by integrating the Lagrange
/// polynomials; `beta_0` is fixed at `dx^2` by convention.
pub fn smoothness_indicators(values: [f64; 3], dx: f64) -> (f64, f64, f64) {
    let a = values[1] - values[0];
    let b = values[2] - 2.0 * values[1] + values[0];
    let beta0 = dx * dx;
    let beta1 = a * a;
    let beta2 = a * a - 2.0 * a * b + 25.0 / 12.0 * b * b;
    (beta0, beta1, beta2)
}

/// Extrapolate `values` given at nodes `x0 + i*dx`, `i = 0, 1, 2`, to the
/// point `xb`, returning the blended value and its first two derivatives.
///
/// The stencil spacing must satisfy `dx < 1/2` so that the linear weight
/// of the quadratic extrapolant stays positive.
pub fn weno_extrapolate(
    values: [f64; 3],
    x0: f64,
    dx: f64,
    xb: f64,
    eps: f64,
) -> Result<ExtrapolationResult> {
    extrapolate(values, x0, dx, xb, eps, ExtrapolationMode::Weno)
}

/// Extrapolation with an explicit choice of weights; see
/// [`ExtrapolationMode`].
pub fn extrapolate(
    values: [f64; 3],
    x0: f64,
    dx: f64,
    xb: f64,
    eps: f64,
    mode: ExtrapolationMode,
) -> Result<ExtrapolationResult> {
    if !(dx > 0.0 && dx < 0.5) {
        return Err(SolverError::InvalidSpacing(format!(
            "extrapolation stencil spacing {dx} outside (0, 1/2)"
        )));
    }
    let t = (xb - x0) / dx;
    let a = values[1] - values[0];
    let b = values[2] - 2.0 * values[1] + values[0];

    // k-th derivatives of the degree-r Lagrange polynomials at xb
    let p: [[f64; 3]; 3] = [
        [values[0], 0.0, 0.0],
        [values[0] + a * t, a / dx, 0.0],
        [
            values[0] + a * t + 0.5 * b * t * (t - 1.0),
            (a + b * (t - 0.5)) / dx,
            b / (dx * dx),
        ],
    ];

    let d = [dx * dx, dx, 1.0 - dx - dx * dx];
    let weights = match mode {
        ExtrapolationMode::Linear => d,
        ExtrapolationMode::Weno => {
            let (beta0, beta1, beta2) = smoothness_indicators(values, dx);
            let beta = [beta0, beta1, beta2];
            let mut alpha = [0.0; 3];
            let mut sum = 0.0;
            for r in 0..3 {
                alpha[r] = d[r] / ((eps + beta[r]) * (eps + beta[r]));
                sum += alpha[r];
            }
            [alpha[0] / sum, alpha[1] / sum, alpha[2] / sum]
        }
    };
    let mut v_star = [0.0; 3];
    for k in 0..3 {
        for r in 0..3 {
            v_star[k] += weights[r] * p[r][k];
        }
    }
    Ok(ExtrapolationResult { v_star, weights })
}

/// Cubic Lagrange extrapolation of values at nodes `x0 + i*dx`,
/// `i = 0..3`, to the point `xb`. One order better than the blended
/// quadratic on smooth data; no limiting, so only for use where the
/// data is known to be smooth.
pub fn cubic_extrapolate(values: [f64; 4], x0: f64, dx: f64, xb: f64) -> f64 {
    let t = (xb - x0) / dx;
    let d1 = values[1] - values[0];
    let d2 = values[2] - 2.0 * values[1] + values[0];
    let d3 = values[3] - 3.0 * values[2] + 3.0 * values[1] - values[0];
    values[0]
        + d1 * t
        + d2 * t * (t - 1.0) / 2.0
        + d3 * t * (t - 1.0) * (t - 2.0) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{StateMat, StateVec};
    use rand::{Rng, SeedableRng};

    #[test]
    fn constant_data_is_reproduced() {
        let r = weno_extrapolate([5.0, 5.0, 5.0], 0.0, 0.1, -0.03, WENO_EPS).unwrap();
        assert_eq!(r.v_star[0], 5.0);
        assert_eq!(r.v_star[1], 0.0);
        assert_eq!(r.v_star[2], 0.0);
        let wsum: f64 = r.weights.iter().sum();
        assert!((wsum - 1.0).abs() < 1e-14);
        assert!(r.weights.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn quadratic_second_derivative() {
        let dx = 0.01;
        let vals = [
            (0.5 * dx) * (0.5 * dx),
            (1.5 * dx) * (1.5 * dx),
            (2.5 * dx) * (2.5 * dx),
        ];
        let r = weno_extrapolate(vals, 0.5 * dx, dx, 0.0, WENO_EPS).unwrap();
        assert!((r.v_star[2] - 2.0).abs() < 5e-2);
        // error vanishes under refinement
        let dx2 = dx / 8.0;
        let vals2 = [
            (0.5 * dx2) * (0.5 * dx2),
            (1.5 * dx2) * (1.5 * dx2),
            (2.5 * dx2) * (2.5 * dx2),
        ];
        let r2 = weno_extrapolate(vals2, 0.5 * dx2, dx2, 0.0, WENO_EPS).unwrap();
        assert!((r2.v_star[2] - 2.0).abs() < (r.v_star[2] - 2.0).abs());
    }

    #[test]
    fn weight_scaling_on_smooth_data() {
        let f = |x: f64| (1.0 + x).sin();
        let mut ratios0 = Vec::new();
        let mut ratios1 = Vec::new();
        for &dx in &[1e-2, 1e-3] {
            let x0 = 0.3 * dx;
            let vals = [f(x0), f(x0 + dx), f(x0 + 2.0 * dx)];
            let r = weno_extrapolate(vals, x0, dx, 0.0, WENO_EPS).unwrap();
            ratios0.push(r.weights[0] / (dx * dx));
            ratios1.push(r.weights[1] / dx);
        }
        for &r in ratios0.iter().chain(&ratios1) {
            assert!(r.is_finite() && r < 100.0, "weight ratio {r} unbounded");
        }
    }

    #[test]
    fn linear_data_indicator() {
        let s = 0.7;
        let dx = 0.05;
        let vals = [1.0, 1.0 + s * dx, 1.0 + 2.0 * s * dx];
        let (_, b1, _) = smoothness_indicators(vals, dx);
        assert!((b1 - (s * dx) * (s * dx)).abs() < 1e-14);
    }

    #[test]
    fn jump_suppresses_quadratic_weight() {
        let vals = [0.0, 0.0, 1.0];
        let dx = 0.05;
        let (_, b1, b2) = smoothness_indicators(vals, dx);
        assert!(b2 > 100.0 * (b1 + 1e-30));
        let r = weno_extrapolate(vals, 0.0, dx, -0.02, WENO_EPS).unwrap();
        assert!(r.weights[2] < 0.5);
        // blended value sits between the 2-point and 3-point extrapolants,
        // pulled toward the low-order one
        let t: f64 = -0.02 / dx;
        let p2 = 0.5 * t * (t - 1.0); // three-point value for this data
        assert!((r.v_star[0] - p2).abs() > 0.4 * p2.abs());
    }

    #[test]
    fn invalid_spacing_rejected() {
        assert!(matches!(
            weno_extrapolate([0.0, 0.0, 0.0], 0.0, 0.6, -0.1, WENO_EPS),
            Err(SolverError::InvalidSpacing(_))
        ));
        assert!(weno_extrapolate([0.0, 0.0, 0.0], 0.0, -0.1, 0.0, WENO_EPS).is_err());
    }

    /// Independent quadrature check of the hard-coded indicator formulas:
    /// build each Lagrange polynomial by a Vandermonde solve, differentiate
    /// the monomial coefficients, and integrate
    /// `sum_l dx^(2l-1) (p^(l))^2` over the interval [x0-dx, x0] with
    /// composite Simpson (exact here since the integrands are quadratics).
    #[test]
    fn indicators_match_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let dx: f64 = rng.gen_range(0.01..0.4);
            let x0: f64 = rng.gen_range(-1.0..1.0);
            let vals: [f64; 3] = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            let (_, b1, b2) = smoothness_indicators(vals, dx);
            let q1 = quad_indicator(&vals[..2], x0, dx);
            let q2 = quad_indicator(&vals[..3], x0, dx);
            let scale = 1.0 + b1.abs().max(b2.abs());
            assert!((b1 - q1).abs() / scale < 1e-12, "beta1 {b1} vs {q1}");
            assert!((b2 - q2).abs() / scale < 1e-12, "beta2 {b2} vs {q2}");
        }
    }

    fn quad_indicator(vals: &[f64], x0: f64, dx: f64) -> f64 {
        let n = vals.len();
        // monomial coefficients of the interpolant through (x0 + i*dx, vals[i])
        let mut vm = StateMat::zeros(n);
        let mut rhs = StateVec::zeros(n);
        for i in 0..n {
            let x = x0 + i as f64 * dx;
            for j in 0..n {
                vm.set(i, j, x.powi(j as i32));
            }
            rhs[i] = vals[i];
        }
        let coef = vm.solve(&rhs).unwrap();
        let deriv = |c: &[f64], x: f64| -> f64 {
            // derivative of sum c_j x^j
            let mut s = 0.0;
            for (j, cj) in c.iter().enumerate().skip(1) {
                s += cj * j as f64 * x.powi(j as i32 - 1);
            }
            s
        };
        let c: Vec<f64> = (0..n).map(|j| coef[j]).collect();
        let c1: Vec<f64> = (1..n).map(|j| c[j] * j as f64).collect();
        let integrand = |x: f64| -> f64 {
            let d1 = deriv(&c, x);
            let mut s = dx * d1 * d1;
            if n == 3 {
                let d2 = deriv(&c1, x);
                s += dx * dx * dx * d2 * d2;
            }
            s
        };
        // composite Simpson over [x0-dx, x0]
        let m = 50;
        let h = dx / (2 * m) as f64;
        let a = x0 - dx;
        let mut total = integrand(a) + integrand(x0);
        for i in 1..2 * m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            total += w * integrand(a + i as f64 * h);
        }
        total * h / 3.0
    }

    /// At a smooth critical point between the first two nodes the
    /// nonlinear weights lock onto the linear extrapolant (beta_1 ~ a^2
    /// is tiny while the data is perfectly smooth) and the first
    /// derivative comes out near zero; linear weights recover it.
    #[test]
    fn linear_weights_handle_critical_points() {
        let f = |x: f64| (1.5 * x).sin();
        // extremum of f at x = pi/3; put it between nodes 0 and 1
        let xc = std::f64::consts::PI / 3.0;
        let dx = 0.05;
        let x0 = xc - 0.4 * dx;
        let vals = [f(x0), f(x0 + dx), f(x0 + 2.0 * dx)];
        let xb = x0 - 0.3 * dx;
        let exact1 = 1.5 * (1.5 * xb).cos();
        let lin = extrapolate(vals, x0, dx, xb, WENO_EPS, ExtrapolationMode::Linear).unwrap();
        let non = extrapolate(vals, x0, dx, xb, WENO_EPS, ExtrapolationMode::Weno).unwrap();
        assert!((lin.v_star[1] - exact1).abs() < 5e-3);
        assert!((non.v_star[1] - exact1).abs() > 10.0 * (lin.v_star[1] - exact1).abs());
        let wsum: f64 = lin.weights.iter().sum();
        assert!((wsum - 1.0).abs() < 1e-14);
    }

    /// Slope-fit order checks: (3-k)-order convergence of the k-th
    /// derivative on a smooth function.
    #[test]
    fn convergence_orders_on_smooth_data() {
        let f = |x: f64| (1.3 * x + 0.4).sin();
        let df = |x: f64| 1.3 * (1.3 * x + 0.4).cos();
        let d2f = |x: f64| -1.3 * 1.3 * (1.3 * x + 0.4).sin();
        let exact = [f(0.0), df(0.0), d2f(0.0)];
        let dxs = [0.02, 0.01, 0.005, 0.0025];
        let mut errs = vec![[0.0; 3]; dxs.len()];
        for (n, &dx) in dxs.iter().enumerate() {
            let x0 = 0.4 * dx;
            let vals = [f(x0), f(x0 + dx), f(x0 + 2.0 * dx)];
            let r = weno_extrapolate(vals, x0, dx, 0.0, WENO_EPS).unwrap();
            for k in 0..3 {
                errs[n][k] = (r.v_star[k] - exact[k]).abs();
            }
        }
        for k in 0..3 {
            // least-squares slope of log2(err) against refinement level
            let m = dxs.len();
            let ys: Vec<f64> = (0..m).map(|n| errs[n][k].log2()).collect();
            let xs: Vec<f64> = (0..m).map(|n| n as f64).collect();
            let xbar = xs.iter().sum::<f64>() / m as f64;
            let ybar = ys.iter().sum::<f64>() / m as f64;
            let slope: f64 = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (x - xbar) * (y - ybar))
                .sum::<f64>()
                / xs.iter().map(|x| (x - xbar) * (x - xbar)).sum::<f64>();
            let order = -slope;
            assert!(
                order >= 3.0 - k as f64 - 0.3,
                "derivative {k}: observed order {order}"
            );
        }
    }
}

//! Closed-form stage boundary conditions for the third-order explicit RK
//! scheme on scalar laws with inflow data `u(t, 0) = g(t)`. These serve
//! as independent oracles for the stage-at-boundary solves.

use crate::error::{Result, SolverError};

/// Inflow data callbacks; for nonlinear fluxes additionally the first
/// two flux derivatives.
pub struct BoundarySignal {
    pub g: Box<dyn Fn(f64) -> f64>,
    pub dg: Box<dyn Fn(f64) -> f64>,
    pub d2g: Box<dyn Fn(f64) -> f64>,
    pub fp: Box<dyn Fn(f64) -> f64>,
    pub fpp: Box<dyn Fn(f64) -> f64>,
}

/// Stage boundary values for the linear advection equation:
/// `(g, g + dt g', g + dt/2 g' + dt^2/4 g'')`.
pub fn carpenter_linear(signal: &BoundarySignal, t_n: f64, dt: f64) -> (f64, f64, f64) {
    let g = (signal.g)(t_n);
    let dg = (signal.dg)(t_n);
    let d2g = (signal.d2g)(t_n);
    (
        g,
        g + dt * dg,
        g + 0.5 * dt * dg + 0.25 * dt * dt * d2g,
    )
}

/// Stage boundary values for a nonlinear scalar law with inflow
/// (`f'(g) > 0`). Stage 1 coincides with the linear formula; stage 2
/// carries the flux-derivative ratio at the advanced state.
pub fn carpenter_nonlinear(signal: &BoundarySignal, t_n: f64, dt: f64) -> Result<(f64, f64, f64)> {
    let g = (signal.g)(t_n);
    let dg = (signal.dg)(t_n);
    let d2g = (signal.d2g)(t_n);
    let fp_g = (signal.fp)(g);
    if fp_g <= 0.0 {
        return Err(SolverError::NonInflowBoundary(fp_g));
    }
    let fpp_g = (signal.fpp)(g);
    let u1 = g + dt * dg;
    let fp_adv = (signal.fp)(u1);
    let num = fp_g * d2g - fpp_g * dg * dg;
    let u2 = g + 0.25 * dt * (1.0 + fp_adv / fp_g) * dg
        + 0.25 * dt * dt * fp_adv * num / (fp_g * fp_g);
    Ok((g, u1, u2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(
        g: fn(f64) -> f64,
        dg: fn(f64) -> f64,
        d2g: fn(f64) -> f64,
        fp: fn(f64) -> f64,
        fpp: fn(f64) -> f64,
    ) -> BoundarySignal {
        BoundarySignal {
            g: Box::new(g),
            dg: Box::new(dg),
            d2g: Box::new(d2g),
            fp: Box::new(fp),
            fpp: Box::new(fpp),
        }
    }

    #[test]
    fn linear_examples() {
        let s = signal(|t| t, |_| 1.0, |_| 0.0, |_| 1.0, |_| 0.0);
        let (a, b, c) = carpenter_linear(&s, 0.0, 0.1);
        assert_eq!((a, b, c), (0.0, 0.1, 0.05));
        let s = signal(|_| 3.0, |_| 0.0, |_| 0.0, |_| 1.0, |_| 0.0);
        let (a, b, c) = carpenter_linear(&s, 0.7, 0.2);
        assert_eq!((a, b, c), (3.0, 3.0, 3.0));
        let s = signal(|t| t.exp(), |t| t.exp(), |t| t.exp(), |_| 1.0, |_| 0.0);
        let (a, b, c) = carpenter_linear(&s, 0.0, 0.1);
        assert!((a - 1.0).abs() < 1e-15);
        assert!((b - 1.1).abs() < 1e-15);
        assert!((c - 1.0525).abs() < 1e-15);
    }

    #[test]
    fn nonlinear_degenerates_to_linear_for_linear_flux() {
        let s = signal(
            |t| (1.0 + t).sin(),
            |t| (1.0 + t).cos(),
            |t| -(1.0 + t).sin(),
            |_| 1.0,
            |_| 0.0,
        );
        let (a, b, c) = carpenter_nonlinear(&s, 0.3, 0.05).unwrap();
        let (al, bl, cl) = carpenter_linear(&s, 0.3, 0.05);
        assert!((a - al).abs() < 1e-15);
        assert!((b - bl).abs() < 1e-15);
        assert!((c - cl).abs() < 1e-15);
    }

    #[test]
    fn nonlinear_third_order_agreement() {
        // f(u) = u^2/2, g(t) = 1 + t
        let s = signal(|t| 1.0 + t, |_| 1.0, |_| 0.0, |u| u, |_| 1.0);
        let mut prev: Option<f64> = None;
        for &dt in &[1e-2, 1e-3, 1e-4] {
            let (_, _, c) = carpenter_nonlinear(&s, 0.2, dt).unwrap();
            let (_, _, cl) = carpenter_linear(&s, 0.2, dt);
            let diff = (c - cl).abs();
            if let Some(p) = prev {
                // dt shrinks by 10 each time; a cubic term shrinks by 1000
                assert!(diff < p / 500.0, "diff {diff} vs prev {p}");
            }
            prev = Some(diff);
        }
    }

    #[test]
    fn non_inflow_rejected() {
        let s = signal(|_| 0.0, |_| 1.0, |_| 0.0, |u| u, |_| 1.0);
        assert!(matches!(
            carpenter_nonlinear(&s, 0.0, 0.1),
            Err(SolverError::NonInflowBoundary(_))
        ));
    }
}

//! Built-in scenario definitions: geometry, initial data, boundary
//! assignments and (where available) the exact solution used for error
//! norms.

use crate::boundary1d::{BoundaryRelation, ComponentDirichlet, NoRelation, NormalVelocityWall};
use crate::error::{Result, SolverError};
use crate::extrapolation::ExtrapolationMode;
use crate::grid::{build_grid_1d, Field1D, Grid1D};
use crate::grid2d::{build_grid_2d, FaceLocation, Field2D, Grid2D, NodeKind, Rect};
use crate::linalg::StateVec;
use crate::model::{
    burgers_source, linear_relaxation, nonlinear_relaxation, Model, Primitives, ReactiveEuler,
};
use crate::stepper::{Boundaries1D, Boundaries2D, FaceBoundary, SideBoundary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// `u_t + u u_x = u^2 + u` on [0, 1] with solution e^{t+x}; inflow
    /// on the left, outflow on the right.
    BurgersManufactured,
    /// Linear relaxation system on [0, 1], smooth solution
    /// (u, v) = (e^{t+x}, -e^{t+x}); u pinned at x = 0, v at x = 1.
    LinearRelaxSmooth,
    /// Same system, solution with an e^{-x/eps} boundary layer at x = 0.
    LinearRelaxLayer,
    /// Nonlinear relaxation system, smooth solution.
    NonlinearRelaxSmooth,
    /// Nonlinear relaxation system, boundary-layer solution.
    NonlinearRelaxLayer,
    /// 2D reactive Euler traveling density wave on [0, 1]^2; periodic in
    /// x, solid walls top and bottom.
    DensityWave2D,
    /// Circular high-pressure burst in [0, 2]^2; walls left/bottom,
    /// outflow right/top.
    Burst2D,
    /// Detonation diffraction in [0, 5]^2: supersonic inflow at x = 0,
    /// walls elsewhere.
    DetonationDiffraction2D,
    /// Burst in a [0, 10]^2 channel formed by two rectangular obstacles;
    /// walls everywhere.
    DetonationChannel2D,
}

pub const SCENARIO_NAMES: &[(&str, Scenario)] = &[
    ("burgers_manufactured", Scenario::BurgersManufactured),
    ("linear_relax_smooth", Scenario::LinearRelaxSmooth),
    ("linear_relax_layer", Scenario::LinearRelaxLayer),
    ("nonlinear_relax_smooth", Scenario::NonlinearRelaxSmooth),
    ("nonlinear_relax_layer", Scenario::NonlinearRelaxLayer),
    ("density_wave_2d", Scenario::DensityWave2D),
    ("burst_2d", Scenario::Burst2D),
    ("detonation_diffraction_2d", Scenario::DetonationDiffraction2D),
    ("detonation_channel_2d", Scenario::DetonationChannel2D),
];

impl Scenario {
    pub fn from_name(name: &str) -> Result<Self> {
        SCENARIO_NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, s)| s)
            .ok_or_else(|| SolverError::Config(format!("unknown scenario '{name}'")))
    }

    pub fn name(self) -> &'static str {
        SCENARIO_NAMES.iter().find(|(_, s)| *s == self).unwrap().0
    }

    pub fn dim(self) -> usize {
        match self {
            Scenario::BurgersManufactured
            | Scenario::LinearRelaxSmooth
            | Scenario::LinearRelaxLayer
            | Scenario::NonlinearRelaxSmooth
            | Scenario::NonlinearRelaxLayer => 1,
            _ => 2,
        }
    }

    pub fn default_t_end(self) -> f64 {
        match self {
            Scenario::BurgersManufactured
            | Scenario::LinearRelaxSmooth
            | Scenario::LinearRelaxLayer
            | Scenario::NonlinearRelaxSmooth
            | Scenario::NonlinearRelaxLayer => 1.0,
            Scenario::DensityWave2D => 0.1,
            Scenario::Burst2D => 0.16,
            Scenario::DetonationDiffraction2D => 0.6,
            Scenario::DetonationChannel2D => 2.0,
        }
    }

    /// Linear extrapolation weights for the smooth accuracy studies,
    /// nonlinear ones for flows with shocks.
    pub fn default_mode(self) -> ExtrapolationMode {
        match self {
            Scenario::Burst2D
            | Scenario::DetonationDiffraction2D
            | Scenario::DetonationChannel2D => ExtrapolationMode::Weno,
            _ => ExtrapolationMode::Linear,
        }
    }

    /// Near-boundary nodes excluded from the error norms (the
    /// boundary-layer cases drop the three nodes nearest x = 0).
    pub fn default_exclusion(self) -> usize {
        match self {
            Scenario::LinearRelaxLayer | Scenario::NonlinearRelaxLayer => 3,
            _ => 0,
        }
    }

    pub fn needs_epsilon(self) -> bool {
        matches!(
            self,
            Scenario::LinearRelaxSmooth
                | Scenario::LinearRelaxLayer
                | Scenario::NonlinearRelaxSmooth
                | Scenario::NonlinearRelaxLayer
        )
    }
}

/// Fully resolved run parameters for a scenario.
pub struct Params {
    pub scenario: Scenario,
    /// 1D: number of grid nodes; 2D: inverse mesh size (dx = 1/n).
    pub n: usize,
    pub eta_left: f64,
    pub eta_right: f64,
    /// Single lattice offset of the 2D grid.
    pub eta: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub epsilon: f64,
    pub mode: ExtrapolationMode,
}

pub struct Setup1D {
    pub model: Box<dyn Model>,
    pub grid: Grid1D,
    pub field: Field1D,
    pub bcs: Boundaries1D,
    /// Exact value of the error component as a function of (t, x).
    pub exact: Option<Box<dyn Fn(f64, f64) -> f64>>,
    pub component_names: &'static [&'static str],
}

pub struct Setup2D {
    pub model: ReactiveEuler,
    pub grid: Grid2D,
    pub field: Field2D,
    pub bcs: Boundaries2D,
    /// Exact density as a function of (t, x, y).
    pub exact: Option<Box<dyn Fn(f64, f64, f64) -> f64>>,
}

fn dirichlet(
    m: usize,
    component: usize,
    value: impl Fn(f64) -> f64 + Send + Sync + 'static,
    dvalue: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Box<dyn BoundaryRelation> {
    Box::new(ComponentDirichlet {
        component,
        value: Box::new(value),
        dvalue: Box::new(dvalue),
        m,
    })
}

pub fn build_1d(p: &Params) -> Result<Setup1D> {
    let grid = build_grid_1d(0.0, 1.0, p.n, p.eta_left, p.eta_right)?;
    let eps = p.epsilon;
    let (model, exact0, exact1): (
        Box<dyn Model>,
        Box<dyn Fn(f64, f64) -> f64>,
        Option<Box<dyn Fn(f64, f64) -> f64>>,
    ) = match p.scenario {
        Scenario::BurgersManufactured => (
            Box::new(burgers_source()),
            Box::new(|t: f64, x: f64| (t + x).exp()),
            None,
        ),
        Scenario::LinearRelaxSmooth | Scenario::NonlinearRelaxSmooth => {
            let model: Box<dyn Model> = if p.scenario == Scenario::LinearRelaxSmooth {
                Box::new(linear_relaxation(eps)?)
            } else {
                Box::new(nonlinear_relaxation(eps)?)
            };
            (
                model,
                Box::new(|t: f64, x: f64| (t + x).exp()),
                Some(Box::new(|t: f64, x: f64| -(t + x).exp())),
            )
        }
        Scenario::LinearRelaxLayer | Scenario::NonlinearRelaxLayer => {
            let model: Box<dyn Model> = if p.scenario == Scenario::LinearRelaxLayer {
                Box::new(linear_relaxation(eps)?)
            } else {
                Box::new(nonlinear_relaxation(eps)?)
            };
            (
                model,
                Box::new(move |t: f64, x: f64| (t + x).exp() + (-x / eps).exp()),
                Some(Box::new(|t: f64, x: f64| -(t + x).exp())),
            )
        }
        _ => {
            return Err(SolverError::Config(format!(
                "scenario '{}' is not one-dimensional",
                p.scenario.name()
            )))
        }
    };

    let m = model.num_components();
    let mut field = Field1D::new(p.n, m);
    for j in 0..p.n as i64 {
        let x = grid.x(j);
        let mut s = StateVec::zeros(m);
        s[0] = exact0(0.0, x);
        if let Some(e1) = &exact1 {
            s[1] = e1(0.0, x);
        }
        field.set(j, s);
    }

    let bcs = match p.scenario {
        Scenario::BurgersManufactured => Boundaries1D {
            left: SideBoundary::Characteristic(dirichlet(1, 0, |t| t.exp(), |t| t.exp())),
            right: SideBoundary::Characteristic(Box::new(NoRelation { m: 1 })),
            mode: p.mode,
        },
        Scenario::LinearRelaxSmooth | Scenario::NonlinearRelaxSmooth => Boundaries1D {
            left: SideBoundary::Characteristic(dirichlet(2, 0, |t| t.exp(), |t| t.exp())),
            right: SideBoundary::Characteristic(dirichlet(
                2,
                1,
                |t| -(t + 1.0).exp(),
                |t| -(t + 1.0).exp(),
            )),
            mode: p.mode,
        },
        Scenario::LinearRelaxLayer | Scenario::NonlinearRelaxLayer => Boundaries1D {
            left: SideBoundary::Characteristic(dirichlet(
                2,
                0,
                |t| t.exp() + 1.0,
                |t| t.exp(),
            )),
            right: SideBoundary::Characteristic(dirichlet(
                2,
                1,
                |t| -(t + 1.0).exp(),
                |t| -(t + 1.0).exp(),
            )),
            mode: p.mode,
        },
        _ => unreachable!(),
    };

    let component_names: &'static [&'static str] = if m == 1 { &["u"] } else { &["u", "v"] };
    Ok(Setup1D {
        model,
        grid,
        field,
        bcs,
        exact: Some(exact0),
        component_names,
    })
}

fn burst_state(model: &ReactiveEuler, x: f64, y: f64) -> StateVec {
    let inside = x * x + y * y <= 0.36;
    model.conserved(&Primitives {
        rho: 1.0,
        u: 0.0,
        v: 0.0,
        p: if inside { 80.0 } else { 10.0 },
        y: if inside { 0.2 } else { 0.8 },
    })
}

pub fn build_2d(p: &Params) -> Result<Setup2D> {
    let model = ReactiveEuler::standard();
    let dx = 1.0 / p.n as f64;
    let wall = || -> FaceBoundary {
        FaceBoundary::Characteristic(Box::new(NormalVelocityWall { m: 5 }))
    };

    let (grid, bcs, init, exact): (
        Grid2D,
        Boundaries2D,
        Box<dyn Fn(f64, f64) -> StateVec>,
        Option<Box<dyn Fn(f64, f64, f64) -> f64>>,
    ) = match p.scenario {
        Scenario::DensityWave2D => {
            let grid = build_grid_2d(
                Rect {
                    xmin: 0.0,
                    xmax: 1.0,
                    ymin: 0.0,
                    ymax: 1.0,
                },
                vec![],
                dx,
                p.eta,
            )?;
            let bcs = Boundaries2D::assign(&grid, p.mode, |f| match f.location {
                FaceLocation::DomainLeft | FaceLocation::DomainRight => FaceBoundary::Periodic,
                _ => wall(),
            });
            let rho = |t: f64, x: f64, y: f64| {
                1.0 + 0.3 * (2.0 * std::f64::consts::PI * (x + y - t)).sin()
            };
            let m = model;
            let init = Box::new(move |x: f64, y: f64| {
                m.conserved(&Primitives {
                    rho: rho(0.0, x, y),
                    u: 1.0,
                    v: 0.0,
                    p: 1.0,
                    y: 0.0,
                })
            });
            (grid, bcs, init, Some(Box::new(rho)))
        }
        Scenario::Burst2D => {
            let grid = build_grid_2d(
                Rect {
                    xmin: 0.0,
                    xmax: 2.0,
                    ymin: 0.0,
                    ymax: 2.0,
                },
                vec![],
                dx,
                p.eta,
            )?;
            let bcs = Boundaries2D::assign(&grid, p.mode, |f| match f.location {
                FaceLocation::DomainLeft | FaceLocation::DomainBottom => wall(),
                _ => FaceBoundary::OutflowCopy,
            });
            let m = model;
            (
                grid,
                bcs,
                Box::new(move |x, y| burst_state(&m, x, y)),
                None,
            )
        }
        Scenario::DetonationDiffraction2D => {
            let grid = build_grid_2d(
                Rect {
                    xmin: 0.0,
                    xmax: 5.0,
                    ymin: 0.0,
                    ymax: 5.0,
                },
                vec![],
                dx,
                p.eta,
            )?;
            // states given directly in conserved variables
            let driven = StateVec::from_slice(&[11.0, 11.0 * 6.18, 0.0, 970.0, 11.0]);
            let quiescent = StateVec::from_slice(&[5.0, 0.0, 0.0, 400.0, 5.0]);
            let bcs = Boundaries2D::assign(&grid, p.mode, |f| match f.location {
                FaceLocation::DomainLeft => {
                    FaceBoundary::Prescribed(Box::new(move |_t| driven))
                }
                _ => wall(),
            });
            let init = Box::new(move |x: f64, _y: f64| if x < 0.5 { driven } else { quiescent });
            (grid, bcs, init, None)
        }
        Scenario::DetonationChannel2D => {
            let grid = build_grid_2d(
                Rect {
                    xmin: 0.0,
                    xmax: 10.0,
                    ymin: 0.0,
                    ymax: 10.0,
                },
                vec![
                    Rect {
                        xmin: 1.0,
                        xmax: 3.0,
                        ymin: 0.0,
                        ymax: 3.0,
                    },
                    Rect {
                        xmin: 5.0,
                        xmax: 10.0,
                        ymin: 0.0,
                        ymax: 5.0,
                    },
                ],
                dx,
                p.eta,
            )?;
            let bcs = Boundaries2D::assign(&grid, p.mode, |_| wall());
            let m = model;
            (
                grid,
                bcs,
                Box::new(move |x, y| burst_state(&m, x, y)),
                None,
            )
        }
        _ => {
            return Err(SolverError::Config(format!(
                "scenario '{}' is not two-dimensional",
                p.scenario.name()
            )))
        }
    };

    let mut field = Field2D::new(grid.nx, grid.ny, 5);
    for j in 0..grid.ny as i64 {
        for i in 0..grid.nx as i64 {
            if grid.node_kind(i, j) == NodeKind::Interior {
                field.set(i, j, init(grid.x(i), grid.y(j)));
            }
        }
    }
    Ok(Setup2D {
        model,
        grid,
        field,
        bcs,
        exact,
    })
}

//! IMEX Runge-Kutta time stepping on 1D and 2D grids.
//!
//! Each step runs the double-tableau stage loop: interior stage values
//! come from the WENO divergence plus a per-point implicit source solve;
//! ghost nodes are refreshed every stage from the boundary treatment
//! (characteristic/ILW stage solves, prescribed states, outflow copies,
//! or periodic wraparound).

use crate::boundary1d::{
    boundary_first_derivative_ilw, boundary_second_derivative, boundary_state_n,
    characteristic_split_lenient, extrapolate_characteristics, extrapolate_components,
    flux_second_derivative, make_stage_record, stage_boundary_derivative, stage_boundary_value,
    taylor_value, BoundaryRelation, StageRecord,
};
use crate::boundary2d::{face_frame, open_face, outflow_copy, prescribed_fill, FaceFrame, FaceStepState};
use crate::discretization::{global_alpha, spatial_divergence_1d, spatial_divergence_2d};
use crate::error::{Result, SolverError};
use crate::extrapolation::{cubic_extrapolate, ExtrapolationMode, WENO_EPS};
use crate::grid::Field1D;
use crate::grid::Grid1D;
use crate::grid2d::{Field2D, Grid2D, NodeKind};
use crate::linalg::StateVec;
use crate::model::{Direction, Model};
use crate::tableau::ImexTableau;

type StateFn = Box<dyn Fn(f64) -> StateVec + Send + Sync>;

/// Boundary handling for one end of the interval.
pub enum SideBoundary {
    /// Full ghost-point treatment: physical relations on the incoming
    /// characteristics, extrapolation on the outgoing ones.
    Characteristic(Box<dyn BoundaryRelation>),
    /// Known exterior state as a function of time; ghosts take it
    /// verbatim (supersonic inflow).
    Prescribed(StateFn),
    /// Ghost layers copy the nearest interior layers (crude outflow).
    OutflowCopy,
    /// Wraparound; both sides must use it and the lattice must tile the
    /// period (`eta_left = eta_right = 1/2`).
    Periodic,
}

pub struct Boundaries1D {
    pub left: SideBoundary,
    pub right: SideBoundary,
    /// Weighting used for all boundary extrapolations: linear on smooth
    /// problems, WENO in the presence of discontinuities.
    pub mode: ExtrapolationMode,
}

/// Time step from the CFL condition, clipped so the step lands exactly
/// on `t_end`.
pub fn compute_dt(cfl: f64, dx: f64, alpha: f64, t: f64, t_end: f64) -> f64 {
    let dt = cfl * dx / alpha;
    dt.min(t_end - t)
}

/// Geometry of one end in the local inward frame.
struct SideFrame {
    sign: f64,
    /// Distance from the boundary to the nearest node.
    delta0: f64,
    /// Indices of the three nearest interior nodes, nearest first.
    idx: [i64; 3],
    /// Ghost slots with their local coordinates (negative).
    ghosts: [(i64, f64); 2],
}

impl SideFrame {
    fn left(grid: &Grid1D) -> Self {
        let dx = grid.dx;
        SideFrame {
            sign: 1.0,
            delta0: grid.eta_left * dx,
            idx: [0, 1, 2],
            ghosts: [(-1, (grid.eta_left - 1.0) * dx), (-2, (grid.eta_left - 2.0) * dx)],
        }
    }

    fn right(grid: &Grid1D) -> Self {
        let dx = grid.dx;
        let n = grid.n as i64;
        SideFrame {
            sign: -1.0,
            delta0: grid.eta_right * dx,
            idx: [n - 1, n - 2, n - 3],
            ghosts: [(n, (grid.eta_right - 1.0) * dx), (n + 1, (grid.eta_right - 2.0) * dx)],
        }
    }

    fn interior(&self, field: &Field1D) -> [StateVec; 3] {
        [
            field.get(self.idx[0]),
            field.get(self.idx[1]),
            field.get(self.idx[2]),
        ]
    }

    fn local_fluxes(&self, model: &dyn Model, states: &[StateVec; 3]) -> [StateVec; 3] {
        [
            model.flux(&states[0], Direction::X).scale(self.sign),
            model.flux(&states[1], Direction::X).scale(self.sign),
            model.flux(&states[2], Direction::X).scale(self.sign),
        ]
    }
}

/// Per-step boundary state for one characteristic end: the frozen
/// splitting, the time-level-n Taylor data, and the growing stage
/// records.
struct SideState {
    frame: SideFrame,
    mode: ExtrapolationMode,
    /// No incoming characteristics: ghosts are pure extrapolations of the
    /// current stage solution and the stage-record machinery is skipped.
    outflow: bool,
    u_n: [StateVec; 3],
    records: Vec<StageRecord>,
}

impl SideState {
    /// Assemble the time-level-n boundary data: Newton solve for the
    /// value, ILW for the first derivative, characteristic extrapolation
    /// for the second.
    fn open(
        model: &dyn Model,
        grid: &Grid1D,
        field: &Field1D,
        frame: SideFrame,
        relation: &dyn BoundaryRelation,
        t: f64,
        mode: ExtrapolationMode,
    ) -> Result<Self> {
        let interior = frame.interior(field);
        let split_at = relation.split_state(&interior[0]);
        let split = characteristic_split_lenient(model, &split_at, Direction::X, frame.sign)?;
        let ex =
            extrapolate_characteristics(&split, &interior, frame.delta0, grid.dx, WENO_EPS, mode)?;
        let u0 = boundary_state_n(&split, relation, &ex.v_star[0], t, &interior[0])?;
        let a_loc = model.flux_jacobian(&u0, Direction::X).scale(frame.sign);
        let u1 =
            boundary_first_derivative_ilw(
            model,
            &split,
            relation,
            &u0,
            &a_loc,
            &ex.v_star[1],
            t,
            &StateVec::zeros(u0.len()),
        )?;
        let u2 = boundary_second_derivative(&split, &ex.v_star[2]);
        Ok(SideState {
            frame,
            mode,
            outflow: split.p == 0,
            u_n: [u0, u1, u2],
            records: Vec::with_capacity(8),
        })
    }

    /// Solve stage `i` at the boundary, fill this side's ghosts in
    /// `field`, and append the stage record. The field must already hold
    /// the interior stage values.
    fn fill_stage(
        &mut self,
        model: &dyn Model,
        tab: &ImexTableau,
        grid: &Grid1D,
        field: &mut Field1D,
        i: usize,
        dt: f64,
    ) -> Result<()> {
        if self.outflow {
            let f = &self.frame;
            if self.mode == ExtrapolationMode::Linear {
                // smooth data: a cubic through four nodes beats the
                // blended quadratic's boundary constant
                let step = f.idx[1] - f.idx[0];
                let s = [
                    field.get(f.idx[0]),
                    field.get(f.idx[1]),
                    field.get(f.idx[2]),
                    field.get(f.idx[2] + step),
                ];
                let m = s[0].len();
                for &(j, zeta) in &f.ghosts {
                    let mut g = StateVec::zeros(m);
                    for c in 0..m {
                        g[c] = cubic_extrapolate(
                            [s[0][c], s[1][c], s[2][c], s[3][c]],
                            f.delta0,
                            grid.dx,
                            zeta,
                        );
                    }
                    field.set(j, g);
                }
            } else {
                let interior = f.interior(field);
                let v = extrapolate_components(&interior, f.delta0, grid.dx, WENO_EPS, self.mode)?;
                for &(j, zeta) in &f.ghosts {
                    field.set(j, taylor_value(&v, zeta));
                }
            }
            return Ok(());
        }
        let value = stage_boundary_value(model, tab, i, dt, &self.u_n[0], &self.records)?;
        let deriv =
            stage_boundary_derivative(model, tab, i, dt, &self.u_n[1], &self.records, &value)?;
        let interior = self.frame.interior(field);
        let second = if i == 0 {
            self.u_n[2]
        } else {
            extrapolate_components(&interior, self.frame.delta0, grid.dx, WENO_EPS, self.mode)?[2]
        };
        let taylor = [value, deriv, second];
        for &(j, zeta) in &self.frame.ghosts {
            field.set(j, taylor_value(&taylor, zeta));
        }
        let a_loc = model.flux_jacobian(&value, Direction::X).scale(self.frame.sign);
        let fluxes = self.frame.local_fluxes(model, &interior);
        let flux_second =
            flux_second_derivative(&fluxes, self.frame.delta0, grid.dx, self.mode)?;
        self.records.push(make_stage_record(
            model,
            value,
            deriv,
            &a_loc,
            &StateVec::zeros(value.len()),
            flux_second,
        ));
        Ok(())
    }
}

fn fill_simple_side(
    side: &SideBoundary,
    frame: &SideFrame,
    field: &mut Field1D,
    n: i64,
    t_stage: f64,
) {
    match side {
        SideBoundary::Prescribed(f) => {
            let s = f(t_stage);
            for &(j, _) in &frame.ghosts {
                field.set(j, s);
            }
        }
        SideBoundary::OutflowCopy => {
            field.set(frame.ghosts[0].0, field.get(frame.idx[0]));
            field.set(frame.ghosts[1].0, field.get(frame.idx[1]));
        }
        SideBoundary::Periodic => {
            for j in [-2i64, -1] {
                field.set(j, field.get(j + n));
            }
            for j in [n, n + 1] {
                field.set(j, field.get(j - n));
            }
        }
        SideBoundary::Characteristic(_) => unreachable!(),
    }
}

/// One IMEX step from `t` to `t + dt`. The input field needs interior
/// values only; the result has interior values only.
pub fn imex_step_1d(
    model: &dyn Model,
    tab: &ImexTableau,
    grid: &Grid1D,
    field: &Field1D,
    bcs: &Boundaries1D,
    t: f64,
    dt: f64,
) -> Result<Field1D> {
    let n = grid.n;
    let m = model.num_components();
    if matches!(bcs.left, SideBoundary::Periodic) != matches!(bcs.right, SideBoundary::Periodic) {
        return Err(SolverError::Config(
            "periodic boundaries must be used on both ends".into(),
        ));
    }

    let mut left = match &bcs.left {
        SideBoundary::Characteristic(rel) => Some(SideState::open(
            model,
            grid,
            field,
            SideFrame::left(grid),
            rel.as_ref(),
            t,
            bcs.mode,
        )?),
        _ => None,
    };
    let mut right = match &bcs.right {
        SideBoundary::Characteristic(rel) => Some(SideState::open(
            model,
            grid,
            field,
            SideFrame::right(grid),
            rel.as_ref(),
            t,
            bcs.mode,
        )?),
        _ => None,
    };
    let left_frame = SideFrame::left(grid);
    let right_frame = SideFrame::right(grid);

    let u_n: Vec<StateVec> = (0..n as i64).map(|j| field.get(j)).collect();
    let s = tab.s;
    let mut divs: Vec<Vec<StateVec>> = Vec::with_capacity(s);
    let mut srcs: Vec<Vec<StateVec>> = Vec::with_capacity(s);
    let mut work = Field1D::new(n, m);

    for i in 0..s {
        // interior stage values
        let coef = dt * tab.a[i][i];
        for (j, base) in u_n.iter().enumerate() {
            let mut rhs = *base;
            for jj in 0..i {
                rhs.axpy(-dt * tab.a_tilde[i][jj], &divs[jj][j]);
                rhs.axpy(dt * tab.a[i][jj], &srcs[jj][j]);
            }
            work.set(j as i64, model.implicit_solve(&rhs, coef)?);
        }

        // ghost fill
        let t_stage = t + tab.c_tilde[i] * dt;
        if let Some(state) = left.as_mut() {
            state.fill_stage(model, tab, grid, &mut work, i, dt)?;
        } else {
            fill_simple_side(&bcs.left, &left_frame, &mut work, n as i64, t_stage);
        }
        if let Some(state) = right.as_mut() {
            state.fill_stage(model, tab, grid, &mut work, i, dt)?;
        } else {
            fill_simple_side(&bcs.right, &right_frame, &mut work, n as i64, t_stage);
        }

        // stage-frozen splitting speed; interior nodes only, so that
        // out-of-equilibrium ghost states near a stiff boundary layer
        // cannot inflate alpha past the speed the step size was chosen for
        let stage_states: Vec<StateVec> = (0..n as i64).map(|j| work.get(j)).collect();
        let alpha = global_alpha(model, stage_states.iter(), Direction::X)?;
        divs.push(spatial_divergence_1d(model, &work, grid.dx, alpha)?);
        srcs.push((0..n as i64).map(|j| model.source(&work.get(j))).collect());
    }

    let mut out = Field1D::new(n, m);
    for (j, base) in u_n.iter().enumerate() {
        let mut u = *base;
        for i in 0..s {
            u.axpy(-dt * tab.w_tilde[i], &divs[i][j]);
            u.axpy(dt * tab.w[i], &srcs[i][j]);
        }
        out.set(j as i64, u);
    }
    Ok(out)
}

/// March from `t0` to `t_end` with CFL-limited steps; returns the number
/// of steps taken.
pub fn advance_1d(
    model: &dyn Model,
    tab: &ImexTableau,
    grid: &Grid1D,
    field: &mut Field1D,
    bcs: &Boundaries1D,
    t0: f64,
    t_end: f64,
    cfl: f64,
) -> Result<usize> {
    let mut t = t0;
    let mut steps = 0;
    while t < t_end - 1e-14 * t_end.abs().max(1.0) {
        let states: Vec<StateVec> = (0..grid.n as i64).map(|j| field.get(j)).collect();
        let alpha = global_alpha(model, states.iter(), Direction::X)?;
        let dt = compute_dt(cfl, grid.dx, alpha, t, t_end);
        *field = imex_step_1d(model, tab, grid, field, bcs, t, dt)?;
        t += dt;
        steps += 1;
    }
    Ok(steps)
}


/// Boundary handling for one face of a 2D grid, indexed in face order.
pub enum FaceBoundary {
    /// Full ghost-point treatment with physical relations on the
    /// incoming characteristics.
    Characteristic(Box<dyn BoundaryRelation>),
    /// Known exterior state as a function of time (supersonic inflow).
    Prescribed(StateFn),
    /// Ghost layers copy the nearest interior layers (crude outflow).
    OutflowCopy,
    /// Wraparound across the domain; the opposite edge must also be
    /// periodic and the lattice must tile the width.
    Periodic,
}

pub struct Boundaries2D {
    /// One entry per `grid.faces` entry, same order.
    pub faces: Vec<FaceBoundary>,
    pub mode: ExtrapolationMode,
}

impl Boundaries2D {
    /// Assign a boundary kind to every face by its location.
    pub fn assign(
        grid: &Grid2D,
        mode: ExtrapolationMode,
        mut f: impl FnMut(&crate::grid2d::Face) -> FaceBoundary,
    ) -> Self {
        Boundaries2D {
            faces: grid.faces.iter().map(|face| f(face)).collect(),
            mode,
        }
    }
}

/// Validate periodic assignments and report which axes wrap.
fn periodic_axes(grid: &Grid2D, bcs: &Boundaries2D) -> Result<(bool, bool)> {
    use crate::grid2d::FaceLocation as L;
    let mut edge_state: [(bool, bool); 4] = [(false, false); 4]; // (present, periodic), L R B T
    let mut counts = [0usize; 4];
    for (face, bc) in grid.faces.iter().zip(&bcs.faces) {
        let slot = match face.location {
            L::DomainLeft => 0,
            L::DomainRight => 1,
            L::DomainBottom => 2,
            L::DomainTop => 3,
            L::Obstacle { .. } => {
                if matches!(bc, FaceBoundary::Periodic) {
                    return Err(SolverError::Config(
                        "periodic boundary on an obstacle face".into(),
                    ));
                }
                continue;
            }
        };
        counts[slot] += 1;
        edge_state[slot] = (true, matches!(bc, FaceBoundary::Periodic));
    }
    let mut wrap = [false; 2];
    for (axis, (a, b)) in [(0usize, (0usize, 1usize)), (1, (2, 3))] {
        let pa = edge_state[a].1;
        let pb = edge_state[b].1;
        if pa != pb {
            return Err(SolverError::Config(
                "periodic boundaries must be used on both opposite edges".into(),
            ));
        }
        if !pa {
            continue;
        }
        if counts[a] != 1 || counts[b] != 1 {
            return Err(SolverError::Config(
                "periodic edges must be free of obstacles".into(),
            ));
        }
        let (width, n) = if axis == 0 {
            (grid.domain.xmax - grid.domain.xmin, grid.nx)
        } else {
            (grid.domain.ymax - grid.domain.ymin, grid.ny)
        };
        if (width - n as f64 * grid.dx).abs() > 1e-9 * grid.dx {
            return Err(SolverError::Config(format!(
                "lattice does not tile the periodic width: {} vs {} nodes at dx = {}",
                width, n, grid.dx
            )));
        }
        wrap[axis] = true;
    }
    Ok((wrap[0], wrap[1]))
}

fn wrap_periodic(grid: &Grid2D, field: &mut Field2D, wrap_x: bool, wrap_y: bool) {
    let (nx, ny) = (grid.nx as i64, grid.ny as i64);
    if wrap_x {
        for j in 0..ny {
            for i in [-2i64, -1] {
                let v = field.get(i + nx, j);
                field.set(i, j, v);
            }
            for i in [nx, nx + 1] {
                let v = field.get(i - nx, j);
                field.set(i, j, v);
            }
        }
    }
    if wrap_y {
        for i in 0..nx {
            for j in [-2i64, -1] {
                let v = field.get(i, j + ny);
                field.set(i, j, v);
            }
            for j in [ny, ny + 1] {
                let v = field.get(i, j - ny);
                field.set(i, j, v);
            }
        }
    }
}

/// Every node of the extended lattice currently holding data.
/// One IMEX step from `t` to `t + dt` on a 2D grid. The input field
/// needs interior values only; the result has interior values only.
pub fn imex_step_2d(
    model: &dyn Model,
    tab: &ImexTableau,
    grid: &Grid2D,
    field: &Field2D,
    bcs: &Boundaries2D,
    t: f64,
    dt: f64,
) -> Result<Field2D> {
    let m = model.num_components();
    if bcs.faces.len() != grid.faces.len() {
        return Err(SolverError::Config(format!(
            "{} boundary assignments for {} faces",
            bcs.faces.len(),
            grid.faces.len()
        )));
    }
    let (wrap_x, wrap_y) = periodic_axes(grid, bcs)?;

    let mut frames: Vec<Option<FaceFrame>> = Vec::with_capacity(grid.faces.len());
    for (fi, bc) in bcs.faces.iter().enumerate() {
        frames.push(match bc {
            FaceBoundary::Characteristic(_) | FaceBoundary::OutflowCopy => {
                Some(face_frame(grid, fi)?)
            }
            _ => None,
        });
    }
    let mut face_states: Vec<Option<FaceStepState>> = Vec::with_capacity(grid.faces.len());
    for (fi, bc) in bcs.faces.iter().enumerate() {
        face_states.push(match bc {
            FaceBoundary::Characteristic(rel) => Some(open_face(
                model,
                grid,
                field,
                frames[fi].as_ref().unwrap(),
                rel.as_ref(),
                t,
                bcs.mode,
            )?),
            _ => None,
        });
    }

    let interior: Vec<(i64, i64)> = (0..grid.ny as i64)
        .flat_map(|j| (0..grid.nx as i64).map(move |i| (i, j)))
        .filter(|&(i, j)| grid.node_kind(i, j) == NodeKind::Interior)
        .collect();

    let s = tab.s;
    let mut divs: Vec<Field2D> = Vec::with_capacity(s);
    let mut srcs: Vec<Field2D> = Vec::with_capacity(s);

    for i in 0..s {
        let coef = dt * tab.a[i][i];
        let mut work = Field2D::new(grid.nx, grid.ny, m);
        for &(ix, jy) in &interior {
            let mut rhs = field.get(ix, jy);
            for jj in 0..i {
                rhs.axpy(-dt * tab.a_tilde[i][jj], &divs[jj].get(ix, jy));
                rhs.axpy(dt * tab.a[i][jj], &srcs[jj].get(ix, jy));
            }
            work.set(ix, jy, model.implicit_solve(&rhs, coef)?);
        }

        wrap_periodic(grid, &mut work, wrap_x, wrap_y);
        let t_stage = t + tab.c_tilde[i] * dt;
        for (fi, bc) in bcs.faces.iter().enumerate() {
            match bc {
                FaceBoundary::Characteristic(_) => {
                    face_states[fi]
                        .as_mut()
                        .unwrap()
                        .fill_stage(model, tab, grid, &mut work, i, dt)?;
                }
                FaceBoundary::Prescribed(f) => {
                    prescribed_fill(grid, fi, &mut work, &f(t_stage));
                }
                FaceBoundary::OutflowCopy => {
                    outflow_copy(grid, frames[fi].as_ref().unwrap(), &mut work);
                }
                FaceBoundary::Periodic => {}
            }
        }

        // splitting speed from interior nodes only (see the 1D stepper)
        let stage_states: Vec<StateVec> =
            interior.iter().map(|&(ix, jy)| work.get(ix, jy)).collect();
        let ax = global_alpha(model, stage_states.iter(), Direction::X)?;
        let ay = global_alpha(model, stage_states.iter(), Direction::Y)?;
        let mut div = spatial_divergence_2d(model, &work, grid, Direction::X, ax)?;
        let divy = spatial_divergence_2d(model, &work, grid, Direction::Y, ay)?;
        let mut src = Field2D::new(grid.nx, grid.ny, m);
        for &(ix, jy) in &interior {
            let mut d = div.get(ix, jy);
            d.axpy(1.0, &divy.get(ix, jy));
            div.set(ix, jy, d);
            src.set(ix, jy, model.source(&work.get(ix, jy)));
        }
        divs.push(div);
        srcs.push(src);
    }

    let mut out = Field2D::new(grid.nx, grid.ny, m);
    for &(ix, jy) in &interior {
        let mut u = field.get(ix, jy);
        for i in 0..s {
            u.axpy(-dt * tab.w_tilde[i], &divs[i].get(ix, jy));
            u.axpy(dt * tab.w[i], &srcs[i].get(ix, jy));
        }
        out.set(ix, jy, u);
    }
    Ok(out)
}

/// March a 2D field from `t0` to `t_end` with CFL-limited steps (the
/// restriction uses the larger of the two directional wave speeds);
/// returns the number of steps taken.
pub fn advance_2d(
    model: &dyn Model,
    tab: &ImexTableau,
    grid: &Grid2D,
    field: &mut Field2D,
    bcs: &Boundaries2D,
    t0: f64,
    t_end: f64,
    cfl: f64,
) -> Result<usize> {
    let mut t = t0;
    let mut steps = 0;
    while t < t_end - 1e-14 * t_end.abs().max(1.0) {
        let mut states = Vec::new();
        for j in 0..grid.ny as i64 {
            for i in 0..grid.nx as i64 {
                if grid.node_kind(i, j) == NodeKind::Interior {
                    states.push(field.get(i, j));
                }
            }
        }
        let ax = global_alpha(model, states.iter(), Direction::X)?;
        let ay = global_alpha(model, states.iter(), Direction::Y)?;
        // the split-flux CFL limit in 2D is on the sum of the directional
        // speeds, not their max
        let dt = compute_dt(cfl, grid.dx, ax + ay, t, t_end);
        *field = imex_step_2d(model, tab, grid, field, bcs, t, dt)?;
        t += dt;
        steps += 1;
    }
    Ok(steps)
}

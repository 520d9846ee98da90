//! Ghost-point boundary treatment: characteristic extrapolation, inverse
//! Lax-Wendroff first derivatives, and Runge-Kutta stage solves at the
//! boundary point.
//!
//! Everything here works in a local frame whose coordinate is the signed
//! distance from the boundary measured into the fluid. In that frame the
//! system reads `U_t + F_loc(U)_z = Q(U)` with `F_loc = sign * F`, so one
//! set of formulas serves left/right ends and 2D faces alike. Ghost
//! points sit at negative local coordinates.

use crate::error::{Result, SolverError};
use crate::extrapolation::{extrapolate, ExtrapolationMode, ExtrapolationResult, WENO_EPS};
use crate::linalg::{StateMat, StateVec};
use crate::model::{Direction, Model};
use crate::tableau::ImexTableau;

/// Eigenvalues inside this band around zero break the fixed
/// inflow/outflow classification.
pub const SPLIT_TOL: f64 = 1e-10;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;

/// Frozen characteristic decomposition at the first interior node, with
/// modes ordered so the `p` incoming ones (positive local eigenvalue)
/// come first.
#[derive(Clone, Copy, Debug)]
pub struct CharSplit {
    pub p: usize,
    /// Local-frame eigenvalues, sorted descending.
    pub lambda: StateVec,
    /// Reordered left eigenvectors as rows.
    pub left: StateMat,
    /// Matching right eigenvectors as columns (inverse of `left`).
    pub right: StateMat,
}

fn split_impl(
    model: &dyn Model,
    u0: &StateVec,
    dir: Direction,
    inward_sign: f64,
    strict: bool,
) -> Result<CharSplit> {
    let es = model.eigensystem(u0, dir)?;
    let m = model.num_components();
    let mut order: Vec<usize> = (0..m).collect();
    let lam = |k: usize| inward_sign * es.lambda[k];
    order.sort_by(|&a, &b| lam(b).partial_cmp(&lam(a)).unwrap());
    if strict {
        for k in 0..m {
            if lam(k).abs() < SPLIT_TOL {
                return Err(SolverError::ZeroEigenvalue(es.lambda[k]));
            }
        }
    }
    let mut lambda = StateVec::zeros(m);
    let mut left = StateMat::zeros(m);
    let mut right = StateMat::zeros(m);
    let mut p = 0;
    for (pos, &k) in order.iter().enumerate() {
        lambda[pos] = lam(k);
        if lambda[pos] > SPLIT_TOL {
            p += 1;
        }
        left.set_row(pos, &es.left.row(k));
        for r in 0..m {
            right.set(r, pos, es.right.get(r, k));
        }
    }
    Ok(CharSplit {
        p,
        lambda,
        left,
        right,
    })
}

/// Characteristic split that insists on a fixed inflow/outflow
/// classification (no eigenvalue near zero).
pub fn characteristic_split(
    model: &dyn Model,
    u0: &StateVec,
    dir: Direction,
    inward_sign: f64,
) -> Result<CharSplit> {
    split_impl(model, u0, dir, inward_sign, true)
}

/// Variant that tolerates zero eigenvalues, counting them as outgoing
/// (extrapolated). Needed at walls, where the normal velocity vanishes.
pub fn characteristic_split_lenient(
    model: &dyn Model,
    u0: &StateVec,
    dir: Direction,
    inward_sign: f64,
) -> Result<CharSplit> {
    split_impl(model, u0, dir, inward_sign, false)
}

/// Physical boundary condition `B(U, t) = 0` supplying one equation per
/// incoming characteristic.
pub trait BoundaryRelation: Send + Sync {
    /// Number of relations (must match the incoming-mode count).
    fn count(&self) -> usize;
    /// Residual `B(U, t)`; first `count()` components used.
    fn residual(&self, u: &StateVec, t: f64) -> StateVec;
    /// Jacobian `B_U`; first `count()` rows used.
    fn jacobian(&self, u: &StateVec, t: f64) -> StateMat;
    /// `g = -B_t`, the explicit time derivative entering the ILW solve.
    fn time_term(&self, u: &StateVec, t: f64) -> StateVec;
    /// Linearization state for the characteristic split, derived from the
    /// nearest interior node. Relations that constrain the state may
    /// project onto the constraint so the incoming-mode count is read off
    /// a boundary-consistent state.
    fn split_state(&self, first_interior: &StateVec) -> StateVec {
        *first_interior
    }
}

type TimeFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dirichlet data on one conserved component: `U[c] = value(t)`.
pub struct ComponentDirichlet {
    pub component: usize,
    pub value: TimeFn,
    pub dvalue: TimeFn,
    pub m: usize,
}

impl BoundaryRelation for ComponentDirichlet {
    fn count(&self) -> usize {
        1
    }
    fn residual(&self, u: &StateVec, t: f64) -> StateVec {
        let mut r = StateVec::zeros(self.m);
        r[0] = u[self.component] - (self.value)(t);
        r
    }
    fn jacobian(&self, _u: &StateVec, _t: f64) -> StateMat {
        let mut j = StateMat::zeros(self.m);
        j.set(0, self.component, 1.0);
        j
    }
    fn time_term(&self, _u: &StateVec, t: f64) -> StateVec {
        let mut g = StateVec::zeros(self.m);
        g[0] = (self.dvalue)(t);
        g
    }
}

/// Static-wall condition in the local frame: normal velocity
/// `U[1]/U[0] = 0`.
pub struct NormalVelocityWall {
    pub m: usize,
}

impl BoundaryRelation for NormalVelocityWall {
    fn count(&self) -> usize {
        1
    }
    // Project the linearization state onto the wall constraint; the
    // nearest interior node can carry normal velocity (flow approaching
    // the wall), which would miscount the incoming modes.
    fn split_state(&self, first_interior: &StateVec) -> StateVec {
        let mut s = *first_interior;
        s[1] = 0.0;
        s
    }
    fn residual(&self, u: &StateVec, _t: f64) -> StateVec {
        let mut r = StateVec::zeros(self.m);
        r[0] = u[1] / u[0];
        r
    }
    fn jacobian(&self, u: &StateVec, _t: f64) -> StateMat {
        let mut j = StateMat::zeros(self.m);
        j.set(0, 0, -u[1] / (u[0] * u[0]));
        j.set(0, 1, 1.0 / u[0]);
        j
    }
    fn time_term(&self, _u: &StateVec, _t: f64) -> StateVec {
        StateVec::zeros(self.m)
    }
}

/// Empty relation for a boundary with no incoming characteristics; the
/// state there is fully determined by extrapolation.
pub struct NoRelation {
    pub m: usize,
}

impl BoundaryRelation for NoRelation {
    fn count(&self) -> usize {
        0
    }
    fn residual(&self, _u: &StateVec, _t: f64) -> StateVec {
        StateVec::zeros(self.m)
    }
    fn jacobian(&self, _u: &StateVec, _t: f64) -> StateMat {
        StateMat::zeros(self.m)
    }
    fn time_term(&self, _u: &StateVec, _t: f64) -> StateVec {
        StateVec::zeros(self.m)
    }
}

/// Outgoing-mode boundary data extrapolated from the first three
/// interior nodes: per mode the value and its first two local-frame
/// derivatives at the boundary point.
pub struct CharExtrapolation {
    /// `v_star[k][mode]` = k-th derivative of mode `mode` (split order).
    pub v_star: [StateVec; 3],
}

/// Extrapolate the characteristic variables `l_m U_j` of the three
/// nearest interior states to the boundary. `delta0` is the distance
/// from the boundary to the nearest node; nodes continue inward with
/// spacing `dx`.
pub fn extrapolate_characteristics(
    split: &CharSplit,
    interior: &[StateVec; 3],
    delta0: f64,
    dx: f64,
    eps: f64,
    mode: ExtrapolationMode,
) -> Result<CharExtrapolation> {
    let m = interior[0].len();
    let mut v_star = [StateVec::zeros(m), StateVec::zeros(m), StateVec::zeros(m)];
    for q in 0..m {
        let l = split.left.row(q);
        let vals = [
            l.dot(&interior[0]),
            l.dot(&interior[1]),
            l.dot(&interior[2]),
        ];
        let r = extrapolate(vals, delta0, dx, 0.0, eps, mode)?;
        for k in 0..3 {
            v_star[k][q] = r.v_star[k];
        }
    }
    Ok(CharExtrapolation { v_star })
}

/// Component-wise extrapolation of a vector quantity to the boundary;
/// returns value and two local-frame derivatives per component.
pub fn extrapolate_components(
    interior: &[StateVec; 3],
    delta0: f64,
    dx: f64,
    eps: f64,
    mode: ExtrapolationMode,
) -> Result<[StateVec; 3]> {
    let m = interior[0].len();
    let mut out = [StateVec::zeros(m), StateVec::zeros(m), StateVec::zeros(m)];
    for c in 0..m {
        let vals = [interior[0][c], interior[1][c], interior[2][c]];
        let r: ExtrapolationResult = extrapolate(vals, delta0, dx, 0.0, eps, mode)?;
        for k in 0..3 {
            out[k][c] = r.v_star[k];
        }
    }
    Ok(out)
}

/// Solve the time-level-n boundary state from the mixed system
/// `{ B(U, t) = 0 ; l_m U = V*_m for outgoing m }` by Newton iteration.
/// `v_star0` holds the outgoing extrapolated values in split order
/// (modes p..m).
pub fn boundary_state_n(
    split: &CharSplit,
    relation: &dyn BoundaryRelation,
    v_star0: &StateVec,
    t: f64,
    guess: &StateVec,
) -> Result<StateVec> {
    let m = guess.len();
    let p = split.p;
    if relation.count() != p {
        return Err(SolverError::RelationCountMismatch(format!(
            "{} boundary relations for {p} incoming characteristics",
            relation.count()
        )));
    }
    let mut u = *guess;
    for _ in 0..=NEWTON_MAX_ITER {
        let b = relation.residual(&u, t);
        let mut res = StateVec::zeros(m);
        for r in 0..p {
            res[r] = b[r];
        }
        for r in p..m {
            res[r] = split.left.row(r).dot(&u) - v_star0[r];
        }
        if res.norm_inf() <= NEWTON_TOL * (1.0 + u.norm_inf()) {
            return Ok(u);
        }
        let bu = relation.jacobian(&u, t);
        let mut jac = StateMat::zeros(m);
        for r in 0..p {
            jac.set_row(r, &bu.row(r));
        }
        for r in p..m {
            jac.set_row(r, &split.left.row(r));
        }
        let delta = jac.solve(&res).ok_or_else(|| {
            SolverError::SingularBoundaryJacobian("time-level-n boundary solve".into())
        })?;
        u.axpy(-1.0, &delta);
    }
    Err(SolverError::NewtonDivergence(
        "time-level-n boundary solve".into(),
    ))
}

/// Inverse Lax-Wendroff first derivative: trades the time derivative of
/// the boundary relation for the normal derivative of the incoming
/// modes. `a_loc` must be the local-frame flux Jacobian
/// `sign * F_U(U^{n,(0)})`; `v_star1` the outgoing first derivatives in
/// split order; `transverse` the tangential flux divergence at the
/// boundary point (zero in 1D).
pub fn boundary_first_derivative_ilw(
    model: &dyn Model,
    split: &CharSplit,
    relation: &dyn BoundaryRelation,
    u_n0: &StateVec,
    a_loc: &StateMat,
    v_star1: &StateVec,
    t: f64,
    transverse: &StateVec,
) -> Result<StateVec> {
    let m = u_n0.len();
    let p = split.p;
    let bu = relation.jacobian(u_n0, t);
    let mut q = model.source(u_n0);
    q.axpy(-1.0, transverse);
    let g = relation.time_term(u_n0, t);
    let mut sys = StateMat::zeros(m);
    let mut rhs = StateVec::zeros(m);
    for r in 0..p {
        let br = bu.row(r);
        let mut row = StateVec::zeros(m);
        for j in 0..m {
            let mut s = 0.0;
            for k in 0..m {
                s += br[k] * a_loc.get(k, j);
            }
            row[j] = s;
        }
        sys.set_row(r, &row);
        rhs[r] = br.dot(&q) - g[r];
    }
    for r in p..m {
        sys.set_row(r, &split.left.row(r));
        rhs[r] = v_star1[r];
    }
    sys.solve(&rhs)
        .ok_or_else(|| SolverError::SingularIlwSystem("ILW first-derivative solve".into()))
}

/// Second derivative at the boundary: every characteristic mode is
/// extrapolated, then mapped back to conserved variables.
pub fn boundary_second_derivative(split: &CharSplit, v_star2: &StateVec) -> StateVec {
    split.right.matvec(v_star2)
}

/// Quadratic Taylor evaluation at local coordinate `zeta` (negative for
/// ghost nodes).
pub fn taylor_value(u: &[StateVec; 3], zeta: f64) -> StateVec {
    let mut out = u[0];
    out.axpy(zeta, &u[1]);
    out.axpy(0.5 * zeta * zeta, &u[2]);
    out
}

/// Per-stage boundary data consumed by later stage solves. Local-frame
/// throughout; in 2D the tangential flux terms are folded into
/// `flux_div` and `flux_div_deriv`.
#[derive(Clone, Copy, Debug)]
pub struct StageRecord {
    /// `U^{(j),(0)}`.
    pub value: StateVec,
    /// `U^{(j),(1)}`, first local-frame derivative.
    pub deriv: StateVec,
    /// Flux divergence at the boundary: `A(U^(j,0)) U^(j,1)` plus any
    /// tangential contribution.
    pub flux_div: StateVec,
    /// Local derivative of the flux divergence (second flux derivative
    /// plus mixed tangential terms), extrapolated from grid data.
    pub flux_div_deriv: StateVec,
    /// `Q(U^{(j),(0)})`.
    pub source: StateVec,
    /// `Q_U(U^{(j),(0)}) U^{(j),(1)}`.
    pub source_deriv: StateVec,
}

/// Boundary value of stage `i`: solves
/// `U = U^{n,(0)} - dt sum at[i][j] flux_div_j + dt sum a[i][j] Q_j + dt a[i][i] Q(U)`.
pub fn stage_boundary_value(
    model: &dyn Model,
    tab: &ImexTableau,
    i: usize,
    dt: f64,
    u_n0: &StateVec,
    stages: &[StageRecord],
) -> Result<StateVec> {
    debug_assert!(stages.len() >= i);
    let mut rhs = *u_n0;
    for (j, rec) in stages.iter().enumerate().take(i) {
        rhs.axpy(-dt * tab.a_tilde[i][j], &rec.flux_div);
        rhs.axpy(dt * tab.a[i][j], &rec.source);
    }
    model.implicit_solve(&rhs, dt * tab.a[i][i])
}

/// Boundary first derivative of stage `i`: the linear solve
/// `(I - dt a_ii Q_U) U1 = U^{n,(1)} - dt sum at[i][j] flux_div_deriv_j
///  + dt sum a[i][j] source_deriv_j`.
pub fn stage_boundary_derivative(
    model: &dyn Model,
    tab: &ImexTableau,
    i: usize,
    dt: f64,
    u_n1: &StateVec,
    stages: &[StageRecord],
    u_i0: &StateVec,
) -> Result<StateVec> {
    let m = u_n1.len();
    let mut rhs = *u_n1;
    for (j, rec) in stages.iter().enumerate().take(i) {
        rhs.axpy(-dt * tab.a_tilde[i][j], &rec.flux_div_deriv);
        rhs.axpy(dt * tab.a[i][j], &rec.source_deriv);
    }
    let coef = dt * tab.a[i][i];
    if coef == 0.0 {
        return Ok(rhs);
    }
    let qj = model.source_jacobian(u_i0);
    let mut sys = StateMat::identity(m);
    for r in 0..m {
        for c in 0..m {
            sys.set(r, c, sys.get(r, c) - coef * qj.get(r, c));
        }
    }
    sys.solve(&rhs)
        .ok_or_else(|| SolverError::SingularStageMatrix("stage derivative solve".into()))
}

/// Build the stage record for a freshly solved boundary stage.
/// `a_loc` is the local flux Jacobian at `value`; `flux_second` the
/// extrapolated local second derivative of the flux (plus tangential
/// terms in 2D).
pub fn make_stage_record(
    model: &dyn Model,
    value: StateVec,
    deriv: StateVec,
    a_loc: &StateMat,
    tangential_div: &StateVec,
    flux_second: StateVec,
) -> StageRecord {
    let mut flux_div = a_loc.matvec(&deriv);
    flux_div.axpy(1.0, tangential_div);
    let source = model.source(&value);
    let source_deriv = model.source_jacobian(&value).matvec(&deriv);
    StageRecord {
        value,
        deriv,
        flux_div,
        flux_div_deriv: flux_second,
        source,
        source_deriv,
    }
}

/// Extrapolated local second derivative of the flux from its values at
/// the three nearest interior nodes. In the local frame the flux is
/// `sign * F`, handled by the caller passing pre-localized values.
pub fn flux_second_derivative(
    flux_values: &[StateVec; 3],
    delta0: f64,
    dx: f64,
    mode: ExtrapolationMode,
) -> Result<StateVec> {
    let ex = extrapolate_components(flux_values, delta0, dx, WENO_EPS, mode)?;
    Ok(ex[2])
}

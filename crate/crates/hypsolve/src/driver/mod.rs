//! Run orchestration: scenario configs, simulation runs, error norms,
//! convergence studies and file output.

pub mod scenarios;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::boundary1d::{
    boundary_first_derivative_ilw, characteristic_split_lenient, make_stage_record,
    stage_boundary_derivative, stage_boundary_value, BoundaryRelation, ComponentDirichlet,
    StageRecord,
};
use crate::discretization::global_alpha;
use crate::error::{Result, SolverError};
use crate::extrapolation::{extrapolate, ExtrapolationMode, WENO_EPS};
use crate::grid::{Field1D, Grid1D};
use crate::grid2d::{Field2D, Grid2D, NodeKind};
use crate::linalg::StateVec;
use crate::model::{linear_advection, Direction, Model, ScalarLaw};
use crate::oracle::{carpenter_linear, carpenter_nonlinear, BoundarySignal};
use crate::stepper::{compute_dt, imex_step_1d, imex_step_2d};
use crate::tableau::{ars_443, ssp_rk3};

use scenarios::{build_1d, build_2d, Params, Scenario};

/// A scenario run description, usually parsed from a TOML file. Every
/// unset field falls back to the scenario's default.
#[derive(Clone, Debug, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    /// 1D: number of grid nodes; 2D: inverse mesh size (dx = 1/n).
    pub n: Option<usize>,
    /// Resolutions of a convergence study, strictly increasing.
    pub refinements: Option<Vec<usize>>,
    pub eta: Option<f64>,
    pub eta_left: Option<f64>,
    pub eta_right: Option<f64>,
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub epsilon: Option<f64>,
    pub extrapolation: Option<ExtrapolationMode>,
    /// Count of near-left-boundary nodes excluded from error norms.
    pub exclusion: Option<usize>,
    pub max_steps: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(scenario: &str) -> Self {
        ScenarioConfig {
            scenario: scenario.into(),
            n: None,
            refinements: None,
            eta: None,
            eta_left: None,
            eta_right: None,
            t_end: None,
            cfl: None,
            epsilon: None,
            extrapolation: None,
            exclusion: None,
            max_steps: None,
            output_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| SolverError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SolverError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        Scenario::from_name(&self.scenario)?;
        if let Some(r) = &self.refinements {
            if r.windows(2).any(|w| w[1] <= w[0]) {
                return Err(SolverError::Config(
                    "refinements must be strictly increasing".into(),
                ));
            }
            if r.is_empty() {
                return Err(SolverError::Config("empty refinement list".into()));
            }
        }
        Ok(())
    }

    /// Resolve against the scenario defaults at resolution `n`.
    pub fn resolve(&self, n: usize) -> Result<Params> {
        let scenario = Scenario::from_name(&self.scenario)?;
        if scenario.needs_epsilon() && self.epsilon.is_none() {
            return Err(SolverError::Config(format!(
                "scenario '{}' requires 'epsilon'",
                self.scenario
            )));
        }
        Ok(Params {
            scenario,
            n,
            eta_left: self.eta_left.or(self.eta).unwrap_or(0.5),
            eta_right: self.eta_right.or(self.eta).unwrap_or(0.5),
            eta: self.eta.unwrap_or(0.5),
            t_end: self.t_end.unwrap_or_else(|| scenario.default_t_end()),
            cfl: self.cfl.unwrap_or(0.8),
            epsilon: self.epsilon.unwrap_or(1.0),
            mode: self.extrapolation.unwrap_or_else(|| scenario.default_mode()),
        })
    }

    fn exclusion_for(&self, scenario: Scenario) -> usize {
        self.exclusion.unwrap_or_else(|| scenario.default_exclusion())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Discrete error norms of one solution component on a 1D grid;
/// `exclude_left` nodes nearest the left boundary are skipped.
pub fn error_norms_1d(
    grid: &Grid1D,
    field: &Field1D,
    exact: impl Fn(f64) -> f64,
    component: usize,
    exclude_left: usize,
) -> Norms {
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf: f64 = 0.0;
    for j in exclude_left as i64..grid.n as i64 {
        let e = (field.get(j)[component] - exact(grid.x(j))).abs();
        l1 += e * grid.dx;
        l2 += e * e * grid.dx;
        linf = linf.max(e);
    }
    Norms {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

/// Discrete error norms of one component over the interior nodes of a
/// 2D grid.
pub fn error_norms_2d(
    grid: &Grid2D,
    field: &Field2D,
    exact: impl Fn(f64, f64) -> f64,
    component: usize,
) -> Norms {
    let w = grid.dx * grid.dx;
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf: f64 = 0.0;
    for j in 0..grid.ny as i64 {
        for i in 0..grid.nx as i64 {
            if grid.node_kind(i, j) != NodeKind::Interior {
                continue;
            }
            let e = (field.get(i, j)[component] - exact(grid.x(i), grid.y(j))).abs();
            l1 += e * w;
            l2 += e * e * w;
            linf = linf.max(e);
        }
    }
    Norms {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

pub enum RunField {
    One(Grid1D, Field1D),
    Two(Grid2D, Field2D),
}

pub struct RunResult {
    pub field: RunField,
    pub dx: f64,
    pub steps: usize,
    pub norms: Option<Norms>,
    pub wall_seconds: f64,
}

const DEFAULT_MAX_STEPS: usize = 10_000_000;

/// Run a scenario to its terminal time; writes a field CSV and a run
/// manifest when an output directory is configured.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult> {
    let n = cfg
        .n
        .ok_or_else(|| SolverError::Config("'n' is required for a run".into()))?;
    run_at_resolution(cfg, n, true)
}

fn run_at_resolution(cfg: &ScenarioConfig, n: usize, write_output: bool) -> Result<RunResult> {
    let p = cfg.resolve(n)?;
    let max_steps = cfg.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    let tab = ars_443();
    let start = Instant::now();

    let result = if p.scenario.dim() == 1 {
        let setup = build_1d(&p)?;
        let grid = setup.grid;
        let mut field = setup.field;
        let model = setup.model;
        let mut t = 0.0;
        let mut steps = 0usize;
        while t < p.t_end - 1e-14 * p.t_end.max(1.0) {
            if steps >= max_steps {
                return Err(SolverError::Config(format!(
                    "step budget of {max_steps} exhausted at t = {t}"
                )));
            }
            let states: Vec<StateVec> = (0..grid.n as i64).map(|j| field.get(j)).collect();
            let alpha = global_alpha(model.as_ref(), states.iter(), Direction::X)?;
            let dt = compute_dt(p.cfl, grid.dx, alpha, t, p.t_end);
            field = imex_step_1d(model.as_ref(), &tab, &grid, &field, &setup.bcs, t, dt)
                .map_err(|e| step_context(e, steps, t))?;
            t += dt;
            steps += 1;
        }
        let norms = setup.exact.as_ref().map(|exact| {
            error_norms_1d(
                &grid,
                &field,
                |x| exact(p.t_end, x),
                0,
                cfg.exclusion_for(p.scenario),
            )
        });
        RunResult {
            dx: grid.dx,
            field: RunField::One(grid, field),
            steps,
            norms,
            wall_seconds: start.elapsed().as_secs_f64(),
        }
    } else {
        let setup = build_2d(&p)?;
        let grid = setup.grid;
        let mut field = setup.field;
        let model = setup.model;
        let mut t = 0.0;
        let mut steps = 0usize;
        while t < p.t_end - 1e-14 * p.t_end.max(1.0) {
            if steps >= max_steps {
                return Err(SolverError::Config(format!(
                    "step budget of {max_steps} exhausted at t = {t}"
                )));
            }
            let mut states = Vec::new();
            for j in 0..grid.ny as i64 {
                for i in 0..grid.nx as i64 {
                    if grid.node_kind(i, j) == NodeKind::Interior {
                        states.push(field.get(i, j));
                    }
                }
            }
            let ax = global_alpha(&model, states.iter(), Direction::X)?;
            let ay = global_alpha(&model, states.iter(), Direction::Y)?;
            let dt = compute_dt(p.cfl, grid.dx, ax + ay, t, p.t_end);
            field = imex_step_2d(&model, &tab, &grid, &field, &setup.bcs, t, dt)
                .map_err(|e| step_context(e, steps, t))?;
            t += dt;
            steps += 1;
        }
        let norms = setup.exact.as_ref().map(|exact| {
            error_norms_2d(&grid, &field, |x, y| exact(p.t_end, x, y), 0)
        });
        RunResult {
            dx: grid.dx,
            field: RunField::Two(grid, field),
            steps,
            norms,
            wall_seconds: start.elapsed().as_secs_f64(),
        }
    };

    if write_output {
        if let Some(dir) = &cfg.output_dir {
            write_run_output(cfg, &p, n, &result, dir)?;
        }
    }
    Ok(result)
}

fn step_context(e: SolverError, steps: usize, t: f64) -> SolverError {
    SolverError::Config(format!("step {steps} (t = {t:.6}): {e}"))
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub dx: f64,
    pub norms: Norms,
    /// Observed orders vs the previous (coarser) row.
    pub orders: Option<(f64, f64, f64)>,
}

pub struct ConvergenceReport {
    pub scenario: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Aligned text table: dx, L1, order, L2, order, Linf, order.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:<12} {:<7} {:<12} {:<7} {:<12} {:<7}\n",
            "dx", "L1", "order", "L2", "order", "Linf", "order"
        ));
        for r in &self.rows {
            let ord = |v: Option<f64>| v.map_or("-".to_string(), |o| format!("{o:.2}"));
            let (o1, o2, oi) = match r.orders {
                Some((a, b, c)) => (Some(a), Some(b), Some(c)),
                None => (None, None, None),
            };
            out.push_str(&format!(
                "1/{:<8} {:<12.3e} {:<7} {:<12.3e} {:<7} {:<12.3e} {:<7}\n",
                r.n,
                r.norms.l1,
                ord(o1),
                r.norms.l2,
                ord(o2),
                r.norms.linf,
                ord(oi)
            ));
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("n,dx,l1,l1_order,l2,l2_order,linf,linf_order\n");
        for r in &self.rows {
            let ord = |v: Option<f64>| v.map_or(String::new(), |o| format!("{o:.17e}"));
            let (o1, o2, oi) = match r.orders {
                Some((a, b, c)) => (Some(a), Some(b), Some(c)),
                None => (None, None, None),
            };
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{},{:.17e},{},{:.17e},{}\n",
                r.n,
                r.dx,
                r.norms.l1,
                ord(o1),
                r.norms.l2,
                ord(o2),
                r.norms.linf,
                ord(oi)
            ));
        }
        out
    }
}

/// Run every refinement of the config and tabulate errors and observed
/// orders (log2 of consecutive error ratios).
pub fn convergence_study(cfg: &ScenarioConfig) -> Result<ConvergenceReport> {
    let refinements = cfg
        .refinements
        .clone()
        .ok_or_else(|| SolverError::Config("'refinements' is required".into()))?;
    cfg.validate()?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in &refinements {
        let r = run_at_resolution(cfg, n, false)?;
        let norms = r.norms.ok_or_else(|| {
            SolverError::Config(format!(
                "scenario '{}' has no exact solution for a convergence study",
                cfg.scenario
            ))
        })?;
        let orders = rows.last().map(|prev: &ConvergenceRow| {
            (
                (prev.norms.l1 / norms.l1).log2(),
                (prev.norms.l2 / norms.l2).log2(),
                (prev.norms.linf / norms.linf).log2(),
            )
        });
        rows.push(ConvergenceRow {
            n,
            dx: r.dx,
            norms,
            orders,
        });
    }
    let report = ConvergenceReport {
        scenario: cfg.scenario.clone(),
        rows,
    };
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| SolverError::Config(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{}_convergence.csv", cfg.scenario));
        write_text(&path, &report.csv())?;
    }
    Ok(report)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| SolverError::Config(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| SolverError::Config(format!("{}: {e}", path.display())))
}

fn write_run_output(
    cfg: &ScenarioConfig,
    p: &Params,
    n: usize,
    result: &RunResult,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| SolverError::Config(format!("{}: {e}", dir.display())))?;
    let stem = format!("{}_n{}", cfg.scenario, n);
    let field_path = dir.join(format!("{stem}_field.csv"));
    match &result.field {
        RunField::One(grid, field) => {
            let p1 = cfg.resolve(n)?;
            let setup = build_1d(&p1)?;
            let mut csv = String::from("x");
            for name in setup.component_names {
                csv.push(',');
                csv.push_str(name);
            }
            csv.push('\n');
            for j in 0..grid.n as i64 {
                csv.push_str(&format!("{:.17e}", grid.x(j)));
                let s = field.get(j);
                for c in 0..setup.component_names.len() {
                    csv.push_str(&format!(",{:.17e}", s[c]));
                }
                csv.push('\n');
            }
            write_text(&field_path, &csv)?;
        }
        RunField::Two(grid, field) => {
            let model = crate::model::ReactiveEuler::standard();
            let mut csv = String::from("x,y,rho,u,v,p,Y,E\n");
            for j in 0..grid.ny as i64 {
                for i in 0..grid.nx as i64 {
                    if grid.node_kind(i, j) != NodeKind::Interior {
                        continue;
                    }
                    let s = field.get(i, j);
                    let prim = model.primitives(&s);
                    csv.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                        grid.x(i),
                        grid.y(j),
                        prim.rho,
                        prim.u,
                        prim.v,
                        prim.p,
                        prim.y,
                        s[3]
                    ));
                }
            }
            write_text(&field_path, &csv)?;
        }
    }

    let manifest = serde_json::json!({
        "scenario": cfg.scenario,
        "n": n,
        "dx": result.dx,
        "eta": p.eta,
        "eta_left": p.eta_left,
        "eta_right": p.eta_right,
        "t_end": p.t_end,
        "cfl": p.cfl,
        "epsilon": p.epsilon,
        "extrapolation": p.mode,
        "exclusion": cfg.exclusion_for(p.scenario),
        "max_steps": cfg.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
        "tableau": "ars_443",
        "steps": result.steps,
        "wall_seconds": result.wall_seconds,
        "field_csv": field_path.file_name().and_then(|s| s.to_str()),
        "norms": result.norms.map(|nn| serde_json::json!({
            "l1": nn.l1, "l2": nn.l2, "linf": nn.linf,
        })),
    });
    let manifest_path = dir.join(format!("{stem}_manifest.json"));
    write_text(
        &manifest_path,
        &serde_json::to_string_pretty(&manifest)
            .map_err(|e| SolverError::Config(e.to_string()))?,
    )
}

/// Source of the second spatial derivative fed to the stage-boundary
/// harness below.
pub enum SecondDerivative {
    /// Analytic value (the inflow data's second time derivative).
    Exact,
    /// Extrapolated from exact nodal data at spacing `dx`.
    Extrapolated { dx: f64 },
}

/// Stage boundary values of the explicit third-order scheme on linear
/// advection with inflow data g(t) = e^t, computed by the stage-solve
/// machinery from time-level-n boundary data.
pub fn linear_stage_values(t_n: f64, dt: f64, second: SecondDerivative) -> Result<[f64; 3]> {
    let model = linear_advection();
    let tab = ssp_rk3();
    let g = t_n.exp();
    // u(t, x) = g(t - x): first derivative -g', second g''
    let u_n0 = StateVec::scalar(g);
    let u_n1 = StateVec::scalar(-g);
    let u_n2 = match second {
        SecondDerivative::Exact => g,
        SecondDerivative::Extrapolated { dx } => {
            let eta = 0.5;
            let v = |i: f64| (t_n - (eta + i) * dx).exp();
            let r = extrapolate(
                [v(0.0), v(1.0), v(2.0)],
                eta * dx,
                dx,
                0.0,
                WENO_EPS,
                ExtrapolationMode::Weno,
            )?;
            r.v_star[2]
        }
    };

    let mut records: Vec<StageRecord> = Vec::new();
    let mut values = [0.0; 3];
    for i in 0..tab.s {
        let value = stage_boundary_value(&model, &tab, i, dt, &u_n0, &records)?;
        let deriv = stage_boundary_derivative(&model, &tab, i, dt, &u_n1, &records, &value)?;
        values[i] = value[0];
        let a_loc = model.flux_jacobian(&value, Direction::X);
        records.push(make_stage_record(
            &model,
            value,
            deriv,
            &a_loc,
            &StateVec::zeros(1),
            StateVec::scalar(u_n2),
        ));
    }
    Ok(values)
}

/// Stage-1 boundary value for the inviscid quadratic-flux scalar law
/// with inflow data g(t) = 1 + t, from the solver machinery and from the
/// closed form, as a (solver, oracle) pair.
pub fn nonlinear_stage1(t_n: f64, dt: f64) -> Result<(f64, f64)> {
    let model = ScalarLaw::new(
        "quadratic_flux",
        Box::new(|u| 0.5 * u * u),
        Box::new(|u| u),
        Box::new(|_| 0.0),
        Box::new(|_| 0.0),
    );
    let tab = ssp_rk3();
    let relation = ComponentDirichlet {
        component: 0,
        value: Box::new(|t: f64| 1.0 + t),
        dvalue: Box::new(|_| 1.0),
        m: 1,
    };
    let u_n0 = StateVec::scalar(1.0 + t_n);
    let split = characteristic_split_lenient(&model, &u_n0, Direction::X, 1.0)?;
    let a_loc = model.flux_jacobian(&u_n0, Direction::X);
    let u_n1 = boundary_first_derivative_ilw(
        &model,
        &split,
        &relation as &dyn BoundaryRelation,
        &u_n0,
        &a_loc,
        &StateVec::zeros(1),
        t_n,
        &StateVec::zeros(1),
    )?;

    let mut records: Vec<StageRecord> = Vec::new();
    let mut stage1 = 0.0;
    for i in 0..2 {
        let value = stage_boundary_value(&model, &tab, i, dt, &u_n0, &records)?;
        let deriv = stage_boundary_derivative(&model, &tab, i, dt, &u_n1, &records, &value)?;
        if i == 1 {
            stage1 = value[0];
        }
        let a_loc = model.flux_jacobian(&value, Direction::X);
        records.push(make_stage_record(
            &model,
            value,
            deriv,
            &a_loc,
            &StateVec::zeros(1),
            StateVec::zeros(1),
        ));
    }

    let signal = BoundarySignal {
        g: Box::new(|t| 1.0 + t),
        dg: Box::new(|_| 1.0),
        d2g: Box::new(|_| 0.0),
        fp: Box::new(|u| u),
        fpp: Box::new(|_| 1.0),
    };
    let (_, oracle1, _) = carpenter_nonlinear(&signal, t_n, dt)?;
    Ok((stage1, oracle1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid_1d;

    #[test]
    fn config_defaults_and_validation() {
        let cfg = ScenarioConfig::from_toml("scenario = \"burgers_manufactured\"\nn = 40\n")
            .unwrap();
        let p = cfg.resolve(40).unwrap();
        assert_eq!(p.n, 40);
        assert_eq!(p.eta_left, 0.5);
        assert_eq!(p.t_end, 1.0);
        assert_eq!(p.cfl, 0.8);
        assert_eq!(p.mode, ExtrapolationMode::Linear);

        assert!(ScenarioConfig::from_toml("scenario = \"no_such\"\n").is_err());
        assert!(ScenarioConfig::from_toml(
            "scenario = \"burgers_manufactured\"\nrefinements = [40, 20]\n"
        )
        .is_err());
        assert!(ScenarioConfig::from_toml(
            "scenario = \"burgers_manufactured\"\nbogus_key = 1\n"
        )
        .is_err());
        // relaxation scenarios demand an explicit epsilon
        let c2 = ScenarioConfig::new("linear_relax_smooth");
        assert!(c2.resolve(20).is_err());
    }

    #[test]
    fn norm_arithmetic() {
        let grid = build_grid_1d(0.0, 1.0, 10, 0.5, 0.5).unwrap();
        let mut field = Field1D::new(10, 1);
        for j in 0..10i64 {
            field.set(j, StateVec::scalar(0.0));
        }
        field.set(3, StateVec::scalar(0.1));
        let n = error_norms_1d(&grid, &field, |_| 0.0, 0, 0);
        assert!((n.l1 - 0.01).abs() < 1e-15);
        assert!((n.l2 - 0.1 * 0.1f64.sqrt()).abs() < 1e-15);
        assert!((n.linf - 0.1).abs() < 1e-15);
        // exclusion removes the offending node
        let ne = error_norms_1d(&grid, &field, |_| 0.0, 0, 4);
        assert_eq!(ne.linf, 0.0);
    }

    #[test]
    fn convergence_study_orders() {
        let mut cfg = ScenarioConfig::new("burgers_manufactured");
        cfg.refinements = Some(vec![20, 40]);
        let report = convergence_study(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].orders.is_none());
        let (o1, _, _) = report.rows[1].orders.unwrap();
        assert!(o1 > 2.5 && o1 < 3.5, "L1 order {o1}");
        let table = report.table();
        assert!(table.contains("1/20"));
        assert!(table.contains("order"));
    }

    #[test]
    fn runs_are_deterministic() {
        let dir = std::env::temp_dir().join("hypsolve_det_test");
        let _ = std::fs::remove_dir_all(&dir);
        let mut cfg = ScenarioConfig::new("burgers_manufactured");
        cfg.n = Some(20);
        cfg.output_dir = Some(dir.clone());
        run_scenario(&cfg).unwrap();
        let csv_path = dir.join("burgers_manufactured_n20_field.csv");
        let first = std::fs::read(&csv_path).unwrap();
        run_scenario(&cfg).unwrap();
        let second = std::fs::read(&csv_path).unwrap();
        assert_eq!(first, second);
        assert!(dir.join("burgers_manufactured_n20_manifest.json").exists());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn step_budget_is_enforced() {
        let mut cfg = ScenarioConfig::new("burgers_manufactured");
        cfg.n = Some(20);
        cfg.max_steps = Some(3);
        assert!(matches!(
            run_scenario(&cfg),
            Err(SolverError::Config(_))
        ));
    }

    #[test]
    fn oracle_harness_consistency() {
        let signal = BoundarySignal {
            g: Box::new(|t| t.exp()),
            dg: Box::new(|t| t.exp()),
            d2g: Box::new(|t| t.exp()),
            fp: Box::new(|_| 1.0),
            fpp: Box::new(|_| 0.0),
        };
        let (t_n, dt) = (0.3, 0.05);
        let solver = linear_stage_values(t_n, dt, SecondDerivative::Exact).unwrap();
        let (o0, o1, o2) = carpenter_linear(&signal, t_n, dt);
        assert!((solver[0] - o0).abs() < 1e-12);
        assert!((solver[1] - o1).abs() < 1e-12);
        assert!((solver[2] - o2).abs() < 1e-12);
        let (s1, n1) = nonlinear_stage1(0.2, 0.05).unwrap();
        assert!((s1 - n1).abs() < 1e-12);
    }
}

/// Comparison table of the stage-boundary machinery against the
/// closed-form stage conditions; used by the `verify-oracle` subcommand.
pub fn oracle_report() -> Result<String> {
    let mut out = String::new();
    let signal = BoundarySignal {
        g: Box::new(|t| t.exp()),
        dg: Box::new(|t| t.exp()),
        d2g: Box::new(|t| t.exp()),
        fp: Box::new(|_| 1.0),
        fpp: Box::new(|_| 0.0),
    };
    let t_n = 0.3;

    out.push_str("linear advection, exact second derivative (expect ~1e-15):\n");
    for &dt in &[0.1, 0.05] {
        let solver = linear_stage_values(t_n, dt, SecondDerivative::Exact)?;
        let (o0, o1, o2) = carpenter_linear(&signal, t_n, dt);
        out.push_str(&format!(
            "  dt = {dt:<6} |diff| = {:.3e} {:.3e} {:.3e}\n",
            (solver[0] - o0).abs(),
            (solver[1] - o1).abs(),
            (solver[2] - o2).abs()
        ));
    }

    out.push_str("linear advection, extrapolated second derivative (expect O(dt^3)):\n");
    let mut prev: Option<f64> = None;
    for &dt in &[0.02, 0.01, 0.005] {
        let solver = linear_stage_values(t_n, dt, SecondDerivative::Extrapolated { dx: dt })?;
        let (_, _, o2) = carpenter_linear(&signal, t_n, dt);
        let diff = (solver[2] - o2).abs();
        let slope = prev.map(|p| (p / diff).log2());
        out.push_str(&format!(
            "  dt = {dt:<6} |stage-2 diff| = {diff:.3e} slope = {}\n",
            slope.map_or("-".to_string(), |s| format!("{s:.2}"))
        ));
        prev = Some(diff);
    }

    let (solver, oracle) = nonlinear_stage1(0.2, 0.05)?;
    out.push_str(&format!(
        "quadratic flux, stage-1 value: solver = {solver:.12} oracle = {oracle:.12} |diff| = {:.3e}\n",
        (solver - oracle).abs()
    ));
    Ok(out)
}

//! 2D Cartesian meshes on a rectangle minus axis-aligned rectangular
//! obstacles.
//!
//! Nodes live on a square lattice offset by `eta * dx` from the domain
//! minimum in each direction, so no boundary coincides with a grid line.
//! Each fluid-facing boundary face carries the ghost nodes it fills: the
//! two lattice layers just outside the fluid along the face normal.

use std::collections::HashMap;

use crate::error::{Result, SolverError};
use crate::linalg::StateVec;
use crate::model::Direction;

pub const NUM_GHOST: i64 = 2;

#[derive(Clone, Copy, Debug, serde::Deserialize, serde::Serialize)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn contains_closed(&self, x: f64, y: f64) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }

    pub fn contains_open(&self, x: f64, y: f64) -> bool {
        x > self.xmin && x < self.xmax && y > self.ymin && y < self.ymax
    }

    fn overlaps(&self, o: &Rect) -> bool {
        self.xmin < o.xmax && o.xmin < self.xmax && self.ymin < o.ymax && o.ymin < self.ymax
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Interior,
    Ghost,
    Unused,
}

/// Which geometric edge a face came from; drives the boundary-condition
/// assignment in the driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceLocation {
    DomainLeft,
    DomainRight,
    DomainBottom,
    DomainTop,
    Obstacle { index: usize, side: ObstacleSide },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstacleSide {
    Left,
    Right,
    Bottom,
    Top,
}

/// An axis-aligned boundary face: a straight segment with the fluid on
/// one side. `theta` is the angle of the outward normal (pointing from
/// fluid into solid/exterior).
#[derive(Clone, Copy, Debug)]
pub struct Face {
    pub location: FaceLocation,
    /// Axis of the face normal.
    pub axis: Direction,
    /// Coordinate of the face along its normal axis.
    pub position: f64,
    /// Tangential extent.
    pub lo: f64,
    pub hi: f64,
    /// Outward normal angle: 0, pi (x-normal) or +-pi/2 (y-normal).
    pub theta: f64,
}

impl Face {
    /// Sign of the outward normal component along the face axis.
    pub fn nu(&self) -> f64 {
        match self.axis {
            Direction::X => {
                if self.theta == 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Direction::Y => {
                if self.theta > 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// A ghost node together with its foot point on the owning face.
#[derive(Clone, Copy, Debug)]
pub struct GhostInfo {
    pub node: (i64, i64),
    /// Point on the face hit by the normal through the node.
    pub foot: (f64, f64),
    pub theta: f64,
    /// Signed distance of the node from the face along the outward
    /// normal; positive (the node is outside the fluid).
    pub delta: f64,
}

/// A maximal contiguous run of interior nodes along a grid line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineRun {
    /// The fixed (tangential) lattice index.
    pub line: i64,
    /// First and last interior lattice index along the run, inclusive.
    pub start: i64,
    pub end: i64,
}

#[derive(Clone, Debug)]
pub struct Grid2D {
    pub domain: Rect,
    pub obstacles: Vec<Rect>,
    pub dx: f64,
    pub eta: f64,
    /// Interior lattice extent: indices 0..nx-1, 0..ny-1.
    pub nx: usize,
    pub ny: usize,
    mask: Vec<NodeKind>,
    pub faces: Vec<Face>,
    /// Ghosts grouped per face, in face order.
    ghosts: Vec<Vec<GhostInfo>>,
    /// Maximal interior runs along x (per row) and y (per column).
    pub x_runs: Vec<LineRun>,
    pub y_runs: Vec<LineRun>,
}

pub fn build_grid_2d(domain: Rect, obstacles: Vec<Rect>, dx: f64, eta: f64) -> Result<Grid2D> {
    if domain.xmax <= domain.xmin || domain.ymax <= domain.ymin {
        return Err(SolverError::Config("empty domain rectangle".into()));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(SolverError::InvalidEta(eta));
    }
    if dx <= 0.0 {
        return Err(SolverError::InvalidSpacing(format!("dx = {dx}")));
    }
    for (k, o) in obstacles.iter().enumerate() {
        if o.xmax <= o.xmin || o.ymax <= o.ymin {
            return Err(SolverError::Config(format!("empty obstacle {k}")));
        }
        if o.xmin < domain.xmin
            || o.xmax > domain.xmax
            || o.ymin < domain.ymin
            || o.ymax > domain.ymax
        {
            return Err(SolverError::ObstacleOutsideDomain(format!("obstacle {k}")));
        }
        if o.xmax - o.xmin < 3.0 * dx || o.ymax - o.ymin < 3.0 * dx {
            return Err(SolverError::Config(format!(
                "obstacle {k} thinner than three grid cells"
            )));
        }
        for (l, other) in obstacles.iter().enumerate().take(k) {
            if o.overlaps(other) {
                return Err(SolverError::GeometryOverlap(format!(
                    "obstacles {l} and {k}"
                )));
            }
        }
    }

    let nx = count_lattice(domain.xmax - domain.xmin, dx, eta);
    let ny = count_lattice(domain.ymax - domain.ymin, dx, eta);
    if nx < 6 || ny < 6 {
        return Err(SolverError::TooFewNodes(format!(
            "{} x {} lattice (minimum 6 per direction)",
            nx, ny
        )));
    }

    let mut g = Grid2D {
        domain,
        obstacles,
        dx,
        eta,
        nx,
        ny,
        mask: vec![
            NodeKind::Unused;
            (nx + 2 * NUM_GHOST as usize) * (ny + 2 * NUM_GHOST as usize)
        ],
        faces: Vec::new(),
        ghosts: Vec::new(),
        x_runs: Vec::new(),
        y_runs: Vec::new(),
    };

    for j in -NUM_GHOST..ny as i64 + NUM_GHOST {
        for i in -NUM_GHOST..nx as i64 + NUM_GHOST {
            if g.is_fluid(g.x(i), g.y(j)) {
                let s = g.slot(i, j);
                g.mask[s] = NodeKind::Interior;
            }
        }
    }

    g.build_faces();
    g.assign_ghosts()?;
    g.build_runs();
    Ok(g)
}

fn count_lattice(width: f64, dx: f64, eta: f64) -> usize {
    let mut n = 0usize;
    while (eta + n as f64) * dx < width {
        n += 1;
    }
    n
}

impl Grid2D {
    pub fn x(&self, i: i64) -> f64 {
        self.domain.xmin + (self.eta + i as f64) * self.dx
    }

    pub fn y(&self, j: i64) -> f64 {
        self.domain.ymin + (self.eta + j as f64) * self.dx
    }

    #[inline]
    fn slot(&self, i: i64, j: i64) -> usize {
        debug_assert!(i >= -NUM_GHOST && i < self.nx as i64 + NUM_GHOST);
        debug_assert!(j >= -NUM_GHOST && j < self.ny as i64 + NUM_GHOST);
        let w = self.nx + 2 * NUM_GHOST as usize;
        (j + NUM_GHOST) as usize * w + (i + NUM_GHOST) as usize
    }

    pub fn node_kind(&self, i: i64, j: i64) -> NodeKind {
        self.mask[self.slot(i, j)]
    }

    /// A point is fluid if it is strictly inside the domain and outside
    /// every obstacle.
    pub fn is_fluid(&self, x: f64, y: f64) -> bool {
        self.domain.contains_open(x, y) && !self.obstacles.iter().any(|o| o.contains_closed(x, y))
    }

    pub fn ghosts_for_face(&self, face_idx: usize) -> &[GhostInfo] {
        &self.ghosts[face_idx]
    }

    fn build_faces(&mut self) {
        let d = self.domain;
        // Domain edges, trimmed where an obstacle is flush with them.
        let flush_x = |o: &Rect, x: f64| o.xmin == x || o.xmax == x;
        let flush_y = |o: &Rect, y: f64| o.ymin == y || o.ymax == y;

        let trim = |full: (f64, f64), cuts: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
            let mut segs = vec![full];
            for c in cuts {
                let mut next = Vec::new();
                for s in segs {
                    if c.1 <= s.0 || c.0 >= s.1 {
                        next.push(s);
                    } else {
                        if c.0 > s.0 {
                            next.push((s.0, c.0));
                        }
                        if c.1 < s.1 {
                            next.push((c.1, s.1));
                        }
                    }
                }
                segs = next;
            }
            segs
        };

        let push_domain = |loc: FaceLocation,
                               axis: Direction,
                               position: f64,
                               theta: f64,
                               full: (f64, f64),
                               cuts: Vec<(f64, f64)>,
                               faces: &mut Vec<Face>| {
            for (lo, hi) in trim(full, cuts) {
                faces.push(Face {
                    location: loc,
                    axis,
                    position,
                    lo,
                    hi,
                    theta,
                });
            }
        };

        let mut faces = Vec::new();
        let obst = self.obstacles.clone();
        let cuts_at = |pred: &dyn Fn(&Rect) -> bool, tangential: &dyn Fn(&Rect) -> (f64, f64)| {
            obst.iter()
                .filter(|o| pred(o))
                .map(|o| tangential(o))
                .collect::<Vec<_>>()
        };

        push_domain(
            FaceLocation::DomainLeft,
            Direction::X,
            d.xmin,
            std::f64::consts::PI,
            (d.ymin, d.ymax),
            cuts_at(&|o| flush_x(o, d.xmin), &|o| (o.ymin, o.ymax)),
            &mut faces,
        );
        push_domain(
            FaceLocation::DomainRight,
            Direction::X,
            d.xmax,
            0.0,
            (d.ymin, d.ymax),
            cuts_at(&|o| flush_x(o, d.xmax), &|o| (o.ymin, o.ymax)),
            &mut faces,
        );
        push_domain(
            FaceLocation::DomainBottom,
            Direction::Y,
            d.ymin,
            -std::f64::consts::FRAC_PI_2,
            (d.xmin, d.xmax),
            cuts_at(&|o| flush_y(o, d.ymin), &|o| (o.xmin, o.xmax)),
            &mut faces,
        );
        push_domain(
            FaceLocation::DomainTop,
            Direction::Y,
            d.ymax,
            std::f64::consts::FRAC_PI_2,
            (d.xmin, d.xmax),
            cuts_at(&|o| flush_y(o, d.ymax), &|o| (o.xmin, o.xmax)),
            &mut faces,
        );

        // Obstacle faces; skip any flush with the domain boundary (no
        // fluid on the far side). The outward normal points from the
        // fluid into the obstacle.
        for (k, o) in self.obstacles.iter().enumerate() {
            if o.xmin > d.xmin {
                faces.push(Face {
                    location: FaceLocation::Obstacle {
                        index: k,
                        side: ObstacleSide::Left,
                    },
                    axis: Direction::X,
                    position: o.xmin,
                    lo: o.ymin,
                    hi: o.ymax,
                    theta: 0.0,
                });
            }
            if o.xmax < d.xmax {
                faces.push(Face {
                    location: FaceLocation::Obstacle {
                        index: k,
                        side: ObstacleSide::Right,
                    },
                    axis: Direction::X,
                    position: o.xmax,
                    lo: o.ymin,
                    hi: o.ymax,
                    theta: std::f64::consts::PI,
                });
            }
            if o.ymin > d.ymin {
                faces.push(Face {
                    location: FaceLocation::Obstacle {
                        index: k,
                        side: ObstacleSide::Bottom,
                    },
                    axis: Direction::Y,
                    position: o.ymin,
                    lo: o.xmin,
                    hi: o.xmax,
                    theta: std::f64::consts::FRAC_PI_2,
                });
            }
            if o.ymax < d.ymax {
                faces.push(Face {
                    location: FaceLocation::Obstacle {
                        index: k,
                        side: ObstacleSide::Top,
                    },
                    axis: Direction::Y,
                    position: o.ymax,
                    lo: o.xmin,
                    hi: o.xmax,
                    theta: -std::f64::consts::FRAC_PI_2,
                });
            }
        }
        self.faces = faces;
    }

    /// Candidate ghosts of one face: the two lattice layers just outside
    /// the fluid along the normal, restricted to lattice lines whose foot
    /// point lies on the face.
    fn face_candidates(&self, face: &Face) -> Vec<GhostInfo> {
        let mut out = Vec::new();
        let nu = face.nu();
        let (n_norm, n_tan) = match face.axis {
            Direction::X => (self.nx as i64, self.ny as i64),
            Direction::Y => (self.ny as i64, self.nx as i64),
        };
        let coord = |idx: i64| match face.axis {
            Direction::X => self.x(idx),
            Direction::Y => self.y(idx),
        };
        let tan_coord = |idx: i64| match face.axis {
            Direction::X => self.y(idx),
            Direction::Y => self.x(idx),
        };
        // first lattice index strictly outside the face along the normal
        let mut i0 = if nu > 0.0 {
            let mut i = -NUM_GHOST;
            while coord(i) <= face.position {
                i += 1;
            }
            i
        } else {
            let mut i = n_norm + NUM_GHOST - 1;
            while coord(i) >= face.position {
                i -= 1;
            }
            i
        };
        let step = if nu > 0.0 { 1i64 } else { -1 };
        let mut layers = Vec::new();
        for _ in 0..NUM_GHOST {
            if i0 >= -NUM_GHOST && i0 < n_norm + NUM_GHOST {
                layers.push(i0);
            }
            i0 += step;
        }
        for t in -NUM_GHOST..n_tan + NUM_GHOST {
            let tc = tan_coord(t);
            if !(tc > face.lo && tc < face.hi) {
                continue;
            }
            for &n in &layers {
                let (i, j) = match face.axis {
                    Direction::X => (n, t),
                    Direction::Y => (t, n),
                };
                // skip candidates that are actually fluid (can only
                // happen with degenerate geometry)
                if self.node_kind(i, j) == NodeKind::Interior {
                    continue;
                }
                let foot = match face.axis {
                    Direction::X => (face.position, tc),
                    Direction::Y => (tc, face.position),
                };
                out.push(GhostInfo {
                    node: (i, j),
                    foot,
                    theta: face.theta,
                    delta: nu * (coord(n) - face.position),
                });
            }
        }
        out
    }

    /// Resolve multi-face claims: each ghost node belongs to the face
    /// with the nearest foot point; on a tie the x-normal face wins.
    fn assign_ghosts(&mut self) -> Result<()> {
        let tol = 1e-12 * self.dx;
        let mut owner: HashMap<(i64, i64), (usize, f64)> = HashMap::new();
        let faces = self.faces.clone();
        for (fi, face) in faces.iter().enumerate() {
            for g in self.face_candidates(face) {
                match owner.get(&g.node) {
                    Some(&(prev_fi, prev_d)) => {
                        let better = g.delta < prev_d - tol
                            || ((g.delta - prev_d).abs() <= tol
                                && face.axis == Direction::X
                                && faces[prev_fi].axis == Direction::Y);
                        if better {
                            owner.insert(g.node, (fi, g.delta));
                        }
                    }
                    None => {
                        owner.insert(g.node, (fi, g.delta));
                    }
                }
            }
        }
        let mut ghosts: Vec<Vec<GhostInfo>> = vec![Vec::new(); faces.len()];
        for (fi, face) in faces.iter().enumerate() {
            for g in self.face_candidates(face) {
                if owner.get(&g.node) == Some(&(fi, g.delta)) {
                    let s = self.slot(g.node.0, g.node.1);
                    self.mask[s] = NodeKind::Ghost;
                    ghosts[fi].push(g);
                }
            }
        }
        // nodes claimed by some face but owned by another with a
        // different delta still need the ghost mark
        for (&(i, j), _) in owner.iter() {
            let s = self.slot(i, j);
            self.mask[s] = NodeKind::Ghost;
        }
        self.ghosts = ghosts;
        Ok(())
    }

    fn build_runs(&mut self) {
        let mut x_runs = Vec::new();
        for j in 0..self.ny as i64 {
            let mut start: Option<i64> = None;
            for i in 0..=self.nx as i64 {
                let interior =
                    i < self.nx as i64 && self.node_kind(i, j) == NodeKind::Interior;
                match (interior, start) {
                    (true, None) => start = Some(i),
                    (false, Some(s)) => {
                        x_runs.push(LineRun {
                            line: j,
                            start: s,
                            end: i - 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
        }
        let mut y_runs = Vec::new();
        for i in 0..self.nx as i64 {
            let mut start: Option<i64> = None;
            for j in 0..=self.ny as i64 {
                let interior =
                    j < self.ny as i64 && self.node_kind(i, j) == NodeKind::Interior;
                match (interior, start) {
                    (true, None) => start = Some(j),
                    (false, Some(s)) => {
                        y_runs.push(LineRun {
                            line: i,
                            start: s,
                            end: j - 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
        }
        self.x_runs = x_runs;
        self.y_runs = y_runs;
    }
}

/// Conserved-variable field on a 2D lattice including the ghost frame.
/// Entries start as NaN so use-before-fill surfaces immediately.
#[derive(Clone, Debug)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    data: Vec<StateVec>,
}

impl Field2D {
    pub fn new(nx: usize, ny: usize, m: usize) -> Self {
        let mut nan = StateVec::zeros(m);
        for c in 0..m {
            nan[c] = f64::NAN;
        }
        let w = nx + 2 * NUM_GHOST as usize;
        let h = ny + 2 * NUM_GHOST as usize;
        Self {
            nx,
            ny,
            m,
            data: vec![nan; w * h],
        }
    }

    #[inline]
    fn slot(&self, i: i64, j: i64) -> usize {
        debug_assert!(i >= -NUM_GHOST && i < self.nx as i64 + NUM_GHOST);
        debug_assert!(j >= -NUM_GHOST && j < self.ny as i64 + NUM_GHOST);
        let w = self.nx + 2 * NUM_GHOST as usize;
        (j + NUM_GHOST) as usize * w + (i + NUM_GHOST) as usize
    }

    #[inline]
    pub fn get(&self, i: i64, j: i64) -> StateVec {
        self.data[self.slot(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: i64, j: i64, v: StateVec) {
        let s = self.slot(i, j);
        self.data[s] = v;
    }
}

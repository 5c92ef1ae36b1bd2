//! Method-of-lines driver: ghost-cell boundary handling, the semidiscrete
//! right-hand side in 1D and dimension-by-dimension in 2D, CFL time-step
//! control and third-order TVD Runge-Kutta integration.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::euler::{eigen_frame, eigenvalues, flux_and_eigenvalues, Axis, Eos, EulerError};
use crate::flux::{numerical_flux_scalar_branch, numerical_flux_system, Advection, Burgers, ScalarFlux, SplitBranch};
use crate::kernels::{Epsilon, KernelKind, ReconstructionMode};

/// Ghost layers on every boundary; 3 covers the six-state footprint of the
/// fifth-order flux.
pub const GHOST: usize = 3;

// Flux reconstruction operates on point values of the flux treated as cell
// means of the sliding function, hence cell-average mode throughout.
const FLUX_MODE: ReconstructionMode = ReconstructionMode::CellAverages;

/// Uniform Cartesian grid of cell centers x_i = x0 + (i + 1/2) h.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
    pub two_d: bool,
}

impl Grid {
    pub fn new_1d(nx: usize, x0: f64, x1: f64) -> Self {
        Grid { nx, ny: 1, x0, y0: 0.0, hx: (x1 - x0) / nx as f64, hy: 1.0, two_d: false }
    }

    pub fn new_2d(nx: usize, ny: usize, x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Grid {
            nx,
            ny,
            x0,
            y0,
            hx: (x1 - x0) / nx as f64,
            hy: (y1 - y0) / ny as f64,
            two_d: true,
        }
    }

    pub fn cell_x(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.hx
    }

    pub fn cell_y(&self, j: isize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.hy
    }
}

/// Cell-centered field with ghost layers; `nv` components per cell.
#[derive(Clone, Debug)]
pub struct Field {
    pub grid: Grid,
    pub nv: usize,
    gy: usize,
    pub data: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, nv: usize) -> Self {
        let gy = if grid.two_d { GHOST } else { 0 };
        let len = (grid.nx + 2 * GHOST) * (grid.ny + 2 * gy) * nv;
        Field { grid, nv, gy, data: vec![0.0; len] }
    }

    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        let row = (j + self.gy as isize) as usize;
        let col = (i + GHOST as isize) as usize;
        (row * (self.grid.nx + 2 * GHOST) + col) * self.nv
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> &[f64] {
        let o = self.offset(i, j);
        &self.data[o..o + self.nv]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut [f64] {
        let o = self.offset(i, j);
        let nv = self.nv;
        &mut self.data[o..o + nv]
    }

    /// Contiguous row including ghosts: cells i = -GHOST .. nx+GHOST at row j.
    pub fn row(&self, j: isize) -> &[f64] {
        let o = self.offset(-(GHOST as isize), j);
        &self.data[o..o + (self.grid.nx + 2 * GHOST) * self.nv]
    }

    pub fn set(&mut self, i: isize, j: isize, state: &[f64]) {
        let nv = self.nv;
        self.at_mut(i, j).copy_from_slice(&state[..nv]);
    }
}

/// Boundary condition kinds. Inflow-like kinds carry the prescribed state in
/// the leading `nv` slots.
#[derive(Clone, Copy, Debug)]
pub enum BcKind {
    Periodic,
    /// Zeroth-order extrapolation of the nearest interior cell.
    Outflow,
    Inflow([f64; 4]),
    /// Solid wall at the cell face: mirrored state, normal momentum negated.
    Reflect,
    /// Moving-shock inflow along the top edge: state `c1` where the cell
    /// center satisfies x <= 1/4 + (1 + 20 t)/sqrt(3), `c2` beyond.
    DmrTop { c1: [f64; 4], c2: [f64; 4] },
}

/// Boundary condition along one edge, optionally split at an x position
/// (south/north edges only).
#[derive(Clone, Copy, Debug)]
pub enum EdgeBc {
    Uniform(BcKind),
    SplitAtX { split: f64, left: BcKind, right: BcKind },
}

impl EdgeBc {
    fn resolve(&self, x: f64) -> BcKind {
        match self {
            EdgeBc::Uniform(kind) => *kind,
            EdgeBc::SplitAtX { split, left, right } => {
                if x <= *split {
                    *left
                } else {
                    *right
                }
            }
        }
    }
}

/// Boundary conditions on all faces; south/north ignored in 1D.
#[derive(Clone, Copy, Debug)]
pub struct BoundarySet {
    pub west: BcKind,
    pub east: BcKind,
    pub south: EdgeBc,
    pub north: EdgeBc,
}

/// Forward-facing internal wall: cells with x > x_face and y < y_top are
/// solid. Both faces must coincide with grid faces.
#[derive(Clone, Copy, Debug)]
pub struct StepRegion {
    pub x_face: f64,
    pub y_top: f64,
}

impl StepRegion {
    pub fn is_solid(&self, x: f64, y: f64) -> bool {
        x > self.x_face && y < self.y_top
    }
}

/// Governing equations of a run.
#[derive(Clone, Copy, Debug)]
pub enum Physics {
    Advection,
    Burgers,
    Euler(Eos),
}

impl Physics {
    pub fn nv(&self, two_d: bool) -> usize {
        match self {
            Physics::Euler(_) => {
                if two_d {
                    4
                } else {
                    3
                }
            }
            _ => 1,
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Physics::Euler(_))
    }

    fn scalar_flux(&self) -> &'static dyn ScalarFlux {
        match self {
            Physics::Advection => &Advection,
            Physics::Burgers => &Burgers,
            Physics::Euler(_) => unreachable!("systems use the characteristic path"),
        }
    }
}

/// Flux splitting variants. `Upwind` is the scalar case-split local splitting;
/// `CharacteristicLlf` applies the same case analysis per characteristic
/// field. `DonatMarquina` is reserved as an extension point and currently
/// rejected at configuration time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Upwind,
    CharacteristicLlf,
    DonatMarquina,
}

impl Splitting {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "upwind" => Some(Splitting::Upwind),
            "llf" | "characteristic-llf" => Some(Splitting::CharacteristicLlf),
            "donat-marquina" => Some(Splitting::DonatMarquina),
            _ => None,
        }
    }
}

/// Everything the driver needs to know about one run.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub kernel: KernelKind,
    pub cfl: f64,
    pub t_final: f64,
    pub eps: Epsilon,
    pub splitting: Splitting,
}

/// Solver-facing description of a problem: equations, domain, boundary
/// conditions and pointwise initial state (components beyond nv ignored).
#[derive(Clone, Copy)]
pub struct ProblemSetup {
    pub physics: Physics,
    pub two_d: bool,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub bcs: BoundarySet,
    pub step: Option<StepRegion>,
    pub initial: fn(f64, f64) -> [f64; 4],
}

#[derive(Clone, Debug)]
pub enum SolveError {
    State { source: EulerError, cell: (isize, isize), context: &'static str },
    UnsupportedSplitting(Splitting),
    InvalidConfig(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::State { source, cell, context } => {
                write!(f, "{context} at cell ({}, {}): {source}", cell.0, cell.1)
            }
            SolveError::UnsupportedSplitting(s) => {
                write!(f, "splitting {s:?} is not implemented; use characteristic-llf")
            }
            SolveError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for SolveError {}

pub fn validate_config(setup: &ProblemSetup, config: &RunConfig) -> Result<(), SolveError> {
    if !(config.cfl > 0.0 && config.cfl <= 1.0) {
        return Err(SolveError::InvalidConfig(format!("cfl must be in (0, 1], got {}", config.cfl)));
    }
    if config.t_final < 0.0 {
        return Err(SolveError::InvalidConfig(format!("t_final must be nonnegative, got {}", config.t_final)));
    }
    match config.splitting {
        Splitting::DonatMarquina => Err(SolveError::UnsupportedSplitting(Splitting::DonatMarquina)),
        Splitting::Upwind if !setup.physics.is_scalar() => Err(SolveError::InvalidConfig(
            "upwind splitting applies to scalar fluxes; systems use characteristic-llf".into(),
        )),
        _ => Ok(()),
    }
}

// Copies the state at (si, sj) into (di, dj), optionally negating one
// momentum component.
fn copy_cell(field: &mut Field, src: (isize, isize), dst: (isize, isize), negate: Option<usize>) {
    let mut tmp = [0.0; 4];
    let nv = field.nv;
    tmp[..nv].copy_from_slice(field.at(src.0, src.1));
    if let Some(c) = negate {
        if c < nv {
            tmp[c] = -tmp[c];
        }
    }
    field.set(dst.0, dst.1, &tmp);
}

fn apply_west_east(field: &mut Field, bcs: &BoundarySet) {
    let nx = field.grid.nx as isize;
    let ny = if field.grid.two_d { field.grid.ny as isize } else { 1 };
    for j in 0..ny {
        for k in 1..=GHOST as isize {
            match bcs.west {
                BcKind::Periodic => copy_cell(field, (nx - k, j), (-k, j), None),
                BcKind::Outflow => copy_cell(field, (0, j), (-k, j), None),
                BcKind::Inflow(state) => field.set(-k, j, &state),
                BcKind::Reflect => copy_cell(field, (k - 1, j), (-k, j), Some(1)),
                BcKind::DmrTop { .. } => unreachable!("moving-shock inflow is a top-edge condition"),
            }
            match bcs.east {
                BcKind::Periodic => copy_cell(field, (k - 1, j), (nx - 1 + k, j), None),
                BcKind::Outflow => copy_cell(field, (nx - 1, j), (nx - 1 + k, j), None),
                BcKind::Inflow(state) => field.set(nx - 1 + k, j, &state),
                BcKind::Reflect => copy_cell(field, (nx - k, j), (nx - 1 + k, j), Some(1)),
                BcKind::DmrTop { .. } => unreachable!("moving-shock inflow is a top-edge condition"),
            }
        }
    }
}

fn apply_south_north(field: &mut Field, bcs: &BoundarySet, t: f64) {
    let nx = field.grid.nx as isize;
    let ny = field.grid.ny as isize;
    for i in 0..nx {
        let x = field.grid.cell_x(i);
        let south = bcs.south.resolve(x);
        let north = bcs.north.resolve(x);
        for k in 1..=GHOST as isize {
            match south {
                BcKind::Periodic => copy_cell(field, (i, ny - k), (i, -k), None),
                BcKind::Outflow => copy_cell(field, (i, 0), (i, -k), None),
                BcKind::Inflow(state) => field.set(i, -k, &state),
                BcKind::Reflect => copy_cell(field, (i, k - 1), (i, -k), Some(2)),
                BcKind::DmrTop { .. } => unreachable!("moving-shock inflow is a top-edge condition"),
            }
            match north {
                BcKind::Periodic => copy_cell(field, (i, k - 1), (i, ny - 1 + k), None),
                BcKind::Outflow => copy_cell(field, (i, ny - 1), (i, ny - 1 + k), None),
                BcKind::Inflow(state) => field.set(i, ny - 1 + k, &state),
                BcKind::Reflect => copy_cell(field, (i, ny - k), (i, ny - 1 + k), Some(2)),
                BcKind::DmrTop { c1, c2 } => {
                    let threshold = 0.25 + (1.0 + 20.0 * t) / 3f64.sqrt();
                    let state = if x <= threshold { c1 } else { c2 };
                    field.set(i, ny - 1 + k, &state);
                }
            }
        }
    }
}

// Mirror fill into the step interior for x sweeps along rows below the step
// top: wall at the vertical face x = x_face.
fn fill_step_ghosts_x(field: &mut Field, step: &StepRegion) {
    let i_face = ((step.x_face - field.grid.x0) / field.grid.hx).round() as isize;
    let ny = field.grid.ny as isize;
    for j in 0..ny {
        if field.grid.cell_y(j) >= step.y_top {
            continue;
        }
        for k in 1..=GHOST as isize {
            copy_cell(field, (i_face - k, j), (i_face - 1 + k, j), Some(1));
        }
    }
}

// Mirror fill for y sweeps along columns inside the step footprint: wall at
// the horizontal face y = y_top.
fn fill_step_ghosts_y(field: &mut Field, step: &StepRegion) {
    let j_top = ((step.y_top - field.grid.y0) / field.grid.hy).round() as isize;
    let nx = field.grid.nx as isize;
    for i in 0..nx {
        if field.grid.cell_x(i) <= step.x_face {
            continue;
        }
        for k in 1..=GHOST as isize {
            copy_cell(field, (i, j_top + k - 1), (i, j_top - k), Some(2));
        }
    }
}

/// Populates every ghost layer for the given stage time.
pub fn fill_ghosts(field: &mut Field, bcs: &BoundarySet, t: f64) {
    apply_west_east(field, bcs);
    if field.grid.two_d {
        apply_south_north(field, bcs, t);
    }
}

// Fluxes along one line of n interior cells, for the interface subrange
// k_lo..k_hi (interfaces number 0..=n; interface k sits between interior
// cells k-1 and k, i.e. line cells k+GHOST-1 and k+GHOST). `line` holds
// n + 2*GHOST states contiguously; `out` receives k_hi - k_lo flux vectors.
fn line_fluxes_scalar(
    line: &[f64],
    flux: &'static dyn ScalarFlux,
    kernel: KernelKind,
    eps: Epsilon,
    k_lo: usize,
    k_hi: usize,
    out: &mut [f64],
) {
    // One-sided reconstructions only when every characteristic in the line
    // moves the same way; otherwise the Lax-Friedrichs split with the line's
    // speed bound applies at every interface. Letting either the branch or
    // the bound vary from interface to interface kinks the flux definition
    // next to sonic points and costs an order there.
    let mut min_d = f64::INFINITY;
    let mut max_d = f64::NEG_INFINITY;
    for u in line {
        let d = flux.derivative(*u);
        min_d = min_d.min(d);
        max_d = max_d.max(d);
    }
    let branch = if min_d > 0.0 {
        SplitBranch::Plus
    } else if max_d < 0.0 {
        SplitBranch::Minus
    } else {
        SplitBranch::Mixed(min_d.abs().max(max_d.abs()))
    };
    let w = kernel.flux_stencil_width();
    for k in k_lo..k_hi {
        let start = k + GHOST - w / 2;
        out[k - k_lo] =
            numerical_flux_scalar_branch(kernel, flux, &line[start..start + w], eps, FLUX_MODE, branch);
    }
}

fn line_fluxes_euler(
    line: &[f64],
    nv: usize,
    eos: Eos,
    axis: Axis,
    kernel: KernelKind,
    eps: Epsilon,
    k_lo: usize,
    k_hi: usize,
    out: &mut [f64],
    scratch: &mut LineScratch,
) -> Result<(), SolveError> {
    let width = kernel.flux_stencil_width();
    // Cells touched by the requested interfaces.
    let cell_lo = k_lo + GHOST - width / 2;
    let cell_hi = (k_hi - 1) + GHOST + width / 2;
    let span = cell_hi - cell_lo;

    // Per-cell analytic fluxes and eigenvalues, computed once per span.
    let (fval, lam, uval) = scratch.span(span);
    for c in 0..span {
        let cell = cell_lo + c;
        let u = &line[cell * nv..(cell + 1) * nv];
        uval[c][..nv].copy_from_slice(u);
        lam[c] = flux_and_eigenvalues(u, eos, axis, &mut fval[c]).map_err(|source| {
            SolveError::State {
                source,
                cell: (cell as isize - GHOST as isize, 0),
                context: "flux evaluation",
            }
        })?;
    }

    for k in k_lo..k_hi {
        let lo_cell = k + GHOST - 1;
        let hi_cell = k + GHOST;
        let frame = eigen_frame(
            &line[lo_cell * nv..(lo_cell + 1) * nv],
            &line[hi_cell * nv..(hi_cell + 1) * nv],
            eos,
            axis,
        )
        .map_err(|source| SolveError::State {
            source,
            cell: (k as isize, 0),
            context: "interface linearization",
        })?;
        let start = k + GHOST - width / 2 - cell_lo;
        let fhat = numerical_flux_system(
            kernel,
            &frame,
            &uval[start..start + width],
            &fval[start..start + width],
            &lam[lo_cell - cell_lo],
            &lam[hi_cell - cell_lo],
            eps,
            FLUX_MODE,
        );
        out[(k - k_lo) * nv..(k - k_lo + 1) * nv].copy_from_slice(&fhat[..nv]);
    }
    Ok(())
}

fn line_fluxes(
    line: &[f64],
    n: usize,
    physics: &Physics,
    axis: Axis,
    kernel: KernelKind,
    eps: Epsilon,
    k_lo: usize,
    k_hi: usize,
    out: &mut [f64],
    scratch: &mut LineScratch,
) -> Result<(), SolveError> {
    match physics {
        Physics::Euler(eos) => {
            let nv = line.len() / (n + 2 * GHOST);
            line_fluxes_euler(line, nv, *eos, axis, kernel, eps, k_lo, k_hi, out, scratch)
        }
        _ => {
            line_fluxes_scalar(line, physics.scalar_flux(), kernel, eps, k_lo, k_hi, out);
            Ok(())
        }
    }
}

// Interface count per parallel block when a single long 1D line is split
// across threads.
const LINE_BLOCK: usize = 2048;

// Reusable per-task buffers for one line sweep.
#[derive(Default)]
struct LineScratch {
    fval: Vec<[f64; 4]>,
    lam: Vec<[f64; 4]>,
    uval: Vec<[f64; 4]>,
    col: Vec<f64>,
}

impl LineScratch {
    fn span(&mut self, span: usize) -> (&mut [[f64; 4]], &mut [[f64; 4]], &mut [[f64; 4]]) {
        if self.fval.len() < span {
            self.fval.resize(span, [0.0; 4]);
            self.lam.resize(span, [0.0; 4]);
            self.uval.resize(span, [0.0; 4]);
        }
        (&mut self.fval[..span], &mut self.lam[..span], &mut self.uval[..span])
    }
}

/// Reusable flux buffers for the right-hand side; sized on first use.
#[derive(Default)]
pub struct RhsScratch {
    flux_x: Vec<f64>,
    flux_y: Vec<f64>,
}

/// Semidiscrete right-hand side -(1/h) sum of flux differences, written into
/// `rhs` over interior cells (row-major, nv components). Ghosts are filled
/// for the stage time `t`. `scratch` holds reusable flux buffers.
pub fn semidiscrete_rhs(
    field: &mut Field,
    setup: &ProblemSetup,
    config: &RunConfig,
    t: f64,
    rhs: &mut [f64],
    scratch: &mut RhsScratch,
) -> Result<(), SolveError> {
    let nx = field.grid.nx;
    let ny = if field.grid.two_d { field.grid.ny } else { 1 };
    let nv = field.nv;
    let hx = field.grid.hx;
    assert_eq!(rhs.len(), nx * ny * nv);

    fill_ghosts(field, &setup.bcs, t);
    if let Some(step) = &setup.step {
        fill_step_ghosts_x(field, step);
    }

    // X fluxes: one row per task in 2D; a single 1D line is split into
    // interface blocks instead.
    scratch.flux_x.resize((nx + 1) * ny * nv, 0.0);
    let flux_x = &mut scratch.flux_x;
    {
        let field_ref = &*field;
        if ny == 1 {
            let row = field_ref.row(0);
            flux_x.par_chunks_mut(LINE_BLOCK * nv).enumerate().try_for_each_init(
                LineScratch::default,
                |line_scratch, (b, out)| {
                    let k_lo = b * LINE_BLOCK;
                    let k_hi = k_lo + out.len() / nv;
                    line_fluxes(
                        row,
                        nx,
                        &setup.physics,
                        Axis::X,
                        config.kernel,
                        config.eps,
                        k_lo,
                        k_hi,
                        out,
                        line_scratch,
                    )
                    .map_err(|e| locate_row(e, 0))
                },
            )?;
        } else {
            flux_x.par_chunks_mut((nx + 1) * nv).enumerate().try_for_each_init(
                LineScratch::default,
                |line_scratch, (j, out)| {
                    let row = field_ref.row(j as isize);
                    line_fluxes(
                        row,
                        nx,
                        &setup.physics,
                        Axis::X,
                        config.kernel,
                        config.eps,
                        0,
                        nx + 1,
                        out,
                        line_scratch,
                    )
                    .map_err(|e| locate_row(e, j))
                },
            )?;
        }
    }
    rhs.par_chunks_mut(nx * nv).enumerate().for_each(|(j, out)| {
        let fx = &flux_x[j * (nx + 1) * nv..(j + 1) * (nx + 1) * nv];
        for i in 0..nx {
            for c in 0..nv {
                out[i * nv + c] = -(fx[(i + 1) * nv + c] - fx[i * nv + c]) / hx;
            }
        }
    });

    if field.grid.two_d {
        if let Some(step) = &setup.step {
            fill_step_ghosts_y(field, step);
        }
        let hy = field.grid.hy;
        scratch.flux_y.resize((ny + 1) * nx * nv, 0.0);
        let flux_y = &mut scratch.flux_y;
        {
            let field_ref = &*field;
            flux_y.par_chunks_mut((ny + 1) * nv).enumerate().try_for_each_init(
                LineScratch::default,
                |line_scratch, (i, out)| {
                    // Copy the strided column into a contiguous scratch line.
                    line_scratch.col.resize((ny + 2 * GHOST) * nv, 0.0);
                    for (cj, j) in (-(GHOST as isize)..(ny + GHOST) as isize).enumerate() {
                        line_scratch.col[cj * nv..(cj + 1) * nv]
                            .copy_from_slice(field_ref.at(i as isize, j));
                    }
                    let col = std::mem::take(&mut line_scratch.col);
                    let r = line_fluxes(
                        &col,
                        ny,
                        &setup.physics,
                        Axis::Y,
                        config.kernel,
                        config.eps,
                        0,
                        ny + 1,
                        out,
                        line_scratch,
                    )
                    .map_err(|e| locate_col(e, i));
                    line_scratch.col = col;
                    r
                },
            )?;
        }
        rhs.par_chunks_mut(nx * nv).enumerate().for_each(|(j, out)| {
            for i in 0..nx {
                let fy = &flux_y[i * (ny + 1) * nv..];
                for c in 0..nv {
                    out[i * nv + c] -= (fy[(j + 1) * nv + c] - fy[j * nv + c]) / hy;
                }
            }
        });
    }

    // Solid cells inside the step are not evolved.
    if let Some(step) = &setup.step {
        let grid = field.grid;
        rhs.par_chunks_mut(nx * nv).enumerate().for_each(|(j, out)| {
            let y = grid.cell_y(j as isize);
            for i in 0..nx {
                if step.is_solid(grid.cell_x(i as isize), y) {
                    out[i * nv..(i + 1) * nv].fill(0.0);
                }
            }
        });
    }
    Ok(())
}

fn locate_row(e: SolveError, j: usize) -> SolveError {
    match e {
        SolveError::State { source, cell, context } => {
            SolveError::State { source, cell: (cell.0, j as isize), context }
        }
        other => other,
    }
}

fn locate_col(e: SolveError, i: usize) -> SolveError {
    match e {
        SolveError::State { source, cell, context } => {
            SolveError::State { source, cell: (i as isize, cell.0), context }
        }
        other => other,
    }
}

// Max |v| + c per direction over a cell range of one row.
fn row_speeds(
    field: &Field,
    setup: &ProblemSetup,
    j: isize,
    i_lo: isize,
    i_hi: isize,
) -> Result<(f64, f64), SolveError> {
    let nv = field.nv;
    let mut sx = 0.0f64;
    let mut sy = 0.0f64;
    for i in i_lo..i_hi {
        let u = field.at(i, j);
        match setup.physics {
            Physics::Euler(eos) => {
                let lam_x = eigenvalues(u, eos, Axis::X).map_err(|source| SolveError::State {
                    source,
                    cell: (i, j),
                    context: "time-step bound",
                })?;
                sx = lam_x[..nv].iter().fold(sx, |a, l| a.max(l.abs()));
                if field.grid.two_d {
                    let lam_y = eigenvalues(u, eos, Axis::Y).map_err(|source| SolveError::State {
                        source,
                        cell: (i, j),
                        context: "time-step bound",
                    })?;
                    sy = lam_y[..nv].iter().fold(sy, |a, l| a.max(l.abs()));
                }
            }
            _ => {
                sx = sx.max(setup.physics.scalar_flux().derivative(u[0]).abs());
            }
        }
    }
    Ok((sx, sy))
}

/// Largest admissible time step under the configured CFL number, clipped to
/// land exactly on t_final.
pub fn compute_dt(
    field: &Field,
    setup: &ProblemSetup,
    config: &RunConfig,
    t: f64,
) -> Result<f64, SolveError> {
    let nx = field.grid.nx;
    let ny = if field.grid.two_d { field.grid.ny } else { 1 };
    // Max is associative and exact, so the parallel reduction is
    // deterministic. 1D fields are chunked along the single row.
    let (sx, sy) = if ny == 1 {
        let blocks = nx.div_ceil(LINE_BLOCK);
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let i_lo = (b * LINE_BLOCK) as isize;
                let i_hi = (((b + 1) * LINE_BLOCK).min(nx)) as isize;
                row_speeds(field, setup, 0, i_lo, i_hi)
            })
            .try_reduce(|| (0.0f64, 0.0f64), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?
    } else {
        (0..ny)
            .into_par_iter()
            .map(|j| row_speeds(field, setup, j as isize, 0, nx as isize))
            .try_reduce(|| (0.0f64, 0.0f64), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?
    };
    let mut dt = config.cfl * field.grid.hx / sx;
    if field.grid.two_d && sy > 0.0 {
        dt = dt.min(config.cfl * field.grid.hy / sy);
    }
    let remaining = config.t_final - t;
    if dt >= remaining {
        dt = remaining;
    }
    Ok(dt)
}

/// One third-order TVD Runge-Kutta step in increment form,
///
///   u1 = u + dt k1,  u2 = u + dt (k1 + k2)/4,  u += dt (k1 + k2 + 4 k3)/6,
///
/// which is the Shu-Osher convex-combination scheme rewritten so that a
/// vanishing right-hand side reproduces the input bit for bit. `rhs`
/// evaluates the semidiscrete operator at a stage time into a buffer of
/// interior values.
pub fn rk3_step<E>(
    field: &mut Field,
    t: f64,
    dt: f64,
    stage: &mut Field,
    k_buf: &mut [f64],
    acc_buf: &mut [f64],
    mut rhs: impl FnMut(&mut Field, f64, &mut [f64]) -> Result<(), E>,
) -> Result<(), E> {
    let nx = field.grid.nx;
    let ny = if field.grid.two_d { field.grid.ny } else { 1 };
    let nv = field.nv;

    // Stage 1: u1 = u + dt k1.
    rhs(field, t, k_buf)?;
    acc_buf.copy_from_slice(k_buf);
    stage.data.copy_from_slice(&field.data);
    for j in 0..ny {
        for i in 0..nx {
            let r = &k_buf[(j * nx + i) * nv..(j * nx + i + 1) * nv];
            let o = stage.offset(i as isize, j as isize);
            for c in 0..nv {
                stage.data[o + c] += dt * r[c];
            }
        }
    }

    // Stage 2: u2 = u + dt (k1 + k2) / 4.
    rhs(stage, t + dt, k_buf)?;
    for (a, k) in acc_buf.iter_mut().zip(k_buf.iter()) {
        *a += *k;
    }
    for j in 0..ny {
        for i in 0..nx {
            let a = &acc_buf[(j * nx + i) * nv..(j * nx + i + 1) * nv];
            let u = field.at(i as isize, j as isize);
            let o = stage.offset(i as isize, j as isize);
            for c in 0..nv {
                stage.data[o + c] = u[c] + 0.25 * dt * a[c];
            }
        }
    }

    // Stage 3: u += dt (k1 + k2 + 4 k3) / 6.
    rhs(stage, t + 0.5 * dt, k_buf)?;
    for j in 0..ny {
        for i in 0..nx {
            let idx = (j * nx + i) * nv;
            let o = field.offset(i as isize, j as isize);
            for c in 0..nv {
                field.data[o + c] += dt * (acc_buf[idx + c] + 4.0 * k_buf[idx + c]) / 6.0;
            }
        }
    }
    Ok(())
}

/// Writes a field as CSV: one row per cell, x[,y] then the state components,
/// 17 significant digits, row-major by x then y.
pub fn write_field_csv(field: &Field, out: &mut dyn std::io::Write) -> std::io::Result<()> {
    let names: &[&str] = match (field.grid.two_d, field.nv) {
        (false, 1) => &["x", "u"],
        (false, 3) => &["x", "rho", "mom", "energy"],
        (true, 4) => &["x", "y", "rho", "momx", "momy", "energy"],
        _ => &[],
    };
    if !names.is_empty() {
        writeln!(out, "{}", names.join(","))?;
    }
    let rows = if field.grid.two_d { field.grid.ny as isize } else { 1 };
    for j in 0..rows {
        for i in 0..field.grid.nx as isize {
            write!(out, "{:.16e}", field.grid.cell_x(i))?;
            if field.grid.two_d {
                write!(out, ",{:.16e}", field.grid.cell_y(j))?;
            }
            for c in 0..field.nv {
                write!(out, ",{:.16e}", field.at(i, j)[c])?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Result of a completed integration.
pub struct Integration {
    pub field: Field,
    pub steps: usize,
    pub t: f64,
    pub walltime: Duration,
}

/// Builds the initial field by pointwise evaluation at cell centers.
pub fn initial_field(setup: &ProblemSetup, nx: usize, ny: usize) -> Field {
    let grid = if setup.two_d {
        Grid::new_2d(nx, ny, setup.x_range.0, setup.x_range.1, setup.y_range.0, setup.y_range.1)
    } else {
        Grid::new_1d(nx, setup.x_range.0, setup.x_range.1)
    };
    let nv = setup.physics.nv(setup.two_d);
    let mut field = Field::new(grid, nv);
    let rows = if setup.two_d { ny as isize } else { 1 };
    for j in 0..rows {
        for i in 0..nx as isize {
            let state = (setup.initial)(grid.cell_x(i), grid.cell_y(j));
            field.set(i, j, &state);
        }
    }
    field
}

/// Runs the method of lines from t = 0 to t_final.
pub fn integrate(setup: &ProblemSetup, config: &RunConfig, nx: usize, ny: usize) -> Result<Integration, SolveError> {
    validate_config(setup, config)?;
    let mut field = initial_field(setup, nx, ny);
    let mut stage = field.clone();
    let rows = if setup.two_d { ny } else { 1 };
    let mut k_buf = vec![0.0f64; nx * rows * field.nv];
    let mut acc_buf = vec![0.0f64; nx * rows * field.nv];
    let mut scratch = RhsScratch::default();

    let start = Instant::now();
    let mut t = 0.0f64;
    let mut steps = 0usize;
    while t < config.t_final {
        let dt = compute_dt(&field, setup, config, t)?;
        let landing = t + dt >= config.t_final;
        rk3_step(&mut field, t, dt, &mut stage, &mut k_buf, &mut acc_buf, |f, stage_t, out| {
            semidiscrete_rhs(f, setup, config, stage_t, out, &mut scratch)
        })?;
        t = if landing { config.t_final } else { t + dt };
        steps += 1;
    }
    Ok(Integration { field, steps, t, walltime: start.elapsed() })
}

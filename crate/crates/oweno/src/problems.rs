//! Benchmark catalog: initial conditions, boundary conditions, exact or
//! reference solutions and error norms for the standard 1D and 2D test
//! problems, plus the executable scaling counterexample that motivates the
//! four-point weight design.

use std::f64::consts::PI;
use std::fmt;

use crate::euler::{Eos, EulerState1D, EulerState2D};
use crate::kernels::{jsweno3_weights, Epsilon, ReconstructionMode};
use crate::solver::{
    BcKind, BoundarySet, EdgeBc, Field, Physics, ProblemSetup, Splitting, StepRegion,
};

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemError {
    UnknownProblem(String),
    NoExactSolution(&'static str),
    IncompatibleGrids { coarse: (usize, usize), reference: (usize, usize) },
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::UnknownProblem(name) => write!(f, "unknown problem '{name}'"),
            ProblemError::NoExactSolution(name) => {
                write!(f, "problem '{name}' has no closed-form solution; compare against a reference run")
            }
            ProblemError::IncompatibleGrids { coarse, reference } => write!(
                f,
                "reference grid {}x{} is not an integer refinement of {}x{}",
                reference.0, reference.1, coarse.0, coarse.1
            ),
        }
    }
}

impl std::error::Error for ProblemError {}

/// A benchmark: solver setup plus run defaults and the error-reporting
/// reference (closed form or fine-grid self-run).
#[derive(Clone, Copy)]
pub struct Problem {
    pub name: &'static str,
    pub setup: ProblemSetup,
    pub t_final: f64,
    pub default_cfl: f64,
    pub default_splitting: Splitting,
    /// Closed-form solution (x, t) -> value, scalar problems only.
    pub exact: Option<fn(f64, f64) -> f64>,
    /// Grid size of the fine self-run used as reference when no closed form
    /// exists (per direction in 2D).
    pub reference_n: Option<usize>,
}

pub const PROBLEM_NAMES: [&str; 8] = [
    "advection",
    "burgers_smooth",
    "burgers_disc",
    "shu_osher",
    "blast",
    "dmr",
    "riemann2d",
    "wind_tunnel",
];

const GAMMA: f64 = 1.4;

fn sine_initial(x: f64, _y: f64) -> [f64; 4] {
    [0.25 + 0.5 * (PI * x).sin(), 0.0, 0.0, 0.0]
}

fn advection_exact(x: f64, t: f64) -> f64 {
    0.25 + 0.5 * (PI * (x - t)).sin()
}

/// Pre-shock solution of the periodic Burgers problem by Newton iteration on
/// the characteristic equation u = u0(x - u t).
pub fn burgers_exact(x: f64, t: f64) -> f64 {
    let u0 = |xi: f64| 0.25 + 0.5 * (PI * xi).sin();
    let du0 = |xi: f64| 0.5 * PI * (PI * xi).cos();
    let mut u = u0(x - 0.25 * t);
    for _ in 0..100 {
        let xi = x - u * t;
        let g = u - u0(xi);
        let gp = 1.0 + t * du0(xi);
        let step = g / gp;
        u -= step;
        if step.abs() <= 1e-15 {
            break;
        }
    }
    u
}

fn shu_osher_initial(x: f64, _y: f64) -> [f64; 4] {
    let eos = Eos { gamma: GAMMA };
    let s = if x <= -4.0 {
        EulerState1D::from_primitives(27.0 / 7.0, 4.0 * 35.0_f64.sqrt() / 9.0, 31.0 / 3.0, eos)
    } else {
        EulerState1D::from_primitives(1.0 + (5.0 * x).sin() / 5.0, 0.0, 1.0, eos)
    };
    let a = s.as_array();
    [a[0], a[1], a[2], 0.0]
}

fn blast_initial(x: f64, _y: f64) -> [f64; 4] {
    let eos = Eos { gamma: GAMMA };
    let p = if x < 0.1 {
        1e3
    } else if x < 0.9 {
        1e-2
    } else {
        1e2
    };
    let a = EulerState1D::from_primitives(1.0, 0.0, p, eos).as_array();
    [a[0], a[1], a[2], 0.0]
}

fn dmr_c1() -> [f64; 4] {
    let pi6 = PI / 6.0;
    [8.0, 8.0 * 8.25 * pi6.cos(), -8.0 * 8.25 * pi6.sin(), 563.5]
}

const DMR_C2: [f64; 4] = [1.4, 0.0, 0.0, 2.5];

// Mach-10 shock inclined at 60 degrees through the ramp foot (1/4, 0): the
// post-shock state fills x <= 1/4 + tan(pi/6) y. This is the line whose top
// intersection the moving-shock boundary condition tracks, and the c1
// velocity is exactly normal to it.
fn dmr_initial(x: f64, y: f64) -> [f64; 4] {
    if x <= 0.25 + (PI / 6.0).tan() * y {
        dmr_c1()
    } else {
        DMR_C2
    }
}

fn riemann2d_initial(x: f64, y: f64) -> [f64; 4] {
    let eos = Eos { gamma: GAMMA };
    let (rho, vx, vy, p) = match (x > 0.5, y > 0.5) {
        (true, true) => (1.5, 0.0, 0.0, 1.5),
        (false, true) => (0.5323, 1.206, 0.0, 0.3),
        (false, false) => (0.138, 1.206, 1.206, 0.029),
        (true, false) => (0.5323, 0.0, 1.206, 0.3),
    };
    EulerState2D::from_primitives(rho, vx, vy, p, eos).as_array()
}

fn wind_tunnel_initial(_x: f64, _y: f64) -> [f64; 4] {
    EulerState2D::from_primitives(1.4, 3.0, 0.0, 1.0, Eos { gamma: GAMMA }).as_array()
}

fn scalar_periodic_setup(physics: Physics) -> ProblemSetup {
    ProblemSetup {
        physics,
        two_d: false,
        x_range: (-1.0, 1.0),
        y_range: (0.0, 1.0),
        bcs: BoundarySet {
            west: BcKind::Periodic,
            east: BcKind::Periodic,
            south: EdgeBc::Uniform(BcKind::Periodic),
            north: EdgeBc::Uniform(BcKind::Periodic),
        },
        step: None,
        initial: sine_initial,
    }
}

/// Builds one of the named benchmarks.
pub fn make_problem(name: &str) -> Result<Problem, ProblemError> {
    let eos = Eos { gamma: GAMMA };
    match name {
        "advection" => Ok(Problem {
            name: "advection",
            setup: scalar_periodic_setup(Physics::Advection),
            t_final: 1.0,
            default_cfl: 0.5,
            default_splitting: Splitting::Upwind,
            exact: Some(advection_exact),
            reference_n: None,
        }),
        "burgers_smooth" => Ok(Problem {
            name: "burgers_smooth",
            setup: scalar_periodic_setup(Physics::Burgers),
            t_final: 0.3,
            default_cfl: 0.5,
            default_splitting: Splitting::Upwind,
            exact: Some(burgers_exact),
            reference_n: None,
        }),
        "burgers_disc" => Ok(Problem {
            name: "burgers_disc",
            setup: scalar_periodic_setup(Physics::Burgers),
            t_final: 12.0,
            default_cfl: 0.5,
            default_splitting: Splitting::Upwind,
            exact: None,
            reference_n: Some(5120),
        }),
        "shu_osher" => Ok(Problem {
            name: "shu_osher",
            setup: ProblemSetup {
                physics: Physics::Euler(eos),
                two_d: false,
                x_range: (-5.0, 5.0),
                y_range: (0.0, 1.0),
                bcs: BoundarySet {
                    west: BcKind::Inflow(shu_osher_initial(-5.0, 0.0)),
                    east: BcKind::Outflow,
                    south: EdgeBc::Uniform(BcKind::Outflow),
                    north: EdgeBc::Uniform(BcKind::Outflow),
                },
                step: None,
                initial: shu_osher_initial,
            },
            t_final: 1.8,
            default_cfl: 0.5,
            default_splitting: Splitting::CharacteristicLlf,
            exact: None,
            reference_n: Some(4000),
        }),
        "blast" => Ok(Problem {
            name: "blast",
            setup: ProblemSetup {
                physics: Physics::Euler(eos),
                two_d: false,
                x_range: (0.0, 1.0),
                y_range: (0.0, 1.0),
                bcs: BoundarySet {
                    west: BcKind::Reflect,
                    east: BcKind::Reflect,
                    south: EdgeBc::Uniform(BcKind::Outflow),
                    north: EdgeBc::Uniform(BcKind::Outflow),
                },
                step: None,
                initial: blast_initial,
            },
            t_final: 0.038,
            default_cfl: 0.5,
            default_splitting: Splitting::CharacteristicLlf,
            exact: None,
            reference_n: Some(20000),
        }),
        "dmr" => Ok(Problem {
            name: "dmr",
            setup: ProblemSetup {
                physics: Physics::Euler(eos),
                two_d: true,
                x_range: (0.0, 4.0),
                y_range: (0.0, 1.0),
                bcs: BoundarySet {
                    west: BcKind::Inflow(dmr_c1()),
                    east: BcKind::Outflow,
                    south: EdgeBc::SplitAtX {
                        split: 0.25,
                        left: BcKind::Outflow,
                        right: BcKind::Reflect,
                    },
                    north: EdgeBc::Uniform(BcKind::DmrTop { c1: dmr_c1(), c2: DMR_C2 }),
                },
                step: None,
                initial: dmr_initial,
            },
            t_final: 0.2,
            default_cfl: 0.25,
            default_splitting: Splitting::CharacteristicLlf,
            exact: None,
            reference_n: None,
        }),
        "riemann2d" => Ok(Problem {
            name: "riemann2d",
            setup: ProblemSetup {
                physics: Physics::Euler(eos),
                two_d: true,
                x_range: (0.0, 1.0),
                y_range: (0.0, 1.0),
                bcs: BoundarySet {
                    west: BcKind::Outflow,
                    east: BcKind::Outflow,
                    south: EdgeBc::Uniform(BcKind::Outflow),
                    north: EdgeBc::Uniform(BcKind::Outflow),
                },
                step: None,
                initial: riemann2d_initial,
            },
            t_final: 0.3,
            default_cfl: 0.4,
            default_splitting: Splitting::CharacteristicLlf,
            exact: None,
            reference_n: Some(512),
        }),
        "wind_tunnel" => Ok(Problem {
            name: "wind_tunnel",
            setup: ProblemSetup {
                physics: Physics::Euler(eos),
                two_d: true,
                x_range: (0.0, 3.0),
                y_range: (0.0, 1.0),
                bcs: BoundarySet {
                    west: BcKind::Inflow(wind_tunnel_initial(0.0, 0.0)),
                    east: BcKind::Outflow,
                    south: EdgeBc::Uniform(BcKind::Reflect),
                    north: EdgeBc::Uniform(BcKind::Reflect),
                },
                step: Some(StepRegion { x_face: 0.6, y_top: 0.2 }),
                initial: wind_tunnel_initial,
            },
            t_final: 4.0,
            default_cfl: 0.4,
            default_splitting: Splitting::CharacteristicLlf,
            exact: None,
            reference_n: None,
        }),
        other => Err(ProblemError::UnknownProblem(other.to_string())),
    }
}

/// The wind tunnel with the step removed; the uniform flow must then be an
/// exact steady state.
pub fn wind_tunnel_without_step() -> Problem {
    let mut p = make_problem("wind_tunnel").expect("catalog entry");
    p.setup.step = None;
    p
}

/// Error norms of a numerical field: `l1` is the mean absolute error (the
/// integral norm divided by the domain measure, matching the reference
/// tables), `linf` the maximum.
#[derive(Clone, Copy, Debug)]
pub struct ErrorNorms {
    pub l1: f64,
    pub linf: f64,
}

// Cell measure: h in 1D, hx * hy in 2D.
fn cell_measure(field: &Field) -> f64 {
    if field.grid.two_d {
        field.grid.hx * field.grid.hy
    } else {
        field.grid.hx
    }
}

fn cell_count(field: &Field) -> f64 {
    (field.grid.nx * if field.grid.two_d { field.grid.ny } else { 1 }) as f64
}

/// Error norms of the first component against the closed-form solution.
pub fn error_vs_exact(field: &Field, problem: &Problem, t: f64) -> Result<ErrorNorms, ProblemError> {
    let exact = problem.exact.ok_or(ProblemError::NoExactSolution(problem.name))?;
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    let rows = if field.grid.two_d { field.grid.ny as isize } else { 1 };
    for j in 0..rows {
        for i in 0..field.grid.nx as isize {
            let e = (field.at(i, j)[0] - exact(field.grid.cell_x(i), t)).abs();
            l1 += e;
            linf = linf.max(e);
        }
    }
    Ok(ErrorNorms { l1: l1 / cell_count(field), linf })
}

// Restriction of one reference component to a coarse cell: pointwise at the
// coinciding fine center for odd ratios, mean of the straddling fine cells
// for even ratios (per direction in 2D).
fn restricted_value(reference: &Field, ratio: usize, i: usize, j: usize, comp: usize) -> f64 {
    let pick = |coarse: usize| -> (usize, bool) {
        if ratio % 2 == 1 {
            (ratio * coarse + (ratio - 1) / 2, false)
        } else {
            (ratio * coarse + ratio / 2 - 1, true)
        }
    };
    let (fi, even_x) = pick(i);
    if !reference.grid.two_d {
        return if even_x {
            0.5 * (reference.at(fi as isize, 0)[comp] + reference.at(fi as isize + 1, 0)[comp])
        } else {
            reference.at(fi as isize, 0)[comp]
        };
    }
    let (fj, even_y) = pick(j);
    let xs: &[usize] = if even_x { &[0, 1] } else { &[0] };
    let ys: &[usize] = if even_y { &[0, 1] } else { &[0] };
    let mut sum = 0.0;
    for dj in ys {
        for di in xs {
            sum += reference.at((fi + di) as isize, (fj + dj) as isize)[comp];
        }
    }
    sum / (xs.len() * ys.len()) as f64
}

/// Error norms of the first component against a fine-grid reference run
/// restricted to the coarse grid.
pub fn error_vs_reference(field: &Field, reference: &Field) -> Result<ErrorNorms, ProblemError> {
    let (nx, ny) = (field.grid.nx, field.grid.ny);
    let (rx, ry) = (reference.grid.nx, reference.grid.ny);
    let compatible = rx % nx == 0
        && (!field.grid.two_d || ry % ny == 0)
        && (!field.grid.two_d || rx / nx == ry / ny);
    if !compatible {
        return Err(ProblemError::IncompatibleGrids { coarse: (nx, ny), reference: (rx, ry) });
    }
    let ratio = rx / nx;
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    let rows = if field.grid.two_d { ny } else { 1 };
    for j in 0..rows {
        for i in 0..nx {
            let r = restricted_value(reference, ratio, i, j, 0);
            let e = (field.at(i as isize, j as isize)[0] - r).abs();
            l1 += e;
            linf = linf.max(e);
        }
    }
    Ok(ErrorNorms { l1: l1 / cell_count(field), linf })
}

/// Total variation of one component along x (1D fields).
pub fn total_variation(field: &Field, comp: usize) -> f64 {
    let nx = field.grid.nx as isize;
    let mut tv = 0.0;
    for i in 0..nx - 1 {
        tv += (field.at(i + 1, 0)[comp] - field.at(i, 0)[comp]).abs();
    }
    // Periodic closure.
    tv + (field.at(0, 0)[comp] - field.at(nx - 1, 0)[comp]).abs()
}

/// h-weighted sum (discrete integral) of one component over the interior.
pub fn discrete_integral(field: &Field, comp: usize) -> f64 {
    let rows = if field.grid.two_d { field.grid.ny as isize } else { 1 };
    let mut sum = 0.0;
    for j in 0..rows {
        for i in 0..field.grid.nx as isize {
            sum += field.at(i, j)[comp];
        }
    }
    sum * cell_measure(field)
}

/// The scaling counterexample: the stencil of f(x) = 4x^2 on the grid
/// (-h/2, h/2, 3h/2) equals h^2 times the stencil of the step (1, 1, 9), so
/// no scale-invariant smoothness measure on three points can tell a
/// second-order extremum from a jump.
pub fn scaling_counterexample(h: f64) -> ([f64; 3], [f64; 3]) {
    assert!(h > 0.0);
    let h2 = h * h;
    ([h2, h2, 9.0 * h2], [1.0, 1.0, 9.0])
}

/// Nonlinear weights that the classical three-point kernel assigns to a
/// stencil; used to make the counterexample executable.
pub fn jsweno3_weight_pair(stencil: &[f64; 3], eps: Epsilon, mode: ReconstructionMode) -> (f64, f64) {
    let d = jsweno3_weights(stencil[0], stencil[1], stencil[2], eps, mode);
    (d.w0, d.w1)
}

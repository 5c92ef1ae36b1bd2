//! WENO reconstruction kernels and a finite-difference solver for hyperbolic
//! conservation laws.
//!
//! The `kernels` module holds the stateless interface reconstructions
//! (classical three-point JS/YC schemes, the four-point OWENO3 scheme with
//! unconditional third-order accuracy, and the fifth-order JS baseline);
//! `accuracy` measures their convergence orders on refinement ladders; `flux`
//! assembles upwind numerical fluxes through local splitting and
//! characteristic projection; `euler` provides the gas-dynamics physics;
//! `solver` is the method-of-lines driver; `problems` is the benchmark
//! catalog with error norms.

pub mod accuracy;
pub mod euler;
pub mod flux;
pub mod kernels;
pub mod problems;
pub mod solver;

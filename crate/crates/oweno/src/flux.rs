//! Numerical flux construction: local scalar flux splitting with interface
//! wave-speed bounds, and characteristic-wise system fluxes that feed the
//! reconstruction kernels.
//!
//! The splitting is one-sided whenever the characteristic speed keeps its
//! sign across the interface interval and a local Lax-Friedrichs half-split
//! otherwise, so pure upwinding falls out of the same case analysis.

use crate::euler::CharacteristicFrame;
use crate::kernels::{
    reconstruct_jsweno3, reconstruct_jsweno5, reconstruct_oweno3, reconstruct_ycweno3, Epsilon,
    KernelKind, ReconstructionMode, StencilWindow,
};

/// Scalar flux f(u) with its exact derivative. `derivative_extrema` lists the
/// critical points of f', needed for the interface speed bound when f' is not
/// monotone; both fluxes in scope have monotone f', so the default is empty.
pub trait ScalarFlux: Sync {
    fn value(&self, u: f64) -> f64;
    fn derivative(&self, u: f64) -> f64;
    fn derivative_extrema(&self) -> &[f64] {
        &[]
    }
}

/// f(u) = u.
pub struct Advection;

impl ScalarFlux for Advection {
    fn value(&self, u: f64) -> f64 {
        u
    }
    fn derivative(&self, _u: f64) -> f64 {
        1.0
    }
}

/// f(u) = u^2 / 2.
pub struct Burgers;

impl ScalarFlux for Burgers {
    fn value(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn derivative(&self, u: f64) -> f64 {
        u
    }
}

/// Split flux values over the four-state footprint of one interface.
#[derive(Clone, Copy, Debug)]
pub struct SplitFluxValues {
    pub plus: [f64; 4],
    pub minus: [f64; 4],
    pub alpha: f64,
}

/// max |f'(u)| over the closed interval spanned by the two interface states.
pub fn interface_alpha(flux: &dyn ScalarFlux, ui: f64, uip1: f64) -> f64 {
    let lo = ui.min(uip1);
    let hi = ui.max(uip1);
    let mut a = flux.derivative(ui).abs().max(flux.derivative(uip1).abs());
    for &c in flux.derivative_extrema() {
        if c > lo && c < hi {
            a = a.max(flux.derivative(c).abs());
        }
    }
    a
}

// Sign of f' over the interface interval: +1 if strictly positive throughout,
// -1 if strictly negative, 0 otherwise.
fn derivative_sign(flux: &dyn ScalarFlux, ui: f64, uip1: f64) -> i8 {
    let lo = ui.min(uip1);
    let hi = ui.max(uip1);
    let mut min_d = flux.derivative(ui).min(flux.derivative(uip1));
    let mut max_d = flux.derivative(ui).max(flux.derivative(uip1));
    for &c in flux.derivative_extrema() {
        if c > lo && c < hi {
            let d = flux.derivative(c);
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
    }
    if min_d > 0.0 {
        1
    } else if max_d < 0.0 {
        -1
    } else {
        0
    }
}

/// Local flux splitting f = f^+ + f^- over the states (u_{i-1}, u_i, u_{i+1},
/// u_{i+2}); the sign case is decided on the interval between u_i and u_{i+1}.
pub fn split_scalar(flux: &dyn ScalarFlux, states: &[f64; 4]) -> SplitFluxValues {
    let (ui, uip1) = (states[1], states[2]);
    let sign = derivative_sign(flux, ui, uip1);
    let mut plus = [0.0; 4];
    let mut minus = [0.0; 4];
    match sign {
        1 => {
            for (p, &u) in plus.iter_mut().zip(states) {
                *p = flux.value(u);
            }
            SplitFluxValues { plus, minus, alpha: 0.0 }
        }
        -1 => {
            for (m, &u) in minus.iter_mut().zip(states) {
                *m = flux.value(u);
            }
            SplitFluxValues { plus, minus, alpha: 0.0 }
        }
        _ => {
            let alpha = interface_alpha(flux, ui, uip1);
            for k in 0..4 {
                let f = flux.value(states[k]);
                plus[k] = 0.5 * (f + alpha * states[k]);
                minus[k] = 0.5 * (f - alpha * states[k]);
            }
            SplitFluxValues { plus, minus, alpha }
        }
    }
}

// Right-biased third-order reconstruction on the first three of four values
// for the classical kernels, or the full window for the four-point kernel.
fn recon_plus3(kernel: KernelKind, w: &[f64; 4], eps: Epsilon, mode: ReconstructionMode) -> f64 {
    match kernel {
        KernelKind::JsWeno3 => reconstruct_jsweno3(w[0], w[1], w[2], eps, mode),
        KernelKind::YcWeno3 => reconstruct_ycweno3(w[0], w[1], w[2], eps, mode),
        KernelKind::Oweno3 => reconstruct_oweno3(&StencilWindow(*w), eps, mode),
        KernelKind::JsWeno5 => unreachable!("five-point kernel uses the six-state path"),
    }
}

// Left-biased counterpart: the right-biased kernel on the reversed window.
fn recon_minus3(kernel: KernelKind, w: &[f64; 4], eps: Epsilon, mode: ReconstructionMode) -> f64 {
    match kernel {
        KernelKind::JsWeno3 => reconstruct_jsweno3(w[3], w[2], w[1], eps, mode),
        KernelKind::YcWeno3 => reconstruct_ycweno3(w[3], w[2], w[1], eps, mode),
        KernelKind::Oweno3 => {
            reconstruct_oweno3(&StencilWindow([w[3], w[2], w[1], w[0]]), eps, mode)
        }
        KernelKind::JsWeno5 => unreachable!("five-point kernel uses the six-state path"),
    }
}

/// Upwinding decision for one interface: reconstruct only the rightward or
/// leftward part, or split into both with the given dissipation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitBranch {
    Plus,
    Minus,
    Mixed(f64),
}

/// Per-interface branch from the sign of f' on the interval between the two
/// middle states; the mixed bound is the local interface speed.
pub fn interface_branch(flux: &dyn ScalarFlux, ui: f64, uip1: f64) -> SplitBranch {
    match derivative_sign(flux, ui, uip1) {
        1 => SplitBranch::Plus,
        -1 => SplitBranch::Minus,
        _ => SplitBranch::Mixed(interface_alpha(flux, ui, uip1)),
    }
}

/// Numerical flux at the interface between the two middle states of `states`
/// with an externally chosen branch. Third-order kernels take 4 states
/// (u_{i-1}..u_{i+2}); the fifth-order one takes 6 (u_{i-2}..u_{i+3}).
pub fn numerical_flux_scalar_branch(
    kernel: KernelKind,
    flux: &dyn ScalarFlux,
    states: &[f64],
    eps: Epsilon,
    mode: ReconstructionMode,
    branch: SplitBranch,
) -> f64 {
    let w = states.len();
    assert_eq!(w, kernel.flux_stencil_width(), "flux window width mismatch");
    let mut plus = [0.0; 6];
    let mut minus = [0.0; 6];
    match branch {
        SplitBranch::Plus => {
            for (p, &u) in plus.iter_mut().zip(states) {
                *p = flux.value(u);
            }
        }
        SplitBranch::Minus => {
            for (m, &u) in minus.iter_mut().zip(states) {
                *m = flux.value(u);
            }
        }
        SplitBranch::Mixed(alpha) => {
            for k in 0..w {
                let f = flux.value(states[k]);
                plus[k] = 0.5 * (f + alpha * states[k]);
                minus[k] = 0.5 * (f - alpha * states[k]);
            }
        }
    }
    match kernel {
        KernelKind::JsWeno5 => {
            let p = reconstruct_jsweno5(&[plus[0], plus[1], plus[2], plus[3], plus[4]], eps, mode);
            let m =
                reconstruct_jsweno5(&[minus[5], minus[4], minus[3], minus[2], minus[1]], eps, mode);
            p + m
        }
        _ => {
            let p4 = [plus[0], plus[1], plus[2], plus[3]];
            let m4 = [minus[0], minus[1], minus[2], minus[3]];
            recon_plus3(kernel, &p4, eps, mode) + recon_minus3(kernel, &m4, eps, mode)
        }
    }
}

/// Numerical flux with the branch decided per interface from the local sign
/// of f'. Reconstruction runs in cell-average mode on the split flux values.
pub fn numerical_flux_scalar(
    kernel: KernelKind,
    flux: &dyn ScalarFlux,
    states: &[f64],
    eps: Epsilon,
    mode: ReconstructionMode,
) -> f64 {
    let w = states.len();
    let branch = interface_branch(flux, states[w / 2 - 1], states[w / 2]);
    numerical_flux_scalar_branch(kernel, flux, states, eps, mode, branch)
}

/// Characteristic-wise numerical flux for a hyperbolic system.
///
/// `u_window` and `f_window` hold the conserved states and their analytic
/// fluxes over the kernel's footprint (4 or 6 states, interface between the
/// middle two). `lambda_lo`/`lambda_hi` are the per-field eigenvalues at the
/// two interface cells; the per-field speed bound is their absolute maximum.
/// Projection uses the frame's left eigenvectors, reconstruction runs per
/// field with the scalar case analysis, and the result is recombined with the
/// right eigenvectors.
pub fn numerical_flux_system(
    kernel: KernelKind,
    frame: &CharacteristicFrame,
    u_window: &[[f64; 4]],
    f_window: &[[f64; 4]],
    lambda_lo: &[f64; 4],
    lambda_hi: &[f64; 4],
    eps: Epsilon,
    mode: ReconstructionMode,
) -> [f64; 4] {
    let width = kernel.flux_stencil_width();
    debug_assert_eq!(u_window.len(), width);
    debug_assert_eq!(f_window.len(), width);
    let nu = frame.nu;

    // Characteristic projections per window cell.
    let mut w_char = [[0.0f64; 6]; 4]; // [field][cell]
    let mut g_char = [[0.0f64; 6]; 4];
    for (cell, (u, fv)) in u_window.iter().zip(f_window).enumerate() {
        for p in 0..nu {
            let l = &frame.left[p];
            w_char[p][cell] = l[0] * u[0] + l[1] * u[1] + l[2] * u[2] + l[3] * u[3];
            g_char[p][cell] = l[0] * fv[0] + l[1] * fv[1] + l[2] * fv[2] + l[3] * fv[3];
        }
    }

    let mut phi = [0.0f64; 4];
    for p in 0..nu {
        let lo = lambda_lo[p];
        let hi = lambda_hi[p];
        let g = &g_char[p];
        let w = &w_char[p];
        phi[p] = if lo > 0.0 && hi > 0.0 {
            match kernel {
                KernelKind::JsWeno5 => {
                    reconstruct_jsweno5(&[g[0], g[1], g[2], g[3], g[4]], eps, mode)
                }
                _ => recon_plus3(kernel, &[g[0], g[1], g[2], g[3]], eps, mode),
            }
        } else if lo < 0.0 && hi < 0.0 {
            match kernel {
                KernelKind::JsWeno5 => {
                    reconstruct_jsweno5(&[g[5], g[4], g[3], g[2], g[1]], eps, mode)
                }
                _ => recon_minus3(kernel, &[g[0], g[1], g[2], g[3]], eps, mode),
            }
        } else {
            let alpha = lo.abs().max(hi.abs());
            match kernel {
                KernelKind::JsWeno5 => {
                    let mut gp = [0.0; 5];
                    let mut gm = [0.0; 5];
                    for k in 0..5 {
                        gp[k] = 0.5 * (g[k] + alpha * w[k]);
                        // Reversed window for the left-biased half.
                        gm[k] = 0.5 * (g[5 - k] - alpha * w[5 - k]);
                    }
                    reconstruct_jsweno5(&gp, eps, mode) + reconstruct_jsweno5(&gm, eps, mode)
                }
                _ => {
                    let mut gp = [0.0; 4];
                    let mut gm = [0.0; 4];
                    for k in 0..4 {
                        gp[k] = 0.5 * (g[k] + alpha * w[k]);
                        gm[k] = 0.5 * (g[k] - alpha * w[k]);
                    }
                    recon_plus3(kernel, &gp, eps, mode) + recon_minus3(kernel, &gm, eps, mode)
                }
            }
        };
    }

    // Back-projection with the right eigenvectors.
    let mut out = [0.0f64; 4];
    for row in 0..nu {
        let r = &frame.right[row];
        out[row] = r[0] * phi[0] + r[1] * phi[1] + r[2] * phi[2] + r[3] * phi[3];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{analytic_flux, eigen_frame, eigenvalues, Axis, Eos, EulerState1D};

    const EPS: Epsilon = Epsilon::DEFAULT;
    const CELL: ReconstructionMode = ReconstructionMode::CellAverages;

    #[test]
    fn derivative_spot_checks() {
        // f' must be the exact derivative; finite-difference spot check.
        for u in [-2.0, -0.3, 0.0, 0.7, 3.1] {
            let du = 1e-6;
            for f in [&Advection as &dyn ScalarFlux, &Burgers as &dyn ScalarFlux] {
                let fd = (f.value(u + du) - f.value(u - du)) / (2.0 * du);
                assert!((fd - f.derivative(u)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn alpha_reference_values() {
        assert_eq!(interface_alpha(&Advection, -5.0, 17.0), 1.0);
        assert_eq!(interface_alpha(&Burgers, -1.0, 2.0), 2.0);
        assert_eq!(interface_alpha(&Burgers, 0.75, 0.75), 0.75);
    }

    #[test]
    fn split_cases() {
        // Advection always takes the pure plus branch.
        let s = split_scalar(&Advection, &[0.3, -0.2, 0.9, 1.4]);
        assert_eq!(s.plus, [0.3, -0.2, 0.9, 1.4]);
        assert_eq!(s.minus, [0.0; 4]);

        // All states positive: pure upwind for Burgers.
        let s = split_scalar(&Burgers, &[0.5, 1.0, 2.0, 0.25]);
        assert_eq!(s.minus, [0.0; 4]);
        assert_eq!(s.plus[2], 2.0);

        // Mixed sign across the interface: halves recombine exactly.
        let states = [0.5, -1.0, 1.0, 2.0];
        let s = split_scalar(&Burgers, &states);
        assert_eq!(s.alpha, 1.0);
        for k in 0..4 {
            let f = 0.5 * states[k] * states[k];
            assert_eq!(s.plus[k] + s.minus[k], f);
        }
    }

    #[test]
    fn split_halves_are_monotone() {
        // In the mixed branch u -> (f(u) + alpha u)/2 must be nondecreasing
        // and u -> (f(u) - alpha u)/2 nonincreasing on the interval.
        let (ui, uip1) = (-1.0, 2.0);
        let alpha = interface_alpha(&Burgers, ui, uip1);
        let mut prev_p = f64::NEG_INFINITY;
        let mut prev_m = f64::INFINITY;
        for k in 0..=100 {
            let u = ui + (uip1 - ui) * k as f64 / 100.0;
            let f = Burgers.value(u);
            let p = 0.5 * (f + alpha * u);
            let m = 0.5 * (f - alpha * u);
            assert!(p >= prev_p - 1e-14);
            assert!(m <= prev_m + 1e-14);
            prev_p = p;
            prev_m = m;
        }
    }

    #[test]
    fn scalar_flux_consistency() {
        for kernel in KernelKind::ALL {
            let width = kernel.flux_stencil_width();
            for u in [0.4, -1.3, 2.0] {
                let states = vec![u; width];
                for f in [&Advection as &dyn ScalarFlux, &Burgers as &dyn ScalarFlux] {
                    let fhat = numerical_flux_scalar(kernel, f, &states, EPS, CELL);
                    let exact = f.value(u);
                    assert!(
                        (fhat - exact).abs() <= 1e-13 * (1.0 + exact.abs()),
                        "{kernel}: {fhat} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn scalar_flux_footprint() {
        // Third-order flux is a function of exactly the four inner states.
        let base = [0.1, 0.5, -0.2, 0.8];
        for kernel in [KernelKind::JsWeno3, KernelKind::YcWeno3, KernelKind::Oweno3] {
            let f0 = numerical_flux_scalar(kernel, &Burgers, &base, EPS, CELL);
            for k in 0..4 {
                let mut bumped = base;
                bumped[k] += 1e-3;
                let f1 = numerical_flux_scalar(kernel, &Burgers, &bumped, EPS, CELL);
                assert_ne!(f0, f1, "{kernel} ignores state {k}");
            }
        }
        // Fifth-order flux depends on all six.
        let base6 = [0.1, 0.5, -0.2, 0.8, 0.3, -0.6];
        let f0 = numerical_flux_scalar(KernelKind::JsWeno5, &Burgers, &base6, EPS, CELL);
        for k in 0..6 {
            let mut bumped = base6;
            bumped[k] += 1e-3;
            let f1 = numerical_flux_scalar(KernelKind::JsWeno5, &Burgers, &bumped, EPS, CELL);
            assert_ne!(f0, f1, "jsweno5 ignores state {k}");
        }
    }

    // Semidiscrete residual of the advection flux must converge at third
    // order against the exact space derivative.
    #[test]
    fn semidiscrete_residual_third_order() {
        let u0 = |x: f64| 0.25 + 0.5 * (std::f64::consts::PI * x).sin();
        let exact_dudx =
            |x: f64| 0.5 * std::f64::consts::PI * (std::f64::consts::PI * x).cos();
        let residual_norm = |n: usize| {
            let h = 2.0 / n as f64;
            let mut linf: f64 = 0.0;
            for i in 0..n {
                let x = |k: i64| -1.0 + (i as i64 + k) as f64 * h + 0.5 * h;
                let wl: Vec<f64> = (-2..2).map(|k| u0(x(k))).collect();
                let wr: Vec<f64> = (-1..3).map(|k| u0(x(k))).collect();
                let fl = numerical_flux_scalar(KernelKind::Oweno3, &Advection, &wl, EPS, CELL);
                let fr = numerical_flux_scalar(KernelKind::Oweno3, &Advection, &wr, EPS, CELL);
                let rhs = -(fr - fl) / h;
                linf = linf.max((rhs + exact_dudx(x(0))).abs());
            }
            linf
        };
        let e1 = residual_norm(64);
        let e2 = residual_norm(128);
        let order = (e1 / e2).log2();
        assert!(order > 2.7, "observed order {order}");
    }

    #[test]
    fn system_flux_consistency() {
        let eos = Eos::default();
        let u = EulerState1D::from_primitives(1.0, 0.6, 1.2, eos).as_array();
        let mut u4 = [0.0; 4];
        u4[..3].copy_from_slice(&u);
        let mut f4 = [0.0; 4];
        analytic_flux(&u, eos, Axis::X, &mut f4).unwrap();
        let frame = eigen_frame(&u, &u, eos, Axis::X).unwrap();
        let lam = eigenvalues(&u, eos, Axis::X).unwrap();
        for kernel in KernelKind::ALL {
            let width = kernel.flux_stencil_width();
            let uw = vec![u4; width];
            let fw = vec![f4; width];
            let fhat = numerical_flux_system(kernel, &frame, &uw, &fw, &lam, &lam, EPS, CELL);
            for comp in 0..3 {
                assert!(
                    (fhat[comp] - f4[comp]).abs() <= 1e-12 * (1.0 + f4[comp].abs()),
                    "{kernel} comp {comp}: {} vs {}",
                    fhat[comp],
                    f4[comp]
                );
            }
        }
    }
}

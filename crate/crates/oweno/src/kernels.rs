//! WENO reconstruction kernels at the cell interface x_{1/2}.
//!
//! Four kernels are provided: the classical Jiang-Shu and Yamaleev-Carpenter
//! third-order schemes on a 3-point stencil, the unconditionally third-order
//! OWENO3 scheme that adds one downwind node used only for the smoothness
//! analysis, and the classical Jiang-Shu fifth-order scheme as a baseline.
//! All of them are stateless: every function here is a pure map from a data
//! window to a reconstructed value.

use std::fmt;

/// Interpretation of the stencil data: function samples or cell means.
/// Only the ideal weights differ between the two for the 2-point candidate
/// polynomials; the 5-point kernel also switches its candidate formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconstructionMode {
    PointValues,
    CellAverages,
}

impl ReconstructionMode {
    /// Ideal weights (c0, c1) of the third-order kernels. c0 + c1 == 1 exactly.
    pub fn ideal_weights(self) -> (f64, f64) {
        match self {
            ReconstructionMode::PointValues => (0.25, 0.75),
            ReconstructionMode::CellAverages => {
                let c0 = 1.0 / 3.0;
                (c0, 1.0 - c0)
            }
        }
    }

    /// Ideal weights of the fifth-order kernel.
    pub fn weno5_ideal_weights(self) -> [f64; 3] {
        match self {
            ReconstructionMode::PointValues => [1.0 / 16.0, 10.0 / 16.0, 5.0 / 16.0],
            ReconstructionMode::CellAverages => [0.1, 0.6, 0.3],
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "point" | "pointvalues" => Some(ReconstructionMode::PointValues),
            "cell" | "cellaverages" => Some(ReconstructionMode::CellAverages),
            _ => None,
        }
    }
}

impl fmt::Display for ReconstructionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructionMode::PointValues => write!(f, "point"),
            ReconstructionMode::CellAverages => write!(f, "cell"),
        }
    }
}

/// Regularization parameter of the nonlinear weights. Strictly positive so
/// that every weight denominator is positive; no grid-dependent scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Epsilon(f64);

impl Epsilon {
    pub const DEFAULT: Epsilon = Epsilon(1e-100);

    pub fn new(value: f64) -> Result<Self, KernelError> {
        if value > 0.0 && value.is_finite() {
            Ok(Epsilon(value))
        } else {
            Err(KernelError::InvalidEpsilon(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::DEFAULT
    }
}

/// Four consecutive values (f_{-1}, f_0, f_1, f_2) on an equispaced grid.
/// The reconstruction target sits between the second and third entry; all
/// formulas are spacing-free.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilWindow(pub [f64; 4]);

impl StencilWindow {
    pub fn new(values: [f64; 4]) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        StencilWindow(values)
    }

    pub fn reversed(self) -> Self {
        let [a, b, c, d] = self.0;
        StencilWindow([d, c, b, a])
    }
}

/// Which reconstruction kernel to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    JsWeno3,
    YcWeno3,
    Oweno3,
    JsWeno5,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::JsWeno3,
        KernelKind::YcWeno3,
        KernelKind::Oweno3,
        KernelKind::JsWeno5,
    ];

    /// Number of data values consumed by one biased reconstruction.
    pub fn stencil_width(self) -> usize {
        match self {
            KernelKind::JsWeno3 | KernelKind::YcWeno3 => 3,
            KernelKind::Oweno3 => 4,
            KernelKind::JsWeno5 => 5,
        }
    }

    /// Number of cell states one numerical flux depends on (both biases).
    pub fn flux_stencil_width(self) -> usize {
        match self {
            KernelKind::JsWeno3 | KernelKind::YcWeno3 | KernelKind::Oweno3 => 4,
            KernelKind::JsWeno5 => 6,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "jsweno3" => Some(KernelKind::JsWeno3),
            "ycweno3" => Some(KernelKind::YcWeno3),
            "oweno3" => Some(KernelKind::Oweno3),
            "jsweno5" => Some(KernelKind::JsWeno5),
            _ => None,
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            KernelKind::JsWeno3 => "jsweno3",
            KernelKind::YcWeno3 => "ycweno3",
            KernelKind::Oweno3 => "oweno3",
            KernelKind::JsWeno5 => "jsweno5",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelError {
    InvalidStencilWidth { kernel: KernelKind, expected: usize, got: usize },
    InvalidEpsilon(f64),
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::InvalidStencilWidth { kernel, expected, got } => {
                write!(f, "kernel {kernel} expects a window of {expected} values, got {got}")
            }
            KernelError::InvalidEpsilon(v) => write!(f, "epsilon must be positive and finite, got {v}"),
        }
    }
}

impl std::error::Error for KernelError {}

/// Every intermediate quantity of a third-order weight computation, for
/// introspection and tests. The classical kernels fit the same algebra with
/// omega == 0 and (tw0, tw1) equal to their nonlinear weights; sigma is
/// populated only by the Yamaleev-Carpenter kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightDiagnostics {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    /// Squared third undivided difference of the extended stencil.
    pub d: f64,
    pub j: f64,
    pub tau: f64,
    /// Corrector weight blending ideal and auxiliary weights.
    pub omega: f64,
    pub tw0: f64,
    pub tw1: f64,
    pub w0: f64,
    pub w1: f64,
    pub sigma: f64,
    pub p0: f64,
    pub p1: f64,
    /// Final reconstructed value w0*p0 + w1*p1.
    pub value: f64,
}

/// Values at x_{1/2} of the linear interpolants on the substencils
/// (f_{-1}, f_0) and (f_0, f_1). The same pair serves point values and cell
/// averages. Evaluated in difference form, p_i = f0 + r_i, so constant data
/// reproduces exactly.
#[inline]
pub fn candidate_values(fm1: f64, f0: f64, f1: f64) -> (f64, f64) {
    let (r0, r1) = candidate_offsets(fm1, f0, f1);
    (f0 + r0, f0 + r1)
}

// Candidate values relative to f0: p0 = f0 + (f0 - fm1)/2, p1 = f0 + (f1 - f0)/2.
#[inline]
fn candidate_offsets(fm1: f64, f0: f64, f1: f64) -> (f64, f64) {
    (0.5 * (f0 - fm1), 0.5 * (f1 - f0))
}

/// Squared undivided differences (I0, I1, I2) of the 4-point window.
#[inline]
pub fn smoothness_indicators(window: &StencilWindow) -> (f64, f64, f64) {
    let [fm1, f0, f1, f2] = window.0;
    let d0 = f0 - fm1;
    let d1 = f1 - f0;
    let d2 = f2 - f1;
    (d0 * d0, d1 * d1, d2 * d2)
}

/// Full OWENO3 weight chain on the extended stencil.
pub fn oweno3_weights(window: &StencilWindow, eps: Epsilon, mode: ReconstructionMode) -> WeightDiagnostics {
    let [fm1, f0, f1, f2] = window.0;
    let e = eps.value();
    let (c0, c1) = mode.ideal_weights();
    let d0 = f0 - fm1;
    let d1 = f1 - f0;
    let d2 = f2 - f1;
    let (i0, i1, i2) = (d0 * d0, d1 * d1, d2 * d2);

    let tw0 = (i1 + e) / (i0 + i1 + 2.0 * e);
    let tw1 = 1.0 - tw0;

    // Third undivided difference -f_{-1} + 3f_0 - 3f_1 + f_2 of the extended
    // stencil, written over first differences.
    let third_diff = d0 - 2.0 * d1 + d2;
    let d = third_diff * third_diff;
    let tau = d * (i0 + i1 + i2);
    let j = i0 * (i1 + i2) + (i0 + i1) * i2;
    let omega = j / (j + tau + e);

    let w0 = omega * c0 + (1.0 - omega) * tw0;
    let w1 = omega * c1 + (1.0 - omega) * tw1;

    let (r0, r1) = candidate_offsets(fm1, f0, f1);
    WeightDiagnostics {
        i0,
        i1,
        i2,
        d,
        j,
        tau,
        omega,
        tw0,
        tw1,
        w0,
        w1,
        sigma: 0.0,
        p0: f0 + r0,
        p1: f0 + r1,
        value: f0 + (w0 * r0 + w1 * r1),
    }
}

/// Right-biased OWENO3 reconstruction at x_{1/2}.
#[inline]
pub fn reconstruct_oweno3(window: &StencilWindow, eps: Epsilon, mode: ReconstructionMode) -> f64 {
    oweno3_weights(window, eps, mode).value
}

fn weno3_diagnostics(
    fm1: f64,
    f0: f64,
    f1: f64,
    eps: Epsilon,
    mode: ReconstructionMode,
    yc: bool,
) -> WeightDiagnostics {
    let e = eps.value();
    let (c0, c1) = mode.ideal_weights();
    let d0 = f0 - fm1;
    let d1 = f1 - f0;
    let i0 = d0 * d0;
    let i1 = d1 * d1;

    let sigma = if yc {
        let s = d1 - d0;
        s * s
    } else {
        0.0
    };
    // Alpha exponent p = 1: sufficient for second order at discontinuities.
    let (a0, a1) = if yc {
        (c0 * (1.0 + sigma / (i0 + e)), c1 * (1.0 + sigma / (i1 + e)))
    } else {
        (c0 / (i0 + e), c1 / (i1 + e))
    };
    let w0 = a0 / (a0 + a1);
    let w1 = a1 / (a0 + a1);

    let (r0, r1) = candidate_offsets(fm1, f0, f1);
    WeightDiagnostics {
        i0,
        i1,
        i2: 0.0,
        d: 0.0,
        j: 0.0,
        tau: 0.0,
        omega: 0.0,
        tw0: w0,
        tw1: w1,
        w0,
        w1,
        sigma,
        p0: f0 + r0,
        p1: f0 + r1,
        value: f0 + (w0 * r0 + w1 * r1),
    }
}

pub fn jsweno3_weights(fm1: f64, f0: f64, f1: f64, eps: Epsilon, mode: ReconstructionMode) -> WeightDiagnostics {
    weno3_diagnostics(fm1, f0, f1, eps, mode, false)
}

pub fn ycweno3_weights(fm1: f64, f0: f64, f1: f64, eps: Epsilon, mode: ReconstructionMode) -> WeightDiagnostics {
    weno3_diagnostics(fm1, f0, f1, eps, mode, true)
}

/// Right-biased Jiang-Shu third-order reconstruction at x_{1/2}.
#[inline]
pub fn reconstruct_jsweno3(fm1: f64, f0: f64, f1: f64, eps: Epsilon, mode: ReconstructionMode) -> f64 {
    jsweno3_weights(fm1, f0, f1, eps, mode).value
}

/// Right-biased Yamaleev-Carpenter third-order reconstruction at x_{1/2}.
#[inline]
pub fn reconstruct_ycweno3(fm1: f64, f0: f64, f1: f64, eps: Epsilon, mode: ReconstructionMode) -> f64 {
    ycweno3_weights(fm1, f0, f1, eps, mode).value
}

/// Intermediates of the fifth-order kernel (three-substencil structure).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weno5Diagnostics {
    pub beta: [f64; 3],
    pub w: [f64; 3],
    pub q: [f64; 3],
    pub value: f64,
}

/// Jiang-Shu fifth-order weights and reconstruction at x_{1/2} from the
/// window (f_{-2}, f_{-1}, f_0, f_1, f_2).
pub fn jsweno5_weights(values: &[f64; 5], eps: Epsilon, mode: ReconstructionMode) -> Weno5Diagnostics {
    let [fm2, fm1, f0, f1, f2] = *values;
    let e = eps.value();
    let ideal = mode.weno5_ideal_weights();

    // Everything is built from first differences so that constant data is
    // reproduced exactly.
    let d1 = fm1 - fm2;
    let d2 = f0 - fm1;
    let d3 = f1 - f0;
    let d4 = f2 - f1;

    let b0 = {
        let a = d2 - d1;
        let b = 3.0 * d2 - d1;
        13.0 / 12.0 * a * a + 0.25 * b * b
    };
    let b1 = {
        let a = d3 - d2;
        let b = d2 + d3;
        13.0 / 12.0 * a * a + 0.25 * b * b
    };
    let b2 = {
        let a = d4 - d3;
        let b = d4 - 3.0 * d3;
        13.0 / 12.0 * a * a + 0.25 * b * b
    };

    // Candidate values relative to f0.
    let r = match mode {
        ReconstructionMode::CellAverages => [
            (5.0 * d2 - 2.0 * d1) / 6.0,
            (d2 + 2.0 * d3) / 6.0,
            (4.0 * d3 - d4) / 6.0,
        ],
        ReconstructionMode::PointValues => [
            (7.0 * d2 - 3.0 * d1) / 8.0,
            (d2 + 3.0 * d3) / 8.0,
            (5.0 * d3 - d4) / 8.0,
        ],
    };

    // Same p = 1 convention as the third-order kernels.
    let a0 = ideal[0] / (b0 + e);
    let a1 = ideal[1] / (b1 + e);
    let a2 = ideal[2] / (b2 + e);
    let asum = a0 + a1 + a2;
    let w = [a0 / asum, a1 / asum, a2 / asum];

    Weno5Diagnostics {
        beta: [b0, b1, b2],
        w,
        q: [f0 + r[0], f0 + r[1], f0 + r[2]],
        value: f0 + (w[0] * r[0] + w[1] * r[1] + w[2] * r[2]),
    }
}

/// Right-biased Jiang-Shu fifth-order reconstruction at x_{1/2}.
#[inline]
pub fn reconstruct_jsweno5(values: &[f64; 5], eps: Epsilon, mode: ReconstructionMode) -> f64 {
    jsweno5_weights(values, eps, mode).value
}

fn check_width(kernel: KernelKind, len: usize) -> Result<(), KernelError> {
    let expected = kernel.stencil_width();
    if len == expected {
        Ok(())
    } else {
        Err(KernelError::InvalidStencilWidth { kernel, expected, got: len })
    }
}

/// Right-biased reconstruction at x_{1/2}; the window is the kernel's full
/// stencil ordered left to right.
pub fn reconstruct_right(
    kernel: KernelKind,
    window: &[f64],
    eps: Epsilon,
    mode: ReconstructionMode,
) -> Result<f64, KernelError> {
    check_width(kernel, window.len())?;
    Ok(match kernel {
        KernelKind::JsWeno3 => reconstruct_jsweno3(window[0], window[1], window[2], eps, mode),
        KernelKind::YcWeno3 => reconstruct_ycweno3(window[0], window[1], window[2], eps, mode),
        KernelKind::Oweno3 => reconstruct_oweno3(
            &StencilWindow([window[0], window[1], window[2], window[3]]),
            eps,
            mode,
        ),
        KernelKind::JsWeno5 => reconstruct_jsweno5(
            &[window[0], window[1], window[2], window[3], window[4]],
            eps,
            mode,
        ),
    })
}

/// Left-biased reconstruction: the right-biased kernel applied to the
/// reversed window.
pub fn reconstruct_left(
    kernel: KernelKind,
    window: &[f64],
    eps: Epsilon,
    mode: ReconstructionMode,
) -> Result<f64, KernelError> {
    check_width(kernel, window.len())?;
    let mut rev = [0.0; 5];
    let n = window.len();
    for (k, v) in window.iter().enumerate() {
        rev[n - 1 - k] = *v;
    }
    reconstruct_right(kernel, &rev[..n], eps, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: Epsilon = Epsilon::DEFAULT;

    #[test]
    fn candidates_on_reference_data() {
        for c in [0.0, 1.0, -3.5, 1e6] {
            assert_eq!(candidate_values(c, c, c), (c, c));
        }
        assert_eq!(candidate_values(1.0, 1.0, 9.0), (1.0, 5.0));
        assert_eq!(candidate_values(0.0, 1.0, 2.0), (1.5, 1.5));
    }

    #[test]
    fn indicators_on_reference_data() {
        let w = StencilWindow([2.0, 2.0, 2.0, 2.0]);
        assert_eq!(smoothness_indicators(&w), (0.0, 0.0, 0.0));
        let w = StencilWindow([1.0, 1.0, 9.0, 9.0]);
        assert_eq!(smoothness_indicators(&w), (0.0, 64.0, 0.0));
        // f(x) = 4x^2 sampled on (-h/2, h/2, 3h/2, 5h/2). Power-of-two h keeps
        // every intermediate exact.
        for h in [1.0, 0.5, 0.0009765625] {
            let h2 = h * h;
            let w = StencilWindow([h2, h2, 9.0 * h2, 25.0 * h2]);
            let (i0, i1, i2) = smoothness_indicators(&w);
            assert_eq!(i0, 0.0);
            assert_eq!(i1, 64.0 * h2 * h2);
            assert_eq!(i2, 256.0 * h2 * h2);
        }
    }

    #[test]
    fn oweno3_weights_constant_window() {
        let d = oweno3_weights(&StencilWindow([3.0; 4]), EPS, ReconstructionMode::PointValues);
        assert_eq!(d.omega, 0.0);
        assert_eq!(d.tw0, 0.5);
        assert_eq!(d.tw1, 0.5);
        assert_eq!(d.w0, 0.5);
        assert_eq!(d.w1, 0.5);
        assert_eq!(d.value, 3.0);
    }

    #[test]
    fn oweno3_weights_step_window() {
        // I = (0, 64, 0) so J = 0 and the corrector vanishes; the auxiliary
        // weights select the flat upwind candidate p0 = 1.
        let d = oweno3_weights(&StencilWindow([1.0, 1.0, 9.0, 9.0]), EPS, ReconstructionMode::CellAverages);
        assert_eq!(d.j, 0.0);
        assert_eq!(d.d, 256.0);
        assert_eq!(d.tau, 256.0 * 64.0);
        assert!(d.omega < 1e-15);
        assert!((d.w0 - 1.0).abs() <= 1e-15);
        assert!(d.w1 <= 1e-15);
        assert!((d.value - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn oweno3_weights_smooth_window_near_ideal() {
        // Proposition-level check: on smooth data the corrected weights sit
        // within O(h^4) of the ideal pair.
        let h = 1e-2;
        let f = |x: f64| x.exp();
        let w = StencilWindow([f(-h / 2.0), f(h / 2.0), f(3.0 * h / 2.0), f(5.0 * h / 2.0)]);
        let d = oweno3_weights(&w, EPS, ReconstructionMode::PointValues);
        assert!((d.w0 - 0.25).abs() <= 1e-6, "w0 = {}", d.w0);
        assert!((d.w1 - 0.75).abs() <= 1e-6, "w1 = {}", d.w1);
    }

    #[test]
    fn oweno3_reconstruction_reference_values() {
        for c in [0.0, 1.0, -7.25] {
            let v = reconstruct_oweno3(&StencilWindow([c; 4]), EPS, ReconstructionMode::CellAverages);
            assert_eq!(v, c);
        }
        let v = reconstruct_oweno3(&StencilWindow([1.0, 1.0, 9.0, 9.0]), EPS, ReconstructionMode::CellAverages);
        assert!((v - 1.0).abs() <= 1e-14);
        // I0 = I2 = 0, I1 = 1: J = 0, auxiliary weights pick p0 = 0.
        let v = reconstruct_oweno3(&StencilWindow([0.0, 0.0, 1.0, 1.0]), EPS, ReconstructionMode::CellAverages);
        assert!(v.abs() <= 1e-14);
    }

    #[test]
    fn classical_kernels_consistency() {
        // Exact reproduction of constants, including awkward mantissas.
        for c in [0.0, 2.0, -11.5, 1.0 / 3.0, 0.1, 2.0_f64.sqrt() * 1e8] {
            for mode in [ReconstructionMode::PointValues, ReconstructionMode::CellAverages] {
                assert_eq!(reconstruct_jsweno3(c, c, c, EPS, mode), c);
                assert_eq!(reconstruct_ycweno3(c, c, c, EPS, mode), c);
                assert_eq!(reconstruct_oweno3(&StencilWindow([c; 4]), EPS, mode), c);
                assert_eq!(reconstruct_jsweno5(&[c; 5], EPS, mode), c);
            }
        }
    }

    #[test]
    fn jsweno5_step_keeps_smooth_substencil() {
        let v = reconstruct_jsweno5(&[0.0, 0.0, 0.0, 1.0, 1.0], EPS, ReconstructionMode::CellAverages);
        assert!(v.abs() <= 1e-12, "value = {v}");
    }

    #[test]
    fn jsweno5_refinement_is_fifth_order() {
        // Reconstruction error on exp(x) must shrink by >= 2^4.5 per halving.
        let f = |x: f64| x.exp();
        let err = |h: f64| {
            let vals = [
                f(-2.5 * h),
                f(-1.5 * h),
                f(-0.5 * h),
                f(0.5 * h),
                f(1.5 * h),
            ];
            (reconstruct_jsweno5(&vals, EPS, ReconstructionMode::PointValues) - f(0.0)).abs()
        };
        let mut h = 0.1;
        for _ in 0..4 {
            let ratio = err(h) / err(h / 2.0);
            assert!(ratio >= 2f64.powf(4.5), "ratio {ratio} at h = {h}");
            h /= 2.0;
        }
    }

    #[test]
    fn left_bias_is_reversed_right_bias() {
        let eps = EPS;
        let mode = ReconstructionMode::CellAverages;
        let v = reconstruct_left(KernelKind::Oweno3, &[9.0, 9.0, 1.0, 1.0], eps, mode).unwrap();
        assert!((v - 1.0).abs() <= 1e-14);

        let windows: [&[f64]; 4] = [
            &[1.0, 2.0, 0.5],
            &[1.0, 2.0, 0.5],
            &[1.0, 2.0, 0.5, 3.0],
            &[1.0, 2.0, 0.5, 3.0, -1.0],
        ];
        for (kernel, w) in KernelKind::ALL.iter().zip(windows) {
            let rev: Vec<f64> = w.iter().rev().copied().collect();
            let left = reconstruct_left(*kernel, w, eps, mode).unwrap();
            let right = reconstruct_right(*kernel, &rev, eps, mode).unwrap();
            assert_eq!(left, right, "kernel {kernel}");
        }
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let r = reconstruct_right(KernelKind::Oweno3, &[1.0, 2.0, 3.0], EPS, ReconstructionMode::PointValues);
        assert_eq!(
            r,
            Err(KernelError::InvalidStencilWidth { kernel: KernelKind::Oweno3, expected: 4, got: 3 })
        );
        assert!(reconstruct_left(KernelKind::JsWeno5, &[0.0; 4], EPS, ReconstructionMode::PointValues).is_err());
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(-1e-10).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
        assert_eq!(Epsilon::new(1e-100).unwrap().value(), 1e-100);
    }

    #[test]
    fn ideal_weights_sum_to_one_exactly() {
        for mode in [ReconstructionMode::PointValues, ReconstructionMode::CellAverages] {
            let (c0, c1) = mode.ideal_weights();
            assert_eq!(c0 + c1, 1.0);
            let w5 = mode.weno5_ideal_weights();
            assert!((w5[0] + w5[1] + w5[2] - 1.0).abs() < 1e-15);
        }
    }
}

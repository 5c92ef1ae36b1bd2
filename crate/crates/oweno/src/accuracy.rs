//! Algebraic accuracy experiments: refinement ladders over reference function
//! families with smooth extrema and with jumps, reconstruction errors at the
//! interface point, and the resulting average-order table per kernel and mode.

use std::fmt;

use crate::kernels::{reconstruct_right, Epsilon, KernelKind, ReconstructionMode};

/// Reference functions of the accuracy lab.
///
/// `SmoothFk` is x^{k+1} e^x, smooth with an extremum of order k at 0.
/// `DiscGk` is x^{2k} e^x for x <= 0 and e^{x+1} for x > 0, jumping at 0 with
/// a smooth left extremum of order k. Only k in {0, 1} is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    SmoothFk { k: u8 },
    DiscGk { k: u8 },
}

impl TestFunction {
    pub fn value(self, x: f64) -> f64 {
        match self {
            TestFunction::SmoothFk { k: 0 } => x * x.exp(),
            TestFunction::SmoothFk { k: 1 } => x * x * x.exp(),
            TestFunction::DiscGk { k: 0 } => {
                if x <= 0.0 {
                    x.exp()
                } else {
                    (x + 1.0).exp()
                }
            }
            TestFunction::DiscGk { k: 1 } => {
                if x <= 0.0 {
                    x * x * x.exp()
                } else {
                    (x + 1.0).exp()
                }
            }
            _ => panic!("extremum order k must be 0 or 1"),
        }
    }

    /// Closed-form antiderivative, continuous across the jump of g_k, used for
    /// exact cell averaging.
    pub fn antiderivative(self, x: f64) -> f64 {
        match self {
            TestFunction::SmoothFk { k: 0 } => (x - 1.0) * x.exp(),
            TestFunction::SmoothFk { k: 1 } => (x * x - 2.0 * x + 2.0) * x.exp(),
            TestFunction::DiscGk { k: 0 } => {
                if x <= 0.0 {
                    x.exp() - 1.0
                } else {
                    (x + 1.0).exp() - std::f64::consts::E
                }
            }
            TestFunction::DiscGk { k: 1 } => {
                if x <= 0.0 {
                    (x * x - 2.0 * x + 2.0) * x.exp() - 2.0
                } else {
                    (x + 1.0).exp() - std::f64::consts::E
                }
            }
            _ => panic!("extremum order k must be 0 or 1"),
        }
    }

    pub fn k(self) -> u8 {
        match self {
            TestFunction::SmoothFk { k } | TestFunction::DiscGk { k } => k,
        }
    }

    pub fn is_discontinuous(self) -> bool {
        matches!(self, TestFunction::DiscGk { .. })
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::SmoothFk { k } => write!(f, "f{k}"),
            TestFunction::DiscGk { k } => write!(f, "g{k}"),
        }
    }
}

/// Refinement ladder: levels j = 0..=j_max with n_j = 5 * 2^j and h = 1/n_j.
#[derive(Clone, Copy, Debug)]
pub struct LadderConfig {
    pub j_max: usize,
    /// Grid shift: reconstruction point sits at x = theta * h.
    pub theta: u8,
    pub mode: ReconstructionMode,
    pub eps: Epsilon,
}

impl LadderConfig {
    pub fn new(j_max: usize, theta: u8, mode: ReconstructionMode, eps: Epsilon) -> Self {
        assert!(j_max >= 1, "a ladder needs at least two levels");
        assert!(theta <= 1);
        LadderConfig { j_max, theta, mode, eps }
    }

    pub fn level_n(&self, j: usize) -> usize {
        5 << j
    }
}

/// Errors per ladder level, the per-level orders, and their mean.
#[derive(Clone, Debug)]
pub struct OrderReport {
    pub errors: Vec<f64>,
    /// log2 ratio of consecutive errors; None where a level was excluded.
    pub orders: Vec<Option<f64>>,
    pub average_order: f64,
    pub levels_used: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccuracyError {
    /// Every error ratio fell below the round-off floor; no order estimate.
    AllLevelsDegenerate,
}

impl fmt::Display for AccuracyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccuracyError::AllLevelsDegenerate => {
                write!(f, "all ladder levels were below the round-off floor")
            }
        }
    }
}

impl std::error::Error for AccuracyError {}

/// Samples the kernel's window on the grid x_i = (i - 1/2 + theta) h, either
/// pointwise or as exact cell means over [x_i - h/2, x_i + h/2].
pub fn sample_window(
    func: TestFunction,
    h: f64,
    theta: u8,
    mode: ReconstructionMode,
    width: usize,
) -> Vec<f64> {
    assert!(h > 0.0);
    // Index range: the interface x_{1/2} lies between i = 0 and i = 1.
    let i_lo: i64 = match width {
        3 | 4 => -1,
        5 => -2,
        _ => panic!("unsupported window width {width}"),
    };
    (i_lo..i_lo + width as i64)
        .map(|i| {
            let x = (i as f64 - 0.5 + theta as f64) * h;
            match mode {
                ReconstructionMode::PointValues => func.value(x),
                ReconstructionMode::CellAverages => {
                    (func.antiderivative(x + 0.5 * h) - func.antiderivative(x - 0.5 * h)) / h
                }
            }
        })
        .collect()
}

/// |reconstruction at x_{1/2} - func(x_{1/2})| with x_{1/2} = theta * h.
pub fn single_error(
    kernel: KernelKind,
    func: TestFunction,
    h: f64,
    theta: u8,
    mode: ReconstructionMode,
    eps: Epsilon,
) -> f64 {
    let window = sample_window(func, h, theta, mode, kernel.stencil_width());
    let recon = reconstruct_right(kernel, &window, eps, mode).expect("window width matches kernel");
    (recon - func.value(theta as f64 * h)).abs()
}

// Round-off floor: levels whose error is indistinguishable from double
// precision noise of the sampled data are excluded from the order mean.
fn rounding_floor(func: TestFunction, h: f64, theta: u8, mode: ReconstructionMode, width: usize) -> f64 {
    let window = sample_window(func, h, theta, mode, width);
    let scale = window
        .iter()
        .map(|v| v.abs())
        .fold(func.value(theta as f64 * h).abs(), f64::max);
    100.0 * f64::EPSILON * scale
}

/// Coarsest spacing admitted into the order mean. The short double-precision
/// ladder has no depth to drown the pre-asymptotic transient of the two
/// coarsest levels the way a long ladder does, so the mean is taken over the
/// asymptotic window only.
pub const ASYMPTOTIC_H: f64 = 0.1;

/// Runs the full ladder and averages the per-level orders.
pub fn average_order(
    kernel: KernelKind,
    func: TestFunction,
    ladder: &LadderConfig,
) -> Result<OrderReport, AccuracyError> {
    let levels = ladder.j_max + 1;
    let mut errors = Vec::with_capacity(levels);
    let mut usable = Vec::with_capacity(levels);
    for j in 0..levels {
        let h = 1.0 / ladder.level_n(j) as f64;
        let err = single_error(kernel, func, h, ladder.theta, ladder.mode, ladder.eps);
        let floor = rounding_floor(func, h, ladder.theta, ladder.mode, kernel.stencil_width());
        errors.push(err);
        usable.push(h < ASYMPTOTIC_H && err > floor);
    }

    let mut orders: Vec<Option<f64>> = Vec::with_capacity(ladder.j_max);
    let mut sum = 0.0;
    let mut used = 0usize;
    for j in 1..levels {
        if usable[j - 1] && usable[j] && errors[j - 1] > 0.0 && errors[j] > 0.0 {
            let o = (errors[j - 1] / errors[j]).log2();
            orders.push(Some(o));
            sum += o;
            used += 1;
        } else {
            orders.push(None);
        }
    }
    if used == 0 {
        return Err(AccuracyError::AllLevelsDegenerate);
    }
    Ok(OrderReport {
        errors,
        orders,
        average_order: sum / used as f64,
        levels_used: used,
    })
}

/// One cell of the accuracy table.
#[derive(Clone, Debug)]
pub struct TableCell {
    pub scheme: KernelKind,
    pub mode: ReconstructionMode,
    pub func: TestFunction,
    /// None for the smooth family, whose grid is not shifted.
    pub theta: Option<u8>,
    pub report: Result<OrderReport, AccuracyError>,
}

/// The third-order schemes in table order.
pub const TABLE_KERNELS: [KernelKind; 3] =
    [KernelKind::JsWeno3, KernelKind::YcWeno3, KernelKind::Oweno3];

/// Evaluates the (scheme x mode x function x theta) grid. Rows follow the
/// fixed (scheme, mode, function, theta, k) sort key.
pub fn order_table(kernels: &[KernelKind], j_max: usize, eps: Epsilon) -> Vec<TableCell> {
    let mut cells = Vec::new();
    for &scheme in kernels {
        for mode in [ReconstructionMode::PointValues, ReconstructionMode::CellAverages] {
            for k in 0..=1u8 {
                let func = TestFunction::SmoothFk { k };
                let ladder = LadderConfig::new(j_max, 0, mode, eps);
                cells.push(TableCell {
                    scheme,
                    mode,
                    func,
                    theta: None,
                    report: average_order(scheme, func, &ladder),
                });
            }
            for theta in 0..=1u8 {
                for k in 0..=1u8 {
                    let func = TestFunction::DiscGk { k };
                    let ladder = LadderConfig::new(j_max, theta, mode, eps);
                    cells.push(TableCell {
                        scheme,
                        mode,
                        func,
                        theta: Some(theta),
                        report: average_order(scheme, func, &ladder),
                    });
                }
            }
        }
    }
    cells
}

/// Formats a number with the given count of significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes the table as CSV with the fixed header. Degenerate cells produce
/// empty order entries.
pub fn write_order_table_csv(cells: &[TableCell], out: &mut dyn std::io::Write) -> std::io::Result<()> {
    writeln!(out, "scheme,mode,function,k,theta,avg_order,levels_used")?;
    for cell in cells {
        let theta = cell.theta.map(|t| t.to_string()).unwrap_or_default();
        match &cell.report {
            Ok(report) => writeln!(
                out,
                "{},{},{},{},{},{},{}",
                cell.scheme,
                cell.mode,
                cell.func,
                cell.func.k(),
                theta,
                fmt_sig(report.average_order, 6),
                report.levels_used
            )?,
            Err(_) => writeln!(
                out,
                "{},{},{},{},{},,0",
                cell.scheme,
                cell.mode,
                cell.func,
                cell.func.k(),
                theta
            )?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: Epsilon = Epsilon::DEFAULT;
    const POINT: ReconstructionMode = ReconstructionMode::PointValues;
    const CELL: ReconstructionMode = ReconstructionMode::CellAverages;

    // Composite Simpson rule on a smooth piece, refined until stable; the
    // independent oracle for the closed-form antiderivatives.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let mut prev = f64::NAN;
        let mut n = 8;
        loop {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let x = a + i as f64 * h;
                s += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let val = s * h / 3.0;
            if (val - prev).abs() <= 1e-13 * (1.0 + val.abs()) || n > 1 << 20 {
                return val;
            }
            prev = val;
            n *= 2;
        }
    }

    fn cell_average_quadrature(func: TestFunction, lo: f64, hi: f64) -> f64 {
        // Pieces right of the jump must take the x > 0 branch at their left
        // endpoint, hence the nudge off zero.
        let right = |x: f64| func.value(x.max(f64::MIN_POSITIVE));
        let integral = if func.is_discontinuous() && hi > 0.0 && lo <= 0.0 {
            simpson(|x| func.value(x), lo, 0.0) + simpson(right, 0.0, hi)
        } else if func.is_discontinuous() && lo >= 0.0 {
            simpson(right, lo, hi)
        } else {
            simpson(|x| func.value(x), lo, hi)
        };
        integral / (hi - lo)
    }

    #[test]
    fn window_sampling_point_values() {
        // Width 4 samples i in {-1..2} of x_i = (i - 1/2 + theta) h, so the
        // interface x_{1/2} sits at theta * h.
        let f0 = TestFunction::SmoothFk { k: 0 };
        let w = sample_window(f0, 1.0, 0, POINT, 4);
        let expected = [-1.5, -0.5, 0.5, 1.5].map(|x: f64| x * x.exp());
        assert_eq!(w.as_slice(), expected.as_slice());

        // g0 at theta = 0, h = 1 straddles the jump between f_0 and f_1.
        let g0 = TestFunction::DiscGk { k: 0 };
        let w = sample_window(g0, 1.0, 0, POINT, 4);
        assert_eq!(w[0], (-1.5f64).exp());
        assert_eq!(w[1], (-0.5f64).exp());
        assert_eq!(w[2], 1.5f64.exp());
        assert_eq!(w[3], 2.5f64.exp());

        // Width 5 extends one further upwind; theta shifts the whole grid.
        let w = sample_window(f0, 0.5, 1, POINT, 5);
        for (a, i) in w.iter().zip(-2i32..3) {
            let x = (i as f64 + 0.5) * 0.5;
            assert_eq!(*a, x * x.exp());
        }
    }

    #[test]
    fn cell_averages_match_quadrature() {
        for func in [
            TestFunction::SmoothFk { k: 0 },
            TestFunction::SmoothFk { k: 1 },
            TestFunction::DiscGk { k: 0 },
            TestFunction::DiscGk { k: 1 },
        ] {
            for (h, theta) in [(0.5, 0u8), (0.25, 1u8)] {
                let w = sample_window(func, h, theta, CELL, 4);
                for (idx, i) in (-1i64..3).enumerate() {
                    let x = (i as f64 - 0.5 + theta as f64) * h;
                    let q = cell_average_quadrature(func, x - 0.5 * h, x + 0.5 * h);
                    assert!(
                        (w[idx] - q).abs() <= 1e-11 * (1.0 + q.abs()),
                        "{func} h={h} i={i}: {} vs {}",
                        w[idx],
                        q
                    );
                }
            }
        }
    }

    #[test]
    fn error_vanishes_when_exact() {
        // Linear data: both candidates and hence every convex combination hit
        // the midpoint value; f0 is not linear, so use the window of g0 deep
        // in its right branch where the reconstruction is merely very good,
        // and check the trivial case through a constant-like proxy instead:
        // theta*h target equals reconstruction for h -> exact linear samples.
        let f1 = TestFunction::SmoothFk { k: 1 };
        let e_coarse = single_error(KernelKind::Oweno3, f1, 0.05, 0, POINT, EPS);
        let e_fine = single_error(KernelKind::Oweno3, f1, 0.025, 0, POINT, EPS);
        // Theorem-level refinement bound: ratio at least 2^2.7 per halving.
        assert!(
            e_coarse / e_fine >= 2f64.powf(2.7),
            "ratio {}",
            e_coarse / e_fine
        );

        // Classical kernel loses one order at the first-order extremum.
        let e_coarse = single_error(KernelKind::JsWeno3, f1, 0.05, 0, POINT, EPS);
        let e_fine = single_error(KernelKind::JsWeno3, f1, 0.025, 0, POINT, EPS);
        let ratio = (e_coarse / e_fine).log2();
        assert!((ratio - 2.0).abs() < 0.35, "observed order {ratio}");
    }

    #[test]
    fn average_orders_match_reference_table() {
        // Frozen reference values for the j_max = 8 double-precision ladder.
        let cases = [
            (KernelKind::Oweno3, TestFunction::SmoothFk { k: 1 }, 0u8, POINT, 3.01),
            (KernelKind::JsWeno3, TestFunction::DiscGk { k: 0 }, 0u8, POINT, 1.97),
            (KernelKind::Oweno3, TestFunction::DiscGk { k: 1 }, 1u8, POINT, 2.00),
            (KernelKind::JsWeno3, TestFunction::SmoothFk { k: 1 }, 0u8, CELL, 2.00),
            (KernelKind::YcWeno3, TestFunction::SmoothFk { k: 0 }, 0u8, POINT, 2.98),
        ];
        for (kernel, func, theta, mode, expected) in cases {
            let ladder = LadderConfig::new(8, theta, mode, EPS);
            let report = average_order(kernel, func, &ladder).unwrap();
            assert!(
                (report.average_order - expected).abs() <= 0.15,
                "{kernel} {func} theta={theta} {mode}: got {}, expected {expected}",
                report.average_order
            );
        }
    }

    #[test]
    fn smooth_ladders_strictly_decrease() {
        for kernel in TABLE_KERNELS {
            for mode in [POINT, CELL] {
                for k in 0..=1u8 {
                    let ladder = LadderConfig::new(8, 0, mode, EPS);
                    let report = average_order(kernel, TestFunction::SmoothFk { k }, &ladder).unwrap();
                    // Asymptotic regime starts below h = 0.1, i.e. level 2.
                    for j in 2..report.errors.len() - 1 {
                        assert!(
                            report.errors[j + 1] < report.errors[j],
                            "{kernel} {mode} f{k} level {j}: {} !< {}",
                            report.errors[j + 1],
                            report.errors[j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cell_and_point_orders_agree() {
        for kernel in TABLE_KERNELS {
            for k in 0..=1u8 {
                let func = TestFunction::SmoothFk { k };
                let point = average_order(kernel, func, &LadderConfig::new(8, 0, POINT, EPS)).unwrap();
                let cell = average_order(kernel, func, &LadderConfig::new(8, 0, CELL, EPS)).unwrap();
                assert!(
                    (point.average_order - cell.average_order).abs() <= 0.05,
                    "{kernel} f{k}: point {} vs cell {}",
                    point.average_order,
                    cell.average_order
                );
            }
        }
    }

    #[test]
    fn table_has_fixed_shape_and_is_deterministic() {
        let cells = order_table(&TABLE_KERNELS, 3, EPS);
        assert_eq!(cells.len(), 3 * 2 * 6);
        let mut a = Vec::new();
        write_order_table_csv(&cells, &mut a).unwrap();
        let cells2 = order_table(&TABLE_KERNELS, 3, EPS);
        let mut b = Vec::new();
        write_order_table_csv(&cells2, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("scheme,mode,function,k,theta,avg_order,levels_used\n"));
        // Single-kernel table is a sub-table of the full one.
        let sub = order_table(&[KernelKind::Oweno3], 3, EPS);
        let mut s = Vec::new();
        write_order_table_csv(&sub, &mut s).unwrap();
        let s = String::from_utf8(s).unwrap();
        for line in s.lines().skip(1) {
            assert!(text.contains(line), "missing row {line}");
        }
    }

    #[test]
    fn ladder_invariants() {
        // Smooth family: the four-point kernel holds third order at both
        // extremum orders; the classical kernels lose one at k = 1. Jump
        // family: every kernel sits at second order.
        for mode in [POINT, CELL] {
            for k in 0..=1u8 {
                let ladder = LadderConfig::new(8, 0, mode, EPS);
                let ow = average_order(KernelKind::Oweno3, TestFunction::SmoothFk { k }, &ladder)
                    .unwrap()
                    .average_order;
                assert!(ow >= 2.9, "OWENO3 f{k} {mode}: {ow}");
            }
            for kernel in [KernelKind::JsWeno3, KernelKind::YcWeno3] {
                let ladder = LadderConfig::new(8, 0, mode, EPS);
                let o = average_order(kernel, TestFunction::SmoothFk { k: 1 }, &ladder)
                    .unwrap()
                    .average_order;
                assert!(o <= 2.2, "{kernel} f1 {mode}: {o}");
            }
            for kernel in TABLE_KERNELS {
                for theta in 0..=1u8 {
                    for k in 0..=1u8 {
                        let ladder = LadderConfig::new(8, theta, mode, EPS);
                        let o = average_order(kernel, TestFunction::DiscGk { k }, &ladder)
                            .unwrap()
                            .average_order;
                        assert!((1.8..=2.2).contains(&o), "{kernel} g{k} theta={theta} {mode}: {o}");
                    }
                }
            }
        }
    }

    #[test]
    fn tiny_ladders_are_degenerate() {
        // With j_max = 2 no level pair lies inside the asymptotic window.
        let ladder = LadderConfig::new(2, 0, POINT, EPS);
        let r = average_order(KernelKind::Oweno3, TestFunction::SmoothFk { k: 0 }, &ladder);
        assert_eq!(r.err(), Some(AccuracyError::AllLevelsDegenerate));
    }

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(3.0055501, 6), "3.00555");
        assert_eq!(fmt_sig(0.0123456, 3), "0.0123");
        assert_eq!(fmt_sig(0.0, 6), "0");
    }
}

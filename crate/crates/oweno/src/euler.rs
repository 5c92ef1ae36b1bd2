//! Compressible Euler physics in one and two space dimensions: conserved
//! states, ideal-gas equation of state, analytic fluxes, and the
//! characteristic eigen-structure per coordinate direction.

use std::fmt;

/// Ideal-gas equation of state, p = (gamma - 1)(E - rho |v|^2 / 2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eos {
    pub gamma: f64,
}

impl Eos {
    pub fn new(gamma: f64) -> Self {
        assert!(gamma > 1.0 && gamma <= 3.0);
        Eos { gamma }
    }
}

impl Default for Eos {
    fn default() -> Self {
        Eos { gamma: 1.4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EulerError {
    /// Nonpositive density or pressure; the offending cell when known.
    InvalidState { rho: f64, pressure: f64, cell: Option<(usize, usize)> },
    NonHyperbolicState { rho: f64, pressure: f64 },
}

impl fmt::Display for EulerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerError::InvalidState { rho, pressure, cell } => match cell {
                Some((i, j)) => write!(f, "invalid state at cell ({i}, {j}): rho = {rho}, p = {pressure}"),
                None => write!(f, "invalid state: rho = {rho}, p = {pressure}"),
            },
            EulerError::NonHyperbolicState { rho, pressure } => {
                write!(f, "eigen-decomposition failed: rho = {rho}, p = {pressure}")
            }
        }
    }
}

impl std::error::Error for EulerError {}

/// Coordinate direction for fluxes and eigen-frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Conserved 1D state (rho, rho v, E).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerState1D {
    pub rho: f64,
    pub mom: f64,
    pub energy: f64,
}

impl EulerState1D {
    pub fn from_primitives(rho: f64, v: f64, p: f64, eos: Eos) -> Self {
        EulerState1D {
            rho,
            mom: rho * v,
            energy: p / (eos.gamma - 1.0) + 0.5 * rho * v * v,
        }
    }

    pub fn velocity(&self) -> f64 {
        self.mom / self.rho
    }

    pub fn pressure(&self, eos: Eos) -> Result<f64, EulerError> {
        let p = (eos.gamma - 1.0) * (self.energy - 0.5 * self.mom * self.mom / self.rho);
        if self.rho > 0.0 && p > 0.0 {
            Ok(p)
        } else {
            Err(EulerError::InvalidState { rho: self.rho, pressure: p, cell: None })
        }
    }

    pub fn sound_speed(&self, eos: Eos) -> Result<f64, EulerError> {
        Ok((eos.gamma * self.pressure(eos)? / self.rho).sqrt())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rho, self.mom, self.energy]
    }

    pub fn from_slice(u: &[f64]) -> Self {
        EulerState1D { rho: u[0], mom: u[1], energy: u[2] }
    }

    /// f(u) = (rho v, p + rho v^2, v (E + p)).
    pub fn flux(&self, eos: Eos) -> Result<[f64; 3], EulerError> {
        let p = self.pressure(eos)?;
        let v = self.velocity();
        Ok([self.mom, p + self.mom * v, v * (self.energy + p)])
    }
}

/// Conserved 2D state (rho, rho v^x, rho v^y, E).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerState2D {
    pub rho: f64,
    pub momx: f64,
    pub momy: f64,
    pub energy: f64,
}

impl EulerState2D {
    pub fn from_primitives(rho: f64, vx: f64, vy: f64, p: f64, eos: Eos) -> Self {
        EulerState2D {
            rho,
            momx: rho * vx,
            momy: rho * vy,
            energy: p / (eos.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy),
        }
    }

    pub fn pressure(&self, eos: Eos) -> Result<f64, EulerError> {
        let q2 = (self.momx * self.momx + self.momy * self.momy) / self.rho;
        let p = (eos.gamma - 1.0) * (self.energy - 0.5 * q2);
        if self.rho > 0.0 && p > 0.0 {
            Ok(p)
        } else {
            Err(EulerError::InvalidState { rho: self.rho, pressure: p, cell: None })
        }
    }

    pub fn sound_speed(&self, eos: Eos) -> Result<f64, EulerError> {
        Ok((eos.gamma * self.pressure(eos)? / self.rho).sqrt())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.rho, self.momx, self.momy, self.energy]
    }

    pub fn from_slice(u: &[f64]) -> Self {
        EulerState2D { rho: u[0], momx: u[1], momy: u[2], energy: u[3] }
    }

    pub fn flux(&self, eos: Eos, dir: Axis) -> Result<[f64; 4], EulerError> {
        let p = self.pressure(eos)?;
        let vx = self.momx / self.rho;
        let vy = self.momy / self.rho;
        Ok(match dir {
            Axis::X => [self.momx, p + self.momx * vx, self.momx * vy, vx * (self.energy + p)],
            Axis::Y => [self.momy, self.momy * vx, p + self.momy * vy, vy * (self.energy + p)],
        })
    }
}

/// Local characteristic frame at an interface: rows of `left` and columns of
/// `right` are the eigenvectors; left * right == identity. Only the leading
/// nu x nu block is meaningful.
#[derive(Clone, Copy, Debug)]
pub struct CharacteristicFrame {
    pub nu: usize,
    pub left: [[f64; 4]; 4],
    pub right: [[f64; 4]; 4],
    pub lambda: [f64; 4],
}

/// Analytic flux of a conserved state slice (length 3 in 1D, 4 in 2D),
/// written into `out[..nu]`.
pub fn analytic_flux(u: &[f64], eos: Eos, dir: Axis, out: &mut [f64; 4]) -> Result<(), EulerError> {
    match u.len() {
        3 => {
            let f = EulerState1D::from_slice(u).flux(eos)?;
            out[..3].copy_from_slice(&f);
            out[3] = 0.0;
        }
        4 => {
            *out = EulerState2D::from_slice(u).flux(eos, dir)?;
        }
        n => panic!("state must have 3 or 4 components, got {n}"),
    }
    Ok(())
}

/// Eigenvalues (v - c, v, [v,] v + c) of the flux Jacobian in `dir`.
pub fn eigenvalues(u: &[f64], eos: Eos, dir: Axis) -> Result<[f64; 4], EulerError> {
    match u.len() {
        3 => {
            let s = EulerState1D::from_slice(u);
            let c = s.sound_speed(eos)?;
            let v = s.velocity();
            Ok([v - c, v, v + c, 0.0])
        }
        4 => {
            let s = EulerState2D::from_slice(u);
            let c = s.sound_speed(eos)?;
            let v = match dir {
                Axis::X => s.momx / s.rho,
                Axis::Y => s.momy / s.rho,
            };
            Ok([v - c, v, v, v + c])
        }
        n => panic!("state must have 3 or 4 components, got {n}"),
    }
}

/// Largest signal speed |v_dir| + c of a state.
pub fn max_signal_speed(u: &[f64], eos: Eos, dir: Axis) -> Result<f64, EulerError> {
    let lam = eigenvalues(u, eos, dir)?;
    let nu = u.len();
    Ok(lam[..nu].iter().fold(0.0f64, |a, l| a.max(l.abs())))
}

/// Analytic flux and eigenvalues of one state in a single pass (the hot path
/// of the flux sweeps; pressure and sound speed are computed once).
pub fn flux_and_eigenvalues(
    u: &[f64],
    eos: Eos,
    dir: Axis,
    flux_out: &mut [f64; 4],
) -> Result<[f64; 4], EulerError> {
    match u.len() {
        3 => {
            let (rho, mom, energy) = (u[0], u[1], u[2]);
            let inv_rho = 1.0 / rho;
            let v = mom * inv_rho;
            let p = (eos.gamma - 1.0) * (energy - 0.5 * mom * v);
            if !(rho > 0.0 && p > 0.0) {
                return Err(EulerError::InvalidState { rho, pressure: p, cell: None });
            }
            let c = (eos.gamma * p * inv_rho).sqrt();
            *flux_out = [mom, p + mom * v, v * (energy + p), 0.0];
            Ok([v - c, v, v + c, 0.0])
        }
        4 => {
            let (rho, momx, momy, energy) = (u[0], u[1], u[2], u[3]);
            let inv_rho = 1.0 / rho;
            let vx = momx * inv_rho;
            let vy = momy * inv_rho;
            let p = (eos.gamma - 1.0) * (energy - 0.5 * (momx * vx + momy * vy));
            if !(rho > 0.0 && p > 0.0) {
                return Err(EulerError::InvalidState { rho, pressure: p, cell: None });
            }
            let c = (eos.gamma * p * inv_rho).sqrt();
            let (fl, vn) = match dir {
                Axis::X => (
                    [momx, p + momx * vx, momx * vy, vx * (energy + p)],
                    vx,
                ),
                Axis::Y => (
                    [momy, momy * vx, p + momy * vy, vy * (energy + p)],
                    vy,
                ),
            };
            *flux_out = fl;
            Ok([vn - c, vn, vn, vn + c])
        }
        n => panic!("state must have 3 or 4 components, got {n}"),
    }
}

fn frame_1d(avg: EulerState1D, eos: Eos) -> Result<CharacteristicFrame, EulerError> {
    let inv_rho = 1.0 / avg.rho;
    let v = avg.mom * inv_rho;
    let p = (eos.gamma - 1.0) * (avg.energy - 0.5 * avg.mom * v);
    if !(avg.rho > 0.0 && p > 0.0) {
        return Err(EulerError::NonHyperbolicState { rho: avg.rho, pressure: p });
    }
    let c = (eos.gamma * p * inv_rho).sqrt();
    let inv_c = 1.0 / c;
    let h = (avg.energy + p) * inv_rho;
    let b1 = (eos.gamma - 1.0) * inv_c * inv_c;
    let b2 = 0.5 * b1 * v * v;

    let mut left = [[0.0; 4]; 4];
    let mut right = [[0.0; 4]; 4];

    right[0] = [1.0, 1.0, 1.0, 0.0];
    right[1] = [v - c, v, v + c, 0.0];
    right[2] = [h - v * c, 0.5 * v * v, h + v * c, 0.0];

    left[0] = [0.5 * (b2 + v * inv_c), -0.5 * (b1 * v + inv_c), 0.5 * b1, 0.0];
    left[1] = [1.0 - b2, b1 * v, -b1, 0.0];
    left[2] = [0.5 * (b2 - v * inv_c), -0.5 * (b1 * v - inv_c), 0.5 * b1, 0.0];

    Ok(CharacteristicFrame { nu: 3, left, right, lambda: [v - c, v, v + c, 0.0] })
}

fn frame_2d(avg: EulerState2D, eos: Eos, dir: Axis) -> Result<CharacteristicFrame, EulerError> {
    let inv_rho = 1.0 / avg.rho;
    let vx = avg.momx * inv_rho;
    let vy = avg.momy * inv_rho;
    let p = (eos.gamma - 1.0) * (avg.energy - 0.5 * (avg.momx * vx + avg.momy * vy));
    if !(avg.rho > 0.0 && p > 0.0) {
        return Err(EulerError::NonHyperbolicState { rho: avg.rho, pressure: p });
    }
    let c = (eos.gamma * p * inv_rho).sqrt();
    let inv_c = 1.0 / c;
    let h = (avg.energy + p) * inv_rho;
    let q2 = vx * vx + vy * vy;
    let b1 = (eos.gamma - 1.0) * inv_c * inv_c;
    let b2 = 0.5 * b1 * q2;

    // vn is the normal velocity, vt the transverse one; the transverse
    // momentum slot depends on the sweep direction.
    let (vn, vt) = match dir {
        Axis::X => (vx, vy),
        Axis::Y => (vy, vx),
    };

    let mut left = [[0.0; 4]; 4];
    let mut right = [[0.0; 4]; 4];

    // Columns: rho, normal momentum, transverse momentum, energy.
    // Fields: vn - c, entropy, transverse shear, vn + c.
    let (mn, mt) = match dir {
        Axis::X => (1usize, 2usize),
        Axis::Y => (2usize, 1usize),
    };

    right[0][0] = 1.0;
    right[mn][0] = vn - c;
    right[mt][0] = vt;
    right[3][0] = h - vn * c;

    right[0][1] = 1.0;
    right[mn][1] = vn;
    right[mt][1] = vt;
    right[3][1] = 0.5 * q2;

    right[0][2] = 0.0;
    right[mn][2] = 0.0;
    right[mt][2] = 1.0;
    right[3][2] = vt;

    right[0][3] = 1.0;
    right[mn][3] = vn + c;
    right[mt][3] = vt;
    right[3][3] = h + vn * c;

    left[0][0] = 0.5 * (b2 + vn * inv_c);
    left[0][mn] = -0.5 * (b1 * vn + inv_c);
    left[0][mt] = -0.5 * b1 * vt;
    left[0][3] = 0.5 * b1;

    left[1][0] = 1.0 - b2;
    left[1][mn] = b1 * vn;
    left[1][mt] = b1 * vt;
    left[1][3] = -b1;

    left[2][0] = -vt;
    left[2][mn] = 0.0;
    left[2][mt] = 1.0;
    left[2][3] = 0.0;

    left[3][0] = 0.5 * (b2 - vn * inv_c);
    left[3][mn] = -0.5 * (b1 * vn - inv_c);
    left[3][mt] = -0.5 * b1 * vt;
    left[3][3] = 0.5 * b1;

    Ok(CharacteristicFrame { nu: 4, left, right, lambda: [vn - c, vn, vn, vn + c] })
}

/// Eigen-frame at the arithmetic average of the two interface states.
pub fn eigen_frame(ul: &[f64], ur: &[f64], eos: Eos, dir: Axis) -> Result<CharacteristicFrame, EulerError> {
    match ul.len() {
        3 => {
            let avg = EulerState1D {
                rho: 0.5 * (ul[0] + ur[0]),
                mom: 0.5 * (ul[1] + ur[1]),
                energy: 0.5 * (ul[2] + ur[2]),
            };
            frame_1d(avg, eos)
        }
        4 => {
            let avg = EulerState2D {
                rho: 0.5 * (ul[0] + ur[0]),
                momx: 0.5 * (ul[1] + ur[1]),
                momy: 0.5 * (ul[2] + ur[2]),
                energy: 0.5 * (ul[3] + ur[3]),
            };
            frame_2d(avg, eos, dir)
        }
        n => panic!("state must have 3 or 4 components, got {n}"),
    }
}

impl CharacteristicFrame {
    /// Project a conserved vector onto characteristic variables: w = L u.
    pub fn to_characteristic(&self, u: &[f64; 4]) -> [f64; 4] {
        let mut w = [0.0; 4];
        for (p, row) in self.left.iter().enumerate().take(self.nu) {
            w[p] = row[0] * u[0] + row[1] * u[1] + row[2] * u[2] + row[3] * u[3];
        }
        w
    }

    /// Recombine characteristic components: u = R w.
    pub fn from_characteristic(&self, w: &[f64; 4]) -> [f64; 4] {
        let mut u = [0.0; 4];
        for (row, out) in self.right.iter().zip(u.iter_mut()).take(self.nu) {
            *out = row[0] * w[0] + row[1] * w[1] + row[2] * w[2] + row[3] * w[3];
        }
        u
    }
}

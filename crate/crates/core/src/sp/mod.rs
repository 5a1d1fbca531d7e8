//! The det² rotation number on paths in `Sp(2n, ℝ)` and its homogenization.
//!
//! Coordinates on `ℝ^{2n}` are ordered `(q₁..qₙ, p₁..pₙ)`; the base Lagrangian
//! `L₀` is the p-coordinate plane. Everything here is double precision.

mod lagrangian;
mod path;
mod rotation;
mod survey;

use nalgebra::DMatrix;
use thiserror::Error;

pub use lagrangian::{det_squared, LagrangianFrame};
pub use path::{random_path, random_symplectic, PathGenerator, SymplecticPath};
pub use rotation::{tau, tau_det, tau_det_with, tau_with, TauEstimate};
pub use survey::{defect_survey, defect_survey_with, SurveyStats, HISTOGRAM_BINS};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_DEPTH: u32 = 20;
pub const DEFAULT_K_MAX: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpError {
    #[error("matrix must be square with even dimension, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },
    #[error("matrix is not symplectic: |M^T J M - J| = {deviation:e}")]
    NotSymplectic { deviation: f64 },
    #[error("Lagrangian frame must be 2n x n, got {rows}x{cols}")]
    FrameShape { rows: usize, cols: usize },
    #[error("frame does not have full rank")]
    RankDeficient,
    #[error("frame does not span a Lagrangian subspace: |F^T J F| = {deviation:e}")]
    NotLagrangian { deviation: f64 },
    #[error("path is empty")]
    EmptyPath,
    #[error("path must start at the identity")]
    NotStartingAtIdentity,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("sample count mismatch: {0} vs {1}")]
    SampleCountMismatch(usize, usize),
    #[error("angle refinement exceeded depth {0}")]
    RefinementDepth(u32),
    #[error("cannot interpolate between antipodal unitary factors")]
    Interpolation,
    #[error("k_max must be at least 1")]
    ZeroIterations,
    #[error("survey needs at least one pair")]
    EmptySurvey,
    #[error("bad path generator {0:?}")]
    Generator(String),
    #[error("bad path JSON: {0}")]
    Json(String),
}

/// Numeric knobs shared by the path computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpConfig {
    pub tolerance: f64,
    pub max_depth: u32,
}

impl Default for SpConfig {
    fn default() -> Self {
        SpConfig {
            tolerance: DEFAULT_TOLERANCE,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// The standard form `J₀ = [[0, I], [-I, 0]]` on `ℝ^{2n}`.
pub fn standard_form(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0
        } else if i == j + n {
            -1.0
        } else {
            0.0
        }
    })
}

fn half_dimension(m: &DMatrix<f64>) -> Result<usize, SpError> {
    let (rows, cols) = m.shape();
    if rows != cols || rows % 2 == 1 {
        return Err(SpError::OddDimension { rows, cols });
    }
    Ok(rows / 2)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Entrywise `max |MᵀJ₀M - J₀|`.
pub fn symplectic_deviation(m: &DMatrix<f64>) -> Result<f64, SpError> {
    let n = half_dimension(m)?;
    let j = standard_form(n);
    Ok(max_abs(&(m.transpose() * &j * m - j)))
}

pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool, SpError> {
    Ok(symplectic_deviation(m)? <= tol)
}

/// Rotation by `theta` in every `(q_i, p_i)` plane.
pub fn rotation_matrix(n: usize, theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            c
        } else if j == i + n {
            -s
        } else if i == j + n {
            s
        } else {
            0.0
        }
    })
}

/// The shear `[[I, cI], [0, I]]`.
pub fn shear_matrix(n: usize, c: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i + n)] = c;
    }
    m
}

/// Inverse of a symplectic matrix, `-J₀ Mᵀ J₀`.
pub fn symplectic_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>, SpError> {
    let n = half_dimension(m)?;
    let j = standard_form(n);
    Ok(-(&j * m.transpose() * &j))
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{max_abs, standard_form, SpError};

/// A `2n x n` real matrix whose columns span a Lagrangian subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    basis: DMatrix<f64>,
}

impl LagrangianFrame {
    /// Validates shape, rank and isotropy. Isotropy is measured relative to
    /// the squared size of the basis.
    pub fn new(basis: DMatrix<f64>, tol: f64) -> Result<Self, SpError> {
        let (rows, cols) = basis.shape();
        if cols == 0 || rows != 2 * cols {
            return Err(SpError::FrameShape { rows, cols });
        }
        let scale = max_abs(&basis).powi(2).max(f64::MIN_POSITIVE);
        let deviation = max_abs(&(basis.transpose() * standard_form(cols) * &basis)) / scale;
        if deviation > tol {
            return Err(SpError::NotLagrangian { deviation });
        }
        let frame = LagrangianFrame { basis };
        frame.unitary_determinant(tol)?;
        Ok(frame)
    }

    /// The p-coordinate plane `L₀`.
    pub fn base(n: usize) -> Self {
        let mut basis = DMatrix::zeros(2 * n, n);
        for i in 0..n {
            basis[(n + i, i)] = 1.0;
        }
        LagrangianFrame { basis }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.ncols()
    }

    /// `det U` for the unitary polar factor `U` of `Z = X + iY`.
    fn unitary_determinant(&self, tol: f64) -> Result<Complex64, SpError> {
        let n = self.n();
        let z = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(self.basis[(i, j)], self.basis[(n + i, j)])
        });
        let svd = z.svd(true, true);
        let largest = svd.singular_values.max();
        let smallest = svd.singular_values.min();
        if largest.is_nan() || largest <= 0.0 || smallest <= tol * largest {
            return Err(SpError::RankDeficient);
        }
        let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
            return Err(SpError::RankDeficient);
        };
        Ok((u * v_t).determinant())
    }
}

/// `det²(L)` as a unit complex number, normalized so that `det²(L₀) = 1`.
///
/// The frame is split into `X` (q rows) and `Y` (p rows), `Z = X + iY` is
/// replaced by its unitary polar factor, and the squared determinant of that
/// factor is returned. Any real change of basis multiplies `det U` by `±1`.
pub fn det_squared(frame: &LagrangianFrame, tol: f64) -> Result<Complex64, SpError> {
    let det = frame.unitary_determinant(tol)?;
    // L₀ has Z = iI, so its raw value is (iⁿ)² = (-1)ⁿ; divide that out.
    let base = if frame.n().is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(det * det * base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const TOL: f64 = 1e-9;

    #[test]
    fn base_plane_is_one() {
        for n in 1..=4 {
            let v = det_squared(&LagrangianFrame::base(n), TOL).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let frame = LagrangianFrame::new(DMatrix::from_column_slice(2, 1, &[0.0, 1.0]), TOL).unwrap();
        assert!((det_squared(&frame, TOL).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lines_in_the_plane() {
        for k in 0..24 {
            let psi = -3.0 + 0.27 * k as f64;
            let frame = LagrangianFrame::new(
                DMatrix::from_column_slice(2, 1, &[psi.cos(), psi.sin()]),
                TOL,
            )
            .unwrap();
            let expected = Complex64::from_polar(1.0, 2.0 * (psi - FRAC_PI_2));
            assert!((det_squared(&frame, TOL).unwrap() - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn basis_change_invariance() {
        let basis = DMatrix::from_row_slice(4, 2, &[1.0, 0.5, 0.2, -1.0, 0.3, 1.2, 0.4, 0.0]);
        // Make it Lagrangian: take the image of L₀ under a symplectic matrix.
        let m = super::super::shear_matrix(2, 0.8) * super::super::rotation_matrix(2, 0.4);
        let frame = &m * LagrangianFrame::base(2).basis();
        let change = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, 0.5, 3.0]);
        let a = det_squared(&LagrangianFrame::new(frame.clone(), TOL).unwrap(), TOL).unwrap();
        let b = det_squared(&LagrangianFrame::new(frame * change, TOL).unwrap(), TOL).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(LagrangianFrame::new(basis, TOL).is_err());
    }

    #[test]
    fn rejects_bad_frames() {
        let zero = DMatrix::zeros(2, 1);
        assert_eq!(LagrangianFrame::new(zero, TOL), Err(SpError::RankDeficient));
        let wrong_shape = DMatrix::zeros(3, 1);
        assert!(matches!(LagrangianFrame::new(wrong_shape, TOL), Err(SpError::FrameShape { .. })));
        // Symplectic (not isotropic) plane spanned by q1 and p1.
        let symplectic_plane = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            LagrangianFrame::new(symplectic_plane, TOL),
            Err(SpError::NotLagrangian { .. })
        ));
        let repeated = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(LagrangianFrame::new(repeated, TOL), Err(SpError::RankDeficient));
    }
}

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::lagrangian::LagrangianFrame;
use super::path::{Geodesic, SymplecticPath};
use super::{SpConfig, SpError};

/// Homogenized rotation number with the partial estimates
/// `τ_det(Φᵏ)/k` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauEstimate {
    pub value: f64,
    pub partial: Vec<f64>,
}

impl TauEstimate {
    pub fn k_max(&self) -> usize {
        self.partial.len()
    }

    /// `|τ(2k) - τ(k)|` for every `k` with `2k ≤ k_max`.
    pub fn doubling_gaps(&self) -> Vec<(usize, f64)> {
        (1..=self.partial.len() / 2)
            .map(|k| (k, (self.partial[2 * k - 1] - self.partial[k - 1]).abs()))
            .collect()
    }
}

/// `det²` of the image frame up to the constant `(-1)ⁿ`, which cancels in
/// every phase difference. For `Z = UP` with `P` positive definite,
/// `det U = det Z / |det Z|`, so the polar factor is never formed here.
fn frame_value(m: &DMatrix<f64>, frame: &DMatrix<f64>) -> Result<Complex64, SpError> {
    let image = m * frame;
    let n = image.ncols();
    let z = DMatrix::from_fn(n, n, |i, j| Complex64::new(image[(i, j)], image[(n + i, j)]));
    let det = z.determinant();
    let norm = det.norm();
    if !norm.is_finite() || norm <= 0.0 {
        return Err(SpError::RankDeficient);
    }
    let unit = det / norm;
    Ok(unit * unit)
}

fn jump(from: Complex64, to: Complex64) -> f64 {
    (to * from.conj()).arg()
}

/// Interpolating arcs of a path with their midpoints, reused across every
/// frame the path is applied to.
struct Prepared<'a> {
    samples: &'a [DMatrix<f64>],
    arcs: Vec<Geodesic>,
    mids: Vec<DMatrix<f64>>,
}

impl<'a> Prepared<'a> {
    fn new(path: &'a SymplecticPath) -> Result<Self, SpError> {
        let samples = path.samples();
        let arcs = samples
            .windows(2)
            .map(|w| Geodesic::new(&w[0], &w[1]))
            .collect::<Result<Vec<_>, _>>()?;
        let mids = arcs.iter().map(|a| a.at(0.5)).collect::<Result<Vec<_>, _>>()?;
        Ok(Prepared { samples, arcs, mids })
    }

    /// Lifted change of `arg det²(M_t F)` along the whole path.
    ///
    /// Each arc's midpoint is always probed: a step is accepted once both
    /// halves move by less than `π/2`, otherwise the offending half is
    /// bisected again. Probing catches endpoints whose phases differ by
    /// nearly a full turn.
    fn lift(&self, frame: &DMatrix<f64>, config: &SpConfig) -> Result<f64, SpError> {
        let mut total = 0.0;
        let mut z0 = frame_value(&self.samples[0], frame)?;
        for (i, arc) in self.arcs.iter().enumerate() {
            let z1 = frame_value(&self.samples[i + 1], frame)?;
            let zm = frame_value(&self.mids[i], frame)?;
            total += lift_half(arc, frame, 0.0, z0, 0.5, zm, 1, config)?;
            total += lift_half(arc, frame, 0.5, zm, 1.0, z1, 1, config)?;
            z0 = z1;
        }
        Ok(total)
    }
}

#[allow(clippy::too_many_arguments)]
fn lift_half(
    arc: &Geodesic,
    frame: &DMatrix<f64>,
    s0: f64,
    z0: Complex64,
    s1: f64,
    z1: Complex64,
    depth: u32,
    config: &SpConfig,
) -> Result<f64, SpError> {
    let d = jump(z0, z1);
    if d.abs() < FRAC_PI_2 {
        return Ok(d);
    }
    if depth >= config.max_depth {
        return Err(SpError::RefinementDepth(config.max_depth));
    }
    let mid = 0.5 * (s0 + s1);
    let zm = frame_value(&arc.at(mid)?, frame)?;
    Ok(lift_half(arc, frame, s0, z0, mid, zm, depth + 1, config)?
        + lift_half(arc, frame, mid, zm, s1, z1, depth + 1, config)?)
}

/// `τ_det` with default tolerances.
pub fn tau_det(path: &SymplecticPath) -> Result<f64, SpError> {
    tau_det_with(path, &SpConfig::default())
}

/// Continuous lift of `arg det²(Φ_t L₀)` starting from 0, evaluated at the
/// end of the path.
pub fn tau_det_with(path: &SymplecticPath, config: &SpConfig) -> Result<f64, SpError> {
    Prepared::new(path)?.lift(LagrangianFrame::base(path.n()).basis(), config)
}

/// `τ` with default tolerances.
pub fn tau(path: &SymplecticPath, k_max: usize) -> Result<TauEstimate, SpError> {
    tau_with(path, k_max, &SpConfig::default())
}

/// `τ_det` of the `k_max`-fold concatenation divided by `k_max`.
///
/// The `j`-th copy is run as `t ↦ Φ_t Φ₁ʲ`, which is homotopic with fixed
/// endpoints to `t ↦ Φ₁ʲ Φ_t`. Acting on `Φ₁ʲ L₀` lets the frame be
/// re-orthonormalized between copies, so `Φ₁ʲ` itself is never formed.
pub fn tau_with(path: &SymplecticPath, k_max: usize, config: &SpConfig) -> Result<TauEstimate, SpError> {
    if k_max == 0 {
        return Err(SpError::ZeroIterations);
    }
    let prepared = Prepared::new(path)?;
    let end = path.endpoint();
    let mut frame = LagrangianFrame::base(path.n()).basis().clone();
    let mut total = 0.0;
    let mut partial = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        total += prepared.lift(&frame, config)?;
        partial.push(total / k as f64);
        if k < k_max {
            frame = (end * &frame).qr().q();
        }
    }
    Ok(TauEstimate {
        value: total / k_max as f64,
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::rotation_matrix;
    use std::f64::consts::PI;

    #[test]
    fn identity_path() {
        let p = SymplecticPath::identity(2, 5);
        assert_eq!(tau_det(&p).unwrap(), 0.0);
        let est = tau(&p, 8).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.partial.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rotation_doubles_angle() {
        for theta in [0.3, 1.0, 2.5, -4.0, 10.0] {
            for n in 1..=3 {
                let p = SymplecticPath::rotation(n, theta, 17);
                let expected = 2.0 * n as f64 * theta;
                assert!((tau_det(&p).unwrap() - expected).abs() < 1e-9, "{theta} {n}");
            }
        }
    }

    #[test]
    fn coarse_samples_are_refined() {
        // Two samples: identity and R(2.5). The jump needs bisection.
        let p = SymplecticPath::new(vec![DMatrix::identity(2, 2), rotation_matrix(1, 2.5)]).unwrap();
        assert!((tau_det(&p).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn half_turn_cannot_be_interpolated() {
        let p = SymplecticPath::new(vec![DMatrix::identity(2, 2), rotation_matrix(1, PI)]).unwrap();
        assert_eq!(tau_det(&p), Err(SpError::Interpolation));
    }

    #[test]
    fn depth_cap() {
        let p = SymplecticPath::new(vec![DMatrix::identity(2, 2), rotation_matrix(1, 2.5)]).unwrap();
        let config = SpConfig { max_depth: 0, ..SpConfig::default() };
        assert_eq!(tau_det_with(&p, &config), Err(SpError::RefinementDepth(0)));
    }

    #[test]
    fn shear_closed_form() {
        for c in [-3.0, -0.5, 0.5, 1.0, 20.0] {
            let p = SymplecticPath::shear(1, c, 33);
            let expected = -2.0 * f64::atan(c);
            let got = tau_det(&p).unwrap();
            assert!((got - expected).abs() < 1e-9, "{c}: {got} vs {expected}");
            assert!(got.abs() < PI);
        }
    }

    #[test]
    fn rotation_estimates_are_exact() {
        for theta in [0.3, 1.0, 2.5] {
            let est = tau(&SymplecticPath::rotation(1, theta, 33), 8).unwrap();
            assert!((est.value - 2.0 * theta).abs() < 1e-6);
            for x in &est.partial {
                assert!((x - 2.0 * theta).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn shear_estimates_decay() {
        let est = tau(&SymplecticPath::shear(1, 1.0, 17), 32).unwrap();
        assert!(est.value.abs() <= PI / 32.0);
        for (k, x) in est.partial.iter().enumerate() {
            // Sᵏ is the shear by k, so τ_det(Sᵏ) = -2 atan(k).
            let k = (k + 1) as f64;
            assert!((x - (-2.0 * k.atan() / k)).abs() < 1e-9);
        }
        let n2 = tau(&SymplecticPath::shear(2, 0.5, 17), 32).unwrap();
        assert!(n2.value.abs() <= 2.0 * PI / 32.0);
    }

    #[test]
    fn zero_iterations() {
        let p = SymplecticPath::identity(1, 2);
        assert_eq!(tau(&p, 0), Err(SpError::ZeroIterations));
    }

    #[test]
    fn doubling_gaps_for_rotations() {
        let est = tau(&SymplecticPath::rotation(2, 0.7, 9), 16).unwrap();
        for (_, gap) in est.doubling_gaps() {
            assert!(gap < 1e-9);
        }
    }
}

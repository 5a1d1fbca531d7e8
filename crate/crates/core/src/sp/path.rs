use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};

use super::{
    half_dimension, max_abs, rotation_matrix, shear_matrix, standard_form, symplectic_deviation,
    symplectic_inverse, SpError, DEFAULT_TOLERANCE,
};

/// A sampled path `[0, 1] → Sp(2n, ℝ)` starting at the identity, with samples
/// at equally spaced parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPath {
    samples: Vec<DMatrix<f64>>,
    n: usize,
}

impl SymplecticPath {
    pub fn new(samples: Vec<DMatrix<f64>>) -> Result<Self, SpError> {
        Self::with_tolerance(samples, DEFAULT_TOLERANCE)
    }

    /// Checks that every sample is symplectic to within `tol` (entrywise) and
    /// that the first is the identity.
    pub fn with_tolerance(samples: Vec<DMatrix<f64>>, tol: f64) -> Result<Self, SpError> {
        let first = samples.first().ok_or(SpError::EmptyPath)?;
        let n = half_dimension(first)?;
        if max_abs(&(first - DMatrix::identity(2 * n, 2 * n))) > tol {
            return Err(SpError::NotStartingAtIdentity);
        }
        for m in &samples {
            let k = half_dimension(m)?;
            if k != n {
                return Err(SpError::DimensionMismatch(n, k));
            }
            let deviation = symplectic_deviation(m)?;
            if deviation > tol {
                return Err(SpError::NotSymplectic { deviation });
            }
        }
        Ok(SymplecticPath { samples, n })
    }

    pub(crate) fn new_unchecked(samples: Vec<DMatrix<f64>>) -> Self {
        let n = samples[0].nrows() / 2;
        SymplecticPath { samples, n }
    }

    /// The constant path at the identity.
    pub fn identity(n: usize, len: usize) -> Self {
        SymplecticPath::new_unchecked(vec![DMatrix::identity(2 * n, 2 * n); len.max(1)])
    }

    /// `t ↦ f(t)` sampled at `len` equally spaced points of `[0, 1]`.
    pub fn from_fn<F>(len: usize, f: F) -> Result<Self, SpError>
    where
        F: Fn(f64) -> DMatrix<f64>,
    {
        let len = len.max(2);
        let samples = (0..len).map(|k| f(k as f64 / (len - 1) as f64)).collect();
        Self::new(samples)
    }

    /// `R(tθ)` acting on every `(q_i, p_i)` plane.
    pub fn rotation(n: usize, theta: f64, len: usize) -> Self {
        Self::from_fn(len, |t| rotation_matrix(n, t * theta)).expect("rotations are symplectic")
    }

    /// `[[I, tcI], [0, I]]`.
    pub fn shear(n: usize, c: f64, len: usize) -> Self {
        Self::from_fn(len, |t| shear_matrix(n, t * c)).expect("shears are symplectic")
    }

    /// `t ↦ exp(t J₀ S)` for a symmetric `S`.
    pub fn hamiltonian_flow(sym: &DMatrix<f64>, len: usize) -> Result<Self, SpError> {
        let n = half_dimension(sym)?;
        let generator = standard_form(n) * sym;
        Self::from_fn(len, |t| (&generator * t).exp())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn endpoint(&self) -> &DMatrix<f64> {
        self.samples.last().expect("paths are nonempty")
    }

    /// Pointwise product `t ↦ self(t) · other(t)` of synchronized samples.
    pub fn pointwise_product(&self, other: &SymplecticPath) -> Result<SymplecticPath, SpError> {
        if self.n != other.n {
            return Err(SpError::DimensionMismatch(self.n, other.n));
        }
        if self.len() != other.len() {
            return Err(SpError::SampleCountMismatch(self.len(), other.len()));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        Ok(SymplecticPath::new_unchecked(samples))
    }

    /// `t ↦ self(t)⁻¹`.
    pub fn inverse(&self) -> SymplecticPath {
        let samples = self
            .samples
            .iter()
            .map(|m| symplectic_inverse(m).expect("validated dimension"))
            .collect();
        SymplecticPath::new_unchecked(samples)
    }

    /// `t ↦ g · self(t) · g⁻¹`.
    pub fn conjugate(&self, g: &DMatrix<f64>) -> Result<SymplecticPath, SpError> {
        let g_inv = symplectic_inverse(g)?;
        if g.nrows() != 2 * self.n {
            return Err(SpError::DimensionMismatch(self.n, g.nrows() / 2));
        }
        let samples = self.samples.iter().map(|m| g * m * &g_inv).collect();
        Ok(SymplecticPath::new_unchecked(samples))
    }

    /// Same path evaluated on a grid with `factor` times as many intervals,
    /// interpolating between existing samples.
    pub fn densify(&self, factor: usize) -> Result<SymplecticPath, SpError> {
        let factor = factor.max(1);
        let mut samples = vec![self.samples[0].clone()];
        for pair in self.samples.windows(2) {
            for k in 1..=factor {
                samples.push(interpolate(&pair[0], &pair[1], k as f64 / factor as f64)?);
            }
        }
        Ok(SymplecticPath::new_unchecked(samples))
    }

    /// Parses a JSON array of `2n x 2n` row-major matrices.
    pub fn from_json_str(s: &str) -> Result<Self, SpError> {
        let raw: Vec<Vec<Vec<f64>>> =
            serde_json::from_str(s).map_err(|e| SpError::Json(e.to_string()))?;
        let samples = raw
            .into_iter()
            .map(|rows| {
                let dim = rows.len();
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(SpError::Json("matrices must be square".to_string()));
                }
                Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(samples)
    }

    pub fn to_json_string(&self) -> String {
        let raw: Vec<Vec<Vec<f64>>> = self
            .samples
            .iter()
            .map(|m| m.row_iter().map(|r| r.iter().copied().collect()).collect())
            .collect();
        serde_json::to_string(&raw).expect("finite floats serialize")
    }
}

/// Left polar decomposition `M = P U` with `P` symmetric positive definite
/// and `U` orthogonal.
fn polar(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>), SpError> {
    let svd = m.clone().svd(true, true);
    let smallest = svd.singular_values.min();
    if smallest.is_nan() || smallest <= 0.0 {
        return Err(SpError::Interpolation);
    }
    let (Some(w), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(SpError::Interpolation);
    };
    let p = &w * DMatrix::from_diagonal(&svd.singular_values) * w.transpose();
    Ok((p, w * v_t))
}

fn symmetric_map<F: Fn(f64) -> f64>(s: &DMatrix<f64>, f: F) -> DMatrix<f64> {
    let eig = s.clone().symmetric_eigen();
    let mapped = eig.eigenvalues.map(f);
    &eig.eigenvectors * DMatrix::from_diagonal(&mapped) * eig.eigenvectors.transpose()
}

/// The interpolating arc between two consecutive samples.
///
/// Positive parts are joined log-linearly, which keeps them positive
/// symplectic; orthogonal parts are joined linearly and projected back to
/// their polar factor, which keeps them unitary. The product is symplectic.
pub(crate) struct Geodesic {
    log_pa: DMatrix<f64>,
    log_pb: DMatrix<f64>,
    ua: DMatrix<f64>,
    ub: DMatrix<f64>,
}

impl Geodesic {
    pub(crate) fn new(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Self, SpError> {
        let (pa, ua) = polar(a)?;
        let (pb, ub) = polar(b)?;
        Ok(Geodesic {
            log_pa: symmetric_map(&pa, f64::ln),
            log_pb: symmetric_map(&pb, f64::ln),
            ua,
            ub,
        })
    }

    pub(crate) fn at(&self, s: f64) -> Result<DMatrix<f64>, SpError> {
        let p = symmetric_map(&(&self.log_pa * (1.0 - s) + &self.log_pb * s), f64::exp);
        let svd = (&self.ua * (1.0 - s) + &self.ub * s).svd(true, true);
        let smallest = svd.singular_values.min();
        if smallest.is_nan() || smallest <= 1e-12 * svd.singular_values.max().max(1.0) {
            return Err(SpError::Interpolation);
        }
        let (Some(w), Some(v_t)) = (svd.u, svd.v_t) else {
            return Err(SpError::Interpolation);
        };
        Ok(p * (w * v_t))
    }
}

/// Point at parameter `s` on the arc from `a` to `b`.
pub(crate) fn interpolate(a: &DMatrix<f64>, b: &DMatrix<f64>, s: f64) -> Result<DMatrix<f64>, SpError> {
    Geodesic::new(a, b)?.at(s)
}

/// Reproducible path generators: `rotation:theta=1.2`, `shear:c=0.5`,
/// `random:seed=42,count=200`. Every kind also accepts `n=` (half
/// dimension) and `samples=`.
#[derive(Debug, Clone, PartialEq)]
pub enum PathGenerator {
    Rotation { theta: f64, n: usize, samples: usize },
    Shear { c: f64, n: usize, samples: usize },
    Random { seed: u64, count: usize, n: usize, samples: usize },
}

const DEFAULT_SAMPLES: usize = 65;

impl FromStr for PathGenerator {
    type Err = SpError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = || SpError::Generator(spec.to_string());
        let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
        let mut theta = None;
        let mut c = None;
        let mut seed = None;
        let mut count = None;
        let mut n = 1usize;
        let mut samples = DEFAULT_SAMPLES;
        for pair in args.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(bad)?;
            let value = value.trim();
            match key.trim() {
                "theta" => theta = Some(value.parse::<f64>().map_err(|_| bad())?),
                "c" => c = Some(value.parse::<f64>().map_err(|_| bad())?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad())?),
                "count" => count = Some(value.parse::<usize>().map_err(|_| bad())?),
                "n" => n = value.parse::<usize>().map_err(|_| bad())?,
                "samples" => samples = value.parse::<usize>().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        if n == 0 || samples < 2 {
            return Err(bad());
        }
        let finite = |x: Option<f64>| x.filter(|v| v.is_finite()).ok_or_else(bad);
        match kind.trim() {
            "rotation" => Ok(PathGenerator::Rotation { theta: finite(theta)?, n, samples }),
            "shear" => Ok(PathGenerator::Shear { c: finite(c)?, n, samples }),
            "random" => Ok(PathGenerator::Random {
                seed: seed.ok_or_else(bad)?,
                count: count.unwrap_or(1).max(1),
                n,
                samples,
            }),
            _ => Err(bad()),
        }
    }
}

impl PathGenerator {
    /// The generated paths: one for rotations and shears, `count` for random.
    pub fn paths(&self) -> Vec<SymplecticPath> {
        match *self {
            PathGenerator::Rotation { theta, n, samples } => {
                vec![SymplecticPath::rotation(n, theta, samples)]
            }
            PathGenerator::Shear { c, n, samples } => vec![SymplecticPath::shear(n, c, samples)],
            PathGenerator::Random { seed, count, n, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| random_path(&mut rng, n, samples)).collect()
            }
        }
    }

    /// `count` independent pairs for defect surveys. Rotations give pairs of
    /// commuting rotations `(θ, θ/2)`; shears pair the shear with itself.
    pub fn pairs(&self) -> Vec<(SymplecticPath, SymplecticPath)> {
        match *self {
            PathGenerator::Rotation { theta, n, samples } => vec![(
                SymplecticPath::rotation(n, theta, samples),
                SymplecticPath::rotation(n, theta / 2.0, samples),
            )],
            PathGenerator::Shear { c, n, samples } => {
                let p = SymplecticPath::shear(n, c, samples);
                vec![(p.clone(), p)]
            }
            PathGenerator::Random { seed, count, n, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| (random_path(&mut rng, n, samples), random_path(&mut rng, n, samples)))
                    .collect()
            }
        }
    }
}

/// `exp(t J₀ S)` with `S` symmetric Gaussian, scaled by a log-normal factor
/// clamped to `[0.05, 2]`.
pub fn random_path<R: Rng>(rng: &mut R, n: usize, samples: usize) -> SymplecticPath {
    let dim = 2 * n;
    let scale: f64 = LogNormal::<f64>::new(0.0, 0.5)
        .expect("valid parameters")
        .sample(rng)
        .clamp(0.05, 2.0);
    let mut sym = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = StandardNormal.sample(rng);
            sym[(i, j)] = x * scale;
            sym[(j, i)] = x * scale;
        }
    }
    SymplecticPath::hamiltonian_flow(&sym, samples).expect("flows of Hamiltonian matrices are symplectic")
}

/// A random symplectic matrix `exp(J₀ S)` with entries of `S` drawn from
/// `N(0, spread²)`.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, spread: f64) -> DMatrix<f64> {
    let dim = 2 * n;
    let mut sym = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = StandardNormal.sample(rng);
            sym[(i, j)] = x * spread;
            sym[(j, i)] = x * spread;
        }
    }
    (standard_form(n) * sym).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::is_symplectic;

    #[test]
    fn validation() {
        assert_eq!(SymplecticPath::new(vec![]), Err(SpError::EmptyPath));
        let not_identity = vec![shear_matrix(1, 1.0)];
        assert_eq!(SymplecticPath::new(not_identity), Err(SpError::NotStartingAtIdentity));
        let bad = vec![DMatrix::identity(2, 2), DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])];
        assert!(matches!(SymplecticPath::new(bad), Err(SpError::NotSymplectic { .. })));
        let mixed = vec![DMatrix::identity(2, 2), DMatrix::identity(4, 4)];
        assert_eq!(SymplecticPath::new(mixed), Err(SpError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn interpolation_stays_symplectic() {
        let a = shear_matrix(2, 0.7) * rotation_matrix(2, 0.3);
        let b = rotation_matrix(2, 1.1) * shear_matrix(2, -0.4);
        for k in 0..=8 {
            let m = interpolate(&a, &b, k as f64 / 8.0).unwrap();
            assert!(is_symplectic(&m, 1e-10).unwrap());
        }
        assert!((interpolate(&a, &b, 0.0).unwrap() - &a).norm() < 1e-10);
        assert!((interpolate(&a, &b, 1.0).unwrap() - &b).norm() < 1e-10);
    }

    #[test]
    fn antipodal_interpolation_fails() {
        let a = DMatrix::identity(2, 2);
        let b = rotation_matrix(1, std::f64::consts::PI);
        assert_eq!(interpolate(&a, &b, 0.5), Err(SpError::Interpolation));
    }

    #[test]
    fn products_and_inverses() {
        let a = SymplecticPath::rotation(1, 0.5, 9);
        let b = SymplecticPath::shear(1, 0.5, 9);
        let ab = a.pointwise_product(&b).unwrap();
        assert_eq!(ab.len(), 9);
        let id = a.pointwise_product(&a.inverse()).unwrap();
        for m in id.samples() {
            assert!((m - DMatrix::identity(2, 2)).norm() < 1e-12);
        }
        let short = SymplecticPath::rotation(1, 0.5, 5);
        assert_eq!(a.pointwise_product(&short), Err(SpError::SampleCountMismatch(9, 5)));
        let wide = SymplecticPath::rotation(2, 0.5, 9);
        assert_eq!(a.pointwise_product(&wide), Err(SpError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let p = SymplecticPath::shear(1, 0.5, 3);
        let text = p.to_json_string();
        assert_eq!(text, "[[[1.0,0.0],[0.0,1.0]],[[1.0,0.25],[0.0,1.0]],[[1.0,0.5],[0.0,1.0]]]");
        assert_eq!(SymplecticPath::from_json_str(&text).unwrap(), p);
        assert!(SymplecticPath::from_json_str("[[[1,0,0],[0,1,0]]]").is_err());
        assert!(SymplecticPath::from_json_str("nope").is_err());
    }

    #[test]
    fn generator_parsing() {
        assert_eq!(
            "rotation:theta=1.2".parse::<PathGenerator>().unwrap(),
            PathGenerator::Rotation { theta: 1.2, n: 1, samples: DEFAULT_SAMPLES }
        );
        assert_eq!(
            "shear:c=0.5,n=2,samples=9".parse::<PathGenerator>().unwrap(),
            PathGenerator::Shear { c: 0.5, n: 2, samples: 9 }
        );
        assert_eq!(
            "random:seed=42,count=200".parse::<PathGenerator>().unwrap(),
            PathGenerator::Random { seed: 42, count: 200, n: 1, samples: DEFAULT_SAMPLES }
        );
        for bad in ["random:count=3", "rotation", "rotation:theta=x", "spiral:theta=1", "shear:c=1,n=0", "rotation:theta=1,foo=2"] {
            assert!(bad.parse::<PathGenerator>().is_err(), "{bad}");
        }
    }

    #[test]
    fn random_generation_is_reproducible() {
        let g: PathGenerator = "random:seed=7,count=3,n=2,samples=5".parse().unwrap();
        let a = g.pairs();
        let b = g.pairs();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for (p, q) in &a {
            assert_eq!(p.n(), 2);
            assert_eq!(q.len(), 5);
        }
    }
}

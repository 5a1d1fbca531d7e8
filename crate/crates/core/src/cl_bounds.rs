//! Commutator-length and stable-norm certificates for `φ_{F♯wH_B}` built from
//! ring invariants and abstract Hamiltonian data.
//!
//! The Hamiltonian itself never appears: a profile carries only the number
//! `∫₀¹ sup_M F(t,·) dt` and the bump weight `w`. Whether `F` is normalized
//! and whether `φ_F` displaces the ball `B` cannot be checked here; they are
//! listed in every certificate as preconditions asserted by the caller.
//!
//! All comparisons are exact and strict. A boundary value certifies nothing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qh_ring::{asymptotic_invariant, euler_power_invariant, RingError, RingParams};
use crate::rational::{parse_rational, ParseRationalError};

pub const DEFAULT_MAX_G: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("projective dimension must be at least 1")]
    InvalidDimension,
    #[error("symplectic area must be positive, got {0}")]
    NonPositiveArea(BigRational),
    #[error("bump weight w must be positive, got {0}")]
    NonPositiveWeight(BigRational),
    #[error("genus g must be at least 1")]
    ZeroGenus,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("certificate threshold decreased from g={0} to g={1}")]
    ThresholdDecreased(u64, u64),
}

/// The numbers a certificate consumes from a displacing Hamiltonian `F` and
/// the bump `w·H_B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianProfile {
    sup_integral: BigRational,
    w: BigRational,
}

impl HamiltonianProfile {
    pub fn new(sup_integral: BigRational, w: BigRational) -> Result<Self, BoundError> {
        if !w.is_positive() {
            return Err(BoundError::NonPositiveWeight(w));
        }
        Ok(HamiltonianProfile { sup_integral, w })
    }

    pub fn sup_integral(&self) -> &BigRational {
        &self.sup_integral
    }

    pub fn w(&self) -> &BigRational {
        &self.w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Commutator length on `ℂPⁿ`.
    ClProjective,
    /// Commutator length from a split power `E^g`.
    ClSplitEulerPower,
    /// Stable norm on `ℂPⁿ`.
    StableNormProjective,
    /// Stable norm on Grassmannians.
    StableNormGrassmannian,
    /// Symplectically aspherical manifolds.
    ClAspherical,
}

impl Theorem {
    pub fn id(self) -> &'static str {
        match self {
            Theorem::ClProjective => "thm-cl-cp-n",
            Theorem::ClSplitEulerPower => "cor-comm-length-quantum-length-ostrover",
            Theorem::StableNormProjective => "thm-stable-norm-cp-n",
            Theorem::StableNormGrassmannian => "thm-cp-n-grassms-infinite-cl",
            Theorem::ClAspherical => "thm-ostrover-examples-sympl-aspher",
        }
    }

    pub fn from_id(id: &str) -> Option<Theorem> {
        [
            Theorem::ClProjective,
            Theorem::ClSplitEulerPower,
            Theorem::StableNormProjective,
            Theorem::StableNormGrassmannian,
            Theorem::ClAspherical,
        ]
        .into_iter()
        .find(|t| t.id() == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    /// `cl(φ̃) > g`.
    ClGreaterThan(u64),
    /// `‖φ̃‖_cl >= v`.
    StableNormAtLeast(BigRational),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub statement: Statement,
    /// For commutator-length statements, the value `w` had to exceed. For
    /// stable-norm statements, the asymptotic invariant `I` divided into `w`.
    pub threshold: BigRational,
    pub theorem: Theorem,
    pub preconditions: Vec<String>,
}

impl BoundCertificate {
    pub fn certified_g(&self) -> Option<u64> {
        match self.statement {
            Statement::ClGreaterThan(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.statement {
            Statement::ClGreaterThan(g) => write!(f, "cl > {g}")?,
            Statement::StableNormAtLeast(v) => write!(f, "stable norm >= {v}")?,
            Statement::None => f.write_str("no certificate")?,
        }
        write!(f, " (threshold {}, {})", self.threshold, self.theorem.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    pub threshold: String,
    pub theorem: String,
    pub preconditions: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CertificateParseError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("unknown statement or theorem in certificate: {0}")]
    Unknown(String),
}

impl BoundCertificate {
    pub fn to_json(&self) -> CertificateJson {
        let (statement, g, value) = match &self.statement {
            Statement::ClGreaterThan(g) => ("cl_gt", Some(*g), None),
            Statement::StableNormAtLeast(v) => ("stable_norm_ge", None, Some(v.to_string())),
            Statement::None => ("none", None, None),
        };
        CertificateJson {
            statement: statement.to_string(),
            g,
            value,
            threshold: self.threshold.to_string(),
            theorem: self.theorem.id().to_string(),
            preconditions: self.preconditions.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, CertificateParseError> {
        let json: CertificateJson = serde_json::from_str(s)?;
        let statement = match (json.statement.as_str(), json.g, &json.value) {
            ("cl_gt", Some(g), None) => Statement::ClGreaterThan(g),
            ("stable_norm_ge", None, Some(v)) => Statement::StableNormAtLeast(parse_rational(v)?),
            ("none", None, None) => Statement::None,
            _ => return Err(CertificateParseError::Unknown(json.statement)),
        };
        let theorem =
            Theorem::from_id(&json.theorem).ok_or(CertificateParseError::Unknown(json.theorem))?;
        Ok(BoundCertificate {
            statement,
            threshold: parse_rational(&json.threshold)?,
            theorem,
            preconditions: json.preconditions,
        })
    }
}

fn displacement_preconditions() -> Vec<String> {
    vec!["F normalized".to_string(), "phi_F displaces B".to_string()]
}

fn floor_div(num: u64, den: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(num / den))
}

/// Largest `g` in `1..=max_g` with `w > threshold(g)`, scanning upward and
/// stopping at the first failure. Thresholds must be nondecreasing in `g`;
/// a decrease is reported as an error rather than trusted.
fn search_max_g<F>(
    w: &BigRational,
    max_g: u64,
    mut threshold: F,
) -> Result<(Option<u64>, BigRational), BoundError>
where
    F: FnMut(u64) -> Result<BigRational, BoundError>,
{
    let mut last = threshold(1)?;
    if w <= &last {
        return Ok((None, last));
    }
    for g in 2..=max_g {
        let t = threshold(g)?;
        if t < last {
            return Err(BoundError::ThresholdDecreased(g - 1, g));
        }
        if w <= &t {
            return Ok((Some(g - 1), last));
        }
        last = t;
    }
    Ok((Some(max_g), last))
}

/// Largest `g` with `w > ∫sup F + ⌊gn/(n+1)⌋ ω(A)`, certifying `cl > g` on
/// `ℂPⁿ`.
pub fn cl_lower_bound_cpn(
    n: usize,
    area: &BigRational,
    profile: &HamiltonianProfile,
    max_g: u64,
) -> Result<BoundCertificate, BoundError> {
    if n == 0 {
        return Err(BoundError::InvalidDimension);
    }
    if !area.is_positive() {
        return Err(BoundError::NonPositiveArea(area.clone()));
    }
    let n = n as u64;
    let (g, threshold) = search_max_g(profile.w(), max_g.max(1), |g| {
        Ok(profile.sup_integral() + floor_div(g * n, n + 1) * area)
    })?;
    Ok(BoundCertificate {
        statement: g.map_or(Statement::None, Statement::ClGreaterThan),
        threshold,
        theorem: Theorem::ClProjective,
        preconditions: displacement_preconditions(),
    })
}

/// Certifies `cl > g` when `w > ∫sup F + I_g`, with `I_g` read off the
/// splitting of `E^g`.
pub fn cl_lower_bound_grassmannian(
    ring: &RingParams,
    profile: &HamiltonianProfile,
    g: u64,
) -> Result<BoundCertificate, BoundError> {
    if g == 0 {
        return Err(BoundError::ZeroGenus);
    }
    let threshold = profile.sup_integral() + euler_power_invariant(ring, g)?;
    let statement = if profile.w() > &threshold {
        Statement::ClGreaterThan(g)
    } else {
        Statement::None
    };
    Ok(BoundCertificate {
        statement,
        threshold,
        theorem: Theorem::ClSplitEulerPower,
        preconditions: displacement_preconditions(),
    })
}

/// The largest `g <= max_g` that [`cl_lower_bound_grassmannian`] certifies.
pub fn max_certified_g_grassmannian(
    ring: &RingParams,
    profile: &HamiltonianProfile,
    max_g: u64,
) -> Result<BoundCertificate, BoundError> {
    let (g, threshold) = search_max_g(profile.w(), max_g.max(1), |g| {
        Ok(profile.sup_integral() + euler_power_invariant(ring, g)?)
    })?;
    Ok(BoundCertificate {
        statement: g.map_or(Statement::None, Statement::ClGreaterThan),
        threshold,
        theorem: Theorem::ClSplitEulerPower,
        preconditions: displacement_preconditions(),
    })
}

/// `‖φ̃_{wH_B}‖_cl >= w / I` with `I = r(n-r)/n · ω(A)`.
pub fn stable_norm_lower_bound(ring: &RingParams, w: &BigRational) -> Result<BigRational, BoundError> {
    if !w.is_positive() {
        return Err(BoundError::NonPositiveWeight(w.clone()));
    }
    Ok(w / asymptotic_invariant(ring))
}

pub fn stable_norm_certificate(ring: &RingParams, w: &BigRational) -> Result<BoundCertificate, BoundError> {
    let value = stable_norm_lower_bound(ring, w)?;
    let theorem = if ring.r() == 1 || ring.r() + 1 == ring.n() {
        Theorem::StableNormProjective
    } else {
        Theorem::StableNormGrassmannian
    };
    Ok(BoundCertificate {
        statement: Statement::StableNormAtLeast(value),
        threshold: asymptotic_invariant(ring),
        theorem,
        preconditions: vec!["B displaceable".to_string()],
    })
}

/// `cl > 1` when `w > ∫sup F`, on a symplectically aspherical manifold.
pub fn aspherical_bound(profile: &HamiltonianProfile) -> BoundCertificate {
    let threshold = profile.sup_integral().clone();
    let statement = if profile.w() > &threshold {
        Statement::ClGreaterThan(1)
    } else {
        Statement::None
    };
    let mut preconditions = vec!["M symplectically aspherical".to_string()];
    preconditions.extend(displacement_preconditions());
    BoundCertificate {
        statement,
        threshold,
        theorem: Theorem::ClAspherical,
        preconditions,
    }
}

/// Lower bound `c(E^g, F♯wH_B) >= w - ∫sup F - I_g`.
///
/// Chain: `E^g = α q^{d}` so `c(E^g, F) = c(α, F) - I_g`; the sup bound
/// gives `c(α, F) >= -∫sup F`; composing with the bump adds `w`. A positive
/// value is exactly the hypothesis needed to conclude `cl > g`.
pub fn spectral_lower_bound(
    ring: &RingParams,
    profile: &HamiltonianProfile,
    g: u64,
) -> Result<BigRational, BoundError> {
    if g == 0 {
        return Err(BoundError::ZeroGenus);
    }
    let shift = euler_power_invariant(ring, g)?;
    let alpha_bound = -profile.sup_integral().clone();
    Ok(alpha_bound - shift + profile.w())
}

/// `true` when a spectral bound is strictly positive.
pub fn spectral_certifies(bound: &BigRational) -> bool {
    bound > &BigRational::zero()
}

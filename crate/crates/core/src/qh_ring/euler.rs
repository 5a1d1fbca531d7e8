//! Euler class, its powers, splitting, and the q-exponent invariants built
//! from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{quantum_product, QHClass, RingError, RingParams};
use crate::partitions::{complement, Partition};

/// A single term `scalar · σ_partition · q^q_exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitForm {
    pub scalar: BigRational,
    pub partition: Partition,
    pub q_exp: i64,
}

/// `class = singular · q^q_exp` with `singular` free of q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSplit {
    pub singular: QHClass,
    pub q_exp: i64,
}

/// `E = Σ_λ σ_λ ∗ σ_λ∨` over the Schubert basis and its Poincaré dual basis.
///
/// Every Schubert class has even degree, so all signs in the alternating sum
/// are `+1`.
pub fn euler_class(ring: &RingParams) -> QHClass {
    let mut total = QHClass::zero(ring);
    for lambda in ring.box_partitions() {
        let dual = complement(&lambda, ring.r(), ring.cols()).expect("box partition");
        let a = QHClass::schubert(ring, lambda).expect("box partition");
        let b = QHClass::schubert(ring, dual).expect("box partition");
        let term = quantum_product(&a, &b).expect("same ring");
        total = total.add(&term).expect("same ring");
    }
    total
}

/// `I_g = d_g · ω(A)` where `E^g = α_g q^{d_g}` with `α_g` singular.
///
/// Fails with [`RingError::NotSplit`] when `E^g` mixes powers of `q` (or
/// vanishes), since then no single exponent exists.
pub fn euler_power_invariant(ring: &RingParams, g: u64) -> Result<BigRational, RingError> {
    let power = euler_class(ring).power(g);
    let split = power.split_q_power().ok_or_else(|| RingError::NotSplit {
        g,
        class: power.to_text(),
    })?;
    Ok(BigRational::from_integer(BigInt::from(split.q_exp)) * ring.area())
}

/// `lim I_g / g = r(n - r)/n · ω(A)`, in closed form.
pub fn asymptotic_invariant(ring: &RingParams) -> BigRational {
    let factor = BigRational::new(
        BigInt::from(ring.r() * ring.cols()),
        BigInt::from(ring.n()),
    );
    factor * ring.area()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostnikovCase {
    /// `gr = an + b`, `0 <= b <= r`: `m^g = σ_{b x (n-r)} q^{a(n-r)}`.
    RowBlock { a: u64, b: u64 },
    /// `g(n-r) = cn + d`, `0 <= d <= n-r`: `m^g = σ_{r x d} q^{cr}`.
    ColumnBlock { c: u64, d: u64 },
}

/// The closed forms for `m^g` whose applicability condition holds. At least
/// one always does.
pub fn postnikov_closed_forms(ring: &RingParams, g: u64) -> Vec<(PostnikovCase, QHClass)> {
    let (r, n, cols) = (ring.r() as u64, ring.n() as u64, ring.cols() as u64);
    let mut out = Vec::new();

    let (a, b) = ((g * r) / n, (g * r) % n);
    if b <= r {
        let class = QHClass::monomial(
            ring,
            Partition::rectangle(b as usize, cols as usize),
            (a * cols) as i64,
            BigRational::one(),
        )
        .expect("b <= r rows fit the box");
        out.push((PostnikovCase::RowBlock { a, b }, class));
    }

    let (c, d) = ((g * cols) / n, (g * cols) % n);
    if d <= cols {
        let class = QHClass::monomial(
            ring,
            Partition::rectangle(r as usize, d as usize),
            (c * r) as i64,
            BigRational::one(),
        )
        .expect("d <= n-r columns fit the box");
        out.push((PostnikovCase::ColumnBlock { c, d }, class));
    }
    out
}

/// Comparison of `m^g` computed by quantum products with its closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostnikovReport {
    pub ring: RingParams,
    pub g: u64,
    pub computed: QHClass,
    pub closed_forms: Vec<(PostnikovCase, QHClass)>,
}

impl PostnikovReport {
    /// Every applicable closed form equals the computed power.
    pub fn matches(&self) -> bool {
        !self.closed_forms.is_empty() && self.closed_forms.iter().all(|(_, c)| *c == self.computed)
    }

    /// The applicable closed forms agree with each other.
    pub fn forms_agree(&self) -> bool {
        self.closed_forms.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn both_cases_apply(&self) -> bool {
        self.closed_forms.len() == 2
    }
}

pub fn verify_postnikov(ring: &RingParams, g: u64) -> PostnikovReport {
    let m = QHClass::point(ring);
    let mut computed = QHClass::one(ring);
    for _ in 0..g {
        computed = quantum_product(&computed, &m).expect("same ring");
    }
    PostnikovReport {
        ring: ring.clone(),
        g,
        computed,
        closed_forms: postnikov_closed_forms(ring, g),
    }
}

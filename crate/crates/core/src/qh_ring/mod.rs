//! The small quantum cohomology ring `QH*(Gr(r, n))` over `ℚ[q, q⁻¹]`, with
//! `ℂPᵐ` realised as `Gr(1, m + 1)`.
//!
//! Elements are finite sums of `c · σ_λ · q^d` with exact rational `c`,
//! `λ` in the `r x (n - r)` box and `d` a (possibly negative) integer. The
//! real degree of `σ_λ q^d` is `2|λ| + 2nd`.

mod euler;
mod format;
mod product;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::partitions::{partitions_in_box, Partition, PartitionError};

pub use euler::{
    asymptotic_invariant, euler_class, euler_power_invariant, postnikov_closed_forms,
    verify_postnikov, PostnikovCase, PostnikovReport, QSplit, SplitForm,
};
pub use format::{ClassJson, ParseClassError, RingJson, TermJson};
pub use product::{poincare_pairing, quantum_product, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid Grassmannian Gr({r},{n}): need 1 <= r <= n-1")]
    InvalidGrassmannian { r: usize, n: usize },
    #[error("symplectic area must be positive, got {0}")]
    NonPositiveArea(BigRational),
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Box<RingParams>, right: Box<RingParams> },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("E^{g} does not split as a singular class times a single power of q: {class}")]
    NotSplit { g: u64, class: String },
}

/// A Grassmannian `Gr(r, n)` together with the area `ω(A)` of the positive
/// generator of `H₂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingParams {
    r: usize,
    n: usize,
    area: BigRational,
}

impl RingParams {
    pub fn new(r: usize, n: usize, area: BigRational) -> Result<Self, RingError> {
        if r == 0 || r >= n {
            return Err(RingError::InvalidGrassmannian { r, n });
        }
        if !area.is_positive() {
            return Err(RingError::NonPositiveArea(area));
        }
        Ok(RingParams { r, n, area })
    }

    /// `Gr(r, n)` with unit area.
    pub fn grassmannian(r: usize, n: usize) -> Result<Self, RingError> {
        Self::new(r, n, BigRational::one())
    }

    /// `ℂPᵐ` as `Gr(1, m + 1)`.
    pub fn projective(m: usize, area: BigRational) -> Result<Self, RingError> {
        Self::new(1, m + 1, area)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Width of the partition box, `n - r`.
    pub fn cols(&self) -> usize {
        self.n - self.r
    }

    pub fn area(&self) -> &BigRational {
        &self.area
    }

    pub fn with_area(&self, area: BigRational) -> Result<Self, RingError> {
        Self::new(self.r, self.n, area)
    }

    /// Real degree of `q`: `2 c₁(A) = 2n`.
    pub fn q_degree(&self) -> i64 {
        2 * self.n as i64
    }

    /// Complex dimension `r(n - r)`.
    pub fn dimension(&self) -> usize {
        self.r * self.cols()
    }

    /// The full box, indexing the point class `m`.
    pub fn point_partition(&self) -> Partition {
        Partition::rectangle(self.r, self.cols())
    }

    /// `χ(Gr(r, n)) = C(n, r)`.
    pub fn euler_characteristic(&self) -> BigInt {
        binomial(BigInt::from(self.n), BigInt::from(self.r))
    }

    pub fn box_partitions(&self) -> Vec<Partition> {
        partitions_in_box(self.r, self.cols())
    }

    pub fn check_partition(&self, lambda: &Partition) -> Result<(), RingError> {
        if lambda.fits_box(self.r, self.cols()) {
            Ok(())
        } else {
            Err(PartitionError::OutsideBox {
                partition: lambda.clone(),
                rows: self.r,
                cols: self.cols(),
            }
            .into())
        }
    }

    fn ensure_same(&self, other: &RingParams) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::RingMismatch {
                left: Box::new(self.clone()),
                right: Box::new(other.clone()),
            })
        }
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({},{}) with ω(A) = {}", self.r, self.n, self.area)
    }
}

/// A basis monomial `σ_λ q^d`. Ordered by q-exponent, then graded by λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub q: i64,
    pub partition: Partition,
}

impl Monomial {
    pub fn new(partition: Partition, q: i64) -> Self {
        Monomial { q, partition }
    }
}

/// An element of `QH*(Gr(r, n))`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHClass {
    ring: RingParams,
    terms: BTreeMap<Monomial, BigRational>,
}

impl QHClass {
    pub fn zero(ring: &RingParams) -> Self {
        QHClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingParams) -> Self {
        Self::monomial(ring, Partition::empty(), 0, BigRational::one())
            .expect("the empty partition fits every box")
    }

    /// The Schubert class `σ_λ`.
    pub fn schubert(ring: &RingParams, lambda: Partition) -> Result<Self, RingError> {
        Self::monomial(ring, lambda, 0, BigRational::one())
    }

    /// The point class `m = σ_{r x (n-r)}`.
    pub fn point(ring: &RingParams) -> Self {
        Self::schubert(ring, ring.point_partition()).expect("the box fits itself")
    }

    pub fn q_power(ring: &RingParams, d: i64) -> Self {
        Self::monomial(ring, Partition::empty(), d, BigRational::one())
            .expect("the empty partition fits every box")
    }

    pub fn monomial(
        ring: &RingParams,
        lambda: Partition,
        q: i64,
        coef: BigRational,
    ) -> Result<Self, RingError> {
        let mut out = Self::zero(ring);
        out.add_term(lambda, q, coef)?;
        Ok(out)
    }

    pub fn from_terms<I>(ring: &RingParams, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (Partition, i64, BigRational)>,
    {
        let mut out = Self::zero(ring);
        for (lambda, q, coef) in terms {
            out.add_term(lambda, q, coef)?;
        }
        Ok(out)
    }

    /// Adds `coef · σ_λ q^d`, merging with an existing term.
    pub fn add_term(&mut self, lambda: Partition, q: i64, coef: BigRational) -> Result<(), RingError> {
        self.ring.check_partition(&lambda)?;
        self.accumulate(Monomial::new(lambda, q), coef);
        Ok(())
    }

    pub(crate) fn accumulate(&mut self, key: Monomial, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &RingParams {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: &Partition, q: i64) -> BigRational {
        self.terms
            .get(&Monomial::new(lambda.clone(), q))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QHClass) -> Result<QHClass, RingError> {
        self.ring.ensure_same(&other.ring)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> QHClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            out.accumulate(k.clone(), c * factor);
        }
        out
    }

    /// Multiplies by `q^d`.
    pub fn shift_q(&self, d: i64) -> QHClass {
        QHClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (Monomial::new(k.partition.clone(), k.q + d), c.clone()))
                .collect(),
        }
    }

    /// Terms with no q-power.
    pub fn classical_part(&self) -> QHClass {
        QHClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.q == 0)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn monomial_degree(&self, key: &Monomial) -> i64 {
        2 * key.partition.size() as i64 + self.ring.q_degree() * key.q
    }

    /// The common real degree of all terms, if the class is homogeneous and
    /// nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(|k| self.monomial_degree(k));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn product(&self, other: &QHClass) -> Result<QHClass, RingError> {
        quantum_product(self, other)
    }

    /// `self^g` by repeated squaring; `self^0 = 1`.
    pub fn power(&self, g: u64) -> QHClass {
        let mut result = QHClass::one(&self.ring);
        let mut base = self.clone();
        let mut e = g;
        while e > 0 {
            if e & 1 == 1 {
                result = quantum_product(&result, &base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = quantum_product(&base, &base).expect("same ring");
            }
        }
        result
    }

    /// Returns `(c, λ, d)` when the class is the single term `c σ_λ q^d`.
    pub fn split_form(&self) -> Option<SplitForm> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(SplitForm {
            scalar: c.clone(),
            partition: k.partition.clone(),
            q_exp: k.q,
        })
    }

    /// Returns the singular class `α` and exponent `d` with `self = α q^d`,
    /// when every term carries the same power of `q`.
    pub fn split_q_power(&self) -> Option<QSplit> {
        let d = self.terms.keys().next()?.q;
        if self.terms.keys().any(|k| k.q != d) {
            return None;
        }
        Some(QSplit {
            singular: self.shift_q(-d),
            q_exp: d,
        })
    }
}

/// Schubert basis `σ_λ`, one class per partition in the box, graded order.
pub fn schubert_basis(ring: &RingParams) -> Vec<QHClass> {
    ring.box_partitions()
        .into_iter()
        .map(|lambda| QHClass::schubert(ring, lambda).expect("box partitions fit"))
        .collect()
}

impl fmt::Display for QHClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

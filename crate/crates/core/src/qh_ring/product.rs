use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, QHClass, RingError};
use crate::partitions::{lr_expand, reduce_mod_rim_hooks, Partition};

/// `σ_λ ∗ σ_μ` as `(core, q-exponent, integer coefficient)` triples.
type BasisProduct = Arc<Vec<(Partition, i64, BigInt)>>;
type ProductKey = (usize, usize, Partition, Partition);

fn cache() -> &'static RwLock<HashMap<ProductKey, BasisProduct>> {
    static CACHE: OnceLock<RwLock<HashMap<ProductKey, BasisProduct>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Rim-hook rule: expand `s_λ s_μ` over partitions with at most `r` rows,
/// then fold each `ν` back into the box by removing n-rim hooks.
fn basis_product(r: usize, n: usize, lambda: &Partition, mu: &Partition) -> BasisProduct {
    let key = (r, n, lambda.clone(), mu.clone());
    if let Some(hit) = cache().read().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let mut acc: BTreeMap<(i64, Partition), BigInt> = BTreeMap::new();
    for (nu, c) in lr_expand(lambda, mu, r) {
        let reduced = reduce_mod_rim_hooks(&nu, r, n).expect("ν has at most r rows");
        if let Some(red) = reduced {
            let term = BigInt::from(c) * BigInt::from(red.sign);
            *acc.entry((red.removed as i64, red.core)).or_default() += term;
        }
    }
    let product: BasisProduct = Arc::new(
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((d, core), c)| (core, d, c))
            .collect(),
    );
    cache().write().unwrap().insert(key, Arc::clone(&product));
    product
}

/// The quantum product, extended bilinearly from the Schubert basis.
pub fn quantum_product(a: &QHClass, b: &QHClass) -> Result<QHClass, RingError> {
    a.ring.ensure_same(&b.ring)?;
    let ring = &a.ring;
    let mut out = QHClass::zero(ring);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let coef = ca * cb;
            for (core, d, c) in basis_product(ring.r, ring.n, &ka.partition, &kb.partition).iter() {
                let key = Monomial::new(core.clone(), ka.q + kb.q + d);
                out.accumulate(key, &coef * BigRational::from_integer(c.clone()));
            }
        }
    }
    Ok(out)
}

/// A Laurent polynomial in `q` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coefs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn coefficient(&self, d: i64) -> BigRational {
        self.coefs.get(&d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coefs.iter().map(|(d, c)| (*d, c))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefs.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.coefs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let q = match d {
                0 => String::new(),
                1 => "q".to_string(),
                d => format!("q^{d}"),
            };
            match (q.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => f.write_str(&q)?,
                (false, false) => write!(f, "{c}*{q}")?,
            }
        }
        Ok(())
    }
}

/// `⟨a, b⟩`: the coefficient of the point class `m` in `a ∗ b`, keeping every
/// power of `q`.
pub fn poincare_pairing(a: &QHClass, b: &QHClass) -> Result<LaurentPoly, RingError> {
    let prod = quantum_product(a, b)?;
    let top = prod.ring.point_partition();
    let coefs = prod
        .terms
        .iter()
        .filter(|(k, _)| k.partition == top)
        .map(|(k, c)| (k.q, c.clone()))
        .collect();
    Ok(LaurentPoly { coefs })
}

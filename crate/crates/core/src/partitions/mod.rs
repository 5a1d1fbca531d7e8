//! Integer partitions and the combinatorics the quantum product is built on:
//! box enumeration, complements, Littlewood-Richardson coefficients and
//! n-rim-hook reduction.
//!
//! Parts are row lengths. The Schubert basis of `Gr(r, n)` is indexed by the
//! partitions fitting a box with `r` rows and `n - r` columns.

mod lr;
mod rim_hook;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use lr::{lr_coefficient, lr_expand};
pub use rim_hook::{reduce_mod_rim_hooks, remove_rim_hook, RimHookReduction, RimHookRemoval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<usize>),
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
    #[error("partition ({partition}) does not fit the {rows}x{cols} box")]
    OutsideBox {
        partition: Partition,
        rows: usize,
        cols: usize,
    },
    #[error("partition ({partition}) has more than {rows} rows")]
    TooManyRows { partition: Partition, rows: usize },
    #[error("invalid Grassmannian Gr({r},{n}): need 1 <= r <= n-1")]
    InvalidGrassmannian { r: usize, n: usize },
}

/// A weakly decreasing sequence of positive integers.
///
/// Trailing zeros are stripped on construction, so equal partitions have
/// identical representations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Partition { parts })
    }

    /// Trusted constructor for parts already known to be a partition.
    pub(crate) fn from_parts_unchecked(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The rectangle with `rows` rows of length `cols`; empty if either is 0.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if rows == 0 || cols == 0 {
            return Partition::empty();
        }
        Partition {
            parts: vec![cols; rows],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `i` (0-based), zero past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn fits_box(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    /// True if the diagram of `self` contains the diagram of `other`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| self.parts[i] >= other.parts[i])
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }
}

/// Graded order: by size first, then lexicographically by parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma separated parts; the empty partition renders as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Accepts `"3,1"`, `""` and `"0"` (the last two are the empty partition).
impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

/// Every partition with at most `rows` parts, each at most `cols`, in graded
/// order.
pub fn partitions_in_box(rows: usize, cols: usize) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<usize>, rows: usize, max: usize, out: &mut Vec<Partition>) {
        out.push(Partition::from_parts_unchecked(prefix.clone()));
        if prefix.len() == rows {
            return;
        }
        for p in 1..=max {
            prefix.push(p);
            extend(prefix, rows, p, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    extend(&mut Vec::new(), rows, cols, &mut out);
    out.sort();
    out
}

/// Every partition of `size` with at most `max_rows` rows and largest part at
/// most `max_part`, in graded order.
pub fn partitions_of(size: usize, max_rows: usize, max_part: usize) -> Vec<Partition> {
    fn extend(
        prefix: &mut Vec<usize>,
        remaining: usize,
        rows_left: usize,
        max: usize,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition::from_parts_unchecked(prefix.clone()));
            return;
        }
        if rows_left == 0 || rows_left * max < remaining {
            return;
        }
        for p in (1..=max.min(remaining)).rev() {
            prefix.push(p);
            extend(prefix, remaining - p, rows_left - 1, p, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    extend(&mut Vec::new(), size, max_rows, max_part, &mut out);
    out.sort();
    out
}

/// The complementary partition in the `rows x cols` box:
/// `λ∨_i = cols - λ_{rows+1-i}`.
pub fn complement(lambda: &Partition, rows: usize, cols: usize) -> Result<Partition, PartitionError> {
    if !lambda.fits_box(rows, cols) {
        return Err(PartitionError::OutsideBox {
            partition: lambda.clone(),
            rows,
            cols,
        });
    }
    let parts = (0..rows).map(|i| cols - lambda.part(rows - 1 - i)).collect();
    Ok(Partition::from_parts_unchecked(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn canonical_form_strips_zeros() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert_eq!(p(&[0]), Partition::empty());
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,x".parse::<Partition>().is_err());
        assert!("1,2".parse::<Partition>().is_err());
        assert_eq!(p(&[3, 1]).to_string(), "3,1");
    }

    #[test]
    fn box_enumeration_examples() {
        assert_eq!(partitions_in_box(1, 2), vec![p(&[]), p(&[1]), p(&[2])]);
        assert_eq!(
            partitions_in_box(2, 2),
            vec![p(&[]), p(&[1]), p(&[1, 1]), p(&[2]), p(&[2, 1]), p(&[2, 2])]
        );
        assert_eq!(partitions_in_box(0, 5), vec![p(&[])]);
        assert_eq!(partitions_in_box(5, 0), vec![p(&[])]);
    }

    #[test]
    fn box_counts_are_binomial() {
        for rows in 0..=12 {
            for cols in 0..=(12 - rows) {
                assert_eq!(partitions_in_box(rows, cols).len(), binomial(rows + cols, rows));
            }
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&p(&[]), 2, 2).unwrap(), p(&[2, 2]));
        assert_eq!(complement(&p(&[2, 1]), 2, 2).unwrap(), p(&[1]));
        assert_eq!(complement(&p(&[3, 1]), 2, 4).unwrap(), p(&[3, 1]));
        assert!(complement(&p(&[3]), 2, 2).is_err());
        assert!(complement(&p(&[1, 1, 1]), 2, 2).is_err());
    }

    #[test]
    fn complement_is_involution() {
        for rows in 0..=5 {
            for cols in 0..=5 {
                for lambda in partitions_in_box(rows, cols) {
                    let dual = complement(&lambda, rows, cols).unwrap();
                    assert_eq!(complement(&dual, rows, cols).unwrap(), lambda);
                    assert_eq!(lambda.size() + dual.size(), rows * cols);
                }
            }
        }
    }

    #[test]
    fn partitions_of_matches_box_filter() {
        for size in 0..=9 {
            let all = partitions_of(size, 3, 4);
            let expected: Vec<_> = partitions_in_box(3, 4)
                .into_iter()
                .filter(|q| q.size() == size)
                .collect();
            assert_eq!(all, expected);
        }
    }

    #[test]
    fn conjugate_transposes() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[]).conjugate(), p(&[]));
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
    }
}

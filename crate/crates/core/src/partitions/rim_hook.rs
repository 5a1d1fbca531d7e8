use super::{Partition, PartitionError};

/// One way of stripping a border strip off a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RimHookRemoval {
    pub result: Partition,
    /// Number of rows the removed strip occupies.
    pub height: usize,
}

/// Outcome of reducing a partition into the `r x (n - r)` box by repeated
/// n-rim-hook removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RimHookReduction {
    pub core: Partition,
    /// Number of hooks removed; the q-exponent of the resulting term.
    pub removed: usize,
    /// Product of `(-1)^(r - height)` over the removed hooks.
    pub sign: i8,
}

/// All partitions obtained from `nu` by removing a connected border strip of
/// exactly `size` cells, with the height of each strip.
///
/// Works on beta-numbers `β_i = ν_i + (ℓ - 1 - i)`: removing a strip of size
/// `s` ending in row `i` moves `β_i` to the free position `β_i - s`, and the
/// strip's height is one more than the number of beta-numbers jumped over.
/// Results are listed by the row the strip starts in, from the bottom up.
pub fn remove_rim_hook(nu: &Partition, size: usize) -> Vec<RimHookRemoval> {
    if size == 0 {
        return Vec::new();
    }
    let len = nu.len();
    let beta: Vec<usize> = (0..len).map(|i| nu.part(i) + (len - 1 - i)).collect();
    let mut out = Vec::new();
    for i in (0..len).rev() {
        let Some(target) = beta[i].checked_sub(size) else {
            continue;
        };
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&b| target < b && b < beta[i]).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts = moved
            .iter()
            .enumerate()
            .map(|(k, &b)| b - (len - 1 - k))
            .collect();
        out.push(RimHookRemoval {
            result: Partition::from_parts_unchecked(parts),
            height: jumped + 1,
        });
    }
    out
}

/// Reduces `nu` (at most `r` rows) into the `r x (n - r)` box by removing
/// n-rim hooks, or returns `None` when the reduction gets stuck outside the
/// box and the term vanishes.
pub fn reduce_mod_rim_hooks(
    nu: &Partition,
    r: usize,
    n: usize,
) -> Result<Option<RimHookReduction>, PartitionError> {
    if r == 0 || r >= n {
        return Err(PartitionError::InvalidGrassmannian { r, n });
    }
    if nu.len() > r {
        return Err(PartitionError::TooManyRows {
            partition: nu.clone(),
            rows: r,
        });
    }
    let mut current = nu.clone();
    let mut removed = 0;
    let mut sign = 1i8;
    while !current.fits_box(r, n - r) {
        // Every removal order reaches the same n-core with the same sign, so
        // taking the first available hook is enough.
        let Some(step) = remove_rim_hook(&current, n).into_iter().next() else {
            return Ok(None);
        };
        if (r - step.height) % 2 == 1 {
            sign = -sign;
        }
        removed += 1;
        current = step.result;
    }
    Ok(Some(RimHookReduction {
        core: current,
        removed,
        sign,
    }))
}

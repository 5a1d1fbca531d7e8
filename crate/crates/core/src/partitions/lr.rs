use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::{partitions_of, Partition};

type LrKey = (Partition, Partition, Partition);

fn cache() -> &'static RwLock<HashMap<LrKey, u64>> {
    static CACHE: OnceLock<RwLock<HashMap<LrKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The Littlewood-Richardson coefficient `c^ν_{λμ}`: the number of skew
/// tableaux of shape `ν/λ` and content `μ` whose reverse reading word is a
/// lattice word.
///
/// Counts are produced one tableau at a time, so `u64` cannot overflow at any
/// size this enumeration can finish.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if nu.size() != lambda.size() + mu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    let key = (lambda.clone(), mu.clone(), nu.clone());
    if let Some(&c) = cache().read().unwrap().get(&key) {
        return c;
    }
    let c = count_lr_tableaux(lambda, mu, nu);
    cache().write().unwrap().insert(key, c);
    c
}

/// The classical product `s_λ · s_μ` truncated to partitions with at most
/// `max_rows` rows, as `(ν, c^ν_{λμ})` pairs in graded order.
pub fn lr_expand(lambda: &Partition, mu: &Partition, max_rows: usize) -> Vec<(Partition, u64)> {
    let size = lambda.size() + mu.size();
    let widest = lambda.part(0) + mu.part(0);
    partitions_of(size, max_rows, widest)
        .into_iter()
        .filter(|nu| nu.contains(lambda) && nu.contains(mu))
        .filter_map(|nu| {
            let c = lr_coefficient(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect()
}

struct Filling<'a> {
    lambda: &'a Partition,
    nu: &'a Partition,
    content: &'a [usize],
    /// Cells of ν/λ in reverse reading order: rows top to bottom, each row
    /// right to left.
    cells: Vec<(usize, usize)>,
    /// `grid[i][j]` holds the letter in cell (i, j), 0 when unfilled or in λ.
    grid: Vec<Vec<usize>>,
    /// `used[k]` counts placed copies of letter `k + 1`.
    used: Vec<usize>,
}

fn count_lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|i| (lambda.part(i)..nu.part(i)).rev().map(move |j| (i, j)))
        .collect();
    let mut state = Filling {
        lambda,
        nu,
        content: mu.parts(),
        grid: (0..nu.len()).map(|i| vec![0; nu.part(i)]).collect(),
        used: vec![0; mu.len()],
        cells,
    };
    state.fill(0)
}

impl Filling<'_> {
    fn fill(&mut self, index: usize) -> u64 {
        let Some(&(i, j)) = self.cells.get(index) else {
            return 1;
        };
        // Weakly increasing along rows: the cell to the right bounds us above.
        let upper = if j + 1 < self.nu.part(i) {
            self.grid[i][j + 1]
        } else {
            self.content.len()
        };
        // Strictly increasing down columns.
        let lower = if i > 0 && j >= self.lambda.part(i - 1) {
            self.grid[i - 1][j] + 1
        } else {
            1
        };
        let mut total = 0;
        for letter in lower..=upper.min(i + 1) {
            let k = letter - 1;
            if self.used[k] == self.content[k] {
                continue;
            }
            if k > 0 && self.used[k] + 1 > self.used[k - 1] {
                continue;
            }
            self.used[k] += 1;
            self.grid[i][j] = letter;
            total += self.fill(index + 1);
            self.grid[i][j] = 0;
            self.used[k] -= 1;
        }
        total
    }
}

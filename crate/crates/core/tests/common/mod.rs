//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code under test except for constructing partitions.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use qsc_core::partitions::{partitions_of, Partition};

pub fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Integer polynomial in `k` variables keyed by exponent vectors.
pub type Poly = BTreeMap<Vec<u32>, i64>;

/// `s_λ(x₁..x_k)` as a sum over semistandard tableaux.
pub fn schur_poly(lambda: &Partition, k: usize) -> Poly {
    let cells: Vec<(usize, usize)> = (0..lambda.len())
        .flat_map(|i| (0..lambda.part(i)).map(move |j| (i, j)))
        .collect();
    let mut grid = vec![vec![0u32; lambda.part(0)]; lambda.len()];
    let mut out = Poly::new();
    fill_ssyt(&cells, 0, &mut grid, k as u32, &mut out);
    out
}

fn fill_ssyt(cells: &[(usize, usize)], idx: usize, grid: &mut [Vec<u32>], k: u32, out: &mut Poly) {
    if idx == cells.len() {
        let mut exps = vec![0u32; k as usize];
        for row in grid.iter() {
            for &v in row {
                if v > 0 {
                    exps[(v - 1) as usize] += 1;
                }
            }
        }
        *out.entry(exps).or_default() += 1;
        return;
    }
    let (i, j) = cells[idx];
    let lo_row = if j > 0 { grid[i][j - 1] } else { 1 };
    let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
    for v in lo_row.max(lo_col).max(1)..=k {
        grid[i][j] = v;
        fill_ssyt(cells, idx + 1, grid, k, out);
    }
    grid[i][j] = 0;
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Writes a symmetric polynomial in the Schur basis by peeling off the
/// lexicographically largest monomial, which is always a partition.
pub fn schur_decompose(mut poly: Poly, k: usize) -> BTreeMap<Partition, i64> {
    let mut out = BTreeMap::new();
    poly.retain(|_, c| *c != 0);
    while let Some((lead, &c)) = poly.iter().next_back() {
        let lambda = Partition::new(lead.iter().map(|&e| e as usize).collect()).unwrap();
        for (e, v) in schur_poly(&lambda, k) {
            *poly.entry(e).or_default() -= c * v;
        }
        poly.retain(|_, c| *c != 0);
        out.insert(lambda, c);
    }
    out
}

/// Classical `s_λ s_μ` in the Schur basis, with enough variables to see
/// every constituent.
pub fn schur_product(lambda: &Partition, mu: &Partition) -> BTreeMap<Partition, i64> {
    let k = (lambda.len() + mu.len()).max(1);
    schur_decompose(poly_mul(&schur_poly(lambda, k), &schur_poly(mu, k)), k)
}

fn cdet(m: DMatrix<Complex64>) -> Complex64 {
    m.determinant()
}

/// `s_λ(x)` by the bialternant formula `det(x_i^{λ_j + k - 1 - j}) / det(x_i^{k - 1 - j})`.
pub fn schur_at(lambda: &Partition, xs: &[Complex64]) -> Complex64 {
    let k = xs.len();
    let num = DMatrix::from_fn(k, k, |i, j| xs[i].powu((lambda.part(j) + k - 1 - j) as u32));
    let den = DMatrix::from_fn(k, k, |i, j| xs[i].powu((k - 1 - j) as u32));
    cdet(num) / cdet(den)
}

/// The `r`-subsets of roots of `x^n = (-1)^{r-1}`. Evaluating Schubert
/// classes as Schur polynomials at these points, with `q = 1`, is a ring
/// homomorphism out of quantum cohomology, and together the points separate
/// classes of fixed degree.
pub fn vafa_intriligator_points(r: usize, n: usize) -> Vec<Vec<Complex64>> {
    let offset = if r % 2 == 1 { 0.0 } else { 0.5 };
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + offset) / n as f64))
        .collect();
    let mut out = Vec::new();
    subsets(n, r, 0, &mut Vec::new(), &mut |s| out.push(s.iter().map(|&i| roots[i]).collect()));
    out
}

fn subsets(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == r {
        f(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, r, i + 1, cur, f);
        cur.pop();
    }
}

pub type Outcome = Option<(Partition, usize, i8)>;

/// Every outcome of reducing `nu` into the `r x (n - r)` box, over all
/// orders of n-rim-hook removal. Hooks are located directly on the diagram:
/// a border strip of size `n` starting in row `top` and ending in row `bot`.
pub fn all_reduction_outcomes(nu: &Partition, r: usize, n: usize) -> BTreeSet<Outcome> {
    let mut out = BTreeSet::new();
    explore(nu.parts().to_vec(), r, n, 0, 1, &mut out);
    out
}

fn explore(parts: Vec<usize>, r: usize, n: usize, removed: usize, sign: i8, out: &mut BTreeSet<Outcome>) {
    let nu = Partition::new(parts.clone()).unwrap();
    if nu.fits_box(r, n - r) {
        out.insert(Some((nu, removed, sign)));
        return;
    }
    let strips = border_strips(&parts, n);
    if strips.is_empty() {
        out.insert(None);
        return;
    }
    for (result, height) in strips {
        let s = if (r - height) % 2 == 1 { -sign } else { sign };
        explore(result, r, n, removed + 1, s, out);
    }
}

/// Border strips of `size` cells, found by trying every (top, bottom) row
/// pair: the strip leaves row `i` (top ≤ i < bot) with `ν_{i+1} - 1` cells,
/// i.e. row `i` shrinks to `ν_{i+1} - 1`, and row `bot` gives up the rest.
fn border_strips(parts: &[usize], size: usize) -> Vec<(Vec<usize>, usize)> {
    let len = parts.len();
    let at = |i: usize| parts.get(i).copied().unwrap_or(0);
    let mut out = Vec::new();
    for top in 0..len {
        for bot in top..len {
            let mut new = parts.to_vec();
            let mut taken = 0usize;
            let mut ok = true;
            for (i, slot) in new.iter_mut().enumerate().take(bot).skip(top) {
                let keep = at(i + 1).checked_sub(1);
                match keep {
                    Some(k) if k < parts[i] => {
                        taken += parts[i] - k;
                        *slot = k;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || taken >= size {
                continue;
            }
            let rest = size - taken;
            if rest > parts[bot] {
                continue;
            }
            new[bot] = parts[bot] - rest;
            // Bottom row must stay weakly above the row below, and the strip
            // must touch it: the new end of row `bot` is at or past the end
            // of row `bot + 1`.
            if new[bot] < at(bot + 1) {
                continue;
            }
            if top > 0 && new[top] > parts[top - 1] {
                continue;
            }
            // The strip is connected with no 2x2 block when each upper row
            // keeps exactly ν_{i+1} - 1 cells and the result is a partition.
            if new.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            while new.last() == Some(&0) {
                new.pop();
            }
            out.push((new, bot - top + 1));
        }
    }
    out
}

/// All partitions with at most `rows` rows and size at most `max_size`.
pub fn partitions_up_to(max_size: usize, rows: usize) -> Vec<Partition> {
    (0..=max_size)
        .flat_map(|s| partitions_of(s, rows, s))
        .collect()
}

//! Brute-force `h^q(P^n, Omega^p(k))`, independent of the closed formula.
//!
//! * `h^0` is the kernel of contraction with the Euler field on
//!   `Lambda^p V* ⊗ S^{k-p} V*`, computed by exact elimination one torus
//!   weight at a time.
//! * `h^n` comes from Serre duality, `h^n(Omega^p(k)) = h^0(Omega^{n-p}(-k))`.
//! * The middle degrees come from the long exact sequence of
//!   `0 -> Omega^p(k) -> O(k-p)^{C(n+1,p)} -> Omega^{p-1}(k) -> 0`, using that
//!   `O(m)` has no middle cohomology.

use std::collections::HashMap;

fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(parts - 1, total - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if items.len() < size {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(&items[1..], size - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(subsets(&items[1..], size));
    with
}

/// Rank over Q by fraction-free elimination.
fn rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = *x * a - y * b;
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `h^0(P^n, Omega^p(k))` as a kernel dimension.
pub fn global_sections(n: usize, k: i64, p: usize) -> u64 {
    if p > n || k < p as i64 {
        return 0;
    }
    let vars = n + 1;
    let mut kernel = 0u64;
    for weight in compositions(vars, k as usize) {
        let support: Vec<usize> = (0..vars).filter(|&i| weight[i] > 0).collect();
        let sources = subsets(&support, p);
        if sources.is_empty() {
            continue;
        }
        if p == 0 {
            kernel += 1;
            continue;
        }
        let targets = subsets(&support, p - 1);
        let index: HashMap<&Vec<usize>, usize> =
            targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
        // Columns are sources; stored as rows of the transpose (same rank).
        let matrix: Vec<Vec<i128>> = sources
            .iter()
            .map(|src| {
                let mut row = vec![0i128; targets.len()];
                for (pos, _) in src.iter().enumerate() {
                    let mut rest = src.clone();
                    rest.remove(pos);
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    row[index[&rest]] += sign;
                }
                row
            })
            .collect();
        kernel += (sources.len() - rank(matrix)) as u64;
    }
    kernel
}

fn monomials(vars: usize, degree: i64) -> u64 {
    if degree < 0 {
        0
    } else {
        compositions(vars, degree as usize).len() as u64
    }
}

fn line_bundle(n: usize, m: i64, q: usize) -> u64 {
    if q == 0 {
        monomials(n + 1, m)
    } else if q == n {
        monomials(n + 1, -m - n as i64 - 1)
    } else {
        0
    }
}

fn choose(a: u64, b: u64) -> u64 {
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

/// `h^q(P^n, Omega^p(k))` for all `p, q`, row `p` first.
pub fn table(n: usize, k: i64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let mut row = vec![0u64; n + 1];
        if p == 0 {
            for (q, slot) in row.iter_mut().enumerate() {
                *slot = line_bundle(n, k, q);
            }
        } else {
            row[0] = global_sections(n, k, p);
            row[n] = global_sections(n, -k, n - p);
            if n >= 2 {
                let prev = &rows[p - 1];
                let copies = choose(n as u64 + 1, p as u64) * line_bundle(n, k - p as i64, 0);
                row[1] = (prev[0] + row[0])
                    .checked_sub(copies)
                    .expect("exact sequence forces a nonnegative h^1");
                row[2..n].copy_from_slice(&prev[1..n - 1]);
            }
        }
        rows.push(row);
    }
    rows
}

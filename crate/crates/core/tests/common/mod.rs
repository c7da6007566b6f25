//! Independent reference implementations used only by the tests. Everything
//! here works on plain `i64` rows with `i128` results, straight from the
//! definitions.

#![allow(dead_code, clippy::needless_range_loop)]

use kmatch::{ExactNumber, NonnegMatrix, SymZeroDiagMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rows = Vec<Vec<i64>>;

pub fn exact(v: i128) -> ExactNumber {
    ExactNumber::from(v)
}

pub fn nonneg(rows: &Rows) -> NonnegMatrix {
    if rows.is_empty() {
        return NonnegMatrix::zeros(0, 0);
    }
    NonnegMatrix::from_ints(rows).unwrap()
}

pub fn symmetric(rows: &Rows) -> SymZeroDiagMatrix {
    SymZeroDiagMatrix::from_ints(rows).unwrap()
}

pub fn random_rows(rng: &mut ChaCha8Rng, m: usize, n: usize, max: i64) -> Rows {
    (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max)).collect())
        .collect()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, m: usize, max: i64) -> Rows {
    let mut a = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let w = rng.gen_range(0..=max);
            a[i][j] = w;
            a[j][i] = w;
        }
    }
    a
}

/// Every permutation of `0..n`, by recursive insertion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn inversions(p: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

/// `Σ_σ Π_i a_{iσ(i)}`.
pub fn permanent(a: &Rows) -> i128 {
    permutations(a.len())
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| a[i][j] as i128)
                .product::<i128>()
        })
        .sum()
}

/// Leibniz formula.
pub fn determinant(a: &Rows) -> i128 {
    permutations(a.len())
        .iter()
        .map(|p| {
            let t: i128 = p
                .iter()
                .enumerate()
                .map(|(i, &j)| a[i][j] as i128)
                .product();
            if inversions(p).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// All perfect matchings of `vertices` as lists of pairs.
pub fn perfect_matchings(vertices: &[usize]) -> Vec<Vec<(usize, usize)>> {
    match vertices {
        [] => vec![vec![]],
        [_] => vec![],
        [first, rest @ ..] => {
            let mut out = Vec::new();
            for (idx, &partner) in rest.iter().enumerate() {
                let remaining: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != idx)
                    .map(|(_, &v)| v)
                    .collect();
                for mut m in perfect_matchings(&remaining) {
                    m.insert(0, (*first, partner));
                    out.push(m);
                }
            }
            out
        }
    }
}

pub fn hafnian(a: &Rows) -> i128 {
    let vs: Vec<usize> = (0..a.len()).collect();
    perfect_matchings(&vs)
        .iter()
        .map(|m| m.iter().map(|&(i, j)| a[i][j] as i128).product::<i128>())
        .sum()
}

/// Pfaffian of the skew matrix whose upper triangle is that of `a`, with the
/// sign of each matching taken from the permutation `(i1 j1 i2 j2 ...)`.
pub fn pfaffian(a: &Rows) -> i128 {
    let vs: Vec<usize> = (0..a.len()).collect();
    perfect_matchings(&vs)
        .iter()
        .map(|m| {
            let flat: Vec<usize> = m.iter().flat_map(|&(i, j)| [i, j]).collect();
            let t: i128 = m.iter().map(|&(i, j)| a[i][j] as i128).product();
            if inversions(&flat).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

pub fn skew_dense(a: &Rows) -> Rows {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => a[i][j],
                    std::cmp::Ordering::Greater => -a[j][i],
                    std::cmp::Ordering::Equal => 0,
                })
                .collect()
        })
        .collect()
}

/// Size-`k` subsets of `0..n` as bitmasks.
pub fn masks(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == k)
}

fn pick(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `Σ_{|α|=|β|=k} perm B[α, β]`, with the `k = 0` term equal to one.
pub fn perm_k(b: &Rows, k: usize) -> i128 {
    let (m, n) = (b.len(), b.first().map_or(0, Vec::len));
    let mut total = 0;
    for r in masks(m, k) {
        for c in masks(n, k) {
            let (ri, ci) = (pick(r, m), pick(c, n));
            let sub: Rows = ri
                .iter()
                .map(|&i| ci.iter().map(|&j| b[i][j]).collect())
                .collect();
            total += permanent(&sub);
        }
    }
    total
}

/// `Σ_{|α|=2k} haf A[α, α]`.
pub fn haf_k(a: &Rows, k: usize) -> i128 {
    let m = a.len();
    masks(m, 2 * k)
        .map(|s| {
            let idx = pick(s, m);
            let sub: Rows = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| a[i][j]).collect())
                .collect();
            hafnian(&sub)
        })
        .sum()
}

/// Edges `(u, v, w)` of the bipartite graph of `b`, right side shifted by `m`.
pub fn bipartite_edges(b: &Rows) -> Vec<(usize, usize, i64)> {
    let m = b.len();
    let mut out = Vec::new();
    for (i, row) in b.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if w != 0 {
                out.push((i, m + j, w));
            }
        }
    }
    out
}

pub fn graph_edges(a: &Rows) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i][j] != 0 {
                out.push((i, j, a[i][j]));
            }
        }
    }
    out
}

/// Sum over every `k`-subset of edges that is a matching of the product of
/// its weights.
pub fn matching_sum(edges: &[(usize, usize, i64)], k: usize) -> i128 {
    fn rec(
        edges: &[(usize, usize, i64)],
        start: usize,
        k: usize,
        used: &mut Vec<usize>,
        w: i128,
    ) -> i128 {
        if k == 0 {
            return w;
        }
        let mut total = 0;
        for e in start..edges.len() {
            let (u, v, x) = edges[e];
            if used.contains(&u) || used.contains(&v) {
                continue;
            }
            used.push(u);
            used.push(v);
            total += rec(edges, e + 1, k - 1, used, w * x as i128);
            used.truncate(used.len() - 2);
        }
        total
    }
    rec(edges, 0, k, &mut Vec::new(), 1)
}

pub fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

//! Exact exponential-time kernels: permanent, hafnian, pfaffian, determinant,
//! and the definitional sums `perm_k` / `haf_k`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::matrix::{DenseMatrix, NonnegMatrix, SkewMatrix, SymZeroDiagMatrix};
use crate::subset::{binomial, enumerate_subsets};
use crate::{Error, ExactNumber, Result};

/// Size caps for the exact kernels. Exceeding one is an error, never an attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest permanent order (Ryser is `O(2^n n)`).
    pub max_permanent_order: usize,
    /// Largest hafnian order.
    pub max_hafnian_order: usize,
    /// Largest pfaffian order.
    pub max_pfaffian_order: usize,
    /// Budget for the definitional `perm_k` / `haf_k` sums, in kernel steps.
    pub max_direct_work: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_permanent_order: 30,
            max_hafnian_order: 20,
            max_pfaffian_order: 16,
            max_direct_work: 1 << 32,
        }
    }
}

impl Limits {
    /// Same caps for permanent and hafnian order.
    pub fn with_max_order(mut self, n: usize) -> Self {
        self.max_permanent_order = n;
        self.max_hafnian_order = n;
        self
    }
}

fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::ResourceLimit {
            what,
            actual: actual as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Clears denominators row by row. Returns the integer rows and the product
/// of the row multipliers.
fn integer_rows<'a, I>(rows: I) -> (Vec<Vec<BigInt>>, BigInt)
where
    I: Iterator<Item = &'a [ExactNumber]>,
{
    let mut scale = BigInt::one();
    let rows = rows
        .map(|row| {
            let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let out = row.iter().map(|x| x.numer() * (&d / x.denom())).collect();
            scale *= &d;
            out
        })
        .collect();
    (rows, scale)
}

pub fn permanent(m: &NonnegMatrix) -> Result<ExactNumber> {
    permanent_with(m, &Limits::default())
}

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums by one column.
pub fn permanent_with(m: &NonnegMatrix, limits: &Limits) -> Result<ExactNumber> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    check_cap("permanent order", n, limits.max_permanent_order)?;
    if n == 0 {
        return Ok(ExactNumber::one());
    }
    let (rows, scale) = integer_rows((0..n).map(|i| m.row(i)));
    let p = ryser(&rows);
    Ok(ExactNumber::from_big_rational(
        num_rational::BigRational::new(p, scale),
    ))
}

/// Ryser on an integer matrix (signs allowed).
pub(crate) fn ryser(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let small: Option<Vec<Vec<i64>>> = rows
        .iter()
        .map(|r| {
            let abs: BigInt = r.iter().map(|x| x.abs()).sum();
            if abs.bits() > 62 {
                return None;
            }
            r.iter().map(|x| x.to_i64()).collect()
        })
        .collect();
    let total = match small {
        Some(rows) => ryser_small(&rows),
        None => ryser_big(rows),
    };
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Accumulates `i128` terms and spills to a `BigInt` on overflow.
#[derive(Default)]
struct Accumulator {
    small: i128,
    big: BigInt,
}

impl Accumulator {
    fn add_small(&mut self, v: i128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = v;
            }
        }
    }

    fn add_big(&mut self, v: BigInt) {
        self.big += v;
    }

    fn finish(self) -> BigInt {
        self.big + self.small
    }
}

/// `Σ_{S ≠ ∅} (-1)^{|S|} Π_i Σ_{j∈S} a_ij` for rows whose absolute sums fit
/// in 62 bits.
fn ryser_small(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    // Π of absolute row sums bounds every product; below 2^127 the product
    // stays in i128.
    let bound: BigInt = rows
        .iter()
        .map(|r| BigInt::from(r.iter().map(|x| x.unsigned_abs() as i128).sum::<i128>()))
        .product();
    let narrow = bound.bits() <= 126;

    let chunk_bits = n.saturating_sub(12).min(n);
    let chunk_len: u64 = 1 << (n - chunk_bits);
    let chunks: u64 = 1 << chunk_bits;

    let run_chunk = |c: u64| -> BigInt {
        let lo = (c * chunk_len).max(1);
        let hi = (c + 1) * chunk_len;
        if lo >= hi {
            return BigInt::zero();
        }
        let mut gray = lo ^ (lo >> 1);
        let mut sums = vec![0i64; n];
        for (i, row) in rows.iter().enumerate() {
            sums[i] = (0..n).filter(|&j| gray >> j & 1 == 1).map(|j| row[j]).sum();
        }
        let mut acc = Accumulator::default();
        let mut g = lo;
        loop {
            let odd = gray.count_ones() % 2 == 1;
            if narrow {
                let mut p: i128 = 1;
                for &s in &sums {
                    p *= s as i128;
                    if p == 0 {
                        break;
                    }
                }
                acc.add_small(if odd { -p } else { p });
            } else if sums.iter().all(|&s| s != 0) {
                let p = wide_product(&sums);
                acc.add_big(if odd { -p } else { p });
            }
            g += 1;
            if g >= hi {
                break;
            }
            let bit = g.trailing_zeros() as usize;
            let mask = 1u64 << bit;
            gray ^= mask;
            if gray & mask != 0 {
                for (s, row) in sums.iter_mut().zip(rows) {
                    *s += row[bit];
                }
            } else {
                for (s, row) in sums.iter_mut().zip(rows) {
                    *s -= row[bit];
                }
            }
        }
        acc.finish()
    };

    if chunks == 1 {
        run_chunk(0)
    } else {
        (0..chunks).into_par_iter().map(run_chunk).sum()
    }
}

/// Product of nonzero `i64` values, in `i128` runs folded into a `BigInt`.
fn wide_product(vals: &[i64]) -> BigInt {
    let mut big: Option<BigInt> = None;
    let mut run: i128 = 1;
    for &v in vals {
        match run.checked_mul(v as i128) {
            Some(p) => run = p,
            None => {
                big = Some(match big {
                    Some(b) => b * run,
                    None => BigInt::from(run),
                });
                run = v as i128;
            }
        }
    }
    match big {
        Some(b) => b * run,
        None => BigInt::from(run),
    }
}

fn ryser_big(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut sums = vec![BigInt::zero(); n];
    let mut gray: u64 = 0;
    let mut total = BigInt::zero();
    for g in 1u64..(1 << n) {
        let bit = g.trailing_zeros() as usize;
        let mask = 1u64 << bit;
        gray ^= mask;
        let add = gray & mask != 0;
        for (s, row) in sums.iter_mut().zip(rows) {
            if add {
                *s += &row[bit];
            } else {
                *s -= &row[bit];
            }
        }
        if sums.iter().any(Zero::is_zero) {
            continue;
        }
        let p: BigInt = sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= p;
        } else {
            total += p;
        }
    }
    total
}

pub fn hafnian(a: &SymZeroDiagMatrix) -> Result<ExactNumber> {
    hafnian_with(a, &Limits::default())
}

/// Hafnian by pairing the lowest unmatched vertex with each remaining
/// neighbour. Sub-results are memoized on the set of unmatched vertices and
/// zero-weight pairs are skipped.
pub fn hafnian_with(a: &SymZeroDiagMatrix, limits: &Limits) -> Result<ExactNumber> {
    let n = a.order();
    if n % 2 == 1 {
        return Err(Error::Parity(n));
    }
    check_cap("hafnian order", n, limits.max_hafnian_order)?;
    check_cap("hafnian order", n, 64)?;
    let w = weights(n, |i, j| a.get(i, j).clone());
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(pair_lowest(full, &w, &mut memo, false))
}

fn weights(n: usize, f: impl Fn(usize, usize) -> ExactNumber) -> Vec<Vec<Option<ExactNumber>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = f(i, j);
                    (i != j && !v.is_zero()).then_some(v)
                })
                .collect()
        })
        .collect()
}

/// Sum over perfect matchings of the vertices in `mask`, expanding on the
/// lowest one. With `signed`, each pairing `(i, j)` carries `(-1)^t` where
/// `t` is the number of vertices of `mask` strictly between `i` and `j`,
/// which reproduces the sign of the interleaved permutation.
fn pair_lowest(
    mask: u64,
    w: &[Vec<Option<ExactNumber>>],
    memo: &mut HashMap<u64, ExactNumber>,
    signed: bool,
) -> ExactNumber {
    if mask == 0 {
        return ExactNumber::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut total = ExactNumber::zero();
    let mut between = 0u32;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if let Some(wij) = &w[i][j] {
            let sub = pair_lowest(rest & !(1u64 << j), w, memo, signed);
            if !sub.is_zero() {
                let term = wij * &sub;
                if signed && between % 2 == 1 {
                    total -= &term;
                } else {
                    total += term;
                }
            }
        }
        between += 1;
    }
    memo.insert(mask, total.clone());
    total
}

pub fn pfaffian(s: &SkewMatrix) -> Result<ExactNumber> {
    pfaffian_with(s, &Limits::default())
}

/// Signed sum over perfect matchings of `K_{2n}`, with the sign of the
/// permutation `[i_1 j_1 i_2 j_2 ...]`.
pub fn pfaffian_with(s: &SkewMatrix, limits: &Limits) -> Result<ExactNumber> {
    let n = s.order();
    if n % 2 == 1 {
        return Err(Error::Parity(n));
    }
    check_cap("pfaffian order", n, limits.max_pfaffian_order)?;
    check_cap("pfaffian order", n, 64)?;
    let w = weights(n, |i, j| s.get(i, j));
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(pair_lowest(full, &w, &mut memo, true))
}

/// Determinant by fraction-free (Bareiss) elimination after clearing
/// denominators row by row.
pub fn determinant(m: &DenseMatrix) -> Result<ExactNumber> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "determinant needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(ExactNumber::one());
    }
    let (mut a, scale) = integer_rows(m.entries().chunks(n));
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(ExactNumber::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    let det = if sign { -det } else { det };
    Ok(ExactNumber::from_big_rational(
        num_rational::BigRational::new(det, scale),
    ))
}

pub fn perm_k_direct(b: &NonnegMatrix, k: usize) -> Result<ExactNumber> {
    perm_k_direct_with(b, k, &Limits::default())
}

/// `perm_k B`: the sum of `perm B[α, β]` over all k-subsets `α` of rows and
/// `β` of columns. `perm_0 B = 1`.
pub fn perm_k_direct_with(b: &NonnegMatrix, k: usize, limits: &Limits) -> Result<ExactNumber> {
    let (m, n) = (b.rows(), b.cols());
    if k > m.min(n) {
        return Err(Error::Argument(format!(
            "k = {k} exceeds min(m, n) = {} for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    if k == 0 {
        return Ok(ExactNumber::one());
    }
    let work = binomial(m, k)
        .saturating_mul(binomial(n, k))
        .saturating_mul(k as u128)
        .saturating_mul(1u128 << k.min(127));
    if work > limits.max_direct_work {
        return Err(Error::ResourceLimit {
            what: "perm_k direct work",
            actual: work,
            limit: limits.max_direct_work,
        });
    }
    let cols: Vec<_> = enumerate_subsets(k, n).collect();
    let mut total = ExactNumber::zero();
    for alpha in enumerate_subsets(k, m) {
        for beta in &cols {
            total += permanent_with(&b.submatrix(&alpha, beta)?, limits)?;
        }
    }
    Ok(total)
}

pub fn haf_k_direct(a: &SymZeroDiagMatrix, k: usize) -> Result<ExactNumber> {
    haf_k_direct_with(a, k, &Limits::default())
}

/// `haf_k A`: the sum of `haf A[α, α]` over all 2k-subsets `α`. `haf_0 A = 1`.
pub fn haf_k_direct_with(a: &SymZeroDiagMatrix, k: usize, limits: &Limits) -> Result<ExactNumber> {
    let m = a.order();
    if 2 * k > m {
        return Err(Error::Argument(format!(
            "k = {k} exceeds floor(m/2) = {} for order {m}",
            m / 2
        )));
    }
    if k == 0 {
        return Ok(ExactNumber::one());
    }
    let work = binomial(m, 2 * k)
        .saturating_mul(2 * k as u128)
        .saturating_mul(1u128 << (2 * k).min(127));
    if work > limits.max_direct_work {
        return Err(Error::ResourceLimit {
            what: "haf_k direct work",
            actual: work,
            limit: limits.max_direct_work,
        });
    }
    let mut total = ExactNumber::zero();
    for alpha in enumerate_subsets(2 * k, m) {
        total += hafnian_with(&a.principal_submatrix(&alpha)?, limits)?;
    }
    Ok(total)
}

//! Block-matrix reductions from k-matchings to perfect matchings.
//!
//! For an `m × n` matrix `B` and `1 <= k <= min(m, n)`,
//!
//! ```text
//! B_k = [ B            1_{m, m-k} ]
//!       [ 1_{n-k, n}   0          ]
//! ```
//!
//! is square of order `m + n - k`. Every perfect matching of `G(B_k)` picks
//! `n - k` columns of `B` for the new rows, `m - k` rows of `B` for the new
//! columns, and a k-matching on what is left, so
//! `perm B_k = (m-k)! (n-k)! perm_k B`.
//!
//! For a symmetric zero-diagonal `A` of order `m`, the order `2m - 2k`
//! matrix `A_k = [[A, 1], [1, 0]]` gives `haf A_k = (m-2k)! haf_k A` in the
//! same way.

use crate::exact::{hafnian_with, permanent_with, Limits};
use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::{factorial, Error, ExactNumber, Result};

/// Builds `B_k`. When `k = min(m, n)` one or both padding blocks are empty.
pub fn build_bk(b: &NonnegMatrix, k: usize) -> Result<NonnegMatrix> {
    let (m, n) = (b.rows(), b.cols());
    if k == 0 || k > m.min(n) {
        return Err(Error::Argument(format!(
            "k = {k} must lie in [1, {}] for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    let size = m + n - k;
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..m {
        entries.extend_from_slice(b.row(i));
        entries.extend(std::iter::repeat_n(ExactNumber::one(), m - k));
    }
    for _ in 0..n - k {
        entries.extend(std::iter::repeat_n(ExactNumber::one(), n));
        entries.extend(std::iter::repeat_n(ExactNumber::zero(), m - k));
    }
    NonnegMatrix::new(size, size, entries)
}

/// Builds `A_k`, of order `2m - 2k`.
pub fn build_ak(a: &SymZeroDiagMatrix, k: usize) -> Result<SymZeroDiagMatrix> {
    let m = a.order();
    if k == 0 || 2 * k > m {
        return Err(Error::Argument(format!(
            "k = {k} must lie in [1, {}] for order {m}",
            m / 2
        )));
    }
    let pad = m - 2 * k;
    let mut out = SymZeroDiagMatrix::zeros(m + pad);
    for i in 0..m {
        for j in i + 1..m {
            out.set(i, j, a.get(i, j).clone());
        }
        for p in 0..pad {
            out.set(i, m + p, ExactNumber::one());
        }
    }
    Ok(out)
}

/// `perm B_k` together with the divisor `(m-k)!(n-k)!`.
pub fn bk_witness(
    b: &NonnegMatrix,
    k: usize,
    limits: &Limits,
) -> Result<(ExactNumber, ExactNumber)> {
    let bk = build_bk(b, k)?;
    let p = permanent_with(&bk, limits)?;
    Ok((p, factorial(b.rows() - k) * factorial(b.cols() - k)))
}

/// `haf A_k` together with the divisor `(m-2k)!`.
pub fn ak_witness(
    a: &SymZeroDiagMatrix,
    k: usize,
    limits: &Limits,
) -> Result<(ExactNumber, ExactNumber)> {
    let ak = build_ak(a, k)?;
    let h = hafnian_with(&ak, limits)?;
    Ok((h, factorial(a.order() - 2 * k)))
}

fn exact_quotient(
    value: ExactNumber,
    divisor: ExactNumber,
    integral_input: bool,
    context: impl FnOnce() -> String,
) -> Result<ExactNumber> {
    if integral_input && !value.is_divisible_by(&divisor) {
        return Err(Error::Consistency(format!(
            "{value} is not divisible by {divisor}; operands: {}",
            context()
        )));
    }
    Ok(value / divisor)
}

pub fn perm_k_via_reduction(b: &NonnegMatrix, k: usize) -> Result<ExactNumber> {
    perm_k_via_reduction_with(b, k, &Limits::default())
}

/// `perm_k B = perm B_k / ((m-k)!(n-k)!)`. For integer `B` the division must
/// be exact; anything else is reported as [`Error::Consistency`].
pub fn perm_k_via_reduction_with(
    b: &NonnegMatrix,
    k: usize,
    limits: &Limits,
) -> Result<ExactNumber> {
    let (p, d) = bk_witness(b, k, limits)?;
    exact_quotient(p, d, b.is_integral(), || format!("B = {b:?}, k = {k}"))
}

pub fn haf_k_via_reduction(a: &SymZeroDiagMatrix, k: usize) -> Result<ExactNumber> {
    haf_k_via_reduction_with(a, k, &Limits::default())
}

/// `haf_k A = haf A_k / (m-2k)!`, with the same divisibility check.
pub fn haf_k_via_reduction_with(
    a: &SymZeroDiagMatrix,
    k: usize,
    limits: &Limits,
) -> Result<ExactNumber> {
    let (h, d) = ak_witness(a, k, limits)?;
    exact_quotient(h, d, a.is_integral(), || format!("A = {a:?}, k = {k}"))
}

/// Embeds a `k × k` matrix in the top-left corner of an `m × n` zero matrix,
/// i.e. adds isolated vertices to both sides of its bipartite graph. Perfect
/// matchings of the original are exactly the k-matchings of the result.
pub fn pad_isolated(b: &NonnegMatrix, m: usize, n: usize) -> Result<NonnegMatrix> {
    if !b.is_square() {
        return Err(Error::Dimension(format!(
            "padding expects a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let k = b.rows();
    if m < k || n < k {
        return Err(Error::Argument(format!(
            "cannot pad a {k}x{k} matrix to {m}x{n}"
        )));
    }
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            entries.push(if i < k && j < k {
                b.get(i, j).clone()
            } else {
                ExactNumber::zero()
            });
        }
    }
    NonnegMatrix::new(m, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{haf_k_direct, hafnian, perm_k_direct, permanent};

    #[test]
    fn bk_shapes() {
        let b = NonnegMatrix::from_ints(&[[1, 2, 3], [4, 5, 6]]).unwrap();
        let bk = build_bk(&b, 1).unwrap();
        let want =
            NonnegMatrix::from_ints(&[[1, 2, 3, 1], [4, 5, 6, 1], [1, 1, 1, 0], [1, 1, 1, 0]])
                .unwrap();
        assert_eq!(bk, want);

        let sq = NonnegMatrix::from_ints(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(build_bk(&sq, 2).unwrap(), sq);

        let j2 = NonnegMatrix::ones(2, 2);
        assert_eq!(
            build_bk(&j2, 1).unwrap(),
            NonnegMatrix::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 0]]).unwrap()
        );

        // k = min(m, n) with m != n leaves a single padding strip
        let bk = build_bk(&b, 2).unwrap();
        assert_eq!(bk.rows(), 3);
        assert_eq!(bk.row(2), NonnegMatrix::ones(1, 3).row(0));

        assert!(matches!(build_bk(&b, 0), Err(Error::Argument(_))));
        assert!(matches!(build_bk(&b, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn ak_shapes() {
        let k4 = SymZeroDiagMatrix::complete(4);
        assert_eq!(build_ak(&k4, 2).unwrap(), k4);

        let a1 = build_ak(&k4, 1).unwrap();
        assert_eq!(a1.order(), 6);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j || (i >= 4 && j >= 4) { 0 } else { 1 };
                assert_eq!(a1.get(i, j), &want.into(), "({i},{j})");
            }
        }
        assert_eq!(
            build_ak(&SymZeroDiagMatrix::complete(3), 1)
                .unwrap()
                .order(),
            4
        );
        assert!(build_ak(&k4, 0).is_err());
        assert!(build_ak(&k4, 3).is_err());
    }

    #[test]
    fn reduction_values() {
        let j2 = NonnegMatrix::ones(2, 2);
        assert_eq!(perm_k_via_reduction(&j2, 1).unwrap(), 4.into());
        assert_eq!(perm_k_via_reduction(&j2, 2).unwrap(), 2.into());

        let k4 = SymZeroDiagMatrix::complete(4);
        assert_eq!(haf_k_via_reduction(&k4, 2).unwrap(), 3.into());
        assert_eq!(haf_k_via_reduction(&k4, 1).unwrap(), 6.into());
        assert_eq!(hafnian(&build_ak(&k4, 1).unwrap()).unwrap(), 12.into());
    }

    #[test]
    fn rectangular_agrees_with_direct() {
        let b = NonnegMatrix::from_ints(&[[3, 0, 1, 2], [1, 4, 0, 0], [2, 2, 5, 1]]).unwrap();
        for k in 1..=3 {
            assert_eq!(
                perm_k_via_reduction(&b, k).unwrap(),
                perm_k_direct(&b, k).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn rational_weights() {
        let h = ExactNumber::from_ratio(1, 2).unwrap();
        let b =
            NonnegMatrix::from_rows(vec![vec![h.clone(), 1.into()], vec![2.into(), h]]).unwrap();
        assert_eq!(
            perm_k_via_reduction(&b, 1).unwrap(),
            perm_k_direct(&b, 1).unwrap()
        );
        let a = SymZeroDiagMatrix::from_rows(vec![
            vec![0.into(), ExactNumber::from_ratio(1, 3).unwrap(), 1.into()],
            vec![ExactNumber::from_ratio(1, 3).unwrap(), 0.into(), 2.into()],
            vec![1.into(), 2.into(), 0.into()],
        ])
        .unwrap();
        assert_eq!(
            haf_k_via_reduction(&a, 1).unwrap(),
            ExactNumber::from_ratio(10, 3).unwrap()
        );
    }

    #[test]
    fn padding() {
        let one = NonnegMatrix::from_ints(&[[1]]).unwrap();
        let p = pad_isolated(&one, 2, 2).unwrap();
        assert_eq!(p, NonnegMatrix::from_ints(&[[1, 0], [0, 0]]).unwrap());
        assert_eq!(perm_k_direct(&p, 1).unwrap(), 1.into());

        let j2 = NonnegMatrix::ones(2, 2);
        let p = pad_isolated(&j2, 3, 3).unwrap();
        assert_eq!(perm_k_direct(&p, 2).unwrap(), 2.into());
        assert_eq!(pad_isolated(&j2, 2, 2).unwrap(), j2);
        assert_eq!(
            perm_k_direct(&pad_isolated(&j2, 2, 5).unwrap(), 2).unwrap(),
            permanent(&j2).unwrap()
        );
        assert!(matches!(pad_isolated(&j2, 1, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn haf_reduction_matches_direct() {
        let a = SymZeroDiagMatrix::from_ints(&[
            [0, 1, 0, 2, 1],
            [1, 0, 3, 0, 0],
            [0, 3, 0, 1, 4],
            [2, 0, 1, 0, 1],
            [1, 0, 4, 1, 0],
        ])
        .unwrap();
        for k in 1..=2 {
            assert_eq!(
                haf_k_via_reduction(&a, k).unwrap(),
                haf_k_direct(&a, k).unwrap()
            );
        }
    }
}

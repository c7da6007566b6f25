//! Matching polynomials, exact real-rootedness checks, and permanents and
//! hafnians read off as coefficients of multilinear products.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::enumerate::MatchingGraph;
use crate::exact::{haf_k_direct_with, perm_k_direct_with, Limits};
use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::reduction::{haf_k_via_reduction_with, perm_k_via_reduction_with};
use crate::subset::binomial;
use crate::{factorial, Error, ExactNumber, Result};

/// `Σ_k c_k x^k` where `c_k` is the total weight of k-matchings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatchingPolynomial {
    coefficients: Vec<ExactNumber>,
}

impl MatchingPolynomial {
    /// Trailing zeros are trimmed. The constant term must be one and no
    /// coefficient may be negative.
    pub fn new(mut coefficients: Vec<ExactNumber>) -> Result<Self> {
        while coefficients.len() > 1 && coefficients.last().is_some_and(ExactNumber::is_zero) {
            coefficients.pop();
        }
        if coefficients.first().is_none_or(|c| !c.is_one()) {
            return Err(Error::Argument(
                "matching polynomial must have constant term 1".into(),
            ));
        }
        if coefficients.iter().any(ExactNumber::is_negative) {
            return Err(Error::Argument(
                "matching polynomial coefficients are nonnegative".into(),
            ));
        }
        Ok(MatchingPolynomial { coefficients })
    }

    pub fn coefficients(&self) -> &[ExactNumber] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: &ExactNumber) -> ExactNumber {
        self.coefficients
            .iter()
            .rev()
            .fold(ExactNumber::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients by brute-force enumeration of an explicit graph.
    pub fn from_graph<G: MatchingGraph + ?Sized>(g: &G) -> Self {
        let general = g.as_general();
        let coefficients = (0..=general.vertex_count() / 2)
            .map(|k| crate::enumerate::weighted_matching_sum(general.as_ref(), k))
            .collect();
        MatchingPolynomial::new(coefficients).expect("weights are positive")
    }
}

impl fmt::Display for MatchingPolynomial {
    /// Space-separated coefficients, lowest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// How each coefficient of a matching polynomial is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CoefficientRoute {
    /// Sum of subpermanents / principal subhafnians.
    Direct,
    /// One permanent of `B_k` (or hafnian of `A_k`) divided by factorials.
    Reduction,
    /// Whichever is estimated to be cheaper for each `k`.
    #[default]
    Auto,
}

fn pow2(e: usize) -> u128 {
    1u128.checked_shl(e as u32).unwrap_or(u128::MAX)
}

pub fn matching_poly_bipartite(b: &NonnegMatrix) -> Result<MatchingPolynomial> {
    matching_poly_bipartite_with(b, CoefficientRoute::Auto, &Limits::default())
}

/// `Φ(x, B) = Σ_k perm_k(B) x^k`.
pub fn matching_poly_bipartite_with(
    b: &NonnegMatrix,
    route: CoefficientRoute,
    limits: &Limits,
) -> Result<MatchingPolynomial> {
    let (m, n) = (b.rows(), b.cols());
    let mut coefficients = vec![ExactNumber::one()];
    for k in 1..=m.min(n) {
        let use_reduction = match route {
            CoefficientRoute::Direct => false,
            CoefficientRoute::Reduction => true,
            CoefficientRoute::Auto => {
                let size = m + n - k;
                let direct = binomial(m, k)
                    .saturating_mul(binomial(n, k))
                    .saturating_mul(k as u128)
                    .saturating_mul(pow2(k));
                let reduced = (size as u128).saturating_mul(pow2(size));
                size <= limits.max_permanent_order && reduced < direct
            }
        };
        coefficients.push(if use_reduction {
            perm_k_via_reduction_with(b, k, limits)?
        } else {
            perm_k_direct_with(b, k, limits)?
        });
    }
    MatchingPolynomial::new(coefficients)
}

pub fn matching_poly_general(a: &SymZeroDiagMatrix) -> Result<MatchingPolynomial> {
    matching_poly_general_with(a, CoefficientRoute::Auto, &Limits::default())
}

/// `Φ(x, A) = Σ_k haf_k(A) x^k`.
pub fn matching_poly_general_with(
    a: &SymZeroDiagMatrix,
    route: CoefficientRoute,
    limits: &Limits,
) -> Result<MatchingPolynomial> {
    let m = a.order();
    let mut coefficients = vec![ExactNumber::one()];
    for k in 1..=m / 2 {
        let use_reduction = match route {
            CoefficientRoute::Direct => false,
            CoefficientRoute::Reduction => true,
            CoefficientRoute::Auto => {
                let size = 2 * m - 2 * k;
                let direct = binomial(m, 2 * k)
                    .saturating_mul(2 * k as u128)
                    .saturating_mul(pow2(2 * k));
                let reduced = (size as u128).saturating_mul(pow2(size));
                size <= limits.max_hafnian_order && reduced < direct
            }
        };
        coefficients.push(if use_reduction {
            haf_k_via_reduction_with(a, k, limits)?
        } else {
            haf_k_direct_with(a, k, limits)?
        });
    }
    MatchingPolynomial::new(coefficients)
}

/// Outcome of [`verify_real_negative_roots`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// Every complex root is real and strictly negative.
    pub all_real_negative: bool,
    pub degree: usize,
    /// Number of distinct complex roots (degree of the square-free part).
    pub distinct_roots: usize,
    /// Number of distinct real roots in `(-∞, 0)`, by Sturm's theorem.
    pub distinct_negative_roots: usize,
}

// Dense univariate polynomials over Q, lowest degree first, no trailing zeros.
type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(i.into()))
            .collect(),
    )
}

/// Remainder of `a` divided by a nonzero `b`.
fn remainder(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = degree(b);
    let lead = b.last().expect("nonzero divisor");
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn quotient(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = degree(b);
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); (a.len() + 1).saturating_sub(b.len())];
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    trim(q)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = remainder(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Decides exactly whether every root of `p` is real and negative.
///
/// The Sturm chain of `p` counts its distinct real roots in `(-∞, 0)`; all
/// roots are real and negative iff that count equals the number of distinct
/// roots, `deg(p / gcd(p, p'))`, and `p(0) != 0`.
pub fn verify_real_negative_roots(p: &MatchingPolynomial) -> RootReport {
    let poly: Poly = p
        .coefficients()
        .iter()
        .map(|c| c.as_big_rational().clone())
        .collect();
    real_negative_roots(trim(poly))
}

/// As [`verify_real_negative_roots`] for an arbitrary rational polynomial,
/// lowest degree first.
pub fn verify_real_negative_roots_of(coefficients: &[ExactNumber]) -> RootReport {
    real_negative_roots(trim(
        coefficients
            .iter()
            .map(|c| c.as_big_rational().clone())
            .collect(),
    ))
}

fn real_negative_roots(poly: Poly) -> RootReport {
    let deg = degree(&poly);
    if deg == 0 {
        return RootReport {
            all_real_negative: true,
            degree: 0,
            distinct_roots: 0,
            distinct_negative_roots: 0,
        };
    }
    let dp = derivative(&poly);
    let distinct_roots = degree(&quotient(&poly, &gcd(&poly, &dp)));

    // roots at zero are never negative; count the rest on p / x^z
    let zeros_at_origin = poly.iter().take_while(|c| c.is_zero()).count();
    let reduced: Poly = poly[zeros_at_origin..].to_vec();
    let zero_is_root = zeros_at_origin > 0;
    let negative = if degree(&reduced) == 0 {
        0
    } else {
        let mut chain = vec![reduced.clone(), derivative(&reduced)];
        loop {
            let n = chain.len();
            let r = remainder(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        let at_neg_inf = variations(chain.iter().map(|q| {
            let s = sign(q.last().unwrap());
            if degree(q) % 2 == 1 {
                -s
            } else {
                s
            }
        }));
        let at_zero = variations(chain.iter().map(|q| sign(&q[0])));
        at_neg_inf - at_zero
    };
    RootReport {
        all_real_negative: !zero_is_root && negative == distinct_roots,
        degree: deg,
        distinct_roots,
        distinct_negative_roots: negative,
    }
}

const MAX_EXTRACTION_ORDER: usize = 12;

fn check_extraction_order(n: usize) -> Result<()> {
    if n > MAX_EXTRACTION_ORDER {
        return Err(Error::ResourceLimit {
            what: "coefficient extraction order",
            actual: n as u128,
            limit: MAX_EXTRACTION_ORDER as u128,
        });
    }
    Ok(())
}

/// `perm B` as the coefficient of `x_1 x_2 ... x_n` in `Π_i (Σ_j b_ij x_j)`.
///
/// Products are taken in the multilinear quotient: any monomial with a
/// repeated variable is dropped, since the mixed first derivative
/// `∂^n / ∂x_1...∂x_n` annihilates it. Coefficients are indexed by the
/// variable set as a bitmask.
pub fn perm_by_coefficient_extraction(b: &NonnegMatrix) -> Result<ExactNumber> {
    if !b.is_square() {
        return Err(Error::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let n = b.rows();
    check_extraction_order(n)?;
    let mut coef = vec![ExactNumber::zero(); 1 << n];
    coef[0] = ExactNumber::one();
    for i in 0..n {
        let mut next = vec![ExactNumber::zero(); 1 << n];
        for mask in (0usize..1 << n).filter(|m| m.count_ones() as usize == i) {
            if coef[mask].is_zero() {
                continue;
            }
            for j in (0..n).filter(|&j| mask >> j & 1 == 0) {
                let w = b.get(i, j);
                if !w.is_zero() {
                    next[mask | 1 << j] += &coef[mask] * w;
                }
            }
        }
        coef = next;
    }
    Ok(coef[(1 << n) - 1].clone())
}

/// `haf A` as the coefficient of `x_1 ... x_n` in `q(x)^{n/2}` divided by
/// `(n/2)!`, where `q(x) = ½ xᵀAx = Σ_{i<j} a_ij x_i x_j`. Same multilinear
/// truncation as [`perm_by_coefficient_extraction`].
pub fn haf_by_coefficient_extraction(a: &SymZeroDiagMatrix) -> Result<ExactNumber> {
    let n = a.order();
    if n % 2 == 1 {
        return Err(Error::Parity(n));
    }
    check_extraction_order(n)?;
    let pairs: Vec<(usize, ExactNumber)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .map(|(i, j)| (1 << i | 1 << j, a.get(i, j).clone()))
        .collect();
    let mut coef = vec![ExactNumber::zero(); 1 << n];
    coef[0] = ExactNumber::one();
    for step in 0..n / 2 {
        let mut next = vec![ExactNumber::zero(); 1 << n];
        for mask in (0usize..1 << n).filter(|m| m.count_ones() as usize == 2 * step) {
            if coef[mask].is_zero() {
                continue;
            }
            for (bits, w) in &pairs {
                if mask & bits == 0 {
                    next[mask | bits] += &coef[mask] * w;
                }
            }
        }
        coef = next;
    }
    Ok(&coef[(1 << n) - 1] / &factorial(n / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> MatchingPolynomial {
        MatchingPolynomial::new(cs.iter().map(|&c| ExactNumber::from(c)).collect()).unwrap()
    }

    fn ints(p: &MatchingPolynomial) -> Vec<String> {
        p.coefficients().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn bipartite_polynomials() {
        let p = matching_poly_bipartite(&NonnegMatrix::ones(2, 2)).unwrap();
        assert_eq!(ints(&p), ["1", "4", "2"]);
        assert_eq!(p.to_string(), "1 4 2");
        let p = matching_poly_bipartite(&NonnegMatrix::zeros(3, 3)).unwrap();
        assert_eq!(p.to_string(), "1");
        let p = matching_poly_bipartite(&NonnegMatrix::from_ints(&[[1]]).unwrap()).unwrap();
        assert_eq!(p.to_string(), "1 1");
        assert_eq!(
            matching_poly_bipartite(&NonnegMatrix::zeros(0, 4))
                .unwrap()
                .to_string(),
            "1"
        );
    }

    #[test]
    fn general_polynomials() {
        let p = matching_poly_general(&SymZeroDiagMatrix::complete(4)).unwrap();
        assert_eq!(p.to_string(), "1 6 3");
        let w = SymZeroDiagMatrix::from_ints(&[[0, 9], [9, 0]]).unwrap();
        assert_eq!(matching_poly_general(&w).unwrap().to_string(), "1 9");
        assert_eq!(
            matching_poly_general(&SymZeroDiagMatrix::zeros(5))
                .unwrap()
                .to_string(),
            "1"
        );
    }

    #[test]
    fn routes_agree() {
        let b = NonnegMatrix::from_ints(&[[1, 0, 2, 1], [3, 1, 0, 0], [0, 2, 2, 5]]).unwrap();
        let l = Limits::default();
        let d = matching_poly_bipartite_with(&b, CoefficientRoute::Direct, &l).unwrap();
        let r = matching_poly_bipartite_with(&b, CoefficientRoute::Reduction, &l).unwrap();
        assert_eq!(d, r);
        let a = SymZeroDiagMatrix::complete(6);
        let d = matching_poly_general_with(&a, CoefficientRoute::Direct, &l).unwrap();
        let r = matching_poly_general_with(&a, CoefficientRoute::Reduction, &l).unwrap();
        assert_eq!(d, r);
        assert_eq!(d.to_string(), "1 15 45 15");
    }

    #[test]
    fn polynomial_validation() {
        assert!(MatchingPolynomial::new(vec![]).is_err());
        assert!(MatchingPolynomial::new(vec![2.into()]).is_err());
        assert!(MatchingPolynomial::new(vec![1.into(), (-1).into()]).is_err());
        assert_eq!(poly(&[1, 3, 0, 0]).degree(), 1);
        assert_eq!(poly(&[1, 4, 2]).eval(&1.into()), 7.into());
        assert_eq!(poly(&[1, 4, 2]).eval(&0.into()), 1.into());
    }

    #[test]
    fn real_rootedness() {
        let r = verify_real_negative_roots(&poly(&[1, 4, 2]));
        assert!(r.all_real_negative);
        assert_eq!(r.distinct_negative_roots, 2);
        assert!(verify_real_negative_roots(&poly(&[1, 1])).all_real_negative);
        assert!(verify_real_negative_roots(&poly(&[1])).all_real_negative);
        let r = verify_real_negative_roots(&poly(&[1, 0, 1]));
        assert!(!r.all_real_negative);
        assert_eq!(r.distinct_negative_roots, 0);
        // (1 + x)^2: repeated root, two disjoint edges
        let r = verify_real_negative_roots(&poly(&[1, 2, 1]));
        assert!(r.all_real_negative);
        assert_eq!(r.distinct_roots, 1);
        // 1 + 3x + x^3 has a complex pair
        assert!(!verify_real_negative_roots(&poly(&[1, 3, 0, 1])).all_real_negative);
    }

    #[test]
    fn sturm_on_signed_polynomials() {
        let f = |cs: &[i64]| {
            verify_real_negative_roots_of(&cs.iter().map(|&c| c.into()).collect::<Vec<_>>())
        };
        // (x - 1)(x + 2): one positive root
        let r = f(&[-2, 1, 1]);
        assert!(!r.all_real_negative);
        assert_eq!(r.distinct_negative_roots, 1);
        // x(x + 1): root at zero
        let r = f(&[0, 1, 1]);
        assert!(!r.all_real_negative);
        assert_eq!(r.distinct_negative_roots, 1);
        // (x + 1)^2 (x + 3)
        assert!(f(&[3, 7, 5, 1]).all_real_negative);
    }

    #[test]
    fn extraction_examples() {
        let b = NonnegMatrix::from_ints(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(perm_by_coefficient_extraction(&b).unwrap(), 10.into());
        assert_eq!(
            perm_by_coefficient_extraction(&NonnegMatrix::identity(3)).unwrap(),
            1.into()
        );
        assert!(perm_by_coefficient_extraction(&NonnegMatrix::ones(2, 3)).is_err());
        assert!(matches!(
            perm_by_coefficient_extraction(&NonnegMatrix::ones(13, 13)),
            Err(Error::ResourceLimit { .. })
        ));

        let a = SymZeroDiagMatrix::from_ints(&[[0, 6], [6, 0]]).unwrap();
        assert_eq!(haf_by_coefficient_extraction(&a).unwrap(), 6.into());
        assert_eq!(
            haf_by_coefficient_extraction(&SymZeroDiagMatrix::complete(4)).unwrap(),
            3.into()
        );
        let a =
            SymZeroDiagMatrix::from_ints(&[[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, 0, 5], [0, 0, 5, 0]])
                .unwrap();
        assert_eq!(haf_by_coefficient_extraction(&a).unwrap(), 10.into());
        assert_eq!(
            haf_by_coefficient_extraction(&SymZeroDiagMatrix::complete(3)),
            Err(Error::Parity(3))
        );
    }
}

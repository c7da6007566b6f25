//! Unbiased Monte Carlo estimators for permanents and hafnians, and through
//! the block reductions for `perm_k`, `haf_k` and the matching polynomial.
//!
//! One draw of the permanent sampler walks the rows in order. At row `i` it
//! picks a column among the unused columns with `b_ij > 0` and multiplies the
//! running estimate by `b_ij / P(j)`; it returns zero if no column is
//! available. Each perfect matching `σ` is reached with probability
//! `Π P(σ(i))` and then yields `Π b_iσ(i) / P(σ(i))`, so the expectation of
//! one draw is exactly `perm B`. The hafnian sampler does the same on the
//! lowest unmatched vertex.
//!
//! These estimators are unbiased but carry no variance guarantee.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::reduction::{build_ak, build_bk};
use crate::{factorial, Error, ExactNumber, Result};

/// How the next column (or partner) is proposed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Proposal {
    /// Uniform over admissible choices; the factor is `w * count`.
    #[default]
    Uniform,
    /// Proportional to weight; the factor is the admissible weight total.
    WeightProportional,
}

/// Requested `(1 ± ε)` accuracy with failure probability `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Target {
    pub epsilon: f64,
    pub delta: f64,
}

impl Target {
    /// Median-of-means schedule: `2⌈ln(1/δ)⌉ + 1` batches of `⌈72/ε²⌉`
    /// samples each. This is a Chebyshev-style heuristic, not a guarantee.
    pub fn schedule(&self) -> Result<(u64, u64)> {
        let ok = |v: f64| v.is_finite() && v > 0.0 && v < 1.0;
        if !ok(self.epsilon) || !ok(self.delta) {
            return Err(Error::Argument(format!(
                "epsilon and delta must lie in (0, 1), got {} and {}",
                self.epsilon, self.delta
            )));
        }
        let per_batch = (72.0 / (self.epsilon * self.epsilon)).ceil() as u64;
        let batches = 2 * (1.0 / self.delta).ln().ceil() as u64 + 1;
        Ok((batches, per_batch))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub samples: u64,
    pub seed: u64,
    pub proposal: Proposal,
    /// When set, overrides `samples` with the median-of-means schedule.
    pub target: Option<Target>,
}

impl SamplerConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SamplerConfig {
            samples,
            seed,
            proposal: Proposal::Uniform,
            target: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub point_estimate: f64,
    /// Sample standard deviation over `√samples`.
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub target: Option<Target>,
}

impl EstimateReport {
    fn scaled(mut self, factor: f64) -> Self {
        self.point_estimate *= factor;
        self.standard_error *= factor;
        self
    }

    /// `|estimate - value| <= sigmas * standard_error`.
    pub fn covers(&self, value: f64, sigmas: f64) -> bool {
        (self.point_estimate - value).abs() <= sigmas * self.standard_error
    }
}

/// What the sampler needs from a weight type. Implemented for `f64` (the
/// sampler itself) and [`ExactNumber`] (exact path expectations).
pub trait Weight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_count(n: usize) -> Self;
    fn is_positive(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_count(n: usize) -> Self {
        n as f64
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Weight for ExactNumber {
    fn zero() -> Self {
        ExactNumber::zero()
    }
    fn one() -> Self {
        ExactNumber::one()
    }
    fn from_count(n: usize) -> Self {
        ExactNumber::from(n)
    }
    fn is_positive(&self) -> bool {
        ExactNumber::is_positive(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Admissible choices from `row`: unused positions with positive weight.
fn admissible<'a, W: Weight>(
    row: &'a [W],
    used: &'a [bool],
) -> impl Iterator<Item = (usize, &'a W)> + Clone + 'a {
    row.iter()
        .enumerate()
        .filter(move |(j, w)| !used[*j] && w.is_positive())
}

/// Probability of proposing `w` and the factor it contributes, given the
/// admissible `count` and weight `total`. `prob * factor == w`.
fn proposal_terms<W: Weight>(proposal: Proposal, w: &W, count: usize, total: &W) -> (W, W) {
    match proposal {
        Proposal::Uniform => {
            let c = W::from_count(count);
            (W::one().div(&c), w.mul(&c))
        }
        Proposal::WeightProportional => (w.div(total), total.clone()),
    }
}

fn choose<R: Rng>(
    choices: impl Iterator<Item = (usize, f64)> + Clone,
    proposal: Proposal,
    rng: &mut R,
) -> Option<(usize, f64)> {
    let (count, total) = choices
        .clone()
        .fold((0usize, 0.0), |(c, t), (_, w)| (c + 1, t + w));
    if count == 0 {
        return None;
    }
    let pick = match proposal {
        Proposal::Uniform => choices.clone().nth(rng.gen_range(0..count)),
        Proposal::WeightProportional => {
            let mut u = rng.gen::<f64>() * total;
            let mut last = None;
            for (j, w) in choices {
                last = Some((j, w));
                if u < w {
                    break;
                }
                u -= w;
            }
            last
        }
    }?;
    let (_, factor) = proposal_terms(proposal, &pick.1, count, &total);
    Some((pick.0, factor))
}

fn rows_f64(b: &NonnegMatrix) -> Vec<Vec<f64>> {
    (0..b.rows())
        .map(|i| b.row(i).iter().map(ExactNumber::to_f64).collect())
        .collect()
}

fn sym_rows_f64(a: &SymZeroDiagMatrix) -> Vec<Vec<f64>> {
    (0..a.order())
        .map(|i| (0..a.order()).map(|j| a.get(i, j).to_f64()).collect())
        .collect()
}

/// One draw of the row-by-row permanent sampler.
fn draw_permanent<R: Rng>(rows: &[Vec<f64>], proposal: Proposal, rng: &mut R) -> f64 {
    let n = rows.len();
    let mut used = vec![false; n];
    let mut est = 1.0;
    for row in rows {
        let choices = admissible(row, &used).map(|(j, w)| (j, *w));
        match choose(choices, proposal, rng) {
            Some((j, factor)) => {
                used[j] = true;
                est *= factor;
            }
            None => return 0.0,
        }
    }
    est
}

/// One draw of the lowest-vertex pairing sampler.
fn draw_hafnian<R: Rng>(rows: &[Vec<f64>], proposal: Proposal, rng: &mut R) -> f64 {
    let n = rows.len();
    let mut used = vec![false; n];
    let mut est = 1.0;
    while let Some(i) = used.iter().position(|u| !u) {
        used[i] = true;
        let choices = admissible(&rows[i], &used).map(|(j, w)| (j, *w));
        match choose(choices, proposal, rng) {
            Some((j, factor)) => {
                used[j] = true;
                est *= factor;
            }
            None => return 0.0,
        }
    }
    est
}

/// Exact expectation of one permanent-sampler draw, by summing
/// `P(path) * estimate(path)` over every path the sampler can take.
pub fn permanent_path_expectation(b: &NonnegMatrix, proposal: Proposal) -> Result<ExactNumber> {
    if !b.is_square() {
        return Err(Error::Dimension(
            "permanent sampler needs a square matrix".into(),
        ));
    }
    let rows: Vec<Vec<ExactNumber>> = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
    fn rec(
        rows: &[Vec<ExactNumber>],
        i: usize,
        used: &mut [bool],
        proposal: Proposal,
    ) -> ExactNumber {
        if i == rows.len() {
            return ExactNumber::one();
        }
        let choices: Vec<(usize, ExactNumber)> = admissible(&rows[i], used)
            .map(|(j, w)| (j, w.clone()))
            .collect();
        let count = choices.len();
        let total: ExactNumber = choices.iter().map(|(_, w)| w).sum();
        let mut e = ExactNumber::zero();
        for (j, w) in choices {
            let (p, f) = proposal_terms(proposal, &w, count, &total);
            used[j] = true;
            e += p * f * rec(rows, i + 1, used, proposal);
            used[j] = false;
        }
        e
    }
    Ok(rec(&rows, 0, &mut vec![false; b.cols()], proposal))
}

/// Exact expectation of one hafnian-sampler draw.
pub fn hafnian_path_expectation(a: &SymZeroDiagMatrix, proposal: Proposal) -> Result<ExactNumber> {
    if a.order() % 2 == 1 {
        return Err(Error::Parity(a.order()));
    }
    let rows = a.to_rows();
    fn rec(rows: &[Vec<ExactNumber>], used: &mut [bool], proposal: Proposal) -> ExactNumber {
        let Some(i) = used.iter().position(|u| !u) else {
            return ExactNumber::one();
        };
        used[i] = true;
        let choices: Vec<(usize, ExactNumber)> = admissible(&rows[i], used)
            .map(|(j, w)| (j, w.clone()))
            .collect();
        let count = choices.len();
        let total: ExactNumber = choices.iter().map(|(_, w)| w).sum();
        let mut e = ExactNumber::zero();
        for (j, w) in choices {
            let (p, f) = proposal_terms(proposal, &w, count, &total);
            used[j] = true;
            e += p * f * rec(rows, used, proposal);
            used[j] = false;
        }
        used[i] = false;
        e
    }
    Ok(rec(&rows, &mut vec![false; a.order()], proposal))
}

/// Count, mean and sum of squared deviations of a batch.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count as f64 / count as f64,
            m2: self.m2
                + other.m2
                + d * d * (self.count as f64) * (other.count as f64) / count as f64,
        }
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
    }
}

const BATCH: u64 = 4096;

/// Runs `draw` under `config`. Batch `b` draws from the ChaCha8 stream
/// `stream_base + b` seeded with `config.seed`; batches run in parallel and
/// merge in index order, so the report depends only on the inputs.
fn run<D>(config: &SamplerConfig, stream_base: u64, draw: D) -> Result<EstimateReport>
where
    D: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let batch = |index: u64, len: u64| -> Moments {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream_base + index);
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(draw(&mut rng));
        }
        m
    };
    match config.target {
        None => {
            if config.samples == 0 {
                return Err(Error::Argument("samples must be at least 1".into()));
            }
            let batches = config.samples.div_ceil(BATCH);
            let parts: Vec<Moments> = (0..batches)
                .into_par_iter()
                .map(|b| batch(b, BATCH.min(config.samples - b * BATCH)))
                .collect();
            let all = parts.into_iter().fold(Moments::default(), Moments::merge);
            Ok(EstimateReport {
                point_estimate: all.mean,
                standard_error: all.standard_error(),
                samples: all.count,
                seed: config.seed,
                target: None,
            })
        }
        Some(target) => {
            let (batches, per_batch) = target.schedule()?;
            let parts: Vec<Moments> = (0..batches)
                .into_par_iter()
                .map(|b| batch(b, per_batch))
                .collect();
            let mut means: Vec<f64> = parts.iter().map(|m| m.mean).collect();
            means.sort_by(f64::total_cmp);
            let all = parts.into_iter().fold(Moments::default(), Moments::merge);
            Ok(EstimateReport {
                point_estimate: means[means.len() / 2],
                standard_error: all.standard_error(),
                samples: all.count,
                seed: config.seed,
                target: Some(target),
            })
        }
    }
}

pub fn estimate_permanent(b: &NonnegMatrix, samples: u64, seed: u64) -> Result<EstimateReport> {
    estimate_permanent_with(b, &SamplerConfig::new(samples, seed))
}

pub fn estimate_permanent_with(b: &NonnegMatrix, config: &SamplerConfig) -> Result<EstimateReport> {
    estimate_permanent_on_stream(b, config, 0)
}

fn estimate_permanent_on_stream(
    b: &NonnegMatrix,
    config: &SamplerConfig,
    stream_base: u64,
) -> Result<EstimateReport> {
    if !b.is_square() {
        return Err(Error::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let rows = rows_f64(b);
    run(config, stream_base, |rng| {
        draw_permanent(&rows, config.proposal, rng)
    })
}

pub fn estimate_perm_k(
    b: &NonnegMatrix,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    estimate_perm_k_with(b, k, &SamplerConfig::new(samples, seed))
}

/// Estimates `perm B_k` and divides by `(m-k)!(n-k)!`.
pub fn estimate_perm_k_with(
    b: &NonnegMatrix,
    k: usize,
    config: &SamplerConfig,
) -> Result<EstimateReport> {
    estimate_perm_k_on_stream(b, k, config, 0)
}

fn estimate_perm_k_on_stream(
    b: &NonnegMatrix,
    k: usize,
    config: &SamplerConfig,
    stream_base: u64,
) -> Result<EstimateReport> {
    let bk = build_bk(b, k)?;
    let divisor = factorial(b.rows() - k) * factorial(b.cols() - k);
    Ok(estimate_permanent_on_stream(&bk, config, stream_base)?.scaled(1.0 / divisor.to_f64()))
}

pub fn estimate_hafnian(a: &SymZeroDiagMatrix, samples: u64, seed: u64) -> Result<EstimateReport> {
    estimate_hafnian_with(a, &SamplerConfig::new(samples, seed))
}

pub fn estimate_hafnian_with(
    a: &SymZeroDiagMatrix,
    config: &SamplerConfig,
) -> Result<EstimateReport> {
    if a.order() % 2 == 1 {
        return Err(Error::Parity(a.order()));
    }
    let rows = sym_rows_f64(a);
    run(config, 0, |rng| draw_hafnian(&rows, config.proposal, rng))
}

pub fn estimate_haf_k(
    a: &SymZeroDiagMatrix,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    estimate_haf_k_with(a, k, &SamplerConfig::new(samples, seed))
}

/// Estimates `haf A_k` and divides by `(m-2k)!`.
pub fn estimate_haf_k_with(
    a: &SymZeroDiagMatrix,
    k: usize,
    config: &SamplerConfig,
) -> Result<EstimateReport> {
    let ak = build_ak(a, k)?;
    let divisor = factorial(a.order() - 2 * k);
    Ok(estimate_hafnian_with(&ak, config)?.scaled(1.0 / divisor.to_f64()))
}

pub fn estimate_matching_poly_eval(
    b: &NonnegMatrix,
    x: f64,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    estimate_matching_poly_eval_with(b, x, &SamplerConfig::new(samples, seed))
}

/// `Φ(x, B) = 1 + Σ_k x^k perm_k B` for `x >= 0`, each coefficient estimated
/// through `B_k` with its own sample budget and stream range. Standard
/// errors combine as independent terms.
pub fn estimate_matching_poly_eval_with(
    b: &NonnegMatrix,
    x: f64,
    config: &SamplerConfig,
) -> Result<EstimateReport> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Argument(format!(
            "x must be finite and nonnegative, got {x}"
        )));
    }
    if config.target.is_none() && config.samples == 0 {
        return Err(Error::Argument("samples must be at least 1".into()));
    }
    let mut estimate = 1.0;
    let mut variance = 0.0;
    let mut samples = 0;
    if x > 0.0 {
        for k in 1..=b.rows().min(b.cols()) {
            let r = estimate_perm_k_on_stream(b, k, config, (k as u64) << 32)?;
            let xk = x.powi(k as i32);
            estimate += xk * r.point_estimate;
            variance += (xk * r.standard_error).powi(2);
            samples += r.samples;
        }
    }
    Ok(EstimateReport {
        point_estimate: estimate,
        standard_error: variance.sqrt(),
        samples: samples.max(config.samples).max(1),
        seed: config.seed,
        target: config.target,
    })
}

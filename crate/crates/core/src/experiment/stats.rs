//! Limit-law targets and goodness-of-fit statistics over trial records.

use serde::Serialize;

use super::TrialRecord;
use crate::error::{invalid, Result};
use crate::process::critical_time;

/// `μ(k, c) = (k/2 + 1)^{k/2} / (k+1)! · e^{-c}`.
pub fn mu(k: usize, c: f64) -> f64 {
    let half = k as f64 / 2.0;
    let factorial: f64 = (1..=k + 1).map(|i| i as f64).product();
    (half + 1.0).powf(half) / factorial * (-c).exp()
}

/// Limiting CDF of the rescaled hitting time, `exp(-μ(k, c))`.
pub fn gumbel_cdf(k: usize, c: f64) -> f64 {
    (-mu(k, c)).exp()
}

pub fn poisson_pmf(mean: f64, j: usize) -> f64 {
    if mean == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    (j as f64 * mean.ln() - mean - (1..=j).map(|i| (i as f64).ln()).sum::<f64>()).exp()
}

/// Targets of the limit theorems on a c grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitLawTargets {
    pub k: usize,
    pub c_grid: Vec<f64>,
    pub mu: Vec<f64>,
    pub gumbel_cdf: Vec<f64>,
    /// `poisson_pmf[i][j] = P(Poisson(μ(k, c_i)) = j)` for `j <= support`.
    pub poisson_pmf: Vec<Vec<f64>>,
}

impl LimitLawTargets {
    pub fn new(k: usize, c_grid: &[f64], support: usize) -> Self {
        let mu: Vec<f64> = c_grid.iter().map(|&c| mu(k, c)).collect();
        LimitLawTargets {
            k,
            c_grid: c_grid.to_vec(),
            gumbel_cdf: mu.iter().map(|m| (-m).exp()).collect(),
            poisson_pmf: mu.iter().map(|&m| (0..=support).map(|j| poisson_pmf(m, j)).collect()).collect(),
            mu,
        }
    }
}

/// Empirical pmf of a count against `Poisson(mean)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalFit {
    pub mean: f64,
    pub empirical_pmf: Vec<f64>,
    pub target_pmf: Vec<f64>,
    /// Poisson mass beyond the empirical support.
    pub target_tail: f64,
    pub tv_distance: f64,
}

pub fn poisson_fit(samples: &[usize], target_mean: f64) -> MarginalFit {
    let m = samples.len().max(1) as f64;
    let support = samples.iter().copied().max().unwrap_or(0);
    let mut empirical_pmf = vec![0.0; support + 1];
    for &x in samples {
        empirical_pmf[x] += 1.0 / m;
    }
    let target_pmf: Vec<f64> = (0..=support).map(|j| poisson_pmf(target_mean, j)).collect();
    let target_tail = (1.0 - target_pmf.iter().sum::<f64>()).max(0.0);
    let diff: f64 = empirical_pmf.iter().zip(&target_pmf).map(|(a, b)| (a - b).abs()).sum();
    MarginalFit {
        mean: samples.iter().sum::<usize>() as f64 / m,
        empirical_pmf,
        target_pmf,
        target_tail,
        tv_distance: 0.5 * (diff + target_tail),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonReport {
    pub k: usize,
    pub c: f64,
    pub mu: f64,
    pub sample_size: usize,
    pub n_k: MarginalFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_k: Option<MarginalFit>,
}

fn samples_at(records: &[TrialRecord], c: f64, f: impl Fn(&super::CountAt) -> Option<usize>) -> Result<Vec<usize>> {
    records
        .iter()
        .map(|r| {
            r.count_at(c)
                .ok_or_else(|| invalid(format!("trial {} has no counts at c = {c}", r.trial_index)))
                .map(&f)
        })
        .collect::<Result<Vec<Option<usize>>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// `N_k(t_c)` over all records.
pub fn nk_samples(records: &[TrialRecord], c: f64) -> Result<Vec<usize>> {
    samples_at(records, c, |x| Some(x.n_k))
}

pub fn poisson_gof(records: &[TrialRecord], c: f64, k: usize) -> Result<PoissonReport> {
    if records.is_empty() {
        return Err(invalid("no records"));
    }
    let target = mu(k, c);
    let nk = nk_samples(records, c)?;
    let beta = samples_at(records, c, |x| x.beta_k)?;
    Ok(PoissonReport {
        k,
        c,
        mu: target,
        sample_size: nk.len(),
        n_k: poisson_fit(&nk, target),
        beta_k: (beta.len() == nk.len()).then(|| poisson_fit(&beta, target)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoidReport {
    pub a: f64,
    pub b: f64,
    pub sample_size: usize,
    pub empirical: f64,
    pub standard_error: f64,
    /// `exp(-(μ(k, a) - μ(k, b)))`.
    pub target: f64,
}

/// Fraction of trials without jumps in the rescaled window `(a, b]`
/// (`b = +inf` allowed). `a` must not precede the recorded window.
pub fn void_probability(records: &[TrialRecord], k: usize, n: usize, a: f64, b: f64) -> Result<VoidReport> {
    if records.is_empty() || !(a < b) {
        return Err(invalid("void probability needs records and a < b"));
    }
    let t_a = critical_time(k, n, a)?;
    let t_b = if b == f64::INFINITY { 1.0 } else { critical_time(k, n, b)? };
    for r in records {
        let start = r.counts.first().map(|x| x.t).unwrap_or(1.0);
        if t_a < start {
            return Err(invalid(format!("a = {a} precedes the recorded window of trial {}", r.trial_index)));
        }
    }
    let m = records.len() as f64;
    let hits = records
        .iter()
        .filter(|r| !r.jump_times.iter().any(|&t| t > t_a && t <= t_b))
        .count() as f64;
    let p = hits / m;
    Ok(VoidReport {
        a,
        b,
        sample_size: records.len(),
        empirical: p,
        standard_error: (p * (1.0 - p) / m).sqrt(),
        target: (-(mu(k, a) - if b == f64::INFINITY { 0.0 } else { mu(k, b) })).exp(),
    })
}

/// `sup_x |F_m(x) - F(x)|` for a continuous `F`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).max((i + 1) as f64 / m - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GumbelReport {
    pub k: usize,
    pub n: usize,
    pub sample_size: usize,
    pub ks_t_prime: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_t: Option<f64>,
    pub mean_c_t_prime: f64,
}

pub fn gumbel_gof(records: &[TrialRecord], k: usize, n: usize) -> Result<GumbelReport> {
    if records.is_empty() {
        return Err(invalid("no records"));
    }
    let cdf = |c: f64| gumbel_cdf(k, c);
    let tp: Vec<f64> = records.iter().map(|r| r.c_t_prime).collect();
    let t: Option<Vec<f64>> = records.iter().map(|r| r.c_t).collect();
    Ok(GumbelReport {
        k,
        n,
        sample_size: records.len(),
        ks_t_prime: ks_statistic(&tp, cdf),
        ks_t: t.map(|t| ks_statistic(&t, cdf)),
        mean_c_t_prime: tp.iter().sum::<f64>() / tp.len() as f64,
    })
}

/// Fraction of trials with `T = T'`.
pub fn hitting_agreement(records: &[TrialRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(invalid("no records"));
    }
    let equal: Option<Vec<bool>> = records.iter().map(|r| r.equal).collect();
    let equal = equal.ok_or_else(|| invalid("records were computed without homology"))?;
    Ok(equal.iter().filter(|&&e| e).count() as f64 / equal.len() as f64)
}

/// Mean with plug-in standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub standard_error: f64,
}

pub fn estimate(xs: &[f64]) -> Estimate {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    Estimate {
        mean,
        standard_error: (var / m).sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NhatPoint {
    pub c: f64,
    pub sample_size: usize,
    pub mean: f64,
    pub standard_error: f64,
}

/// Mean `N̂_k(t_c)` per c.
pub fn nhat_curve(records: &[TrialRecord], c_grid: &[f64]) -> Result<Vec<NhatPoint>> {
    if records.is_empty() {
        return Err(invalid("no records"));
    }
    c_grid
        .iter()
        .map(|&c| {
            let xs: Vec<f64> = samples_at(records, c, |x| Some(x.nhat()))?.into_iter().map(|v| v as f64).collect();
            let e = estimate(&xs);
            Ok(NhatPoint {
                c,
                sample_size: xs.len(),
                mean: e.mean,
                standard_error: e.standard_error,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorialMoment {
    pub r: usize,
    pub estimate: f64,
    pub standard_error: f64,
    /// `μ^r`.
    pub target: f64,
}

/// `x (x-1) ... (x-r+1)`.
pub fn falling_factorial(x: usize, r: usize) -> f64 {
    (0..r).map(|i| x as f64 - i as f64).product()
}

pub fn factorial_moments_of(samples: &[usize], target_mean: f64, r_max: usize) -> Result<Vec<FactorialMoment>> {
    if !(1..=4).contains(&r_max) {
        return Err(invalid(format!("r_max = {r_max} outside 1..=4")));
    }
    if samples.is_empty() {
        return Err(invalid("no samples"));
    }
    Ok((1..=r_max)
        .map(|r| {
            let xs: Vec<f64> = samples.iter().map(|&x| falling_factorial(x, r)).collect();
            let e = estimate(&xs);
            FactorialMoment {
                r,
                estimate: e.mean,
                standard_error: e.standard_error,
                target: target_mean.powi(r as i32),
            }
        })
        .collect())
}

/// Factorial moments of `N_k(t_c)` against `μ(k, c)^r`.
pub fn factorial_moments(records: &[TrialRecord], k: usize, c: f64, r_max: usize) -> Result<Vec<FactorialMoment>> {
    factorial_moments_of(&nk_samples(records, c)?, mu(k, c), r_max)
}

//! Mutual information estimation and the capacity-finiteness diagnostic.
//!
//! `I_H(Q) = E[log det(I + H Q H*)]` is estimated by Monte Carlo over
//! channel draws; the two-antenna worked channels admit closed forms used as
//! exact oracles. Comparisons between covariances default to paired
//! (common-random-number) estimation, which turns the averaging inequality
//! into a low-variance paired-difference test.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{alpha_min, sample, ChannelModel};
use crate::matcore::{logdet_kernel, ComplexMatrix, CovarianceMatrix, RandomStream};
use crate::{Error, Result};

use num_complex::Complex64;

/// Samples per deterministic parallel chunk.
const CHUNK: u64 = 1024;

/// Running-mean slope (nats per e-fold of samples) above which capacity is
/// flagged as likely infinite.
pub const SLOPE_THRESHOLD: f64 = 0.05;

/// A mutual-information value in nats with Monte Carlo error bars.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MIEstimate {
    pub value: f64,
    pub std_error: f64,
    #[serde(rename = "n")]
    pub n_samples: u64,
    pub seed: u64,
}

/// Monte Carlo estimate of `I_H(Q)` over `n` iid channel draws.
///
/// Sampling is partitioned into fixed chunks with derived streams, so the
/// result is a function of the stream state alone, independent of the worker
/// count.
pub fn estimate_mi(
    model: &ChannelModel,
    q: &CovarianceMatrix,
    n: u64,
    rng: &mut RandomStream,
) -> Result<MIEstimate> {
    check_dims(model, q)?;
    if n < 100 {
        return Err(Error::InvalidArgument("estimate_mi needs n >= 100".into()));
    }
    let seed = rng.seed();
    let base = rng.fork().seed();
    let n_chunks = n.div_ceil(CHUNK);
    // Welford accumulation per chunk, then Chan's combination: avoids the
    // catastrophic cancellation of the sum-of-squares formula, which matters
    // for channels with deterministic integrands.
    let partials: Result<Vec<(f64, f64, f64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut stream = RandomStream::with_stream(base, chunk);
            let count = CHUNK.min(n - chunk * CHUNK);
            let mut mean = 0.0;
            let mut m2 = 0.0;
            for k in 0..count {
                let h = model.sample_one(&mut stream)?;
                let v = logdet_kernel(&h, q)?;
                let delta = v - mean;
                mean += delta / (k + 1) as f64;
                m2 += delta * (v - mean);
            }
            Ok((count as f64, mean, m2))
        })
        .collect();
    let (nf, mean, m2) = partials?.into_iter().fold(
        (0.0f64, 0.0f64, 0.0f64),
        |(na, ma, m2a), (nb, mb, m2b)| {
            let total = na + nb;
            let delta = mb - ma;
            (
                total,
                ma + delta * nb / total,
                m2a + m2b + delta * delta * na * nb / total,
            )
        },
    );
    let var = (m2 / (nf - 1.0)).max(0.0);
    Ok(MIEstimate { value: mean, std_error: (var / nf).sqrt(), n_samples: n, seed })
}

/// Estimate on a pre-drawn sample list (the common-random-number variant).
pub fn estimate_mi_with_samples(
    samples: &[ComplexMatrix],
    q: &CovarianceMatrix,
    seed: u64,
) -> Result<MIEstimate> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample list".into()));
    }
    let values: Result<Vec<f64>> = samples.iter().map(|h| logdet_kernel(h, q)).collect();
    let values = values?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(MIEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
        n_samples: values.len() as u64,
        seed,
    })
}

/// Paired difference `I(Q1) - I(Q2)` on common samples: `(mean, std error)`.
pub fn paired_mi_difference(
    samples: &[ComplexMatrix],
    q1: &CovarianceMatrix,
    q2: &CovarianceMatrix,
) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample list".into()));
    }
    let diffs: Result<Vec<f64>> = samples
        .iter()
        .map(|h| Ok(logdet_kernel(h, q1)? - logdet_kernel(h, q2)?))
        .collect();
    let diffs = diffs?;
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = if diffs.len() > 1 {
        diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / n).sqrt()))
}

fn check_dims(model: &ChannelModel, q: &CovarianceMatrix) -> Result<()> {
    let (_, n) = model.dims();
    if q.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "channel has {n} columns but Q is {}x{}",
            q.dim(),
            q.dim()
        )));
    }
    Ok(())
}

/// Exact mutual information of `H_alpha` at the covariance
/// `[[a, conj(c)], [c, b]]`: `log[(1+a)(1+alpha^2 b) - alpha^2 |c|^2]`.
pub fn mi_closed_form_alpha(alpha: f64, a: f64, b: f64, c: Complex64) -> Result<f64> {
    if !(alpha >= alpha_min() - 1e-12) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} below 1/sqrt(2)")));
    }
    validate_two_by_two(a, b, c)?;
    let arg = (1.0 + a) * (1.0 + alpha * alpha * b) - alpha * alpha * c.norm_sqr();
    if arg <= 0.0 {
        return Err(Error::Numerical(format!("log argument {arg} not positive")));
    }
    Ok(arg.ln())
}

/// Exact mutual information of `H_inf`: the circle average
/// `E log(1 + a + 4b + 4 Re(c v))`, by iterated-doubling trapezoid
/// quadrature (spectrally accurate for periodic integrands) to 1e-10.
pub fn mi_closed_form_inf(a: f64, b: f64, c: Complex64) -> Result<f64> {
    validate_two_by_two(a, b, c)?;
    let floor = 1.0 + a + 4.0 * b - 4.0 * c.norm();
    if floor <= 0.0 {
        return Err(Error::Numerical(format!(
            "integrand floor {floor} not positive; covariance outside the valid set"
        )));
    }
    Ok(circle_average(|phi| {
        let v = Complex64::new(phi.cos(), phi.sin());
        (1.0 + a + 4.0 * b + 4.0 * (c * v).re).ln()
    }))
}

fn validate_two_by_two(a: f64, b: f64, c: Complex64) -> Result<()> {
    let tol = 1e-9;
    if a < -tol || b < -tol || (a + b - 1.0).abs() > tol || c.norm_sqr() > a * b + tol {
        return Err(Error::InvalidArgument(format!(
            "(a, b, c) = ({a}, {b}, {c}) is not a valid unit-trace covariance"
        )));
    }
    Ok(())
}

/// Average of a smooth periodic function over `[0, 2pi)`.
fn circle_average(f: impl Fn(f64) -> f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let eval = |m: usize| -> f64 {
        (0..m).map(|j| f(two_pi * j as f64 / m as f64)).sum::<f64>() / m as f64
    };
    let mut m = 32;
    let mut prev = eval(m);
    loop {
        m *= 2;
        let cur = eval(m);
        if (cur - prev).abs() <= 1e-11 || m >= (1 << 22) {
            return cur;
        }
        prev = cur;
    }
}

/// Verdict of the capacity-finiteness heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinitenessVerdict {
    FiniteLikely,
    InfiniteSuspected,
}

/// Running means of `log(1 + ||H||)` at nested sample sizes, with the slope
/// of the mean against `log n`.
///
/// This is a heuristic, not a decision procedure: any finite-sample
/// diagnostic errs in both directions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub running_means: Vec<(u64, f64)>,
    pub verdict: FinitenessVerdict,
    pub slope: f64,
    pub seed: u64,
}

/// Estimates `E log(1 + ||H||)` at each size (each estimate extends the
/// previous sample), fits the slope against `log n`, and flags divergence
/// when the slope exceeds [`SLOPE_THRESHOLD`] with a positive trend across
/// all increments.
pub fn finiteness_diagnostic(
    model: &ChannelModel,
    sizes: &[u64],
    rng: &mut RandomStream,
) -> Result<FinitenessReport> {
    if sizes.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 sample sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::InvalidArgument("sizes must be strictly increasing".into()));
    }
    let seed = rng.seed();
    let max_n = *sizes.last().expect("nonempty");
    let mut running_means = Vec::with_capacity(sizes.len());
    let mut sum = 0.0;
    let mut drawn = 0u64;
    for &target in sizes {
        let batch = sample(model, rng, (target - drawn) as usize)?;
        for h in &batch {
            sum += (1.0 + h.frobenius_norm()).ln();
        }
        drawn = target;
        running_means.push((target, sum / target as f64));
    }
    debug_assert_eq!(drawn, max_n);

    // Least-squares slope of the running mean against log n.
    let xs: Vec<f64> = running_means.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = running_means.iter().map(|&(_, m)| m).collect();
    let k = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let var: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let slope = cov / var;

    let monotone = ys.windows(2).all(|w| w[1] > w[0]);
    let verdict = if slope > SLOPE_THRESHOLD && monotone {
        FinitenessVerdict::InfiniteSuspected
    } else {
        FinitenessVerdict::FiniteLikely
    };
    Ok(FinitenessReport { running_means, verdict, slope, seed })
}

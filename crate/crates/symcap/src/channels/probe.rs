//! Statistical probe of the defining symmetry property
//! `V* (H*H) V =(law)= H*H`.
//!
//! The probe compares the distributions of `Tr(M A_r)` for a fixed family of
//! Hermitian probes between independent halves of the sample, one
//! conjugated by `V`. A pass is a necessary condition, never a proof of
//! membership.

use super::ChannelModel;
use crate::matcore::{ComplexMatrix, RandomStream, UnitaryMatrix};
use crate::{Error, Result};

const N_PROBES: usize = 8;
const LEVEL: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeStat {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProbeVerdict {
    Consistent,
    Rejected { statistic: f64, p_value: f64 },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub per_probe: Vec<ProbeStat>,
    /// Familywise level; each probe is tested at `level / #probes`.
    pub level: f64,
}

/// Two-sample Kolmogorov-Smirnov comparison of the probe statistics, with
/// Bonferroni correction over the probe family.
///
/// The `n` channel draws are split into two independent halves so the test's
/// null distribution applies. The probe family is a fixed function of the
/// stream's seed and the dimension.
pub fn membership_probe(
    model: &ChannelModel,
    v: &UnitaryMatrix,
    n: usize,
    rng: &mut RandomStream,
) -> Result<ProbeReport> {
    let (_, nc) = model.dims();
    if v.dim() != nc {
        return Err(Error::DimensionMismatch(format!(
            "V is {}x{} but the channel has {nc} columns",
            v.dim(),
            v.dim()
        )));
    }
    if n < 1000 {
        return Err(Error::InvalidArgument("membership probe needs n >= 1000".into()));
    }

    let probes = probe_family(rng.seed(), nc);
    let n1 = n / 2;
    let n2 = n - n1;

    let mut first: Vec<Vec<f64>> = vec![Vec::with_capacity(n1); N_PROBES];
    for _ in 0..n1 {
        let h = model.sample_one(rng)?;
        let gram = h.adjoint().mul(&h);
        for (r, a) in probes.iter().enumerate() {
            first[r].push(gram.mul(a).trace().re);
        }
    }
    let mut second: Vec<Vec<f64>> = vec![Vec::with_capacity(n2); N_PROBES];
    for _ in 0..n2 {
        let h = model.sample_one(rng)?;
        let gram = h.adjoint().mul(&h);
        let conjugated = v.matrix().adjoint().mul(&gram).mul(v.matrix());
        for (r, a) in probes.iter().enumerate() {
            second[r].push(conjugated.mul(a).trace().re);
        }
    }

    let mut per_probe = Vec::with_capacity(N_PROBES);
    for r in 0..N_PROBES {
        // Conjugating by V perturbs deterministic statistics at rounding
        // level; values this close are ties, not evidence.
        let scale = first[r]
            .iter()
            .chain(second[r].iter())
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let tie_tol = 1e-10 * scale.max(1e-300);
        let statistic = ks_statistic(&mut first[r], &mut second[r], tie_tol);
        let p_value = ks_p_value(statistic, n1, n2);
        per_probe.push(ProbeStat { statistic, p_value });
    }

    let worst = per_probe
        .iter()
        .copied()
        .min_by(|a, b| a.p_value.partial_cmp(&b.p_value).expect("finite p"))
        .expect("nonempty probe family");
    let verdict = if worst.p_value < LEVEL / N_PROBES as f64 {
        ProbeVerdict::Rejected { statistic: worst.statistic, p_value: worst.p_value }
    } else {
        ProbeVerdict::Consistent
    };
    Ok(ProbeReport { verdict, per_probe, level: LEVEL })
}

/// Fixed Hermitian probe family for a `(seed, N)` pair, from a unit
/// Gaussian Hermitian ensemble.
fn probe_family(seed: u64, n: usize) -> Vec<ComplexMatrix> {
    let key = seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0x5052_4F42_4553;
    let mut rng = RandomStream::new(key);
    (0..N_PROBES)
        .map(|_| {
            ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian()).hermitian_part()
        })
        .collect()
}

/// Two-sample KS statistic `sup |F1 - F2|` with values within `tie_tol`
/// treated as ties; sorts its inputs.
fn ks_statistic(xs: &mut [f64], ys: &mut [f64], tie_tol: f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite statistic"));
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite statistic"));
    let (n1, n2) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let (x, y) = (xs[i], ys[j]);
        if x <= y + tie_tol {
            i += 1;
        }
        if y <= x + tie_tol {
            j += 1;
        }
        let gap = (i as f64 / n1 as f64 - j as f64 / n2 as f64).abs();
        d = d.max(gap);
    }
    d
}

/// Asymptotic two-sample p-value (Kolmogorov distribution with the usual
/// finite-sample correction).
fn ks_p_value(d: f64, n1: usize, n2: usize) -> f64 {
    let ne = (n1 as f64 * n2 as f64) / (n1 + n2) as f64;
    let sqrt_ne = ne.sqrt();
    let lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    kolmogorov_tail(lambda)
}

fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

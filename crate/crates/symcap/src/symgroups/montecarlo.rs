//! Monte Carlo estimation of the average operator from Haar samples.
//!
//! The average acts entrywise through the second moments of the group
//! element: `A_G(A)_{ij} = Σ_{kl} A_{kl} E[U_{ik} conj(U_{jl})]`. Estimating
//! the moment tensor once lets any number of probe matrices be averaged at
//! the cost of a single sampling pass; tests use this as the independent
//! oracle against the closed-form operators.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{haar_sample, SymmetryGroup};
use crate::matcore::{ComplexMatrix, RandomStream};
use crate::Result;

const CHUNK: u64 = 4096;

/// Empirical second-moment tensor `E[U_{ik} conj(U_{jl})]` of a group.
pub struct MonteCarloAverager {
    dim: usize,
    n_samples: u64,
    /// Indexed `((i*n + k)*n + j)*n + l`.
    tensor: Vec<Complex64>,
}

impl MonteCarloAverager {
    /// Estimates the tensor from `n_samples` Haar draws. Samples are
    /// partitioned into fixed-size chunks with one derived stream each, so
    /// the result does not depend on the worker count.
    pub fn estimate(
        group: &SymmetryGroup,
        n_samples: u64,
        rng: &mut RandomStream,
    ) -> Result<Self> {
        let n = group.dim();
        let base = rng.fork().seed();
        let n_chunks = n_samples.div_ceil(CHUNK);
        let partials: Result<Vec<Vec<Complex64>>> = (0..n_chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut stream = RandomStream::with_stream(base, chunk);
                let count = CHUNK.min(n_samples - chunk * CHUNK);
                let mut acc = vec![Complex64::new(0.0, 0.0); n * n * n * n];
                for _ in 0..count {
                    let u = haar_sample(group, &mut stream)?;
                    accumulate(&mut acc, u.matrix(), n);
                }
                Ok(acc)
            })
            .collect();
        let mut tensor = vec![Complex64::new(0.0, 0.0); n * n * n * n];
        for partial in partials? {
            for (t, p) in tensor.iter_mut().zip(partial) {
                *t += p;
            }
        }
        let scale = 1.0 / n_samples as f64;
        for t in &mut tensor {
            *t *= scale;
        }
        Ok(Self { dim: n, n_samples, tensor })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    /// Empirical `A_G(A)`.
    pub fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!((a.rows(), a.cols()), (n, n), "probe dimension mismatch");
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    sum += a[(k, l)] * self.tensor[((i * n + k) * n + j) * n + l];
                }
            }
            sum
        })
    }

    /// Moment estimate `E[U_{ik} conj(U_{jl})]`.
    pub fn moment(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        let n = self.dim;
        self.tensor[((i * n + k) * n + j) * n + l]
    }
}

fn accumulate(acc: &mut [Complex64], u: &ComplexMatrix, n: usize) {
    for i in 0..n {
        for k in 0..n {
            let uik = u[(i, k)];
            let row = (i * n + k) * n;
            for j in 0..n {
                let base = (row + j) * n;
                for l in 0..n {
                    acc[base + l] += uik * u[(j, l)].conj();
                }
            }
        }
    }
}

/// One-shot empirical average `(1/n) Σ U A U*` over Haar draws.
pub fn monte_carlo_average(
    group: &SymmetryGroup,
    a: &ComplexMatrix,
    n_samples: u64,
    rng: &mut RandomStream,
) -> Result<ComplexMatrix> {
    Ok(MonteCarloAverager::estimate(group, n_samples, rng)?.apply(a))
}

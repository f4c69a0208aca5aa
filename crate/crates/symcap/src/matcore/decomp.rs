//! Hermitian eigendecomposition, Cholesky, QR, and simplex projection.
//!
//! The eigensolver is a cyclic complex Jacobi iteration: each rotation zeroes
//! one off-diagonal pair exactly, and convergence is quadratic once sweeps
//! settle. For the matrix sizes this crate targets it is both simpler and
//! more accurate than reduction-based methods.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary matrix whose
/// columns are the matching eigenvectors. The Hermitian part of the input is
/// what actually gets decomposed; callers pass matrices that are Hermitian up
/// to rounding.
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigh: matrix must be square".into()));
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let u = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Plane rotation G: G[p,p]=c, G[p,q]=s, G[q,p]=-s*conj(u),
                // G[q,q]=c*conj(u); updates M <- G* M G and V <- V G.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * s * u.conj();
                    m[(i, q)] = mip * s + miq * c * u.conj();
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * s * u;
                    m[(q, j)] = mpj * s + mqj * c * u;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s * u.conj();
                    v[(i, q)] = vip * s + viq * c * u.conj();
                }
                // The rotation zeroes this pair in exact arithmetic.
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((eigenvalues, vectors))
}

/// Cholesky factor `L` (lower triangular) of a Hermitian positive-definite
/// matrix, `A = L L*`.
pub struct CholeskyFactor {
    l: ComplexMatrix,
}

impl CholeskyFactor {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("cholesky: matrix must be square".into()));
        }
        let n = a.rows();
        let mut l = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)].conj();
                }
                if i == j {
                    if sum.re <= 0.0 {
                        return Err(Error::Numerical(format!(
                            "cholesky pivot {:.3e} not positive",
                            sum.re
                        )));
                    }
                    l[(i, i)] = Complex64::new(sum.re.sqrt(), 0.0);
                } else {
                    l[(i, j)] = sum / l[(j, j)].re;
                }
            }
        }
        Ok(Self { l })
    }

    pub fn logdet(&self) -> f64 {
        2.0 * (0..self.l.rows()).map(|i| self.l[(i, i)].re.ln()).sum::<f64>()
    }

    /// Solves `A X = B` via the two triangular solves.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.l.rows();
        assert_eq!(b.rows(), n, "cholesky solve: shape mismatch");
        let mut y = b.clone();
        // L y = b
        for col in 0..b.cols() {
            for i in 0..n {
                let mut sum = y[(i, col)];
                for k in 0..i {
                    sum -= self.l[(i, k)] * y[(k, col)];
                }
                y[(i, col)] = sum / self.l[(i, i)].re;
            }
            // L* x = y
            for i in (0..n).rev() {
                let mut sum = y[(i, col)];
                for k in (i + 1)..n {
                    sum -= self.l[(k, i)].conj() * y[(k, col)];
                }
                y[(i, col)] = sum / self.l[(i, i)].re;
            }
        }
        y
    }
}

/// Householder QR of a square complex matrix; returns `(Q, R)` with `Q`
/// unitary and `R` upper triangular.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    assert!(a.is_square(), "qr: matrix must be square");
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        let mut norm_sq = 0.0;
        for i in k..n {
            norm_sq += r[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        // v = x - alpha e_k, H = I - 2 v v* / (v* v)
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // R <- H R
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, i) in (k..n).enumerate() {
                dot += v[idx].conj() * r[(i, j)];
            }
            dot *= beta;
            for (idx, i) in (k..n).enumerate() {
                let upd = r[(i, j)] - v[idx] * dot;
                r[(i, j)] = upd;
            }
        }
        // Q <- Q H
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, j) in (k..n).enumerate() {
                dot += q[(i, j)] * v[idx];
            }
            dot *= beta;
            for (idx, j) in (k..n).enumerate() {
                let upd = q[(i, j)] - dot * v[idx].conj();
                q[(i, j)] = upd;
            }
        }
    }
    (q, r)
}

/// Euclidean projection of a real vector onto the probability simplex
/// (sort-and-threshold rule).
pub fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    let mut found = false;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
            found = true;
        }
    }
    if !found {
        // All mass at the largest coordinate; cannot happen with finite input
        // but keeps the function total.
        let argmax = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut out = vec![0.0; v.len()];
        out[argmax] = 1.0;
        return out;
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

use super::decomp::{qr, simplex_projection};
use super::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::RngCore;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_matrix(rows: usize, cols: usize, rng: &mut RandomStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

fn random_hermitian(n: usize, rng: &mut RandomStream) -> ComplexMatrix {
    random_matrix(n, n, rng).hermitian_part()
}

fn random_covariance(n: usize, rng: &mut RandomStream) -> CovarianceMatrix {
    let g = random_matrix(n, n, rng);
    let gram = g.mul(&g.adjoint());
    let tr = gram.trace().re;
    CovarianceMatrix::new(gram.scale_re(1.0 / tr)).unwrap()
}

#[test]
fn frobenius_norm_examples() {
    let id2 = ComplexMatrix::identity(2);
    assert!((frobenius_norm(&id2) - 2.0_f64.sqrt()).abs() < 1e-15);

    let m = ComplexMatrix::from_real_rows(&[&[3.0, 4.0], &[0.0, 0.0]]).unwrap();
    assert!((frobenius_norm(&m) - 5.0).abs() < 1e-15);

    let m = ComplexMatrix::from_rows(vec![vec![c(1.0, 1.0), c(0.0, 0.0)], vec![
        c(0.0, 0.0),
        c(0.0, 0.0),
    ]])
    .unwrap();
    assert!((frobenius_norm(&m) - 2.0_f64.sqrt()).abs() < 1e-15);
}

#[test]
fn logdet_kernel_examples() {
    let h = ComplexMatrix::identity(2);
    let q = CovarianceMatrix::isotropic(2);
    let v = logdet_kernel(&h, &q).unwrap();
    assert!((v - 2.0 * 1.5_f64.ln()).abs() < 1e-14);

    let h0 = ComplexMatrix::zeros(2, 2);
    assert!(logdet_kernel(&h0, &q).unwrap().abs() < 1e-15);

    // The two-antenna worked channel with alpha = 2, phase fixed to one.
    let h = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
    let q = CovarianceMatrix::from_probabilities(&[0.125, 0.875]).unwrap();
    let v = logdet_kernel(&h, &q).unwrap();
    assert!((v - 5.0625_f64.ln()).abs() < 1e-14);
}

#[test]
fn logdet_kernel_rejects_dim_mismatch() {
    let h = ComplexMatrix::zeros(2, 3);
    let q = CovarianceMatrix::isotropic(2);
    assert!(logdet_kernel(&h, &q).is_err());
}

#[test]
fn logdet_kernel_rectangular() {
    // M < N and M > N both work through the M x M kernel.
    let mut rng = RandomStream::new(7);
    for (m, n) in [(2usize, 4usize), (4, 2)] {
        let h = random_matrix(m, n, &mut rng);
        let q = random_covariance(n, &mut rng);
        let v = logdet_kernel(&h, &q).unwrap();
        assert!(v >= 0.0);
    }
}

#[test]
fn project_to_covariance_examples() {
    let half = ComplexMatrix::identity(2).scale_re(0.5);
    let q = project_to_covariance(&half).unwrap();
    assert!(q.matrix().dist_frobenius(&half) < 1e-14);

    let q = project_to_covariance(&ComplexMatrix::from_real_diag(&[2.0, 0.0])).unwrap();
    assert!(q.matrix().dist_frobenius(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-14);

    // Hand-solved 2-variable simplex projection of (1, -1): the KKT system
    // gives theta = 0, so the projection clips to (1, 0).
    let q = project_to_covariance(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap();
    assert!(q.matrix().dist_frobenius(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-14);
}

#[test]
fn project_to_covariance_idempotent_and_fixes_valid() {
    let mut rng = RandomStream::new(42);
    for n in [1usize, 2, 3, 5] {
        let a = random_matrix(n, n, &mut rng);
        let p1 = project_to_covariance(&a).unwrap();
        let p2 = project_to_covariance(p1.matrix()).unwrap();
        assert!(p1.matrix().dist_frobenius(p2.matrix()) < 1e-12);

        let q = random_covariance(n, &mut rng);
        let pq = project_to_covariance(q.matrix()).unwrap();
        assert!(pq.matrix().dist_frobenius(q.matrix()) < 1e-12);
    }
}

#[test]
fn eigh_recovers_known_spectrum() {
    // [[0,1],[1,0]] has eigenvalues -1, 1.
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let (vals, vecs) = eigh(&a).unwrap();
    assert!((vals[0] + 1.0).abs() < 1e-14);
    assert!((vals[1] - 1.0).abs() < 1e-14);
    let d = ComplexMatrix::from_real_diag(&vals);
    assert!(vecs.mul(&d).mul(&vecs.adjoint()).dist_frobenius(&a) < 1e-13);
}

#[test]
fn eigh_reconstructs_random_hermitian() {
    let mut rng = RandomStream::new(3);
    for n in [1usize, 2, 3, 6, 12] {
        let a = random_hermitian(n, &mut rng);
        let (vals, vecs) = eigh(&a).unwrap();
        let d = ComplexMatrix::from_real_diag(&vals);
        let resid = vecs.mul(&d).mul(&vecs.adjoint()).dist_frobenius(&a);
        assert!(resid < 1e-12 * a.frobenius_norm().max(1.0), "residual {resid} at n={n}");
        let ortho =
            vecs.adjoint().mul(&vecs).dist_frobenius(&ComplexMatrix::identity(n));
        assert!(ortho < 1e-12, "orthonormality {ortho} at n={n}");
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn eigh_handles_degenerate_spectra() {
    let a = ComplexMatrix::identity(4).scale_re(2.5);
    let (vals, vecs) = eigh(&a).unwrap();
    assert!(vals.iter().all(|&v| (v - 2.5).abs() < 1e-14));
    assert!(vecs.adjoint().mul(&vecs).dist_frobenius(&ComplexMatrix::identity(4)) < 1e-12);
}

#[test]
fn cholesky_matches_eigh_logdet() {
    let mut rng = RandomStream::new(11);
    for n in [1usize, 3, 5] {
        let g = random_matrix(n, n, &mut rng);
        let a = ComplexMatrix::identity(n).add(&g.mul(&g.adjoint()));
        let chol = CholeskyFactor::new(&a).unwrap();
        let (vals, _) = eigh(&a).unwrap();
        let direct: f64 = vals.iter().map(|v| v.ln()).sum();
        assert!((chol.logdet() - direct).abs() < 1e-10);
    }
}

#[test]
fn cholesky_solve_inverts() {
    let mut rng = RandomStream::new(12);
    let n = 4;
    let g = random_matrix(n, n, &mut rng);
    let a = ComplexMatrix::identity(n).add(&g.mul(&g.adjoint()));
    let b = random_matrix(n, 2, &mut rng);
    let x = CholeskyFactor::new(&a).unwrap().solve(&b);
    assert!(a.mul(&x).dist_frobenius(&b) < 1e-10);
}

#[test]
fn qr_factors_random_matrix() {
    let mut rng = RandomStream::new(13);
    for n in [1usize, 2, 5] {
        let a = random_matrix(n, n, &mut rng);
        let (q, r) = qr(&a);
        assert!(q.mul(&q.adjoint()).dist_frobenius(&ComplexMatrix::identity(n)) < 1e-12);
        assert!(q.mul(&r).dist_frobenius(&a) < 1e-12);
        for i in 0..n {
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-12);
            }
        }
    }
}

#[test]
fn covariance_validation_rejects_bad_inputs() {
    // Not Hermitian.
    let m =
        ComplexMatrix::from_real_rows(&[&[0.5, 0.3], &[0.0, 0.5]]).unwrap();
    assert!(CovarianceMatrix::new(m).is_err());
    // Wrong trace.
    let m = ComplexMatrix::identity(2);
    assert!(CovarianceMatrix::new(m).is_err());
    // Indefinite.
    let m = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
    assert!(CovarianceMatrix::new(m).is_err());
}

#[test]
fn unitary_validation() {
    assert!(UnitaryMatrix::new(ComplexMatrix::identity(3)).is_ok());
    let m = ComplexMatrix::identity(2).scale_re(2.0);
    assert!(UnitaryMatrix::new(m).is_err());
}

#[test]
fn simplex_projection_cases() {
    assert_eq!(simplex_projection(&[0.2, 0.8]), vec![0.2, 0.8]);
    let p = simplex_projection(&[1.0, -1.0]);
    assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
    let p = simplex_projection(&[0.0, 0.0, 0.0]);
    assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
}

#[test]
fn stream_reproducibility_and_forks() {
    let mut a = RandomStream::new(99);
    let mut b = RandomStream::new(99);
    let xs: Vec<f64> = (0..16).map(|_| a.uniform()).collect();
    let ys: Vec<f64> = (0..16).map(|_| b.uniform()).collect();
    assert_eq!(xs, ys);

    let mut fa = a.fork();
    let mut fb = b.fork();
    assert_eq!(fa.uniform(), fb.uniform());
    assert_eq!(fa.seed(), fb.seed());

    let mut s0 = RandomStream::with_stream(5, 1);
    let mut s1 = RandomStream::with_stream(5, 2);
    assert_ne!(s0.next_u64(), s1.next_u64());
}

#[test]
fn matrix_literal_round_trip() {
    let m = ComplexMatrix::from_rows(vec![
        vec![c(1.0, 0.0), c(0.25, -0.5)],
        vec![c(-3.0, 2.0), c(0.0, 0.0)],
    ])
    .unwrap();
    let json = serde_json::to_string(&m).unwrap();
    let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
    assert!(m.dist_frobenius(&back) == 0.0);

    // Bare reals parse as re + 0i, pairs as [re, im].
    let parsed: ComplexMatrix = serde_json::from_str("[[1, [0, -2.5]], [3.5, 4]]").unwrap();
    assert_eq!(parsed[(0, 1)], c(0.0, -2.5));
    assert_eq!(parsed[(1, 0)], c(3.5, 0.0));
}

#[test]
fn kron_and_direct_sum_layout() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let b = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    let k = a.kron(&b);
    assert_eq!(k[(0, 0)], c(1.0, 0.0));
    assert_eq!(k[(1, 1)], c(-1.0, 0.0));
    assert_eq!(k[(0, 2)], c(2.0, 0.0));
    assert_eq!(k[(3, 3)], c(-4.0, 0.0));

    let s = ComplexMatrix::direct_sum(&[a.clone(), b]);
    assert_eq!(s.rows(), 4);
    assert_eq!(s[(0, 1)], c(2.0, 0.0));
    assert_eq!(s[(2, 2)], c(1.0, 0.0));
    assert_eq!(s[(0, 2)], c(0.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn logdet_nonnegative_and_bounded(seed in 0u64..1_000) {
        let mut rng = RandomStream::new(seed);
        let m = 1 + (seed % 3) as usize;
        let n = 1 + (seed % 4) as usize;
        let h = random_matrix(m, n, &mut rng);
        let q = random_covariance(n, &mut rng);
        let v = logdet_kernel(&h, &q).unwrap();
        prop_assert!(v >= 0.0);
        // Jensen bound: log det <= M log(1 + (N/M) ||H||^2).
        let bound = m as f64
            * (1.0 + (n as f64 / m as f64) * h.frobenius_norm().powi(2)).ln();
        prop_assert!(v <= bound + 1e-10);
    }

    #[test]
    fn logdet_unitary_change_of_basis(seed in 0u64..1_000) {
        // det(I + AB) = det(I + BA): logdet(HV, V* Q V) = logdet(H, Q).
        let mut rng = RandomStream::new(seed);
        let n = 2 + (seed % 3) as usize;
        let h = random_matrix(n, n, &mut rng);
        let q = random_covariance(n, &mut rng);
        let g = random_matrix(n, n, &mut rng);
        let (v, _) = qr(&g);
        let hv = h.mul(&v);
        let qv = CovarianceMatrix::new(
            v.adjoint().mul(q.matrix()).mul(&v).hermitian_part(),
        ).unwrap();
        let lhs = logdet_kernel(&hv, &qv).unwrap();
        let rhs = logdet_kernel(&h, &q).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn projection_output_is_valid(seed in 0u64..1_000) {
        let mut rng = RandomStream::new(seed);
        let n = 1 + (seed % 5) as usize;
        let a = random_matrix(n, n, &mut rng).scale_re(3.0);
        let q = project_to_covariance(&a).unwrap();
        prop_assert!((q.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}

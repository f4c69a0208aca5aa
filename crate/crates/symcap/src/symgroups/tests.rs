use super::*;
use crate::matcore::{ComplexMatrix, CovarianceMatrix, RandomStream, UnitaryMatrix};
use crate::Error;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(n: usize, rng: &mut RandomStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian()).hermitian_part()
}

fn random_covariance(n: usize, rng: &mut RandomStream) -> CovarianceMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
    let gram = g.mul(&g.adjoint());
    let tr = gram.trace().re;
    CovarianceMatrix::new(gram.scale_re(1.0 / tr)).unwrap()
}

fn haar(n: usize, rng: &mut RandomStream) -> UnitaryMatrix {
    haar_sample(&SymmetryGroup::FullUnitary(n), rng).unwrap()
}

/// A zoo of structured variants at dimension <= 6 for invariant sweeps.
fn group_zoo(rng: &mut RandomStream) -> Vec<SymmetryGroup> {
    let w3 = haar(3, rng);
    let w2 = haar(2, rng);
    vec![
        SymmetryGroup::FullUnitary(3),
        SymmetryGroup::ConjugatedTorus(w3),
        SymmetryGroup::Permutations(4),
        SymmetryGroup::SignFlips(3),
        SymmetryGroup::SignedPermutations(3),
        SymmetryGroup::finite_group(vec![
            UnitaryMatrix::identity(2),
            UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap(),
        ])
        .unwrap(),
        SymmetryGroup::tensor(SymmetryGroup::Trivial(2), SymmetryGroup::FullUnitary(2)),
        SymmetryGroup::tensor(SymmetryGroup::ConjugatedTorus(w2.clone()), SymmetryGroup::SignedPermutations(2)),
        SymmetryGroup::direct_sum(vec![
            SymmetryGroup::FullUnitary(2),
            SymmetryGroup::ConjugatedTorus(w2.clone()),
        ])
        .unwrap(),
        SymmetryGroup::Trivial(3),
        SymmetryGroup::conjugated(
            w2,
            SymmetryGroup::direct_sum(vec![
                SymmetryGroup::SignedPermutations(1),
                SymmetryGroup::SignedPermutations(1),
            ])
            .unwrap(),
        )
        .unwrap(),
    ]
}

#[test]
fn haar_sample_trivial_is_identity() {
    let mut rng = RandomStream::new(1);
    let g = SymmetryGroup::Trivial(3);
    for _ in 0..10 {
        let u = haar_sample(&g, &mut rng).unwrap();
        assert_eq!(u.matrix().dist_frobenius(&ComplexMatrix::identity(3)), 0.0);
    }
}

#[test]
fn haar_sample_sign_flip_mean_vanishes() {
    // The two-element group {1, -1}: exact mean is zero.
    let mut rng = RandomStream::new(2);
    let g = SymmetryGroup::SignFlips(1);
    let n = 100_000;
    let mean: f64 = (0..n)
        .map(|_| haar_sample(&g, &mut rng).unwrap().matrix()[(0, 0)].re)
        .sum::<f64>()
        / n as f64;
    assert!(mean.abs() < 0.02, "empirical mean {mean}");
}

#[test]
fn haar_sample_full_unitary_second_moment() {
    // E[U_11 conj(U_11)] = 1/N for Haar on U(N).
    let mut rng = RandomStream::new(3);
    let g = SymmetryGroup::FullUnitary(2);
    let n = 100_000;
    let samples: Vec<f64> =
        (0..n).map(|_| haar_sample(&g, &mut rng).unwrap().matrix()[(0, 0)].norm_sqr()).collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let stderr = (var / n as f64).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * stderr, "mean {mean}, stderr {stderr}");
}

#[test]
fn haar_sample_rejects_plain_multiset() {
    let g = SymmetryGroup::finite_multiset(vec![UnitaryMatrix::identity(2)]).unwrap();
    assert!(haar_sample(&g, &mut RandomStream::new(0)).is_err());
}

#[test]
fn finite_group_closure_is_validated() {
    // {I, diag(1, i)} is not closed: the square diag(1, -1) is missing.
    let v = UnitaryMatrix::new(ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)])).unwrap();
    assert!(SymmetryGroup::finite_group(vec![UnitaryMatrix::identity(2), v]).is_err());

    let f = UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap();
    assert!(SymmetryGroup::finite_group(vec![UnitaryMatrix::identity(2), f]).is_ok());
}

#[test]
fn average_permutations_matches_enumeration() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let avg = average(&SymmetryGroup::Permutations(2), &a).unwrap();
    // Enumerate both 2x2 permutation matrices.
    let id = ComplexMatrix::identity(2);
    let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let expect = a.conjugate_by(&id).add(&a.conjugate_by(&swap)).scale_re(0.5);
    assert!(avg.dist_frobenius(&expect) < 1e-14);
    assert!(avg.dist_frobenius(&ComplexMatrix::ones(2).scale_re(2.5)) < 1e-14);
}

#[test]
fn average_signed_permutations_matches_enumeration() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let avg = average(&SymmetryGroup::SignedPermutations(2), &a).unwrap();
    // All 8 signed permutations of dimension 2.
    let mut acc = ComplexMatrix::zeros(2, 2);
    for swap in [false, true] {
        for s0 in [1.0, -1.0] {
            for s1 in [1.0, -1.0] {
                let p = if swap {
                    ComplexMatrix::from_real_rows(&[&[0.0, s1], &[s0, 0.0]]).unwrap()
                } else {
                    ComplexMatrix::from_real_diag(&[s0, s1])
                };
                acc = acc.add(&a.conjugate_by(&p));
            }
        }
    }
    let expect = acc.scale_re(1.0 / 8.0);
    assert!(avg.dist_frobenius(&expect) < 1e-14);
    assert!(avg.dist_frobenius(&ComplexMatrix::from_real_diag(&[2.5, 2.5])) < 1e-14);
}

#[test]
fn average_direct_sum_of_sign_flips_matches_enumeration() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
    let g = SymmetryGroup::direct_sum(vec![
        SymmetryGroup::SignFlips(1),
        SymmetryGroup::SignFlips(1),
    ])
    .unwrap();
    let avg = average(&g, &a).unwrap();
    let mut acc = ComplexMatrix::zeros(2, 2);
    for s0 in [1.0, -1.0] {
        for s1 in [1.0, -1.0] {
            acc = acc.add(&a.conjugate_by(&ComplexMatrix::from_real_diag(&[s0, s1])));
        }
    }
    assert!(avg.dist_frobenius(&acc.scale_re(0.25)) < 1e-14);
    assert!(avg.dist_frobenius(&ComplexMatrix::from_real_diag(&[1.0, 4.0])) < 1e-14);
}

#[test]
fn average_tensor_product_against_monte_carlo() {
    let g = SymmetryGroup::tensor(SymmetryGroup::Trivial(2), SymmetryGroup::FullUnitary(2));
    let a = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]);
    let avg = average(&g, &a).unwrap();
    assert!(avg.dist_frobenius(&ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0])) < 1e-14);

    let mut rng = RandomStream::new(17);
    let mc = monte_carlo_average(&g, &a, 1_000_000, &mut rng).unwrap();
    assert!(mc.dist_frobenius(&avg) < 5e-3 * a.frobenius_norm());
}

#[test]
fn average_rejects_two_nonzero_direct_sum_means() {
    let g = SymmetryGroup::direct_sum(vec![
        SymmetryGroup::Trivial(1),
        SymmetryGroup::Trivial(1),
    ])
    .unwrap();
    let a = ComplexMatrix::identity(2).scale_re(0.5);
    assert!(matches!(average(&g, &a), Err(Error::UnsupportedDirectSumReduction)));
}

#[test]
fn average_operator_invariants() {
    // Idempotence, trace preservation, PSD preservation, self-adjointness.
    let mut rng = RandomStream::new(23);
    for g in group_zoo(&mut rng) {
        let n = g.dim();
        for _ in 0..3 {
            let a = random_hermitian(n, &mut rng);
            let avg = average(&g, &a).unwrap();
            let twice = average(&g, &avg).unwrap();
            assert!(twice.dist_frobenius(&avg) <= 1e-10, "idempotence for {}", g.describe());
            assert!(
                (avg.trace() - a.trace()).norm() <= 1e-12 * a.trace().norm().max(1.0),
                "trace preservation for {}",
                g.describe()
            );

            let q = random_covariance(n, &mut rng);
            let avg_q = average(&g, q.matrix()).unwrap();
            let (eigs, _) = crate::matcore::eigh(&avg_q).unwrap();
            assert!(eigs[0] >= -1e-10, "positivity for {}", g.describe());

            let x = random_hermitian(n, &mut rng);
            let y = random_hermitian(n, &mut rng);
            let lhs = average(&g, &x).unwrap().inner_re(&y);
            let rhs = x.inner_re(&average(&g, &y).unwrap());
            assert!((lhs - rhs).abs() <= 1e-10, "self-adjointness for {}", g.describe());
        }
    }
}

#[test]
fn averaged_set_examples() {
    let s = averaged_set(&SymmetryGroup::FullUnitary(4)).unwrap();
    match &s {
        ReducedSet::Singleton(q) => {
            assert!(q.matrix().dist_frobenius(CovarianceMatrix::isotropic(4).matrix()) < 1e-15)
        }
        other => panic!("expected singleton, got {}", other.describe()),
    }

    let s = averaged_set(&SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2))).unwrap();
    let q = embed(&s, &ReducedPoint::Probabilities(vec![0.3, 0.7])).unwrap();
    assert!(q.matrix().dist_frobenius(&ComplexMatrix::from_real_diag(&[0.3, 0.7])) < 1e-15);

    // Direct sum of two one-dimensional signed permutation groups: the
    // diagonal family {diag(p, 1-p)}.
    let g = SymmetryGroup::direct_sum(vec![
        SymmetryGroup::SignedPermutations(1),
        SymmetryGroup::SignedPermutations(1),
    ])
    .unwrap();
    let s = averaged_set(&g).unwrap();
    let q = embed(
        &s,
        &ReducedPoint::Weighted {
            weights: vec![0.25, 0.75],
            parts: vec![ReducedPoint::Empty, ReducedPoint::Empty],
        },
    )
    .unwrap();
    assert!(q.matrix().dist_frobenius(&ComplexMatrix::from_real_diag(&[0.25, 0.75])) < 1e-15);
}

#[test]
fn averaged_set_tensor_requires_a_mixing_factor() {
    let g = SymmetryGroup::tensor(
        SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
        SymmetryGroup::Permutations(3),
    );
    assert!(matches!(averaged_set(&g), Err(Error::UnsupportedTensorReduction)));

    // Mirrored orientation: mixing factor on the left.
    let g = SymmetryGroup::tensor(
        SymmetryGroup::SignedPermutations(2),
        SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
    );
    let s = averaged_set(&g).unwrap();
    let q = embed(
        &s,
        &ReducedPoint::Kron(Box::new(ReducedPoint::Probabilities(vec![1.0, 0.0]))),
    )
    .unwrap();
    assert!(q
        .matrix()
        .dist_frobenius(&ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.5, 0.0]))
        < 1e-15);
}

#[test]
fn embed_block_kron_example() {
    let g = SymmetryGroup::tensor(SymmetryGroup::Trivial(2), SymmetryGroup::FullUnitary(2));
    let s = averaged_set(&g).unwrap();
    let inner = CovarianceMatrix::from_probabilities(&[1.0, 0.0]).unwrap();
    let q = embed(&s, &ReducedPoint::Kron(Box::new(ReducedPoint::Covariance(inner)))).unwrap();
    let expect = ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0]);
    assert!(q.matrix().dist_frobenius(&expect) < 1e-15);

    // Cross-check with the Monte Carlo average of the embedded point.
    let mut rng = RandomStream::new(5);
    let mc = monte_carlo_average(&g, q.matrix(), 200_000, &mut rng).unwrap();
    assert!(mc.dist_frobenius(q.matrix()) < 5e-3);
}

#[test]
fn embed_singleton_ignores_params() {
    let s = averaged_set(&SymmetryGroup::FullUnitary(3)).unwrap();
    let q = embed(&s, &ReducedPoint::Probabilities(vec![0.9, 0.1])).unwrap();
    assert!(q.matrix().dist_frobenius(CovarianceMatrix::isotropic(3).matrix()) < 1e-15);
}

#[test]
fn embed_rejects_infeasible_params() {
    let s = averaged_set(&SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2))).unwrap();
    assert!(embed(&s, &ReducedPoint::Probabilities(vec![0.5, 0.2])).is_err());
    assert!(embed(&s, &ReducedPoint::Probabilities(vec![1.5, -0.5])).is_err());
    assert!(embed(&s, &ReducedPoint::Empty).is_err());
}

#[test]
fn is_fixed_point_examples() {
    let g = SymmetryGroup::FullUnitary(2);
    assert!(is_fixed_point(&g, &CovarianceMatrix::isotropic(2), 1e-12).unwrap());
    let skew = CovarianceMatrix::from_probabilities(&[1.0, 0.0]).unwrap();
    assert!(!is_fixed_point(&g, &skew, 1e-9).unwrap());

    let torus = SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2));
    let diag = CovarianceMatrix::from_probabilities(&[0.3, 0.7]).unwrap();
    assert!(is_fixed_point(&torus, &diag, 1e-12).unwrap());
}

#[test]
fn embedded_points_are_fixed_points() {
    let mut rng = RandomStream::new(31);
    for g in group_zoo(&mut rng) {
        let set = match averaged_set(&g) {
            Ok(s) => s,
            Err(_) => continue, // finite families have no parameterization
        };
        for _ in 0..4 {
            let params = random_point(&set, &mut rng);
            let residual = embedding_fixed_point_residual(&g, &set, &params).unwrap();
            assert!(residual <= 1e-9, "residual {residual:.2e} for {}", g.describe());
        }
    }
}

fn random_point(set: &ReducedSet, rng: &mut RandomStream) -> ReducedPoint {
    match set {
        ReducedSet::Singleton(_) => ReducedPoint::Empty,
        ReducedSet::ConjugatedSimplex { groups, .. } => {
            ReducedPoint::Probabilities(random_simplex(groups.len(), rng))
        }
        ReducedSet::BlockKron { inner, .. } => {
            ReducedPoint::Kron(Box::new(random_point(inner, rng)))
        }
        ReducedSet::WeightedDirectSum(parts) => ReducedPoint::Weighted {
            weights: random_simplex(parts.len(), rng),
            parts: parts.iter().map(|p| random_point(p, rng)).collect(),
        },
        ReducedSet::FullSet(n) => ReducedPoint::Covariance(random_covariance(*n, rng)),
    }
}

fn random_simplex(k: usize, rng: &mut RandomStream) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.uniform().max(1e-12).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

#[test]
fn subgroup_coarsening_fixed_points() {
    // Q = A_G(Q') is fixed by every supported subgroup F of G.
    let mut rng = RandomStream::new(37);
    let w = haar(3, &mut rng);
    let pairs = vec![
        (SymmetryGroup::ConjugatedTorus(w), SymmetryGroup::FullUnitary(3)),
        (SymmetryGroup::SignFlips(3), SymmetryGroup::SignedPermutations(3)),
        (SymmetryGroup::Trivial(4), SymmetryGroup::Permutations(4)),
        (SymmetryGroup::Permutations(3), SymmetryGroup::SignedPermutations(3)),
        (
            SymmetryGroup::SignFlips(2),
            SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
        ),
    ];
    for (f, g) in pairs {
        check_structural_subgroup(&f, &g).unwrap();
        for _ in 0..5 {
            let q = random_covariance(g.dim(), &mut rng);
            let averaged =
                CovarianceMatrix::new(average(&g, q.matrix()).unwrap().hermitian_part()).unwrap();
            assert!(
                is_fixed_point(&f, &averaged, 1e-9).unwrap(),
                "{} not fixed inside {}",
                f.describe(),
                g.describe()
            );
        }
    }
}

#[test]
fn structural_subgroup_rejects_unsupported() {
    let err = check_structural_subgroup(
        &SymmetryGroup::Permutations(3),
        &SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(3)),
    );
    assert!(err.is_err());
}

#[test]
fn element_membership_checks() {
    let swap =
        UnitaryMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap())
            .unwrap();
    assert!(element_in_group(&swap, &SymmetryGroup::Permutations(2)).unwrap());
    assert!(element_in_group(&swap, &SymmetryGroup::SignedPermutations(2)).unwrap());
    assert!(!element_in_group(&swap, &SymmetryGroup::SignFlips(2)).unwrap());
    assert!(!element_in_group(&swap, &SymmetryGroup::Trivial(2)).unwrap());

    let phase = UnitaryMatrix::from_unit_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
    assert!(element_in_group(
        &phase,
        &SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2))
    )
    .unwrap());
    assert!(!element_in_group(&phase, &SymmetryGroup::SignFlips(2)).unwrap());
}

#[test]
fn left_invariance_of_haar_sampling() {
    // Moments of Tr(U A U* B) match between {U_i} and {V U_i}.
    let mut rng = RandomStream::new(41);
    let cases = vec![
        (SymmetryGroup::FullUnitary(2), haar(2, &mut rng)),
        (SymmetryGroup::SignedPermutations(3), {
            let m = ComplexMatrix::from_real_rows(&[
                &[0.0, -1.0, 0.0],
                &[1.0, 0.0, 0.0],
                &[0.0, 0.0, -1.0],
            ])
            .unwrap();
            UnitaryMatrix::new(m).unwrap()
        }),
    ];
    for (g, v) in cases {
        let n = g.dim();
        let a = random_hermitian(n, &mut rng);
        let b = random_hermitian(n, &mut rng);
        let draws = 20_000;
        let mut plain = Vec::with_capacity(draws);
        let mut shifted = Vec::with_capacity(draws);
        let mut rng1 = rng.fork();
        let mut rng2 = rng1.clone();
        for _ in 0..draws {
            let u = haar_sample(&g, &mut rng1).unwrap();
            plain.push(a.conjugate_by(u.matrix()).mul(&b).trace().re);
            let vu = v.matrix().mul(haar_sample(&g, &mut rng2).unwrap().matrix());
            shifted.push(a.conjugate_by(&vu).mul(&b).trace().re);
        }
        for k in 1..=3 {
            let (m1, s1) = moment_and_stderr(&plain, k);
            let (m2, s2) = moment_and_stderr(&shifted, k);
            let gap = (m1 - m2).abs();
            let band = 3.0 * (s1 * s1 + s2 * s2).sqrt();
            assert!(gap <= band.max(1e-9), "moment {k} gap {gap:.3e} > {band:.3e}");
        }
    }
}

fn moment_and_stderr(xs: &[f64], k: i32) -> (f64, f64) {
    let n = xs.len() as f64;
    let powered: Vec<f64> = xs.iter().map(|x| x.powi(k)).collect();
    let mean = powered.iter().sum::<f64>() / n;
    let var = powered.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn rational_independence_examples() {
    let v = rational_independence(&PhaseVector::new(vec![0.5, 0.25]), 100, 1e-9).unwrap();
    match v {
        IndependenceVerdict::Dependent { relation } => {
            let s = relation[0] as f64 + relation[1] as f64 * 0.5 + relation[2] as f64 * 0.25;
            assert!(s.abs() < 1e-9);
            assert!(relation.iter().any(|&q| q != 0));
        }
        _ => panic!("expected dependence"),
    }

    let phases = PhaseVector::from_rationals(&[(1, 3), (2, 3)]).unwrap();
    let v = rational_independence(&phases, 100, 1e-9).unwrap();
    match v {
        IndependenceVerdict::Dependent { relation } => {
            // q0 + q1/3 + 2 q2/3 = 0 exactly.
            let num = 3 * relation[0] + relation[1] + 2 * relation[2];
            assert_eq!(num, 0);
        }
        _ => panic!("expected exact dependence"),
    }

    let phases =
        PhaseVector::new(vec![2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0]);
    let v = rational_independence(&phases, 1000, 1e-9).unwrap();
    assert_eq!(v, IndependenceVerdict::IndependentUpToBound { bound: 1000 });
}

#[test]
fn rational_independence_flags_degenerate_phases() {
    // Repeated phases give the relation theta_i - theta_j = 0.
    let theta = 2f64.sqrt() - 1.0;
    let v = rational_independence(&PhaseVector::new(vec![theta, theta]), 10, 1e-9).unwrap();
    assert!(matches!(v, IndependenceVerdict::Dependent { .. }));
}

fn diag_standard_symmetry() -> UnitaryMatrix {
    let two_pi = 2.0 * std::f64::consts::PI;
    let t1 = two_pi * (2f64.sqrt() - 1.0);
    let t2 = two_pi * (3f64.sqrt() - 1.0);
    UnitaryMatrix::from_unit_diag(&[c(t1.cos(), t1.sin()), c(t2.cos(), t2.sin())])
}

#[test]
fn closure_of_diagonal_standard_symmetry() {
    let v = diag_standard_symmetry();
    match closure_of_standard_symmetry(&v).unwrap() {
        SymmetryGroup::ConjugatedTorus(w) => {
            // The torus basis agrees with the identity up to a generalized
            // permutation (column order and phase gauge).
            assert!(is_generalized_permutation(w.matrix(), 1e-8));
        }
        other => panic!("unexpected closure {}", other.describe()),
    }
}

#[test]
fn closure_rejects_rationally_dependent_phases() {
    let v = UnitaryMatrix::from_unit_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
    assert!(matches!(
        closure_of_standard_symmetry(&v),
        Err(Error::NotStandardSymmetry(_))
    ));
}

#[test]
fn closure_recovers_conjugating_basis() {
    let mut rng = RandomStream::new(53);
    let w0 = haar(2, &mut rng);
    let d = diag_standard_symmetry();
    let v = UnitaryMatrix::new(d.matrix().conjugate_by(w0.matrix())).unwrap();
    match closure_of_standard_symmetry(&v).unwrap() {
        SymmetryGroup::ConjugatedTorus(w) => {
            // Same torus: W0* W is a generalized permutation, and the two
            // average operators agree.
            let rel = w0.matrix().adjoint().mul(w.matrix());
            assert!(is_generalized_permutation(&rel, 1e-7));
            let a = random_hermitian(2, &mut rng);
            let avg1 = average(&SymmetryGroup::ConjugatedTorus(w0.clone()), &a).unwrap();
            let avg2 = average(&SymmetryGroup::ConjugatedTorus(w), &a).unwrap();
            assert!(avg1.dist_frobenius(&avg2) < 1e-9);
        }
        other => panic!("unexpected closure {}", other.describe()),
    }
}

#[test]
fn two_symmetry_condition_examples() {
    let mut rng = RandomStream::new(61);
    let v1 = haar(3, &mut rng);
    let v2 = haar(3, &mut rng);
    let report = check_two_symmetry_condition(&v1, &v2).unwrap();
    assert_eq!(report.verdict, TwoSymmetryVerdict::IsotropicOptimal);

    let v = diag_standard_symmetry();
    let report = check_two_symmetry_condition(&v, &v).unwrap();
    assert!(matches!(report.verdict, TwoSymmetryVerdict::Inconclusive { .. }));
    assert!(report.v1_standard && report.v2_standard);

    let bad = UnitaryMatrix::from_unit_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
    let report = check_two_symmetry_condition(&bad, &v).unwrap();
    assert!(matches!(report.verdict, TwoSymmetryVerdict::Inconclusive { .. }));
    assert!(!report.v1_standard);
}

#[test]
fn intersect_torus_fixed_sets_cases() {
    let mut rng = RandomStream::new(67);
    let n = 3;
    let w1 = haar(n, &mut rng);
    let w2 = haar(n, &mut rng);
    let tol = default_entry_tol(n);

    // Haar pair: W1* W2 is entrywise nonzero a.s.
    match intersect_torus_fixed_sets(&w1, &w2, tol).unwrap() {
        ReducedSet::Singleton(q) => {
            assert!(q.matrix().dist_frobenius(CovarianceMatrix::isotropic(n).matrix()) < 1e-15)
        }
        other => panic!("expected singleton, got {}", other.describe()),
    }

    // Identical bases: the full rotated simplex survives.
    match intersect_torus_fixed_sets(&w1, &w1, tol).unwrap() {
        ReducedSet::ConjugatedSimplex { basis, groups } => {
            assert!(basis.matrix().dist_frobenius(w1.matrix()) < 1e-15);
            assert_eq!(groups.len(), n);
        }
        other => panic!("expected simplex, got {}", other.describe()),
    }

    // Block-diagonal relation: weights tie within each 2x2 block.
    let b = haar(2, &mut rng);
    let b2 = haar(2, &mut rng);
    let w_rel = ComplexMatrix::direct_sum(&[b.matrix().clone(), b2.matrix().clone()]);
    let w1 = UnitaryMatrix::identity(4);
    let w2 = UnitaryMatrix::new(w_rel).unwrap();
    match intersect_torus_fixed_sets(&w1, &w2, default_entry_tol(4)).unwrap() {
        ReducedSet::ConjugatedSimplex { groups, .. } => {
            assert_eq!(groups, vec![vec![0, 1], vec![2, 3]]);
        }
        other => panic!("expected tied simplex, got {}", other.describe()),
    }
    // Embedded point diag(p/2, p/2, q/2, q/2).
    let set = intersect_torus_fixed_sets(&w1, &w2, default_entry_tol(4)).unwrap();
    let q = embed(&set, &ReducedPoint::Probabilities(vec![0.6, 0.4])).unwrap();
    let expect = ComplexMatrix::from_real_diag(&[0.3, 0.3, 0.2, 0.2]);
    assert!(q.matrix().dist_frobenius(&expect) < 1e-14);
}

#[test]
fn permutation_averaged_set_is_exact() {
    // The permutation image is the two-parameter family (Tr/N)I + beta(J-I);
    // its grouped-simplex form must be fixed pointwise.
    let g = SymmetryGroup::Permutations(4);
    let set = averaged_set(&g).unwrap();
    let q = embed(&set, &ReducedPoint::Probabilities(vec![0.4, 0.6])).unwrap();
    assert!(is_fixed_point(&g, &q, 1e-12).unwrap());
    // And conversely the average of a random covariance embeds in the family.
    let mut rng = RandomStream::new(71);
    let avg = average(&g, random_covariance(4, &mut rng).matrix()).unwrap();
    let p0 = {
        // Weight on the ones-direction eigenvalue.
        let j = ComplexMatrix::ones(4).scale_re(0.25);
        avg.mul(&j).trace().re
    };
    let q2 = embed(&set, &ReducedPoint::Probabilities(vec![p0, 1.0 - p0])).unwrap();
    assert!(q2.matrix().dist_frobenius(&avg) < 1e-10);
}

#[test]
fn group_descriptor_round_trip() {
    let mut rng = RandomStream::new(73);
    let w = haar(2, &mut rng);
    let g = SymmetryGroup::tensor(
        SymmetryGroup::ConjugatedTorus(w),
        SymmetryGroup::direct_sum(vec![
            SymmetryGroup::Trivial(1),
            SymmetryGroup::SignedPermutations(2),
        ])
        .unwrap(),
    );
    let descriptor = schema::GroupDescriptor::from_group(&g);
    let json = serde_json::to_string(&descriptor).unwrap();
    let back: schema::GroupDescriptor = serde_json::from_str(&json).unwrap();
    let rebuilt = back.build().unwrap();
    assert_eq!(rebuilt.dim(), g.dim());
    let a = random_hermitian(g.dim(), &mut rng);
    assert!(average(&g, &a)
        .unwrap()
        .dist_frobenius(&average(&rebuilt, &a).unwrap())
        < 1e-12);
}


//! Runnable verification suites for the capacity theorems.
//!
//! Each suite constructs its channels at a fixed seed, runs the reduction
//! pipeline (known group, averaged set, optimize), and checks the structural
//! claim plus paired-MI dominance over random covariances. A check's margin
//! is its signed slack: nonnegative means pass.

use num_complex::Complex64;
use serde::Serialize;

use super::{optimize_capacity, CapacityResult, OptConfig};
use crate::channels::{
    known_symmetry_group, membership_probe, sample, ChannelModel, EntryLaw, ProbeVerdict,
};
use crate::infocap::paired_mi_difference;
use crate::matcore::{ComplexMatrix, CovarianceMatrix, RandomStream, UnitaryMatrix};
use crate::symgroups::{
    average, check_structural_subgroup, fixed_point_residual, haar_sample,
    MultisetSemantics, SymmetryGroup,
};
use crate::{Error, Result};

const INCLUSION_TOL: f64 = 1e-9;
const BASIS_RESIDUAL_TOL: f64 = 1e-6;
const BLOCK_SPREAD_TOL: f64 = 1e-4;
const DOMINANCE_SAMPLES: usize = 20_000;
const DOMINANCE_RIVALS: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct VerificationCheck {
    pub description: String,
    pub pass: bool,
    /// Signed slack; nonnegative iff the check passes.
    pub margin: f64,
}

impl VerificationCheck {
    fn new(description: impl Into<String>, margin: f64) -> Self {
        Self { description: description.into(), pass: margin >= 0.0, margin }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<VerificationCheck>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<VerificationCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { suite: suite.into(), checks, pass }
    }

    /// One CSV row per check: `suite,check,pass,margin,seed`.
    pub fn csv_rows(&self, seed: u64) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!(
                "{},\"{}\",{},{:.16e},{}\n",
                self.suite, check.description, check.pass, check.margin, seed
            ));
        }
        out
    }
}

/// Paired test of the averaging inequality `I(A_F(Q)) >= I(Q)`.
///
/// Elements of `F` are first screened against the channel with the
/// membership probe (skipped when `F` is the channel's declared group);
/// the main check passes when the paired difference clears `-3` standard
/// errors.
pub fn verify_prop1(
    model: &ChannelModel,
    f: &SymmetryGroup,
    q: &CovarianceMatrix,
    n: usize,
    rng: &mut RandomStream,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();

    let is_declared = known_symmetry_group(model).map(|g| g == *f).unwrap_or(false);
    if !is_declared {
        let elements: Vec<UnitaryMatrix> = match f {
            SymmetryGroup::FiniteMultiset { elements, .. } => elements.clone(),
            _ => (0..3).map(|_| haar_sample(f, rng)).collect::<Result<_>>()?,
        };
        for (k, v) in elements.iter().enumerate() {
            let report = membership_probe(model, v, 2000, rng)?;
            let margin = match report.verdict {
                ProbeVerdict::Consistent => {
                    report
                        .per_probe
                        .iter()
                        .map(|p| p.p_value)
                        .fold(f64::INFINITY, f64::min)
                        - report.level / report.per_probe.len() as f64
                }
                ProbeVerdict::Rejected { p_value, .. } => {
                    p_value - report.level / report.per_probe.len() as f64
                }
            };
            checks.push(VerificationCheck::new(
                format!("element {k} of F is consistent with the channel symmetries"),
                margin,
            ));
        }
    }

    let averaged = CovarianceMatrix::new(average(f, q.matrix())?.hermitian_part())?;
    let draws = sample(model, rng, n)?;
    let (diff, stderr) = paired_mi_difference(&draws, &averaged, q)?;
    checks.push(VerificationCheck::new(
        format!(
            "averaging over {} does not decrease MI (paired D = {diff:.6e} ± {stderr:.2e})",
            f.describe()
        ),
        diff + 3.0 * stderr,
    ));
    Ok(VerificationReport::new("prop1", checks))
}

/// Fixed-point inclusion test: every `A_G(Q)` is fixed by the subgroup `F`.
pub fn verify_inclusion(
    f: &SymmetryGroup,
    g: &SymmetryGroup,
    n_random_q: usize,
    rng: &mut RandomStream,
) -> Result<VerificationReport> {
    check_structural_subgroup(f, g)?;
    let mut worst = 0.0f64;
    for _ in 0..n_random_q {
        let q = CovarianceMatrix::random(g.dim(), rng);
        let averaged = CovarianceMatrix::new(average(g, q.matrix())?.hermitian_part())?;
        worst = worst.max(fixed_point_residual(f, &averaged)?);
    }
    let checks = vec![VerificationCheck::new(
        format!(
            "{} fixes the {}-average of {n_random_q} random covariances",
            f.describe(),
            g.describe()
        ),
        INCLUSION_TOL - worst,
    )];
    Ok(VerificationReport::new("thm1b", checks))
}

/// Optimizer settings for the sample-average suites: the frozen objective
/// carries O(1/sqrt(L)) statistical error and its flat top meets the f64
/// noise floor near a projected-gradient norm of 1e-6, so tighter tolerances
/// stall without improving any checked quantity (membership in the reduced
/// set is enforced by the projection at 1e-10 regardless).
fn saa_suite_config(cfg: &OptConfig) -> OptConfig {
    OptConfig {
        conv_tol: cfg.conv_tol.max(1e-5),
        // High-SNR sample objectives are ill-conditioned (slow directions
        // with curvature ~1e-3); iterations are cheap, so budget for them.
        max_iters: cfg.max_iters.max(4000),
        ..cfg.clone()
    }
}

/// Paired-MI dominance of `q_star` over random rival covariances.
fn dominance_check(
    model: &ChannelModel,
    q_star: &CovarianceMatrix,
    cfg: &OptConfig,
    stream: u64,
) -> Result<VerificationCheck> {
    let mut rng = RandomStream::with_stream(cfg.seed, stream);
    let draws = sample(model, &mut rng, DOMINANCE_SAMPLES)?;
    let mut worst = f64::INFINITY;
    for _ in 0..DOMINANCE_RIVALS {
        let rival = CovarianceMatrix::random(q_star.dim(), &mut rng);
        let (diff, stderr) = paired_mi_difference(&draws, q_star, &rival)?;
        worst = worst.min(diff + 3.0 * stderr);
    }
    Ok(VerificationCheck::new(
        format!("q_star dominates {DOMINANCE_RIVALS} random covariances in paired MI"),
        worst,
    ))
}

fn offdiagonal_residual(m: &ComplexMatrix) -> f64 {
    m.sub(&m.diagonal_part()).frobenius_norm()
}

/// Runs the reduction pipeline for one corollary and checks its structural
/// claim at the stated tolerances.
pub fn run_corollary_suite(which: u8, cfg: &OptConfig) -> Result<VerificationReport> {
    let suite = format!("corollary{which}");
    let cfg = &saa_suite_config(cfg);
    let mut checks = Vec::new();
    match which {
        1 => {
            let model = ChannelModel::gaussian(2, 3, 1.0)?;
            let result = pipeline(&model, None, cfg, &mut checks)?;
            let iso = CovarianceMatrix::isotropic(3);
            checks.push(VerificationCheck::new(
                "q_star equals the isotropic input",
                BASIS_RESIDUAL_TOL - result.q_star.matrix().dist_frobenius(iso.matrix()),
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 3)?);
        }
        2 => {
            let mut rng = RandomStream::with_stream(cfg.seed, 2);
            let w_m = haar_sample(&SymmetryGroup::FullUnitary(2), &mut rng)?;
            let w_n = haar_sample(&SymmetryGroup::FullUnitary(3), &mut rng)?;
            let model = ChannelModel::column_symmetric(
                w_m,
                w_n.clone(),
                vec![
                    EntryLaw::ComplexGaussian,
                    EntryLaw::SymmetricTwoPoint { a: 1.2 },
                    EntryLaw::UniformPhaseRadius { r: 1.5 },
                ],
            )?;
            let result = pipeline(&model, None, cfg, &mut checks)?;
            let rotated = w_n.matrix().mul(result.q_star.matrix()).mul(&w_n.matrix().adjoint());
            checks.push(VerificationCheck::new(
                "q_star is diagonal in the declared column basis",
                BASIS_RESIDUAL_TOL - offdiagonal_residual(&rotated),
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 3)?);
        }
        3 => {
            let model = ChannelModel::rank_one(
                vec![EntryLaw::ComplexGaussian, EntryLaw::UniformPhaseRadius { r: 1.3 }],
                vec![
                    EntryLaw::SymmetricTwoPoint { a: 1.0 },
                    EntryLaw::ComplexGaussian,
                    EntryLaw::UniformPhaseRadius { r: 0.8 },
                ],
            )?;
            let result = pipeline(&model, None, cfg, &mut checks)?;
            checks.push(VerificationCheck::new(
                "q_star is diagonal",
                BASIS_RESIDUAL_TOL - offdiagonal_residual(result.q_star.matrix()),
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 3)?);
        }
        4 => {
            let inner = ChannelModel::gaussian(2, 2, 1.0)?;
            let model = ChannelModel::block_invariant(2, 2, inner)?;
            let group = known_symmetry_group(&model)?;
            let result = pipeline(&model, Some(group.clone()), cfg, &mut checks)?;
            checks.push(VerificationCheck::new(
                "q_star lies in the block-Kronecker family (fixed point)",
                BASIS_RESIDUAL_TOL - fixed_point_residual(&group, &result.q_star)?,
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 3)?);
        }
        5 => {
            // Variant a: diagonal-torus times full-unitary invariance.
            let model = kron_invariant_channel(false);
            let group = SymmetryGroup::tensor(
                SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
                SymmetryGroup::FullUnitary(2),
            );
            let result = pipeline(&model, Some(group.clone()), cfg, &mut checks)?;
            checks.push(VerificationCheck::new(
                "variant a: q_star in the diagonal block-Kronecker family",
                BASIS_RESIDUAL_TOL - fixed_point_residual(&group, &result.q_star)?,
            ));
            let compressed = ComplexMatrix::from_fn(2, 2, |i, j| {
                result.q_star.matrix()[(2 * i, 2 * j)] * 2.0
            });
            checks.push(VerificationCheck::new(
                "variant a: compressed block factor is diagonal",
                BASIS_RESIDUAL_TOL - offdiagonal_residual(&compressed),
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 3)?);

            // Variant b: full-unitary times full-unitary invariance.
            let model = kron_invariant_channel(true);
            let group = SymmetryGroup::tensor(
                SymmetryGroup::FullUnitary(2),
                SymmetryGroup::FullUnitary(2),
            );
            let result = pipeline(&model, Some(group), cfg, &mut checks)?;
            let iso = CovarianceMatrix::isotropic(4);
            checks.push(VerificationCheck::new(
                "variant b: q_star equals the isotropic input",
                BASIS_RESIDUAL_TOL - result.q_star.matrix().dist_frobenius(iso.matrix()),
            ));
            checks.push(dominance_check(&model, &result.q_star, cfg, 4)?);
        }
        6 => {
            // Equal singular values: one block, isotropic optimum.
            let hbar = ComplexMatrix::from_real_diag(&[2.0, 2.0]);
            let model = ChannelModel::ricean(hbar, 1.0)?;
            ricean_checks(&model, cfg, "equal singular values", &mut checks)?;
            let result = pipeline(&model, None, cfg, &mut Vec::new())?;
            checks.push(VerificationCheck::new(
                "equal singular values: q_star is isotropic",
                BLOCK_SPREAD_TOL
                    - result
                        .q_star
                        .matrix()
                        .dist_frobenius(CovarianceMatrix::isotropic(2).matrix()),
            ));

            // Distinct singular values (2, 1): two one-dimensional blocks.
            let hbar = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
            let model = ChannelModel::ricean(hbar, 1.0)?;
            ricean_checks(&model, cfg, "distinct singular values", &mut checks)?;
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "corollary suite must be 1..6, got {other}"
            )))
        }
    }
    Ok(VerificationReport::new(suite, checks))
}

/// `H = R ⊗ S` with `R` right-invariant under the requested group of `d x d`
/// factors and `S` Gaussian.
fn kron_invariant_channel(full_unitary_factor: bool) -> ChannelModel {
    ChannelModel::custom(4, 4, move |rng| {
        let r = if full_unitary_factor {
            ComplexMatrix::from_fn(2, 2, |_, _| rng.complex_gaussian())
        } else {
            ComplexMatrix::from_diag(&[rng.unit_phase(), rng.unit_phase() * 1.7])
        };
        let s = ComplexMatrix::from_fn(2, 2, |_, _| rng.complex_gaussian());
        r.kron(&s)
    })
}

fn ricean_checks(
    model: &ChannelModel,
    cfg: &OptConfig,
    label: &str,
    checks: &mut Vec<VerificationCheck>,
) -> Result<()> {
    let group = known_symmetry_group(model)?;
    let (w, blocks) = match &group {
        SymmetryGroup::Conjugated { basis, inner } => match inner.as_ref() {
            SymmetryGroup::DirectSum(parts) => {
                (basis.clone(), parts.iter().map(SymmetryGroup::dim).collect::<Vec<_>>())
            }
            _ => return Err(Error::UnsupportedGroup("unexpected Ricean group shape".into())),
        },
        _ => return Err(Error::UnsupportedGroup("unexpected Ricean group shape".into())),
    };
    let result = pipeline(model, Some(group), cfg, checks)?;
    let rotated = w
        .matrix()
        .adjoint()
        .mul(result.q_star.matrix())
        .mul(w.matrix());
    checks.push(VerificationCheck::new(
        format!("{label}: q_star is diagonal in the singular basis"),
        BASIS_RESIDUAL_TOL - offdiagonal_residual(&rotated),
    ));
    let diag = rotated.diag();
    let mut offset = 0;
    let mut spread: f64 = 0.0;
    for nk in blocks {
        let block: Vec<f64> = (offset..offset + nk).map(|i| diag[i].re).collect();
        let max = block.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = block.iter().cloned().fold(f64::INFINITY, f64::min);
        spread = spread.max(max - min);
        offset += nk;
    }
    checks.push(VerificationCheck::new(
        format!("{label}: eigenvalues constant on each singular-value block"),
        BLOCK_SPREAD_TOL - spread,
    ));
    checks.push(dominance_check(model, &result.q_star, cfg, 3)?);
    Ok(())
}

/// Known group (or the supplied one), averaged set, optimize; records the
/// convergence check.
fn pipeline(
    model: &ChannelModel,
    group: Option<SymmetryGroup>,
    cfg: &OptConfig,
    checks: &mut Vec<VerificationCheck>,
) -> Result<CapacityResult> {
    let group = match group {
        Some(g) => g,
        None => known_symmetry_group(model)?,
    };
    let result = optimize_capacity(model, &group, cfg)?;
    checks.push(VerificationCheck::new(
        format!("optimizer converged on {}", model.describe()),
        if result.converged { 1.0 } else { -1.0 },
    ));
    Ok(result)
}

fn sec5_suite(cfg: &OptConfig) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for alpha in [std::f64::consts::FRAC_1_SQRT_2, 1.0, 2.0] {
        let model = ChannelModel::sec5_alpha(alpha)?;
        let group = known_symmetry_group(&model)?;
        let result = optimize_capacity(&model, &group, cfg)?;
        let (c_exact, a_hat) = super::capacity_closed_form_alpha(alpha)?;
        checks.push(VerificationCheck::new(
            format!("H_alpha({alpha:.4}): capacity matches the closed form"),
            1e-4 - (result.capacity.value - c_exact).abs(),
        ));
        let target = CovarianceMatrix::from_probabilities(&[a_hat, 1.0 - a_hat])?;
        checks.push(VerificationCheck::new(
            format!("H_alpha({alpha:.4}): q_star matches diag(1/(2a^2), 1 - 1/(2a^2))"),
            1e-4 - result.q_star.matrix().sub(target.matrix()).max_abs_entry(),
        ));
    }

    let model = ChannelModel::sec5_inf();
    let group = known_symmetry_group(&model)?;
    let result = optimize_capacity(&model, &group, cfg)?;
    let (c_exact, q_exact) = super::capacity_closed_form_inf();
    checks.push(VerificationCheck::new(
        "H_inf: capacity matches log 5",
        1e-6 - (result.capacity.value - c_exact).abs(),
    ));
    checks.push(VerificationCheck::new(
        "H_inf: q_star matches diag(0, 1)",
        1e-6 - result.q_star.matrix().sub(q_exact.matrix()).max_abs_entry(),
    ));

    // The reduction is lossless: optimizing over the full covariance set
    // reaches the same capacity as the reduced diagonal set.
    let model = ChannelModel::sec5_alpha(2.0)?;
    let full = optimize_capacity(&model, &SymmetryGroup::Trivial(2), cfg)?;
    let (c_exact, _) = super::capacity_closed_form_alpha(2.0)?;
    checks.push(VerificationCheck::new(
        "restriction is lossless: full-set optimization matches the closed form",
        1e-4 - (full.capacity.value - c_exact).abs(),
    ));
    Ok(VerificationReport::new("sec5", checks))
}

fn prop1_suite(cfg: &OptConfig) -> Result<VerificationReport> {
    let mut checks = Vec::new();

    // Skewed input on the Gaussian channel: strictly positive gain.
    let model = ChannelModel::gaussian(2, 2, 1.0)?;
    let q = CovarianceMatrix::from_probabilities(&[0.9, 0.1])?;
    let f = SymmetryGroup::FullUnitary(2);
    let mut rng = RandomStream::with_stream(cfg.seed, 11);
    let report = verify_prop1(&model, &f, &q, 100_000, &mut rng)?;
    checks.extend(report.checks);
    {
        // Strict version: the gain must clear +3 standard errors.
        let mut rng = RandomStream::with_stream(cfg.seed, 12);
        let draws = sample(&model, &mut rng, 100_000)?;
        let averaged = CovarianceMatrix::new(average(&f, q.matrix())?.hermitian_part())?;
        let (diff, stderr) = paired_mi_difference(&draws, &averaged, &q)?;
        checks.push(VerificationCheck::new(
            format!("isotropic averaging strictly improves the skewed input (D = {diff:.5})"),
            diff - 3.0 * stderr,
        ));
    }

    // Trivial group: exactly zero difference.
    let q_any = CovarianceMatrix::from_two_by_two(0.6, 0.4, Complex64::new(0.1, -0.2))?;
    let mut rng = RandomStream::with_stream(cfg.seed, 13);
    let draws = sample(&model, &mut rng, 1000)?;
    let (diff, _) = paired_mi_difference(&draws, &q_any, &q_any)?;
    checks.push(VerificationCheck::new(
        "trivial group: paired difference is exactly zero",
        if diff == 0.0 { 0.0 } else { -diff.abs() },
    ));

    // Sign-flip multiset on H_alpha: the closed form pins the exact gain.
    let model = ChannelModel::sec5_alpha(1.0)?;
    let q = CovarianceMatrix::from_two_by_two(0.5, 0.5, Complex64::new(0.3, 0.0))?;
    let flip = UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0]))?;
    let f = SymmetryGroup::FiniteMultiset {
        elements: vec![UnitaryMatrix::identity(2), flip],
        semantics: MultisetSemantics::Group,
    };
    let mut rng = RandomStream::with_stream(cfg.seed, 14);
    let draws = sample(&model, &mut rng, 1000)?;
    let averaged = CovarianceMatrix::new(average(&f, q.matrix())?.hermitian_part())?;
    let (diff, _) = paired_mi_difference(&draws, &averaged, &q)?;
    let expected = 2.25f64.ln() - 2.16f64.ln();
    checks.push(VerificationCheck::new(
        "sign-flip averaging on H_alpha matches the closed-form gain",
        1e-10 - (diff - expected).abs(),
    ));
    Ok(VerificationReport::new("prop1", checks))
}

fn thm1b_suite(cfg: &OptConfig) -> Result<VerificationReport> {
    let mut rng = RandomStream::with_stream(cfg.seed, 21);
    let w2 = haar_sample(&SymmetryGroup::FullUnitary(2), &mut rng)?;
    let w3 = haar_sample(&SymmetryGroup::FullUnitary(3), &mut rng)?;
    let flip_group = SymmetryGroup::finite_group(vec![
        UnitaryMatrix::identity(2),
        UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0]))?,
    ])?;
    let pairs: Vec<(SymmetryGroup, SymmetryGroup)> = vec![
        (SymmetryGroup::Trivial(2), SymmetryGroup::FullUnitary(2)),
        (SymmetryGroup::Trivial(4), SymmetryGroup::Permutations(4)),
        (
            SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(3)),
            SymmetryGroup::FullUnitary(3),
        ),
        (SymmetryGroup::ConjugatedTorus(w3), SymmetryGroup::FullUnitary(3)),
        (SymmetryGroup::SignFlips(3), SymmetryGroup::SignedPermutations(3)),
        (
            SymmetryGroup::SignFlips(2),
            SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
        ),
        (SymmetryGroup::Permutations(3), SymmetryGroup::SignedPermutations(3)),
        (SymmetryGroup::SignedPermutations(2), SymmetryGroup::FullUnitary(2)),
        (SymmetryGroup::Permutations(2), SymmetryGroup::FullUnitary(2)),
        (SymmetryGroup::SignFlips(4), SymmetryGroup::FullUnitary(4)),
        (
            flip_group,
            SymmetryGroup::ConjugatedTorus(UnitaryMatrix::identity(2)),
        ),
        (
            SymmetryGroup::direct_sum(vec![
                SymmetryGroup::SignFlips(1),
                SymmetryGroup::SignFlips(2),
            ])?,
            SymmetryGroup::direct_sum(vec![
                SymmetryGroup::SignedPermutations(1),
                SymmetryGroup::SignedPermutations(2),
            ])?,
        ),
        (
            SymmetryGroup::tensor(SymmetryGroup::Trivial(2), SymmetryGroup::SignFlips(2)),
            SymmetryGroup::tensor(
                SymmetryGroup::Trivial(2),
                SymmetryGroup::SignedPermutations(2),
            ),
        ),
        (
            SymmetryGroup::conjugated(w2.clone(), SymmetryGroup::SignFlips(2))?,
            SymmetryGroup::conjugated(w2, SymmetryGroup::SignedPermutations(2))?,
        ),
    ];
    let mut checks = Vec::new();
    for (f, g) in pairs {
        let report = verify_inclusion(&f, &g, 50, &mut rng)?;
        checks.extend(report.checks);
    }
    Ok(VerificationReport::new("thm1b", checks))
}

/// Names accepted by [`run_suite`].
pub fn suite_names() -> Vec<&'static str> {
    vec![
        "prop1",
        "thm1b",
        "corollary1",
        "corollary2",
        "corollary3",
        "corollary4",
        "corollary5",
        "corollary6",
        "sec5",
        "all",
    ]
}

/// Runs a named verification suite (or all of them).
pub fn run_suite(name: &str, cfg: &OptConfig) -> Result<Vec<VerificationReport>> {
    match name {
        "prop1" => Ok(vec![prop1_suite(cfg)?]),
        "thm1b" => Ok(vec![thm1b_suite(cfg)?]),
        "sec5" => Ok(vec![sec5_suite(cfg)?]),
        "corollary1" | "corollary2" | "corollary3" | "corollary4" | "corollary5"
        | "corollary6" => {
            let which: u8 = name["corollary".len()..]
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad suite name {name}")))?;
            Ok(vec![run_corollary_suite(which, cfg)?])
        }
        "all" => {
            let mut reports = vec![prop1_suite(cfg)?, thm1b_suite(cfg)?];
            for which in 1..=6 {
                reports.push(run_corollary_suite(which, cfg)?);
            }
            reports.push(sec5_suite(cfg)?);
            Ok(reports)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown suite {other}; expected one of {:?}",
            suite_names()
        ))),
    }
}

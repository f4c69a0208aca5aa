//! Structured subgroups of `U(N)`, Haar sampling, and average operators.
//!
//! A [`SymmetryGroup`] describes either a closed subgroup of the unitary
//! group with enough structure to admit a closed-form average (twirl)
//! operator, or an explicit finite multiset averaged by the plain sum
//! `A ↦ (1/|F|) Σ F A F*`. The average over a closed group is the Haar
//! integral `∫ F A F* dμ(F)`; for every structured variant here it is
//! evaluated exactly, with no Monte Carlo.
//!
//! The derived [`ReducedSet`] parameterizes the image of the unit-trace
//! covariance set under the group average — the set in which a
//! capacity-achieving input covariance is guaranteed to exist.

mod montecarlo;
mod reduced;
pub mod schema;
mod standard;

pub use montecarlo::{monte_carlo_average, MonteCarloAverager};
pub use reduced::{
    averaged_set, embed, embedding_fixed_point_residual, IsoSide, ReducedPoint, ReducedSet,
};
pub use standard::{
    check_two_symmetry_condition, closure_of_standard_symmetry, default_entry_tol,
    intersect_torus_fixed_sets, rational_independence, unitary_eigendecomposition,
    IndependenceVerdict, PhaseVector, TwoSymmetryReport, TwoSymmetryVerdict,
    DEFAULT_DENOMINATOR_BOUND, DEFAULT_ENTRY_TOL, DEFAULT_RELATION_TOL,
};

use num_complex::Complex64;

use crate::matcore::{ComplexMatrix, CovarianceMatrix, RandomStream, UnitaryMatrix};
use crate::{Error, Result};

/// Tolerance for finite-group closure and element-membership checks.
const MEMBERSHIP_TOL: f64 = 1e-8;
const CLOSURE_TOL: f64 = 1e-10;

/// Whether a finite family is averaged as a closed group (Haar = uniform
/// counting measure) or as a plain multiset with repetitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultisetSemantics {
    Group,
    Multiset,
}

/// Algebraic descriptor of a closed subgroup of `U(N)` or a finite multiset.
#[derive(Clone, Debug, PartialEq)]
pub enum SymmetryGroup {
    /// The whole unitary group `U(N)`.
    FullUnitary(usize),
    /// `W · Diag_N(T) · W*`, the diagonal torus in a rotated basis.
    ConjugatedTorus(UnitaryMatrix),
    /// Permutation matrices `S_N`.
    Permutations(usize),
    /// Diagonal sign matrices `Diag_N(±)`.
    SignFlips(usize),
    /// Signed permutation matrices `S_N^±`.
    SignedPermutations(usize),
    /// Explicit finite family, with group or multiset semantics.
    FiniteMultiset {
        elements: Vec<UnitaryMatrix>,
        semantics: MultisetSemantics,
    },
    /// `G1 ⊗ G2` acting on dimension `N1 · N2`.
    TensorProduct(Box<SymmetryGroup>, Box<SymmetryGroup>),
    /// `G1 ⊕ ... ⊕ GK` acting block-diagonally.
    DirectSum(Vec<SymmetryGroup>),
    /// `{I_N}`.
    Trivial(usize),
    /// `W · G · W*` for a fixed unitary `W`.
    Conjugated {
        basis: UnitaryMatrix,
        inner: Box<SymmetryGroup>,
    },
}

impl SymmetryGroup {
    /// Explicit finite subgroup; validates closure under products and
    /// inverses up to a small tolerance.
    pub fn finite_group(elements: Vec<UnitaryMatrix>) -> Result<Self> {
        match Self::finite_multiset(elements)? {
            SymmetryGroup::FiniteMultiset { elements, .. } => {
                check_closure(&elements)?;
                Ok(SymmetryGroup::FiniteMultiset {
                    elements,
                    semantics: MultisetSemantics::Group,
                })
            }
            _ => unreachable!("finite_multiset builds a FiniteMultiset"),
        }
    }

    /// Explicit finite multiset (repetitions allowed, no closure required).
    pub fn finite_multiset(elements: Vec<UnitaryMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty multiset".into()))?;
        let n = first.dim();
        if elements.iter().any(|e| e.dim() != n) {
            return Err(Error::DimensionMismatch("multiset elements of mixed dimension".into()));
        }
        Ok(SymmetryGroup::FiniteMultiset { elements, semantics: MultisetSemantics::Multiset })
    }

    pub fn tensor(g1: SymmetryGroup, g2: SymmetryGroup) -> Self {
        SymmetryGroup::TensorProduct(Box::new(g1), Box::new(g2))
    }

    pub fn direct_sum(parts: Vec<SymmetryGroup>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty direct sum".into()));
        }
        Ok(SymmetryGroup::DirectSum(parts))
    }

    pub fn conjugated(basis: UnitaryMatrix, inner: SymmetryGroup) -> Result<Self> {
        if basis.dim() != inner.dim() {
            return Err(Error::DimensionMismatch(format!(
                "conjugating basis is {} but inner group acts on {}",
                basis.dim(),
                inner.dim()
            )));
        }
        Ok(SymmetryGroup::Conjugated { basis, inner: Box::new(inner) })
    }

    /// Dimension `N` of the space the group acts on.
    pub fn dim(&self) -> usize {
        match self {
            SymmetryGroup::FullUnitary(n)
            | SymmetryGroup::Permutations(n)
            | SymmetryGroup::SignFlips(n)
            | SymmetryGroup::SignedPermutations(n)
            | SymmetryGroup::Trivial(n) => *n,
            SymmetryGroup::ConjugatedTorus(w) => w.dim(),
            SymmetryGroup::FiniteMultiset { elements, .. } => elements[0].dim(),
            SymmetryGroup::TensorProduct(g1, g2) => g1.dim() * g2.dim(),
            SymmetryGroup::DirectSum(parts) => parts.iter().map(SymmetryGroup::dim).sum(),
            SymmetryGroup::Conjugated { basis, .. } => basis.dim(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SymmetryGroup::FullUnitary(n) => format!("U({n})"),
            SymmetryGroup::ConjugatedTorus(w) => format!("W·Diag_{}(T)·W*", w.dim()),
            SymmetryGroup::Permutations(n) => format!("S_{n}"),
            SymmetryGroup::SignFlips(n) => format!("Diag_{n}(±)"),
            SymmetryGroup::SignedPermutations(n) => format!("S_{n}^±"),
            SymmetryGroup::FiniteMultiset { elements, semantics } => match semantics {
                MultisetSemantics::Group => format!("finite group of order {}", elements.len()),
                MultisetSemantics::Multiset => format!("multiset of {} unitaries", elements.len()),
            },
            SymmetryGroup::TensorProduct(g1, g2) => {
                format!("({}) ⊗ ({})", g1.describe(), g2.describe())
            }
            SymmetryGroup::DirectSum(parts) => {
                let inner: Vec<String> = parts.iter().map(SymmetryGroup::describe).collect();
                inner.join(" ⊕ ")
            }
            SymmetryGroup::Trivial(n) => format!("{{I_{n}}}"),
            SymmetryGroup::Conjugated { inner, .. } => format!("W·({})·W*", inner.describe()),
        }
    }
}

fn check_closure(elements: &[UnitaryMatrix]) -> Result<()> {
    let contains = |x: &ComplexMatrix| {
        elements.iter().any(|e| e.matrix().dist_frobenius(x) <= CLOSURE_TOL)
    };
    for e in elements {
        if !contains(&e.matrix().adjoint()) {
            return Err(Error::NotAGroup("missing an inverse".into()));
        }
    }
    for a in elements {
        for b in elements {
            if !contains(&a.matrix().mul(b.matrix())) {
                return Err(Error::NotAGroup("missing a product".into()));
            }
        }
    }
    Ok(())
}

/// One draw from the Haar measure on a structured group.
///
/// The full unitary group is sampled by QR of an iid complex-Gaussian matrix
/// with the R-diagonal phase correction; conjugated tori by independent
/// uniform phases; finite groups by a uniform pick; products and sums by
/// independent component draws.
pub fn haar_sample(group: &SymmetryGroup, rng: &mut RandomStream) -> Result<UnitaryMatrix> {
    let m = haar_sample_matrix(group, rng)?;
    Ok(UnitaryMatrix::new_unchecked(m))
}

fn haar_sample_matrix(group: &SymmetryGroup, rng: &mut RandomStream) -> Result<ComplexMatrix> {
    match group {
        SymmetryGroup::FullUnitary(n) => Ok(haar_unitary(*n, rng)),
        SymmetryGroup::ConjugatedTorus(w) => {
            let phases: Vec<Complex64> = (0..w.dim()).map(|_| rng.unit_phase()).collect();
            let d = ComplexMatrix::from_diag(&phases);
            Ok(w.matrix().mul(&d).mul(&w.matrix().adjoint()))
        }
        SymmetryGroup::Permutations(n) => Ok(permutation_matrix(&rng.permutation(*n))),
        SymmetryGroup::SignFlips(n) => {
            let signs: Vec<Complex64> =
                (0..*n).map(|_| Complex64::new(rng.sign(), 0.0)).collect();
            Ok(ComplexMatrix::from_diag(&signs))
        }
        SymmetryGroup::SignedPermutations(n) => {
            let p = permutation_matrix(&rng.permutation(*n));
            let signs: Vec<Complex64> =
                (0..*n).map(|_| Complex64::new(rng.sign(), 0.0)).collect();
            Ok(p.mul(&ComplexMatrix::from_diag(&signs)))
        }
        SymmetryGroup::FiniteMultiset { elements, semantics } => match semantics {
            MultisetSemantics::Group => {
                Ok(elements[rng.index(elements.len())].matrix().clone())
            }
            MultisetSemantics::Multiset => Err(Error::UnsupportedGroup(
                "Haar sampling requires group semantics, not a plain multiset".into(),
            )),
        },
        SymmetryGroup::TensorProduct(g1, g2) => {
            let u1 = haar_sample_matrix(g1, rng)?;
            let u2 = haar_sample_matrix(g2, rng)?;
            Ok(u1.kron(&u2))
        }
        SymmetryGroup::DirectSum(parts) => {
            let blocks: Result<Vec<ComplexMatrix>> =
                parts.iter().map(|g| haar_sample_matrix(g, rng)).collect();
            Ok(ComplexMatrix::direct_sum(&blocks?))
        }
        SymmetryGroup::Trivial(n) => Ok(ComplexMatrix::identity(*n)),
        SymmetryGroup::Conjugated { basis, inner } => {
            let s = haar_sample_matrix(inner, rng)?;
            Ok(basis.matrix().mul(&s).mul(&basis.matrix().adjoint()))
        }
    }
}

/// Haar unitary via QR of a Ginibre matrix, with the diagonal phase of `R`
/// folded back in so the law is exactly Haar.
fn haar_unitary(n: usize, rng: &mut RandomStream) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
    let (mut q, r) = crate::matcore::qr(&g);
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 1e-300 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &pi) in perm.iter().enumerate() {
        m[(i, pi)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// The average operator `A_G(A)`, exact for every structured variant.
pub fn average(group: &SymmetryGroup, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = group.dim();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "group acts on dimension {n} but matrix is {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    match group {
        SymmetryGroup::FullUnitary(_) | SymmetryGroup::SignedPermutations(_) => {
            Ok(mixing_map(a))
        }
        SymmetryGroup::ConjugatedTorus(w) => {
            let rotated = w.matrix().adjoint().mul(a).mul(w.matrix());
            Ok(w.matrix().mul(&rotated.diagonal_part()).mul(&w.matrix().adjoint()))
        }
        SymmetryGroup::SignFlips(_) => Ok(a.diagonal_part()),
        SymmetryGroup::Permutations(n) => {
            if *n == 1 {
                return Ok(a.clone());
            }
            let nf = *n as f64;
            let tr = a.trace() / nf;
            let mut off_sum = Complex64::new(0.0, 0.0);
            for i in 0..*n {
                for j in 0..*n {
                    if i != j {
                        off_sum += a[(i, j)];
                    }
                }
            }
            let beta = off_sum / (nf * (nf - 1.0));
            Ok(ComplexMatrix::from_fn(*n, *n, |i, j| if i == j { tr } else { beta }))
        }
        SymmetryGroup::FiniteMultiset { elements, .. } => {
            let mut acc = ComplexMatrix::zeros(n, n);
            for e in elements {
                acc = acc.add(&a.conjugate_by(e.matrix()));
            }
            Ok(acc.scale_re(1.0 / elements.len() as f64))
        }
        SymmetryGroup::TensorProduct(g1, g2) => {
            let (n1, n2) = (g1.dim(), g2.dim());
            let mut out = ComplexMatrix::zeros(n, n);
            for i in 0..n1 {
                for j in 0..n1 {
                    let block = a.block(i * n2, j * n2, n2, n2);
                    let mut unit = ComplexMatrix::zeros(n1, n1);
                    unit[(i, j)] = Complex64::new(1.0, 0.0);
                    let left = average(g1, &unit)?;
                    let right = average(g2, &block)?;
                    out = out.add(&left.kron(&right));
                }
            }
            Ok(out)
        }
        SymmetryGroup::DirectSum(parts) => {
            check_direct_sum_means(parts)?;
            let mut out = ComplexMatrix::zeros(n, n);
            let mut offset = 0;
            for part in parts {
                let nk = part.dim();
                let block = a.block(offset, offset, nk, nk);
                out.set_block(offset, offset, &average(part, &block)?);
                offset += nk;
            }
            Ok(out)
        }
        SymmetryGroup::Trivial(_) => Ok(a.clone()),
        SymmetryGroup::Conjugated { basis, inner } => {
            let rotated = basis.matrix().adjoint().mul(a).mul(basis.matrix());
            let averaged = average(inner, &rotated)?;
            Ok(basis.matrix().mul(&averaged).mul(&basis.matrix().adjoint()))
        }
    }
}

fn mixing_map(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    ComplexMatrix::identity(n).scale(a.trace() / n as f64)
}

/// Mean element `∫ F dμ(F)` of the group, in closed form per variant.
pub fn haar_mean(group: &SymmetryGroup) -> ComplexMatrix {
    let n = group.dim();
    match group {
        SymmetryGroup::FullUnitary(_)
        | SymmetryGroup::ConjugatedTorus(_)
        | SymmetryGroup::SignFlips(_)
        | SymmetryGroup::SignedPermutations(_) => ComplexMatrix::zeros(n, n),
        SymmetryGroup::Permutations(n) => ComplexMatrix::ones(*n).scale_re(1.0 / *n as f64),
        SymmetryGroup::FiniteMultiset { elements, .. } => {
            let mut acc = ComplexMatrix::zeros(n, n);
            for e in elements {
                acc = acc.add(e.matrix());
            }
            acc.scale_re(1.0 / elements.len() as f64)
        }
        SymmetryGroup::TensorProduct(g1, g2) => haar_mean(g1).kron(&haar_mean(g2)),
        SymmetryGroup::DirectSum(parts) => {
            let blocks: Vec<ComplexMatrix> = parts.iter().map(haar_mean).collect();
            ComplexMatrix::direct_sum(&blocks)
        }
        SymmetryGroup::Trivial(n) => ComplexMatrix::identity(*n),
        SymmetryGroup::Conjugated { basis, inner } => {
            haar_mean(inner).conjugate_by(basis.matrix())
        }
    }
}

/// Direct-sum averages hold block-diagonally only when at most one component
/// mean is nonzero; with two or more nonzero means the image set has no
/// supported parameterization, so the operation refuses.
fn check_direct_sum_means(parts: &[SymmetryGroup]) -> Result<()> {
    let nonzero = parts
        .iter()
        .filter(|g| haar_mean(g).frobenius_norm() > 1e-12)
        .count();
    if nonzero > 1 {
        return Err(Error::UnsupportedDirectSumReduction);
    }
    Ok(())
}

/// Whether the group's average is the fully mixing map `A ↦ Tr(A)/N · I_N`.
pub fn is_fully_mixing(group: &SymmetryGroup) -> bool {
    if group.dim() == 1 {
        return true;
    }
    match group {
        SymmetryGroup::FullUnitary(_) | SymmetryGroup::SignedPermutations(_) => true,
        SymmetryGroup::TensorProduct(g1, g2) => is_fully_mixing(g1) && is_fully_mixing(g2),
        SymmetryGroup::Conjugated { inner, .. } => is_fully_mixing(inner),
        SymmetryGroup::DirectSum(parts) if parts.len() == 1 => is_fully_mixing(&parts[0]),
        _ => false,
    }
}

/// `true` iff `‖A_G(Q) − Q‖_F ≤ tol`, the fixed-point membership test for
/// the averaged covariance set.
pub fn is_fixed_point(group: &SymmetryGroup, q: &CovarianceMatrix, tol: f64) -> Result<bool> {
    Ok(fixed_point_residual(group, q)? <= tol)
}

/// `‖A_G(Q) − Q‖_F`.
pub fn fixed_point_residual(group: &SymmetryGroup, q: &CovarianceMatrix) -> Result<f64> {
    Ok(average(group, q.matrix())?.dist_frobenius(q.matrix()))
}

/// Membership of an explicit unitary in a structured group, up to a small
/// tolerance. Tensor products are not supported (factorizations are not
/// unique).
pub fn element_in_group(v: &UnitaryMatrix, group: &SymmetryGroup) -> Result<bool> {
    if v.dim() != group.dim() {
        return Err(Error::DimensionMismatch("element/group dimension mismatch".into()));
    }
    let tol = MEMBERSHIP_TOL;
    let m = v.matrix();
    let n = v.dim();
    match group {
        SymmetryGroup::FullUnitary(_) => Ok(true),
        SymmetryGroup::Trivial(_) => Ok(m.dist_frobenius(&ComplexMatrix::identity(n)) <= tol),
        SymmetryGroup::ConjugatedTorus(w) => {
            let rotated = w.matrix().adjoint().mul(m).mul(w.matrix());
            Ok(rotated.sub(&rotated.diagonal_part()).frobenius_norm() <= tol)
        }
        SymmetryGroup::SignFlips(_) => {
            let offdiag = m.sub(&m.diagonal_part()).frobenius_norm();
            let diag_ok = m
                .diag()
                .iter()
                .all(|z| z.im.abs() <= tol && (z.re.abs() - 1.0).abs() <= tol);
            Ok(offdiag <= tol && diag_ok)
        }
        SymmetryGroup::Permutations(_) => Ok(is_generalized_permutation(m, tol)
            && m.entries().iter().all(|z| {
                z.im.abs() <= tol && (z.re.abs() <= tol || (z.re - 1.0).abs() <= tol)
            })),
        SymmetryGroup::SignedPermutations(_) => Ok(is_generalized_permutation(m, tol)
            && m.entries().iter().all(|z| {
                z.im.abs() <= tol && (z.re.abs() <= tol || (z.re.abs() - 1.0).abs() <= tol)
            })),
        SymmetryGroup::FiniteMultiset { elements, .. } => {
            Ok(elements.iter().any(|e| e.matrix().dist_frobenius(m) <= tol))
        }
        SymmetryGroup::TensorProduct(..) => Err(Error::UnsupportedGroup(
            "membership in a tensor product is not checked".into(),
        )),
        SymmetryGroup::DirectSum(parts) => {
            let mut offset = 0;
            let mut off_block_sq = m.frobenius_norm().powi(2);
            for part in parts {
                let nk = part.dim();
                let block = m.block(offset, offset, nk, nk);
                off_block_sq -= block.frobenius_norm().powi(2);
                let sub = UnitaryMatrix::new(block)
                    .map_err(|_| Error::InvalidMatrix("diagonal block not unitary".into()));
                match sub {
                    Ok(u) => {
                        if !element_in_group(&u, part)? {
                            return Ok(false);
                        }
                    }
                    Err(_) => return Ok(false),
                }
                offset += nk;
            }
            Ok(off_block_sq.max(0.0).sqrt() <= tol)
        }
        SymmetryGroup::Conjugated { basis, inner } => {
            let rotated = basis.matrix().adjoint().mul(m).mul(basis.matrix());
            element_in_group(&UnitaryMatrix::new_unchecked(rotated), inner)
        }
    }
}

/// Exactly one entry above `tol` in modulus per row and per column.
pub(crate) fn is_generalized_permutation(m: &ComplexMatrix, tol: f64) -> bool {
    let n = m.rows();
    for i in 0..n {
        if (0..n).filter(|&j| m[(i, j)].norm() > tol).count() != 1 {
            return false;
        }
    }
    for j in 0..n {
        if (0..n).filter(|&i| m[(i, j)].norm() > tol).count() != 1 {
            return false;
        }
    }
    true
}

/// Structural check that `F` is a subgroup (or a multiset of elements) of
/// `G`, for the supported pairs. Unsupported pairs are errors, not `false`.
pub fn check_structural_subgroup(f: &SymmetryGroup, g: &SymmetryGroup) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch("subgroup pair dimension mismatch".into()));
    }
    if f == g {
        return Ok(());
    }
    if matches!(g, SymmetryGroup::FullUnitary(_)) {
        return Ok(()); // every variant is a set of unitaries
    }
    if matches!(f, SymmetryGroup::Trivial(_)) {
        return Ok(());
    }
    match (f, g) {
        (SymmetryGroup::SignFlips(_), SymmetryGroup::SignedPermutations(_))
        | (SymmetryGroup::Permutations(_), SymmetryGroup::SignedPermutations(_)) => Ok(()),
        (SymmetryGroup::SignFlips(_), SymmetryGroup::ConjugatedTorus(w)) => {
            if is_generalized_permutation(w.matrix(), MEMBERSHIP_TOL) {
                Ok(())
            } else {
                Err(Error::UnsupportedInclusionPair(
                    "sign flips inside a rotated torus".into(),
                ))
            }
        }
        (SymmetryGroup::ConjugatedTorus(w1), SymmetryGroup::ConjugatedTorus(w2)) => {
            let rel = w2.matrix().adjoint().mul(w1.matrix());
            if is_generalized_permutation(&rel, MEMBERSHIP_TOL) {
                Ok(())
            } else {
                Err(Error::UnsupportedInclusionPair("distinct conjugated tori".into()))
            }
        }
        (SymmetryGroup::FiniteMultiset { elements, .. }, _) => {
            for e in elements {
                if !element_in_group(e, g)? {
                    return Err(Error::UnsupportedInclusionPair(
                        "multiset element outside the group".into(),
                    ));
                }
            }
            Ok(())
        }
        (SymmetryGroup::DirectSum(fs), SymmetryGroup::DirectSum(gs)) => {
            if fs.len() != gs.len()
                || fs.iter().zip(gs).any(|(a, b)| a.dim() != b.dim())
            {
                return Err(Error::UnsupportedInclusionPair(
                    "direct sums with different block structure".into(),
                ));
            }
            for (a, b) in fs.iter().zip(gs) {
                check_structural_subgroup(a, b)?;
            }
            Ok(())
        }
        (SymmetryGroup::SignFlips(_), SymmetryGroup::DirectSum(gs)) => {
            for part in gs {
                check_structural_subgroup(&SymmetryGroup::SignFlips(part.dim()), part)?;
            }
            Ok(())
        }
        (SymmetryGroup::TensorProduct(f1, f2), SymmetryGroup::TensorProduct(g1, g2)) => {
            if f1.dim() != g1.dim() || f2.dim() != g2.dim() {
                return Err(Error::UnsupportedInclusionPair(
                    "tensor products with different factor dimensions".into(),
                ));
            }
            check_structural_subgroup(f1, g1)?;
            check_structural_subgroup(f2, g2)
        }
        (
            SymmetryGroup::Conjugated { basis: w1, inner: f1 },
            SymmetryGroup::Conjugated { basis: w2, inner: g1 },
        ) => {
            if w1.matrix().dist_frobenius(w2.matrix()) > CLOSURE_TOL {
                return Err(Error::UnsupportedInclusionPair(
                    "conjugated groups with different bases".into(),
                ));
            }
            check_structural_subgroup(f1, g1)
        }
        _ => Err(Error::UnsupportedInclusionPair(format!(
            "{} inside {}",
            f.describe(),
            g.describe()
        ))),
    }
}

#[cfg(test)]
mod tests;

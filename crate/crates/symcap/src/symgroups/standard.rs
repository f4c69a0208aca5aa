//! Standard symmetries: eigenphase rational independence, torus closures,
//! and intersections of torus fixed-point sets.
//!
//! A unitary `V = W D W*` is a standard symmetry when `1` together with the
//! eigenvalue phases `arg(D_jj)/2π` is rationally independent. The closure
//! of the group it generates is then the full conjugated torus
//! `W·Diag(T)·W*`, so a single standard symmetry already reduces the
//! covariance search to a rotated simplex, and two "generic enough" standard
//! symmetries pin it to the isotropic input.

use num_complex::Complex64;

use super::{ReducedSet, SymmetryGroup};
use crate::matcore::{eigh, ComplexMatrix, CovarianceMatrix, UnitaryMatrix};
use crate::{Error, Result};

/// Default integer-coefficient bound for the independence search.
pub const DEFAULT_DENOMINATOR_BOUND: i64 = 100;
/// Default tolerance on the floating-point relation residual.
pub const DEFAULT_RELATION_TOL: f64 = 1e-9;
/// Base entry tolerance; scaled by `sqrt(N)` via [`default_entry_tol`].
pub const DEFAULT_ENTRY_TOL: f64 = 1e-8;

/// Tolerance below which an entry of a unitary counts as zero.
pub fn default_entry_tol(dim: usize) -> f64 {
    DEFAULT_ENTRY_TOL * (dim as f64).sqrt()
}

/// Eigenvalue phases `arg(D_jj)/2π ∈ [0,1)`, optionally annotated with exact
/// rationals `p/q` when phases are known in closed form.
#[derive(Clone, Debug)]
pub struct PhaseVector {
    values: Vec<f64>,
    exact: Vec<Option<(i64, i64)>>,
}

impl PhaseVector {
    pub fn new(values: Vec<f64>) -> Self {
        let values: Vec<f64> = values.into_iter().map(|v| v.rem_euclid(1.0)).collect();
        let exact = vec![None; values.len()];
        Self { values, exact }
    }

    /// Phases given exactly as rationals `p/q` (reduced mod 1).
    pub fn from_rationals(fractions: &[(i64, i64)]) -> Result<Self> {
        let mut values = Vec::with_capacity(fractions.len());
        let mut exact = Vec::with_capacity(fractions.len());
        for &(p, q) in fractions {
            if q <= 0 {
                return Err(Error::InvalidArgument("denominator must be positive".into()));
            }
            let p = p.rem_euclid(q);
            values.push(p as f64 / q as f64);
            exact.push(Some((p, q)));
        }
        Ok(Self { values, exact })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn all_exact(&self) -> bool {
        self.exact.iter().all(Option::is_some)
    }
}

/// Outcome of the bounded integer-relation search.
#[derive(Clone, Debug, PartialEq)]
pub enum IndependenceVerdict {
    /// No relation with coefficients bounded by `bound` exists; this is a
    /// certificate up to the bound, not a proof of independence.
    IndependentUpToBound { bound: i64 },
    /// Coefficients `(q_0, q_1, ..., q_N)` with
    /// `|q_0 + Σ q_j θ_j| ≤ tol`, not all zero.
    Dependent { relation: Vec<i64> },
}

/// Searches exhaustively for integers `(q_0..q_N)`, not all zero, with
/// `|q_j| ≤ bound` and `|q_0 + Σ q_j θ_j| ≤ tol`.
///
/// When every phase carries an exact-rational annotation the check is done
/// in integer arithmetic and `tol` is ignored.
pub fn rational_independence(
    phases: &PhaseVector,
    denominator_bound: i64,
    tol: f64,
) -> Result<IndependenceVerdict> {
    if denominator_bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let n = phases.len();
    if n == 0 {
        return Ok(IndependenceVerdict::IndependentUpToBound { bound: denominator_bound });
    }
    let grid = (2.0 * denominator_bound as f64 + 1.0).powi(n as i32);
    if grid > 5e9 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search over {grid:.1e} coefficient vectors is too large; \
             lower the bound or the dimension"
        )));
    }

    if phases.all_exact() {
        if let Some(relation) = exact_search(phases, denominator_bound) {
            return Ok(IndependenceVerdict::Dependent { relation });
        }
        return Ok(IndependenceVerdict::IndependentUpToBound { bound: denominator_bound });
    }

    let mut qs = vec![0i64; n];
    if let Some(relation) = float_search(phases.values(), denominator_bound, tol, &mut qs, 0, 0.0, false)
    {
        return Ok(IndependenceVerdict::Dependent { relation });
    }
    Ok(IndependenceVerdict::IndependentUpToBound { bound: denominator_bound })
}

/// Depth-first grid walk with partial sums. The first nonzero coefficient is
/// kept positive, which halves the grid without losing any relation.
fn float_search(
    thetas: &[f64],
    bound: i64,
    tol: f64,
    qs: &mut Vec<i64>,
    depth: usize,
    partial: f64,
    any_nonzero: bool,
) -> Option<Vec<i64>> {
    if depth == thetas.len() {
        if !any_nonzero {
            return None;
        }
        let q0 = -partial.round();
        if (partial + q0).abs() <= tol && q0.abs() <= bound as f64 {
            let mut relation = Vec::with_capacity(thetas.len() + 1);
            relation.push(q0 as i64);
            relation.extend_from_slice(qs);
            return Some(relation);
        }
        return None;
    }
    let lo = if any_nonzero { -bound } else { 0 };
    for q in lo..=bound {
        qs[depth] = q;
        let found = float_search(
            thetas,
            bound,
            tol,
            qs,
            depth + 1,
            partial + q as f64 * thetas[depth],
            any_nonzero || q != 0,
        );
        if found.is_some() {
            return found;
        }
    }
    qs[depth] = 0;
    None
}

fn exact_search(phases: &PhaseVector, bound: i64) -> Option<Vec<i64>> {
    // Common denominator; falls back to the float path on overflow.
    let mut lcm: i128 = 1;
    for ann in &phases.exact {
        let (_, q) = ann.expect("all_exact checked");
        let q = q as i128;
        lcm = lcm / gcd(lcm, q) * q;
        if lcm > 1 << 62 {
            let mut qs = vec![0i64; phases.len()];
            return float_search(
                phases.values(),
                bound,
                DEFAULT_RELATION_TOL,
                &mut qs,
                0,
                0.0,
                false,
            );
        }
    }
    let scaled: Vec<i128> = phases
        .exact
        .iter()
        .map(|ann| {
            let (p, q) = ann.expect("all_exact checked");
            p as i128 * (lcm / q as i128)
        })
        .collect();
    let mut qs = vec![0i64; phases.len()];
    exact_walk(&scaled, lcm, bound, &mut qs, 0, 0, false)
}

fn exact_walk(
    scaled: &[i128],
    lcm: i128,
    bound: i64,
    qs: &mut Vec<i64>,
    depth: usize,
    partial: i128,
    any_nonzero: bool,
) -> Option<Vec<i64>> {
    if depth == scaled.len() {
        if !any_nonzero || partial % lcm != 0 {
            return None;
        }
        let q0 = -(partial / lcm);
        if q0.unsigned_abs() <= bound as u128 {
            let mut relation = Vec::with_capacity(scaled.len() + 1);
            relation.push(q0 as i64);
            relation.extend_from_slice(qs);
            return Some(relation);
        }
        return None;
    }
    let lo = if any_nonzero { -bound } else { 0 };
    for q in lo..=bound {
        qs[depth] = q;
        let found = exact_walk(
            scaled,
            lcm,
            bound,
            qs,
            depth + 1,
            partial + q as i128 * scaled[depth],
            any_nonzero || q != 0,
        );
        if found.is_some() {
            return found;
        }
    }
    qs[depth] = 0;
    None
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Eigendecomposition `V = W diag(e^{2πi θ}) W*` of a unitary matrix, with
/// the canonical gauge: columns ordered by ascending phase, each scaled so
/// its largest-modulus entry is real positive.
///
/// Internally diagonalizes a random-ish Hermitian combination of the
/// Hermitian and skew parts; a wrong combination (eigenvalue collision of
/// distinct phases) is detected by the off-diagonal residual and retried
/// with the next coefficient pair.
pub fn unitary_eigendecomposition(v: &UnitaryMatrix) -> Result<(UnitaryMatrix, Vec<f64>)> {
    let n = v.dim();
    let m = v.matrix();
    let herm = m.add(&m.adjoint()).scale_re(0.5);
    let skew = m.sub(&m.adjoint()).scale(Complex64::new(0.0, -0.5));

    const COEFFS: [(f64, f64); 6] = [
        (1.0, 0.618_033_988_749_894_9),
        (0.618_033_988_749_894_9, -1.0),
        (1.0, 1.732_050_807_568_877_2),
        (0.3, 2.236_067_977_499_79),
        (-1.1, 0.707_106_781_186_547_6),
        (2.0, -0.333_333_333_333_333_3),
    ];

    let mut best: Option<(f64, ComplexMatrix)> = None;
    for (c1, c2) in COEFFS {
        let k = herm.scale_re(c1).add(&skew.scale_re(c2));
        let (_, w) = eigh(&k)?;
        let rotated = m.conjugate_by(&w.adjoint());
        let residual = rotated.sub(&rotated.diagonal_part()).frobenius_norm();
        if best.as_ref().map_or(true, |(r, _)| residual < *r) {
            best = Some((residual, w));
        }
        if residual <= 1e-10 * (n as f64).sqrt() {
            break;
        }
    }
    let (residual, w) = best.expect("at least one coefficient pair");
    if residual > 1e-8 * (n as f64).sqrt() {
        return Err(Error::Numerical(format!(
            "could not diagonalize the unitary: residual {residual:.3e}"
        )));
    }

    let rotated = m.conjugate_by(&w.adjoint());
    let mut phases: Vec<f64> = (0..n)
        .map(|i| {
            let z = rotated[(i, i)];
            (z.im.atan2(z.re) / (2.0 * std::f64::consts::PI)).rem_euclid(1.0)
        })
        .collect();

    // Canonical gauge.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| phases[i].partial_cmp(&phases[j]).expect("finite phases"));
    let mut canonical = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut max_mod = 0.0;
        let mut max_idx = 0;
        for i in 0..n {
            let modulus = w[(i, old_col)].norm();
            if modulus > max_mod + 1e-12 {
                max_mod = modulus;
                max_idx = i;
            }
        }
        let anchor = w[(max_idx, old_col)];
        let phase = if anchor.norm() > 0.0 { anchor / anchor.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            canonical[(i, new_col)] = w[(i, old_col)] / phase;
        }
    }
    phases.sort_by(|a, b| a.partial_cmp(b).expect("finite phases"));
    Ok((UnitaryMatrix::new(canonical)?, phases))
}

/// Closure of the group generated by a standard symmetry: the conjugated
/// torus `W·Diag(T)·W*`. Refuses when the eigenphases fail the bounded
/// rational-independence check (the closure would be a smaller group).
pub fn closure_of_standard_symmetry(v: &UnitaryMatrix) -> Result<SymmetryGroup> {
    let (w, phases) = unitary_eigendecomposition(v)?;
    let verdict = rational_independence(
        &PhaseVector::new(phases),
        DEFAULT_DENOMINATOR_BOUND,
        DEFAULT_RELATION_TOL,
    )?;
    match verdict {
        IndependenceVerdict::Dependent { relation } => Err(Error::NotStandardSymmetry(format!(
            "eigenphases satisfy the rational relation q = {relation:?}"
        ))),
        IndependenceVerdict::IndependentUpToBound { .. } => {
            Ok(SymmetryGroup::ConjugatedTorus(w))
        }
    }
}

/// Verdict of the two-standard-symmetry test for isotropic optimality.
#[derive(Clone, Debug, PartialEq)]
pub enum TwoSymmetryVerdict {
    /// Both inputs are standard and `W1* W2` has no (near-)zero entry: the
    /// isotropic input is capacity achieving.
    IsotropicOptimal,
    Inconclusive { reason: String },
}

/// Per-check record of the two-symmetry test, for reporting.
#[derive(Clone, Debug)]
pub struct TwoSymmetryReport {
    pub v1_standard: bool,
    pub v2_standard: bool,
    /// Smallest modulus among entries of `W1* W2`, when both are standard.
    pub min_entry: Option<f64>,
    pub entry_tol: f64,
    pub verdict: TwoSymmetryVerdict,
}

/// Checks the sufficient condition for isotropic optimality from a pair of
/// symmetries: both standard, and `W = W1* W2` entrywise nonzero.
pub fn check_two_symmetry_condition(
    v1: &UnitaryMatrix,
    v2: &UnitaryMatrix,
) -> Result<TwoSymmetryReport> {
    if v1.dim() != v2.dim() {
        return Err(Error::DimensionMismatch("symmetries of different dimension".into()));
    }
    let entry_tol = default_entry_tol(v1.dim());
    let mut report = TwoSymmetryReport {
        v1_standard: false,
        v2_standard: false,
        min_entry: None,
        entry_tol,
        verdict: TwoSymmetryVerdict::Inconclusive { reason: String::new() },
    };

    let w1 = match closure_of_standard_symmetry(v1) {
        Ok(SymmetryGroup::ConjugatedTorus(w)) => {
            report.v1_standard = true;
            w
        }
        Ok(_) => unreachable!("closure always returns a torus"),
        Err(e) => {
            report.verdict =
                TwoSymmetryVerdict::Inconclusive { reason: format!("V1: {e}") };
            return Ok(report);
        }
    };
    let w2 = match closure_of_standard_symmetry(v2) {
        Ok(SymmetryGroup::ConjugatedTorus(w)) => {
            report.v2_standard = true;
            w
        }
        Ok(_) => unreachable!("closure always returns a torus"),
        Err(e) => {
            report.verdict =
                TwoSymmetryVerdict::Inconclusive { reason: format!("V2: {e}") };
            return Ok(report);
        }
    };

    let w = w1.matrix().adjoint().mul(w2.matrix());
    let min_entry = w.entries().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    report.min_entry = Some(min_entry);
    report.verdict = if min_entry > entry_tol {
        TwoSymmetryVerdict::IsotropicOptimal
    } else {
        TwoSymmetryVerdict::Inconclusive {
            reason: format!(
                "W1* W2 has an entry of modulus {min_entry:.3e} (tolerance {entry_tol:.3e})"
            ),
        }
    };
    Ok(report)
}

/// Intersection of two rotated-simplex fixed sets
/// `W1·Diag(R+)·W1* ∩ W2·Diag(R+)·W2*`.
///
/// Membership forces `E1 W = W E2` entrywise for `W = W1* W2`, so diagonal
/// weights are constant on each connected component of the bipartite support
/// graph of `W`. A connected graph pins the intersection to `{I_N / N}`.
pub fn intersect_torus_fixed_sets(
    w1: &UnitaryMatrix,
    w2: &UnitaryMatrix,
    entry_tol: f64,
) -> Result<ReducedSet> {
    if w1.dim() != w2.dim() {
        return Err(Error::DimensionMismatch("bases of different dimension".into()));
    }
    let n = w1.dim();
    let w = w1.matrix().adjoint().mul(w2.matrix());

    // Union-find over rows 0..n and columns n..2n.
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if w[(i, j)].norm() > entry_tol {
                let (ri, cj) = (find(&mut parent, i), find(&mut parent, n + j));
                parent[ri] = cj;
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group: Vec<Option<usize>> = vec![None; 2 * n];
    for i in 0..n {
        let root = find(&mut parent, i);
        match root_to_group[root] {
            Some(g) => groups[g].push(i),
            None => {
                root_to_group[root] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }

    if groups.len() == 1 {
        return Ok(ReducedSet::Singleton(CovarianceMatrix::isotropic(n)));
    }
    Ok(ReducedSet::ConjugatedSimplex { basis: w1.clone(), groups })
}

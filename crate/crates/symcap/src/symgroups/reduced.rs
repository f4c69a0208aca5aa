//! Parameterizations of `A_G(C_{N,1})`, the image of the unit-trace
//! covariance set under a group average.
//!
//! Every embedded point is a fixed point of the originating group's average
//! operator; the capacity search can therefore be run over these parameters
//! instead of the full covariance set.

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{average, is_fully_mixing, SymmetryGroup};
use crate::matcore::{ComplexMatrix, CovarianceMatrix, UnitaryMatrix};
use crate::{Error, Result};

/// Which side of the Kronecker product carries the isotropic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoSide {
    /// `inner ⊗ I/n`.
    Right,
    /// `I/n ⊗ inner`.
    Left,
}

/// Explicit parameterization of an averaged covariance set.
#[derive(Clone, Debug)]
pub enum ReducedSet {
    /// A single covariance, e.g. `{I_N / N}`.
    Singleton(CovarianceMatrix),
    /// `W · diag(d) · W*` where `d` spreads a probability vector uniformly
    /// over each index group. With singleton groups this is the full
    /// rotated simplex `W · Diag_{N,1}(R+) · W*`.
    ConjugatedSimplex {
        basis: UnitaryMatrix,
        groups: Vec<Vec<usize>>,
    },
    /// `inner ⊗ I/n` (or mirrored), the block-Kronecker family.
    BlockKron {
        inner: Box<ReducedSet>,
        iso_dim: usize,
        iso_side: IsoSide,
    },
    /// `⊕_k p_k · S_k` over a probability vector `p`.
    WeightedDirectSum(Vec<ReducedSet>),
    /// All of `C_{N,1}`.
    FullSet(usize),
}

/// A feasible parameter value for a [`ReducedSet`] variant.
#[derive(Clone, Debug)]
pub enum ReducedPoint {
    /// Singletons take no parameters.
    Empty,
    /// A probability vector (simplex weights).
    Probabilities(Vec<f64>),
    /// An inner covariance for [`ReducedSet::FullSet`].
    Covariance(CovarianceMatrix),
    /// Parameters of the non-isotropic Kronecker factor.
    Kron(Box<ReducedPoint>),
    /// Block weights plus per-block inner parameters.
    Weighted {
        weights: Vec<f64>,
        parts: Vec<ReducedPoint>,
    },
}

impl ReducedSet {
    pub fn dim(&self) -> usize {
        match self {
            ReducedSet::Singleton(q) => q.dim(),
            ReducedSet::ConjugatedSimplex { basis, .. } => basis.dim(),
            ReducedSet::BlockKron { inner, iso_dim, .. } => inner.dim() * iso_dim,
            ReducedSet::WeightedDirectSum(parts) => parts.iter().map(ReducedSet::dim).sum(),
            ReducedSet::FullSet(n) => *n,
        }
    }

    /// Number of free real parameters.
    pub fn degrees_of_freedom(&self) -> usize {
        match self {
            ReducedSet::Singleton(_) => 0,
            ReducedSet::ConjugatedSimplex { groups, .. } => groups.len().saturating_sub(1),
            ReducedSet::BlockKron { inner, .. } => inner.degrees_of_freedom(),
            ReducedSet::WeightedDirectSum(parts) => {
                parts.len() - 1 + parts.iter().map(ReducedSet::degrees_of_freedom).sum::<usize>()
            }
            ReducedSet::FullSet(n) => n * n - 1,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ReducedSet::Singleton(q) => {
                let n = q.dim();
                if q.matrix().dist_frobenius(CovarianceMatrix::isotropic(n).matrix()) < 1e-12 {
                    format!("{{I_{n}/{n}}}")
                } else {
                    "a single covariance matrix".into()
                }
            }
            ReducedSet::ConjugatedSimplex { basis, groups } => {
                let n = basis.dim();
                if groups.len() == n {
                    format!("W·Diag_{{{n},1}}(R+)·W* (rotated diagonal simplex)")
                } else {
                    format!(
                        "rotated diagonal simplex of dimension {n} with weights tied over {} index groups",
                        groups.len()
                    )
                }
            }
            ReducedSet::BlockKron { inner, iso_dim, iso_side } => match iso_side {
                IsoSide::Right => {
                    format!("({}) ⊗ I_{d}/{d}", inner.describe(), d = iso_dim)
                }
                IsoSide::Left => {
                    format!("I_{d}/{d} ⊗ ({})", inner.describe(), d = iso_dim)
                }
            },
            ReducedSet::WeightedDirectSum(parts) => {
                let inner: Vec<String> =
                    parts.iter().map(|p| format!("p_k·({})", p.describe())).collect();
                inner.join(" ⊕ ")
            }
            ReducedSet::FullSet(n) => format!("C_{{{n},1}} (all unit-trace covariances)"),
        }
    }

    /// Is this set a single point?
    pub fn is_singleton(&self) -> bool {
        matches!(self, ReducedSet::Singleton(_))
    }

    /// Grouped-simplex view, when one exists: `(basis, groups)` such that
    /// the set is `{basis · diag(d) · basis*}` with `d` tied over `groups`.
    fn as_grouped_simplex(&self) -> Option<(ComplexMatrix, Vec<Vec<usize>>)> {
        match self {
            ReducedSet::ConjugatedSimplex { basis, groups } => {
                Some((basis.matrix().clone(), groups.clone()))
            }
            ReducedSet::Singleton(q) => {
                let n = q.dim();
                if q.matrix().dist_frobenius(CovarianceMatrix::isotropic(n).matrix()) < 1e-12 {
                    Some((ComplexMatrix::identity(n), vec![(0..n).collect()]))
                } else {
                    None
                }
            }
            ReducedSet::FullSet(1) => Some((ComplexMatrix::identity(1), vec![vec![0]])),
            _ => None,
        }
    }
}

impl Serialize for ReducedSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            ReducedSet::Singleton(q) => {
                map.serialize_entry("kind", "singleton")?;
                map.serialize_entry("q", q)?;
            }
            ReducedSet::ConjugatedSimplex { basis, groups } => {
                map.serialize_entry("kind", "conjugated_simplex")?;
                map.serialize_entry("basis", basis)?;
                map.serialize_entry("groups", groups)?;
            }
            ReducedSet::BlockKron { inner, iso_dim, iso_side } => {
                map.serialize_entry("kind", "block_kron")?;
                map.serialize_entry("inner", inner)?;
                map.serialize_entry("iso_dim", iso_dim)?;
                map.serialize_entry(
                    "iso_side",
                    match iso_side {
                        IsoSide::Right => "right",
                        IsoSide::Left => "left",
                    },
                )?;
            }
            ReducedSet::WeightedDirectSum(parts) => {
                map.serialize_entry("kind", "weighted_direct_sum")?;
                map.serialize_entry("parts", parts)?;
            }
            ReducedSet::FullSet(n) => {
                map.serialize_entry("kind", "full_set")?;
                map.serialize_entry("n", n)?;
            }
        }
        map.serialize_entry("description", &self.describe())?;
        map.end()
    }
}

/// Exact parameterization of `A_G(C_{N,1})` for a structured group.
pub fn averaged_set(group: &SymmetryGroup) -> Result<ReducedSet> {
    let n = group.dim();
    match group {
        SymmetryGroup::FullUnitary(_) | SymmetryGroup::SignedPermutations(_) => {
            Ok(ReducedSet::Singleton(CovarianceMatrix::isotropic(n)))
        }
        SymmetryGroup::ConjugatedTorus(w) => Ok(ReducedSet::ConjugatedSimplex {
            basis: w.clone(),
            groups: (0..n).map(|i| vec![i]).collect(),
        }),
        SymmetryGroup::SignFlips(_) => Ok(ReducedSet::ConjugatedSimplex {
            basis: UnitaryMatrix::identity(n),
            groups: (0..n).map(|i| vec![i]).collect(),
        }),
        SymmetryGroup::Permutations(n) => {
            if *n == 1 {
                return Ok(ReducedSet::Singleton(CovarianceMatrix::isotropic(1)));
            }
            // Eigenbasis of J_N: the normalized all-ones vector plus the
            // Helmert complement. The image is the two-parameter family
            // (Tr/N)I + beta(J - I), i.e. weights tied over the complement.
            Ok(ReducedSet::ConjugatedSimplex {
                basis: ones_eigenbasis(*n),
                groups: vec![vec![0], (1..*n).collect()],
            })
        }
        SymmetryGroup::FiniteMultiset { .. } => Err(Error::UnsupportedGroup(
            "no reduced-set parameterization for explicit finite families".into(),
        )),
        SymmetryGroup::TensorProduct(g1, g2) => {
            let (m1, m2) = (is_fully_mixing(g1), is_fully_mixing(g2));
            if m1 && m2 {
                Ok(ReducedSet::Singleton(CovarianceMatrix::isotropic(n)))
            } else if m2 {
                Ok(ReducedSet::BlockKron {
                    inner: Box::new(averaged_set(g1)?),
                    iso_dim: g2.dim(),
                    iso_side: IsoSide::Right,
                })
            } else if m1 {
                Ok(ReducedSet::BlockKron {
                    inner: Box::new(averaged_set(g2)?),
                    iso_dim: g1.dim(),
                    iso_side: IsoSide::Left,
                })
            } else {
                Err(Error::UnsupportedTensorReduction)
            }
        }
        SymmetryGroup::DirectSum(parts) => {
            super::check_direct_sum_means(parts)?;
            let sets: Result<Vec<ReducedSet>> = parts.iter().map(averaged_set).collect();
            Ok(ReducedSet::WeightedDirectSum(sets?))
        }
        SymmetryGroup::Trivial(_) => Ok(ReducedSet::FullSet(n)),
        SymmetryGroup::Conjugated { basis, inner } => {
            conjugate_reduced(averaged_set(inner)?, basis)
        }
    }
}

fn conjugate_reduced(set: ReducedSet, w: &UnitaryMatrix) -> Result<ReducedSet> {
    match set {
        ReducedSet::Singleton(q) => {
            let m = q.matrix().conjugate_by(w.matrix()).hermitian_part();
            Ok(ReducedSet::Singleton(CovarianceMatrix::new(m)?))
        }
        ReducedSet::ConjugatedSimplex { basis, groups } => Ok(ReducedSet::ConjugatedSimplex {
            basis: w.compose(&basis),
            groups,
        }),
        ReducedSet::FullSet(n) => Ok(ReducedSet::FullSet(n)),
        ReducedSet::WeightedDirectSum(parts) => {
            // A weighted direct sum of grouped simplices is itself a grouped
            // simplex in the block-diagonal basis, which conjugation rotates.
            let mut bases = Vec::with_capacity(parts.len());
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut offset = 0;
            for part in &parts {
                let (b, gs) = part.as_grouped_simplex().ok_or_else(|| {
                    Error::UnsupportedGroup(
                        "cannot conjugate this weighted direct sum".into(),
                    )
                })?;
                let nk = b.rows();
                bases.push(b);
                for g in gs {
                    groups.push(g.into_iter().map(|i| i + offset).collect());
                }
                offset += nk;
            }
            let basis = w.matrix().mul(&ComplexMatrix::direct_sum(&bases));
            Ok(ReducedSet::ConjugatedSimplex {
                basis: UnitaryMatrix::new(basis)?,
                groups,
            })
        }
        ReducedSet::BlockKron { .. } => Err(Error::UnsupportedGroup(
            "cannot conjugate a block-Kronecker reduced set".into(),
        )),
    }
}

/// Orthonormal basis whose first column is the normalized all-ones vector;
/// the rest is the Helmert complement.
fn ones_eigenbasis(n: usize) -> UnitaryMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    for i in 0..n {
        m[(i, 0)] = Complex64::new(inv_sqrt_n, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let scale = 1.0 / (kf * (kf + 1.0)).sqrt();
        for i in 0..k {
            m[(i, k)] = Complex64::new(scale, 0.0);
        }
        m[(k, k)] = Complex64::new(-kf * scale, 0.0);
    }
    UnitaryMatrix::new_unchecked(m)
}

/// Concrete covariance for a feasible parameter of the set.
pub fn embed(set: &ReducedSet, params: &ReducedPoint) -> Result<CovarianceMatrix> {
    match (set, params) {
        (ReducedSet::Singleton(q), _) => Ok(q.clone()),
        (ReducedSet::ConjugatedSimplex { basis, groups }, ReducedPoint::Probabilities(p)) => {
            let p = validated_probabilities(p, groups.len())?;
            let n = basis.dim();
            let mut diag = vec![0.0; n];
            for (k, group) in groups.iter().enumerate() {
                let share = p[k] / group.len() as f64;
                for &i in group {
                    diag[i] = share;
                }
            }
            let d = ComplexMatrix::from_real_diag(&diag);
            let q = d.conjugate_by(basis.matrix()).hermitian_part();
            let tr = q.trace().re;
            CovarianceMatrix::new(q.scale_re(1.0 / tr))
        }
        (ReducedSet::BlockKron { inner, iso_dim, iso_side }, ReducedPoint::Kron(inner_params)) => {
            let q1 = embed(inner, inner_params)?;
            let iso = ComplexMatrix::identity(*iso_dim).scale_re(1.0 / *iso_dim as f64);
            let m = match iso_side {
                IsoSide::Right => q1.matrix().kron(&iso),
                IsoSide::Left => iso.kron(q1.matrix()),
            };
            CovarianceMatrix::new(m)
        }
        (ReducedSet::WeightedDirectSum(parts), ReducedPoint::Weighted { weights, parts: pts }) => {
            if pts.len() != parts.len() {
                return Err(Error::InvalidArgument(format!(
                    "expected {} inner parameters, got {}",
                    parts.len(),
                    pts.len()
                )));
            }
            let w = validated_probabilities(weights, parts.len())?;
            let blocks: Result<Vec<ComplexMatrix>> = parts
                .iter()
                .zip(pts)
                .zip(&w)
                .map(|((part, pt), &wk)| Ok(embed(part, pt)?.matrix().scale_re(wk)))
                .collect();
            CovarianceMatrix::new(ComplexMatrix::direct_sum(&blocks?))
        }
        (ReducedSet::FullSet(n), ReducedPoint::Covariance(q)) => {
            if q.dim() != *n {
                return Err(Error::DimensionMismatch(format!(
                    "covariance is {} but set has dimension {n}",
                    q.dim()
                )));
            }
            Ok(q.clone())
        }
        _ => Err(Error::InvalidArgument(
            "parameter shape does not match the reduced-set variant".into(),
        )),
    }
}

fn validated_probabilities(p: &[f64], expected_len: usize) -> Result<Vec<f64>> {
    if p.len() != expected_len {
        return Err(Error::InvalidArgument(format!(
            "expected a probability vector of length {expected_len}, got {}",
            p.len()
        )));
    }
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "not a probability vector (sum {sum:.12})"
        )));
    }
    Ok(p.iter().map(|&x| x.max(0.0) / sum).collect())
}

/// Debug-style consistency check used by tests: every embedded point must be
/// fixed by the originating group's average.
pub fn embedding_fixed_point_residual(
    group: &SymmetryGroup,
    set: &ReducedSet,
    params: &ReducedPoint,
) -> Result<f64> {
    let q = embed(set, params)?;
    Ok(average(group, q.matrix())?.dist_frobenius(q.matrix()))
}

//! JSON-facing group descriptors for CLI configs.
//!
//! Tagged objects, e.g. `{"kind":"conjugated_torus","w":<matrix>}`,
//! `{"kind":"tensor","g1":...,"g2":...}`, `{"kind":"direct_sum","parts":[...]}`,
//! `{"kind":"finite","elements":[<matrix>...],"semantics":"group"|"multiset"}`.

use serde::{Deserialize, Serialize};

use super::{MultisetSemantics, SymmetryGroup};
use crate::matcore::{ComplexMatrix, UnitaryMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    FullUnitary { n: usize },
    ConjugatedTorus { w: ComplexMatrix },
    Permutations { n: usize },
    SignFlips { n: usize },
    SignedPermutations { n: usize },
    Finite { elements: Vec<ComplexMatrix>, semantics: FiniteSemantics },
    Tensor { g1: Box<GroupDescriptor>, g2: Box<GroupDescriptor> },
    DirectSum { parts: Vec<GroupDescriptor> },
    Trivial { n: usize },
    Conjugated { w: ComplexMatrix, inner: Box<GroupDescriptor> },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiniteSemantics {
    Group,
    Multiset,
}

impl GroupDescriptor {
    /// Validates matrices and closure requirements, producing the group.
    pub fn build(&self) -> Result<SymmetryGroup> {
        match self {
            GroupDescriptor::FullUnitary { n } => Ok(SymmetryGroup::FullUnitary(*n)),
            GroupDescriptor::ConjugatedTorus { w } => {
                Ok(SymmetryGroup::ConjugatedTorus(UnitaryMatrix::new(w.clone())?))
            }
            GroupDescriptor::Permutations { n } => Ok(SymmetryGroup::Permutations(*n)),
            GroupDescriptor::SignFlips { n } => Ok(SymmetryGroup::SignFlips(*n)),
            GroupDescriptor::SignedPermutations { n } => {
                Ok(SymmetryGroup::SignedPermutations(*n))
            }
            GroupDescriptor::Finite { elements, semantics } => {
                let unitaries: Result<Vec<UnitaryMatrix>> =
                    elements.iter().map(|m| UnitaryMatrix::new(m.clone())).collect();
                match semantics {
                    FiniteSemantics::Group => SymmetryGroup::finite_group(unitaries?),
                    FiniteSemantics::Multiset => SymmetryGroup::finite_multiset(unitaries?),
                }
            }
            GroupDescriptor::Tensor { g1, g2 } => {
                Ok(SymmetryGroup::tensor(g1.build()?, g2.build()?))
            }
            GroupDescriptor::DirectSum { parts } => {
                let built: Result<Vec<SymmetryGroup>> =
                    parts.iter().map(GroupDescriptor::build).collect();
                SymmetryGroup::direct_sum(built?)
            }
            GroupDescriptor::Trivial { n } => Ok(SymmetryGroup::Trivial(*n)),
            GroupDescriptor::Conjugated { w, inner } => {
                SymmetryGroup::conjugated(UnitaryMatrix::new(w.clone())?, inner.build()?)
            }
        }
    }

    pub fn from_group(group: &SymmetryGroup) -> Self {
        match group {
            SymmetryGroup::FullUnitary(n) => GroupDescriptor::FullUnitary { n: *n },
            SymmetryGroup::ConjugatedTorus(w) => {
                GroupDescriptor::ConjugatedTorus { w: w.matrix().clone() }
            }
            SymmetryGroup::Permutations(n) => GroupDescriptor::Permutations { n: *n },
            SymmetryGroup::SignFlips(n) => GroupDescriptor::SignFlips { n: *n },
            SymmetryGroup::SignedPermutations(n) => {
                GroupDescriptor::SignedPermutations { n: *n }
            }
            SymmetryGroup::FiniteMultiset { elements, semantics } => GroupDescriptor::Finite {
                elements: elements.iter().map(|u| u.matrix().clone()).collect(),
                semantics: match semantics {
                    MultisetSemantics::Group => FiniteSemantics::Group,
                    MultisetSemantics::Multiset => FiniteSemantics::Multiset,
                },
            },
            SymmetryGroup::TensorProduct(g1, g2) => GroupDescriptor::Tensor {
                g1: Box::new(Self::from_group(g1)),
                g2: Box::new(Self::from_group(g2)),
            },
            SymmetryGroup::DirectSum(parts) => GroupDescriptor::DirectSum {
                parts: parts.iter().map(Self::from_group).collect(),
            },
            SymmetryGroup::Trivial(n) => GroupDescriptor::Trivial { n: *n },
            SymmetryGroup::Conjugated { basis, inner } => GroupDescriptor::Conjugated {
                w: basis.matrix().clone(),
                inner: Box::new(Self::from_group(inner)),
            },
        }
    }
}

impl TryFrom<GroupDescriptor> for SymmetryGroup {
    type Error = Error;
    fn try_from(d: GroupDescriptor) -> Result<Self> {
        d.build()
    }
}

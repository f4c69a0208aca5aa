//! JSON-facing channel descriptors for CLI configs.
//!
//! Tagged objects, e.g. `{"kind":"gaussian","m":4,"n":4,"scale":1.0}`,
//! `{"kind":"ricean","hbar":<matrix>,"scale":0.5}`,
//! `{"kind":"sec5_alpha","alpha":2.0}`.

use serde::{Deserialize, Serialize};

use super::{ChannelModel, EntryLaw};
use crate::matcore::{ComplexMatrix, UnitaryMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelDescriptor {
    Gaussian {
        m: usize,
        n: usize,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    ColumnSymmetric {
        w_m: ComplexMatrix,
        w_n: ComplexMatrix,
        columns: Vec<LawDescriptor>,
    },
    RankOne {
        law_m: Vec<LawDescriptor>,
        law_n: Vec<LawDescriptor>,
    },
    Ricean {
        hbar: ComplexMatrix,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    BlockInvariant {
        d: usize,
        n: usize,
        inner: Box<ChannelDescriptor>,
    },
    Sec5Alpha {
        alpha: f64,
    },
    Sec5Inf,
    /// Built-in heavy-tailed control channel (capacity diverges).
    HeavyTail {
        m: usize,
        n: usize,
    },
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawDescriptor {
    ComplexGaussian,
    TwoPoint { a: f64 },
    PhaseRadius { r: f64 },
}

impl From<LawDescriptor> for EntryLaw {
    fn from(d: LawDescriptor) -> Self {
        match d {
            LawDescriptor::ComplexGaussian => EntryLaw::ComplexGaussian,
            LawDescriptor::TwoPoint { a } => EntryLaw::SymmetricTwoPoint { a },
            LawDescriptor::PhaseRadius { r } => EntryLaw::UniformPhaseRadius { r },
        }
    }
}

impl ChannelDescriptor {
    pub fn build(&self) -> Result<ChannelModel> {
        match self {
            ChannelDescriptor::Gaussian { m, n, scale } => ChannelModel::gaussian(*m, *n, *scale),
            ChannelDescriptor::ColumnSymmetric { w_m, w_n, columns } => {
                ChannelModel::column_symmetric(
                    UnitaryMatrix::new(w_m.clone())?,
                    UnitaryMatrix::new(w_n.clone())?,
                    columns.iter().map(|&l| l.into()).collect(),
                )
            }
            ChannelDescriptor::RankOne { law_m, law_n } => ChannelModel::rank_one(
                law_m.iter().map(|&l| l.into()).collect(),
                law_n.iter().map(|&l| l.into()).collect(),
            ),
            ChannelDescriptor::Ricean { hbar, scale } => {
                ChannelModel::ricean(hbar.clone(), *scale)
            }
            ChannelDescriptor::BlockInvariant { d, n, inner } => {
                ChannelModel::block_invariant(*d, *n, inner.build()?)
            }
            ChannelDescriptor::Sec5Alpha { alpha } => ChannelModel::sec5_alpha(*alpha),
            ChannelDescriptor::Sec5Inf => Ok(ChannelModel::sec5_inf()),
            ChannelDescriptor::HeavyTail { m, n } => {
                if *m == 0 || *n == 0 {
                    return Err(Error::InvalidArgument("heavy_tail: need m, n >= 1".into()));
                }
                Ok(ChannelModel::heavy_tail(*m, *n))
            }
        }
    }
}

use serde::{Deserialize, Serialize};

use super::disorder::DisorderRealization;
use super::spin::Spin;
use super::volume::Site;
use crate::error::{Error, Result};

/// Spin values imposed outside the volume.
///
/// Explicit values are listed in the lexicographic order of
/// [`Volume::exterior`](super::Volume::exterior) for the model's reach.
/// Random values are the site field of [`DisorderRealization::seeded`] with
/// the same seed, so a random boundary and a disorder realization built from
/// one seed agree on every exterior site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Plus,
    Minus,
    /// All couplings to the exterior are dropped.
    Free,
    Random {
        seed: u64,
        /// Global sign flip of the random field.
        flipped: bool,
    },
    Explicit(Vec<Spin>),
}

impl BoundaryCondition {
    pub fn random(seed: u64) -> Self {
        BoundaryCondition::Random {
            seed,
            flipped: false,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, BoundaryCondition::Free)
    }

    /// Value-wise negation; free stays free.
    pub fn negated(&self) -> Self {
        match self {
            BoundaryCondition::Plus => BoundaryCondition::Minus,
            BoundaryCondition::Minus => BoundaryCondition::Plus,
            BoundaryCondition::Free => BoundaryCondition::Free,
            BoundaryCondition::Random { seed, flipped } => BoundaryCondition::Random {
                seed: *seed,
                flipped: !flipped,
            },
            BoundaryCondition::Explicit(v) => {
                BoundaryCondition::Explicit(v.iter().map(|s| -*s).collect())
            }
        }
    }

    /// Values on `exterior`, or `None` for free boundaries.
    pub fn resolve(&self, exterior: &[Site]) -> Result<Option<Vec<Spin>>> {
        Ok(match self {
            BoundaryCondition::Plus => Some(vec![Spin::Up; exterior.len()]),
            BoundaryCondition::Minus => Some(vec![Spin::Down; exterior.len()]),
            BoundaryCondition::Free => None,
            BoundaryCondition::Random { seed, flipped } => {
                let field = DisorderRealization::seeded(*seed);
                let field = if *flipped { field.flipped() } else { field };
                Some(field.values_at(exterior))
            }
            BoundaryCondition::Explicit(v) => {
                if v.len() != exterior.len() {
                    return Err(Error::DimensionMismatch {
                        what: "explicit boundary",
                        expected: exterior.len(),
                        got: v.len(),
                    });
                }
                Some(v.clone())
            }
        })
    }
}

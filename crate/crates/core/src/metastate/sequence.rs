use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceKind {
    /// `N_k = k · step`.
    Linear { step: usize },
    /// `N_k = round(start · ratio^{k−1})`.
    Geometric { start: usize, ratio: f64 },
    /// `N_k = 2^{k²}`.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeSequence {
    pub kind: SequenceKind,
    pub terms: Vec<usize>,
}

impl VolumeSequence {
    pub fn new(kind: SequenceKind, terms: Vec<usize>) -> Result<Self> {
        if terms.first() == Some(&0) || terms.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "terms",
                format!("{terms:?}"),
                "a strictly increasing sequence of positive sizes",
            ));
        }
        if let SequenceKind::Sparse = kind {
            // Successive ratios must at least double.
            let ratios: Vec<f64> = terms
                .windows(2)
                .map(|w| w[1] as f64 / w[0] as f64)
                .collect();
            if ratios.windows(2).any(|r| r[1] < 2.0 * r[0]) {
                return Err(Error::invalid(
                    "terms",
                    format!("{terms:?}"),
                    "ratios N_{k+1}/N_k that at least double",
                ));
            }
        }
        Ok(VolumeSequence { kind, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether `N_{k+1} ≥ N_k²` holds for every `k`.
    pub fn is_squaring(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| (w[1] as u128) >= (w[0] as u128) * (w[0] as u128))
    }

    /// First `k` terms.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        Self::new(self.kind, self.terms.iter().copied().take(k).collect())
    }
}

/// All terms of `kind` not exceeding `budget`, the largest admissible
/// single-volume site count.
pub fn make_volume_sequence(kind: SequenceKind, budget: usize) -> Result<VolumeSequence> {
    let mut terms = Vec::new();
    match kind {
        SequenceKind::Linear { step } => {
            if step == 0 {
                return Err(Error::invalid("step", step, "a positive step"));
            }
            terms.extend((1..).map(|k| k * step).take_while(|n| *n <= budget));
        }
        SequenceKind::Geometric { start, ratio } => {
            if start == 0 || !(ratio > 1.0) || !ratio.is_finite() {
                return Err(Error::invalid("ratio", ratio, "start >= 1 and ratio > 1"));
            }
            let mut x = start as f64;
            while x.round() <= budget as f64 {
                let n = x.round() as usize;
                if terms.last().is_some_and(|&last| n <= last) {
                    return Err(Error::invalid(
                        "ratio",
                        ratio,
                        "a ratio that increases the rounded size",
                    ));
                }
                terms.push(n);
                x *= ratio;
            }
        }
        SequenceKind::Sparse => {
            for k in 1u32.. {
                let e = k * k;
                if e >= usize::BITS || (1usize << e) > budget {
                    break;
                }
                terms.push(1usize << e);
            }
        }
    }
    if terms.len() < 4 {
        return Err(Error::invalid(
            "budget",
            budget,
            "a budget admitting at least four terms of the sequence",
        ));
    }
    VolumeSequence::new(kind, terms)
}

//! Empirical check of the uniform continuity modulus.

use std::fmt;

use crate::graph::{CayleyGraph, DyadicDistance, Label};

use super::{apply_localizable, LocalRule, RuleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Index of the offending pair.
    pub pair: usize,
    pub r: usize,
    pub k: usize,
    pub input_distance: DyadicDistance,
    pub image_distance: DyadicDistance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContinuityVerdict {
    /// Every pair agreeing up to radius `k` had images agreeing up to `r`.
    Certified {
        k: usize,
        pairs: usize,
        agreeing: usize,
    },
    Counterexample(Counterexample),
}

impl ContinuityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, ContinuityVerdict::Certified { .. })
    }
}

impl fmt::Display for ContinuityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuityVerdict::Certified { k, pairs, agreeing } => {
                write!(f, "certified k={k} on {agreeing} agreeing pairs of {pairs}")
            }
            ContinuityVerdict::Counterexample(c) => write!(
                f,
                "counterexample pair={} r={} k={} d(X,Y)={} d(F(X),F(Y))={}",
                c.pair, c.r, c.k, c.input_distance, c.image_distance
            ),
        }
    }
}

/// Checks `k = r + radius(f) + 1` on `pairs`.
pub fn continuity_modulus<L: Label>(
    f: &LocalRule<L>,
    r: usize,
    pairs: &[(CayleyGraph<L>, CayleyGraph<L>)],
) -> Result<ContinuityVerdict, RuleError> {
    check_modulus(|x| apply_localizable(f, x), r, r + f.radius() + 1, pairs)
}

/// Checks that `step` maps pairs agreeing on their disks of radius `k` to
/// pairs agreeing on their disks of radius `r`.
pub fn check_modulus<L: Label>(
    step: impl Fn(&CayleyGraph<L>) -> Result<CayleyGraph<L>, RuleError>,
    r: usize,
    k: usize,
    pairs: &[(CayleyGraph<L>, CayleyGraph<L>)],
) -> Result<ContinuityVerdict, RuleError> {
    let mut agreeing = 0;
    for (i, (x, y)) in pairs.iter().enumerate() {
        if x.disk(k) != y.disk(k) {
            continue;
        }
        agreeing += 1;
        let (fx, fy) = (step(x)?, step(y)?);
        if fx.disk(r) != fy.disk(r) {
            return Ok(ContinuityVerdict::Counterexample(Counterexample {
                pair: i,
                r,
                k,
                input_distance: x.distance(y),
                image_distance: fx.distance(&fy),
            }));
        }
    }
    Ok(ContinuityVerdict::Certified {
        k,
        pairs: pairs.len(),
        agreeing,
    })
}

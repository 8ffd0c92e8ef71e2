use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::codec::RuleDescription;
use crate::graph::CayleyGraph;

use super::UniversalError;

/// A shared rule description, compared by fingerprint.
#[derive(Clone)]
pub struct RuleRef {
    desc: Arc<RuleDescription>,
    fingerprint: Arc<str>,
}

impl RuleRef {
    pub fn new(desc: RuleDescription) -> Self {
        let fingerprint = desc.fingerprint().into();
        RuleRef {
            desc: Arc::new(desc),
            fingerprint,
        }
    }

    pub fn description(&self) -> &RuleDescription {
        &self.desc
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn short(&self) -> &str {
        &self.fingerprint[..8]
    }
}

impl PartialEq for RuleRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.desc, &other.desc) || (self.fingerprint == other.fingerprint && self.desc == other.desc)
    }
}

impl Eq for RuleRef {}

impl Hash for RuleRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

impl fmt::Debug for RuleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleRef({})", self.short())
    }
}

/// A label of the simulating graph: the simulated label and the rule
/// description it travels with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimLabel {
    pub base: u16,
    pub rule: RuleRef,
}

impl fmt::Display for SimLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.base, self.rule.short())
    }
}

/// Attaches `rule` to every label of `x`.
pub fn label_with(x: &CayleyGraph<u16>, rule: &RuleRef) -> Result<CayleyGraph<SimLabel>, UniversalError> {
    let p = rule.description().params;
    if x.ports() != p.ports {
        return Err(UniversalError::ParamMismatch(format!(
            "graph has {} ports, rule has {}",
            x.ports(),
            p.ports
        )));
    }
    if let Some(l) = x.labels().iter().find(|&&l| l >= p.labels) {
        return Err(UniversalError::ParamMismatch(format!(
            "label {l} outside 0..{}",
            p.labels
        )));
    }
    Ok(x.map_labels(|&base| SimLabel {
        base,
        rule: rule.clone(),
    }))
}

/// Drops the rule component of every label.
pub fn project(x: &CayleyGraph<SimLabel>) -> CayleyGraph<u16> {
    x.map_labels(|l| l.base)
}

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::codec::{decode_rule, encode_rule};
use crate::graph::{CayleyGraph, Disk, DyadicDistance};
use crate::rule::{apply_localizable, iterate, LocalRule, RuleParams};

use super::{build_machine_world, label_with, run_machine, MachineRun, RuleRef, SimLabel, UniversalError};

type DecodeCache = HashMap<Arc<str>, Option<Arc<LocalRule<u16>>>>;

/// The universal rule for the family `params`.
///
/// On a disk whose labels all carry the same description, it decodes that
/// description, applies the decoded rule to the bare labels and stamps the
/// description back onto every image label. Disks mixing descriptions, or
/// falling on an undefined entry, have no image.
pub fn f_univ(params: RuleParams, budget: usize) -> LocalRule<SimLabel> {
    let cache: Mutex<DecodeCache> = Mutex::new(HashMap::new());
    LocalRule::from_fn("f_univ", params, move |disk: &Disk<SimLabel>| {
        let rule = &disk.pointer_label().rule;
        if disk.labels().iter().any(|l| l.rule != *rule) {
            return None;
        }
        let decoded = {
            let mut cache = cache.lock().unwrap();
            cache
                .entry(rule.fingerprint().into())
                .or_insert_with(|| decode_rule(rule.description(), budget).ok().map(Arc::new))
                .clone()?
        };
        let p = decoded.params();
        if p.ports != params.ports || p.radius != params.radius {
            return None;
        }
        let bare = Disk::new_unchecked(disk.map_labels(|l| l.base), disk.radius());
        let image = decoded.apply(&bare).ok()??;
        Some(image.map_labels(|&base| SimLabel {
            base,
            rule: rule.clone(),
        }))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationFailure {
    pub step: usize,
    pub distance: DyadicDistance,
    /// The simulated orbit, labelled.
    pub expected: CayleyGraph<SimLabel>,
    /// The universal orbit.
    pub actual: CayleyGraph<SimLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimulationVerdict {
    /// Both orbits agree at every step, one universal step per simulated
    /// step.
    Pass {
        steps: usize,
        delay: usize,
    },
    Fail(Box<SimulationFailure>),
}

impl SimulationVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SimulationVerdict::Pass { .. })
    }
}

impl fmt::Display for SimulationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimulationVerdict::Pass { steps, delay } => write!(f, "pass steps={steps} delay={delay}"),
            SimulationVerdict::Fail(x) => write!(
                f,
                "fail step={} distance={} expected_vertices={} actual_vertices={}",
                x.step,
                x.distance,
                x.expected.vertex_count(),
                x.actual.vertex_count()
            ),
        }
    }
}

/// Compares `label_with(F^k(x), d)` with `F_univ^k(label_with(x, d))` for
/// `k = 0..=n`.
///
/// `d` is normally the description of `f`; passing a different one checks
/// what the universal rule does with it.
pub fn check_intrinsic_simulation(
    f: &LocalRule<u16>,
    x: &CayleyGraph<u16>,
    n: usize,
    d: &RuleRef,
    budget: usize,
) -> Result<SimulationVerdict, UniversalError> {
    compare_orbits(f, x, label_with(x, d)?, n, d, budget)
}

/// Like [`check_intrinsic_simulation`], but the universal orbit starts from
/// the graph the construction machine builds out of the code of `x`.
pub fn simulate_via_machine(
    f: &LocalRule<u16>,
    x: &CayleyGraph<u16>,
    n: usize,
    d: &RuleRef,
    budget: usize,
    max_steps: usize,
) -> Result<(MachineRun, SimulationVerdict), UniversalError> {
    let run = run_machine(build_machine_world(x, d)?, max_steps)?;
    let verdict = compare_orbits(f, x, run.graph.clone(), n, d, budget)?;
    Ok((run, verdict))
}

fn compare_orbits(
    f: &LocalRule<u16>,
    x: &CayleyGraph<u16>,
    start: CayleyGraph<SimLabel>,
    n: usize,
    d: &RuleRef,
    budget: usize,
) -> Result<SimulationVerdict, UniversalError> {
    let orbit = iterate(f, x, n).map_err(|e| UniversalError::orbit("simulated", e))?;
    let univ = f_univ(*f.params(), budget);
    let mut cur = start;
    for (step, y) in orbit.iter().enumerate() {
        if step > 0 {
            cur = apply_localizable(&univ, &cur).map_err(|e| UniversalError::Orbit {
                side: "universal",
                step,
                source: Box::new(e),
            })?;
        }
        let expected = label_with(y, d)?;
        if expected != cur {
            return Ok(SimulationVerdict::Fail(Box::new(SimulationFailure {
                step,
                distance: expected.distance(&cur),
                expected,
                actual: cur,
            })));
        }
    }
    Ok(SimulationVerdict::Pass { steps: n, delay: 1 })
}

/// [`check_intrinsic_simulation`] with the description of `f` itself.
pub fn simulate(
    f: &LocalRule<u16>,
    x: &CayleyGraph<u16>,
    n: usize,
    budget: usize,
) -> Result<SimulationVerdict, UniversalError> {
    let d = RuleRef::new(encode_rule(f, budget)?);
    check_intrinsic_simulation(f, x, n, &d, budget)
}

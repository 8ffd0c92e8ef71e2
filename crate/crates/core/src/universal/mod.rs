//! Intrinsic universality: a rule that runs any rule of a family from its
//! description carried in the labels, and a machine that builds a graph
//! from its code by local steps.

use thiserror::Error;

use crate::codec::CodecError;
use crate::rule::RuleError;

mod label;
mod machine;
mod simulate;

pub use label::{label_with, project, RuleRef, SimLabel};
pub use machine::{
    build_machine_world, machine_step, run_machine, world_from_code, MachineGraph, MachinePhase, MachineRun,
    TraceRecord, WorldLabel,
};
pub use simulate::{
    check_intrinsic_simulation, f_univ, simulate, simulate_via_machine, SimulationFailure, SimulationVerdict,
};

#[derive(Debug, Error)]
pub enum UniversalError {
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("{side} orbit failed at step {step}: {source}")]
    Orbit {
        side: &'static str,
        step: usize,
        source: Box<RuleError>,
    },
    #[error("malformed world in phase {phase}: {witness}")]
    Malformed { phase: MachinePhase, witness: String },
    #[error("machine did not halt within {steps} steps")]
    BudgetExceeded { steps: usize },
    #[error("step {step} is not local: {detail}")]
    Locality { step: usize, detail: String },
}

impl UniversalError {
    /// Wraps an orbit error, lifting the step out of `AtStep`.
    pub fn orbit(side: &'static str, e: RuleError) -> Self {
        match e {
            RuleError::AtStep { step, source } => UniversalError::Orbit { side, step, source },
            other => UniversalError::Orbit {
                side,
                step: 0,
                source: Box::new(other),
            },
        }
    }
}

//! A concrete computability model over the sequence coding: a counter
//! machine, its primitive-recursive halting-trace predicate T and output
//! extractor U, three bars on binary sequences built from the diagonal, and
//! a reproducible experiment harness around them.
//!
//! The load-bearing convention: trace codes grow doubly exponentially in the
//! run length, so anything quantifying over traces is either bounded exactly
//! as stated (z below an explicit cap) or certificate-based (run the machine,
//! keep the configuration codes, and only materialize the full trace code
//! when its size estimate is small).

mod bars;
mod experiment;
mod machine;
mod trace;

pub use bars::{avoid_finite, bar_b, bar_c, bar_d, diagonal_halts, k_sets};
pub use experiment::{
    experiment, standard_catalog, AvoidanceEntry, CatalogEntry, ExperimentReport, HitDepth,
    MeasureCheck, REPORT_SCHEMA,
};
pub use machine::{
    machine_oracle, run_bounded, run_program, trace_configs, Instr, Program, RunOutcome, State,
};
pub use trace::{t_predicate, trace_bits_estimate, trace_code_if_small, trace_steps, u_output};

use seqcode::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KleeneError {
    /// A bar was applied to a sequence with an item other than 0 or 1.
    #[error("item at position {index} is {item}; expected 0 or 1")]
    NonBinary { index: usize, item: Nat },
    /// An operation requiring a nonempty sequence got ⟨⟩.
    #[error("the empty sequence is not allowed here")]
    EmptySequence,
    /// A jump target points beyond one past the last instruction.
    #[error("jump target {target} exceeds program length {len} + 1")]
    BadJump { target: u64, len: usize },
    /// The program text form could not be parsed.
    #[error("parse error on line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

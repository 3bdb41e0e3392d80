//! Closed-and-separable subsets of Baire space.
//!
//! A [`CSSet`] is given by a single generator oracle whose projections form a
//! countable dense family of member paths. From that one datum the crate
//! derives frames (the tree of finite prefixes members pass through), spreads
//! (decidable frames satisfying the extension law), fans (spreads with a
//! declared branching bound) and manifest fans (fans with an explicit
//! level-by-level listing).
//!
//! On top of the set types sit the bar tools: checking whether a decidable or
//! enumerable set of prefix codes bars a family, converting between the two
//! bar presentations, extracting finite subbars on fans by exhaustive tree
//! walk, and building the staged counting functions that measure how far a
//! path still is from hitting a bar. All searches are budgeted and report
//! three-valued outcomes; none of them pretends to decide an undecidable
//! question.
//!
//! Function builders here return the raw graph-enumeration oracle of a
//! partial continuous function. The application machinery that turns such an
//! oracle back into a function on paths lives in the `contfun` crate.

use std::collections::BTreeSet;
use std::str::FromStr;

use seqcode::{Nat, SeqCode};
use streams::StreamError;
use thiserror::Error;

mod bars;
mod dini;
mod family;
mod spread;

/// Hard cap on nodes expanded by any tree walk in this crate.
pub(crate) const WALK_NODE_CAP: usize = 1 << 20;

pub use bars::{
    bar_check, bounded_subbar, enum_bar_to_dec_bar, finite_subbar_bruteforce, BarHit, BarReport,
    BarSet, PathVerdict, SubbarOutcome,
};
pub use dini::{dini_build, dini_counterexample, first_hit_fn};
pub use family::{
    cs_from_frame, frame_enum, perfect_witness, positive_failure_witness, CSSet, WitnessOutcome,
};
pub use spread::{fan_manifest, Fan, ManifestFan, Spread};

/// Errors from the budgeted set constructions and tree walks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsetError {
    /// An enumeration stayed zero over the whole scan, so no inhabitant of
    /// the coded frame could be located.
    #[error("no nonzero enumeration value within budget {budget}, frame has no located inhabitant")]
    EmptyEnumeration { budget: usize },
    /// A fan level produced a code at or above the declared bound.
    #[error("level {level} contains code {code}, at or above the declared bound {bound}")]
    LevelBoundExceeded { level: usize, code: Nat, bound: Nat },
    /// The empty prefix is not admissible, so the frame carries no path.
    #[error("the empty prefix is not admissible, the frame is uninhabited")]
    UninhabitedFrame,
    /// An admissible code with no admissible immediate prolongation in the
    /// probed item range.
    #[error("admissible code {code} has no admissible prolongation with item below {width}")]
    DeadEnd { code: Nat, width: u64 },
    /// An admissible code whose parent is not admissible.
    #[error("code {code} is admissible but its parent is not")]
    OrphanNode { code: Nat },
    /// An admissible prolongation appended an item at or above the declared
    /// branching width.
    #[error("code {code} appends item {item}, at or above the declared width {width}")]
    WidthExceeded { code: Nat, item: u64, width: u64 },
    /// A staged-counterexample precondition failed: every admissible node of
    /// the given depth already has an initial part in the supplied set.
    #[error("the length-{level} sublayer already bars the fan, no avoiding node exists")]
    PositiveFailureViolated { level: usize },
    /// A tree walk visited more nodes than the hard cap allows.
    #[error("tree walk expanded {nodes} nodes, past the configured cap")]
    WalkBudget { nodes: usize },
    /// A bar file line failed to parse as a decimal code.
    #[error("bar line {line}: {msg}")]
    BadBarLine { line: usize, msg: String },
    /// An underlying oracle failed.
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// Renders a finite bar as sorted decimal codes, one per line.
pub fn bar_to_text(bar: &BTreeSet<SeqCode>) -> String {
    let mut out = String::new();
    for code in bar {
        out.push_str(&code.to_string());
        out.push('\n');
    }
    out
}

/// Parses the one-decimal-per-line bar format. Blank lines and `#` comment
/// lines are skipped; duplicates collapse into the set.
pub fn bar_from_text(text: &str) -> Result<BTreeSet<SeqCode>, CsetError> {
    let mut bar = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let code = Nat::from_str(line).map_err(|e| CsetError::BadBarLine {
            line: i + 1,
            msg: e.to_string(),
        })?;
        bar.insert(code);
    }
    Ok(bar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqcode::nat;

    #[test]
    fn bar_text_roundtrip() {
        let bar: BTreeSet<SeqCode> = [5u64, 0, 17].into_iter().map(nat).collect();
        let text = bar_to_text(&bar);
        assert_eq!(text, "0\n5\n17\n");
        assert_eq!(bar_from_text(&text).unwrap(), bar);
    }

    #[test]
    fn bar_text_skips_comments_and_blanks() {
        let parsed = bar_from_text("# two codes\n\n3\n  5 \n3\n").unwrap();
        assert_eq!(parsed, [nat(3), nat(5)].into_iter().collect());
    }

    #[test]
    fn bar_text_reports_bad_lines() {
        let err = bar_from_text("3\nxyz\n").unwrap_err();
        match err {
            CsetError::BadBarLine { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}

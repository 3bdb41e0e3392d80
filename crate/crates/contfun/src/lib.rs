//! Partial continuous functions presented by enumerable graphs.
//!
//! A continuous partial function on Baire space is coded here by a single
//! enumeration oracle listing its graph: each nonzero enumeration value
//! `pair(a, v) + 1` promises that every path through the finite prefix coded
//! by `a` is sent to `v` (a number for [`PartialNFun`], an output-prefix code
//! for [`PartialSeqFun`]). Application is a budgeted scan of that listing, and
//! every positive answer comes with a [`Certificate`] naming the graph entry
//! and the input prefix that forced the value.
//!
//! On top of application sit the graph combinators: relational composition
//! (both the stage-by-stage enumeration and a product-indexed listing of the
//! same set), restriction to a closed separable set, the retraction of a
//! spread onto a subspread, the two change-of-base constructions that move
//! fan arguments onto the binary tree and perfect-spread arguments onto all
//! of it, and a uniform-continuity modulus search over a manifest fan.
//!
//! Nothing here decides membership in a function's domain. Searches stop at
//! their budget and say so; the only errors that escape without a budget are
//! witnessed violations of a stated invariant, such as two graph entries on
//! one path disagreeing about the value.

use std::str::FromStr;

use seqcode::{Nat, SeqCode};
use streams::StreamError;
use thiserror::Error;

mod apply;
mod compose;
mod covers;
mod types;

pub use apply::{apply_n, apply_seq, uc_modulus_search, UcOutcome};
pub use compose::{comp_enum, compose_graphs, head_fun, pad_fun};
pub use covers::{cover_domain, fan_to_cantor_cover, perfect_spread_onto_cantor, retraction};
pub use types::{ApplyResult, Certificate, PartialNFun, PartialSeqFun};

/// Errors from graph validation and the budgeted function machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContfunError {
    /// Two number-valued entries sit on one path but disagree.
    #[error("entries {left} -> {left_value} and {right} -> {right_value} share a path but disagree")]
    CorruptGraph {
        left: SeqCode,
        left_value: Nat,
        right: SeqCode,
        right_value: Nat,
    },
    /// Two sequence-valued entries have comparable inputs but incomparable
    /// output prefixes.
    #[error("entries {left} -> {left_out} and {right} -> {right_out} have comparable inputs but incomparable outputs")]
    IncoherentGraph {
        left: SeqCode,
        left_out: SeqCode,
        right: SeqCode,
        right_out: SeqCode,
    },
    /// A modulus search found a prefix no scanned entry covers and no scanned
    /// pair of entries refutes.
    #[error("no graph entry covers prefix {prefix} within budget {budget}")]
    ApplyTimeout { prefix: SeqCode, budget: usize },
    /// A probed witness oracle broke the perfect-spread contract.
    #[error("witness oracles break the splitting contract at code {code}: {msg}")]
    WitnessContract { code: SeqCode, msg: String },
    /// A search needed a fan level beyond what the manifest lists.
    #[error("manifest lists levels only to depth {depth}, level {needed} was requested")]
    LevelUnavailable { depth: usize, needed: usize },
    /// A graph file line failed to parse as two decimal codes.
    #[error("graph line {line}: {msg}")]
    BadGraphLine { line: usize, msg: String },
    /// An oracle consulted during the search gave up or misbehaved.
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// Renders graph entries in the two-decimals-per-line exchange format, input
/// code then value code.
pub fn graph_to_text(pairs: &[(SeqCode, Nat)]) -> String {
    let mut out = String::new();
    for (a, v) in pairs {
        out.push_str(&a.to_string());
        out.push(' ');
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// Parses the two-decimals-per-line graph format. Blank lines and `#`
/// comment lines are skipped; entry order is preserved.
pub fn graph_from_text(text: &str) -> Result<Vec<(SeqCode, Nat)>, ContfunError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(ContfunError::BadGraphLine {
                line: i + 1,
                msg: "expected exactly two decimal codes".into(),
            });
        };
        let parse = |tok: &str| {
            Nat::from_str(tok).map_err(|e| ContfunError::BadGraphLine {
                line: i + 1,
                msg: e.to_string(),
            })
        };
        pairs.push((parse(a)?, parse(v)?));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqcode::nat;

    #[test]
    fn graph_text_round_trips_and_skips_comments() {
        let pairs = vec![(nat(0), nat(7)), (nat(17), nat(3))];
        let text = graph_to_text(&pairs);
        assert_eq!(text, "0 7\n17 3\n");
        let annotated = format!("# constant seven\n\n{text}");
        assert_eq!(graph_from_text(&annotated).unwrap(), pairs);
    }

    #[test]
    fn graph_text_rejects_malformed_lines() {
        let err = graph_from_text("0 7\n17\n").unwrap_err();
        assert!(matches!(err, ContfunError::BadGraphLine { line: 2, .. }));
        let err = graph_from_text("0 x").unwrap_err();
        assert!(matches!(err, ContfunError::BadGraphLine { line: 1, .. }));
    }
}

//! Graph-coded partial functions and application certificates.

use csets::Spread;
use seqcode::{is_initial, length_code, pair, unpair, Nat, SeqCode};
use streams::{EnumerableSet, SeqOracle, StreamError};

use crate::ContfunError;

/// Evidence for one application answer: the graph position scanned, the
/// entry's input prefix code and its length. Any oracle sharing that prefix
/// is sent to the same value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub position: Nat,
    pub prefix: SeqCode,
    pub prefix_len: usize,
}

/// Outcome of a budgeted application scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApplyResult {
    /// A graph entry matched an input prefix within budget.
    Value { value: Nat, certificate: Certificate },
    /// No entry matched; `scanned` positions were inspected.
    Timeout { scanned: usize },
}

impl ApplyResult {
    /// The value, when the scan produced one.
    pub fn value(&self) -> Option<&Nat> {
        match self {
            ApplyResult::Value { value, .. } => Some(value),
            ApplyResult::Timeout { .. } => None,
        }
    }
}

/// A partial number-valued continuous function, coded by an enumeration of
/// `pair(input prefix, value) + 1` entries. Entries on a common path must
/// agree on the value; [`PartialNFun::check_consistency`] probes that
/// invariant over a finite window.
#[derive(Debug, Clone)]
pub struct PartialNFun {
    graph: EnumerableSet,
}

impl PartialNFun {
    pub fn new(graph: EnumerableSet) -> Self {
        PartialNFun { graph }
    }

    pub fn graph(&self) -> &EnumerableSet {
        &self.graph
    }

    /// Builds a finite graph listing the given entries in order, one per
    /// enumeration position.
    pub fn from_pairs(pairs: &[(SeqCode, Nat)]) -> Self {
        PartialNFun::new(finite_graph(pairs))
    }

    /// Decoded entries at positions below `budget`, as
    /// (position, input prefix, value) triples.
    pub fn entries_within(&self, budget: usize) -> Result<Vec<(Nat, SeqCode, Nat)>, StreamError> {
        entries_within(&self.graph, budget)
    }

    /// Checks pairwise value agreement of entries on comparable inputs over
    /// the scanned window.
    pub fn check_consistency(&self, budget: usize) -> Result<(), ContfunError> {
        let entries = self.entries_within(budget)?;
        for (i, (_, a, p)) in entries.iter().enumerate() {
            for (_, b, q) in &entries[i + 1..] {
                if (is_initial(a, b) || is_initial(b, a)) && p != q {
                    return Err(ContfunError::CorruptGraph {
                        left: a.clone(),
                        left_value: p.clone(),
                        right: b.clone(),
                        right_value: q.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A partial sequence-valued continuous function, coded by an enumeration of
/// `pair(input prefix, output prefix) + 1` entries. Entries on comparable
/// inputs must carry comparable outputs; [`PartialSeqFun::check_coherence`]
/// probes that invariant over a finite window.
#[derive(Debug, Clone)]
pub struct PartialSeqFun {
    graph: EnumerableSet,
}

impl PartialSeqFun {
    pub fn new(graph: EnumerableSet) -> Self {
        PartialSeqFun { graph }
    }

    pub fn graph(&self) -> &EnumerableSet {
        &self.graph
    }

    /// Builds a finite graph listing the given entries in order, one per
    /// enumeration position.
    pub fn from_pairs(pairs: &[(SeqCode, SeqCode)]) -> Self {
        PartialSeqFun::new(finite_graph(pairs))
    }

    /// Decoded entries at positions below `budget`, as
    /// (position, input prefix, output prefix) triples.
    pub fn entries_within(&self, budget: usize) -> Result<Vec<(Nat, SeqCode, SeqCode)>, StreamError> {
        entries_within(&self.graph, budget)
    }

    /// Checks pairwise output comparability of entries on comparable inputs
    /// over the scanned window.
    pub fn check_coherence(&self, budget: usize) -> Result<(), ContfunError> {
        let entries = self.entries_within(budget)?;
        for (i, (_, a, c)) in entries.iter().enumerate() {
            for (_, b, d) in &entries[i + 1..] {
                let inputs_comparable = is_initial(a, b) || is_initial(b, a);
                let outputs_comparable = is_initial(c, d) || is_initial(d, c);
                if inputs_comparable && !outputs_comparable {
                    return Err(ContfunError::IncoherentGraph {
                        left: a.clone(),
                        left_out: c.clone(),
                        right: b.clone(),
                        right_out: d.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Scans the graph window and reports the first entry whose input prefix
    /// falls outside the given spread's frame, if any. Together with a
    /// sampled domain check this separates "defined on the set" from "domain
    /// coincides with the set": the former only needs members to get values,
    /// the latter also needs every entry to sit inside the frame.
    pub fn entries_within_frame(
        &self,
        spread: &Spread,
        budget: usize,
    ) -> Result<Option<SeqCode>, StreamError> {
        for (_, a, _) in self.entries_within(budget)? {
            if !spread.admits(&a)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }
}

/// One-entry-per-position finite graph enumeration.
fn finite_graph(pairs: &[(SeqCode, Nat)]) -> EnumerableSet {
    let table = pairs
        .iter()
        .map(|(a, v)| pair(a, v) + 1u32)
        .collect::<Vec<_>>();
    EnumerableSet::new(SeqOracle::from_table(table, Nat::from(0u32)))
}

/// Decodes nonzero enumeration values below `budget` into entry triples.
fn entries_within(
    graph: &EnumerableSet,
    budget: usize,
) -> Result<Vec<(Nat, SeqCode, Nat)>, StreamError> {
    let mut entries = Vec::new();
    for j in 0..budget {
        let v = graph.enumerator().query_u64(j as u64)?;
        if v == Nat::from(0u32) {
            continue;
        }
        let (a, p) = unpair(&(v - 1u32));
        entries.push((Nat::from(j as u64), a, p));
    }
    Ok(entries)
}

/// Whether the coded prefix is an initial part of the oracle's path.
pub(crate) fn matches_path(a: &SeqCode, alpha: &SeqOracle) -> Result<bool, StreamError> {
    let items = seqcode::decode(a);
    for (i, item) in items.items().iter().enumerate() {
        if alpha.query_u64(i as u64)? != *item {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Prefix length shorthand for certificates.
pub(crate) fn code_len(a: &SeqCode) -> usize {
    length_code(a)
}

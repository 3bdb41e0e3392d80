//! Budgeted application of graph-coded functions.

use std::collections::BTreeMap;

use csets::{CSSet, ManifestFan};
use seqcode::{decode, is_initial, length_code, nat, prefix, unpair, Nat, SeqCode};
use streams::{SeqOracle, StreamError};

use crate::types::{code_len, matches_path};
use crate::{ApplyResult, Certificate, ContfunError, PartialNFun, PartialSeqFun};

/// Applies a number-valued graph to a path oracle by scanning enumeration
/// positions in increasing order. The whole window is scanned so that a
/// later entry conflicting with the answer is reported as a corrupt graph
/// rather than shadowed; the certificate still names the first match.
pub fn apply_n(
    phi: &PartialNFun,
    alpha: &SeqOracle,
    budget: usize,
) -> Result<ApplyResult, ContfunError> {
    let mut first: Option<(u64, SeqCode, Nat)> = None;
    for j in 0..budget {
        let v = phi.graph().enumerator().query_u64(j as u64)?;
        if v == nat(0) {
            continue;
        }
        let (a, p) = unpair(&(v - 1u32));
        if !matches_path(&a, alpha)? {
            continue;
        }
        // Matching prefixes all sit on alpha's path, hence are comparable.
        match &first {
            None => first = Some((j as u64, a, p)),
            Some((_, b, q)) => {
                if *q != p {
                    return Err(ContfunError::CorruptGraph {
                        left: b.clone(),
                        left_value: q.clone(),
                        right: a,
                        right_value: p,
                    });
                }
            }
        }
    }
    Ok(match first {
        Some((pos, a, p)) => ApplyResult::Value {
            value: p,
            certificate: Certificate {
                position: nat(pos),
                prefix_len: code_len(&a),
                prefix: a,
            },
        },
        None => ApplyResult::Timeout { scanned: budget },
    })
}

/// Applies a sequence-valued graph to a path oracle. Each index of the image
/// is answered by its own scan for an entry whose output prefix reaches that
/// index; a scan that finds nothing reports budget exhaustion for exactly
/// that index.
pub fn apply_seq(phi: &PartialSeqFun, alpha: &SeqOracle, budget_per_index: usize) -> SeqOracle {
    let en = phi.graph().enumerator().clone();
    let alpha = alpha.clone();
    let name = format!("apply({}, {})", en.name(), alpha.name());
    let rule_name = name.clone();
    SeqOracle::from_fallible_rule(name, move |n| {
        let idx = usize::try_from(n).map_err(|_| StreamError::BudgetExhausted {
            name: rule_name.clone(),
            index: n.clone(),
        })?;
        for j in 0..budget_per_index {
            let v = en.query_u64(j as u64)?;
            if v == nat(0) {
                continue;
            }
            let (a, c) = unpair(&(v - 1u32));
            if length_code(&c) <= idx {
                continue;
            }
            if matches_path(&a, &alpha)? {
                return Ok(decode(&c).items()[idx].clone());
            }
        }
        Err(StreamError::BudgetExhausted {
            name: rule_name.clone(),
            index: n.clone(),
        })
    })
}

/// Outcome of a uniform-continuity modulus search over a manifest fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UcOutcome {
    /// Least `n` such that paths agreeing to depth `n` got equal values on
    /// every listed leaf of the search depth.
    Modulus(usize),
    /// Two incompatible entries extend one uncovered leaf with different
    /// values, so no modulus at or below the leaf depth exists.
    Conflict {
        leaf: SeqCode,
        left: SeqCode,
        left_value: Nat,
        right: SeqCode,
        right_value: Nat,
    },
}

/// Searches for a uniform-continuity modulus of a number-valued graph over
/// the fan's listed level at `depth_cap`. Every leaf must be decided by the
/// scanned graph window: a leaf covered by no entry either yields a concrete
/// refuting pair of deeper entries, or the apply timeout bubbles up as an
/// error naming the leaf.
pub fn uc_modulus_search(
    phi: &PartialNFun,
    manifest: &ManifestFan,
    depth_cap: usize,
    budget: usize,
) -> Result<UcOutcome, ContfunError> {
    let leaves = manifest
        .level(depth_cap)
        .ok_or(ContfunError::LevelUnavailable {
            depth: manifest.depth(),
            needed: depth_cap,
        })?;
    let entries = phi.entries_within(budget)?;

    let mut leaf_values: Vec<(SeqCode, Nat)> = Vec::new();
    for leaf in leaves {
        let mut value: Option<(&SeqCode, &Nat)> = None;
        for (_, a, p) in &entries {
            if !is_initial(a, leaf) {
                continue;
            }
            match value {
                None => value = Some((a, p)),
                Some((b, q)) => {
                    if q != p {
                        return Err(ContfunError::CorruptGraph {
                            left: b.clone(),
                            left_value: q.clone(),
                            right: a.clone(),
                            right_value: p.clone(),
                        });
                    }
                }
            }
        }
        if let Some((_, p)) = value {
            leaf_values.push((leaf.clone(), p.clone()));
            continue;
        }
        // Uncovered leaf: a pair of entries strictly below it with distinct
        // values refutes every modulus at or below the leaf depth.
        let below: Vec<_> = entries
            .iter()
            .filter(|(_, a, _)| is_initial(leaf, a))
            .collect();
        for (i, (_, a, p)) in below.iter().enumerate() {
            for (_, b, q) in &below[i + 1..] {
                if p == q {
                    continue;
                }
                if is_initial(a, b) || is_initial(b, a) {
                    return Err(ContfunError::CorruptGraph {
                        left: a.clone(),
                        left_value: p.clone(),
                        right: b.clone(),
                        right_value: q.clone(),
                    });
                }
                return Ok(UcOutcome::Conflict {
                    leaf: leaf.clone(),
                    left: a.clone(),
                    left_value: p.clone(),
                    right: b.clone(),
                    right_value: q.clone(),
                });
            }
        }
        return Err(ContfunError::ApplyTimeout {
            prefix: leaf.clone(),
            budget,
        });
    }

    for n in 0..=depth_cap {
        let mut groups: BTreeMap<SeqCode, &Nat> = BTreeMap::new();
        let mut constant = true;
        for (leaf, v) in &leaf_values {
            let key = prefix(leaf, n).expect("leaf prefix within its length");
            match groups.get(&key) {
                None => {
                    groups.insert(key, v);
                }
                Some(w) => {
                    if *w != v {
                        constant = false;
                        break;
                    }
                }
            }
        }
        if constant {
            return Ok(UcOutcome::Modulus(n));
        }
    }
    unreachable!("distinct leaves always split at the full search depth");
}

impl PartialNFun {
    /// Sampled check of the "defined on all of F" reading: applies the graph
    /// to the first `samples` member paths and reports the first member
    /// index that timed out, or `None` when every sample got a value. Says
    /// nothing about entries outside the family's frame.
    pub fn defined_on_members(
        &self,
        f: &CSSet,
        samples: u64,
        budget: usize,
    ) -> Result<Option<Nat>, ContfunError> {
        for m in 0..samples {
            if let ApplyResult::Timeout { .. } = apply_n(self, &f.member_u64(m), budget)? {
                return Ok(Some(nat(m)));
            }
        }
        Ok(None)
    }
}

impl PartialSeqFun {
    /// Sampled check that member paths get image values up to `depth`;
    /// reports the first (member, index) pair that timed out. Combined with
    /// [`PartialSeqFun::entries_within_frame`] this separates "defined on
    /// the set" from "domain coincides with the set".
    pub fn defined_on_members(
        &self,
        f: &CSSet,
        samples: u64,
        depth: usize,
        budget_per_index: usize,
    ) -> Result<Option<(Nat, Nat)>, ContfunError> {
        for m in 0..samples {
            let image = apply_seq(self, &f.member_u64(m), budget_per_index);
            for n in 0..depth {
                match image.query_u64(n as u64) {
                    Ok(_) => {}
                    Err(StreamError::BudgetExhausted { index, .. }) => {
                        return Ok(Some((nat(m), index)))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Ok(None)
    }
}

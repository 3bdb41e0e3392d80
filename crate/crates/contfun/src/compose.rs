//! Graph combinators: composition, restriction and the head/pad adapters.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use csets::{frame_enum, CSSet};
use seqcode::{decode, encode, is_initial, length_code, nat, pair, unpair, FinSeq, Nat};
use streams::{EnumerableSet, SeqOracle, StreamError};

use crate::{PartialNFun, PartialSeqFun};

/// Hard cap on the zero padding materialized for one pad-adapter entry.
const PAD_CAP: usize = 1 << 16;

#[derive(Default)]
struct CompState {
    stages: Vec<Nat>,
    emitted: BTreeSet<Nat>,
    // left component -> right components, from entries at consumed indices
    inner_pairs: BTreeMap<Nat, BTreeSet<Nat>>,
    outer_pairs: BTreeMap<Nat, BTreeSet<Nat>>,
    scanned: usize,
}

/// Computes one more stage of the composition enumeration.
fn comp_step(st: &mut CompState, outer: &SeqOracle, inner: &SeqOracle) -> Result<(), StreamError> {
    let t = st.stages.len();
    while st.scanned < t {
        let i = st.scanned as u64;
        let w = inner.query_u64(i)?;
        if w != nat(0) {
            let (a, b) = unpair(&(w - 1u32));
            st.inner_pairs.entry(a).or_default().insert(b);
        }
        let v = outer.query_u64(i)?;
        if v != nat(0) {
            let (b, c) = unpair(&(v - 1u32));
            st.outer_pairs.entry(b).or_default().insert(c);
        }
        st.scanned += 1;
    }

    let bound = nat(t as u64);
    let mut candidates: Vec<(Nat, Nat, Nat)> = Vec::new();
    for a in 0..t as u64 {
        for c in 0..t as u64 {
            let (a, c) = (nat(a), nat(c));
            candidates.push((pair(&a, &c), a, c));
        }
    }
    candidates.sort();

    let mut found = nat(0);
    for (code, a, c) in candidates {
        if st.emitted.contains(&code) {
            continue;
        }
        let Some(mediators) = st.inner_pairs.get(&a) else {
            continue;
        };
        let hit = mediators.iter().any(|b| {
            *b < bound && st.outer_pairs.get(b).is_some_and(|cs| cs.contains(&c))
        });
        if hit {
            st.emitted.insert(code.clone());
            found = code + 1u32;
            break;
        }
    }
    st.stages.push(found);
    Ok(())
}

/// Stage-by-stage enumeration of the relational composite of two graphs:
/// the result lists the pair of `a` and `c` exactly when `inner` lists a
/// pair of `a` and some mediator `b`, and `outer` lists the pair of that `b`
/// and `c`. `outer` is applied after `inner`.
///
/// Stage m admits only components and entry indices below m and emits the
/// least not-yet-emitted composite pair, or zero when none qualifies, so the
/// full composite appears exactly once in the limit. Each stage costs a scan
/// quadratic in m; this enumeration is for small windows. For graphs probed
/// at constructed positions use [`compose_graphs`], a product-indexed
/// listing of the same set.
pub fn comp_enum(outer: &SeqOracle, inner: &SeqOracle) -> SeqOracle {
    let name = format!("comp({}, {})", outer.name(), inner.name());
    let rule_name = name.clone();
    let outer = outer.clone();
    let inner = inner.clone();
    let state = Mutex::new(CompState::default());
    SeqOracle::from_fallible_rule(name, move |m| {
        let idx = usize::try_from(m).map_err(|_| StreamError::BudgetExhausted {
            name: rule_name.clone(),
            index: m.clone(),
        })?;
        let mut st = state.lock().expect("composition stage table");
        while st.stages.len() <= idx {
            comp_step(&mut st, &outer, &inner)?;
        }
        Ok(st.stages[idx].clone())
    })
}

/// Product-indexed listing of a relational composite: position pair(i, j)
/// matches the inner entry at i against the outer entry at j and carries
/// their composite when the mediating components agree. Lists the same set
/// as [`comp_enum`], with duplicates, but keeps witnessing positions cheap
/// to construct.
pub fn compose_graphs(outer: &EnumerableSet, inner: &EnumerableSet) -> EnumerableSet {
    let outer = outer.enumerator().clone();
    let inner = inner.enumerator().clone();
    let name = format!("comp-graph({}, {})", outer.name(), inner.name());
    EnumerableSet::new(SeqOracle::from_fallible_rule(name, move |k| {
        let (i, j) = unpair(k);
        let w = inner.query(&i)?;
        if w == nat(0) {
            return Ok(nat(0));
        }
        let (a, b) = unpair(&(w - 1u32));
        let v = outer.query(&j)?;
        if v == nat(0) {
            return Ok(nat(0));
        }
        let (b2, c) = unpair(&(v - 1u32));
        if b == b2 {
            Ok(pair(&a, &c) + 1u32)
        } else {
            Ok(nat(0))
        }
    }))
}

impl PartialNFun {
    /// Restricts the graph to a closed separable set. Position pair(m, n)
    /// combines the entry at position m with the frame code at position n:
    /// when the entry's input prefix is an initial part of the frame code,
    /// the value is re-promised on that longer, in-frame prefix.
    pub fn restrict_to_cs(&self, f: &CSSet) -> PartialNFun {
        let phi = self.graph().enumerator().clone();
        let delta = frame_enum(f).enumerator().clone();
        let name = format!("restrict({}, {})", phi.name(), delta.name());
        PartialNFun::new(EnumerableSet::new(SeqOracle::from_fallible_rule(
            name,
            move |k| {
                let (m, n) = unpair(k);
                let v = phi.query(&m)?;
                if v == nat(0) {
                    return Ok(nat(0));
                }
                let (s, p) = unpair(&(v - 1u32));
                let w = delta.query(&n)?;
                if w == nat(0) {
                    return Ok(nat(0));
                }
                let t = w - 1u32;
                if is_initial(&s, &t) {
                    Ok(pair(&t, &p) + 1u32)
                } else {
                    Ok(nat(0))
                }
            },
        )))
    }
}

impl PartialSeqFun {
    /// Restricts the graph to a closed separable set, as for number-valued
    /// graphs, but an entry is only re-promised on a frame code at least as
    /// long as its output prefix. That keeps the restricted graph's input
    /// prefixes long enough to certify every output item they promise.
    pub fn restrict_to_cs(&self, f: &CSSet) -> PartialSeqFun {
        let phi = self.graph().enumerator().clone();
        let delta = frame_enum(f).enumerator().clone();
        let name = format!("restrict({}, {})", phi.name(), delta.name());
        PartialSeqFun::new(EnumerableSet::new(SeqOracle::from_fallible_rule(
            name,
            move |k| {
                let (m, n) = unpair(k);
                let v = phi.query(&m)?;
                if v == nat(0) {
                    return Ok(nat(0));
                }
                let (s, c) = unpair(&(v - 1u32));
                let w = delta.query(&n)?;
                if w == nat(0) {
                    return Ok(nat(0));
                }
                let t = w - 1u32;
                if is_initial(&s, &t) && length_code(&t) >= length_code(&c) {
                    Ok(pair(&t, &c) + 1u32)
                } else {
                    Ok(nat(0))
                }
            },
        )))
    }
}

/// Head adapter: the number-valued graph that answers with the first item of
/// the sequence-valued image. Entry positions are inherited.
pub fn head_fun(phi: &PartialSeqFun) -> PartialNFun {
    let en = phi.graph().enumerator().clone();
    let name = format!("head({})", en.name());
    PartialNFun::new(EnumerableSet::new(SeqOracle::from_fallible_rule(
        name,
        move |j| {
            let v = en.query(j)?;
            if v == nat(0) {
                return Ok(nat(0));
            }
            let (s, c) = unpair(&(v - 1u32));
            match decode(&c).get(0) {
                Some(first) => Ok(pair(&s, first) + 1u32),
                None => Ok(nat(0)),
            }
        },
    )))
}

/// Pad adapter: the sequence-valued graph whose images start with the
/// number-valued answer and continue with zeros. Position pair(j, p) pads
/// the entry at position j with p zeros.
pub fn pad_fun(phi: &PartialNFun) -> PartialSeqFun {
    let en = phi.graph().enumerator().clone();
    let name = format!("pad({})", en.name());
    let rule_name = name.clone();
    PartialSeqFun::new(EnumerableSet::new(SeqOracle::from_fallible_rule(
        name,
        move |k| {
            let (j, zeros) = unpair(k);
            let v = en.query(&j)?;
            if v == nat(0) {
                return Ok(nat(0));
            }
            let (s, value) = unpair(&(v - 1u32));
            let pad = usize::try_from(&zeros)
                .ok()
                .filter(|p| *p <= PAD_CAP)
                .ok_or_else(|| StreamError::BudgetExhausted {
                    name: rule_name.clone(),
                    index: k.clone(),
                })?;
            let mut items = Vec::with_capacity(pad + 1);
            items.push(value);
            items.resize(pad + 1, nat(0));
            Ok(pair(&s, &encode(&FinSeq::new(items))) + 1u32)
        },
    )))
}

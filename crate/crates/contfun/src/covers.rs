//! Retractions onto subspreads and the two change-of-base covers.

use std::collections::BTreeMap;
use std::sync::Mutex;

use csets::{ManifestFan, Spread};
use seqcode::{
    bin_encode, concat, decode, incompatible, is_initial, length_code, nat, pair, prefix, unpair,
    FinSeq, Nat, SeqCode,
};
use streams::{DecidableSet, EnumerableSet, SeqOracle, StreamError};

use crate::{compose_graphs, ContfunError, PartialSeqFun};

/// Hard cap on nodes the breadth-first frame walk may materialize.
const WALK_NODE_CAP: usize = 1 << 20;

struct FrameWalk {
    seeded: bool,
    nodes: Vec<SeqCode>,
    expanded: usize,
}

/// The k-th admissible code of the spread's frame in breadth-first order,
/// growing the cached walk as needed. None once the frame is exhausted.
fn walk_node(
    state: &Mutex<FrameWalk>,
    g: &Spread,
    width: u64,
    k: usize,
    name: &str,
) -> Result<Option<SeqCode>, StreamError> {
    let mut st = state.lock().expect("frame walk state");
    if !st.seeded {
        st.seeded = true;
        if g.admits(&nat(0))? {
            st.nodes.push(nat(0));
        }
    }
    while st.nodes.len() <= k && st.expanded < st.nodes.len() {
        if st.nodes.len() >= WALK_NODE_CAP {
            return Err(StreamError::BudgetExhausted {
                name: name.to_string(),
                index: nat(st.nodes.len() as u64),
            });
        }
        let base_code = st.nodes[st.expanded].clone();
        st.expanded += 1;
        let base = decode(&base_code);
        for i in 0..width {
            let child = base.append(nat(i)).encode();
            if g.admits(&child)? {
                st.nodes.push(child);
            }
        }
    }
    Ok(st.nodes.get(k).cloned())
}

/// Rewrites a prefix item by item into the subspread: items that stay
/// admissible are kept, every other step falls back to the least admissible
/// item below `width`.
fn retract_prefix(
    f: &Spread,
    b: &SeqCode,
    width: u64,
    name: &str,
) -> Result<SeqCode, StreamError> {
    let items = decode(b);
    let mut r = FinSeq::empty();
    'items: for item in items.items() {
        let keep = r.append(item.clone());
        if f.admits(&keep.encode())? {
            r = keep;
            continue;
        }
        for i in 0..width {
            let fallback = r.append(nat(i));
            if f.admits(&fallback.encode())? {
                r = fallback;
                continue 'items;
            }
        }
        return Err(StreamError::BudgetExhausted {
            name: name.to_string(),
            index: b.clone(),
        });
    }
    Ok(r.encode())
}

/// The standard retraction of the spread `g` onto its subspread `f`. Entry
/// position pair(k, l) promises, on the k-th code of `g`'s frame in
/// breadth-first order, the retract of that code's length-l prefix, so the
/// induced map fixes paths already inside `f` and rewrites others item by
/// item.
///
/// A rewriting step with no admissible item below `width`, which the
/// subspread law rules out, surfaces as a budget error naming the offending
/// prefix.
pub fn retraction(f: &Spread, g: &Spread, width: u64) -> PartialSeqFun {
    let name = format!(
        "retract({} onto {})",
        g.frame().chi().name(),
        f.frame().chi().name()
    );
    let f = f.clone();
    let g = g.clone();
    let state = Mutex::new(FrameWalk {
        seeded: false,
        nodes: Vec::new(),
        expanded: 0,
    });
    let rule_name = name.clone();
    PartialSeqFun::new(EnumerableSet::new(SeqOracle::from_fallible_rule(
        name,
        move |pos| {
            let (k, l) = unpair(pos);
            let (Ok(k), Ok(l)) = (usize::try_from(&k), usize::try_from(&l)) else {
                return Ok(nat(0));
            };
            let Some(t) = walk_node(&state, &g, width, k, &rule_name)? else {
                return Ok(nat(0));
            };
            if l > length_code(&t) {
                return Ok(nat(0));
            }
            let b = prefix(&t, l).expect("prefix within node length");
            let r = retract_prefix(&f, &b, width, &rule_name)?;
            Ok(pair(&t, &r) + 1u32)
        },
    )))
}

/// Item-wise level bounds: entry n is the greatest item occurring at
/// position n among the listed codes of level n+1, None when that level is
/// listed but empty.
fn level_item_bounds(manifest: &ManifestFan) -> Vec<Option<Nat>> {
    (0..manifest.depth())
        .map(|n| {
            manifest
                .level(n + 1)
                .unwrap_or(&[])
                .iter()
                .filter_map(|s| decode(s).get(n).cloned())
                .max()
        })
        .collect()
}

/// Decides membership in the domain of the fan's binary cover. An all-zero
/// prefix belongs while its length stays under the first level bound; a
/// prefix with a one belongs when the block spelling before its last one
/// decodes to an admissible fan code and the zero run after it can still be
/// absorbed by an admissible next item within that code's level bound.
///
/// The decision for a prefix with k ones needs the k-th level bound, so
/// queries whose spelling runs past the manifest's listed levels fail with
/// a budget error: deepen the manifest to widen the decidable horizon.
pub fn cover_domain(manifest: &ManifestFan) -> Spread {
    let bounds = level_item_bounds(manifest);
    let spread = manifest.fan().spread().clone();
    let name = format!("cover-domain({})", spread.frame().chi().name());
    let rule_name = name.clone();
    let chi = SeqOracle::from_fallible_rule(name, move |b| {
        let items = decode(b);
        if !items.is_binary() {
            return Ok(nat(0));
        }
        let Some(last_one) = items.items().iter().rposition(|m| *m == nat(1)) else {
            let k = items.len();
            return match bounds.first() {
                Some(Some(d)) => Ok(nat(u64::from(nat(k as u64) <= *d))),
                Some(None) => Ok(nat(0)),
                None => Err(StreamError::BudgetExhausted {
                    name: rule_name.clone(),
                    index: b.clone(),
                }),
            };
        };
        let zeros_after = items.len() - last_one - 1;
        // zero-run lengths before each one spell out the fan code
        let mut node_items = Vec::new();
        let mut run = 0u64;
        for item in &items.items()[..=last_one] {
            if *item == nat(1) {
                node_items.push(nat(run));
                run = 0;
            } else {
                run += 1;
            }
        }
        let a = FinSeq::new(node_items);
        let a_code = a.encode();
        if !spread.admits(&a_code)? {
            return Ok(nat(0));
        }
        let bound = match bounds.get(a.len()) {
            Some(Some(d)) => d.clone(),
            Some(None) => return Ok(nat(0)),
            None => {
                return Err(StreamError::BudgetExhausted {
                    name: rule_name.clone(),
                    index: b.clone(),
                })
            }
        };
        let mut i = nat(zeros_after as u64);
        while i <= bound {
            if spread.admits(&a.append(i.clone()).encode())? {
                return Ok(nat(1));
            }
            i += 1u32;
        }
        Ok(nat(0))
    });
    Spread::new(DecidableSet::new(chi))
}

/// Carries a manifest fan onto the binary tree. A fan code is spelled in
/// binary as blocks of zeros, one per item and each closed by a one; the
/// graph promises, at position pair(a, c) for a fan code a and binary c,
/// that inputs through the spelling of a extended by c map to a. Composing
/// those promises with the retraction of the binary tree onto
/// [`cover_domain`] makes them total on binary paths, so every path of the
/// fan is the image of a binary path and the listed fan prefixes are
/// attained.
///
/// Positions of the result are product positions of [`compose_graphs`] with
/// the retraction inner and the block promises outer. The manifest must list
/// levels past the deepest spelling the caller will probe, since the domain
/// decider errors beyond its horizon.
pub fn fan_to_cantor_cover(manifest: &ManifestFan) -> PartialSeqFun {
    let spread = manifest.fan().spread().clone();
    let name = format!("cover({})", spread.frame().chi().name());
    let blocks = SeqOracle::from_fallible_rule(name, move |posn| {
        let (a, c) = unpair(posn);
        if !spread.admits(&a)? || !decode(&c).is_binary() {
            return Ok(nat(0));
        }
        Ok(pair(&concat(&bin_encode(&a), &c), &a) + 1u32)
    });
    let dom = cover_domain(manifest);
    let onto_dom = retraction(&dom, &Spread::cantor(), 2);
    PartialSeqFun::new(compose_graphs(
        &EnumerableSet::new(blocks),
        onto_dom.graph(),
    ))
}

/// Verdict of the split-tree walk for one frame code.
enum PathStatus {
    /// The code is a split node, reached by these witness choices.
    Split(Vec<u8>),
    /// The code is strictly an initial part of a split node.
    Approach,
    /// The code left the split tree.
    Off,
}

/// Walks the binary tree of witness extensions from the root towards `s`.
/// Children of a split node extend it and are mutually incompatible, so at
/// most one child is comparable to `s`; the length check forces progress and
/// bounds the walk by length(s).
fn split_walk(gamma: &SeqOracle, delta: &SeqOracle, s: &SeqCode) -> Result<PathStatus, StreamError> {
    let mut e = nat(0);
    let mut bits = Vec::new();
    loop {
        if e == *s {
            return Ok(PathStatus::Split(bits));
        }
        let le = length_code(&e);
        let g = gamma.query(&e)?;
        let d = delta.query(&e)?;
        if length_code(&g) > le && is_initial(&g, s) {
            bits.push(0u8);
            e = g;
            continue;
        }
        if length_code(&d) > le && is_initial(&d, s) {
            bits.push(1u8);
            e = d;
            continue;
        }
        if is_initial(s, &g) || is_initial(s, &d) {
            return Ok(PathStatus::Approach);
        }
        return Ok(PathStatus::Off);
    }
}

/// The binary address of a frame code: its witness choices when it is a
/// split node, its nearest split ancestor's address extended by zero when it
/// left the split tree, nothing when it sits strictly between splits.
fn split_address(
    memo: &Mutex<BTreeMap<SeqCode, Option<SeqCode>>>,
    gamma: &SeqOracle,
    delta: &SeqOracle,
    s: &SeqCode,
) -> Result<Option<SeqCode>, StreamError> {
    if let Some(hit) = memo.lock().expect("split address memo").get(s) {
        return Ok(hit.clone());
    }
    let computed = if *s == nat(0) {
        Some(nat(0))
    } else {
        match split_walk(gamma, delta, s)? {
            PathStatus::Split(bits) => {
                let items = bits.into_iter().map(|b| nat(u64::from(b))).collect();
                Some(FinSeq::new(items).encode())
            }
            PathStatus::Approach => None,
            PathStatus::Off => {
                let parent = prefix(s, length_code(s) - 1).expect("shortening a nonempty code");
                split_address(memo, gamma, delta, &parent)?
                    .map(|z| decode(&z).append(nat(0)).encode())
            }
        }
    };
    memo.lock()
        .expect("split address memo")
        .insert(s.clone(), computed.clone());
    Ok(computed)
}

/// Projects a perfect spread onto the full binary tree along its splitting
/// structure. `gamma` and `delta` name, for every frame code, two frame
/// extensions of it that are incompatible with each other; the codes
/// reachable from the root through those witnesses form a binary subtree,
/// and the graph sends each frame code to its binary address under that
/// subtree. Witnesses are probed on all frame codes below `probe` and any
/// break of the contract is rejected up front.
pub fn perfect_spread_onto_cantor(
    f: &Spread,
    gamma: &SeqOracle,
    delta: &SeqOracle,
    probe: u64,
) -> Result<PartialSeqFun, ContfunError> {
    for raw in 0..probe {
        let s = nat(raw);
        if !f.admits(&s)? {
            continue;
        }
        let g = gamma.query(&s)?;
        let d = delta.query(&s)?;
        let fail = |msg: &str| ContfunError::WitnessContract {
            code: s.clone(),
            msg: msg.into(),
        };
        if !f.admits(&g)? || !f.admits(&d)? {
            return Err(fail("witness leaves the frame"));
        }
        if !is_initial(&s, &g) || !is_initial(&s, &d) {
            return Err(fail("witness does not extend its node"));
        }
        if !incompatible(&g, &d) {
            return Err(fail("witnesses are compatible"));
        }
    }
    let name = format!("split-address({})", f.frame().chi().name());
    let f = f.clone();
    let gamma = gamma.clone();
    let delta = delta.clone();
    let memo = Mutex::new(BTreeMap::new());
    Ok(PartialSeqFun::new(EnumerableSet::new(
        SeqOracle::from_fallible_rule(name, move |s| {
            if !f.admits(s)? {
                return Ok(nat(0));
            }
            match split_address(&memo, &gamma, &delta, s)? {
                Some(z) => Ok(pair(s, &z) + 1u32),
                None => Ok(nat(0)),
            }
        }),
    )))
}

//! Staged counting functions that measure distance to a bar.
//!
//! All three builders return graph-enumeration oracles: position s carries
//! pair(s, value) + 1 when the function is defined on paths through s, and
//! 0 otherwise. Evaluating such an oracle on a path means walking the
//! path's prefixes until a nonzero position appears; that machinery lives in
//! the `contfun` crate, while the tests here walk prefixes directly.

use num_traits::{One, Zero};
use seqcode::{decode, encode, length_code, pair, prefix, unpair, Nat, SeqCode};
use streams::{DecidableSet, SeqOracle, StreamError};

use crate::{CSSet, CsetError, ManifestFan, WALK_NODE_CAP};

/// Whether `s` lies in the decided set while no strictly shorter prefix of
/// it does. Minimal codes of a decided set are pairwise incomparable, which
/// is what makes the graphs below consistent.
fn minimal_in(beta: &DecidableSet, s: &SeqCode) -> Result<bool, StreamError> {
    if !beta.contains(s)? {
        return Ok(false);
    }
    for i in 0..length_code(s) {
        let part = prefix(s, i).expect("prefix length within the decoded length");
        if beta.contains(&part)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The function sending each path to the least prefix length at which it
/// meets the decided bar: the graph holds pair(s, length(s)) + 1 exactly at
/// the minimal bar elements s. Total on the family when the bar really
/// bars it.
pub fn first_hit_fn(beta: &DecidableSet, f: &CSSet) -> SeqOracle {
    let inner = beta.clone();
    let name = format!("first_hit({} on {})", beta.chi().name(), f.gen().name());
    SeqOracle::from_fallible_rule(name, move |s| {
        if minimal_in(&inner, s)? {
            Ok(pair(s, &Nat::from(length_code(s))) + Nat::one())
        } else {
            Ok(Nat::zero())
        }
    })
}

/// The staged descent towards a decided bar: projection n enumerates the
/// function α ↦ max(first_hit(α) − n, 0), so stage 0 is the first-hit
/// function and each stage drops the previous one by one, hitting zero only
/// once the bar has been met.
pub fn dini_build(beta: &DecidableSet, f: &CSSet) -> SeqOracle {
    let inner = beta.clone();
    let name = format!("descent({} on {})", beta.chi().name(), f.gen().name());
    SeqOracle::from_fallible_rule(name, move |k| {
        let (n, s) = unpair(k);
        if minimal_in(&inner, &s)? {
            let len = Nat::from(length_code(&s));
            let value = if n >= len { Nat::zero() } else { len - n };
            Ok(pair(&s, &value) + Nat::one())
        } else {
            Ok(Nat::zero())
        }
    })
}

/// The staged indicator family showing that a bar with no finite subbar
/// cannot be approached monotonically: projection n is 1 on a path until a
/// prefix of length at most n lands in X and 0 afterwards.
///
/// Requires that for every stage up to `levels`, the length-bounded sublayer
/// of X leaves some admissible node of the fan unbarred; the stages would
/// otherwise fail to witness anything. The check walks the fan, pruning
/// every node that lies in X, and demands that a node survive at each depth.
pub fn dini_counterexample(
    x: &DecidableSet,
    fan: &ManifestFan,
    levels: usize,
) -> Result<SeqOracle, CsetError> {
    let spread = fan.fan().spread().clone();
    let width = fan.fan().width();
    let root = Nat::zero();
    if !spread.admits(&root)? {
        return Err(CsetError::UninhabitedFrame);
    }
    if x.contains(&root)? {
        return Err(CsetError::PositiveFailureViolated { level: 0 });
    }
    let mut frontier = vec![root];
    let mut visited = 1usize;
    for d in 0..levels {
        let mut next = Vec::new();
        for s in &frontier {
            let items = decode(s);
            for k in 0..width {
                let child = encode(&items.append(Nat::from(k)));
                if spread.admits(&child)? && !x.contains(&child)? {
                    visited += 1;
                    if visited > WALK_NODE_CAP {
                        return Err(CsetError::WalkBudget { nodes: visited });
                    }
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            return Err(CsetError::PositiveFailureViolated { level: d + 1 });
        }
        frontier = next;
    }
    let inner = x.clone();
    let name = format!(
        "staged({} on {})",
        x.chi().name(),
        spread.frame().chi().name()
    );
    Ok(SeqOracle::from_fallible_rule(name, move |k| {
        let (n, s) = unpair(k);
        let stage = match usize::try_from(&n) {
            Ok(v) => v,
            // Stages beyond machine range never enumerate anything here.
            Err(_) => return Ok(Nat::zero()),
        };
        if length_code(&s) != stage || !spread.admits(&s)? {
            return Ok(Nat::zero());
        }
        let mut hit = false;
        for j in 0..=stage {
            let part = prefix(&s, j).expect("prefix length within the decoded length");
            if inner.contains(&part)? {
                hit = true;
                break;
            }
        }
        let indicator = if hit { Nat::zero() } else { Nat::one() };
        Ok(pair(&s, &indicator) + Nat::one())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fan_manifest, Fan};
    use seqcode::{is_initial, nat};
    use streams::{oracle_prefix, project};

    fn chi(name: &str, f: impl Fn(&SeqCode) -> bool + Send + Sync + 'static) -> DecidableSet {
        DecidableSet::new(SeqOracle::from_rule(name, move |s| {
            Nat::from(u8::from(f(s)))
        }))
    }

    /// Walks the prefixes of `alpha` until the graph oracle answers, and
    /// returns the function value.
    fn eval_at(phi: &SeqOracle, alpha: &SeqOracle, max_len: usize) -> Option<Nat> {
        for q in 0..=max_len {
            let s = oracle_prefix(alpha, q).unwrap();
            let v = phi.query(&s).unwrap();
            if !v.is_zero() {
                let (dom, value) = unpair(&(v - Nat::one()));
                assert_eq!(dom, s, "graph entry must sit at its own code");
                return Some(value);
            }
        }
        None
    }

    fn root_bar() -> DecidableSet {
        chi("root-only", |s| s.is_zero())
    }

    fn length_bar(n: usize) -> DecidableSet {
        chi("length-bar", move |s| length_code(s) == n)
    }

    /// Hits the 0-branch at depth 1 and everything else at depth 2.
    fn lopsided_bar() -> DecidableSet {
        chi("lopsided", |s| {
            let items = decode(s);
            (items.len() == 1 && items.items()[0] == nat(0))
                || (items.len() == 2 && items.items()[0] != nat(0))
        })
    }

    #[test]
    fn first_hit_of_root_bar_is_constantly_zero() {
        let phi = first_hit_fn(&root_bar(), &CSSet::cantor());
        for m in 0..6 {
            let alpha = CSSet::cantor().member_u64(m);
            assert_eq!(eval_at(&phi, &alpha, 5), Some(nat(0)));
        }
    }

    #[test]
    fn first_hit_of_uniform_bar_is_constant_depth() {
        let f = CSSet::cantor();
        let phi = first_hit_fn(&length_bar(3), &f);
        for m in 0..8 {
            assert_eq!(eval_at(&phi, &f.member_u64(m), 6), Some(nat(3)));
        }
    }

    #[test]
    fn first_hit_distinguishes_branches() {
        let f = CSSet::cantor();
        let phi = first_hit_fn(&lopsided_bar(), &f);
        assert_eq!(eval_at(&phi, &f.member_u64(0), 6), Some(nat(1)));
        assert_eq!(eval_at(&phi, &f.member_u64(1), 6), Some(nat(2)));
        assert_eq!(eval_at(&phi, &f.member_u64(3), 6), Some(nat(2)));
    }

    #[test]
    fn first_hit_graph_entries_are_incomparable() {
        let phi = first_hit_fn(&lopsided_bar(), &CSSet::cantor());
        let mut entries = Vec::new();
        for raw in 0u64..3000 {
            let v = phi.query_u64(raw).unwrap();
            if !v.is_zero() {
                let (dom, value) = unpair(&(v - Nat::one()));
                entries.push((dom, value));
            }
        }
        assert!(entries.len() >= 3);
        for (i, (s, _)) in entries.iter().enumerate() {
            for (t, _) in entries.iter().skip(i + 1) {
                assert!(
                    !is_initial(s, t) && !is_initial(t, s),
                    "comparable graph domains {s} and {t}"
                );
            }
        }
    }

    #[test]
    fn descent_stages_drop_by_one() {
        let f = CSSet::cantor();
        let phi = dini_build(&length_bar(3), &f);
        for m in 0..8 {
            let alpha = f.member_u64(m);
            let values: Vec<Nat> = (0u64..5)
                .map(|n| eval_at(&project(&phi, &nat(n)), &alpha, 6).unwrap())
                .collect();
            assert_eq!(values, vec![nat(3), nat(2), nat(1), nat(0), nat(0)]);
        }
    }

    #[test]
    fn descent_on_root_bar_starts_at_zero() {
        let f = CSSet::cantor();
        let phi = dini_build(&root_bar(), &f);
        let stage0 = project(&phi, &nat(0));
        for m in 0..4 {
            assert_eq!(eval_at(&stage0, &f.member_u64(m), 4), Some(nat(0)));
        }
    }

    #[test]
    fn descent_on_mixed_bar_reaches_zero_at_the_deep_branch_late() {
        // Hits the 0-branch at depth 1, the rest at depth 4.
        let beta = chi("mixed", |s| {
            let items = decode(s);
            (items.len() == 1 && items.items()[0] == nat(0))
                || (items.len() == 4 && items.items()[0] != nat(0))
        });
        let f = CSSet::cantor();
        let phi = dini_build(&beta, &f);
        let deep = f.member_u64(1);
        assert_eq!(eval_at(&project(&phi, &nat(3)), &deep, 8), Some(nat(1)));
        assert_eq!(eval_at(&project(&phi, &nat(4)), &deep, 8), Some(nat(0)));
        let shallow = f.member_u64(0);
        assert_eq!(eval_at(&project(&phi, &nat(4)), &shallow, 8), Some(nat(0)));
    }

    #[test]
    fn staged_indicators_flip_exactly_at_the_bar_depth() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 40), 4).unwrap();
        let phi = dini_counterexample(&length_bar(5), &manifest, 4).unwrap();
        let f = CSSet::cantor();
        for m in 0..6 {
            let alpha = f.member_u64(m);
            let at = |n: u64| eval_at(&project(&phi, &nat(n)), &alpha, 8).unwrap();
            assert_eq!(at(4), nat(1));
            assert_eq!(at(5), nat(0));
            assert_eq!(at(6), nat(0));
        }
    }

    #[test]
    fn staged_rejects_the_root_bar() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 40), 3).unwrap();
        let err = dini_counterexample(&root_bar(), &manifest, 3).unwrap_err();
        assert_eq!(err, CsetError::PositiveFailureViolated { level: 0 });
    }

    #[test]
    fn staged_rejects_a_full_level() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 40), 3).unwrap();
        let err = dini_counterexample(&length_bar(2), &manifest, 3).unwrap_err();
        assert_eq!(err, CsetError::PositiveFailureViolated { level: 2 });
    }

    #[test]
    fn staged_entries_sit_on_frame_codes_of_their_stage() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 40), 4).unwrap();
        let phi = dini_counterexample(&length_bar(5), &manifest, 4).unwrap();
        let stage2 = project(&phi, &nat(2));
        let mut nonzero = 0;
        for raw in 0u64..200 {
            let v = stage2.query_u64(raw).unwrap();
            if v.is_zero() {
                continue;
            }
            nonzero += 1;
            let (dom, indicator) = unpair(&(v - Nat::one()));
            assert_eq!(length_code(&dom), 2);
            assert!(decode(&dom).is_binary());
            assert_eq!(indicator, nat(1));
        }
        assert_eq!(nonzero, 4, "four binary codes of length 2");
    }
}

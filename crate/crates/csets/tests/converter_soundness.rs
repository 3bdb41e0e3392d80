//! Cross-checks between the bar format converters, the length-bounded
//! subbar, and the staged counting functions, all evaluated along family
//! members through the public API.

use csets::{
    bar_check, bounded_subbar, dini_build, enum_bar_to_dec_bar, first_hit_fn, BarSet, CSSet,
};
use seqcode::{decode, length_code, nat, pair, prefix, unpair, Nat, SeqCode};
use streams::{oracle_prefix, DecidableSet, EnumerableSet, SeqOracle};

/// The four binary codes of length two, enumerated in one pass.
fn length_two_binary_enum() -> EnumerableSet {
    let table: Vec<Nat> = [2u64, 5, 8, 17].iter().map(|c| nat(c + 1)).collect();
    EnumerableSet::new(SeqOracle::from_table(table, nat(0)))
}

fn chi(name: &str, f: impl Fn(&SeqCode) -> bool + Send + Sync + 'static) -> DecidableSet {
    let name = name.to_string();
    DecidableSet::new(SeqOracle::from_rule(name, move |s| {
        Nat::from(u8::from(f(s)))
    }))
}

/// Evaluates a graph-enumeration oracle on a path by walking prefixes until
/// the graph fires. Returns the firing depth and the carried value.
fn eval_graph(phi: &SeqOracle, alpha: &SeqOracle, max_len: usize) -> (usize, Nat) {
    for k in 0..=max_len {
        let q = oracle_prefix(alpha, k).unwrap();
        let v = phi.query(&q).unwrap();
        if v != nat(0) {
            let (dom, val) = unpair(&(v - nat(1)));
            assert_eq!(dom, q, "graph entry must repeat its own position");
            return (k, val);
        }
    }
    panic!("graph never fired within {max_len} prefixes");
}

/// Same walk against one projection of a staged graph.
fn eval_staged(phi: &SeqOracle, stage: u64, alpha: &SeqOracle, max_len: usize) -> (usize, Nat) {
    let n = nat(stage);
    for k in 0..=max_len {
        let q = oracle_prefix(alpha, k).unwrap();
        let v = phi.query(&pair(&n, &q)).unwrap();
        if v != nat(0) {
            let (dom, val) = unpair(&(v - nat(1)));
            assert_eq!(dom, q, "graph entry must repeat its own position");
            return (k, val);
        }
    }
    panic!("stage {stage} never fired within {max_len} prefixes");
}

#[test]
fn converted_bar_still_bars_the_binary_family() {
    let beta = enum_bar_to_dec_bar(&length_two_binary_enum());
    let report = bar_check(&CSSet::cantor(), &BarSet::from(beta), 16, 8, 8).unwrap();
    assert!(report.all_hit());
    assert_eq!(report.hits, 16);
    assert_eq!(report.exhausted, 0);
    // Members opening with two ones only clear the enumeration-position
    // constraint one step later than everyone else.
    assert_eq!(report.max_hit_depth, Some(4));
    for verdict in &report.verdicts {
        let depth = verdict.hit.as_ref().unwrap().depth;
        assert!(depth == 3 || depth == 4, "member {} hit at {}", verdict.member, depth);
    }
}

#[test]
fn converted_membership_matches_budgeted_enumeration_search() {
    let gamma = length_two_binary_enum();
    let beta = enum_bar_to_dec_bar(&gamma);
    // Along family members: a prefix is in the decided bar exactly when one
    // of its strict initial parts turns up within the first length(s)
    // enumeration positions.
    let f = CSSet::cantor();
    for m in 0..16u64 {
        let member = f.member_u64(m);
        for n in 0..=8usize {
            let s = oracle_prefix(&member, n).unwrap();
            let direct = (0..n).any(|k| {
                let part = prefix(&s, k).unwrap();
                gamma.member_within(&part, n).unwrap().found()
            });
            assert_eq!(
                beta.contains(&s).unwrap(),
                direct,
                "member {m} depth {n}"
            );
        }
    }
    // The same biconditional over an unsampled stretch of raw codes.
    for raw in 0..=400u64 {
        let s = nat(raw);
        let len = length_code(&s);
        let direct = (0..len).any(|k| {
            let part = prefix(&s, k).unwrap();
            gamma.member_within(&part, len).unwrap().found()
        });
        assert_eq!(beta.contains(&s).unwrap(), direct, "code {raw}");
    }
}

#[test]
fn bounded_subbar_samples_the_defining_equivalence() {
    // X holds the length-three codes; its bounded subbar Y must satisfy
    // ᾱn ∈ X iff ᾱ(ᾱn) ∈ Y along every member α.
    let x = chi("length-three", |s| length_code(s) == 3);
    let y = bounded_subbar(&x);
    let f = CSSet::cantor();
    for m in 0..16u64 {
        let member = f.member_u64(m);
        for n in 0..=8usize {
            let s = oracle_prefix(&member, n).unwrap();
            let u = usize::try_from(&s).unwrap();
            let t = oracle_prefix(&member, u).unwrap();
            let in_x = x.contains(&s).unwrap();
            assert_eq!(in_x, n == 3, "member {m} depth {n}");
            assert_eq!(
                in_x,
                y.contains(&t).unwrap(),
                "member {m} depth {n} (re-read length {u})"
            );
        }
    }
}

/// Members of the binary family meet this bar once they carry two ones or
/// reach depth five, whichever comes first.
fn weight_bar() -> DecidableSet {
    chi("weight-two-or-depth-five", |s| {
        let items = decode(s);
        let weight: Nat = items.items().iter().sum();
        weight >= nat(2) || items.len() >= 5
    })
}

/// Least prefix length at which the member meets the decided set.
fn least_hit(beta: &DecidableSet, alpha: &SeqOracle, max_len: usize) -> usize {
    (0..=max_len)
        .find(|&n| {
            let s = oracle_prefix(alpha, n).unwrap();
            beta.contains(&s).unwrap()
        })
        .expect("the bar must be met within the scan range")
}

#[test]
fn first_hit_agrees_with_a_direct_least_hit_scan() {
    let beta = weight_bar();
    let f = CSSet::cantor();
    let phi = first_hit_fn(&beta, &f);
    for m in 0..32u64 {
        let member = f.member_u64(m);
        let expected = least_hit(&beta, &member, 8);
        let (fired_at, value) = eval_graph(&phi, &member, 8);
        assert_eq!(fired_at, expected, "member {m}");
        assert_eq!(value, nat(expected as u64), "member {m}");
    }
}

#[test]
fn descent_stages_drop_by_one_and_vanish_at_the_hit() {
    let beta = weight_bar();
    let f = CSSet::cantor();
    let phi = dini_build(&beta, &f);
    for m in 0..16u64 {
        let member = f.member_u64(m);
        let h = least_hit(&beta, &member, 8);
        let mut previous: Option<Nat> = None;
        for stage in 0..=7u64 {
            let (fired_at, value) = eval_staged(&phi, stage, &member, 8);
            assert_eq!(fired_at, h, "member {m} stage {stage}");
            let expected = (h as u64).saturating_sub(stage);
            assert_eq!(value, nat(expected), "member {m} stage {stage}");
            if let Some(prev) = previous {
                assert!(value <= prev, "member {m}: stages must not increase");
            }
            assert_eq!(value == nat(0), stage >= h as u64, "member {m} stage {stage}");
            previous = Some(value);
        }
    }
}

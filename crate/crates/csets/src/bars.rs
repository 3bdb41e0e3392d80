//! Bars over a family and the conversions between their presentations.
//!
//! A bar for this crate is a set of prefix codes met by every member path.
//! That property is not decidable, so [`bar_check`] samples the dense family
//! to a depth and reports per-path hits, [`finite_subbar_bruteforce`] settles
//! the question exhaustively on a fan up to a depth cap, and the converters
//! [`enum_bar_to_dec_bar`] and [`bounded_subbar`] rewrite a bar between its
//! enumerated and decided presentations without losing the barring property.

use std::collections::BTreeSet;

use num_traits::{One, Pow, Zero};
use seqcode::{decode, prime, FinSeq, Nat, SeqCode};
use streams::{oracle_prefix, DecidableSet, EnumerableSet, SeqOracle, StreamError};

use crate::{CsetError, CSSet, ManifestFan, WALK_NODE_CAP};

/// A bar given in either presentation.
#[derive(Debug, Clone)]
pub enum BarSet {
    Decided(DecidableSet),
    Enumerated(EnumerableSet),
}

impl BarSet {
    /// Whether `s` is recognized as a bar element: decided membership
    /// directly, enumerated membership within the scan budget.
    pub fn hits(&self, s: &SeqCode, budget: usize) -> Result<bool, StreamError> {
        match self {
            BarSet::Decided(d) => d.contains(s),
            BarSet::Enumerated(e) => Ok(e.member_within(s, budget)?.found()),
        }
    }
}

impl From<DecidableSet> for BarSet {
    fn from(d: DecidableSet) -> Self {
        BarSet::Decided(d)
    }
}

impl From<EnumerableSet> for BarSet {
    fn from(e: EnumerableSet) -> Self {
        BarSet::Enumerated(e)
    }
}

/// First bar hit on one sampled path.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BarHit {
    /// Least prefix length whose code lies in the bar.
    pub depth: usize,
    /// Decimal rendering of that prefix code.
    pub prefix: String,
}

/// Outcome for one sampled member path.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PathVerdict {
    /// Index of the member in the dense family.
    pub member: u64,
    /// The first hit, or None when every prefix up to the depth missed.
    pub hit: Option<BarHit>,
}

/// Sampled evidence that a set of codes bars a family.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BarReport {
    pub samples: u64,
    pub depth: usize,
    pub budget: usize,
    pub hits: u64,
    pub exhausted: u64,
    /// Largest first-hit depth over the sampled paths, when any path hit.
    pub max_hit_depth: Option<usize>,
    pub verdicts: Vec<PathVerdict>,
}

impl BarReport {
    /// Whether every sampled path met the bar within the depth.
    pub fn all_hit(&self) -> bool {
        self.exhausted == 0
    }
}

/// Samples the first `samples` members of the family and records, for each,
/// the least prefix length at most `depth` whose code the bar recognizes.
/// Exhaustion on a path is evidence of nothing: an enumerated bar may simply
/// need a larger budget.
pub fn bar_check(
    f: &CSSet,
    bar: &BarSet,
    samples: u64,
    depth: usize,
    budget: usize,
) -> Result<BarReport, StreamError> {
    let mut verdicts = Vec::with_capacity(samples as usize);
    let mut hits = 0u64;
    let mut max_hit_depth = None;
    for m in 0..samples {
        let path = f.member_u64(m);
        let mut hit = None;
        for n in 0..=depth {
            let prefix = oracle_prefix(&path, n)?;
            if bar.hits(&prefix, budget)? {
                hit = Some(BarHit {
                    depth: n,
                    prefix: prefix.to_string(),
                });
                hits += 1;
                max_hit_depth = max_hit_depth.max(Some(n));
                break;
            }
        }
        verdicts.push(PathVerdict { member: m, hit });
    }
    Ok(BarReport {
        samples,
        depth,
        budget,
        hits,
        exhausted: samples - hits,
        max_hit_depth,
        verdicts,
    })
}

/// Codes of the prefixes of `items`, shortest first: entry i codes the first
/// i items. One running product replaces repeated re-encoding, so the whole
/// chain costs little more than the final code.
fn prefix_codes(items: &FinSeq) -> Vec<Nat> {
    let mut out = Vec::with_capacity(items.len() + 1);
    out.push(Nat::zero());
    let mut product = Nat::one();
    for (i, item) in items.items().iter().enumerate() {
        let p = Nat::from(prime(i));
        let exp = u32::try_from(item).expect("decoded items stay far below u32::MAX");
        product *= Pow::pow(&p, exp);
        out.push(&product * &p - Nat::one());
    }
    out
}

/// Turns an enumerated bar into a decided one: β(s) = 1 exactly when some
/// prefix of s strictly shorter than s is enumerated by γ at a position
/// below length(s). If the enumeration bars the family, the decided set
/// still does, because along any member path both the enumeration position
/// and the hit prefix eventually fall below the prefix length.
pub fn enum_bar_to_dec_bar(gamma: &EnumerableSet) -> DecidableSet {
    let en = gamma.enumerator().clone();
    let name = format!("decided({})", en.name());
    let chi = SeqOracle::from_fallible_rule(name, move |s| {
        let items = decode(s);
        let len = items.len();
        // Only prefixes of length k < length(s) qualify.
        let prefixes: BTreeSet<Nat> = prefix_codes(&items).into_iter().take(len).collect();
        for j in 0..len {
            let v = en.query_u64(j as u64)?;
            if !v.is_zero() && prefixes.contains(&(v - Nat::one())) {
                return Ok(Nat::one());
            }
        }
        Ok(Nat::zero())
    });
    DecidableSet::new(chi)
}

/// Rewrites a decided set X of codes into the decided set
/// Y = { s : some prefix of s equals length(s) and lies in X }.
/// Along any member path α, the prefix of length n lies in X exactly when
/// the prefix of length ᾱn lies in Y, which lets a bar recognize its own
/// hit depth from the shape of a longer prefix.
pub fn bounded_subbar(x: &DecidableSet) -> DecidableSet {
    let inner = x.clone();
    let name = format!("length-marked({})", x.chi().name());
    let chi = SeqOracle::from_fallible_rule(name, move |s| {
        let items = decode(s);
        let len = Nat::from(items.len());
        let mut product = Nat::one();
        let mut code = Nat::zero();
        for i in 0..items.len() {
            // code holds the prefix of length i; the chain is strictly
            // increasing, so past length(s) nothing can match any more.
            if code > len {
                break;
            }
            if code == len && inner.contains(&code)? {
                return Ok(Nat::one());
            }
            let p = Nat::from(prime(i));
            let exp =
                u32::try_from(&items.items()[i]).expect("decoded items stay far below u32::MAX");
            product *= Pow::pow(&p, exp);
            code = &product * &p - Nat::one();
        }
        Ok(Nat::zero())
    });
    DecidableSet::new(chi)
}

/// Result of the exhaustive fan walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubbarOutcome {
    /// Every branch of the fan hits the bar by the depth cap; the set holds
    /// the minimal-hit prefixes, a finite subset of the bar barring the fan.
    Subbar(BTreeSet<SeqCode>),
    /// An admissible prefix of depth-cap length with no initial part in the
    /// bar; the walked region does not certify a finite subbar.
    Survivor(SeqCode),
}

/// Walks the whole fan tree, leftmost branch first, stopping each branch at
/// its first bar hit. Either every branch hits by `depth_cap` and the
/// minimal hit prefixes come back as a finite subbar, or the leftmost
/// surviving prefix is returned as the counterexample.
pub fn finite_subbar_bruteforce(
    fan: &ManifestFan,
    bar: &DecidableSet,
    depth_cap: usize,
) -> Result<SubbarOutcome, CsetError> {
    let spread = fan.fan().spread();
    let width = fan.fan().width();
    let root = Nat::zero();
    if !spread.admits(&root)? {
        return Ok(SubbarOutcome::Subbar(BTreeSet::new()));
    }
    let mut subbar = BTreeSet::new();
    let mut stack = vec![(root, 0usize)];
    let mut visited = 0usize;
    while let Some((s, depth)) = stack.pop() {
        visited += 1;
        if visited > WALK_NODE_CAP {
            return Err(CsetError::WalkBudget { nodes: visited });
        }
        if bar.contains(&s)? {
            subbar.insert(s);
            continue;
        }
        if depth == depth_cap {
            return Ok(SubbarOutcome::Survivor(s));
        }
        let items = decode(&s);
        // Reverse push so the smallest item pops first.
        for k in (0..width).rev() {
            let child = seqcode::encode(&items.append(Nat::from(k)));
            if spread.admits(&child)? {
                stack.push((child, depth + 1));
            }
        }
    }
    Ok(SubbarOutcome::Subbar(subbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fan_manifest, Fan};
    use seqcode::{encode, length_code, nat};

    fn code(items: &[u64]) -> SeqCode {
        encode(&FinSeq::from_u64s(items))
    }

    fn length_two_binary_enum() -> EnumerableSet {
        let table: Vec<Nat> = [2u64, 5, 8, 17].iter().map(|c| nat(c + 1)).collect();
        EnumerableSet::new(SeqOracle::from_table(table, nat(0)))
    }

    #[test]
    fn root_bar_hits_everything_at_depth_zero() {
        let bar: BarSet = DecidableSet::new(SeqOracle::from_rule("root-only", |s| {
            Nat::from(u8::from(s.is_zero()))
        }))
        .into();
        let report = bar_check(&CSSet::cantor(), &bar, 6, 4, 10).unwrap();
        assert!(report.all_hit());
        assert_eq!(report.max_hit_depth, Some(0));
        assert!(report.verdicts.iter().all(|v| v.hit.as_ref().unwrap().depth == 0));
    }

    #[test]
    fn length_three_bar_hits_cantor_at_depth_three() {
        let bar: BarSet = DecidableSet::new(SeqOracle::from_rule("length-3", |s| {
            Nat::from(u8::from(length_code(s) == 3))
        }))
        .into();
        let report = bar_check(&CSSet::cantor(), &bar, 8, 5, 10).unwrap();
        assert!(report.all_hit());
        assert_eq!(report.max_hit_depth, Some(3));
        for v in &report.verdicts {
            assert_eq!(v.hit.as_ref().unwrap().depth, 3);
        }
    }

    #[test]
    fn empty_bar_exhausts_every_sample() {
        let bar: BarSet = EnumerableSet::new(SeqOracle::zero()).into();
        let report = bar_check(&CSSet::cantor(), &bar, 5, 4, 16).unwrap();
        assert_eq!(report.hits, 0);
        assert_eq!(report.exhausted, 5);
        assert_eq!(report.max_hit_depth, None);
    }

    #[test]
    fn report_serialization_is_stable() {
        let bar: BarSet = DecidableSet::new(SeqOracle::from_rule("root-only", |s| {
            Nat::from(u8::from(s.is_zero()))
        }))
        .into();
        let report = bar_check(&CSSet::constant_zero(), &bar, 1, 1, 4).unwrap();
        let a = serde_json::to_string(&report).unwrap();
        let b = serde_json::to_string(&report).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"member\":0"));
    }

    #[test]
    fn prefix_codes_match_reencoding() {
        for raw in 0u64..600 {
            let s = nat(raw);
            let items = decode(&s);
            let chain = prefix_codes(&items);
            assert_eq!(chain.len(), items.len() + 1);
            for (i, got) in chain.iter().enumerate() {
                assert_eq!(*got, seqcode::prefix(&s, i).unwrap(), "code {raw} prefix {i}");
            }
        }
    }

    #[test]
    fn decided_bar_from_root_enumeration() {
        // γ enumerates only ⟨⟩, so β marks exactly the nonempty codes.
        let gamma = EnumerableSet::new(SeqOracle::constant("root", nat(1)));
        let beta = enum_bar_to_dec_bar(&gamma);
        for raw in 0u64..200 {
            let s = nat(raw);
            let want = length_code(&s) >= 1;
            assert_eq!(beta.contains(&s).unwrap(), want, "code {raw}");
        }
    }

    #[test]
    fn decided_bar_from_empty_enumeration_is_empty() {
        let beta = enum_bar_to_dec_bar(&EnumerableSet::new(SeqOracle::zero()));
        for raw in 0u64..200 {
            assert!(!beta.contains(&nat(raw)).unwrap());
        }
    }

    #[test]
    fn decided_bar_from_length_two_enumeration() {
        let beta = enum_bar_to_dec_bar(&length_two_binary_enum());
        // Independent evaluation of the defining property: the enumerated
        // code must be an initial part of s, strictly shorter than s, and
        // its enumeration position must also fall below length(s).
        let gamma_vals = [nat(2), nat(5), nat(8), nat(17)];
        for raw in 0u64..=5000 {
            let s = nat(raw);
            let len = length_code(&s);
            let want = gamma_vals
                .iter()
                .enumerate()
                .any(|(j, gv)| j < len && length_code(gv) < len && seqcode::is_initial(gv, &s));
            assert_eq!(beta.contains(&s).unwrap(), want, "code {raw}");
        }
        // Frozen boundary cases: a binary pair enumerated early is seen from
        // length 3 on, the pair at the last position only from length 4 on.
        assert!(beta.contains(&code(&[0, 0, 0])).unwrap());
        assert!(!beta.contains(&code(&[1, 1, 1])).unwrap());
        assert!(beta.contains(&code(&[1, 1, 1, 1])).unwrap());
        assert!(!beta.contains(&code(&[0, 0])).unwrap());
    }

    #[test]
    fn bounded_subbar_of_empty_is_empty() {
        let x = DecidableSet::new(SeqOracle::zero());
        let y = bounded_subbar(&x);
        for raw in 0u64..300 {
            assert!(!y.contains(&nat(raw)).unwrap());
        }
    }

    #[test]
    fn bounded_subbar_of_root_is_empty() {
        // X = {⟨⟩}: a prefix equal to 0 has length 0, never the length of a
        // longer code, so no code qualifies.
        let x = DecidableSet::new(SeqOracle::from_rule("root-only", |s| {
            Nat::from(u8::from(s.is_zero()))
        }));
        let y = bounded_subbar(&x);
        for raw in 0u64..=2000 {
            assert!(!y.contains(&nat(raw)).unwrap(), "code {raw}");
        }
    }

    #[test]
    fn bounded_subbar_matches_naive_definition() {
        // X = all codes of length 1.
        let x = DecidableSet::new(SeqOracle::from_rule("length-1", |s| {
            Nat::from(u8::from(length_code(s) == 1))
        }));
        let y = bounded_subbar(&x);
        for raw in 0u64..=2000 {
            let s = nat(raw);
            let len = length_code(&s);
            let mut want = false;
            for i in 0..len {
                let part = seqcode::prefix(&s, i).unwrap();
                if part == Nat::from(len) && length_code(&part) == 1 {
                    want = true;
                }
            }
            assert_eq!(y.contains(&s).unwrap(), want, "code {raw}");
        }
    }

    #[test]
    fn subbar_walk_finds_the_four_pairs() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 30), 4).unwrap();
        let bar = DecidableSet::new(SeqOracle::from_rule("length-2", |s| {
            Nat::from(u8::from(length_code(s) == 2))
        }));
        let got = finite_subbar_bruteforce(&manifest, &bar, 4).unwrap();
        let want: BTreeSet<SeqCode> = [code(&[0, 0]), code(&[1, 0]), code(&[0, 1]), code(&[1, 1])]
            .into_iter()
            .collect();
        assert_eq!(got, SubbarOutcome::Subbar(want));
    }

    #[test]
    fn subbar_walk_survives_the_empty_bar() {
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 30), 4).unwrap();
        let bar = DecidableSet::new(SeqOracle::zero());
        let got = finite_subbar_bruteforce(&manifest, &bar, 3).unwrap();
        assert_eq!(got, SubbarOutcome::Survivor(code(&[0, 0, 0])));
    }

    #[test]
    fn subbar_walk_reports_leftmost_gap() {
        // Bar everything except prefixes of the all-ones branch.
        let bar = DecidableSet::new(SeqOracle::from_rule("miss-ones", |s| {
            let items = decode(s);
            let all_ones = items.items().iter().all(|m| *m == nat(1));
            Nat::from(u8::from(!items.is_empty() && !all_ones))
        }));
        let manifest = fan_manifest(&Fan::cantor(), &nat(1u64 << 30), 4).unwrap();
        let got = finite_subbar_bruteforce(&manifest, &bar, 4).unwrap();
        assert_eq!(got, SubbarOutcome::Survivor(code(&[1, 1, 1, 1])));
    }
}

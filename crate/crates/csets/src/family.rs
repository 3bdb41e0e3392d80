//! Closed-and-separable families and the frame correspondence.
//!
//! A family is carried by one generator oracle `gen`; member `m` is the
//! projection `project(gen, m)`, so the members form a countable dense
//! sequence of paths. The frame of the family is the set of all finite
//! prefixes its members pass through, and the two directions of the
//! correspondence are `frame_enum` (family to enumerated frame) and
//! `cs_from_frame` (enumerated frame back to a family).

use std::collections::BTreeSet;

use seqcode::{decode, is_initial, length_code, unpair, Nat, SeqCode};
use streams::{oracle_prefix, project, EnumerableSet, Search, SeqOracle, StreamError};

use crate::CsetError;

/// A closed-and-separable subset of Baire space, presented by the generator
/// of its dense member family.
#[derive(Debug, Clone)]
pub struct CSSet {
    gen: SeqOracle,
}

impl CSSet {
    /// Wraps a generator oracle. Member `m` of the family answers
    /// `gen(pair(m, i))` at position `i`.
    pub fn new(gen: SeqOracle) -> Self {
        CSSet { gen }
    }

    pub fn gen(&self) -> &SeqOracle {
        &self.gen
    }

    /// The m-th member path of the dense family.
    pub fn member(&self, m: &Nat) -> SeqOracle {
        project(&self.gen, m)
    }

    pub fn member_u64(&self, m: u64) -> SeqOracle {
        self.member(&Nat::from(m))
    }

    /// Semi-decides whether some member passes through the prefix coded by
    /// `s`, scanning members `m < budget`.
    pub fn admits(&self, s: &SeqCode, budget: usize) -> Result<Search, StreamError> {
        let depth = length_code(s);
        for m in 0..budget {
            let member = self.member_u64(m as u64);
            if oracle_prefix(&member, depth)? == *s {
                return Ok(Search::Found {
                    witness: Nat::from(m),
                });
            }
        }
        Ok(Search::Unknown)
    }

    /// The distinct depth-`n` prefixes of the first `budget` members.
    pub fn prefix_family(&self, depth: usize, budget: usize) -> Result<BTreeSet<SeqCode>, StreamError> {
        let mut out = BTreeSet::new();
        for m in 0..budget {
            out.insert(oracle_prefix(&self.member_u64(m as u64), depth)?);
        }
        Ok(out)
    }

    /// All binary paths: member `m` reads off the binary digits of `m`, so
    /// every finite binary prefix occurs among the first 2^depth members.
    pub fn cantor() -> Self {
        let gen = SeqOracle::from_rule("cantor", |k| {
            let (m, i) = unpair(k);
            match i.try_into() {
                Ok(bit) => Nat::from(u8::from(m.bit(bit))),
                // Positions beyond u64 range lie past every set bit of m.
                Err(_) => Nat::from(0u32),
            }
        });
        CSSet::new(gen)
    }

    /// The singleton family holding only the constant-zero path.
    pub fn constant_zero() -> Self {
        CSSet::new(SeqOracle::zero())
    }

    /// Paths that are eventually zero: member `m` plays the decoded items of
    /// `m` and then zeros forever.
    pub fn eventually_zero() -> Self {
        let gen = SeqOracle::from_rule("eventually_zero", |k| {
            let (m, i) = unpair(k);
            let items = decode(&m);
            match usize::try_from(&i) {
                Ok(idx) => items.get(idx).cloned().unwrap_or_default(),
                Err(_) => Nat::from(0u32),
            }
        });
        CSSet::new(gen)
    }
}

/// Enumerates the frame of a family: position pair(m, n) carries the code of
/// the length-n prefix of member m, shifted up by one so that zero still
/// means "nothing enumerated here".
pub fn frame_enum(f: &CSSet) -> EnumerableSet {
    let gen = f.gen().clone();
    let name = format!("frame({})", gen.name());
    let en = SeqOracle::from_fallible_rule(name, move |k| {
        let (m, n) = unpair(k);
        let depth = usize::try_from(&n).map_err(|_| StreamError::BudgetExhausted {
            name: format!("frame({})", gen.name()),
            index: k.clone(),
        })?;
        let member = project(&gen, &m);
        Ok(oracle_prefix(&member, depth)? + Nat::from(1u32))
    });
    EnumerableSet::new(en)
}

/// Rebuilds a family from an enumerated frame.
///
/// Member n starts at the prefix enumerated at position n (at the first
/// nonzero position, or at the supplied hint, when position n holds zero)
/// and then repeatedly extends to the code at the least enumeration position
/// holding an immediate prolongation of the current prefix. The extension
/// scan is capped at `budget` positions; a frame whose extension law fails
/// inside the scanned region surfaces as a budget error at query time rather
/// than a silently invented path.
pub fn cs_from_frame(
    frame: &EnumerableSet,
    hint: Option<SeqCode>,
    budget: usize,
) -> Result<CSSet, CsetError> {
    let en = frame.enumerator().clone();
    let root_fallback = match hint {
        Some(code) => code,
        None => first_enumerated(&en, budget)?,
    };
    let name = format!("cs({})", en.name());
    let gen = SeqOracle::from_fallible_rule(name.clone(), move |k| {
        let (n, i) = unpair(k);
        let target = usize::try_from(&i).map_err(|_| StreamError::BudgetExhausted {
            name: name.clone(),
            index: k.clone(),
        })?;
        // Root of member n: the prefix enumerated at position n if any,
        // otherwise the located inhabitant.
        let at_n = value_at(&en, &n)?;
        let mut current = match at_n {
            Some(code) => code,
            None => root_fallback.clone(),
        };
        while length_code(&current) <= target {
            current = least_prolongation(&en, &current, budget).ok_or_else(|| {
                StreamError::BudgetExhausted {
                    name: name.clone(),
                    index: k.clone(),
                }
            })??;
        }
        let items = decode(&current);
        Ok(items.items()[target].clone())
    });
    Ok(CSSet::new(gen))
}

/// The code at the first nonzero enumeration position, if any.
fn first_enumerated(en: &SeqOracle, budget: usize) -> Result<SeqCode, CsetError> {
    for j in 0..budget {
        let v = en.query_u64(j as u64)?;
        if v != Nat::from(0u32) {
            return Ok(v - Nat::from(1u32));
        }
    }
    Err(CsetError::EmptyEnumeration { budget })
}

fn value_at(en: &SeqOracle, n: &Nat) -> Result<Option<SeqCode>, StreamError> {
    let v = en.query(n)?;
    if v == Nat::from(0u32) {
        Ok(None)
    } else {
        Ok(Some(v - Nat::from(1u32)))
    }
}

/// The code at the least enumeration position holding an immediate
/// prolongation of `s`, or None when the scan exhausts the budget.
fn least_prolongation(
    en: &SeqOracle,
    s: &SeqCode,
    budget: usize,
) -> Option<Result<SeqCode, StreamError>> {
    let want_len = length_code(s) + 1;
    for k in 0..budget {
        let v = match en.query_u64(k as u64) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        if v == Nat::from(0u32) {
            continue;
        }
        let code = v - Nat::from(1u32);
        if length_code(&code) == want_len && is_initial(s, &code) {
            return Some(Ok(code));
        }
    }
    None
}

/// Outcome of a positive-failure scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// A depth-length member prefix none of whose initial parts lies in the
    /// finite set.
    Avoiding(SeqCode),
    /// Every member prefix seen in the scan had an initial part in the set.
    AllBarred { distinct_prefixes: usize },
}

/// Searches the first `scan_budget` members for a depth-`depth` prefix that
/// avoids the finite set `b_finite` at every initial part. Finding one
/// witnesses that `b_finite` positively fails to bar the family; the subsets
/// of the frame reachable past the scan stay unexamined, so `AllBarred` is
/// exhaustive only when the scanned members cover all depth-`depth` prefixes.
pub fn positive_failure_witness(
    f: &CSSet,
    b_finite: &BTreeSet<SeqCode>,
    depth: usize,
    scan_budget: usize,
) -> Result<WitnessOutcome, StreamError> {
    let mut seen = BTreeSet::new();
    for m in 0..scan_budget {
        let member = f.member_u64(m as u64);
        let full = oracle_prefix(&member, depth)?;
        if !seen.insert(full.clone()) {
            continue;
        }
        let mut barred = false;
        for i in 0..=depth {
            let part = seqcode::prefix(&full, i).expect("prefix length within the decoded length");
            if b_finite.contains(&part) {
                barred = true;
                break;
            }
        }
        if !barred {
            return Ok(WitnessOutcome::Avoiding(full));
        }
    }
    Ok(WitnessOutcome::AllBarred {
        distinct_prefixes: seen.len(),
    })
}

/// Looks for two incompatible admissible extensions of `s`: member prefixes
/// one item longer than `s` that pass through `s` but differ at the new
/// item. Returns None when the first `budget` members give no such pair.
pub fn perfect_witness(
    f: &CSSet,
    s: &SeqCode,
    budget: usize,
) -> Result<Option<(SeqCode, SeqCode)>, StreamError> {
    let len = length_code(s);
    let mut first: Option<SeqCode> = None;
    for m in 0..budget {
        let member = f.member_u64(m as u64);
        if oracle_prefix(&member, len)? != *s {
            continue;
        }
        let ext = oracle_prefix(&member, len + 1)?;
        match &first {
            None => first = Some(ext),
            Some(t) if *t != ext => {
                debug_assert!(seqcode::incompatible(t, &ext));
                return Ok(Some((t.clone(), ext)));
            }
            Some(_) => {}
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqcode::{encode, nat, pair, FinSeq};

    fn code(items: &[u64]) -> SeqCode {
        encode(&FinSeq::from_u64s(items))
    }

    #[test]
    fn frame_of_constant_zero_contains_zero_pairs() {
        let f = CSSet::constant_zero();
        let frame = frame_enum(&f);
        // ⟨⟩ sits at position pair(0,0) = 0.
        assert_eq!(frame.enumerator().query_u64(0).unwrap(), nat(1));
        // ⟨0,0⟩ = 2 is found within the first 20 positions.
        let hit = frame.member_within(&code(&[0, 0]), 20).unwrap();
        assert_eq!(
            hit,
            Search::Found {
                witness: pair(&nat(0), &nat(2))
            }
        );
    }

    #[test]
    fn frame_of_identity_generator_contains_projected_prefix() {
        let f = CSSet::new(SeqOracle::identity());
        let member_one = f.member_u64(1);
        let expected = oracle_prefix(&member_one, 1).unwrap();
        let frame = frame_enum(&f);
        assert!(frame.member_within(&expected, 20).unwrap().found());
    }

    #[test]
    fn cantor_family_reaches_every_binary_prefix() {
        let f = CSSet::cantor();
        let depth3 = f.prefix_family(3, 8).unwrap();
        assert_eq!(depth3.len(), 8);
        for s in &depth3 {
            assert!(decode(s).is_binary());
        }
    }

    #[test]
    fn binary_frame_rebuilds_cantor_prefixes() {
        // Enumerate the frame of all binary codes by listing each binary
        // code at its own position.
        let en = SeqOracle::from_rule("binary-codes", |k| {
            if decode(k).is_binary() {
                k + Nat::from(1u32)
            } else {
                Nat::from(0u32)
            }
        });
        let f = cs_from_frame(&EnumerableSet::new(en), None, 200).unwrap();
        let depth3 = f.prefix_family(3, 200).unwrap();
        let all_binary: BTreeSet<SeqCode> = (0u64..2)
            .flat_map(|a| (0u64..2).flat_map(move |b| (0u64..2).map(move |c| code(&[a, b, c]))))
            .collect();
        assert_eq!(depth3, all_binary);
    }

    #[test]
    fn zero_prefix_frame_rebuilds_the_singleton() {
        let en = SeqOracle::from_rule("zero-prefixes", |k| {
            if decode(k).items().iter().all(|m| *m == nat(0)) {
                k + Nat::from(1u32)
            } else {
                Nat::from(0u32)
            }
        });
        let f = cs_from_frame(&EnumerableSet::new(en), None, 64).unwrap();
        let depth4 = f.prefix_family(4, 40).unwrap();
        assert_eq!(depth4, [code(&[0, 0, 0, 0])].into_iter().collect());
    }

    #[test]
    fn depth_two_branching_tree_has_two_extensions() {
        // Frame with all branching at the root: the constant-zero and
        // constant-one branches.
        let en = SeqOracle::from_rule("two-branch", |k| {
            let items = decode(k);
            let constant = |v: u64| items.items().iter().all(|m| *m == nat(v));
            if constant(0) || constant(1) {
                k + Nat::from(1u32)
            } else {
                Nat::from(0u32)
            }
        });
        let f = cs_from_frame(&EnumerableSet::new(en), None, 2000).unwrap();
        let depth4 = f.prefix_family(4, 50).unwrap();
        assert_eq!(
            depth4,
            [code(&[0, 0, 0, 0]), code(&[1, 1, 1, 1])].into_iter().collect()
        );
    }

    #[test]
    fn empty_enumeration_is_rejected() {
        let f = cs_from_frame(&EnumerableSet::new(SeqOracle::zero()), None, 32);
        assert!(matches!(f, Err(CsetError::EmptyEnumeration { budget: 32 })));
    }

    #[test]
    fn positive_failure_empty_set_yields_zero_prefix() {
        let f = CSSet::cantor();
        let got = positive_failure_witness(&f, &BTreeSet::new(), 3, 1).unwrap();
        assert_eq!(got, WitnessOutcome::Avoiding(code(&[0, 0, 0])));
    }

    #[test]
    fn positive_failure_avoids_zero_branch() {
        let f = CSSet::cantor();
        let b: BTreeSet<SeqCode> = [code(&[0])].into_iter().collect();
        match positive_failure_witness(&f, &b, 3, 16).unwrap() {
            WitnessOutcome::Avoiding(s) => {
                let items = decode(&s);
                assert_eq!(items.len(), 3);
                assert_eq!(items.items()[0], nat(1));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn positive_failure_reports_fully_barred_depth() {
        let f = CSSet::cantor();
        let b: BTreeSet<SeqCode> = (0u64..2)
            .flat_map(|a| (0u64..2).map(move |b| code(&[a, b])))
            .collect();
        let got = positive_failure_witness(&f, &b, 2, 4).unwrap();
        assert_eq!(got, WitnessOutcome::AllBarred { distinct_prefixes: 4 });
    }

    #[test]
    fn perfect_witness_on_cantor_root() {
        let f = CSSet::cantor();
        let got = perfect_witness(&f, &nat(0), 4).unwrap();
        assert_eq!(got, Some((code(&[0]), code(&[1]))));
    }

    #[test]
    fn perfect_witness_unknown_on_singleton() {
        let f = CSSet::constant_zero();
        assert_eq!(perfect_witness(&f, &nat(0), 50).unwrap(), None);
    }

    #[test]
    fn perfect_witness_on_eventually_zero() {
        let f = CSSet::eventually_zero();
        let s = code(&[1]);
        let got = perfect_witness(&f, &s, 64).unwrap().expect("branching family");
        assert!(seqcode::incompatible(&got.0, &got.1));
        assert!(is_initial(&s, &got.0));
        assert!(is_initial(&s, &got.1));
    }
}

//! Infinite sequences α: ℕ → ℕ presented as deterministic, memoizing,
//! trace-recording oracles, plus the two standard presentations of subsets
//! of ℕ through such sequences: decidable sets (characteristic values) and
//! enumerable sets (n is a member iff some position enumerates n+1).
//!
//! Oracles are shareable and behave as-if-pure: concurrent duplicate
//! computation of an index is allowed, divergent answers are not.

use num_traits::{One, ToPrimitive, Zero};
use seqcode::{encode, pair, FinSeq, Nat, SeqCode};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Failures surfaced by oracle queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StreamError {
    /// A budgeted oracle ran out of budget while computing this index.
    #[error("oracle '{name}' exhausted its budget at index {index}")]
    BudgetExhausted { name: String, index: Nat },
    /// A value outside {0,1} appeared where a characteristic value is required.
    #[error("oracle '{name}' returned {value} at index {index}; expected 0 or 1")]
    NotBoolean {
        name: String,
        index: Nat,
        value: Nat,
    },
}

type Rule = Box<dyn Fn(&Nat) -> Result<Nat, StreamError> + Send + Sync>;

struct Inner {
    name: String,
    rule: Rule,
    memo: Mutex<HashMap<Nat, Nat>>,
    trace: Mutex<BTreeSet<Nat>>,
}

/// A total map ℕ → ℕ behind a memo and an inspectable query trace.
#[derive(Clone)]
pub struct SeqOracle {
    inner: Arc<Inner>,
}

impl fmt::Debug for SeqOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeqOracle({})", self.inner.name)
    }
}

impl SeqOracle {
    /// Wraps a total rule. The rule must be deterministic; the memo layer
    /// never changes an answer, it only avoids recomputation.
    pub fn from_rule<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&Nat) -> Nat + Send + Sync + 'static,
    {
        Self::from_fallible_rule(name, move |n| Ok(rule(n)))
    }

    /// Wraps a rule that may fail (budgeted wrappers around machine-generated
    /// oracles). Failures are not memoized; a later retry may succeed under a
    /// larger budget only if the rule itself is monotone in that budget.
    pub fn from_fallible_rule<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&Nat) -> Result<Nat, StreamError> + Send + Sync + 'static,
    {
        SeqOracle {
            inner: Arc::new(Inner {
                name: name.into(),
                rule: Box::new(rule),
                memo: Mutex::new(HashMap::new()),
                trace: Mutex::new(BTreeSet::new()),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    /// Answers a query, recording the index in the trace.
    pub fn query(&self, n: &Nat) -> Result<Nat, StreamError> {
        self.inner.trace.lock().unwrap().insert(n.clone());
        if let Some(v) = self.inner.memo.lock().unwrap().get(n) {
            return Ok(v.clone());
        }
        // Compute outside the lock: rules may re-enter this oracle.
        let v = (self.inner.rule)(n)?;
        let mut memo = self.inner.memo.lock().unwrap();
        if let Some(prev) = memo.get(n) {
            assert_eq!(
                prev, &v,
                "oracle '{}' answered index {} twice with different values",
                self.inner.name, n
            );
        } else {
            memo.insert(n.clone(), v.clone());
        }
        Ok(v)
    }

    /// Convenience query at a machine-sized index.
    pub fn query_u64(&self, n: u64) -> Result<Nat, StreamError> {
        self.query(&Nat::from(n))
    }

    /// Snapshot of every index queried so far (grows monotonically).
    pub fn trace(&self) -> BTreeSet<Nat> {
        self.inner.trace.lock().unwrap().clone()
    }

    /// Largest index queried so far, if any.
    pub fn trace_max(&self) -> Option<Nat> {
        self.inner.trace.lock().unwrap().iter().next_back().cloned()
    }

    /// Number of memoized answers.
    pub fn memo_len(&self) -> usize {
        self.inner.memo.lock().unwrap().len()
    }

    /// The constant-zero sequence.
    pub fn zero() -> Self {
        Self::constant("zero", Nat::zero())
    }

    /// A constant sequence.
    pub fn constant(name: impl Into<String>, value: Nat) -> Self {
        Self::from_rule(name, move |_| value.clone())
    }

    /// The identity sequence n ↦ n.
    pub fn identity() -> Self {
        Self::from_rule("identity", |n| n.clone())
    }

    /// Repeats a non-empty pattern forever.
    pub fn periodic(pattern: Vec<Nat>) -> Self {
        assert!(!pattern.is_empty(), "periodic oracle needs a pattern");
        let len = Nat::from(pattern.len());
        Self::from_rule(format!("periodic:{}", pattern.len()), move |n| {
            let idx = (n % &len).to_usize().expect("remainder fits");
            pattern[idx].clone()
        })
    }

    /// Finite table of initial values, then a constant tail.
    pub fn from_table(table: Vec<Nat>, tail: Nat) -> Self {
        Self::from_rule(format!("table:{}", table.len()), move |n| {
            match n.to_usize() {
                Some(i) if i < table.len() => table[i].clone(),
                _ => tail.clone(),
            }
        })
    }
}

/// Code of ⟨α(0), …, α(n−1)⟩, the length-n initial part of the oracle.
pub fn oracle_prefix(alpha: &SeqOracle, n: usize) -> Result<SeqCode, StreamError> {
    let mut items = Vec::with_capacity(n);
    for i in 0..n {
        items.push(alpha.query(&Nat::from(i))?);
    }
    Ok(encode(&FinSeq::new(items)))
}

/// The n-th slice of an oracle under the pairing function:
/// project(α,n)(m) = α(pair(n,m)). Lazy view sharing α's memo.
pub fn project(alpha: &SeqOracle, n: &Nat) -> SeqOracle {
    let base = alpha.clone();
    let n = n.clone();
    SeqOracle::from_fallible_rule(format!("{}^{}", alpha.name(), n), move |m| {
        base.query(&pair(&n, m))
    })
}

/// D_{β̄n}: members below n whose characteristic value is exactly 1.
pub fn dec_truncate(beta: &SeqOracle, n: usize) -> Result<BTreeSet<Nat>, StreamError> {
    let one = Nat::one();
    let mut out = BTreeSet::new();
    for k in 0..n {
        let k = Nat::from(k);
        if beta.query(&k)? == one {
            out.insert(k);
        }
    }
    Ok(out)
}

/// E_{β̄n}: values k such that some position m < n enumerates k+1.
pub fn enum_truncate(beta: &SeqOracle, n: usize) -> Result<BTreeSet<Nat>, StreamError> {
    let mut out = BTreeSet::new();
    for m in 0..n {
        let v = beta.query(&Nat::from(m))?;
        if !v.is_zero() {
            out.insert(v - Nat::one());
        }
    }
    Ok(out)
}

/// Outcome of a budgeted membership search in an enumerable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    /// en(witness) = k+1 with witness < budget.
    Found { witness: Nat },
    /// No witness below the budget; says nothing about membership.
    Unknown,
}

impl Search {
    pub fn found(&self) -> bool {
        matches!(self, Search::Found { .. })
    }
}

/// A subset of ℕ with a characteristic oracle (values must be 0 or 1).
#[derive(Debug, Clone)]
pub struct DecidableSet {
    chi: SeqOracle,
}

impl DecidableSet {
    pub fn new(chi: SeqOracle) -> Self {
        DecidableSet { chi }
    }

    pub fn chi(&self) -> &SeqOracle {
        &self.chi
    }

    /// Decides membership; rejects characteristic values outside {0,1}.
    pub fn contains(&self, n: &Nat) -> Result<bool, StreamError> {
        let v = self.chi.query(n)?;
        if v.is_zero() {
            Ok(false)
        } else if v.is_one() {
            Ok(true)
        } else {
            Err(StreamError::NotBoolean {
                name: self.chi.name().to_string(),
                index: n.clone(),
                value: v,
            })
        }
    }

    /// Members below n.
    pub fn truncate(&self, n: usize) -> Result<BTreeSet<Nat>, StreamError> {
        let mut out = BTreeSet::new();
        for k in 0..n {
            let k = Nat::from(k);
            if self.contains(&k)? {
                out.insert(k);
            }
        }
        Ok(out)
    }

    /// The same set presented by enumeration: position n enumerates n+1
    /// exactly when n is a member.
    pub fn to_enumerable(&self) -> EnumerableSet {
        let chi = self.chi.clone();
        let en = SeqOracle::from_fallible_rule(format!("enum({})", chi.name()), move |n| {
            let v = chi.query(n)?;
            if v.is_one() {
                Ok(n + Nat::one())
            } else {
                Ok(Nat::zero())
            }
        });
        EnumerableSet::new(en)
    }
}

/// A subset of ℕ presented by an enumerating oracle: n is a member iff
/// some position m has en(m) = n+1 (0 enumerates nothing).
#[derive(Debug, Clone)]
pub struct EnumerableSet {
    en: SeqOracle,
}

impl EnumerableSet {
    pub fn new(en: SeqOracle) -> Self {
        EnumerableSet { en }
    }

    pub fn enumerator(&self) -> &SeqOracle {
        &self.en
    }

    /// Semi-decision: search the first `budget` positions for a witness.
    pub fn member_within(&self, k: &Nat, budget: usize) -> Result<Search, StreamError> {
        let target = k + Nat::one();
        for m in 0..budget {
            let m = Nat::from(m);
            if self.en.query(&m)? == target {
                return Ok(Search::Found { witness: m });
            }
        }
        Ok(Search::Unknown)
    }

    /// Members enumerated within the first n positions.
    pub fn truncate(&self, n: usize) -> Result<BTreeSet<Nat>, StreamError> {
        enum_truncate(&self.en, n)
    }
}

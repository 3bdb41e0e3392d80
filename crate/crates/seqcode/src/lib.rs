//! Coding of finite sequences of naturals as single naturals.
//!
//! A sequence ⟨m₀, …, m_{k−1}⟩ is coded as
//! 2^{m₀} · 3^{m₁} · … · p(k−2)^{m_{k−2}} · p(k−1)^{m_{k−1}+1} − 1,
//! where p(i) is the i-th prime; only the last exponent carries the +1.
//! The empty sequence codes to 0 and every natural decodes to exactly one
//! sequence, so `decode` and `encode` are mutually inverse bijections.
//!
//! All arithmetic is arbitrary precision: codes explode quickly and no
//! overflow is permitted anywhere.

mod binary;
mod pairing;
mod primes;

pub use binary::{bin_encode, sharp};
pub use pairing::{pair, unpair};
pub use primes::prime;

use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Natural number of arbitrary precision; the universe every code lives in.
pub type Nat = num_bigint::BigUint;

/// A sequence code. Every natural is a valid code; decoding is total.
pub type SeqCode = Nat;

/// Convenience constructor for small naturals.
pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

/// Errors for the few partial operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    /// `prefix` was asked for more items than the sequence has.
    #[error("prefix of length {wanted} requested from a sequence of length {len}")]
    PrefixOutOfRange { wanted: usize, len: usize },
    /// `sharp` was applied to a sequence with an item other than 0 or 1.
    #[error("item at position {index} is {item}; expected 0 or 1")]
    NonBinary { index: usize, item: Nat },
}

/// A finite sequence of naturals — the decoded form of a [`SeqCode`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinSeq {
    items: Vec<Nat>,
}

impl FinSeq {
    /// The empty sequence ⟨⟩.
    pub fn empty() -> Self {
        FinSeq { items: Vec::new() }
    }

    pub fn new(items: Vec<Nat>) -> Self {
        FinSeq { items }
    }

    /// Builds a sequence from machine-sized items, for tests and tables.
    pub fn from_u64s(items: &[u64]) -> Self {
        FinSeq {
            items: items.iter().map(|&n| Nat::from(n)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Nat] {
        &self.items
    }

    pub fn get(&self, i: usize) -> Option<&Nat> {
        self.items.get(i)
    }

    /// The initial part consisting of the first `n` items.
    pub fn prefix(&self, n: usize) -> Result<FinSeq, SeqError> {
        if n > self.items.len() {
            return Err(SeqError::PrefixOutOfRange {
                wanted: n,
                len: self.items.len(),
            });
        }
        Ok(FinSeq {
            items: self.items[..n].to_vec(),
        })
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &FinSeq) -> FinSeq {
        let mut items = self.items.clone();
        items.extend_from_slice(&other.items);
        FinSeq { items }
    }

    /// `self` extended by a single item.
    pub fn append(&self, item: Nat) -> FinSeq {
        let mut items = self.items.clone();
        items.push(item);
        FinSeq { items }
    }

    /// True iff `self` is an initial part of `other`.
    pub fn is_initial_of(&self, other: &FinSeq) -> bool {
        self.items.len() <= other.items.len() && other.items[..self.items.len()] == self.items[..]
    }

    /// True iff all items are 0 or 1.
    pub fn is_binary(&self) -> bool {
        let one = Nat::one();
        self.items.iter().all(|m| *m <= one)
    }

    pub fn encode(&self) -> SeqCode {
        encode(self)
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for FinSeq {
    type Err = String;

    /// Parses the bracketed comma-separated form, e.g. `[1,0]` or `[]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| format!("expected [..] around a finite sequence, got {s:?}"))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(FinSeq::empty());
        }
        let items = inner
            .split(',')
            .map(|part| {
                Nat::from_str(part.trim()).map_err(|e| format!("bad item {:?}: {e}", part.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinSeq { items })
    }
}

impl From<Vec<Nat>> for FinSeq {
    fn from(items: Vec<Nat>) -> Self {
        FinSeq { items }
    }
}

/// Codes a finite sequence as a natural via the prime-power product.
pub fn encode(s: &FinSeq) -> SeqCode {
    if s.is_empty() {
        return Nat::zero();
    }
    let mut product = Nat::one();
    let last = s.len() - 1;
    for (i, item) in s.items().iter().enumerate() {
        let base = Nat::from(prime(i));
        let exp = if i == last {
            item + Nat::one()
        } else {
            item.clone()
        };
        product *= pow_nat(&base, &exp);
    }
    product - Nat::one()
}

/// base^exp by binary exponentiation with an arbitrary-precision exponent.
fn pow_nat(base: &Nat, exp: &Nat) -> Nat {
    let mut result = Nat::one();
    let mut square = base.clone();
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result *= &square;
        }
        if i + 1 < bits {
            square = &square * &square;
        }
    }
    result
}

/// Exponent of each prime p(0), p(1), … in a+1, up to and including the
/// largest prime divisor. The final entry is always ≥ 1.
fn prime_exponents(a: &SeqCode) -> Vec<Nat> {
    if let Some(small) = (a + Nat::one()).to_u64() {
        return prime_exponents_u64(small);
    }
    let mut n = a + Nat::one();
    let mut exps: Vec<Nat> = Vec::new();
    let one = Nat::one();
    let mut i = 0usize;
    while n > one {
        // Once the remaining cofactor drops into machine range, finish there.
        if let Some(small) = n.to_u64() {
            return finish_small(exps, small, i);
        }
        let p = Nat::from(prime(i));
        let mut e = Nat::zero();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &p);
            if r.is_zero() {
                n = q;
                e += Nat::one();
            } else {
                break;
            }
        }
        exps.push(e);
        i += 1;
    }
    exps
}

/// Trial division entirely in machine integers, with the square-root cutoff.
fn prime_exponents_u64(n: u64) -> Vec<Nat> {
    finish_small(Vec::new(), n, 0)
}

fn finish_small(mut exps: Vec<Nat>, mut n: u64, mut i: usize) -> Vec<Nat> {
    while n > 1 {
        let p = prime(i);
        if p.checked_mul(p).map(|sq| sq > n).unwrap_or(true) {
            // The cofactor is prime; locate its index directly.
            let j = primes::prime_index(n).expect("cofactor below p² is prime");
            while exps.len() < j {
                exps.push(Nat::zero());
            }
            exps.push(Nat::one());
            return exps;
        }
        let mut e = 0u64;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        exps.push(Nat::from(e));
        i += 1;
    }
    exps
}

/// Number of items in the sequence coded by `a`: the least i such that no
/// prime p(j) with j ≥ i divides a+1.
pub fn length_code(a: &SeqCode) -> usize {
    prime_exponents(a).len()
}

/// Recovers the sequence coded by `a`. Total: every natural is a code.
pub fn decode(a: &SeqCode) -> FinSeq {
    let mut exps = prime_exponents(a);
    if let Some(last) = exps.last_mut() {
        *last -= Nat::one();
    }
    FinSeq { items: exps }
}

/// Code of the concatenation: decode both, join, re-encode.
pub fn concat(a: &SeqCode, b: &SeqCode) -> SeqCode {
    encode(&decode(a).concat(&decode(b)))
}

/// Code of the first `n` items of the sequence coded by `a`.
pub fn prefix(a: &SeqCode, n: usize) -> Result<SeqCode, SeqError> {
    Ok(encode(&decode(a).prefix(n)?))
}

/// True iff the sequence coded by `a` is an initial part of the one coded by `b`.
pub fn is_initial(a: &SeqCode, b: &SeqCode) -> bool {
    decode(a).is_initial_of(&decode(b))
}

/// True iff neither coded sequence is an initial part of the other
/// (the sequences are incompatible, written s ⊥ t).
pub fn incompatible(a: &SeqCode, b: &SeqCode) -> bool {
    let sa = decode(a);
    let sb = decode(b);
    !sa.is_initial_of(&sb) && !sb.is_initial_of(&sa)
}

/// The n-th slice of a coded sequence under the pairing function: the longest
/// t such that, for every m < length(t), pair(n,m) < length(s) and
/// t(m) = s(pair(n,m)). Since pair(n,·) is strictly increasing, the valid t
/// form a chain of prefixes and the longest one is the greatest.
pub fn proj_code(s: &SeqCode, n: &Nat) -> SeqCode {
    let items = decode(s);
    let len = Nat::from(items.len());
    let mut t = Vec::new();
    let mut m = Nat::zero();
    loop {
        let k = pair(n, &m);
        if k >= len {
            break;
        }
        let idx = k.to_usize().expect("index below a materialized length");
        t.push(items.items()[idx].clone());
        m += Nat::one();
    }
    encode(&FinSeq::new(t))
}

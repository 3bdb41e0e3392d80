//! Bars on binary sequences built from the diagonal of T: the decidable
//! bars B and D, the semi-decidable bar C, the value sets K₀/K₁, and the
//! construction of binary prefixes avoiding any finite piece of B.

use crate::machine::{run_bounded, RunOutcome};
use crate::trace::{t_predicate, u_output};
use crate::KleeneError;
use num_traits::{One, Zero};
use seqcode::{decode, nat, FinSeq, Nat, SeqCode};
use std::collections::BTreeSet;
use streams::Search;

/// Decodes `s` and checks every item is 0 or 1.
fn checked_binary(s: &SeqCode) -> Result<FinSeq, KleeneError> {
    let items = decode(s);
    for (index, item) in items.items().iter().enumerate() {
        if *item > Nat::one() {
            return Err(KleeneError::NonBinary {
                index,
                item: item.clone(),
            });
        }
    }
    Ok(items)
}

/// Every pair (j, z) with j, z < bound and T(j,j,z), together with U(z),
/// in increasing (j, z) order. These are the constraints the bounded bars
/// can see at all.
pub fn diagonal_halts(bound: u64) -> Vec<(u64, u64, Nat)> {
    let mut out = Vec::new();
    for j in 0..bound {
        let ej = nat(j);
        for z in 0..bound {
            let zc = nat(z);
            if t_predicate(&ej, &ej, &zc) {
                out.push((j, z, u_output(&zc)));
            }
        }
    }
    out
}

/// The bar B: true iff some j < n and z < n (n the length of s) satisfy
/// T(j,j,z) with s(j) = U(z). Decidable by bounded scans only.
pub fn bar_b(s: &SeqCode) -> Result<bool, KleeneError> {
    let items = checked_binary(s)?;
    let n = items.len() as u64;
    Ok(diagonal_halts(n)
        .iter()
        .any(|(j, _z, u)| items.items()[*j as usize] == *u))
}

/// A binary sequence of length n no initial part of which is in B: wherever
/// some diagonal run (j, z) with j, z < n halts, pick 1 ∸ U(z), and 0
/// elsewhere. Extending n only changes the result when a new diagonal halt
/// enters the bound.
pub fn avoid_finite(n: u64) -> FinSeq {
    let mut items = vec![Nat::zero(); n as usize];
    for (j, _z, u) in diagonal_halts(n) {
        items[j as usize] = if u.is_zero() { Nat::one() } else { Nat::zero() };
    }
    FinSeq::new(items)
}

/// The bar C, semi-decided: s of length n+1 is in C iff machine n computes
/// s(j) on every input j ≤ n. Each run gets `step_budget` transitions; a
/// confirmed member yields the machine index as witness, anything else
/// (mismatch, divergence so far, empty s) stays Unknown. A positive answer
/// is certain because a halting run has a genuine trace code, however large.
pub fn bar_c(s: &SeqCode, step_budget: u64) -> Result<Search, KleeneError> {
    let items = checked_binary(s)?;
    let Some(n) = (items.len() as u64).checked_sub(1) else {
        return Ok(Search::Unknown);
    };
    let machine = nat(n);
    for j in 0..=n {
        match run_bounded(&machine, &nat(j), step_budget) {
            RunOutcome::Halted { output, .. } if output == items.items()[j as usize] => {}
            _ => return Ok(Search::Unknown),
        }
    }
    Ok(Search::Found { witness: machine })
}

/// The bar D, decidable: some n ≤ length(s) − 1 has, for every j ≤ n, a
/// trace z < length(s) with T(n,j,z) and U(z) = s(j).
pub fn bar_d(s: &SeqCode) -> Result<bool, KleeneError> {
    let items = checked_binary(s)?;
    if items.is_empty() {
        return Err(KleeneError::EmptySequence);
    }
    let len = items.len() as u64;
    for n in 0..len {
        let machine = nat(n);
        let all_match = (0..=n).all(|j| {
            let input = nat(j);
            (0..len).any(|z| {
                let zc = nat(z);
                t_predicate(&machine, &input, &zc) && u_output(&zc) == items.items()[j as usize]
            })
        });
        if all_match {
            return Ok(true);
        }
    }
    Ok(false)
}

/// K_i: all j < bound whose diagonal run halts with output i within the
/// trace bound, i ∈ {0, 1}.
pub fn k_sets(i: u8, bound: u64) -> BTreeSet<u64> {
    assert!(i < 2, "K_i is only defined for i in {{0, 1}}");
    let target = nat(i as u64);
    diagonal_halts(bound)
        .into_iter()
        .filter(|(_j, _z, u)| *u == target)
        .map(|(j, _z, _u)| j)
        .collect()
}

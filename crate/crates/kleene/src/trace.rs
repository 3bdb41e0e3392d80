//! The trace predicate T and output extractor U.
//!
//! A halting run of program e on input n is coded as the sequence of its
//! configuration codes, from the initial configuration up to and including
//! the first halting one. T(e,n,z) checks a candidate code against a fresh
//! simulation, so for every e and n at most one z satisfies it. Both T and U
//! are total over all naturals.

use crate::machine::{Program, State};
use num_traits::{One, ToPrimitive, Zero};
use seqcode::{decode, encode, prime, unpair, FinSeq, Nat, SeqCode};

/// True iff z codes the canonical halting trace of program e on input n.
///
/// The check peels one prime exponent of z+1 at a time and compares it
/// against the simulated configuration code for that step, rejecting on the
/// first mismatch. It never factors the cofactor wholesale, so garbage codes
/// with large prime factors are rejected quickly instead of stalling in
/// trial division.
///
/// Step cap: in a genuine halting trace all configurations are pairwise
/// distinct (a repeat would loop forever), and at most one of them has code
/// 0, so z+1 ≥ 2^(k−1) for a k-step run. A simulation that has not halted
/// after bits(z)+2 steps can therefore never match z.
pub fn t_predicate(e: &SeqCode, n: &Nat, z: &SeqCode) -> bool {
    let mut m = z + Nat::one();
    if m.is_one() {
        // z = 0 codes the empty sequence; a trace has at least one config.
        return false;
    }
    let cap = z.bits() + 2;
    let prog = Program::from_code(e);
    let mut state = State::initial(n);
    for i in 0..=cap {
        let p = Nat::from(prime(i as usize));
        let mut v = Nat::zero();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &p);
            if r.is_zero() {
                m = q;
                v += Nat::one();
            } else {
                break;
            }
        }
        let c = state.config_code();
        let halting = state.halting(&prog);
        if m.is_one() {
            // The candidate ends here; only the final exponent carries +1.
            return halting && v == c + Nat::one();
        }
        if halting || v != c {
            return false;
        }
        state.step(&prog);
    }
    false
}

/// Output of the run coded by z: register 0 of the final configuration.
///
/// Total; garbage codes simply yield 0. Cost scales with the largest prime
/// factor of z+1, so callers pass only small codes or materialized traces
/// (whose factors are the first few primes by construction).
pub fn u_output(z: &SeqCode) -> Nat {
    let configs = decode(z);
    let Some(last) = configs.items().last() else {
        return Nat::zero();
    };
    let (_pc, regs_code) = unpair(last);
    let regs = decode(&regs_code);
    regs.get(0).cloned().unwrap_or_default()
}

/// Number of machine steps in the run coded by z: one less than the number
/// of configurations, and 0 for codes with no configurations at all.
/// Same cost caveat as [`u_output`].
pub fn trace_steps(z: &SeqCode) -> u64 {
    (seqcode::length_code(z) as u64).saturating_sub(1)
}

/// Upper estimate of the bit size of the trace code for these configuration
/// codes, without building it: the code plus one is the product of
/// p(i)^{c_i} with one extra factor p(last).
pub fn trace_bits_estimate(configs: &[Nat]) -> f64 {
    let mut bits = 0.0f64;
    for (i, c) in configs.iter().enumerate() {
        let c_approx = c.to_f64().unwrap_or(f64::INFINITY);
        bits += c_approx * (prime(i) as f64).log2();
    }
    if let Some(i) = configs.len().checked_sub(1) {
        bits += (prime(i) as f64).log2();
    }
    bits
}

/// Materializes the trace code when its estimated size is at most
/// `max_bits`; otherwise returns None and the caller keeps the
/// configuration codes as the certificate.
pub fn trace_code_if_small(configs: &[Nat], max_bits: f64) -> Option<SeqCode> {
    if configs.is_empty() || trace_bits_estimate(configs) > max_bits {
        return None;
    }
    Some(encode(&FinSeq::new(configs.to_vec())))
}

//! A reproducible experiment around the diagonal bars: run a catalog of
//! total programs against B, construct and verify avoiding prefixes, and
//! check the measure inequality on harvested members of D.
//!
//! Reports are plain data with a fixed field order and no clocks or
//! randomness, so the same inputs always serialize to the same bytes.

use crate::bars::{avoid_finite, bar_b, bar_d, diagonal_halts};
use crate::machine::{run_program, trace_configs, Program, RunOutcome};
use crate::trace::{t_predicate, trace_bits_estimate, trace_code_if_small, u_output};
use num_traits::One;
use seqcode::{encode, nat, FinSeq, Nat};
use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

/// Ten smallest program codes whose machines are total with outputs in
/// {0, 1}. Totality is evident from shape: all are INC-only except 26,
/// whose single backward jump immediately clears the register it tests.
/// The codes in between either output a value ≥ 2 or start with a jump
/// that loops on register 0 forever.
pub fn standard_catalog() -> Vec<u64> {
    vec![0, 1, 3, 5, 8, 15, 17, 23, 26, 29]
}

/// How far down the bar a cataloged program provably hits.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum HitDepth {
    /// max(e, z) + 1 as a decimal string; the trace code z was materialized.
    Exact(String),
    /// The trace code was too large to build; this is its estimated bit
    /// size, so the guaranteed depth is roughly 2 to this power.
    AstronomicalBits(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub index: u64,
    pub listing: Vec<String>,
    /// Whether the run of the program on its own index halted in budget.
    pub halted: bool,
    pub self_steps: Option<u64>,
    pub self_output: Option<String>,
    /// Configuration codes of the diagonal run: the trace certificate.
    pub config_codes: Vec<String>,
    pub trace_bits_estimate: Option<f64>,
    /// The exact trace code, present only when small enough to build.
    pub trace_code: Option<String>,
    /// T(e, e, z) re-checked on the materialized code.
    pub t_verified: Option<bool>,
    /// U(z) compared against the run output on the materialized code.
    pub u_matches_run: Option<bool>,
    pub hit_depth: Option<HitDepth>,
    /// Least prefix length of the program's sequence that the bounded bar
    /// check already catches, if any within the scanned range.
    pub observed_hit_depth: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AvoidanceEntry {
    pub length: u64,
    pub prefix: String,
    /// Every initial part (all lengths up to `length`) re-checked against B.
    pub verified: bool,
    /// Diagonal halting pairs below this length: the finite piece of the
    /// bar that constrains the prefix.
    pub constraint_pairs: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureCheck {
    pub subset_size: u64,
    pub lengths: Vec<u64>,
    /// Each harvested sequence re-checked for membership in D.
    pub members_verified: bool,
    /// Both sides of Σ 2^(−length) ≤ 1 − 2^(−k), scaled by 2^scale_bits
    /// so the comparison is exact integer arithmetic.
    pub scale_bits: u64,
    pub lhs_scaled: String,
    pub rhs_scaled: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub catalog_size: u64,
    pub depth: u64,
    pub step_budget: u64,
    pub trace_bits_cap: f64,
    pub catalog: Vec<CatalogEntry>,
    pub avoidance: Vec<AvoidanceEntry>,
    pub measure: Vec<MeasureCheck>,
}

fn catalog_entry(e: u64, depth: u64, step_budget: u64, trace_bits_cap: f64) -> CatalogEntry {
    let index = nat(e);
    let prog = Program::from_code(&index);
    let listing = prog.listing();
    let (configs, halted) = trace_configs(&prog, &index, step_budget);

    if !halted {
        return CatalogEntry {
            index: e,
            listing,
            halted: false,
            self_steps: None,
            self_output: None,
            config_codes: Vec::new(),
            trace_bits_estimate: None,
            trace_code: None,
            t_verified: None,
            u_matches_run: None,
            hit_depth: None,
            observed_hit_depth: None,
        };
    }

    let self_steps = (configs.len() - 1) as u64;
    let output = match run_program(&prog, &index, step_budget) {
        RunOutcome::Halted { output, .. } => output,
        RunOutcome::DivergentSoFar { .. } => unreachable!("trace halted above"),
    };
    let estimate = trace_bits_estimate(&configs);
    let trace_code = trace_code_if_small(&configs, trace_bits_cap);
    let t_verified = trace_code.as_ref().map(|z| t_predicate(&index, &index, z));
    let u_matches_run = trace_code.as_ref().map(|z| u_output(z) == output);
    let hit_depth = Some(match &trace_code {
        Some(z) => HitDepth::Exact((index.clone().max(z.clone()) + Nat::one()).to_string()),
        None => HitDepth::AstronomicalBits(estimate),
    });

    // Scan the program's sequence for the first prefix the bounded bar
    // check already catches. The outputs feed bar_b, so stop if one is
    // not binary or a run exceeds the budget.
    let scan_cap = depth.min(64);
    let mut observed_hit_depth = None;
    let mut outputs: Vec<Nat> = Vec::new();
    'scan: for m in 0..=scan_cap {
        while (outputs.len() as u64) < m {
            match run_program(&prog, &nat(outputs.len() as u64), step_budget) {
                RunOutcome::Halted { output, .. } if output <= Nat::one() => {
                    outputs.push(output)
                }
                _ => break 'scan,
            }
        }
        let prefix = encode(&FinSeq::new(outputs.clone()));
        if bar_b(&prefix).expect("binary by construction") {
            observed_hit_depth = Some(m);
            break;
        }
    }

    CatalogEntry {
        index: e,
        listing,
        halted: true,
        self_steps: Some(self_steps),
        self_output: Some(output.to_string()),
        config_codes: configs.iter().map(|c| c.to_string()).collect(),
        trace_bits_estimate: Some(estimate),
        trace_code: trace_code.map(|z| z.to_string()),
        t_verified,
        u_matches_run,
        hit_depth,
        observed_hit_depth,
    }
}

fn avoidance_entry(length: u64) -> AvoidanceEntry {
    let s = avoid_finite(length);
    let verified = (0..=s.len()).all(|m| {
        let prefix = s.prefix(m).expect("m is at most the length");
        !bar_b(&encode(&prefix)).expect("binary by construction")
    });
    AvoidanceEntry {
        length,
        prefix: s.to_string(),
        verified,
        constraint_pairs: diagonal_halts(length).len() as u64,
    }
}

/// Checks Σ 2^(−L) ≤ 1 − 2^(−k) for the chain subset of D holding the
/// lexicographically least member of each length 2, …, k+1. Scaling both
/// sides by 2^M with M = max(k, max L) keeps everything in integers.
fn measure_check(k: u64) -> MeasureCheck {
    let lengths: Vec<u64> = (2..=k + 1).collect();
    let members_verified = lengths.iter().all(|&len| {
        let zeros = FinSeq::new(vec![Nat::default(); len as usize]);
        bar_d(&encode(&zeros)).expect("binary and nonempty")
    });
    let scale = k.max(*lengths.last().expect("k is at least 1"));
    let two = nat(2);
    let lhs: Nat = lengths.iter().map(|&len| two.pow((scale - len) as u32)).sum();
    let rhs = two.pow(scale as u32) - two.pow((scale - k) as u32);
    MeasureCheck {
        subset_size: k,
        lengths,
        members_verified,
        scale_bits: scale,
        lhs_scaled: lhs.to_string(),
        rhs_scaled: rhs.to_string(),
        holds: lhs <= rhs,
    }
}

/// Runs the whole experiment: the first `catalog_size` cataloged programs
/// on their own indices (with trace certificates and bar hits), avoiding
/// prefixes for every length up to `depth` (each verified), and the measure
/// inequality on harvested chain subsets of D of sizes 1 through 6.
pub fn experiment(
    catalog_size: usize,
    depth: u64,
    step_budget: u64,
    trace_bits_cap: f64,
) -> ExperimentReport {
    let catalog: Vec<CatalogEntry> = standard_catalog()
        .into_iter()
        .take(catalog_size)
        .map(|e| catalog_entry(e, depth, step_budget, trace_bits_cap))
        .collect();
    let avoidance: Vec<AvoidanceEntry> = (0..=depth).map(avoidance_entry).collect();
    let measure: Vec<MeasureCheck> = (1..=6).map(measure_check).collect();
    ExperimentReport {
        schema: REPORT_SCHEMA,
        catalog_size: catalog_size as u64,
        depth,
        step_budget,
        trace_bits_cap,
        catalog,
        avoidance,
        measure,
    }
}

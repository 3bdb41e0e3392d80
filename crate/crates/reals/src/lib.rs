//! Exact real numbers as nested-segment oracles.
//!
//! A [`Real`] is a named pair of oracles: an approximation rule producing
//! rational segments that nest strictly, and a modulus telling at which
//! index the width drops below 2^-n. Nothing is ever rounded: segments
//! carry arbitrary-precision rational endpoints and all arithmetic is the
//! endpoint arithmetic of [`Seg`] lifted pointwise, with derived moduli.
//! Both invariants are checkable on any finite prefix but never assumed
//! globally, so a lying oracle is caught by audit, not by construction.
//!
//! Comparisons are three-valued: a budgeted scan either separates two
//! reals at a recorded index or reports back to which depth it looked.
//! Equality is never decided, only refuted. The same discipline runs
//! through the rest of the crate: limits of Cauchy sequences and nested
//! intersections demand explicit moduli and verify them on a window,
//! separable closures ([`CSReal`]) answer membership with budgeted
//! generator witnesses, and extrema of totally bounded sets are built
//! from level covers that are validated before they are trusted.
//!
//! Partial continuous functions live in [`realfun`] as enumerable graphs
//! of segment pairs; applying one to a real is a graph search, not an
//! evaluation, and restriction and clamped extension are position
//! recodings of the same searches.

use seqcode::Nat;
use streams::StreamError;
use thiserror::Error;

mod csreal;
mod rat;
mod real;
mod realfun;
mod seg;

pub use csreal::{
    clamp_intersect, extremum, freudenthal_dichotomy_check, real_frame_enum, totally_bounded_check,
    CSReal, Extremum, LevelCovers, TbVerdict,
};
pub use rat::{
    ceil_int, floor_int, fmt_rat, parse_rat, pow2, rat, rat_code, rat_decode, rat_int,
    shrink_exponent, unzig, zig, Rat,
};
pub use real::{
    amp_exponent, cantor_intersection, cauchy_to_real, le_violation, real_abs, real_arith,
    real_compare, real_neg, seg_contains_real, CompareOutcome, RatSeq, Real, RealOp, RealSeq,
};
pub use realfun::{
    affine_graph, apply_candidates, cells_covering, grid_seg, identity_graph, real_apply,
    real_extend_clamp, real_restrict, PartialRealFun,
};
pub use seg::{
    dyadic_around, parse_seg, seg_add, seg_arith, seg_code, seg_decode, seg_max, seg_min, seg_mul,
    seg_relate, seg_sub, Seg, SegOp, SegRelation,
};

/// Errors from segment construction, oracle audits and budgeted searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    /// Segment endpoints out of order.
    #[error("segment endpoints out of order: lo {lo} above hi {hi}")]
    InvalidSegment { lo: String, hi: String },
    /// Text that does not read as a rational number.
    #[error("cannot read {text:?} as a rational number")]
    BadNumberText { text: String },
    /// Text that does not read as a segment.
    #[error("cannot read {text:?} as a segment")]
    BadSegmentText { text: String },
    /// A graph position enumerated a value that is not a segment pair.
    #[error("graph position {position} enumerates a value that is not a segment pair")]
    BadEntry { position: Nat },
    /// An approximation failed to sit strictly inside its predecessor.
    #[error("approximation {} is not strictly inside approximation {index}: {inner} in {outer}", index + 1)]
    NestingViolation { index: usize, inner: Seg, outer: Seg },
    /// The segment at the claimed modulus is wider than promised.
    #[error("the segment at the modulus for precision {index} has width {width}, above {bound}")]
    WidthViolation { index: usize, width: String, bound: String },
    /// Two sequence terms inside a claimed convergence window drifted apart.
    #[error("sequence terms {m} and {p} differ by {gap}, above the allowed {bound}")]
    CauchyViolation { m: usize, p: usize, gap: String, bound: String },
    /// The interleaving precondition of a nested intersection failed.
    #[error("at stage {stage}, index {index}: {relation}")]
    IntersectionOrder { stage: usize, index: usize, relation: &'static str },
    /// The gap between the bounding sequences failed to shrink as promised.
    #[error("at stage {stage} the gap at index {index} is not below 2^-{stage}")]
    IntersectionGap { stage: usize, index: usize },
    /// No graph entry fit the query within the position budget.
    #[error("no graph entry fit at precision {precision} within budget {budget}")]
    ApplyTimeout { precision: usize, budget: usize },
    /// A level cover broke one of its promises.
    #[error("cover level {level}: {msg}")]
    WitnessViolation { level: usize, msg: String },
    /// A dichotomy oracle's answer contradicts the generator search.
    #[error("the oracle answered {claimed} on {s} inside {t} and the generators say otherwise")]
    DichotomyViolation { s: Seg, t: Seg, claimed: bool },
    /// A dichotomy question on a pair that is not strictly nested.
    #[error("dichotomy asked on a pair that is not strictly nested: {s} in {t}")]
    BadDichotomyPair { s: Seg, t: Seg },
    /// Two graph entries map comparable inputs to separated outputs.
    #[error("graph positions {left} and {right} map comparable inputs to separated outputs")]
    GraphConsistency { left: Nat, right: Nat },
    /// A failure escalated from an underlying oracle.
    #[error(transparent)]
    Stream(#[from] StreamError),
}

//! Rational segments: the exact interval algebra underneath the reals.

use std::fmt;

use seqcode::{pair, unpair, Nat};

use crate::rat::{fmt_rat, parse_rat, pow2, rat_code, rat_decode, Rat};
use crate::RealError;

/// A closed rational segment with lower end not above the upper end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Seg {
    lo: Rat,
    hi: Rat,
}

impl Seg {
    /// Builds a segment, rejecting inverted endpoints.
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, RealError> {
        if lo > hi {
            return Err(RealError::InvalidSegment { lo: fmt_rat(&lo), hi: fmt_rat(&hi) });
        }
        Ok(Seg { lo, hi })
    }

    /// The one-point segment at q.
    pub fn point(q: Rat) -> Self {
        Seg { lo: q.clone(), hi: q }
    }

    /// The segment centered at `center` with the given nonnegative radius.
    /// Panics on a negative radius; radii here are always powers of two
    /// chosen by the caller.
    pub fn around(center: &Rat, radius: &Rat) -> Self {
        assert!(radius >= &Rat::from_integer(0.into()), "radius must be nonnegative");
        Seg { lo: center - radius, hi: center + radius }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    /// Upper end minus lower end.
    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// The midpoint (half the endpoint sum).
    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    /// The segment with the same midpoint and twice the length.
    pub fn double(&self) -> Seg {
        let half = self.length() / Rat::from_integer(2.into());
        Seg { lo: &self.lo - &half, hi: &self.hi + &half }
    }

    /// Whether the rational a lies in the segment, endpoints included.
    pub fn contains_rat(&self, a: &Rat) -> bool {
        &self.lo <= a && a <= &self.hi
    }

    /// self lies wholly to the left of other, with a gap.
    pub fn lies_left_of(&self, other: &Seg) -> bool {
        self.hi < other.lo
    }

    /// self does not lie wholly to the right of other.
    pub fn not_right_of(&self, other: &Seg) -> bool {
        self.lo <= other.hi
    }

    /// The two segments are disjoint with a gap, in either order.
    pub fn apart(&self, other: &Seg) -> bool {
        self.lies_left_of(other) || other.lies_left_of(self)
    }

    /// The two segments share at least a point.
    pub fn touches(&self, other: &Seg) -> bool {
        self.not_right_of(other) && other.not_right_of(self)
    }

    /// self sits strictly inside other: both endpoints strictly between.
    pub fn strictly_inside(&self, other: &Seg) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    /// self sits inside other, endpoints allowed to coincide.
    pub fn inside(&self, other: &Seg) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Seg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

/// Full relation record between two segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegRelation {
    pub lt: bool,
    pub le: bool,
    pub apart: bool,
    pub touches: bool,
    pub strictly_inside: bool,
    pub inside: bool,
}

/// Evaluates every segment relation of s against t in one record.
pub fn seg_relate(s: &Seg, t: &Seg) -> SegRelation {
    SegRelation {
        lt: s.lies_left_of(t),
        le: s.not_right_of(t),
        apart: s.apart(t),
        touches: s.touches(t),
        strictly_inside: s.strictly_inside(t),
        inside: s.inside(t),
    }
}

/// The segment operations. Min and max merge overlapping arguments into
/// their hull rather than picking endpoint-wise extremes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegOp {
    Add,
    Sub,
    Mul,
    Min,
    Max,
}

/// Endpoint-wise sum.
pub fn seg_add(s: &Seg, t: &Seg) -> Seg {
    Seg { lo: &s.lo + &t.lo, hi: &s.hi + &t.hi }
}

/// Mirror difference: lower end against upper end, so that a - b lands in
/// the result whenever a lands in s and b lands in t.
pub fn seg_sub(s: &Seg, t: &Seg) -> Seg {
    Seg { lo: &s.lo - &t.hi, hi: &s.hi - &t.lo }
}

/// Product: the hull of the four endpoint products.
pub fn seg_mul(s: &Seg, t: &Seg) -> Seg {
    let products = [&s.lo * &t.lo, &s.lo * &t.hi, &s.hi * &t.lo, &s.hi * &t.hi];
    let lo = products.iter().min().expect("four products").clone();
    let hi = products.iter().max().expect("four products").clone();
    Seg { lo, hi }
}

fn hull(s: &Seg, t: &Seg) -> Seg {
    Seg { lo: s.lo.clone().min(t.lo.clone()), hi: s.hi.clone().max(t.hi.clone()) }
}

/// Lower envelope: the left segment when the arguments are apart, their
/// hull when they overlap.
pub fn seg_min(s: &Seg, t: &Seg) -> Seg {
    if s.lies_left_of(t) {
        s.clone()
    } else if t.lies_left_of(s) {
        t.clone()
    } else {
        hull(s, t)
    }
}

/// Upper envelope: the right segment when the arguments are apart, their
/// hull when they overlap.
pub fn seg_max(s: &Seg, t: &Seg) -> Seg {
    if s.lies_left_of(t) {
        t.clone()
    } else if t.lies_left_of(s) {
        s.clone()
    } else {
        hull(s, t)
    }
}

/// Dispatches one of the five segment operations.
pub fn seg_arith(op: SegOp, s: &Seg, t: &Seg) -> Seg {
    match op {
        SegOp::Add => seg_add(s, t),
        SegOp::Sub => seg_sub(s, t),
        SegOp::Mul => seg_mul(s, t),
        SegOp::Min => seg_min(s, t),
        SegOp::Max => seg_max(s, t),
    }
}

/// Code of a segment: the pair of its endpoint codes.
pub fn seg_code(s: &Seg) -> Nat {
    pair(&rat_code(&s.lo), &rat_code(&s.hi))
}

/// Inverse of [`seg_code`]; rejects codes whose endpoints come out inverted.
pub fn seg_decode(c: &Nat) -> Result<Seg, RealError> {
    let (a, b) = unpair(c);
    Seg::new(rat_decode(&a), rat_decode(&b))
}

/// Parses "[lo, hi]" with rational or decimal endpoints.
pub fn parse_seg(text: &str) -> Result<Seg, RealError> {
    let bad = || RealError::BadSegmentText { text: text.to_string() };
    let t = text.trim();
    let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
    Seg::new(parse_rat(lo)?, parse_rat(hi)?)
}

/// The dyadic segment of width 2^(1-n) around the midpoint q, convenient
/// for building shrinking neighborhoods.
pub fn dyadic_around(q: &Rat, n: i64) -> Seg {
    Seg::around(q, &pow2(-n))
}

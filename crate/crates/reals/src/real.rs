//! Reals as nested-segment oracles with explicit precision moduli.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::rat::{ceil_int, fmt_rat, pow2, Rat};
use crate::seg::{seg_arith, Seg, SegOp};
use crate::RealError;

/// A real number: a named approximation oracle producing strictly nested
/// segments, plus a modulus oracle naming an index whose segment width is
/// at most 2^-n. Both oracles are memoized and must behave as pure
/// functions; clones share the memos.
///
/// The invariants (strict nesting, width at the modulus) are not enforced
/// on construction; [`Real::check_invariants`] tests them on any queried
/// prefix and reports the first violation.
#[derive(Clone)]
pub struct Real {
    name: String,
    approx_rule: Arc<dyn Fn(usize) -> Seg + Send + Sync>,
    approx_memo: Arc<Mutex<BTreeMap<usize, Seg>>>,
    modulus_rule: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    modulus_memo: Arc<Mutex<BTreeMap<usize, usize>>>,
}

impl std::fmt::Debug for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Real({})", self.name)
    }
}

impl Real {
    pub fn new(
        name: impl Into<String>,
        approx: impl Fn(usize) -> Seg + Send + Sync + 'static,
        modulus: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        Real {
            name: name.into(),
            approx_rule: Arc::new(approx),
            approx_memo: Arc::new(Mutex::new(BTreeMap::new())),
            modulus_rule: Arc::new(modulus),
            modulus_memo: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The n-th approximating segment.
    pub fn approx(&self, n: usize) -> Seg {
        if let Some(s) = self.approx_memo.lock().expect("approx memo").get(&n) {
            return s.clone();
        }
        let s = (self.approx_rule)(n);
        self.approx_memo.lock().expect("approx memo").insert(n, s.clone());
        s
    }

    /// An index at which the segment width has dropped to 2^-n or less.
    pub fn modulus(&self, n: usize) -> usize {
        if let Some(m) = self.modulus_memo.lock().expect("modulus memo").get(&n) {
            return *m;
        }
        let m = (self.modulus_rule)(n);
        self.modulus_memo.lock().expect("modulus memo").insert(n, m);
        m
    }

    /// Checks strict nesting and the width promise on the first `prefix`
    /// indices, reporting the first failure.
    pub fn check_invariants(&self, prefix: usize) -> Result<(), RealError> {
        for n in 0..prefix {
            let outer = self.approx(n);
            let inner = self.approx(n + 1);
            if !inner.strictly_inside(&outer) {
                return Err(RealError::NestingViolation { index: n, inner, outer });
            }
        }
        for n in 0..prefix {
            let m = self.modulus(n);
            let width = self.approx(m).length();
            let bound = pow2(-(n as i64));
            if width > bound {
                return Err(RealError::WidthViolation {
                    index: n,
                    width: fmt_rat(&width),
                    bound: fmt_rat(&bound),
                });
            }
        }
        Ok(())
    }

    /// Embeds a rational as the real with segments of width 2^-n around it.
    pub fn from_rat(q: &Rat) -> Real {
        let center = q.clone();
        Real::new(
            format!("rat({})", fmt_rat(q)),
            move |n| Seg::around(&center, &pow2(-(n as i64) - 1)),
            |n| n,
        )
    }
}

/// A memoized sequence of rationals.
#[derive(Clone)]
pub struct RatSeq {
    name: String,
    rule: Arc<dyn Fn(usize) -> Rat + Send + Sync>,
    memo: Arc<Mutex<BTreeMap<usize, Rat>>>,
}

impl RatSeq {
    pub fn from_rule(name: impl Into<String>, rule: impl Fn(usize) -> Rat + Send + Sync + 'static) -> Self {
        RatSeq { name: name.into(), rule: Arc::new(rule), memo: Arc::new(Mutex::new(BTreeMap::new())) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, n: usize) -> Rat {
        if let Some(q) = self.memo.lock().expect("ratseq memo").get(&n) {
            return q.clone();
        }
        let q = (self.rule)(n);
        self.memo.lock().expect("ratseq memo").insert(n, q.clone());
        q
    }
}

/// A memoized sequence of reals.
#[derive(Clone)]
pub struct RealSeq {
    name: String,
    rule: Arc<dyn Fn(usize) -> Real + Send + Sync>,
    memo: Arc<Mutex<BTreeMap<usize, Real>>>,
}

impl RealSeq {
    pub fn from_rule(name: impl Into<String>, rule: impl Fn(usize) -> Real + Send + Sync + 'static) -> Self {
        RealSeq { name: name.into(), rule: Arc::new(rule), memo: Arc::new(Mutex::new(BTreeMap::new())) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, n: usize) -> Real {
        if let Some(x) = self.memo.lock().expect("realseq memo").get(&n) {
            return x.clone();
        }
        let x = (self.rule)(n);
        self.memo.lock().expect("realseq memo").insert(n, x.clone());
        x
    }
}

/// The pointwise operations on reals. Sup and Inf take the upper and lower
/// segment envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealOp {
    Add,
    Sub,
    Mul,
    Sup,
    Inf,
}

/// Least k with b <= 2^k, for nonnegative b.
pub fn amp_exponent(b: &Rat) -> usize {
    if b <= &Rat::one() {
        return 0;
    }
    let below = ceil_int(b) - BigInt::one();
    below.bits() as usize
}

/// Applies a segment operation index by index. The derived modulus asks
/// both operands for extra precision: one guard bit for the additive
/// operations and envelopes, plus the magnitude read off the coarsest
/// segments for products.
pub fn real_arith(op: RealOp, x: &Real, y: &Real) -> Real {
    let seg_op = match op {
        RealOp::Add => SegOp::Add,
        RealOp::Sub => SegOp::Sub,
        RealOp::Mul => SegOp::Mul,
        RealOp::Sup => SegOp::Max,
        RealOp::Inf => SegOp::Min,
    };
    let name = format!("{:?}({}, {})", op, x.name(), y.name());
    let (xa, ya) = (x.clone(), y.clone());
    let (xm, ym) = (x.clone(), y.clone());
    Real::new(
        name,
        move |n| seg_arith(seg_op, &xa.approx(n), &ya.approx(n)),
        move |n| {
            let guard = match op {
                RealOp::Mul => {
                    let x0 = xm.approx(0);
                    let y0 = ym.approx(0);
                    let bound = [x0.lo(), x0.hi(), y0.lo(), y0.hi()]
                        .iter()
                        .map(|q| q.abs())
                        .max()
                        .expect("four endpoints");
                    1 + amp_exponent(&bound)
                }
                _ => 1,
            };
            xm.modulus(n + guard).max(ym.modulus(n + guard))
        },
    )
}

/// 0 - x.
pub fn real_neg(x: &Real) -> Real {
    real_arith(RealOp::Sub, &Real::from_rat(&Rat::from_integer(0.into())), x)
}

/// sup(x, -x).
pub fn real_abs(x: &Real) -> Real {
    real_arith(RealOp::Sup, x, &real_neg(x))
}

/// Outcome of a budgeted comparison: a separating index in one direction
/// or the other, or no separation up to the searched depth. The last
/// answer is three-valued ignorance, not equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompareOutcome {
    Less { index: usize },
    Greater { index: usize },
    NotSeparated { depth: usize },
}

/// Searches indices up to both moduli at precision n for a pair of apart
/// segments.
pub fn real_compare(x: &Real, y: &Real, n: usize) -> CompareOutcome {
    let depth = x.modulus(n).max(y.modulus(n));
    for k in 0..=depth {
        let xs = x.approx(k);
        let ys = y.approx(k);
        if xs.lies_left_of(&ys) {
            return CompareOutcome::Less { index: k };
        }
        if ys.lies_left_of(&xs) {
            return CompareOutcome::Greater { index: k };
        }
    }
    CompareOutcome::NotSeparated { depth }
}

/// First index up to `probe` where x's segment lies wholly right of y's,
/// if any. None means the ordering x <= y survived the inspected prefix.
pub fn le_violation(x: &Real, y: &Real, probe: usize) -> Option<usize> {
    (0..=probe).find(|&k| !x.approx(k).not_right_of(&y.approx(k)))
}

/// Least index up to `depth` at which x's segment sits strictly inside s.
pub fn seg_contains_real(s: &Seg, x: &Real, depth: usize) -> Option<usize> {
    (0..=depth).find(|&n| x.approx(n).strictly_inside(s))
}

/// Turns a rational sequence with a convergence modulus into a real.
///
/// The modulus promises |alpha(gamma(m)) - alpha(p)| <= 2^-m for p beyond
/// gamma(m); the first `spot` stages are spot-checked over a window of the
/// same size and a violation is reported instead of a real. The result
/// takes the segment of radius 2^(1-m) around alpha(gamma(m)) at stage m.
pub fn cauchy_to_real(
    alpha: &RatSeq,
    gamma: impl Fn(usize) -> usize + Send + Sync + 'static,
    spot: usize,
) -> Result<Real, RealError> {
    for m in 0..spot {
        let g = gamma(m);
        let base = alpha.at(g);
        let bound = pow2(-(m as i64));
        for p in g + 1..=g + spot {
            let gap = (alpha.at(p) - &base).abs();
            if gap > bound {
                return Err(RealError::CauchyViolation {
                    m,
                    p,
                    gap: fmt_rat(&gap),
                    bound: fmt_rat(&bound),
                });
            }
        }
    }
    let seq = alpha.clone();
    Ok(Real::new(
        format!("limit({})", alpha.name()),
        move |m| Seg::around(&seq.at(gamma(m)), &pow2(1 - m as i64)),
        |n| n + 2,
    ))
}

/// Intersects a nested pair of real sequences: `lower` must not decrease,
/// `upper` must not increase, the lower must stay below the upper, and
/// `width_index` must name a stage where their gap is at most 2^-n. All
/// four promises are tested on the first `probe` stages at probe depth.
///
/// The result is the limit of hull midpoints taken three stages ahead, so
/// it sits between lower and upper at every tested stage; running the
/// search twice with different width indices lands on reals that no
/// comparison can separate.
pub fn cantor_intersection(
    lower: &RealSeq,
    upper: &RealSeq,
    width_index: impl Fn(usize) -> usize + Send + Sync + 'static,
    probe: usize,
) -> Result<Real, RealError> {
    for n in 0..probe {
        if let Some(k) = le_violation(&lower.at(n), &lower.at(n + 1), probe) {
            return Err(RealError::IntersectionOrder {
                stage: n,
                index: k,
                relation: "lower sequence must not decrease",
            });
        }
        if let Some(k) = le_violation(&lower.at(n + 1), &upper.at(n + 1), probe) {
            return Err(RealError::IntersectionOrder {
                stage: n,
                index: k,
                relation: "lower sequence must stay below the upper sequence",
            });
        }
        if let Some(k) = le_violation(&upper.at(n + 1), &upper.at(n), probe) {
            return Err(RealError::IntersectionOrder {
                stage: n,
                index: k,
                relation: "upper sequence must not increase",
            });
        }
        let p = width_index(n);
        let gap = real_arith(RealOp::Sub, &upper.at(p), &lower.at(p));
        let bound = Real::from_rat(&pow2(-(n as i64)));
        if le_violation(&gap, &bound, probe).is_some() {
            return Err(RealError::IntersectionGap { stage: n, index: p });
        }
    }
    let (a, b) = (lower.clone(), upper.clone());
    let mids = RatSeq::from_rule(format!("between({}, {})", lower.name(), upper.name()), move |j| {
        let p = width_index(j + 3);
        let lo_real = a.at(p);
        let hi_real = b.at(p);
        let k = lo_real.modulus(j + 3).max(hi_real.modulus(j + 3));
        (lo_real.approx(k).lo() + hi_real.approx(k).hi()) / Rat::from_integer(2.into())
    });
    cauchy_to_real(&mids, |m| m + 1, probe.min(6))
}

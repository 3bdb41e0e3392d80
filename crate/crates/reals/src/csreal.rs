//! Countable closures of generator sequences and their segment frames.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use seqcode::{nat, pair, unpair, Nat};
use streams::{EnumerableSet, SeqOracle};

use crate::rat::{pow2, shrink_exponent, Rat};
use crate::real::{real_abs, real_arith, real_compare, CompareOutcome, Real, RealOp, RealSeq};
use crate::seg::{seg_code, seg_decode, Seg};
use crate::RealError;

/// A separable set of reals: the closure of a countable generator
/// sequence. Membership of a real x means every neighborhood x(n) has a
/// generator strictly inside it; the type only ever witnesses this at a
/// budget, it never decides it.
#[derive(Clone)]
pub struct CSReal {
    gen: RealSeq,
}

impl CSReal {
    pub fn new(gen: RealSeq) -> Self {
        CSReal { gen }
    }

    /// Closure of a finite list of rationals, cycled into a sequence.
    /// Panics on an empty list; a separable set needs a generator.
    pub fn from_rats(name: impl Into<String>, points: Vec<Rat>) -> Self {
        assert!(!points.is_empty(), "a separable set needs at least one generator");
        CSReal {
            gen: RealSeq::from_rule(name, move |n| Real::from_rat(&points[n % points.len()])),
        }
    }

    pub fn gen(&self) -> &RealSeq {
        &self.gen
    }

    pub fn generator(&self, n: usize) -> Real {
        self.gen.at(n)
    }

    /// Searches the first `gen_budget` generators for one sitting strictly
    /// inside s, returning the generator index and the approximation index
    /// that witnesses it. The scan depth is deep enough to see any
    /// generator further than a 1/128th of the width from both endpoints.
    pub fn find_generator_inside(&self, s: &Seg, gen_budget: usize) -> Option<(usize, usize)> {
        let width = s.length();
        if !width.is_positive() {
            return None;
        }
        let scale = shrink_exponent(&width, 2) + 5;
        for m in 0..gen_budget {
            let g = self.gen.at(m);
            let deep = g.modulus(scale);
            for j in 0..=deep {
                if g.approx(j).strictly_inside(s) {
                    return Some((m, j));
                }
            }
        }
        None
    }

    /// Membership witness at precision n: a generator strictly inside x(n).
    pub fn member_witness(&self, x: &Real, n: usize, gen_budget: usize) -> Option<(usize, usize)> {
        self.find_generator_inside(&x.approx(n), gen_budget)
    }
}

use num_traits::Signed;

/// Enumerates the segment frame of the closure: every segment with some
/// generator approximation strictly inside it. Position pair(pair(m, j), c)
/// emits c + 1 exactly when generator m at depth j witnesses the segment
/// coded by c; anything else emits 0.
pub fn real_frame_enum(h: &CSReal) -> EnumerableSet {
    let gen = h.gen().clone();
    let en = SeqOracle::from_rule(format!("frame({})", gen.name()), move |p: &Nat| {
        let (mj, sc) = unpair(p);
        let (m, j) = unpair(&mj);
        let (Some(m), Some(j)) = (m.to_usize(), j.to_usize()) else {
            return nat(0);
        };
        let Ok(s) = seg_decode(&sc) else {
            return nat(0);
        };
        if gen.at(m).approx(j).strictly_inside(&s) {
            sc + nat(1)
        } else {
            nat(0)
        }
    });
    EnumerableSet::new(en)
}

/// The closure of the clamped generators inf(y, sup(x, g)): the part of h
/// between x and y, with everything outside pulled onto the nearer bound.
pub fn clamp_intersect(h: &CSReal, x: &Real, y: &Real) -> CSReal {
    let gen = h.gen().clone();
    let (xx, yy) = (x.clone(), y.clone());
    CSReal::new(RealSeq::from_rule(
        format!("clamp({}, [{}, {}])", gen.name(), x.name(), y.name()),
        move |n| real_arith(RealOp::Inf, &yy, &real_arith(RealOp::Sup, &xx, &gen.at(n))),
    ))
}

/// Verdict of the total-boundedness probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TbVerdict {
    Pass,
    /// Sampled generator i had no neighbor below index delta(m) within 2^-m.
    Fail { m: usize, i: usize },
}

/// Tests a candidate total-boundedness modulus: for each m up to m_max and
/// each of the next `samples` generators past delta(m), some generator
/// below delta(m) must sit within 2^-m, witnessed by a comparison at
/// precision m + 3.
pub fn totally_bounded_check(
    h: &CSReal,
    delta: impl Fn(usize) -> usize,
    m_max: usize,
    samples: usize,
) -> TbVerdict {
    for m in 0..=m_max {
        let d = delta(m);
        let bound = Real::from_rat(&pow2(-(m as i64)));
        for i in d + 1..=d + samples {
            let gi = h.generator(i);
            let near = (0..d).any(|j| {
                let dist = real_abs(&real_arith(RealOp::Sub, &gi, &h.generator(j)));
                matches!(real_compare(&dist, &bound, m + 3), CompareOutcome::Less { .. })
            });
            if !near {
                return TbVerdict::Fail { m, i };
            }
        }
    }
    TbVerdict::Pass
}

/// A level-indexed family of finite segment covers, each level promising
/// segments of width exactly 2^-n that all meet the set they cover.
#[derive(Clone)]
pub struct LevelCovers {
    name: String,
    rule: Arc<dyn Fn(usize) -> Vec<Seg> + Send + Sync>,
    memo: Arc<Mutex<BTreeMap<usize, Vec<Seg>>>>,
}

impl LevelCovers {
    pub fn from_rule(name: impl Into<String>, rule: impl Fn(usize) -> Vec<Seg> + Send + Sync + 'static) -> Self {
        LevelCovers { name: name.into(), rule: Arc::new(rule), memo: Arc::new(Mutex::new(BTreeMap::new())) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self, n: usize) -> Vec<Seg> {
        if let Some(l) = self.memo.lock().expect("level memo").get(&n) {
            return l.clone();
        }
        let l = (self.rule)(n);
        self.memo.lock().expect("level memo").insert(n, l.clone());
        l
    }
}

/// Which end of the set to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Smallest,
    Largest,
}

fn pick_extreme(level: &[Seg], which: Extremum) -> Seg {
    // s is not right of every t exactly when s.lo is below the least hi,
    // and dually; one sweep finds the threshold, so levels stay cheap.
    let satisfies: Box<dyn Fn(&Seg) -> bool> = match which {
        Extremum::Smallest => {
            let least_hi = level.iter().map(|t| t.hi().clone()).min().expect("nonempty level");
            Box::new(move |s: &Seg| s.lo() <= &least_hi)
        }
        Extremum::Largest => {
            let greatest_lo = level.iter().map(|t| t.lo().clone()).max().expect("nonempty level");
            Box::new(move |s: &Seg| s.hi() >= &greatest_lo)
        }
    };
    level
        .iter()
        .filter(|s| satisfies(s))
        .min_by_key(|s| seg_code(s))
        .expect("a nonempty level always has an extreme segment")
        .clone()
}

/// Builds the smallest or largest element of a totally bounded closure
/// from a family of exact-width level covers: stage n doubles the extreme
/// segment of level 2n, so consecutive stages nest strictly whenever the
/// witness is honest.
///
/// The first `validate_levels` levels are checked eagerly: nonempty, exact
/// widths, and a generator inside every listed segment (searched through
/// `gen_budget` generators). Deeper levels are trusted and can still be
/// audited afterwards through [`Real::check_invariants`].
pub fn extremum(
    h: &CSReal,
    covers: &LevelCovers,
    which: Extremum,
    validate_levels: usize,
    gen_budget: usize,
) -> Result<Real, RealError> {
    for n in 0..validate_levels {
        let level = covers.level(n);
        if level.is_empty() {
            return Err(RealError::WitnessViolation { level: n, msg: "level lists no segments".into() });
        }
        let want = pow2(-(n as i64));
        for s in &level {
            if s.length() != want {
                return Err(RealError::WitnessViolation {
                    level: n,
                    msg: format!("segment {s} does not have width 2^-{n}"),
                });
            }
            if h.find_generator_inside(s, gen_budget).is_none() {
                return Err(RealError::WitnessViolation {
                    level: n,
                    msg: format!("no generator found inside {s}"),
                });
            }
        }
    }
    let cov = covers.clone();
    Ok(Real::new(
        format!("{:?}({})", which, h.gen().name()),
        move |n| pick_extreme(&cov.level(2 * n), which).double(),
        |n| n / 2 + 1,
    ))
}

/// Validates a dichotomy oracle against generator search: on each nested
/// pair s strictly inside t, answering true commits the oracle to a
/// generator inside t, answering false commits it to the absence of any
/// generator inside s (within the budget).
pub fn freudenthal_dichotomy_check(
    h: &CSReal,
    oracle: &dyn Fn(&Seg, &Seg) -> bool,
    pairs: &[(Seg, Seg)],
    gen_budget: usize,
) -> Result<(), RealError> {
    for (s, t) in pairs {
        if !s.strictly_inside(t) {
            return Err(RealError::BadDichotomyPair { s: s.clone(), t: t.clone() });
        }
        if oracle(s, t) {
            if h.find_generator_inside(t, gen_budget).is_none() {
                return Err(RealError::DichotomyViolation { s: s.clone(), t: t.clone(), claimed: true });
            }
        } else if h.find_generator_inside(s, gen_budget).is_some() {
            return Err(RealError::DichotomyViolation { s: s.clone(), t: t.clone(), claimed: false });
        }
    }
    Ok(())
}

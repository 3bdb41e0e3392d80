//! Partial continuous functions on reals, presented as enumerable graphs
//! of segment pairs.
//!
//! An entry pairs an input segment r with an output segment s and promises
//! that the function maps everything in r into s. Application at a real x
//! therefore never evaluates anything: stage by stage it searches the
//! graph for an entry whose input swallows the current approximation of x
//! and whose output is narrow enough, and the chosen outputs themselves
//! form the nested-segment answer.
//!
//! Graph positions carry no structure beyond what their values decode to,
//! so useful entries can sit at astronomically large positions. Each
//! constructor here therefore attaches a hint rule that proposes candidate
//! positions built from the query itself (dyadic grid cells around the
//! current approximation); application probes those alongside a plain
//! bounded scan of the low positions, and takes the least position that
//! fits. Hints are an efficiency device only: they add no entries, every
//! proposed position is still checked against the graph rule.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use seqcode::{nat, pair, unpair, Nat};
use streams::{EnumerableSet, SeqOracle};

use crate::csreal::CSReal;
use crate::rat::{ceil_int, floor_int, pow2, rat_int, unzig, Rat};
use crate::real::{amp_exponent, Real};
use crate::seg::{seg_arith, seg_code, seg_decode, seg_max, seg_min, Seg, SegOp};
use crate::RealError;

/// Scales beyond this are never materialized from coded positions; the
/// denominators would dwarf anything a bounded search can use.
const MAX_GRID_SCALE: usize = 1 << 16;

/// Decodes pair(l, z) into the dyadic grid cell at scale l centered on
/// the zigzag-coded integer z: the segment from (z-1)/2^l to (z+1)/2^l.
/// Adjacent cells at one scale overlap halfway, so every segment narrower
/// than 2^-l sits strictly inside some cell.
pub fn grid_seg(code: &Nat) -> Option<Seg> {
    let (l, z) = unpair(code);
    let l = l.to_usize().filter(|l| *l <= MAX_GRID_SCALE)?;
    let center = Rat::from(unzig(&z)) * pow2(-(l as i64));
    Some(Seg::around(&center, &pow2(-(l as i64))))
}

/// All grid cells at the given scale that contain s strictly. Nonempty
/// whenever s is narrower than 2^-scale.
pub fn cells_covering(s: &Seg, scale: usize) -> Vec<Seg> {
    let step = pow2(scale as i64);
    let lowest = floor_int(&(s.hi() * &step - rat_int(1))) + BigInt::one();
    let highest = ceil_int(&(s.lo() * &step + rat_int(1))) - BigInt::one();
    let mut out = Vec::new();
    let mut z = lowest;
    while z <= highest {
        let center = Rat::from(z.clone()) * pow2(-(scale as i64));
        let cell = Seg::around(&center, &pow2(-(scale as i64)));
        if s.strictly_inside(&cell) {
            out.push(cell);
        }
        z += BigInt::one();
    }
    out
}

fn entry_code(r: &Seg, s: &Seg) -> Nat {
    pair(&seg_code(r), &seg_code(s))
}

/// A partial function on reals: an enumerable graph of (input, output)
/// segment pairs, with an optional hint rule proposing graph positions
/// worth probing for a given query segment and output precision.
#[derive(Clone)]
pub struct PartialRealFun {
    name: String,
    graph: EnumerableSet,
    hints: Option<Arc<dyn Fn(&Seg, usize) -> Vec<Nat> + Send + Sync>>,
}

impl PartialRealFun {
    pub fn new(name: impl Into<String>, graph: EnumerableSet) -> Self {
        PartialRealFun { name: name.into(), graph, hints: None }
    }

    pub fn with_hints(mut self, hints: impl Fn(&Seg, usize) -> Vec<Nat> + Send + Sync + 'static) -> Self {
        self.hints = Some(Arc::new(hints));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &EnumerableSet {
        &self.graph
    }

    /// The entry enumerated at a position, if any. Positions enumerating a
    /// value that does not decode to a segment pair are malformed.
    pub fn entry_at(&self, position: &Nat) -> Result<Option<(Seg, Seg)>, RealError> {
        let v = self.graph.enumerator().query(position)?;
        if v == nat(0) {
            return Ok(None);
        }
        let c = v - nat(1);
        let (rc, sc) = unpair(&c);
        let r = seg_decode(&rc).map_err(|_| RealError::BadEntry { position: position.clone() })?;
        let s = seg_decode(&sc).map_err(|_| RealError::BadEntry { position: position.clone() })?;
        Ok(Some((r, s)))
    }

    /// Positions the hint rule proposes for a query segment at a stage.
    pub fn hint_positions(&self, query: &Seg, stage: usize) -> Vec<Nat> {
        match &self.hints {
            Some(h) => h(query, stage),
            None => Vec::new(),
        }
    }

    /// A finite graph: the listed entries at positions 0, 1, 2, ...
    pub fn from_entries(name: impl Into<String>, entries: Vec<(Seg, Seg)>) -> Self {
        let table = entries.iter().map(|(r, s)| entry_code(r, s) + nat(1)).collect();
        PartialRealFun::new(name, EnumerableSet::new(SeqOracle::from_table(table, nat(0))))
    }

    /// Checks the listed positions pairwise: whenever one input segment
    /// refines the other, the two output segments must touch, otherwise
    /// the graph maps overlapping inputs to separated outputs.
    pub fn check_consistency(&self, positions: &[Nat]) -> Result<(), RealError> {
        let mut entries = Vec::new();
        for p in positions {
            if let Some(e) = self.entry_at(p)? {
                entries.push((p.clone(), e));
            }
        }
        for (i, (p, (r1, s1))) in entries.iter().enumerate() {
            for (q, (r2, s2)) in entries.iter().skip(i + 1) {
                let comparable = r1.inside(r2) || r2.inside(r1);
                if comparable && !s1.touches(s2) {
                    return Err(RealError::GraphConsistency { left: p.clone(), right: q.clone() });
                }
            }
        }
        Ok(())
    }
}

/// All graph entries that swallow the query segment, in position order:
/// the bounded scan of low positions merged with the hint proposals.
pub fn apply_candidates(
    phi: &PartialRealFun,
    query: &Seg,
    stage: usize,
    budget: usize,
) -> Result<Vec<(Nat, Seg, Seg)>, RealError> {
    let mut positions: BTreeSet<Nat> = (0..budget as u64).map(nat).collect();
    positions.extend(phi.hint_positions(query, stage));
    let mut out = Vec::new();
    for p in positions {
        if let Some((r, s)) = phi.entry_at(&p)? {
            if query.inside(&r) {
                out.push((p, r, s));
            }
        }
    }
    Ok(out)
}

fn stage_pick(
    phi: &PartialRealFun,
    x: &Real,
    stage: usize,
    budget: usize,
    prev: Option<&Seg>,
) -> Result<Option<Seg>, RealError> {
    let query = x.approx(x.modulus(stage + 6));
    let want = pow2(-(stage as i64));
    let hit = apply_candidates(phi, &query, stage, budget)?.into_iter().find(|(_, _, s)| {
        &s.length() < &want && prev.map_or(true, |pv| s.strictly_inside(pv))
    });
    Ok(hit.map(|(_, _, s)| s))
}

/// Applies a graph to a real. Stage n searches for an entry whose input
/// swallows x at precision modulus(n + 6) and whose output is narrower
/// than 2^-n and strictly inside the previous stage's choice; the least
/// such position wins, so finite graphs resolve deterministically.
///
/// The first `depth + 1` stages run eagerly and any failure surfaces as
/// [`RealError::ApplyTimeout`] carrying the stage that starved. Deeper
/// stages run lazily on demand with the same budget; a starved lazy stage
/// panics with the function and stage in the message, since by then the
/// result has been handed out as a real number and there is no channel
/// left for an error value.
pub fn real_apply(phi: &PartialRealFun, x: &Real, depth: usize, budget: usize) -> Result<Real, RealError> {
    let mut chosen: BTreeMap<usize, Seg> = BTreeMap::new();
    let mut prev: Option<Seg> = None;
    for n in 0..=depth {
        match stage_pick(phi, x, n, budget, prev.as_ref())? {
            Some(s) => {
                chosen.insert(n, s.clone());
                prev = Some(s);
            }
            None => return Err(RealError::ApplyTimeout { precision: n, budget }),
        }
    }
    let name = format!("{}({})", phi.name, x.name());
    let memo = Arc::new(Mutex::new(chosen));
    let (phi2, x2, lazy_name) = (phi.clone(), x.clone(), name.clone());
    Ok(Real::new(
        name,
        move |n| {
            let mut memo = memo.lock().expect("application memo");
            let first_missing = memo.last_key_value().map(|(k, _)| k + 1).expect("eager stages present");
            for m in first_missing..=n {
                let prev = memo.get(&(m - 1)).cloned();
                let picked = stage_pick(&phi2, &x2, m, budget, prev.as_ref())
                    .unwrap_or_else(|e| panic!("{lazy_name}: graph query failed at stage {m}: {e}"))
                    .unwrap_or_else(|| {
                        panic!(
                            "{lazy_name}: no graph entry at precision {m} within budget {budget}; \
                             apply with a larger depth to surface this as an error"
                        )
                    });
                memo.insert(m, picked);
            }
            memo.get(&n).expect("stage just filled").clone()
        },
        |n| n,
    ))
}

/// The identity function: every position pair(c, c') with the first
/// segment inside the second enumerates that pair as an entry. Hints
/// propose the diagonal entries on grid cells around the query.
pub fn identity_graph() -> PartialRealFun {
    let en = SeqOracle::from_rule("identity graph", |p: &Nat| {
        let (rc, sc) = unpair(p);
        match (seg_decode(&rc), seg_decode(&sc)) {
            (Ok(r), Ok(s)) if r.inside(&s) => p + nat(1),
            _ => nat(0),
        }
    });
    PartialRealFun::new("identity", EnumerableSet::new(en)).with_hints(|query, stage| {
        let mut out = Vec::new();
        for scale in stage + 3..=stage + 6 {
            for cell in cells_covering(query, scale) {
                let c = seg_code(&cell);
                out.push(pair(&c, &c));
            }
        }
        out
    })
}

fn affine_image(a: &Rat, b: &Rat, r: &Seg) -> Seg {
    let scaled = seg_arith(SegOp::Mul, r, &Seg::point(a.clone()));
    seg_arith(SegOp::Add, &scaled, &Seg::point(b.clone()))
}

/// The affine map t -> a*t + b, optionally restricted to a domain
/// segment: an entry at pair(c, c') requires the image of the first
/// segment to land inside the second (and the first to refine the domain,
/// when one is given).
pub fn affine_graph(a: &Rat, b: &Rat, dom: Option<Seg>) -> PartialRealFun {
    let name = match &dom {
        Some(d) => format!("affine({a}t + {b} on {d})"),
        None => format!("affine({a}t + {b})"),
    };
    let (ar, br, dr) = (a.clone(), b.clone(), dom.clone());
    let en = SeqOracle::from_rule(format!("{name} graph"), move |p: &Nat| {
        let (rc, sc) = unpair(p);
        let (Ok(r), Ok(s)) = (seg_decode(&rc), seg_decode(&sc)) else {
            return nat(0);
        };
        if let Some(d) = &dr {
            if !r.inside(d) {
                return nat(0);
            }
        }
        if affine_image(&ar, &br, &r).inside(&s) {
            p + nat(1)
        } else {
            nat(0)
        }
    });
    let (ah, bh, dh) = (a.clone(), b.clone(), dom);
    let amp = amp_exponent(&ah.abs());
    PartialRealFun::new(name, EnumerableSet::new(en)).with_hints(move |query, stage| {
        let mut out = Vec::new();
        for scale in stage + amp + 3..=stage + amp + 6 {
            for cell in cells_covering(query, scale) {
                if let Some(d) = &dh {
                    if !cell.inside(d) {
                        continue;
                    }
                }
                // Several output scales, so that some proposed output cell
                // still fits strictly inside the previous stage's choice.
                let image = affine_image(&ah, &bh, &cell);
                for oscale in stage + 2..=stage + 4 {
                    for ocell in cells_covering(&image, oscale) {
                        out.push(pair(&seg_code(&cell), &seg_code(&ocell)));
                    }
                }
            }
        }
        out
    })
}

/// Restricts a graph to a separable set: position pair(p, q) enumerates
/// the entry (t, s) when p enumerates (r, s) in the original graph, q
/// enumerates t in the set's segment frame, and t refines r. Inputs
/// outside the closure lose all their entries, inputs inside keep enough
/// of them because frame segments shrink onto every member.
pub fn real_restrict(phi: &PartialRealFun, h: &CSReal) -> PartialRealFun {
    let frame = crate::csreal::real_frame_enum(h);
    let ph = phi.clone();
    let name = format!("{} on closure({})", phi.name(), h.gen().name());
    let en = SeqOracle::from_rule(format!("{name} graph"), move |p: &Nat| {
        let (pp, q) = unpair(p);
        let Some((r, s)) = ph.entry_at(&pp).ok().flatten() else {
            return nat(0);
        };
        let Ok(v) = frame.enumerator().query(&q) else {
            return nat(0);
        };
        if v == nat(0) {
            return nat(0);
        }
        let Ok(t) = seg_decode(&(v - nat(1))) else {
            return nat(0);
        };
        if t.inside(&r) {
            entry_code(&t, &s) + nat(1)
        } else {
            nat(0)
        }
    });
    let (ph2, h2) = (phi.clone(), h.clone());
    PartialRealFun::new(name, EnumerableSet::new(en)).with_hints(move |query, stage| {
        let mut out = Vec::new();
        for pp in ph2.hint_positions(query, stage) {
            let Some((r, _)) = ph2.entry_at(&pp).ok().flatten() else {
                continue;
            };
            if !query.inside(&r) {
                continue;
            }
            if let Some((m, j)) = h2.find_generator_inside(&r, 8) {
                let q = pair(&pair(&nat(m as u64), &nat(j as u64)), &seg_code(&r));
                out.push(pair(&pp, &q));
            }
        }
        out
    })
}

/// Extends a graph defined between x and y to all reals by clamping:
/// position pair(p, pair(c, k)) enumerates (u, s) when p enumerates
/// (r, s), c codes u, and the stage-k segment clamp min(y, max(x, u))
/// refines r. The clamp is computed in segment arithmetic, so the entry
/// is sound for every real in u.
pub fn real_extend_clamp(phi: &PartialRealFun, x: &Real, y: &Real) -> PartialRealFun {
    let name = format!("extend({}, [{}, {}])", phi.name(), x.name(), y.name());
    let ph = phi.clone();
    let (xr, yr) = (x.clone(), y.clone());
    let en = SeqOracle::from_rule(format!("{name} graph"), move |p: &Nat| {
        let (pp, uk) = unpair(p);
        let (uc, kc) = unpair(&uk);
        let Some(k) = kc.to_usize().filter(|k| *k <= MAX_GRID_SCALE) else {
            return nat(0);
        };
        let Ok(u) = seg_decode(&uc) else {
            return nat(0);
        };
        let Some((r, s)) = ph.entry_at(&pp).ok().flatten() else {
            return nat(0);
        };
        let clamped = seg_min(&yr.approx(k), &seg_max(&xr.approx(k), &u));
        if clamped.inside(&r) {
            entry_code(&u, &s) + nat(1)
        } else {
            nat(0)
        }
    });
    let (ph2, xh, yh) = (phi.clone(), x.clone(), y.clone());
    PartialRealFun::new(name, EnumerableSet::new(en)).with_hints(move |query, stage| {
        let k = stage + 6;
        let (xk, yk) = (xh.approx(k), yh.approx(k));
        let mut out = Vec::new();
        for scale in stage + 3..=stage + 6 {
            for ucell in cells_covering(query, scale) {
                let clamped = seg_min(&yk, &seg_max(&xk, &ucell));
                let mut pps: Vec<Nat> = (0..32u64).map(nat).collect();
                pps.extend(ph2.hint_positions(&clamped, stage));
                for pp in pps {
                    let Some((r, _)) = ph2.entry_at(&pp).ok().flatten() else {
                        continue;
                    };
                    if clamped.inside(&r) {
                        out.push(pair(&pp, &pair(&seg_code(&ucell), &nat(k as u64))));
                    }
                }
            }
        }
        out
    })
}

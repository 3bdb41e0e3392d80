//! Spreads and fans: decidable frames with the extension law.
//!
//! A spread is carried by the characteristic oracle of its frame. The frame
//! law, that a code is admissible exactly when some immediate prolongation
//! is, cannot be decided outright, so [`Spread::check_frame_law`] verifies it
//! over a bounded range of codes and prolongation items. A fan declares a
//! branching bound on top; a manifest fan additionally lists each level as
//! one coded binary sequence, so that level membership becomes a lookup.

use num_traits::One;
use seqcode::{decode, encode, FinSeq, Nat, SeqCode};
use streams::{DecidableSet, SeqOracle, StreamError};

use crate::{CsetError, WALK_NODE_CAP};

/// A spread, presented by the decidable frame of its admissible prefixes.
#[derive(Debug, Clone)]
pub struct Spread {
    frame_chi: DecidableSet,
}

impl Spread {
    pub fn new(frame_chi: DecidableSet) -> Self {
        Spread { frame_chi }
    }

    pub fn frame(&self) -> &DecidableSet {
        &self.frame_chi
    }

    /// Whether the prefix coded by `s` is admissible.
    pub fn admits(&self, s: &SeqCode) -> Result<bool, StreamError> {
        self.frame_chi.contains(s)
    }

    /// Checks the frame law over all codes below `code_bound`, probing
    /// prolongation items below `width`: an admissible code must have an
    /// admissible immediate prolongation in range, and an admissible
    /// prolongation forces its parent in. Also requires the empty code.
    pub fn check_frame_law(&self, code_bound: u64, width: u64) -> Result<(), CsetError> {
        if !self.admits(&Nat::from(0u32))? {
            return Err(CsetError::UninhabitedFrame);
        }
        for raw in 0..code_bound {
            let s = Nat::from(raw);
            let parent_in = self.admits(&s)?;
            let items = decode(&s);
            let mut child_in = None;
            for k in 0..width {
                let child = encode(&items.append(Nat::from(k)));
                if self.admits(&child)? {
                    child_in = Some(child);
                    break;
                }
            }
            match (parent_in, child_in) {
                (true, None) => return Err(CsetError::DeadEnd { code: s, width }),
                (false, Some(child)) => return Err(CsetError::OrphanNode { code: child }),
                _ => {}
            }
        }
        Ok(())
    }

    /// The full binary tree.
    pub fn cantor() -> Self {
        let chi = SeqOracle::from_rule("binary-frame", |s| {
            Nat::from(u8::from(decode(s).is_binary()))
        });
        Spread::new(DecidableSet::new(chi))
    }

    /// The single constant-zero branch.
    pub fn singleton_zero() -> Self {
        let chi = SeqOracle::from_rule("zero-frame", |s| {
            let all_zero = decode(s).items().iter().all(|m| m == &Nat::from(0u32));
            Nat::from(u8::from(all_zero))
        });
        Spread::new(DecidableSet::new(chi))
    }

    /// Binary sequences whose items past position 0 are all zero: the
    /// binary tree pruned so that only the first item branches.
    pub fn zero_tail() -> Self {
        let chi = SeqOracle::from_rule("zero-tail-frame", |s| {
            let items = decode(s);
            let ok = items.is_binary()
                && items.items().iter().skip(1).all(|m| m == &Nat::from(0u32));
            Nat::from(u8::from(ok))
        });
        Spread::new(DecidableSet::new(chi))
    }
}

/// A spread with a declared branching bound: admissible prolongations only
/// ever append items below `width`.
#[derive(Debug, Clone)]
pub struct Fan {
    spread: Spread,
    width: u64,
}

impl Fan {
    pub fn new(spread: Spread, width: u64) -> Self {
        Fan { spread, width }
    }

    pub fn spread(&self) -> &Spread {
        &self.spread
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    /// The full binary fan.
    pub fn cantor() -> Self {
        Fan::new(Spread::cantor(), 2)
    }

    /// Admissible codes of each length up to `depth`, by tree walk from the
    /// root, probing items below the declared width.
    pub fn levels(&self, depth: usize) -> Result<Vec<Vec<SeqCode>>, CsetError> {
        let mut levels: Vec<Vec<SeqCode>> = Vec::with_capacity(depth + 1);
        let root = Nat::from(0u32);
        if !self.spread.admits(&root)? {
            levels.push(Vec::new());
            return Ok(levels);
        }
        levels.push(vec![root]);
        let mut visited = 1usize;
        for _ in 0..depth {
            let mut next = Vec::new();
            for s in levels.last().expect("at least the root level") {
                let items = decode(s);
                for k in 0..self.width {
                    let child = encode(&items.append(Nat::from(k)));
                    if self.spread.admits(&child)? {
                        next.push(child);
                        visited += 1;
                        if visited > WALK_NODE_CAP {
                            return Err(CsetError::WalkBudget { nodes: visited });
                        }
                    }
                }
            }
            next.sort();
            levels.push(next);
        }
        Ok(levels)
    }

    /// Bounded probe of the branching declaration: no code below
    /// `code_bound` may have an admissible prolongation with an item in
    /// `width..probe_width`.
    pub fn check_branching(&self, code_bound: u64, probe_width: u64) -> Result<(), CsetError> {
        for raw in 0..code_bound {
            let s = Nat::from(raw);
            if !self.spread.admits(&s)? {
                continue;
            }
            let items = decode(&s);
            for k in self.width..probe_width {
                let child = encode(&items.append(Nat::from(k)));
                if self.spread.admits(&child)? {
                    return Err(CsetError::WidthExceeded {
                        code: child,
                        item: k,
                        width: self.width,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A fan together with an explicit listing of its levels: `gamma(n)` codes
/// the binary sequence whose 1-positions are exactly the admissible codes of
/// length n, and `delta(n)` is its length, a strict bound on those codes.
#[derive(Debug, Clone)]
pub struct ManifestFan {
    fan: Fan,
    gamma: SeqOracle,
    levels: Vec<Vec<SeqCode>>,
}

impl ManifestFan {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// The level-listing oracle. Queries beyond the materialized depth fail
    /// with a budget error instead of guessing.
    pub fn gamma(&self) -> &SeqOracle {
        &self.gamma
    }

    /// Depth up to which levels are materialized.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// The admissible codes of length `n`, from the materialized listing.
    pub fn level(&self, n: usize) -> Option<&[SeqCode]> {
        self.levels.get(n).map(|v| v.as_slice())
    }

    /// length(gamma(n)), the strict code bound for level n.
    pub fn delta(&self, n: usize) -> Option<Nat> {
        self.levels
            .get(n)
            .map(|level| match level.iter().max() {
                Some(max) => max + Nat::one(),
                None => Nat::from(0u32),
            })
    }
}

/// Materializes the levels of a fan up to `depth` and packages them as a
/// manifest fan. Every code on every level must stay below `code_bound`,
/// otherwise the level listing would not fit its declared coding.
pub fn fan_manifest(fan: &Fan, code_bound: &Nat, depth: usize) -> Result<ManifestFan, CsetError> {
    let levels = fan.levels(depth)?;
    for (n, level) in levels.iter().enumerate() {
        if let Some(max) = level.iter().max() {
            if max >= code_bound {
                return Err(CsetError::LevelBoundExceeded {
                    level: n,
                    code: max.clone(),
                    bound: code_bound.clone(),
                });
            }
        }
    }
    // Level codes are computed on first query and memoized by the oracle;
    // deep levels with large codes cost nothing until actually asked for.
    let gamma_levels = levels.clone();
    let name = format!("gamma({})", fan.spread().frame().chi().name());
    let gamma = SeqOracle::from_fallible_rule(name.clone(), move |n| {
        match usize::try_from(n).ok().and_then(|i| gamma_levels.get(i)) {
            Some(level) => Ok(level_code(level)),
            None => Err(StreamError::BudgetExhausted {
                name: name.clone(),
                index: n.clone(),
            }),
        }
    });
    Ok(ManifestFan {
        fan: fan.clone(),
        gamma,
        levels,
    })
}

/// Codes a level as the binary sequence with 1 exactly at the listed codes.
/// The sequence runs up to the largest listed code, so its length is the
/// level's delta bound; an empty level codes the empty sequence.
fn level_code(level: &[SeqCode]) -> Nat {
    let max = match level.iter().max() {
        Some(max) => max.clone(),
        None => return Nat::from(0u32),
    };
    let len = usize::try_from(&max).expect("materialized level codes fit a machine word") + 1;
    let mut bits = vec![Nat::from(0u32); len];
    for code in level {
        let idx = usize::try_from(code).expect("materialized level codes fit a machine word");
        bits[idx] = Nat::one();
    }
    encode(&FinSeq::new(bits))
}

//! A minimal counter machine with a canonical configuration coding.
//!
//! Conventions: the input is placed in register 1, the output is read from
//! register 0. `INC r` increments, `DECJZ r l` jumps to l when r is zero and
//! decrements otherwise, `HALT` stops. The machine also halts when the
//! program counter runs past the end. Jump targets may point one past the
//! last instruction.

use crate::KleeneError;
use num_traits::{ToPrimitive, Zero};
use seqcode::{decode, encode, pair, unpair, FinSeq, Nat, SeqCode};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instr {
    Inc(u64),
    Decjz(u64, u64),
    Halt,
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Inc(r) => write!(f, "INC {r}"),
            Instr::Decjz(r, l) => write!(f, "DECJZ {r} {l}"),
            Instr::Halt => write!(f, "HALT"),
        }
    }
}

impl Instr {
    /// Numeric code: INC r ↦ pair(0,r), DECJZ r l ↦ pair(1,pair(r,l)),
    /// HALT ↦ pair(2,0).
    pub fn code(&self) -> Nat {
        match self {
            Instr::Inc(r) => pair(&Nat::zero(), &Nat::from(*r)),
            Instr::Decjz(r, l) => pair(&Nat::from(1u32), &pair(&Nat::from(*r), &Nat::from(*l))),
            Instr::Halt => pair(&Nat::from(2u32), &Nat::zero()),
        }
    }

    fn from_code(code: &Nat) -> Option<Instr> {
        let (tag, payload) = unpair(code);
        match tag.to_u64()? {
            0 => Some(Instr::Inc(payload.to_u64()?)),
            1 => {
                let (r, l) = unpair(&payload);
                Some(Instr::Decjz(r.to_u64()?, l.to_u64()?))
            }
            2 if payload.is_zero() => Some(Instr::Halt),
            _ => None,
        }
    }
}

/// A validated program: every jump target is < instruction count + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    instrs: Vec<Instr>,
}

impl Program {
    pub fn new(instrs: Vec<Instr>) -> Result<Self, KleeneError> {
        let len = instrs.len();
        for instr in &instrs {
            if let Instr::Decjz(_, l) = instr {
                if *l as usize > len {
                    return Err(KleeneError::BadJump { target: *l, len });
                }
            }
        }
        Ok(Program { instrs })
    }

    /// The empty program: halts immediately with output 0 on every input.
    pub fn empty() -> Self {
        Program { instrs: Vec::new() }
    }

    /// Decodes a program index. Codes that do not decode to a valid program
    /// behave as the empty program, so every index is total.
    pub fn from_code(e: &SeqCode) -> Self {
        let items = decode(e);
        let Some(instrs) = items
            .items()
            .iter()
            .map(Instr::from_code)
            .collect::<Option<Vec<_>>>()
        else {
            return Program::empty();
        };
        Program::new(instrs).unwrap_or_else(|_| Program::empty())
    }

    pub fn code(&self) -> SeqCode {
        encode(&FinSeq::new(self.instrs.iter().map(Instr::code).collect()))
    }

    /// Parses the one-instruction-per-line text form.
    pub fn parse(text: &str) -> Result<Self, KleeneError> {
        let mut instrs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap_or_default().to_ascii_uppercase();
            let parse_num = |s: Option<&str>, what: &str| -> Result<u64, KleeneError> {
                s.ok_or_else(|| KleeneError::ParseError {
                    line: i + 1,
                    msg: format!("missing {what}"),
                })?
                .parse()
                .map_err(|e| KleeneError::ParseError {
                    line: i + 1,
                    msg: format!("bad {what}: {e}"),
                })
            };
            let instr = match op.as_str() {
                "INC" => Instr::Inc(parse_num(parts.next(), "register")?),
                "DECJZ" => Instr::Decjz(
                    parse_num(parts.next(), "register")?,
                    parse_num(parts.next(), "jump target")?,
                ),
                "HALT" => Instr::Halt,
                other => {
                    return Err(KleeneError::ParseError {
                        line: i + 1,
                        msg: format!("unknown instruction {other:?}"),
                    })
                }
            };
            if parts.next().is_some() {
                return Err(KleeneError::ParseError {
                    line: i + 1,
                    msg: "trailing tokens".into(),
                });
            }
            instrs.push(instr);
        }
        Program::new(instrs)
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn listing(&self) -> Vec<String> {
        self.instrs.iter().map(|i| i.to_string()).collect()
    }
}

/// A machine configuration: program counter plus sparse registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pc: usize,
    regs: BTreeMap<u64, Nat>,
}

impl State {
    /// Initial configuration for input n: register 1 holds n, all others 0.
    pub fn initial(n: &Nat) -> Self {
        let mut regs = BTreeMap::new();
        if !n.is_zero() {
            regs.insert(1, n.clone());
        }
        State { pc: 0, regs }
    }

    pub fn halting(&self, prog: &Program) -> bool {
        self.pc >= prog.instrs.len() || prog.instrs[self.pc] == Instr::Halt
    }

    /// Executes one instruction. Caller must ensure the state is not halting.
    pub fn step(&mut self, prog: &Program) {
        match &prog.instrs[self.pc] {
            Instr::Inc(r) => {
                let v = self.regs.entry(*r).or_default();
                *v += 1u32;
                self.pc += 1;
            }
            Instr::Decjz(r, l) => {
                let v = self.regs.entry(*r).or_default();
                if v.is_zero() {
                    self.pc = *l as usize;
                } else {
                    *v -= 1u32;
                    self.pc += 1;
                }
            }
            Instr::Halt => unreachable!("step on a halting state"),
        }
        self.regs.retain(|_, v| !v.is_zero());
    }

    pub fn output(&self) -> Nat {
        self.regs.get(&0).cloned().unwrap_or_default()
    }

    /// Canonical code: pair(pc, code of ⟨r0, …, r_max⟩ with trailing zeros
    /// trimmed). All configurations reachable from canonical inputs keep the
    /// register list trimmed, so the coding is injective on them.
    pub fn config_code(&self) -> Nat {
        let max = self.regs.keys().next_back().copied();
        let regs = match max {
            None => FinSeq::empty(),
            Some(m) => {
                let mut items = Vec::with_capacity(m as usize + 1);
                for i in 0..=m {
                    items.push(self.regs.get(&i).cloned().unwrap_or_default());
                }
                FinSeq::new(items)
            }
        };
        pair(&Nat::from(self.pc), &encode(&regs))
    }
}

/// Result of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted { output: Nat, steps: u64 },
    /// The budget ran out before a halting configuration appeared. Says
    /// nothing about actual divergence.
    DivergentSoFar { steps: u64 },
}

impl RunOutcome {
    pub fn halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}

/// Runs the program coded by `e` on input `n` for at most `max_steps`
/// transitions. Deterministic; invalid codes halt immediately with output 0.
pub fn run_bounded(e: &SeqCode, n: &Nat, max_steps: u64) -> RunOutcome {
    run_program(&Program::from_code(e), n, max_steps)
}

/// Same as [`run_bounded`] but for an already-decoded program.
pub fn run_program(prog: &Program, n: &Nat, max_steps: u64) -> RunOutcome {
    let mut state = State::initial(n);
    for steps in 0..=max_steps {
        if state.halting(prog) {
            return RunOutcome::Halted {
                output: state.output(),
                steps,
            };
        }
        if steps == max_steps {
            break;
        }
        state.step(prog);
    }
    RunOutcome::DivergentSoFar { steps: max_steps }
}

/// The configuration sequence of a run: every configuration from the initial
/// one up to either the first halting configuration (halted = true) or the
/// step budget (halted = false).
pub fn trace_configs(prog: &Program, n: &Nat, max_steps: u64) -> (Vec<Nat>, bool) {
    let mut state = State::initial(n);
    let mut configs = vec![state.config_code()];
    for _ in 0..max_steps {
        if state.halting(prog) {
            return (configs, true);
        }
        state.step(prog);
        configs.push(state.config_code());
    }
    (configs, state.halting(prog))
}

/// The infinite sequence computed by program `e`, as a budgeted oracle:
/// querying an index on which the program exceeds `max_steps` fails with
/// budget exhaustion rather than looping.
pub fn machine_oracle(e: &SeqCode, max_steps: u64) -> streams::SeqOracle {
    let prog = Program::from_code(e);
    let name = format!("machine:{e}");
    let err_name = name.clone();
    streams::SeqOracle::from_fallible_rule(name, move |n| {
        match run_program(&prog, n, max_steps) {
            RunOutcome::Halted { output, .. } => Ok(output),
            RunOutcome::DivergentSoFar { .. } => Err(streams::StreamError::BudgetExhausted {
                name: err_name.clone(),
                index: n.clone(),
            }),
        }
    })
}

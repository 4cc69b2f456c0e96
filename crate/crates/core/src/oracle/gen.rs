//! Seeded random programs: acyclic direct calls (function `i` only calls
//! `j > i`), every read of a register after some write to it, one trailing
//! return per function.

use crate::ir::{parse_program, BaseType, Program, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub functions: usize,
    pub instrs: usize,
    /// Functions `0..chain` each call their successor.
    pub chain: usize,
    pub max_formals: usize,
    pub max_returns: usize,
}

impl GenConfig {
    pub fn new(functions: usize, instrs: usize) -> Self {
        GenConfig {
            functions: functions.max(1),
            instrs: instrs.max(1),
            chain: 0,
            max_formals: 3,
            max_returns: 2,
        }
    }
}

pub fn gen_program(seed: u64, functions: usize, instrs: usize) -> Program {
    generate(seed, GenConfig::new(functions, instrs))
}

/// Member `seed` of the differential-testing corpus: 1–5 functions of
/// 10–40 instructions each.
pub fn corpus_program(seed: u64) -> Program {
    gen_program(seed, 1 + (seed % 5) as usize, 10 + (seed % 31) as usize)
}

/// Deep call chains: 20 functions of 30 instructions, the first ten calling
/// each other in sequence.
pub fn gen_chain(seed: u64) -> Program {
    generate(
        seed,
        GenConfig {
            chain: 10,
            ..GenConfig::new(20, 30)
        },
    )
}

struct Sig {
    formals: usize,
    returns: usize,
}

fn pointer_type(rng: &mut ChaCha8Rng) -> Type {
    let base = *BaseType::ALL.choose(rng).expect("non-empty");
    Type::new(base, rng.gen_range(1..=Type::MAX_DEPTH)).expect("depth in range")
}

pub fn generate(seed: u64, cfg: GenConfig) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.functions.max(1);
    let sigs: Vec<Sig> = (0..n)
        .map(|i| Sig {
            formals: if i == 0 {
                0
            } else {
                rng.gen_range(1..=cfg.max_formals.max(1))
            },
            returns: rng.gen_range(0..=cfg.max_returns),
        })
        .collect();
    let mut text = String::new();
    for i in 0..n {
        let formals: Vec<String> = (0..sigs[i].formals).map(|k| format!("a{k}")).collect();
        let _ = writeln!(
            text,
            "fun f{i}({}): {} {{",
            formals.join(", "),
            sigs[i].returns
        );
        let mut defined = formals.clone();
        let mut fresh = 0usize;
        let new_reg = |fresh: &mut usize| {
            *fresh += 1;
            format!("r{}", *fresh - 1)
        };
        let body = cfg.instrs.max(1) - 1;
        let must_call = (i + 1 < cfg.chain.min(n)).then_some(i + 1);
        let call_at = must_call.map(|_| rng.gen_range(body / 2..body.max(1)));
        for step in 0..body {
            let forced = call_at == Some(step);
            let kind = if defined.is_empty() {
                0
            } else if forced {
                12
            } else {
                rng.gen_range(0..12)
            };
            let pick = |rng: &mut ChaCha8Rng, d: &[String]| d.choose(rng).expect("defined").clone();
            let line = match kind {
                0..=2 => {
                    let dest = new_reg(&mut fresh);
                    defined.push(dest.clone());
                    format!("{dest} = alloc {}", rng.gen_range(1..=2))
                }
                3 if i + 1 < n || forced => {
                    let callee = must_call
                        .filter(|_| forced)
                        .unwrap_or_else(|| rng.gen_range(i + 1..n));
                    let args: Vec<String> = (0..sigs[callee].formals)
                        .map(|_| pick(&mut rng, &defined))
                        .collect();
                    let dests: Vec<String> = (0..sigs[callee].returns)
                        .map(|_| {
                            if rng.gen_bool(0.7) {
                                new_reg(&mut fresh)
                            } else {
                                pick(&mut rng, &defined)
                            }
                        })
                        .collect();
                    defined.extend(dests.iter().cloned());
                    format!("({}) = f{callee}({})", dests.join(", "), args.join(", "))
                }
                12 => {
                    let callee = must_call.expect("forced call has a target");
                    let args: Vec<String> = (0..sigs[callee].formals)
                        .map(|_| pick(&mut rng, &defined))
                        .collect();
                    let dests: Vec<String> = (0..sigs[callee].returns)
                        .map(|_| new_reg(&mut fresh))
                        .collect();
                    defined.extend(dests.iter().cloned());
                    format!("({}) = f{callee}({})", dests.join(", "), args.join(", "))
                }
                3..=6 => {
                    let src = pick(&mut rng, &defined);
                    let dest = if rng.gen_bool(0.8) {
                        new_reg(&mut fresh)
                    } else {
                        pick(&mut rng, &defined)
                    };
                    defined.push(dest.clone());
                    format!("{dest} = cast {}, {src}", pointer_type(&mut rng))
                }
                7 | 8 => {
                    let (value, ptr) = (pick(&mut rng, &defined), pick(&mut rng, &defined));
                    format!("store {value}, {} {ptr}", pointer_type(&mut rng))
                }
                9 | 10 => {
                    let src = pick(&mut rng, &defined);
                    let dest = new_reg(&mut fresh);
                    defined.push(dest.clone());
                    format!("{dest} = load {} {src}", pointer_type(&mut rng))
                }
                _ => {
                    let src = pick(&mut rng, &defined);
                    let dest = new_reg(&mut fresh);
                    defined.push(dest.clone());
                    let field = if rng.gen_bool(0.5) { "a" } else { "b" };
                    format!("{dest} = gep {} {src}, {field}", pointer_type(&mut rng))
                }
            };
            let _ = writeln!(text, "  {line}");
        }
        if defined.is_empty() && sigs[i].returns > 0 {
            let _ = writeln!(text, "  r{fresh} = alloc 1");
            defined.push(format!("r{fresh}"));
        }
        let values: Vec<String> = (0..sigs[i].returns)
            .map(|_| defined.choose(&mut rng).expect("defined").clone())
            .collect();
        if values.is_empty() {
            let _ = writeln!(text, "  return");
        } else {
            let _ = writeln!(text, "  return {}", values.join(", "));
        }
        let _ = writeln!(text, "}}");
    }
    parse_program(&text).expect("generated program parses")
}

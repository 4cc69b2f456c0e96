//! Hand-translated example programs used by tests, benches and the CLI.

use crate::ir::{parse_program, InstrId, Program};
use std::collections::BTreeSet;

/// Strings threaded through `bar`, `foo` and `getStr`.
pub const P1: &str = include_str!("../fixtures/p1.ir");

/// Two tagged elements whose payloads have different pointer types.
pub const P2: &str = include_str!("../fixtures/p2.ir");

pub fn p1() -> Program {
    parse_program(P1).expect("P1 fixture parses")
}

pub fn p2() -> Program {
    parse_program(P2).expect("P2 fixture parses")
}

/// Overflow-checker fixtures: `(name, source)`. Each source starts with
/// `# checks: N` and `# aliases: instr@site ...` header lines giving the
/// expected andersen-ci report.
pub const OVERFLOW: [(&str, &str); 20] = [
    (
        "01_store_past_single",
        include_str!("../fixtures/overflow/01_store_past_single.ir"),
    ),
    (
        "02_two_fields_safe",
        include_str!("../fixtures/overflow/02_two_fields_safe.ir"),
    ),
    (
        "03_no_field_b",
        include_str!("../fixtures/overflow/03_no_field_b.ir"),
    ),
    (
        "04_merged_sites",
        include_str!("../fixtures/overflow/04_merged_sites.ir"),
    ),
    (
        "05_field_b_of_b",
        include_str!("../fixtures/overflow/05_field_b_of_b.ir"),
    ),
    (
        "06_through_memory",
        include_str!("../fixtures/overflow/06_through_memory.ir"),
    ),
    (
        "07_callee_selects_b",
        include_str!("../fixtures/overflow/07_callee_selects_b.ir"),
    ),
    (
        "08_returned_b_pointer",
        include_str!("../fixtures/overflow/08_returned_b_pointer.ir"),
    ),
    (
        "09_gep_a_then_b",
        include_str!("../fixtures/overflow/09_gep_a_then_b.ir"),
    ),
    (
        "10_three_sites",
        include_str!("../fixtures/overflow/10_three_sites.ir"),
    ),
    (
        "11_pointer_in_field_b",
        include_str!("../fixtures/overflow/11_pointer_in_field_b.ir"),
    ),
    (
        "12_store_in_callee",
        include_str!("../fixtures/overflow/12_store_in_callee.ir"),
    ),
    (
        "13_fields_kept_apart",
        include_str!("../fixtures/overflow/13_fields_kept_apart.ir"),
    ),
    (
        "14_reassigned_register",
        include_str!("../fixtures/overflow/14_reassigned_register.ir"),
    ),
    (
        "15_call_chain",
        include_str!("../fixtures/overflow/15_call_chain.ir"),
    ),
    (
        "16_two_levels",
        include_str!("../fixtures/overflow/16_two_levels.ir"),
    ),
    (
        "17_identity_conflation",
        include_str!("../fixtures/overflow/17_identity_conflation.ir"),
    ),
    (
        "18_value_not_address",
        include_str!("../fixtures/overflow/18_value_not_address.ir"),
    ),
    (
        "19_address_formation",
        include_str!("../fixtures/overflow/19_address_formation.ir"),
    ),
    (
        "20_self_loop",
        include_str!("../fixtures/overflow/20_self_loop.ir"),
    ),
];

/// A checker fixture with its expected Checks count and Aliases pairs.
#[derive(Clone, Debug)]
pub struct OverflowFixture {
    pub name: &'static str,
    pub program: Program,
    pub checks: usize,
    pub aliases: BTreeSet<(InstrId, InstrId)>,
}

fn header<'a>(src: &'a str, key: &str) -> &'a str {
    src.lines()
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(':'))
        .unwrap_or_else(|| panic!("fixture header `{key}` missing"))
        .trim()
}

pub fn overflow_fixtures() -> Vec<OverflowFixture> {
    OVERFLOW
        .iter()
        .map(|&(name, src)| {
            let aliases = header(src, "aliases")
                .split_whitespace()
                .map(|pair| {
                    let (i, s) = pair.split_once('@').expect("instr@site");
                    (
                        InstrId(i.parse().expect("instr id")),
                        InstrId(s.parse().expect("site id")),
                    )
                })
                .collect();
            OverflowFixture {
                name,
                program: parse_program(src).unwrap_or_else(|e| panic!("{name}: {e}")),
                checks: header(src, "checks").parse().expect("check count"),
                aliases,
            }
        })
        .collect()
}

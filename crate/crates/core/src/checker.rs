//! Field-overflow client: memory accesses that may reach field `b` of an
//! allocation that only has one field.

use crate::domain::{AbstractObject, Node, PointsToGraph};
use crate::interproc::AnalysisResult;
use crate::ir::{Field, FuncId, InstrId, InstrKind, LInstr, RegId};
use crate::local::access_tag;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One (access, allocation site) candidate overflow.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AliasFinding {
    pub function: String,
    pub instr: u32,
    pub site: u32,
    /// Pointer operand of the access.
    pub register: String,
    /// Index of the group holding the field-b cell, in the function graph's
    /// canonical group order.
    pub group: usize,
    pub tag: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OverflowReport {
    pub variant: String,
    /// Accesses whose operand may point to some field-b cell.
    pub checks: usize,
    pub checked: Vec<u32>,
    pub aliases: Vec<AliasFinding>,
}

impl OverflowReport {
    pub fn alias_pairs(&self) -> BTreeSet<(InstrId, InstrId)> {
        self.aliases
            .iter()
            .map(|a| (InstrId(a.instr), InstrId(a.site)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn group_ids(g: &PointsToGraph) -> BTreeMap<Node, usize> {
    g.groups()
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect()
}

pub fn check_overflow(r: &AnalysisResult) -> OverflowReport {
    let p = r.program();
    let typed = r.variant().is_typed();
    let mut report = OverflowReport {
        variant: r.variant().name().to_string(),
        ..Default::default()
    };
    let mut ids: BTreeMap<FuncId, BTreeMap<Node, usize>> = BTreeMap::new();
    for f in p.ids() {
        let g = r.graph(f);
        let owner = if r.is_context_sensitive() {
            f
        } else {
            FuncId(0)
        };
        for instr in &r.lowered().func(f).body {
            let (id, operand, tag) = match *instr {
                LInstr::Load {
                    id, src, access, ..
                } => (id, src, access_tag(typed, access)),
                LInstr::Store {
                    id, ptr, access, ..
                } => (id, ptr, access_tag(typed, access)),
                LInstr::Gep { id, src, .. } => {
                    let Some(InstrKind::Gep { ty, .. }) = p.instr(id).map(|i| &i.kind) else {
                        unreachable!("lowered gep has a source gep")
                    };
                    (id, src, access_tag(typed, ty.pointee().unwrap_or(*ty)))
                }
                _ => continue,
            };
            let cells: Vec<AbstractObject> = g
                .pts_objects(operand)
                .into_iter()
                .filter(|o| {
                    matches!(
                        o,
                        AbstractObject::AllocCell {
                            field: Field::B,
                            ..
                        }
                    )
                })
                .collect();
            if cells.is_empty() {
                continue;
            }
            report.checks += 1;
            report.checked.push(id.0);
            let ids = ids.entry(owner).or_insert_with(|| group_ids(g));
            for cell in cells {
                let site = cell.alloc_site().expect("alloc cell");
                if p.alloc_size(site) != Some(1) {
                    continue;
                }
                let node = g.find(g.node_of(cell).expect("pointed-to cell is in the graph"));
                report.aliases.push(AliasFinding {
                    function: p.function(f).name.clone(),
                    instr: id.0,
                    site: site.0,
                    register: reg_label(r, operand),
                    group: ids[&node],
                    tag: tag.to_string(),
                });
            }
        }
    }
    report.aliases.sort_by_key(|a| (a.instr, a.site));
    report
}

fn reg_label(r: &AnalysisResult, reg: RegId) -> String {
    r.lowered().regs.name(reg).to_string()
}

/// Checks/Aliases counts of several variants on one program.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecisionRow {
    pub variant: String,
    pub checks: usize,
    pub aliases: usize,
    /// Relative to the most precise row; absent when that count is zero.
    pub checks_ratio: Option<f64>,
    pub aliases_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecisionTable {
    pub rows: Vec<PrecisionRow>,
}

/// Rows ordered most precise first (fewest aliases, then fewest checks).
pub fn precision_summary(reports: &[OverflowReport]) -> PrecisionTable {
    let mut counts: Vec<(usize, usize, &str)> = reports
        .iter()
        .map(|r| (r.aliases.len(), r.checks, r.variant.as_str()))
        .collect();
    counts.sort();
    let base = counts.first().copied();
    let ratio = |v: usize, b: usize| (b > 0).then(|| v as f64 / b as f64);
    let rows = counts
        .iter()
        .map(|&(aliases, checks, variant)| {
            let (ba, bc, _) = base.expect("non-empty");
            PrecisionRow {
                variant: variant.to_string(),
                checks,
                aliases,
                checks_ratio: ratio(checks, bc),
                aliases_ratio: ratio(aliases, ba),
            }
        })
        .collect();
    PrecisionTable { rows }
}

impl fmt::Display for PrecisionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:>8} {:>8} {:>8} {:>8}",
            "variant", "checks", "ratio", "aliases", "ratio"
        )?;
        let show = |r: Option<f64>| r.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
        for r in &self.rows {
            writeln!(
                f,
                "{:<14} {:>8} {:>8} {:>8} {:>8}",
                r.variant,
                r.checks,
                show(r.checks_ratio),
                r.aliases,
                show(r.aliases_ratio)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interproc::{run_analysis, AnalysisVariant};
    use crate::ir::parse_program;

    fn check(src: &str, v: AnalysisVariant) -> OverflowReport {
        check_overflow(&run_analysis(&parse_program(src).unwrap(), v).unwrap())
    }

    #[test]
    fn store_past_single_field() {
        let r = check(
            "fun main(): 0 {\n p = alloc 1\n q = gep char* p, b\n x = alloc 1\n store x, char* q\n return\n}\n",
            AnalysisVariant::AndersenCi,
        );
        assert_eq!(r.checks, 1);
        assert_eq!(r.alias_pairs(), BTreeSet::from([(InstrId(3), InstrId(0))]));
        assert_eq!(r.aliases[0].register, "q");
    }

    #[test]
    fn two_field_allocation_is_checked_but_safe() {
        let r = check(
            "fun main(): 0 {\n p = alloc 2\n q = gep char* p, b\n x = load char* q\n return\n}\n",
            AnalysisVariant::AndersenCi,
        );
        assert_eq!(r.checks, 1);
        assert!(r.aliases.is_empty());
    }

    #[test]
    fn no_gep_b_no_checks() {
        let r = check(
            "fun main(): 0 {\n p = alloc 1\n x = load int* p\n return\n}\n",
            AnalysisVariant::Dsa,
        );
        assert_eq!(r.checks, 0);
        assert!(r.aliases.is_empty());
    }

    #[test]
    fn summary_orders_and_ratios() {
        let mk = |v: &str, checks, n| OverflowReport {
            variant: v.into(),
            checks,
            aliases: (0..n)
                .map(|i| AliasFinding {
                    function: "f".into(),
                    instr: i,
                    site: 0,
                    register: "r".into(),
                    group: 0,
                    tag: "any".into(),
                })
                .collect(),
            ..Default::default()
        };
        let t = precision_summary(&[mk("dsa", 4, 2), mk("tea-dsa", 2, 1)]);
        assert_eq!(t.rows[0].variant, "tea-dsa");
        assert_eq!(t.rows[1].aliases_ratio, Some(2.0));
        assert_eq!(t.rows[1].checks_ratio, Some(2.0));
    }
}

use crate::domain::AliasRelation;
use crate::ir::RegId;
use std::fmt::Write;

/// Difference between two alias relations over one program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub only_left: Vec<(RegId, RegId)>,
    pub only_right: Vec<(RegId, RegId)>,
    pub common: usize,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }

    /// Line-oriented rendering: a count line, then `< a b` for pairs only in
    /// the left relation and `> a b` for pairs only in the right one.
    pub fn render(&self, name: impl Fn(RegId) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "common {} only-left {} only-right {}",
            self.common,
            self.only_left.len(),
            self.only_right.len()
        );
        for &(a, b) in &self.only_left {
            let _ = writeln!(out, "< {} {}", name(a), name(b));
        }
        for &(a, b) in &self.only_right {
            let _ = writeln!(out, "> {} {}", name(a), name(b));
        }
        out
    }
}

pub fn diff_alias(left: &AliasRelation, right: &AliasRelation) -> DiffReport {
    DiffReport {
        only_left: left.difference(right).copied().collect(),
        only_right: right.difference(left).copied().collect(),
        common: left.intersection(right).count(),
    }
}

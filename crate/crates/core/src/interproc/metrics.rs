use crate::domain::{AbstractObject, PointsToGraph};
use crate::ir::{CallGraph, FuncId, Program};
use std::collections::BTreeMap;
use std::time::Duration;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FunctionMetrics {
    pub objects: usize,
    /// Objects defined neither by the function, nor by anything it calls,
    /// nor as one of its formals.
    pub foreign: usize,
    pub groups: usize,
    pub edges: usize,
}

impl std::ops::AddAssign for FunctionMetrics {
    fn add_assign(&mut self, o: Self) {
        self.objects += o.objects;
        self.foreign += o.foreign;
        self.groups += o.groups;
        self.edges += o.edges;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub local: Duration,
    pub bottom_up: Duration,
    pub top_down: Duration,
    pub total: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricsReport {
    /// Keyed by function name, or `whole-program` for the insensitive variants.
    pub functions: BTreeMap<String, FunctionMetrics>,
    pub totals: FunctionMetrics,
    pub phases: PhaseTimes,
    /// Outer bottom-up/top-down rounds until nothing changed.
    pub rounds: usize,
}

pub(crate) fn function_metrics(
    p: &Program,
    cg: &CallGraph,
    f: Option<FuncId>,
    g: &PointsToGraph,
) -> FunctionMetrics {
    let foreign = match f {
        Some(f) => {
            let callees = cg.transitive_callees(f);
            g.objects()
                .iter()
                .filter(|&&o| match o {
                    AbstractObject::Formal { func, .. } => func != f,
                    AbstractObject::AllocCell { site, .. } => p
                        .owner_of(site)
                        .is_none_or(|owner| owner != f && !callees.contains(&owner)),
                })
                .count()
        }
        None => 0,
    };
    FunctionMetrics {
        objects: g.object_count(),
        foreign,
        groups: g.group_count(),
        edges: g.edge_count(),
    }
}

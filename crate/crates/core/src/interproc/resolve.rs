use crate::domain::{AbstractObject, Node, Path, PointsToGraph};
use crate::ir::{FuncId, RegId};
use std::collections::{BTreeMap, BTreeSet};

/// Callee-to-caller object correspondence at one call site.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolveMap {
    map: BTreeMap<AbstractObject, BTreeSet<AbstractObject>>,
}

impl ResolveMap {
    pub fn get(&self, o: AbstractObject) -> &BTreeSet<AbstractObject> {
        static EMPTY: BTreeSet<AbstractObject> = BTreeSet::new();
        self.map.get(&o).unwrap_or(&EMPTY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AbstractObject, &BTreeSet<AbstractObject>)> {
        self.map.iter().map(|(&k, v)| (k, v))
    }

    /// Union of the images of `objs`.
    pub fn image<'a>(
        &self,
        objs: impl IntoIterator<Item = &'a AbstractObject>,
    ) -> BTreeSet<AbstractObject> {
        objs.into_iter()
            .flat_map(|&o| self.get(o).iter().copied())
            .collect()
    }

    /// Caller object to the callee objects resolving to it, optionally
    /// restricted to a predicate on the callee side.
    pub fn inverse(
        &self,
        keep: impl Fn(AbstractObject) -> bool,
    ) -> BTreeMap<AbstractObject, Vec<AbstractObject>> {
        let mut inv: BTreeMap<AbstractObject, Vec<AbstractObject>> = BTreeMap::new();
        for (&k, vs) in &self.map {
            if keep(k) {
                for &v in vs {
                    inv.entry(v).or_default().push(k);
                }
            }
        }
        inv
    }
}

/// Members of every group reachable from `set` through one or more memory
/// slots of `g`.
fn reachable(g: &PointsToGraph, set: &BTreeSet<AbstractObject>) -> BTreeSet<AbstractObject> {
    let mut work: Vec<Node> = set
        .iter()
        .filter_map(|&o| g.node_of(o))
        .map(|n| g.find(n))
        .collect();
    let mut expanded = BTreeSet::new();
    let mut reached = BTreeSet::new();
    while let Some(n) = work.pop() {
        if !expanded.insert(n) {
            continue;
        }
        for (_, targets) in g.slots(n) {
            for t in targets {
                if reached.insert(t) {
                    work.push(t);
                }
            }
        }
    }
    reached
        .into_iter()
        .flat_map(|t| g.members(t).iter().map(|&m| g.object(m)))
        .collect()
}

fn field_b(set: &BTreeSet<AbstractObject>) -> BTreeSet<AbstractObject> {
    set.iter().filter_map(|o| o.field_b()).collect()
}

/// `set` together with everything reachable from it.
fn closed(g: &PointsToGraph, mut set: BTreeSet<AbstractObject>) -> BTreeSet<AbstractObject> {
    let extra = reachable(g, &set);
    set.extend(extra);
    set
}

/// Builds the Resolve relation for a call of `callee_fn`.
///
/// Non-formal callee objects resolve to themselves. Formal `k` at path `a`
/// resolves to `actuals[k]`; a `b` path resolves to the field-b siblings of
/// the matching `a` path; a second-level path follows one memory edge of
/// the caller graph from its parent, and second-level paths are further
/// closed under caller edges (they summarize everything deeper).
pub fn resolve(
    callee: &PointsToGraph,
    callee_fn: FuncId,
    arity: usize,
    caller: &PointsToGraph,
    actuals: &[BTreeSet<AbstractObject>],
) -> ResolveMap {
    let mut map = BTreeMap::new();
    for &o in callee.objects() {
        if !o.is_formal_of(callee_fn) {
            map.insert(o, BTreeSet::from([o]));
        }
    }
    for (k, actual) in actuals.iter().enumerate().take(arity) {
        let a = actual.clone();
        let b = field_b(&a);
        let aa = reachable(caller, &a);
        let ba = reachable(caller, &b);
        let ab = closed(caller, field_b(&aa));
        let bb = closed(caller, field_b(&ba));
        let v = |p| AbstractObject::formal(callee_fn, k as u32, p);
        for (p, set) in [
            (Path::A, a),
            (Path::B, b),
            (Path::AA, aa),
            (Path::AB, ab),
            (Path::BA, ba),
            (Path::BB, bb),
        ] {
            map.insert(v(p), set);
        }
    }
    ResolveMap { map }
}

/// Objects whose memory a caller can observe: everything reachable from the
/// function's formal objects or from what its returned registers point to.
pub fn accessible(g: &PointsToGraph, func: FuncId, returned: &[RegId]) -> BTreeSet<AbstractObject> {
    let mut seen: BTreeSet<AbstractObject> = g
        .objects()
        .iter()
        .copied()
        .filter(|o| o.is_formal_of(func))
        .collect();
    for &r in returned {
        seen.extend(g.pts_objects(r));
    }
    let mut work: Vec<AbstractObject> = seen.iter().copied().collect();
    let mut expanded = BTreeSet::new();
    while let Some(o) = work.pop() {
        let Some(n) = g.node_of(o) else { continue };
        if !expanded.insert(g.find(n)) {
            continue;
        }
        for s in g.successors(o) {
            if seen.insert(s) {
                work.push(s);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{GraphMode, Owner};
    use crate::ir::{Field, InstrId};
    use crate::lattice::TypeTag;

    fn h(i: u32) -> AbstractObject {
        AbstractObject::alloc(InstrId(i), Field::A)
    }

    #[test]
    fn callee_allocations_resolve_to_themselves() {
        let mut callee = PointsToGraph::new(Owner::Function(FuncId(1)), GraphMode::unification());
        callee.add_points_to(RegId(5), h(9));
        let caller = PointsToGraph::new(Owner::Function(FuncId(0)), GraphMode::unification());
        let r = resolve(&callee, FuncId(1), 0, &caller, &[]);
        assert_eq!(r.get(h(9)), &BTreeSet::from([h(9)]));
    }

    #[test]
    fn first_level_and_sibling() {
        let callee = PointsToGraph::new(Owner::Function(FuncId(1)), GraphMode::unification());
        let caller = PointsToGraph::new(Owner::Function(FuncId(0)), GraphMode::unification());
        let r = resolve(&callee, FuncId(1), 1, &caller, &[BTreeSet::from([h(1)])]);
        assert_eq!(
            r.get(AbstractObject::formal(FuncId(1), 0, Path::A)),
            &BTreeSet::from([h(1)])
        );
        assert_eq!(
            r.get(AbstractObject::formal(FuncId(1), 0, Path::B)),
            &BTreeSet::from([h(1).sibling()])
        );
    }

    #[test]
    fn second_level_saturates_chains() {
        let callee = PointsToGraph::new(Owner::Function(FuncId(1)), GraphMode::unification());
        let mut caller = PointsToGraph::new(Owner::Function(FuncId(0)), GraphMode::unification());
        caller.add_edge(h(1), TypeTag::Any, h(2));
        caller.add_edge(h(2), TypeTag::Any, h(3));
        let r = resolve(&callee, FuncId(1), 1, &caller, &[BTreeSet::from([h(1)])]);
        let aa = r.get(AbstractObject::formal(FuncId(1), 0, Path::AA));
        assert!(aa.contains(&h(2)) && aa.contains(&h(3)));
        let ab = r.get(AbstractObject::formal(FuncId(1), 0, Path::AB));
        assert!(ab.contains(&h(2).sibling()) && ab.contains(&h(3).sibling()));
    }

    #[test]
    fn accessible_from_formals_and_returns() {
        let mut g = PointsToGraph::new(Owner::Function(FuncId(0)), GraphMode::unification());
        let v = AbstractObject::formal(FuncId(0), 0, Path::A);
        g.add_points_to(RegId(0), v);
        g.add_points_to(RegId(1), h(4));
        g.add_edge(h(4), TypeTag::Any, h(5));
        g.add_points_to(RegId(2), h(6));
        let acc = accessible(&g, FuncId(0), &[RegId(1)]);
        assert!(acc.contains(&v) && acc.contains(&h(4)) && acc.contains(&h(5)));
        assert!(!acc.contains(&h(6)));
    }
}

//! Intraprocedural rules: allocation, copies, field selection, loads and
//! stores, plus the formal-argument seed. Also the flow facts used at call
//! and return sites by the partially flow-sensitive variants.

use crate::domain::{
    formals_for, objects_for_alloc, AbstractObject, GraphMode, Owner, PointsToGraph,
};
use crate::ir::{Field, LInstr, LowerFunction, Lowered, RegId, Type};
use crate::lattice::{TypeLattice, TypeTag};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalConfig {
    pub unification: bool,
    pub typed: bool,
}

impl LocalConfig {
    pub const INCLUSION: LocalConfig = LocalConfig {
        unification: false,
        typed: false,
    };
    pub const STEENS: LocalConfig = LocalConfig {
        unification: true,
        typed: false,
    };
    pub const TYPED: LocalConfig = LocalConfig {
        unification: true,
        typed: true,
    };

    pub fn mode(self, lattice: TypeLattice) -> GraphMode {
        let base = if self.unification {
            GraphMode::unification()
        } else {
            GraphMode::inclusion()
        };
        base.with_lattice(lattice)
    }
}

/// Tag of the memory slot touched by an access of type `access`.
pub fn access_tag(typed: bool, access: Type) -> TypeTag {
    if typed {
        TypeTag::Ty(access)
    } else {
        TypeTag::Any
    }
}

/// Adds the formal-argument objects and their initial facts.
pub fn seed_formals(f: &LowerFunction, g: &mut PointsToGraph) {
    let seed = formals_for(f.id, f.formals.len());
    for (k, o) in seed.points_to {
        g.add_points_to(f.formals[k], o);
    }
    for (src, dst) in seed.edges {
        g.add_edge(src, TypeTag::Any, dst);
    }
}

/// Applies one instruction's rule once. Calls and returns contribute
/// nothing here.
pub fn apply_instr(instr: &LInstr, g: &mut PointsToGraph, typed: bool) {
    match *instr {
        LInstr::Alloc { id, dest, .. } => {
            g.add_points_to(dest, objects_for_alloc(id));
        }
        LInstr::Cast { dest, src, .. }
        | LInstr::Gep {
            dest,
            src,
            field: Field::A,
            ..
        } => {
            for n in g.pts(src) {
                g.add_points_to_node(dest, n);
            }
        }
        LInstr::Gep {
            dest,
            src,
            field: Field::B,
            ..
        } => {
            let targets: Vec<AbstractObject> = g
                .pts(src)
                .into_iter()
                .flat_map(|n| g.group_objects(n))
                .filter_map(|o| o.field_b())
                .collect();
            for o in targets {
                g.add_points_to(dest, o);
            }
        }
        LInstr::Store {
            value, ptr, access, ..
        } => {
            let tag = access_tag(typed, access);
            let values = g.pts(value);
            for p in g.pts(ptr) {
                for &v in &values {
                    g.add_effect_nodes(p, tag, v);
                }
            }
        }
        LInstr::Load {
            dest, src, access, ..
        } => {
            let tag = access_tag(typed, access);
            let targets: Vec<_> = g
                .pts(src)
                .into_iter()
                .flat_map(|p| g.load_targets(p, tag))
                .collect();
            for t in targets {
                g.add_points_to_node(dest, t);
            }
        }
        LInstr::Call { .. } | LInstr::Return { .. } => {}
    }
}

/// Runs the local rules of `f` to a fixpoint on `g`. Returns whether
/// anything was added.
pub fn saturate_local(f: &LowerFunction, g: &mut PointsToGraph, typed: bool) -> bool {
    let start = g.version();
    loop {
        let v = g.version();
        for i in &f.body {
            apply_instr(i, g, typed);
        }
        if g.version() == v {
            return g.version() != start;
        }
    }
}

/// Builds the local graph of one function: formals seeded, local rules
/// saturated, calls ignored.
pub fn run_local(p: &Lowered, f: crate::ir::FuncId, cfg: LocalConfig) -> PointsToGraph {
    let func = p.func(f);
    let mut g = PointsToGraph::new(Owner::Function(f), cfg.mode(TypeLattice::standard()));
    seed_formals(func, &mut g);
    saturate_local(func, &mut g, cfg.typed);
    g
}

/// Register-level facts of one function that hold at its call and return
/// sites. The analysis is flow-insensitive, so one set per register
/// serves every such site.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowFacts {
    facts: BTreeMap<RegId, BTreeSet<AbstractObject>>,
}

impl FlowFacts {
    pub fn get(&self, r: RegId) -> &BTreeSet<AbstractObject> {
        static EMPTY: BTreeSet<AbstractObject> = BTreeSet::new();
        self.facts.get(&r).unwrap_or(&EMPTY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (RegId, &BTreeSet<AbstractObject>)> {
        self.facts.iter().map(|(&r, s)| (r, s))
    }

    pub fn len(&self) -> usize {
        self.facts.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn insert(&mut self, r: RegId, o: AbstractObject) -> bool {
        self.facts.entry(r).or_default().insert(o)
    }

    /// Every fact is also a points-to fact of `g`.
    pub fn is_within(&self, g: &PointsToGraph) -> bool {
        self.facts.iter().all(|(&r, s)| {
            let pts = g.pts_objects(r);
            s.is_subset(&pts)
        })
    }
}

/// Inclusion-based fixpoint over register copies, seeded by allocations,
/// formals and the interprocedural facts in `seeds`. Loads read the
/// unified memory of `g`.
pub fn compute_pfs_facts(
    f: &LowerFunction,
    g: &PointsToGraph,
    seeds: &BTreeMap<RegId, BTreeSet<AbstractObject>>,
    typed: bool,
) -> FlowFacts {
    let mut ff = FlowFacts::default();
    for (k, &x) in f.formals.iter().enumerate() {
        ff.insert(
            x,
            AbstractObject::formal(f.id, k as u32, crate::domain::Path::A),
        );
    }
    for (&r, s) in seeds {
        for &o in s {
            ff.insert(r, o);
        }
    }
    // Instructions reading each register; every other input (allocations,
    // memory of `g`) is fixed during the fixpoint.
    let mut readers: BTreeMap<RegId, Vec<usize>> = BTreeMap::new();
    for (k, i) in f.body.iter().enumerate() {
        if let LInstr::Cast { src, .. } | LInstr::Gep { src, .. } | LInstr::Load { src, .. } = *i {
            readers.entry(src).or_default().push(k);
        }
    }
    let mut work: Vec<usize> = (0..f.body.len()).rev().collect();
    let mut queued = vec![true; f.body.len()];
    while let Some(k) = work.pop() {
        queued[k] = false;
        let (dest, add): (RegId, Vec<AbstractObject>) = match f.body[k] {
            LInstr::Alloc { id, dest, .. } => (dest, vec![objects_for_alloc(id)]),
            LInstr::Cast { dest, src, .. }
            | LInstr::Gep {
                dest,
                src,
                field: Field::A,
                ..
            } => (dest, ff.get(src).iter().copied().collect()),
            LInstr::Gep {
                dest,
                src,
                field: Field::B,
                ..
            } => (
                dest,
                ff.get(src).iter().filter_map(|o| o.field_b()).collect(),
            ),
            LInstr::Load {
                dest, src, access, ..
            } => {
                let tag = access_tag(typed, access);
                let srcs: BTreeSet<_> = ff
                    .get(src)
                    .iter()
                    .filter_map(|&o| g.node_of(o))
                    .map(|n| g.find(n))
                    .collect();
                let targets: BTreeSet<_> = srcs
                    .into_iter()
                    .flat_map(|n| g.load_targets(n, tag))
                    .collect();
                (
                    dest,
                    targets
                        .into_iter()
                        .flat_map(|t| g.member_objects(t))
                        .collect(),
                )
            }
            _ => continue,
        };
        let mut changed = false;
        for o in add {
            changed |= ff.insert(dest, o);
        }
        if changed {
            for &r in readers.get(&dest).into_iter().flatten() {
                if !queued[r] {
                    queued[r] = true;
                    work.push(r);
                }
            }
        }
    }
    ff
}

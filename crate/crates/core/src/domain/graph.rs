use super::{AbstractObject, DomainError, UnionFind};
use crate::ir::{FuncId, RegId};
use crate::lattice::{TypeLattice, TypeTag};
use rustc_hash::FxHashMap;
use std::collections::{BTreeMap, BTreeSet};

/// Index of an object inside one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node(u32);

impl Node {
    fn ix(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Owner {
    Function(FuncId),
    WholeProgram,
}

/// Whether pointees are unified (Steensgaard-style) or kept as sets, and
/// which compatibility order decides when typed memory slots share targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphMode {
    pub unify: bool,
    pub lattice: TypeLattice,
}

impl GraphMode {
    pub const fn inclusion() -> Self {
        GraphMode {
            unify: false,
            lattice: TypeLattice::standard(),
        }
    }

    pub const fn unification() -> Self {
        GraphMode {
            unify: true,
            lattice: TypeLattice::standard(),
        }
    }

    pub const fn with_lattice(self, lattice: TypeLattice) -> Self {
        GraphMode { lattice, ..self }
    }
}

/// Unordered register pairs `(a, b)` with `a < b` that may alias.
pub type AliasRelation = BTreeSet<(RegId, RegId)>;

/// Object-level view of a graph: every register/object fact implied by the
/// group structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Facts {
    pub points_to: BTreeSet<(RegId, AbstractObject)>,
    pub edges: BTreeSet<(AbstractObject, TypeTag, AbstractObject)>,
}

impl Facts {
    pub fn len(&self) -> usize {
        self.points_to.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Facts) -> bool {
        self.points_to.is_subset(&other.points_to) && self.edges.is_subset(&other.edges)
    }
}

/// One equivalence group with its outgoing memory slots, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupView {
    pub rep: Node,
    pub objects: Vec<AbstractObject>,
    pub slots: Vec<(TypeTag, Vec<Node>)>,
}

/// Points-to graph over groups of abstract objects.
///
/// Registers point to groups. Each group owns memory slots keyed by type
/// tag (`any` in untyped analyses); a slot points to groups. In unification
/// mode every register and slot points to at most one group, and slots of
/// one group whose tags are compatible share their target.
///
/// A subset of the slot edges is marked as effects: memory the owning
/// function (or something it calls) actually writes, as opposed to what it
/// merely assumes about its arguments' memory.
#[derive(Clone, Debug)]
pub struct PointsToGraph {
    owner: Owner,
    mode: GraphMode,
    objects: Vec<AbstractObject>,
    index: FxHashMap<AbstractObject, Node>,
    uf: UnionFind,
    // Indexed by node; meaningful at representatives only.
    members: Vec<Vec<Node>>,
    cells: Vec<BTreeMap<TypeTag, BTreeSet<Node>>>,
    effects: Vec<BTreeMap<TypeTag, BTreeSet<Node>>>,
    regs: BTreeMap<RegId, BTreeSet<Node>>,
    version: u64,
}

impl PointsToGraph {
    pub fn new(owner: Owner, mode: GraphMode) -> Self {
        PointsToGraph {
            owner,
            mode,
            objects: Vec::new(),
            index: FxHashMap::default(),
            uf: UnionFind::new(),
            members: Vec::new(),
            cells: Vec::new(),
            effects: Vec::new(),
            regs: BTreeMap::new(),
            version: 0,
        }
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    /// Incremented whenever a fact, object or union is added.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Node of `o`, creating it on first use. Cells come in pairs: the
    /// sibling is created alongside, so field selection never grows the
    /// object set.
    pub fn node(&mut self, o: AbstractObject) -> Node {
        if let Some(&n) = self.index.get(&o) {
            return n;
        }
        let n = self.push_node(o);
        self.push_node(o.sibling());
        n
    }

    fn push_node(&mut self, o: AbstractObject) -> Node {
        let n = Node(self.uf.push());
        self.objects.push(o);
        self.index.insert(o, n);
        self.members.push(vec![n]);
        self.cells.push(BTreeMap::new());
        self.effects.push(BTreeMap::new());
        self.version += 1;
        n
    }

    pub fn node_of(&self, o: AbstractObject) -> Option<Node> {
        self.index.get(&o).copied()
    }

    pub fn contains(&self, o: AbstractObject) -> bool {
        self.index.contains_key(&o)
    }

    pub fn object(&self, n: Node) -> AbstractObject {
        self.objects[n.ix()]
    }

    /// Every object mentioned by some fact, in creation order.
    pub fn objects(&self) -> &[AbstractObject] {
        &self.objects
    }

    pub fn object_set(&self) -> BTreeSet<AbstractObject> {
        self.objects.iter().copied().collect()
    }

    pub fn find(&self, n: Node) -> Node {
        Node(self.uf.find(n.0))
    }

    pub fn same_group(&self, a: AbstractObject, b: AbstractObject) -> bool {
        match (self.node_of(a), self.node_of(b)) {
            (Some(x), Some(y)) => self.find(x) == self.find(y),
            _ => a == b,
        }
    }

    fn first(set: &BTreeSet<Node>) -> Node {
        *set.iter()
            .next()
            .expect("slots and registers are never empty")
    }

    fn canon(&self, set: &BTreeSet<Node>) -> Vec<Node> {
        let mut v: Vec<Node> = set.iter().map(|&n| self.find(n)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn compat(&self, a: TypeTag, b: TypeTag) -> bool {
        self.mode.lattice.compat(a, b)
    }

    /// Merges two groups and restores the single-target invariant of their
    /// slots, recursively.
    fn merge(&mut self, a: Node, b: Node) -> bool {
        let mut work = vec![(a, b)];
        let mut changed = false;
        while let Some((x, y)) = work.pop() {
            let Some((root, child)) = self.uf.union(x.0, y.0) else {
                continue;
            };
            changed = true;
            self.version += 1;
            let (root, child) = (root as usize, child as usize);
            let moved = std::mem::take(&mut self.members[child]);
            self.members[root].extend(moved);
            for (tag, targets) in std::mem::take(&mut self.effects[child]) {
                self.effects[root].entry(tag).or_default().extend(targets);
            }
            let moved = std::mem::take(&mut self.cells[child]);
            for (tag, targets) in moved {
                if !self.mode.unify {
                    self.cells[root].entry(tag).or_default().extend(targets);
                    continue;
                }
                let t = Self::first(&targets);
                if let Some(existing) = self.cells[root].get(&tag) {
                    work.push((Self::first(existing), t));
                    continue;
                }
                for (&other, ts) in &self.cells[root] {
                    if self.compat(tag, other) {
                        work.push((Self::first(ts), t));
                    }
                }
                self.cells[root].insert(tag, targets);
            }
        }
        changed
    }

    pub fn add_points_to_node(&mut self, reg: RegId, n: Node) -> bool {
        if self.mode.unify {
            if let Some(set) = self.regs.get(&reg) {
                let e = Self::first(set);
                return self.merge(e, n);
            }
            self.regs.insert(reg, BTreeSet::from([n]));
            self.version += 1;
            return true;
        }
        let fresh = self.regs.entry(reg).or_default().insert(n);
        if fresh {
            self.version += 1;
        }
        fresh
    }

    pub fn add_points_to(&mut self, reg: RegId, o: AbstractObject) -> bool {
        let n = self.node(o);
        self.add_points_to_node(reg, n)
    }

    pub fn add_edge_nodes(&mut self, src: Node, tag: TypeTag, dst: Node) -> bool {
        let g = self.uf.find_mut(src.0) as usize;
        if self.mode.unify {
            if let Some(existing) = self.cells[g].get(&tag) {
                let e = Self::first(existing);
                return self.merge(e, dst);
            }
            let compatible: Vec<Node> = self.cells[g]
                .iter()
                .filter(|(&other, _)| self.compat(tag, other))
                .map(|(_, ts)| Self::first(ts))
                .collect();
            self.cells[g].insert(tag, BTreeSet::from([dst]));
            self.version += 1;
            for t in compatible {
                self.merge(t, dst);
            }
            return true;
        }
        let fresh = self.cells[g].entry(tag).or_default().insert(dst);
        if fresh {
            self.version += 1;
        }
        fresh
    }

    pub fn add_edge(&mut self, src: AbstractObject, tag: TypeTag, dst: AbstractObject) -> bool {
        let s = self.node(src);
        let d = self.node(dst);
        self.add_edge_nodes(s, tag, d)
    }

    /// Adds a slot edge and marks it as an effect.
    pub fn add_effect_nodes(&mut self, src: Node, tag: TypeTag, dst: Node) -> bool {
        let mut changed = self.add_edge_nodes(src, tag, dst);
        let g = self.uf.find_mut(src.0) as usize;
        let d = self.find(dst);
        let known = self.effects[g]
            .get(&tag)
            .is_some_and(|ts| ts.iter().any(|&t| self.find(t) == d));
        if !known {
            self.effects[g].entry(tag).or_default().insert(dst);
            self.version += 1;
            changed = true;
        }
        changed
    }

    pub fn add_effect(&mut self, src: AbstractObject, tag: TypeTag, dst: AbstractObject) -> bool {
        let s = self.node(src);
        let d = self.node(dst);
        self.add_effect_nodes(s, tag, d)
    }

    /// Adds `s -tag-> d` for every `s` in `srcs` and `d` in `dsts` (as
    /// effects when `effect` is set), once per pair of groups.
    pub fn add_edge_product(
        &mut self,
        srcs: &BTreeSet<AbstractObject>,
        tag: TypeTag,
        dsts: &BTreeSet<AbstractObject>,
        effect: bool,
    ) -> bool {
        let mut nodes = |objs: &BTreeSet<AbstractObject>| -> BTreeSet<Node> {
            objs.iter()
                .map(|&o| {
                    let n = self.node(o);
                    self.find(n)
                })
                .collect()
        };
        let (ss, ds) = (nodes(srcs), nodes(dsts));
        let mut seen = BTreeSet::new();
        let mut changed = false;
        for &s in &ss {
            for &d in &ds {
                if !seen.insert((self.find(s), self.find(d))) {
                    continue;
                }
                changed |= if effect {
                    self.add_effect_nodes(s, tag, d)
                } else {
                    self.add_edge_nodes(s, tag, d)
                };
            }
        }
        changed
    }

    pub fn union_nodes(&mut self, a: Node, b: Node) -> bool {
        self.merge(a, b)
    }

    /// Unifies two (object, tag) pairs. Incompatible tags are rejected and
    /// leave the graph untouched; that refusal is what keeps differently
    /// typed data apart.
    pub fn unify(
        &mut self,
        (o1, t1): (AbstractObject, TypeTag),
        (o2, t2): (AbstractObject, TypeTag),
    ) -> Result<bool, DomainError> {
        if !self.compat(t1, t2) {
            return Err(DomainError::IncompatibleTags {
                left: format!("{o1:?}/{t1}"),
                right: format!("{o2:?}/{t2}"),
            });
        }
        let (a, b) = (self.node(o1), self.node(o2));
        Ok(self.merge(a, b))
    }

    /// Groups a register points to, as sorted representatives.
    pub fn pts(&self, reg: RegId) -> Vec<Node> {
        self.regs
            .get(&reg)
            .map(|s| self.canon(s))
            .unwrap_or_default()
    }

    pub fn registers(&self) -> impl Iterator<Item = RegId> + '_ {
        self.regs.keys().copied()
    }

    pub fn members(&self, n: Node) -> &[Node] {
        &self.members[self.find(n).ix()]
    }

    pub fn group_objects(&self, n: Node) -> Vec<AbstractObject> {
        let mut v: Vec<AbstractObject> = self.members(n).iter().map(|&m| self.object(m)).collect();
        v.sort_unstable();
        v
    }

    fn min_object(&self, n: Node) -> AbstractObject {
        self.members(n)
            .iter()
            .map(|&m| self.object(m))
            .min()
            .expect("groups are never empty")
    }

    /// Objects of a group in no particular order.
    pub fn member_objects(&self, n: Node) -> impl Iterator<Item = AbstractObject> + '_ {
        self.members(n).iter().map(|&m| self.object(m))
    }

    /// Memory slots of a group with canonical targets.
    pub fn slots(&self, n: Node) -> Vec<(TypeTag, Vec<Node>)> {
        self.cells[self.find(n).ix()]
            .iter()
            .map(|(&t, s)| (t, self.canon(s)))
            .collect()
    }

    /// Effect slots of a group with canonical targets.
    pub fn effect_slots(&self, n: Node) -> Vec<(TypeTag, Vec<Node>)> {
        self.effects[self.find(n).ix()]
            .iter()
            .map(|(&t, s)| (t, self.canon(s)))
            .collect()
    }

    /// Targets read by an access of type `access` through a group.
    pub fn load_targets(&self, n: Node, access: TypeTag) -> Vec<Node> {
        let mut v: Vec<Node> = self.cells[self.find(n).ix()]
            .iter()
            .filter(|(&t, _)| self.compat(access, t))
            .flat_map(|(_, s)| s.iter().map(|&m| self.find(m)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn pts_objects(&self, reg: RegId) -> BTreeSet<AbstractObject> {
        self.pts(reg)
            .into_iter()
            .flat_map(|g| self.members(g).iter().map(|&m| self.object(m)))
            .collect()
    }

    /// Objects reachable from `o` through one memory slot of any tag.
    pub fn successors(&self, o: AbstractObject) -> BTreeSet<AbstractObject> {
        let Some(n) = self.node_of(o) else {
            return BTreeSet::new();
        };
        self.slots(n)
            .into_iter()
            .flat_map(|(_, ts)| ts)
            .flat_map(|g| self.members(g).iter().map(|&m| self.object(m)))
            .collect()
    }

    /// Group representatives, ordered by their smallest object.
    pub fn groups(&self) -> Vec<Node> {
        let mut reps: Vec<(AbstractObject, Node)> = (0..self.objects.len() as u32)
            .map(Node)
            .filter(|&n| self.find(n) == n)
            .map(|n| (self.min_object(n), n))
            .collect();
        reps.sort_unstable();
        reps.into_iter().map(|(_, n)| n).collect()
    }

    pub fn group_view(&self, n: Node) -> GroupView {
        let rep = self.find(n);
        GroupView {
            rep,
            objects: self.group_objects(rep),
            slots: self.slots(rep),
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn group_count(&self) -> usize {
        (0..self.objects.len() as u32)
            .filter(|&n| self.uf.find(n) == n)
            .count()
    }

    /// Group-level slot edges.
    pub fn edge_count(&self) -> usize {
        self.groups()
            .into_iter()
            .map(|g| self.slots(g).iter().map(|(_, ts)| ts.len()).sum::<usize>())
            .sum()
    }

    pub fn facts(&self) -> Facts {
        let mut f = Facts::default();
        for (&r, set) in &self.regs {
            for g in self.canon(set) {
                for &m in self.members(g) {
                    f.points_to.insert((r, self.object(m)));
                }
            }
        }
        for g in self.groups() {
            let srcs = self.group_objects(g);
            for (tag, ts) in self.slots(g) {
                for t in ts {
                    for &d in self.members(t) {
                        for &s in &srcs {
                            f.edges.insert((s, tag, self.object(d)));
                        }
                    }
                }
            }
        }
        f
    }

    /// Register pairs whose target groups intersect.
    pub fn alias_pairs(&self) -> AliasRelation {
        let mut by_group: BTreeMap<Node, Vec<RegId>> = BTreeMap::new();
        for &r in self.regs.keys() {
            for g in self.pts(r) {
                by_group.entry(g).or_default().push(r);
            }
        }
        let mut out = AliasRelation::new();
        for regs in by_group.values() {
            for (i, &a) in regs.iter().enumerate() {
                for &b in &regs[i + 1..] {
                    out.insert((a.min(b), a.max(b)));
                }
            }
        }
        out
    }

    /// Collapses every tag variant of a group's slots into the `any` slot
    /// and re-closes the graph.
    pub fn erase_tags(&self) -> PointsToGraph {
        let mut g = PointsToGraph::new(self.owner, self.mode);
        for n in self.groups() {
            let objs = self.group_objects(n);
            let first = g.node(objs[0]);
            for &o in &objs[1..] {
                let m = g.node(o);
                g.merge(first, m);
            }
        }
        for (&r, set) in &self.regs {
            for t in self.canon(set) {
                let o = self.object(t);
                g.add_points_to(r, o);
            }
        }
        for n in self.groups() {
            let src = self.object(n);
            for (_, ts) in self.slots(n) {
                for t in ts {
                    g.add_edge(src, TypeTag::Any, self.object(t));
                }
            }
            for (_, ts) in self.effect_slots(n) {
                for t in ts {
                    g.add_effect(src, TypeTag::Any, self.object(t));
                }
            }
        }
        g
    }
}

//! Reference evaluator: applies the rule sets literally as joins over sets
//! of ground facts until nothing new is derivable. Groups are never
//! materialized; co-pointing is an explicit `same` relation. Slow on
//! purpose, and used to cross-check the engine.

mod diff;
mod gen;

pub use diff::{diff_alias, DiffReport};
pub use gen::{corpus_program, gen_chain, gen_program, generate, GenConfig};

use crate::domain::{
    formals_for, objects_for_alloc, AbstractObject, AliasRelation, Owner, Path, UnionFind,
};
use crate::interproc::AnalysisVariant;
use crate::ir::{
    validate_program, Field, FuncId, LInstr, Lowered, Program, RegId, ValidationError,
};
use crate::lattice::{TypeLattice, TypeTag};
use crate::local::access_tag;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_FACT_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleSet {
    /// Inclusion rules only; field selection derives nothing.
    Inclusion,
    InclusionFields,
    Steens,
    Dsa,
    PfsDsa,
    TeaDsa,
}

impl RuleSet {
    pub const ALL: [RuleSet; 6] = [
        RuleSet::Inclusion,
        RuleSet::InclusionFields,
        RuleSet::Steens,
        RuleSet::Dsa,
        RuleSet::PfsDsa,
        RuleSet::TeaDsa,
    ];

    /// The rule set an engine variant implements, if the oracle covers it.
    pub fn for_variant(v: AnalysisVariant) -> Option<RuleSet> {
        match v {
            AnalysisVariant::AndersenCi => Some(RuleSet::InclusionFields),
            AnalysisVariant::SteensCi => Some(RuleSet::Steens),
            AnalysisVariant::Dsa => Some(RuleSet::Dsa),
            AnalysisVariant::DsaLegacyTd => None,
            AnalysisVariant::PfsDsa => Some(RuleSet::PfsDsa),
            AnalysisVariant::TeaDsa => Some(RuleSet::TeaDsa),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleSet::Inclusion => "inclusion",
            RuleSet::InclusionFields => "inclusion+fields",
            RuleSet::Steens => "steens",
            RuleSet::Dsa => "dsa",
            RuleSet::PfsDsa => "pfs-dsa",
            RuleSet::TeaDsa => "tea-dsa",
        }
    }

    fn fields(self) -> bool {
        self != RuleSet::Inclusion
    }

    fn unify(self) -> bool {
        !matches!(self, RuleSet::Inclusion | RuleSet::InclusionFields)
    }

    fn context_sensitive(self) -> bool {
        matches!(self, RuleSet::Dsa | RuleSet::PfsDsa | RuleSet::TeaDsa)
    }

    fn flow(self) -> bool {
        matches!(self, RuleSet::PfsDsa | RuleSet::TeaDsa)
    }

    fn typed(self) -> bool {
        self == RuleSet::TeaDsa
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("oracle exceeded its fact limit of {limit}")]
    ResourceLimit { limit: usize },
}

type Edge = (AbstractObject, TypeTag, AbstractObject);

/// Ground facts of one graph owner.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OwnerFacts {
    pub points_to: BTreeSet<(RegId, AbstractObject)>,
    pub edges: BTreeSet<Edge>,
    /// Edges written by the owner or its callees.
    pub effects: BTreeSet<Edge>,
    /// Objects forced into one group, stored symmetric and transitive.
    pub same: BTreeSet<(AbstractObject, AbstractObject)>,
    /// Interprocedural seeds of the call/return-site facts.
    pub flow_seeds: BTreeSet<(RegId, AbstractObject)>,
}

impl OwnerFacts {
    pub fn len(&self) -> usize {
        self.points_to.len()
            + self.edges.len()
            + self.effects.len()
            + self.same.len()
            + self.flow_seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn objects(&self) -> BTreeSet<AbstractObject> {
        let mut s: BTreeSet<AbstractObject> = self.points_to.iter().map(|&(_, o)| o).collect();
        for &(a, _, b) in &self.edges {
            s.insert(a);
            s.insert(b);
        }
        s
    }

    fn pts(&self, r: RegId) -> BTreeSet<AbstractObject> {
        self.points_to
            .range((r, AbstractObject::MIN)..)
            .take_while(|(x, _)| *x == r)
            .map(|&(_, o)| o)
            .collect()
    }

    fn succ(&self, o: AbstractObject) -> impl Iterator<Item = (TypeTag, AbstractObject)> + '_ {
        self.edges
            .range((o, TypeTag::Any, AbstractObject::MIN)..)
            .take_while(move |e| e.0 == o)
            .map(|&(_, t, k)| (t, k))
    }

    /// Register pairs pointing to a common object.
    pub fn alias_pairs(&self) -> AliasRelation {
        let mut by_obj: BTreeMap<AbstractObject, Vec<RegId>> = BTreeMap::new();
        for &(r, o) in &self.points_to {
            by_obj.entry(o).or_default().push(r);
        }
        let mut out = AliasRelation::new();
        for regs in by_obj.values() {
            for (i, &a) in regs.iter().enumerate() {
                for &b in &regs[i + 1..] {
                    out.insert((a.min(b), a.max(b)));
                }
            }
        }
        out
    }
}

/// Saturated facts, one entry per graph owner.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactBase {
    pub owners: BTreeMap<Owner, OwnerFacts>,
}

impl FactBase {
    pub fn len(&self) -> usize {
        self.owners.values().map(OwnerFacts::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alias_pairs(&self) -> AliasRelation {
        self.owners
            .values()
            .flat_map(OwnerFacts::alias_pairs)
            .collect()
    }

    /// Object-level points-to facts of every owner, flattened.
    pub fn points_to(&self) -> BTreeSet<(Owner, RegId, AbstractObject)> {
        self.owners
            .iter()
            .flat_map(|(&w, f)| f.points_to.iter().map(move |&(r, o)| (w, r, o)))
            .collect()
    }
}

struct Eval<'a> {
    low: &'a Lowered,
    rs: RuleSet,
    lattice: TypeLattice,
    limit: usize,
}

pub fn eval_naive(p: &Program, rs: RuleSet) -> Result<FactBase, OracleError> {
    eval_naive_with(p, rs, DEFAULT_FACT_LIMIT)
}

pub fn eval_naive_with(p: &Program, rs: RuleSet, limit: usize) -> Result<FactBase, OracleError> {
    validate_program(p)?;
    let low = Lowered::new(p);
    let ev = Eval {
        low: &low,
        rs,
        lattice: TypeLattice::standard(),
        limit,
    };
    let mut fb = FactBase::default();
    if !rs.context_sensitive() {
        let mut f = OwnerFacts::default();
        ev.saturate(None, &mut f)?;
        fb.owners.insert(Owner::WholeProgram, f);
        return Ok(fb);
    }
    for func in &low.funcs {
        let mut f = OwnerFacts::default();
        let seed = formals_for(func.id, func.formals.len());
        for (k, o) in seed.points_to {
            f.points_to.insert((func.formals[k], o));
        }
        for (a, b) in seed.edges {
            f.edges.insert((a, TypeTag::Any, b));
        }
        fb.owners.insert(Owner::Function(func.id), f);
    }
    loop {
        let before = fb.len();
        for func in &low.funcs {
            let f = fb.owners.get_mut(&Owner::Function(func.id)).expect("owner");
            ev.saturate(Some(func.id), f)?;
        }
        for caller in &low.funcs {
            for (site, ..) in caller.calls() {
                ev.call_site(&mut fb, caller.id, site)?;
            }
        }
        let after = fb.len();
        if after > ev.limit {
            return Err(OracleError::ResourceLimit { limit: ev.limit });
        }
        if after == before {
            return Ok(fb);
        }
    }
}

impl Eval<'_> {
    fn tag(&self, ty: crate::ir::Type) -> TypeTag {
        access_tag(self.rs.typed(), ty)
    }

    fn compat(&self, a: TypeTag, b: TypeTag) -> bool {
        self.lattice.compat(a, b)
    }

    fn check(&self, f: &OwnerFacts) -> Result<(), OracleError> {
        if f.len() > self.limit {
            return Err(OracleError::ResourceLimit { limit: self.limit });
        }
        Ok(())
    }

    /// Local rules (and, whole-program, the call copies) to a fixpoint.
    fn saturate(&self, only: Option<FuncId>, f: &mut OwnerFacts) -> Result<(), OracleError> {
        let funcs: Vec<_> = match only {
            Some(id) => vec![self.low.func(id)],
            None => self.low.funcs.iter().collect(),
        };
        loop {
            let before = f.len();
            for func in &funcs {
                for i in &func.body {
                    self.local_rule(i, f);
                    if only.is_none() {
                        if let LInstr::Call {
                            dests,
                            callee,
                            args,
                            ..
                        } = i
                        {
                            self.copy_rule(dests, *callee, args, f);
                        }
                    }
                }
            }
            if self.rs.unify() {
                self.unify_rules(f);
            }
            self.check(f)?;
            if f.len() == before {
                return Ok(());
            }
        }
    }

    fn local_rule(&self, i: &LInstr, f: &mut OwnerFacts) {
        match *i {
            LInstr::Alloc { id, dest, .. } => {
                f.points_to.insert((dest, objects_for_alloc(id)));
            }
            LInstr::Cast { dest, src, .. } => {
                for o in f.pts(src) {
                    f.points_to.insert((dest, o));
                }
            }
            LInstr::Gep {
                dest, src, field, ..
            } if self.rs.fields() => {
                for o in f.pts(src) {
                    let t = match field {
                        Field::A => Some(o),
                        Field::B => o.field_b(),
                    };
                    if let Some(t) = t {
                        f.points_to.insert((dest, t));
                    }
                }
            }
            LInstr::Gep { .. } => {}
            LInstr::Store {
                value, ptr, access, ..
            } => {
                let tag = self.tag(access);
                let values = f.pts(value);
                for o in f.pts(ptr) {
                    for &k in &values {
                        f.edges.insert((o, tag, k));
                        f.effects.insert((o, tag, k));
                    }
                }
            }
            LInstr::Load {
                dest, src, access, ..
            } => {
                let tag = self.tag(access);
                let add: Vec<AbstractObject> = f
                    .pts(src)
                    .into_iter()
                    .flat_map(|o| {
                        f.succ(o)
                            .filter(|&(t, _)| self.compat(tag, t))
                            .map(|(_, k)| k)
                            .collect::<Vec<_>>()
                    })
                    .collect();
                for k in add {
                    f.points_to.insert((dest, k));
                }
            }
            LInstr::Call { .. } | LInstr::Return { .. } => {}
        }
    }

    fn copy_rule(&self, dests: &[RegId], callee: FuncId, args: &[RegId], f: &mut OwnerFacts) {
        let func = self.low.func(callee);
        for (&x, &formal) in args.iter().zip(&func.formals) {
            for o in f.pts(x) {
                f.points_to.insert((formal, o));
            }
        }
        for (_, values) in func.returns() {
            for (&z, &y) in values.iter().zip(dests) {
                for o in f.pts(z) {
                    f.points_to.insert((y, o));
                }
            }
        }
    }

    /// Co-pointed objects become the same; the same relation is closed and
    /// every fact is copied across it.
    fn unify_rules(&self, f: &mut OwnerFacts) {
        let objects: Vec<AbstractObject> = f.objects().into_iter().collect();
        let index: BTreeMap<AbstractObject, u32> = objects
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i as u32))
            .collect();
        let mut uf = UnionFind::new();
        for _ in &objects {
            uf.push();
        }
        let mut link = |a: AbstractObject, b: AbstractObject| {
            uf.union(index[&a], index[&b]);
        };
        for &(a, b) in &f.same {
            link(a, b);
        }
        let mut last: Option<(RegId, AbstractObject)> = None;
        for &(r, o) in &f.points_to {
            match last {
                Some((lr, lo)) if lr == r => link(lo, o),
                _ => last = Some((r, o)),
            }
        }
        // Per source: targets under one tag are chained, and one
        // representative per tag is linked to each compatible tag.
        let mut by_src: BTreeMap<AbstractObject, BTreeMap<TypeTag, Vec<AbstractObject>>> =
            BTreeMap::new();
        for &(o, t, k) in &f.edges {
            by_src.entry(o).or_default().entry(t).or_default().push(k);
        }
        for by_tag in by_src.values() {
            for ks in by_tag.values() {
                for w in ks.windows(2) {
                    link(w[0], w[1]);
                }
            }
            let reps: Vec<(TypeTag, AbstractObject)> =
                by_tag.iter().map(|(&t, ks)| (t, ks[0])).collect();
            for (i, &(t, k)) in reps.iter().enumerate() {
                for &(u, m) in &reps[i + 1..] {
                    if self.compat(t, u) {
                        link(k, m);
                    }
                }
            }
        }
        let mut root_class: BTreeMap<u32, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<AbstractObject>> = Vec::new();
        let mut class: BTreeMap<AbstractObject, usize> = BTreeMap::new();
        for (i, &o) in objects.iter().enumerate() {
            let root = uf.find_mut(i as u32);
            let id = *root_class.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push(o);
            class.insert(o, id);
        }
        // Facts are copied per class pair, each pair once.
        let pts: BTreeSet<(RegId, usize)> =
            f.points_to.iter().map(|(r, o)| (*r, class[o])).collect();
        for (r, c) in pts {
            f.points_to.extend(classes[c].iter().map(|&m| (r, m)));
        }
        for set in [&mut f.edges, &mut f.effects] {
            let triples: BTreeSet<(usize, TypeTag, usize)> = set
                .iter()
                .map(|(o, t, k)| (class[o], *t, class[k]))
                .collect();
            for (a, t, b) in triples {
                for &x in &classes[a] {
                    set.extend(classes[b].iter().map(|&y| (x, t, y)));
                }
            }
        }
        for c in &classes {
            if c.len() > 1 {
                for &a in c {
                    f.same.extend(c.iter().map(|&b| (a, b)));
                }
            }
        }
    }

    /// Register facts at call and return sites for the flow variants.
    fn flow_facts(&self, func: FuncId, f: &OwnerFacts) -> BTreeSet<(RegId, AbstractObject)> {
        let lf = self.low.func(func);
        let mut ff: BTreeSet<(RegId, AbstractObject)> = f.flow_seeds.clone();
        for (k, &x) in lf.formals.iter().enumerate() {
            ff.insert((x, AbstractObject::formal(func, k as u32, Path::A)));
        }
        let get = |ff: &BTreeSet<(RegId, AbstractObject)>, r: RegId| -> Vec<AbstractObject> {
            ff.range((r, AbstractObject::MIN)..)
                .take_while(|(x, _)| *x == r)
                .map(|&(_, o)| o)
                .collect()
        };
        loop {
            let before = ff.len();
            for i in &lf.body {
                match *i {
                    LInstr::Alloc { id, dest, .. } => {
                        ff.insert((dest, objects_for_alloc(id)));
                    }
                    LInstr::Cast { dest, src, .. }
                    | LInstr::Gep {
                        dest,
                        src,
                        field: Field::A,
                        ..
                    } => {
                        for o in get(&ff, src) {
                            ff.insert((dest, o));
                        }
                    }
                    LInstr::Gep {
                        dest,
                        src,
                        field: Field::B,
                        ..
                    } => {
                        for o in get(&ff, src)
                            .into_iter()
                            .filter_map(AbstractObject::field_b)
                        {
                            ff.insert((dest, o));
                        }
                    }
                    LInstr::Load {
                        dest, src, access, ..
                    } => {
                        let tag = self.tag(access);
                        for o in get(&ff, src) {
                            for (t, k) in f.succ(o) {
                                if self.compat(tag, t) {
                                    ff.insert((dest, k));
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
            if ff.len() == before {
                return ff;
            }
        }
    }

    /// The interprocedural rules at one call site.
    fn call_site(
        &self,
        fb: &mut FactBase,
        caller: FuncId,
        site: crate::ir::InstrId,
    ) -> Result<(), OracleError> {
        let (dests, callee, args) = self.low.func(caller).call(site).expect("call site");
        let (dests, args) = (dests.to_vec(), args.to_vec());
        let cf = &fb.owners[&Owner::Function(caller)];
        let gf = &fb.owners[&Owner::Function(callee)];
        let (caller_flow, callee_flow) = if self.rs.flow() {
            (
                Some(self.flow_facts(caller, cf)),
                Some(self.flow_facts(callee, gf)),
            )
        } else {
            (None, None)
        };
        let arg_objects = |r: RegId| -> BTreeSet<AbstractObject> {
            match &caller_flow {
                Some(ff) => range_of(ff, r),
                None => cf.pts(r),
            }
        };
        let actuals: Vec<BTreeSet<AbstractObject>> = args.iter().map(|&x| arg_objects(x)).collect();
        let res = resolve_facts(gf, callee, &actuals, cf);
        let image = |o: AbstractObject| -> Vec<AbstractObject> {
            res.get(&o)
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default()
        };

        // Bottom-up.
        let lf = self.low.func(callee);
        let mut returned = Vec::new();
        let mut caller_pts = Vec::new();
        for (_, values) in lf.returns() {
            for (k, &z) in values.iter().enumerate() {
                returned.push(z);
                let src: BTreeSet<AbstractObject> = match &callee_flow {
                    Some(ff) => range_of(ff, z),
                    None => gf.pts(z),
                };
                for h in src {
                    for i in image(h) {
                        caller_pts.push((dests[k], i));
                    }
                }
            }
        }
        let acc = accessible_facts(gf, callee, &returned);
        // Effects are grouped by the images of their endpoints so each
        // product is expanded once.
        let mut groups: BTreeSet<(
            &BTreeSet<AbstractObject>,
            TypeTag,
            &BTreeSet<AbstractObject>,
        )> = BTreeSet::new();
        for &(j, t, k) in &gf.effects {
            if let (true, Some(hj), Some(hk)) = (acc.contains(&j), res.get(&j), res.get(&k)) {
                groups.insert((hj, t, hk));
            }
        }
        let mut caller_edges = Vec::new();
        for (hj, t, hk) in groups {
            for &h in hj {
                caller_edges.extend(hk.iter().map(|&i| (h, t, i)));
            }
        }

        // Top-down.
        let mut callee_pts = Vec::new();
        for (k, a) in actuals.iter().enumerate() {
            for (&i, hs) in &res {
                if hs.iter().any(|h| a.contains(h)) {
                    callee_pts.push((lf.formals[k], i));
                }
            }
        }
        let mut formal_inv: BTreeMap<AbstractObject, Vec<AbstractObject>> = BTreeMap::new();
        for (&j, hs) in &res {
            if j.is_formal_of(callee) {
                for &h in hs {
                    formal_inv.entry(h).or_default().push(j);
                }
            }
        }
        let mut td_groups: BTreeSet<(&Vec<AbstractObject>, TypeTag, &Vec<AbstractObject>)> =
            BTreeSet::new();
        for &(h, t, i) in &cf.edges {
            if let (Some(js), Some(ks)) = (formal_inv.get(&h), formal_inv.get(&i)) {
                td_groups.insert((js, t, ks));
            }
        }
        let mut callee_edges = Vec::new();
        for (js, t, ks) in td_groups {
            for &j in js {
                callee_edges.extend(ks.iter().map(|&k| (j, t, k)));
            }
        }

        let cf = fb.owners.get_mut(&Owner::Function(caller)).expect("owner");
        for &(r, o) in &caller_pts {
            cf.points_to.insert((r, o));
            if self.rs.flow() {
                cf.flow_seeds.insert((r, o));
            }
        }
        for e in caller_edges {
            cf.edges.insert(e);
            cf.effects.insert(e);
        }
        self.check(cf)?;
        let gf = fb.owners.get_mut(&Owner::Function(callee)).expect("owner");
        for &(r, o) in &callee_pts {
            gf.points_to.insert((r, o));
            if self.rs.flow() {
                gf.flow_seeds.insert((r, o));
            }
        }
        gf.edges.extend(callee_edges);
        self.check(gf)
    }
}

fn range_of(facts: &BTreeSet<(RegId, AbstractObject)>, r: RegId) -> BTreeSet<AbstractObject> {
    facts
        .range((r, AbstractObject::MIN)..)
        .take_while(|(x, _)| *x == r)
        .map(|&(_, o)| o)
        .collect()
}

fn field_b_of(set: &BTreeSet<AbstractObject>) -> BTreeSet<AbstractObject> {
    set.iter().filter_map(|o| o.field_b()).collect()
}

fn succ_of(f: &OwnerFacts, set: &BTreeSet<AbstractObject>) -> BTreeSet<AbstractObject> {
    set.iter()
        .flat_map(|&o| f.succ(o).map(|(_, k)| k))
        .collect()
}

/// Callee object to caller objects, computed from the callee's object set
/// and the caller's edge facts.
fn resolve_facts(
    callee: &OwnerFacts,
    callee_fn: FuncId,
    actuals: &[BTreeSet<AbstractObject>],
    caller: &OwnerFacts,
) -> BTreeMap<AbstractObject, BTreeSet<AbstractObject>> {
    let mut res: BTreeMap<AbstractObject, BTreeSet<AbstractObject>> = BTreeMap::new();
    for o in callee.objects() {
        if !o.is_formal_of(callee_fn) {
            res.insert(o, BTreeSet::from([o]));
        }
    }
    for (k, a) in actuals.iter().enumerate() {
        let v = |p| AbstractObject::formal(callee_fn, k as u32, p);
        let b = field_b_of(a);
        let mut aa = succ_of(caller, a);
        let mut ba = succ_of(caller, &b);
        loop {
            let n = (aa.len(), ba.len());
            aa.extend(succ_of(caller, &aa));
            ba.extend(succ_of(caller, &ba));
            if (aa.len(), ba.len()) == n {
                break;
            }
        }
        // Field-b views of the saturated sets, themselves closed under edges.
        let mut ab = field_b_of(&aa);
        let mut bb = field_b_of(&ba);
        loop {
            let n = (ab.len(), bb.len());
            ab.extend(succ_of(caller, &ab));
            bb.extend(succ_of(caller, &bb));
            if (ab.len(), bb.len()) == n {
                break;
            }
        }
        res.insert(v(Path::A), a.clone());
        res.insert(v(Path::B), b);
        res.insert(v(Path::AA), aa);
        res.insert(v(Path::AB), ab);
        res.insert(v(Path::BA), ba);
        res.insert(v(Path::BB), bb);
    }
    res
}

/// Objects reachable from the callee's formals or its returned registers.
fn accessible_facts(f: &OwnerFacts, func: FuncId, returned: &[RegId]) -> BTreeSet<AbstractObject> {
    let mut seen: BTreeSet<AbstractObject> = f
        .objects()
        .into_iter()
        .filter(|o| o.is_formal_of(func))
        .collect();
    for &r in returned {
        seen.extend(f.pts(r));
    }
    let mut work: Vec<AbstractObject> = seen.iter().copied().collect();
    while let Some(o) = work.pop() {
        for (_, k) in f.succ(o) {
            if seen.insert(k) {
                work.push(k);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_program;

    const L1: &str = "fun f(): 1 {\n p = alloc 2\n q = alloc 2\n r = alloc 2\n store p, char** r\n store q, char** r\n return p\n}";

    fn alias(text: &str, rs: RuleSet, a: &str, b: &str) -> bool {
        let p = parse_program(text).unwrap();
        let low = Lowered::new(&p);
        let f = p.func_id("f").unwrap();
        let (x, y) = (low.regs.get(f, a).unwrap(), low.regs.get(f, b).unwrap());
        eval_naive(&p, rs)
            .unwrap()
            .alias_pairs()
            .contains(&(x.min(y), x.max(y)))
    }

    #[test]
    fn l1_aliases_only_under_unification() {
        assert!(!alias(L1, RuleSet::InclusionFields, "p", "q"));
        assert!(alias(L1, RuleSet::Steens, "p", "q"));
    }

    #[test]
    fn return_only_function_has_formal_facts() {
        let p = parse_program("fun f(x): 0 {\n return\n}").unwrap();
        let fb = eval_naive(&p, RuleSet::Dsa).unwrap();
        let f = &fb.owners[&Owner::Function(FuncId(0))];
        assert_eq!(f.points_to.len(), 1);
        assert_eq!(f.edges.len(), 6);
        assert!(f.effects.is_empty());
    }

    #[test]
    fn rule_sets_grow_fact_sets() {
        let p = parse_program(
            "fun f(): 0 {\n p = alloc 2\n q = gep int** p, b\n x = alloc 1\n store x, int** q\n y = load int** q\n z = cast int*, y\n return\n}",
        )
        .unwrap();
        let i = eval_naive(&p, RuleSet::Inclusion).unwrap().points_to();
        let fld = eval_naive(&p, RuleSet::InclusionFields)
            .unwrap()
            .points_to();
        let st = eval_naive(&p, RuleSet::Steens).unwrap().points_to();
        assert!(i.is_subset(&fld) && fld.is_subset(&st));
        assert!(i.len() < fld.len());
    }

    #[test]
    fn fact_limit_is_enforced() {
        let p = parse_program(L1).unwrap();
        assert_eq!(
            eval_naive_with(&p, RuleSet::Steens, 3),
            Err(OracleError::ResourceLimit { limit: 3 })
        );
    }
}

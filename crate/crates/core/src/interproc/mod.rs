//! Context-insensitive whole-program analyses and the context-sensitive
//! Local / Bottom-Up / Top-Down pipeline with per-function graphs.

mod metrics;
mod resolve;

pub use metrics::{FunctionMetrics, MetricsReport, PhaseTimes};
pub use resolve::{accessible, resolve, ResolveMap};

use crate::domain::{AbstractObject, AliasRelation, DomainError, Facts, Owner, PointsToGraph};
use crate::ir::{
    build_call_graph, validate_program, CallGraph, FuncId, InstrId, LInstr, Lowered, Program,
    RegId, ValidationError,
};
use crate::lattice::TypeLattice;
use crate::local::{
    apply_instr, compute_pfs_facts, saturate_local, seed_formals, FlowFacts, LocalConfig,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnalysisVariant {
    AndersenCi,
    SteensCi,
    Dsa,
    DsaLegacyTd,
    PfsDsa,
    TeaDsa,
}

impl AnalysisVariant {
    pub const ALL: [AnalysisVariant; 6] = [
        AnalysisVariant::AndersenCi,
        AnalysisVariant::SteensCi,
        AnalysisVariant::Dsa,
        AnalysisVariant::DsaLegacyTd,
        AnalysisVariant::PfsDsa,
        AnalysisVariant::TeaDsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisVariant::AndersenCi => "andersen-ci",
            AnalysisVariant::SteensCi => "steens-ci",
            AnalysisVariant::Dsa => "dsa",
            AnalysisVariant::DsaLegacyTd => "dsa-legacy-td",
            AnalysisVariant::PfsDsa => "pfs-dsa",
            AnalysisVariant::TeaDsa => "tea-dsa",
        }
    }

    pub fn is_context_sensitive(self) -> bool {
        !matches!(
            self,
            AnalysisVariant::AndersenCi | AnalysisVariant::SteensCi
        )
    }

    /// Call and return sites use flow facts instead of full points-to sets.
    pub fn uses_flow_facts(self) -> bool {
        matches!(self, AnalysisVariant::PfsDsa | AnalysisVariant::TeaDsa)
    }

    pub fn is_typed(self) -> bool {
        self == AnalysisVariant::TeaDsa
    }

    pub fn is_legacy(self) -> bool {
        self == AnalysisVariant::DsaLegacyTd
    }

    pub fn local_config(self) -> LocalConfig {
        match self {
            AnalysisVariant::AndersenCi => LocalConfig::INCLUSION,
            AnalysisVariant::TeaDsa => LocalConfig::TYPED,
            _ => LocalConfig::STEENS,
        }
    }
}

impl fmt::Display for AnalysisVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown analysis variant `{0}`")]
pub struct UnknownVariant(pub String);

impl FromStr for AnalysisVariant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| UnknownVariant(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("top-down introduced foreign objects into `{function}`: {}", .objects.join(", "))]
    ForeignObjectLeak {
        function: String,
        objects: Vec<String>,
    },
    #[error("flow facts of `{0}` are not contained in its points-to sets")]
    UnsoundFlowFacts(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Local,
    BottomUp,
    TopDown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Compatibility order for the typed variant.
    pub lattice: TypeLattice,
}

type Seeds = BTreeMap<RegId, BTreeSet<AbstractObject>>;
type Actuals = Vec<BTreeSet<AbstractObject>>;
type SiteKey = ([u64; 3], Actuals);

#[derive(Clone, Debug)]
struct FlowEntry {
    /// Graph and seed versions the facts were computed from.
    key: (u64, u64),
    /// Bumped only when a recomputation yields different facts.
    gen: u64,
    facts: FlowFacts,
}

#[derive(Clone, Debug)]
struct Engine {
    program: Program,
    lowered: Lowered,
    cg: CallGraph,
    variant: AnalysisVariant,
    graphs: Vec<PointsToGraph>,
    // Interprocedural flow facts per function, and a change counter for them.
    ext_flow: Vec<Seeds>,
    ext_version: u64,
    ext_versions: Vec<u64>,
    flow_cache: Vec<Option<FlowEntry>>,
    // Input versions of call-site applications that added nothing.
    bu_idle: BTreeMap<InstrId, SiteKey>,
    td_idle: BTreeMap<InstrId, SiteKey>,
    td_checks: usize,
    rounds: usize,
}

impl Engine {
    fn new(program: &Program, variant: AnalysisVariant, opts: Options) -> Self {
        let lowered = Lowered::new(program);
        let cg = build_call_graph(program);
        let mode = variant.local_config().mode(opts.lattice);
        let graphs: Vec<PointsToGraph> = if variant.is_context_sensitive() {
            program
                .ids()
                .map(|f| PointsToGraph::new(Owner::Function(f), mode))
                .collect()
        } else {
            vec![PointsToGraph::new(Owner::WholeProgram, mode)]
        };
        let n = program.functions().len();
        Engine {
            program: program.clone(),
            lowered,
            cg,
            variant,
            graphs,
            ext_flow: vec![Seeds::new(); n],
            ext_version: 0,
            ext_versions: vec![0; n],
            flow_cache: vec![None; n],
            bu_idle: BTreeMap::new(),
            td_idle: BTreeMap::new(),
            td_checks: 0,
            rounds: 0,
        }
    }

    fn typed(&self) -> bool {
        self.variant.is_typed()
    }

    fn fingerprint(&self) -> (Vec<u64>, u64) {
        (
            self.graphs.iter().map(PointsToGraph::version).collect(),
            self.ext_version,
        )
    }

    fn run(&mut self) -> Result<PhaseTimes, AnalysisError> {
        let mut times = PhaseTimes::default();
        let start = Instant::now();
        if !self.variant.is_context_sensitive() {
            self.local_phase();
            times.local = start.elapsed();
            times.total = times.local;
            return Ok(times);
        }
        self.local_phase();
        times.local = start.elapsed();
        loop {
            self.rounds += 1;
            let before = self.fingerprint();
            let t = Instant::now();
            self.bottom_up_phase();
            times.bottom_up += t.elapsed();
            let t = Instant::now();
            self.top_down_phase()?;
            times.top_down += t.elapsed();
            if self.fingerprint() == before {
                break;
            }
        }
        if self.variant.uses_flow_facts() {
            for f in self.program.ids() {
                self.ensure_flow(f);
                if !self.flow(f).is_within(&self.graphs[f.index()]) {
                    return Err(AnalysisError::UnsoundFlowFacts(
                        self.program.function(f).name.clone(),
                    ));
                }
            }
        }
        times.total = start.elapsed();
        Ok(times)
    }

    fn run_phase(&mut self, phase: Phase) -> Result<(), AnalysisError> {
        match phase {
            Phase::Local => self.local_phase(),
            Phase::BottomUp if self.variant.is_context_sensitive() => self.bottom_up_phase(),
            Phase::TopDown if self.variant.is_context_sensitive() => self.top_down_phase()?,
            _ => {}
        }
        Ok(())
    }

    fn local_phase(&mut self) {
        let typed = self.typed();
        if !self.variant.is_context_sensitive() {
            let g = &mut self.graphs[0];
            loop {
                let v = g.version();
                for f in &self.lowered.funcs {
                    for i in &f.body {
                        apply_instr(i, g, false);
                        if let LInstr::Call {
                            dests,
                            callee,
                            args,
                            ..
                        } = i
                        {
                            copy_call(&self.lowered, g, dests, *callee, args);
                        }
                    }
                }
                if g.version() == v {
                    return;
                }
            }
        }
        for f in &self.lowered.funcs {
            let g = &mut self.graphs[f.id.index()];
            if g.object_count() == 0 {
                seed_formals(f, g);
            }
            saturate_local(f, g, typed);
        }
    }

    fn call_sites(&self, f: FuncId) -> Vec<InstrId> {
        self.cg.calls_from(f).map(|e| e.site).collect()
    }

    fn bottom_up_phase(&mut self) {
        let typed = self.typed();
        for f in self.cg.reverse_topo_order() {
            let sites = self.call_sites(f);
            // Flow facts are refreshed once per pass; the pass that changes
            // nothing saw fresh ones.
            self.refresh_flow(f);
            loop {
                let before = (self.graphs[f.index()].version(), self.flow_gen(f));
                for &site in &sites {
                    self.bottom_up(f, site);
                }
                saturate_local(self.lowered.func(f), &mut self.graphs[f.index()], typed);
                self.refresh_flow(f);
                if (self.graphs[f.index()].version(), self.flow_gen(f)) == before {
                    break;
                }
            }
        }
    }

    fn top_down_phase(&mut self) -> Result<(), AnalysisError> {
        let typed = self.typed();
        let snapshot: Vec<BTreeSet<AbstractObject>> =
            self.graphs.iter().map(|g| g.object_set()).collect();
        for f in self.cg.topo_order().to_vec() {
            // Top-down only writes into callees, so `f` is fixed from here.
            self.refresh_flow(f);
            for site in self.call_sites(f) {
                let (_, g, _) = self.lowered.func(f).call(site).expect("call site");
                loop {
                    // The callee's own flow facts are not an input here.
                    let before = self.graphs[g.index()].version();
                    self.top_down(f, site);
                    saturate_local(self.lowered.func(g), &mut self.graphs[g.index()], typed);
                    if self.graphs[g.index()].version() == before {
                        break;
                    }
                }
            }
        }
        if self.variant.is_legacy() {
            return Ok(());
        }
        for (f, before) in self.program.ids().zip(snapshot) {
            self.td_checks += 1;
            let after = self.graphs[f.index()].object_set();
            if after != before {
                let objects = after
                    .difference(&before)
                    .map(|o| o.name(&self.program))
                    .collect();
                return Err(AnalysisError::ForeignObjectLeak {
                    function: self.program.function(f).name.clone(),
                    objects,
                });
            }
        }
        Ok(())
    }

    fn refresh_flow(&mut self, f: FuncId) {
        if self.variant.uses_flow_facts() {
            self.ensure_flow(f);
        }
    }

    fn ensure_flow(&mut self, f: FuncId) {
        let key = (
            self.graphs[f.index()].version(),
            self.ext_versions[f.index()],
        );
        let old = &self.flow_cache[f.index()];
        if matches!(old, Some(c) if c.key == key) {
            return;
        }
        let ff = compute_pfs_facts(
            self.lowered.func(f),
            &self.graphs[f.index()],
            &self.ext_flow[f.index()],
            self.typed(),
        );
        let gen = match old {
            Some(c) if c.facts == ff => c.gen,
            Some(c) => c.gen + 1,
            None => 0,
        };
        self.flow_cache[f.index()] = Some(FlowEntry {
            key,
            gen,
            facts: ff,
        });
    }

    fn flow(&self, f: FuncId) -> &FlowFacts {
        &self.flow_cache[f.index()]
            .as_ref()
            .expect("flow facts computed")
            .facts
    }

    fn flow_gen(&self, f: FuncId) -> u64 {
        self.flow_cache[f.index()]
            .as_ref()
            .map_or(u64::MAX, |c| c.gen)
    }

    fn add_flow(&mut self, f: FuncId, r: RegId, o: AbstractObject) {
        if self.ext_flow[f.index()].entry(r).or_default().insert(o) {
            self.ext_version += 1;
            self.ext_versions[f.index()] += 1;
        }
    }

    /// Objects passed for each argument at a call site of `caller`, from its
    /// last refreshed flow facts under the flow-fact variants.
    fn actuals(&self, caller: FuncId, args: &[RegId]) -> Actuals {
        if self.variant.uses_flow_facts() {
            args.iter()
                .map(|&x| self.flow(caller).get(x).clone())
                .collect()
        } else {
            args.iter()
                .map(|&x| self.graphs[caller.index()].pts_objects(x))
                .collect()
        }
    }

    fn resolve_at(
        &self,
        caller: FuncId,
        site: InstrId,
        actuals: &[BTreeSet<AbstractObject>],
    ) -> (Vec<RegId>, FuncId, ResolveMap) {
        let (dests, g, _) = self.lowered.func(caller).call(site).expect("call site");
        let dests = dests.to_vec();
        let arity = self.lowered.func(g).formals.len();
        let res = resolve(
            &self.graphs[g.index()],
            g,
            arity,
            &self.graphs[caller.index()],
            actuals,
        );
        (dests, g, res)
    }

    /// Graph versions a call-site application of `f` calling `g` reads
    /// besides the actuals. Versions grow with every change, so equal keys
    /// mean identical states.
    fn site_versions(&self, f: FuncId, g: FuncId) -> [u64; 3] {
        [
            self.graphs[f.index()].version(),
            self.graphs[g.index()].version(),
            self.ext_versions[g.index()],
        ]
    }

    fn site_key(&mut self, f: FuncId, site: InstrId) -> (FuncId, Actuals, SiteKey) {
        let (_, g, args) = self.lowered.func(f).call(site).expect("call site");
        let args = args.to_vec();
        let actuals = self.actuals(f, &args);
        (g, actuals.clone(), (self.site_versions(f, g), actuals))
    }

    fn bottom_up(&mut self, f: FuncId, site: InstrId) {
        let (g, actuals, key) = self.site_key(f, site);
        if self.bu_idle.get(&site) == Some(&key) {
            return;
        }
        self.bottom_up_at(f, site, actuals);
        if self.site_versions(f, g) == key.0 {
            self.bu_idle.insert(site, key);
        }
    }

    fn top_down(&mut self, f: FuncId, site: InstrId) {
        let (g, actuals, key) = self.site_key(f, site);
        if self.td_idle.get(&site) == Some(&key) {
            return;
        }
        self.top_down_at(f, site, actuals);
        if self.site_versions(f, g) == key.0 {
            self.td_idle.insert(site, key);
        }
    }

    fn bottom_up_at(&mut self, f: FuncId, site: InstrId, actuals: Actuals) {
        let pfs = self.variant.uses_flow_facts();
        let (dests, g, res) = self.resolve_at(f, site, &actuals);
        if pfs {
            self.ensure_flow(g);
        }
        let callee = &self.graphs[g.index()];
        let mut pts_add = Vec::new();
        let mut returned = Vec::new();
        for (_, values) in self.lowered.func(g).returns() {
            for (k, &z) in values.iter().enumerate() {
                returned.push(z);
                let src = if pfs {
                    self.flow(g).get(z).clone()
                } else {
                    callee.pts_objects(z)
                };
                for h in src {
                    for &i in res.get(h) {
                        pts_add.push((dests[k], i));
                    }
                }
            }
        }
        let acc = accessible(callee, g, &returned);
        let mut edge_add = Vec::new();
        for grp in callee.groups() {
            let objs: Vec<AbstractObject> = callee.member_objects(grp).collect();
            let srcs = res.image(objs.iter().filter(|o| acc.contains(o)));
            if srcs.is_empty() {
                continue;
            }
            for (tag, targets) in callee.effect_slots(grp) {
                let tobjs: Vec<AbstractObject> = targets
                    .iter()
                    .flat_map(|&t| callee.member_objects(t))
                    .collect();
                let dsts = res.image(&tobjs);
                edge_add.push((srcs.clone(), tag, dsts));
            }
        }
        let caller = &mut self.graphs[f.index()];
        for &(r, o) in &pts_add {
            caller.add_points_to(r, o);
        }
        for (hs, t, is) in edge_add {
            caller.add_edge_product(&hs, t, &is, true);
        }
        if pfs {
            for (r, o) in pts_add {
                self.add_flow(f, r, o);
            }
        }
    }

    fn top_down_at(&mut self, f: FuncId, site: InstrId, actuals: Actuals) {
        let pfs = self.variant.uses_flow_facts();
        let (_, g, res) = self.resolve_at(f, site, &actuals);
        let formals = self.lowered.func(g).formals.clone();
        let caller = &self.graphs[f.index()];

        let inv = res.inverse(|_| true);
        let mut pts_add = Vec::new();
        for (k, a) in actuals.iter().enumerate() {
            for h in a {
                for &i in inv.get(h).into_iter().flatten() {
                    pts_add.push((formals[k], i));
                }
            }
        }

        let inv_formal = res.inverse(|o| o.is_formal_of(g));
        let lift = |objs: &[AbstractObject]| -> BTreeSet<AbstractObject> {
            objs.iter()
                .flat_map(|o| inv_formal.get(o).into_iter().flatten().copied())
                .collect()
        };
        let mut edge_add = Vec::new();
        for grp in caller.groups() {
            let js = lift(&caller.member_objects(grp).collect::<Vec<_>>());
            if js.is_empty() {
                continue;
            }
            for (tag, targets) in caller.slots(grp) {
                let tobjs: Vec<AbstractObject> = targets
                    .iter()
                    .flat_map(|&t| caller.member_objects(t))
                    .collect();
                edge_add.push((js.clone(), tag, lift(&tobjs)));
            }
        }

        let mut unions = Vec::new();
        if self.variant.is_legacy() {
            let image: BTreeSet<AbstractObject> = res
                .iter()
                .filter(|(j, _)| j.is_formal_of(g))
                .flat_map(|(j, hs)| {
                    unions.extend(hs.iter().map(|&h| (j, h)));
                    hs.iter().copied()
                })
                .collect();
            for grp in caller.groups() {
                let srcs: BTreeSet<AbstractObject> = caller
                    .member_objects(grp)
                    .filter(|o| image.contains(o))
                    .collect();
                if srcs.is_empty() {
                    continue;
                }
                for (tag, targets) in caller.slots(grp) {
                    let dsts: BTreeSet<AbstractObject> = targets
                        .iter()
                        .flat_map(|&t| caller.member_objects(t))
                        .filter(|o| image.contains(o))
                        .collect();
                    edge_add.push((srcs.clone(), tag, dsts));
                }
            }
        }

        let callee = &mut self.graphs[g.index()];
        for &(r, o) in &pts_add {
            callee.add_points_to(r, o);
        }
        for (js, t, ks) in edge_add {
            callee.add_edge_product(&js, t, &ks, false);
        }
        for (j, h) in unions {
            let (a, b) = (callee.node(j), callee.node(h));
            callee.union_nodes(a, b);
        }
        if pfs {
            for (r, o) in pts_add {
                self.add_flow(g, r, o);
            }
        }
    }

    fn facts(&self) -> (Vec<Facts>, Vec<Seeds>) {
        (
            self.graphs.iter().map(PointsToGraph::facts).collect(),
            self.ext_flow.clone(),
        )
    }
}

/// Copy rules of the context-insensitive variants: actuals flow into the
/// callee's formal registers and returned registers into the call's results.
fn copy_call(p: &Lowered, g: &mut PointsToGraph, dests: &[RegId], callee: FuncId, args: &[RegId]) {
    let func = p.func(callee);
    for (&x, &f) in args.iter().zip(&func.formals) {
        for n in g.pts(x) {
            g.add_points_to_node(f, n);
        }
    }
    for (_, values) in func.returns() {
        for (&z, &y) in values.iter().zip(dests) {
            for n in g.pts(z) {
                g.add_points_to_node(y, n);
            }
        }
    }
}

/// Frozen outcome of one analysis run.
#[derive(Clone, Debug)]
pub struct AnalysisResult {
    engine: Engine,
    metrics: MetricsReport,
}

impl AnalysisResult {
    pub fn variant(&self) -> AnalysisVariant {
        self.engine.variant
    }

    pub fn program(&self) -> &Program {
        &self.engine.program
    }

    pub fn lowered(&self) -> &Lowered {
        &self.engine.lowered
    }

    pub fn call_graph(&self) -> &CallGraph {
        &self.engine.cg
    }

    pub fn is_context_sensitive(&self) -> bool {
        self.engine.variant.is_context_sensitive()
    }

    /// The graph holding `f`'s facts: its own graph, or the whole-program one.
    pub fn graph(&self, f: FuncId) -> &PointsToGraph {
        if self.is_context_sensitive() {
            &self.engine.graphs[f.index()]
        } else {
            &self.engine.graphs[0]
        }
    }

    pub fn graphs(&self) -> &[PointsToGraph] {
        &self.engine.graphs
    }

    /// Display name of a graph's owner.
    pub fn owner_name(&self, owner: Owner) -> &str {
        match owner {
            Owner::Function(f) => &self.engine.program.function(f).name,
            Owner::WholeProgram => "whole-program",
        }
    }

    pub fn flow_facts(&self, f: FuncId) -> Option<&FlowFacts> {
        if !self.engine.variant.uses_flow_facts() {
            return None;
        }
        self.engine.flow_cache[f.index()].as_ref().map(|c| &c.facts)
    }

    pub fn metrics(&self) -> &MetricsReport {
        &self.metrics
    }

    pub fn reg(&self, func: &str, name: &str) -> Option<RegId> {
        let f = self.engine.program.func_id(func)?;
        self.engine.lowered.regs.get(f, name)
    }

    pub fn reg_name(&self, r: RegId) -> String {
        let t = &self.engine.lowered.regs;
        format!(
            "{}.{}",
            self.engine.program.function(t.func(r)).name,
            t.name(r)
        )
    }

    /// Object-level points-to set of a named register.
    pub fn points_to(
        &self,
        func: &str,
        reg: &str,
    ) -> Result<BTreeSet<AbstractObject>, DomainError> {
        let f = self
            .engine
            .program
            .func_id(func)
            .ok_or_else(|| DomainError::UnknownName(func.to_string()))?;
        let r = self
            .engine
            .lowered
            .regs
            .get(f, reg)
            .ok_or_else(|| DomainError::UnknownName(format!("{func}.{reg}")))?;
        Ok(self.graph(f).pts_objects(r))
    }

    pub fn alias(&self, func: &str, a: &str, b: &str) -> Result<bool, DomainError> {
        let f = self
            .engine
            .program
            .func_id(func)
            .ok_or_else(|| DomainError::UnknownName(func.to_string()))?;
        let lookup = |n: &str| {
            self.engine
                .lowered
                .regs
                .get(f, n)
                .ok_or_else(|| DomainError::UnknownName(format!("{func}.{n}")))
        };
        let (x, y) = (lookup(a)?, lookup(b)?);
        Ok(self.graph(f).alias_pairs().contains(&(x.min(y), x.max(y))))
    }

    /// May-alias register pairs. Context-sensitive variants relate registers
    /// of the same function; the insensitive ones relate any two registers.
    pub fn alias_pairs(&self) -> AliasRelation {
        self.engine
            .graphs
            .iter()
            .flat_map(|g| g.alias_pairs())
            .collect()
    }

    pub fn alias_pairs_in(&self, f: FuncId) -> AliasRelation {
        let regs = &self.engine.lowered.regs;
        self.graph(f)
            .alias_pairs()
            .into_iter()
            .filter(|&(a, b)| regs.func(a) == f && regs.func(b) == f)
            .collect()
    }

    /// Object-level facts, per graph owner.
    pub fn facts(&self) -> BTreeMap<Owner, Facts> {
        self.engine
            .graphs
            .iter()
            .map(|g| (g.owner(), g.facts()))
            .collect()
    }

    /// A copy whose graphs have every type tag collapsed.
    pub fn erase_tags(&self) -> AnalysisResult {
        let mut r = self.clone();
        for g in &mut r.engine.graphs {
            *g = g.erase_tags();
        }
        r
    }

    /// Number of per-function object-set comparisons made around Top-Down.
    pub fn top_down_checks(&self) -> usize {
        self.engine.td_checks
    }

    /// Runs one phase again on a copy of the converged state and returns the
    /// number of facts it adds.
    pub fn rerun_phase(&self, phase: Phase) -> Result<usize, AnalysisError> {
        let mut e = self.engine.clone();
        // Without this the phase would skip every call site as already done.
        e.bu_idle.clear();
        e.td_idle.clear();
        let (before, before_flow) = e.facts();
        let versions = e.fingerprint();
        e.run_phase(phase)?;
        let (after, after_flow) = e.facts();
        let mut added = 0;
        for (b, a) in before.iter().zip(&after) {
            added +=
                a.points_to.difference(&b.points_to).count() + a.edges.difference(&b.edges).count();
        }
        for (b, a) in before_flow.iter().zip(&after_flow) {
            added += a
                .iter()
                .map(|(r, s)| s.difference(b.get(r).unwrap_or(&BTreeSet::new())).count())
                .sum::<usize>();
        }
        if added == 0 && e.fingerprint() != versions {
            // Unions or objects without new object-level facts.
            added = 1;
        }
        Ok(added)
    }
}

/// Validates `p` and runs one analysis variant to its fixpoint.
pub fn run_analysis(
    p: &Program,
    variant: AnalysisVariant,
) -> Result<AnalysisResult, AnalysisError> {
    run_analysis_with(p, variant, Options::default())
}

pub fn run_analysis_with(
    p: &Program,
    variant: AnalysisVariant,
    opts: Options,
) -> Result<AnalysisResult, AnalysisError> {
    validate_program(p)?;
    let mut engine = Engine::new(p, variant, opts);
    let phases = engine.run()?;
    let mut report = MetricsReport {
        phases,
        rounds: engine.rounds,
        ..Default::default()
    };
    for g in &engine.graphs {
        let (name, f) = match g.owner() {
            Owner::Function(f) => (p.function(f).name.clone(), Some(f)),
            Owner::WholeProgram => ("whole-program".to_string(), None),
        };
        let m = metrics::function_metrics(p, &engine.cg, f, g);
        report.totals += m;
        report.functions.insert(name, m);
    }
    Ok(AnalysisResult {
        engine,
        metrics: report,
    })
}

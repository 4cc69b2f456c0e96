use super::{FuncId, InstrId, InstrKind, Program};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallEdge {
    pub caller: FuncId,
    pub callee: FuncId,
    pub site: InstrId,
}

/// Direct-call graph of a validated program.
#[derive(Clone, Debug)]
pub struct CallGraph {
    names: Vec<String>,
    edges: Vec<CallEdge>,
    topo: Vec<FuncId>,
}

impl CallGraph {
    pub fn nodes(&self) -> impl Iterator<Item = FuncId> {
        (0..self.names.len() as u32).map(FuncId)
    }

    pub fn name(&self, f: FuncId) -> &str {
        &self.names[f.index()]
    }

    /// One edge per call instruction, sorted by (caller, site).
    pub fn edges(&self) -> &[CallEdge] {
        &self.edges
    }

    /// Callers before callees; ties broken by function name.
    pub fn topo_order(&self) -> &[FuncId] {
        &self.topo
    }

    /// Callees before callers.
    pub fn reverse_topo_order(&self) -> Vec<FuncId> {
        self.topo.iter().rev().copied().collect()
    }

    pub fn topo_names(&self) -> Vec<&str> {
        self.topo.iter().map(|&f| self.name(f)).collect()
    }

    /// Call sites inside `caller`, sorted by instruction id.
    pub fn calls_from(&self, caller: FuncId) -> impl Iterator<Item = &CallEdge> {
        self.edges.iter().filter(move |e| e.caller == caller)
    }

    /// Call sites targeting `callee`, sorted by (caller name, instruction id).
    pub fn calls_into(&self, callee: FuncId) -> Vec<CallEdge> {
        let mut v: Vec<CallEdge> = self
            .edges
            .iter()
            .filter(|e| e.callee == callee)
            .copied()
            .collect();
        v.sort_by(|a, b| (self.name(a.caller), a.site).cmp(&(self.name(b.caller), b.site)));
        v
    }

    /// Functions reachable from `f` through one or more calls.
    pub fn transitive_callees(&self, f: FuncId) -> BTreeSet<FuncId> {
        let mut seen = BTreeSet::new();
        let mut work = vec![f];
        while let Some(g) = work.pop() {
            for e in self.calls_from(g) {
                if seen.insert(e.callee) {
                    work.push(e.callee);
                }
            }
        }
        seen
    }
}

/// Builds the call graph and its deterministic topological order. The
/// program must already be validated (all callees defined, no recursion).
pub fn build_call_graph(p: &Program) -> CallGraph {
    let names: Vec<String> = p.functions().iter().map(|f| f.name.clone()).collect();
    let mut edges = Vec::new();
    for caller in p.ids() {
        for i in &p.function(caller).body {
            if let InstrKind::Call { callee, .. } = &i.kind {
                let callee = p
                    .func_id(callee)
                    .expect("validated program resolves callees");
                edges.push(CallEdge {
                    caller,
                    callee,
                    site: i.id,
                });
            }
        }
    }
    edges.sort();

    let n = names.len();
    let mut indegree = vec![0usize; n];
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in &edges {
        if succ[e.caller.index()].insert(e.callee.index()) {
            indegree[e.callee.index()] += 1;
        }
    }
    let mut ready: BTreeSet<(&str, usize)> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(|v| (names[v].as_str(), v))
        .collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(first) = ready.pop_first() {
        let v = first.1;
        topo.push(FuncId(v as u32));
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.insert((names[w].as_str(), w));
            }
        }
    }
    assert_eq!(topo.len(), n, "call graph must be acyclic");
    CallGraph { names, edges, topo }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_program;

    fn order(text: &str) -> Vec<String> {
        let p = parse_program(text).unwrap();
        build_call_graph(&p)
            .topo_names()
            .into_iter()
            .map(String::from)
            .collect()
    }

    #[test]
    fn chain() {
        let t = "fun g(): 0 {\n return }\nfun f(): 0 {\n () = g()\n return }\nfun main(): 0 {\n () = f()\n return }";
        assert_eq!(order(t), ["main", "f", "g"]);
    }

    #[test]
    fn diamond_lexicographic() {
        let t = "fun main(): 0 {\n () = g()\n () = f()\n return }\nfun g(): 0 {\n () = h()\n return }\nfun f(): 0 {\n () = h()\n return }\nfun h(): 0 {\n return }";
        assert_eq!(order(t), ["main", "f", "g", "h"]);
    }

    #[test]
    fn single() {
        assert_eq!(order("fun f(): 0 {\n return }"), ["f"]);
    }

    #[test]
    fn reverse_visits_callees_first() {
        let t = "fun main(): 0 {\n () = g()\n () = f()\n return }\nfun g(): 0 {\n () = h()\n return }\nfun f(): 0 {\n () = h()\n return }\nfun h(): 0 {\n return }";
        let p = parse_program(t).unwrap();
        let cg = build_call_graph(&p);
        let rev = cg.reverse_topo_order();
        for e in cg.edges() {
            let pc = rev.iter().position(|&f| f == e.caller).unwrap();
            let pe = rev.iter().position(|&f| f == e.callee).unwrap();
            assert!(pe < pc);
        }
        assert_eq!(cg.edges().len(), 4);
        assert_eq!(cg.transitive_callees(p.func_id("main").unwrap()).len(), 3);
    }
}

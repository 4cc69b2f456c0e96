//! JSON (schema 1) and Graphviz renderings of analysis results.

use crate::domain::{Node, Owner, PointsToGraph};
use crate::interproc::{AnalysisResult, FunctionMetrics, MetricsReport};
use crate::ir::RegId;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Restrict output to one function's registers.
    pub function: Option<String>,
    /// Include wall-clock phase times (makes output run-dependent).
    pub timings: bool,
}

/// One owner's graph in canonical form: groups numbered in `groups()` order.
struct Canon<'a> {
    name: String,
    graph: &'a PointsToGraph,
    ids: BTreeMap<Node, usize>,
    regs: Vec<(String, RegId)>,
}

fn canon_graphs<'a>(
    r: &'a AnalysisResult,
    opts: &RenderOptions,
) -> Result<Vec<Canon<'a>>, RenderError> {
    let p = r.program();
    let only = match &opts.function {
        Some(name) => Some(
            p.func_id(name)
                .ok_or_else(|| RenderError::UnknownFunction(name.clone()))?,
        ),
        None => None,
    };
    let regs = &r.lowered().regs;
    let mut out = Vec::new();
    for g in r.graphs() {
        let (name, label): (String, Box<dyn Fn(RegId) -> String>) = match g.owner() {
            Owner::Function(f) => {
                if only.is_some_and(|o| o != f) {
                    continue;
                }
                (
                    r.owner_name(g.owner()).to_string(),
                    Box::new(|x| regs.name(x).to_string()),
                )
            }
            Owner::WholeProgram => (
                r.owner_name(g.owner()).to_string(),
                Box::new(|x| r.reg_name(x)),
            ),
        };
        let ids = g
            .groups()
            .into_iter()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let regs = g
            .registers()
            .filter(|&x| only.is_none_or(|o| regs.func(x) == o))
            .map(|x| (label(x), x))
            .collect();
        out.push(Canon {
            name,
            graph: g,
            ids,
            regs,
        });
    }
    Ok(out)
}

fn metrics_counts(m: &FunctionMetrics) -> Value {
    json!({ "objects": m.objects, "foreign": m.foreign, "groups": m.groups, "edges": m.edges })
}

pub fn metrics_json(m: &MetricsReport, timings: bool) -> Value {
    let functions: Map<String, Value> = m
        .functions
        .iter()
        .map(|(k, v)| (k.clone(), metrics_counts(v)))
        .collect();
    let mut out = json!({
        "functions": functions,
        "totals": metrics_counts(&m.totals),
        "rounds": m.rounds,
    });
    if timings {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        out["phases_ms"] = json!({
            "local": ms(m.phases.local),
            "bottom_up": ms(m.phases.bottom_up),
            "top_down": ms(m.phases.top_down),
            "total": ms(m.phases.total),
        });
    }
    out
}

pub fn to_json_value(r: &AnalysisResult, opts: &RenderOptions) -> Result<Value, RenderError> {
    let p = r.program();
    let mut functions = Map::new();
    for c in canon_graphs(r, opts)? {
        let g = c.graph;
        let mut groups = Vec::new();
        let mut edges = BTreeSet::new();
        for (&n, &id) in &c.ids {
            let view = g.group_view(n);
            let tags: Vec<String> = view.slots.iter().map(|(t, _)| t.to_string()).collect();
            groups.push((
                id,
                json!({
                    "id": id,
                    "objects": view.objects.iter().map(|o| o.name(p)).collect::<Vec<_>>(),
                    "tag": tags,
                }),
            ));
            for (_, targets) in &view.slots {
                edges.extend(targets.iter().map(|t| (id, c.ids[t])));
            }
        }
        groups.sort_by_key(|(id, _)| *id);
        let registers: Map<String, Value> = c
            .regs
            .iter()
            .map(|(name, x)| {
                (
                    name.clone(),
                    json!(g.pts(*x).iter().map(|n| c.ids[n]).collect::<Vec<_>>()),
                )
            })
            .collect();
        functions.insert(
            c.name,
            json!({
                "groups": groups.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
                "registers": registers,
                "edges": edges.into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "variant": r.variant().name(),
        "functions": functions,
        "metrics": metrics_json(r.metrics(), opts.timings),
    }))
}

pub fn to_json(r: &AnalysisResult, opts: &RenderOptions) -> Result<String, RenderError> {
    Ok(pretty(&to_json_value(r, opts)?))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One digraph per graph owner: registers as ellipses, groups as boxes
/// listing their objects, slot edges labelled with their tags.
pub fn to_dot(r: &AnalysisResult, opts: &RenderOptions) -> Result<String, RenderError> {
    let p = r.program();
    let mut out = String::new();
    for c in canon_graphs(r, opts)? {
        let g = c.graph;
        let _ = writeln!(out, "digraph {} {{", quote(&c.name));
        let _ = writeln!(out, "  rankdir=LR;");
        for (name, _) in &c.regs {
            let _ = writeln!(
                out,
                "  {} [shape=ellipse, label={}];",
                quote(&format!("r:{name}")),
                quote(name)
            );
        }
        for (&n, &id) in &c.ids {
            let objects: Vec<String> = g.group_objects(n).iter().map(|o| o.name(p)).collect();
            let _ = writeln!(
                out,
                "  g{id} [shape=box, label={}];",
                quote(&objects.join("\\n"))
            );
        }
        for (name, x) in &c.regs {
            for t in g.pts(*x) {
                let _ = writeln!(out, "  {} -> g{};", quote(&format!("r:{name}")), c.ids[&t]);
            }
        }
        for (&n, &id) in &c.ids {
            for (tag, targets) in g.slots(n) {
                for t in targets {
                    let _ = writeln!(
                        out,
                        "  g{id} -> g{} [label={}];",
                        c.ids[&t],
                        quote(&tag.to_string())
                    );
                }
            }
        }
        let _ = writeln!(out, "}}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::interproc::{run_analysis, AnalysisVariant};

    #[test]
    fn json_has_schema_and_functions() {
        let r = run_analysis(&fixtures::p1(), AnalysisVariant::Dsa).unwrap();
        let v = to_json_value(&r, &RenderOptions::default()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["variant"], "dsa");
        for f in ["main", "bar", "foo", "getStr"] {
            assert!(v["functions"][f]["groups"].is_array(), "{f}");
        }
        assert!(v["metrics"].get("phases_ms").is_none());
    }

    #[test]
    fn function_filter() {
        let r = run_analysis(&fixtures::p1(), AnalysisVariant::Dsa).unwrap();
        let opts = RenderOptions {
            function: Some("foo".into()),
            ..Default::default()
        };
        let v = to_json_value(&r, &opts).unwrap();
        assert_eq!(v["functions"].as_object().unwrap().len(), 1);
        let bad = RenderOptions {
            function: Some("nope".into()),
            ..Default::default()
        };
        assert_eq!(
            to_json(&r, &bad),
            Err(RenderError::UnknownFunction("nope".into()))
        );
    }

    #[test]
    fn dot_one_digraph_per_function() {
        let r = run_analysis(&fixtures::p1(), AnalysisVariant::PfsDsa).unwrap();
        let dot = to_dot(&r, &RenderOptions::default()).unwrap();
        assert_eq!(
            dot.matches("digraph ").count(),
            r.program().functions().len()
        );
        assert!(dot.contains("shape=ellipse") && dot.contains("shape=box"));
    }

    #[test]
    fn steens_groups_strings_under_s() {
        let r = run_analysis(&fixtures::p1(), AnalysisVariant::SteensCi).unwrap();
        let v = to_json_value(&r, &RenderOptions::default()).unwrap();
        let f = &v["functions"]["whole-program"];
        let gid = f["registers"]["bar.s"][0].as_u64().unwrap() as usize;
        let objects = f["groups"][gid]["objects"].as_array().unwrap();
        assert!(objects.len() >= 4);
    }
}

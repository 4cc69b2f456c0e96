use super::{InstrId, InstrKind, Program};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("function `{0}` is defined more than once")]
    DuplicateFunction(String),
    #[error("function `{function}` declares formal `{formal}` twice")]
    DuplicateFormal { function: String, formal: String },
    #[error("function `{0}` has no return instruction")]
    MissingReturn(String),
    #[error("function `{function}`, instruction {instr}: unknown callee {callee}")]
    UnknownCallee {
        function: String,
        instr: InstrId,
        callee: String,
    },
    #[error("function `{function}`, instruction {instr}: call to `{callee}` {detail}")]
    CallArity {
        function: String,
        instr: InstrId,
        callee: String,
        detail: String,
    },
    #[error(
        "function `{function}`, instruction {instr}: returns {found} values, declared {declared}"
    )]
    ReturnArity {
        function: String,
        instr: InstrId,
        found: usize,
        declared: usize,
    },
    #[error("recursion cycle [{}]", .0.join(", "))]
    Recursion(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Instruction count per function, by name.
    pub instruction_counts: BTreeMap<String, usize>,
    /// Non-fatal findings, e.g. registers read but never assigned.
    pub warnings: Vec<String>,
}

/// Checks direct-call resolution, arity agreement and acyclicity.
pub fn validate_program(p: &Program) -> Result<ValidationReport, ValidationError> {
    let mut seen = BTreeSet::new();
    for f in p.functions() {
        if !seen.insert(f.name.as_str()) {
            return Err(ValidationError::DuplicateFunction(f.name.clone()));
        }
        let mut formals = BTreeSet::new();
        for x in &f.formals {
            if !formals.insert(x) {
                return Err(ValidationError::DuplicateFormal {
                    function: f.name.clone(),
                    formal: x.clone(),
                });
            }
        }
    }

    let mut report = ValidationReport::default();
    for f in p.functions() {
        if f.returns().next().is_none() {
            return Err(ValidationError::MissingReturn(f.name.clone()));
        }
        for i in &f.body {
            match &i.kind {
                InstrKind::Call {
                    dests,
                    callee,
                    args,
                } => {
                    let g = p
                        .by_name(callee)
                        .ok_or_else(|| ValidationError::UnknownCallee {
                            function: f.name.clone(),
                            instr: i.id,
                            callee: callee.clone(),
                        })?;
                    let detail = if args.len() != g.formals.len() {
                        Some(format!(
                            "passes {} arguments, expected {}",
                            args.len(),
                            g.formals.len()
                        ))
                    } else if dests.len() != g.ret_arity {
                        Some(format!(
                            "binds {} results, callee returns {}",
                            dests.len(),
                            g.ret_arity
                        ))
                    } else {
                        None
                    };
                    if let Some(detail) = detail {
                        return Err(ValidationError::CallArity {
                            function: f.name.clone(),
                            instr: i.id,
                            callee: callee.clone(),
                            detail,
                        });
                    }
                }
                InstrKind::Return { values } if values.len() != f.ret_arity => {
                    return Err(ValidationError::ReturnArity {
                        function: f.name.clone(),
                        instr: i.id,
                        found: values.len(),
                        declared: f.ret_arity,
                    });
                }
                _ => {}
            }
        }

        let defined: BTreeSet<&str> = f
            .formals
            .iter()
            .map(String::as_str)
            .chain(f.body.iter().flat_map(|i| i.kind.defs()))
            .collect();
        let undefined: BTreeSet<&str> = f
            .body
            .iter()
            .flat_map(|i| i.kind.uses())
            .filter(|r| !defined.contains(r))
            .collect();
        for r in undefined {
            report.warnings.push(format!(
                "function `{}`: register `{r}` is read but never assigned",
                f.name
            ));
        }
        report
            .instruction_counts
            .insert(f.name.clone(), f.body.len());
    }

    if let Some(cycle) = find_cycle(p) {
        return Err(ValidationError::Recursion(cycle));
    }
    Ok(report)
}

fn find_cycle(p: &Program) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = p.functions().len();
    let succ: Vec<Vec<usize>> = p
        .functions()
        .iter()
        .map(|f| {
            let mut out: Vec<usize> = f
                .body
                .iter()
                .filter_map(|i| match &i.kind {
                    InstrKind::Call { callee, .. } => p.func_id(callee).map(|g| g.index()),
                    _ => None,
                })
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let mut mark = vec![Mark::White; n];
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        v: usize,
        succ: &[Vec<usize>],
        mark: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        mark[v] = Mark::Grey;
        stack.push(v);
        for &w in &succ[v] {
            match mark[w] {
                Mark::Grey => {
                    let start = stack
                        .iter()
                        .position(|&x| x == w)
                        .expect("grey node is on stack");
                    return Some(stack[start..].to_vec());
                }
                Mark::White => {
                    if let Some(c) = dfs(w, succ, mark, stack) {
                        return Some(c);
                    }
                }
                Mark::Black => {}
            }
        }
        stack.pop();
        mark[v] = Mark::Black;
        None
    }

    (0..n).find_map(|v| {
        if mark[v] != Mark::White {
            return None;
        }
        dfs(v, &succ, &mut mark, &mut stack).map(|c| {
            c.into_iter()
                .map(|k| p.functions()[k].name.clone())
                .collect()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_program;

    fn check(text: &str) -> Result<ValidationReport, ValidationError> {
        validate_program(&parse_program(text).unwrap())
    }

    #[test]
    fn direct_call_ok() {
        let r = check("fun f(): 0 {\n () = g()\n return }\nfun g(): 0 {\n return }").unwrap();
        assert_eq!(r.instruction_counts["f"], 2);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn self_recursion() {
        let e = check("fun f(): 0 {\n () = f()\n return }").unwrap_err();
        assert_eq!(e, ValidationError::Recursion(vec!["f".into()]));
        assert_eq!(e.to_string(), "recursion cycle [f]");
    }

    #[test]
    fn mutual_recursion_lists_cycle() {
        let e = check("fun f(): 0 {\n () = g()\n return }\nfun g(): 0 {\n () = f()\n return }")
            .unwrap_err();
        assert_eq!(e, ValidationError::Recursion(vec!["f".into(), "g".into()]));
    }

    #[test]
    fn unknown_callee() {
        let e = check("fun f(): 0 {\n () = h()\n return }").unwrap_err();
        assert!(matches!(&e, ValidationError::UnknownCallee { callee, .. } if callee == "h"));
        assert!(e.to_string().contains("unknown callee h"));
    }

    #[test]
    fn arity_mismatch() {
        let e = check("fun f(): 0 {\n p = alloc 1\n () = g(p)\n return }\nfun g(): 0 {\n return }")
            .unwrap_err();
        assert!(matches!(e, ValidationError::CallArity { .. }));
        let e = check("fun f(): 0 {\n (r) = g()\n return }\nfun g(): 0 {\n return }").unwrap_err();
        assert!(matches!(e, ValidationError::CallArity { .. }));
        let e = check("fun f(): 1 {\n return }").unwrap_err();
        assert!(matches!(
            e,
            ValidationError::ReturnArity {
                found: 0,
                declared: 1,
                ..
            }
        ));
    }

    #[test]
    fn missing_return() {
        let e = check("fun f(): 1 { a = alloc 2 }").unwrap_err();
        assert_eq!(e, ValidationError::MissingReturn("f".into()));
    }

    #[test]
    fn undefined_register_is_warning() {
        let r = check("fun f(): 1 {\n return q }").unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("`q`"));
    }

    #[test]
    fn duplicate_function() {
        let e = check("fun f(): 0 {\n return }\nfun f(): 0 {\n return }").unwrap_err();
        assert_eq!(e, ValidationError::DuplicateFunction("f".into()));
    }
}

//! Unification-based, context-sensitive points-to analyses for a small
//! LLVM-like IR, with a naive-fixpoint oracle and a field-overflow client.

pub mod batch;
pub mod checker;
pub mod domain;
pub mod fixtures;
pub mod interproc;
pub mod ir;
pub mod lattice;
pub mod local;
pub mod oracle;
pub mod render;

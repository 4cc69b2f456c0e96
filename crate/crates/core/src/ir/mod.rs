//! The analyzed language: a tiny LLVM-like IR whose functions are unordered
//! bags of pointer instructions with direct calls and multi-value returns.

mod callgraph;
mod lower;
mod parse;
mod print;
mod validate;

pub use callgraph::{build_call_graph, CallEdge, CallGraph};
pub use lower::{LInstr, LowerFunction, Lowered, RegId, RegTable};
pub use parse::{parse_program, ParseError};
pub use validate::{validate_program, ValidationError, ValidationReport};

use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    Int,
    Float,
    Char,
}

impl BaseType {
    pub const ALL: [BaseType; 3] = [BaseType::Int, BaseType::Float, BaseType::Char];

    pub fn name(self) -> &'static str {
        match self {
            BaseType::Int => "int",
            BaseType::Float => "float",
            BaseType::Char => "char",
        }
    }
}

/// A scalar or pointer type with at most two levels of indirection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Type {
    base: BaseType,
    depth: u8,
}

impl Type {
    pub const MAX_DEPTH: u8 = 2;

    pub fn new(base: BaseType, depth: u8) -> Option<Type> {
        (depth <= Self::MAX_DEPTH).then_some(Type { base, depth })
    }

    pub fn base(self) -> BaseType {
        self.base
    }

    pub fn depth(self) -> u8 {
        self.depth
    }

    pub fn is_pointer(self) -> bool {
        self.depth > 0
    }

    /// The type obtained by dereferencing a pointer of this type.
    pub fn pointee(self) -> Option<Type> {
        self.is_pointer().then(|| Type {
            base: self.base,
            depth: self.depth - 1,
        })
    }

    /// All nine types of the language.
    pub fn all() -> impl Iterator<Item = Type> {
        BaseType::ALL
            .into_iter()
            .flat_map(|base| (0..=Self::MAX_DEPTH).map(move |depth| Type { base, depth }))
    }

    pub fn pointers() -> impl Iterator<Item = Type> {
        Self::all().filter(|t| t.is_pointer())
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        for _ in 0..self.depth {
            f.write_str("*")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    A,
    B,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::A => "a",
            Field::B => "b",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Program-wide unique instruction identifier, assigned in source order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstrId(pub u32);

impl fmt::Display for InstrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a function in [`Program::functions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncId(pub u32);

impl FuncId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstrKind {
    /// `dest = alloc size`, size is 1 or 2 fields.
    Alloc {
        dest: String,
        size: u8,
    },
    Cast {
        dest: String,
        ty: Type,
        src: String,
    },
    Load {
        dest: String,
        ty: Type,
        src: String,
    },
    Store {
        value: String,
        ty: Type,
        ptr: String,
    },
    Gep {
        dest: String,
        ty: Type,
        src: String,
        field: Field,
    },
    Call {
        dests: Vec<String>,
        callee: String,
        args: Vec<String>,
    },
    Return {
        values: Vec<String>,
    },
}

impl InstrKind {
    /// Registers written by this instruction.
    pub fn defs(&self) -> Vec<&str> {
        match self {
            InstrKind::Alloc { dest, .. }
            | InstrKind::Cast { dest, .. }
            | InstrKind::Load { dest, .. }
            | InstrKind::Gep { dest, .. } => vec![dest],
            InstrKind::Call { dests, .. } => dests.iter().map(String::as_str).collect(),
            InstrKind::Store { .. } | InstrKind::Return { .. } => vec![],
        }
    }

    /// Registers read by this instruction.
    pub fn uses(&self) -> Vec<&str> {
        match self {
            InstrKind::Alloc { .. } => vec![],
            InstrKind::Cast { src, .. }
            | InstrKind::Load { src, .. }
            | InstrKind::Gep { src, .. } => {
                vec![src]
            }
            InstrKind::Store { value, ptr, .. } => vec![value, ptr],
            InstrKind::Call { args, .. } => args.iter().map(String::as_str).collect(),
            InstrKind::Return { values } => values.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub id: InstrId,
    pub kind: InstrKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub name: String,
    pub formals: Vec<String>,
    pub ret_arity: usize,
    pub body: Vec<Instruction>,
}

impl Function {
    pub fn returns(&self) -> impl Iterator<Item = (&Instruction, &[String])> {
        self.body.iter().filter_map(|i| match &i.kind {
            InstrKind::Return { values } => Some((i, values.as_slice())),
            _ => None,
        })
    }

    pub fn instr(&self, id: InstrId) -> Option<&Instruction> {
        self.body.iter().find(|i| i.id == id)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    functions: Vec<Function>,
    index: HashMap<String, FuncId>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.functions == other.functions
    }
}

impl Eq for Program {}

impl Program {
    /// Builds a program from functions. Later duplicates of a name are kept
    /// in the list but are unreachable by name; validation reports them.
    pub fn new(functions: Vec<Function>) -> Program {
        let mut index = HashMap::new();
        for (i, f) in functions.iter().enumerate() {
            index.entry(f.name.clone()).or_insert(FuncId(i as u32));
        }
        Program { functions, index }
    }

    pub fn functions(&self) -> &[Function] {
        &self.functions
    }

    pub fn function(&self, id: FuncId) -> &Function {
        &self.functions[id.index()]
    }

    pub fn func_id(&self, name: &str) -> Option<FuncId> {
        self.index.get(name).copied()
    }

    pub fn by_name(&self, name: &str) -> Option<&Function> {
        self.func_id(name).map(|id| self.function(id))
    }

    pub fn ids(&self) -> impl Iterator<Item = FuncId> {
        (0..self.functions.len() as u32).map(FuncId)
    }

    /// The function containing an instruction.
    pub fn owner_of(&self, id: InstrId) -> Option<FuncId> {
        self.ids().find(|&f| self.function(f).instr(id).is_some())
    }

    pub fn instr(&self, id: InstrId) -> Option<&Instruction> {
        self.functions.iter().find_map(|f| f.instr(id))
    }

    /// Allocation size of an `alloc` site, if `id` is one.
    pub fn alloc_size(&self, id: InstrId) -> Option<u8> {
        match self.instr(id).map(|i| &i.kind) {
            Some(InstrKind::Alloc { size, .. }) => Some(*size),
            _ => None,
        }
    }

    /// Allocation sites in `func` that define register `reg`, in source order.
    pub fn alloc_sites(&self, func: &str, reg: &str) -> Vec<InstrId> {
        self.by_name(func)
            .map(|f| {
                f.body
                    .iter()
                    .filter(|i| matches!(&i.kind, InstrKind::Alloc { dest, .. } if dest == reg))
                    .map(|i| i.id)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Returns a copy whose function bodies are permuted by `perm(func, len)`,
    /// which must return a permutation of `0..len`. Instruction ids move with
    /// their instructions.
    pub fn permuted(&self, mut perm: impl FnMut(FuncId, usize) -> Vec<usize>) -> Program {
        let functions = self
            .ids()
            .map(|id| {
                let f = self.function(id);
                let order = perm(id, f.body.len());
                Function {
                    body: order.into_iter().map(|k| f.body[k].clone()).collect(),
                    ..f.clone()
                }
            })
            .collect();
        Program::new(functions)
    }
}

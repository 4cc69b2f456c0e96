use super::{Field, FuncId, InstrId, InstrKind, Program, Type};
use std::collections::HashMap;
use std::fmt;

/// Program-wide register index; registers of different functions never share an id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegId(pub u32);

impl RegId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Default)]
pub struct RegTable {
    regs: Vec<(FuncId, String)>,
    index: HashMap<(FuncId, String), RegId>,
}

impl RegTable {
    fn intern(&mut self, func: FuncId, name: &str) -> RegId {
        if let Some(&id) = self.index.get(&(func, name.to_string())) {
            return id;
        }
        let id = RegId(self.regs.len() as u32);
        self.regs.push((func, name.to_string()));
        self.index.insert((func, name.to_string()), id);
        id
    }

    pub fn get(&self, func: FuncId, name: &str) -> Option<RegId> {
        self.index.get(&(func, name.to_string())).copied()
    }

    pub fn func(&self, r: RegId) -> FuncId {
        self.regs[r.index()].0
    }

    pub fn name(&self, r: RegId) -> &str {
        &self.regs[r.index()].1
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }

    /// Registers of one function, in id order.
    pub fn of(&self, func: FuncId) -> impl Iterator<Item = RegId> + '_ {
        self.regs
            .iter()
            .enumerate()
            .filter(move |(_, (f, _))| *f == func)
            .map(|(i, _)| RegId(i as u32))
    }
}

/// Instruction with interned registers and resolved callee. Memory
/// operations carry the access type (the pointee of the operand type).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LInstr {
    Alloc {
        id: InstrId,
        dest: RegId,
        size: u8,
    },
    Cast {
        id: InstrId,
        dest: RegId,
        src: RegId,
    },
    Load {
        id: InstrId,
        dest: RegId,
        src: RegId,
        access: Type,
    },
    Store {
        id: InstrId,
        value: RegId,
        ptr: RegId,
        access: Type,
    },
    Gep {
        id: InstrId,
        dest: RegId,
        src: RegId,
        field: Field,
    },
    Call {
        id: InstrId,
        dests: Vec<RegId>,
        callee: FuncId,
        args: Vec<RegId>,
    },
    Return {
        id: InstrId,
        values: Vec<RegId>,
    },
}

impl LInstr {
    pub fn id(&self) -> InstrId {
        match self {
            LInstr::Alloc { id, .. }
            | LInstr::Cast { id, .. }
            | LInstr::Load { id, .. }
            | LInstr::Store { id, .. }
            | LInstr::Gep { id, .. }
            | LInstr::Call { id, .. }
            | LInstr::Return { id, .. } => *id,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LowerFunction {
    pub id: FuncId,
    pub formals: Vec<RegId>,
    pub body: Vec<LInstr>,
}

impl LowerFunction {
    pub fn returns(&self) -> impl Iterator<Item = (InstrId, &[RegId])> {
        self.body.iter().filter_map(|i| match i {
            LInstr::Return { id, values } => Some((*id, values.as_slice())),
            _ => None,
        })
    }

    pub fn calls(&self) -> impl Iterator<Item = (InstrId, &[RegId], FuncId, &[RegId])> {
        self.body.iter().filter_map(|i| match i {
            LInstr::Call {
                id,
                dests,
                callee,
                args,
            } => Some((*id, dests.as_slice(), *callee, args.as_slice())),
            _ => None,
        })
    }

    pub fn call(&self, site: InstrId) -> Option<(&[RegId], FuncId, &[RegId])> {
        self.calls()
            .find(|c| c.0 == site)
            .map(|(_, d, g, a)| (d, g, a))
    }
}

/// A validated program with registers interned, shared by the analyses.
#[derive(Clone, Debug)]
pub struct Lowered {
    pub regs: RegTable,
    pub funcs: Vec<LowerFunction>,
}

impl Lowered {
    /// Lowers a validated program.
    pub fn new(p: &Program) -> Lowered {
        let mut regs = RegTable::default();
        let funcs = p
            .ids()
            .map(|fid| {
                let f = p.function(fid);
                let formals = f.formals.iter().map(|x| regs.intern(fid, x)).collect();
                let mut r = |name: &String| regs.intern(fid, name);
                let body = f
                    .body
                    .iter()
                    .map(|i| {
                        let id = i.id;
                        match &i.kind {
                            InstrKind::Alloc { dest, size } => LInstr::Alloc {
                                id,
                                dest: r(dest),
                                size: *size,
                            },
                            InstrKind::Cast { dest, src, .. } => LInstr::Cast {
                                id,
                                dest: r(dest),
                                src: r(src),
                            },
                            InstrKind::Load { dest, ty, src } => LInstr::Load {
                                id,
                                dest: r(dest),
                                src: r(src),
                                access: ty.pointee().expect("load operand is a pointer type"),
                            },
                            InstrKind::Store { value, ty, ptr } => LInstr::Store {
                                id,
                                value: r(value),
                                ptr: r(ptr),
                                access: ty.pointee().expect("store operand is a pointer type"),
                            },
                            InstrKind::Gep {
                                dest, src, field, ..
                            } => LInstr::Gep {
                                id,
                                dest: r(dest),
                                src: r(src),
                                field: *field,
                            },
                            InstrKind::Call {
                                dests,
                                callee,
                                args,
                            } => LInstr::Call {
                                id,
                                dests: dests.iter().map(&mut r).collect(),
                                callee: p
                                    .func_id(callee)
                                    .expect("validated program resolves callees"),
                                args: args.iter().map(&mut r).collect(),
                            },
                            InstrKind::Return { values } => LInstr::Return {
                                id,
                                values: values.iter().map(&mut r).collect(),
                            },
                        }
                    })
                    .collect();
                LowerFunction {
                    id: fid,
                    formals,
                    body,
                }
            })
            .collect();
        Lowered { regs, funcs }
    }

    pub fn func(&self, f: FuncId) -> &LowerFunction {
        &self.funcs[f.index()]
    }

    pub fn reg_display(&self, r: RegId) -> RegDisplay<'_> {
        RegDisplay {
            table: &self.regs,
            reg: r,
        }
    }
}

pub struct RegDisplay<'a> {
    table: &'a RegTable,
    reg: RegId,
}

impl fmt::Display for RegDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.table.name(self.reg))
    }
}

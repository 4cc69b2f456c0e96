use super::{Function, InstrKind, Instruction, Program};
use std::fmt;

impl fmt::Display for InstrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstrKind::Alloc { dest, size } => write!(f, "{dest} = alloc {size}"),
            InstrKind::Cast { dest, ty, src } => write!(f, "{dest} = cast {ty}, {src}"),
            InstrKind::Load { dest, ty, src } => write!(f, "{dest} = load {ty} {src}"),
            InstrKind::Store { value, ty, ptr } => write!(f, "store {value}, {ty} {ptr}"),
            InstrKind::Gep {
                dest,
                ty,
                src,
                field,
            } => write!(f, "{dest} = gep {ty} {src}, {field}"),
            InstrKind::Call {
                dests,
                callee,
                args,
            } => {
                write!(f, "({}) = {callee}({})", dests.join(", "), args.join(", "))
            }
            InstrKind::Return { values } if values.is_empty() => f.write_str("return"),
            InstrKind::Return { values } => write!(f, "return {}", values.join(", ")),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "fun {}({}): {} {{",
            self.name,
            self.formals.join(", "),
            self.ret_arity
        )?;
        for i in &self.body {
            writeln!(f, "  {i}")?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, func) in self.functions().iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            func.fmt(f)?;
        }
        Ok(())
    }
}

use super::{BaseType, Field, Function, InstrId, InstrKind, Instruction, Program, Type};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &["fun", "alloc", "cast", "load", "store", "gep", "return"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Newline => "end of line".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, c0) = (line, col);
        match c {
            '\n' => {
                chars.next();
                out.push(Spanned {
                    tok: Tok::Newline,
                    line: l,
                    col: c0,
                });
                line += 1;
                col = 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' | '{' | '}' | ',' | '=' | ':' | '*' => {
                chars.next();
                col += 1;
                out.push(Spanned {
                    tok: Tok::Sym(c),
                    line: l,
                    col: c0,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                let n = s.parse().map_err(|_| ParseError {
                    line: l,
                    col: c0,
                    message: format!("integer `{s}` out of range"),
                })?;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l,
                    col: c0,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_' || d == '.') {
                        break;
                    }
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l,
                    col: c0,
                });
            }
            other => {
                return Err(ParseError {
                    line: l,
                    col: c0,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    next_id: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        self.error(format!("expected {what}, found {}", self.peek().describe()))
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.expected(&format!("`{c}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.expected(&format!("`{kw}`"))),
        }
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn int(&mut self, what: &str) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.expected(what)),
        }
    }

    /// Comma-separated registers, possibly empty, stopping before `stop`.
    fn regs_until(&mut self, stop: impl Fn(&Tok) -> bool) -> Result<Vec<String>, ParseError> {
        let mut regs = Vec::new();
        if stop(self.peek()) {
            return Ok(regs);
        }
        loop {
            regs.push(self.name("register")?);
            if *self.peek() == Tok::Sym(',') {
                self.bump();
            } else {
                return Ok(regs);
            }
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let base = match self.peek() {
            Tok::Ident(s) if s == "int" => BaseType::Int,
            Tok::Ident(s) if s == "float" => BaseType::Float,
            Tok::Ident(s) if s == "char" => BaseType::Char,
            _ => return Err(self.expected("type (int, float or char)")),
        };
        self.bump();
        let mut depth = 0u8;
        while *self.peek() == Tok::Sym('*') {
            if depth == Type::MAX_DEPTH {
                return Err(self.error("pointer depth must be at most 2"));
            }
            self.bump();
            depth += 1;
        }
        Ok(Type::new(base, depth).expect("depth bounded above"))
    }

    fn pointer_ty(&mut self) -> Result<Type, ParseError> {
        let start = self.pos;
        let ty = self.ty()?;
        if !ty.is_pointer() {
            self.pos = start;
            return Err(self.error(format!(
                "memory operand type must be a pointer type, found `{ty}`"
            )));
        }
        Ok(ty)
    }

    fn field(&mut self) -> Result<Field, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "a" => {
                self.bump();
                Ok(Field::A)
            }
            Tok::Ident(s) if s == "b" => {
                self.bump();
                Ok(Field::B)
            }
            _ => Err(self.expected("field `a` or `b`")),
        }
    }

    fn end_of_instr(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Sym('}') => Ok(()),
            _ => Err(self.expected("end of instruction")),
        }
    }

    fn instr(&mut self) -> Result<InstrKind, ParseError> {
        let kind = match self.peek().clone() {
            Tok::Ident(kw) if kw == "store" => {
                self.bump();
                let value = self.name("register")?;
                self.sym(',')?;
                let ty = self.pointer_ty()?;
                let ptr = self.name("register")?;
                InstrKind::Store { value, ty, ptr }
            }
            Tok::Ident(kw) if kw == "return" => {
                self.bump();
                let values =
                    self.regs_until(|t| matches!(t, Tok::Newline | Tok::Sym('}') | Tok::Eof))?;
                InstrKind::Return { values }
            }
            Tok::Sym('(') => {
                self.bump();
                let dests = self.regs_until(|t| *t == Tok::Sym(')'))?;
                self.sym(')')?;
                self.sym('=')?;
                let callee = self.name("callee name")?;
                self.sym('(')?;
                let args = self.regs_until(|t| *t == Tok::Sym(')'))?;
                self.sym(')')?;
                InstrKind::Call {
                    dests,
                    callee,
                    args,
                }
            }
            Tok::Ident(_) => {
                let dest = self.name("register")?;
                self.sym('=')?;
                let op = match self.peek() {
                    Tok::Ident(s) => s.clone(),
                    _ => return Err(self.expected("alloc, cast, load or gep")),
                };
                match op.as_str() {
                    "alloc" => {
                        self.bump();
                        let size = self.int("allocation size")?;
                        if !(1..=2).contains(&size) {
                            self.pos -= 1;
                            return Err(self.error("alloc size must be 1 or 2"));
                        }
                        InstrKind::Alloc {
                            dest,
                            size: size as u8,
                        }
                    }
                    "cast" => {
                        self.bump();
                        let ty = self.ty()?;
                        self.sym(',')?;
                        let src = self.name("register")?;
                        InstrKind::Cast { dest, ty, src }
                    }
                    "load" => {
                        self.bump();
                        let ty = self.pointer_ty()?;
                        let src = self.name("register")?;
                        InstrKind::Load { dest, ty, src }
                    }
                    "gep" => {
                        self.bump();
                        let ty = self.pointer_ty()?;
                        let src = self.name("register")?;
                        self.sym(',')?;
                        let field = self.field()?;
                        InstrKind::Gep {
                            dest,
                            ty,
                            src,
                            field,
                        }
                    }
                    _ => return Err(self.expected("alloc, cast, load or gep")),
                }
            }
            _ => return Err(self.expected("instruction")),
        };
        self.end_of_instr()?;
        Ok(kind)
    }

    fn function(&mut self) -> Result<Function, ParseError> {
        self.keyword("fun")?;
        let name = self.name("function name")?;
        self.sym('(')?;
        let formals = self.regs_until(|t| *t == Tok::Sym(')'))?;
        self.sym(')')?;
        self.sym(':')?;
        let ret_arity = self.int("return arity")? as usize;
        self.sym('{')?;
        let mut body = Vec::new();
        loop {
            self.skip_newlines();
            if *self.peek() == Tok::Sym('}') {
                break;
            }
            if *self.peek() == Tok::Eof {
                return Err(self.expected("`}`"));
            }
            let kind = self.instr()?;
            body.push(Instruction {
                id: InstrId(self.next_id),
                kind,
            });
            self.next_id += 1;
        }
        if body.is_empty() {
            return Err(self.error(format!("function `{name}` has no instructions")));
        }
        self.sym('}')?;
        Ok(Function {
            name,
            formals,
            ret_arity,
            body,
        })
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut functions = Vec::new();
        loop {
            self.skip_newlines();
            if *self.peek() == Tok::Eof {
                break;
            }
            functions.push(self.function()?);
        }
        if functions.is_empty() {
            return Err(self.error("no functions"));
        }
        Ok(Program::new(functions))
    }
}

/// Parses program text. Instruction ids are assigned in source order.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        next_id: 0,
    };
    let prog = p.program()?;
    debug_assert!(matches!(p.peek_at(0), Tok::Eof));
    Ok(prog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_function() {
        let p = parse_program("fun f(): 1 { a = alloc 2\n return a }").unwrap();
        assert_eq!(p.functions().len(), 1);
        assert_eq!(p.functions()[0].body.len(), 2);
        assert_eq!(p.functions()[0].ret_arity, 1);
    }

    #[test]
    fn alloc_size_bound() {
        let err = parse_program("fun f(): 1 { a = alloc 3\n return a }").unwrap_err();
        assert!(err.message.contains("alloc size must be 1 or 2"), "{err}");
        assert_eq!((err.line, err.col), (1, 24));
    }

    #[test]
    fn empty_input_has_no_functions() {
        let err = parse_program("  # nothing\n").unwrap_err();
        assert_eq!(err.message, "no functions");
    }

    #[test]
    fn all_forms() {
        let text = "fun g(x, y): 2 {\n  r = cast int**, x\n  s = load char** r\n  store s, char** y\n  t = gep int* s, b\n  return t, r\n}\nfun f(): 0 {\n  p = alloc 1\n  (u, v) = g(p, p)\n  () = g2()\n  return\n}\nfun g2(): 0 {\n return }\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.functions().len(), 3);
        let f = p.by_name("f").unwrap();
        assert!(
            matches!(&f.body[1].kind, InstrKind::Call { dests, args, .. } if dests.len() == 2 && args.len() == 2)
        );
        assert!(
            matches!(&f.body[2].kind, InstrKind::Call { dests, args, .. } if dests.is_empty() && args.is_empty())
        );
        assert_eq!(f.body[0].id, InstrId(5));
    }

    #[test]
    fn non_pointer_memory_type_rejected() {
        let err = parse_program("fun f(): 0 {\n x = load int p\n return }").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("pointer type"), "{err}");
    }

    #[test]
    fn depth_three_rejected() {
        let err = parse_program("fun f(): 0 {\n x = cast int*** p\n return }").unwrap_err();
        assert!(err.message.contains("at most 2"), "{err}");
    }

    #[test]
    fn keyword_register_rejected() {
        let err = parse_program("fun f(): 0 {\n store = alloc 1\n return }").unwrap_err();
        assert!(err.message.contains("expected register"), "{err}");
    }

    #[test]
    fn missing_brace_reports_position() {
        let err = parse_program("fun f(): 0 {\n a = alloc 1\n").unwrap_err();
        assert!(err.message.contains("`}`"), "{err}");
    }
}

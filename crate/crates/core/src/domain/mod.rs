//! Abstract objects and the unification-based points-to graph.

mod graph;
mod union_find;

pub use graph::{AliasRelation, Facts, GraphMode, GroupView, Node, Owner, PointsToGraph};
pub use union_find::UnionFind;

use crate::ir::{Field, FuncId, InstrId, Program};
use crate::lattice::TypeTag;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("cannot unify {left} with {right}: incompatible type tags")]
    IncompatibleTags { left: String, right: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

/// Dereference path below a formal argument: one or two field selections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    A,
    B,
    AA,
    AB,
    BA,
    BB,
}

impl Path {
    pub const ALL: [Path; 6] = [Path::A, Path::B, Path::AA, Path::AB, Path::BA, Path::BB];

    pub fn name(self) -> &'static str {
        match self {
            Path::A => "a",
            Path::B => "b",
            Path::AA => "aa",
            Path::AB => "ab",
            Path::BA => "ba",
            Path::BB => "bb",
        }
    }

    pub fn last(self) -> Field {
        match self {
            Path::A | Path::AA | Path::BA => Field::A,
            Path::B | Path::AB | Path::BB => Field::B,
        }
    }

    pub fn is_second_level(self) -> bool {
        !matches!(self, Path::A | Path::B)
    }

    pub fn sibling(self) -> Path {
        match self {
            Path::A => Path::B,
            Path::B => Path::A,
            Path::AA => Path::AB,
            Path::AB => Path::AA,
            Path::BA => Path::BB,
            Path::BB => Path::BA,
        }
    }

    /// The second-level path reached by dereferencing a first-level one
    /// (field a of the pointee).
    pub fn deref(self) -> Option<Path> {
        match self {
            Path::A => Some(Path::AA),
            Path::B => Some(Path::BA),
            _ => None,
        }
    }
}

/// An allocation-site field cell or a formal-argument summary cell. Type
/// tags are not part of the identity: typed variants of an object are
/// distinct memory slots of its group (see [`PointsToGraph`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbstractObject {
    AllocCell { site: InstrId, field: Field },
    Formal { func: FuncId, arg: u32, path: Path },
}

impl AbstractObject {
    /// Least object in the derived order, for range scans.
    pub const MIN: AbstractObject = AbstractObject::AllocCell {
        site: InstrId(0),
        field: Field::A,
    };

    pub fn alloc(site: InstrId, field: Field) -> Self {
        AbstractObject::AllocCell { site, field }
    }

    pub fn formal(func: FuncId, arg: u32, path: Path) -> Self {
        AbstractObject::Formal { func, arg, path }
    }

    pub fn field(self) -> Field {
        match self {
            AbstractObject::AllocCell { field, .. } => field,
            AbstractObject::Formal { path, .. } => path.last(),
        }
    }

    pub fn sibling(self) -> Self {
        match self {
            AbstractObject::AllocCell { site, field } => AbstractObject::AllocCell {
                site,
                field: match field {
                    Field::A => Field::B,
                    Field::B => Field::A,
                },
            },
            AbstractObject::Formal { func, arg, path } => AbstractObject::Formal {
                func,
                arg,
                path: path.sibling(),
            },
        }
    }

    /// The field-b cell next to this one, for field-a objects only.
    pub fn field_b(self) -> Option<Self> {
        (self.field() == Field::A).then(|| self.sibling())
    }

    pub fn is_formal_of(self, f: FuncId) -> bool {
        matches!(self, AbstractObject::Formal { func, .. } if func == f)
    }

    pub fn alloc_site(self) -> Option<InstrId> {
        match self {
            AbstractObject::AllocCell { site, .. } => Some(site),
            AbstractObject::Formal { .. } => None,
        }
    }

    /// Stable output name, e.g. `H3.a` or `V.foo.0.ab`.
    pub fn name(self, p: &Program) -> String {
        self.named(|f| p.function(f).name.as_str()).to_string()
    }

    pub fn named<'a, F: Fn(FuncId) -> &'a str>(self, names: F) -> ObjectName<'a> {
        let func = match self {
            AbstractObject::Formal { func, .. } => names(func),
            AbstractObject::AllocCell { .. } => "",
        };
        ObjectName {
            obj: self,
            func,
            tag: None,
        }
    }
}

pub struct ObjectName<'a> {
    obj: AbstractObject,
    func: &'a str,
    tag: Option<TypeTag>,
}

impl ObjectName<'_> {
    /// Appends a type-tag suffix; `any` prints no suffix.
    pub fn with_tag(mut self, tag: TypeTag) -> Self {
        self.tag = (!tag.is_any()).then_some(tag);
        self
    }
}

impl fmt::Display for ObjectName<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.obj {
            AbstractObject::AllocCell { site, field } => write!(f, "H{site}.{field}")?,
            AbstractObject::Formal { arg, path, .. } => {
                write!(f, "V.{}.{arg}.{}", self.func, path.name())?
            }
        }
        if let Some(t) = self.tag {
            write!(f, ".{t}")?;
        }
        Ok(())
    }
}

/// The cell returned by an allocation. Graphs create its field-b sibling
/// alongside it.
pub fn objects_for_alloc(site: InstrId) -> AbstractObject {
    AbstractObject::alloc(site, Field::A)
}

/// Formal summary cells of one function and their initial facts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSeed {
    pub objects: Vec<AbstractObject>,
    /// `(argument index, object)`: the formal register points to the object.
    pub points_to: Vec<(usize, AbstractObject)>,
    /// Untagged cell edges.
    pub edges: Vec<(AbstractObject, AbstractObject)>,
}

pub fn formals_for(func: FuncId, arity: usize) -> FormalSeed {
    let mut seed = FormalSeed::default();
    for k in 0..arity {
        let v = |path| AbstractObject::formal(func, k as u32, path);
        seed.objects.extend(Path::ALL.iter().map(|&p| v(p)));
        seed.points_to.push((k, v(Path::A)));
        seed.edges.push((v(Path::A), v(Path::AA)));
        seed.edges.push((v(Path::B), v(Path::BA)));
        for p in [Path::AA, Path::BA, Path::AB, Path::BB] {
            seed.edges.push((v(p), v(p)));
        }
    }
    seed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_is_involution() {
        let objs = [
            AbstractObject::alloc(InstrId(3), Field::A),
            AbstractObject::alloc(InstrId(3), Field::B),
        ]
        .into_iter()
        .chain(
            Path::ALL
                .iter()
                .map(|&p| AbstractObject::formal(FuncId(0), 1, p)),
        );
        for o in objs {
            assert_eq!(o.sibling().sibling(), o);
            assert_ne!(o.sibling(), o);
            assert_ne!(o.sibling().field(), o.field());
        }
    }

    #[test]
    fn formal_seed_shape() {
        let s = formals_for(FuncId(2), 1);
        assert_eq!(s.objects.len(), 6);
        assert_eq!(s.points_to.len() + s.edges.len(), 7);
        assert_eq!(formals_for(FuncId(2), 0), FormalSeed::default());
        let two = formals_for(FuncId(2), 2);
        assert_eq!(two.objects.len(), 12);
        assert_eq!(two.points_to.len() + two.edges.len(), 14);
    }

    #[test]
    fn names() {
        let h = AbstractObject::alloc(InstrId(7), Field::B);
        assert_eq!(h.named(|_| "").to_string(), "H7.b");
        let v = AbstractObject::formal(FuncId(0), 1, Path::BA);
        assert_eq!(v.named(|_| "foo").to_string(), "V.foo.1.ba");
        let t = TypeTag::all().find(|t| t.to_string() == "int*").unwrap();
        assert_eq!(h.named(|_| "").with_tag(t).to_string(), "H7.b.int*");
        assert_eq!(h.named(|_| "").with_tag(TypeTag::Any).to_string(), "H7.b");
    }

    #[test]
    fn alloc_objects() {
        let o = objects_for_alloc(InstrId(7));
        assert_eq!(o, AbstractObject::alloc(InstrId(7), Field::A));
        assert_eq!(
            o.field_b(),
            Some(AbstractObject::alloc(InstrId(7), Field::B))
        );
        assert_eq!(o.sibling().field_b(), None);
    }
}

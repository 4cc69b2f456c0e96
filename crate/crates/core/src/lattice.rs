//! Type tags and the compatibility order used by the type-aware analysis.

use crate::ir::{BaseType, Type};
use std::fmt;

/// A concrete type, or the wildcard carried by freshly allocated cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTag {
    Any,
    Ty(Type),
}

impl TypeTag {
    /// The ten tags: `any` followed by the nine language types.
    pub fn all() -> impl Iterator<Item = TypeTag> {
        std::iter::once(TypeTag::Any).chain(Type::all().map(TypeTag::Ty))
    }

    pub fn is_any(self) -> bool {
        self == TypeTag::Any
    }
}

impl From<Type> for TypeTag {
    fn from(t: Type) -> Self {
        TypeTag::Ty(t)
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Any => f.write_str("any"),
            TypeTag::Ty(t) => t.fmt(f),
        }
    }
}

/// The compatibility order. `standard` is the strict-aliasing lattice;
/// `degenerate` treats every pair of tags as compatible, which makes the
/// typed analysis coincide with the untyped one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeLattice {
    degenerate: bool,
}

impl Default for TypeLattice {
    fn default() -> Self {
        Self::standard()
    }
}

impl TypeLattice {
    pub const fn standard() -> Self {
        TypeLattice { degenerate: false }
    }

    pub const fn degenerate() -> Self {
        TypeLattice { degenerate: true }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `t ⊑ u`: `any` is top, `char` is above every type and `char*` above
    /// every pointer type. In the degenerate lattice every tag is below `any`
    /// and otherwise the order is the same.
    pub fn leq(&self, t: TypeTag, u: TypeTag) -> bool {
        match (t, u) {
            (_, TypeTag::Any) => true,
            (TypeTag::Any, _) => false,
            (TypeTag::Ty(t), TypeTag::Ty(u)) => {
                let char_ = Type::new(BaseType::Char, 0).unwrap();
                let char_ptr = Type::new(BaseType::Char, 1).unwrap();
                t == u || u == char_ || (u == char_ptr && t.is_pointer())
            }
        }
    }

    /// Comparability under `leq`.
    pub fn compat(&self, t: TypeTag, u: TypeTag) -> bool {
        self.degenerate || self.leq(t, u) || self.leq(u, t)
    }
}

//! Finite types: the ground type `i`, booleans `b`, function spaces and
//! finite-set types.
//!
//! Structural equality (derived) is the only notion of type equality used
//! anywhere in the toolkit.

use std::fmt;

/// A finite type.
///
/// `Base` is the single ground type `i`.  `Bool` belongs to the verifying
/// system.  `FinSet` is the finite-set lift used by the Diller-Nahm
/// modality; a value of type `FinSet(s)` is a nonempty finite set of values
/// of type `s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiniteType {
    Base,
    Bool,
    Arrow(Box<FiniteType>, Box<FiniteType>),
    FinSet(Box<FiniteType>),
}

impl FiniteType {
    pub fn arrow(dom: FiniteType, cod: FiniteType) -> FiniteType {
        FiniteType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn fin_set(elem: FiniteType) -> FiniteType {
        FiniteType::FinSet(Box::new(elem))
    }

    /// Curried function type `args1 -> args2 -> ... -> cod`.
    pub fn arrows(args: &[FiniteType], cod: FiniteType) -> FiniteType {
        args.iter()
            .rev()
            .fold(cod, |acc, a| FiniteType::arrow(a.clone(), acc))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, FiniteType::Arrow(_, _))
    }

    /// True if the type mentions `Bool` anywhere.
    pub fn mentions_bool(&self) -> bool {
        match self {
            FiniteType::Base => false,
            FiniteType::Bool => true,
            FiniteType::Arrow(a, b) => a.mentions_bool() || b.mentions_bool(),
            FiniteType::FinSet(a) => a.mentions_bool(),
        }
    }

    /// True if the type mentions a finite-set type anywhere.
    pub fn mentions_fin_set(&self) -> bool {
        match self {
            FiniteType::Base | FiniteType::Bool => false,
            FiniteType::Arrow(a, b) => a.mentions_fin_set() || b.mentions_fin_set(),
            FiniteType::FinSet(_) => true,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::Base => write!(f, "i"),
            FiniteType::Bool => write!(f, "b"),
            FiniteType::Arrow(a, b) => write!(f, "(-> {} {})", a, b),
            FiniteType::FinSet(a) => write!(f, "(set {})", a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_folds_right() {
        let t = FiniteType::arrows(&[FiniteType::Base, FiniteType::Bool], FiniteType::Base);
        assert_eq!(
            t,
            FiniteType::arrow(
                FiniteType::Base,
                FiniteType::arrow(FiniteType::Bool, FiniteType::Base)
            )
        );
    }

    #[test]
    fn display_matches_surface_grammar() {
        let t = FiniteType::arrow(
            FiniteType::Base,
            FiniteType::arrow(FiniteType::Base, FiniteType::Bool),
        );
        assert_eq!(t.to_string(), "(-> i (-> i b))");
        assert_eq!(FiniteType::fin_set(FiniteType::Base).to_string(), "(set i)");
    }
}

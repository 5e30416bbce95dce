//! Formulas of the source and verifying languages, the system identifiers and
//! the per-system validator.
//!
//! A single node set carries the intuitionistic source language (`And`, `Or`,
//! `Implies`, `Bot`), the linear connectives, boolean equality and finite-set
//! membership.  Which nodes may appear in a formula is decided by the ambient
//! [`SystemId`], enforced by [`validate_formula`].

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Term, TypeError, TypedVar};
use crate::types::FiniteType;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// A predicate applied to argument terms; a 0-ary atom has no arguments.
    Atom(String, Vec<Term>),
    /// The linear constant `0`.
    Zero,
    Tensor(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
    Lolli(Box<Formula>, Box<Formula>),
    Bang(Box<Formula>),
    Forall(TypedVar, Box<Formula>),
    Exists(TypedVar, Box<Formula>),
    /// Boolean equality `t = q` (verifying system).
    BoolEq(Term, Term),
    /// Finite-set membership `t in s` (Diller-Nahm verifying system).
    Member(Term, Term),
    // Source-language nodes.
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Bot,
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn atom_app(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(name.into(), args)
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn with(a: Formula, b: Formula) -> Formula {
        Formula::With(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::Plus(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::Lolli(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }

    pub fn forall(v: TypedVar, a: Formula) -> Formula {
        Formula::Forall(v, Box::new(a))
    }

    pub fn exists(v: TypedVar, a: Formula) -> Formula {
        Formula::Exists(v, Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Linear biconditional `(a -o b) & (b -o a)`.
    pub fn lolli_both(a: Formula, b: Formula) -> Formula {
        Formula::with(Formula::lolli(a.clone(), b.clone()), Formula::lolli(b, a))
    }

    /// Nested universal closure over `vars`, outermost first.
    pub fn forall_many(vars: &[TypedVar], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    /// Nested existential closure over `vars`, outermost first.
    pub fn exists_many(vars: &[TypedVar], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    /// True if the formula contains no quantifier node.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(_, _) | Formula::Exists(_, _) => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    /// Immediate subformulas (not descending into terms).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_, _)
            | Formula::Zero
            | Formula::BoolEq(_, _)
            | Formula::Member(_, _)
            | Formula::Bot => Vec::new(),
            Formula::Tensor(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Lolli(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b) => vec![a, b],
            Formula::Bang(a) => vec![a],
            Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
        }
    }

    /// Terms stored directly at this node.
    pub fn node_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Atom(_, args) => args.iter().collect(),
            Formula::BoolEq(t, q) | Formula::Member(t, q) => vec![t, q],
            _ => Vec::new(),
        }
    }
}

/// The guarded conditional `<>_z(A, B)`, an abbreviation that expands on
/// construction and never survives into stored formulas:
/// `(!(z = T) -o A) & (!(z = F) -o B)`.
pub fn diamond(z: Term, a: Formula, b: Formula) -> Formula {
    Formula::with(
        Formula::lolli(Formula::bang(Formula::BoolEq(z.clone(), Term::truth())), a),
        Formula::lolli(Formula::bang(Formula::BoolEq(z, Term::falsity())), b),
    )
}

/// The systems a formula or derivation can live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemId {
    /// Intuitionistic source logic.
    Il,
    /// Intuitionistic linear logic (interpreted system).
    Ill,
    /// As `Ill` but with the additive-conjunction right rule restricted to
    /// all-banged contexts.
    IllR,
    /// The verifying system: booleans, boolean equality, conditionals and
    /// the equality/boolean axioms.
    IllB,
    /// Verifying system extended with finite-set types and membership.
    IllBDn,
    /// Verifying system extended with the decidability axiom and case-split
    /// rules.
    IllBDia,
}

impl SystemId {
    pub fn name(self) -> &'static str {
        match self {
            SystemId::Il => "il",
            SystemId::Ill => "ill",
            SystemId::IllR => "illr",
            SystemId::IllB => "illb",
            SystemId::IllBDn => "illb-dn",
            SystemId::IllBDia => "illb-dia",
        }
    }

    pub fn parse(s: &str) -> Option<SystemId> {
        match s {
            "il" => Some(SystemId::Il),
            "ill" => Some(SystemId::Ill),
            "illr" => Some(SystemId::IllR),
            "illb" => Some(SystemId::IllB),
            "illb-dn" => Some(SystemId::IllBDn),
            "illb-dia" => Some(SystemId::IllBDia),
            _ => None,
        }
    }

    pub fn is_linear(self) -> bool {
        self != SystemId::Il
    }

    pub fn is_verifying(self) -> bool {
        matches!(self, SystemId::IllB | SystemId::IllBDn | SystemId::IllBDia)
    }

    fn allows_bool_eq(self) -> bool {
        self == SystemId::Il || self.is_verifying()
    }

    fn allows_member(self) -> bool {
        matches!(self, SystemId::Il | SystemId::IllBDn)
    }

    fn allows_bool_type(self) -> bool {
        self == SystemId::Il || self.is_verifying()
    }

    fn allows_fin_set_type(self) -> bool {
        matches!(self, SystemId::Il | SystemId::IllBDn)
    }

    fn allows_dec_cases(self) -> bool {
        self == SystemId::IllBDia
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemViolation {
    #[error("node `{node}` is not part of system {system}")]
    Node { node: String, system: SystemId },
    #[error("type `{ty}` is not available in system {system}")]
    Type { ty: String, system: SystemId },
}

fn check_type_in_system(ty: &FiniteType, sys: SystemId) -> Result<(), SystemViolation> {
    if !sys.allows_bool_type() && ty.mentions_bool() {
        return Err(SystemViolation::Type {
            ty: ty.to_string(),
            system: sys,
        });
    }
    if !sys.allows_fin_set_type() && ty.mentions_fin_set() {
        return Err(SystemViolation::Type {
            ty: ty.to_string(),
            system: sys,
        });
    }
    Ok(())
}

fn check_term_in_system(t: &Term, sys: SystemId) -> Result<(), SystemViolation> {
    match t {
        Term::Var(v) => check_type_in_system(&v.ty, sys),
        Term::Const(_, ty) => check_type_in_system(ty, sys),
        Term::App(f, a) => {
            check_term_in_system(f, sys)?;
            check_term_in_system(a, sys)
        }
        Term::Lam(v, b) => {
            check_type_in_system(&v.ty, sys)?;
            check_term_in_system(b, sys)
        }
        Term::Cond(s, a, b) => {
            check_term_in_system(s, sys)?;
            check_term_in_system(a, sys)?;
            check_term_in_system(b, sys)
        }
        Term::Tuple(ts) => ts.iter().try_for_each(|t| check_term_in_system(t, sys)),
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            if !sys.allows_dec_cases() {
                return Err(SystemViolation::Node {
                    node: "dec-cases".into(),
                    system: sys,
                });
            }
            validate_formula(matrix, sys)?;
            check_term_in_system(if_false, sys)?;
            check_term_in_system(if_true, sys)
        }
    }
}

/// Checks that every node of `a` (descending into terms) is permitted by
/// `sys`.
pub fn validate_formula(a: &Formula, sys: SystemId) -> Result<(), SystemViolation> {
    let node_err = |node: &str| SystemViolation::Node {
        node: node.into(),
        system: sys,
    };
    match a {
        Formula::Atom(_, _) => {}
        Formula::Zero => {
            if !sys.is_linear() {
                return Err(node_err("zero"));
            }
        }
        Formula::Tensor(_, _)
        | Formula::With(_, _)
        | Formula::Plus(_, _)
        | Formula::Lolli(_, _)
        | Formula::Bang(_) => {
            if !sys.is_linear() {
                return Err(node_err("a linear connective"));
            }
        }
        Formula::Forall(v, _) | Formula::Exists(v, _) => {
            check_type_in_system(&v.ty, sys)?;
        }
        Formula::BoolEq(_, _) => {
            if !sys.allows_bool_eq() {
                return Err(node_err("boolean equality"));
            }
        }
        Formula::Member(_, _) => {
            if !sys.allows_member() {
                return Err(node_err("membership"));
            }
        }
        Formula::And(_, _) | Formula::Or(_, _) | Formula::Implies(_, _) | Formula::Bot => {
            if sys != SystemId::Il {
                return Err(node_err("an intuitionistic connective"));
            }
        }
    }
    for t in a.node_terms() {
        check_term_in_system(t, sys)?;
    }
    for c in a.children() {
        validate_formula(c, sys)?;
    }
    Ok(())
}

/// Checks every term inside `a` under `ctx` extended at binders; `BoolEq`
/// sides must both be boolean and `Member` must relate an element to a set
/// of the matching type.
pub fn typecheck_formula(a: &Formula, ctx: &BTreeMap<String, FiniteType>) -> Result<(), TypeError> {
    match a {
        Formula::Atom(_, args) => {
            for t in args {
                crate::term::typecheck_term(t, ctx)?;
            }
            Ok(())
        }
        Formula::BoolEq(t, q) => {
            let tt = crate::term::typecheck_term(t, ctx)?;
            let qt = crate::term::typecheck_term(q, ctx)?;
            if tt != FiniteType::Bool {
                return Err(TypeError::mismatch(
                    FiniteType::Bool,
                    tt,
                    "equality left side",
                ));
            }
            if qt != FiniteType::Bool {
                return Err(TypeError::mismatch(
                    FiniteType::Bool,
                    qt,
                    "equality right side",
                ));
            }
            Ok(())
        }
        Formula::Member(t, s) => {
            let tt = crate::term::typecheck_term(t, ctx)?;
            let st = crate::term::typecheck_term(s, ctx)?;
            if st != FiniteType::fin_set(tt.clone()) {
                return Err(TypeError::mismatch(
                    FiniteType::fin_set(tt),
                    st,
                    "membership right side",
                ));
            }
            Ok(())
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut inner = ctx.clone();
            inner.insert(v.name.clone(), v.ty.clone());
            typecheck_formula(body, &inner)
        }
        _ => a
            .children()
            .into_iter()
            .try_for_each(|c| typecheck_formula(c, ctx)),
    }
}

/// Typechecks `a` taking the context from the annotations on its free
/// variables.
pub fn typecheck_formula_under_annotations(a: &Formula) -> Result<(), TypeError> {
    let mut ctx = BTreeMap::new();
    for v in crate::subst::formula_free_vars(a) {
        if let Some(prev) = ctx.insert(v.name.clone(), v.ty.clone()) {
            if prev != v.ty {
                return Err(TypeError::mismatch(
                    prev,
                    v.ty,
                    format!("variable `{}`", v.name),
                ));
            }
        }
    }
    typecheck_formula(a, &ctx)
}

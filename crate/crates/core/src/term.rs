//! The term language: typed variables, a fixed set of constants, application,
//! primitive lambda abstraction, the boolean conditional, tuples and the
//! decidability case-split former.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::Formula;
use crate::types::FiniteType;

/// A variable together with its type annotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypedVar {
    pub name: String,
    pub ty: FiniteType,
}

impl TypedVar {
    pub fn new(name: impl Into<String>, ty: FiniteType) -> TypedVar {
        TypedVar {
            name: name.into(),
            ty,
        }
    }

    pub fn term(&self) -> Term {
        Term::Var(self.clone())
    }
}

/// Names of the built-in constants.
///
/// `e` inhabits the ground type; `T`/`F` are the booleans; `Pi`/`Sigma` are
/// the combinators, available at every type instance; `cond` is the constant
/// form of the conditional; `single`/`join`/`comp` build finite sets.
pub const CONST_ELEM: &str = "e";
pub const CONST_TRUE: &str = "T";
pub const CONST_FALSE: &str = "F";
pub const CONST_PI: &str = "Pi";
pub const CONST_SIGMA: &str = "Sigma";
pub const CONST_COND: &str = "cond";
pub const CONST_SINGLE: &str = "single";
pub const CONST_JOIN: &str = "join";
pub const CONST_COMP: &str = "comp";

/// A term of the witness language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(TypedVar),
    /// A constant with its full type instance, e.g. `Pi` at `s -> t -> s`.
    Const(String, FiniteType),
    App(Box<Term>, Box<Term>),
    /// Primitive abstraction; elaborable to combinators via bracket
    /// abstraction but kept as-is in stored terms.
    Lam(TypedVar, Box<Term>),
    /// The conditional `z(t, q)`: picks `t` when the scrutinee is true.
    Cond(Box<Term>, Box<Term>, Box<Term>),
    /// A flat sequence of terms standing for a witness tuple.  Not a
    /// first-class typed value; only singleton tuples typecheck.
    Tuple(Vec<Term>),
    /// Definition by cases over a decidable matrix: evaluates to `if_true`
    /// when the matrix holds and to `if_false` otherwise.  Inert under
    /// normalization.
    DecCases {
        matrix: Box<Formula>,
        if_false: Box<Term>,
        if_true: Box<Term>,
    },
}

impl Term {
    pub fn var(name: impl Into<String>, ty: FiniteType) -> Term {
        Term::Var(TypedVar::new(name, ty))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn lam(var: TypedVar, body: Term) -> Term {
        Term::Lam(var, Box::new(body))
    }

    /// Nested abstraction over a tuple of variables.
    pub fn lams(vars: &[TypedVar], body: Term) -> Term {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Term::lam(v.clone(), acc))
    }

    pub fn cond(scrutinee: Term, then_t: Term, else_t: Term) -> Term {
        Term::Cond(Box::new(scrutinee), Box::new(then_t), Box::new(else_t))
    }

    pub fn dec_cases(matrix: Formula, if_false: Term, if_true: Term) -> Term {
        Term::DecCases {
            matrix: Box::new(matrix),
            if_false: Box::new(if_false),
            if_true: Box::new(if_true),
        }
    }

    pub fn truth() -> Term {
        Term::Const(CONST_TRUE.into(), FiniteType::Bool)
    }

    pub fn falsity() -> Term {
        Term::Const(CONST_FALSE.into(), FiniteType::Bool)
    }

    pub fn elem() -> Term {
        Term::Const(CONST_ELEM.into(), FiniteType::Base)
    }

    /// `Pi` at instance `s -> t -> s`.
    pub fn pi(s: &FiniteType, t: &FiniteType) -> Term {
        Term::Const(
            CONST_PI.into(),
            FiniteType::arrows(&[s.clone(), t.clone()], s.clone()),
        )
    }

    /// `Sigma` at instance `(r -> s -> t) -> (r -> s) -> r -> t`.
    pub fn sigma(r: &FiniteType, s: &FiniteType, t: &FiniteType) -> Term {
        let fst = FiniteType::arrows(&[r.clone(), s.clone()], t.clone());
        let snd = FiniteType::arrow(r.clone(), s.clone());
        Term::Const(
            CONST_SIGMA.into(),
            FiniteType::arrows(&[fst, snd, r.clone()], t.clone()),
        )
    }

    /// `single` at element type `s`.
    pub fn single_const(s: &FiniteType) -> Term {
        Term::Const(
            CONST_SINGLE.into(),
            FiniteType::arrow(s.clone(), FiniteType::fin_set(s.clone())),
        )
    }

    /// `join` at element type `s`.
    pub fn join_const(s: &FiniteType) -> Term {
        let set = FiniteType::fin_set(s.clone());
        Term::Const(
            CONST_JOIN.into(),
            FiniteType::arrows(&[set.clone(), set.clone()], set),
        )
    }

    /// `comp` at `(s -> set r) -> set s -> set r`.
    pub fn comp_const(s: &FiniteType, r: &FiniteType) -> Term {
        let f = FiniteType::arrow(s.clone(), FiniteType::fin_set(r.clone()));
        Term::Const(
            CONST_COMP.into(),
            FiniteType::arrows(
                &[f, FiniteType::fin_set(s.clone())],
                FiniteType::fin_set(r.clone()),
            ),
        )
    }

    /// The canonical closed inhabitant of a type: `e` for the ground type,
    /// `T` for booleans, constant functions for arrows and singletons for
    /// finite sets.
    pub fn canonical(ty: &FiniteType) -> Term {
        match ty {
            FiniteType::Base => Term::elem(),
            FiniteType::Bool => Term::truth(),
            FiniteType::Arrow(a, b) => {
                Term::lam(TypedVar::new("_w", (**a).clone()), Term::canonical(b))
            }
            FiniteType::FinSet(a) => Term::app(Term::single_const(a), Term::canonical(a)),
        }
    }

    /// Flattens an application spine into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }
}

/// Typechecking and related errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    TypeMismatch {
        expected: String,
        found: String,
        location: String,
    },
}

impl TypeError {
    pub fn mismatch(
        expected: impl fmt::Display,
        found: impl fmt::Display,
        location: impl Into<String>,
    ) -> TypeError {
        TypeError::TypeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
            location: location.into(),
        }
    }
}

/// Checks that a constant's declared type instance has the right shape and
/// returns it.
fn check_const(name: &str, ty: &FiniteType) -> Result<FiniteType, TypeError> {
    let bad = |expected: &str| TypeError::mismatch(expected, ty, format!("constant `{name}`"));
    match name {
        CONST_ELEM => match ty {
            FiniteType::Base => Ok(ty.clone()),
            _ => Err(bad("i")),
        },
        CONST_TRUE | CONST_FALSE => match ty {
            FiniteType::Bool => Ok(ty.clone()),
            _ => Err(bad("b")),
        },
        CONST_PI => match ty {
            FiniteType::Arrow(s1, rest) => match &**rest {
                FiniteType::Arrow(_, s2) if s1 == s2 => Ok(ty.clone()),
                _ => Err(bad("(-> s (-> t s))")),
            },
            _ => Err(bad("(-> s (-> t s))")),
        },
        CONST_SIGMA => {
            // (r -> s -> t) -> (r -> s) -> r -> t
            if let FiniteType::Arrow(fst, rest) = ty {
                if let (FiniteType::Arrow(r1, st), FiniteType::Arrow(snd, rest2)) =
                    (&**fst, &**rest)
                {
                    if let (FiniteType::Arrow(s1, t1), FiniteType::Arrow(r2, s2)) = (&**st, &**snd)
                    {
                        if let FiniteType::Arrow(r3, t2) = &**rest2 {
                            if r1 == r2 && r2 == r3 && s1 == s2 && t1 == t2 {
                                return Ok(ty.clone());
                            }
                        }
                    }
                }
            }
            Err(bad("(-> (-> r (-> s t)) (-> (-> r s) (-> r t)))"))
        }
        CONST_COND => {
            // b -> r -> r -> r
            if let FiniteType::Arrow(b, rest) = ty {
                if **b == FiniteType::Bool {
                    if let FiniteType::Arrow(r1, rest2) = &**rest {
                        if let FiniteType::Arrow(r2, r3) = &**rest2 {
                            if r1 == r2 && r2 == r3 {
                                return Ok(ty.clone());
                            }
                        }
                    }
                }
            }
            Err(bad("(-> b (-> r (-> r r)))"))
        }
        CONST_SINGLE => {
            if let FiniteType::Arrow(s, set) = ty {
                if **set == FiniteType::fin_set((**s).clone()) {
                    return Ok(ty.clone());
                }
            }
            Err(bad("(-> s (set s))"))
        }
        CONST_JOIN => {
            if let FiniteType::Arrow(s1, rest) = ty {
                if let FiniteType::Arrow(s2, s3) = &**rest {
                    if s1 == s2 && s2 == s3 && matches!(&**s1, FiniteType::FinSet(_)) {
                        return Ok(ty.clone());
                    }
                }
            }
            Err(bad("(-> (set s) (-> (set s) (set s)))"))
        }
        CONST_COMP => {
            if let FiniteType::Arrow(f, rest) = ty {
                if let (FiniteType::Arrow(s1, rset1), FiniteType::Arrow(sset, rset2)) =
                    (&**f, &**rest)
                {
                    if **sset == FiniteType::fin_set((**s1).clone())
                        && rset1 == rset2
                        && matches!(&**rset1, FiniteType::FinSet(_))
                    {
                        return Ok(ty.clone());
                    }
                }
            }
            Err(bad("(-> (-> s (set r)) (-> (set s) (set r)))"))
        }
        other => Err(TypeError::mismatch(
            "a known constant",
            other,
            "constant name",
        )),
    }
}

/// Synthesizes the unique type of `t` under `ctx`, rejecting ill-typed
/// applications, conditionals with non-boolean scrutinees or unequal branch
/// types, and tuples in term position.
pub fn typecheck_term(
    t: &Term,
    ctx: &BTreeMap<String, FiniteType>,
) -> Result<FiniteType, TypeError> {
    match t {
        Term::Var(v) => match ctx.get(&v.name) {
            None => Err(TypeError::UnboundVariable(v.name.clone())),
            Some(ty) if *ty == v.ty => Ok(ty.clone()),
            Some(ty) => Err(TypeError::mismatch(
                ty,
                &v.ty,
                format!("variable `{}`", v.name),
            )),
        },
        Term::Const(name, ty) => check_const(name, ty),
        Term::App(f, a) => {
            let fty = typecheck_term(f, ctx)?;
            let aty = typecheck_term(a, ctx)?;
            match fty {
                FiniteType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                FiniteType::Arrow(dom, _) => {
                    Err(TypeError::mismatch(dom, aty, "application argument"))
                }
                other => Err(TypeError::mismatch(
                    "a function type",
                    other,
                    "application head",
                )),
            }
        }
        Term::Lam(v, body) => {
            let mut inner = ctx.clone();
            inner.insert(v.name.clone(), v.ty.clone());
            let bty = typecheck_term(body, &inner)?;
            Ok(FiniteType::arrow(v.ty.clone(), bty))
        }
        Term::Cond(s, a, b) => {
            let sty = typecheck_term(s, ctx)?;
            if sty != FiniteType::Bool {
                return Err(TypeError::mismatch(
                    FiniteType::Bool,
                    sty,
                    "conditional scrutinee",
                ));
            }
            let aty = typecheck_term(a, ctx)?;
            let bty = typecheck_term(b, ctx)?;
            if aty != bty {
                return Err(TypeError::mismatch(aty, bty, "conditional branches"));
            }
            Ok(aty)
        }
        Term::Tuple(ts) => {
            // Tuples stand for meta-level witness sequences; only the
            // singleton form is a typed value.
            if ts.len() == 1 {
                typecheck_term(&ts[0], ctx)
            } else {
                Err(TypeError::mismatch(
                    "a single term",
                    format!("a tuple of {} terms", ts.len()),
                    "tuple in term position",
                ))
            }
        }
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            crate::formula::typecheck_formula(matrix, ctx)?;
            let fty = typecheck_term(if_false, ctx)?;
            let tty = typecheck_term(if_true, ctx)?;
            if fty != tty {
                return Err(TypeError::mismatch(fty, tty, "case-split branches"));
            }
            Ok(fty)
        }
    }
}

/// Typechecks `t` taking the context from the type annotations on its own
/// free variables.  Detects internally inconsistent annotations.
pub fn typecheck_closed_under_annotations(t: &Term) -> Result<FiniteType, TypeError> {
    let mut ctx = BTreeMap::new();
    for v in crate::subst::term_free_vars(t) {
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
    typecheck_term(t, &ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FiniteType as Ty;

    fn base() -> Ty {
        Ty::Base
    }

    #[test]
    fn pi_applied_projects_first_type() {
        // Pi : s -> t -> s applied to x:s, y:t has type s.
        let s = base();
        let t = Ty::Bool;
        let term = Term::apps(
            Term::pi(&s, &t),
            [Term::var("x", s.clone()), Term::var("y", t.clone())],
        );
        let mut ctx = BTreeMap::new();
        ctx.insert("x".into(), s.clone());
        ctx.insert("y".into(), t);
        assert_eq!(typecheck_term(&term, &ctx), Ok(s));
    }

    #[test]
    fn variable_lookup() {
        let mut ctx = BTreeMap::new();
        ctx.insert("x".into(), base());
        assert_eq!(typecheck_term(&Term::var("x", base()), &ctx), Ok(base()));
        assert_eq!(
            typecheck_term(&Term::var("y", base()), &ctx),
            Err(TypeError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn cond_branch_mismatch_rejected() {
        let mut ctx = BTreeMap::new();
        ctx.insert("z".into(), Ty::Bool);
        ctx.insert("t".into(), base());
        ctx.insert("q".into(), Ty::Bool);
        let term = Term::cond(
            Term::var("z", Ty::Bool),
            Term::var("t", base()),
            Term::var("q", Ty::Bool),
        );
        assert!(matches!(
            typecheck_term(&term, &ctx),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn canonical_inhabitants_typecheck_closed() {
        let tys = [
            base(),
            Ty::Bool,
            Ty::arrow(base(), Ty::Bool),
            Ty::fin_set(base()),
            Ty::arrow(Ty::fin_set(base()), Ty::arrow(base(), base())),
        ];
        for ty in tys {
            let t = Term::canonical(&ty);
            assert_eq!(typecheck_term(&t, &BTreeMap::new()), Ok(ty));
        }
    }

    #[test]
    fn sigma_instance_shape_checked() {
        let good = Term::sigma(&base(), &base(), &base());
        assert!(typecheck_term(&good, &BTreeMap::new()).is_ok());
        let bad = Term::Const(CONST_SIGMA.into(), Ty::arrow(base(), base()));
        assert!(typecheck_term(&bad, &BTreeMap::new()).is_err());
    }
}

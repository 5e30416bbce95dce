//! Normalization of terms and bracket abstraction.
//!
//! Reductions: beta, `Pi x y -> x`, `Sigma x y z -> x z (y z)`, the constant
//! form of the conditional, and `Cond(T,..)`/`Cond(F,..)`.  Case-split terms
//! and the finite-set constants are inert; only the evaluator decides them.
//! Termination follows from simple typing.
//!
//! Term equality throughout the toolkit is normalize-then-alpha and stays
//! intensional: no extensionality rule is assumed (the single-challenge
//! interpretation would not survive one).

use crate::formula::Formula;
use crate::subst::{subst_term1, term_free_var_names};
use crate::term::{Term, TypedVar, CONST_COND, CONST_PI, CONST_SIGMA};
use crate::types::FiniteType;

/// Fully normalizes a well-typed term.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_, _) => t.clone(),
        Term::App(f, a) => apply(normalize(f), normalize(a)),
        Term::Lam(v, body) => Term::lam(v.clone(), normalize(body)),
        Term::Cond(s, a, b) => make_cond(normalize(s), normalize(a), normalize(b)),
        Term::Tuple(ts) => Term::Tuple(ts.iter().map(normalize).collect()),
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => Term::dec_cases(
            normalize_formula(matrix),
            normalize(if_false),
            normalize(if_true),
        ),
    }
}

/// Normalizes every term inside a formula.
pub fn normalize_formula(a: &Formula) -> Formula {
    match a {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(normalize).collect()),
        Formula::BoolEq(t, q) => Formula::BoolEq(normalize(t), normalize(q)),
        Formula::Member(t, q) => Formula::Member(normalize(t), normalize(q)),
        Formula::Zero => Formula::Zero,
        Formula::Bot => Formula::Bot,
        Formula::Tensor(x, y) => Formula::tensor(normalize_formula(x), normalize_formula(y)),
        Formula::With(x, y) => Formula::with(normalize_formula(x), normalize_formula(y)),
        Formula::Plus(x, y) => Formula::plus(normalize_formula(x), normalize_formula(y)),
        Formula::Lolli(x, y) => Formula::lolli(normalize_formula(x), normalize_formula(y)),
        Formula::And(x, y) => Formula::and(normalize_formula(x), normalize_formula(y)),
        Formula::Or(x, y) => Formula::or(normalize_formula(x), normalize_formula(y)),
        Formula::Implies(x, y) => Formula::implies(normalize_formula(x), normalize_formula(y)),
        Formula::Bang(x) => Formula::bang(normalize_formula(x)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), normalize_formula(body)),
        Formula::Exists(v, body) => Formula::exists(v.clone(), normalize_formula(body)),
    }
}

fn make_cond(s: Term, a: Term, b: Term) -> Term {
    match &s {
        Term::Const(n, _) if n == crate::term::CONST_TRUE => a,
        Term::Const(n, _) if n == crate::term::CONST_FALSE => b,
        _ => Term::cond(s, a, b),
    }
}

/// Applies a normal function to a normal argument, contracting any redex
/// this creates.
fn apply(f: Term, a: Term) -> Term {
    if let Term::Lam(v, body) = &f {
        return normalize(&subst_term1(body, v, &a));
    }
    let out = Term::app(f, a);
    reduce_spine(out)
}

/// Contracts combinator and conditional redexes at the head of a spine.
fn reduce_spine(t: Term) -> Term {
    let (head, args) = t.spine();
    let (name, arity) = match head {
        Term::Const(n, _) if n == CONST_PI => (CONST_PI, 2),
        Term::Const(n, _) if n == CONST_SIGMA => (CONST_SIGMA, 3),
        Term::Const(n, _) if n == CONST_COND => (CONST_COND, 3),
        _ => return t,
    };
    if args.len() < arity {
        return t;
    }
    let args: Vec<Term> = args.into_iter().cloned().collect();
    let contracted = match name {
        CONST_PI => args[0].clone(),
        CONST_SIGMA => {
            // Sigma x y z -> x z (y z)
            let x = args[0].clone();
            let y = args[1].clone();
            let z = args[2].clone();
            apply(apply(x, z.clone()), apply(y, z))
        }
        _ => match &args[0] {
            Term::Const(n, _) if n == crate::term::CONST_TRUE => args[1].clone(),
            Term::Const(n, _) if n == crate::term::CONST_FALSE => args[2].clone(),
            _ => return t,
        },
    };
    let rest = args[arity..].to_vec();
    rest.into_iter().fold(contracted, apply)
}

/// Normalize-then-alpha term equality, the toolkit's working equality on
/// terms.
pub fn terms_equal(a: &Term, b: &Term) -> bool {
    crate::subst::alpha_equal_terms(&normalize(a), &normalize(b))
}

/// Normalize-then-alpha formula equality.
pub fn formulas_equal(a: &Formula, b: &Formula) -> bool {
    crate::subst::alpha_equal_formulas(&normalize_formula(a), &normalize_formula(b))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("bracket abstraction requires a lambda-free term")]
    LambdaInBody,
    #[error("cannot abstract over a variable occurring in a {0} node")]
    UnsupportedNode(&'static str),
    #[error(transparent)]
    Type(#[from] crate::term::TypeError),
}

/// Combinatorial abstraction: returns a lambda-free `u` with
/// `u s  ==  t[x := s]` under normalization, for every closed well-typed `s`.
///
/// Conditionals are rewritten through the constant form of the conditional;
/// tuples and case splits containing `x` have no combinator image and are
/// rejected.
pub fn bracket_abstract(x: &TypedVar, t: &Term) -> Result<Term, BracketError> {
    let ty = crate::term::typecheck_closed_under_annotations(&Term::lam(x.clone(), t.clone()))?;
    let _ = ty;
    go(x, t)
}

fn go(x: &TypedVar, t: &Term) -> Result<Term, BracketError> {
    if !term_free_var_names(t).contains(&x.name) {
        // [x]t = Pi t  when x is not free in t.
        let tty = term_type(t)?;
        return Ok(Term::app(Term::pi(&tty, &x.ty), t.clone()));
    }
    match t {
        Term::Var(v) if v.name == x.name => {
            // [x]x = Sigma Pi Pi at the matching instance.
            let r = &x.ty;
            let s = FiniteType::arrow(r.clone(), r.clone());
            let pi1 = Term::pi(r, &s); // r -> (r->r) -> r
            let pi2 = Term::pi(r, r); // r -> r -> r
            Ok(Term::apps(Term::sigma(r, &s, r), [pi1, pi2]))
        }
        Term::App(f, a) => {
            let bf = go(x, f)?;
            let ba = go(x, a)?;
            // bf : x -> (s -> t), ba : x -> s
            let bf_ty = term_type(&bf)?;
            let (r, st) = split_arrow(&bf_ty);
            let (s, tt) = split_arrow(st);
            Ok(Term::apps(Term::sigma(r, s, tt), [bf, ba]))
        }
        Term::Cond(s, a, b) => {
            // Route through the constant conditional so the spine is
            // applicative.
            let branch_ty = term_type(a)?;
            let c = Term::Const(
                CONST_COND.into(),
                FiniteType::arrows(
                    &[FiniteType::Bool, branch_ty.clone(), branch_ty.clone()],
                    branch_ty,
                ),
            );
            go(
                x,
                &Term::apps(c, [(**s).clone(), (**a).clone(), (**b).clone()]),
            )
        }
        Term::Lam(_, _) => Err(BracketError::LambdaInBody),
        Term::Tuple(_) => Err(BracketError::UnsupportedNode("tuple")),
        Term::DecCases { .. } => Err(BracketError::UnsupportedNode("case-split")),
        // x free was checked above, so the remaining cases are unreachable.
        Term::Var(_) | Term::Const(_, _) => unreachable!(),
    }
}

fn term_type(t: &Term) -> Result<FiniteType, BracketError> {
    Ok(crate::term::typecheck_closed_under_annotations(t)?)
}

fn split_arrow(ty: &FiniteType) -> (&FiniteType, &FiniteType) {
    match ty {
        FiniteType::Arrow(a, b) => (a, b),
        _ => panic!("expected an arrow type, found {ty}"),
    }
}

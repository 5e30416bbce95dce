//! Free variables, simultaneous capture-avoiding substitution, alpha
//! comparison and the deterministic fresh-name supply.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::Formula;
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

/// A deterministic source of fresh variable names.
///
/// Names are `_<prefix><counter>`; the supply skips anything in its avoid
/// set so interpretation output never collides with user variables.  The
/// supply is always passed explicitly.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    counter: u64,
    avoid: BTreeSet<String>,
}

impl FreshSupply {
    pub fn new() -> FreshSupply {
        FreshSupply::default()
    }

    /// A supply that will never produce any of `names`.
    pub fn avoiding(names: impl IntoIterator<Item = String>) -> FreshSupply {
        FreshSupply {
            counter: 0,
            avoid: names.into_iter().collect(),
        }
    }

    pub fn also_avoid(&mut self, names: impl IntoIterator<Item = String>) {
        self.avoid.extend(names);
    }

    pub fn fresh(&mut self, prefix: &str, ty: FiniteType) -> TypedVar {
        loop {
            let name = format!("_{}{}", prefix, self.counter);
            self.counter += 1;
            if !self.avoid.contains(&name) {
                return TypedVar { name, ty };
            }
        }
    }

    pub fn fresh_many(&mut self, prefix: &str, tys: &[FiniteType]) -> Vec<TypedVar> {
        tys.iter().map(|t| self.fresh(prefix, t.clone())).collect()
    }
}

pub fn term_free_vars(t: &Term) -> BTreeSet<TypedVar> {
    let mut out = BTreeSet::new();
    collect_term_fv(t, &mut BTreeSet::new(), &mut out);
    out
}

pub fn formula_free_vars(a: &Formula) -> BTreeSet<TypedVar> {
    let mut out = BTreeSet::new();
    collect_formula_fv(a, &mut BTreeSet::new(), &mut out);
    out
}

pub fn term_free_var_names(t: &Term) -> BTreeSet<String> {
    term_free_vars(t).into_iter().map(|v| v.name).collect()
}

pub fn formula_free_var_names(a: &Formula) -> BTreeSet<String> {
    formula_free_vars(a).into_iter().map(|v| v.name).collect()
}

fn collect_term_fv(t: &Term, bound: &mut BTreeSet<String>, out: &mut BTreeSet<TypedVar>) {
    match t {
        Term::Var(v) => {
            if !bound.contains(&v.name) {
                out.insert(v.clone());
            }
        }
        Term::Const(_, _) => {}
        Term::App(f, a) => {
            collect_term_fv(f, bound, out);
            collect_term_fv(a, bound, out);
        }
        Term::Lam(v, body) => {
            let added = bound.insert(v.name.clone());
            collect_term_fv(body, bound, out);
            if added {
                bound.remove(&v.name);
            }
        }
        Term::Cond(s, a, b) => {
            collect_term_fv(s, bound, out);
            collect_term_fv(a, bound, out);
            collect_term_fv(b, bound, out);
        }
        Term::Tuple(ts) => ts.iter().for_each(|t| collect_term_fv(t, bound, out)),
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            collect_formula_fv(matrix, bound, out);
            collect_term_fv(if_false, bound, out);
            collect_term_fv(if_true, bound, out);
        }
    }
}

fn collect_formula_fv(a: &Formula, bound: &mut BTreeSet<String>, out: &mut BTreeSet<TypedVar>) {
    match a {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let added = bound.insert(v.name.clone());
            collect_formula_fv(body, bound, out);
            if added {
                bound.remove(&v.name);
            }
        }
        _ => {
            for t in a.node_terms() {
                collect_term_fv(t, bound, out);
            }
            for c in a.children() {
                collect_formula_fv(c, bound, out);
            }
        }
    }
}

/// A simultaneous substitution of terms for variable names.
pub type Subst = BTreeMap<String, Term>;

/// Builds a substitution from parallel variable/term slices.
pub fn subst_from(vars: &[TypedVar], terms: &[Term]) -> Subst {
    assert_eq!(vars.len(), terms.len(), "substitution tuple arity mismatch");
    vars.iter()
        .zip(terms.iter())
        .map(|(v, t)| (v.name.clone(), t.clone()))
        .collect()
}

/// A renaming of variables to variables, as a substitution.
pub fn renaming(from: &[TypedVar], to: &[TypedVar]) -> Subst {
    assert_eq!(from.len(), to.len(), "renaming arity mismatch");
    from.iter()
        .zip(to.iter())
        .map(|(a, b)| (a.name.clone(), b.term()))
        .collect()
}

fn subst_range_fv(s: &Subst) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in s.values() {
        out.extend(term_free_var_names(t));
    }
    out
}

/// Picks a primed variant of `v` avoiding `taken`.
fn rename_away(v: &TypedVar, taken: &BTreeSet<String>) -> TypedVar {
    let mut name = format!("{}'", v.name);
    while taken.contains(&name) {
        name.push('\'');
    }
    TypedVar {
        name,
        ty: v.ty.clone(),
    }
}

fn under_binder<T>(
    v: &TypedVar,
    body_fv: BTreeSet<String>,
    subst: &Subst,
    rebuild: impl FnOnce(TypedVar, Subst) -> T,
) -> T {
    let mut inner: Subst = subst.clone();
    inner.remove(&v.name);
    if inner.is_empty() {
        return rebuild(v.clone(), inner);
    }
    let range = subst_range_fv(&inner);
    if range.contains(&v.name) {
        // Capture: rename the binder away from the substitution range and
        // from anything free in the body.
        let mut taken = range;
        taken.extend(body_fv);
        let fresh = rename_away(v, &taken);
        inner.insert(v.name.clone(), fresh.term());
        rebuild(fresh, inner)
    } else {
        rebuild(v.clone(), inner)
    }
}

/// Simultaneous capture-avoiding substitution in a term.
pub fn subst_term(t: &Term, s: &Subst) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(v) => s.get(&v.name).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_, _) => t.clone(),
        Term::App(f, a) => Term::app(subst_term(f, s), subst_term(a, s)),
        Term::Lam(v, body) => under_binder(v, term_free_var_names(body), s, |v2, inner| {
            Term::lam(v2, subst_term(body, &inner))
        }),
        Term::Cond(c, a, b) => Term::cond(subst_term(c, s), subst_term(a, s), subst_term(b, s)),
        Term::Tuple(ts) => Term::Tuple(ts.iter().map(|t| subst_term(t, s)).collect()),
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => Term::dec_cases(
            subst_formula(matrix, s),
            subst_term(if_false, s),
            subst_term(if_true, s),
        ),
    }
}

/// Simultaneous capture-avoiding substitution in a formula.
pub fn subst_formula(a: &Formula, s: &Subst) -> Formula {
    if s.is_empty() {
        return a.clone();
    }
    match a {
        Formula::Atom(p, args) => {
            Formula::Atom(p.clone(), args.iter().map(|t| subst_term(t, s)).collect())
        }
        Formula::Zero => Formula::Zero,
        Formula::Bot => Formula::Bot,
        Formula::BoolEq(t, q) => Formula::BoolEq(subst_term(t, s), subst_term(q, s)),
        Formula::Member(t, q) => Formula::Member(subst_term(t, s), subst_term(q, s)),
        Formula::Tensor(x, y) => Formula::tensor(subst_formula(x, s), subst_formula(y, s)),
        Formula::With(x, y) => Formula::with(subst_formula(x, s), subst_formula(y, s)),
        Formula::Plus(x, y) => Formula::plus(subst_formula(x, s), subst_formula(y, s)),
        Formula::Lolli(x, y) => Formula::lolli(subst_formula(x, s), subst_formula(y, s)),
        Formula::And(x, y) => Formula::and(subst_formula(x, s), subst_formula(y, s)),
        Formula::Or(x, y) => Formula::or(subst_formula(x, s), subst_formula(y, s)),
        Formula::Implies(x, y) => Formula::implies(subst_formula(x, s), subst_formula(y, s)),
        Formula::Bang(x) => Formula::bang(subst_formula(x, s)),
        Formula::Forall(v, body) => {
            under_binder(v, formula_free_var_names(body), s, |v2, inner| {
                Formula::forall(v2, subst_formula(body, &inner))
            })
        }
        Formula::Exists(v, body) => {
            under_binder(v, formula_free_var_names(body), s, |v2, inner| {
                Formula::exists(v2, subst_formula(body, &inner))
            })
        }
    }
}

/// Substitutes a single variable in a term.
pub fn subst_term1(t: &Term, var: &TypedVar, replacement: &Term) -> Term {
    let mut s = Subst::new();
    s.insert(var.name.clone(), replacement.clone());
    subst_term(t, &s)
}

/// Substitutes a single variable in a formula.
pub fn subst_formula1(a: &Formula, var: &TypedVar, replacement: &Term) -> Formula {
    let mut s = Subst::new();
    s.insert(var.name.clone(), replacement.clone());
    subst_formula(a, &s)
}

// ---------------------------------------------------------------------------
// Alpha comparison (locally nameless: binders are compared by de Bruijn
// level, free variables by name and type).

type Levels<'a> = (BTreeMap<&'a str, usize>, BTreeMap<&'a str, usize>);

fn var_key<'a>(name: &'a str, side: &BTreeMap<&'a str, usize>) -> Result<usize, &'a str> {
    match side.get(name) {
        Some(l) => Ok(*l),
        None => Err(name),
    }
}

fn alpha_term_at<'a>(a: &'a Term, b: &'a Term, depth: usize, lv: &mut Levels<'a>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            x.ty == y.ty && var_key(&x.name, &lv.0) == var_key(&y.name, &lv.1)
        }
        (Term::Const(n1, t1), Term::Const(n2, t2)) => n1 == n2 && t1 == t2,
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            alpha_term_at(f1, f2, depth, lv) && alpha_term_at(a1, a2, depth, lv)
        }
        (Term::Lam(v1, b1), Term::Lam(v2, b2)) => {
            if v1.ty != v2.ty {
                return false;
            }
            let old1 = lv.0.insert(&v1.name, depth);
            let old2 = lv.1.insert(&v2.name, depth);
            let r = alpha_term_at(b1, b2, depth + 1, lv);
            restore(&mut lv.0, &v1.name, old1);
            restore(&mut lv.1, &v2.name, old2);
            r
        }
        (Term::Cond(s1, t1, q1), Term::Cond(s2, t2, q2)) => {
            alpha_term_at(s1, s2, depth, lv)
                && alpha_term_at(t1, t2, depth, lv)
                && alpha_term_at(q1, q2, depth, lv)
        }
        (Term::Tuple(x), Term::Tuple(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(a, b)| alpha_term_at(a, b, depth, lv))
        }
        (
            Term::DecCases {
                matrix: m1,
                if_false: f1,
                if_true: t1,
            },
            Term::DecCases {
                matrix: m2,
                if_false: f2,
                if_true: t2,
            },
        ) => {
            alpha_formula_at(m1, m2, depth, lv)
                && alpha_term_at(f1, f2, depth, lv)
                && alpha_term_at(t1, t2, depth, lv)
        }
        _ => false,
    }
}

fn restore<'a>(side: &mut BTreeMap<&'a str, usize>, name: &'a str, old: Option<usize>) {
    match old {
        Some(l) => {
            side.insert(name, l);
        }
        None => {
            side.remove(name);
        }
    }
}

fn alpha_formula_at<'a>(a: &'a Formula, b: &'a Formula, depth: usize, lv: &mut Levels<'a>) -> bool {
    use Formula::*;
    match (a, b) {
        (Atom(p1, a1), Atom(p2, a2)) => {
            p1 == p2
                && a1.len() == a2.len()
                && a1
                    .iter()
                    .zip(a2)
                    .all(|(x, y)| alpha_term_at(x, y, depth, lv))
        }
        (Zero, Zero) | (Bot, Bot) => true,
        (BoolEq(t1, q1), BoolEq(t2, q2)) | (Member(t1, q1), Member(t2, q2)) => {
            alpha_term_at(t1, t2, depth, lv) && alpha_term_at(q1, q2, depth, lv)
        }
        (Tensor(x1, y1), Tensor(x2, y2))
        | (With(x1, y1), With(x2, y2))
        | (Plus(x1, y1), Plus(x2, y2))
        | (Lolli(x1, y1), Lolli(x2, y2))
        | (And(x1, y1), And(x2, y2))
        | (Or(x1, y1), Or(x2, y2))
        | (Implies(x1, y1), Implies(x2, y2)) => {
            alpha_formula_at(x1, x2, depth, lv) && alpha_formula_at(y1, y2, depth, lv)
        }
        (Bang(x), Bang(y)) => alpha_formula_at(x, y, depth, lv),
        (Forall(v1, b1), Forall(v2, b2)) | (Exists(v1, b1), Exists(v2, b2)) => {
            if v1.ty != v2.ty {
                return false;
            }
            let old1 = lv.0.insert(&v1.name, depth);
            let old2 = lv.1.insert(&v2.name, depth);
            let r = alpha_formula_at(b1, b2, depth + 1, lv);
            restore(&mut lv.0, &v1.name, old1);
            restore(&mut lv.1, &v2.name, old2);
            r
        }
        _ => false,
    }
}

/// True iff the terms are identical up to renaming of bound variables.
pub fn alpha_equal_terms(a: &Term, b: &Term) -> bool {
    alpha_term_at(a, b, 0, &mut (BTreeMap::new(), BTreeMap::new()))
}

/// True iff the formulas are identical up to renaming of bound variables.
pub fn alpha_equal_formulas(a: &Formula, b: &Formula) -> bool {
    alpha_formula_at(a, b, 0, &mut (BTreeMap::new(), BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FiniteType as Ty;

    fn p(t: Term) -> Formula {
        Formula::atom_app("P", vec![t])
    }

    fn x() -> TypedVar {
        TypedVar::new("x", Ty::Base)
    }

    fn y() -> TypedVar {
        TypedVar::new("y", Ty::Base)
    }

    #[test]
    fn plain_substitution() {
        let f = p(Term::var("x", Ty::Base));
        let out = subst_formula1(&f, &x(), &Term::elem());
        assert_eq!(out, p(Term::elem()));
    }

    #[test]
    fn capture_forces_renaming() {
        // (forall x P(x, y))[y := x]  ==>  forall x' P(x', x)
        let f = Formula::forall(
            x(),
            Formula::atom_app(
                "P",
                vec![Term::var("x", Ty::Base), Term::var("y", Ty::Base)],
            ),
        );
        let out = subst_formula1(&f, &y(), &x().term());
        let expected = Formula::forall(
            TypedVar::new("x'", Ty::Base),
            Formula::atom_app(
                "P",
                vec![Term::var("x'", Ty::Base), Term::var("x", Ty::Base)],
            ),
        );
        assert_eq!(out, expected);
        assert!(alpha_equal_formulas(&out, &expected));
    }

    #[test]
    fn alpha_examples() {
        let fa = Formula::forall(x(), p(Term::var("x", Ty::Base)));
        let fb = Formula::forall(y(), p(Term::var("y", Ty::Base)));
        assert!(alpha_equal_formulas(&fa, &fb));

        let fq = Formula::forall(x(), Formula::atom_app("Q", vec![Term::var("x", Ty::Base)]));
        assert!(!alpha_equal_formulas(&fa, &fq));

        let la = Term::lam(x(), Term::var("x", Ty::Base));
        let lb = Term::lam(y(), Term::var("y", Ty::Base));
        assert!(alpha_equal_terms(&la, &lb));
    }

    #[test]
    fn fresh_supply_skips_avoided_names() {
        let mut s = FreshSupply::avoiding(["_x0".to_string()]);
        let v = s.fresh("x", Ty::Base);
        assert_eq!(v.name, "_x1");
    }

    #[test]
    fn simultaneous_substitution_does_not_chain() {
        // P(x, y)[x := y, y := e]  ==>  P(y, e), not P(e, e).
        let f = Formula::atom_app(
            "P",
            vec![Term::var("x", Ty::Base), Term::var("y", Ty::Base)],
        );
        let mut s = Subst::new();
        s.insert("x".into(), y().term());
        s.insert("y".into(), Term::elem());
        assert_eq!(
            subst_formula(&f, &s),
            Formula::atom_app("P", vec![y().term(), Term::elem()])
        );
    }
}

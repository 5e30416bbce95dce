//! Textual surface syntax: s-expression readers and printers for types,
//! terms, formulas, sequents, derivations and the structured documents the
//! command-line front end emits.
//!
//! Printing then parsing is the identity on every value.  Bound variables
//! print bare; free variables print bare when they have the ground type and
//! annotated as `(: name type)` otherwise, so types survive the round trip.

use std::collections::BTreeMap;

use crate::calculus::{AxiomInstance, DecCasesPayload, Derivation, Rule, Sequent};
use crate::formula::{diamond, Formula};
use crate::sexpr::{read_one, ParseError, Sexpr};
use crate::term::{Term, TypedVar, CONST_FALSE, CONST_TRUE};
use crate::types::FiniteType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Lex(#[from] ParseError),
    #[error("malformed {what}: `{found}`")]
    Malformed { what: &'static str, found: String },
}

fn malformed<T>(what: &'static str, s: &Sexpr) -> Result<T, ReadError> {
    Err(ReadError::Malformed {
        what,
        found: s.to_string(),
    })
}

type Scope = BTreeMap<String, FiniteType>;

// ---------------------------------------------------------------------------
// Types

pub fn type_to_sexpr(ty: &FiniteType) -> Sexpr {
    match ty {
        FiniteType::Base => Sexpr::sym("i"),
        FiniteType::Bool => Sexpr::sym("b"),
        FiniteType::Arrow(a, b) => {
            Sexpr::list([Sexpr::sym("->"), type_to_sexpr(a), type_to_sexpr(b)])
        }
        FiniteType::FinSet(a) => Sexpr::list([Sexpr::sym("set"), type_to_sexpr(a)]),
    }
}

pub fn type_from_sexpr(s: &Sexpr) -> Result<FiniteType, ReadError> {
    match s {
        Sexpr::Sym(name) => match name.as_str() {
            "i" => Ok(FiniteType::Base),
            "b" => Ok(FiniteType::Bool),
            _ => malformed("type", s),
        },
        Sexpr::List(items) => match items.split_first() {
            Some((Sexpr::Sym(head), rest)) if head == "->" && rest.len() >= 2 => {
                let mut tys: Vec<FiniteType> =
                    rest.iter().map(type_from_sexpr).collect::<Result<_, _>>()?;
                let last = tys.pop().expect("nonempty");
                Ok(FiniteType::arrows(&tys, last))
            }
            Some((Sexpr::Sym(head), [elem])) if head == "set" => {
                Ok(FiniteType::fin_set(type_from_sexpr(elem)?))
            }
            _ => malformed("type", s),
        },
    }
}

pub fn parse_type(src: &str) -> Result<FiniteType, ReadError> {
    type_from_sexpr(&read_one(src)?)
}

// ---------------------------------------------------------------------------
// Terms

fn binder_to_sexpr(v: &TypedVar) -> Sexpr {
    Sexpr::list([Sexpr::sym(v.name.clone()), type_to_sexpr(&v.ty)])
}

fn binder_from_sexpr(s: &Sexpr) -> Result<TypedVar, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(name), ty]) => Ok(TypedVar::new(name.clone(), type_from_sexpr(ty)?)),
        _ => malformed("binder", s),
    }
}

fn var_to_sexpr(v: &TypedVar, bound: &Scope) -> Sexpr {
    let plain = match bound.get(&v.name) {
        Some(ty) => *ty == v.ty,
        None => v.ty == FiniteType::Base && v.name != CONST_TRUE && v.name != CONST_FALSE,
    };
    if plain {
        Sexpr::sym(v.name.clone())
    } else {
        Sexpr::list([
            Sexpr::sym(":"),
            Sexpr::sym(v.name.clone()),
            type_to_sexpr(&v.ty),
        ])
    }
}

fn term_to_sexpr_at(t: &Term, bound: &mut Scope) -> Sexpr {
    match t {
        Term::Var(v) => var_to_sexpr(v, bound),
        Term::Const(name, ty) => {
            if name == CONST_TRUE && *ty == FiniteType::Bool {
                Sexpr::sym(CONST_TRUE)
            } else if name == CONST_FALSE && *ty == FiniteType::Bool {
                Sexpr::sym(CONST_FALSE)
            } else {
                Sexpr::list([
                    Sexpr::sym("const"),
                    Sexpr::sym(name.clone()),
                    type_to_sexpr(ty),
                ])
            }
        }
        Term::App(_, _) => {
            let (head, args) = t.spine();
            let mut items = vec![Sexpr::sym("app"), term_to_sexpr_at(head, bound)];
            items.extend(args.iter().map(|a| term_to_sexpr_at(a, bound)));
            Sexpr::List(items)
        }
        Term::Lam(v, body) => {
            let shadowed = bound.insert(v.name.clone(), v.ty.clone());
            let b = term_to_sexpr_at(body, bound);
            restore(bound, &v.name, shadowed);
            Sexpr::list([Sexpr::sym("lam"), binder_to_sexpr(v), b])
        }
        Term::Cond(s, a, b) => Sexpr::list([
            Sexpr::sym("cond"),
            term_to_sexpr_at(s, bound),
            term_to_sexpr_at(a, bound),
            term_to_sexpr_at(b, bound),
        ]),
        Term::Tuple(ts) => {
            let mut items = vec![Sexpr::sym("tuple")];
            items.extend(ts.iter().map(|t| term_to_sexpr_at(t, bound)));
            Sexpr::List(items)
        }
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => Sexpr::list([
            Sexpr::sym("dec-cases"),
            formula_to_sexpr_at(matrix, bound),
            term_to_sexpr_at(if_false, bound),
            term_to_sexpr_at(if_true, bound),
        ]),
    }
}

fn restore(scope: &mut Scope, name: &str, old: Option<FiniteType>) {
    match old {
        Some(ty) => {
            scope.insert(name.to_string(), ty);
        }
        None => {
            scope.remove(name);
        }
    }
}

pub fn term_to_sexpr(t: &Term) -> Sexpr {
    term_to_sexpr_at(t, &mut Scope::new())
}

fn term_from_sexpr_at(s: &Sexpr, scope: &mut Scope) -> Result<Term, ReadError> {
    match s {
        Sexpr::Sym(name) => match name.as_str() {
            CONST_TRUE => Ok(Term::truth()),
            CONST_FALSE => Ok(Term::falsity()),
            _ => {
                let ty = scope.get(name).cloned().unwrap_or(FiniteType::Base);
                Ok(Term::var(name.clone(), ty))
            }
        },
        Sexpr::List(items) => {
            let head = match items.first() {
                Some(Sexpr::Sym(h)) => h.as_str(),
                _ => return malformed("term", s),
            };
            let rest = &items[1..];
            match (head, rest) {
                (":", [Sexpr::Sym(name), ty]) => Ok(Term::var(name.clone(), type_from_sexpr(ty)?)),
                ("const", [Sexpr::Sym(name), ty]) => {
                    Ok(Term::Const(name.clone(), type_from_sexpr(ty)?))
                }
                ("app", [f, args @ ..]) if !args.is_empty() => {
                    let mut out = term_from_sexpr_at(f, scope)?;
                    for a in args {
                        out = Term::app(out, term_from_sexpr_at(a, scope)?);
                    }
                    Ok(out)
                }
                ("lam", [binder, body]) => {
                    let v = binder_from_sexpr(binder)?;
                    let shadowed = scope.insert(v.name.clone(), v.ty.clone());
                    let b = term_from_sexpr_at(body, scope);
                    restore(scope, &v.name, shadowed);
                    Ok(Term::lam(v, b?))
                }
                ("cond", [c, a, b]) => Ok(Term::cond(
                    term_from_sexpr_at(c, scope)?,
                    term_from_sexpr_at(a, scope)?,
                    term_from_sexpr_at(b, scope)?,
                )),
                ("tuple", ts) => Ok(Term::Tuple(
                    ts.iter()
                        .map(|t| term_from_sexpr_at(t, scope))
                        .collect::<Result<_, _>>()?,
                )),
                ("dec-cases", [m, f, t]) => Ok(Term::dec_cases(
                    formula_from_sexpr_at(m, scope)?,
                    term_from_sexpr_at(f, scope)?,
                    term_from_sexpr_at(t, scope)?,
                )),
                _ => malformed("term", s),
            }
        }
    }
}

pub fn term_from_sexpr(s: &Sexpr) -> Result<Term, ReadError> {
    term_from_sexpr_at(s, &mut Scope::new())
}

pub fn parse_term(src: &str) -> Result<Term, ReadError> {
    term_from_sexpr(&read_one(src)?)
}

// ---------------------------------------------------------------------------
// Formulas

fn formula_to_sexpr_at(a: &Formula, bound: &mut Scope) -> Sexpr {
    let bin = |name: &str, x: &Formula, y: &Formula, bound: &mut Scope| {
        Sexpr::list([
            Sexpr::sym(name),
            formula_to_sexpr_at(x, bound),
            formula_to_sexpr_at(y, bound),
        ])
    };
    match a {
        Formula::Atom(p, args) => {
            let mut items = vec![Sexpr::sym("atom"), Sexpr::sym(p.clone())];
            items.extend(args.iter().map(|t| term_to_sexpr_at(t, bound)));
            Sexpr::List(items)
        }
        Formula::Zero => Sexpr::sym("zero"),
        Formula::Bot => Sexpr::sym("bot"),
        Formula::Tensor(x, y) => bin("tensor", x, y, bound),
        Formula::With(x, y) => bin("with", x, y, bound),
        Formula::Plus(x, y) => bin("plus", x, y, bound),
        Formula::Lolli(x, y) => bin("lolli", x, y, bound),
        Formula::And(x, y) => bin("and", x, y, bound),
        Formula::Or(x, y) => bin("or", x, y, bound),
        Formula::Implies(x, y) => bin("implies", x, y, bound),
        Formula::Bang(x) => Sexpr::list([Sexpr::sym("bang"), formula_to_sexpr_at(x, bound)]),
        Formula::Forall(v, x) | Formula::Exists(v, x) => {
            let name = if matches!(a, Formula::Forall(_, _)) {
                "forall"
            } else {
                "exists"
            };
            let shadowed = bound.insert(v.name.clone(), v.ty.clone());
            let body = formula_to_sexpr_at(x, bound);
            restore(bound, &v.name, shadowed);
            Sexpr::list([Sexpr::sym(name), binder_to_sexpr(v), body])
        }
        Formula::BoolEq(t, q) => Sexpr::list([
            Sexpr::sym("="),
            term_to_sexpr_at(t, bound),
            term_to_sexpr_at(q, bound),
        ]),
        Formula::Member(t, q) => Sexpr::list([
            Sexpr::sym("in"),
            term_to_sexpr_at(t, bound),
            term_to_sexpr_at(q, bound),
        ]),
    }
}

pub fn formula_to_sexpr(a: &Formula) -> Sexpr {
    formula_to_sexpr_at(a, &mut Scope::new())
}

fn formula_from_sexpr_at(s: &Sexpr, scope: &mut Scope) -> Result<Formula, ReadError> {
    match s {
        Sexpr::Sym(name) => match name.as_str() {
            "zero" => Ok(Formula::Zero),
            "bot" => Ok(Formula::Bot),
            _ => malformed("formula", s),
        },
        Sexpr::List(items) => {
            let head = match items.first() {
                Some(Sexpr::Sym(h)) => h.as_str(),
                _ => return malformed("formula", s),
            };
            let rest = &items[1..];
            let bin = |x: &Sexpr,
                       y: &Sexpr,
                       scope: &mut Scope|
             -> Result<(Formula, Formula), ReadError> {
                Ok((
                    formula_from_sexpr_at(x, scope)?,
                    formula_from_sexpr_at(y, scope)?,
                ))
            };
            match (head, rest) {
                ("atom", [Sexpr::Sym(p), args @ ..]) => {
                    let ts = args
                        .iter()
                        .map(|t| term_from_sexpr_at(t, scope))
                        .collect::<Result<_, _>>()?;
                    Ok(Formula::Atom(p.clone(), ts))
                }
                ("tensor", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::tensor(a, b)),
                ("with", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::with(a, b)),
                ("plus", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::plus(a, b)),
                ("lolli", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::lolli(a, b)),
                ("and", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::and(a, b)),
                ("or", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::or(a, b)),
                ("implies", [x, y]) => bin(x, y, scope).map(|(a, b)| Formula::implies(a, b)),
                ("bang", [x]) => Ok(Formula::bang(formula_from_sexpr_at(x, scope)?)),
                ("forall", [binder, body]) | ("exists", [binder, body]) => {
                    let v = binder_from_sexpr(binder)?;
                    let shadowed = scope.insert(v.name.clone(), v.ty.clone());
                    let b = formula_from_sexpr_at(body, scope);
                    restore(scope, &v.name, shadowed);
                    let b = b?;
                    Ok(if head == "forall" {
                        Formula::forall(v, b)
                    } else {
                        Formula::exists(v, b)
                    })
                }
                ("=", [t, q]) => Ok(Formula::BoolEq(
                    term_from_sexpr_at(t, scope)?,
                    term_from_sexpr_at(q, scope)?,
                )),
                ("in", [t, q]) => Ok(Formula::Member(
                    term_from_sexpr_at(t, scope)?,
                    term_from_sexpr_at(q, scope)?,
                )),
                // Sugar: expands on construction and never prints.
                ("diamond", [z, x, y]) => {
                    let zt = term_from_sexpr_at(z, scope)?;
                    let (a, b) = bin(x, y, scope)?;
                    Ok(diamond(zt, a, b))
                }
                _ => malformed("formula", s),
            }
        }
    }
}

pub fn formula_from_sexpr(s: &Sexpr) -> Result<Formula, ReadError> {
    formula_from_sexpr_at(s, &mut Scope::new())
}

pub fn parse_formula(src: &str) -> Result<Formula, ReadError> {
    formula_from_sexpr(&read_one(src)?)
}

// ---------------------------------------------------------------------------
// Sequents

pub fn sequent_to_sexpr(s: &Sequent) -> Sexpr {
    let mut hyps = vec![Sexpr::sym("hyps")];
    hyps.extend(s.hyps.iter().map(formula_to_sexpr));
    Sexpr::list([
        Sexpr::sym("seq"),
        Sexpr::List(hyps),
        formula_to_sexpr(&s.concl),
    ])
}

pub fn sequent_from_sexpr(s: &Sexpr) -> Result<Sequent, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(head), hyps, concl]) if head == "seq" => {
            let hyps = match hyps.as_list() {
                Some([Sexpr::Sym(h), rest @ ..]) if h == "hyps" => rest
                    .iter()
                    .map(formula_from_sexpr)
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return malformed("sequent hypotheses", hyps),
            };
            Ok(Sequent::new(hyps, formula_from_sexpr(concl)?))
        }
        _ => malformed("sequent", s),
    }
}

// ---------------------------------------------------------------------------
// Derivations

fn usize_from_sexpr(s: &Sexpr) -> Result<usize, ReadError> {
    s.as_sym()
        .and_then(|t| t.parse().ok())
        .ok_or(())
        .or_else(|_| malformed("index", s))
}

pub fn derivation_to_sexpr(d: &Derivation) -> Sexpr {
    let mut items = derivation_items(d);
    if let Some(note) = &d.note {
        items.push(Sexpr::sym(":at"));
        items.push(formula_to_sexpr(note));
    }
    Sexpr::List(items)
}

fn derivation_items(d: &Derivation) -> Vec<Sexpr> {
    use Rule::*;
    let name = Sexpr::sym(d.rule_name());
    let dx = derivation_to_sexpr;
    let f = formula_to_sexpr;
    let t = term_to_sexpr;
    match &d.rule {
        Id(a) | IlId(a) | DecAx(a) => vec![name, f(a)],
        ZeroL { context, concl } | IlBotL { context, concl } => {
            let mut ctx = vec![Sexpr::sym("context")];
            ctx.extend(context.iter().map(f));
            vec![name, Sexpr::List(ctx), f(concl)]
        }
        Cut(a, b)
        | TensorR(a, b)
        | LolliL(a, b)
        | WithR(a, b)
        | PlusL(a, b)
        | IlCut(a, b)
        | IlAndR(a, b)
        | IlOrL(a, b)
        | IlImpL(a, b) => vec![name, dx(a), dx(b)],
        Per(a, p) | IlPer(a, p) => {
            let perm = Sexpr::List(p.iter().map(|i| Sexpr::sym(i.to_string())).collect());
            vec![name, dx(a), perm]
        }
        TensorL(a) | LolliR(a) | Con(a) | BangR(a) | BangL(a) | IlImpR(a) | IlCon(a) => {
            vec![name, dx(a)]
        }
        WithL1(a, o)
        | WithL2(a, o)
        | PlusR1(a, o)
        | PlusR2(a, o)
        | Wkn(a, o)
        | IlAndL1(a, o)
        | IlAndL2(a, o)
        | IlOrR1(a, o)
        | IlOrR2(a, o)
        | IlWkn(a, o) => {
            vec![name, dx(a), f(o)]
        }
        ForallR(a, v) | ExistsL(a, v) | IlForallR(a, v) | IlExistsL(a, v) => {
            vec![name, dx(a), binder_to_sexpr(v)]
        }
        ForallL {
            premise,
            principal,
            witness,
        }
        | ExistsR {
            premise,
            principal,
            witness,
        }
        | IlForallL {
            premise,
            principal,
            witness,
        }
        | IlExistsR {
            premise,
            principal,
            witness,
        } => {
            vec![name, dx(premise), f(principal), t(witness)]
        }
        Axiom(inst) => {
            let mut items = vec![name, Sexpr::sym(inst.number().to_string())];
            match inst {
                AxiomInstance::Refl(x) => items.push(t(x)),
                AxiomInstance::Sym(x, y) => items.extend([t(x), t(y)]),
                AxiomInstance::Trans(x, y, z) => items.extend([t(x), t(y), t(z)]),
                AxiomInstance::Subst {
                    left,
                    right,
                    var,
                    body,
                } => items.extend([t(left), t(right), binder_to_sexpr(var), f(body)]),
                AxiomInstance::TrueNeqFalse => {}
                AxiomInstance::BoolCases(x) => items.push(t(x)),
                AxiomInstance::CondReduce {
                    pos,
                    then_t,
                    else_t,
                    var,
                    body,
                } => items.extend([
                    Sexpr::sym(if *pos { "T" } else { "F" }),
                    t(then_t),
                    t(else_t),
                    binder_to_sexpr(var),
                    f(body),
                ]),
            }
            items
        }
        DecCasesTrue(a, p) | DecCasesFalse(a, p) => vec![
            name,
            dx(a),
            binder_to_sexpr(&p.var),
            f(&p.body),
            f(&p.matrix),
            t(&p.if_false),
            t(&p.if_true),
        ],
    }
}

pub fn derivation_from_sexpr(s: &Sexpr) -> Result<Derivation, ReadError> {
    let items = match s.as_list() {
        Some(items) if !items.is_empty() => items,
        _ => return malformed("derivation", s),
    };
    // Split off a trailing `:at <formula>` annotation.
    let (items, note) = if items.len() >= 3 && items[items.len() - 2] == Sexpr::sym(":at") {
        let note = formula_from_sexpr(&items[items.len() - 1])?;
        (&items[..items.len() - 2], Some(note))
    } else {
        (items, None)
    };
    let head = match &items[0] {
        Sexpr::Sym(h) => h.as_str(),
        _ => return malformed("derivation", s),
    };
    let rest = &items[1..];
    let dx = |s: &Sexpr| derivation_from_sexpr(s).map(Box::new);
    let rule = match (head, rest) {
        ("id", [a]) => Rule::Id(formula_from_sexpr(a)?),
        ("il-id", [a]) => Rule::IlId(formula_from_sexpr(a)?),
        ("dec-ax", [a]) => Rule::DecAx(formula_from_sexpr(a)?),
        ("zero-l", [ctx, concl]) | ("il-bot-l", [ctx, concl]) => {
            let context = match ctx.as_list() {
                Some([Sexpr::Sym(h), rest @ ..]) if h == "context" => rest
                    .iter()
                    .map(formula_from_sexpr)
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return malformed("context", ctx),
            };
            let concl = formula_from_sexpr(concl)?;
            if head == "zero-l" {
                Rule::ZeroL { context, concl }
            } else {
                Rule::IlBotL { context, concl }
            }
        }
        ("cut", [a, b]) => Rule::Cut(dx(a)?, dx(b)?),
        ("il-cut", [a, b]) => Rule::IlCut(dx(a)?, dx(b)?),
        ("tensor-r", [a, b]) => Rule::TensorR(dx(a)?, dx(b)?),
        ("lolli-l", [a, b]) => Rule::LolliL(dx(a)?, dx(b)?),
        ("with-r", [a, b]) => Rule::WithR(dx(a)?, dx(b)?),
        ("plus-l", [a, b]) => Rule::PlusL(dx(a)?, dx(b)?),
        ("il-and-r", [a, b]) => Rule::IlAndR(dx(a)?, dx(b)?),
        ("il-or-l", [a, b]) => Rule::IlOrL(dx(a)?, dx(b)?),
        ("il-imp-l", [a, b]) => Rule::IlImpL(dx(a)?, dx(b)?),
        ("per", [a, p]) | ("il-per", [a, p]) => {
            let perm = match p.as_list() {
                Some(items) => items
                    .iter()
                    .map(usize_from_sexpr)
                    .collect::<Result<Vec<_>, _>>()?,
                None => return malformed("permutation", p),
            };
            if head == "per" {
                Rule::Per(dx(a)?, perm)
            } else {
                Rule::IlPer(dx(a)?, perm)
            }
        }
        ("tensor-l", [a]) => Rule::TensorL(dx(a)?),
        ("lolli-r", [a]) => Rule::LolliR(dx(a)?),
        ("con", [a]) => Rule::Con(dx(a)?),
        ("il-con", [a]) => Rule::IlCon(dx(a)?),
        ("bang-r", [a]) => Rule::BangR(dx(a)?),
        ("bang-l", [a]) => Rule::BangL(dx(a)?),
        ("il-imp-r", [a]) => Rule::IlImpR(dx(a)?),
        ("with-l1", [a, o]) => Rule::WithL1(dx(a)?, formula_from_sexpr(o)?),
        ("with-l2", [a, o]) => Rule::WithL2(dx(a)?, formula_from_sexpr(o)?),
        ("plus-r1", [a, o]) => Rule::PlusR1(dx(a)?, formula_from_sexpr(o)?),
        ("plus-r2", [a, o]) => Rule::PlusR2(dx(a)?, formula_from_sexpr(o)?),
        ("wkn", [a, o]) => Rule::Wkn(dx(a)?, formula_from_sexpr(o)?),
        ("il-and-l1", [a, o]) => Rule::IlAndL1(dx(a)?, formula_from_sexpr(o)?),
        ("il-and-l2", [a, o]) => Rule::IlAndL2(dx(a)?, formula_from_sexpr(o)?),
        ("il-or-r1", [a, o]) => Rule::IlOrR1(dx(a)?, formula_from_sexpr(o)?),
        ("il-or-r2", [a, o]) => Rule::IlOrR2(dx(a)?, formula_from_sexpr(o)?),
        ("il-wkn", [a, o]) => Rule::IlWkn(dx(a)?, formula_from_sexpr(o)?),
        ("forall-r", [a, v]) => Rule::ForallR(dx(a)?, binder_from_sexpr(v)?),
        ("exists-l", [a, v]) => Rule::ExistsL(dx(a)?, binder_from_sexpr(v)?),
        ("il-forall-r", [a, v]) => Rule::IlForallR(dx(a)?, binder_from_sexpr(v)?),
        ("il-exists-l", [a, v]) => Rule::IlExistsL(dx(a)?, binder_from_sexpr(v)?),
        ("forall-l", [a, p, w]) => Rule::ForallL {
            premise: dx(a)?,
            principal: formula_from_sexpr(p)?,
            witness: term_from_sexpr(w)?,
        },
        ("exists-r", [a, p, w]) => Rule::ExistsR {
            premise: dx(a)?,
            principal: formula_from_sexpr(p)?,
            witness: term_from_sexpr(w)?,
        },
        ("il-forall-l", [a, p, w]) => Rule::IlForallL {
            premise: dx(a)?,
            principal: formula_from_sexpr(p)?,
            witness: term_from_sexpr(w)?,
        },
        ("il-exists-r", [a, p, w]) => Rule::IlExistsR {
            premise: dx(a)?,
            principal: formula_from_sexpr(p)?,
            witness: term_from_sexpr(w)?,
        },
        ("axiom", [Sexpr::Sym(k), args @ ..]) => {
            let inst = match (k.as_str(), args) {
                ("1", [x]) => AxiomInstance::Refl(term_from_sexpr(x)?),
                ("2", [x, y]) => AxiomInstance::Sym(term_from_sexpr(x)?, term_from_sexpr(y)?),
                ("3", [x, y, z]) => AxiomInstance::Trans(
                    term_from_sexpr(x)?,
                    term_from_sexpr(y)?,
                    term_from_sexpr(z)?,
                ),
                ("4", [l, r, v, b]) => AxiomInstance::Subst {
                    left: term_from_sexpr(l)?,
                    right: term_from_sexpr(r)?,
                    var: binder_from_sexpr(v)?,
                    body: formula_from_sexpr(b)?,
                },
                ("5", []) => AxiomInstance::TrueNeqFalse,
                ("6", [x]) => AxiomInstance::BoolCases(term_from_sexpr(x)?),
                ("7", [Sexpr::Sym(which), tt, et, v, b]) if which == "T" || which == "F" => {
                    AxiomInstance::CondReduce {
                        pos: which == "T",
                        then_t: term_from_sexpr(tt)?,
                        else_t: term_from_sexpr(et)?,
                        var: binder_from_sexpr(v)?,
                        body: formula_from_sexpr(b)?,
                    }
                }
                _ => return malformed("axiom", s),
            };
            Rule::Axiom(inst)
        }
        ("dec-cases-r", [a, v, body, matrix, ft, tt])
        | ("dec-cases-l", [a, v, body, matrix, ft, tt]) => {
            let payload = DecCasesPayload {
                var: binder_from_sexpr(v)?,
                body: formula_from_sexpr(body)?,
                matrix: formula_from_sexpr(matrix)?,
                if_false: term_from_sexpr(ft)?,
                if_true: term_from_sexpr(tt)?,
            };
            if head == "dec-cases-r" {
                Rule::DecCasesTrue(dx(a)?, payload)
            } else {
                Rule::DecCasesFalse(dx(a)?, payload)
            }
        }
        _ => return malformed("derivation", s),
    };
    Ok(Derivation { rule, note })
}

pub fn parse_derivation(src: &str) -> Result<Derivation, ReadError> {
    derivation_from_sexpr(&read_one(src)?)
}

// ---------------------------------------------------------------------------
// Structured documents

fn typed_vars_to_sexpr(label: &str, vars: &[TypedVar]) -> Sexpr {
    let mut items = vec![Sexpr::sym(label)];
    items.extend(vars.iter().map(binder_to_sexpr));
    Sexpr::List(items)
}

fn typed_vars_from_sexpr(label: &str, s: &Sexpr) -> Result<Vec<TypedVar>, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(h), rest @ ..]) if h == label => {
            rest.iter().map(binder_from_sexpr).collect()
        }
        _ => malformed("variable tuple", s),
    }
}

fn terms_to_sexpr(label: &str, ts: &[Term]) -> Sexpr {
    let mut items = vec![Sexpr::sym(label)];
    items.extend(ts.iter().map(term_to_sexpr));
    Sexpr::List(items)
}

fn terms_from_sexpr(label: &str, s: &Sexpr) -> Result<Vec<Term>, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(h), rest @ ..]) if h == label => {
            rest.iter().map(term_from_sexpr).collect()
        }
        _ => malformed("term tuple", s),
    }
}

/// Portable form of an interpretation: the witness and challenge tuples and
/// the matrix.
pub fn interpreted_to_sexpr(i: &crate::interp::InterpretedFormula) -> Sexpr {
    Sexpr::list([
        Sexpr::sym("interpreted"),
        typed_vars_to_sexpr("witnesses", &i.witnesses),
        typed_vars_to_sexpr("challenges", &i.challenges),
        Sexpr::list([Sexpr::sym("matrix"), formula_to_sexpr(&i.matrix)]),
    ])
}

pub fn interpreted_from_sexpr(s: &Sexpr) -> Result<crate::interp::InterpretedFormula, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(h), ws, cs, m]) if h == "interpreted" => {
            let matrix = match m.as_list() {
                Some([Sexpr::Sym(mh), body]) if mh == "matrix" => formula_from_sexpr(body)?,
                _ => return malformed("matrix", m),
            };
            Ok(crate::interp::InterpretedFormula {
                witnesses: typed_vars_from_sexpr("witnesses", ws)?,
                challenges: typed_vars_from_sexpr("challenges", cs)?,
                matrix,
            })
        }
        _ => malformed("interpretation document", s),
    }
}

/// Portable form of an extraction result; enough structure to re-run the
/// finite-model verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionDoc {
    pub modality: String,
    pub hypotheses: Vec<DocHypothesis>,
    pub conclusion: DocConclusion,
    pub verifying: Sequent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocHypothesis {
    pub formula: Formula,
    pub witness_vars: Vec<TypedVar>,
    pub challenge_terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocConclusion {
    pub formula: Formula,
    pub witness_terms: Vec<Term>,
    pub challenge_vars: Vec<TypedVar>,
}

impl From<&crate::extract::ExtractionResult> for ExtractionDoc {
    fn from(r: &crate::extract::ExtractionResult) -> ExtractionDoc {
        ExtractionDoc {
            modality: r.modality.clone(),
            hypotheses: r
                .hypotheses
                .iter()
                .map(|h| DocHypothesis {
                    formula: h.formula.clone(),
                    witness_vars: h.interp.witnesses.clone(),
                    challenge_terms: h.challenge_terms.clone(),
                })
                .collect(),
            conclusion: DocConclusion {
                formula: r.conclusion.formula.clone(),
                witness_terms: r.conclusion.witness_terms.clone(),
                challenge_vars: r.conclusion.interp.challenges.clone(),
            },
            verifying: r.verifying_sequent(),
        }
    }
}

impl ExtractionDoc {
    /// The source sequent recorded in the document.
    pub fn source(&self) -> Sequent {
        Sequent::new(
            self.hypotheses.iter().map(|h| h.formula.clone()).collect(),
            self.conclusion.formula.clone(),
        )
    }

    /// Reassembles the model-checking instance from the document.
    pub fn instance(&self) -> crate::model::SequentInstance {
        let mut seen = std::collections::BTreeSet::new();
        let mut env_vars = Vec::new();
        let mut push = |v: TypedVar| {
            if seen.insert(v.name.clone()) {
                env_vars.push(v);
            }
        };
        for v in self.source().free_vars() {
            push(v);
        }
        for h in &self.hypotheses {
            for v in &h.witness_vars {
                push(v.clone());
            }
        }
        for v in &self.conclusion.challenge_vars {
            push(v.clone());
        }
        crate::model::SequentInstance {
            env_vars,
            hyp_matrices: self.verifying.hyps.clone(),
            concl_matrix: self.verifying.concl.clone(),
        }
    }
}

pub fn extraction_to_sexpr(doc: &ExtractionDoc) -> Sexpr {
    let mut items = vec![
        Sexpr::sym("extraction"),
        Sexpr::list([Sexpr::sym("modality"), Sexpr::sym(doc.modality.clone())]),
    ];
    for h in &doc.hypotheses {
        items.push(Sexpr::list([
            Sexpr::sym("hypothesis"),
            Sexpr::list([Sexpr::sym("formula"), formula_to_sexpr(&h.formula)]),
            typed_vars_to_sexpr("witness-vars", &h.witness_vars),
            terms_to_sexpr("challenge-terms", &h.challenge_terms),
        ]));
    }
    items.push(Sexpr::list([
        Sexpr::sym("conclusion"),
        Sexpr::list([
            Sexpr::sym("formula"),
            formula_to_sexpr(&doc.conclusion.formula),
        ]),
        terms_to_sexpr("witness-terms", &doc.conclusion.witness_terms),
        typed_vars_to_sexpr("challenge-vars", &doc.conclusion.challenge_vars),
    ]));
    items.push(Sexpr::list([
        Sexpr::sym("verifying"),
        sequent_to_sexpr(&doc.verifying),
    ]));
    Sexpr::List(items)
}

fn labeled_formula(label: &str, s: &Sexpr) -> Result<Formula, ReadError> {
    match s.as_list() {
        Some([Sexpr::Sym(h), body]) if h == label => formula_from_sexpr(body),
        _ => malformed("labeled formula", s),
    }
}

pub fn extraction_from_sexpr(s: &Sexpr) -> Result<ExtractionDoc, ReadError> {
    let items = match s.as_list() {
        Some([Sexpr::Sym(h), rest @ ..]) if h == "extraction" => rest,
        _ => return malformed("extraction document", s),
    };
    let mut modality = None;
    let mut hypotheses = Vec::new();
    let mut conclusion = None;
    let mut verifying = None;
    for item in items {
        match item.as_list() {
            Some([Sexpr::Sym(h), Sexpr::Sym(m)]) if h == "modality" => {
                modality = Some(m.clone());
            }
            Some([Sexpr::Sym(h), f, ws, cs]) if h == "hypothesis" => {
                hypotheses.push(DocHypothesis {
                    formula: labeled_formula("formula", f)?,
                    witness_vars: typed_vars_from_sexpr("witness-vars", ws)?,
                    challenge_terms: terms_from_sexpr("challenge-terms", cs)?,
                });
            }
            Some([Sexpr::Sym(h), f, ws, cs]) if h == "conclusion" => {
                conclusion = Some(DocConclusion {
                    formula: labeled_formula("formula", f)?,
                    witness_terms: terms_from_sexpr("witness-terms", ws)?,
                    challenge_vars: typed_vars_from_sexpr("challenge-vars", cs)?,
                });
            }
            Some([Sexpr::Sym(h), seq]) if h == "verifying" => {
                verifying = Some(sequent_from_sexpr(seq)?);
            }
            _ => return malformed("extraction entry", item),
        }
    }
    match (modality, conclusion, verifying) {
        (Some(modality), Some(conclusion), Some(verifying)) => Ok(ExtractionDoc {
            modality,
            hypotheses,
            conclusion,
            verifying,
        }),
        _ => malformed("extraction document", s),
    }
}

pub fn parse_extraction(src: &str) -> Result<ExtractionDoc, ReadError> {
    extraction_from_sexpr(&read_one(src)?)
}

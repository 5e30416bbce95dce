//! Embeddings of the intuitionistic source logic into the linear systems,
//! and rule-by-rule proof translation.
//!
//! Two classical translations are provided (one banging the left sides of
//! implications and disjunctions, one banging every formula top-down) plus
//! a simplified variant that leaves disjunction and existentials unbanged;
//! the simplified images are provable only with the two extra bang
//! distribution principles, which the interpretations realize.

use crate::calculus::{check_derivation, CheckError, Derivation, Rule, Sequent};
use crate::formula::{Formula, SystemId};

/// Which translation to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `(A -> B) ~> !A -o B`, `(A v B) ~> !A (+) !B`, `(exists x A) ~>
    /// exists x !A`.
    Star,
    /// Bangs every atom, implication and universal; conjunction becomes
    /// tensor.
    Circle,
    /// As `Star` but disjunction and existentials stay unbanged.
    Simplified,
}

impl Embedding {
    pub fn name(self) -> &'static str {
        match self {
            Embedding::Star => "star",
            Embedding::Circle => "circle",
            Embedding::Simplified => "simplified",
        }
    }

    pub fn parse(s: &str) -> Option<Embedding> {
        match s {
            "star" => Some(Embedding::Star),
            "circle" => Some(Embedding::Circle),
            "simplified" => Some(Embedding::Simplified),
            _ => None,
        }
    }
}

/// `(.)*`: conjunction to additive, implication/disjunction guarded by
/// bangs, atoms fixed.
pub fn embed_star(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) => a.clone(),
        Formula::Bot => Formula::Zero,
        Formula::And(x, y) => Formula::with(embed_star(x), embed_star(y)),
        Formula::Or(x, y) => {
            Formula::plus(Formula::bang(embed_star(x)), Formula::bang(embed_star(y)))
        }
        Formula::Implies(x, y) => Formula::lolli(Formula::bang(embed_star(x)), embed_star(y)),
        Formula::Forall(v, x) => Formula::forall(v.clone(), embed_star(x)),
        Formula::Exists(v, x) => Formula::exists(v.clone(), Formula::bang(embed_star(x))),
        other => other.clone(),
    }
}

/// `(.)°`: every clause produces a banged (or zero) image.
pub fn embed_circle(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) => {
            Formula::bang(a.clone())
        }
        Formula::Bot => Formula::Zero,
        Formula::And(x, y) => Formula::tensor(embed_circle(x), embed_circle(y)),
        Formula::Or(x, y) => Formula::plus(embed_circle(x), embed_circle(y)),
        Formula::Implies(x, y) => Formula::bang(Formula::lolli(embed_circle(x), embed_circle(y))),
        Formula::Forall(v, x) => Formula::bang(Formula::forall(v.clone(), embed_circle(x))),
        Formula::Exists(v, x) => Formula::exists(v.clone(), embed_circle(x)),
        other => other.clone(),
    }
}

/// The simplified translation: disjunction and existentials pass through.
pub fn embed_simplified(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) => a.clone(),
        Formula::Bot => Formula::Zero,
        Formula::And(x, y) => Formula::with(embed_simplified(x), embed_simplified(y)),
        Formula::Or(x, y) => Formula::plus(embed_simplified(x), embed_simplified(y)),
        Formula::Implies(x, y) => {
            Formula::lolli(Formula::bang(embed_simplified(x)), embed_simplified(y))
        }
        Formula::Forall(v, x) => Formula::forall(v.clone(), embed_simplified(x)),
        Formula::Exists(v, x) => Formula::exists(v.clone(), embed_simplified(x)),
        other => other.clone(),
    }
}

pub fn embed(which: Embedding, a: &Formula) -> Formula {
    match which {
        Embedding::Star => embed_star(a),
        Embedding::Circle => embed_circle(a),
        Embedding::Simplified => embed_simplified(a),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("rule `{0}` is not part of the source calculus")]
    NotSource(String),
}

fn rule(r: Rule) -> Derivation {
    Derivation::new(r)
}

fn bang(f: Formula) -> Formula {
    Formula::bang(f)
}

fn id(f: Formula) -> Derivation {
    rule(Rule::Id(f))
}

fn cut(d1: Derivation, d2: Derivation) -> Derivation {
    rule(Rule::Cut(Box::new(d1), Box::new(d2)))
}

fn bang_l(d: Derivation) -> Derivation {
    rule(Rule::BangL(Box::new(d)))
}

fn bang_r(d: Derivation) -> Derivation {
    rule(Rule::BangR(Box::new(d)))
}

/// Rotates the first hypothesis of an (n+1)-ary context to the end.
fn rotate_first_to_last(d: Derivation, n_hyps: usize) -> Derivation {
    let mut p: Vec<usize> = (1..n_hyps).collect();
    p.push(0);
    rule(Rule::Per(Box::new(d), p))
}

/// `!G* |- !A*` from `!G* |- A*` (the context is all banged by the
/// invariant, so promotion applies).
fn promote(d: Derivation) -> Derivation {
    bang_r(d)
}

/// Derives `!principal |- !projected` where a single left rule maps
/// `principal |- projected`; used for the banged left rules.
fn banged_left_lemma(step: Derivation) -> Derivation {
    // step : principal |- projected  (one hypothesis)
    promote(bang_l(step))
}

/// Translates a checked source derivation of `G |- A` into a derivation of
/// `!G* |- A*` in the restricted linear system.
pub fn translate_proof(d: &Derivation) -> Result<Derivation, TranslateError> {
    let seq = check_derivation(d, SystemId::Il)?;
    let out = translate_node(d)?;
    debug_assert!({
        let got = check_derivation(&out, SystemId::IllR).expect("translated proof rechecks");
        let want = Sequent::new(
            seq.hyps.iter().map(|h| bang(embed_star(h))).collect(),
            embed_star(&seq.concl),
        );
        got.alpha_equal(&want)
    });
    Ok(out)
}

fn translate_node(d: &Derivation) -> Result<Derivation, TranslateError> {
    let star = embed_star;
    match &d.rule {
        Rule::IlId(a) => Ok(bang_l(id(star(a)))),
        Rule::IlBotL { context, concl } => {
            // !G*, 0 |- A*  then  !G*, !0 |- A*.
            let ctx: Vec<Formula> = context.iter().map(|f| bang(star(f))).collect();
            Ok(bang_l(rule(Rule::ZeroL {
                context: ctx,
                concl: star(concl),
            })))
        }
        Rule::IlCut(d1, d2) => {
            let t1 = translate_node(d1)?;
            let t2 = translate_node(d2)?;
            Ok(cut(promote(t1), t2))
        }
        Rule::IlPer(d1, perm) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::Per(Box::new(t1), perm.clone())))
        }
        Rule::IlAndR(d1, d2) => {
            // The context is all banged, so the restricted additive right
            // rule applies directly.
            let t1 = translate_node(d1)?;
            let t2 = translate_node(d2)?;
            Ok(rule(Rule::WithR(Box::new(t1), Box::new(t2))))
        }
        Rule::IlAndL1(d1, other) => {
            let t1 = translate_node(d1)?;
            let a = principal_of(d1)?;
            // !(A* & C*) |- !A*, cut against the premise.
            let step = rule(Rule::WithL1(Box::new(id(star(&a))), star(other)));
            let n = premise_hyps(d1)?;
            Ok(rotate_first_to_last(cut(banged_left_lemma(step), t1), n))
        }
        Rule::IlAndL2(d1, other) => {
            let t1 = translate_node(d1)?;
            let a = principal_of(d1)?;
            let step = rule(Rule::WithL2(Box::new(id(star(&a))), star(other)));
            let n = premise_hyps(d1)?;
            Ok(rotate_first_to_last(cut(banged_left_lemma(step), t1), n))
        }
        Rule::IlOrR1(d1, other) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::PlusR1(Box::new(promote(t1)), bang(star(other)))))
        }
        Rule::IlOrR2(d1, other) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::PlusR2(Box::new(promote(t1)), bang(star(other)))))
        }
        Rule::IlOrL(d1, d2) => {
            let t1 = translate_node(d1)?;
            let t2 = translate_node(d2)?;
            Ok(bang_l(rule(Rule::PlusL(Box::new(t1), Box::new(t2)))))
        }
        Rule::IlImpR(d1) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::LolliR(Box::new(t1))))
        }
        Rule::IlImpL(d1, d2) => {
            // From !G* |- A* and !D*, !B* |- C* derive
            // !G*, !D*, !(!A* -o B*) |- C*.
            let t1 = translate_node(d1)?;
            let t2 = translate_node(d2)?;
            let b = principal_of(d2)?;
            let fetch = rule(Rule::LolliL(Box::new(promote(t1)), Box::new(id(star(&b)))));
            // fetch : !G*, !A* -o B* |- B*
            let boxed = promote(bang_l(fetch));
            // boxed : !G*, !(!A* -o B*) |- !B*
            let n1 = premise_hyps(d1)?;
            let n2 = premise_hyps(d2)?;
            let glued = cut(boxed, t2);
            // glued : !G*, !(!A* -o B*), !D'* |- C*  with D' = D minus B;
            // n1 + n2 hypotheses in total.  Rotate the implication last.
            let total = n1 + n2;
            let mut p: Vec<usize> = (0..n1).collect();
            p.extend(n1 + 1..total);
            p.push(n1);
            Ok(rule(Rule::Per(Box::new(glued), p)))
        }
        Rule::IlForallR(d1, v) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::ForallR(Box::new(t1), v.clone())))
        }
        Rule::IlForallL {
            premise,
            principal,
            witness,
        } => {
            let t1 = translate_node(premise)?;
            let star_principal = star(principal);
            let (v, body) = match &star_principal {
                Formula::Forall(v, body) => (v.clone(), (**body).clone()),
                _ => return Err(TranslateError::NotSource("il-forall-l".into())),
            };
            let instantiated = crate::subst::subst_formula1(&body, &v, witness);
            let step = rule(Rule::ForallL {
                premise: Box::new(id(instantiated)),
                principal: star_principal,
                witness: witness.clone(),
            });
            let n = premise_hyps(premise)?;
            Ok(rotate_first_to_last(cut(banged_left_lemma(step), t1), n))
        }
        Rule::IlExistsR {
            premise,
            principal,
            witness,
        } => {
            let t1 = translate_node(premise)?;
            let star_principal = star(principal);
            Ok(rule(Rule::ExistsR {
                premise: Box::new(promote(t1)),
                principal: star_principal,
                witness: witness.clone(),
            }))
        }
        Rule::IlExistsL(d1, v) => {
            let t1 = translate_node(d1)?;
            Ok(bang_l(rule(Rule::ExistsL(Box::new(t1), v.clone()))))
        }
        Rule::IlCon(d1) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::Con(Box::new(t1))))
        }
        Rule::IlWkn(d1, f) => {
            let t1 = translate_node(d1)?;
            Ok(rule(Rule::Wkn(Box::new(t1), bang(star(f)))))
        }
        other => Err(TranslateError::NotSource(
            Derivation::new(other.clone()).rule_name().to_string(),
        )),
    }
}

/// The last hypothesis of a source premise (the principal position for the
/// left rules).
fn principal_of(d: &Derivation) -> Result<Formula, TranslateError> {
    let seq = check_derivation(d, SystemId::Il)?;
    seq.hyps
        .last()
        .cloned()
        .ok_or_else(|| TranslateError::NotSource("premise has no hypothesis".into()))
}

fn premise_hyps(d: &Derivation) -> Result<usize, TranslateError> {
    Ok(check_derivation(d, SystemId::Il)?.hyps.len())
}

/// Structural audit of the top-level shape of the banged translation:
/// atoms, implications and universals produce a bang, falsum produces zero,
/// and the other clauses recurse.
pub fn circle_shape_ok(a: &Formula) -> bool {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) => {
            matches!(embed_circle(a), Formula::Bang(_))
        }
        Formula::Bot => embed_circle(a) == Formula::Zero,
        Formula::Implies(_, _) | Formula::Forall(_, _) => {
            matches!(embed_circle(a), Formula::Bang(_))
        }
        Formula::And(x, y) => {
            matches!(embed_circle(a), Formula::Tensor(_, _))
                && circle_shape_ok(x)
                && circle_shape_ok(y)
        }
        Formula::Or(x, y) => {
            matches!(embed_circle(a), Formula::Plus(_, _))
                && circle_shape_ok(x)
                && circle_shape_ok(y)
        }
        Formula::Exists(_, x) => {
            matches!(embed_circle(a), Formula::Exists(_, _)) && circle_shape_ok(x)
        }
        _ => true,
    }
}

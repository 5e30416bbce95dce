//! Direct functional interpretations of the intuitionistic source logic and
//! the mechanical correspondence checks against the linear route.
//!
//! Each checker compares the linear interpretation of an embedded formula
//! with the embedded direct interpretation, first structurally
//! (normalize-then-alpha after aligning the tuples positionally) and, when
//! that fails, semantically in small finite models.

use crate::embed::{embed_circle, embed_simplified};
use crate::formula::Formula;
use crate::interp::{interpret, InterpretedFormula};
use crate::modality::modality_by_name;
use crate::model::{semantic_equiv, EquivVerdict, EvalBudget, EvalError, Sampling, Signature};
use crate::normalize::formulas_equal;
use crate::subst::{renaming, subst_formula, subst_formula1, FreshSupply, Subst};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

/// The interpreted form of a source formula: witness and challenge tuples
/// and a source-language matrix.  The realizability interpretation never
/// poses challenges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ILInterpreted {
    pub witnesses: Vec<TypedVar>,
    pub challenges: Vec<TypedVar>,
    pub matrix: Formula,
}

impl ILInterpreted {
    fn atomic(matrix: Formula) -> ILInterpreted {
        ILInterpreted {
            witnesses: Vec::new(),
            challenges: Vec::new(),
            matrix,
        }
    }

    pub fn witness_types(&self) -> Vec<FiniteType> {
        self.witnesses.iter().map(|v| v.ty.clone()).collect()
    }

    pub fn challenge_types(&self) -> Vec<FiniteType> {
        self.challenges.iter().map(|v| v.ty.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardInterp {
    Realizability,
    SingleChallenge,
    FiniteSet,
}

impl StandardInterp {
    pub fn name(self) -> &'static str {
        match self {
            StandardInterp::Realizability => "mr",
            StandardInterp::SingleChallenge => "dia",
            StandardInterp::FiniteSet => "dn",
        }
    }

    pub fn parse(s: &str) -> Option<StandardInterp> {
        match s {
            "mr" => Some(StandardInterp::Realizability),
            "dia" => Some(StandardInterp::SingleChallenge),
            "dn" => Some(StandardInterp::FiniteSet),
            _ => None,
        }
    }
}

fn guarded_pair(z: &TypedVar, a: Formula, b: Formula) -> Formula {
    Formula::and(
        Formula::implies(Formula::BoolEq(z.term(), Term::truth()), a),
        Formula::implies(Formula::BoolEq(z.term(), Term::falsity()), b),
    )
}

/// Realizability: witnesses only, with the boolean-flag disjunction.
pub fn mr_interpret(a: &Formula, supply: &mut FreshSupply) -> ILInterpreted {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) | Formula::Bot => {
            ILInterpreted::atomic(a.clone())
        }
        Formula::And(x, y) => {
            let ix = mr_interpret(x, supply);
            let iy = mr_interpret(y, supply);
            let mut witnesses = ix.witnesses;
            witnesses.extend(iy.witnesses);
            ILInterpreted {
                witnesses,
                challenges: Vec::new(),
                matrix: Formula::and(ix.matrix, iy.matrix),
            }
        }
        Formula::Or(x, y) => {
            let ix = mr_interpret(x, supply);
            let iy = mr_interpret(y, supply);
            let z = supply.fresh("z", FiniteType::Bool);
            let mut witnesses = ix.witnesses;
            witnesses.extend(iy.witnesses);
            witnesses.push(z.clone());
            ILInterpreted {
                witnesses,
                challenges: Vec::new(),
                matrix: guarded_pair(&z, ix.matrix, iy.matrix),
            }
        }
        Formula::Implies(x, y) => {
            let ix = mr_interpret(x, supply);
            let iy = mr_interpret(y, supply);
            let x_tys = ix.witness_types();
            let gs: Vec<TypedVar> = iy
                .witnesses
                .iter()
                .map(|v| supply.fresh("g", FiniteType::arrows(&x_tys, v.ty.clone())))
                .collect();
            let mut s = Subst::new();
            for (v, g) in iy.witnesses.iter().zip(&gs) {
                s.insert(
                    v.name.clone(),
                    Term::apps(g.term(), ix.witnesses.iter().map(TypedVar::term)),
                );
            }
            let matrix = Formula::forall_many(
                &ix.witnesses,
                Formula::implies(ix.matrix.clone(), subst_formula(&iy.matrix, &s)),
            );
            ILInterpreted {
                witnesses: gs,
                challenges: Vec::new(),
                matrix,
            }
        }
        Formula::Forall(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let ib = mr_interpret(&renamed, supply);
            let fs: Vec<TypedVar> = ib
                .witnesses
                .iter()
                .map(|x| supply.fresh("f", FiniteType::arrow(fresh.ty.clone(), x.ty.clone())))
                .collect();
            let mut s = Subst::new();
            for (x, f) in ib.witnesses.iter().zip(&fs) {
                s.insert(x.name.clone(), Term::app(f.term(), fresh.term()));
            }
            ILInterpreted {
                witnesses: fs,
                challenges: Vec::new(),
                matrix: Formula::forall(fresh, subst_formula(&ib.matrix, &s)),
            }
        }
        Formula::Exists(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let mut ib = mr_interpret(&renamed, supply);
            ib.witnesses.push(fresh);
            ib
        }
        other => ILInterpreted::atomic(other.clone()),
    }
}

/// Guarded universal over challenge variables bounded by finite-set terms,
/// in the source language.
fn bounded_forall_il(vars: &[TypedVar], bounds: &[Term], matrix: Formula) -> Formula {
    vars.iter().zip(bounds).rev().fold(matrix, |acc, (y, t)| {
        Formula::forall(
            y.clone(),
            Formula::implies(Formula::Member(y.term(), t.clone()), acc),
        )
    })
}

fn interpret_source(a: &Formula, finite_sets: bool, supply: &mut FreshSupply) -> ILInterpreted {
    match a {
        Formula::Atom(_, _) | Formula::BoolEq(_, _) | Formula::Member(_, _) | Formula::Bot => {
            ILInterpreted::atomic(a.clone())
        }
        Formula::And(x, y) => {
            let ix = interpret_source(x, finite_sets, supply);
            let iy = interpret_source(y, finite_sets, supply);
            let mut witnesses = ix.witnesses;
            witnesses.extend(iy.witnesses);
            let mut challenges = ix.challenges;
            challenges.extend(iy.challenges);
            ILInterpreted {
                witnesses,
                challenges,
                matrix: Formula::and(ix.matrix, iy.matrix),
            }
        }
        Formula::Or(x, y) => {
            let ix = interpret_source(x, finite_sets, supply);
            let iy = interpret_source(y, finite_sets, supply);
            let z = supply.fresh("z", FiniteType::Bool);
            let mut witnesses = ix.witnesses;
            witnesses.extend(iy.witnesses);
            witnesses.push(z.clone());
            let mut challenges = ix.challenges;
            challenges.extend(iy.challenges);
            ILInterpreted {
                witnesses,
                challenges,
                matrix: guarded_pair(&z, ix.matrix, iy.matrix),
            }
        }
        Formula::Implies(x, y) => {
            let ix = interpret_source(x, finite_sets, supply);
            let iy = interpret_source(y, finite_sets, supply);
            let x_tys = ix.witness_types();
            let mut arg_tys = x_tys.clone();
            arg_tys.extend(iy.challenge_types());
            let fs: Vec<TypedVar> = ix
                .challenges
                .iter()
                .map(|y| {
                    let target = if finite_sets {
                        FiniteType::fin_set(y.ty.clone())
                    } else {
                        y.ty.clone()
                    };
                    supply.fresh("f", FiniteType::arrows(&arg_tys, target))
                })
                .collect();
            let gs: Vec<TypedVar> = iy
                .witnesses
                .iter()
                .map(|v| supply.fresh("g", FiniteType::arrows(&x_tys, v.ty.clone())))
                .collect();
            let mut args: Vec<Term> = ix.witnesses.iter().map(TypedVar::term).collect();
            args.extend(iy.challenges.iter().map(TypedVar::term));
            let f_terms: Vec<Term> = fs
                .iter()
                .map(|f| Term::apps(f.term(), args.iter().cloned()))
                .collect();
            let antecedent = if finite_sets {
                bounded_forall_il(&ix.challenges, &f_terms, ix.matrix.clone())
            } else {
                subst_formula(
                    &ix.matrix,
                    &crate::subst::subst_from(&ix.challenges, &f_terms),
                )
            };
            let mut s = Subst::new();
            for (v, g) in iy.witnesses.iter().zip(&gs) {
                s.insert(
                    v.name.clone(),
                    Term::apps(g.term(), ix.witnesses.iter().map(TypedVar::term)),
                );
            }
            let matrix = Formula::implies(antecedent, subst_formula(&iy.matrix, &s));
            let mut witnesses = fs;
            witnesses.extend(gs);
            let mut challenges = ix.witnesses;
            challenges.extend(iy.challenges);
            ILInterpreted {
                witnesses,
                challenges,
                matrix,
            }
        }
        Formula::Forall(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let ib = interpret_source(&renamed, finite_sets, supply);
            let fs: Vec<TypedVar> = ib
                .witnesses
                .iter()
                .map(|x| supply.fresh("f", FiniteType::arrow(fresh.ty.clone(), x.ty.clone())))
                .collect();
            let mut s = Subst::new();
            for (x, f) in ib.witnesses.iter().zip(&fs) {
                s.insert(x.name.clone(), Term::app(f.term(), fresh.term()));
            }
            let mut challenges = ib.challenges;
            challenges.push(fresh);
            ILInterpreted {
                witnesses: fs,
                challenges,
                matrix: subst_formula(&ib.matrix, &s),
            }
        }
        Formula::Exists(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let mut ib = interpret_source(&renamed, finite_sets, supply);
            ib.witnesses.push(fresh);
            ib
        }
        other => ILInterpreted::atomic(other.clone()),
    }
}

/// Single-challenge interpretation with a quantifier-free matrix.
pub fn dialectica_interpret(a: &Formula, supply: &mut FreshSupply) -> ILInterpreted {
    interpret_source(a, false, supply)
}

/// Finite-set-challenge interpretation; the matrix quantifies only in the
/// guarded, membership-bounded form.
pub fn diller_nahm_interpret(a: &Formula, supply: &mut FreshSupply) -> ILInterpreted {
    interpret_source(a, true, supply)
}

pub fn interpret_standard(
    which: StandardInterp,
    a: &Formula,
    supply: &mut FreshSupply,
) -> ILInterpreted {
    match which {
        StandardInterp::Realizability => mr_interpret(a, supply),
        StandardInterp::SingleChallenge => dialectica_interpret(a, supply),
        StandardInterp::FiniteSet => diller_nahm_interpret(a, supply),
    }
}

/// True iff the matrix quantifies only through the membership guard.
pub fn bounded_quantifiers_only(a: &Formula) -> bool {
    match a {
        Formula::Forall(v, body) => match &**body {
            Formula::Implies(guard, inner) => match &**guard {
                Formula::Member(t, bound) => {
                    *t == v.term()
                        && bounded_quantifiers_only(inner)
                        && crate::subst::term_free_var_names(bound)
                            .iter()
                            .all(|n| n != &v.name)
                }
                _ => false,
            },
            _ => false,
        },
        Formula::Exists(_, _) => false,
        _ => a.children().iter().all(|c| bounded_quantifiers_only(c)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StructuralEqual,
    SemanticEqual,
    Mismatch,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::StructuralEqual => "structural-equal",
            Verdict::SemanticEqual => "semantic-equal",
            Verdict::Mismatch => "mismatch",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// The linear side of a correspondence check: the interpretation of the
/// embedded formula, with the simplified additive clause.
pub fn linear_side(which: StandardInterp, a: &Formula) -> InterpretedFormula {
    let (embedded, modality) = match which {
        StandardInterp::Realizability => (embed_circle(a), "mr"),
        StandardInterp::SingleChallenge => (embed_simplified(a), "dia"),
        StandardInterp::FiniteSet => (embed_simplified(a), "dn"),
    };
    interpret(
        &embedded,
        modality_by_name(modality).expect("registered"),
        true,
    )
    .expect("embedded formulas are linear")
}

/// The source side translated into the linear language: the direct
/// interpretation's matrix pushed through the same embedding.
pub fn embedded_source_side(which: StandardInterp, a: &Formula) -> ILInterpreted {
    let mut supply = FreshSupply::avoiding(crate::subst::formula_free_var_names(a));
    let i = interpret_standard(which, a, &mut supply);
    let matrix = match which {
        StandardInterp::Realizability => embed_circle(&i.matrix),
        _ => embed_simplified(&i.matrix),
    };
    ILInterpreted {
        witnesses: i.witnesses,
        challenges: i.challenges,
        matrix,
    }
}

/// Compares the two routes on one source formula.
pub fn correspondence_check(
    which: StandardInterp,
    a: &Formula,
    size_bound: usize,
    sampling: &Sampling,
    budget: &mut EvalBudget,
) -> Result<Verdict, EvalError> {
    let lhs = linear_side(which, a);
    let rhs = embedded_source_side(which, a);
    if lhs.witness_types() != rhs.witness_types() || lhs.challenge_types() != rhs.challenge_types()
    {
        return Ok(Verdict::Mismatch);
    }
    let mut s = renaming(&rhs.witnesses, &lhs.witnesses);
    s.extend(renaming(&rhs.challenges, &lhs.challenges));
    let aligned = subst_formula(&rhs.matrix, &s);
    if formulas_equal(&lhs.matrix, &aligned) {
        return Ok(Verdict::StructuralEqual);
    }
    let sig = Signature::infer(&[&lhs.matrix, &aligned])?;
    Ok(
        match semantic_equiv(&lhs.matrix, &aligned, size_bound, &sig, sampling, budget)? {
            EquivVerdict::Equivalent => Verdict::SemanticEqual,
            EquivVerdict::Inequivalent => Verdict::Mismatch,
            EquivVerdict::Inconclusive => Verdict::Inconclusive,
        },
    )
}

/// The banged translation always interprets with an empty challenge tuple
/// under the realizability modality.
pub fn circlebang_empty_challenges(a: &Formula) -> bool {
    linear_side(StandardInterp::Realizability, a)
        .challenges
        .is_empty()
}

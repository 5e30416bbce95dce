//! Witness extraction from checked derivations.
//!
//! Walks a derivation bottom-up, composing interpreted formulas with the
//! clause builders of [`crate::interp`] and synthesizing, for every
//! hypothesis, a challenge-term tuple and, for the conclusion, a
//! witness-term tuple.  Each rule has one handler; the modal rules defer to
//! the selected [`Modality`] for `single`/`join`/`compose`, and the
//! additive-conjunction right rule has a full and a restricted mode.
//!
//! The result carries enough structure to be re-checked: free-variable
//! side conditions, tuple typings, and truth of the verifying sequent in
//! finite models.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{check_derivation, CheckError, Derivation, Rule, Sequent};
use crate::formula::{Formula, SystemId};
use crate::interp::{
    clause_bang, clause_exists, clause_forall, clause_lolli, clause_plus, clause_tensor,
    clause_with_full, clause_with_simplified, interpret_with, InterpretError, InterpretedFormula,
};
use crate::modality::Modality;
use crate::normalize::{normalize, normalize_formula};
use crate::principles::{principle_formula, PrincipleError, PrincipleInstance, PrincipleKind};
use crate::subst::{renaming, subst_formula, subst_from, subst_term, FreshSupply, Subst};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

/// Witness data for one hypothesis: its interpreted form (whose witness
/// variables stay free in the verifying sequent) and one challenge term per
/// challenge position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisWitness {
    pub formula: Formula,
    pub interp: InterpretedFormula,
    pub challenge_terms: Vec<Term>,
}

/// Witness data for the conclusion: one witness term per witness position;
/// the challenge variables stay free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConclusionWitness {
    pub formula: Formula,
    pub interp: InterpretedFormula,
    pub witness_terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub modality: String,
    pub source: Sequent,
    pub hypotheses: Vec<HypothesisWitness>,
    pub conclusion: ConclusionWitness,
}

impl ExtractionResult {
    /// The instantiated verifying sequent: hypothesis matrices at their
    /// challenge terms, conclusion matrix at its witness terms.
    pub fn verifying_sequent(&self) -> Sequent {
        let hyps = self
            .hypotheses
            .iter()
            .map(|h| {
                normalize_formula(&subst_formula(
                    &h.interp.matrix,
                    &subst_from(&h.interp.challenges, &h.challenge_terms),
                ))
            })
            .collect();
        let concl = normalize_formula(&subst_formula(
            &self.conclusion.interp.matrix,
            &subst_from(
                &self.conclusion.interp.witnesses,
                &self.conclusion.witness_terms,
            ),
        ));
        Sequent::new(hyps, concl)
    }

    /// Free variables of the verifying sequent that model checking ranges
    /// over: source free variables, hypothesis witness variables and
    /// conclusion challenge variables.
    pub fn environment_vars(&self) -> Vec<TypedVar> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |v: TypedVar| {
            if seen.insert(v.name.clone()) {
                out.push(v);
            }
        };
        for v in self.source.free_vars() {
            push(v);
        }
        for h in &self.hypotheses {
            for v in &h.interp.witnesses {
                push(v.clone());
            }
        }
        for v in &self.conclusion.interp.challenges {
            push(v.clone());
        }
        out
    }

    pub fn sequent_instance(&self) -> crate::model::SequentInstance {
        let verifying = self.verifying_sequent();
        crate::model::SequentInstance {
            env_vars: self.environment_vars(),
            hyp_matrices: verifying.hyps,
            concl_matrix: verifying.concl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
    #[error("extraction applies to the interpreted systems, not {0}")]
    UnsupportedSystem(SystemId),
    #[error("rule `{0}` does not belong to the interpreted systems")]
    UnsupportedRule(String),
    #[error("additive-conjunction right rule with a non-banged context under the restricted mode")]
    RestrictionViolation,
    #[error(transparent)]
    Principle(#[from] PrincipleError),
    #[error("internal extraction invariant failed: {0}")]
    Internal(String),
}

struct NodeResult {
    hyps: Vec<HypothesisWitness>,
    concl: ConclusionWitness,
}

struct Extractor<'m> {
    modality: &'m dyn Modality,
    simplified: bool,
    supply: FreshSupply,
}

fn vars_as_terms(vs: &[TypedVar]) -> Vec<Term> {
    vs.iter().map(TypedVar::term).collect()
}

fn canonical_tuple(tys: &[FiniteType]) -> Vec<Term> {
    tys.iter().map(Term::canonical).collect()
}

fn apply_to_terms(ts: &[Term], s: &Subst) -> Vec<Term> {
    ts.iter().map(|t| subst_term(t, s)).collect()
}

/// The matrix that decides a case-split merge of a banged hypothesis: the
/// content under the outer bang, instantiated at the left challenge terms.
fn deciding_matrix(hyp: &HypothesisWitness, left: &[Term]) -> Formula {
    let inner = match &hyp.interp.matrix {
        Formula::Bang(x) => (**x).clone(),
        other => other.clone(),
    };
    normalize_formula(&subst_formula(
        &inner,
        &subst_from(&hyp.interp.challenges, left),
    ))
}

impl<'m> Extractor<'m> {
    fn interp_of(&mut self, f: &Formula) -> Result<InterpretedFormula, ExtractError> {
        Ok(interpret_with(
            f,
            self.modality,
            self.simplified,
            &mut self.supply,
        )?)
    }

    /// Renames the second premise's hypothesis witness variables (for the
    /// given shared-context prefix) to the first premise's, and applies the
    /// renaming throughout the second result.
    fn unify_contexts(
        &self,
        first: &[HypothesisWitness],
        second: &mut NodeResult,
        shared: usize,
    ) -> Subst {
        let mut s = Subst::new();
        for (h1, h2) in first.iter().zip(second.hyps.iter()).take(shared) {
            s.extend(renaming(&h2.interp.witnesses, &h1.interp.witnesses));
        }
        for h in &mut second.hyps {
            h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
        }
        second.concl.witness_terms = apply_to_terms(&second.concl.witness_terms, &s);
        s
    }

    fn extract_node(&mut self, d: &Derivation) -> Result<NodeResult, ExtractError> {
        match &d.rule {
            Rule::Id(a) => {
                let i = self.interp_of(a)?;
                Ok(NodeResult {
                    hyps: vec![HypothesisWitness {
                        formula: a.clone(),
                        interp: i.clone(),
                        challenge_terms: vars_as_terms(&i.challenges),
                    }],
                    concl: ConclusionWitness {
                        formula: a.clone(),
                        witness_terms: vars_as_terms(&i.witnesses),
                        interp: i,
                    },
                })
            }
            Rule::ZeroL { context, concl } => {
                let mut hyps = Vec::new();
                for f in context {
                    let i = self.interp_of(f)?;
                    hyps.push(HypothesisWitness {
                        formula: f.clone(),
                        challenge_terms: canonical_tuple(&i.challenge_types()),
                        interp: i,
                    });
                }
                hyps.push(HypothesisWitness {
                    formula: Formula::Zero,
                    interp: InterpretedFormula::atomic(Formula::Zero),
                    challenge_terms: Vec::new(),
                });
                let i = self.interp_of(concl)?;
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        formula: concl.clone(),
                        witness_terms: canonical_tuple(&i.witness_types()),
                        interp: i,
                    },
                })
            }
            Rule::Cut(d1, d2) => {
                let r1 = self.extract_node(d1)?;
                let mut r2 = self.extract_node(d2)?;
                let a_hyp = r2.hyps.pop().ok_or_else(|| {
                    ExtractError::Internal("cut premise lacks the cut hypothesis".into())
                })?;
                // x := a0, then y := a1[a0].
                let sub_x = subst_from(&a_hyp.interp.witnesses, &r1.concl.witness_terms);
                let a1_inst = apply_to_terms(&a_hyp.challenge_terms, &sub_x);
                let sub_y = subst_from(&r1.concl.interp.challenges, &a1_inst);

                let mut hyps: Vec<HypothesisWitness> = r1
                    .hyps
                    .into_iter()
                    .map(|mut h| {
                        h.challenge_terms = apply_to_terms(&h.challenge_terms, &sub_y);
                        h
                    })
                    .collect();
                hyps.extend(r2.hyps.into_iter().map(|mut h| {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &sub_x);
                    h
                }));
                let witness_terms = apply_to_terms(&r2.concl.witness_terms, &sub_x);
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        witness_terms,
                        ..r2.concl
                    },
                })
            }
            Rule::Per(d1, perm) => {
                let r = self.extract_node(d1)?;
                let hyps = perm.iter().map(|&i| r.hyps[i].clone()).collect();
                Ok(NodeResult {
                    hyps,
                    concl: r.concl,
                })
            }
            Rule::TensorR(d1, d2) => {
                let r1 = self.extract_node(d1)?;
                let r2 = self.extract_node(d2)?;
                let mut hyps = r1.hyps;
                hyps.extend(r2.hyps);
                let mut witness_terms = r1.concl.witness_terms;
                witness_terms.extend(r2.concl.witness_terms);
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        formula: Formula::tensor(r1.concl.formula, r2.concl.formula),
                        interp: clause_tensor(r1.concl.interp, r2.concl.interp),
                        witness_terms,
                    },
                })
            }
            Rule::TensorL(d1) => {
                let mut r = self.extract_node(d1)?;
                let b = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let a = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let mut challenge_terms = a.challenge_terms;
                challenge_terms.extend(b.challenge_terms);
                r.hyps.push(HypothesisWitness {
                    formula: Formula::tensor(a.formula, b.formula),
                    interp: clause_tensor(a.interp, b.interp),
                    challenge_terms,
                });
                Ok(r)
            }
            Rule::LolliR(d1) => {
                let mut r = self.extract_node(d1)?;
                let a = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let parts =
                    clause_lolli(a.interp.clone(), r.concl.interp.clone(), &mut self.supply);
                let mut binder = a.interp.witnesses.clone();
                binder.extend(r.concl.interp.challenges.clone());
                let mut witness_terms: Vec<Term> = a
                    .challenge_terms
                    .iter()
                    .map(|t| Term::lams(&binder, t.clone()))
                    .collect();
                witness_terms.extend(
                    r.concl
                        .witness_terms
                        .iter()
                        .map(|t| Term::lams(&a.interp.witnesses, t.clone())),
                );
                Ok(NodeResult {
                    hyps: r.hyps,
                    concl: ConclusionWitness {
                        formula: Formula::lolli(a.formula, r.concl.formula),
                        interp: parts.interp,
                        witness_terms,
                    },
                })
            }
            Rule::LolliL(d1, d2) => {
                let r1 = self.extract_node(d1)?;
                let mut r2 = self.extract_node(d2)?;
                let b_hyp = r2
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let parts = clause_lolli(
                    r1.concl.interp.clone(),
                    b_hyp.interp.clone(),
                    &mut self.supply,
                );
                // v := g a  everywhere in the second premise.
                let g_terms: Vec<Term> = parts
                    .gs
                    .iter()
                    .map(|g| Term::apps(g.term(), r1.concl.witness_terms.iter().cloned()))
                    .collect();
                let sub_v = subst_from(&b_hyp.interp.witnesses, &g_terms);
                let b_inst = apply_to_terms(&b_hyp.challenge_terms, &sub_v);
                // y := f a (b[g a])  in the first premise's context.
                let mut f_args = r1.concl.witness_terms.clone();
                f_args.extend(b_inst.iter().cloned());
                let f_terms: Vec<Term> = parts
                    .fs
                    .iter()
                    .map(|f| Term::apps(f.term(), f_args.iter().cloned()))
                    .collect();
                let sub_y = subst_from(&r1.concl.interp.challenges, &f_terms);

                let mut hyps: Vec<HypothesisWitness> = r1
                    .hyps
                    .into_iter()
                    .map(|mut h| {
                        h.challenge_terms = apply_to_terms(&h.challenge_terms, &sub_y);
                        h
                    })
                    .collect();
                hyps.extend(r2.hyps.into_iter().map(|mut h| {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &sub_v);
                    h
                }));
                let mut challenge_terms = r1.concl.witness_terms.clone();
                challenge_terms.extend(b_inst);
                hyps.push(HypothesisWitness {
                    formula: Formula::lolli(r1.concl.formula, b_hyp.formula),
                    interp: parts.interp,
                    challenge_terms,
                });
                let witness_terms = apply_to_terms(&r2.concl.witness_terms, &sub_v);
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        witness_terms,
                        ..r2.concl
                    },
                })
            }
            Rule::WithR(d1, d2) => {
                let r1 = self.extract_node(d1)?;
                let mut r2 = self.extract_node(d2)?;
                let shared = r1.hyps.len();
                self.unify_contexts(&r1.hyps, &mut r2, shared);
                if self.simplified {
                    if !r1
                        .hyps
                        .iter()
                        .all(|h| matches!(h.formula, Formula::Bang(_)))
                    {
                        return Err(ExtractError::RestrictionViolation);
                    }
                    let hyps = r1
                        .hyps
                        .iter()
                        .zip(&r2.hyps)
                        .map(|(h1, h2)| {
                            let deciding = deciding_matrix(h1, &h1.challenge_terms);
                            HypothesisWitness {
                                formula: h1.formula.clone(),
                                interp: h1.interp.clone(),
                                challenge_terms: self.modality.join(
                                    &deciding,
                                    &h1.challenge_terms,
                                    &h2.challenge_terms,
                                    &h1.interp.challenge_types(),
                                ),
                            }
                        })
                        .collect();
                    let mut witness_terms = r1.concl.witness_terms;
                    witness_terms.extend(r2.concl.witness_terms);
                    Ok(NodeResult {
                        hyps,
                        concl: ConclusionWitness {
                            formula: Formula::with(r1.concl.formula, r2.concl.formula),
                            interp: clause_with_simplified(r1.concl.interp, r2.concl.interp),
                            witness_terms,
                        },
                    })
                } else {
                    let z = self.supply.fresh("z", FiniteType::Bool);
                    let hyps = r1
                        .hyps
                        .iter()
                        .zip(&r2.hyps)
                        .map(|(h1, h2)| HypothesisWitness {
                            formula: h1.formula.clone(),
                            interp: h1.interp.clone(),
                            challenge_terms: h1
                                .challenge_terms
                                .iter()
                                .zip(&h2.challenge_terms)
                                .map(|(l, r)| Term::cond(z.term(), l.clone(), r.clone()))
                                .collect(),
                        })
                        .collect();
                    let mut witness_terms = r1.concl.witness_terms;
                    witness_terms.extend(r2.concl.witness_terms);
                    Ok(NodeResult {
                        hyps,
                        concl: ConclusionWitness {
                            formula: Formula::with(r1.concl.formula, r2.concl.formula),
                            interp: clause_with_full(r1.concl.interp, r2.concl.interp, z),
                            witness_terms,
                        },
                    })
                }
            }
            Rule::WithL1(d1, other) => self.with_left(d1, other, true),
            Rule::WithL2(d1, other) => self.with_left(d1, other, false),
            Rule::PlusR1(d1, other) => self.plus_right(d1, other, true),
            Rule::PlusR2(d1, other) => self.plus_right(d1, other, false),
            Rule::PlusL(d1, d2) => {
                let mut r1 = self.extract_node(d1)?;
                let mut r2 = self.extract_node(d2)?;
                let a_hyp = r1
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let mut b_hyp = r2
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let shared = r1.hyps.len();
                let mut s = Subst::new();
                for (h1, h2) in r1.hyps.iter().zip(r2.hyps.iter()).take(shared) {
                    s.extend(renaming(&h2.interp.witnesses, &h1.interp.witnesses));
                }
                s.extend(renaming(
                    &r2.concl.interp.challenges,
                    &r1.concl.interp.challenges,
                ));
                for h in &mut r2.hyps {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                }
                b_hyp.challenge_terms = apply_to_terms(&b_hyp.challenge_terms, &s);
                r2.concl.witness_terms = apply_to_terms(&r2.concl.witness_terms, &s);

                let z = self.supply.fresh("z", FiniteType::Bool);
                let mut hyps: Vec<HypothesisWitness> = r1
                    .hyps
                    .iter()
                    .zip(&r2.hyps)
                    .map(|(h1, h2)| HypothesisWitness {
                        formula: h1.formula.clone(),
                        interp: h1.interp.clone(),
                        challenge_terms: h1
                            .challenge_terms
                            .iter()
                            .zip(&h2.challenge_terms)
                            .map(|(l, r)| Term::cond(z.term(), l.clone(), r.clone()))
                            .collect(),
                    })
                    .collect();
                let mut challenge_terms = a_hyp.challenge_terms.clone();
                challenge_terms.extend(b_hyp.challenge_terms.clone());
                hyps.push(HypothesisWitness {
                    formula: Formula::plus(a_hyp.formula.clone(), b_hyp.formula.clone()),
                    interp: clause_plus(a_hyp.interp, b_hyp.interp, z.clone()),
                    challenge_terms,
                });
                let witness_terms = r1
                    .concl
                    .witness_terms
                    .iter()
                    .zip(&r2.concl.witness_terms)
                    .map(|(l, r)| Term::cond(z.term(), l.clone(), r.clone()))
                    .collect();
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        witness_terms,
                        ..r1.concl
                    },
                })
            }
            Rule::ForallR(d1, v) => {
                let r = self.extract_node(d1)?;
                // The eigenvariable becomes a conclusion challenge; rename
                // it to a supply variable so parallel branches reusing the
                // same name cannot collide.
                let fresh = self.supply.fresh("e", v.ty.clone());
                let s = renaming(std::slice::from_ref(v), std::slice::from_ref(&fresh));
                let hyps = r
                    .hyps
                    .into_iter()
                    .map(|mut h| {
                        h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                        h
                    })
                    .collect();
                let witness_terms = r
                    .concl
                    .witness_terms
                    .iter()
                    .map(|t| Term::lam(fresh.clone(), subst_term(t, &s)))
                    .collect();
                let renamed_interp = InterpretedFormula {
                    matrix: subst_formula(&r.concl.interp.matrix, &s),
                    ..r.concl.interp
                };
                let (interp, _fs) = clause_forall(renamed_interp, fresh, &mut self.supply);
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        formula: Formula::forall(v.clone(), r.concl.formula),
                        interp,
                        witness_terms,
                    },
                })
            }
            Rule::ForallL {
                premise,
                principal,
                witness,
            } => {
                let mut r = self.extract_node(premise)?;
                let a_hyp = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let i_want = self.interp_of(principal)?;
                // x := f t for the instantiated hypothesis's witnesses.
                let f_terms: Vec<Term> = i_want
                    .witnesses
                    .iter()
                    .map(|f| Term::app(f.term(), witness.clone()))
                    .collect();
                let s = subst_from(&a_hyp.interp.witnesses, &f_terms);
                for h in &mut r.hyps {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                }
                let mut challenge_terms = apply_to_terms(&a_hyp.challenge_terms, &s);
                challenge_terms.push(witness.clone());
                r.hyps.push(HypothesisWitness {
                    formula: principal.clone(),
                    interp: i_want,
                    challenge_terms,
                });
                r.concl.witness_terms = apply_to_terms(&r.concl.witness_terms, &s);
                Ok(r)
            }
            Rule::ExistsR {
                premise,
                principal,
                witness,
            } => {
                let mut r = self.extract_node(premise)?;
                let i_want = self.interp_of(principal)?;
                let s = renaming(&r.concl.interp.challenges, &i_want.challenges);
                for h in &mut r.hyps {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                }
                let mut witness_terms = r.concl.witness_terms;
                witness_terms.push(witness.clone());
                Ok(NodeResult {
                    hyps: r.hyps,
                    concl: ConclusionWitness {
                        formula: principal.clone(),
                        interp: i_want,
                        witness_terms,
                    },
                })
            }
            Rule::ExistsL(d1, v) => {
                let r = self.extract_node(d1)?;
                // The eigenvariable becomes a hypothesis witness; rename it
                // to a supply variable throughout the premise result.
                let fresh = self.supply.fresh("e", v.ty.clone());
                let s = renaming(std::slice::from_ref(v), std::slice::from_ref(&fresh));
                let mut hyps: Vec<HypothesisWitness> = r
                    .hyps
                    .into_iter()
                    .map(|mut h| {
                        h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                        h
                    })
                    .collect();
                let a_hyp = hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let renamed_interp = InterpretedFormula {
                    matrix: subst_formula(&a_hyp.interp.matrix, &s),
                    ..a_hyp.interp
                };
                hyps.push(HypothesisWitness {
                    formula: Formula::exists(v.clone(), a_hyp.formula),
                    interp: clause_exists(renamed_interp, fresh),
                    challenge_terms: a_hyp.challenge_terms,
                });
                let witness_terms = apply_to_terms(&r.concl.witness_terms, &s);
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        witness_terms,
                        ..r.concl
                    },
                })
            }
            Rule::Con(d1) => {
                let mut r = self.extract_node(d1)?;
                let second = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let first = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let s = renaming(&second.interp.witnesses, &first.interp.witnesses);
                for h in &mut r.hyps {
                    h.challenge_terms = apply_to_terms(&h.challenge_terms, &s);
                }
                let left = apply_to_terms(&first.challenge_terms, &s);
                let right = apply_to_terms(&second.challenge_terms, &s);
                r.concl.witness_terms = apply_to_terms(&r.concl.witness_terms, &s);
                let deciding = deciding_matrix(&first, &left);
                let challenge_terms =
                    self.modality
                        .join(&deciding, &left, &right, &first.interp.challenge_types());
                r.hyps.push(HypothesisWitness {
                    formula: first.formula,
                    interp: first.interp,
                    challenge_terms,
                });
                Ok(r)
            }
            Rule::Wkn(d1, f) => {
                let mut r = self.extract_node(d1)?;
                let i = self.interp_of(f)?;
                r.hyps.push(HypothesisWitness {
                    formula: f.clone(),
                    challenge_terms: canonical_tuple(&i.challenge_types()),
                    interp: i,
                });
                Ok(r)
            }
            Rule::BangR(d1) => {
                let r = self.extract_node(d1)?;
                let inner = r.concl.interp.challenges.clone();
                let interp = clause_bang(r.concl.interp.clone(), self.modality, &mut self.supply);
                let outer = vars_as_terms(&interp.challenges);
                let hyps = r
                    .hyps
                    .into_iter()
                    .map(|h| {
                        let challenge_terms = self.modality.compose(
                            &inner,
                            &h.challenge_terms,
                            &h.interp.challenge_types(),
                            &outer,
                        );
                        HypothesisWitness {
                            challenge_terms,
                            ..h
                        }
                    })
                    .collect();
                Ok(NodeResult {
                    hyps,
                    concl: ConclusionWitness {
                        formula: Formula::bang(r.concl.formula),
                        interp,
                        witness_terms: r.concl.witness_terms,
                    },
                })
            }
            Rule::BangL(d1) => {
                let mut r = self.extract_node(d1)?;
                let a_hyp = r
                    .hyps
                    .pop()
                    .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
                let challenge_terms = self
                    .modality
                    .single(&a_hyp.challenge_terms, &a_hyp.interp.challenge_types());
                r.hyps.push(HypothesisWitness {
                    formula: Formula::bang(a_hyp.formula),
                    interp: clause_bang(a_hyp.interp, self.modality, &mut self.supply),
                    challenge_terms,
                });
                Ok(r)
            }
            other_rule => Err(ExtractError::UnsupportedRule(
                Derivation::new(other_rule.clone()).rule_name().to_string(),
            )),
        }
    }

    fn with_left(
        &mut self,
        d1: &Derivation,
        other: &Formula,
        first: bool,
    ) -> Result<NodeResult, ExtractError> {
        let mut r = self.extract_node(d1)?;
        let a_hyp = r
            .hyps
            .pop()
            .ok_or_else(|| ExtractError::Internal("missing hypothesis".into()))?;
        let io = self.interp_of(other)?;
        let filler = canonical_tuple(&io.challenge_types());
        let (formula, interp, challenge_terms) = if first {
            let f = Formula::with(a_hyp.formula.clone(), other.clone());
            let mut ct = a_hyp.challenge_terms.clone();
            ct.extend(filler);
            if self.simplified {
                (f, clause_with_simplified(a_hyp.interp, io), ct)
            } else {
                let z = self.supply.fresh("z", FiniteType::Bool);
                ct.push(Term::truth());
                (f, clause_with_full(a_hyp.interp, io, z), ct)
            }
        } else {
            let f = Formula::with(other.clone(), a_hyp.formula.clone());
            let mut ct = filler;
            ct.extend(a_hyp.challenge_terms.clone());
            if self.simplified {
                (f, clause_with_simplified(io, a_hyp.interp), ct)
            } else {
                let z = self.supply.fresh("z", FiniteType::Bool);
                ct.push(Term::falsity());
                (f, clause_with_full(io, a_hyp.interp, z), ct)
            }
        };
        debug_assert_eq!(challenge_terms.len(), interp.challenges.len());
        r.hyps.push(HypothesisWitness {
            formula,
            interp,
            challenge_terms,
        });
        Ok(r)
    }

    fn plus_right(
        &mut self,
        d1: &Derivation,
        other: &Formula,
        first: bool,
    ) -> Result<NodeResult, ExtractError> {
        let r = self.extract_node(d1)?;
        let io = self.interp_of(other)?;
        let filler = canonical_tuple(&io.witness_types());
        let z = self.supply.fresh("z", FiniteType::Bool);
        let (formula, interp, witness_terms) = if first {
            let mut wt = r.concl.witness_terms.clone();
            wt.extend(filler);
            wt.push(Term::truth());
            (
                Formula::plus(r.concl.formula.clone(), other.clone()),
                clause_plus(r.concl.interp.clone(), io, z),
                wt,
            )
        } else {
            let mut wt = filler;
            wt.extend(r.concl.witness_terms.clone());
            wt.push(Term::falsity());
            (
                Formula::plus(other.clone(), r.concl.formula.clone()),
                clause_plus(io, r.concl.interp.clone(), z),
                wt,
            )
        };
        Ok(NodeResult {
            hyps: r.hyps,
            concl: ConclusionWitness {
                formula,
                interp,
                witness_terms,
            },
        })
    }
}

/// Collects every variable name occurring anywhere in a derivation, to seed
/// the fresh supply.
fn all_names(d: &Derivation, out: &mut BTreeSet<String>) {
    fn from_term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.name.clone());
            }
            Term::Const(_, _) => {}
            Term::App(f, a) => {
                from_term(f, out);
                from_term(a, out);
            }
            Term::Lam(v, b) => {
                out.insert(v.name.clone());
                from_term(b, out);
            }
            Term::Cond(s, a, b) => {
                from_term(s, out);
                from_term(a, out);
                from_term(b, out);
            }
            Term::Tuple(ts) => ts.iter().for_each(|t| from_term(t, out)),
            Term::DecCases {
                matrix,
                if_false,
                if_true,
            } => {
                from_formula(matrix, out);
                from_term(if_false, out);
                from_term(if_true, out);
            }
        }
    }
    fn from_formula(f: &Formula, out: &mut BTreeSet<String>) {
        if let Formula::Forall(v, _) | Formula::Exists(v, _) = f {
            out.insert(v.name.clone());
        }
        for t in f.node_terms() {
            from_term(t, out);
        }
        for c in f.children() {
            from_formula(c, out);
        }
    }
    match &d.rule {
        Rule::Id(a) | Rule::DecAx(a) | Rule::IlId(a) => from_formula(a, out),
        Rule::ZeroL { context, concl } | Rule::IlBotL { context, concl } => {
            context.iter().for_each(|f| from_formula(f, out));
            from_formula(concl, out);
        }
        Rule::WithL1(_, f)
        | Rule::WithL2(_, f)
        | Rule::PlusR1(_, f)
        | Rule::PlusR2(_, f)
        | Rule::Wkn(_, f)
        | Rule::IlAndL1(_, f)
        | Rule::IlAndL2(_, f)
        | Rule::IlOrR1(_, f)
        | Rule::IlOrR2(_, f)
        | Rule::IlWkn(_, f) => from_formula(f, out),
        Rule::ForallR(_, v)
        | Rule::ExistsL(_, v)
        | Rule::IlForallR(_, v)
        | Rule::IlExistsL(_, v) => {
            out.insert(v.name.clone());
        }
        Rule::ForallL {
            principal, witness, ..
        }
        | Rule::ExistsR {
            principal, witness, ..
        }
        | Rule::IlForallL {
            principal, witness, ..
        }
        | Rule::IlExistsR {
            principal, witness, ..
        } => {
            from_formula(principal, out);
            from_term(witness, out);
        }
        Rule::Axiom(inst) => {
            use crate::calculus::AxiomInstance::*;
            match inst {
                Refl(t) => from_term(t, out),
                Sym(t, q) => {
                    from_term(t, out);
                    from_term(q, out);
                }
                Trans(t, q, r) => {
                    from_term(t, out);
                    from_term(q, out);
                    from_term(r, out);
                }
                Subst {
                    left,
                    right,
                    var,
                    body,
                } => {
                    from_term(left, out);
                    from_term(right, out);
                    out.insert(var.name.clone());
                    from_formula(body, out);
                }
                TrueNeqFalse => {}
                BoolCases(t) => from_term(t, out),
                CondReduce {
                    then_t,
                    else_t,
                    var,
                    body,
                    ..
                } => {
                    from_term(then_t, out);
                    from_term(else_t, out);
                    out.insert(var.name.clone());
                    from_formula(body, out);
                }
            }
        }
        Rule::DecCasesTrue(_, p) | Rule::DecCasesFalse(_, p) => {
            out.insert(p.var.name.clone());
            from_formula(&p.body, out);
            from_formula(&p.matrix, out);
            from_term(&p.if_false, out);
            from_term(&p.if_true, out);
        }
        _ => {}
    }
    for p in d.premises() {
        all_names(p, out);
    }
}

/// Extracts witnesses from a derivation checked under `system`
/// (the plain or the restricted interpreted system).
pub fn extract(
    d: &Derivation,
    m: &dyn Modality,
    system: SystemId,
) -> Result<ExtractionResult, ExtractError> {
    if !matches!(system, SystemId::Ill | SystemId::IllR) {
        return Err(ExtractError::UnsupportedSystem(system));
    }
    let expected = check_derivation(d, system)?;
    let mut names = BTreeSet::new();
    all_names(d, &mut names);
    let mut ex = Extractor {
        modality: m,
        simplified: system == SystemId::IllR,
        supply: FreshSupply::avoiding(names),
    };
    let r = ex.extract_node(d)?;

    let got = Sequent::new(
        r.hyps.iter().map(|h| h.formula.clone()).collect(),
        r.concl.formula.clone(),
    );
    if !got.alpha_equal(&expected) {
        return Err(ExtractError::Internal(
            "extracted sequent differs from the checked sequent".into(),
        ));
    }

    let hypotheses = r
        .hyps
        .into_iter()
        .map(|h| HypothesisWitness {
            challenge_terms: h.challenge_terms.iter().map(normalize).collect(),
            ..h
        })
        .collect();
    let conclusion = ConclusionWitness {
        witness_terms: r.concl.witness_terms.iter().map(normalize).collect(),
        ..r.concl
    };
    Ok(ExtractionResult {
        modality: m.name().to_string(),
        source: expected,
        hypotheses,
        conclusion,
    })
}

/// Outcome of the well-formedness audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellformedReport {
    pub violation: Option<String>,
}

impl WellformedReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the free-variable side conditions and tuple typings of a result:
/// hypothesis challenge terms may mention source variables, hypothesis
/// witness variables and conclusion challenge variables; conclusion witness
/// terms must not mention the conclusion challenges.
pub fn check_extraction_wellformed(r: &ExtractionResult) -> WellformedReport {
    let fail = |msg: String| WellformedReport {
        violation: Some(msg),
    };

    let mut ctx: BTreeMap<String, FiniteType> = BTreeMap::new();
    let mut hyp_scope: BTreeSet<String> = BTreeSet::new();
    for v in r.source.free_vars() {
        ctx.insert(v.name.clone(), v.ty.clone());
        hyp_scope.insert(v.name.clone());
    }
    for h in &r.hypotheses {
        for v in &h.interp.witnesses {
            ctx.insert(v.name.clone(), v.ty.clone());
            hyp_scope.insert(v.name.clone());
        }
    }
    let mut concl_scope = hyp_scope.clone();
    for v in &r.conclusion.interp.challenges {
        ctx.insert(v.name.clone(), v.ty.clone());
        concl_scope.insert(v.name.clone());
    }

    for (i, h) in r.hypotheses.iter().enumerate() {
        if h.challenge_terms.len() != h.interp.challenges.len() {
            return fail(format!("hypothesis {i}: challenge tuple arity mismatch"));
        }
        for (j, (t, v)) in h
            .challenge_terms
            .iter()
            .zip(&h.interp.challenges)
            .enumerate()
        {
            for free in crate::subst::term_free_var_names(t) {
                if !concl_scope.contains(&free) {
                    return fail(format!(
                        "hypothesis {i} challenge {j}: free variable `{free}` escapes"
                    ));
                }
            }
            match crate::term::typecheck_term(t, &ctx) {
                Ok(ty) if ty == v.ty => {}
                Ok(ty) => {
                    return fail(format!(
                        "hypothesis {i} challenge {j}: has type {ty}, expected {}",
                        v.ty
                    ))
                }
                Err(e) => return fail(format!("hypothesis {i} challenge {j}: {e}")),
            }
        }
    }

    if r.conclusion.witness_terms.len() != r.conclusion.interp.witnesses.len() {
        return fail("conclusion witness tuple arity mismatch".into());
    }
    for (j, (t, v)) in r
        .conclusion
        .witness_terms
        .iter()
        .zip(&r.conclusion.interp.witnesses)
        .enumerate()
    {
        for free in crate::subst::term_free_var_names(t) {
            if !hyp_scope.contains(&free) {
                return fail(format!(
                    "conclusion witness {j}: free variable `{free}` escapes"
                ));
            }
        }
        match crate::term::typecheck_term(t, &ctx) {
            Ok(ty) if ty == v.ty => {}
            Ok(ty) => {
                return fail(format!(
                    "conclusion witness {j}: has type {ty}, expected {}",
                    v.ty
                ))
            }
            Err(e) => return fail(format!("conclusion witness {j}: {e}")),
        }
    }
    WellformedReport { violation: None }
}

/// Identity/projection realizers for the characterization and embedding
/// principles, packaged as a hypothesis-free extraction result over the
/// principle formula.
pub fn principle_realizer(
    p: &PrincipleInstance,
    m: &dyn Modality,
) -> Result<ExtractionResult, ExtractError> {
    let formula = principle_formula(p)?;
    let (lhs, rhs) = match &formula {
        Formula::Lolli(l, r) => ((**l).clone(), (**r).clone()),
        _ => {
            return Err(ExtractError::Internal(
                "principle is not an implication".into(),
            ))
        }
    };
    let mut supply = FreshSupply::avoiding(crate::subst::formula_free_var_names(&formula));
    let il = interpret_with(&lhs, m, false, &mut supply)?;
    let ir = interpret_with(&rhs, m, false, &mut supply)?;

    if il.witness_types() != ir.witness_types() {
        return Err(ExtractError::Principle(
            PrincipleError::UnsupportedInstance(
                "premise and conclusion witness tuples do not align".into(),
            ),
        ));
    }
    let chall_map = challenge_alignment(p, &il, &ir).ok_or_else(|| {
        ExtractError::Principle(PrincipleError::UnsupportedInstance(
            "premise and conclusion challenge tuples do not align".into(),
        ))
    })?;

    let parts = clause_lolli(il.clone(), ir.clone(), &mut supply);
    // f_k : project the matching conclusion challenge; g_j : project the
    // matching premise witness.
    let mut binder = il.witnesses.clone();
    binder.extend(ir.challenges.clone());
    let mut witness_terms: Vec<Term> = chall_map
        .iter()
        .map(|&k| Term::lams(&binder, ir.challenges[k].term()))
        .collect();
    witness_terms.extend(
        il.witnesses
            .iter()
            .map(|w| Term::lams(&il.witnesses, w.term())),
    );

    Ok(ExtractionResult {
        modality: m.name().to_string(),
        source: Sequent::new(vec![], formula.clone()),
        hypotheses: Vec::new(),
        conclusion: ConclusionWitness {
            formula,
            interp: parts.interp,
            witness_terms,
        },
    })
}

/// For each premise challenge position, the conclusion challenge position
/// realizing it.  Identity except for the extra principle, whose variable
/// blocks swap sides.
fn challenge_alignment(
    p: &PrincipleInstance,
    il: &InterpretedFormula,
    ir: &InterpretedFormula,
) -> Option<Vec<usize>> {
    if il.challenges.len() != ir.challenges.len() {
        return None;
    }
    let map: Vec<usize> = match p.kind() {
        PrincipleKind::Extra => {
            let xs = match p {
                PrincipleInstance::Extra { xs, .. } => xs.len(),
                _ => unreachable!(),
            };
            let vs = il.challenges.len() - xs;
            // premise order: vs-block then xs-block; conclusion: xs then vs.
            (0..il.challenges.len())
                .map(|k| if k < vs { xs + k } else { k - vs })
                .collect()
        }
        _ => (0..il.challenges.len()).collect(),
    };
    for (k, &to) in map.iter().enumerate() {
        if il.challenges[k].ty != ir.challenges[to].ty {
            return None;
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modality::{all_modalities, modality_by_name};
    use crate::types::FiniteType as Ty;

    fn p() -> Formula {
        Formula::atom("P")
    }

    fn rule(r: Rule) -> Derivation {
        Derivation::new(r)
    }

    #[test]
    fn id_extracts_empty_tuples() {
        for m in all_modalities() {
            let r = extract(&rule(Rule::Id(p())), m, SystemId::Ill).unwrap();
            assert!(r.hypotheses[0].challenge_terms.is_empty());
            assert!(r.conclusion.witness_terms.is_empty());
            let v = r.verifying_sequent();
            assert_eq!(v.hyps, vec![p()]);
            assert_eq!(v.concl, p());
        }
    }

    #[test]
    fn forall_to_exists_passes_the_witness_through() {
        // forall z P(z) |- exists z P(z), instantiated at the ground
        // constant: both tuples are that constant.
        let z = TypedVar::new("z", Ty::Base);
        let pz = Formula::atom_app("P", vec![z.term()]);
        let all = Formula::forall(z.clone(), pz.clone());
        let ex = Formula::exists(z.clone(), pz.clone());
        let pe = Formula::atom_app("P", vec![Term::elem()]);
        let d = rule(Rule::ExistsR {
            premise: Box::new(rule(Rule::ForallL {
                premise: Box::new(rule(Rule::Id(pe))),
                principal: all.clone(),
                witness: Term::elem(),
            })),
            principal: ex,
            witness: Term::elem(),
        });
        let r = extract(&d, modality_by_name("dia").unwrap(), SystemId::Ill).unwrap();
        assert_eq!(r.hypotheses[0].challenge_terms, vec![Term::elem()]);
        assert_eq!(r.conclusion.witness_terms, vec![Term::elem()]);
        assert!(check_extraction_wellformed(&r).pass());
    }

    #[test]
    fn weakening_uses_canonical_closed_terms() {
        let d = rule(Rule::Wkn(
            Box::new(rule(Rule::Id(p()))),
            Formula::bang(Formula::forall(
                TypedVar::new("x", Ty::Base),
                Formula::atom_app("Q", vec![Term::var("x", Ty::Base)]),
            )),
        ));
        let r = extract(&d, modality_by_name("dn").unwrap(), SystemId::Ill).unwrap();
        let added = &r.hypotheses[1];
        assert_eq!(added.challenge_terms.len(), 1);
        assert!(crate::subst::term_free_var_names(&added.challenge_terms[0]).is_empty());
        assert!(check_extraction_wellformed(&r).pass());
    }

    #[test]
    fn contraction_joins_challenges_per_modality() {
        // !forall x Q(x), twice, contracted.
        let x = TypedVar::new("x", Ty::Base);
        let bq = Formula::bang(Formula::forall(
            x.clone(),
            Formula::atom_app("Q", vec![x.term()]),
        ));
        let qe = Formula::atom_app("Q", vec![Term::elem()]);
        // !forall x Q |- Q(e), then weaken another copy and contract.
        let use_one = rule(Rule::BangL(Box::new(rule(Rule::ForallL {
            premise: Box::new(rule(Rule::Id(qe.clone()))),
            principal: Formula::forall(x.clone(), Formula::atom_app("Q", vec![x.term()])),
            witness: Term::elem(),
        }))));
        let two = rule(Rule::Wkn(Box::new(use_one), bq.clone()));
        let d = rule(Rule::Con(Box::new(two)));

        let dn = extract(&d, modality_by_name("dn").unwrap(), SystemId::Ill).unwrap();
        let joined = &dn.hypotheses[0].challenge_terms[0];
        let (head, _) = joined.spine();
        assert_eq!(head, &Term::join_const(&Ty::Base));

        let mr = extract(&d, modality_by_name("mr").unwrap(), SystemId::Ill).unwrap();
        assert!(mr.hypotheses[0].challenge_terms.is_empty());

        let dia = extract(&d, modality_by_name("dia").unwrap(), SystemId::Ill).unwrap();
        assert!(matches!(
            dia.hypotheses[0].challenge_terms[0],
            Term::DecCases { .. }
        ));
    }

    #[test]
    fn mr_banged_hypotheses_have_empty_challenges() {
        let x = TypedVar::new("x", Ty::Base);
        let all = Formula::forall(x.clone(), Formula::atom_app("P", vec![x.term()]));
        let d = rule(Rule::BangL(Box::new(rule(Rule::ForallL {
            premise: Box::new(rule(Rule::Id(Formula::atom_app("P", vec![Term::elem()])))),
            principal: all,
            witness: Term::elem(),
        }))));
        let r = extract(&d, modality_by_name("mr").unwrap(), SystemId::Ill).unwrap();
        assert!(r.hypotheses[0].challenge_terms.is_empty());
    }

    #[test]
    fn forged_escape_is_reported() {
        let mut r = extract(
            &rule(Rule::Id(p())),
            modality_by_name("dia").unwrap(),
            SystemId::Ill,
        )
        .unwrap();
        // Force a conclusion witness mentioning the conclusion challenges.
        let z = TypedVar::new("_rogue", Ty::Base);
        r.conclusion.interp.witnesses.push(z.clone());
        r.conclusion
            .interp
            .challenges
            .push(TypedVar::new("_w", Ty::Base));
        r.conclusion.witness_terms.push(Term::var("_w", Ty::Base));
        let report = check_extraction_wellformed(&r);
        assert!(!report.pass());
        assert!(report.violation.unwrap().contains("escapes"));
    }

    #[test]
    fn forged_type_mismatch_is_reported() {
        let mut r = extract(
            &rule(Rule::Id(p())),
            modality_by_name("dia").unwrap(),
            SystemId::Ill,
        )
        .unwrap();
        r.conclusion
            .interp
            .witnesses
            .push(TypedVar::new("_rogue", Ty::Base));
        r.conclusion.witness_terms.push(Term::truth());
        let report = check_extraction_wellformed(&r);
        assert!(!report.pass());
        assert!(report.violation.unwrap().contains("expected"));
    }

    #[test]
    fn forged_witness_is_refuted_by_a_model() {
        // Case analysis with existential witnesses; swapping the branches
        // of the conditional conclusion witness makes the verifying sequent
        // false in a two-point model.
        use crate::model::{models, verify_instance, EvalBudget, Sampling, Signature};
        let x = TypedVar::new("x", Ty::Base);
        let px = Formula::atom_app("P", vec![x.term()]);
        let ex = Formula::exists(x.clone(), px.clone());
        let round = rule(Rule::ExistsL(
            Box::new(rule(Rule::ExistsR {
                premise: Box::new(rule(Rule::Id(px.clone()))),
                principal: ex.clone(),
                witness: x.term(),
            })),
            x.clone(),
        ));
        let d = rule(Rule::PlusL(Box::new(round.clone()), Box::new(round)));
        let m = modality_by_name("dia").unwrap();
        let good = extract(&d, m, SystemId::Ill).unwrap();

        let mut forged = good.clone();
        forged.conclusion.witness_terms = forged
            .conclusion
            .witness_terms
            .iter()
            .map(|t| match t {
                Term::Cond(s, a, b) => Term::cond((**s).clone(), (**b).clone(), (**a).clone()),
                other => other.clone(),
            })
            .collect();
        assert_ne!(forged, good);

        let sig = Signature::infer(&[&ex]).unwrap();
        let mut budget = EvalBudget::new(10_000_000);
        let mut good_all = true;
        let mut forged_all = true;
        for size in 1..=2 {
            for model in models(&sig, size, &Sampling::default()).unwrap() {
                good_all &= verify_instance(&good.sequent_instance(), &model, &mut budget).unwrap();
                forged_all &=
                    verify_instance(&forged.sequent_instance(), &model, &mut budget).unwrap();
            }
        }
        assert!(good_all);
        assert!(!forged_all, "the swapped witness should be refuted");
    }

    #[test]
    fn quantifier_round_trip_verifies_up_to_size_three() {
        use crate::model::{models, verify_instance, EvalBudget, Sampling, Signature};
        let z = TypedVar::new("z", Ty::Base);
        let pz = Formula::atom_app("P", vec![z.term()]);
        let all = Formula::forall(z.clone(), pz.clone());
        let ex = Formula::exists(z.clone(), pz.clone());
        let d = rule(Rule::ExistsR {
            premise: Box::new(rule(Rule::ForallL {
                premise: Box::new(rule(Rule::Id(Formula::atom_app("P", vec![Term::elem()])))),
                principal: all.clone(),
                witness: Term::elem(),
            })),
            principal: ex,
            witness: Term::elem(),
        });
        let sig = Signature::infer(&[&all]).unwrap();
        for m in crate::modality::all_modalities() {
            let r = extract(&d, m, SystemId::Ill).unwrap();
            let mut budget = EvalBudget::new(10_000_000);
            for size in 1..=3 {
                for model in models(&sig, size, &Sampling::default()).unwrap() {
                    assert!(
                        verify_instance(&r.sequent_instance(), &model, &mut budget).unwrap(),
                        "refuted at size {size} under {}",
                        m.name()
                    );
                }
            }
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let d = rule(Rule::LolliR(Box::new(rule(Rule::Id(Formula::forall(
            TypedVar::new("x", Ty::Base),
            Formula::atom_app("P", vec![Term::var("x", Ty::Base)]),
        ))))));
        let m = modality_by_name("dn").unwrap();
        let a = extract(&d, m, SystemId::Ill).unwrap();
        let b = extract(&d, m, SystemId::Ill).unwrap();
        assert_eq!(a, b);
    }
}

//! A curated corpus of derivations: one per rule of the linear calculus,
//! one per verifying-system axiom, the derivable boolean lemmas, a source
//! calculus theorem list for proof translation, and a richer set for
//! exercising every extraction handler.

use crate::calculus::{
    build_lemma_useful, AxiomInstance, DecCasesPayload, Derivation, LemmaItem, Rule,
};
use crate::formula::{Formula, SystemId};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub system: SystemId,
    pub derivation: Derivation,
}

fn fx(name: &'static str, system: SystemId, derivation: Derivation) -> Fixture {
    Fixture {
        name,
        system,
        derivation,
    }
}

fn rule(r: Rule) -> Derivation {
    Derivation::new(r)
}

fn id(a: Formula) -> Derivation {
    rule(Rule::Id(a))
}

fn p() -> Formula {
    Formula::atom("P0")
}

fn q() -> Formula {
    Formula::atom("Q0")
}

fn r0() -> Formula {
    Formula::atom("R0")
}

fn xi(name: &str) -> TypedVar {
    TypedVar::new(name, FiniteType::Base)
}

fn p1(t: Term) -> Formula {
    Formula::atom_app("P1", vec![t])
}

fn forall_p1(v: &str) -> Formula {
    Formula::forall(xi(v), p1(xi(v).term()))
}

fn exists_p1(v: &str) -> Formula {
    Formula::exists(xi(v), p1(xi(v).term()))
}

fn bang(f: Formula) -> Formula {
    Formula::bang(f)
}

fn b(d: Derivation) -> Box<Derivation> {
    Box::new(d)
}

/// `forall x P1 |- P1(t)` through the universal left rule.
fn instantiate(v: &str, t: Term) -> Derivation {
    rule(Rule::ForallL {
        premise: b(id(p1(t.clone()))),
        principal: forall_p1(v),
        witness: t,
    })
}

/// `exists x P1 |- exists x P1` through both existential rules.
fn exists_round(v: &str) -> Derivation {
    rule(Rule::ExistsL(
        b(rule(Rule::ExistsR {
            premise: b(id(p1(xi(v).term()))),
            principal: exists_p1(v),
            witness: xi(v).term(),
        })),
        xi(v),
    ))
}

/// One checked derivation per rule of the linear calculus.
pub fn rule_fixtures() -> Vec<Fixture> {
    let mut out = vec![
        fx("id", SystemId::Ill, id(p())),
        fx(
            "zero-l",
            SystemId::Ill,
            rule(Rule::ZeroL {
                context: vec![p()],
                concl: q(),
            }),
        ),
        fx(
            "cut",
            SystemId::Ill,
            rule(Rule::Cut(b(id(p())), b(id(p())))),
        ),
        fx(
            "per",
            SystemId::Ill,
            rule(Rule::Per(
                b(rule(Rule::TensorR(b(id(p())), b(id(q()))))),
                vec![1, 0],
            )),
        ),
        fx(
            "tensor-r",
            SystemId::Ill,
            rule(Rule::TensorR(b(id(p())), b(id(q())))),
        ),
        fx(
            "tensor-l",
            SystemId::Ill,
            rule(Rule::TensorL(b(rule(Rule::TensorR(
                b(id(p())),
                b(id(q())),
            ))))),
        ),
        fx("lolli-r", SystemId::Ill, rule(Rule::LolliR(b(id(p()))))),
        fx(
            "lolli-l",
            SystemId::Ill,
            rule(Rule::LolliL(b(id(p())), b(id(q())))),
        ),
        fx(
            "with-r",
            SystemId::Ill,
            rule(Rule::WithR(
                b(rule(Rule::WithL1(b(id(p())), q()))),
                b(rule(Rule::WithL2(b(id(q())), p()))),
            )),
        ),
        fx(
            "with-r-restricted",
            SystemId::IllR,
            rule(Rule::WithR(
                b(rule(Rule::BangL(b(id(p()))))),
                b(rule(Rule::BangL(b(id(p()))))),
            )),
        ),
        fx(
            "with-l1",
            SystemId::Ill,
            rule(Rule::WithL1(b(id(p())), q())),
        ),
        fx(
            "with-l2",
            SystemId::Ill,
            rule(Rule::WithL2(b(id(q())), p())),
        ),
        fx(
            "plus-r1",
            SystemId::Ill,
            rule(Rule::PlusR1(b(id(p())), q())),
        ),
        fx(
            "plus-r2",
            SystemId::Ill,
            rule(Rule::PlusR2(b(id(q())), p())),
        ),
        fx(
            "plus-l",
            SystemId::Ill,
            rule(Rule::PlusL(
                b(rule(Rule::PlusR1(b(id(p())), q()))),
                b(rule(Rule::PlusR2(b(id(q())), p()))),
            )),
        ),
        fx(
            "forall-r",
            SystemId::Ill,
            rule(Rule::ForallR(b(instantiate("x", xi("x").term())), xi("x"))),
        ),
        fx("forall-l", SystemId::Ill, instantiate("x", Term::elem())),
        fx(
            "exists-r",
            SystemId::Ill,
            rule(Rule::ExistsR {
                premise: b(id(p1(Term::elem()))),
                principal: exists_p1("x"),
                witness: Term::elem(),
            }),
        ),
        fx("exists-l", SystemId::Ill, exists_round("x")),
        fx(
            "con",
            SystemId::Ill,
            rule(Rule::Con(b(rule(Rule::Wkn(
                b(rule(Rule::Wkn(b(id(p())), bang(q())))),
                bang(q()),
            ))))),
        ),
        fx("wkn", SystemId::Ill, rule(Rule::Wkn(b(id(p())), bang(q())))),
        fx(
            "bang-r",
            SystemId::Ill,
            rule(Rule::BangR(b(rule(Rule::BangL(b(id(p()))))))),
        ),
        fx("bang-l", SystemId::Ill, rule(Rule::BangL(b(id(p()))))),
    ];

    // Verifying-system axioms, one instance each.
    let zb = TypedVar::new("z", FiniteType::Bool);
    let wb = TypedVar::new("w", FiniteType::Bool);
    let ub = TypedVar::new("u", FiniteType::Bool);
    let wi = xi("w");
    out.extend([
        fx(
            "axiom-1",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::Refl(zb.term()))),
        ),
        fx(
            "axiom-2",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::Sym(zb.term(), wb.term()))),
        ),
        fx(
            "axiom-3",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::Trans(
                zb.term(),
                wb.term(),
                ub.term(),
            ))),
        ),
        fx(
            "axiom-4",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::Subst {
                left: Term::truth(),
                right: zb.term(),
                var: wb.clone(),
                body: Formula::atom_app("B1", vec![wb.term()]),
            })),
        ),
        fx(
            "axiom-5",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::TrueNeqFalse)),
        ),
        fx(
            "axiom-6",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::BoolCases(zb.term()))),
        ),
        fx(
            "axiom-7-true",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::CondReduce {
                pos: true,
                then_t: xi("s").term(),
                else_t: xi("t").term(),
                var: wi.clone(),
                body: p1(wi.term()),
            })),
        ),
        fx(
            "axiom-7-false",
            SystemId::IllB,
            rule(Rule::Axiom(AxiomInstance::CondReduce {
                pos: false,
                then_t: xi("s").term(),
                else_t: xi("t").term(),
                var: wi.clone(),
                body: p1(wi.term()),
            })),
        ),
    ]);

    // Derivable boolean lemmas.
    out.extend([
        fx(
            "lemma-case-split",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::CaseSplit {
                var: wb.clone(),
                body: Formula::bang(Formula::BoolEq(wb.term(), wb.term())),
                scrutinee: zb.term(),
                premise_true: rule(Rule::Axiom(AxiomInstance::Refl(Term::truth()))),
                premise_false: rule(Rule::Axiom(AxiomInstance::Refl(Term::falsity()))),
            }),
        ),
        fx(
            "lemma-guard-true",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::GuardDischarge {
                formula: p(),
                pos: true,
            }),
        ),
        fx(
            "lemma-guard-false",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::GuardDischarge {
                formula: p(),
                pos: false,
            }),
        ),
        fx(
            "lemma-absurd",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::Absurd { from: p(), to: q() }),
        ),
        fx(
            "lemma-diamond-true",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::DiamondFixed {
                a: p(),
                b: q(),
                pos: true,
            }),
        ),
        fx(
            "lemma-diamond-false",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::DiamondFixed {
                a: p(),
                b: q(),
                pos: false,
            }),
        ),
        fx(
            "lemma-diamond-bang",
            SystemId::IllB,
            build_lemma_useful(LemmaItem::DiamondBang {
                a: p(),
                b: q(),
                z: zb.term(),
            }),
        ),
    ]);

    // Decidability axiom and case-split rules.
    let u = xi("u");
    let v = xi("v");
    let cases = Term::dec_cases(p(), u.term(), v.term());
    let body = Formula::atom_app("P1", vec![wi.term()]);
    let payload = DecCasesPayload {
        var: wi.clone(),
        body: body.clone(),
        matrix: p(),
        if_false: u.term(),
        if_true: v.term(),
    };
    out.extend([
        fx("dec-ax", SystemId::IllBDia, rule(Rule::DecAx(p()))),
        fx(
            "dec-cases-r",
            SystemId::IllBDia,
            rule(Rule::DecCasesTrue(
                b(id(p1(cases.clone()))),
                payload.clone(),
            )),
        ),
        fx(
            "dec-cases-l",
            SystemId::IllBDia,
            rule(Rule::DecCasesFalse(b(id(p1(cases))), payload)),
        ),
    ]);
    out
}

/// Derivations over the interpreted systems covering every extraction
/// handler, including contraction, weakening, promotion, dereliction and
/// both additive-conjunction modes.
pub fn extraction_fixtures() -> Vec<Fixture> {
    let u = xi("u");
    let v = xi("v");
    let mut out: Vec<Fixture> = rule_fixtures()
        .into_iter()
        .filter(|f| matches!(f.system, SystemId::Ill | SystemId::IllR))
        .collect();

    // forall z P |- exists z P through a ground witness.
    let round_trip = rule(Rule::ExistsR {
        premise: b(instantiate("z", Term::elem())),
        principal: exists_p1("z"),
        witness: Term::elem(),
    });
    out.push(fx("forall-to-exists", SystemId::Ill, round_trip.clone()));

    // Cut of the round trip against the existential identity.
    out.push(fx(
        "cut-composed",
        SystemId::Ill,
        rule(Rule::Cut(b(round_trip), b(exists_round("z")))),
    ));

    // Full additive right with distinct instantiations: the challenge side
    // becomes a genuine conditional.
    let branch = |t: Term| instantiate("x", t);
    out.push(fx(
        "with-r-conditional",
        SystemId::Ill,
        rule(Rule::WithR(b(branch(u.term())), b(branch(v.term())))),
    ));

    // Restricted additive right over a banged context: challenge merging.
    let banged_branch = |t: Term| rule(Rule::BangL(b(instantiate("x", t))));
    out.push(fx(
        "with-r-joined",
        SystemId::IllR,
        rule(Rule::WithR(
            b(banged_branch(u.term())),
            b(banged_branch(v.term())),
        )),
    ));

    // Promotion with a dependent context challenge.
    out.push(fx(
        "bang-r-composed",
        SystemId::Ill,
        rule(Rule::BangR(b(rule(Rule::ForallR(
            b(rule(Rule::BangL(b(instantiate("x", xi("y").term()))))),
            xi("y"),
        ))))),
    ));

    // Contraction merging two distinct challenge terms.
    out.push(fx(
        "con-joined",
        SystemId::Ill,
        rule(Rule::Con(b(rule(Rule::TensorR(
            b(rule(Rule::BangL(b(instantiate("x", u.term()))))),
            b(rule(Rule::BangL(b(instantiate("x", v.term()))))),
        ))))),
    ));

    // Contraction on an atomic banged hypothesis.
    out.push(fx(
        "con-atomic",
        SystemId::Ill,
        rule(Rule::Con(b(rule(Rule::TensorR(
            b(rule(Rule::BangL(b(id(p()))))),
            b(rule(Rule::BangL(b(id(p()))))),
        ))))),
    ));

    // Case analysis with existential witnesses on both branches.
    out.push(fx(
        "plus-l-witnessed",
        SystemId::Ill,
        rule(Rule::PlusL(b(exists_round("x")), b(exists_round("x")))),
    ));

    // Implication right over a quantified hypothesis.
    out.push(fx(
        "lolli-r-function",
        SystemId::Ill,
        rule(Rule::LolliR(b(rule(Rule::ForallR(
            b(instantiate("x", xi("y").term())),
            xi("y"),
        ))))),
    ));

    // Implication left against banged hypotheses.
    out.push(fx(
        "lolli-l-banged",
        SystemId::Ill,
        rule(Rule::LolliL(b(id(bang(p()))), b(id(q())))),
    ));

    // Tensor decomposition feeding an implication.
    out.push(fx(
        "tensor-modus-ponens",
        SystemId::Ill,
        rule(Rule::TensorL(b(rule(Rule::LolliL(b(id(p())), b(id(q()))))))),
    ));

    // Dereliction under a nested bang.
    out.push(fx(
        "nested-bang",
        SystemId::Ill,
        rule(Rule::BangL(b(id(bang(p()))))),
    ));

    // Dereliction then promotion of an additive projection.
    out.push(fx(
        "bang-projection",
        SystemId::Ill,
        rule(Rule::BangR(b(rule(Rule::BangL(b(rule(Rule::WithL1(
            b(id(p())),
            q(),
        )))))))),
    ));

    // Zero on an empty context.
    out.push(fx(
        "zero-l-empty",
        SystemId::Ill,
        rule(Rule::ZeroL {
            context: vec![],
            concl: p(),
        }),
    ));

    // Promotion against a two-challenge hypothesis: the composed challenge
    // terms fold over both conclusion challenges.
    out.push(fx("bang-r-pair", SystemId::Ill, bang_r_pair()));

    // Implication left whose antecedent poses a challenge: the challenge
    // map is applied to real arguments.
    out.push(fx(
        "lolli-l-challenge-map",
        SystemId::Ill,
        rule(Rule::LolliL(
            b(rule(Rule::ForallR(
                b(instantiate("x", xi("y").term())),
                xi("y"),
            ))),
            b(id(q())),
        )),
    ));

    // Implication left whose consequent carries witnesses.
    out.push(fx(
        "lolli-l-witnessed",
        SystemId::Ill,
        rule(Rule::LolliL(b(id(p1(Term::elem()))), b(exists_round("u")))),
    ));

    // Cut against a function-valued witness: the lambda from the right
    // introduction is substituted into applications on the left.
    out.push(fx(
        "cut-higher-order",
        SystemId::Ill,
        rule(Rule::Cut(
            b(rule(Rule::LolliR(b(rule(Rule::ForallR(
                b(instantiate("x", xi("y").term())),
                xi("y"),
            )))))),
            b(rule(Rule::LolliL(
                b(id(forall_p1("x"))),
                b(rule(Rule::ExistsR {
                    premise: b(instantiate("y", Term::elem())),
                    principal: exists_p1("u"),
                    witness: Term::elem(),
                })),
            ))),
        )),
    ));

    // Dereliction twice: finite-set challenges nest.
    out.push(fx(
        "nested-bang-left",
        SystemId::Ill,
        rule(Rule::BangL(b(rule(Rule::BangL(b(instantiate(
            "x",
            u.term(),
        ))))))),
    ));

    // Full additive right over a banged context: conditionals over
    // set-shaped challenge terms.
    out.push(fx(
        "with-r-banged-full",
        SystemId::Ill,
        rule(Rule::WithR(
            b(rule(Rule::BangL(b(instantiate("x", u.term()))))),
            b(rule(Rule::BangL(b(instantiate("x", v.term()))))),
        )),
    ));

    // Additive left projections under the restricted mode.
    out.push(fx(
        "with-l1-restricted",
        SystemId::IllR,
        rule(Rule::WithL1(b(rule(Rule::BangL(b(id(p()))))), q())),
    ));
    out.push(fx(
        "with-l2-restricted",
        SystemId::IllR,
        rule(Rule::WithL2(b(rule(Rule::BangL(b(id(p()))))), q())),
    ));

    out
}

/// `!(forall x forall y R2 x y) |- !(forall u forall v R2 u v)`.
fn bang_r_pair() -> Derivation {
    let r2 = |a: Term, bb: Term| Formula::atom_app("R2", vec![a, bb]);
    let u = xi("u");
    let v = xi("v");
    let x = xi("x");
    let y = xi("y");
    let inner_all = Formula::forall(y.clone(), r2(x.term(), y.term()));
    let both_all = Formula::forall(x.clone(), inner_all.clone());
    let step1 = rule(Rule::ForallL {
        premise: b(id(r2(u.term(), v.term()))),
        principal: Formula::forall(y.clone(), r2(u.term(), y.term())),
        witness: v.term(),
    });
    let step2 = rule(Rule::ForallL {
        premise: b(step1),
        principal: both_all,
        witness: u.term(),
    });
    let opened = rule(Rule::BangL(b(step2)));
    let closed = rule(Rule::ForallR(
        b(rule(Rule::ForallR(b(opened), v.clone()))),
        u.clone(),
    ));
    rule(Rule::BangR(b(closed)))
}

/// Source-calculus theorems for the proof translation corpus.
pub fn source_theorems() -> Vec<Fixture> {
    let il = SystemId::Il;
    let x = xi("x");
    let px = p1(x.term());
    let il_id = |f: Formula| rule(Rule::IlId(f));

    let and_comm = rule(Rule::IlAndR(
        b(rule(Rule::IlAndL2(b(il_id(q())), p()))),
        b(rule(Rule::IlAndL1(b(il_id(p())), q()))),
    ));
    let or_comm = rule(Rule::IlOrL(
        b(rule(Rule::IlOrR2(b(il_id(p())), q()))),
        b(rule(Rule::IlOrR1(b(il_id(q())), p()))),
    ));
    let all_inst = rule(Rule::IlForallL {
        premise: b(il_id(p1(Term::elem()))),
        principal: forall_p1("x"),
        witness: Term::elem(),
    });
    let ex_intro = rule(Rule::IlExistsR {
        premise: b(il_id(p1(Term::elem()))),
        principal: exists_p1("x"),
        witness: Term::elem(),
    });

    // P /\ (Q \/ R) |- (P /\ Q) \/ (P /\ R), using contraction, exchange
    // and weakening.
    let distribute = {
        let goal = Formula::or(Formula::and(p(), q()), Formula::and(p(), r0()));
        let case = |second: Formula, left_case: bool| {
            // P, second |- (P /\ Q) \/ (P /\ R)
            let da = rule(Rule::IlWkn(b(il_id(p())), second.clone()));
            let db = rule(Rule::IlPer(
                b(rule(Rule::IlWkn(b(il_id(second.clone())), p()))),
                vec![1, 0],
            ));
            let pair = rule(Rule::IlAndR(b(da), b(db)));
            if left_case {
                rule(Rule::IlOrR1(b(pair), Formula::and(p(), r0())))
            } else {
                rule(Rule::IlOrR2(b(pair), Formula::and(p(), q())))
            }
        };
        let body = rule(Rule::IlOrL(b(case(q(), true)), b(case(r0(), false))));
        // body : P, Q \/ R |- goal
        let x_f = Formula::or(q(), r0());
        let left = rule(Rule::IlAndL2(b(body), p()));
        // left : P, P /\ (Q \/ R) |- goal
        let swapped = rule(Rule::IlPer(b(left), vec![1, 0]));
        let both = rule(Rule::IlAndL1(b(swapped), x_f));
        // both : P /\ (Q \/ R), P /\ (Q \/ R) |- goal
        let _ = goal;
        rule(Rule::IlCon(b(both)))
    };

    // exists x (P1 x /\ Q) |- exists x P1 x /\ Q.
    let ex_and = {
        let da = rule(Rule::IlAndL1(b(ex_intro_var("x")), q()));
        let db = rule(Rule::IlAndL2(b(il_id(q())), px.clone()));
        let pair = rule(Rule::IlAndR(b(da), b(db)));
        rule(Rule::IlExistsL(b(pair), x.clone()))
    };

    vec![
        fx("il-id", il, il_id(p())),
        fx("il-imp-r", il, rule(Rule::IlImpR(b(il_id(p()))))),
        fx("il-and-l1", il, rule(Rule::IlAndL1(b(il_id(p())), q()))),
        fx("il-and-l2", il, rule(Rule::IlAndL2(b(il_id(q())), p()))),
        fx("il-and-comm", il, and_comm.clone()),
        fx("il-and-comm-closed", il, rule(Rule::IlImpR(b(and_comm)))),
        fx("il-or-r1", il, rule(Rule::IlOrR1(b(il_id(p())), q()))),
        fx("il-or-comm", il, or_comm),
        fx(
            "il-modus-ponens",
            il,
            rule(Rule::IlImpL(b(il_id(p())), b(il_id(q())))),
        ),
        fx("il-forall-inst", il, all_inst.clone()),
        fx("il-exists-intro", il, ex_intro),
        fx(
            "il-forall-to-exists",
            il,
            rule(Rule::IlExistsR {
                premise: b(all_inst),
                principal: exists_p1("x"),
                witness: Term::elem(),
            }),
        ),
        fx(
            "il-forall-closed",
            il,
            rule(Rule::IlForallR(
                b(rule(Rule::IlImpR(b(il_id(px.clone()))))),
                x.clone(),
            )),
        ),
        fx(
            "il-forall-and",
            il,
            rule(Rule::IlForallR(
                b(rule(Rule::IlForallL {
                    premise: b(rule(Rule::IlAndL1(b(il_id(px.clone())), q()))),
                    principal: Formula::forall(x.clone(), Formula::and(px.clone(), q())),
                    witness: x.term(),
                })),
                x.clone(),
            )),
        ),
        fx("il-wkn", il, rule(Rule::IlWkn(b(il_id(p())), q()))),
        fx(
            "il-bot",
            il,
            rule(Rule::IlBotL {
                context: vec![],
                concl: q(),
            }),
        ),
        fx("il-distribute", il, distribute),
        fx("il-exists-and", il, ex_and),
        fx(
            "il-cut",
            il,
            rule(Rule::IlCut(b(il_id(p())), b(il_id(p())))),
        ),
    ]
}

/// `P1 x |- exists y P1 y`, existential introduction over a variable.
fn ex_intro_var(v: &str) -> Derivation {
    rule(Rule::IlExistsR {
        premise: b(rule(Rule::IlId(p1(xi(v).term())))),
        principal: exists_p1(v),
        witness: xi(v).term(),
    })
}

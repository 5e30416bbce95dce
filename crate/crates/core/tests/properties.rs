//! Property suites over seeded random corpora: term rewriting laws, the
//! interpretation's bookkeeping invariants, extraction's algebraic laws and
//! the structural audits of the direct interpretations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use linwit_core::calculus::{check_derivation, Rule};
use linwit_core::corpus::{linear_formulas, source_formulas, CorpusConfig};
use linwit_core::extract::{extract, ExtractionResult};
use linwit_core::fixtures::{extraction_fixtures, rule_fixtures};
use linwit_core::formula::{Formula, SystemId};
use linwit_core::interp::interpret;
use linwit_core::modality::{all_modalities, modality_by_name};
use linwit_core::model::{formula_valid, EquivVerdict, EvalBudget, Sampling, Signature};
use linwit_core::normalize::{bracket_abstract, normalize, terms_equal};
use linwit_core::standard::{
    bounded_quantifiers_only, dialectica_interpret, diller_nahm_interpret,
};
use linwit_core::subst::{
    alpha_equal_terms, formula_free_vars, subst_term1, term_free_var_names, FreshSupply,
};
use linwit_core::term::{typecheck_closed_under_annotations, Term, TypedVar};
use linwit_core::types::FiniteType;

fn small_type(rng: &mut ChaCha8Rng, depth: usize) -> FiniteType {
    if depth == 0 {
        return if rng.gen_bool(0.7) {
            FiniteType::Base
        } else {
            FiniteType::Bool
        };
    }
    match rng.gen_range(0..4) {
        0 => FiniteType::Base,
        1 => FiniteType::Bool,
        2 => FiniteType::arrow(small_type(rng, depth - 1), small_type(rng, depth - 1)),
        _ => FiniteType::fin_set(small_type(rng, depth - 1)),
    }
}

/// A well-typed term of the requested type over the given scope.
fn gen_term(
    rng: &mut ChaCha8Rng,
    ty: &FiniteType,
    depth: usize,
    scope: &mut Vec<TypedVar>,
    next: &mut usize,
) -> Term {
    let in_scope: Vec<TypedVar> = scope.iter().filter(|v| v.ty == *ty).cloned().collect();
    if depth == 0 {
        if !in_scope.is_empty() && rng.gen_bool(0.6) {
            return in_scope[rng.gen_range(0..in_scope.len())].term();
        }
        return Term::canonical(ty);
    }
    match rng.gen_range(0..6) {
        0 if !in_scope.is_empty() => in_scope[rng.gen_range(0..in_scope.len())].term(),
        1 => {
            // Abstraction when the target is an arrow, redex otherwise.
            if let FiniteType::Arrow(a, b) = ty {
                let v = TypedVar::new(format!("t{next}"), (**a).clone());
                *next += 1;
                scope.push(v.clone());
                let body = gen_term(rng, b, depth - 1, scope, next);
                scope.pop();
                Term::lam(v, body)
            } else {
                let arg_ty = small_type(rng, 1);
                let v = TypedVar::new(format!("t{next}"), arg_ty.clone());
                *next += 1;
                scope.push(v.clone());
                let body = gen_term(rng, ty, depth - 1, scope, next);
                scope.pop();
                let arg = gen_term(rng, &arg_ty, depth - 1, scope, next);
                Term::app(Term::lam(v, body), arg)
            }
        }
        2 => Term::cond(
            gen_term(rng, &FiniteType::Bool, depth - 1, scope, next),
            gen_term(rng, ty, depth - 1, scope, next),
            gen_term(rng, ty, depth - 1, scope, next),
        ),
        3 => {
            // A fully applied first projection.
            let other = small_type(rng, 1);
            Term::apps(
                Term::pi(ty, &other),
                [
                    gen_term(rng, ty, depth - 1, scope, next),
                    gen_term(rng, &other, depth - 1, scope, next),
                ],
            )
        }
        4 => {
            // A fully applied composition combinator at ground instances.
            let r = small_type(rng, 0);
            let s = small_type(rng, 0);
            let f = gen_term(
                rng,
                &FiniteType::arrows(&[r.clone(), s.clone()], ty.clone()),
                depth - 1,
                scope,
                next,
            );
            let g = gen_term(
                rng,
                &FiniteType::arrow(r.clone(), s.clone()),
                depth - 1,
                scope,
                next,
            );
            let z = gen_term(rng, &r, depth - 1, scope, next);
            Term::apps(Term::sigma(&r, &s, ty), [f, g, z])
        }
        _ => Term::canonical(ty),
    }
}

#[test]
fn normalization_is_idempotent_and_preserves_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let ty = small_type(&mut rng, 2);
        let t = gen_term(&mut rng, &ty, 3, &mut Vec::new(), &mut 0);
        let before = typecheck_closed_under_annotations(&t).expect("generated term types");
        let n = normalize(&t);
        assert!(
            alpha_equal_terms(&normalize(&n), &n),
            "not idempotent: {t:?}"
        );
        let after = typecheck_closed_under_annotations(&n).expect("normal form types");
        assert_eq!(before, after, "subject reduction failed for {t:?}");
    }
}

#[test]
fn substitution_commutes_with_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let var_ty = small_type(&mut rng, 1);
        let x = TypedVar::new("sub", var_ty.clone());
        let ty = small_type(&mut rng, 1);
        let mut scope = vec![x.clone()];
        let t = gen_term(&mut rng, &ty, 3, &mut scope, &mut 0);
        let s = gen_term(&mut rng, &var_ty, 2, &mut Vec::new(), &mut 0);
        let direct = normalize(&subst_term1(&t, &x, &s));
        let staged = normalize(&subst_term1(&normalize(&t), &x, &normalize(&s)));
        assert!(
            alpha_equal_terms(&direct, &staged),
            "substitution lemma failed: t = {t:?}, s = {s:?}"
        );
    }
}

/// Lambda-free applicative terms for the bracket-abstraction oracle.
fn gen_applicative(rng: &mut ChaCha8Rng, ty: &FiniteType, depth: usize, x: &TypedVar) -> Term {
    if depth == 0 {
        if *ty == x.ty && rng.gen_bool(0.5) {
            return x.term();
        }
        return Term::canonical_flat(ty);
    }
    match rng.gen_range(0..4) {
        0 if *ty == x.ty => x.term(),
        1 => {
            let other = small_type(rng, 0);
            Term::apps(
                Term::pi(ty, &other),
                [
                    gen_applicative(rng, ty, depth - 1, x),
                    gen_applicative(rng, &other, depth - 1, x),
                ],
            )
        }
        2 => Term::cond(
            gen_applicative(rng, &FiniteType::Bool, depth - 1, x),
            gen_applicative(rng, ty, depth - 1, x),
            gen_applicative(rng, ty, depth - 1, x),
        ),
        _ => Term::canonical_flat(ty),
    }
}

trait CanonicalFlat {
    fn canonical_flat(ty: &FiniteType) -> Term;
}

impl CanonicalFlat for Term {
    /// A closed lambda-free inhabitant: constants under projections.
    fn canonical_flat(ty: &FiniteType) -> Term {
        match ty {
            FiniteType::Base => Term::elem(),
            FiniteType::Bool => Term::truth(),
            FiniteType::Arrow(a, b) => Term::app(Term::pi(b, a), Term::canonical_flat(b)),
            FiniteType::FinSet(a) => Term::app(Term::single_const(a), Term::canonical_flat(a)),
        }
    }
}

#[test]
fn bracket_abstraction_satisfies_its_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 120 {
        let x_ty = small_type(&mut rng, 1);
        let x = TypedVar::new("x", x_ty.clone());
        let ty = small_type(&mut rng, 1);
        let t = gen_applicative(&mut rng, &ty, 3, &x);
        if !term_free_var_names(&t).contains(&x.name) && rng.gen_bool(0.7) {
            continue; // keep most samples with a real occurrence
        }
        let u = bracket_abstract(&x, &t).expect("applicative terms abstract");
        assert!(!term_free_var_names(&u).contains(&x.name));
        let s = Term::canonical_flat(&x_ty);
        let applied = Term::app(u, s.clone());
        let substituted = subst_term1(&t, &x, &s);
        assert!(
            terms_equal(&applied, &substituted),
            "oracle failed: x = {x:?}, t = {t:?}"
        );
        checked += 1;
    }
}

#[test]
fn interpretation_bookkeeping_invariants() {
    let cfg = CorpusConfig {
        depth: 4,
        count: 50,
        seed: 21,
    };
    for a in linear_formulas(&cfg) {
        let source_fv = formula_free_vars(&a);
        for m in all_modalities() {
            let i = interpret(&a, m, false).unwrap();
            let mut names = std::collections::BTreeSet::new();
            for v in i.witnesses.iter().chain(&i.challenges) {
                assert!(
                    names.insert(v.name.clone()),
                    "duplicate tuple variable {v:?}"
                );
                assert!(
                    !source_fv.iter().any(|f| f.name == v.name),
                    "tuple variable shadows a source variable"
                );
            }
            let allowed: std::collections::BTreeSet<String> = names
                .iter()
                .cloned()
                .chain(source_fv.iter().map(|v| v.name.clone()))
                .collect();
            for v in formula_free_vars(&i.matrix) {
                assert!(allowed.contains(&v.name), "matrix escapes: {v:?} in {a:?}");
            }
            let mut ctx = std::collections::BTreeMap::new();
            for v in i.witnesses.iter().chain(&i.challenges).chain(&source_fv) {
                ctx.insert(v.name.clone(), v.ty.clone());
            }
            linwit_core::formula::typecheck_formula(&i.matrix, &ctx)
                .unwrap_or_else(|e| panic!("matrix ill-typed under {}: {e}", m.name()));
        }
    }
}

/// Positional renaming of one result's tuple variables onto another's.
fn align_to(reference: &ExtractionResult, other: &ExtractionResult) -> ExtractionResult {
    let mut s = linwit_core::subst::Subst::new();
    for (h_ref, h_other) in reference.hypotheses.iter().zip(&other.hypotheses) {
        for (a, b) in h_ref.interp.witnesses.iter().zip(&h_other.interp.witnesses) {
            s.insert(b.name.clone(), a.term());
        }
    }
    for (a, b) in reference
        .conclusion
        .interp
        .challenges
        .iter()
        .zip(&other.conclusion.interp.challenges)
    {
        s.insert(b.name.clone(), a.term());
    }
    let mut out = other.clone();
    for h in &mut out.hypotheses {
        h.challenge_terms = h
            .challenge_terms
            .iter()
            .map(|t| linwit_core::subst::subst_term(t, &s))
            .collect();
    }
    out.conclusion.witness_terms = out
        .conclusion
        .witness_terms
        .iter()
        .map(|t| linwit_core::subst::subst_term(t, &s))
        .collect();
    out
}

#[test]
fn cut_extraction_is_substitution_composition() {
    // Extract the two halves independently, compose them by hand with the
    // cut substitutions, and compare against extracting the cut node.
    let x = TypedVar::new("x", FiniteType::Base);
    let px = Formula::atom_app("P", vec![x.term()]);
    let all = Formula::forall(x.clone(), px.clone());
    let ex = Formula::exists(x.clone(), px.clone());
    let d1 = linwit_core::Derivation::new(Rule::ExistsR {
        premise: Box::new(linwit_core::Derivation::new(Rule::ForallL {
            premise: Box::new(linwit_core::Derivation::new(Rule::Id(Formula::atom_app(
                "P",
                vec![Term::elem()],
            )))),
            principal: all.clone(),
            witness: Term::elem(),
        })),
        principal: ex.clone(),
        witness: Term::elem(),
    });
    let d2 = linwit_core::Derivation::new(Rule::ExistsL(
        Box::new(linwit_core::Derivation::new(Rule::ExistsR {
            premise: Box::new(linwit_core::Derivation::new(Rule::Id(px.clone()))),
            principal: ex.clone(),
            witness: x.term(),
        })),
        x.clone(),
    ));
    let cut = linwit_core::Derivation::new(Rule::Cut(Box::new(d1.clone()), Box::new(d2.clone())));

    for m in all_modalities() {
        let r_cut = extract(&cut, m, SystemId::Ill).unwrap();
        let r1 = extract(&d1, m, SystemId::Ill).unwrap();
        let mut r2 = extract(&d2, m, SystemId::Ill).unwrap();

        // Compose: substitute r1's conclusion witnesses for r2's cut-
        // hypothesis witness variables, then r2's instantiated challenge
        // terms for r1's conclusion challenges.
        let cut_hyp = r2.hypotheses.pop().unwrap();
        let sub_x =
            linwit_core::subst::subst_from(&cut_hyp.interp.witnesses, &r1.conclusion.witness_terms);
        let a1: Vec<Term> = cut_hyp
            .challenge_terms
            .iter()
            .map(|t| linwit_core::subst::subst_term(t, &sub_x))
            .collect();
        let sub_y = linwit_core::subst::subst_from(&r1.conclusion.interp.challenges, &a1);
        let mut manual = r1.clone();
        for h in &mut manual.hypotheses {
            h.challenge_terms = h
                .challenge_terms
                .iter()
                .map(|t| linwit_core::subst::subst_term(t, &sub_y))
                .collect();
        }
        manual.conclusion = r2.conclusion.clone();
        manual.conclusion.witness_terms = manual
            .conclusion
            .witness_terms
            .iter()
            .map(|t| linwit_core::subst::subst_term(t, &sub_x))
            .collect();

        let aligned = align_to(&r_cut, &manual);
        for (h_cut, h_manual) in r_cut.hypotheses.iter().zip(&aligned.hypotheses) {
            for (a, b) in h_cut.challenge_terms.iter().zip(&h_manual.challenge_terms) {
                assert!(terms_equal(a, b), "{}: {a:?} vs {b:?}", m.name());
            }
        }
        for (a, b) in r_cut
            .conclusion
            .witness_terms
            .iter()
            .zip(&aligned.conclusion.witness_terms)
        {
            assert!(terms_equal(a, b), "{}: {a:?} vs {b:?}", m.name());
        }
    }
}

#[test]
fn realizability_banged_hypotheses_have_no_challenges() {
    let mr = modality_by_name("mr").unwrap();
    for f in extraction_fixtures() {
        let r = extract(&f.derivation, mr, f.system).unwrap();
        for h in &r.hypotheses {
            if matches!(h.formula, Formula::Bang(_)) {
                assert!(
                    h.challenge_terms.is_empty(),
                    "{}: banged hypothesis carries challenges",
                    f.name
                );
            }
        }
    }
}

fn case_split_matrices(t: &Term, out: &mut Vec<Formula>) {
    match t {
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            out.push((**matrix).clone());
            case_split_matrices(if_false, out);
            case_split_matrices(if_true, out);
        }
        Term::App(f, a) => {
            case_split_matrices(f, out);
            case_split_matrices(a, out);
        }
        Term::Lam(_, b) => case_split_matrices(b, out),
        Term::Cond(s, a, b) => {
            case_split_matrices(s, out);
            case_split_matrices(a, out);
            case_split_matrices(b, out);
        }
        Term::Tuple(ts) => ts.iter().for_each(|t| case_split_matrices(t, out)),
        _ => {}
    }
}

#[test]
fn case_split_terms_carry_decidable_matrices() {
    let dia = modality_by_name("dia").unwrap();
    for f in extraction_fixtures() {
        let r = extract(&f.derivation, dia, f.system).unwrap();
        let mut matrices = Vec::new();
        for h in &r.hypotheses {
            for t in &h.challenge_terms {
                case_split_matrices(t, &mut matrices);
            }
        }
        for t in &r.conclusion.witness_terms {
            case_split_matrices(t, &mut matrices);
        }
        for m in matrices {
            assert!(m.is_quantifier_free(), "{}: {m:?}", f.name);
        }
    }
}

#[test]
fn verifying_axioms_hold_under_the_classical_collapse() {
    // The collapse is a sound refuter exactly because every axiom and
    // derived lemma of the verifying system evaluates to true.
    let mut budget = EvalBudget::new(50_000_000);
    for f in rule_fixtures() {
        if !f.system.is_verifying() {
            continue;
        }
        let seq = check_derivation(&f.derivation, f.system).unwrap();
        if !seq.hyps.is_empty() {
            continue;
        }
        let sig = Signature::infer(&[&seq.concl]).unwrap();
        let v = formula_valid(&seq.concl, 2, &sig, &Sampling::default(), &mut budget)
            .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert_eq!(v, EquivVerdict::Equivalent, "{} not valid", f.name);
    }
}

#[test]
fn direct_interpretation_matrix_audits() {
    let cfg = CorpusConfig {
        depth: 3,
        count: 40,
        seed: 22,
    };
    for a in source_formulas(&cfg) {
        let mut s1 = FreshSupply::new();
        let d = dialectica_interpret(&a, &mut s1);
        assert!(
            d.matrix.is_quantifier_free(),
            "single-challenge matrix: {a:?}"
        );
        let mut s2 = FreshSupply::new();
        let dn = diller_nahm_interpret(&a, &mut s2);
        assert!(
            bounded_quantifiers_only(&dn.matrix),
            "finite-set matrix: {a:?}"
        );
        assert!(
            mr_challenges_empty(&a),
            "realizability challenges appear: {a:?}"
        );
    }
}

fn mr_challenges_empty(a: &Formula) -> bool {
    let mut s = FreshSupply::new();
    linwit_core::standard::mr_interpret(a, &mut s)
        .challenges
        .is_empty()
}

#[test]
fn single_and_finite_set_interpretations_agree_without_implications() {
    let cfg = CorpusConfig {
        depth: 3,
        count: 60,
        seed: 23,
    };
    let mut seen = 0;
    for a in source_formulas(&cfg) {
        if has_implication(&a) {
            continue;
        }
        seen += 1;
        let mut s1 = FreshSupply::new();
        let mut s2 = FreshSupply::new();
        assert_eq!(
            dialectica_interpret(&a, &mut s1),
            diller_nahm_interpret(&a, &mut s2),
            "{a:?}"
        );
    }
    assert!(seen >= 5, "too few implication-free formulas: {seen}");
}

fn has_implication(a: &Formula) -> bool {
    if matches!(a, Formula::Implies(_, _)) {
        return true;
    }
    a.children().iter().any(|c| has_implication(c))
}

#[test]
fn simplified_additive_clause_only_differs_on_with() {
    let cfg = CorpusConfig {
        depth: 4,
        count: 60,
        seed: 24,
    };
    let mut seen = 0;
    for a in linear_formulas(&cfg) {
        if has_with(&a) {
            continue;
        }
        seen += 1;
        for m in all_modalities() {
            assert_eq!(
                interpret(&a, m, false).unwrap(),
                interpret(&a, m, true).unwrap(),
                "modes differ on {a:?}"
            );
        }
    }
    assert!(seen >= 5, "too few additive-free formulas: {seen}");
}

fn has_with(a: &Formula) -> bool {
    if matches!(a, Formula::With(_, _)) {
        return true;
    }
    a.children().iter().any(|c| has_with(c))
}

#[test]
fn swapped_case_split_join_is_refuted() {
    use linwit_core::model::{models, verify_instance};
    let dia = modality_by_name("dia").unwrap();
    let fixture = extraction_fixtures()
        .into_iter()
        .find(|f| f.name == "con-joined")
        .unwrap();
    let good = extract(&fixture.derivation, dia, fixture.system).unwrap();

    fn swap_cases(t: &Term) -> Term {
        match t {
            Term::DecCases {
                matrix,
                if_false,
                if_true,
            } => Term::dec_cases((**matrix).clone(), (**if_true).clone(), (**if_false).clone()),
            other => other.clone(),
        }
    }
    let mut forged = good.clone();
    for h in &mut forged.hypotheses {
        h.challenge_terms = h.challenge_terms.iter().map(swap_cases).collect();
    }
    assert_ne!(forged, good);

    let mut formulas: Vec<&Formula> = good.source.hyps.iter().collect();
    formulas.push(&good.source.concl);
    let sig = Signature::infer(&formulas).unwrap();
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
    assert!(!forged_all, "the swapped join should be refuted");
}

#[test]
fn derivation_files_round_trip_for_every_fixture() {
    for f in rule_fixtures()
        .into_iter()
        .chain(extraction_fixtures())
        .chain(linwit_core::fixtures::source_theorems())
    {
        let printed = linwit_core::surface::derivation_to_sexpr(&f.derivation).to_string();
        let reparsed = linwit_core::surface::parse_derivation(&printed)
            .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert_eq!(reparsed, f.derivation, "{}", f.name);
    }
}

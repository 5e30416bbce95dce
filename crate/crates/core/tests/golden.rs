//! Golden outputs: the witness argument order (witnesses first, then
//! challenges) and the fresh-name stream are frozen here; a change to
//! either shows up as a byte-level diff.

use linwit_core::calculus::Rule;
use linwit_core::extract::extract;
use linwit_core::formula::{Formula, SystemId};
use linwit_core::interp::interpret;
use linwit_core::modality::modality_by_name;
use linwit_core::surface;
use linwit_core::term::TypedVar;
use linwit_core::types::FiniteType;
use linwit_core::Derivation;

fn shift_proof() -> Derivation {
    // |- forall x P x  -o  forall y P y
    let x = TypedVar::new("x", FiniteType::Base);
    let y = TypedVar::new("y", FiniteType::Base);
    let px = Formula::atom_app("P", vec![x.term()]);
    let py = Formula::atom_app("P", vec![y.term()]);
    Derivation::new(Rule::LolliR(Box::new(Derivation::new(Rule::ForallR(
        Box::new(Derivation::new(Rule::ForallL {
            premise: Box::new(Derivation::new(Rule::Id(py))),
            principal: Formula::forall(x.clone(), px),
            witness: y.term(),
        })),
        y.clone(),
    )))))
}

#[test]
fn golden_extraction_document() {
    let expected = "(extraction (modality dia) (conclusion (formula (lolli (forall (x i) \
                    (atom P x)) (forall (y i) (atom P y)))) (witness-terms (lam (_e1 i) _e1)) \
                    (challenge-vars (_e1 i))) (verifying (seq (hyps) (lolli (atom P _e1) \
                    (atom P _e1)))))";
    for modality in ["dia", "dn"] {
        let r = extract(
            &shift_proof(),
            modality_by_name(modality).unwrap(),
            SystemId::Ill,
        )
        .unwrap();
        let doc = surface::ExtractionDoc::from(&r);
        assert_eq!(
            surface::extraction_to_sexpr(&doc).to_string(),
            expected.replace("dia", modality)
        );
    }
}

#[test]
fn golden_implication_interpretation() {
    // The challenge map takes the premise witnesses first, then the
    // conclusion challenges.
    let f = surface::parse_formula(
        "(lolli (forall (x i) (exists (y i) (atom P x y))) (exists (u i) (atom Q u)))",
    )
    .unwrap();
    let i = interpret(&f, modality_by_name("dia").unwrap(), false).unwrap();
    let expected = "(interpreted (witnesses (_f4 (-> (-> i i) i)) (_g5 (-> (-> i i) i))) \
                    (challenges (_f2 (-> i i))) (matrix (lolli (atom P (app (: _f4 (-> (-> i \
                    i) i)) (: _f2 (-> i i))) (app (: _f2 (-> i i)) (app (: _f4 (-> (-> i i) \
                    i)) (: _f2 (-> i i))))) (atom Q (app (: _g5 (-> (-> i i) i)) (: _f2 (-> \
                    i i)))))))";
    assert_eq!(surface::interpreted_to_sexpr(&i).to_string(), expected);
}

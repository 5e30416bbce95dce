//! The pluggable exponential modalities.
//!
//! Each modality fixes how the challenge side of `!A` bounds the challenges
//! of `A`: the realizability instance quantifies over the whole type, the
//! finite-set instance bounds challenges by finite sets, and the case-split
//! instance keeps single challenges and pays for contraction with
//! decidability.  Instances are registered by name and selected at runtime.

use crate::formula::Formula;
use crate::subst::{subst_from, subst_term, FreshSupply};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

/// Strategy interface for interpreting the exponential.
///
/// `bounded_forall` renders the guarded quantifier over a challenge tuple;
/// `single`, `join` and `compose` build the challenge terms used by the
/// dereliction, contraction and promotion steps of extraction.
pub trait Modality: Sync {
    fn name(&self) -> &'static str;

    /// Challenge tuple types of `!A`, given the challenge tuple types of `A`.
    fn bound_types(&self, challenge: &[FiniteType]) -> Vec<FiniteType>;

    /// The formula "for all `challenges` within `bounds`, `matrix`".
    fn bounded_forall(&self, challenges: &[TypedVar], bounds: &[Term], matrix: Formula) -> Formula;

    /// Lifts the challenge terms of a plain hypothesis to the challenge
    /// terms of its banged form.  `types` are the plain challenge types.
    fn single(&self, terms: &[Term], types: &[FiniteType]) -> Vec<Term>;

    /// Merges two challenge-term tuples of a banged hypothesis.  `deciding`
    /// is the hypothesis matrix instantiated at `left`, used by the
    /// case-split instance; `types` are the bound tuple types.
    fn join(
        &self,
        deciding: &Formula,
        left: &[Term],
        right: &[Term],
        types: &[FiniteType],
    ) -> Vec<Term>;

    /// Challenge terms for a promoted context hypothesis: `bodies` are the
    /// old challenge terms (typed at `body_types`), possibly mentioning the
    /// `inner` challenge variables; `outer` are the new bound terms, one per
    /// inner variable.
    fn compose(
        &self,
        inner: &[TypedVar],
        bodies: &[Term],
        body_types: &[FiniteType],
        outer: &[Term],
    ) -> Vec<Term>;
}

/// Kreisel-style instance: the bound is the whole type, so banged
/// hypotheses carry no challenges at all.
pub struct ModifiedRealizability;

impl Modality for ModifiedRealizability {
    fn name(&self) -> &'static str {
        "mr"
    }

    fn bound_types(&self, _challenge: &[FiniteType]) -> Vec<FiniteType> {
        Vec::new()
    }

    fn bounded_forall(&self, challenges: &[TypedVar], bounds: &[Term], matrix: Formula) -> Formula {
        debug_assert!(bounds.is_empty());
        Formula::forall_many(challenges, matrix)
    }

    fn single(&self, _terms: &[Term], _types: &[FiniteType]) -> Vec<Term> {
        Vec::new()
    }

    fn join(
        &self,
        _deciding: &Formula,
        _left: &[Term],
        _right: &[Term],
        _types: &[FiniteType],
    ) -> Vec<Term> {
        Vec::new()
    }

    fn compose(
        &self,
        _inner: &[TypedVar],
        bodies: &[Term],
        _body_types: &[FiniteType],
        _outer: &[Term],
    ) -> Vec<Term> {
        debug_assert!(bodies.is_empty());
        Vec::new()
    }
}

/// Finite-set instance: challenges of `!A` are nonempty finite sets and the
/// guarded quantifier relativizes to membership.
pub struct DillerNahm;

impl Modality for DillerNahm {
    fn name(&self) -> &'static str {
        "dn"
    }

    fn bound_types(&self, challenge: &[FiniteType]) -> Vec<FiniteType> {
        challenge
            .iter()
            .map(|t| FiniteType::fin_set(t.clone()))
            .collect()
    }

    fn bounded_forall(&self, challenges: &[TypedVar], bounds: &[Term], matrix: Formula) -> Formula {
        challenges
            .iter()
            .zip(bounds)
            .rev()
            .fold(matrix, |acc, (y, t)| {
                Formula::forall(
                    y.clone(),
                    Formula::lolli(Formula::bang(Formula::Member(y.term(), t.clone())), acc),
                )
            })
    }

    fn single(&self, terms: &[Term], types: &[FiniteType]) -> Vec<Term> {
        terms
            .iter()
            .zip(types)
            .map(|(t, ty)| Term::app(Term::single_const(ty), t.clone()))
            .collect()
    }

    fn join(
        &self,
        _deciding: &Formula,
        left: &[Term],
        right: &[Term],
        types: &[FiniteType],
    ) -> Vec<Term> {
        left.iter()
            .zip(right)
            .zip(types)
            .map(|((l, r), ty)| {
                let elem = match ty {
                    FiniteType::FinSet(e) => (**e).clone(),
                    other => panic!("finite-set join at non-set type {other}"),
                };
                Term::apps(Term::join_const(&elem), [l.clone(), r.clone()])
            })
            .collect()
    }

    fn compose(
        &self,
        inner: &[TypedVar],
        bodies: &[Term],
        body_types: &[FiniteType],
        outer: &[Term],
    ) -> Vec<Term> {
        bodies
            .iter()
            .zip(body_types)
            .map(|(body, bty)| {
                let elem = match bty {
                    FiniteType::FinSet(e) => (**e).clone(),
                    other => panic!("finite-set compose at non-set type {other}"),
                };
                inner
                    .iter()
                    .zip(outer)
                    .rev()
                    .fold(body.clone(), |acc, (y, bound)| {
                        Term::apps(
                            Term::comp_const(&y.ty, &elem),
                            [Term::lam(y.clone(), acc), bound.clone()],
                        )
                    })
            })
            .collect()
    }
}

/// Single-challenge instance: the bound is one element, substituted
/// directly; contraction decides the matrix with a case split.
pub struct Dialectica;

impl Modality for Dialectica {
    fn name(&self) -> &'static str {
        "dia"
    }

    fn bound_types(&self, challenge: &[FiniteType]) -> Vec<FiniteType> {
        challenge.to_vec()
    }

    fn bounded_forall(&self, challenges: &[TypedVar], bounds: &[Term], matrix: Formula) -> Formula {
        crate::subst::subst_formula(&matrix, &subst_from(challenges, bounds))
    }

    fn single(&self, terms: &[Term], _types: &[FiniteType]) -> Vec<Term> {
        terms.to_vec()
    }

    fn join(
        &self,
        deciding: &Formula,
        left: &[Term],
        right: &[Term],
        _types: &[FiniteType],
    ) -> Vec<Term> {
        left.iter()
            .zip(right)
            .map(|(l, r)| Term::dec_cases(deciding.clone(), l.clone(), r.clone()))
            .collect()
    }

    fn compose(
        &self,
        inner: &[TypedVar],
        bodies: &[Term],
        _body_types: &[FiniteType],
        outer: &[Term],
    ) -> Vec<Term> {
        let s = crate::subst::subst_from(inner, outer);
        bodies.iter().map(|b| subst_term(b, &s)).collect()
    }
}

static MR: ModifiedRealizability = ModifiedRealizability;
static DN: DillerNahm = DillerNahm;
static DIA: Dialectica = Dialectica;

/// Looks a modality up by its registered name (`mr`, `dn`, `dia`).
pub fn modality_by_name(name: &str) -> Option<&'static dyn Modality> {
    match name {
        "mr" => Some(&MR),
        "dn" => Some(&DN),
        "dia" => Some(&DIA),
        _ => None,
    }
}

pub fn all_modalities() -> [&'static dyn Modality; 3] {
    [&MR, &DN, &DIA]
}

/// Renders the three soundness conditions a modality must satisfy, over a
/// matrix `a` with designated challenge variables `ys`.
///
/// The first condition relates the singleton bound to plain truth, the
/// second splits a merged bound into both halves, and the third unfolds a
/// composed bound into nested guarded quantifiers.
pub fn condition_formulas(
    m: &dyn Modality,
    ys: &[TypedVar],
    a: &Formula,
    supply: &mut FreshSupply,
) -> [Formula; 3] {
    let y_tys: Vec<FiniteType> = ys.iter().map(|v| v.ty.clone()).collect();
    let bound_tys = m.bound_types(&y_tys);
    let terms = |vs: &[TypedVar]| vs.iter().map(TypedVar::term).collect::<Vec<_>>();

    // Condition 1: ! (forall ys <= single(zs)) A  -o  A[zs].
    let zs = supply.fresh_many("z", &y_tys);
    let singles = m.single(&terms(&zs), &y_tys);
    let a1 = Formula::lolli(
        Formula::bang(m.bounded_forall(ys, &singles, a.clone())),
        crate::subst::subst_formula(a, &subst_from(ys, &terms(&zs))),
    );

    // Condition 2: ! (forall ys <= join(b1, b2)) A  -o
    //              ! (forall ys <= b1) A  (x)  ! (forall ys <= b2) A.
    let b1 = supply.fresh_many("j", &bound_tys);
    let b2 = supply.fresh_many("k", &bound_tys);
    // Only the case-split instance reads the deciding matrix, and there the
    // bound tuple has the challenge arity.
    let deciding = if bound_tys.len() == ys.len() {
        crate::subst::subst_formula(a, &subst_from(ys, &terms(&b1)))
    } else {
        a.clone()
    };
    let joined = m.join(&deciding, &terms(&b1), &terms(&b2), &bound_tys);
    let a2 = Formula::lolli(
        Formula::bang(m.bounded_forall(ys, &joined, a.clone())),
        Formula::tensor(
            Formula::bang(m.bounded_forall(ys, &terms(&b1), a.clone())),
            Formula::bang(m.bounded_forall(ys, &terms(&b2), a.clone())),
        ),
    );

    // Condition 3: ! (forall ys <= compose(fs, zs)) A  -o
    //              ! (forall xs <= zs) ! (forall ys <= fs xs) A.
    let xs = supply.fresh_many("x", &y_tys);
    let zbs = supply.fresh_many("c", &bound_tys);
    let fs: Vec<TypedVar> = bound_tys
        .iter()
        .map(|bt| supply.fresh("f", FiniteType::arrows(&y_tys, bt.clone())))
        .collect();
    let bodies: Vec<Term> = fs
        .iter()
        .map(|f| Term::apps(f.term(), terms(&xs)))
        .collect();
    let composed = m.compose(&xs, &bodies, &bound_tys, &terms(&zbs));
    let a3 = Formula::lolli(
        Formula::bang(m.bounded_forall(ys, &composed, a.clone())),
        Formula::bang(m.bounded_forall(
            &xs,
            &terms(&zbs),
            Formula::bang(m.bounded_forall(ys, &bodies, a.clone())),
        )),
    );

    [a1, a2, a3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FiniteType as Ty;

    fn y() -> TypedVar {
        TypedVar::new("y", Ty::Base)
    }

    fn p_of_y() -> Formula {
        Formula::atom_app("P", vec![y().term()])
    }

    #[test]
    fn registry_resolves_names() {
        for name in ["mr", "dn", "dia"] {
            let m = modality_by_name(name).unwrap();
            assert_eq!(m.name(), name);
        }
        assert!(modality_by_name("other").is_none());
    }

    #[test]
    fn mr_bounds_vanish() {
        let m = modality_by_name("mr").unwrap();
        assert!(m.bound_types(&[Ty::Base, Ty::Bool]).is_empty());
        let f = m.bounded_forall(&[y()], &[], p_of_y());
        assert_eq!(f, Formula::forall(y(), p_of_y()));
    }

    #[test]
    fn dn_bounded_forall_guards_membership() {
        let m = modality_by_name("dn").unwrap();
        let bound = Term::var("a", Ty::fin_set(Ty::Base));
        let f = m.bounded_forall(&[y()], &[bound.clone()], p_of_y());
        let expected = Formula::forall(
            y(),
            Formula::lolli(Formula::bang(Formula::Member(y().term(), bound)), p_of_y()),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn dia_bounded_forall_substitutes() {
        let m = modality_by_name("dia").unwrap();
        let f = m.bounded_forall(&[y()], &[Term::elem()], p_of_y());
        assert_eq!(f, Formula::atom_app("P", vec![Term::elem()]));
    }

    #[test]
    fn dia_join_builds_case_split() {
        let m = modality_by_name("dia").unwrap();
        let deciding = Formula::atom_app("P", vec![Term::var("l", Ty::Base)]);
        let joined = m.join(
            &deciding,
            &[Term::var("l", Ty::Base)],
            &[Term::var("r", Ty::Base)],
            &[Ty::Base],
        );
        assert_eq!(
            joined,
            vec![Term::dec_cases(
                deciding,
                Term::var("l", Ty::Base),
                Term::var("r", Ty::Base)
            )]
        );
    }

    #[test]
    fn dn_single_wraps_in_singleton() {
        let m = modality_by_name("dn").unwrap();
        let s = m.single(&[Term::elem()], &[Ty::Base]);
        assert_eq!(
            s,
            vec![Term::app(Term::single_const(&Ty::Base), Term::elem())]
        );
    }
}

//! The compositional functional interpretation.
//!
//! Every linear formula `A` is assigned a witness tuple, a challenge tuple
//! and a matrix formula over them; the exponential clause is delegated to
//! the selected [`Modality`].  Under the restricted system the additive
//! conjunction drops its boolean challenge (`simplified_with`).
//!
//! The clause builders are public to the crate so extraction composes
//! interpreted formulas with exactly the same conventions (witness order,
//! argument order `witnesses` then `challenges`, empty-tuple elision).

use crate::formula::{diamond, Formula};
use crate::modality::Modality;
use crate::subst::{subst_formula, subst_formula1, FreshSupply, Subst};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

/// The interpreted form of a formula: `exists witnesses, forall challenges,
/// matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretedFormula {
    pub witnesses: Vec<TypedVar>,
    pub challenges: Vec<TypedVar>,
    pub matrix: Formula,
}

impl InterpretedFormula {
    pub fn atomic(matrix: Formula) -> InterpretedFormula {
        InterpretedFormula {
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

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpretError {
    #[error("formula contains source-only node `{0}`; interpretation applies to linear formulas")]
    SystemViolation(String),
}

fn vars_as_terms(vs: &[TypedVar]) -> Vec<Term> {
    vs.iter().map(TypedVar::term).collect()
}

pub(crate) fn clause_tensor(a: InterpretedFormula, b: InterpretedFormula) -> InterpretedFormula {
    let mut witnesses = a.witnesses;
    witnesses.extend(b.witnesses);
    let mut challenges = a.challenges;
    challenges.extend(b.challenges);
    InterpretedFormula {
        witnesses,
        challenges,
        matrix: Formula::tensor(a.matrix, b.matrix),
    }
}

pub(crate) fn clause_with_full(
    a: InterpretedFormula,
    b: InterpretedFormula,
    z: TypedVar,
) -> InterpretedFormula {
    let mut witnesses = a.witnesses;
    witnesses.extend(b.witnesses);
    let mut challenges = a.challenges;
    challenges.extend(b.challenges);
    challenges.push(z.clone());
    InterpretedFormula {
        witnesses,
        challenges,
        matrix: diamond(z.term(), a.matrix, b.matrix),
    }
}

pub(crate) fn clause_with_simplified(
    a: InterpretedFormula,
    b: InterpretedFormula,
) -> InterpretedFormula {
    let mut witnesses = a.witnesses;
    witnesses.extend(b.witnesses);
    let mut challenges = a.challenges;
    challenges.extend(b.challenges);
    InterpretedFormula {
        witnesses,
        challenges,
        matrix: Formula::with(a.matrix, b.matrix),
    }
}

pub(crate) fn clause_plus(
    a: InterpretedFormula,
    b: InterpretedFormula,
    z: TypedVar,
) -> InterpretedFormula {
    let mut witnesses = a.witnesses;
    witnesses.extend(b.witnesses);
    witnesses.push(z.clone());
    let mut challenges = a.challenges;
    challenges.extend(b.challenges);
    InterpretedFormula {
        witnesses,
        challenges,
        matrix: diamond(z.term(), a.matrix, b.matrix),
    }
}

/// Witness variables introduced by the implication clause: challenge maps
/// `fs` (one per challenge of `a`, taking `a`'s witnesses then `b`'s
/// challenges) and witness maps `gs` (one per witness of `b`, taking `a`'s
/// witnesses).
pub(crate) struct LolliParts {
    pub interp: InterpretedFormula,
    pub fs: Vec<TypedVar>,
    pub gs: Vec<TypedVar>,
}

pub(crate) fn clause_lolli(
    a: InterpretedFormula,
    b: InterpretedFormula,
    supply: &mut FreshSupply,
) -> LolliParts {
    let a_wit_tys = a.witness_types();
    let b_chal_tys = b.challenge_types();
    let mut arg_tys = a_wit_tys.clone();
    arg_tys.extend(b_chal_tys);

    let fs: Vec<TypedVar> = a
        .challenges
        .iter()
        .map(|y| supply.fresh("f", FiniteType::arrows(&arg_tys, y.ty.clone())))
        .collect();
    let gs: Vec<TypedVar> = b
        .witnesses
        .iter()
        .map(|v| supply.fresh("g", FiniteType::arrows(&a_wit_tys, v.ty.clone())))
        .collect();

    let mut args = vars_as_terms(&a.witnesses);
    args.extend(vars_as_terms(&b.challenges));
    let mut left_s = Subst::new();
    for (y, f) in a.challenges.iter().zip(&fs) {
        left_s.insert(y.name.clone(), Term::apps(f.term(), args.iter().cloned()));
    }
    let mut right_s = Subst::new();
    for (v, g) in b.witnesses.iter().zip(&gs) {
        right_s.insert(
            v.name.clone(),
            Term::apps(g.term(), vars_as_terms(&a.witnesses)),
        );
    }

    let matrix = Formula::lolli(
        subst_formula(&a.matrix, &left_s),
        subst_formula(&b.matrix, &right_s),
    );
    let mut witnesses = fs.clone();
    witnesses.extend(gs.clone());
    let mut challenges = a.witnesses;
    challenges.extend(b.challenges);
    LolliParts {
        interp: InterpretedFormula {
            witnesses,
            challenges,
            matrix,
        },
        fs,
        gs,
    }
}

pub(crate) fn clause_exists(a: InterpretedFormula, v: TypedVar) -> InterpretedFormula {
    let mut witnesses = a.witnesses;
    witnesses.push(v);
    InterpretedFormula {
        witnesses,
        challenges: a.challenges,
        matrix: a.matrix,
    }
}

/// Universal clause: lifts each witness to a function of the quantified
/// variable, which joins the challenge tuple.
pub(crate) fn clause_forall(
    a: InterpretedFormula,
    v: TypedVar,
    supply: &mut FreshSupply,
) -> (InterpretedFormula, Vec<TypedVar>) {
    let fs: Vec<TypedVar> = a
        .witnesses
        .iter()
        .map(|x| supply.fresh("f", FiniteType::arrow(v.ty.clone(), x.ty.clone())))
        .collect();
    let mut s = Subst::new();
    for (x, f) in a.witnesses.iter().zip(&fs) {
        s.insert(x.name.clone(), Term::app(f.term(), v.term()));
    }
    let matrix = subst_formula(&a.matrix, &s);
    let mut challenges = a.challenges;
    challenges.push(v);
    (
        InterpretedFormula {
            witnesses: fs.clone(),
            challenges,
            matrix,
        },
        fs,
    )
}

/// Exponential clause: the challenge tuple is bound-lifted and the matrix
/// guarded, as the modality prescribes.
pub(crate) fn clause_bang(
    a: InterpretedFormula,
    m: &dyn Modality,
    supply: &mut FreshSupply,
) -> InterpretedFormula {
    let bound_tys = m.bound_types(&a.challenge_types());
    let bounds = supply.fresh_many("a", &bound_tys);
    let matrix = Formula::bang(m.bounded_forall(&a.challenges, &vars_as_terms(&bounds), a.matrix));
    InterpretedFormula {
        witnesses: a.witnesses,
        challenges: bounds,
        matrix,
    }
}

/// Interprets `a` with an explicit fresh supply; extraction threads one
/// supply through a whole derivation so all tuples stay distinct.
pub fn interpret_with(
    a: &Formula,
    m: &dyn Modality,
    simplified_with: bool,
    supply: &mut FreshSupply,
) -> Result<InterpretedFormula, InterpretError> {
    match a {
        Formula::Atom(_, _) | Formula::Zero | Formula::BoolEq(_, _) | Formula::Member(_, _) => {
            Ok(InterpretedFormula::atomic(a.clone()))
        }
        Formula::Tensor(x, y) => Ok(clause_tensor(
            interpret_with(x, m, simplified_with, supply)?,
            interpret_with(y, m, simplified_with, supply)?,
        )),
        Formula::With(x, y) => {
            let ix = interpret_with(x, m, simplified_with, supply)?;
            let iy = interpret_with(y, m, simplified_with, supply)?;
            if simplified_with {
                Ok(clause_with_simplified(ix, iy))
            } else {
                let z = supply.fresh("z", FiniteType::Bool);
                Ok(clause_with_full(ix, iy, z))
            }
        }
        Formula::Plus(x, y) => {
            let ix = interpret_with(x, m, simplified_with, supply)?;
            let iy = interpret_with(y, m, simplified_with, supply)?;
            let z = supply.fresh("z", FiniteType::Bool);
            Ok(clause_plus(ix, iy, z))
        }
        Formula::Lolli(x, y) => {
            let ix = interpret_with(x, m, simplified_with, supply)?;
            let iy = interpret_with(y, m, simplified_with, supply)?;
            Ok(clause_lolli(ix, iy, supply).interp)
        }
        Formula::Bang(x) => {
            let ix = interpret_with(x, m, simplified_with, supply)?;
            Ok(clause_bang(ix, m, supply))
        }
        Formula::Forall(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let ib = interpret_with(&renamed, m, simplified_with, supply)?;
            Ok(clause_forall(ib, fresh, supply).0)
        }
        Formula::Exists(v, body) => {
            let fresh = supply.fresh("q", v.ty.clone());
            let renamed = subst_formula1(body, v, &fresh.term());
            let ib = interpret_with(&renamed, m, simplified_with, supply)?;
            Ok(clause_exists(ib, fresh))
        }
        Formula::And(_, _) | Formula::Or(_, _) | Formula::Implies(_, _) | Formula::Bot => {
            Err(InterpretError::SystemViolation(
                match a {
                    Formula::And(_, _) => "and",
                    Formula::Or(_, _) => "or",
                    Formula::Implies(_, _) => "implies",
                    _ => "bot",
                }
                .to_string(),
            ))
        }
    }
}

/// Interprets `a`, drawing fresh tuple variables from a supply that avoids
/// the free variables of `a`.
pub fn interpret(
    a: &Formula,
    m: &dyn Modality,
    simplified_with: bool,
) -> Result<InterpretedFormula, InterpretError> {
    let mut supply = FreshSupply::avoiding(crate::subst::formula_free_var_names(a));
    interpret_with(a, m, simplified_with, &mut supply)
}

/// Quantifies the interpreted form back into a single formula:
/// `exists witnesses forall challenges matrix`, eliding empty prefixes.
pub fn characterization_formula(a: &Formula, m: &dyn Modality) -> Result<Formula, InterpretError> {
    let i = interpret(a, m, false)?;
    Ok(Formula::exists_many(
        &i.witnesses,
        Formula::forall_many(&i.challenges, i.matrix),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modality::modality_by_name;
    use crate::subst::alpha_equal_formulas;
    use crate::types::FiniteType as Ty;

    fn mr() -> &'static dyn Modality {
        modality_by_name("mr").unwrap()
    }

    fn dia() -> &'static dyn Modality {
        modality_by_name("dia").unwrap()
    }

    #[test]
    fn atomic_formulas_are_unchanged() {
        let p = Formula::atom("P");
        let i = interpret(&p, mr(), false).unwrap();
        assert!(i.witnesses.is_empty());
        assert!(i.challenges.is_empty());
        assert_eq!(i.matrix, p);
    }

    #[test]
    fn forall_exists_yields_choice_function() {
        // forall z exists u P(z, u)  ~>  witness f : i -> i, challenge z,
        // matrix P(z, f z).
        let z = TypedVar::new("z", Ty::Base);
        let u = TypedVar::new("u", Ty::Base);
        let a = Formula::forall(
            z.clone(),
            Formula::exists(u.clone(), Formula::atom_app("P", vec![z.term(), u.term()])),
        );
        let i = interpret(&a, dia(), false).unwrap();
        assert_eq!(i.witnesses.len(), 1);
        assert_eq!(i.witnesses[0].ty, Ty::arrow(Ty::Base, Ty::Base));
        assert_eq!(i.challenges.len(), 1);
        assert_eq!(i.challenges[0].ty, Ty::Base);
        let f = &i.witnesses[0];
        let zc = &i.challenges[0];
        let expected = Formula::atom_app("P", vec![zc.term(), Term::app(f.term(), zc.term())]);
        assert_eq!(i.matrix, expected);
    }

    #[test]
    fn bang_under_mr_drops_challenges() {
        let p = Formula::atom("P");
        let i = interpret(&Formula::bang(p.clone()), mr(), false).unwrap();
        assert!(i.witnesses.is_empty());
        assert!(i.challenges.is_empty());
        assert_eq!(i.matrix, Formula::bang(p));
    }

    #[test]
    fn plus_adds_boolean_witness_and_guarded_matrix() {
        let a = Formula::plus(Formula::atom("P"), Formula::atom("Q"));
        let i = interpret(&a, mr(), false).unwrap();
        assert_eq!(i.witnesses.len(), 1);
        assert_eq!(i.witnesses[0].ty, Ty::Bool);
        assert!(i.challenges.is_empty());
        let z = &i.witnesses[0];
        assert_eq!(
            i.matrix,
            diamond(z.term(), Formula::atom("P"), Formula::atom("Q"))
        );
    }

    #[test]
    fn simplified_with_matches_full_on_with_free_formulas() {
        let a = Formula::lolli(
            Formula::tensor(Formula::atom("P"), Formula::atom("Q")),
            Formula::plus(Formula::atom("P"), Formula::atom("Q")),
        );
        let full = interpret(&a, dia(), false).unwrap();
        let simp = interpret(&a, dia(), true).unwrap();
        assert_eq!(full, simp);
    }

    #[test]
    fn characterization_of_forall_exists() {
        let z = TypedVar::new("z", Ty::Base);
        let u = TypedVar::new("u", Ty::Base);
        let a = Formula::forall(
            z.clone(),
            Formula::exists(u.clone(), Formula::atom_app("P", vec![z.term(), u.term()])),
        );
        let c = characterization_formula(&a, dia()).unwrap();
        // exists f forall z P(z, f z)
        let f = TypedVar::new("f", Ty::arrow(Ty::Base, Ty::Base));
        let expected = Formula::exists(
            f.clone(),
            Formula::forall(
                z.clone(),
                Formula::atom_app("P", vec![z.term(), Term::app(f.term(), z.term())]),
            ),
        );
        assert!(alpha_equal_formulas(&c, &expected), "got {c:?}");
    }

    #[test]
    fn atomic_characterization_elides_prefixes() {
        let p = Formula::atom("P");
        assert_eq!(characterization_formula(&p, mr()).unwrap(), p);
        let t = Formula::tensor(Formula::atom("P"), Formula::atom("Q"));
        assert_eq!(characterization_formula(&t, mr()).unwrap(), t);
    }

    #[test]
    fn source_nodes_are_rejected() {
        let a = Formula::and(Formula::atom("P"), Formula::atom("Q"));
        assert!(matches!(
            interpret(&a, mr(), false),
            Err(InterpretError::SystemViolation(_))
        ));
    }
}

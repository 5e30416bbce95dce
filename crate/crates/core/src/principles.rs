//! Schematic characterization and embedding principles.
//!
//! Instances are data (a schema kind plus formula/variable slots), so the
//! realizer machinery can treat them generically.  Slot classes are checked
//! semantically: a slot is self-witnessing when its interpretation carries
//! no tuples at all, and purely universal when it carries no witnesses.

use crate::formula::Formula;
use crate::interp::interpret;
use crate::modality::modality_by_name;
use crate::subst::{formula_free_var_names, subst_formula, FreshSupply, Subst};
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipleKind {
    Choice,
    Markov,
    Independence,
    Extra,
    BangPlus,
    BangExists,
}

impl PrincipleKind {
    pub fn name(self) -> &'static str {
        match self {
            PrincipleKind::Choice => "choice",
            PrincipleKind::Markov => "markov",
            PrincipleKind::Independence => "independence",
            PrincipleKind::Extra => "extra",
            PrincipleKind::BangPlus => "bang-plus",
            PrincipleKind::BangExists => "bang-exists",
        }
    }
}

/// A schema instance: the kind together with its slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrincipleInstance {
    /// `forall xs exists ys A  -o  exists fs forall xs A[fs xs / ys]`
    /// for purely universal `A`.
    Choice {
        xs: Vec<TypedVar>,
        ys: Vec<TypedVar>,
        body: Formula,
    },
    /// `(forall xs A -o B) -o exists xs (A -o B)` for self-witnessing
    /// `A`, `B` with `xs` not free in `B`.
    Markov {
        xs: Vec<TypedVar>,
        premise: Formula,
        conclusion: Formula,
    },
    /// `(A -o exists ys B) -o exists ys (A -o B)` for purely universal
    /// `A`, `B` with `ys` not free in `A`.
    Independence {
        ys: Vec<TypedVar>,
        premise: Formula,
        conclusion: Formula,
    },
    /// `forall xs vs (A (x) B) -o (forall xs A (x) forall vs B)` for
    /// self-witnessing `A`, `B` with `vs` not free in `A`.
    Extra {
        xs: Vec<TypedVar>,
        vs: Vec<TypedVar>,
        left: Formula,
        right: Formula,
    },
    /// `!(A (+) B) -o !A (+) !B`.
    BangPlus { left: Formula, right: Formula },
    /// `!(exists x A) -o exists x !A`.
    BangExists { var: TypedVar, body: Formula },
}

impl PrincipleInstance {
    pub fn kind(&self) -> PrincipleKind {
        match self {
            PrincipleInstance::Choice { .. } => PrincipleKind::Choice,
            PrincipleInstance::Markov { .. } => PrincipleKind::Markov,
            PrincipleInstance::Independence { .. } => PrincipleKind::Independence,
            PrincipleInstance::Extra { .. } => PrincipleKind::Extra,
            PrincipleInstance::BangPlus { .. } => PrincipleKind::BangPlus,
            PrincipleInstance::BangExists { .. } => PrincipleKind::BangExists,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrincipleError {
    #[error("slot class violated: {0}")]
    SlotClassViolation(String),
    #[error("unsupported principle instance: {0}")]
    UnsupportedInstance(String),
}

/// Self-witnessing: the interpretation asks for no witnesses and poses no
/// challenges.
fn is_self_witnessing(f: &Formula) -> bool {
    let probe = modality_by_name("dia").expect("registered");
    match interpret(f, probe, false) {
        Ok(i) => i.witnesses.is_empty() && i.challenges.is_empty(),
        Err(_) => false,
    }
}

/// Purely universal: the interpretation asks for no witnesses.
fn is_purely_universal(f: &Formula) -> bool {
    let probe = modality_by_name("dia").expect("registered");
    match interpret(f, probe, false) {
        Ok(i) => i.witnesses.is_empty(),
        Err(_) => false,
    }
}

fn not_free_in(vars: &[TypedVar], f: &Formula, slot: &str) -> Result<(), PrincipleError> {
    let free = formula_free_var_names(f);
    for v in vars {
        if free.contains(&v.name) {
            return Err(PrincipleError::SlotClassViolation(format!(
                "variable `{}` must not occur in {slot}",
                v.name
            )));
        }
    }
    Ok(())
}

fn require(cond: bool, msg: &str) -> Result<(), PrincipleError> {
    if cond {
        Ok(())
    } else {
        Err(PrincipleError::SlotClassViolation(msg.to_string()))
    }
}

/// Renders the schema with its slots substituted.
pub fn principle_formula(p: &PrincipleInstance) -> Result<Formula, PrincipleError> {
    match p {
        PrincipleInstance::Choice { xs, ys, body } => {
            require(
                is_purely_universal(body),
                "choice body must be purely universal",
            )?;
            let mut supply = FreshSupply::avoiding(formula_free_var_names(body));
            let x_tys: Vec<FiniteType> = xs.iter().map(|v| v.ty.clone()).collect();
            let fs: Vec<TypedVar> = ys
                .iter()
                .map(|y| supply.fresh("f", FiniteType::arrows(&x_tys, y.ty.clone())))
                .collect();
            let mut s = Subst::new();
            for (y, f) in ys.iter().zip(&fs) {
                s.insert(
                    y.name.clone(),
                    Term::apps(f.term(), xs.iter().map(TypedVar::term)),
                );
            }
            let instantiated = subst_formula(body, &s);
            Ok(Formula::lolli(
                Formula::forall_many(xs, Formula::exists_many(ys, body.clone())),
                Formula::exists_many(&fs, Formula::forall_many(xs, instantiated)),
            ))
        }
        PrincipleInstance::Markov {
            xs,
            premise,
            conclusion,
        } => {
            require(
                is_self_witnessing(premise),
                "markov premise must be self-witnessing",
            )?;
            require(
                is_self_witnessing(conclusion),
                "markov conclusion must be self-witnessing",
            )?;
            not_free_in(xs, conclusion, "the markov conclusion")?;
            Ok(Formula::lolli(
                Formula::lolli(
                    Formula::forall_many(xs, premise.clone()),
                    conclusion.clone(),
                ),
                Formula::exists_many(xs, Formula::lolli(premise.clone(), conclusion.clone())),
            ))
        }
        PrincipleInstance::Independence {
            ys,
            premise,
            conclusion,
        } => {
            require(
                is_purely_universal(premise),
                "independence premise must be purely universal",
            )?;
            require(
                is_purely_universal(conclusion),
                "independence conclusion must be purely universal",
            )?;
            not_free_in(ys, premise, "the independence premise")?;
            Ok(Formula::lolli(
                Formula::lolli(
                    premise.clone(),
                    Formula::exists_many(ys, conclusion.clone()),
                ),
                Formula::exists_many(ys, Formula::lolli(premise.clone(), conclusion.clone())),
            ))
        }
        PrincipleInstance::Extra {
            xs,
            vs,
            left,
            right,
        } => {
            require(
                is_self_witnessing(left),
                "extra left slot must be self-witnessing",
            )?;
            require(
                is_self_witnessing(right),
                "extra right slot must be self-witnessing",
            )?;
            not_free_in(vs, left, "the extra principle's left slot")?;
            let mut all = xs.clone();
            all.extend(vs.iter().cloned());
            Ok(Formula::lolli(
                Formula::forall_many(&all, Formula::tensor(left.clone(), right.clone())),
                Formula::tensor(
                    Formula::forall_many(xs, left.clone()),
                    Formula::forall_many(vs, right.clone()),
                ),
            ))
        }
        PrincipleInstance::BangPlus { left, right } => Ok(Formula::lolli(
            Formula::bang(Formula::plus(left.clone(), right.clone())),
            Formula::plus(Formula::bang(left.clone()), Formula::bang(right.clone())),
        )),
        PrincipleInstance::BangExists { var, body } => Ok(Formula::lolli(
            Formula::bang(Formula::exists(var.clone(), body.clone())),
            Formula::exists(var.clone(), Formula::bang(body.clone())),
        )),
    }
}

/// Canonical small instances of each principle, used by the command-line
/// front end and the test corpus.
pub fn default_instances() -> Vec<PrincipleInstance> {
    let x = TypedVar::new("x", FiniteType::Base);
    let y = TypedVar::new("y", FiniteType::Base);
    let v = TypedVar::new("v", FiniteType::Base);
    let z = TypedVar::new("z", FiniteType::Base);
    vec![
        PrincipleInstance::Choice {
            xs: vec![x.clone()],
            ys: vec![y.clone()],
            body: Formula::forall(z.clone(), Formula::atom_app("P", vec![y.term(), z.term()])),
        },
        PrincipleInstance::Markov {
            xs: vec![x.clone()],
            premise: Formula::atom_app("P", vec![x.term(), x.term()]),
            conclusion: Formula::atom("Q"),
        },
        PrincipleInstance::Independence {
            ys: vec![y.clone()],
            premise: Formula::forall(z.clone(), Formula::atom_app("P", vec![z.term(), z.term()])),
            conclusion: Formula::forall(
                z.clone(),
                Formula::atom_app("P", vec![y.term(), z.term()]),
            ),
        },
        PrincipleInstance::Extra {
            xs: vec![x.clone()],
            vs: vec![v.clone()],
            left: Formula::atom_app("P", vec![x.term(), x.term()]),
            right: Formula::atom_app("P", vec![v.term(), v.term()]),
        },
        PrincipleInstance::BangPlus {
            left: Formula::atom("Q"),
            right: Formula::atom("R"),
        },
        PrincipleInstance::BangExists {
            var: x.clone(),
            body: Formula::atom_app("P", vec![x.term(), x.term()]),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_equal_formulas;
    use crate::types::FiniteType as Ty;

    #[test]
    fn choice_schema_renders_per_display() {
        // forall x exists y forall z P(y,z) -o exists f forall x forall z P(f x, z)
        let x = TypedVar::new("x", Ty::Base);
        let y = TypedVar::new("y", Ty::Base);
        let z = TypedVar::new("z", Ty::Base);
        let p = PrincipleInstance::Choice {
            xs: vec![x.clone()],
            ys: vec![y.clone()],
            body: Formula::forall(z.clone(), Formula::atom_app("P", vec![y.term(), z.term()])),
        };
        let f = TypedVar::new("f", Ty::arrow(Ty::Base, Ty::Base));
        let expected = Formula::lolli(
            Formula::forall(
                x.clone(),
                Formula::exists(
                    y.clone(),
                    Formula::forall(z.clone(), Formula::atom_app("P", vec![y.term(), z.term()])),
                ),
            ),
            Formula::exists(
                f.clone(),
                Formula::forall(
                    x.clone(),
                    Formula::forall(
                        z.clone(),
                        Formula::atom_app("P", vec![Term::app(f.term(), x.term()), z.term()]),
                    ),
                ),
            ),
        );
        assert!(alpha_equal_formulas(
            &principle_formula(&p).unwrap(),
            &expected
        ));
    }

    #[test]
    fn bang_exists_schema() {
        let x = TypedVar::new("x", Ty::Base);
        let p = PrincipleInstance::BangExists {
            var: x.clone(),
            body: Formula::atom_app("P", vec![x.term()]),
        };
        let expected = Formula::lolli(
            Formula::bang(Formula::exists(
                x.clone(),
                Formula::atom_app("P", vec![x.term()]),
            )),
            Formula::exists(
                x.clone(),
                Formula::bang(Formula::atom_app("P", vec![x.term()])),
            ),
        );
        assert_eq!(principle_formula(&p).unwrap(), expected);
    }

    #[test]
    fn degenerate_extra_instance_is_valid() {
        let v = TypedVar::new("v", Ty::Base);
        let p = PrincipleInstance::Extra {
            xs: vec![],
            vs: vec![v.clone()],
            left: Formula::atom("Q"),
            right: Formula::atom_app("P", vec![v.term(), v.term()]),
        };
        let f = principle_formula(&p).unwrap();
        assert!(matches!(f, Formula::Lolli(_, _)));
    }

    #[test]
    fn slot_classes_are_enforced() {
        let x = TypedVar::new("x", Ty::Base);
        // An existential slot is not purely universal.
        let p = PrincipleInstance::Choice {
            xs: vec![],
            ys: vec![x.clone()],
            body: Formula::exists(
                TypedVar::new("u", Ty::Base),
                Formula::atom_app("P", vec![x.term(), Term::var("u", Ty::Base)]),
            ),
        };
        assert!(matches!(
            principle_formula(&p),
            Err(PrincipleError::SlotClassViolation(_))
        ));
        // Markov forbids the bound variables in the conclusion.
        let q = PrincipleInstance::Markov {
            xs: vec![x.clone()],
            premise: Formula::atom_app("P", vec![x.term(), x.term()]),
            conclusion: Formula::atom_app("P", vec![x.term(), x.term()]),
        };
        assert!(principle_formula(&q).is_err());
    }

    #[test]
    fn default_instances_render() {
        for p in default_instances() {
            assert!(principle_formula(&p).is_ok(), "{p:?}");
        }
    }
}

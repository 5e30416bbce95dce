//! Sequents, derivation trees and the per-system checkers.
//!
//! A derivation is checked bottom-up: each node must instantiate its rule
//! schema exactly (formulas are compared by normalize-then-alpha equality),
//! eigenvariable side conditions must hold, and the ambient system decides
//! which rules and formulas are admissible.  Under the restricted system the
//! additive-conjunction right rule additionally requires an all-banged
//! context.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{diamond, validate_formula, Formula, SystemId, SystemViolation};
use crate::normalize::formulas_equal;
use crate::subst::{formula_free_var_names, subst_formula1};
use crate::term::{Term, TypeError, TypedVar};
use crate::types::FiniteType;

/// A sequent `hyps |- concl` with an ordered hypothesis list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub hyps: Vec<Formula>,
    pub concl: Formula,
}

impl Sequent {
    pub fn new(hyps: Vec<Formula>, concl: Formula) -> Sequent {
        Sequent { hyps, concl }
    }

    /// Free variables of all formulas in the sequent.
    pub fn free_vars(&self) -> BTreeSet<TypedVar> {
        let mut out = crate::subst::formula_free_vars(&self.concl);
        for h in &self.hyps {
            out.extend(crate::subst::formula_free_vars(h));
        }
        out
    }

    pub fn alpha_equal(&self, other: &Sequent) -> bool {
        self.hyps.len() == other.hyps.len()
            && self
                .hyps
                .iter()
                .zip(&other.hyps)
                .all(|(a, b)| formulas_equal(a, b))
            && formulas_equal(&self.concl, &other.concl)
    }
}

/// Instances of the verifying-system axiom schemas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomInstance {
    /// `|- !(t = t)`
    Refl(Term),
    /// `|- !(t = q) -o !(q = t)`
    Sym(Term, Term),
    /// `|- !(t = q) (x) !(q = r) -o !(t = r)`
    Trans(Term, Term, Term),
    /// `|- !(t = q) (x) A[t/w] -o A[q/w]`
    Subst {
        left: Term,
        right: Term,
        var: TypedVar,
        body: Formula,
    },
    /// `|- !(T = F) -o 0`
    TrueNeqFalse,
    /// `|- !(t = T) (+) !(t = F)`
    BoolCases(Term),
    /// `pos`: `|- A[T(t,q)/w] o-o A[t/w]`; otherwise the `F`/`q` variant.
    CondReduce {
        pos: bool,
        then_t: Term,
        else_t: Term,
        var: TypedVar,
        body: Formula,
    },
}

impl AxiomInstance {
    pub fn number(&self) -> u8 {
        match self {
            AxiomInstance::Refl(_) => 1,
            AxiomInstance::Sym(_, _) => 2,
            AxiomInstance::Trans(_, _, _) => 3,
            AxiomInstance::Subst { .. } => 4,
            AxiomInstance::TrueNeqFalse => 5,
            AxiomInstance::BoolCases(_) => 6,
            AxiomInstance::CondReduce { .. } => 7,
        }
    }
}

/// A rule application; premises are part of the payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    // Identity, constants and structure.
    Id(Formula),
    ZeroL {
        context: Vec<Formula>,
        concl: Formula,
    },
    Cut(Box<Derivation>, Box<Derivation>),
    Per(Box<Derivation>, Vec<usize>),
    // Multiplicatives.
    TensorR(Box<Derivation>, Box<Derivation>),
    TensorL(Box<Derivation>),
    LolliR(Box<Derivation>),
    LolliL(Box<Derivation>, Box<Derivation>),
    // Additives.
    WithR(Box<Derivation>, Box<Derivation>),
    WithL1(Box<Derivation>, Formula),
    WithL2(Box<Derivation>, Formula),
    PlusR1(Box<Derivation>, Formula),
    PlusR2(Box<Derivation>, Formula),
    PlusL(Box<Derivation>, Box<Derivation>),
    // Quantifiers.
    ForallR(Box<Derivation>, TypedVar),
    ForallL {
        premise: Box<Derivation>,
        principal: Formula,
        witness: Term,
    },
    ExistsR {
        premise: Box<Derivation>,
        principal: Formula,
        witness: Term,
    },
    ExistsL(Box<Derivation>, TypedVar),
    // Modality.
    Con(Box<Derivation>),
    Wkn(Box<Derivation>, Formula),
    BangR(Box<Derivation>),
    BangL(Box<Derivation>),
    // Verifying-system axioms and decidability.
    Axiom(AxiomInstance),
    /// `|- !A (+) (!A -o 0)` for quantifier-free `A`.
    DecAx(Formula),
    /// From `G |- B[cases(A; t; s)/w]` conclude `G, !A |- B[s/w]`.
    DecCasesTrue(Box<Derivation>, DecCasesPayload),
    /// From `G |- B[cases(A; t; s)/w]` conclude `G, !A -o 0 |- B[t/w]`.
    DecCasesFalse(Box<Derivation>, DecCasesPayload),
    // Intuitionistic source calculus.
    IlId(Formula),
    IlBotL {
        context: Vec<Formula>,
        concl: Formula,
    },
    IlCut(Box<Derivation>, Box<Derivation>),
    IlPer(Box<Derivation>, Vec<usize>),
    IlAndR(Box<Derivation>, Box<Derivation>),
    IlAndL1(Box<Derivation>, Formula),
    IlAndL2(Box<Derivation>, Formula),
    IlOrR1(Box<Derivation>, Formula),
    IlOrR2(Box<Derivation>, Formula),
    IlOrL(Box<Derivation>, Box<Derivation>),
    IlImpR(Box<Derivation>),
    IlImpL(Box<Derivation>, Box<Derivation>),
    IlForallR(Box<Derivation>, TypedVar),
    IlForallL {
        premise: Box<Derivation>,
        principal: Formula,
        witness: Term,
    },
    IlExistsR {
        premise: Box<Derivation>,
        principal: Formula,
        witness: Term,
    },
    IlExistsL(Box<Derivation>, TypedVar),
    IlCon(Box<Derivation>),
    IlWkn(Box<Derivation>, Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecCasesPayload {
    pub var: TypedVar,
    pub body: Formula,
    pub matrix: Formula,
    pub if_false: Term,
    pub if_true: Term,
}

/// A derivation tree; `note` carries an optional `:at` annotation from the
/// surface syntax, checked against the node's conclusion formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub note: Option<Formula>,
}

impl Derivation {
    pub fn new(rule: Rule) -> Derivation {
        Derivation { rule, note: None }
    }

    pub fn premises(&self) -> Vec<&Derivation> {
        use Rule::*;
        match &self.rule {
            Id(_) | ZeroL { .. } | Axiom(_) | DecAx(_) | IlId(_) | IlBotL { .. } => vec![],
            Cut(a, b)
            | TensorR(a, b)
            | LolliL(a, b)
            | WithR(a, b)
            | PlusL(a, b)
            | IlCut(a, b)
            | IlAndR(a, b)
            | IlOrL(a, b)
            | IlImpL(a, b) => vec![a, b],
            Per(a, _)
            | TensorL(a)
            | LolliR(a)
            | WithL1(a, _)
            | WithL2(a, _)
            | PlusR1(a, _)
            | PlusR2(a, _)
            | ForallR(a, _)
            | ExistsL(a, _)
            | Con(a)
            | Wkn(a, _)
            | BangR(a)
            | BangL(a)
            | DecCasesTrue(a, _)
            | DecCasesFalse(a, _)
            | IlPer(a, _)
            | IlAndL1(a, _)
            | IlAndL2(a, _)
            | IlOrR1(a, _)
            | IlOrR2(a, _)
            | IlImpR(a)
            | IlForallR(a, _)
            | IlExistsL(a, _)
            | IlCon(a)
            | IlWkn(a, _) => vec![a],
            ForallL { premise, .. }
            | ExistsR { premise, .. }
            | IlForallL { premise, .. }
            | IlExistsR { premise, .. } => vec![premise],
        }
    }

    pub fn rule_name(&self) -> &'static str {
        use Rule::*;
        match &self.rule {
            Id(_) => "id",
            ZeroL { .. } => "zero-l",
            Cut(_, _) => "cut",
            Per(_, _) => "per",
            TensorR(_, _) => "tensor-r",
            TensorL(_) => "tensor-l",
            LolliR(_) => "lolli-r",
            LolliL(_, _) => "lolli-l",
            WithR(_, _) => "with-r",
            WithL1(_, _) => "with-l1",
            WithL2(_, _) => "with-l2",
            PlusR1(_, _) => "plus-r1",
            PlusR2(_, _) => "plus-r2",
            PlusL(_, _) => "plus-l",
            ForallR(_, _) => "forall-r",
            ForallL { .. } => "forall-l",
            ExistsR { .. } => "exists-r",
            ExistsL(_, _) => "exists-l",
            Con(_) => "con",
            Wkn(_, _) => "wkn",
            BangR(_) => "bang-r",
            BangL(_) => "bang-l",
            Axiom(_) => "axiom",
            DecAx(_) => "dec-ax",
            DecCasesTrue(_, _) => "dec-cases-r",
            DecCasesFalse(_, _) => "dec-cases-l",
            IlId(_) => "il-id",
            IlBotL { .. } => "il-bot-l",
            IlCut(_, _) => "il-cut",
            IlPer(_, _) => "il-per",
            IlAndR(_, _) => "il-and-r",
            IlAndL1(_, _) => "il-and-l1",
            IlAndL2(_, _) => "il-and-l2",
            IlOrR1(_, _) => "il-or-r1",
            IlOrR2(_, _) => "il-or-r2",
            IlOrL(_, _) => "il-or-l",
            IlImpR(_) => "il-imp-r",
            IlImpL(_, _) => "il-imp-l",
            IlForallR(_, _) => "il-forall-r",
            IlForallL { .. } => "il-forall-l",
            IlExistsR { .. } => "il-exists-r",
            IlExistsL(_, _) => "il-exists-l",
            IlCon(_) => "il-con",
            IlWkn(_, _) => "il-wkn",
        }
    }
}

/// A path of premise indices from the root, for error reports.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("rule `{rule}` at {path}: {reason}")]
    RuleMismatch {
        path: String,
        rule: String,
        reason: String,
    },
    #[error("eigenvariable `{var}` at {path} occurs free in the context")]
    EigenvariableViolation { path: String, var: String },
    #[error("restriction violated at {path}: the context of an additive-conjunction right rule must consist of banged formulas under the restricted system")]
    RestrictionViolation { path: String },
    #[error("node at {path} is not part of system {system}: {detail}")]
    SystemViolation {
        path: String,
        system: SystemId,
        detail: String,
    },
    #[error("ill-typed payload at {path}: {source}")]
    PayloadType {
        path: String,
        #[source]
        source: TypeError,
    },
}

struct Checker {
    sys: SystemId,
}

type Checked = Result<Sequent, CheckError>;

impl Checker {
    fn mismatch(&self, path: &NodePath, rule: &str, reason: impl Into<String>) -> CheckError {
        CheckError::RuleMismatch {
            path: path.to_string(),
            rule: rule.into(),
            reason: reason.into(),
        }
    }

    fn system_err(&self, path: &NodePath, detail: impl Into<String>) -> CheckError {
        CheckError::SystemViolation {
            path: path.to_string(),
            system: self.sys,
            detail: detail.into(),
        }
    }

    fn formula_ok(&self, f: &Formula, path: &NodePath) -> Result<(), CheckError> {
        validate_formula(f, self.sys)
            .map_err(|e: SystemViolation| self.system_err(path, e.to_string()))?;
        crate::formula::typecheck_formula_under_annotations(f).map_err(|e| {
            CheckError::PayloadType {
                path: path.to_string(),
                source: e,
            }
        })
    }

    fn term_ok(&self, t: &Term, path: &NodePath) -> Result<FiniteType, CheckError> {
        crate::term::typecheck_closed_under_annotations(t).map_err(|e| CheckError::PayloadType {
            path: path.to_string(),
            source: e,
        })
    }

    fn check(&self, d: &Derivation, path: &mut NodePath) -> Checked {
        let seq = self.check_rule(d, path)?;
        if let Some(note) = &d.note {
            if !formulas_equal(note, &seq.concl) {
                return Err(self.mismatch(
                    path,
                    d.rule_name(),
                    "the `:at` annotation does not match the conclusion formula",
                ));
            }
        }
        Ok(seq)
    }

    fn premise(&self, d: &Derivation, idx: usize, path: &mut NodePath) -> Checked {
        path.0.push(idx);
        let r = self.check(d, path);
        path.0.pop();
        r
    }

    fn require_linear(&self, path: &NodePath, rule: &str) -> Result<(), CheckError> {
        if self.sys.is_linear() {
            Ok(())
        } else {
            Err(self.system_err(path, format!("rule `{rule}` is a linear rule")))
        }
    }

    fn require_verifying(&self, path: &NodePath, rule: &str) -> Result<(), CheckError> {
        if self.sys.is_verifying() {
            Ok(())
        } else {
            Err(self.system_err(
                path,
                format!("rule `{rule}` belongs to the verifying system"),
            ))
        }
    }

    fn require_il(&self, path: &NodePath, rule: &str) -> Result<(), CheckError> {
        if self.sys == SystemId::Il {
            Ok(())
        } else {
            Err(self.system_err(path, format!("rule `{rule}` is an intuitionistic rule")))
        }
    }

    fn split_last(
        &self,
        seq: &Sequent,
        path: &NodePath,
        rule: &str,
    ) -> Result<(Vec<Formula>, Formula), CheckError> {
        let mut hyps = seq.hyps.clone();
        match hyps.pop() {
            Some(last) => Ok((hyps, last)),
            None => Err(self.mismatch(path, rule, "premise has no hypothesis")),
        }
    }

    fn contexts_match(
        &self,
        a: &[Formula],
        b: &[Formula],
        path: &NodePath,
        rule: &str,
    ) -> Result<(), CheckError> {
        if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| !formulas_equal(x, y)) {
            return Err(self.mismatch(path, rule, "premise contexts differ"));
        }
        Ok(())
    }

    fn check_rule(&self, d: &Derivation, path: &mut NodePath) -> Checked {
        use Rule::*;
        let rule = d.rule_name();
        match &d.rule {
            Id(a) => {
                self.require_linear(path, rule)?;
                self.formula_ok(a, path)?;
                Ok(Sequent::new(vec![a.clone()], a.clone()))
            }
            ZeroL { context, concl } => {
                self.require_linear(path, rule)?;
                for f in context {
                    self.formula_ok(f, path)?;
                }
                self.formula_ok(concl, path)?;
                let mut hyps = context.clone();
                hyps.push(Formula::Zero);
                Ok(Sequent::new(hyps, concl.clone()))
            }
            Cut(d1, d2) => {
                self.require_linear(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (delta, cut_formula) = self.split_last(&s2, path, rule)?;
                if !formulas_equal(&s1.concl, &cut_formula) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "cut formula differs between the premises",
                    ));
                }
                let mut hyps = s1.hyps;
                hyps.extend(delta);
                Ok(Sequent::new(hyps, s2.concl))
            }
            Per(d1, perm) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                permute(&s, perm).ok_or_else(|| {
                    self.mismatch(path, rule, "payload is not a permutation of the context")
                })
            }
            TensorR(d1, d2) => {
                self.require_linear(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let mut hyps = s1.hyps;
                hyps.extend(s2.hyps);
                Ok(Sequent::new(hyps, Formula::tensor(s1.concl, s2.concl)))
            }
            TensorL(d1) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (rest, b) = self.split_last(&s, path, rule)?;
                let (mut rest, a) = match rest.split_last() {
                    Some((a, r)) => (r.to_vec(), a.clone()),
                    None => return Err(self.mismatch(path, rule, "premise needs two hypotheses")),
                };
                rest.push(Formula::tensor(a, b));
                Ok(Sequent::new(rest, s.concl))
            }
            LolliR(d1) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (rest, a) = self.split_last(&s, path, rule)?;
                Ok(Sequent::new(rest, Formula::lolli(a, s.concl)))
            }
            LolliL(d1, d2) => {
                self.require_linear(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (delta, b) = self.split_last(&s2, path, rule)?;
                let mut hyps = s1.hyps;
                hyps.extend(delta);
                hyps.push(Formula::lolli(s1.concl, b));
                Ok(Sequent::new(hyps, s2.concl))
            }
            WithR(d1, d2) => {
                self.require_linear(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                self.contexts_match(&s1.hyps, &s2.hyps, path, rule)?;
                if self.sys == SystemId::IllR
                    && !s1.hyps.iter().all(|f| matches!(f, Formula::Bang(_)))
                {
                    return Err(CheckError::RestrictionViolation {
                        path: path.to_string(),
                    });
                }
                Ok(Sequent::new(s1.hyps, Formula::with(s1.concl, s2.concl)))
            }
            WithL1(d1, other) => {
                self.require_linear(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                rest.push(Formula::with(a, other.clone()));
                Ok(Sequent::new(rest, s.concl))
            }
            WithL2(d1, other) => {
                self.require_linear(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                rest.push(Formula::with(other.clone(), a));
                Ok(Sequent::new(rest, s.concl))
            }
            PlusR1(d1, other) => {
                self.require_linear(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                Ok(Sequent::new(s.hyps, Formula::plus(s.concl, other.clone())))
            }
            PlusR2(d1, other) => {
                self.require_linear(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                Ok(Sequent::new(s.hyps, Formula::plus(other.clone(), s.concl)))
            }
            PlusL(d1, d2) => {
                self.require_linear(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (gamma1, a) = self.split_last(&s1, path, rule)?;
                let (gamma2, b) = self.split_last(&s2, path, rule)?;
                self.contexts_match(&gamma1, &gamma2, path, rule)?;
                if !formulas_equal(&s1.concl, &s2.concl) {
                    return Err(self.mismatch(path, rule, "premise conclusions differ"));
                }
                let mut hyps = gamma1;
                hyps.push(Formula::plus(a, b));
                Ok(Sequent::new(hyps, s1.concl))
            }
            ForallR(d1, v) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                self.eigen_ok(v, s.hyps.iter(), path)?;
                Ok(Sequent::new(s.hyps, Formula::forall(v.clone(), s.concl)))
            }
            ForallL {
                premise,
                principal,
                witness,
            } => {
                self.require_linear(path, rule)?;
                self.formula_ok(principal, path)?;
                let (v, body) = match principal {
                    Formula::Forall(v, body) => (v, body),
                    _ => {
                        return Err(self.mismatch(path, rule, "principal formula is not universal"))
                    }
                };
                let wty = self.term_ok(witness, path)?;
                if wty != v.ty {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(&v.ty, wty, "instantiation term"),
                    });
                }
                let s = self.premise(premise, 0, path)?;
                let (mut rest, hyp) = self.split_last(&s, path, rule)?;
                let expected = subst_formula1(body, v, witness);
                if !formulas_equal(&hyp, &expected) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "last hypothesis is not the instantiated body",
                    ));
                }
                rest.push(principal.clone());
                Ok(Sequent::new(rest, s.concl))
            }
            ExistsR {
                premise,
                principal,
                witness,
            } => {
                self.require_linear(path, rule)?;
                self.formula_ok(principal, path)?;
                let (v, body) = match principal {
                    Formula::Exists(v, body) => (v, body),
                    _ => {
                        return Err(self.mismatch(
                            path,
                            rule,
                            "principal formula is not existential",
                        ))
                    }
                };
                let wty = self.term_ok(witness, path)?;
                if wty != v.ty {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(&v.ty, wty, "witness term"),
                    });
                }
                let s = self.premise(premise, 0, path)?;
                let expected = subst_formula1(body, v, witness);
                if !formulas_equal(&s.concl, &expected) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "premise conclusion is not the instantiated body",
                    ));
                }
                Ok(Sequent::new(s.hyps, principal.clone()))
            }
            ExistsL(d1, v) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                self.eigen_ok(v, rest.iter().chain(std::iter::once(&s.concl)), path)?;
                rest.push(Formula::exists(v.clone(), a));
                Ok(Sequent::new(rest, s.concl))
            }
            Con(d1) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (rest, second) = self.split_last(&s, path, rule)?;
                let (mut rest, first) = match rest.split_last() {
                    Some((a, r)) => (r.to_vec(), a.clone()),
                    None => return Err(self.mismatch(path, rule, "premise needs two hypotheses")),
                };
                if !matches!(first, Formula::Bang(_)) {
                    return Err(self.mismatch(path, rule, "contracted formula is not banged"));
                }
                if !formulas_equal(&first, &second) {
                    return Err(self.mismatch(path, rule, "contracted hypotheses differ"));
                }
                rest.push(first);
                Ok(Sequent::new(rest, s.concl))
            }
            Wkn(d1, f) => {
                self.require_linear(path, rule)?;
                self.formula_ok(f, path)?;
                if !matches!(f, Formula::Bang(_)) {
                    return Err(self.mismatch(path, rule, "weakened formula is not banged"));
                }
                let s = self.premise(d1, 0, path)?;
                let mut hyps = s.hyps;
                hyps.push(f.clone());
                Ok(Sequent::new(hyps, s.concl))
            }
            BangR(d1) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                if !s.hyps.iter().all(|f| matches!(f, Formula::Bang(_))) {
                    return Err(self.mismatch(path, rule, "context is not all-banged"));
                }
                Ok(Sequent::new(s.hyps, Formula::bang(s.concl)))
            }
            BangL(d1) => {
                self.require_linear(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                rest.push(Formula::bang(a));
                Ok(Sequent::new(rest, s.concl))
            }
            Axiom(inst) => {
                self.require_verifying(path, rule)?;
                let concl = self.axiom_conclusion(inst, path)?;
                self.formula_ok(&concl, path)?;
                Ok(Sequent::new(vec![], concl))
            }
            DecAx(a) => {
                if self.sys != SystemId::IllBDia {
                    return Err(
                        self.system_err(path, "decidability axiom requires the case-split system")
                    );
                }
                self.formula_ok(a, path)?;
                if !a.is_quantifier_free() {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "decidability axiom needs a quantifier-free formula",
                    ));
                }
                Ok(Sequent::new(
                    vec![],
                    Formula::plus(
                        Formula::bang(a.clone()),
                        Formula::lolli(Formula::bang(a.clone()), Formula::Zero),
                    ),
                ))
            }
            DecCasesTrue(d1, p) => {
                let mut hyps = self.check_dec_cases(d1, p, path, rule)?;
                hyps.push(Formula::bang(p.matrix.clone()));
                Ok(Sequent::new(
                    hyps,
                    subst_formula1(&p.body, &p.var, &p.if_true),
                ))
            }
            DecCasesFalse(d1, p) => {
                let mut hyps = self.check_dec_cases(d1, p, path, rule)?;
                hyps.push(Formula::lolli(
                    Formula::bang(p.matrix.clone()),
                    Formula::Zero,
                ));
                Ok(Sequent::new(
                    hyps,
                    subst_formula1(&p.body, &p.var, &p.if_false),
                ))
            }
            IlId(a) => {
                self.require_il(path, rule)?;
                self.formula_ok(a, path)?;
                Ok(Sequent::new(vec![a.clone()], a.clone()))
            }
            IlBotL { context, concl } => {
                self.require_il(path, rule)?;
                for f in context {
                    self.formula_ok(f, path)?;
                }
                self.formula_ok(concl, path)?;
                let mut hyps = context.clone();
                hyps.push(Formula::Bot);
                Ok(Sequent::new(hyps, concl.clone()))
            }
            IlCut(d1, d2) => {
                self.require_il(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (delta, cut_formula) = self.split_last(&s2, path, rule)?;
                if !formulas_equal(&s1.concl, &cut_formula) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "cut formula differs between the premises",
                    ));
                }
                let mut hyps = s1.hyps;
                hyps.extend(delta);
                Ok(Sequent::new(hyps, s2.concl))
            }
            IlPer(d1, perm) => {
                self.require_il(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                permute(&s, perm).ok_or_else(|| {
                    self.mismatch(path, rule, "payload is not a permutation of the context")
                })
            }
            IlAndR(d1, d2) => {
                self.require_il(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                self.contexts_match(&s1.hyps, &s2.hyps, path, rule)?;
                Ok(Sequent::new(s1.hyps, Formula::and(s1.concl, s2.concl)))
            }
            IlAndL1(d1, other) => {
                self.require_il(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                rest.push(Formula::and(a, other.clone()));
                Ok(Sequent::new(rest, s.concl))
            }
            IlAndL2(d1, other) => {
                self.require_il(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                rest.push(Formula::and(other.clone(), a));
                Ok(Sequent::new(rest, s.concl))
            }
            IlOrR1(d1, other) => {
                self.require_il(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                Ok(Sequent::new(s.hyps, Formula::or(s.concl, other.clone())))
            }
            IlOrR2(d1, other) => {
                self.require_il(path, rule)?;
                self.formula_ok(other, path)?;
                let s = self.premise(d1, 0, path)?;
                Ok(Sequent::new(s.hyps, Formula::or(other.clone(), s.concl)))
            }
            IlOrL(d1, d2) => {
                self.require_il(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (gamma1, a) = self.split_last(&s1, path, rule)?;
                let (gamma2, b) = self.split_last(&s2, path, rule)?;
                self.contexts_match(&gamma1, &gamma2, path, rule)?;
                if !formulas_equal(&s1.concl, &s2.concl) {
                    return Err(self.mismatch(path, rule, "premise conclusions differ"));
                }
                let mut hyps = gamma1;
                hyps.push(Formula::or(a, b));
                Ok(Sequent::new(hyps, s1.concl))
            }
            IlImpR(d1) => {
                self.require_il(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (rest, a) = self.split_last(&s, path, rule)?;
                Ok(Sequent::new(rest, Formula::implies(a, s.concl)))
            }
            IlImpL(d1, d2) => {
                self.require_il(path, rule)?;
                let s1 = self.premise(d1, 0, path)?;
                let s2 = self.premise(d2, 1, path)?;
                let (delta, b) = self.split_last(&s2, path, rule)?;
                let mut hyps = s1.hyps;
                hyps.extend(delta);
                hyps.push(Formula::implies(s1.concl, b));
                Ok(Sequent::new(hyps, s2.concl))
            }
            IlForallR(d1, v) => {
                self.require_il(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                self.eigen_ok(v, s.hyps.iter(), path)?;
                Ok(Sequent::new(s.hyps, Formula::forall(v.clone(), s.concl)))
            }
            IlForallL {
                premise,
                principal,
                witness,
            } => {
                self.require_il(path, rule)?;
                self.formula_ok(principal, path)?;
                let (v, body) = match principal {
                    Formula::Forall(v, body) => (v, body),
                    _ => {
                        return Err(self.mismatch(path, rule, "principal formula is not universal"))
                    }
                };
                let wty = self.term_ok(witness, path)?;
                if wty != v.ty {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(&v.ty, wty, "instantiation term"),
                    });
                }
                let s = self.premise(premise, 0, path)?;
                let (mut rest, hyp) = self.split_last(&s, path, rule)?;
                let expected = subst_formula1(body, v, witness);
                if !formulas_equal(&hyp, &expected) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "last hypothesis is not the instantiated body",
                    ));
                }
                rest.push(principal.clone());
                Ok(Sequent::new(rest, s.concl))
            }
            IlExistsR {
                premise,
                principal,
                witness,
            } => {
                self.require_il(path, rule)?;
                self.formula_ok(principal, path)?;
                let (v, body) = match principal {
                    Formula::Exists(v, body) => (v, body),
                    _ => {
                        return Err(self.mismatch(
                            path,
                            rule,
                            "principal formula is not existential",
                        ))
                    }
                };
                let wty = self.term_ok(witness, path)?;
                if wty != v.ty {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(&v.ty, wty, "witness term"),
                    });
                }
                let s = self.premise(premise, 0, path)?;
                let expected = subst_formula1(body, v, witness);
                if !formulas_equal(&s.concl, &expected) {
                    return Err(self.mismatch(
                        path,
                        rule,
                        "premise conclusion is not the instantiated body",
                    ));
                }
                Ok(Sequent::new(s.hyps, principal.clone()))
            }
            IlExistsL(d1, v) => {
                self.require_il(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (mut rest, a) = self.split_last(&s, path, rule)?;
                self.eigen_ok(v, rest.iter().chain(std::iter::once(&s.concl)), path)?;
                rest.push(Formula::exists(v.clone(), a));
                Ok(Sequent::new(rest, s.concl))
            }
            IlCon(d1) => {
                self.require_il(path, rule)?;
                let s = self.premise(d1, 0, path)?;
                let (rest, second) = self.split_last(&s, path, rule)?;
                let (mut rest, first) = match rest.split_last() {
                    Some((a, r)) => (r.to_vec(), a.clone()),
                    None => return Err(self.mismatch(path, rule, "premise needs two hypotheses")),
                };
                if !formulas_equal(&first, &second) {
                    return Err(self.mismatch(path, rule, "contracted hypotheses differ"));
                }
                rest.push(first);
                Ok(Sequent::new(rest, s.concl))
            }
            IlWkn(d1, f) => {
                self.require_il(path, rule)?;
                self.formula_ok(f, path)?;
                let s = self.premise(d1, 0, path)?;
                let mut hyps = s.hyps;
                hyps.push(f.clone());
                Ok(Sequent::new(hyps, s.concl))
            }
        }
    }

    fn eigen_ok<'a>(
        &self,
        v: &TypedVar,
        formulas: impl Iterator<Item = &'a Formula>,
        path: &NodePath,
    ) -> Result<(), CheckError> {
        for f in formulas {
            if formula_free_var_names(f).contains(&v.name) {
                return Err(CheckError::EigenvariableViolation {
                    path: path.to_string(),
                    var: v.name.clone(),
                });
            }
        }
        Ok(())
    }

    fn check_dec_cases(
        &self,
        d1: &Derivation,
        p: &DecCasesPayload,
        path: &mut NodePath,
        rule: &str,
    ) -> Result<Vec<Formula>, CheckError> {
        if self.sys != SystemId::IllBDia {
            return Err(self.system_err(path, "case-split rules require the case-split system"));
        }
        self.formula_ok(&p.matrix, path)?;
        if !p.matrix.is_quantifier_free() {
            return Err(self.mismatch(path, rule, "case-split matrix must be quantifier-free"));
        }
        let tty = self.term_ok(&p.if_true, path)?;
        let fty = self.term_ok(&p.if_false, path)?;
        if tty != p.var.ty || fty != p.var.ty {
            return Err(CheckError::PayloadType {
                path: path.to_string(),
                source: TypeError::mismatch(
                    &p.var.ty,
                    format!("{tty} / {fty}"),
                    "case-split branches",
                ),
            });
        }
        let s = self.premise(d1, 0, path)?;
        let cases = Term::dec_cases(p.matrix.clone(), p.if_false.clone(), p.if_true.clone());
        let expected = subst_formula1(&p.body, &p.var, &cases);
        if !formulas_equal(&s.concl, &expected) {
            return Err(self.mismatch(
                path,
                rule,
                "premise conclusion is not the body instantiated with the case split",
            ));
        }
        Ok(s.hyps)
    }

    fn axiom_conclusion(
        &self,
        inst: &AxiomInstance,
        path: &NodePath,
    ) -> Result<Formula, CheckError> {
        let bool_ok = |t: &Term| -> Result<(), CheckError> {
            let ty = self.term_ok(t, path)?;
            if ty != FiniteType::Bool {
                return Err(CheckError::PayloadType {
                    path: path.to_string(),
                    source: TypeError::mismatch(FiniteType::Bool, ty, "axiom payload"),
                });
            }
            Ok(())
        };
        let beq = |t: &Term, q: &Term| Formula::bang(Formula::BoolEq(t.clone(), q.clone()));
        match inst {
            AxiomInstance::Refl(t) => {
                bool_ok(t)?;
                Ok(beq(t, t))
            }
            AxiomInstance::Sym(t, q) => {
                bool_ok(t)?;
                bool_ok(q)?;
                Ok(Formula::lolli(beq(t, q), beq(q, t)))
            }
            AxiomInstance::Trans(t, q, r) => {
                bool_ok(t)?;
                bool_ok(q)?;
                bool_ok(r)?;
                Ok(Formula::lolli(
                    Formula::tensor(beq(t, q), beq(q, r)),
                    beq(t, r),
                ))
            }
            AxiomInstance::Subst {
                left,
                right,
                var,
                body,
            } => {
                bool_ok(left)?;
                bool_ok(right)?;
                if var.ty != FiniteType::Bool {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(
                            FiniteType::Bool,
                            &var.ty,
                            "substitution variable",
                        ),
                    });
                }
                Ok(Formula::lolli(
                    Formula::tensor(beq(left, right), subst_formula1(body, var, left)),
                    subst_formula1(body, var, right),
                ))
            }
            AxiomInstance::TrueNeqFalse => Ok(Formula::lolli(
                beq(&Term::truth(), &Term::falsity()),
                Formula::Zero,
            )),
            AxiomInstance::BoolCases(t) => {
                bool_ok(t)?;
                Ok(Formula::plus(
                    beq(t, &Term::truth()),
                    beq(t, &Term::falsity()),
                ))
            }
            AxiomInstance::CondReduce {
                pos,
                then_t,
                else_t,
                var,
                body,
            } => {
                let tty = self.term_ok(then_t, path)?;
                let qty = self.term_ok(else_t, path)?;
                if tty != var.ty || qty != var.ty {
                    return Err(CheckError::PayloadType {
                        path: path.to_string(),
                        source: TypeError::mismatch(
                            &var.ty,
                            format!("{tty} / {qty}"),
                            "conditional branches",
                        ),
                    });
                }
                let scrutinee = if *pos { Term::truth() } else { Term::falsity() };
                let cond = Term::cond(scrutinee, then_t.clone(), else_t.clone());
                let picked = if *pos { then_t } else { else_t };
                Ok(Formula::lolli_both(
                    subst_formula1(body, var, &cond),
                    subst_formula1(body, var, picked),
                ))
            }
        }
    }
}

fn permute(s: &Sequent, perm: &[usize]) -> Option<Sequent> {
    if perm.len() != s.hyps.len() {
        return None;
    }
    let mut seen = vec![false; perm.len()];
    for &i in perm {
        if i >= perm.len() || seen[i] {
            return None;
        }
        seen[i] = true;
    }
    let hyps = perm.iter().map(|&i| s.hyps[i].clone()).collect();
    Some(Sequent::new(hyps, s.concl.clone()))
}

/// Checks `d` against `sys` and returns its root sequent.
pub fn check_derivation(d: &Derivation, sys: SystemId) -> Result<Sequent, CheckError> {
    Checker { sys }.check(d, &mut NodePath::default())
}

// ---------------------------------------------------------------------------
// Builders for the derivable boolean lemmas of the verifying system.

/// Selects which derivable lemma to build, with its slots.
#[derive(Debug, Clone)]
pub enum LemmaItem {
    /// From `|- body[T/var]` and `|- body[F/var]` conclude `|- body[z/var]`.
    CaseSplit {
        var: TypedVar,
        body: Formula,
        scrutinee: Term,
        premise_true: Derivation,
        premise_false: Derivation,
    },
    /// `!(T = T) -o A |- A` (`pos`) or the `F` variant.
    GuardDischarge { formula: Formula, pos: bool },
    /// `A |- !(T = F) -o B`.
    Absurd { from: Formula, to: Formula },
    /// `|- <>_T(A, B) o-o A` (`pos`) or `|- <>_F(A, B) o-o B`.
    DiamondFixed { a: Formula, b: Formula, pos: bool },
    /// `|- <>_z(!A, !B) o-o !(<>_z(!A, !B))`.
    DiamondBang { a: Formula, b: Formula, z: Term },
}

fn rule(r: Rule) -> Derivation {
    Derivation::new(r)
}

fn id(a: Formula) -> Derivation {
    rule(Rule::Id(a))
}

fn cut(d1: Derivation, d2: Derivation) -> Derivation {
    rule(Rule::Cut(Box::new(d1), Box::new(d2)))
}

fn lolli_l(d1: Derivation, d2: Derivation) -> Derivation {
    rule(Rule::LolliL(Box::new(d1), Box::new(d2)))
}

fn lolli_r(d: Derivation) -> Derivation {
    rule(Rule::LolliR(Box::new(d)))
}

fn with_r(d1: Derivation, d2: Derivation) -> Derivation {
    rule(Rule::WithR(Box::new(d1), Box::new(d2)))
}

fn per(d: Derivation, p: Vec<usize>) -> Derivation {
    rule(Rule::Per(Box::new(d), p))
}

fn bang(f: &Formula) -> Formula {
    Formula::bang(f.clone())
}

fn beq(t: Term, q: Term) -> Formula {
    Formula::bang(Formula::BoolEq(t, q))
}

/// `G |- X -o Y` from `|- X -o Y` (axiom-style) and `G |- X`:
/// `cut(impl, lolliL(arg, id(Y)))`.
fn apply_impl(impl_deriv: Derivation, y: Formula, arg: Derivation) -> Derivation {
    cut(impl_deriv, lolli_l(arg, id(y)))
}

/// Builds the selected derivable lemma as a checked-shape derivation in the
/// verifying system.
pub fn build_lemma_useful(item: LemmaItem) -> Derivation {
    match item {
        LemmaItem::CaseSplit {
            var,
            body,
            scrutinee,
            premise_true,
            premise_false,
        } => case_split(&var, &body, &scrutinee, premise_true, premise_false),
        LemmaItem::GuardDischarge { formula, pos } => guard_discharge(&formula, pos),
        LemmaItem::Absurd { from, to } => absurd(&from, &to),
        LemmaItem::DiamondFixed { a, b, pos } => diamond_fixed(&a, &b, pos),
        LemmaItem::DiamondBang { a, b, z } => diamond_bang(&a, &b, &z),
    }
}

/// `!(z = c) |- body[z/var]` given `|- body[c/var]`, for `c` one of `T`, `F`.
fn transport(var: &TypedVar, body: &Formula, z: &Term, c: Term, premise: Derivation) -> Derivation {
    let body_z = subst_formula1(body, var, z);
    // !(z = c) |- !(c = z), via the symmetry axiom.
    let sym = rule(Rule::Axiom(AxiomInstance::Sym(z.clone(), c.clone())));
    let d_sym = apply_impl(
        sym,
        beq(c.clone(), z.clone()),
        id(beq(z.clone(), c.clone())),
    );
    // !(z = c) |- !(c = z) (x) body[c].
    let tensored = rule(Rule::TensorR(Box::new(d_sym), Box::new(premise)));
    // Substitution axiom: |- !(c = z) (x) body[c] -o body[z].
    let ax4 = rule(Rule::Axiom(AxiomInstance::Subst {
        left: c,
        right: z.clone(),
        var: var.clone(),
        body: body.clone(),
    }));
    apply_impl(ax4, body_z, tensored)
}

fn case_split(
    var: &TypedVar,
    body: &Formula,
    z: &Term,
    premise_true: Derivation,
    premise_false: Derivation,
) -> Derivation {
    let d_t = transport(var, body, z, Term::truth(), premise_true);
    let d_f = transport(var, body, z, Term::falsity(), premise_false);
    let branch = rule(Rule::PlusL(Box::new(d_t), Box::new(d_f)));
    cut(
        rule(Rule::Axiom(AxiomInstance::BoolCases(z.clone()))),
        branch,
    )
}

fn guard_discharge(a: &Formula, pos: bool) -> Derivation {
    let c = if pos { Term::truth() } else { Term::falsity() };
    let refl = rule(Rule::Axiom(AxiomInstance::Refl(c)));
    lolli_l(refl, id(a.clone()))
}

/// `gamma..., !(T = F) |- c`, consuming the context via the zero axiom.
fn explode(gamma: Vec<Formula>, c: Formula) -> Derivation {
    let zero = rule(Rule::ZeroL {
        context: gamma.clone(),
        concl: c.clone(),
    });
    let step = lolli_l(id(beq(Term::truth(), Term::falsity())), zero);
    // step: !(T=F), gamma..., !(T=F) -o 0 |- c
    let collapsed = cut(rule(Rule::Axiom(AxiomInstance::TrueNeqFalse)), step);
    // collapsed: !(T=F), gamma... |- c ; rotate the guard to the end.
    let n = gamma.len() + 1;
    let mut p: Vec<usize> = (1..n).collect();
    p.push(0);
    per(collapsed, p)
}

fn absurd(from: &Formula, to: &Formula) -> Derivation {
    lolli_r(explode(vec![from.clone()], to.clone()))
}

/// `A |- !(c = T) -o X` when the guard is refutable (`c = F` against `T` or
/// symmetric); used for the off-branch of a fixed diamond.
fn refuted_guard(hyp: &Formula, guard_lhs: Term, guard_rhs: Term, concl: &Formula) -> Derivation {
    // gamma = [hyp]; target: hyp |- !(lhs = rhs) -o concl where lhs/rhs is
    // F/T or T/F.  Reduce !(F = T) to !(T = F) through symmetry when needed.
    if guard_lhs == Term::truth() {
        return absurd(hyp, concl);
    }
    // hyp, !(T=F) |- concl
    let base = explode(vec![hyp.clone()], concl.clone());
    // base hyps: [hyp, !(T=F)]; apply symmetry to obtain it from !(F=T).
    let sym = rule(Rule::Axiom(AxiomInstance::Sym(
        guard_lhs.clone(),
        guard_rhs.clone(),
    )));
    let step = lolli_l(id(beq(guard_lhs.clone(), guard_rhs.clone())), base);
    // step: !(F=T), hyp, !(F=T) -o !(T=F) |- concl
    let collapsed = cut(sym, step);
    // collapsed: !(F=T), hyp |- concl
    lolli_r(per(collapsed, vec![1, 0]))
}

fn diamond_fixed(a: &Formula, b: &Formula, pos: bool) -> Derivation {
    let c = if pos { Term::truth() } else { Term::falsity() };
    let picked = if pos { a } else { b };
    // Forward: <>_c(A, B) |- picked.
    let guard = guard_discharge(picked, pos);
    let fwd = if pos {
        rule(Rule::WithL1(
            Box::new(guard),
            Formula::lolli(beq(c.clone(), Term::falsity()), b.clone()),
        ))
    } else {
        rule(Rule::WithL2(
            Box::new(guard),
            Formula::lolli(beq(c.clone(), Term::truth()), a.clone()),
        ))
    };
    // Backward: picked |- <>_c(A, B).
    let on_branch = lolli_r(rule(Rule::Wkn(
        Box::new(id(picked.clone())),
        beq(c.clone(), c.clone()),
    )));
    let bwd = if pos {
        let off = refuted_guard(picked, Term::truth(), Term::falsity(), b);
        with_r(on_branch, off)
    } else {
        let off = refuted_guard(picked, Term::falsity(), Term::truth(), a);
        with_r(off, on_branch)
    };
    with_r(lolli_r(fwd), lolli_r(bwd))
}

fn diamond_bang(a: &Formula, b: &Formula, z: &Term) -> Derivation {
    let ba = bang(a);
    let bb = bang(b);
    let w = TypedVar::new("_dia", FiniteType::Bool);
    let dia_w = diamond(w.term(), ba.clone(), bb.clone());
    let impl_w = Formula::lolli(dia_w.clone(), Formula::bang(dia_w.clone()));
    // |- impl_w[c/w] for a fixed boolean c.
    let fixed = |pos: bool| -> Derivation {
        let guard_c = if pos { Term::truth() } else { Term::falsity() };
        let picked = if pos { &ba } else { &bb };
        // <>_c |- !picked
        let fwd_pick = {
            let guard = guard_discharge(picked, pos);
            if pos {
                rule(Rule::WithL1(
                    Box::new(guard),
                    Formula::lolli(beq(Term::truth(), Term::falsity()), bb.clone()),
                ))
            } else {
                rule(Rule::WithL2(
                    Box::new(guard),
                    Formula::lolli(beq(Term::falsity(), Term::truth()), ba.clone()),
                ))
            }
        };
        // !picked |- !<>_c : the context is already banged, so the plain
        // diamond introduction promotes directly.
        let back = {
            let on_branch = lolli_r(rule(Rule::Wkn(
                Box::new(id(picked.clone())),
                beq(guard_c.clone(), guard_c),
            )));
            let bwd = if pos {
                let off = refuted_guard(picked, Term::truth(), Term::falsity(), &bb);
                with_r(on_branch, off)
            } else {
                let off = refuted_guard(picked, Term::falsity(), Term::truth(), &ba);
                with_r(off, on_branch)
            };
            rule(Rule::BangR(Box::new(bwd)))
        };
        lolli_r(cut(fwd_pick, back))
    };
    let fwd = case_split(&w, &impl_w, z, fixed(true), fixed(false));
    let dia_z = diamond(z.clone(), ba, bb);
    let bwd = lolli_r(rule(Rule::BangL(Box::new(id(dia_z)))));
    with_r(fwd, bwd)
}

//! Seeded formula corpora for the property suites: closed source formulas,
//! closed linear formulas and quantifier-free challenge matrices.
//!
//! Generation is deterministic in the seed; each corpus starts from a fixed
//! list of hand-picked shapes and is padded with random samples up to the
//! requested count.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::term::{Term, TypedVar};
use crate::types::FiniteType;

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub depth: usize,
    pub count: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> CorpusConfig {
        CorpusConfig {
            depth: 3,
            count: 40,
            seed: 0,
        }
    }
}

fn p_of(t: Term) -> Formula {
    Formula::atom_app("P", vec![t])
}

fn q() -> Formula {
    Formula::atom("Q")
}

fn xi(name: impl Into<String>) -> TypedVar {
    TypedVar::new(name, FiniteType::Base)
}

fn leaf_source(rng: &mut ChaCha8Rng, scope: &[TypedVar]) -> Formula {
    match rng.gen_range(0..3) {
        0 => q(),
        1 if !scope.is_empty() => {
            let v = &scope[rng.gen_range(0..scope.len())];
            p_of(v.term())
        }
        _ => p_of(Term::elem()),
    }
}

fn gen_source(
    rng: &mut ChaCha8Rng,
    depth: usize,
    scope: &mut Vec<TypedVar>,
    next_var: &mut usize,
) -> Formula {
    if depth == 0 || rng.gen_range(0..5) == 0 {
        return leaf_source(rng, scope);
    }
    match rng.gen_range(0..5) {
        0 => Formula::and(
            gen_source(rng, depth - 1, scope, next_var),
            gen_source(rng, depth - 1, scope, next_var),
        ),
        1 => Formula::or(
            gen_source(rng, depth - 1, scope, next_var),
            gen_source(rng, depth - 1, scope, next_var),
        ),
        2 => Formula::implies(
            gen_source(rng, depth - 1, scope, next_var),
            gen_source(rng, depth - 1, scope, next_var),
        ),
        k => {
            let v = xi(format!("v{next_var}"));
            *next_var += 1;
            scope.push(v.clone());
            let body = gen_source(rng, depth - 1, scope, next_var);
            scope.pop();
            if k == 3 {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

fn pad<F: FnMut(&mut ChaCha8Rng) -> Formula>(
    base: Vec<Formula>,
    cfg: &CorpusConfig,
    mut gen: F,
) -> Vec<Formula> {
    let mut seen: BTreeSet<Formula> = base.iter().cloned().collect();
    let mut out = base;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut guard = 0;
    while out.len() < cfg.count && guard < cfg.count * 50 {
        guard += 1;
        let f = gen(&mut rng);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

/// Closed source formulas over a unary and a nullary atom.
pub fn source_formulas(cfg: &CorpusConfig) -> Vec<Formula> {
    let x = xi("x");
    let y = xi("y");
    let base = vec![
        p_of(Term::elem()),
        q(),
        Formula::or(p_of(Term::elem()), q()),
        Formula::and(p_of(Term::elem()), q()),
        Formula::implies(p_of(Term::elem()), q()),
        Formula::forall(x.clone(), p_of(x.term())),
        Formula::exists(x.clone(), p_of(x.term())),
        Formula::forall(x.clone(), Formula::implies(p_of(x.term()), p_of(x.term()))),
        Formula::implies(Formula::or(p_of(Term::elem()), q()), q()),
        Formula::exists(x.clone(), Formula::and(p_of(x.term()), q())),
        Formula::forall(
            x.clone(),
            Formula::exists(y.clone(), Formula::implies(p_of(x.term()), p_of(y.term()))),
        ),
        Formula::implies(
            Formula::forall(x.clone(), p_of(x.term())),
            Formula::exists(y.clone(), p_of(y.term())),
        ),
        Formula::or(
            Formula::exists(x.clone(), p_of(x.term())),
            Formula::implies(q(), q()),
        ),
        Formula::and(
            Formula::or(p_of(Term::elem()), q()),
            Formula::forall(x.clone(), Formula::or(p_of(x.term()), q())),
        ),
        Formula::Bot,
        Formula::implies(Formula::Bot, q()),
    ];
    let depth = cfg.depth;
    pad(base, cfg, move |rng| {
        gen_source(rng, depth, &mut Vec::new(), &mut 0)
    })
}

fn gen_linear(
    rng: &mut ChaCha8Rng,
    depth: usize,
    scope: &mut Vec<TypedVar>,
    next_var: &mut usize,
) -> Formula {
    if depth == 0 || rng.gen_range(0..6) == 0 {
        return match rng.gen_range(0..4) {
            0 => q(),
            1 => Formula::Zero,
            2 if !scope.is_empty() => {
                let v = &scope[rng.gen_range(0..scope.len())];
                p_of(v.term())
            }
            _ => p_of(Term::elem()),
        };
    }
    match rng.gen_range(0..7) {
        0 => Formula::tensor(
            gen_linear(rng, depth - 1, scope, next_var),
            gen_linear(rng, depth - 1, scope, next_var),
        ),
        1 => Formula::with(
            gen_linear(rng, depth - 1, scope, next_var),
            gen_linear(rng, depth - 1, scope, next_var),
        ),
        2 => Formula::plus(
            gen_linear(rng, depth - 1, scope, next_var),
            gen_linear(rng, depth - 1, scope, next_var),
        ),
        3 => Formula::lolli(
            gen_linear(rng, depth - 1, scope, next_var),
            gen_linear(rng, depth - 1, scope, next_var),
        ),
        4 => Formula::bang(gen_linear(rng, depth - 1, scope, next_var)),
        k => {
            let v = xi(format!("v{next_var}"));
            *next_var += 1;
            scope.push(v.clone());
            let body = gen_linear(rng, depth - 1, scope, next_var);
            scope.pop();
            if k == 5 {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

/// Closed linear formulas over the same signature, exponentials included.
pub fn linear_formulas(cfg: &CorpusConfig) -> Vec<Formula> {
    let x = xi("x");
    let y = xi("y");
    let base = vec![
        p_of(Term::elem()),
        Formula::bang(p_of(Term::elem())),
        Formula::lolli(p_of(Term::elem()), p_of(Term::elem())),
        Formula::plus(p_of(Term::elem()), q()),
        Formula::with(p_of(Term::elem()), q()),
        Formula::tensor(p_of(Term::elem()), q()),
        Formula::bang(Formula::forall(x.clone(), p_of(x.term()))),
        Formula::forall(
            x.clone(),
            Formula::exists(y.clone(), Formula::lolli(p_of(x.term()), p_of(y.term()))),
        ),
        Formula::lolli(Formula::bang(p_of(Term::elem())), q()),
        Formula::lolli(
            Formula::forall(x.clone(), p_of(x.term())),
            Formula::exists(y.clone(), p_of(y.term())),
        ),
        Formula::bang(Formula::plus(p_of(Term::elem()), q())),
        Formula::exists(x.clone(), Formula::bang(p_of(x.term()))),
    ];
    let depth = cfg.depth;
    pad(base, cfg, move |rng| {
        gen_linear(rng, depth, &mut Vec::new(), &mut 0)
    })
}

/// Quantifier-free linear matrices with one designated challenge variable;
/// used to certify the modality conditions.  A single challenge keeps the
/// function spaces quantified by the composition condition enumerable at
/// desk scale; the tuple-level term builders are exercised by the
/// extraction fixtures.
pub fn challenge_matrices(cfg: &CorpusConfig) -> Vec<(Vec<TypedVar>, Formula)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = BTreeSet::new();
    let mut out: Vec<(Vec<TypedVar>, Formula)> = Vec::new();
    let y0 = xi("y0");
    let u = xi("u");

    fn leaf(rng: &mut ChaCha8Rng, vars: &[TypedVar]) -> Formula {
        match rng.gen_range(0..4) {
            0 => Formula::atom("Q"),
            1 => Formula::Zero,
            _ => {
                let v = &vars[rng.gen_range(0..vars.len())];
                Formula::atom_app("P", vec![v.term()])
            }
        }
    }

    fn gen_matrix(rng: &mut ChaCha8Rng, depth: usize, vars: &[TypedVar]) -> Formula {
        if depth == 0 || rng.gen_range(0..4) == 0 {
            return leaf(rng, vars);
        }
        let a = gen_matrix(rng, depth - 1, vars);
        let b = gen_matrix(rng, depth - 1, vars);
        match rng.gen_range(0..4) {
            0 => Formula::tensor(a, b),
            1 => Formula::with(a, b),
            2 => Formula::plus(a, b),
            _ => Formula::lolli(a, b),
        }
    }

    let mut guard = 0;
    while out.len() < cfg.count && guard < cfg.count * 50 {
        guard += 1;
        let ys = vec![y0.clone()];
        let vars = [y0.clone(), u.clone()];
        let m = gen_matrix(&mut rng, cfg.depth.min(2), &vars);
        if seen.insert((ys.clone(), m.clone())) {
            out.push((ys, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{validate_formula, SystemId};

    #[test]
    fn corpora_are_deterministic_and_well_formed() {
        let cfg = CorpusConfig::default();
        let a = source_formulas(&cfg);
        let b = source_formulas(&cfg);
        assert_eq!(a, b);
        assert!(a.len() >= cfg.count.min(16));
        for f in &a {
            assert!(validate_formula(f, SystemId::Il).is_ok(), "{f:?}");
            assert!(crate::subst::formula_free_vars(f).is_empty(), "{f:?}");
        }
        for f in linear_formulas(&cfg) {
            assert!(validate_formula(&f, SystemId::Ill).is_ok(), "{f:?}");
            assert!(crate::subst::formula_free_vars(&f).is_empty(), "{f:?}");
        }
        for (ys, m) in challenge_matrices(&cfg) {
            assert!(m.is_quantifier_free());
            assert!(!ys.is_empty());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = source_formulas(&CorpusConfig {
            seed: 0,
            ..CorpusConfig::default()
        });
        let b = source_formulas(&CorpusConfig {
            seed: 1,
            ..CorpusConfig::default()
        });
        assert_ne!(a, b);
    }
}

//! Brute-force finite-model evaluation.
//!
//! Formulas are evaluated under the classical collapse: both conjunctions
//! become "and", the disjunction "or", linear implication material
//! implication, and the exponential is transparent.  Quantifiers range over
//! explicit finite carriers: the ground type gets a carrier of the chosen
//! size, arrows the full function space, and finite-set types all nonempty
//! subsets (the set constants only ever build nonempty sets).
//!
//! The collapse validates every axiom of the verifying system, which makes
//! it a sound refuter: a formula pair that the collapse distinguishes is
//! not provably equivalent.  It is deliberately blind to resource usage, so
//! passing is never treated as a proof.
//!
//! All enumeration is deterministic; a budget caps the number of evaluation
//! steps and turns runaway searches into an explicit inconclusive verdict.

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::term::{
    Term, TypedVar, CONST_COMP, CONST_COND, CONST_ELEM, CONST_FALSE, CONST_JOIN, CONST_PI,
    CONST_SIGMA, CONST_SINGLE, CONST_TRUE,
};
use crate::types::FiniteType;

/// Environment variable overriding the default evaluation budget.
pub const BUDGET_ENV: &str = "LINWIT_MAX_ASSIGNMENTS";

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation budget exceeded")]
    BudgetExceeded,
    #[error("unbound variable `{0}` during evaluation")]
    Unbound(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("carrier of type {0} is too large to enumerate")]
    CarrierTooLarge(String),
}

/// A step counter shared across one evaluation task.
#[derive(Debug, Clone)]
pub struct EvalBudget {
    remaining: u64,
}

impl EvalBudget {
    pub fn new(steps: u64) -> EvalBudget {
        EvalBudget { remaining: steps }
    }

    /// Budget from the environment override, or the default.
    pub fn standard() -> EvalBudget {
        let steps = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        EvalBudget::new(steps)
    }

    fn spend(&mut self, n: u64) -> Result<(), EvalError> {
        if self.remaining < n {
            self.remaining = 0;
            return Err(EvalError::BudgetExceeded);
        }
        self.remaining -= n;
        Ok(())
    }
}

/// A first-order value over the finite carriers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Base(u32),
    Bool(bool),
    /// A function as a lookup table indexed by the domain carrier order.
    Fun {
        domain: Rc<FiniteType>,
        table: Rc<Vec<Value>>,
    },
    /// A nonempty finite set, sorted and deduplicated.
    Set(Rc<Vec<Value>>),
    Tuple(Rc<Vec<Value>>),
}

impl Value {
    fn set(mut items: Vec<Value>) -> Value {
        items.sort();
        items.dedup();
        Value::Set(Rc::new(items))
    }
}

/// Predicate symbols with their argument types.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub atoms: BTreeMap<String, Vec<FiniteType>>,
}

impl Signature {
    /// Collects every atom of the given formulas, rejecting conflicting
    /// arities or argument types for the same symbol.
    pub fn infer(formulas: &[&Formula]) -> Result<Signature, EvalError> {
        let mut sig = Signature::default();
        for f in formulas {
            collect_atoms(f, &mut sig)?;
        }
        Ok(sig)
    }
}

fn collect_atoms(f: &Formula, sig: &mut Signature) -> Result<(), EvalError> {
    if let Formula::Atom(p, args) = f {
        let mut tys = Vec::new();
        for a in args {
            let ty = crate::term::typecheck_closed_under_annotations(a)
                .map_err(|e| EvalError::SignatureMismatch(e.to_string()))?;
            tys.push(ty);
        }
        if let Some(prev) = sig.atoms.get(p) {
            if *prev != tys {
                return Err(EvalError::SignatureMismatch(format!(
                    "atom `{p}` used at incompatible argument types"
                )));
            }
        } else {
            sig.atoms.insert(p.clone(), tys);
        }
    }
    for t in f.node_terms() {
        collect_atoms_term(t, sig)?;
    }
    for c in f.children() {
        collect_atoms(c, sig)?;
    }
    if let Formula::Forall(_, b) | Formula::Exists(_, b) = f {
        collect_atoms(b, sig)?;
    }
    Ok(())
}

fn collect_atoms_term(t: &Term, sig: &mut Signature) -> Result<(), EvalError> {
    match t {
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            collect_atoms(matrix, sig)?;
            collect_atoms_term(if_false, sig)?;
            collect_atoms_term(if_true, sig)
        }
        Term::App(f, a) => {
            collect_atoms_term(f, sig)?;
            collect_atoms_term(a, sig)
        }
        Term::Lam(_, b) => collect_atoms_term(b, sig),
        Term::Cond(s, a, b) => {
            collect_atoms_term(s, sig)?;
            collect_atoms_term(a, sig)?;
            collect_atoms_term(b, sig)
        }
        Term::Tuple(ts) => ts.iter().try_for_each(|t| collect_atoms_term(t, sig)),
        _ => Ok(()),
    }
}

/// One truth table per predicate symbol, rows indexed by the mixed-radix
/// encoding of argument carrier indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    pub arg_types: Vec<FiniteType>,
    pub rows: Vec<bool>,
}

/// A finite model: carrier size for the ground type plus atom tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub base_size: usize,
    pub atoms: BTreeMap<String, AtomTable>,
}

impl FiniteModel {
    /// Number of values of `ty`, if it fits in a `u64`.
    pub fn carrier_size(&self, ty: &FiniteType) -> Option<u64> {
        match ty {
            FiniteType::Base => Some(self.base_size as u64),
            FiniteType::Bool => Some(2),
            FiniteType::Arrow(a, b) => {
                let da = self.carrier_size(a)?;
                let db = self.carrier_size(b)?;
                db.checked_pow(u32::try_from(da).ok()?)
            }
            FiniteType::FinSet(a) => {
                let da = self.carrier_size(a)?;
                if da >= 63 {
                    return None;
                }
                Some((1u64 << da) - 1)
            }
        }
    }

    /// All values of `ty` in index order.
    pub fn carrier(
        &self,
        ty: &FiniteType,
        budget: &mut EvalBudget,
    ) -> Result<Vec<Value>, EvalError> {
        let size = self
            .carrier_size(ty)
            .ok_or_else(|| EvalError::CarrierTooLarge(ty.to_string()))?;
        budget.spend(size)?;
        match ty {
            FiniteType::Base => Ok((0..self.base_size as u32).map(Value::Base).collect()),
            FiniteType::Bool => Ok(vec![Value::Bool(false), Value::Bool(true)]),
            FiniteType::Arrow(a, b) => {
                let dom = self.carrier(a, budget)?;
                let cod = self.carrier(b, budget)?;
                let mut out = Vec::with_capacity(size as usize);
                for fi in 0..size {
                    let mut table = Vec::with_capacity(dom.len());
                    let mut rest = fi;
                    for _ in 0..dom.len() {
                        table.push(cod[(rest % cod.len() as u64) as usize].clone());
                        rest /= cod.len() as u64;
                    }
                    out.push(Value::Fun {
                        domain: Rc::new((**a).clone()),
                        table: Rc::new(table),
                    });
                }
                Ok(out)
            }
            FiniteType::FinSet(a) => {
                let elems = self.carrier(a, budget)?;
                let mut out = Vec::with_capacity(size as usize);
                for mask in 1u64..=size {
                    let items: Vec<Value> = elems
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, v)| v.clone())
                        .collect();
                    out.push(Value::set(items));
                }
                Ok(out)
            }
        }
    }

    /// Index of `v` within the carrier of `ty`.
    fn value_index(&self, v: &Value, ty: &FiniteType) -> u64 {
        match (v, ty) {
            (Value::Base(k), FiniteType::Base) => *k as u64,
            (Value::Bool(b), FiniteType::Bool) => *b as u64,
            (Value::Fun { table, .. }, FiniteType::Arrow(_, b)) => {
                let cod = self.carrier_size(b).expect("codomain too large");
                let mut idx = 0u64;
                for entry in table.iter().rev() {
                    idx = idx * cod + self.value_index(entry, b);
                }
                idx
            }
            (Value::Set(items), FiniteType::FinSet(a)) => {
                let mut mask = 0u64;
                for item in items.iter() {
                    mask |= 1 << self.value_index(item, a);
                }
                mask - 1
            }
            _ => panic!("value/type mismatch during indexing"),
        }
    }

    fn apply(&self, f: &Value, arg: &Value) -> Value {
        match f {
            Value::Fun { domain, table } => table[self.value_index(arg, domain) as usize].clone(),
            _ => panic!("applied a non-function value"),
        }
    }
}

type Env = BTreeMap<String, Value>;

/// Materializes a built-in constant as a table at its type instance.
fn builtin(
    name: &str,
    ty: &FiniteType,
    model: &FiniteModel,
    budget: &mut EvalBudget,
) -> Result<Value, EvalError> {
    match name {
        CONST_ELEM => Ok(Value::Base(0)),
        CONST_TRUE => Ok(Value::Bool(true)),
        CONST_FALSE => Ok(Value::Bool(false)),
        CONST_PI => tabulate(ty, model, budget, &mut Vec::new(), &|_model, args| {
            Ok(args[0].clone())
        }),
        CONST_SIGMA => tabulate(ty, model, budget, &mut Vec::new(), &|model, args| {
            let xz = model.apply(&args[0], &args[2]);
            let yz = model.apply(&args[1], &args[2]);
            Ok(model.apply(&xz, &yz))
        }),
        CONST_COND => tabulate(ty, model, budget, &mut Vec::new(), &|_model, args| {
            Ok(match args[0] {
                Value::Bool(true) => args[1].clone(),
                _ => args[2].clone(),
            })
        }),
        CONST_SINGLE => tabulate(ty, model, budget, &mut Vec::new(), &|_model, args| {
            Ok(Value::set(vec![args[0].clone()]))
        }),
        CONST_JOIN => tabulate(ty, model, budget, &mut Vec::new(), &|_model, args| {
            let (Value::Set(a), Value::Set(b)) = (&args[0], &args[1]) else {
                panic!("set union over non-sets");
            };
            let mut items = (**a).clone();
            items.extend((**b).iter().cloned());
            Ok(Value::set(items))
        }),
        CONST_COMP => tabulate(ty, model, budget, &mut Vec::new(), &|model, args| {
            let Value::Set(xs) = &args[1] else {
                panic!("indexed union over a non-set");
            };
            let mut items = Vec::new();
            for x in xs.iter() {
                match model.apply(&args[0], x) {
                    Value::Set(ys) => items.extend(ys.iter().cloned()),
                    _ => panic!("indexed union of non-set images"),
                }
            }
            Ok(Value::set(items))
        }),
        other => Err(EvalError::SignatureMismatch(format!(
            "unknown constant `{other}`"
        ))),
    }
}

type Kernel<'k> = &'k dyn Fn(&FiniteModel, &[Value]) -> Result<Value, EvalError>;

fn tabulate(
    ty: &FiniteType,
    model: &FiniteModel,
    budget: &mut EvalBudget,
    args: &mut Vec<Value>,
    kernel: Kernel<'_>,
) -> Result<Value, EvalError> {
    match ty {
        FiniteType::Arrow(a, b) => {
            let dom = model.carrier(a, budget)?;
            let mut table = Vec::with_capacity(dom.len());
            for v in dom {
                args.push(v);
                table.push(tabulate(b, model, budget, args, kernel)?);
                args.pop();
            }
            Ok(Value::Fun {
                domain: Rc::new((**a).clone()),
                table: Rc::new(table),
            })
        }
        _ => kernel(model, args),
    }
}

/// Evaluates a term under an environment covering its free variables.
pub fn eval_term(
    t: &Term,
    model: &FiniteModel,
    env: &Env,
    budget: &mut EvalBudget,
) -> Result<Value, EvalError> {
    budget.spend(1)?;
    match t {
        Term::Var(v) => env
            .get(&v.name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(v.name.clone())),
        Term::Const(name, ty) => builtin(name, ty, model, budget),
        Term::App(f, a) => {
            let fv = eval_term(f, model, env, budget)?;
            let av = eval_term(a, model, env, budget)?;
            Ok(model.apply(&fv, &av))
        }
        Term::Lam(v, body) => {
            let dom = model.carrier(&v.ty, budget)?;
            let mut table = Vec::with_capacity(dom.len());
            for val in dom {
                let mut inner = env.clone();
                inner.insert(v.name.clone(), val);
                table.push(eval_term(body, model, &inner, budget)?);
            }
            Ok(Value::Fun {
                domain: Rc::new(v.ty.clone()),
                table: Rc::new(table),
            })
        }
        Term::Cond(s, a, b) => match eval_term(s, model, env, budget)? {
            Value::Bool(true) => eval_term(a, model, env, budget),
            _ => eval_term(b, model, env, budget),
        },
        Term::Tuple(ts) => {
            let mut vals = Vec::with_capacity(ts.len());
            for t in ts {
                vals.push(eval_term(t, model, env, budget)?);
            }
            Ok(Value::Tuple(Rc::new(vals)))
        }
        Term::DecCases {
            matrix,
            if_false,
            if_true,
        } => {
            if eval_formula(matrix, model, env, budget)? {
                eval_term(if_true, model, env, budget)
            } else {
                eval_term(if_false, model, env, budget)
            }
        }
    }
}

/// Evaluates a formula to a classical truth value.
pub fn eval_formula(
    a: &Formula,
    model: &FiniteModel,
    env: &Env,
    budget: &mut EvalBudget,
) -> Result<bool, EvalError> {
    budget.spend(1)?;
    match a {
        Formula::Atom(p, args) => {
            let table = model
                .atoms
                .get(p)
                .ok_or_else(|| EvalError::SignatureMismatch(format!("atom `{p}` has no table")))?;
            if table.arg_types.len() != args.len() {
                return Err(EvalError::SignatureMismatch(format!(
                    "atom `{p}` applied at the wrong arity"
                )));
            }
            let mut idx = 0u64;
            for (arg, ty) in args.iter().zip(&table.arg_types).rev() {
                let size = model
                    .carrier_size(ty)
                    .ok_or_else(|| EvalError::CarrierTooLarge(ty.to_string()))?;
                let v = eval_term(arg, model, env, budget)?;
                idx = idx * size + model.value_index(&v, ty);
            }
            Ok(table.rows[idx as usize])
        }
        Formula::Zero | Formula::Bot => Ok(false),
        Formula::Tensor(x, y) | Formula::With(x, y) | Formula::And(x, y) => {
            Ok(eval_formula(x, model, env, budget)? && eval_formula(y, model, env, budget)?)
        }
        Formula::Plus(x, y) | Formula::Or(x, y) => {
            Ok(eval_formula(x, model, env, budget)? || eval_formula(y, model, env, budget)?)
        }
        Formula::Lolli(x, y) | Formula::Implies(x, y) => {
            Ok(!eval_formula(x, model, env, budget)? || eval_formula(y, model, env, budget)?)
        }
        Formula::Bang(x) => eval_formula(x, model, env, budget),
        Formula::BoolEq(t, q) => {
            Ok(eval_term(t, model, env, budget)? == eval_term(q, model, env, budget)?)
        }
        Formula::Member(t, s) => {
            let tv = eval_term(t, model, env, budget)?;
            match eval_term(s, model, env, budget)? {
                Value::Set(items) => Ok(items.contains(&tv)),
                _ => Err(EvalError::SignatureMismatch(
                    "membership in a non-set".into(),
                )),
            }
        }
        Formula::Forall(v, body) => {
            for val in model.carrier(&v.ty, budget)? {
                let mut inner = env.clone();
                inner.insert(v.name.clone(), val);
                if !eval_formula(body, model, &inner, budget)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, body) => {
            for val in model.carrier(&v.ty, budget)? {
                let mut inner = env.clone();
                inner.insert(v.name.clone(), val);
                if eval_formula(body, model, &inner, budget)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Controls how atom tables are enumerated per model size.
#[derive(Debug, Clone)]
pub struct Sampling {
    /// Enumerate every table combination up to this many models.
    pub exhaustive_cap: u64,
    /// Otherwise draw this many seeded samples.
    pub sample_count: u64,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Sampling {
        Sampling {
            exhaustive_cap: 4096,
            sample_count: 128,
            seed: 0,
        }
    }
}

/// All models of the signature at the given carrier size, exhaustively when
/// small enough and seeded-sampled beyond the cap.
fn table_rows(sig: &Signature, base_size: usize) -> Result<Vec<(String, Vec<FiniteType>, u64)>, EvalError> {
    let probe = FiniteModel {
        base_size,
        atoms: BTreeMap::new(),
    };
    let mut row_counts = Vec::new();
    for (name, tys) in &sig.atoms {
        let mut rows = 1u64;
        for ty in tys {
            let sz = probe
                .carrier_size(ty)
                .ok_or_else(|| EvalError::CarrierTooLarge(ty.to_string()))?;
            rows = rows
                .checked_mul(sz)
                .ok_or_else(|| EvalError::CarrierTooLarge(ty.to_string()))?;
        }
        row_counts.push((name.clone(), tys.clone(), rows));
    }
    Ok(row_counts)
}

/// True when every table combination of the signature at this size fits
/// under the sampling cap, so the model stream is exhaustive.
pub fn exhaustive_at(
    sig: &Signature,
    base_size: usize,
    sampling: &Sampling,
) -> Result<bool, EvalError> {
    let total_bits: u64 = table_rows(sig, base_size)?.iter().map(|(_, _, r)| *r).sum();
    Ok(total_bits <= 62 && (1u64 << total_bits) <= sampling.exhaustive_cap)
}

pub fn models(
    sig: &Signature,
    base_size: usize,
    sampling: &Sampling,
) -> Result<Vec<FiniteModel>, EvalError> {
    let row_counts = table_rows(sig, base_size)?;
    let total_bits: u64 = row_counts.iter().map(|(_, _, r)| *r).sum();
    let exhaustive = total_bits <= 62 && (1u64 << total_bits) <= sampling.exhaustive_cap;

    let build = |bits: &mut dyn FnMut() -> bool| -> FiniteModel {
        let mut atoms = BTreeMap::new();
        for (name, tys, rows) in &row_counts {
            let table: Vec<bool> = (0..*rows).map(|_| bits()).collect();
            atoms.insert(
                name.clone(),
                AtomTable {
                    arg_types: tys.clone(),
                    rows: table,
                },
            );
        }
        FiniteModel { base_size, atoms }
    };

    let mut out = Vec::new();
    if exhaustive {
        for combo in 0..(1u64 << total_bits) {
            let mut cursor = 0;
            let mut next = || {
                let b = combo & (1 << cursor) != 0;
                cursor += 1;
                b
            };
            out.push(build(&mut next));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        for _ in 0..sampling.sample_count {
            let mut next = || rng.gen_bool(0.5);
            out.push(build(&mut next));
        }
    }
    Ok(out)
}

/// A sequent instance ready for model checking: environment variables to
/// range over, hypothesis matrices and the conclusion matrix with all
/// witness/challenge positions already instantiated.
#[derive(Debug, Clone)]
pub struct SequentInstance {
    pub env_vars: Vec<TypedVar>,
    pub hyp_matrices: Vec<Formula>,
    pub concl_matrix: Formula,
}

/// Enumerates all assignments of the given variables.
fn assignments(
    vars: &[TypedVar],
    model: &FiniteModel,
    budget: &mut EvalBudget,
) -> Result<Vec<Env>, EvalError> {
    let mut carriers = Vec::new();
    let mut total = 1u64;
    for v in vars {
        let c = model.carrier(&v.ty, budget)?;
        total = total
            .checked_mul(c.len() as u64)
            .ok_or_else(|| EvalError::CarrierTooLarge(v.ty.to_string()))?;
        carriers.push(c);
    }
    budget.spend(total)?;
    let mut out = Vec::with_capacity(total as usize);
    let mut idxs = vec![0usize; vars.len()];
    loop {
        let env: Env = vars
            .iter()
            .enumerate()
            .map(|(k, v)| (v.name.clone(), carriers[k][idxs[k]].clone()))
            .collect();
        out.push(env);
        let mut k = 0;
        loop {
            if k == vars.len() {
                return Ok(out);
            }
            idxs[k] += 1;
            if idxs[k] < carriers[k].len() {
                break;
            }
            idxs[k] = 0;
            k += 1;
        }
    }
}

/// True iff in every assignment where all hypothesis matrices hold, the
/// conclusion matrix holds.
pub fn verify_instance(
    inst: &SequentInstance,
    model: &FiniteModel,
    budget: &mut EvalBudget,
) -> Result<bool, EvalError> {
    for env in assignments(&inst.env_vars, model, budget)? {
        let mut all = true;
        for h in &inst.hyp_matrices {
            if !eval_formula(h, model, &env, budget)? {
                all = false;
                break;
            }
        }
        if all && !eval_formula(&inst.concl_matrix, model, &env, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs a witness report against every model of its signature up to
/// `max_size`.
pub fn verify_extraction_model(
    r: &crate::extract::ExtractionResult,
    model: &FiniteModel,
    budget: &mut EvalBudget,
) -> Result<bool, EvalError> {
    verify_instance(&r.sequent_instance(), model, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    Inequivalent,
    Inconclusive,
}

/// Decides whether two formulas evaluate identically in every model of the
/// signature with carrier size up to `size_bound`, over every assignment of
/// their shared free variables.
pub fn semantic_equiv(
    a: &Formula,
    b: &Formula,
    size_bound: usize,
    sig: &Signature,
    sampling: &Sampling,
    budget: &mut EvalBudget,
) -> Result<EquivVerdict, EvalError> {
    let mut vars: BTreeMap<String, TypedVar> = BTreeMap::new();
    for v in crate::subst::formula_free_vars(a)
        .into_iter()
        .chain(crate::subst::formula_free_vars(b))
    {
        if let Some(prev) = vars.get(&v.name) {
            if prev.ty != v.ty {
                return Err(EvalError::SignatureMismatch(format!(
                    "free variable `{}` used at two types",
                    v.name
                )));
            }
        } else {
            vars.insert(v.name.clone(), v);
        }
    }
    let vars: Vec<TypedVar> = vars.into_values().collect();
    for size in 1..=size_bound {
        for model in models(sig, size, sampling)? {
            let envs = match assignments(&vars, &model, budget) {
                Ok(e) => e,
                Err(EvalError::BudgetExceeded) => return Ok(EquivVerdict::Inconclusive),
                Err(e) => return Err(e),
            };
            for env in envs {
                let ra = eval_formula(a, &model, &env, budget);
                let rb = eval_formula(b, &model, &env, budget);
                match (ra, rb) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (Ok(_), Ok(_)) => return Ok(EquivVerdict::Inequivalent),
                    (Err(EvalError::BudgetExceeded), _) | (_, Err(EvalError::BudgetExceeded)) => {
                        return Ok(EquivVerdict::Inconclusive)
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
        }
    }
    Ok(EquivVerdict::Equivalent)
}

/// True iff the formula evaluates to true in every model up to the size
/// bound and every assignment of its free variables.
pub fn formula_valid(
    a: &Formula,
    size_bound: usize,
    sig: &Signature,
    sampling: &Sampling,
    budget: &mut EvalBudget,
) -> Result<EquivVerdict, EvalError> {
    let vars: Vec<TypedVar> = crate::subst::formula_free_vars(a).into_iter().collect();
    for size in 1..=size_bound {
        for model in models(sig, size, sampling)? {
            let envs = match assignments(&vars, &model, budget) {
                Ok(e) => e,
                Err(EvalError::BudgetExceeded) => return Ok(EquivVerdict::Inconclusive),
                Err(e) => return Err(e),
            };
            for env in envs {
                match eval_formula(a, &model, &env, budget) {
                    Ok(true) => {}
                    Ok(false) => return Ok(EquivVerdict::Inequivalent),
                    Err(EvalError::BudgetExceeded) => return Ok(EquivVerdict::Inconclusive),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(EquivVerdict::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::diamond;
    use crate::types::FiniteType as Ty;

    fn model2() -> FiniteModel {
        FiniteModel {
            base_size: 2,
            atoms: BTreeMap::new(),
        }
    }

    fn budget() -> EvalBudget {
        EvalBudget::new(1_000_000)
    }

    #[test]
    fn set_union_of_singletons() {
        // join(single(x), single(y)) with x -> 0, y -> 1 is {0, 1}.
        let m = model2();
        let mut b = budget();
        let t = Term::apps(
            Term::join_const(&Ty::Base),
            [
                Term::app(Term::single_const(&Ty::Base), Term::var("x", Ty::Base)),
                Term::app(Term::single_const(&Ty::Base), Term::var("y", Ty::Base)),
            ],
        );
        let mut env = Env::new();
        env.insert("x".into(), Value::Base(0));
        env.insert("y".into(), Value::Base(1));
        let v = eval_term(&t, &m, &env, &mut b).unwrap();
        assert_eq!(v, Value::set(vec![Value::Base(0), Value::Base(1)]));
    }

    #[test]
    fn conditional_picks_by_scrutinee() {
        let m = model2();
        let mut b = budget();
        let t = Term::cond(
            Term::truth(),
            Term::var("x", Ty::Base),
            Term::var("y", Ty::Base),
        );
        let mut env = Env::new();
        env.insert("x".into(), Value::Base(0));
        env.insert("y".into(), Value::Base(1));
        assert_eq!(eval_term(&t, &m, &env, &mut b).unwrap(), Value::Base(0));
    }

    #[test]
    fn indexed_union_collects_images() {
        // comp (lam x. single x) {0,1} = {0,1}.
        let m = model2();
        let mut b = budget();
        let x = TypedVar::new("x", Ty::Base);
        let f = Term::lam(
            x.clone(),
            Term::app(Term::single_const(&Ty::Base), x.term()),
        );
        let t = Term::apps(
            Term::comp_const(&Ty::Base, &Ty::Base),
            [f, Term::var("s", Ty::fin_set(Ty::Base))],
        );
        let mut env = Env::new();
        env.insert("s".into(), Value::set(vec![Value::Base(0), Value::Base(1)]));
        assert_eq!(
            eval_term(&t, &m, &env, &mut b).unwrap(),
            Value::set(vec![Value::Base(0), Value::Base(1)])
        );
    }

    #[test]
    fn zero_is_false_and_guarded_diamond_projects() {
        let mut b = budget();
        let sig = Signature::infer(&[&Formula::atom("P"), &Formula::atom("Q")]).unwrap();
        let all = models(&sig, 1, &Sampling::default()).unwrap();
        assert_eq!(all.len(), 4);
        for m in &all {
            assert!(!eval_formula(&Formula::Zero, m, &Env::new(), &mut b).unwrap());
            let dia = diamond(Term::truth(), Formula::atom("P"), Formula::atom("Q"));
            let p = eval_formula(&Formula::atom("P"), m, &Env::new(), &mut b).unwrap();
            assert_eq!(eval_formula(&dia, m, &Env::new(), &mut b).unwrap(), p);
        }
    }

    #[test]
    fn forall_true_under_all_true_table() {
        let mut b = budget();
        let x = TypedVar::new("x", Ty::Base);
        let f = Formula::forall(x.clone(), Formula::atom_app("P", vec![x.term()]));
        let mut atoms = BTreeMap::new();
        atoms.insert(
            "P".into(),
            AtomTable {
                arg_types: vec![Ty::Base],
                rows: vec![true, true],
            },
        );
        let m = FiniteModel {
            base_size: 2,
            atoms,
        };
        assert!(eval_formula(&f, &m, &Env::new(), &mut b).unwrap());
    }

    #[test]
    fn trivial_equivalences() {
        let mut b = budget();
        let p = Formula::atom("P");
        let q = Formula::atom("Q");
        let sig = Signature::infer(&[&p, &q]).unwrap();
        let s = Sampling::default();
        assert_eq!(
            semantic_equiv(&p, &p, 2, &sig, &s, &mut b).unwrap(),
            EquivVerdict::Equivalent
        );
        assert_eq!(
            semantic_equiv(
                &Formula::with(p.clone(), p.clone()),
                &p,
                2,
                &sig,
                &s,
                &mut b
            )
            .unwrap(),
            EquivVerdict::Equivalent
        );
        assert_eq!(
            semantic_equiv(&p, &q, 1, &sig, &s, &mut b).unwrap(),
            EquivVerdict::Inequivalent
        );
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let mut b = EvalBudget::new(3);
        let p = Formula::atom("P");
        let sig = Signature::infer(&[&p]).unwrap();
        assert_eq!(
            semantic_equiv(&p, &p, 2, &sig, &Sampling::default(), &mut b).unwrap(),
            EquivVerdict::Inconclusive
        );
    }

    #[test]
    fn normalization_preserves_evaluation() {
        let m = model2();
        let x = TypedVar::new("x", Ty::Base);
        let t = Term::app(
            Term::lam(
                x.clone(),
                Term::app(Term::single_const(&Ty::Base), x.term()),
            ),
            Term::elem(),
        );
        let n = crate::normalize::normalize(&t);
        let mut b1 = budget();
        let mut b2 = budget();
        assert_eq!(
            eval_term(&t, &m, &Env::new(), &mut b1).unwrap(),
            eval_term(&n, &m, &Env::new(), &mut b2).unwrap()
        );
    }

    #[test]
    fn fin_set_carrier_is_nonempty_subsets() {
        let m = model2();
        let mut b = budget();
        let c = m.carrier(&Ty::fin_set(Ty::Base), &mut b).unwrap();
        assert_eq!(c.len(), 3);
        for v in c {
            match v {
                Value::Set(items) => assert!(!items.is_empty()),
                _ => panic!("expected sets"),
            }
        }
    }
}

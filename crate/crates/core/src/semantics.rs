//! Satisfaction by structural recursion, and the validity notions built on
//! it.
//!
//! Two evaluators share one precondition check: [`eval`] follows the
//! recursion literally world by world, [`truth_set`] computes the set of
//! worlds where a formula holds in one bottom-up pass. The enumeration
//! routines use the second; witnesses are rechecked with the first.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::model::{
    low_bits, tuple_count, tuple_of, DomainFrame, DomainMode, FoModel, Frame, Model, PropModel,
    WorldSet,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("scheme variable `{0}` has no instantiation")]
    UnboundScheme(String),
    #[error("variable `{0}` is not bound")]
    UnboundVar(String),
    #[error("unknown {kind} `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },
    #[error("`{name}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{0} needs a first-order model")]
    NotFirstOrder(&'static str),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Bindings of variables to domain elements; later bindings shadow
/// earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Env(Vec<(String, usize)>);

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, element: usize) {
        self.0.push((var.into(), element));
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.iter().rev().find(|(v, _)| v == var).map(|&(_, d)| d)
    }

    /// Effective bindings, one per variable, in name order.
    pub fn bindings(&self) -> BTreeMap<String, usize> {
        self.0.iter().cloned().collect()
    }

    fn pop(&mut self) {
        self.0.pop();
    }
}

/// What a formula is evaluated against.
pub trait Interpretation: Sync {
    fn frame(&self) -> &Frame;

    /// Worlds where a proposition letter holds; absent letters are false.
    fn prop(&self, name: &str) -> WorldSet;

    fn scheme(&self, _name: &str) -> Option<WorldSet> {
        None
    }

    fn domain(&self) -> Option<&DomainFrame> {
        None
    }

    /// Elements the quantifiers range over at `world`.
    fn range_at(&self, _world: usize) -> u64 {
        0
    }

    fn predicate_arity(&self, _name: &str) -> Option<usize> {
        None
    }

    /// Worlds where the predicate holds of `args`. Only called after
    /// [`Interpretation::predicate_arity`] confirmed the symbol.
    fn predicate(&self, _name: &str, _args: &[usize]) -> WorldSet {
        WorldSet::EMPTY
    }

    fn constant(&self, _name: &str) -> Option<usize> {
        None
    }
}

impl Interpretation for PropModel {
    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn prop(&self, name: &str) -> WorldSet {
        self.truth(name)
    }
}

impl Interpretation for FoModel {
    fn frame(&self) -> &Frame {
        &self.dframe.frame
    }

    fn prop(&self, name: &str) -> WorldSet {
        self.valuation().get(name).copied().unwrap_or_default()
    }

    fn domain(&self) -> Option<&DomainFrame> {
        Some(&self.dframe)
    }

    fn range_at(&self, world: usize) -> u64 {
        FoModel::range_at(self, world)
    }

    fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.flexible_preds()
            .get(name)
            .map(|p| p.arity)
            .or_else(|| self.rigid_preds().get(name).map(|p| p.arity))
    }

    fn predicate(&self, name: &str, args: &[usize]) -> WorldSet {
        let t = crate::model::tuple_index(args, self.domain_len());
        if let Some(p) = self.flexible_preds().get(name) {
            return p.truth[t];
        }
        match self.rigid_preds().get(name) {
            Some(p) if p.truth[t] => self.frame().all(),
            _ => WorldSet::EMPTY,
        }
    }

    fn constant(&self, name: &str) -> Option<usize> {
        self.rigid_consts().get(name).copied()
    }
}

impl Interpretation for Model {
    fn frame(&self) -> &Frame {
        Model::frame(self)
    }

    fn prop(&self, name: &str) -> WorldSet {
        match self {
            Model::Prop(m) => m.prop(name),
            Model::Fo(m) => Interpretation::prop(m, name),
        }
    }

    fn domain(&self) -> Option<&DomainFrame> {
        self.domain_frame()
    }

    fn range_at(&self, world: usize) -> u64 {
        match self {
            Model::Prop(_) => 0,
            Model::Fo(m) => m.range_at(world),
        }
    }

    fn predicate_arity(&self, name: &str) -> Option<usize> {
        match self {
            Model::Prop(_) => None,
            Model::Fo(m) => m.predicate_arity(name),
        }
    }

    fn predicate(&self, name: &str, args: &[usize]) -> WorldSet {
        match self {
            Model::Prop(_) => WorldSet::EMPTY,
            Model::Fo(m) => Interpretation::predicate(m, name, args),
        }
    }

    fn constant(&self, name: &str) -> Option<usize> {
        match self {
            Model::Prop(_) => None,
            Model::Fo(m) => m.constant(name),
        }
    }
}

/// An interpretation of one flexible predicate, replacing whatever the
/// model says about that name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hole {
    pub name: String,
    pub arity: usize,
    /// Worlds per argument tuple, in tuple-index order.
    pub truth: Vec<WorldSet>,
}

/// A model with some atoms reassigned: proposition letters, scheme
/// variables, and at most one predicate.
#[derive(Debug, Clone)]
pub struct Instance<'a, I: ?Sized> {
    base: &'a I,
    pub props: Vec<(String, WorldSet)>,
    pub schemes: Vec<(String, WorldSet)>,
    pub hole: Option<Hole>,
}

impl<'a, I: Interpretation + ?Sized> Instance<'a, I> {
    pub fn new(base: &'a I) -> Self {
        Instance {
            base,
            props: Vec::new(),
            schemes: Vec::new(),
            hole: None,
        }
    }

    pub fn with_schemes(base: &'a I, schemes: &[(String, WorldSet)]) -> Self {
        Instance {
            schemes: schemes.to_vec(),
            ..Instance::new(base)
        }
    }
}

impl<I: Interpretation + ?Sized> Interpretation for Instance<'_, I> {
    fn frame(&self) -> &Frame {
        self.base.frame()
    }

    fn prop(&self, name: &str) -> WorldSet {
        match self.props.iter().find(|(n, _)| n == name) {
            Some(&(_, s)) => s,
            None => self.base.prop(name),
        }
    }

    fn scheme(&self, name: &str) -> Option<WorldSet> {
        match self.schemes.iter().find(|(n, _)| n == name) {
            Some(&(_, s)) => Some(s),
            None => self.base.scheme(name),
        }
    }

    fn domain(&self) -> Option<&DomainFrame> {
        self.base.domain()
    }

    fn range_at(&self, world: usize) -> u64 {
        self.base.range_at(world)
    }

    fn predicate_arity(&self, name: &str) -> Option<usize> {
        match &self.hole {
            Some(h) if h.name == name => Some(h.arity),
            _ => self.base.predicate_arity(name),
        }
    }

    fn predicate(&self, name: &str, args: &[usize]) -> WorldSet {
        match &self.hole {
            Some(h) if h.name == name => {
                let d = self.base.domain().map_or(0, |df| df.domain().len());
                h.truth[crate::model::tuple_index(args, d)]
            }
            _ => self.base.predicate(name, args),
        }
    }

    fn constant(&self, name: &str) -> Option<usize> {
        self.base.constant(name)
    }
}

/// Confirms that `f` can be evaluated in `m` with `bound` variables in
/// scope: every symbol resolves and has the right arity.
pub fn check<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    bound: &mut Vec<String>,
) -> Result<(), EvalError> {
    let term = |t: &Term, bound: &[String]| -> Result<(), EvalError> {
        match t {
            Term::Var(v) if bound.iter().any(|b| b == v.as_str()) => Ok(()),
            Term::Var(v) => Err(EvalError::UnboundVar(v.to_string())),
            Term::Const(c) if m.constant(c.as_str()).is_some() => Ok(()),
            Term::Const(c) => Err(EvalError::UnknownSymbol {
                kind: "constant",
                name: c.to_string(),
            }),
        }
    };
    match f {
        Formula::Prop(_) => Ok(()),
        Formula::Scheme(s) => match m.scheme(s.as_str()) {
            Some(_) => Ok(()),
            None => Err(EvalError::UnboundScheme(s.to_string())),
        },
        Formula::Pred(p, args) => {
            if m.domain().is_none() {
                return Err(EvalError::NotFirstOrder("predicate atom"));
            }
            let arity = m
                .predicate_arity(p.as_str())
                .ok_or_else(|| EvalError::UnknownSymbol {
                    kind: "predicate",
                    name: p.to_string(),
                })?;
            if arity != args.len() {
                return Err(EvalError::ArityMismatch {
                    name: p.to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
            args.iter().try_for_each(|t| term(t, bound))
        }
        Formula::Eq(a, b) => {
            if m.domain().is_none() {
                return Err(EvalError::NotFirstOrder("equality"));
            }
            term(a, bound)?;
            term(b, bound)
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            if m.domain().is_none() {
                return Err(EvalError::NotFirstOrder("quantifier"));
            }
            bound.push(x.to_string());
            let r = check(m, body, bound);
            bound.pop();
            r
        }
        _ => f
            .children()
            .into_iter()
            .try_for_each(|c| check(m, c, bound)),
    }
}

fn check_env<I: Interpretation + ?Sized>(m: &I, env: &Env) -> Result<Vec<String>, EvalError> {
    let d = m.domain().map_or(0, |df| df.domain().len());
    for (v, e) in &env.0 {
        if *e >= d {
            return Err(EvalError::UnknownElement(format!("{v} -> #{e}")));
        }
    }
    Ok(env.0.iter().map(|(v, _)| v.clone()).collect())
}

fn resolve<I: Interpretation + ?Sized>(m: &I, t: &Term, env: &Env) -> usize {
    match t {
        Term::Var(v) => env.get(v.as_str()).expect("checked: variable bound"),
        Term::Const(c) => m.constant(c.as_str()).expect("checked: constant known"),
    }
}

/// Truth of `f` at world `w` under `env`.
pub fn eval<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    w: usize,
    env: &Env,
) -> Result<bool, EvalError> {
    if w >= m.frame().len() {
        return Err(EvalError::UnknownWorld(format!("#{w}")));
    }
    let mut bound = check_env(m, env)?;
    check(m, f, &mut bound)?;
    Ok(eval_at(m, f, w, &mut env.clone()))
}

fn eval_at<I: Interpretation + ?Sized>(m: &I, f: &Formula, w: usize, env: &mut Env) -> bool {
    let fr = m.frame();
    match f {
        Formula::Prop(p) => m.prop(p.as_str()).contains(w),
        Formula::Scheme(s) => m
            .scheme(s.as_str())
            .expect("checked: scheme bound")
            .contains(w),
        Formula::Pred(p, args) => {
            let args: Vec<usize> = args.iter().map(|t| resolve(m, t, env)).collect();
            m.predicate(p.as_str(), &args).contains(w)
        }
        Formula::Eq(a, b) => resolve(m, a, env) == resolve(m, b, env),
        Formula::Not(a) => !eval_at(m, a, w, env),
        Formula::And(a, b) => eval_at(m, a, w, env) && eval_at(m, b, w, env),
        Formula::Or(a, b) => eval_at(m, a, w, env) || eval_at(m, b, w, env),
        Formula::Imp(a, b) => !eval_at(m, a, w, env) || eval_at(m, b, w, env),
        Formula::Iff(a, b) => eval_at(m, a, w, env) == eval_at(m, b, w, env),
        Formula::Box(a) => fr.successors(w).iter().all(|v| eval_at(m, a, v, env)),
        Formula::Dia(a) => fr.successors(w).iter().any(|v| eval_at(m, a, v, env)),
        Formula::StrictImp(a, b) => !fr
            .successors(w)
            .iter()
            .any(|v| eval_at(m, a, v, env) && !eval_at(m, b, v, env)),
        Formula::Forall(x, body) => elements(m.range_at(w)).all(|d| {
            env.bind(x.as_str(), d);
            let r = eval_at(m, body, w, env);
            env.pop();
            r
        }),
        Formula::Exists(x, body) => elements(m.range_at(w)).any(|d| {
            env.bind(x.as_str(), d);
            let r = eval_at(m, body, w, env);
            env.pop();
            r
        }),
    }
}

fn elements(mask: u64) -> impl Iterator<Item = usize> {
    WorldSet(mask).iter()
}

/// The worlds where `f` holds under `env`.
pub fn truth_set<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    env: &Env,
) -> Result<WorldSet, EvalError> {
    let mut bound = check_env(m, env)?;
    check(m, f, &mut bound)?;
    Ok(truth_set_unchecked(m, f, &mut env.clone()))
}

/// [`truth_set`] without the precondition check; callers must have run
/// [`check`] on an interpretation with the same symbols.
pub(crate) fn truth_set_unchecked<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    env: &mut Env,
) -> WorldSet {
    let fr = m.frame();
    let n = fr.len();
    let all = fr.all();
    let pointwise = |keep: &dyn Fn(WorldSet) -> bool| -> WorldSet {
        (0..n).filter(|&w| keep(fr.successors(w))).collect()
    };
    match f {
        Formula::Prop(p) => m.prop(p.as_str()) & all,
        Formula::Scheme(s) => m.scheme(s.as_str()).expect("checked: scheme bound") & all,
        Formula::Pred(p, args) => {
            let args: Vec<usize> = args.iter().map(|t| resolve(m, t, env)).collect();
            m.predicate(p.as_str(), &args) & all
        }
        Formula::Eq(a, b) => {
            if resolve(m, a, env) == resolve(m, b, env) {
                all
            } else {
                WorldSet::EMPTY
            }
        }
        Formula::Not(a) => WorldSet(all.0 & !truth_set_unchecked(m, a, env).0),
        Formula::And(a, b) => truth_set_unchecked(m, a, env) & truth_set_unchecked(m, b, env),
        Formula::Or(a, b) => truth_set_unchecked(m, a, env) | truth_set_unchecked(m, b, env),
        Formula::Imp(a, b) => {
            let (a, b) = (
                truth_set_unchecked(m, a, env),
                truth_set_unchecked(m, b, env),
            );
            WorldSet(all.0 & (!a.0 | b.0))
        }
        Formula::Iff(a, b) => {
            let (a, b) = (
                truth_set_unchecked(m, a, env),
                truth_set_unchecked(m, b, env),
            );
            WorldSet(all.0 & !(a.0 ^ b.0))
        }
        Formula::Box(a) => {
            let a = truth_set_unchecked(m, a, env);
            pointwise(&|s| s.is_subset(a))
        }
        Formula::Dia(a) => {
            let a = truth_set_unchecked(m, a, env);
            pointwise(&|s| !(s & a).is_empty())
        }
        Formula::StrictImp(a, b) => {
            let (a, b) = (
                truth_set_unchecked(m, a, env),
                truth_set_unchecked(m, b, env),
            );
            let bad = WorldSet(a.0 & !b.0);
            pointwise(&|s| (s & bad).is_empty())
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let d = m.domain().map_or(0, |df| df.domain().len());
            let mut acc = if universal { all } else { WorldSet::EMPTY };
            for e in 0..d {
                let ranging: WorldSet = (0..n).filter(|&w| m.range_at(w) >> e & 1 == 1).collect();
                if ranging.is_empty() {
                    continue;
                }
                env.bind(x.as_str(), e);
                let b = truth_set_unchecked(m, body, env);
                env.pop();
                if universal {
                    acc = WorldSet(acc.0 & (!ranging.0 | b.0));
                } else {
                    acc = acc | (ranging & b);
                }
            }
            acc
        }
    }
}

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum `worlds * scheme variables` for scheme enumeration.
    pub scheme_bits: u32,
    /// Maximum `tuples * worlds` for predicate interpretation enumeration.
    pub interpretation_bits: u32,
    /// Maximum estimated evaluator calls for one search.
    pub evaluations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            scheme_bits: 24,
            interpretation_bits: 20,
            evaluations: 200_000_000,
        }
    }
}

impl Budget {
    pub const ENV_VAR: &'static str = "MODALKIT_BUDGET";

    /// Defaults, with the evaluation budget taken from `MODALKIT_BUDGET`
    /// when set.
    pub fn from_env() -> std::result::Result<Budget, String> {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var(Self::ENV_VAR) {
            b.evaluations = v
                .trim()
                .parse()
                .map_err(|_| format!("{} must be a positive integer, got `{v}`", Self::ENV_VAR))?;
        }
        Ok(b)
    }
}

/// A point where a check failed, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub world: usize,
    pub env: Env,
    /// Enumerated proposition letters (frame validity only).
    pub props: Vec<(String, WorldSet)>,
    pub schemes: Vec<(String, WorldSet)>,
    pub hole: Option<Hole>,
}

impl Witness {
    fn at(world: usize) -> Witness {
        Witness {
            world,
            env: Env::new(),
            props: Vec::new(),
            schemes: Vec::new(),
            hole: None,
        }
    }

    /// `m` with this witness's assignments applied.
    pub fn instance<'a, I: Interpretation + ?Sized>(&self, m: &'a I) -> Instance<'a, I> {
        Instance {
            base: m,
            props: self.props.clone(),
            schemes: self.schemes.clone(),
            hole: self.hole.clone(),
        }
    }

    /// Replays `f` at the witness with the pointwise evaluator; true when
    /// it is indeed false there.
    pub fn refutes<I: Interpretation + ?Sized>(
        &self,
        m: &I,
        f: &Formula,
    ) -> Result<bool, EvalError> {
        Ok(!eval(&self.instance(m), f, self.world, &self.env)?)
    }

    pub fn to_json(&self, frame: &Frame, domain: Option<&DomainFrame>) -> Value {
        let sets = |v: &[(String, WorldSet)]| -> Value {
            v.iter()
                .map(|(k, s)| (k.clone(), json!(frame.names_of(*s))))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        let elem = |e: usize| domain.map_or_else(|| format!("#{e}"), |df| df.domain()[e].clone());
        let mut out = serde_json::Map::new();
        out.insert("world".into(), json!(frame.world_name(self.world)));
        let env = self.env.bindings();
        if !env.is_empty() {
            out.insert(
                "env".into(),
                env.into_iter()
                    .map(|(k, e)| (k, json!(elem(e))))
                    .collect::<serde_json::Map<_, _>>()
                    .into(),
            );
        }
        if !self.props.is_empty() {
            out.insert("valuation".into(), sets(&self.props));
        }
        if !self.schemes.is_empty() {
            out.insert("instantiation".into(), sets(&self.schemes));
        }
        if let Some(h) = &self.hole {
            let d = domain.map_or(0, |df| df.domain().len());
            let extension: serde_json::Map<_, _> = (0..frame.len())
                .map(|w| {
                    let tuples: Vec<Vec<String>> = (0..h.truth.len())
                        .filter(|&t| h.truth[t].contains(w))
                        .map(|t| tuple_of(t, h.arity, d).into_iter().map(elem).collect())
                        .collect();
                    (frame.world_name(w).to_string(), json!(tuples))
                })
                .collect();
            out.insert(
                "predicate".into(),
                json!({"name": h.name, "arity": h.arity, "extension": extension}),
            );
        }
        out.into()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn refuted(w: Witness) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(w),
        }
    }
}

fn closed_check<I: Interpretation + ?Sized>(m: &I, f: &Formula) -> Result<(), EvalError> {
    check(m, f, &mut Vec::new())
}

/// Truth at every world of `m`.
pub fn valid<I: Interpretation + ?Sized>(m: &I, f: &Formula) -> Result<Verdict, EvalError> {
    closed_check(m, f)?;
    let failing = WorldSet(m.frame().all().0 & !truth_set_unchecked(m, f, &mut Env::new()).0);
    Ok(match failing.first() {
        None => Verdict::holds(),
        Some(w) => Verdict::refuted(Witness::at(w)),
    })
}

/// Runs `step` on every assignment of world subsets to `k` atoms, in
/// increasing order of the concatenated bitmask (first atom most
/// significant). `step` returns false to stop early.
fn for_each_assignment(n: usize, k: usize, mut step: impl FnMut(u64, &[WorldSet]) -> bool) {
    let full = low_bits(n);
    let total: u64 = 1 << (n * k);
    let mut sets = vec![WorldSet::EMPTY; k];
    for c in 0..total {
        for (i, s) in sets.iter_mut().enumerate() {
            *s = WorldSet(c >> ((k - 1 - i) * n) & full);
        }
        if !step(c, &sets) {
            break;
        }
    }
}

fn check_bits(what: &str, bits: usize, allowed: u32) -> Result<()> {
    if bits > allowed as usize {
        return Err(Error::ResourceLimit {
            what: what.to_string(),
            needed: bits as u64,
            allowed: allowed as u64,
            frontier: None,
        });
    }
    Ok(())
}

/// Least (world, assignment) over the enumeration at which `failing`
/// reports a nonempty set of worlds.
fn least_failure(
    n: usize,
    k: usize,
    mut failing: impl FnMut(&[WorldSet]) -> WorldSet,
) -> Option<(usize, Vec<WorldSet>)> {
    let mut best: Option<(usize, Vec<WorldSet>)> = None;
    for_each_assignment(n, k, |_, sets| {
        if let Some(w) = failing(sets).first() {
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, sets.to_vec()));
            }
        }
        !matches!(best, Some((0, _)))
    });
    best
}

fn named(names: &[String], sets: &[WorldSet]) -> Vec<(String, WorldSet)> {
    names.iter().cloned().zip(sets.iter().copied()).collect()
}

/// Validity in `m` under every instantiation of the scheme variables by
/// world subsets.
pub fn scheme_valid<I: Interpretation + ?Sized>(
    m: &I,
    scheme: &Formula,
    budget: &Budget,
) -> Result<Verdict> {
    meta_implies(m, &[], scheme, budget)
}

/// Validity on `fr` under every valuation of every atom, letters and
/// scheme variables alike.
pub fn frame_valid(fr: &Frame, scheme: &Formula, budget: &Budget) -> Result<Verdict> {
    if !scheme.is_propositional() {
        return Err(
            EvalError::Unsupported("frame validity needs a propositional scheme".into()).into(),
        );
    }
    let names: Vec<String> = {
        let mut v: Vec<String> = scheme
            .prop_atoms()
            .into_iter()
            .chain(scheme.scheme_vars())
            .collect();
        v.sort();
        v
    };
    let n = fr.len();
    check_bits("frame validity", n * names.len(), budget.scheme_bits)?;
    let base = PropModel::empty(fr.clone());
    let is_scheme = |name: &str| name.starts_with(|c: char| c.is_ascii_uppercase());
    let mut inst = Instance::new(&base);
    for name in &names {
        if is_scheme(name) {
            inst.schemes.push((name.clone(), WorldSet::EMPTY));
        } else {
            inst.props.push((name.clone(), WorldSet::EMPTY));
        }
    }
    closed_check(&inst, scheme)?;
    let all = fr.all();
    let assign = |inst: &mut Instance<PropModel>, sets: &[WorldSet]| {
        let (mut p, mut s) = (0, 0);
        for (name, &set) in names.iter().zip(sets) {
            if is_scheme(name) {
                inst.schemes[s].1 = set;
                s += 1;
            } else {
                inst.props[p].1 = set;
                p += 1;
            }
        }
    };
    let found = least_failure(n, names.len(), |sets| {
        assign(&mut inst, sets);
        WorldSet(all.0 & !truth_set_unchecked(&inst, scheme, &mut Env::new()).0)
    });
    Ok(match found {
        None => Verdict::holds(),
        Some((w, sets)) => {
            assign(&mut inst, &sets);
            Verdict::refuted(Witness {
                props: inst.props,
                schemes: inst.schemes,
                ..Witness::at(w)
            })
        }
    })
}

fn shared_scheme_vars(formulas: &[&Formula]) -> Vec<String> {
    let mut v: Vec<String> = formulas.iter().flat_map(|f| f.scheme_vars()).collect();
    v.sort();
    v.dedup();
    v
}

/// Meta reading of an implication between validities: for every shared
/// instantiation of the scheme variables, if each premise is valid then
/// so is the conclusion.
pub fn meta_implies<I: Interpretation + ?Sized>(
    m: &I,
    premises: &[Formula],
    conclusion: &Formula,
    budget: &Budget,
) -> Result<Verdict> {
    let all_f: Vec<&Formula> = premises.iter().chain(std::iter::once(conclusion)).collect();
    let vars = shared_scheme_vars(&all_f);
    let n = m.frame().len();
    check_bits("scheme instantiation", n * vars.len(), budget.scheme_bits)?;
    let mut inst = Instance::with_schemes(m, &named(&vars, &vec![WorldSet::EMPTY; vars.len()]));
    for f in &all_f {
        closed_check(&inst, f)?;
    }
    let all = m.frame().all();
    let found = least_failure(n, vars.len(), |sets| {
        inst.schemes = named(&vars, sets);
        let env = &mut Env::new();
        if premises
            .iter()
            .all(|p| truth_set_unchecked(&inst, p, env) == all)
        {
            WorldSet(all.0 & !truth_set_unchecked(&inst, conclusion, env).0)
        } else {
            WorldSet::EMPTY
        }
    });
    Ok(match found {
        None => Verdict::holds(),
        Some((w, sets)) => Verdict::refuted(Witness {
            schemes: named(&vars, &sets),
            ..Witness::at(w)
        }),
    })
}

/// Looks for an instantiation where `valid(a) => valid(b)` holds but
/// `a => b` is not valid. Holds when there is none.
pub fn deduction_gap<I: Interpretation + ?Sized>(
    m: &I,
    a: &Formula,
    b: &Formula,
    budget: &Budget,
) -> Result<Verdict> {
    let vars = shared_scheme_vars(&[a, b]);
    let n = m.frame().len();
    check_bits("scheme instantiation", n * vars.len(), budget.scheme_bits)?;
    let mut inst = Instance::with_schemes(m, &named(&vars, &vec![WorldSet::EMPTY; vars.len()]));
    closed_check(&inst, a)?;
    closed_check(&inst, b)?;
    let all = m.frame().all();
    let found = least_failure(n, vars.len(), |sets| {
        inst.schemes = named(&vars, sets);
        let env = &mut Env::new();
        let (ta, tb) = (
            truth_set_unchecked(&inst, a, env),
            truth_set_unchecked(&inst, b, env),
        );
        let meta = ta != all || tb == all;
        if meta {
            WorldSet(ta.0 & !tb.0)
        } else {
            WorldSet::EMPTY
        }
    });
    Ok(match found {
        None => Verdict::holds(),
        Some((w, sets)) => Verdict::refuted(Witness {
            schemes: named(&vars, &sets),
            ..Witness::at(w)
        }),
    })
}

/// How an implication `A => B` between sentences is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reading {
    /// `A => B` itself must be valid.
    Object,
    /// `valid(A)` must imply `valid(B)`.
    Meta,
    /// The meta reading must carry over to the object reading; fails
    /// exactly where the meta reading holds and the object reading fails.
    Deduction,
}

impl Reading {
    pub fn name(self) -> &'static str {
        match self {
            Reading::Object => "object",
            Reading::Meta => "meta",
            Reading::Deduction => "deduction",
        }
    }
}

impl std::fmt::Display for Reading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Reading {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "object" => Ok(Reading::Object),
            "meta" => Ok(Reading::Meta),
            "deduction" => Ok(Reading::Deduction),
            other => Err(format!(
                "unknown reading `{other}` (expected object, meta or deduction)"
            )),
        }
    }
}

/// Splits a top-level implication for the meta and deduction readings.
pub fn split_implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Checks `f` in `m` under `reading`, instantiating scheme variables.
pub fn check_reading<I: Interpretation + ?Sized>(
    m: &I,
    f: &Formula,
    reading: Reading,
    budget: &Budget,
) -> Result<Verdict> {
    let split = || {
        split_implication(f).ok_or_else(|| {
            Error::InvalidSpec(format!(
                "the {reading} reading needs a top-level implication"
            ))
        })
    };
    match reading {
        Reading::Object => scheme_valid(m, f, budget),
        Reading::Meta => {
            let (a, b) = split()?;
            meta_implies(m, std::slice::from_ref(a), b, budget)
        }
        Reading::Deduction => {
            let (a, b) = split()?;
            deduction_gap(m, a, b, budget)
        }
    }
}

/// Validity of `scheme` under every interpretation of the flexible
/// predicate `hole` over the whole domain at every world.
pub fn fo_scheme_valid(
    fm: &FoModel,
    scheme: &Formula,
    hole: &str,
    budget: &Budget,
) -> Result<Verdict> {
    let arities = scheme.predicates();
    let arity = match (arities.get(hole), fm.flexible_preds().get(hole)) {
        (Some(a), _) if a.len() > 1 => {
            return Err(
                EvalError::Unsupported(format!("`{hole}` is used with several arities")).into(),
            )
        }
        (Some(a), Some(p)) if !a.contains(&p.arity) => {
            let found = *a.iter().next().expect("nonempty");
            return Err(EvalError::ArityMismatch {
                name: hole.to_string(),
                expected: p.arity,
                found,
            }
            .into());
        }
        (Some(a), _) => *a.iter().next().expect("nonempty"),
        (None, Some(p)) => p.arity,
        (None, None) => 1,
    };
    let n = fm.frame().len();
    let d = fm.domain_len();
    let tuples = tuple_count(arity, d).ok_or_else(|| Error::ResourceLimit {
        what: "predicate interpretation".into(),
        needed: u64::MAX,
        allowed: budget.interpretation_bits as u64,
        frontier: None,
    })?;
    check_bits(
        "predicate interpretation",
        tuples * n,
        budget.interpretation_bits,
    )?;
    let mut inst = Instance::new(fm);
    inst.hole = Some(Hole {
        name: hole.to_string(),
        arity,
        truth: vec![WorldSet::EMPTY; tuples],
    });
    closed_check(&inst, scheme)?;
    let all = fm.frame().all();
    let found = least_failure(n, tuples, |sets| {
        // Assignment order puts the first tuple in the most significant
        // bits; reverse so tuple 0 owns the least significant ones.
        let h = inst.hole.as_mut().expect("hole set");
        for (t, s) in sets.iter().rev().enumerate() {
            h.truth[t] = *s;
        }
        WorldSet(all.0 & !truth_set_unchecked(&inst, scheme, &mut Env::new()).0)
    });
    Ok(match found {
        None => Verdict::holds(),
        Some((w, sets)) => {
            let truth = sets.into_iter().rev().collect();
            Verdict::refuted(Witness {
                hole: Some(Hole {
                    name: hole.to_string(),
                    arity,
                    truth,
                }),
                ..Witness::at(w)
            })
        }
    })
}

/// The readings of `A => B` for two sentences in one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct ImplicationReadings {
    /// `A` and `B` hold at exactly the same worlds.
    pub equal: bool,
    /// `valid(A)` iff `valid(B)`.
    pub meta_iff: bool,
    /// `valid(A)` implies `valid(B)`.
    pub meta_implies: bool,
    /// `valid(A => B)`.
    pub object: bool,
}

pub fn implication_readings<I: Interpretation + ?Sized>(
    m: &I,
    a: &Formula,
    b: &Formula,
) -> Result<ImplicationReadings, EvalError> {
    closed_check(m, a)?;
    closed_check(m, b)?;
    let all = m.frame().all();
    let ta = truth_set_unchecked(m, a, &mut Env::new());
    let tb = truth_set_unchecked(m, b, &mut Env::new());
    let (va, vb) = (ta == all, tb == all);
    Ok(ImplicationReadings {
        equal: ta == tb,
        meta_iff: va == vb,
        meta_implies: !va || vb,
        object: ta.is_subset(tb),
    })
}

/// Whether quantifiers in `m` range over the whole domain everywhere.
pub fn ranges_constant(m: &FoModel) -> bool {
    m.mode == DomainMode::Constant
        || (0..m.frame().len()).all(|w| m.range_at(w) == m.dframe.full_domain())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_element_names, default_world_names, FlexiblePred};
    use crate::parser::parse;
    use crate::testing::arb_prop_formula;
    use proptest::prelude::*;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn frame(n: usize, pairs: &[(usize, usize)]) -> Frame {
        let mut succ = vec![WorldSet::EMPTY; n];
        for &(i, j) in pairs {
            succ[i].insert(j);
        }
        Frame::from_successors(default_world_names(n), succ).unwrap()
    }

    fn model(fr: Frame, val: &[(&str, u64)]) -> PropModel {
        PropModel::new(
            fr,
            val.iter()
                .map(|&(k, s)| (k.to_string(), WorldSet(s)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn vacuous_box_and_empty_dia() {
        let m = model(frame(1, &[]), &[]);
        assert!(eval(&m, &f("[]g"), 0, &Env::new()).unwrap());
        assert!(!eval(&m, &f("<>g"), 0, &Env::new()).unwrap());
        assert!(
            !frame_valid(&m.frame, &f("[]P => <>P"), &Budget::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn complement_valuation_at_irreflexive_point() {
        // w1 sees w0 and w2 but not itself.
        let fr = frame(3, &[(0, 0), (1, 0), (1, 2), (2, 2)]);
        let m = model(fr, &[("p", 0b101)]);
        assert!(eval(&m, &f("[]p"), 1, &Env::new()).unwrap());
        assert!(!eval(&m, &f("p"), 1, &Env::new()).unwrap());
    }

    #[test]
    fn chain_diamond() {
        let m = model(frame(2, &[(0, 1)]), &[("p", 0b10)]);
        assert!(eval(&m, &f("<>p"), 0, &Env::new()).unwrap());
        assert!(!eval(&m, &f("<>p"), 1, &Env::new()).unwrap());
    }

    #[test]
    fn validity_examples() {
        let m = model(frame(2, &[(0, 1), (1, 1)]), &[("g", 0b10)]);
        assert!(valid(&m, &f("p | ~p")).unwrap().holds);
        let v = valid(&m, &f("g")).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().world, 0);

        let total = PropModel::new(
            Frame::total(default_world_names(3)).unwrap(),
            [("g".into(), WorldSet(0b100))].into(),
        )
        .unwrap();
        assert!(valid(&total, &f("<>g")).unwrap().holds);
    }

    #[test]
    fn eval_errors() {
        let m = model(frame(1, &[]), &[]);
        assert_eq!(
            eval(&m, &f("[]P"), 0, &Env::new()),
            Err(EvalError::UnboundScheme("P".into()))
        );
        assert_eq!(
            eval(&m, &f("F(x)"), 0, &Env::new()),
            Err(EvalError::NotFirstOrder("predicate atom"))
        );
        assert!(matches!(
            eval(&m, &f("p"), 3, &Env::new()),
            Err(EvalError::UnknownWorld(_))
        ));

        let df = DomainFrame::constant(frame(1, &[]), default_element_names(2)).unwrap();
        let mut fm = FoModel::skeleton(df, DomainMode::Constant).unwrap();
        fm.add_flexible(
            "F",
            FlexiblePred {
                arity: 1,
                truth: vec![WorldSet(1), WorldSet(0)],
            },
        )
        .unwrap();
        assert_eq!(
            eval(&fm, &f("F(x)"), 0, &Env::new()),
            Err(EvalError::UnboundVar("x".into()))
        );
        assert!(matches!(
            eval(&fm, &f("G(x)"), 0, &Env::new()),
            Err(EvalError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            eval(&fm, &f("F(c)"), 0, &Env::new()),
            Err(EvalError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            eval(&fm, &f("forall x. F(x, x)"), 0, &Env::new()),
            Err(EvalError::ArityMismatch { .. })
        ));
        // An unreachable subformula is still checked.
        assert!(eval(&fm, &f("[]F(y)"), 0, &Env::new()).is_err());

        let mut env = Env::new();
        env.bind("x", 1);
        assert!(!eval(&fm, &f("F(x)"), 0, &env).unwrap());
        assert!(eval(&fm, &f("exists y. F(y) & ~(x = y)"), 0, &env).unwrap());
    }

    #[test]
    fn scheme_examples() {
        let budget = Budget::default();
        for bits in 0..(1u64 << 9) {
            let m = PropModel::empty(Frame::from_relation_bits(3, bits));
            assert!(
                scheme_valid(&m, &f("[](P => Q) => ([]P => []Q)"), &budget)
                    .unwrap()
                    .holds
            );
            let h2 = scheme_valid(&m, &f("P => []P"), &budget).unwrap().holds;
            let sub_identity = m.frame.pairs().iter().all(|&(i, j)| i == j);
            assert_eq!(h2, sub_identity, "bits {bits:#b}");
        }
        let chain = PropModel::empty(frame(2, &[(0, 1)]));
        let v = scheme_valid(&chain, &f("(P => Q) => ([]~Q => []~P)"), &budget).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.refutes(&chain, &f("(P => Q) => ([]~Q => []~P)")).unwrap());
    }

    #[test]
    fn scheme_budget() {
        let m = PropModel::empty(Frame::total(default_world_names(5)).unwrap());
        let tight = Budget {
            scheme_bits: 9,
            ..Budget::default()
        };
        assert!(matches!(
            scheme_valid(&m, &f("P & Q"), &tight),
            Err(Error::ResourceLimit { needed: 10, .. })
        ));
        assert!(scheme_valid(&m, &f("P | ~P"), &tight).unwrap().holds);
    }

    #[test]
    fn witness_is_least_world_then_least_assignment() {
        // T on a two-world frame where only w1 is irreflexive.
        let fr = frame(2, &[(0, 0), (1, 0)]);
        let v = frame_valid(&fr, &f("[]P => P"), &Budget::default()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.world, 1);
        assert_eq!(w.schemes, vec![("P".to_string(), WorldSet(0b01))]);
    }

    #[test]
    fn frame_valid_enumerates_letters() {
        let fr = frame(1, &[]);
        let v = frame_valid(&fr, &f("p => P"), &Budget::default()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.props, vec![("p".to_string(), WorldSet(1))]);
        assert_eq!(w.schemes, vec![("P".to_string(), WorldSet(0))]);
    }

    #[test]
    fn meta_readings() {
        let budget = Budget::default();
        for bits in 0..(1u64 << 4) {
            let m = PropModel::empty(Frame::from_relation_bits(2, bits));
            assert!(
                meta_implies(&m, &[f("P")], &f("[]P"), &budget)
                    .unwrap()
                    .holds
            );
            assert!(
                meta_implies(&m, &[f("P => Q")], &f("[]~Q => []~P"), &budget)
                    .unwrap()
                    .holds
            );
        }
        let m = PropModel::empty(frame(2, &[]));
        let gap = deduction_gap(&m, &f("P"), &f("Q"), &budget).unwrap();
        let w = gap.witness.unwrap();
        assert_eq!(w.world, 0);
        assert_eq!(
            w.schemes,
            vec![("P".into(), WorldSet(0b01)), ("Q".into(), WorldSet(0))]
        );
        assert!(
            deduction_gap(&PropModel::empty(frame(1, &[])), &f("P"), &f("Q"), &budget)
                .unwrap()
                .holds
        );
        assert!(matches!(
            check_reading(&m, &f("P"), Reading::Meta, &budget),
            Err(Error::InvalidSpec(_))
        ));
    }

    fn fo(fr: Frame, exists: Vec<u64>, mode: DomainMode) -> FoModel {
        let df = DomainFrame::new(fr, default_element_names(2), exists).unwrap();
        FoModel::skeleton(df, mode).unwrap()
    }

    #[test]
    fn barcan_examples() {
        let budget = Budget::default();
        let bf = f("(forall x. []P(x)) => [] forall x. P(x)");
        let cbf = f("[](forall x. P(x)) => forall x. []P(x)");
        let constant = fo(
            frame(2, &[(0, 1), (1, 0)]),
            vec![0b11, 0b11],
            DomainMode::Constant,
        );
        assert!(fo_scheme_valid(&constant, &bf, "P", &budget).unwrap().holds);
        assert!(
            fo_scheme_valid(&constant, &cbf, "P", &budget)
                .unwrap()
                .holds
        );

        let shrink = fo(frame(2, &[(0, 1)]), vec![0b11, 0b01], DomainMode::Varying);
        assert!(fo_scheme_valid(&shrink, &bf, "P", &budget).unwrap().holds);
        let v = fo_scheme_valid(&shrink, &cbf, "P", &budget).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.world, 0);
        assert_eq!(
            w.hole.as_ref().unwrap().truth,
            vec![WorldSet(0b10), WorldSet(0)]
        );
        assert!(w.refutes(&shrink, &cbf).unwrap());
        // P true exactly on existing pairs also refutes.
        let existing = Witness {
            hole: Some(Hole {
                name: "P".into(),
                arity: 1,
                truth: vec![WorldSet(0b11), WorldSet(0b01)],
            }),
            ..Witness::at(0)
        };
        assert!(existing.refutes(&shrink, &cbf).unwrap());

        let isolated = fo(frame(2, &[]), vec![0b01, 0b10], DomainMode::Varying);
        assert!(fo_scheme_valid(&isolated, &bf, "P", &budget).unwrap().holds);
        assert!(
            fo_scheme_valid(&isolated, &cbf, "P", &budget)
                .unwrap()
                .holds
        );

        let big = FoModel::skeleton(
            DomainFrame::constant(
                Frame::total(default_world_names(3)).unwrap(),
                default_element_names(7),
            )
            .unwrap(),
            DomainMode::Constant,
        )
        .unwrap();
        assert!(matches!(
            fo_scheme_valid(&big, &bf, "P", &budget),
            Err(Error::ResourceLimit { needed: 21, .. })
        ));
    }

    #[test]
    fn empty_world_domain_makes_forall_vacuous() {
        let m = fo(frame(1, &[]), vec![0], DomainMode::Varying);
        assert!(eval(&m, &f("forall x. ~(x = x)"), 0, &Env::new()).unwrap());
        assert!(!eval(&m, &f("exists x. x = x"), 0, &Env::new()).unwrap());
    }

    #[test]
    fn readings_of_barcan() {
        let shrink = {
            let mut m = fo(frame(2, &[(0, 1)]), vec![0b11, 0b01], DomainMode::Varying);
            m.add_flexible(
                "P",
                FlexiblePred {
                    arity: 1,
                    truth: vec![WorldSet(0b10), WorldSet(0)],
                },
            )
            .unwrap();
            m
        };
        let r = implication_readings(&shrink, &f("[](forall x. P(x))"), &f("forall x. []P(x)"))
            .unwrap();
        assert_eq!(
            r,
            ImplicationReadings {
                equal: false,
                meta_iff: false,
                meta_implies: false,
                object: false
            }
        );
    }

    fn arb_model() -> impl Strategy<Value = PropModel> {
        (1usize..=4).prop_flat_map(|n| {
            (
                Just(n),
                0u64..(1 << (n * n)),
                prop::collection::vec(0u64..(1 << n), 3),
            )
                .prop_map(|(n, bits, vals)| {
                    let val = ["p", "q", "r"]
                        .iter()
                        .zip(vals)
                        .map(|(k, s)| (k.to_string(), WorldSet(s)))
                        .collect();
                    PropModel::new(Frame::from_relation_bits(n, bits), val).unwrap()
                })
        })
    }

    fn with_schemes(m: &PropModel, p: u64, q: u64) -> Instance<'_, PropModel> {
        let full = m.frame.all().0;
        Instance::with_schemes(
            m,
            &[
                ("P".into(), WorldSet(p & full)),
                ("Q".into(), WorldSet(q & full)),
            ],
        )
    }

    proptest! {
        #[test]
        fn evaluators_agree(m in arb_model(), a in arb_prop_formula(), p in any::<u64>(), q in any::<u64>()) {
            let inst = with_schemes(&m, p, q);
            let set = truth_set(&inst, &a, &Env::new()).unwrap();
            for w in 0..m.frame.len() {
                prop_assert_eq!(set.contains(w), eval(&inst, &a, w, &Env::new()).unwrap());
            }
        }

        #[test]
        fn dia_duality_and_strict_material(m in arb_model(), a in arb_prop_formula(), b in arb_prop_formula(), p in any::<u64>(), q in any::<u64>()) {
            let inst = with_schemes(&m, p, q);
            for w in 0..m.frame.len() {
                let ev = |g: &Formula| eval(&inst, g, w, &Env::new()).unwrap();
                prop_assert_eq!(ev(&Formula::dia(a.clone())), ev(&Formula::negation(Formula::boxed(Formula::negation(a.clone())))));
                prop_assert_eq!(
                    ev(&Formula::strict_imp(a.clone(), b.clone())),
                    ev(&Formula::boxed(Formula::imp(a.clone(), b.clone())))
                );
            }
        }

        #[test]
        fn necessitation(m in arb_model(), a in arb_prop_formula(), p in any::<u64>(), q in any::<u64>()) {
            let inst = with_schemes(&m, p, q);
            if valid(&inst, &a).unwrap().holds {
                prop_assert!(valid(&inst, &Formula::boxed(a)).unwrap().holds);
            }
        }

        #[test]
        fn constant_mode_matches_full_varying(bits in 0u64..512, truth in prop::collection::vec(0u64..8, 4)) {
            let fr = Frame::from_relation_bits(3, bits);
            let pred = FlexiblePred { arity: 1, truth: truth[..2].iter().map(|&s| WorldSet(s)).collect() };
            let mut c = fo(fr.clone(), vec![0b11; 3], DomainMode::Constant);
            let mut v = fo(fr, vec![0b11; 3], DomainMode::Varying);
            c.add_flexible("P", pred.clone()).unwrap();
            v.add_flexible("P", pred).unwrap();
            for text in ["forall x. []P(x)", "exists x. <>P(x) & forall y. x = y | ~P(y)", "[](forall x. P(x)) => forall x. []P(x)"] {
                let g = f(text);
                prop_assert_eq!(truth_set(&c, &g, &Env::new()).unwrap(), truth_set(&v, &g, &Env::new()).unwrap());
            }
        }

        #[test]
        fn first_order_evaluators_agree(bits in 0u64..512, ex in 0u64..64, truth in prop::collection::vec(0u64..8, 2)) {
            let fr = Frame::from_relation_bits(3, bits);
            let mut m = fo(fr, (0..3).map(|w| ex >> (2 * w) & 0b11).collect(), DomainMode::Varying);
            m.add_flexible("P", FlexiblePred { arity: 1, truth: truth.iter().map(|&s| WorldSet(s)).collect() }).unwrap();
            for text in [
                "(forall x. []P(x)) => [] forall x. P(x)",
                "[](forall x. P(x)) => forall x. []P(x)",
                "exists x. <>(P(x) & exists y. ~(x = y))",
                "forall x. P(x) |> exists y. P(y)",
            ] {
                let g = f(text);
                let set = truth_set(&m, &g, &Env::new()).unwrap();
                for w in 0..3 {
                    prop_assert_eq!(set.contains(w), eval(&m, &g, w, &Env::new()).unwrap());
                }
            }
        }

        #[test]
        fn eval_is_pure(m in arb_model(), a in arb_prop_formula()) {
            let inst = with_schemes(&m, 1, 2);
            let first = truth_set(&inst, &a, &Env::new()).unwrap();
            prop_assert_eq!(first, truth_set(&inst, &a, &Env::new()).unwrap());
        }
    }
}

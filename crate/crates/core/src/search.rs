//! Exhaustive countermodel search over small frames.
//!
//! Candidates are ordered by world count, then domain size, then frame
//! bitmask (bit `i * n + j` for the pair `(i, j)`), then existence map,
//! valuation, constants and predicate interpretations. The first candidate
//! in this order that refutes the conclusion is returned, whatever the
//! number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::{render, Format, Formula};
use crate::model::{
    default_element_names, low_bits, tuple_count, DomainFrame, DomainMode, FlexiblePred, FoModel,
    Frame, FrameProperty, Model, ModelError, PropModel, WorldSet,
};
use crate::parser::{parse, ParseError};
use crate::semantics::{
    check, check_reading, eval, scheme_valid, split_implication, valid, Budget, Env, EvalError,
    Instance, Reading, Witness,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameConstraint {
    Reflexive,
    Transitive,
    Symmetric,
    Serial,
    Euclidean,
    /// Every world accesses every world.
    Total,
    None,
}

impl FrameConstraint {
    pub const ALL: [FrameConstraint; 7] = [
        FrameConstraint::Reflexive,
        FrameConstraint::Transitive,
        FrameConstraint::Symmetric,
        FrameConstraint::Serial,
        FrameConstraint::Euclidean,
        FrameConstraint::Total,
        FrameConstraint::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameConstraint::Reflexive => "reflexive",
            FrameConstraint::Transitive => "transitive",
            FrameConstraint::Symmetric => "symmetric",
            FrameConstraint::Serial => "serial",
            FrameConstraint::Euclidean => "euclidean",
            FrameConstraint::Total => "total",
            FrameConstraint::None => "none",
        }
    }

    pub fn holds(self, fr: &Frame) -> bool {
        let property = match self {
            FrameConstraint::Reflexive => FrameProperty::Reflexive,
            FrameConstraint::Transitive => FrameProperty::Transitive,
            FrameConstraint::Symmetric => FrameProperty::Symmetric,
            FrameConstraint::Serial => FrameProperty::Serial,
            FrameConstraint::Euclidean => FrameProperty::Euclidean,
            FrameConstraint::Total => return (0..fr.len()).all(|w| fr.successors(w) == fr.all()),
            FrameConstraint::None => return true,
        };
        fr.has(property)
    }
}

impl fmt::Display for FrameConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FrameConstraint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FrameConstraint::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown frame constraint `{s}`"))
    }
}

/// Largest world count [`enumerate_frames`] accepts.
pub const MAX_ENUMERATED_WORLDS: usize = 7;

/// Relation bitmasks on `n` worlds satisfying every constraint, in
/// increasing order. With `prune`, only the least mask of each
/// isomorphism class is kept.
pub fn frame_masks(
    n: usize,
    constraints: &[FrameConstraint],
    prune: bool,
) -> impl Iterator<Item = u64> + '_ {
    assert!(
        (1..=MAX_ENUMERATED_WORLDS).contains(&n),
        "frame enumeration covers 1..=7 worlds"
    );
    let perms = if prune { permutations(n) } else { Vec::new() };
    (0..1u64 << (n * n)).filter(move |&bits| {
        let fr = Frame::from_relation_bits(n, bits);
        constraints.iter().all(|c| c.holds(&fr))
            && (!prune || perms.iter().all(|p| permute_mask(bits, n, p) >= bits))
    })
}

/// Frames on `n` worlds named `w0..`, in the order of [`frame_masks`].
pub fn enumerate_frames(
    n: usize,
    constraints: &[FrameConstraint],
    prune: bool,
) -> impl Iterator<Item = Frame> + '_ {
    frame_masks(n, constraints, prune).map(move |bits| Frame::from_relation_bits(n, bits))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn permute_mask(bits: u64, n: usize, p: &[usize]) -> u64 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if bits >> (i * n + j) & 1 == 1 {
                out |= 1 << (p[i] * n + p[j]);
            }
        }
    }
    out
}

/// What to search for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub max_worlds: usize,
    /// 0 for a propositional search.
    pub max_domain: usize,
    pub constraints: Vec<FrameConstraint>,
    /// Must be valid in the countermodel.
    pub premise_formulas: Vec<Formula>,
    /// Must be valid under every instantiation of their scheme variables.
    pub premise_schemes: Vec<Formula>,
    pub conclusion: Formula,
    pub reading: Reading,
    pub mode: DomainMode,
}

impl SearchSpec {
    pub fn new(conclusion: Formula) -> SearchSpec {
        SearchSpec {
            max_worlds: 3,
            max_domain: 0,
            constraints: Vec::new(),
            premise_formulas: Vec::new(),
            premise_schemes: Vec::new(),
            conclusion,
            reading: Reading::Object,
            mode: DomainMode::Varying,
        }
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premise_formulas
            .iter()
            .chain(&self.premise_schemes)
            .chain(std::iter::once(&self.conclusion))
    }

    fn is_first_order(&self) -> bool {
        self.max_domain > 0 || self.formulas().any(|f| !f.is_propositional())
    }
}

/// How to run a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub jobs: usize,
    /// Skip frames that are not the least of their isomorphism class.
    pub prune: bool,
    pub budget: Budget,
    /// Largest `max_worlds` accepted for propositional searches.
    pub prop_ceiling: usize,
    /// Largest `max_worlds` accepted for first-order searches.
    pub fo_ceiling: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            prune: false,
            budget: Budget::default(),
            prop_ceiling: 4,
            fo_ceiling: 3,
        }
    }
}

/// A refuting model with the point of failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub witness: Witness,
}

impl Countermodel {
    pub fn worlds(&self) -> usize {
        self.model.frame().len()
    }

    /// Model JSON with a `certificate` block describing the failure.
    pub fn certificate(&self, spec: &SearchSpec) -> Value {
        let fr = self.model.frame();
        let w = self.witness.to_json(fr, self.model.domain_frame());
        let mut cert = json!({
            "reading": spec.reading.name(),
            "conclusion": render(&spec.conclusion, Format::Ascii),
            "premises": spec.premise_formulas.iter().map(|f| render(f, Format::Ascii)).collect::<Vec<_>>(),
            "scheme_premises": spec.premise_schemes.iter().map(|f| render(f, Format::Ascii)).collect::<Vec<_>>(),
            "constraints": spec.constraints.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "max_worlds": spec.max_worlds,
            "max_domain": spec.max_domain,
            "world": w["world"],
            "instantiation": w.get("instantiation").cloned().unwrap_or_else(|| json!({})),
        });
        if let Some(env) = w.get("env") {
            cert["env"] = env.clone();
        }
        let mut doc = self.model.to_doc();
        doc.certificate = Some(cert);
        serde_json::to_value(doc).expect("model documents serialize")
    }

    pub fn certificate_text(&self, spec: &SearchSpec) -> String {
        serde_json::to_string_pretty(&self.certificate(spec)).expect("json values serialize")
    }
}

/// Everything the search has to interpret.
struct Vocabulary {
    props: Vec<String>,
    preds: Vec<(String, usize)>,
    consts: Vec<String>,
}

impl Vocabulary {
    fn of(spec: &SearchSpec) -> Result<Vocabulary> {
        let mut props = std::collections::BTreeSet::new();
        let mut preds: BTreeMap<String, std::collections::BTreeSet<usize>> = BTreeMap::new();
        let mut consts = std::collections::BTreeSet::new();
        for f in spec.formulas() {
            props.extend(f.prop_atoms());
            consts.extend(f.constants());
            for (name, arities) in f.predicates() {
                preds.entry(name).or_default().extend(arities);
            }
        }
        let preds = preds
            .into_iter()
            .map(|(name, arities)| {
                if arities.len() > 1 {
                    return Err(Error::InvalidSpec(format!(
                        "predicate `{name}` is used with several arities"
                    )));
                }
                let arity = *arities.iter().next().expect("nonempty");
                Ok((name, arity))
            })
            .collect::<Result<_>>()?;
        Ok(Vocabulary {
            props: props.into_iter().collect(),
            preds,
            consts: consts.into_iter().collect(),
        })
    }
}

/// Fixed world count and domain size.
#[derive(Clone, Copy)]
struct Size {
    n: usize,
    d: usize,
}

struct Layout {
    size: Size,
    exists_choices: Vec<u64>,
    valuation_bits: usize,
    const_choices: u64,
    pred_tuples: Vec<usize>,
    pred_bits: usize,
}

impl Layout {
    fn new(spec: &SearchSpec, vocab: &Vocabulary, size: Size, first_order: bool) -> Result<Layout> {
        let Size { n, d } = size;
        let limit = |what: &str, needed: usize| Error::ResourceLimit {
            what: what.to_string(),
            needed: needed as u64,
            allowed: 63,
            frontier: None,
        };
        let exists_choices = if !first_order {
            vec![0]
        } else if spec.mode == DomainMode::Constant {
            vec![(0..n).fold(0, |acc, w| acc | low_bits(d) << (w * d))]
        } else {
            if n * d > 20 {
                return Err(limit("existence maps", n * d));
            }
            (0..1u64 << (n * d)).collect()
        };
        let valuation_bits = n * vocab.props.len();
        let pred_tuples: Vec<usize> = vocab
            .preds
            .iter()
            .map(|&(_, arity)| {
                tuple_count(arity, d).ok_or_else(|| limit("predicate tuples", usize::MAX))
            })
            .collect::<Result<_>>()?;
        let pred_bits = pred_tuples.iter().sum::<usize>() * n;
        if valuation_bits > 63 || pred_bits > 63 {
            return Err(limit("interpretation bits", valuation_bits.max(pred_bits)));
        }
        let const_choices = (d as u64)
            .checked_pow(vocab.consts.len() as u32)
            .ok_or_else(|| limit("constants", 64))?;
        Ok(Layout {
            size,
            exists_choices,
            valuation_bits,
            const_choices,
            pred_tuples,
            pred_bits,
        })
    }

    /// Upper bound on evaluator calls for this size.
    fn cost(&self, spec: &SearchSpec, frames: usize) -> u128 {
        let n = self.size.n;
        let per_model: u128 = spec.premise_formulas.len() as u128
            + spec
                .premise_schemes
                .iter()
                .chain(std::iter::once(&spec.conclusion))
                .map(|f| 1u128 << (n * f.scheme_vars().len()).min(100))
                .sum::<u128>();
        (frames as u128)
            .saturating_mul(self.exists_choices.len() as u128)
            .saturating_mul(1u128 << self.valuation_bits)
            .saturating_mul(self.const_choices as u128)
            .saturating_mul(1u128 << self.pred_bits)
            .saturating_mul(per_model)
    }
}

fn validate(spec: &SearchSpec, opts: &SearchOptions) -> Result<bool> {
    let first_order = spec.is_first_order();
    if spec.max_worlds == 0 {
        return Err(Error::InvalidSpec("max_worlds must be at least 1".into()));
    }
    if first_order && spec.max_domain == 0 {
        return Err(Error::InvalidSpec(
            "first-order formulas need max_domain of at least 1".into(),
        ));
    }
    let ceiling = if first_order {
        opts.fo_ceiling
    } else {
        opts.prop_ceiling
    };
    if spec.max_worlds > ceiling.min(MAX_ENUMERATED_WORLDS) {
        return Err(Error::InvalidSpec(format!(
            "max_worlds {} exceeds the {} ceiling of {ceiling}",
            spec.max_worlds,
            if first_order {
                "first-order"
            } else {
                "propositional"
            }
        )));
    }
    if let Some(f) = spec
        .premise_formulas
        .iter()
        .find(|f| !f.scheme_vars().is_empty())
    {
        return Err(Error::InvalidSpec(format!(
            "premise `{f}` has scheme variables; pass it as a scheme premise"
        )));
    }
    if spec.reading != Reading::Object && split_implication(&spec.conclusion).is_none() {
        return Err(Error::InvalidSpec(format!(
            "the {} reading needs a top-level implication",
            spec.reading
        )));
    }
    for f in spec.formulas() {
        if !f.is_closed() {
            return Err(Error::InvalidSpec(format!("`{f}` has free variables")));
        }
    }
    Ok(first_order)
}

/// The least countermodel within the search bounds, or `None` when the
/// exhaustive search finds nothing up to that size.
pub fn find_countermodel(spec: &SearchSpec, opts: &SearchOptions) -> Result<Option<Countermodel>> {
    let first_order = validate(spec, opts)?;
    let vocab = Vocabulary::of(spec)?;
    let mut frontier = None;
    for n in 1..=spec.max_worlds {
        let domains = if first_order {
            1..=spec.max_domain
        } else {
            0..=0
        };
        for d in domains {
            let size = Size { n, d };
            let layout = Layout::new(spec, &vocab, size, first_order)
                .map_err(|e| with_frontier(e, frontier))?;
            for f in spec
                .premise_schemes
                .iter()
                .chain(std::iter::once(&spec.conclusion))
            {
                let bits = n * f.scheme_vars().len();
                if bits > opts.budget.scheme_bits as usize {
                    return Err(Error::ResourceLimit {
                        what: "scheme instantiation".into(),
                        needed: bits as u64,
                        allowed: opts.budget.scheme_bits as u64,
                        frontier,
                    });
                }
            }
            let frames: Vec<u64> = frame_masks(n, &spec.constraints, opts.prune).collect();
            let cost = layout.cost(spec, frames.len());
            if cost > opts.budget.evaluations as u128 {
                return Err(Error::ResourceLimit {
                    what: format!("search at {n} worlds"),
                    needed: u64::try_from(cost).unwrap_or(u64::MAX),
                    allowed: opts.budget.evaluations,
                    frontier,
                });
            }
            if let Some(found) = search_frames(spec, opts, &vocab, &layout, &frames)? {
                return Ok(Some(found));
            }
        }
        frontier = Some(n);
    }
    Ok(None)
}

/// [`find_countermodel`] for first-order specs; requires a domain bound.
pub fn find_fo_countermodel(
    spec: &SearchSpec,
    opts: &SearchOptions,
) -> Result<Option<Countermodel>> {
    if spec.max_domain == 0 {
        return Err(Error::InvalidSpec(
            "first-order search needs max_domain of at least 1".into(),
        ));
    }
    find_countermodel(spec, opts)
}

fn with_frontier(e: Error, frontier: Option<usize>) -> Error {
    match e {
        Error::ResourceLimit {
            what,
            needed,
            allowed,
            ..
        } => Error::ResourceLimit {
            what,
            needed,
            allowed,
            frontier,
        },
        other => other,
    }
}

fn search_frames(
    spec: &SearchSpec,
    opts: &SearchOptions,
    vocab: &Vocabulary,
    layout: &Layout,
    frames: &[u64],
) -> Result<Option<Countermodel>> {
    let jobs = opts.jobs.max(1);
    let chunk = frames.len().div_ceil(jobs * 8).max(1);
    let chunks: Vec<&[u64]> = frames.chunks(chunk).collect();
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let results: Mutex<BTreeMap<usize, Result<Countermodel>>> = Mutex::new(BTreeMap::new());
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= chunks.len() || i > best.load(Ordering::SeqCst) {
            break;
        }
        for &bits in chunks[i] {
            match search_frame(spec, opts, vocab, layout, bits) {
                Ok(None) => continue,
                Ok(Some(cm)) => {
                    results.lock().expect("no poisoned lock").insert(i, Ok(cm));
                }
                Err(e) => {
                    results.lock().expect("no poisoned lock").insert(i, Err(e));
                }
            }
            best.fetch_min(i, Ordering::SeqCst);
            break;
        }
    };
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }
    let results = results.into_inner().expect("no poisoned lock");
    results.into_iter().next().map(|(_, r)| r).transpose()
}

fn search_frame(
    spec: &SearchSpec,
    opts: &SearchOptions,
    vocab: &Vocabulary,
    layout: &Layout,
    bits: u64,
) -> Result<Option<Countermodel>> {
    let Size { n, d } = layout.size;
    let frame = Frame::from_relation_bits(n, bits);
    if d == 0 {
        let mut m = Model::Prop(PropModel::empty(frame));
        return for_each_valuation(&mut m, vocab, layout, |m| refute(spec, opts, m));
    }
    for &ex in &layout.exists_choices {
        let exists = (0..n).map(|w| ex >> (w * d) & low_bits(d)).collect();
        let df = DomainFrame::new(frame.clone(), default_element_names(d), exists)?;
        let mut fm = FoModel::skeleton(df, spec.mode)?;
        for (&(ref name, arity), &tuples) in vocab.preds.iter().zip(&layout.pred_tuples) {
            fm.add_flexible(
                name,
                FlexiblePred {
                    arity,
                    truth: vec![WorldSet::EMPTY; tuples],
                },
            )?;
        }
        let mut m = Model::Fo(fm);
        let found = for_each_valuation(&mut m, vocab, layout, |m| {
            for c in 0..layout.const_choices {
                let Model::Fo(fm) = m else {
                    unreachable!("first-order candidate")
                };
                let mut rest = c;
                for name in vocab.consts.iter().rev() {
                    fm.set_const(name, (rest % d as u64) as usize);
                    rest /= d as u64;
                }
                for p in 0..1u64 << layout.pred_bits {
                    let Model::Fo(fm) = m else {
                        unreachable!("first-order candidate")
                    };
                    let mut shift = layout.pred_bits;
                    for ((name, _), &tuples) in vocab.preds.iter().zip(&layout.pred_tuples) {
                        for t in 0..tuples {
                            shift -= n;
                            fm.set_flexible_truth(name, t, WorldSet(p >> shift & low_bits(n)));
                        }
                    }
                    if let Some(cm) = refute(spec, opts, m)? {
                        return Ok(Some(cm));
                    }
                }
            }
            Ok(None)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn for_each_valuation(
    m: &mut Model,
    vocab: &Vocabulary,
    layout: &Layout,
    mut step: impl FnMut(&mut Model) -> Result<Option<Countermodel>>,
) -> Result<Option<Countermodel>> {
    let n = layout.size.n;
    for v in 0..1u64 << layout.valuation_bits {
        let mut shift = layout.valuation_bits;
        for name in &vocab.props {
            shift -= n;
            let set = WorldSet(v >> shift & low_bits(n));
            match m {
                Model::Prop(pm) => pm.set_truth(name, set),
                Model::Fo(fm) => fm.set_truth(name, set),
            }
        }
        if let Some(cm) = step(m)? {
            return Ok(Some(cm));
        }
    }
    Ok(None)
}

fn refute(spec: &SearchSpec, opts: &SearchOptions, m: &Model) -> Result<Option<Countermodel>> {
    for f in &spec.premise_formulas {
        if !valid(m, f)?.holds {
            return Ok(None);
        }
    }
    for f in &spec.premise_schemes {
        if !scheme_valid(m, f, &opts.budget)?.holds {
            return Ok(None);
        }
    }
    let v = check_reading(m, &spec.conclusion, spec.reading, &opts.budget)?;
    Ok(v.witness.map(|witness| Countermodel {
        model: m.clone(),
        witness,
    }))
}

/// Why a countermodel failed independent re-validation.
#[derive(Debug, thiserror::Error)]
pub enum RecheckError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Re-validates a countermodel with the pointwise evaluator only:
/// constraints, premises, scheme premises under every instantiation, and
/// failure of the conclusion at the witness.
pub fn recheck(spec: &SearchSpec, cm: &Countermodel) -> std::result::Result<(), RecheckError> {
    let m = &cm.model;
    let fr = m.frame();
    let reject = |msg: String| Err(RecheckError::Rejected(msg));
    if let Some(c) = spec.constraints.iter().find(|c| !c.holds(fr)) {
        return reject(format!("frame is not {c}"));
    }
    let holds_everywhere = |i: &dyn Fn(usize) -> std::result::Result<bool, EvalError>| -> std::result::Result<bool, EvalError> {
        for w in 0..fr.len() {
            if !i(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for f in &spec.premise_formulas {
        if !holds_everywhere(&|w| eval(m, f, w, &Env::new()))? {
            return reject(format!("premise `{f}` is not valid"));
        }
    }
    for f in &spec.premise_schemes {
        let vars: Vec<String> = f.scheme_vars().into_iter().collect();
        let n = fr.len();
        for c in 0..1u64 << (n * vars.len()) {
            let schemes: Vec<(String, WorldSet)> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), WorldSet(c >> (i * n) & low_bits(n))))
                .collect();
            let inst = Instance::with_schemes(m, &schemes);
            if !holds_everywhere(&|w| eval(&inst, f, w, &Env::new()))? {
                return reject(format!(
                    "scheme premise `{f}` fails under some instantiation"
                ));
            }
        }
    }
    let w = &cm.witness;
    let inst = w.instance(m);
    let at = |f: &Formula| eval(&inst, f, w.world, &w.env);
    let everywhere = |f: &Formula| holds_everywhere(&|v| eval(&inst, f, v, &w.env));
    let refuted = match spec.reading {
        Reading::Object => !at(&spec.conclusion)?,
        Reading::Meta => {
            let (a, b) = split_implication(&spec.conclusion)
                .ok_or_else(|| RecheckError::Malformed("no implication".into()))?;
            everywhere(a)? && !at(b)?
        }
        Reading::Deduction => {
            let (a, b) = split_implication(&spec.conclusion)
                .ok_or_else(|| RecheckError::Malformed("no implication".into()))?;
            let meta = !everywhere(a)? || everywhere(b)?;
            meta && at(a)? && !at(b)?
        }
    };
    if !refuted {
        return reject(format!(
            "conclusion does not fail at {}",
            fr.world_name(w.world)
        ));
    }
    Ok(())
}

/// Loads a certificate document and re-validates it with [`recheck`].
pub fn verify_certificate(text: &str) -> std::result::Result<(), RecheckError> {
    let model = Model::from_json(text)?;
    let doc: Value =
        serde_json::from_str(text).map_err(|e| RecheckError::Malformed(e.to_string()))?;
    let cert = doc
        .get("certificate")
        .ok_or_else(|| RecheckError::Malformed("no certificate block".into()))?;
    let malformed = |what: &str| RecheckError::Malformed(format!("missing or invalid `{what}`"));
    let text_of = |key: &str| {
        cert.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| malformed(key))
    };
    let list = |key: &str| -> std::result::Result<Vec<Formula>, RecheckError> {
        cert.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(key))?
            .iter()
            .map(|v| Ok(parse(v.as_str().ok_or_else(|| malformed(key))?)?))
            .collect()
    };
    let fr = model.frame();
    let reading: Reading = text_of("reading")?
        .parse()
        .map_err(RecheckError::Malformed)?;
    let world_name = text_of("world")?;
    let world = fr
        .world_index(world_name)
        .ok_or_else(|| malformed("world"))?;
    let mut schemes = Vec::new();
    if let Some(map) = cert.get("instantiation").and_then(Value::as_object) {
        for (name, worlds) in map {
            let mut set = WorldSet::EMPTY;
            for w in worlds
                .as_array()
                .ok_or_else(|| malformed("instantiation"))?
            {
                let i = w
                    .as_str()
                    .and_then(|w| fr.world_index(w))
                    .ok_or_else(|| malformed("instantiation"))?;
                set.insert(i);
            }
            schemes.push((name.clone(), set));
        }
    }
    let constraints = cert
        .get("constraints")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("constraints"))?
        .iter()
        .map(|c| {
            c.as_str()
                .ok_or_else(|| malformed("constraints"))?
                .parse()
                .map_err(RecheckError::Malformed)
        })
        .collect::<std::result::Result<Vec<FrameConstraint>, _>>()?;
    let spec = SearchSpec {
        max_worlds: fr.len(),
        max_domain: model.domain_frame().map_or(0, |df| df.domain().len()),
        constraints,
        premise_formulas: list("premises")?,
        premise_schemes: list("scheme_premises")?,
        conclusion: parse(text_of("conclusion")?)?,
        reading,
        mode: match &model {
            Model::Fo(fm) => fm.mode,
            Model::Prop(_) => DomainMode::Varying,
        },
    };
    let witness = Witness {
        world,
        env: Env::new(),
        props: Vec::new(),
        schemes,
        hole: None,
    };
    // Every scheme variable of the conclusion must be instantiated.
    let inst = witness.instance(&model);
    check(&inst, &spec.conclusion, &mut Vec::new())?;
    recheck(&spec, &Countermodel { model, witness })
}

/// Applies `f` to every item on `jobs` threads, keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::with_capacity(items.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                out.lock().expect("no poisoned lock").push((i, r));
            });
        }
    });
    let mut out = out.into_inner().expect("no poisoned lock");
    out.sort_by_key(|&(i, _)| i);
    out.into_iter().map(|(_, r)| r).collect()
}

/// All frames on 1..=`max_worlds` worlds, smallest first.
pub fn all_frames(max_worlds: usize) -> Vec<Frame> {
    (1..=max_worlds)
        .flat_map(|n| enumerate_frames(n, &[], false).collect::<Vec<_>>())
        .collect()
}

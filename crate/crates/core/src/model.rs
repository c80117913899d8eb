//! Finite Kripke frames and models.
//!
//! Worlds and domain elements are named, ordered, and addressed internally
//! by index; sets of them are 64-bit masks, so a frame has at most 64
//! worlds and a domain at most 64 elements.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{ConstName, PredName, PropName};

pub const MAX_WORLDS: usize = 64;
pub const MAX_DOMAIN: usize = 64;
/// Upper bound on `|domain|^arity` for a single predicate.
pub const MAX_TUPLES: usize = 1 << 16;

/// A set of worlds, bit `i` standing for the `i`-th world of a frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// The first `n` worlds.
    pub fn full(n: usize) -> WorldSet {
        WorldSet(low_bits(n))
    }

    pub fn singleton(i: usize) -> WorldSet {
        WorldSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl std::ops::BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & rhs.0)
    }
}

impl std::ops::BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 | rhs.0)
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = WorldSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A validation failure, located by JSON path when it comes from a file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ModelError {
    pub path: String,
    pub message: String,
}

impl ModelError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameProperty {
    Reflexive,
    Transitive,
    Symmetric,
    Serial,
    Euclidean,
    Equivalence,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 6] = [
        FrameProperty::Reflexive,
        FrameProperty::Transitive,
        FrameProperty::Symmetric,
        FrameProperty::Serial,
        FrameProperty::Euclidean,
        FrameProperty::Equivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Serial => "serial",
            FrameProperty::Euclidean => "euclidean",
            FrameProperty::Equivalence => "equivalence",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FrameProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameProperty::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown frame property `{s}`"))
    }
}

/// Worlds plus an accessibility relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
}

impl Frame {
    /// Builds a frame from world names and accessible pairs.
    pub fn new<S: AsRef<str>>(worlds: Vec<String>, access: &[(S, S)]) -> Result<Frame, ModelError> {
        check_names("worlds", &worlds, MAX_WORLDS)?;
        let mut succ = vec![WorldSet::EMPTY; worlds.len()];
        for (k, (from, to)) in access.iter().enumerate() {
            let lookup = |name: &str, side: usize| {
                worlds.iter().position(|w| w == name).ok_or_else(|| {
                    ModelError::new(
                        format!("access[{k}][{side}]"),
                        format!("unknown world `{name}`"),
                    )
                })
            };
            let i = lookup(from.as_ref(), 0)?;
            let j = lookup(to.as_ref(), 1)?;
            succ[i].insert(j);
        }
        Ok(Frame { worlds, succ })
    }

    /// Builds a frame from successor sets, one per world.
    pub fn from_successors(worlds: Vec<String>, succ: Vec<WorldSet>) -> Result<Frame, ModelError> {
        check_names("worlds", &worlds, MAX_WORLDS)?;
        if succ.len() != worlds.len() {
            return Err(ModelError::new(
                "access",
                "one successor set per world required",
            ));
        }
        let full = WorldSet::full(worlds.len());
        if let Some(i) = succ.iter().position(|s| !s.is_subset(full)) {
            return Err(ModelError::new(
                format!("access[{i}]"),
                "successor outside the frame",
            ));
        }
        Ok(Frame { worlds, succ })
    }

    /// `n` worlds named `w0..`, with pair `(i, j)` accessible iff bit
    /// `i * n + j` of `bits` is set.
    pub fn from_relation_bits(n: usize, bits: u64) -> Frame {
        assert!(
            (1..=8).contains(&n),
            "relation bitmasks cover at most 8 worlds"
        );
        let succ = (0..n)
            .map(|i| WorldSet(bits >> (i * n) & low_bits(n)))
            .collect();
        Frame {
            worlds: default_world_names(n),
            succ,
        }
    }

    /// Inverse of [`Frame::from_relation_bits`].
    pub fn relation_bits(&self) -> u64 {
        let n = self.len();
        assert!(n <= 8, "relation bitmasks cover at most 8 worlds");
        self.succ
            .iter()
            .enumerate()
            .fold(0, |acc, (i, s)| acc | s.0 << (i * n))
    }

    /// Every world accesses every world.
    pub fn total(worlds: Vec<String>) -> Result<Frame, ModelError> {
        let n = worlds.len();
        Frame::from_successors(worlds, vec![WorldSet::full(n); n])
    }

    /// The same worlds with the total relation.
    pub fn with_total_access(&self) -> Frame {
        let n = self.len();
        Frame {
            worlds: self.worlds.clone(),
            succ: vec![WorldSet::full(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn successors(&self, i: usize) -> WorldSet {
        self.succ[i]
    }

    pub fn accessible(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(j)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.succ[i].iter().map(move |j| (i, j)))
            .collect()
    }

    pub fn names_of(&self, set: WorldSet) -> Vec<String> {
        set.iter().map(|i| self.worlds[i].clone()).collect()
    }

    pub fn has(&self, prop: FrameProperty) -> bool {
        frame_property(self, prop)
    }
}

pub fn default_world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// `a`, `b`, ... for small domains.
pub fn default_element_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 20 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

fn check_names(path: &str, names: &[String], max: usize) -> Result<(), ModelError> {
    if names.is_empty() {
        return Err(ModelError::new(path, "must be nonempty"));
    }
    if names.len() > max {
        return Err(ModelError::new(
            path,
            format!("at most {max} entries supported, got {}", names.len()),
        ));
    }
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(ModelError::new(format!("{path}[{i}]"), "empty identifier"));
        }
        if names[..i].contains(name) {
            return Err(ModelError::new(
                format!("{path}[{i}]"),
                format!("duplicate identifier `{name}`"),
            ));
        }
    }
    Ok(())
}

/// Literal finite check of a relation property.
pub fn frame_property(fr: &Frame, prop: FrameProperty) -> bool {
    let n = fr.len();
    let r = |i: usize, j: usize| fr.accessible(i, j);
    match prop {
        FrameProperty::Reflexive => (0..n).all(|x| r(x, x)),
        FrameProperty::Symmetric => (0..n).all(|x| (0..n).all(|y| !r(x, y) || r(y, x))),
        FrameProperty::Transitive => {
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(r(x, y) && r(y, z)) || r(x, z))))
        }
        FrameProperty::Serial => (0..n).all(|x| (0..n).any(|y| r(x, y))),
        FrameProperty::Euclidean => {
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(r(x, y) && r(x, z)) || r(y, z))))
        }
        FrameProperty::Equivalence => {
            frame_property(fr, FrameProperty::Reflexive)
                && frame_property(fr, FrameProperty::Symmetric)
                && frame_property(fr, FrameProperty::Transitive)
        }
    }
}

/// A frame with a valuation of proposition letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropModel {
    pub frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
}

impl PropModel {
    pub fn new(
        frame: Frame,
        valuation: BTreeMap<String, WorldSet>,
    ) -> Result<PropModel, ModelError> {
        check_valuation(&frame, &valuation)?;
        Ok(PropModel { frame, valuation })
    }

    /// All letters false everywhere.
    pub fn empty(frame: Frame) -> PropModel {
        PropModel {
            frame,
            valuation: BTreeMap::new(),
        }
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn truth(&self, atom: &str) -> WorldSet {
        self.valuation.get(atom).copied().unwrap_or_default()
    }

    pub(crate) fn set_truth(&mut self, atom: &str, set: WorldSet) {
        self.valuation.insert(atom.to_string(), set);
    }
}

fn check_valuation(
    frame: &Frame,
    valuation: &BTreeMap<String, WorldSet>,
) -> Result<(), ModelError> {
    for (name, set) in valuation {
        PropName::new(name.as_str())
            .map_err(|e| ModelError::new(format!("valuation.{name}"), e.to_string()))?;
        if !set.is_subset(frame.all()) {
            return Err(ModelError::new(
                format!("valuation.{name}"),
                "world outside the frame",
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainMode {
    Constant,
    Varying,
}

impl fmt::Display for DomainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainMode::Constant => "constant",
            DomainMode::Varying => "varying",
        })
    }
}

impl std::str::FromStr for DomainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constant" => Ok(DomainMode::Constant),
            "varying" => Ok(DomainMode::Varying),
            other => Err(format!(
                "unknown domain mode `{other}` (expected constant or varying)"
            )),
        }
    }
}

/// A frame with a quantification domain and the elements existing at each
/// world. A world may have no existing elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainFrame {
    pub frame: Frame,
    domain: Vec<String>,
    exists_in: Vec<u64>,
}

impl DomainFrame {
    pub fn new(
        frame: Frame,
        domain: Vec<String>,
        exists_in: Vec<u64>,
    ) -> Result<DomainFrame, ModelError> {
        check_names("domain", &domain, MAX_DOMAIN)?;
        if exists_in.len() != frame.len() {
            return Err(ModelError::new(
                "exists_in",
                "one existence set per world required",
            ));
        }
        let full = low_bits(domain.len());
        if let Some(w) = exists_in.iter().position(|s| s & !full != 0) {
            return Err(ModelError::new(
                format!("exists_in.{}", frame.world_name(w)),
                "element outside the domain",
            ));
        }
        Ok(DomainFrame {
            frame,
            domain,
            exists_in,
        })
    }

    /// Every element exists everywhere.
    pub fn constant(frame: Frame, domain: Vec<String>) -> Result<DomainFrame, ModelError> {
        let full = low_bits(domain.len());
        let n = frame.len();
        DomainFrame::new(frame, domain, vec![full; n])
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn full_domain(&self) -> u64 {
        low_bits(self.domain.len())
    }

    /// Elements existing at world `w`, as a bitmask over the domain.
    pub fn exists_at(&self, w: usize) -> u64 {
        self.exists_in[w]
    }

    pub fn exists_in(&self) -> &[u64] {
        &self.exists_in
    }

    pub fn element_names(&self, mask: u64) -> Vec<String> {
        (0..self.domain.len())
            .filter(|d| mask >> d & 1 == 1)
            .map(|d| self.domain[d].clone())
            .collect()
    }

    pub fn monotonicity(&self) -> Monotonicity {
        domain_monotonicity(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Monotonicity {
    pub constant: bool,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
}

/// Domain behaviour along accessibility, checked edge by edge.
pub fn domain_monotonicity(df: &DomainFrame) -> Monotonicity {
    let fr = &df.frame;
    let edges = fr.pairs();
    Monotonicity {
        constant: df.exists_in.iter().all(|&s| s == df.full_domain()),
        nondecreasing: edges
            .iter()
            .all(|&(w, v)| df.exists_in[w] & !df.exists_in[v] == 0),
        nonincreasing: edges
            .iter()
            .all(|&(w, v)| df.exists_in[v] & !df.exists_in[w] == 0),
    }
}

/// The same flags, phrased with an existential premise per target world
/// and element: `(exists w. a in D(w) and R(w, v)) => a in D(v)` for
/// nondecreasing, with `R(v, w)` for nonincreasing.
pub fn domain_monotonicity_existential(df: &DomainFrame) -> Monotonicity {
    let fr = &df.frame;
    let n = fr.len();
    let exists = |w: usize, a: usize| df.exists_in[w] >> a & 1 == 1;
    let holds = |forward: bool| {
        (0..n).all(|v| {
            (0..df.domain.len()).all(|a| {
                let premise = (0..n).any(|w| {
                    exists(w, a)
                        && if forward {
                            fr.accessible(w, v)
                        } else {
                            fr.accessible(v, w)
                        }
                });
                !premise || exists(v, a)
            })
        })
    };
    Monotonicity {
        constant: (0..n).all(|w| (0..df.domain.len()).all(|a| exists(w, a))),
        nondecreasing: holds(true),
        nonincreasing: holds(false),
    }
}

/// Extension of a world-dependent predicate: for each argument tuple (in
/// [`tuple_index`] order) the worlds where it holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlexiblePred {
    pub arity: usize,
    pub truth: Vec<WorldSet>,
}

/// Extension of a world-independent predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RigidPred {
    pub arity: usize,
    pub truth: Vec<bool>,
}

/// Row-major index of an argument tuple over a domain of `domain_len`.
pub fn tuple_index(args: &[usize], domain_len: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * domain_len + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_of(mut index: usize, arity: usize, domain_len: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % domain_len;
        index /= domain_len;
    }
    out
}

pub fn tuple_count(arity: usize, domain_len: usize) -> Option<usize> {
    domain_len
        .checked_pow(arity as u32)
        .filter(|&c| c <= MAX_TUPLES)
}

/// A first-order model: domain frame, quantifier mode, proposition
/// valuation, and predicate and constant interpretations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoModel {
    pub dframe: DomainFrame,
    pub mode: DomainMode,
    valuation: BTreeMap<String, WorldSet>,
    flexible: BTreeMap<String, FlexiblePred>,
    rigid: BTreeMap<String, RigidPred>,
    consts: BTreeMap<String, usize>,
}

impl FoModel {
    /// A model with no symbols interpreted yet.
    pub fn skeleton(dframe: DomainFrame, mode: DomainMode) -> Result<FoModel, ModelError> {
        if mode == DomainMode::Constant
            && dframe.exists_in.iter().any(|&s| s != dframe.full_domain())
        {
            return Err(ModelError::new(
                "exists_in",
                "constant mode requires every element to exist at every world",
            ));
        }
        Ok(FoModel {
            dframe,
            mode,
            valuation: BTreeMap::new(),
            flexible: BTreeMap::new(),
            rigid: BTreeMap::new(),
            consts: BTreeMap::new(),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.dframe.frame
    }

    pub fn domain_len(&self) -> usize {
        self.dframe.domain.len()
    }

    pub fn set_valuation(
        &mut self,
        valuation: BTreeMap<String, WorldSet>,
    ) -> Result<(), ModelError> {
        check_valuation(self.frame(), &valuation)?;
        self.valuation = valuation;
        Ok(())
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    fn check_symbol(
        &self,
        name: &str,
        arity: usize,
        len: usize,
        path: &str,
    ) -> Result<(), ModelError> {
        PredName::new(name).map_err(|e| ModelError::new(path, e.to_string()))?;
        if self.flexible.contains_key(name) || self.rigid.contains_key(name) {
            return Err(ModelError::new(
                path,
                format!("predicate `{name}` declared twice"),
            ));
        }
        if arity == 0 {
            return Err(ModelError::new(
                format!("{path}.arity"),
                "arity must be at least 1",
            ));
        }
        match tuple_count(arity, self.domain_len()) {
            Some(c) if c == len => Ok(()),
            Some(c) => Err(ModelError::new(
                path,
                format!("expected {c} tuples, got {len}"),
            )),
            None => Err(ModelError::new(
                format!("{path}.arity"),
                "too many argument tuples",
            )),
        }
    }

    pub fn add_flexible(&mut self, name: &str, pred: FlexiblePred) -> Result<(), ModelError> {
        let path = format!("flexible_preds.{name}");
        self.check_symbol(name, pred.arity, pred.truth.len(), &path)?;
        if pred.truth.iter().any(|s| !s.is_subset(self.frame().all())) {
            return Err(ModelError::new(path, "world outside the frame"));
        }
        self.flexible.insert(name.to_string(), pred);
        Ok(())
    }

    pub fn add_rigid(&mut self, name: &str, pred: RigidPred) -> Result<(), ModelError> {
        self.check_symbol(
            name,
            pred.arity,
            pred.truth.len(),
            &format!("rigid_preds.{name}"),
        )?;
        self.rigid.insert(name.to_string(), pred);
        Ok(())
    }

    pub fn add_const(&mut self, name: &str, element: usize) -> Result<(), ModelError> {
        let path = format!("rigid_consts.{name}");
        ConstName::new(name).map_err(|e| ModelError::new(&path, e.to_string()))?;
        if element >= self.domain_len() {
            return Err(ModelError::new(path, "element outside the domain"));
        }
        self.consts.insert(name.to_string(), element);
        Ok(())
    }

    pub fn flexible_preds(&self) -> &BTreeMap<String, FlexiblePred> {
        &self.flexible
    }

    pub fn rigid_preds(&self) -> &BTreeMap<String, RigidPred> {
        &self.rigid
    }

    pub fn rigid_consts(&self) -> &BTreeMap<String, usize> {
        &self.consts
    }

    pub(crate) fn set_truth(&mut self, atom: &str, set: WorldSet) {
        self.valuation.insert(atom.to_string(), set);
    }

    pub(crate) fn set_flexible_truth(&mut self, name: &str, tuple: usize, set: WorldSet) {
        self.flexible
            .get_mut(name)
            .expect("declared predicate")
            .truth[tuple] = set;
    }

    pub(crate) fn set_const(&mut self, name: &str, element: usize) {
        self.consts.insert(name.to_string(), element);
    }

    /// Elements the quantifiers range over at world `w`.
    pub fn range_at(&self, w: usize) -> u64 {
        match self.mode {
            DomainMode::Constant => self.dframe.full_domain(),
            DomainMode::Varying => self.dframe.exists_in[w],
        }
    }
}

/// A model loaded from a file: propositional unless it declares a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Prop(PropModel),
    Fo(FoModel),
}

impl Model {
    pub fn frame(&self) -> &Frame {
        match self {
            Model::Prop(m) => &m.frame,
            Model::Fo(m) => m.frame(),
        }
    }

    /// Replaces the accessibility relation by the total one.
    pub fn with_total_access(self) -> Model {
        match self {
            Model::Prop(m) => Model::Prop(PropModel {
                frame: m.frame.with_total_access(),
                valuation: m.valuation,
            }),
            Model::Fo(mut m) => {
                m.dframe.frame = m.dframe.frame.with_total_access();
                Model::Fo(m)
            }
        }
    }

    pub fn domain_frame(&self) -> Option<&DomainFrame> {
        match self {
            Model::Prop(_) => None,
            Model::Fo(m) => Some(&m.dframe),
        }
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ModelDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." {
                "$".to_string()
            } else {
                format!("$.{path}")
            };
            ModelError::new(path, e.into_inner().to_string())
        })?;
        doc.into_model()
    }

    pub fn to_doc(&self) -> ModelDoc {
        match self {
            Model::Prop(m) => ModelDoc::from_prop(m),
            Model::Fo(m) => ModelDoc::from_fo(m),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model documents serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlexibleDoc {
    pub arity: usize,
    #[serde(default)]
    pub extension: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigidDoc {
    pub arity: usize,
    #[serde(default)]
    pub extension: Vec<Vec<String>>,
}

/// On-disk model format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub worlds: Vec<String>,
    pub access: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DomainMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exists_in: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flexible_preds: BTreeMap<String, FlexibleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rigid_preds: BTreeMap<String, RigidDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rigid_consts: BTreeMap<String, String>,
    /// Present on search certificates; ignored when loading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl ModelDoc {
    fn from_prop(m: &PropModel) -> ModelDoc {
        ModelDoc {
            worlds: m.frame.worlds.clone(),
            access: pair_names(&m.frame),
            valuation: m
                .valuation
                .iter()
                .map(|(k, &s)| (k.clone(), m.frame.names_of(s)))
                .collect(),
            domain: None,
            mode: None,
            exists_in: None,
            flexible_preds: BTreeMap::new(),
            rigid_preds: BTreeMap::new(),
            rigid_consts: BTreeMap::new(),
            certificate: None,
        }
    }

    fn from_fo(m: &FoModel) -> ModelDoc {
        let fr = m.frame();
        let df = &m.dframe;
        let d = m.domain_len();
        let names = |t: usize, arity: usize| {
            tuple_of(t, arity, d)
                .into_iter()
                .map(|a| df.domain[a].clone())
                .collect()
        };
        ModelDoc {
            worlds: fr.worlds.clone(),
            access: pair_names(fr),
            valuation: m
                .valuation
                .iter()
                .map(|(k, &s)| (k.clone(), fr.names_of(s)))
                .collect(),
            domain: Some(df.domain.clone()),
            mode: Some(m.mode),
            exists_in: Some(
                (0..fr.len())
                    .map(|w| (fr.worlds[w].clone(), df.element_names(df.exists_in[w])))
                    .collect(),
            ),
            flexible_preds: m
                .flexible
                .iter()
                .map(|(k, p)| {
                    let extension = (0..fr.len())
                        .map(|w| {
                            let tuples = (0..p.truth.len())
                                .filter(|&t| p.truth[t].contains(w))
                                .map(|t| names(t, p.arity))
                                .collect();
                            (fr.worlds[w].clone(), tuples)
                        })
                        .collect();
                    (
                        k.clone(),
                        FlexibleDoc {
                            arity: p.arity,
                            extension,
                        },
                    )
                })
                .collect(),
            rigid_preds: m
                .rigid
                .iter()
                .map(|(k, p)| {
                    let extension = (0..p.truth.len())
                        .filter(|&t| p.truth[t])
                        .map(|t| names(t, p.arity))
                        .collect();
                    (
                        k.clone(),
                        RigidDoc {
                            arity: p.arity,
                            extension,
                        },
                    )
                })
                .collect(),
            rigid_consts: m
                .consts
                .iter()
                .map(|(k, &e)| (k.clone(), df.domain[e].clone()))
                .collect(),
            certificate: None,
        }
    }

    /// Validates every invariant, reporting the first violation by path.
    pub fn into_model(self) -> Result<Model, ModelError> {
        let at = |p: String| move |e: ModelError| ModelError::new(p.clone(), e.message);
        check_names("$.worlds", &self.worlds, MAX_WORLDS)?;
        let frame = Frame::new(self.worlds.clone(), &self.access)
            .map_err(|e| ModelError::new(format!("$.{}", e.path), e.message))?;
        let mut valuation = BTreeMap::new();
        for (name, ws) in &self.valuation {
            let path = format!("$.valuation.{name}");
            PropName::new(name.as_str()).map_err(|e| ModelError::new(&path, e.to_string()))?;
            valuation.insert(name.clone(), world_set(&frame, ws, &path)?);
        }

        let Some(domain) = self.domain else {
            for (key, present) in [
                ("mode", self.mode.is_some()),
                ("exists_in", self.exists_in.is_some()),
                ("flexible_preds", !self.flexible_preds.is_empty()),
                ("rigid_preds", !self.rigid_preds.is_empty()),
                ("rigid_consts", !self.rigid_consts.is_empty()),
            ] {
                if present {
                    return Err(ModelError::new(format!("$.{key}"), "requires `domain`"));
                }
            }
            return Ok(Model::Prop(PropModel { frame, valuation }));
        };

        check_names("$.domain", &domain, MAX_DOMAIN)?;
        let element = |name: &str, path: &str| {
            domain
                .iter()
                .position(|d| d == name)
                .ok_or_else(|| ModelError::new(path, format!("unknown domain element `{name}`")))
        };
        let full = low_bits(domain.len());
        let mut exists_in = vec![full; frame.len()];
        if let Some(map) = &self.exists_in {
            for w in frame.worlds() {
                if !map.contains_key(w) {
                    return Err(ModelError::new(
                        "$.exists_in",
                        format!("missing world `{w}`"),
                    ));
                }
            }
            for (w, elems) in map {
                let path = format!("$.exists_in.{w}");
                let wi = frame
                    .world_index(w)
                    .ok_or_else(|| ModelError::new(&path, format!("unknown world `{w}`")))?;
                let mut mask = 0;
                for (k, e) in elems.iter().enumerate() {
                    mask |= 1 << element(e, &format!("{path}[{k}]"))?;
                }
                exists_in[wi] = mask;
            }
        }
        let mode = self.mode.unwrap_or(DomainMode::Varying);
        let dframe = DomainFrame::new(frame.clone(), domain.clone(), exists_in)
            .map_err(at("$.exists_in".into()))?;
        let mut model = FoModel::skeleton(dframe, mode).map_err(at("$.exists_in".into()))?;
        model.valuation = valuation;
        let d = domain.len();

        let tuple = |args: &[String], arity: usize, path: &str| -> Result<usize, ModelError> {
            if args.len() != arity {
                return Err(ModelError::new(
                    path,
                    format!("expected {arity} arguments, got {}", args.len()),
                ));
            }
            let mut idx = Vec::with_capacity(arity);
            for (k, a) in args.iter().enumerate() {
                idx.push(element(a, &format!("{path}[{k}]"))?);
            }
            Ok(tuple_index(&idx, d))
        };
        let count = |arity: usize, path: &str| {
            if arity == 0 {
                return Err(ModelError::new(
                    format!("{path}.arity"),
                    "arity must be at least 1",
                ));
            }
            tuple_count(arity, d)
                .ok_or_else(|| ModelError::new(format!("{path}.arity"), "too many argument tuples"))
        };

        for (name, doc) in &self.flexible_preds {
            let path = format!("$.flexible_preds.{name}");
            let mut truth = vec![WorldSet::EMPTY; count(doc.arity, &path)?];
            for (w, tuples) in &doc.extension {
                let wpath = format!("{path}.extension.{w}");
                let wi = frame
                    .world_index(w)
                    .ok_or_else(|| ModelError::new(&wpath, format!("unknown world `{w}`")))?;
                for (k, args) in tuples.iter().enumerate() {
                    truth[tuple(args, doc.arity, &format!("{wpath}[{k}]"))?].insert(wi);
                }
            }
            model
                .add_flexible(
                    name,
                    FlexiblePred {
                        arity: doc.arity,
                        truth,
                    },
                )
                .map_err(at(path))?;
        }
        for (name, doc) in &self.rigid_preds {
            let path = format!("$.rigid_preds.{name}");
            let mut truth = vec![false; count(doc.arity, &path)?];
            for (k, args) in doc.extension.iter().enumerate() {
                truth[tuple(args, doc.arity, &format!("{path}.extension[{k}]"))?] = true;
            }
            model
                .add_rigid(
                    name,
                    RigidPred {
                        arity: doc.arity,
                        truth,
                    },
                )
                .map_err(at(path))?;
        }
        for (name, e) in &self.rigid_consts {
            let path = format!("$.rigid_consts.{name}");
            let idx = element(e, &path)?;
            model.add_const(name, idx).map_err(at(path))?;
        }
        Ok(Model::Fo(model))
    }
}

fn pair_names(fr: &Frame) -> Vec<(String, String)> {
    fr.pairs()
        .into_iter()
        .map(|(i, j)| (fr.worlds[i].clone(), fr.worlds[j].clone()))
        .collect()
}

fn world_set(frame: &Frame, names: &[String], path: &str) -> Result<WorldSet, ModelError> {
    let mut s = WorldSet::EMPTY;
    for (k, w) in names.iter().enumerate() {
        let i = frame.world_index(w).ok_or_else(|| {
            ModelError::new(format!("{path}[{k}]"), format!("unknown world `{w}`"))
        })?;
        s.insert(i);
    }
    Ok(s)
}

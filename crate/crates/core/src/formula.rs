//! Deep-embedded abstract syntax for propositional and first-order modal
//! formulas.
//!
//! Zero-ary atoms follow a case convention: a lowercase-initial name is a
//! concrete proposition letter ([`Formula::Prop`]), an uppercase-initial
//! name is a schematic metavariable ([`Formula::Scheme`]) that ranges over
//! every world-predicate. Term identifiers follow a second convention:
//! names starting with `u`..=`z` are bound variables, names starting with
//! `a`..=`t` are rigid constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

mod render;

pub use render::{render, Format};

/// Reserved words that can never be used as identifiers.
pub const KEYWORDS: [&str; 2] = ["forall", "exists"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid {kind} name `{name}`: {reason}")]
pub struct NameError {
    pub kind: &'static str,
    pub name: String,
    pub reason: &'static str,
}

/// True when `s` is an identifier: an ASCII letter followed by letters,
/// digits or underscores, and not a keyword.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

fn first_char(s: &str) -> char {
    s.chars().next().unwrap_or('\0')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $ty:ident, $kind:literal, $reason:literal, |$c:ident| $check:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $ty(String);

        impl $ty {
            pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
                let name = name.into();
                if !is_identifier(&name) {
                    return Err(NameError { kind: $kind, name, reason: "not an identifier" });
                }
                let $c = first_char(&name);
                if !$check {
                    return Err(NameError { kind: $kind, name, reason: $reason });
                }
                Ok($ty(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl AsRef<str> for $ty {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

name_type!(
    /// Name of a concrete proposition letter.
    PropName, "proposition", "must start with a lowercase letter", |c| c.is_ascii_lowercase()
);
name_type!(
    /// Name of a schematic metavariable.
    SchemeName, "scheme variable", "must start with an uppercase letter", |c| c.is_ascii_uppercase()
);
name_type!(PredName, "predicate", "", |_c| true);
name_type!(
    /// Name of a bound (individual) variable.
    VarName, "variable", "must start with one of u..z", |c| ('u'..='z').contains(&c)
);
name_type!(
    /// Name of a rigid individual constant.
    ConstName, "constant", "must start with one of a..t", |c| ('a'..='t').contains(&c)
);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarName),
    Const(ConstName),
}

impl Term {
    /// Classifies `name` by its initial letter.
    pub fn parse_name(name: &str) -> Result<Term, NameError> {
        if ('u'..='z').contains(&first_char(name)) {
            VarName::new(name).map(Term::Var)
        } else {
            ConstName::new(name).map(Term::Const)
        }
    }

    pub fn var(name: &str) -> Result<Term, NameError> {
        VarName::new(name).map(Term::Var)
    }

    pub fn constant(name: &str) -> Result<Term, NameError> {
        ConstName::new(name).map(Term::Const)
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(v) => v.as_str(),
            Term::Const(c) => c.as_str(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A modal formula.
///
/// `Dia`, `Or`, `Iff` and `StrictImp` are primitive nodes with their own
/// semantics, not abbreviations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(PropName),
    Scheme(SchemeName),
    Pred(PredName, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    StrictImp(Box<Formula>, Box<Formula>),
    Forall(VarName, Box<Formula>),
    Exists(VarName, Box<Formula>),
}

impl Formula {
    /// A zero-ary atom; the case of the first letter selects between a
    /// proposition letter and a scheme variable.
    pub fn atom(name: &str) -> Result<Formula, NameError> {
        if first_char(name).is_ascii_uppercase() {
            SchemeName::new(name).map(Formula::Scheme)
        } else {
            PropName::new(name).map(Formula::Prop)
        }
    }

    pub fn prop(name: &str) -> Result<Formula, NameError> {
        PropName::new(name).map(Formula::Prop)
    }

    pub fn scheme(name: &str) -> Result<Formula, NameError> {
        SchemeName::new(name).map(Formula::Scheme)
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Result<Formula, NameError> {
        PredName::new(name).map(|p| Formula::Pred(p, args))
    }

    pub fn negation(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }

    pub fn strict_imp(a: Formula, b: Formula) -> Formula {
        Formula::StrictImp(Box::new(a), Box::new(b))
    }

    pub fn forall(var: VarName, body: Formula) -> Formula {
        Formula::Forall(var, Box::new(body))
    }

    pub fn exists(var: VarName, body: Formula) -> Formula {
        Formula::Exists(var, Box::new(body))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Scheme(_) | Formula::Pred(..) | Formula::Eq(..) => vec![],
            Formula::Not(a) | Formula::Box(a) | Formula::Dia(a) => vec![a],
            Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b)
            | Formula::StrictImp(a, b) => vec![a, b],
        }
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// Proposition letters occurring in the formula.
    pub fn prop_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.to_string());
            }
        });
        out
    }

    /// Scheme variables occurring in the formula.
    pub fn scheme_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Scheme(s) = f {
                out.insert(s.to_string());
            }
        });
        out
    }

    /// Variables with at least one occurrence outside the scope of a binder
    /// for that name.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut term = |t: &Term, bound: &Vec<String>| {
                if let Term::Var(v) = t {
                    if !bound.iter().any(|b| b == v.as_str()) {
                        out.insert(v.to_string());
                    }
                }
            };
            match f {
                Formula::Pred(_, args) => args.iter().for_each(|t| term(t, bound)),
                Formula::Eq(l, r) => {
                    term(l, bound);
                    term(r, bound);
                }
                Formula::Forall(x, b) | Formula::Exists(x, b) => {
                    bound.push(x.to_string());
                    go(b, bound, out);
                    bound.pop();
                }
                _ => {
                    for c in f.children() {
                        go(c, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Predicate symbols with every arity they are used at.
    pub fn predicates(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        self.walk(&mut |f| {
            if let Formula::Pred(p, args) = f {
                out.entry(p.to_string()).or_default().insert(args.len());
            }
        });
        out
    }

    /// Rigid constants occurring in terms.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            let terms: Vec<&Term> = match f {
                Formula::Pred(_, args) => args.iter().collect(),
                Formula::Eq(l, r) => vec![l, r],
                _ => vec![],
            };
            for t in terms {
                if let Term::Const(c) = t {
                    out.insert(c.to_string());
                }
            }
        });
        out
    }

    /// No predicate atoms, equalities or quantifiers.
    pub fn is_propositional(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |f| {
            if matches!(
                f,
                Formula::Pred(..) | Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..)
            ) {
                ok = false;
            }
        });
        ok
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Format::Ascii))
    }
}

//! Proptest strategies shared by unit tests.

use proptest::prelude::*;

use crate::formula::{Formula, Term, VarName};

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["x", "y"]).prop_map(|v| Term::var(v).unwrap()),
        prop::sample::select(vec!["c", "d"]).prop_map(|c| Term::constant(c).unwrap()),
    ]
}

fn leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![
        prop::sample::select(vec!["p", "q", "g", "r_1"]).prop_map(|n| Formula::prop(n).unwrap()),
        prop::sample::select(vec!["P", "Q", "R"]).prop_map(|n| Formula::scheme(n).unwrap()),
        term().prop_map(|t| Formula::pred("F", vec![t]).unwrap()),
        (term(), term()).prop_map(|(a, b)| Formula::pred("G", vec![a, b]).unwrap()),
        (term(), term()).prop_map(|(a, b)| Formula::Eq(a, b)),
    ]
}

/// Arbitrary formulas over a fixed vocabulary in which no uppercase name is
/// used both as a scheme variable and as a predicate.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y"]).prop_map(|v| VarName::new(v).unwrap());
        prop_oneof![
            inner.clone().prop_map(Formula::negation),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::dia),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::strict_imp(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (var, inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

/// Propositional formulas over letters `p`, `q`, `r` and schemes `P`, `Q`.
pub fn arb_prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["p", "q", "r"]).prop_map(|n| Formula::prop(n).unwrap()),
        prop::sample::select(vec!["P", "Q"]).prop_map(|n| Formula::scheme(n).unwrap()),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negation),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::dia),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::strict_imp(a, b)),
        ]
    })
}

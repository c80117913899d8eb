//! Seeded random formulas and models for integration tests.

#![allow(dead_code)]

use modalkit::formula::{Formula, Term, VarName};
use modalkit::model::{default_world_names, Frame, PropModel, WorldSet};
use rand::Rng;

pub fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

fn term<R: Rng>(rng: &mut R) -> Term {
    if rng.gen_bool(0.5) {
        Term::var(pick(rng, &["x", "y", "z_1"])).unwrap()
    } else {
        Term::constant(pick(rng, &["c", "d", "a2"])).unwrap()
    }
}

/// Any formula of depth at most `depth`, over a vocabulary where no
/// uppercase name is both a scheme variable and a predicate.
pub fn formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..5) {
            0 => Formula::prop(pick(rng, &["p", "q", "g", "r_1"])).unwrap(),
            1 => Formula::scheme(pick(rng, &["P", "Q", "Rx"])).unwrap(),
            2 => Formula::pred("F", vec![term(rng)]).unwrap(),
            3 => Formula::pred("G", vec![term(rng), term(rng)]).unwrap(),
            _ => Formula::Eq(term(rng), term(rng)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Formula::negation(formula(rng, d)),
        1 => Formula::boxed(formula(rng, d)),
        2 => Formula::dia(formula(rng, d)),
        3 => Formula::and(formula(rng, d), formula(rng, d)),
        4 => Formula::or(formula(rng, d), formula(rng, d)),
        5 => Formula::imp(formula(rng, d), formula(rng, d)),
        6 => Formula::iff(formula(rng, d), formula(rng, d)),
        7 => Formula::strict_imp(formula(rng, d), formula(rng, d)),
        8 => Formula::forall(
            VarName::new(pick(rng, &["x", "y"])).unwrap(),
            formula(rng, d),
        ),
        _ => Formula::exists(
            VarName::new(pick(rng, &["x", "y"])).unwrap(),
            formula(rng, d),
        ),
    }
}

/// Propositional formulas over the letters `p`, `q`, `r`.
pub fn prop_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 5) {
        return Formula::prop(pick(rng, &["p", "q", "r"])).unwrap();
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Formula::negation(prop_formula(rng, d)),
        1 => Formula::boxed(prop_formula(rng, d)),
        2 => Formula::dia(prop_formula(rng, d)),
        3 => Formula::and(prop_formula(rng, d), prop_formula(rng, d)),
        4 => Formula::or(prop_formula(rng, d), prop_formula(rng, d)),
        5 => Formula::imp(prop_formula(rng, d), prop_formula(rng, d)),
        6 => Formula::iff(prop_formula(rng, d), prop_formula(rng, d)),
        _ => Formula::strict_imp(prop_formula(rng, d), prop_formula(rng, d)),
    }
}

/// A model on 1..=`max_worlds` worlds with random access and a random
/// valuation of `p`, `q`, `r`.
pub fn prop_model<R: Rng>(rng: &mut R, max_worlds: usize) -> PropModel {
    let n = rng.gen_range(1..=max_worlds);
    let succ = (0..n)
        .map(|_| WorldSet(rng.gen_range(0..1u64 << n)))
        .collect();
    let frame = Frame::from_successors(default_world_names(n), succ).unwrap();
    let val = ["p", "q", "r"]
        .iter()
        .map(|a| (a.to_string(), WorldSet(rng.gen_range(0..1u64 << n))))
        .collect();
    PropModel::new(frame, val).unwrap()
}

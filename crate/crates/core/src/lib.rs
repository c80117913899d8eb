//! Finite Kripke model workbench for propositional and quantified modal
//! logic.
//!
//! Formulas are parsed ([`parser`]) into a deep-embedded syntax tree
//! ([`formula`]), evaluated over finite models ([`model`], [`semantics`]),
//! checked against frame properties ([`correspondence`]), and refuted by
//! exhaustive countermodel search ([`search`]).

pub mod cli;
pub mod correspondence;
pub mod error;
pub mod formula;
pub mod model;
pub mod parser;
pub mod search;
pub mod semantics;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use formula::{Format, Formula, Term};
pub use model::{
    DomainFrame, DomainMode, FoModel, Frame, FrameProperty, Model, PropModel, WorldSet,
};
pub use parser::{parse, ParseError};
pub use semantics::{Budget, Env, Verdict};

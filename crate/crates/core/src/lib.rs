//! Compiler for German lute tablature written as column-aligned plain text.
//!
//! Pipeline: [`scanner`] → [`prelude`] / [`tempus`] / [`vox`] → [`model`],
//! then [`xml`] for the data model and [`svg`] for a control graphic.

pub mod cli;
pub mod diag;
pub mod model;
pub mod prelude;
pub mod rational;
pub mod scanner;
pub mod svg;
pub mod tempus;
pub mod vox;
pub mod xml;

pub use diag::{Error, Pos, Stage, Warning};
pub use model::{compile, Columna, Compilation, ParsModel, ScoreModel, Sonum, Trabes};
pub use rational::Rational;

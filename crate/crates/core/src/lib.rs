//! Exact computations for embedded contact homology of open books with torus boundary:
//! F₂ chain complexes built from orbit-set models, filtrations and spectral-sequence
//! pages, index formulas, and Reeb dynamics of rotationally symmetric contact forms.

pub mod complexbuilder;
pub mod error;
pub mod f2core;
pub mod indices;
pub mod orbitsets;
pub mod rational;
pub mod reebprofiles;
pub mod scenarios;
pub mod spectral;

pub use error::{Error, Result};

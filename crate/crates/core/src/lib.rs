//! Generalized preprojective algebras `Π(C, D, Ω)` attached to symmetrizable
//! Cartan data, their locally free modules, and the generic extension
//! product on crystal modules.

pub mod catalog;
pub mod cartan;
pub mod error;
pub mod linalg;
pub mod pimod;
pub mod selftest;
pub mod starop;
pub mod symred;

pub use error::{Error, Result};

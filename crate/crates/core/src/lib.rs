//! Exact slope arithmetic for vector bundles: Harder-Narasimhan polygons on
//! the Fargues-Fontaine curve, splitting types and elementary modifications
//! on the projective line, the multilinear and homological lemmas behind the
//! tangent-space computation for basic Rapoport-Zink spaces, and the
//! enumerator of admissible tangent slope profiles.
//!
//! Everything is computed in exact arithmetic (arbitrary-precision rationals
//! or odd prime fields), and every sampled experiment is deterministic given
//! its seed.

pub mod cli;
pub mod error;
pub mod field;
pub mod forms;
pub mod hn;
pub mod ktpoly;
pub mod local_model;
pub mod matrix;
pub mod multilinear;
pub mod p1;
pub mod rng;
pub mod rz;
pub mod tor;

pub use error::{Error, Result};

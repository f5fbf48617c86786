//! Finite-scale toolkit for frames and locales.
//!
//! Frames are finite distributive lattices with cached tables. On top of them
//! the crate builds frame maps and their adjoints, locale products (frame
//! coproducts) as C-ideals, spectra relative to an explicit family of ground
//! joins, deciders for localic separation and connectedness properties, and
//! Zariski spectra of finite commutative rings. A small declarative language
//! and a corpus-wide cross-check suite sit on top.

pub mod bitset;
pub mod colimit;
pub mod coproduct;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod hom;
pub mod interp;
pub mod lattice;
pub mod properties;
pub mod report;
pub mod ring;
pub mod suite;

pub use bitset::BitSet;
pub use error::{Caps, Error, Result};
pub use hom::FrameMap;
pub use lattice::{Elem, FiniteSpace, Frame, Poset};

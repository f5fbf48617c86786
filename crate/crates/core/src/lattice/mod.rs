//! Finite posets, frames and spaces.

mod frame;
mod poset;
mod space;

pub use frame::{Elem, Frame};
pub use poset::Poset;
pub use space::FiniteSpace;

pub(crate) use poset::default_names;
pub(crate) use space::rectangle;

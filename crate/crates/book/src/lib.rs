//! The chapters of the guide in `book/`, compiled so their listings run as
//! doctests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/frames.md")]
pub mod frames {}
#[doc = include_str!("../../../book/src/maps.md")]
pub mod maps {}
#[doc = include_str!("../../../book/src/coproducts.md")]
pub mod coproducts {}
#[doc = include_str!("../../../book/src/points.md")]
pub mod points {}
#[doc = include_str!("../../../book/src/separation.md")]
pub mod separation {}
#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}
#[doc = include_str!("../../../book/src/language.md")]
pub mod language {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

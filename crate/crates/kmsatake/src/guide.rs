//! The long-form guide, shared with the rendered book.
//!
//! Each module below carries one chapter of `book/src` as its
//! documentation, so `cargo test --doc` compiles and runs every code
//! snippet in the book and the two can never drift apart. Render the
//! HTML version with `mdbook build book`.

#[doc = include_str!("../../../book/src/01-introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/02-root-data.md")]
pub mod root_data {}

#[doc = include_str!("../../../book/src/03-series.md")]
pub mod series_and_windows {}

#[doc = include_str!("../../../book/src/04-weyl.md")]
pub mod weyl_combinatorics {}

#[doc = include_str!("../../../book/src/05-operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/06-symmetrizers.md")]
pub mod symmetrizer_kernels {}

#[doc = include_str!("../../../book/src/07-spherical.md")]
pub mod spherical_image {}

#[doc = include_str!("../../../book/src/08-cli.md")]
pub mod command_line {}

//! The guide chapters from `book/` attached as module docs, so that every
//! code block in the book runs under `cargo test --doc` and the guide
//! cannot drift from the crate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/linear-algebra.md")]
pub mod linear_algebra {}

#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}

#[doc = include_str!("../../../book/src/canonical-divisor.md")]
pub mod canonical_divisor {}

#[doc = include_str!("../../../book/src/group-action.md")]
pub mod group_action {}

#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

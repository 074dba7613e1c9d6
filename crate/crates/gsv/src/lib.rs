//! Exact symbolic toolkit for the generalised affine Stiefel variety
//! `GSV(r,s) = {(X, Y) : X*Y = I_r}` with `X` of shape `r x s` and `Y` of
//! shape `s x r`, `r <= s`.
//!
//! The crate constructs the variety's affine charts and certifies, in
//! arbitrary-precision rational arithmetic with no floating point anywhere:
//!
//! - triviality of the canonical divisor and the Cartier property, via
//!   symbolic Jacobians of chart transitions and `±1` gluing factors
//!   ([`atlas`]);
//! - homogeneity under `GL(r) x GL(s)`, via constructive orbit witnesses
//!   and the block description of the stabilizer ([`repthy`]);
//! - triviality of the canonical weight under the restricted torus, via
//!   exact weight-lattice bookkeeping ([`repthy`]).
//!
//! The layers underneath are an exact sparse polynomial/localized-fraction
//! kernel ([`symalg`]) and fraction-free symbolic linear algebra
//! ([`symmat`]); the variety model itself lives in [`variety`].
//!
//! ```
//! use gsv::variety::GSVSpec;
//!
//! let spec = GSVSpec::new(1, 2).unwrap();
//! let cert = gsv::atlas::certify_canonical_trivial(&spec).unwrap();
//! assert_eq!(cert.verdict(), "CANONICAL_TRIVIAL");
//! assert!(gsv::repthy::canonical_weight(&spec).unwrap().is_zero());
//! ```
//!
//! A narrative guide with runnable examples lives in `book/` (rendered with
//! mdbook); its code blocks are attached as doctests via the hidden
//! [`book`] module.

pub mod atlas;
#[doc(hidden)]
pub mod book;
pub mod repthy;
pub mod symalg;
pub mod symmat;
pub mod variety;

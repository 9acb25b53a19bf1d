//! Narrative guide to the crate, mirrored from the book in `book/src`.
//!
//! Each submodule embeds one chapter so that the code examples in the book
//! run as doc-tests and cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/weighted-spaces.md")]
pub mod weighted_spaces {}

#[doc = include_str!("../../../book/src/averaged-modulus.md")]
pub mod averaged_modulus {}

#[doc = include_str!("../../../book/src/step-sandwich.md")]
pub mod step_sandwich {}

#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/oracle-and-verification.md")]
pub mod oracle_and_verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}

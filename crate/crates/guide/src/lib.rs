//! The chapters of `book/` compiled as doc-tests, so the snippets there keep
//! building against the current API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}

#[doc = include_str!("../../../book/src/corpus.md")]
pub mod corpus {}

#[doc = include_str!("../../../book/src/interference.md")]
pub mod interference {}

#[doc = include_str!("../../../book/src/context.md")]
pub mod context {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}

//! The code listings of the guide in `book/`, run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/scalars.md")]
pub mod scalars {}
#[doc = include_str!("../../../book/src/modules.md")]
pub mod modules {}
#[doc = include_str!("../../../book/src/tensors.md")]
pub mod tensors {}
#[doc = include_str!("../../../book/src/bar.md")]
pub mod bar {}
#[doc = include_str!("../../../book/src/canonical.md")]
pub mod canonical {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

//! Compiles the guide's snippets as doc-tests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exponents.md")]
pub mod exponents {}

#[doc = include_str!("../../../book/src/spectral.md")]
pub mod spectral {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/decompositions.md")]
pub mod decompositions {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

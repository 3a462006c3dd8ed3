//! Compiles and runs the book's code listings as doc-tests.
//!
//! mdbook does not run listings against local crates, so each chapter is
//! included here as module documentation and `cargo test --doc` does the
//! work. One module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/scalars.md")]
pub mod scalars {}

#[doc = include_str!("../../../book/src/waveforms.md")]
pub mod waveforms {}

#[doc = include_str!("../../../book/src/clocks.md")]
pub mod clocks {}

#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}

#[doc = include_str!("../../../book/src/schedules.md")]
pub mod schedules {}

#[doc = include_str!("../../../book/src/passes.md")]
pub mod passes {}

#[doc = include_str!("../../../book/src/targets.md")]
pub mod targets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/json.md")]
pub mod json {}

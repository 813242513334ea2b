//! Runs the code blocks of the guide under `book/src` as doc-tests.
//!
//! `mdbook test` cannot link against workspace crates, so each chapter is
//! pulled in as the docs of an empty module instead. A failing doc-test is
//! named after the module, which names the chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/correlators.md")]
pub mod correlators {}

#[doc = include_str!("../../../book/src/state.md")]
pub mod state {}

#[doc = include_str!("../../../book/src/entanglement.md")]
pub mod entanglement {}

#[doc = include_str!("../../../book/src/discord.md")]
pub mod discord {}

#[doc = include_str!("../../../book/src/work-deficit.md")]
pub mod work_deficit {}

#[doc = include_str!("../../../book/src/collapse-revival.md")]
pub mod collapse_revival {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

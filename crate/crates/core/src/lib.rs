//! Causal graph dynamics over generalized Cayley graphs.
//!
//! The crate covers canonical pointed port graphs and their disks, local
//! rules and the global step they induce, a string codec for graphs and
//! rules, and a universal rule with a machine that builds its inputs.

pub mod codec;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod library;
pub mod random;
pub mod rule;
pub mod universal;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/graphs.md")]
    struct Graphs;
    #[doc = include_str!("../../../book/src/rules.md")]
    struct Rules;
    #[doc = include_str!("../../../book/src/codec.md")]
    struct Codec;
    #[doc = include_str!("../../../book/src/universal.md")]
    struct Universal;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

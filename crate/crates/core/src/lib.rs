//! Deciders for constraint satisfaction with counting quantifiers over graph
//! templates.

pub mod acceptance;
pub mod classify;
pub mod finpath;
pub mod formula;
pub mod generate;
pub mod infpath;
pub mod k4;
pub mod oracle;
pub mod reductions;

/// The guide in `book/`, compiled so that its examples run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/formats.md")]
    pub mod formats {}
    #[doc = include_str!("../../../book/src/game.md")]
    pub mod game {}
    #[doc = include_str!("../../../book/src/k4.md")]
    pub mod k4 {}
    #[doc = include_str!("../../../book/src/paths.md")]
    pub mod paths {}
    #[doc = include_str!("../../../book/src/small.md")]
    pub mod small {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    pub mod gadgets {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

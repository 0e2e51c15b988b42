//! Singularity invariants of meromorphic plane-curve germs `f/g`.

pub mod algebra;
pub mod dmodule;
pub mod germ;
pub mod invariants;
pub mod multiplier;
pub mod parser;
pub mod reports;
pub mod resolution;

pub use germ::{parse_germ, GermError, MeromorphicGerm};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/germs.md")]
    mod germs {}
    #[doc = include_str!("../../../book/src/resolution.md")]
    mod resolution {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/multiplier.md")]
    mod multiplier {}
    #[doc = include_str!("../../../book/src/dmodule.md")]
    mod dmodule {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

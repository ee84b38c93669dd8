//! Number-variance experiments for circular and Gaussian β ensembles.
//!
//! Circular ensembles are sampled through their Verblunsky coefficients and
//! counted with the Prüfer phase; Gaussian ensembles through the
//! Dumitriu–Edelman tridiagonal model, counted with Sturm sequences or with a
//! lifted phase sweep. The [`stats`] module turns counts into variance scans.

pub mod circular;
pub mod error;
pub mod gaussian;
pub mod lift;
pub mod parallel;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use rng::RngStream;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circular.md")]
    mod circular {}
    #[doc = include_str!("../../../book/src/lifts.md")]
    mod lifts {}
    #[doc = include_str!("../../../book/src/gaussian.md")]
    mod gaussian {}
    #[doc = include_str!("../../../book/src/carousel.md")]
    mod carousel {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}

//! Exact arithmetic for quantum cluster algebras of valued quivers and for
//! Ringel-Hall algebras over finite fields.
//!
//! * [`exactring`]: Laurent polynomials in `w = q^{1/4}`, their specializations
//!   at a prime, Gaussian binomials.
//! * [`cartan`]: valued quivers and the matrices of the principal frame.
//! * [`qtorus`]: quantum tori.
//! * [`seedlab`]: compatible pairs, mutation and torus relations.
//! * [`repfq`]: representations over `F_q`, isoclasses and Hom/Ext.
//! * [`hallcc`]: Hall algebra products and the quantum cluster character.
//! * [`family`]: named and random test quivers.

pub mod cartan;
pub mod exactring;
pub mod family;
pub mod matrix;
pub mod qtorus;
pub mod hallcc;
pub mod repfq;
pub mod seedlab;

pub use cartan::{FrameData, QuiverError, ValuedQuiver};
pub use exactring::{Coefficient, LaurentW, QuarticNumber};
pub use matrix::IntMatrix;
pub use qtorus::{SkewForm, TorusElement};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/tori.md")]
    mod tori {}
    #[doc = include_str!("../../../book/src/seeds.md")]
    mod seeds {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/hall.md")]
    mod hall {}
}

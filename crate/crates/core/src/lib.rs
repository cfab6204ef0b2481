//! Witt classes of flat SL(2,Q)-bundles over closed surfaces.
//!
//! Layers, bottom up: square classes and local invariants ([`qforms`]), the
//! Witt group with norms ([`witt`]), SL(2,Q) and its cochains ([`sl2`]),
//! surface representations and the central extension ([`surface`]), and the
//! constructive realization of prescribed classes ([`realize`]).

pub mod error;
pub mod factor;
pub mod gen;
pub mod qforms;
pub mod rational;
pub mod realize;
pub mod repio;
pub mod selftest;
pub mod sl2;
pub mod surface;
pub mod witt;

pub use error::{Error, Result};
pub use qforms::{DiagonalForm, Place, SquareClass};
pub use rational::Rational;
pub use sl2::Mat2;
pub use surface::{BoundedSurfaceRep, ClosedSurfaceRep, ExtElem};
pub use witt::{LaurentForm, WittClass};

//! Exact-arithmetic engine for the `W(Y)` invariant calculus.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: the lattice `Z^b` standing for `H_1(Y;Z)/tors`, admissible
//!   index pairs and max-norm enumeration windows.
//! - [`wspace`]: the truncated quotient `W(Y)` of the free rational space on
//!   `theta_{a,b}` symbols by the four-term relations, with pushforward,
//!   retraction and the `(-id)`-involution.
//! - [`confpair`]: Whitehead brackets of `t_i^a w_ij` classes, the coface maps,
//!   the pairing `Theta` and the image spans of `Theta . delta_2^k`.
//! - [`groupword`], [`groupring`]: free products of cyclic groups, their
//!   group rings `Z[G \ 1]`, conjugation operators and the solver for
//!   `b - C_g(b) = y`.
//! - [`embpi1`]: the semidirect product `Z[G \ 1] x| G` and the loop classes
//!   whose conjugacy is decided through the group-ring solver.
//! - [`certify`]: certificate pipelines assembling the pieces.
//! - [`scenario`], [`report`], [`selftest`]: the JSON file formats and the
//!   embedded verification suite used by the `wcalc` binary.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod certify;
pub mod confpair;
pub mod embpi1;
pub mod error;
pub mod groupring;
pub mod groupword;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod scenario;
pub mod selftest;
pub mod wspace;

pub use error::{Error, Result};
pub use rational::Q;

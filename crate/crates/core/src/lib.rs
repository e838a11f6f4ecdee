//! Inverse-free compilation of special-unitary targets into gate words.
//!
//! The crate builds a stack of successively tighter epsilon-nets around the
//! identity. The first net samples the whole group by exhaustive enumeration
//! of fixed-length words; each further net is obtained by *shrinking* the
//! previous one, either through triple products followed by post-selection
//! (no inverse gates needed) or through normal commutators (the inverse-using
//! baseline). A target is then compiled by a nearest-point lookup in the
//! sampling net followed by one correction lookup per shrunk level.
//!
//! Module map:
//!
//! * [`geometry`]: unitary matrices, the generator basis and the vector
//!   embedding of unitaries, both distance measures, Haar sampling.
//! * [`gateset`]: gate sets, words, word evaluation and encoding.
//! * [`nets`]: sampling nets, ball selection, nearest-point search, net files.
//! * [`shrink`]: diffusion and commutator shrinking, random-walk statistics,
//!   diffusivity diagnostics.
//! * [`compiler`]: the recursive lookup procedure and the length law.
//! * [`exec`]: parallel / sequential execution switch.

pub mod compiler;
pub mod error;
pub mod exec;
pub mod gateset;
pub mod geometry;
pub mod nets;
pub mod shrink;

pub use error::{Error, Result};
pub use exec::Execution;

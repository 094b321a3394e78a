//! Sparse algebraic power series over finite fields.
//!
//! The crate connects three layers:
//!
//! * finite-state machinery: [`automaton`] (DFAOs, regular-language algebra,
//!   census counting), [`sparse`] (sparseness decision, decomposition into
//!   simple sparse languages, closed forms) and [`spset`] (automatic subsets
//!   of `S_p` and their arithmetic);
//! * coefficient arithmetic: [`field`] (`F_{p^m}`) and [`series`] (truncated
//!   and generalized power series, Artin-Schreier operators);
//! * [`christol`], which turns automata into series and sparse supports into
//!   replayable construction certificates.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the companion
//! `christol-tools` crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod automaton;
pub mod christol;
pub mod digits;
pub mod error;
pub mod field;
mod nfa;
pub mod series;
pub mod sparse;
pub mod spset;

pub use automaton::{Acceptor, Dfao, Direction};
pub use digits::{RadixWord, SpRational};
pub use error::{Error, Result};
pub use field::{FieldElement, GaloisField, MooreData};
pub use series::{GenSeries, TruncatedSeries};
pub use sparse::{ClosedForm, SimpleSparseForm, SparsenessVerdict};
pub use spset::SpSet;

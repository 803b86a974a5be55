//! Rank-metric codes, quasifields and the correspondence between them.
//!
//! Matrices over finite fields are row-vector operators. Codes are finite sets
//! of `m×n` matrices with the rank distance, and quasifields are recovered from
//! square MRD codes through their spread sets.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod classify;
pub mod code;
pub mod constructions;
pub mod error;
pub mod gabidulin;
pub mod gf;
pub mod io;
pub mod matgf;
pub mod small;
pub mod symmetric;

pub use algebra::{Quasifield, SpreadSet, SubField};
pub use classify::{EquivalenceMode, EquivalenceWitness};
pub use code::{HammingCode, RankCode};
pub use error::{Error, Result};
pub use gabidulin::GabidulinSpec;
pub use gf::{FieldSpec, FqElem};
pub use matgf::MatGF;

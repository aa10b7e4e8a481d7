//! Exact computations for co-Higgs bundles on the projective line.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`]: exact rationals and their `p/q` string form.
//! * [`sections`]: global sections of `O(n)` in two coordinate charts.
//! * [`higgs`]: splitting types, Higgs fields, characteristic coefficients.
//! * [`rank2`]: the rank-2 moduli descriptions (odd degree and even degree).
//! * [`chains`]: holomorphic chains, Morse indices and the Betti census.
//! * [`ffcount`]: finite-field counting of stable chains.
//! * [`cache`]: the JSON-lines census and oracle stores.
//!
//! All arithmetic is exact. Nothing in here touches floating point.

pub mod cache;
pub mod chains;
mod error;
pub mod ffcount;
pub mod higgs;
pub mod rank2;
pub mod rational;
pub mod sections;

pub use error::{Error, Result};
pub use rational::Q;

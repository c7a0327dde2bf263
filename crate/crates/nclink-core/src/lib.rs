//! Link-level primitives for a noncoherent multiuser massive-SIMO uplink.
//!
//! Each of `K` single-antenna users signals over two slots towards an
//! `M`-antenna base station without channel state information at either end.
//! The users draw their symbols from uniquely decomposable QAM
//! sub-constellations whose sum is itself a square QAM constellation, so the
//! base station can recover every user's bits from a single noncoherent
//! statistic. This crate holds the pieces that are independent of any
//! simulation harness:
//!
//! * [`udcg`]: the uniquely decomposable constellation group and its
//!   bit mapping,
//! * [`design`]: max-min Kullback-Leibler power/scale design, both the
//!   closed form and a brute-force grid reference,
//! * [`channel`]: large-scale path loss, Rayleigh fading, AWGN,
//! * [`modem`]: codeword assembly, the generalized energy detector and its
//!   general `T`-slot form, KL distances between received-signal laws,
//! * [`baseline`]: minimum-energy-distance on-off signaling and a
//!   train-then-equalize ZF receiver used for comparison,
//! * [`rng`]: counter-based random streams that make every Monte Carlo
//!   block reproducible independently of scheduling.
//!
//! The crate is `no_std` (with `alloc`) so the primitives can run inside
//! bare-metal DSP harnesses; everything that touches files or threads lives
//! in the companion `nclink-sim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baseline;
pub mod channel;
pub mod design;
pub mod error;
pub mod mat;
pub mod modem;
pub mod rng;
pub mod udcg;

pub use error::Error;
pub use num_complex::Complex64;

/// Convenience alias used throughout: `Result` with this crate's [`Error`].
pub type Result<T> = core::result::Result<T, Error>;

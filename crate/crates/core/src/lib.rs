//! Natural lineshape of spontaneous emission in a one-parameter family of
//! gauge representations, together with resonance-fluorescence rates,
//! laser-pulse-excited emission spectra and a verification suite for the
//! gauge-invariance identities that tie them together.
//!
//! Natural units (`hbar = c = eps0 = 1`) are used everywhere.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom;
pub mod error;
pub mod fluorescence;
pub mod lineshape;
pub mod ode;
pub mod pulse;
pub mod quadrature;
pub mod repr;
pub mod spectrum;
pub mod verify;

pub use atom::{
    build_oscillator, build_two_level, trk_sum, AtomModel, Level, Motion, TwoLevelAtom,
};
pub use error::{Error, Result};
pub use repr::{alpha_k, coupling_pair, Alpha, CouplingPair, GaugeRepresentation};
pub use spectrum::{GridScale, GridSpec, Spectrum, SpectrumMeta};

/// Default ultraviolet cutoff in units of the transition frequency.
pub const DEFAULT_CUTOFF_RATIO: f64 = 1e3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Capacity analysis for a distributed MIMO link whose transmit and receive
//! antennas are oblivious to the source/destination codebooks.
//!
//! The channel between the `M` transmitters and `M` receivers is the circulant
//! Wyner interference model `Y_m = X_m + alpha X_{m-1} + Z_m`. In the large-`M`
//! limit it behaves like an inter-symbol-interference channel with spatial
//! spectrum `G(f) = 1 + alpha^2 + 2 alpha cos(2 pi f)`, so every rate in this
//! crate is an integral over `f in [0, 1)` of some effective SNR density.
//!
//! Module map:
//!
//! * [`spectrum`]: channel spectrum, the rational SNR density family, circulant eigenvalues.
//! * [`waterfill`]: waterfilling power allocation over a density, plus the high-SNR closed form.
//! * [`fixedpoint`]: the monotone bisection used by the distributed-compression schemes.
//! * [`schemes`]: the cut-set bound and the achievable rate of every transmit/receive scheme.
//! * [`oracle`]: independent finite-size validators (discrete waterfilling, brute quadrature).
//! * [`sweep`]: parameter grids, CSV/JSON emission and the canned figure dataset.
//!
//! All rates are in bit per symbol per antenna.

pub mod error;
pub mod fixedpoint;
pub mod oracle;
pub mod quadrature;
pub mod schemes;
pub mod spectrum;
pub mod sweep;
pub mod waterfill;

pub use error::{Error, Result};
pub use schemes::{Capacity, LinkBudget, Scheme, SchemeRate};
pub use spectrum::{ChannelSpec, EigenSpectrum, SnrDensity};
pub use waterfill::{waterfill, WaterfillSolution};

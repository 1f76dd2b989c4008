//! Relay beamforming for the two-flow coordinated direct/relay (CDR)
//! amplify-and-forward system.
//!
//! One multi-antenna relay serves an uplink flow (UE1 to BS) and a downlink
//! flow (BS to UE2) over two slots. The BS cancels its own signal and UE2
//! combines its overheard first-slot sample with the relayed one through a
//! zero-forcing receiver. The crate provides
//!
//! - the closed-form rate model and relay power accounting ([`model`]),
//! - the whitened product-of-Rayleigh-quotients objective ([`reformulation`]),
//! - the ASA, PIA and LSS solvers plus single-criterion baselines ([`algorithms`]),
//! - the split-beamformer sum-rate upper bound ([`upper_bound`]),
//! - a name-keyed registry of schemes ([`registry`]) and a Monte Carlo
//!   sweep harness ([`harness`]) driving the `cdr-sim` binary.
//!
//! ```
//! use cdr_relay::model::{sample_channels, SystemParams};
//! use cdr_relay::reformulation::QuadraticForms;
//! use cdr_relay::algorithms::{pia, PiaConfig};
//! use rand::SeedableRng;
//!
//! let params = SystemParams::from_snr_db(2, 10.0).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let channels = sample_channels(&params, &mut rng);
//! let forms = QuadraticForms::build(&channels, &params).unwrap();
//! let sol = pia(&forms, &PiaConfig::default()).unwrap();
//! assert!(sol.rates.sum > 0.0);
//! ```

pub mod algorithms;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod reformulation;
pub mod registry;
pub mod scalar_opt;
pub mod upper_bound;

pub use error::{Error, Result};

/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
/// Dense complex row vector.
pub type CRow = nalgebra::RowDVector<num_complex::Complex64>;
pub use num_complex::Complex64;

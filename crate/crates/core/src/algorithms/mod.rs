//! Beamforming solvers. Each one takes the whitened forms of a channel
//! realization and returns a full-power [`Solution`].
//!
//! | name       | method                                                     |
//! |------------|------------------------------------------------------------|
//! | `maxsnr1`  | principal generalized eigenvector of `(A, B)`              |
//! | `maxsinr2` | principal generalized eigenvector of `(C, D)`              |
//! | `pureamp`  | scaled identity                                            |
//! | `asa`      | adaptive subspace averaging over `αB⁻¹A + (1−α)D⁻¹C`       |
//! | `pia`      | power iteration on the stationarity condition              |
//! | `lss`      | best point on the line through the two single-flow optima  |

mod asa;
mod baselines;
mod lss;
mod pia;

pub use asa::{asa, Asa, AsaConfig};
pub use baselines::{
    max_sinr2, max_snr1, pure_amplification, MaxSinr2, MaxSnr1, PureAmplification,
};
pub use lss::{lss, Lss, LssConfig};
pub use pia::{pia, Pia, PiaConfig, PiaInit};

use crate::reformulation::{QuadraticForms, Solution};
use crate::Result;

/// A relay beamforming strategy operating on prebuilt quadratic forms.
pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution>;
}

/// Sum rate in bits for objective value `g`.
pub(crate) fn rate_of(g: f64) -> f64 {
    0.5 * g.log2()
}

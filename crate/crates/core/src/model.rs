//! Channel realizations, the closed-form SNR/SINR expressions, relay power
//! accounting, and the pure-amplification baseline.
//!
//! Noise at every receiver (relay antennas, BS, both UE2 slots) has unit
//! variance. Channels are not assumed reciprocal: relay→BS and BS→relay are
//! drawn independently.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{CMat, CRow, CVec, Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Relay antenna count `M`.
    pub antennas: usize,
    /// Transmit power `P` of the BS and of each UE (linear).
    pub node_power: f64,
    /// Relay power budget `P_R` (linear).
    pub relay_power: f64,
}

impl SystemParams {
    pub fn new(antennas: usize, node_power: f64, relay_power: f64) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::InvalidParameter("antenna count must be >= 1".into()));
        }
        if !(node_power > 0.0 && node_power.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "node power must be positive, got {node_power}"
            )));
        }
        if !(relay_power > 0.0 && relay_power.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "relay power must be positive, got {relay_power}"
            )));
        }
        Ok(Self {
            antennas,
            node_power,
            relay_power,
        })
    }

    /// `P = P_R = 10^(snr_db / 10)`.
    pub fn from_snr_db(antennas: usize, snr_db: f64) -> Result<Self> {
        let p = 10f64.powf(snr_db / 10.0);
        Self::new(antennas, p, p)
    }
}

/// One realization of every channel coefficient over the two slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// UE1 → relay.
    pub h_r1: CVec,
    /// BS → relay.
    pub h_rb: CVec,
    /// Relay → BS.
    pub h_br: CRow,
    /// Relay → UE2.
    pub h_2r: CRow,
    /// UE1 → UE2 (overheard link).
    pub h_21: Complex64,
    /// BS → UE2 (direct link).
    pub h_2b: Complex64,
}

impl ChannelSet {
    pub fn antennas(&self) -> usize {
        self.h_r1.len()
    }

    pub fn check_dims(&self, m: usize) -> Result<()> {
        for len in [
            self.h_r1.len(),
            self.h_rb.len(),
            self.h_br.len(),
            self.h_2r.len(),
        ] {
            if len != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: len,
                });
            }
        }
        Ok(())
    }
}

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws every coefficient i.i.d. CN(0, 1).
pub fn sample_channels<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> ChannelSet {
    let m = params.antennas;
    let h_r1 = CVec::from_iterator(m, (0..m).map(|_| cn01(rng)));
    let h_rb = CVec::from_iterator(m, (0..m).map(|_| cn01(rng)));
    let h_br = CRow::from_iterator(m, (0..m).map(|_| cn01(rng)));
    let h_2r = CRow::from_iterator(m, (0..m).map(|_| cn01(rng)));
    let h_21 = cn01(rng);
    let h_2b = cn01(rng);
    ChannelSet {
        h_r1,
        h_rb,
        h_br,
        h_2r,
        h_21,
        h_2b,
    }
}

/// Square `M×M` relay processing matrix `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer(CMat);

impl Beamformer {
    pub fn new(w: CMat) -> Result<Self> {
        if w.nrows() != w.ncols() {
            return Err(Error::Dimension {
                expected: w.nrows(),
                got: w.ncols(),
            });
        }
        Ok(Self(w))
    }

    pub fn zeros(m: usize) -> Self {
        Self(CMat::zeros(m, m))
    }

    pub fn scaled_identity(m: usize, scale: f64) -> Self {
        Self(CMat::identity(m, m).scale(scale))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.map(|z| z * c))
    }
}

/// `row · W · col`.
fn bilinear(row: &CRow, w: &CMat, col: &CVec) -> Complex64 {
    let wc = w * col;
    row.iter().zip(wc.iter()).map(|(a, b)| a * b).sum()
}

fn row_gain(row: &CRow, w: &CMat) -> f64 {
    (row * w).norm_squared()
}

/// SNR of `x₁` at the BS after self-interference cancellation:
/// `P|h_BR W h_R1|² / (‖h_BR W‖² + 1)`.
pub fn snr1(cs: &ChannelSet, w: &Beamformer, p: f64) -> f64 {
    let w = w.matrix();
    let signal = bilinear(&cs.h_br, w, &cs.h_r1).norm_sqr();
    p * signal / (row_gain(&cs.h_br, w) + 1.0)
}

/// SINR of `x₂` at UE2 with the zero-forcing combiner over both slots.
///
/// Returns `+∞` when the denominator vanishes (`h_21 = 0` and
/// `h_2R W h_R1 = 0`); [`sum_rate`] flags that case as degenerate.
pub fn sinr2(cs: &ChannelSet, w: &Beamformer, p: f64) -> f64 {
    let w = w.matrix();
    let via_ue1 = bilinear(&cs.h_2r, w, &cs.h_r1);
    let via_bs = bilinear(&cs.h_2r, w, &cs.h_rb);
    let numer = p * (cs.h_2b * via_ue1 - cs.h_21 * via_bs).norm_sqr();
    let denom = cs.h_21.norm_sqr() * (row_gain(&cs.h_2r, w) + 1.0) + via_ue1.norm_sqr();
    if denom == 0.0 {
        return f64::INFINITY;
    }
    numer / denom
}

/// Expected relay transmit power
/// `P(‖W h_RB‖² + ‖W h_R1‖²) + ‖W‖_F²`.
pub fn relay_power(cs: &ChannelSet, w: &Beamformer, p: f64) -> f64 {
    let w = w.matrix();
    p * ((w * &cs.h_rb).norm_squared() + (w * &cs.h_r1).norm_squared()) + w.norm_squared()
}

/// Scales `W` by a positive real so the relay transmits exactly `P_R`.
pub fn scale_to_power(cs: &ChannelSet, w: &Beamformer, p: f64, p_r: f64) -> Result<Beamformer> {
    let current = relay_power(cs, w, p);
    if current == 0.0 {
        return Err(Error::ZeroBeamformer);
    }
    let c = (p_r / current).sqrt();
    if c == 1.0 {
        return Ok(w.clone());
    }
    Ok(w.scaled(Complex64::new(c, 0.0)))
}

/// Per-flow and total rates in bits/s/Hz (two-slot factor ½ included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
    pub sum: f64,
    /// The SINR denominator vanished; the pair must not enter averages.
    pub degenerate: bool,
}

impl RatePair {
    pub fn from_snrs(snr1: f64, sinr2: f64) -> Self {
        let r1 = 0.5 * snr1.ln_1p() / std::f64::consts::LN_2;
        let r2 = 0.5 * sinr2.ln_1p() / std::f64::consts::LN_2;
        Self {
            r1,
            r2,
            sum: r1 + r2,
            degenerate: !sinr2.is_finite(),
        }
    }

    pub fn new(r1: f64, r2: f64) -> Self {
        Self {
            r1,
            r2,
            sum: r1 + r2,
            degenerate: false,
        }
    }
}

pub fn sum_rate(cs: &ChannelSet, w: &Beamformer, p: f64) -> RatePair {
    RatePair::from_snrs(snr1(cs, w, p), sinr2(cs, w, p))
}

/// `W = √(P_R / (P‖h_RB‖² + P‖h_R1‖² + M)) · I`.
pub fn pure_amplification(cs: &ChannelSet, p: f64, p_r: f64) -> Beamformer {
    let m = cs.antennas();
    let load = p * cs.h_rb.norm_squared() + p * cs.h_r1.norm_squared() + m as f64;
    Beamformer::scaled_identity(m, (p_r / load).sqrt())
}

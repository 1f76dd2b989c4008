//! Order-independent per-trial seeds.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

/// The splitmix64 finalizer applied after one golden-ratio increment.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(MIX1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX2);
    z ^ (z >> 31)
}

/// Seed for one `(snr, M, trial)` cell. The SNR enters through the bit
/// pattern of its dB value, so a cell draws the same channels whatever
/// other SNR points share the sweep.
pub fn trial_seed(master: u64, snr_db: f64, antennas: usize, trial: usize) -> u64 {
    [snr_db.to_bits(), antennas as u64, trial as u64]
        .iter()
        .fold(splitmix64(master), |h, &x| splitmix64(h ^ x))
}

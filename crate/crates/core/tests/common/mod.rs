//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cdr_relay::harness::trial_channels;
use cdr_relay::model::{ChannelSet, SystemParams};
use cdr_relay::reformulation::QuadraticForms;
use cdr_relay::{CMat, Complex64};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn instance(seed: u64, m: usize, snr_db: f64, trial: usize) -> (SystemParams, ChannelSet) {
    let params = SystemParams::from_snr_db(m, snr_db).unwrap();
    let cs = trial_channels(seed, &params, snr_db, trial);
    (params, cs)
}

pub fn cn<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// Row-major copy for allocation-free quadratic forms.
struct Dense {
    n: usize,
    data: Vec<Complex64>,
}

impl Dense {
    fn new(m: &CMat) -> Self {
        let n = m.nrows();
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        Self { n, data }
    }

    fn quad(&self, w: &[Complex64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut t = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(w) {
                t += a * b;
            }
            acc += w[i].conj() * t;
        }
        acc.re
    }
}

/// Best `½log₂G` over `samples` isotropic random whitened directions.
/// `G` is scale free, so every draw is a full-power point after scaling.
pub fn best_random_rate<R: Rng>(forms: &QuadraticForms, samples: usize, rng: &mut R) -> f64 {
    let [a, b, c, d] = [forms.a(), forms.b(), forms.c(), forms.d()].map(Dense::new);
    let n = forms.dim();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        for z in w.iter_mut() {
            *z = cn(rng);
        }
        let g = (a.quad(&w) / b.quad(&w)) * (c.quad(&w) / d.quad(&w));
        best = best.max(g);
    }
    0.5 * best.log2()
}

/// `W` stored column-major with small helper products.
#[derive(Clone)]
struct Mat {
    m: usize,
    v: Vec<Complex64>,
}

impl Mat {
    fn random<R: Rng>(m: usize, rng: &mut R) -> Self {
        Self {
            m,
            v: (0..m * m).map(|_| cn(rng)).collect(),
        }
    }

    fn frob2(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `W x`.
    fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.m];
        for (j, xj) in x.iter().enumerate() {
            for (yi, wij) in y.iter_mut().zip(&self.v[j * self.m..(j + 1) * self.m]) {
                *yi += wij * xj;
            }
        }
        y
    }

    /// `r W`.
    fn row_mul(&self, r: &[Complex64]) -> Vec<Complex64> {
        (0..self.m)
            .map(|j| (0..self.m).map(|i| r[i] * self.v[j * self.m + i]).sum())
            .collect()
    }

    fn scale(&mut self, c: f64) {
        self.v.iter_mut().for_each(|z| *z *= c);
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Maximizes `objective(W)` over `cost(W) ≤ budget` by rescaling every
/// candidate onto the boundary (both objectives grow with `‖W‖`). The
/// first tenth of the budget is global sampling, the rest a (1+1) evolution
/// strategy around the incumbent with the one-fifth success rule.
fn constrained_search<R: Rng>(
    m: usize,
    samples: usize,
    rng: &mut R,
    cost: impl Fn(&Mat) -> f64,
    budget: f64,
    objective: impl Fn(&Mat) -> f64,
) -> f64 {
    let project = |w: &mut Mat| {
        let c = cost(w);
        w.scale((budget / c).sqrt());
    };
    let mut best = Mat::random(m, rng);
    project(&mut best);
    let mut best_val = objective(&best);
    let global = samples / 10;
    for _ in 1..global {
        let mut w = Mat::random(m, rng);
        project(&mut w);
        let v = objective(&w);
        if v > best_val {
            best = w;
            best_val = v;
        }
    }
    let mut sigma = 0.3;
    for _ in global..samples {
        let scale = sigma * best.frob2().sqrt() / (m as f64);
        let mut w = best.clone();
        for z in w.v.iter_mut() {
            *z += cn(rng) * scale;
        }
        project(&mut w);
        let v = objective(&w);
        if v > best_val {
            best = w;
            best_val = v;
            sigma *= (1.0f64 / 3.0).exp();
        } else {
            sigma *= (-1.0f64 / 12.0).exp();
        }
        if sigma < 1e-9 {
            sigma = 0.3;
        }
    }
    best_val
}

/// Lower estimate of the flow-1 sub-rate by constrained random search.
pub fn search_subrate1<R: Rng>(
    cs: &ChannelSet,
    p: f64,
    kappa1: f64,
    p1: f64,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let m = cs.antennas();
    let h_r1: Vec<_> = cs.h_r1.iter().cloned().collect();
    let h_br: Vec<_> = cs.h_br.iter().cloned().collect();
    let cost = |w: &Mat| p * norm2(&w.mul_vec(&h_r1)) + kappa1 * w.frob2();
    let snr = |w: &Mat| {
        let hw = w.row_mul(&h_br);
        p * dot(&hw, &h_r1).norm_sqr() / (norm2(&hw) + 1.0)
    };
    half_log2_1p(constrained_search(m, samples, rng, cost, p1, snr))
}

/// Lower estimate of the flow-2 sub-rate by constrained random search.
pub fn search_subrate2<R: Rng>(
    cs: &ChannelSet,
    p: f64,
    kappa2: f64,
    p2: f64,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let m = cs.antennas();
    let h_r1: Vec<_> = cs.h_r1.iter().cloned().collect();
    let h_rb: Vec<_> = cs.h_rb.iter().cloned().collect();
    let h_2r: Vec<_> = cs.h_2r.iter().cloned().collect();
    let (h21, h2b) = (cs.h_21, cs.h_2b);
    let cost = |w: &Mat| p * norm2(&w.mul_vec(&h_rb)) + kappa2 * w.frob2();
    let sinr = |w: &Mat| {
        let gw = w.row_mul(&h_2r);
        let via_ue1 = dot(&gw, &h_r1);
        let via_bs = dot(&gw, &h_rb);
        p * (h2b * via_ue1 - h21 * via_bs).norm_sqr()
            / (h21.norm_sqr() * (norm2(&gw) + 1.0) + via_ue1.norm_sqr())
    };
    half_log2_1p(constrained_search(m, samples, rng, cost, p2, sinr))
}

/// Full-power scalar relay rate computed from the channels alone.
pub fn scalar_rate(cs: &ChannelSet, p: f64, p_r: f64) -> f64 {
    assert_eq!(cs.antennas(), 1);
    let (hr1, hrb, hbr, h2r) = (cs.h_r1[0], cs.h_rb[0], cs.h_br[0], cs.h_2r[0]);
    let w2 = p_r / (p * hrb.norm_sqr() + p * hr1.norm_sqr() + 1.0);
    let snr1 = p * hbr.norm_sqr() * w2 * hr1.norm_sqr() / (hbr.norm_sqr() * w2 + 1.0);
    let w = w2.sqrt();
    let via_ue1 = h2r * w * hr1;
    let via_bs = h2r * w * hrb;
    let sinr2 = p * (cs.h_2b * via_ue1 - cs.h_21 * via_bs).norm_sqr()
        / (cs.h_21.norm_sqr() * (h2r.norm_sqr() * w2 + 1.0) + via_ue1.norm_sqr());
    half_log2_1p(snr1) + half_log2_1p(sinr2)
}

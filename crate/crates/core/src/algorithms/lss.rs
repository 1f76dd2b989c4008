//! Linear space spanning: search the line `w̃₁ + b·w̃₂` through the two
//! single-flow optima for the best objective.
//!
//! `b` is parametrized as `tan θ`, `θ ∈ [−π/2, π/2]`, and the candidate is
//! evaluated as `cos θ·w̃₁ + sin θ·w̃₂` (same direction), so `b = 0` and
//! `b = ±∞` are both grid points.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{max_sinr2, max_snr1, rate_of, Solver};
use crate::reformulation::{Diagnostics, QuadraticForms, Solution};
use crate::scalar_opt;
use crate::{CVec, Complex64, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LssConfig {
    pub grid_points: usize,
    pub tol: f64,
    /// Rotate `w̃₂` so that `w̃₁ᴴw̃₂` is real before searching.
    pub phase_align: bool,
    /// Search complex `b = tan θ·e^{iφ}` instead of real `b`.
    pub complex_b: bool,
}

impl Default for LssConfig {
    fn default() -> Self {
        Self {
            grid_points: 51,
            tol: 1e-6,
            phase_align: false,
            complex_b: false,
        }
    }
}

pub fn lss(forms: &QuadraticForms, cfg: &LssConfig) -> Result<Solution> {
    let w1 = max_snr1(forms)?.w_tilde;
    let mut w2 = max_sinr2(forms)?.w_tilde;
    if cfg.phase_align {
        let ip = w1.dotc(&w2);
        if ip.norm() > 0.0 {
            let rot = ip.conj() / ip.norm();
            w2.apply(|z| *z *= rot);
        }
    }
    let combo = |theta: f64, phi: f64| -> CVec {
        let (s, c) = theta.sin_cos();
        &w1 * Complex64::new(c, 0.0) + &w2 * Complex64::from_polar(s, phi)
    };
    let score = |w: &CVec| match forms.objective(w) {
        Ok(o) => rate_of(o.g),
        Err(_) => f64::NEG_INFINITY,
    };

    let (w, b) = if cfg.complex_b {
        let best = scalar_opt::maximize(
            |x| score(&combo(x[0], x[1])),
            &[(0.0, FRAC_PI_2), (-PI, PI)],
            cfg.grid_points,
            cfg.tol,
        );
        (combo(best.x[0], best.x[1]), best.x[0].tan())
    } else {
        let best = scalar_opt::maximize(
            |x| score(&combo(x[0], 0.0)),
            &[(-FRAC_PI_2, FRAC_PI_2)],
            cfg.grid_points,
            cfg.tol,
        );
        (combo(best.x[0], 0.0), best.x[0].tan())
    };
    let diagnostics = Diagnostics {
        fallback: false,
        parameter: Some(b),
    };
    forms.solution("lss", &w, 0, true, diagnostics)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Lss(pub LssConfig);

impl Solver for Lss {
    fn name(&self) -> &'static str {
        "lss"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        lss(forms, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_channels, SystemParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn forms(seed: u64, m: usize, db: f64) -> QuadraticForms {
        let params = SystemParams::from_snr_db(m, db).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QuadraticForms::build(&sample_channels(&params, &mut rng), &params).unwrap()
    }

    #[test]
    fn endpoint_containment_all_variants() {
        for seed in 0..15 {
            let f = forms(200 + seed, 2, 15.0);
            let floor = max_snr1(&f)
                .unwrap()
                .objective
                .max(max_sinr2(&f).unwrap().objective);
            for cfg in [
                LssConfig::default(),
                LssConfig {
                    phase_align: true,
                    ..Default::default()
                },
                LssConfig {
                    complex_b: true,
                    grid_points: 21,
                    ..Default::default()
                },
            ] {
                let s = lss(&f, &cfg).unwrap();
                assert!(s.objective >= floor - 1e-9, "seed {seed} {cfg:?}");
            }
        }
    }

    #[test]
    fn parallel_span_degenerates_to_single_flow() {
        let f = forms(210, 2, 10.0);
        // C = A, D = B makes both single-flow optima the same direction
        let f = f.with_matrices(f.a().clone(), f.b().clone(), f.a().clone(), f.b().clone());
        let s = lss(&f, &LssConfig::default()).unwrap();
        let base = max_snr1(&f).unwrap();
        assert!((s.objective - base.objective).abs() < 1e-9 * base.objective);
        let overlap =
            s.w_tilde.dotc(&base.w_tilde).norm() / (s.w_tilde.norm() * base.w_tilde.norm());
        assert!((overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_search_not_worse_than_real() {
        for seed in 0..5 {
            let f = forms(220 + seed, 2, 20.0);
            let real = lss(
                &f,
                &LssConfig {
                    phase_align: true,
                    ..Default::default()
                },
            )
            .unwrap();
            let cplx = lss(
                &f,
                &LssConfig {
                    complex_b: true,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(cplx.objective >= real.objective * (1.0 - 1e-3));
        }
    }
}

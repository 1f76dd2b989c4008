//! Adaptive subspace averaging.
//!
//! For each `α ∈ [0, 1]` the candidate direction is the dominant eigenvector
//! of `Π(α) = αB⁻¹A + (1−α)D⁻¹C`, and `α` is chosen to maximize the true
//! objective `G` at that direction.

use super::{rate_of, Solver};
use crate::linalg;
use crate::reformulation::{Diagnostics, QuadraticForms, Solution};
use crate::scalar_opt;
use crate::{CMat, CVec, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsaConfig {
    pub grid_points: usize,
    pub tol: f64,
    pub power_iters: usize,
    pub power_tol: f64,
    /// Projected-ascent steps used when power iteration on `Π(α)` stalls.
    pub fallback_steps: usize,
}

impl Default for AsaConfig {
    fn default() -> Self {
        Self {
            grid_points: 51,
            tol: 1e-6,
            power_iters: 200,
            power_tol: 1e-10,
            fallback_steps: 50,
        }
    }
}

struct Subspaces<'a> {
    forms: &'a QuadraticForms,
    b_inv_a: CMat,
    d_inv_c: CMat,
    /// Unit principal directions of `(A, B)` and `(C, D)`.
    w1: CVec,
    w2: CVec,
    cfg: AsaConfig,
}

fn solve_hpd_columns(k: &CMat, rhs: &CMat) -> Result<CMat> {
    let j = linalg::cholesky(k)?;
    let half = j
        .ad_solve_upper_triangular(rhs)
        .ok_or(crate::Error::Singular)?;
    j.solve_upper_triangular(&half)
        .ok_or(crate::Error::Singular)
}

fn unit(v: CVec) -> Option<CVec> {
    let n = v.norm();
    (n > 0.0 && n.is_finite()).then(|| v.unscale(n))
}

/// Rotates `y` onto the phase of `x` (so `xᴴy` is real, nonnegative).
fn align(x: &CVec, y: &mut CVec) {
    let ip = x.dotc(y);
    let mag = ip.norm();
    if mag > 0.0 {
        let rot = ip.conj() / mag;
        y.apply(|z| *z *= rot);
    }
}

impl<'a> Subspaces<'a> {
    fn new(forms: &'a QuadraticForms, cfg: AsaConfig) -> Result<Self> {
        let b_inv_a = solve_hpd_columns(forms.b(), forms.a())?;
        let d_inv_c = solve_hpd_columns(forms.d(), forms.c())?;
        let (_, w1) = linalg::gen_eig_max(forms.a(), forms.b())?;
        let (_, w2) = linalg::gen_eig_max(forms.c(), forms.d())?;
        Ok(Self {
            forms,
            b_inv_a,
            d_inv_c,
            w1,
            w2,
            cfg,
        })
    }

    /// Dominant eigenvector of `Π(α)`; `true` if the ascent fallback was used.
    fn direction(&self, alpha: f64) -> (CVec, bool) {
        if alpha <= 0.0 {
            return (self.w2.clone(), false);
        }
        if alpha >= 1.0 {
            return (self.w1.clone(), false);
        }
        let pi = self.b_inv_a.scale(alpha) + self.d_inv_c.scale(1.0 - alpha);
        let start = unit(self.w1.scale(alpha) + self.w2.scale(1.0 - alpha))
            .unwrap_or_else(|| self.w1.clone());
        let mut x = start;
        for _ in 0..self.cfg.power_iters {
            let Some(mut y) = unit(&pi * &x) else { break };
            align(&x, &mut y);
            let step = (&y - &x).norm();
            x = y;
            if step < self.cfg.power_tol {
                linalg::fix_phase(&mut x);
                return (x, false);
            }
        }
        (self.ascent(alpha), true)
    }

    fn weighted(&self, alpha: f64, w: &CVec) -> f64 {
        let o = self.forms.objective_unchecked(w);
        alpha * o.g1 + (1.0 - alpha) * o.g2
    }

    /// Projected gradient ascent on `αg₁ + (1−α)g₂` over the unit sphere,
    /// started from the better single-flow direction.
    fn ascent(&self, alpha: f64) -> CVec {
        let f = self.forms;
        let mut w = if self.weighted(alpha, &self.w1) >= self.weighted(alpha, &self.w2) {
            self.w1.clone()
        } else {
            self.w2.clone()
        };
        let mut val = self.weighted(alpha, &w);
        let mut eta = 1.0;
        for _ in 0..self.cfg.fallback_steps {
            let (aw, bw, cw, dw) = (f.a() * &w, f.b() * &w, f.c() * &w, f.d() * &w);
            let qb = w.dotc(&bw).re;
            let qd = w.dotc(&dw).re;
            let g1 = w.dotc(&aw).re / qb;
            let g2 = w.dotc(&cw).re / qd;
            let grad = (aw - bw.scale(g1)).scale(alpha / qb)
                + (cw - dw.scale(g2)).scale((1.0 - alpha) / qd);
            let gn = grad.norm();
            if gn == 0.0 {
                break;
            }
            let mut improved = false;
            for _ in 0..40 {
                if let Some(cand) = unit(&w + grad.scale(eta / gn)) {
                    let v = self.weighted(alpha, &cand);
                    if v > val {
                        w = cand;
                        val = v;
                        eta *= 2.0;
                        improved = true;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if !improved {
                break;
            }
        }
        linalg::fix_phase(&mut w);
        w
    }
}

pub fn asa(forms: &QuadraticForms, cfg: &AsaConfig) -> Result<Solution> {
    let spaces = Subspaces::new(forms, *cfg)?;
    let score = |x: &[f64]| {
        let (w, _) = spaces.direction(x[0]);
        rate_of(forms.objective_unchecked(&w).g)
    };
    let best = scalar_opt::maximize(score, &[(0.0, 1.0)], cfg.grid_points, cfg.tol);
    let alpha = best.x[0];
    let (w, fallback) = spaces.direction(alpha);
    let diagnostics = Diagnostics {
        fallback,
        parameter: Some(alpha),
    };
    forms.solution("asa", &w, 0, true, diagnostics)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Asa(pub AsaConfig);

impl Solver for Asa {
    fn name(&self) -> &'static str {
        "asa"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        asa(forms, &self.0)
    }
}

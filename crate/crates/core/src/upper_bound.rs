//! Sum-rate upper bound from two virtual beamformers.
//!
//! Letting flow 1 use `W₁` and flow 2 use `W₂`, with the forwarded-noise
//! power split as `κ₁‖W₁‖² + κ₂‖W₂‖²` (`κ₁ + κ₂ = 1`) and the budget split
//! as `P₁ + P₂ = P_R`, gives
//!
//! ```text
//! R_UB = min_κ₁ max_P₁ R₁(κ₁, P₁) + R₂(1 − κ₁, P_R − P₁)
//! ```
//!
//! Each sub-rate is a generalized Rayleigh quotient once the (tight) power
//! constraint replaces the unit receiver-noise term. Both numerators are
//! rank one and every matrix involved is a Kronecker sum acting trivially on
//! the receive-side factor, so the quotient collapses to an `M×M` solve:
//! `λ = P·xᴴK⁻¹x`. [`dense`] keeps the direct `M²×M²` eigen route.

use crate::linalg;
use crate::model::{ChannelSet, SystemParams};
use crate::scalar_opt;
use crate::{CMat, CVec, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    pub kappa_points: usize,
    pub power_points: usize,
    /// Function-value tolerance of the outer (κ₁) Nelder–Mead refinement.
    pub tol: f64,
    /// Tolerance of the inner (P₁) refinement. Kept much tighter than the
    /// outer one: an under-resolved inner max would understate the bound.
    pub inner_tol: f64,
    /// Guard keeping κ₁ and P₁/P_R away from 0 and 1.
    pub eps: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            kappa_points: 21,
            power_points: 21,
            tol: 1e-4,
            inner_tol: 1e-12,
            eps: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub r_ub: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub p1: f64,
    pub p2: f64,
    pub r1_at_opt: f64,
    pub r2_at_opt: f64,
    /// Outer grid minimum before refinement.
    pub grid_value: f64,
    /// Number of sub-rate pair evaluations.
    pub evaluations: usize,
}

fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

fn check_split(kappa: f64, power: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "noise fraction must lie in (0, 1], got {kappa}"
        )));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "power share must be positive, got {power}"
        )));
    }
    Ok(())
}

/// `R₁(κ₁, P₁)`: best flow-1 rate with
/// `P‖W₁h_R1‖² + κ₁‖W₁‖² ≤ P₁`.
pub fn subrate1(cs: &ChannelSet, p: f64, kappa1: f64, p1: f64) -> Result<f64> {
    check_split(kappa1, p1)?;
    let m = cs.antennas();
    let g_br = cs.h_br.norm_squared();
    let x = cs.h_r1.conjugate();
    // ‖h_BR‖²I + (P/P₁)·conj(h_R1)h_R1ᵀ + (κ₁/P₁)I
    let k = CMat::identity(m, m).scale(g_br + kappa1 / p1) + (&x * x.adjoint()).scale(p / p1);
    let y = linalg::cholesky_solve(&k, &x)?;
    let lambda = p * g_br * x.dotc(&y).re;
    Ok(half_log2_1p(lambda))
}

/// `R₂(κ₂, P₂)`: best flow-2 rate with
/// `P‖W₂h_RB‖² + κ₂‖W₂‖² ≤ P₂`.
pub fn subrate2(cs: &ChannelSet, p: f64, kappa2: f64, p2: f64) -> Result<f64> {
    check_split(kappa2, p2)?;
    let m = cs.antennas();
    let g_2r = cs.h_2r.norm_squared();
    let h21_sq = cs.h_21.norm_sqr();
    let xb = cs.h_rb.conjugate();
    let a = cs.h_r1.conjugate();
    let f: CVec = a.map(|z| z * cs.h_2b.conj()) - xb.map(|z| z * cs.h_21.conj());
    // |h_21|²(‖h_2R‖² + κ₂/P₂)I + |h_21|²(P/P₂)conj(h_RB)h_RBᵀ + ‖h_2R‖²·a aᴴ
    let k = CMat::identity(m, m).scale(h21_sq * (g_2r + kappa2 / p2))
        + (&xb * xb.adjoint()).scale(h21_sq * p / p2)
        + (&a * a.adjoint()).scale(g_2r);
    let y = linalg::cholesky_solve(&k, &f).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::Degenerate("h_21 = 0 in flow-2 bound"),
        other => other,
    })?;
    let lambda = p * g_2r * f.dotc(&y).re;
    Ok(half_log2_1p(lambda))
}

/// Direct `M²×M²` generalized-eigenvalue construction of the two sub-rates.
pub mod dense {
    use super::*;

    fn row(r: &crate::CRow) -> CMat {
        CMat::from_row_slice(1, r.len(), r.as_slice())
    }

    fn transpose_row(v: &CVec) -> CMat {
        CMat::from_row_slice(1, v.len(), v.as_slice())
    }

    /// `½log₂(1 + λ_max(P·A₁, B₁ + E₁/P₁))`.
    pub fn subrate1(cs: &ChannelSet, p: f64, kappa1: f64, p1: f64) -> Result<f64> {
        check_split(kappa1, p1)?;
        let m = cs.antennas();
        let eye_m = CMat::identity(m, m);
        let eye_n = CMat::identity(m * m, m * m);
        let sig = transpose_row(&cs.h_r1).kronecker(&row(&cs.h_br));
        let fwd = eye_m.kronecker(&row(&cs.h_br));
        let r1_i = transpose_row(&cs.h_r1).kronecker(&eye_m);
        let a1 = (sig.adjoint() * &sig).scale(p);
        let e1 = (r1_i.adjoint() * &r1_i).scale(p) + eye_n.scale(kappa1);
        let b1 = fwd.adjoint() * &fwd + e1.scale(1.0 / p1);
        let (lambda, _) = linalg::gen_eig_max(&a1, &linalg::symmetrize(&b1))?;
        Ok(half_log2_1p(lambda.max(0.0)))
    }

    /// `½log₂(1 + λ_max(P·ffᴴ, |h_21|²C₁ᴴC₁ + aaᴴ + (|h_21|²/P₂)E₂))`.
    pub fn subrate2(cs: &ChannelSet, p: f64, kappa2: f64, p2: f64) -> Result<f64> {
        check_split(kappa2, p2)?;
        let m = cs.antennas();
        let eye_m = CMat::identity(m, m);
        let eye_n = CMat::identity(m * m, m * m);
        let h2r = row(&cs.h_2r);
        let r1_2r = transpose_row(&cs.h_r1).kronecker(&h2r);
        let rb_2r = transpose_row(&cs.h_rb).kronecker(&h2r);
        let a: CVec = r1_2r.adjoint().column(0).into_owned();
        let c1 = eye_m.kronecker(&h2r);
        let f_h = r1_2r.map(|z| z * cs.h_2b) - rb_2r.map(|z| z * cs.h_21);
        let f: CVec = f_h.adjoint().column(0).into_owned();
        let rb_i = transpose_row(&cs.h_rb).kronecker(&eye_m);
        let e2 = (rb_i.adjoint() * &rb_i).scale(p) + eye_n.scale(kappa2);
        let h21_sq = cs.h_21.norm_sqr();
        let den = (c1.adjoint() * &c1).scale(h21_sq) + &a * a.adjoint() + e2.scale(h21_sq / p2);
        let num = (&f * f.adjoint()).scale(p);
        let (lambda, _) = linalg::gen_eig_max(&num, &linalg::symmetrize(&den))?;
        Ok(half_log2_1p(lambda.max(0.0)))
    }
}

/// `max_P₁ R₁(κ₁, P₁) + R₂(1 − κ₁, P_R − P₁)` and its maximizer.
pub fn inner_max(
    cs: &ChannelSet,
    params: &SystemParams,
    kappa1: f64,
    cfg: &BoundConfig,
) -> Result<(f64, f64, usize)> {
    let p = params.node_power;
    let p_r = params.relay_power;
    let kappa2 = 1.0 - kappa1;
    // surface the first evaluation error instead of optimizing around it
    subrate1(cs, p, kappa1, 0.5 * p_r)?;
    subrate2(cs, p, kappa2, 0.5 * p_r)?;
    let total = |x: &[f64]| {
        let p1 = x[0];
        match (
            subrate1(cs, p, kappa1, p1),
            subrate2(cs, p, kappa2, p_r - p1),
        ) {
            (Ok(a), Ok(b)) => a + b,
            _ => f64::NEG_INFINITY,
        }
    };
    let bounds = [(cfg.eps * p_r, (1.0 - cfg.eps) * p_r)];
    let best = scalar_opt::maximize(total, &bounds, cfg.power_points, cfg.inner_tol);
    Ok((best.value, best.x[0], best.evaluations))
}

/// Nested min-max search for `R_UB`.
pub fn r_ub(cs: &ChannelSet, params: &SystemParams, cfg: &BoundConfig) -> Result<BoundBreakdown> {
    cs.check_dims(params.antennas)?;
    let mut evaluations = 0usize;
    let mut first_err = None;
    let mut outer = |x: &[f64]| match inner_max(cs, params, x[0], cfg) {
        Ok((v, _, n)) => {
            evaluations += n;
            v
        }
        Err(e) => {
            first_err.get_or_insert(e);
            f64::NAN
        }
    };
    let bounds = [(cfg.eps, 1.0 - cfg.eps)];
    let grid = scalar_opt::grid_search(|x| -outer(x), &bounds, cfg.kappa_points);
    let refined = scalar_opt::nelder_mead(
        |x| -outer(x),
        &grid.x,
        &bounds,
        &scalar_opt::NelderMeadOptions {
            tol: cfg.tol,
            ..Default::default()
        },
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    let kappa1 = if refined.value > grid.value {
        refined.x[0]
    } else {
        grid.x[0]
    };

    let (r_ub, p1, n) = inner_max(cs, params, kappa1, cfg)?;
    evaluations += n;
    let p = params.node_power;
    let p2 = params.relay_power - p1;
    let kappa2 = 1.0 - kappa1;
    let r1_at_opt = subrate1(cs, p, kappa1, p1)?;
    let r2_at_opt = subrate2(cs, p, kappa2, p2)?;
    Ok(BoundBreakdown {
        r_ub,
        kappa1,
        kappa2,
        p1,
        p2,
        r1_at_opt,
        r2_at_opt,
        grid_value: -grid.value,
        evaluations,
    })
}

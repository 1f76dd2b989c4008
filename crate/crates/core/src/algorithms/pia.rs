//! Power iteration on the first-order stationarity condition
//! `G(w̃)·V(w̃)w̃ = R(w̃)w̃`: repeatedly replace `w̃` by the normalized
//! `V(w̃)⁻¹R(w̃)w̃`.

use std::fmt;
use std::str::FromStr;

use super::{max_sinr2, max_snr1, Solver};
use crate::linalg;
use crate::model;
use crate::reformulation::{Diagnostics, QuadraticForms, Solution};
use crate::{CMat, CVec, Complex64, Error, Result};

/// Starting point of the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PiaInit {
    /// Whitened pure-amplification beamformer.
    #[default]
    PureAmplification,
    MaxSnr1,
    MaxSinr2,
    /// All-ones whitened vector.
    Ones,
}

impl PiaInit {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PureAmplification => "pureamp",
            Self::MaxSnr1 => "maxsnr1",
            Self::MaxSinr2 => "maxsinr2",
            Self::Ones => "ones",
        }
    }
}

impl fmt::Display for PiaInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PiaInit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pureamp" => Ok(Self::PureAmplification),
            "maxsnr1" => Ok(Self::MaxSnr1),
            "maxsinr2" => Ok(Self::MaxSinr2),
            "ones" => Ok(Self::Ones),
            other => Err(Error::InvalidParameter(format!(
                "unknown PIA init `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiaConfig {
    pub max_iter: usize,
    /// Stop when `|G⁽ⁿ⁺¹⁾ − G⁽ⁿ⁾| / G⁽ⁿ⁾` falls below this.
    pub rel_tol: f64,
    pub init: PiaInit,
}

impl Default for PiaConfig {
    fn default() -> Self {
        Self {
            max_iter: 20,
            rel_tol: 1e-8,
            init: PiaInit::default(),
        }
    }
}

fn initial_point(forms: &QuadraticForms, init: PiaInit) -> Result<CVec> {
    match init {
        PiaInit::PureAmplification => {
            let p = forms.params();
            let w = model::pure_amplification(forms.channels(), p.node_power, p.relay_power);
            forms.whiten_beamformer(&w)
        }
        PiaInit::MaxSnr1 => Ok(max_snr1(forms)?.w_tilde),
        PiaInit::MaxSinr2 => Ok(max_sinr2(forms)?.w_tilde),
        PiaInit::Ones => Ok(CVec::from_element(forms.dim(), Complex64::new(1.0, 0.0))),
    }
}

/// One update `q = V(w̃)⁻¹R(w̃)w̃`. The flag reports a ridge fallback.
fn step(forms: &QuadraticForms, w: &CVec) -> Result<(CVec, bool)> {
    let (a, b, c, d) = (forms.a(), forms.b(), forms.c(), forms.d());
    let aw = a * w;
    let cw = c * w;
    let qa = w.dotc(&aw).re;
    let qb = linalg::quad_form(b, w);
    let qc = w.dotc(&cw).re;
    let qd = linalg::quad_form(d, w);
    let v = d.scale(qb) + b.scale(qd);
    let rw = aw.scale(qc) + cw.scale(qa);
    match linalg::cholesky_solve(&v, &rw) {
        Ok(q) => Ok((q, false)),
        Err(_) => {
            let n = v.nrows();
            let ridge = 1e-12 * v.trace().re / n as f64;
            let reg = linalg::symmetrize(&v) + CMat::identity(n, n).scale(ridge);
            Ok((linalg::solve(&reg, &rw)?, true))
        }
    }
}

pub fn pia(forms: &QuadraticForms, cfg: &PiaConfig) -> Result<Solution> {
    if cfg.max_iter == 0 {
        return Err(Error::InvalidParameter("PIA needs max_iter >= 1".into()));
    }
    let mut w = forms.normalize(&initial_point(forms, cfg.init)?)?;
    let mut g_prev = forms.objective(&w)?.g;
    let mut best = (w.clone(), g_prev);
    let mut converged = false;
    let mut iterations = 0;
    let mut fallback = false;

    for n in 1..=cfg.max_iter {
        let (q, ridge) = step(forms, &w)?;
        fallback |= ridge;
        w = forms.normalize(&q)?;
        let g = forms.objective(&w)?.g;
        iterations = n;
        if g > best.1 {
            best = (w.clone(), g);
        }
        if (g - g_prev).abs() / g_prev < cfg.rel_tol {
            converged = true;
            break;
        }
        g_prev = g;
    }

    let diagnostics = Diagnostics {
        fallback,
        parameter: None,
    };
    forms.solution("pia", &best.0, iterations, converged, diagnostics)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Pia(pub PiaConfig);

impl Solver for Pia {
    fn name(&self) -> &'static str {
        "pia"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        pia(forms, &self.0)
    }
}

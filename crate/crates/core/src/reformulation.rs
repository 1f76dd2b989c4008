//! Whitened product-of-quotients form of the sum-rate problem.
//!
//! With `w = vec(W)` (column-major) the rate terms and the relay power become
//! quadratic forms in `w`. Writing the power Gram matrix as `JᴴJ` and
//! substituting `w̃ = J w` at full power turns the problem into
//!
//! ```text
//! max  G(w̃) = (w̃ᴴAw̃ / w̃ᴴBw̃) · (w̃ᴴCw̃ / w̃ᴴDw̃),     ‖w̃‖² = P_R
//! ```
//!
//! where `G = (1 + SNR₁)(1 + SINR₂)` for the lifted beamformer, so the sum
//! rate is `½ log₂ G`.

use crate::linalg::{self, quad_form};
use crate::model::{self, Beamformer, ChannelSet, RatePair, SystemParams};
use crate::{CMat, CVec, Complex64, Error, Result};

/// Stacks the columns of `w`.
pub fn vec_col_major(w: &CMat) -> CVec {
    CVec::from_column_slice(w.as_slice())
}

/// Inverse of [`vec_col_major`] for an `m×m` matrix.
pub fn unvec(w: &CVec, m: usize) -> Result<CMat> {
    if w.len() != m * m {
        return Err(Error::Dimension {
            expected: m * m,
            got: w.len(),
        });
    }
    Ok(CMat::from_column_slice(m, m, w.as_slice()))
}

/// `G`, `g₁ = w̃ᴴAw̃/w̃ᴴBw̃` and `g₂ = w̃ᴴCw̃/w̃ᴴDw̃` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// A numerical fallback path was taken (ridge solve, projected ascent).
    pub fallback: bool,
    /// Scalar search parameter at the optimum (ASA `α`, LSS `b`), if any.
    pub parameter: Option<f64>,
}

/// A full-power beamformer with its rates and solver bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub algorithm: &'static str,
    /// Whitened vector, `‖w̃‖² = P_R`.
    pub w_tilde: CVec,
    pub beamformer: Beamformer,
    pub rates: RatePair,
    /// `G(w̃)`.
    pub objective: f64,
    pub g1: f64,
    pub g2: f64,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostics: Diagnostics,
}

/// The Hermitian matrices `A, B, C, D` and whitening factor `J` for one
/// channel realization. Immutable once built.
#[derive(Debug, Clone)]
pub struct QuadraticForms {
    params: SystemParams,
    channels: ChannelSet,
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
    j: CMat,
    gram: CMat,
    ue2_gain: CVec,
    c1: CMat,
    f: CVec,
}

fn transpose_row(v: &CVec) -> CMat {
    CMat::from_row_slice(1, v.len(), v.as_slice())
}

fn row_mat(r: &crate::CRow) -> CMat {
    CMat::from_row_slice(1, r.len(), r.as_slice())
}

impl QuadraticForms {
    pub fn build(cs: &ChannelSet, params: &SystemParams) -> Result<Self> {
        let m = params.antennas;
        cs.check_dims(m)?;
        if cs.h_21.norm_sqr() == 0.0 {
            return Err(Error::Degenerate("h_21 = 0 leaves D singular"));
        }
        let p = params.node_power;
        let p_r = params.relay_power;
        let n = m * m;
        let eye_m = CMat::identity(m, m);
        let eye_n = CMat::identity(n, n);

        let r1_t = transpose_row(&cs.h_r1);
        let rb_t = transpose_row(&cs.h_rb);
        let h_br = row_mat(&cs.h_br);
        let h_2r = row_mat(&cs.h_2r);

        // power Gram: P(h_RBᵀ⊗I)ᴴ(h_RBᵀ⊗I) + P(h_R1ᵀ⊗I)ᴴ(h_R1ᵀ⊗I) + I
        let rb_i = rb_t.kronecker(&eye_m);
        let r1_i = r1_t.kronecker(&eye_m);
        let gram = linalg::symmetrize(
            &((rb_i.adjoint() * &rb_i + r1_i.adjoint() * &r1_i).scale(p) + &eye_n),
        );
        let j = linalg::cholesky(&gram)?;

        // flow 1: signal (h_R1ᵀ⊗h_BR), forwarded-noise gain (I⊗h_BR)
        let sig1 = r1_t.kronecker(&h_br);
        let fwd1 = eye_m.kronecker(&h_br);
        let fwd1_gram = fwd1.adjoint() * &fwd1;
        let num1 = (sig1.adjoint() * &sig1).scale(p) + &fwd1_gram;

        // flow 2: a = (h_R1ᵀ⊗h_2R)ᴴ, C₁ = I⊗h_2R, fᴴ = h_2B(h_R1ᵀ⊗h_2R) − h_21(h_RBᵀ⊗h_2R)
        let r1_2r = r1_t.kronecker(&h_2r);
        let rb_2r = rb_t.kronecker(&h_2r);
        let ue2_gain: CVec = r1_2r.adjoint().column(0).into_owned();
        let c1 = eye_m.kronecker(&h_2r);
        let f_h = r1_2r.map(|z| z * cs.h_2b) - rb_2r.map(|z| z * cs.h_21);
        let f: CVec = f_h.adjoint().column(0).into_owned();
        let h21_sq = cs.h_21.norm_sqr();
        let den2 = (c1.adjoint() * &c1).scale(h21_sq) + &ue2_gain * ue2_gain.adjoint();
        let num2 = &den2 + (&f * f.adjoint()).scale(p);

        let reg1 = eye_n.scale(1.0 / p_r);
        let reg2 = eye_n.scale(h21_sq / p_r);
        let a = linalg::whiten(&j, &num1)? + &reg1;
        let b = linalg::whiten(&j, &fwd1_gram)? + &reg1;
        let c = linalg::whiten(&j, &num2)? + &reg2;
        let d = linalg::whiten(&j, &den2)? + &reg2;

        Ok(Self {
            params: *params,
            channels: cs.clone(),
            a,
            b,
            c,
            d,
            j,
            gram,
            ue2_gain,
            c1,
            f,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn channels(&self) -> &ChannelSet {
        &self.channels
    }

    pub fn antennas(&self) -> usize {
        self.params.antennas
    }

    /// Length of `w̃`, i.e. `M²`.
    pub fn dim(&self) -> usize {
        self.params.antennas * self.params.antennas
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }
    pub fn b(&self) -> &CMat {
        &self.b
    }
    pub fn c(&self) -> &CMat {
        &self.c
    }
    pub fn d(&self) -> &CMat {
        &self.d
    }
    /// Upper-triangular whitening factor, `JᴴJ = gram()`.
    pub fn j(&self) -> &CMat {
        &self.j
    }
    pub fn gram(&self) -> &CMat {
        &self.gram
    }
    /// `a = (h_R1ᵀ⊗h_2R)ᴴ`.
    pub fn ue2_gain(&self) -> &CVec {
        &self.ue2_gain
    }
    /// `C₁ = I⊗h_2R`.
    pub fn c1(&self) -> &CMat {
        &self.c1
    }
    pub fn f(&self) -> &CVec {
        &self.f
    }

    /// `J·vec(W)`.
    pub fn whiten_beamformer(&self, w: &Beamformer) -> Result<CVec> {
        if w.dim() != self.antennas() {
            return Err(Error::Dimension {
                expected: self.antennas(),
                got: w.dim(),
            });
        }
        Ok(&self.j * vec_col_major(w.matrix()))
    }

    /// Rescales to `‖w̃‖² = P_R`.
    pub fn normalize(&self, w_tilde: &CVec) -> Result<CVec> {
        let norm = w_tilde.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(w_tilde.scale(self.params.relay_power.sqrt() / norm))
    }

    /// `W = unvec(J⁻¹ √P_R w̃/‖w̃‖)`; the result meets the budget exactly.
    pub fn lift(&self, w_tilde: &CVec) -> Result<Beamformer> {
        self.check_len(w_tilde)?;
        let scaled = self.normalize(w_tilde)?;
        let w = linalg::solve_upper(&self.j, &scaled)?;
        Beamformer::new(unvec(&w, self.antennas())?)
    }

    pub fn objective(&self, w_tilde: &CVec) -> Result<Objective> {
        self.check_len(w_tilde)?;
        if w_tilde.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroVector);
        }
        Ok(self.objective_unchecked(w_tilde))
    }

    pub(crate) fn objective_unchecked(&self, w: &CVec) -> Objective {
        let g1 = quad_form(&self.a, w) / quad_form(&self.b, w);
        let g2 = quad_form(&self.c, w) / quad_form(&self.d, w);
        Objective { g: g1 * g2, g1, g2 }
    }

    /// Relative defect of the stationarity condition `G·V(w̃)w̃ = R(w̃)w̃`,
    /// with `V = (w̃ᴴBw̃)D + (w̃ᴴDw̃)B` and `R = (w̃ᴴCw̃)A + (w̃ᴴAw̃)C`.
    pub fn kkt_residual(&self, w: &CVec) -> f64 {
        let aw = &self.a * w;
        let bw = &self.b * w;
        let cw = &self.c * w;
        let dw = &self.d * w;
        let qa = w.dotc(&aw).re;
        let qb = w.dotc(&bw).re;
        let qc = w.dotc(&cw).re;
        let qd = w.dotc(&dw).re;
        let g = (qa / qb) * (qc / qd);
        let vw = dw.scale(qb) + bw.scale(qd);
        let rw = aw.scale(qc) + cw.scale(qa);
        let rn = rw.norm();
        if rn == 0.0 {
            return 0.0;
        }
        (vw.scale(g) - &rw).norm() / rn
    }

    /// Packages a whitened direction as a full-power [`Solution`].
    pub fn solution(
        &self,
        algorithm: &'static str,
        w_tilde: &CVec,
        iterations: usize,
        converged: bool,
        diagnostics: Diagnostics,
    ) -> Result<Solution> {
        let w_tilde = self.normalize(w_tilde)?;
        let obj = self.objective(&w_tilde)?;
        let beamformer = self.lift(&w_tilde)?;
        let rates = model::sum_rate(&self.channels, &beamformer, self.params.node_power);
        Ok(Solution {
            algorithm,
            w_tilde,
            beamformer,
            rates,
            objective: obj.g,
            g1: obj.g1,
            g2: obj.g2,
            iterations,
            converged,
            diagnostics,
        })
    }

    /// Same channels and factor `J`, different `A, B, C, D`. Used to set up
    /// degenerate configurations in tests.
    #[cfg(test)]
    pub(crate) fn with_matrices(&self, a: CMat, b: CMat, c: CMat, d: CMat) -> Self {
        Self {
            a,
            b,
            c,
            d,
            ..self.clone()
        }
    }

    fn check_len(&self, w: &CVec) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: w.len(),
            });
        }
        Ok(())
    }
}

use super::Solver;
use crate::linalg;
use crate::model;
use crate::reformulation::{Diagnostics, QuadraticForms, Solution};
use crate::Result;

/// Beamformer maximizing `g₁`, hence SNR₁, at full power.
pub fn max_snr1(forms: &QuadraticForms) -> Result<Solution> {
    let (_, v) = linalg::gen_eig_max(forms.a(), forms.b())?;
    forms.solution("maxsnr1", &v, 0, true, Diagnostics::default())
}

/// Beamformer maximizing `g₂`, hence SINR₂, at full power.
pub fn max_sinr2(forms: &QuadraticForms) -> Result<Solution> {
    let (_, v) = linalg::gen_eig_max(forms.c(), forms.d())?;
    forms.solution("maxsinr2", &v, 0, true, Diagnostics::default())
}

/// Scaled identity at full power.
pub fn pure_amplification(forms: &QuadraticForms) -> Result<Solution> {
    let params = forms.params();
    let w = model::pure_amplification(forms.channels(), params.node_power, params.relay_power);
    let wt = forms.whiten_beamformer(&w)?;
    forms.solution("pureamp", &wt, 0, true, Diagnostics::default())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MaxSnr1;

#[derive(Debug, Clone, Copy, Default)]
pub struct MaxSinr2;

#[derive(Debug, Clone, Copy, Default)]
pub struct PureAmplification;

impl Solver for MaxSnr1 {
    fn name(&self) -> &'static str {
        "maxsnr1"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        max_snr1(forms)
    }
}

impl Solver for MaxSinr2 {
    fn name(&self) -> &'static str {
        "maxsinr2"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        max_sinr2(forms)
    }
}

impl Solver for PureAmplification {
    fn name(&self) -> &'static str {
        "pureamp"
    }
    fn solve(&self, forms: &QuadraticForms) -> Result<Solution> {
        pure_amplification(forms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{relay_power, sample_channels, SystemParams};
    use crate::{CVec, Complex64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cvec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
        CVec::from_fn(n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn scalar_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let params = SystemParams::from_snr_db(1, 10.0).unwrap();
        let forms = QuadraticForms::build(&sample_channels(&params, &mut rng), &params).unwrap();
        let s = max_snr1(&forms).unwrap();
        let ratio = forms.a()[(0, 0)].re / forms.b()[(0, 0)].re;
        assert!((s.g1 - ratio).abs() < 1e-12 * ratio);
        assert!(s.w_tilde[0].im == 0.0 && s.w_tilde[0].re > 0.0);
        let s = max_sinr2(&forms).unwrap();
        let ratio = forms.c()[(0, 0)].re / forms.d()[(0, 0)].re;
        assert!((s.g2 - ratio).abs() < 1e-12 * ratio);
    }

    #[test]
    fn single_flow_dominance() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for m in [2, 3] {
            let params = SystemParams::from_snr_db(m, 15.0).unwrap();
            let forms =
                QuadraticForms::build(&sample_channels(&params, &mut rng), &params).unwrap();
            let s1 = max_snr1(&forms).unwrap();
            let s2 = max_sinr2(&forms).unwrap();
            for _ in 0..1000 {
                let w = random_cvec(&mut rng, m * m);
                let o = forms.objective(&w).unwrap();
                assert!(s1.g1 >= o.g1 - 1e-10 * o.g1);
                assert!(s2.g2 >= o.g2 - 1e-10 * o.g2);
            }
            for s in [&s1, &s2] {
                assert!((s.w_tilde.norm_squared() - params.relay_power).abs() < 1e-9);
                let pw = relay_power(forms.channels(), &s.beamformer, params.node_power);
                assert!((pw - params.relay_power).abs() < 1e-8);
                assert!((0.5 * s.objective.log2() - s.rates.sum).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn pure_amplification_is_full_power_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let params = SystemParams::from_snr_db(3, 10.0).unwrap();
        let forms = QuadraticForms::build(&sample_channels(&params, &mut rng), &params).unwrap();
        let s = pure_amplification(&forms).unwrap();
        let w = s.beamformer.matrix();
        let d = w[(0, 0)].re;
        assert!((w - crate::CMat::identity(3, 3).scale(d)).norm() < 1e-12 * d);
        let pw = relay_power(forms.channels(), &s.beamformer, params.node_power);
        assert!((pw - params.relay_power).abs() < 1e-8);
    }
}

//! Dense complex linear algebra for the small Hermitian problems the solvers
//! produce (dimension M², so at most a few dozen rows).
//!
//! Cholesky and the cyclic Jacobi eigensolver are written out here so the
//! factor orientation and eigenvector phase are pinned down. Triangular and
//! general solves go through nalgebra.

use crate::{CMat, CVec, Complex64, Error, Result};

const JACOBI_MAX_SWEEPS: usize = 60;

/// `(X + Xᴴ) / 2`.
pub fn symmetrize(x: &CMat) -> CMat {
    (x + x.adjoint()).scale(0.5)
}

/// Real part of `wᴴ X w`.
pub fn quad_form(x: &CMat, w: &CVec) -> f64 {
    w.dotc(&(x * w)).re
}

/// Relative Hermitian defect `‖X − Xᴴ‖_F / ‖X‖_F`.
pub fn hermitian_defect(x: &CMat) -> f64 {
    let norm = x.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (x - x.adjoint()).norm() / norm
}

/// Upper-triangular `J` with `Jᴴ J = K`.
pub fn cholesky(k: &CMat) -> Result<CMat> {
    let n = k.nrows();
    if k.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: k.ncols(),
        });
    }
    let mut j = CMat::zeros(n, n);
    for i in 0..n {
        let mut d = k[(i, i)].re;
        for r in 0..i {
            d -= j[(r, i)].norm_sqr();
        }
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: i, value: d });
        }
        let d = d.sqrt();
        j[(i, i)] = Complex64::new(d, 0.0);
        for c in (i + 1)..n {
            let mut s = k[(i, c)];
            for r in 0..i {
                s -= j[(r, i)].conj() * j[(r, c)];
            }
            j[(i, c)] = s / d;
        }
    }
    Ok(j)
}

/// Solves `J x = y` for upper-triangular `J`.
pub fn solve_upper(j: &CMat, y: &CVec) -> Result<CVec> {
    j.solve_upper_triangular(y).ok_or(Error::Singular)
}

/// Solves `Jᴴ x = y` for upper-triangular `J`.
pub fn solve_upper_adjoint(j: &CMat, y: &CVec) -> Result<CVec> {
    j.ad_solve_upper_triangular(y).ok_or(Error::Singular)
}

/// `J⁻ᴴ X J⁻¹` via triangular solves, symmetrized.
pub fn whiten(j: &CMat, x: &CMat) -> Result<CMat> {
    let left = j.ad_solve_upper_triangular(x).ok_or(Error::Singular)?;
    let both = j
        .ad_solve_upper_triangular(&left.adjoint())
        .ok_or(Error::Singular)?;
    Ok(symmetrize(&both.adjoint()))
}

/// Solves `K x = y` for Hermitian positive definite `K`.
pub fn cholesky_solve(k: &CMat, y: &CVec) -> Result<CVec> {
    let j = cholesky(k)?;
    let z = solve_upper_adjoint(&j, y)?;
    solve_upper(&j, &z)
}

/// Solves `K x = y` for a general square `K` (LU with partial pivoting).
pub fn solve(k: &CMat, y: &CVec) -> Result<CVec> {
    if k.nrows() != k.ncols() || k.nrows() != y.len() {
        return Err(Error::Dimension {
            expected: k.nrows(),
            got: y.len(),
        });
    }
    let x = k.clone().lu().solve(y).ok_or(Error::Singular)?;
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(x)
    } else {
        Err(Error::Singular)
    }
}

/// Rotates `v` so its largest-magnitude entry (first one on ties) is real
/// and positive.
pub fn fix_phase(v: &mut CVec) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let rot = v[best].conj() / best_mag;
    v.apply(|z| *z *= rot);
    v[best] = Complex64::new(v[best].re, 0.0);
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back in descending order, eigenvectors as the matching
/// columns (unit norm, phase not normalized).
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let mut a = symmetrize(h);
    let mut v = CMat::identity(n, n);
    let scale = a.norm();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    let tol = 1e-15 * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for q in 1..n {
            for p in 0..q {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph = (apq / mag).conj();
                // U = diag(1, ph) * [[c, s], [-s, c]] on the (p, q) plane
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = ph * (-s);
                let u_qq = ph * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix and its unit eigenvector,
/// phase-fixed by [`fix_phase`].
pub fn hermitian_eig_max(h: &CMat) -> (f64, CVec) {
    let (values, vectors) = hermitian_eig(h);
    let mut v: CVec = vectors.column(0).into_owned();
    let norm = v.norm();
    if norm > 0.0 {
        v.unscale_mut(norm);
    }
    fix_phase(&mut v);
    (values[0], v)
}

/// Maximizer of the generalized Rayleigh quotient `xᴴAx / xᴴBx`, `B ≻ 0`.
///
/// Whitens with the Cholesky factor of `B`, takes the principal eigenpair of
/// `J⁻ᴴ A J⁻¹` and maps back. The returned vector has unit norm and fixed
/// phase.
pub fn gen_eig_max(a: &CMat, b: &CMat) -> Result<(f64, CVec)> {
    let j = cholesky(b)?;
    let h = whiten(&j, a)?;
    let (lambda, u) = hermitian_eig_max(&h);
    let mut v = solve_upper(&j, &u)?;
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Singular);
    }
    v.unscale_mut(norm);
    fix_phase(&mut v);
    Ok((lambda, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_mat(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        CMat::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
        CVec::from_fn(n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        symmetrize(&random_mat(rng, n))
    }

    fn diag(values: &[f64]) -> CMat {
        let n = values.len();
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                c(values[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let id = CMat::identity(3, 3);
        assert_eq!(cholesky(&id).unwrap(), id);
        let j = cholesky(&diag(&[4.0, 9.0])).unwrap();
        assert_eq!(j, diag(&[2.0, 3.0]));
    }

    #[test]
    fn cholesky_reconstructs_random_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 5, 16] {
            let x = random_mat(&mut rng, n);
            let k = x.adjoint() * &x + CMat::identity(n, n);
            let j = cholesky(&k).unwrap();
            for r in 0..n {
                for col in 0..r {
                    assert_eq!(j[(r, col)], c(0.0, 0.0));
                }
            }
            let err = (j.adjoint() * &j - &k).norm() / k.norm();
            assert!(err < 1e-12, "n={n} err={err}");
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let k = diag(&[1.0, -1.0]);
        assert!(matches!(
            cholesky(&k),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn eig_max_simple_cases() {
        let (l, _) = hermitian_eig_max(&CMat::identity(4, 4));
        assert!((l - 1.0).abs() < 1e-15);

        let (l, v) = hermitian_eig_max(&diag(&[1.0, 3.0, 2.0]));
        assert!((l - 3.0).abs() < 1e-15);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(v[0].norm() < 1e-15 && v[2].norm() < 1e-15);
    }

    #[test]
    fn eig_residuals_and_rayleigh_dominance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [1, 2, 3, 7, 16, 33, 64] {
            let h = random_hermitian(&mut rng, n);
            let (l, v) = hermitian_eig_max(&h);
            let res = (&h * &v - v.scale(l)).norm();
            assert!(res <= 1e-9 * h.norm(), "n={n} res={res}");
            for _ in 0..100 {
                let mut x = random_vec(&mut rng, n);
                x.unscale_mut(x.norm());
                assert!(l >= quad_form(&h, &x) - 1e-12);
            }
        }
    }

    #[test]
    fn eig_matches_nalgebra_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 5, 12] {
            let h = random_hermitian(&mut rng, n);
            let (ours, _) = hermitian_eig(&h);
            let mut theirs: Vec<f64> = h
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn phase_convention_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_hermitian(&mut rng, 6);
        let (_, v) = hermitian_eig_max(&h);
        let k = (0..v.len())
            .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
            .unwrap();
        assert!(v[k].im == 0.0 && v[k].re > 0.0);
        let (_, v2) = hermitian_eig_max(&h);
        assert_eq!(v, v2);
    }

    #[test]
    fn gen_eig_diagonal_pair() {
        let (l, v) = gen_eig_max(&diag(&[4.0, 1.0]), &diag(&[2.0, 1.0])).unwrap();
        assert!((l - 2.0).abs() < 1e-14);
        assert!((v[0] - c(1.0, 0.0)).norm() < 1e-14 && v[1].norm() < 1e-14);
    }

    #[test]
    fn gen_eig_identity_b_reduces_to_standard() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(&mut rng, 5);
        let (l1, v1) = gen_eig_max(&a, &CMat::identity(5, 5)).unwrap();
        let (l2, v2) = hermitian_eig_max(&a);
        assert!((l1 - l2).abs() < 1e-12);
        assert!((v1 - v2).norm() < 1e-10);
    }

    #[test]
    fn gen_eig_dominates_random_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [2, 4, 9] {
            let a = random_hermitian(&mut rng, n);
            let x = random_mat(&mut rng, n);
            let b = x.adjoint() * &x + CMat::identity(n, n);
            let (l, v) = gen_eig_max(&a, &b).unwrap();
            let at_v = quad_form(&a, &v) / quad_form(&b, &v);
            assert!((at_v - l).abs() < 1e-10 * l.abs().max(1.0));
            for _ in 0..1000 {
                let y = random_vec(&mut rng, n);
                assert!(l >= quad_form(&a, &y) / quad_form(&b, &y) - 1e-12);
            }
        }
    }

    #[test]
    fn gen_eig_scaling_of_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(&mut rng, 4);
        let x = random_mat(&mut rng, 4);
        let b = x.adjoint() * &x + CMat::identity(4, 4);
        let (l1, v1) = gen_eig_max(&a, &b).unwrap();
        let (l2, v2) = gen_eig_max(&a, &b.scale(3.0)).unwrap();
        assert!((l2 - l1 / 3.0).abs() < 1e-12 * l1.abs().max(1.0));
        assert!((v1 - v2).norm() < 1e-9);
    }

    #[test]
    fn solves() {
        let y = CVec::from_vec(vec![c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(solve(&CMat::identity(2, 2), &y).unwrap(), y);
        let x = solve(&diag(&[2.0, 4.0]), &y).unwrap();
        assert!((x - CVec::from_element(2, c(1.0, 0.0))).norm() < 1e-15);
        assert_eq!(solve(&CMat::zeros(2, 2), &y), Err(Error::Singular));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [3, 10, 25] {
            let k = random_mat(&mut rng, n) + CMat::identity(n, n).scale(n as f64);
            let y = random_vec(&mut rng, n);
            let x = solve(&k, &y).unwrap();
            assert!((&k * &x - &y).norm() / y.norm() < 1e-10);
            let hk = k.adjoint() * &k;
            let x = cholesky_solve(&hk, &y).unwrap();
            assert!((&hk * &x - &y).norm() / y.norm() < 1e-10);
        }
    }

    #[test]
    fn whiten_matches_explicit_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_mat(&mut rng, 5);
        let k = x.adjoint() * &x + CMat::identity(5, 5);
        let j = cholesky(&k).unwrap();
        let m = random_hermitian(&mut rng, 5);
        let jinv = j.clone().try_inverse().unwrap();
        let explicit = jinv.adjoint() * &m * &jinv;
        assert!((whiten(&j, &m).unwrap() - explicit).norm() < 1e-12);
    }
}

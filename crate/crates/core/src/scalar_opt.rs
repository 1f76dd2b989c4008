//! Low-dimensional derivative-free maximization: a uniform lattice search
//! followed by box-clamped Nelder–Mead refinement.

/// Best point found and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop once the simplex function-value spread drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial simplex edge as a fraction of each box side.
    pub step_frac: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 400,
            step_frac: 0.05,
        }
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *xi = xi.clamp(lo, hi);
    }
}

fn lattice(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / (n - 1) as f64)
    }
}

/// Argmax over the uniform lattice with `points_per_dim` points per axis,
/// both endpoints included. Ties keep the first point in row-major order
/// (first coordinate slowest).
pub fn grid_search<F>(mut f: F, bounds: &[(f64, f64)], points_per_dim: usize) -> Optimum
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(
        points_per_dim >= 2,
        "grid needs at least two points per axis"
    );
    assert!(!bounds.is_empty());
    let dim = bounds.len();
    let total = points_per_dim.pow(dim as u32);
    let mut x = vec![0.0; dim];
    let mut best = Optimum {
        x: x.clone(),
        value: f64::NEG_INFINITY,
        evaluations: 0,
    };
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..dim).rev() {
            let i = rem % points_per_dim;
            rem /= points_per_dim;
            x[d] = lattice(bounds[d].0, bounds[d].1, points_per_dim, i);
        }
        let v = sanitize(f(&x));
        if flat == 0 || v > best.value {
            best.x.copy_from_slice(&x);
            best.value = v;
        }
    }
    best.evaluations = total;
    best
}

/// Nelder–Mead maximization (reflection 1, expansion 2, contraction ½,
/// shrink ½) with every trial point clamped into `bounds`. Returns the best
/// point seen.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    opts: &NelderMeadOptions,
) -> Optimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(dim, bounds.len());
    let mut evals = 0usize;
    // minimize h = -f
    let mut eval = |x: &mut Vec<f64>, evals: &mut usize| -> f64 {
        clamp(x, bounds);
        *evals += 1;
        -sanitize(f(x))
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut start = x0.to_vec();
    let h0 = eval(&mut start, &mut evals);
    simplex.push((start.clone(), h0));
    for d in 0..dim {
        let (lo, hi) = bounds[d];
        let step = opts.step_frac * (hi - lo);
        let mut p = start.clone();
        p[d] = if p[d] + step <= hi {
            p[d] + step
        } else {
            p[d] - step
        };
        let h = eval(&mut p, &mut evals);
        simplex.push((p, h));
    }

    let mut best = simplex[0].clone();
    let note = |pt: &(Vec<f64>, f64), best: &mut (Vec<f64>, f64)| {
        if pt.1 < best.1 {
            *best = pt.clone();
        }
    };
    for pt in simplex.iter().skip(1) {
        note(pt, &mut best);
    }

    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if simplex[0].1 == simplex[dim].1 || spread < opts.tol {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (p, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let mut xr = toward(1.0);
        let hr = eval(&mut xr, &mut evals);
        note(&(xr.clone(), hr), &mut best);
        if hr < simplex[0].1 {
            let mut xe = toward(2.0);
            let he = eval(&mut xe, &mut evals);
            note(&(xe.clone(), he), &mut best);
            simplex[dim] = if he < hr { (xe, he) } else { (xr, hr) };
            continue;
        }
        if hr < simplex[dim - 1].1 {
            simplex[dim] = (xr, hr);
            continue;
        }
        let (mut xc, accept_below) = if hr < worst.1 {
            (toward(0.5), hr)
        } else {
            (toward(-0.5), worst.1)
        };
        let hc = eval(&mut xc, &mut evals);
        note(&(xc.clone(), hc), &mut best);
        if hc <= accept_below {
            simplex[dim] = (xc, hc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for pt in simplex.iter_mut().skip(1) {
            let mut x: Vec<f64> = anchor
                .iter()
                .zip(&pt.0)
                .map(|(a, p)| a + 0.5 * (p - a))
                .collect();
            let h = eval(&mut x, &mut evals);
            *pt = (x, h);
            note(pt, &mut best);
        }
    }

    Optimum {
        x: best.0,
        value: -best.1,
        evaluations: evals,
    }
}

/// Grid search, then Nelder–Mead from the grid winner. Never returns less
/// than the best grid value.
pub fn maximize<F>(mut f: F, bounds: &[(f64, f64)], grid_points: usize, tol: f64) -> Optimum
where
    F: FnMut(&[f64]) -> f64,
{
    let grid = grid_search(&mut f, bounds, grid_points);
    let opts = NelderMeadOptions {
        tol,
        ..NelderMeadOptions::default()
    };
    let refined = nelder_mead(&mut f, &grid.x, bounds, &opts);
    let evaluations = grid.evaluations + refined.evaluations;
    let mut out = if refined.value > grid.value {
        refined
    } else {
        grid
    };
    out.evaluations = evaluations;
    out
}

/// [`maximize`] applied to `-f`.
pub fn minimize<F>(mut f: F, bounds: &[(f64, f64)], grid_points: usize, tol: f64) -> Optimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut out = maximize(|x| -f(x), bounds, grid_points, tol);
    out.value = -out.value;
    out
}

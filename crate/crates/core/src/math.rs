//! Small numeric helpers shared across modules: moments, interpolation,
//! one-dimensional search and a derivative-free simplex minimizer.

use crate::error::{CoreError, Result};

/// Arithmetic mean. Empty slices return 0.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with an n−1 denominator.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Population central moment of order `k`.
pub fn central_moment(xs: &[f64], k: u32) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(k as i32)).sum::<f64>() / xs.len() as f64
}

/// `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}

/// `n` log-spaced points from `a` to `b` inclusive; requires `a, b > 0`.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0);
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// Piecewise-linear interpolation of `ys` over strictly increasing `xs`,
/// flat beyond the ends.
pub fn interp_flat(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    // partition_point returns the first index with xs[i] > x
    let j = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let t = (x - x0) / (x1 - x0);
    ys[j - 1] * (1.0 - t) + ys[j] * t
}

/// Golden-section search maximizing `f` on `[a, b]` to width `tol`.
///
/// Returns `(x, f(x))`. Assumes `f` is unimodal on the bracket; on flat or
/// noisy objectives it still returns a point inside the bracket.
pub fn golden_max(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Nelder–Mead simplex minimization.
///
/// `x0` is the start point, `step` the initial simplex edge per coordinate.
/// Stops when the simplex function spread falls below `ftol` or after
/// `max_iter` reflections. Returns `(x_best, f_best, converged)`.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    ftol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    assert_eq!(step.len(), n);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut fx: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;
    for _ in 0..max_iter {
        // order ascending by objective
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&i, &j| fx[i].partial_cmp(&fx[j]).unwrap_or(std::cmp::Ordering::Equal));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        fx = idx.iter().map(|&i| fx[i]).collect();

        if (fx[n] - fx[0]).abs() <= ftol * (1.0 + fx[0].abs()) {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let at = |c: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + c * (centroid[k] - simplex[n][k]))
                .collect()
        };

        let xr = at(alpha);
        let fr = f(&xr);
        if fr < fx[0] {
            let xe = at(gamma);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                fx[n] = fe;
            } else {
                simplex[n] = xr;
                fx[n] = fr;
            }
        } else if fr < fx[n - 1] {
            simplex[n] = xr;
            fx[n] = fr;
        } else {
            let xc = at(-rho);
            let fc = f(&xc);
            if fc < fx[n] {
                simplex[n] = xc;
                fx[n] = fc;
            } else {
                for i in 1..=n {
                    for k in 0..n {
                        simplex[i][k] = simplex[0][k] + sigma * (simplex[i][k] - simplex[0][k]);
                    }
                    fx[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if fx[i] < fx[best] {
            best = i;
        }
    }
    (simplex[best].clone(), fx[best], converged)
}

/// Standard normal CDF via a Chebyshev fit to erfc (fractional error < 1.2e-7).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t
        * (-z * z - 1.265_512_23
            + t * (1.000_023_68
                + t * (0.374_091_96
                    + t * (0.096_784_18
                        + t * (-0.186_288_06
                            + t * (0.278_868_07
                                + t * (-1.135_203_98
                                    + t * (1.488_515_87
                                        + t * (-0.822_152_23 + t * 0.170_872_77)))))))))
            .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Validate that a slice is nonempty and free of NaN.
pub fn require_finite(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(CoreError::data(format!("{name}: empty series")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::data(format!("{name}: non-finite value")));
    }
    Ok(())
}

//! Box-constrained Nelder–Mead simplex search.
//!
//! Works in the unit cube: every coordinate is clamped to `[0, 1]` before the
//! objective is evaluated, and callers map the cube onto their bounds.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions<T> {
    /// Stop when `f_max - f_min <= rel_tol · (|f_max| + |f_min|) + abs_tol`.
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_evaluations: usize,
    /// Edge length of the initial simplex in cube coordinates.
    pub initial_step: T,
}

impl<T: Real> Default for SimplexOptions<T> {
    fn default() -> Self {
        SimplexOptions {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-30),
            max_evaluations: 100_000,
            initial_step: T::lit(0.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    /// Stopped on the tolerance test rather than the evaluation budget.
    pub converged: bool,
}

fn clamp_unit<T: Real>(x: &mut [T]) {
    for v in x {
        *v = v.max(T::zero()).min(T::one());
    }
}

/// Minimises `f` over `[0, 1]^k` starting at `start`. Non-finite objective
/// values are treated as `+∞`.
pub fn minimize<T: Real, F: FnMut(&[T]) -> T>(mut f: F, start: &[T], opts: &SimplexOptions<T>) -> SimplexOutcome<T> {
    let k = start.len();
    let mut evaluations = 0usize;
    let inf = T::max_value().unwrap_or_else(T::one);
    let mut eval = |x: &[T], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            inf
        }
    };

    let mut x0 = start.to_vec();
    clamp_unit(&mut x0);
    if k == 0 {
        let value = eval(&x0, &mut evaluations);
        return SimplexOutcome { x: x0, value, evaluations, converged: true };
    }

    let mut simplex: Vec<Vec<T>> = vec![x0.clone()];
    for i in 0..k {
        let mut v = x0.clone();
        // step inward when the start sits near the upper face
        v[i] = if v[i] + opts.initial_step <= T::one() { v[i] + opts.initial_step } else { v[i] - opts.initial_step };
        clamp_unit(&mut v);
        simplex.push(v);
    }
    let mut values: Vec<T> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();

    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let (best, worst) = (values[0], values[k]);
        let spread = worst - best;
        if spread <= opts.rel_tol * (best.abs() + worst.abs()) + opts.abs_tol {
            converged = true;
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), |m, d| m.max(d));
        if diameter <= T::default_epsilon() {
            converged = true;
            break;
        }
        if evaluations >= opts.max_evaluations {
            break;
        }

        let mut centroid = vec![T::zero(); k];
        for v in &simplex[..k] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += *x;
            }
        }
        let kk = T::from_usize(k).unwrap();
        centroid.iter_mut().for_each(|c| *c /= kk);
        let along = |t: T| {
            let mut p: Vec<T> = centroid.iter().zip(&simplex[k]).map(|(c, w)| *c + t * (*c - *w)).collect();
            clamp_unit(&mut p);
            p
        };

        let reflected = along(alpha);
        let fr = eval(&reflected, &mut evaluations);
        if fr < values[0] {
            let expanded = along(alpha * gamma);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                simplex[k] = expanded;
                values[k] = fe;
            } else {
                simplex[k] = reflected;
                values[k] = fr;
            }
            continue;
        }
        if fr < values[k - 1] {
            simplex[k] = reflected;
            values[k] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[k] {
            let c = along(alpha * rho);
            let fc = eval(&c, &mut evaluations);
            (c, fc)
        } else {
            let c = along(-rho);
            let fc = eval(&c, &mut evaluations);
            (c, fc)
        };
        if fc < values[k].min(fr) {
            simplex[k] = contracted;
            values[k] = fc;
            continue;
        }
        // shrink towards the best vertex
        for i in 1..=k {
            let shrunk: Vec<T> = simplex[0].iter().zip(&simplex[i]).map(|(b, x)| *b + sigma * (*x - *b)).collect();
            values[i] = eval(&shrunk, &mut evaluations);
            simplex[i] = shrunk;
        }
    }
    let best = (0..=k).min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b))).unwrap();
    SimplexOutcome { x: simplex[best].clone(), value: values[best], evaluations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_quadratic_minimum() {
        let target = [0.3, 0.71, 0.45];
        let f = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b) * (a - b) * 10.0).sum::<f64>();
        let out = minimize(f, &[0.9, 0.1, 0.5], &SimplexOptions::default());
        assert!(out.converged);
        for (a, b) in out.x.iter().zip(&target) {
            assert!((a - b).abs() < 1e-6, "{:?}", out.x);
        }
    }

    #[test]
    fn respects_the_unit_box() {
        // unconstrained minimum at (1.5, -0.5)
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2);
        let out = minimize(f, &[0.5, 0.5], &SimplexOptions::default());
        assert!((out.x[0] - 1.0).abs() < 1e-6 && out.x[1].abs() < 1e-6);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (10.0 * x[0]).sin() + (7.0 * x[1]).cos();
        let start = [0.2, 0.8];
        let f0 = f(&start);
        let out = minimize(f, &start, &SimplexOptions::default());
        assert!(out.value <= f0);
    }

    #[test]
    fn rosenbrock_in_box() {
        // (u, v) in the cube mapped onto [-2, 2]^2
        let f = |x: &[f64]| {
            let (a, b) = (4.0 * x[0] - 2.0, 4.0 * x[1] - 2.0);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let out = minimize(f, &[0.1, 0.9], &SimplexOptions { rel_tol: 1e-14, ..Default::default() });
        assert!((4.0 * out.x[0] - 2.0 - 1.0).abs() < 1e-4, "{:?}", out);
    }
}

//! Derivative-free simplex minimization.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which behave much
//! better than the classic `(1, 2, 1/2, 1/2)` set once the dimension exceeds a
//! handful of parameters.

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub max_iters: usize,
    /// Stop once `max f - min f` over the simplex falls below this.
    pub f_tol: f64,
    pub initial_step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            f_tol: 1e-12,
            initial_step: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn minimize<F>(mut f: F, x0: &[f64], opts: &Options) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            converged: true,
        };
    }
    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 0.5 / nf;
    let shrink = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut centroid = alloc::vec![0.0; n];
    let mut trial = alloc::vec![0.0; n];
    let mut trial2 = alloc::vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        sort_simplex(&mut simplex, &mut values);
        if values[n] - values[0] <= opts.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }

        let worst = &simplex[n];
        for ((t, c), w) in trial.iter_mut().zip(&centroid).zip(worst) {
            *t = c + reflect * (c - w);
        }
        let fr = f(&trial);

        if fr < values[0] {
            for ((t, c), w) in trial2.iter_mut().zip(&centroid).zip(&simplex[n]) {
                *t = c + expand * (c - w);
            }
            let fe = f(&trial2);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
            continue;
        }

        let (base, fbase) = if fr < values[n] {
            (&trial, fr) // outside contraction
        } else {
            (&simplex[n], values[n]) // inside contraction
        };
        for ((t, c), b) in trial2.iter_mut().zip(&centroid).zip(base) {
            *t = c + contract * (b - c);
        }
        let fc = f(&trial2);
        if fc < fbase {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }

        let best = simplex[0].clone();
        for (v, val) in simplex.iter_mut().zip(values.iter_mut()).skip(1) {
            for (x, b) in v.iter_mut().zip(&best) {
                *x = b + shrink * (*x - b);
            }
            *val = f(v);
        }
    }
    sort_simplex(&mut simplex, &mut values);
    Minimum {
        x: simplex.swap_remove(0),
        value: values[0],
        iterations,
        converged,
    }
}

/// Repeats [`minimize`] from the current best point with a shrinking initial
/// simplex until a pass improves the value by less than `opts.f_tol`.
pub fn minimize_with_restarts<F>(mut f: F, x0: &[f64], opts: &Options, max_passes: usize) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best = minimize(&mut f, x0, opts);
    let mut step = opts.initial_step;
    for _ in 1..max_passes.max(1) {
        step *= 0.5;
        let pass_opts = Options {
            initial_step: step.max(1e-4),
            ..*opts
        };
        let next = minimize(&mut f, &best.x, &pass_opts);
        let improvement = best.value - next.value;
        let iterations = best.iterations + next.iterations;
        if next.value < best.value {
            best = Minimum { iterations, ..next };
        } else {
            best.iterations = iterations;
        }
        if improvement < opts.f_tol {
            break;
        }
    }
    best
}

fn sort_simplex(simplex: &mut [Vec<f64>], values: &mut [f64]) {
    // Insertion sort keeps ties in insertion order, which keeps runs reproducible.
    for i in 1..values.len() {
        let mut j = i;
        while j > 0 && values[j] < values[j - 1] {
            values.swap(j, j - 1);
            simplex.swap(j, j - 1);
            j -= 1;
        }
    }
}

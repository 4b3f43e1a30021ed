//! Numerical search for the input pair that minimizes the two-use Helstrom error.
//!
//! Two independent routes are provided:
//!
//! - [`search_optimal_inputs`]: Nelder-Mead over the angles of a unitary whose
//!   first two columns are the orthonormal input pair, with seeded restarts.
//! - [`seesaw`]: alternating exact maximization. With the inputs fixed, the best
//!   unitary in `max_U Re tr(U A) = tr|A|` is the sign of the output difference;
//!   with that unitary fixed, the best inputs are the top and bottom eigenvectors
//!   of the conjugate map applied to it.
//!
//! [`dominance_check`] samples mixed and nonorthogonal pairs to confirm that none
//! of them beats the orthogonal pure optimum.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{DensityMatrix, KrausChannel};
use crate::discrimination::{helstrom_error, Priors, Signal, SignalPair};
use crate::matrix::{self, hermitian_eig, unitary_angle_count, unitary_from_angles, ComplexMatrix};
use crate::nelder_mead::{self, Options};
use crate::random::{self, Stream};
use crate::Result;

pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_MAX_ITERS: usize = 2000;
pub const DEFAULT_F_TOL: f64 = 1e-12;

/// An ordered orthonormal pair: the first two columns of
/// [`unitary_from_angles`]`(dim, angles)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairParameterization {
    dim: usize,
    angles: Vec<f64>,
}

impl PairParameterization {
    pub fn new(dim: usize, angles: Vec<f64>) -> Self {
        assert!(dim >= 2, "a pair needs at least two dimensions");
        assert_eq!(angles.len(), unitary_angle_count(dim));
        Self { dim, angles }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        Self::new(dim, random::angles(rng, unitary_angle_count(dim)))
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn decode(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        decode_pair(self.dim, &self.angles)
    }

    pub fn to_signal_pair(&self) -> SignalPair {
        let (a, b) = self.decode();
        pure_pair(a, b)
    }
}

fn decode_pair(dim: usize, angles: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let u = unitary_from_angles(dim, angles);
    (u.column(0), u.column(1))
}

fn pure_pair(a: Vec<Complex64>, b: Vec<Complex64>) -> SignalPair {
    SignalPair {
        state0: Signal::Pure(a),
        state1: Signal::Pure(b),
        priors: Priors::equal(),
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best_pe: f64,
    pub best_pair: SignalPair,
    pub restarts_used: usize,
    /// Whether the run that produced `best_pe` met its stopping tolerance.
    pub converged: bool,
    /// Best error of each restart, in restart order.
    pub history: Vec<f64>,
}

/// Result of a single restart; merge with [`SearchReport::from_restarts`].
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub pe: f64,
    pub pair: SignalPair,
    pub converged: bool,
}

impl SearchReport {
    /// Reduces restarts by minimum error; ties keep the earliest restart.
    pub fn from_restarts(outcomes: Vec<RestartOutcome>) -> Self {
        assert!(!outcomes.is_empty(), "at least one restart");
        let history: Vec<f64> = outcomes.iter().map(|o| o.pe).collect();
        let mut best = 0;
        for (i, o) in outcomes.iter().enumerate() {
            if o.pe < outcomes[best].pe {
                best = i;
            }
        }
        let restarts_used = outcomes.len();
        let winner = outcomes.into_iter().nth(best).expect("index in range");
        Self {
            best_pe: winner.pe,
            best_pair: winner.pair,
            restarts_used,
            converged: winner.converged,
            history,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub f_tol: f64,
    /// Simplex rebuilds around the incumbent after each Nelder-Mead run.
    pub passes: usize,
    /// Random perturbations of the incumbent, each followed by a fresh descent.
    pub hops: usize,
    /// Standard deviation of the perturbation added to every angle.
    pub hop_scale: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            f_tol: DEFAULT_F_TOL,
            passes: 8,
            hops: 10,
            hop_scale: 1.0,
        }
    }
}

/// Two-use error of pure input pairs through a fixed channel.
#[derive(Clone, Debug)]
pub struct TwoUseProblem {
    two_use: KrausChannel,
}

impl TwoUseProblem {
    pub fn new(channel: &KrausChannel) -> Self {
        Self {
            two_use: channel.tensor_square(),
        }
    }

    pub fn two_use(&self) -> &KrausChannel {
        &self.two_use
    }

    pub fn input_dim(&self) -> usize {
        self.two_use.dim()
    }

    /// `Phi(|1><1| - |0><0|)`.
    pub fn output_difference(&self, psi0: &[Complex64], psi1: &[Complex64]) -> ComplexMatrix {
        let diff = &ComplexMatrix::projector(psi1) - &ComplexMatrix::projector(psi0);
        self.two_use.apply_operator(&diff)
    }

    pub fn pure_pair_pe(&self, psi0: &[Complex64], psi1: &[Complex64]) -> f64 {
        pe_from_difference(&self.output_difference(psi0, psi1))
    }

    pub fn pair_pe(&self, pair: &SignalPair) -> Result<f64> {
        let (r0, r1) = pair.densities();
        let o0 = self.two_use.apply(&r0)?;
        let o1 = self.two_use.apply(&r1)?;
        Ok(helstrom_error(&o0, &o1, pair.priors)?.pe)
    }

    /// One seeded Nelder-Mead restart over [`PairParameterization`] angles.
    pub fn search_restart(&self, seed: u64, index: usize, opts: &SearchOptions) -> RestartOutcome {
        let dim = self.input_dim();
        let mut rng = random::stream(seed, Stream::Search, index as u64);
        let start = PairParameterization::random(&mut rng, dim);
        let nm = Options {
            max_iters: opts.max_iters,
            f_tol: opts.f_tol,
            initial_step: 0.6,
        };
        let objective = |angles: &[f64]| {
            let (a, b) = decode_pair(dim, angles);
            self.pure_pair_pe(&a, &b)
        };
        let m = hopping_descent(objective, start.angles().to_vec(), &nm, opts, &mut rng);
        let pair = PairParameterization::new(dim, m.x).to_signal_pair();
        RestartOutcome {
            pe: m.value,
            pair,
            converged: m.converged,
        }
    }
}

/// Restarted Nelder-Mead followed by `opts.hops` perturb-and-descend rounds
/// that keep the best point seen.
fn hopping_descent<F, R>(
    mut f: F,
    start: Vec<f64>,
    nm: &Options,
    opts: &SearchOptions,
    rng: &mut R,
) -> nelder_mead::Minimum
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let mut best = nelder_mead::minimize_with_restarts(&mut f, &start, nm, opts.passes);
    let mut iterations = best.iterations;
    for _ in 0..opts.hops {
        let kicked: Vec<f64> = best
            .x
            .iter()
            .map(|t| t + opts.hop_scale * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let m = nelder_mead::minimize_with_restarts(&mut f, &kicked, nm, opts.passes);
        iterations += m.iterations;
        if m.value < best.value {
            best = m;
        }
    }
    best.iterations = iterations;
    best
}

fn pe_from_difference(diff: &ComplexMatrix) -> f64 {
    // Outputs of a trace-preserving map keep a Hermitian difference.
    let norm = matrix::trace_norm(diff).expect("channel outputs are Hermitian");
    (0.5 - 0.25 * norm).max(0.0)
}

/// Minimum two-use error over orthonormal pure input pairs by restarted direct
/// search, with the default budget per restart.
pub fn search_optimal_inputs(channel: &KrausChannel, restarts: usize, seed: u64) -> SearchReport {
    search_optimal_inputs_with(
        channel,
        &SearchOptions {
            restarts,
            ..SearchOptions::default()
        },
        seed,
    )
}

pub fn search_optimal_inputs_with(
    channel: &KrausChannel,
    opts: &SearchOptions,
    seed: u64,
) -> SearchReport {
    let problem = TwoUseProblem::new(channel);
    let outcomes = (0..opts.restarts.max(1))
        .map(|i| problem.search_restart(seed, i, opts))
        .collect();
    SearchReport::from_restarts(outcomes)
}

/// Best two-use error over product inputs `|a>|b>` versus `|c>|d>` (no
/// orthogonality imposed), by restarted direct search over four Bloch-sphere
/// angle pairs.
pub fn search_product_inputs(channel: &KrausChannel, restarts: usize, seed: u64) -> SearchReport {
    search_product_inputs_with(
        channel,
        &SearchOptions {
            restarts,
            ..SearchOptions::default()
        },
        seed,
    )
}

pub fn search_product_inputs_with(
    channel: &KrausChannel,
    opts: &SearchOptions,
    seed: u64,
) -> SearchReport {
    let problem = TwoUseProblem::new(channel);
    let d = channel.dim();
    let k = unitary_angle_count(d);
    let angle_count = 4 * k;
    // Each factor is the first column of its own unitary.
    let decode = |angles: &[f64]| {
        let factor = |i: usize| unitary_from_angles(d, &angles[i * k..(i + 1) * k]).column(0);
        (
            matrix::tensor_vec(&factor(0), &factor(1)),
            matrix::tensor_vec(&factor(2), &factor(3)),
        )
    };
    let nm = Options {
        max_iters: opts.max_iters,
        f_tol: opts.f_tol,
        initial_step: 0.6,
    };
    let outcomes = (0..opts.restarts.max(1))
        .map(|i| {
            let mut rng = random::stream(seed, Stream::ProductSearch, i as u64);
            let start = random::angles(&mut rng, angle_count);
            let m = hopping_descent(
                |t| {
                    let (a, b) = decode(t);
                    problem.pure_pair_pe(&a, &b)
                },
                start,
                &nm,
                opts,
                &mut rng,
            );
            let (a, b) = decode(&m.x);
            RestartOutcome {
                pe: m.value,
                pair: pure_pair(a, b),
                converged: m.converged,
            }
        })
        .collect();
    SearchReport::from_restarts(outcomes)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once a full iteration raises `tr|Phi(rho1 - rho0)|` by less than this.
    pub tol: f64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            max_iters: 5000,
            tol: 1e-12,
        }
    }
}

/// One seesaw run. `objective` holds `tr((rho1 - rho0) Phi*(S))`, with
/// `S = (U + U^H)/2`, after every half-step.
#[derive(Clone, Debug)]
pub struct SeesawRun {
    pub pe: f64,
    pub pair: SignalPair,
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SeesawRun {
    /// Largest drop between consecutive half-steps (0 for a monotone run).
    pub fn max_decrease(&self) -> f64 {
        self.objective
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct SeesawReport {
    pub search: SearchReport,
    pub best_run: SeesawRun,
    /// Largest half-step decrease over all restarts.
    pub max_decrease: f64,
    pub total_iterations: usize,
}

impl SeesawReport {
    /// Whether every half-step of every restart was nondecreasing up to `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.max_decrease <= slack
    }
}

impl TwoUseProblem {
    /// Seesaw from a seeded random orthonormal pure pair.
    pub fn seesaw_run(&self, seed: u64, index: usize, opts: &SeesawOptions) -> SeesawRun {
        let dim = self.input_dim();
        let mut rng = random::stream(seed, Stream::Seesaw, index as u64);
        let (mut psi0, mut psi1) = PairParameterization::random(&mut rng, dim).decode();

        let mut objective = Vec::new();
        let mut last = f64::NEG_INFINITY;
        let mut iterations = 0;
        let mut converged = false;
        loop {
            // Unitary step: S = sign(Phi(rho1 - rho0)).
            let diff = self.output_difference(&psi0, &psi1);
            let spectrum = hermitian_eig(&diff).expect("Hermitian difference");
            let value: f64 = spectrum.eigenvalues.iter().map(|l| l.abs()).sum();
            objective.push(value);
            if value - last < opts.tol && iterations > 0 {
                converged = true;
                break;
            }
            if iterations >= opts.max_iters {
                break;
            }
            last = value;
            iterations += 1;
            let sign = spectrum.weighted_sum(|l| if l >= 0.0 { 1.0 } else { -1.0 });

            // Input step: extreme eigenvectors of Phi*(S).
            let pulled = self.two_use.apply_adjoint(&sign);
            let s = hermitian_eig(&pulled).expect("adjoint map preserves Hermiticity");
            objective.push(s.max() - s.min());
            psi1 = s.eigenvector(0);
            psi0 = s.eigenvector(s.dim() - 1);
        }
        let pe = (0.5 - 0.25 * objective.last().copied().unwrap_or(0.0)).max(0.0);
        SeesawRun {
            pe,
            pair: pure_pair(psi0, psi1),
            objective,
            iterations,
            converged,
        }
    }
}

/// Seesaw optimization with the default number of restarts.
pub fn seesaw(channel: &KrausChannel, seed: u64, max_iters: usize) -> SeesawReport {
    seesaw_with(
        channel,
        &SeesawOptions {
            max_iters,
            ..SeesawOptions::default()
        },
        seed,
    )
}

pub fn seesaw_with(channel: &KrausChannel, opts: &SeesawOptions, seed: u64) -> SeesawReport {
    let problem = TwoUseProblem::new(channel);
    let runs: Vec<SeesawRun> = (0..opts.restarts.max(1))
        .map(|i| problem.seesaw_run(seed, i, opts))
        .collect();
    SeesawReport::from_runs(runs)
}

impl SeesawReport {
    pub fn from_runs(runs: Vec<SeesawRun>) -> Self {
        let max_decrease = runs.iter().map(SeesawRun::max_decrease).fold(0.0, f64::max);
        let total_iterations = runs.iter().map(|r| r.iterations).sum();
        let mut best = 0;
        for (i, r) in runs.iter().enumerate() {
            if r.pe < runs[best].pe {
                best = i;
            }
        }
        let best_run = runs[best].clone();
        let outcomes = runs
            .into_iter()
            .map(|r| RestartOutcome {
                pe: r.pe,
                pair: r.pair,
                converged: r.converged,
            })
            .collect();
        Self {
            search: SearchReport::from_restarts(outcomes),
            best_run,
            max_decrease,
            total_iterations,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominanceReport {
    pub samples: usize,
    /// Samples with `pe < reference_pe - DOMINANCE_SLACK`.
    pub violations: usize,
    /// Smallest `sample_pe - reference_pe` seen.
    pub worst_margin: f64,
    pub reference_pe: f64,
}

pub const DOMINANCE_SLACK: f64 = 1e-9;

/// Draws mixed, nonorthogonal and near-optimal perturbed pairs and compares their
/// Helstrom error with an orthogonal pure optimum found by the seesaw.
pub fn dominance_check(channel: &KrausChannel, samples: usize, seed: u64) -> DominanceReport {
    let optimum = seesaw_with(channel, &SeesawOptions::default(), seed).search;
    dominance_check_against(channel, &optimum, samples, seed)
}

pub fn dominance_check_against(
    channel: &KrausChannel,
    optimum: &SearchReport,
    samples: usize,
    seed: u64,
) -> DominanceReport {
    let problem = TwoUseProblem::new(channel);
    let d = problem.input_dim();
    let (best0, best1) = optimum.best_pair.densities();
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for i in 0..samples.max(1) {
        let mut rng = random::stream(seed, Stream::Dominance, i as u64);
        let pair = match i % 4 {
            0 => SignalPair::mixed(
                random::mixed_state(&mut rng, d),
                random::mixed_state(&mut rng, d),
            ),
            1 => SignalPair::pure(
                random::pure_state(&mut rng, d),
                random::pure_state(&mut rng, d),
            ),
            2 => SignalPair::new(
                Signal::Pure(random::pure_state(&mut rng, d)),
                Signal::Mixed(random::mixed_state(&mut rng, d)),
            ),
            _ => {
                let eps: f64 = 0.2 * rng.random::<f64>();
                let noisy = |rho: &DensityMatrix, rng: &mut random::StreamRng| {
                    let noise = random::mixed_state(rng, d);
                    let m =
                        &rho.as_matrix().scale_real(1.0 - eps) + &noise.as_matrix().scale_real(eps);
                    DensityMatrix::new(m).expect("convex combination of states")
                };
                SignalPair::mixed(noisy(&best0, &mut rng), noisy(&best1, &mut rng))
            }
        }
        .expect("sampled states are valid");
        let pe = problem.pair_pe(&pair).expect("dimensions match");
        let margin = pe - optimum.best_pe;
        worst_margin = worst_margin.min(margin);
        if margin < -DOMINANCE_SLACK {
            violations += 1;
        }
    }
    DominanceReport {
        samples: samples.max(1),
        violations,
        worst_margin,
        reference_pe: optimum.best_pe,
    }
}

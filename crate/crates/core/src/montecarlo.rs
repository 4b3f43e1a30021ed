//! Sampled Kraus unravelings and empirical discrimination error rates.
//!
//! A trial draws the bit from the priors, an input vector for that bit (an
//! eigenvector of a mixed signal, chosen by its weight), one Kraus event per
//! channel use, and an outcome of the Helstrom measurement on the resulting
//! branch. Trials are grouped into fixed-size blocks; block `k` always uses
//! stream `k` of the `(seed, MonteCarlo)` key, so any partition of the blocks
//! across workers gives identical totals.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::channels::{DensityMatrix, KrausChannel};
use crate::discrimination::{helstrom_error, Priors, Signal, SignalPair};
use crate::matrix::{self, hermitian_eig, ComplexMatrix};
use crate::random::{self, Stream};
use crate::{Error, Result};

/// Branches with a norm below this are rejected as probability-zero events.
pub const ZERO_BRANCH_TOL: f64 = 1e-14;

/// Trials per independently seeded block.
pub const BLOCK_TRIALS: u64 = 8192;

/// One simulated transmission of a bit through two channel uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub bit_sent: u8,
    pub kraus_indices: (usize, usize),
    pub outcome: usize,
    pub correct: bool,
}

/// `||A_i psi||^2` for each Kraus operator.
pub fn branch_probabilities(channel: &KrausChannel, state: &[Complex64]) -> Vec<f64> {
    channel
        .operators()
        .iter()
        .map(|a| {
            let v = a.mul_vec(state);
            matrix::inner(&v, &v).re
        })
        .collect()
}

fn pick<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.iter().enumerate() {
        if *w > 0.0 {
            acc += w;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

fn normalized_branch(
    op: &ComplexMatrix,
    state: &[Complex64],
    index: usize,
) -> Result<Vec<Complex64>> {
    let v = op.mul_vec(state);
    let n = matrix::norm(&v);
    if n < ZERO_BRANCH_TOL {
        return Err(Error::ZeroNormBranch { index });
    }
    Ok(v.into_iter().map(|c| c / n).collect())
}

/// Draws Kraus event `i` with probability `||A_i psi||^2` and returns it with the
/// renormalized post-event state.
pub fn sample_channel<R: Rng + ?Sized>(
    channel: &KrausChannel,
    state: &[Complex64],
    rng: &mut R,
) -> Result<(usize, Vec<Complex64>)> {
    if state.len() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: state.len(),
        });
    }
    let i = pick(&branch_probabilities(channel, state), rng);
    Ok((i, normalized_branch(&channel.operators()[i], state, i)?))
}

/// `(A (x) I) psi` when `first`, else `(I (x) A) psi`, for a `d*d` state.
fn act_on_factor(a: &ComplexMatrix, psi: &[Complex64], first: bool) -> Vec<Complex64> {
    let d = a.rows();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                s += if first {
                    a[(r, k)] * psi[k * d + c]
                } else {
                    a[(c, k)] * psi[r * d + k]
                };
            }
            out[r * d + c] = s;
        }
    }
    out
}

fn sample_factor<R: Rng + ?Sized>(
    channel: &KrausChannel,
    psi: &[Complex64],
    first: bool,
    rng: &mut R,
) -> Result<(usize, Vec<Complex64>)> {
    let branches: Vec<Vec<Complex64>> = channel
        .operators()
        .iter()
        .map(|a| act_on_factor(a, psi, first))
        .collect();
    let weights: Vec<f64> = branches.iter().map(|v| matrix::inner(v, v).re).collect();
    let i = pick(&weights, rng);
    let n = weights[i].max(0.0).sqrt();
    if n < ZERO_BRANCH_TOL {
        return Err(Error::ZeroNormBranch { index: i });
    }
    Ok((i, branches[i].iter().map(|c| c / n).collect()))
}

/// Independent Kraus draws on each half of a two-use input: `A_i (x) I` first,
/// then `I (x) A_j`.
pub fn sample_two_uses<R: Rng + ?Sized>(
    channel: &KrausChannel,
    state: &[Complex64],
    rng: &mut R,
) -> Result<((usize, usize), Vec<Complex64>)> {
    let d = channel.dim();
    if state.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: state.len(),
        });
    }
    let (i, mid) = sample_factor(channel, state, true, rng)?;
    let (j, out) = sample_factor(channel, &mid, false, rng)?;
    Ok(((i, j), out))
}

/// Entrywise mean of `|post><post|` and its standard error.
#[derive(Clone, Debug)]
pub struct OutputEstimate {
    pub mean: ComplexMatrix,
    /// Standard errors of the real and imaginary parts, packed as a complex number.
    pub standard_error: ComplexMatrix,
    pub samples: usize,
}

impl OutputEstimate {
    /// Largest `|mean - exact| / se` over entries and parts, with a floor on `se`
    /// for entries that never fluctuate.
    pub fn max_z(&self, exact: &ComplexMatrix) -> f64 {
        let floor = 1e-12;
        let mut worst: f64 = 0.0;
        for (m, (e, s)) in self
            .mean
            .entries()
            .iter()
            .zip(exact.entries().iter().zip(self.standard_error.entries()))
        {
            worst = worst
                .max((m.re - e.re).abs() / s.re.max(floor))
                .max((m.im - e.im).abs() / s.im.max(floor));
        }
        worst
    }
}

fn accumulate(
    samples: usize,
    dim: usize,
    mut draw: impl FnMut() -> Result<Vec<Complex64>>,
) -> Result<OutputEstimate> {
    let n = dim * dim;
    let mut sum = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut sq = alloc::vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..samples {
        let v = draw()?;
        for r in 0..dim {
            for c in 0..dim {
                let e = v[r] * v[c].conj();
                sum[r * dim + c] += e;
                sq[r * dim + c] += Complex64::new(e.re * e.re, e.im * e.im);
            }
        }
    }
    let s = samples.max(1) as f64;
    let mean: Vec<Complex64> = sum.iter().map(|v| v / s).collect();
    let se = mean
        .iter()
        .zip(&sq)
        .map(|(m, q)| {
            let var = |mu: f64, q: f64| ((q / s - mu * mu).max(0.0) / s).sqrt();
            Complex64::new(var(m.re, q.re), var(m.im, q.im))
        })
        .collect();
    Ok(OutputEstimate {
        mean: ComplexMatrix::new(dim, dim, mean).expect("sized"),
        standard_error: ComplexMatrix::new(dim, dim, se).expect("sized"),
        samples,
    })
}

/// Average of sampled single-use branches.
pub fn average_output<R: Rng + ?Sized>(
    channel: &KrausChannel,
    state: &[Complex64],
    samples: usize,
    rng: &mut R,
) -> Result<OutputEstimate> {
    accumulate(samples, channel.dim(), || {
        sample_channel(channel, state, rng).map(|(_, v)| v)
    })
}

/// Average of sampled two-use branches.
pub fn average_two_use_output<R: Rng + ?Sized>(
    channel: &KrausChannel,
    state: &[Complex64],
    samples: usize,
    rng: &mut R,
) -> Result<OutputEstimate> {
    accumulate(samples, channel.dim() * channel.dim(), || {
        sample_two_uses(channel, state, rng).map(|(_, v)| v)
    })
}

#[derive(Clone, Debug)]
struct InputSampler {
    weights: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl InputSampler {
    fn new(signal: &Signal) -> Result<Self> {
        match signal {
            Signal::Pure(v) => Ok(Self {
                weights: alloc::vec![1.0],
                vectors: alloc::vec![v.clone()],
            }),
            Signal::Mixed(rho) => {
                let s = hermitian_eig(rho.as_matrix())?;
                let keep: Vec<usize> = (0..s.dim()).filter(|k| s.eigenvalues[*k] > 0.0).collect();
                Ok(Self {
                    weights: keep.iter().map(|k| s.eigenvalues[*k]).collect(),
                    vectors: keep.iter().map(|k| s.eigenvector(*k)).collect(),
                })
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &[Complex64] {
        if self.vectors.len() == 1 {
            &self.vectors[0]
        } else {
            &self.vectors[pick(&self.weights, rng)]
        }
    }
}

/// Per-block error counts for merging.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockTally {
    pub trials: u64,
    pub errors: u64,
}

impl core::ops::Add for BlockTally {
    type Output = BlockTally;

    fn add(self, o: BlockTally) -> BlockTally {
        BlockTally {
            trials: self.trials + o.trials,
            errors: self.errors + o.errors,
        }
    }
}

/// Empirical error rate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorEstimate {
    pub pe: f64,
    pub standard_error: f64,
    pub trials: u64,
    pub errors: u64,
}

impl From<BlockTally> for ErrorEstimate {
    fn from(t: BlockTally) -> Self {
        let n = t.trials.max(1) as f64;
        let pe = t.errors as f64 / n;
        Self {
            pe,
            standard_error: (pe * (1.0 - pe) / n).sqrt(),
            trials: t.trials,
            errors: t.errors,
        }
    }
}

/// Everything a trial needs, precomputed once per experiment.
#[derive(Clone, Debug)]
pub struct Experiment {
    channel: KrausChannel,
    inputs: [InputSampler; 2],
    /// Projector onto the outcome that is decoded as bit 1.
    guess_one: ComplexMatrix,
    priors: Priors,
    pub analytic_pe: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Experiment {
    pub fn new(pair: &SignalPair, channel: &KrausChannel, trials: u64, seed: u64) -> Result<Self> {
        let d = channel.dim();
        if pair.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: pair.dim(),
            });
        }
        let (r0, r1) = pair.through_two_uses(channel)?;
        let h = helstrom_error(&r0, &r1, pair.priors)?;
        Ok(Self {
            channel: channel.clone(),
            inputs: [
                InputSampler::new(&pair.state0)?,
                InputSampler::new(&pair.state1)?,
            ],
            guess_one: h.measurement.elements()[1].clone(),
            priors: pair.priors,
            analytic_pe: h.pe,
            trials: trials.max(1),
            seed,
        })
    }

    pub fn blocks(&self) -> u64 {
        self.trials.div_ceil(BLOCK_TRIALS)
    }

    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TrialRecord> {
        let bit = u8::from(rng.random::<f64>() < self.priors.p1());
        let psi = self.inputs[bit as usize].draw(rng);
        let (kraus_indices, out) = sample_two_uses(&self.channel, psi, rng)?;
        let p_one = matrix::inner(&out, &self.guess_one.mul_vec(&out)).re;
        let outcome = usize::from(rng.random::<f64>() < p_one);
        Ok(TrialRecord {
            bit_sent: bit,
            kraus_indices,
            outcome,
            correct: outcome == bit as usize,
        })
    }

    pub fn run_block(&self, block: u64) -> Result<BlockTally> {
        let start = block * BLOCK_TRIALS;
        let count = BLOCK_TRIALS.min(self.trials.saturating_sub(start));
        let mut rng = random::stream(self.seed, Stream::MonteCarlo, block);
        let mut errors = 0;
        for _ in 0..count {
            if !self.trial(&mut rng)?.correct {
                errors += 1;
            }
        }
        Ok(BlockTally {
            trials: count,
            errors,
        })
    }
}

/// Runs every block in order; see [`Experiment::run_block`] to split the work.
pub fn simulate_error_rate(
    pair: &SignalPair,
    channel: &KrausChannel,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    let exp = Experiment::new(pair, channel, trials, seed)?;
    let mut total = BlockTally::default();
    for b in 0..exp.blocks() {
        total = total + exp.run_block(b)?;
    }
    Ok(total.into())
}

/// Exact output of one use, for comparison with [`average_output`].
pub fn exact_output(channel: &KrausChannel, state: &[Complex64]) -> Result<ComplexMatrix> {
    Ok(channel
        .apply(&DensityMatrix::from_pure(state)?)?
        .into_matrix())
}

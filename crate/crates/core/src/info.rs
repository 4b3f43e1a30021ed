//! Classical information carried by quantum signal ensembles.
//!
//! The accessible information of an ensemble under a fixed measurement is the
//! Shannon mutual information between the preparation index and the outcome.
//! [`capacity_fixed_outputs`] maximizes it over rank-one projective measurements
//! and over the priors; the measurement restriction makes every reported
//! capacity a lower bound.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channels::{DensityMatrix, KrausChannel};
use crate::discrimination::{bell_basis, Povm};
use crate::matrix::{
    hermitian_eig, tensor, unitary_angle_count, unitary_from_angles, ComplexMatrix,
};
use crate::nelder_mead::{self, Options};
use crate::random::{self, Stream};
use crate::{Error, Result};

/// Probabilities at or below this are treated as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

pub const ENSEMBLE_PRIOR_TOL: f64 = 1e-12;

/// Golden-section stopping width for two-state prior optimization.
pub const PRIOR_SEARCH_TOL: f64 = 1e-10;

/// States on a common space with their preparation probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    states: Vec<DensityMatrix>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<DensityMatrix>, priors: Vec<f64>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::Unsupported("ensemble needs at least one state"));
        };
        let dim = first.dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: priors.len(),
            });
        }
        let sum: f64 = priors.iter().sum();
        if priors.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > ENSEMBLE_PRIOR_TOL {
            return Err(Error::InvalidPriors { sum });
        }
        Ok(Self { states, priors })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(states, vec![1.0 / n as f64; n])
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `sum_i p_i rho_i`.
    pub fn average(&self) -> ComplexMatrix {
        let d = self.dim();
        self.states
            .iter()
            .zip(&self.priors)
            .fold(ComplexMatrix::zeros(d, d), |acc, (s, p)| {
                &acc + &s.as_matrix().scale_real(*p)
            })
    }
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |q: f64| {
        if q <= PROBABILITY_FLOOR {
            0.0
        } else {
            -q * q.log2()
        }
    };
    h(p) + h(1.0 - p)
}

/// Mutual information in bits from the joint table `joint[i][b] = p_i P(b | i)`.
///
/// Per-outcome contributions are summed in sorted order, so relabeling the
/// outcomes leaves the result bit-for-bit unchanged.
pub fn information_from_joint(joint: &[Vec<f64>]) -> f64 {
    let outcomes = joint.first().map_or(0, Vec::len);
    let clamp = |v: f64| if v <= PROBABILITY_FLOOR { 0.0 } else { v };
    let row_sums: Vec<f64> = joint
        .iter()
        .map(|row| {
            let mut r: Vec<f64> = row.iter().map(|v| clamp(*v)).collect();
            r.sort_by(f64::total_cmp);
            r.iter().sum()
        })
        .collect();
    let mut terms: Vec<f64> = (0..outcomes)
        .map(|b| {
            let pb: f64 = joint.iter().map(|row| clamp(row[b])).sum();
            joint
                .iter()
                .zip(&row_sums)
                .map(|(row, pi)| {
                    let j = clamp(row[b]);
                    if j == 0.0 {
                        0.0
                    } else {
                        j * (j / (pi * pb)).log2()
                    }
                })
                .sum()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum::<f64>().max(0.0)
}

/// `I = sum_{i,b} p_i P(b|i) log2(P(b|i) / P(b))` with `P(b|i) = tr(rho_i E_b)`.
pub fn mutual_information(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    let joint = ensemble
        .states
        .iter()
        .zip(&ensemble.priors)
        .map(|(s, p)| Ok(povm.probabilities(s)?.into_iter().map(|q| p * q).collect()))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(information_from_joint(&joint))
}

fn basis_information(states: &[DensityMatrix], priors: &[f64], basis: &ComplexMatrix) -> f64 {
    let d = basis.rows();
    let joint: Vec<Vec<f64>> = states
        .iter()
        .zip(priors)
        .map(|(s, p)| {
            let m = s.as_matrix();
            (0..d)
                .map(|b| {
                    let mut q = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        for j in 0..d {
                            q += basis[(i, b)].conj() * m[(i, j)] * basis[(j, b)];
                        }
                    }
                    p * q.re
                })
                .collect()
        })
        .collect();
    information_from_joint(&joint)
}

/// Best measurement, priors and information found by [`capacity_fixed_outputs`].
#[derive(Clone, Debug)]
pub struct CapacityReport {
    pub capacity: f64,
    pub priors: Vec<f64>,
    /// Measurement basis as the columns of a unitary.
    pub basis: ComplexMatrix,
    pub povm: Povm,
    /// Always set: only projective measurements were searched.
    pub lower_bound: bool,
}

struct Incumbent {
    value: f64,
    basis: ComplexMatrix,
}

struct Searcher<'a> {
    states: &'a [DensityMatrix],
    opts: Options,
    passes: usize,
}

impl Searcher<'_> {
    fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Maximizes over `start * U(t)` beginning at `t = 0`.
    fn polish(&self, priors: &[f64], start: &ComplexMatrix) -> Incumbent {
        let d = self.dim();
        let zero = vec![0.0; unitary_angle_count(d)];
        let objective = |t: &[f64]| {
            let basis = start * &unitary_from_angles(d, t);
            -basis_information(self.states, priors, &basis)
        };
        let m = nelder_mead::minimize_with_restarts(objective, &zero, &self.opts, self.passes);
        Incumbent {
            value: -m.value,
            basis: start * &unitary_from_angles(d, &m.x),
        }
    }

    fn best_of(&self, priors: &[f64], starts: &[ComplexMatrix]) -> Incumbent {
        let mut best: Option<Incumbent> = None;
        for s in starts {
            let c = self.polish(priors, s);
            if best.as_ref().is_none_or(|b| c.value > b.value) {
                best = Some(c);
            }
        }
        best.expect("at least one start")
    }

    /// Eigenbasis of `sum_i w_i p_i rho_i` with weights `w_i = i - (n-1)/2`,
    /// which for two states is the Helstrom-operator eigenbasis.
    fn weighted_eigenbasis(&self, priors: &[f64]) -> ComplexMatrix {
        let d = self.dim();
        let n = self.states.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, (s, p)) in self.states.iter().zip(priors).enumerate() {
            let w = i as f64 - 0.5 * (n as f64 - 1.0);
            m = &m + &s.as_matrix().scale_real(w * p);
        }
        hermitian_eig(&m)
            .map(|s| s.eigenvectors)
            .unwrap_or_else(|_| ComplexMatrix::identity(d))
    }

    fn starts(&self, priors: &[f64], incumbent: Option<&ComplexMatrix>) -> Vec<ComplexMatrix> {
        let mut starts = vec![self.weighted_eigenbasis(priors)];
        if let Some(b) = incumbent {
            starts.push(b.clone());
        }
        starts
    }
}

/// Every prior vector with entries `k / resolution`.
fn simplex_grid(n: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn fill(n: usize, left: usize, res: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.iter().map(|k| *k as f64 / res as f64).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(n, left - k, res, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n, resolution, resolution, &mut Vec::new(), &mut out);
    out
}

/// Maximum mutual information over priors and rank-one projective measurements
/// for fixed output states.
///
/// The measurement search runs Nelder-Mead over the measurement unitary from the
/// weighted-difference eigenbasis, the computational basis and `povm_restarts`
/// seeded random bases. Priors are searched on a grid of `prior_grid` steps; with
/// two states the best cell is then refined by golden section.
pub fn capacity_fixed_outputs(
    states: &[DensityMatrix],
    povm_restarts: usize,
    prior_grid: usize,
    seed: u64,
) -> Result<CapacityReport> {
    Ensemble::uniform(states.to_vec())?;
    let n = states.len();
    if n < 2 {
        return Err(Error::Unsupported("capacity needs at least two states"));
    }
    let d = states[0].dim();
    let searcher = Searcher {
        states,
        opts: Options {
            max_iters: 2000,
            f_tol: 1e-14,
            initial_step: 0.4,
        },
        passes: 4,
    };

    let uniform = vec![1.0 / n as f64; n];
    let mut starts = searcher.starts(&uniform, None);
    starts.push(ComplexMatrix::identity(d));
    for r in 0..povm_restarts {
        let mut rng = random::stream(seed, Stream::Measurement, r as u64);
        starts.push(unitary_from_angles(
            d,
            &random::angles(&mut rng, unitary_angle_count(d)),
        ));
    }
    let first = searcher.best_of(&uniform, &starts);
    let mut best_priors = uniform;
    let mut best = first;

    let grid = simplex_grid(n, prior_grid.max(1));
    for priors in &grid {
        let c = searcher.best_of(priors, &searcher.starts(priors, Some(&best.basis)));
        if c.value > best.value {
            best = c;
            best_priors = priors.clone();
        }
    }

    if n == 2 {
        let step = 1.0 / prior_grid.max(1) as f64;
        let center = best_priors[1];
        let lo = (center - step).max(0.0);
        let hi = (center + step).min(1.0);
        let seed_basis = best.basis.clone();
        let eval = |p1: f64| {
            let priors = [1.0 - p1, p1];
            searcher.best_of(&priors, &searcher.starts(&priors, Some(&seed_basis)))
        };
        let (p1, c) = golden_section_max(eval, lo, hi, PRIOR_SEARCH_TOL);
        if c.value > best.value {
            best = c;
            best_priors = vec![1.0 - p1, p1];
        }
    }

    let povm = Povm::projective(&best.basis)?;
    Ok(CapacityReport {
        capacity: best.value,
        priors: best_priors,
        basis: best.basis,
        povm,
        lower_bound: true,
    })
}

fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, Incumbent)
where
    F: FnMut(f64) -> Incumbent,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut e = a + r * (b - a);
    let mut fc = f(c);
    let mut fe = f(e);
    while b - a > tol {
        if fc.value >= fe.value {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = f(e);
        }
    }
    if fc.value >= fe.value {
        (c, fc)
    } else {
        (e, fe)
    }
}

/// Heuristic single-use versus two-use capacity lower bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct UseComparison {
    pub single_use: f64,
    pub two_use: f64,
    /// `two_use / single_use`, or `NaN` when the single-use bound is zero.
    pub ratio: f64,
    pub candidates: usize,
    /// Always set: both figures are budgeted lower bounds.
    pub lower_bound: bool,
}

/// Eigenbases of `sigma_3`, `sigma_1` and `sigma_2` as unitary columns.
fn pauli_bases() -> [ComplexMatrix; 3] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::new(2, 2, vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]).expect("2x2"),
        ComplexMatrix::new(2, 2, vec![c(h, 0.0), c(h, 0.0), c(0.0, h), c(0.0, -h)]).expect("2x2"),
    ]
}

/// Basis-state input ensembles, each pushed through `channel` and scored with
/// [`capacity_fixed_outputs`]. Candidates are the computational basis (for qubits
/// all three Pauli eigenbases), for two uses also their tensor products and the
/// Bell basis, plus `budget` seeded random bases per use count.
pub fn two_use_vs_single_use(
    channel: &KrausChannel,
    budget: usize,
    seed: u64,
) -> Result<UseComparison> {
    let two = channel.tensor_square();
    let d = channel.dim();
    let singles: Vec<ComplexMatrix> = if d == 2 {
        pauli_bases().to_vec()
    } else {
        vec![ComplexMatrix::identity(d)]
    };
    let mut pairs: Vec<ComplexMatrix> = singles
        .iter()
        .flat_map(|a| singles.iter().map(move |b| tensor(a, b)))
        .collect();
    if d == 2 {
        pairs.push(bell_basis());
    }
    let candidates = singles.len() + pairs.len() + 2 * budget;
    let single = best_basis_capacity(channel, singles, budget, seed, 0)?;
    let double = best_basis_capacity(&two, pairs, budget, seed, 1 << 32)?;
    let ratio = if single > PROBABILITY_FLOOR {
        double / single
    } else {
        f64::NAN
    };
    Ok(UseComparison {
        single_use: single,
        two_use: double,
        ratio,
        candidates,
        lower_bound: true,
    })
}

fn best_basis_capacity(
    channel: &KrausChannel,
    mut inputs: Vec<ComplexMatrix>,
    budget: usize,
    seed: u64,
    offset: u64,
) -> Result<f64> {
    let d = channel.dim();
    for k in 0..budget {
        let mut rng = random::stream(seed, Stream::InputSearch, offset + k as u64);
        inputs.push(unitary_from_angles(
            d,
            &random::angles(&mut rng, unitary_angle_count(d)),
        ));
    }
    let mut best = 0.0f64;
    for (k, u) in inputs.iter().enumerate() {
        let outputs = (0..d)
            .map(|j| channel.apply(&DensityMatrix::from_pure(&u.column(j))?))
            .collect::<Result<Vec<_>>>()?;
        let report = capacity_fixed_outputs(&outputs, 1, 4, seed ^ (offset + k as u64))?;
        best = best.max(report.capacity);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{identity, two_pauli, BlochVector};
    use crate::discrimination::{ansatz_states, helstrom_error, optimal_entangled, Priors};
    use proptest::prelude::*;

    fn ket(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|x| Complex64::new(*x, 0.0)).collect()
    }

    fn pure(v: &[f64]) -> DensityMatrix {
        DensityMatrix::from_pure(&ket(v)).unwrap()
    }

    #[test]
    fn orthogonal_states_carry_one_bit() {
        let e = Ensemble::uniform(vec![pure(&[1.0, 0.0]), pure(&[0.0, 1.0])]).unwrap();
        let povm = Povm::projective(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(mutual_information(&e, &povm).unwrap(), 1.0);
    }

    #[test]
    fn trivial_measurement_carries_nothing() {
        let e = Ensemble::uniform(vec![pure(&[1.0, 0.0]), pure(&[0.6, 0.8])]).unwrap();
        let povm = Povm::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(mutual_information(&e, &povm).unwrap(), 0.0);
    }

    #[test]
    fn identical_states_carry_nothing() {
        let s = pure(&[0.6, 0.8]);
        let e = Ensemble::uniform(vec![s.clone(), s]).unwrap();
        let povm = Povm::projective(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(mutual_information(&e, &povm).unwrap(), 0.0);
    }

    #[test]
    fn ensemble_validation() {
        let s = pure(&[1.0, 0.0]);
        assert!(matches!(
            Ensemble::new(vec![s.clone(), s.clone()], vec![0.5, 0.6]),
            Err(Error::InvalidPriors { .. })
        ));
        let big = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            Ensemble::uniform(vec![s, big]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_with_povm() {
        let e = Ensemble::uniform(vec![pure(&[1.0, 0.0]), pure(&[0.0, 1.0])]).unwrap();
        let povm = Povm::projective(&ComplexMatrix::identity(4)).unwrap();
        assert!(matches!(
            mutual_information(&e, &povm),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11) - 0.499_915_958_164_528).abs() < 1e-12);
    }

    fn helstrom_outputs(x: f64) -> (DensityMatrix, DensityMatrix, Povm, f64) {
        let opt = optimal_entangled(x).unwrap();
        let (r0, r1) = ansatz_states(opt.alpha)
            .through_two_uses(&two_pauli(x).unwrap())
            .unwrap();
        let h = helstrom_error(&r0, &r1, Priors::equal()).unwrap();
        (r0, r1, h.measurement, opt.pe)
    }

    #[test]
    fn helstrom_errors_are_symmetric_at_half() {
        let (r0, r1, povm, pe) = helstrom_outputs(0.5);
        let q0 = povm.probabilities(&r0).unwrap();
        let q1 = povm.probabilities(&r1).unwrap();
        assert!((q0[1] - pe).abs() < 1e-12);
        assert!((q1[0] - pe).abs() < 1e-12);
    }

    #[test]
    fn helstrom_information_is_bsc_capacity() {
        let (r0, r1, povm, pe) = helstrom_outputs(0.5);
        let e = Ensemble::uniform(vec![r0, r1]).unwrap();
        let i = mutual_information(&e, &povm).unwrap();
        assert!((i - (1.0 - binary_entropy(pe))).abs() < 1e-12);
        assert!((i - 0.201_977_344_638).abs() < 1e-9);
    }

    #[test]
    fn capacity_of_orthogonal_and_identical_pairs() {
        let c = capacity_fixed_outputs(&[pure(&[1.0, 0.0]), pure(&[0.0, 1.0])], 2, 10, 1).unwrap();
        assert!((c.capacity - 1.0).abs() < 1e-9);
        assert!((c.priors[0] - 0.5).abs() < 1e-6);
        assert!(c.lower_bound);
        let s = pure(&[0.6, 0.8]);
        let c = capacity_fixed_outputs(&[s.clone(), s], 2, 10, 1).unwrap();
        assert!(c.capacity.abs() < 1e-12);
    }

    #[test]
    fn capacity_dominates_helstrom_information() {
        let (r0, r1, povm, _) = helstrom_outputs(0.5);
        let e = Ensemble::uniform(vec![r0.clone(), r1.clone()]).unwrap();
        let i = mutual_information(&e, &povm).unwrap();
        let c = capacity_fixed_outputs(&[r0, r1], 2, 10, 7).unwrap();
        assert!(c.capacity >= i - 1e-9, "{} < {}", c.capacity, i);
    }

    #[test]
    fn symmetric_pair_prefers_equal_priors() {
        let a = BlochVector::new(0.3, 0.2, 0.5).unwrap();
        let c = capacity_fixed_outputs(&[a.density(), a.negate().density()], 2, 10, 3).unwrap();
        assert!((c.priors[0] - 0.5).abs() < 0.01, "{:?}", c.priors);
        assert!((c.capacity - (1.0 - binary_entropy(0.5 * (1.0 - a.length())))).abs() < 1e-8);
    }

    #[test]
    fn three_state_grid_covers_uniform() {
        let states = [pure(&[1.0, 0.0]), pure(&[0.0, 1.0]), pure(&[0.6, 0.8])];
        let c = capacity_fixed_outputs(&states, 1, 6, 5).unwrap();
        assert!(c.capacity >= 1.0 - 1e-9 && c.capacity <= 3f64.log2());
        assert_eq!(c.priors.len(), 3);
        assert!((c.priors.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_grid_counts() {
        assert_eq!(simplex_grid(2, 4).len(), 5);
        assert_eq!(simplex_grid(3, 4).len(), 15);
        assert!(simplex_grid(4, 4)
            .iter()
            .any(|p| p.iter().all(|v| *v == 0.25)));
    }

    #[test]
    fn noiseless_channels_double_with_two_uses() {
        for ch in [identity(2), two_pauli(1.0).unwrap()] {
            let r = two_use_vs_single_use(&ch, 0, 42).unwrap();
            assert!((r.single_use - 1.0).abs() < 1e-9, "{r:?}");
            assert!((r.two_use - 2.0).abs() < 1e-9, "{r:?}");
            assert!((r.ratio - 2.0).abs() < 1e-9);
            assert!(r.lower_bound);
        }
    }

    fn random_ensemble(seed: u64) -> (Ensemble, Povm) {
        let mut rng = random::stream(seed, Stream::Test, 0);
        let states = (0..3).map(|_| random::mixed_state(&mut rng, 2)).collect();
        let e = Ensemble::new(states, vec![0.2, 0.3, 0.5]).unwrap();
        let u = unitary_from_angles(2, &random::angles(&mut rng, 4));
        let mut elements: Vec<ComplexMatrix> = (0..2)
            .map(|j| ComplexMatrix::projector(&u.column(j)).scale_real(0.5))
            .collect();
        elements.push(ComplexMatrix::projector(&u.column(0)).scale_real(0.5));
        elements.push(ComplexMatrix::projector(&u.column(1)).scale_real(0.5));
        (e, Povm::new(elements).unwrap())
    }

    proptest! {
        #[test]
        fn relabeling_outcomes_is_exact(seed in 0u64..1000, rot in 0usize..4) {
            let (e, povm) = random_ensemble(seed);
            let mut els = povm.elements().to_vec();
            els.rotate_left(rot);
            els.swap(0, 3);
            let i0 = mutual_information(&e, &povm).unwrap();
            let i1 = mutual_information(&e, &Povm::new(els).unwrap()).unwrap();
            prop_assert_eq!(i0, i1);
        }

        #[test]
        fn splitting_elements_preserves_information(seed in 0u64..1000) {
            let (e, povm) = random_ensemble(seed);
            let whole = povm.elements()[0].scale_real(2.0);
            let coarse = Povm::new(vec![whole, povm.elements()[1].scale_real(2.0)]).unwrap();
            let split = Povm::new(vec![
                coarse.elements()[0].scale_real(0.5),
                coarse.elements()[0].scale_real(0.5),
                coarse.elements()[1].clone(),
            ]).unwrap();
            let a = mutual_information(&e, &coarse).unwrap();
            let b = mutual_information(&e, &split).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a >= 0.0 && a <= 3f64.log2());
        }
    }
}

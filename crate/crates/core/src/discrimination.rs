//! Binary minimum-error discrimination and the closed-form two-Pauli results.
//!
//! Bell vectors are always ordered `(Phi+, Phi-, Psi+, Psi-)` and the two-qubit
//! computational basis is `|up up>, |up down>, |down up>, |down down>`, with
//! `|up> = (1, 0)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channels::{check_unit_interval, two_pauli, DensityMatrix, KrausChannel};
use crate::matrix::{self, commutator_norm, hermitian_eig, ComplexMatrix, Spectrum};
use crate::{Error, Result};

pub const PRIOR_TOL: f64 = 1e-12;
pub const POVM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Priors {
    p0: f64,
    p1: f64,
}

impl Priors {
    pub fn equal() -> Self {
        Self { p0: 0.5, p1: 0.5 }
    }

    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        let sum = p0 + p1;
        if !(p0 >= 0.0 && p1 >= 0.0 && (sum - 1.0).abs() <= PRIOR_TOL) {
            return Err(Error::InvalidPriors { sum });
        }
        Ok(Self { p0, p1 })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn get(&self, bit: usize) -> f64 {
        if bit == 0 {
            self.p0
        } else {
            self.p1
        }
    }
}

impl Default for Priors {
    fn default() -> Self {
        Self::equal()
    }
}

/// One of the two encodings of a bit.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    Pure(Vec<Complex64>),
    Mixed(DensityMatrix),
}

impl Signal {
    pub fn dim(&self) -> usize {
        match self {
            Signal::Pure(v) => v.len(),
            Signal::Mixed(rho) => rho.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Signal::Pure(v) => DensityMatrix::from_pure(v).expect("normalized at construction"),
            Signal::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&[Complex64]> {
        match self {
            Signal::Pure(v) => Some(v),
            Signal::Mixed(_) => None,
        }
    }
}

/// The two input states Alice uses for bit 0 and bit 1, with their priors.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalPair {
    pub state0: Signal,
    pub state1: Signal,
    pub priors: Priors,
}

impl SignalPair {
    pub fn pure(v0: Vec<Complex64>, v1: Vec<Complex64>) -> Result<Self> {
        // Validates normalization.
        DensityMatrix::from_pure(&v0)?;
        DensityMatrix::from_pure(&v1)?;
        Self::build(Signal::Pure(v0), Signal::Pure(v1))
    }

    pub fn mixed(r0: DensityMatrix, r1: DensityMatrix) -> Result<Self> {
        Self::build(Signal::Mixed(r0), Signal::Mixed(r1))
    }

    pub fn new(state0: Signal, state1: Signal) -> Result<Self> {
        if let Signal::Pure(v) = &state0 {
            DensityMatrix::from_pure(v)?;
        }
        if let Signal::Pure(v) = &state1 {
            DensityMatrix::from_pure(v)?;
        }
        Self::build(state0, state1)
    }

    fn build(state0: Signal, state1: Signal) -> Result<Self> {
        if state0.dim() != state1.dim() {
            return Err(Error::DimensionMismatch {
                expected: state0.dim(),
                found: state1.dim(),
            });
        }
        Ok(Self {
            state0,
            state1,
            priors: Priors::equal(),
        })
    }

    pub fn with_priors(mut self, priors: Priors) -> Self {
        self.priors = priors;
        self
    }

    pub fn dim(&self) -> usize {
        self.state0.dim()
    }

    pub fn densities(&self) -> (DensityMatrix, DensityMatrix) {
        (self.state0.density(), self.state1.density())
    }

    /// `|<0|1>|` for a pair of pure states.
    pub fn overlap(&self) -> Option<f64> {
        Some(matrix::inner(self.state0.as_pure()?, self.state1.as_pure()?).norm())
    }

    /// Output states after two uses of `channel`.
    pub fn through_two_uses(
        &self,
        channel: &KrausChannel,
    ) -> Result<(DensityMatrix, DensityMatrix)> {
        let (r0, r1) = self.densities();
        Ok((channel.apply_two(&r0)?, channel.apply_two(&r1)?))
    }
}

/// Positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements.first().ok_or(Error::InvalidPovm {
            reason: "no elements",
            value: 0.0,
        })?;
        let dim = first.require_square()?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &elements {
            let d = e.require_square()?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d,
                });
            }
            let min = hermitian_eig(e)
                .map_err(|_| Error::InvalidPovm {
                    reason: "element not Hermitian",
                    value: e.hermiticity_deviation(),
                })?
                .min();
            if min < -POVM_TOL {
                return Err(Error::InvalidPovm {
                    reason: "element has a negative eigenvalue",
                    value: min,
                });
            }
            sum = &sum + e;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > POVM_TOL {
            return Err(Error::InvalidPovm {
                reason: "elements do not sum to identity",
                value: residual,
            });
        }
        Ok(Self { elements })
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let elements = (0..basis.cols())
            .map(|j| ComplexMatrix::projector(&basis.column(j)))
            .collect();
        Self::new(elements)
    }

    pub(crate) fn from_trusted(elements: Vec<ComplexMatrix>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome probabilities `tr(rho E_b)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        Ok(self
            .elements
            .iter()
            .map(|e| trace_product(rho.as_matrix(), e))
            .collect())
    }
}

/// `Re tr(a b)` without forming the product.
pub(crate) fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut t = 0.0;
    for i in 0..n {
        for k in 0..n {
            t += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    t
}

/// Optimal error, the spectrum of `Gamma = p1 R1 - p0 R0`, and the Helstrom
/// measurement `[E0, E1]` where `E1` projects onto the nonnegative eigenspace.
#[derive(Clone, Debug)]
pub struct DiscriminationResult {
    pub pe: f64,
    pub gamma_spectrum: Spectrum,
    pub measurement: Povm,
}

/// Bayes error of guessing the likelier bit after each outcome:
/// `sum_b min(p0 tr(R0 E_b), p1 tr(R1 E_b))`.
pub fn povm_error(
    povm: &Povm,
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    priors: Priors,
) -> Result<f64> {
    let q0 = povm.probabilities(r0)?;
    let q1 = povm.probabilities(r1)?;
    Ok(q0
        .iter()
        .zip(&q1)
        .map(|(a, b)| (priors.p0 * a).min(priors.p1 * b))
        .sum())
}

fn gamma(r0: &DensityMatrix, r1: &DensityMatrix, priors: Priors) -> Result<ComplexMatrix> {
    if r0.dim() != r1.dim() {
        return Err(Error::DimensionMismatch {
            expected: r0.dim(),
            found: r1.dim(),
        });
    }
    Ok(&r1.as_matrix().scale_real(priors.p1) - &r0.as_matrix().scale_real(priors.p0))
}

/// Minimum error over all measurements, `(1 - tr|p1 R1 - p0 R0|) / 2`, which is
/// `1/2 - tr|R1 - R0| / 4` for equal priors.
pub fn helstrom_error(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    priors: Priors,
) -> Result<DiscriminationResult> {
    let g = gamma(r0, r1, priors)?;
    let spectrum = hermitian_eig(&g)?;
    let norm: f64 = spectrum.eigenvalues.iter().map(|l| l.abs()).sum();
    let e1 = spectrum.projector_where(|l| l >= 0.0);
    let e0 = spectrum.projector_where(|l| l < 0.0);
    Ok(DiscriminationResult {
        pe: (0.5 * (1.0 - norm)).max(0.0),
        gamma_spectrum: spectrum,
        measurement: Povm::from_trusted(vec![e0, e1]),
    })
}

/// Just the Helstrom error for equal priors, from raw output matrices.
pub fn helstrom_pe(r0: &ComplexMatrix, r1: &ComplexMatrix) -> Result<f64> {
    let norm = matrix::trace_norm(&(r1 - r0))?;
    Ok((0.5 - 0.25 * norm).max(0.0))
}

/// Amplitudes over `(Phi+, Phi-, Psi+, Psi-)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl BellCoefficients {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()).sqrt();
        if !((n - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidState {
                reason: "Bell coefficients are not normalized",
                value: n,
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = |v| Complex64::new(v, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_real(&self) -> bool {
        self.as_array().iter().all(|z| z.im == 0.0)
    }
}

/// Columns are `Phi+, Phi-, Psi+, Psi-` in the computational basis.
pub fn bell_basis() -> ComplexMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, &[
        h,  h,  0.0, 0.0,
        0.0, 0.0, h,  h,
        0.0, 0.0, h, -h,
        h, -h,  0.0, 0.0,
    ]);
    m
}

pub fn bell_to_computational(coeffs: &BellCoefficients) -> Vec<Complex64> {
    bell_basis().mul_vec(&coeffs.as_array())
}

pub fn computational_to_bell(v: &[Complex64]) -> Result<BellCoefficients> {
    if v.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: v.len(),
        });
    }
    let c = bell_basis().adjoint().mul_vec(v);
    BellCoefficients::new(c[0], c[1], c[2], c[3])
}

/// `B^H m B`: re-expresses a two-qubit operator in the Bell ordering.
pub fn to_bell_frame(m: &ComplexMatrix) -> ComplexMatrix {
    bell_basis().adjoint_sandwich(m)
}

/// `B m B^H`: back to the computational basis.
pub fn from_bell_frame(m: &ComplexMatrix) -> ComplexMatrix {
    bell_basis().sandwich(m)
}

/// Entry coefficients of the two-use two-Pauli output in the Bell frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellOutputCoefficients {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub k: f64,
}

impl BellOutputCoefficients {
    pub fn new(x: f64) -> Self {
        Self {
            e: 0.5 * (1.0 - 2.0 * x + 3.0 * x * x),
            f: 0.5 * (1.0 - x) * (1.0 - x),
            g: x * (1.0 - x),
            h: 2.0 * x - 1.0,
            k: x * (2.0 * x - 1.0),
        }
    }
}

/// Two uses of `two_pauli(x)` applied to the pure state with Bell amplitudes
/// `coeffs`, written in the Bell frame.
///
/// Real amplitudes use the closed-form matrix. Complex amplitudes fall back to
/// `apply_two` followed by a change of basis.
pub fn two_pauli_output_bell(coeffs: &BellCoefficients, x: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    if !coeffs.is_real() {
        let psi = bell_to_computational(coeffs);
        let out = two_pauli(x)?.apply_two(&DensityMatrix::from_pure(&psi)?)?;
        return Ok(DensityMatrix::from_channel_output(to_bell_frame(
            out.as_matrix(),
        )));
    }
    let BellOutputCoefficients { e, f, g, h, k } = BellOutputCoefficients::new(x);
    let (a, b, c, d) = (coeffs.a.re, coeffs.b.re, coeffs.c.re, coeffs.d.re);
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, &[
        e * a2 + f * b2 + g * c2 + g * d2, h * a * b, x * a * c, k * a * d,
        h * a * b, f * a2 + e * b2 + g * c2 + g * d2, k * b * c, x * b * d,
        x * a * c, k * b * c, g * a2 + g * b2 + e * c2 + f * d2, h * c * d,
        k * a * d, x * b * d, h * c * d, g * a2 + g * b2 + f * c2 + e * d2,
    ]);
    Ok(DensityMatrix::from_channel_output(m))
}

/// Best error with orthogonal pure product inputs on the two-Pauli channel, one or
/// two uses: `x` for `x <= 1/3`, `(1 - x)/2` above.
pub fn product_baseline_pe(x: f64) -> Result<f64> {
    check_unit_interval("x", x)?;
    Ok(if x <= 1.0 / 3.0 { x } else { 0.5 - 0.5 * x })
}

/// Repeated single-qubit inputs attaining [`product_baseline_pe`]: `sigma_3`
/// eigenstates for `x <= 1/3`, `sigma_1` eigenstates above.
pub fn product_baseline_states(x: f64) -> Result<SignalPair> {
    check_unit_interval("x", x)?;
    let r = |v: f64| Complex64::new(v, 0.0);
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = if x <= 1.0 / 3.0 {
        (vec![r(1.0), r(0.0)], vec![r(0.0), r(1.0)])
    } else {
        (vec![r(h), r(h)], vec![r(h), r(-h)])
    };
    SignalPair::pure(matrix::tensor_vec(&a, &a), matrix::tensor_vec(&b, &b))
}

/// `|0> = cos a Phi+ + sin a Psi+`, `|1> = -sin a Phi+ + cos a Psi+`.
pub fn ansatz_states(alpha: f64) -> SignalPair {
    let (s, c) = alpha.sin_cos();
    let psi0 = bell_to_computational(&BellCoefficients {
        a: Complex64::new(c, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(s, 0.0),
        d: Complex64::new(0.0, 0.0),
    });
    let psi1 = bell_to_computational(&BellCoefficients {
        a: Complex64::new(-s, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(c, 0.0),
        d: Complex64::new(0.0, 0.0),
    });
    SignalPair {
        state0: Signal::Pure(psi0),
        state1: Signal::Pure(psi1),
        priors: Priors::equal(),
    }
}

/// `cos a B_i + sin a B_j` versus `-sin a B_i + cos a B_j` for Bell states
/// `B_i != B_j`, in the order `(Phi+, Phi-, Psi+, Psi-)`.
pub fn bell_plane_pair(i: usize, j: usize, alpha: f64) -> SignalPair {
    assert!(i < 4 && j < 4 && i != j, "two distinct Bell indices");
    let (s, c) = alpha.sin_cos();
    let mut a = [Complex64::new(0.0, 0.0); 4];
    let mut b = a;
    a[i] = Complex64::new(c, 0.0);
    a[j] = Complex64::new(s, 0.0);
    b[i] = Complex64::new(-s, 0.0);
    b[j] = Complex64::new(c, 0.0);
    let v = |t: [Complex64; 4]| {
        bell_to_computational(&BellCoefficients {
            a: t[0],
            b: t[1],
            c: t[2],
            d: t[3],
        })
    };
    SignalPair {
        state0: Signal::Pure(v(a)),
        state1: Signal::Pure(v(b)),
        priors: Priors::equal(),
    }
}

/// `cos a0 Phi+ + sin a0 Psi+` versus `cos a1 Phi- + sin a1 Psi-`.
pub fn two_plane_pair(alpha0: f64, alpha1: f64) -> SignalPair {
    let (s0, c0) = alpha0.sin_cos();
    let (s1, c1) = alpha1.sin_cos();
    let z = Complex64::new(0.0, 0.0);
    let r = |v: f64| Complex64::new(v, 0.0);
    let v0 = bell_to_computational(&BellCoefficients {
        a: r(c0),
        b: z,
        c: r(s0),
        d: z,
    });
    let v1 = bell_to_computational(&BellCoefficients {
        a: z,
        b: r(c1),
        c: z,
        d: r(s1),
    });
    SignalPair {
        state0: Signal::Pure(v0),
        state1: Signal::Pure(v1),
        priors: Priors::equal(),
    }
}

/// `F` and `G` of the compact ansatz error `1/2 - (sqrt(F Z^2 + x^2) + |G Z|)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzCoefficients {
    pub f: f64,
    pub g: f64,
}

impl AnsatzCoefficients {
    pub fn new(x: f64) -> Self {
        Self {
            f: 0.25 * (1.0 - x) * (1.0 - 5.0 * x) * (1.0 - 2.0 * x + 5.0 * x * x),
            g: 0.5 * (1.0 - x) * (1.0 - 3.0 * x),
        }
    }
}

/// Ansatz error written in terms of `alpha`.
pub fn ansatz_pe_trig(alpha: f64, x: f64) -> f64 {
    let (s2, c2) = (2.0 * alpha).sin_cos();
    let q = 1.0 - 4.0 * x + 5.0 * x * x;
    let root = (0.25 * q * q * c2 * c2 + x * x * s2 * s2).sqrt();
    0.5 - 0.5 * (root + 0.5 * (1.0 - x) * ((1.0 - 3.0 * x) * c2).abs())
}

/// Ansatz error written in terms of `Z = cos 2 alpha`.
pub fn ansatz_pe_compact(z: f64, x: f64) -> f64 {
    let AnsatzCoefficients { f, g } = AnsatzCoefficients::new(x);
    // F Z^2 + x^2 is a sum of squares in the trig form; clamp rounding below zero.
    0.5 - 0.5 * ((f * z * z + x * x).max(0.0).sqrt() + (g * z).abs())
}

pub fn ansatz_pe(alpha: f64, x: f64) -> Result<f64> {
    check_unit_interval("x", x)?;
    let trig = ansatz_pe_trig(alpha, x);
    let compact = ansatz_pe_compact((2.0 * alpha).cos(), x);
    debug_assert!((trig - compact).abs() < 1e-12, "{trig} vs {compact}");
    Ok(trig)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalEntangled {
    pub pe: f64,
    pub z_squared: f64,
    /// The root with `Z = cos 2 alpha >= 0`, in `[0, pi/4]`.
    pub alpha: f64,
}

/// Stationary `Z^2` of the compact ansatz error.
pub fn optimal_z_squared(x: f64) -> f64 {
    let u = 1.0 - 3.0 * x;
    u * u / (4.0 * x * (5.0 * x - 1.0) * (1.0 - 2.0 * x + 5.0 * x * x))
}

/// Closed-form optimum of the ansatz family. Defined where the stationary
/// `Z^2 <= 1`, i.e. `x >= ansatz_threshold()`. For `x <= 1/3` product inputs are at
/// least as good; see [`best_two_pauli_pe`].
pub fn optimal_entangled(x: f64) -> Result<OptimalEntangled> {
    let threshold = ansatz_threshold();
    if !(threshold..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
            min: threshold,
            max: 1.0,
        });
    }
    let z_squared = optimal_z_squared(x);
    let pe = 0.5 - 2.0 * (x.powi(5) / ((5.0 * x - 1.0) * (1.0 - 2.0 * x + 5.0 * x * x))).sqrt();
    let alpha = 0.5 * z_squared.sqrt().min(1.0).acos();
    Ok(OptimalEntangled {
        pe,
        z_squared,
        alpha,
    })
}

/// Smallest `x` at which the stationary `Z^2` lies in `[0, 1]`.
pub fn ansatz_threshold() -> f64 {
    let s = 15.0 * 330f64.sqrt() - 73.0;
    let cbrt = s.cbrt();
    4.0 / 15.0 - (41.0 / 30.0) / cbrt + cbrt / 30.0
}

/// `G^2 x^2 / (F (F - G^2))`, which equals the stationary `Z^2`; the ansatz
/// extremum is admissible where this is at most 1.
pub fn threshold_boundary(x: f64) -> f64 {
    let AnsatzCoefficients { f, g } = AnsatzCoefficients::new(x);
    g * g * x * x / (f * (f - g * g))
}

/// Which encoding attains [`best_two_pauli_pe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    Product,
    Entangled,
}

/// Best known two-use error on the two-Pauli channel. Ties go to product inputs.
pub fn best_two_pauli_pe(x: f64) -> Result<(f64, Encoding)> {
    let product = product_baseline_pe(x)?;
    if x <= 1.0 / 3.0 {
        return Ok((product, Encoding::Product));
    }
    let entangled = optimal_entangled(x)?.pe;
    if entangled < product {
        Ok((entangled, Encoding::Entangled))
    } else {
        Ok((product, Encoding::Product))
    }
}

/// Frobenius norm of the commutator of the two outputs of `channel` used twice.
pub fn output_commutator_norm(channel: &KrausChannel, pair: &SignalPair) -> Result<f64> {
    let (r0, r1) = pair.through_two_uses(channel)?;
    commutator_norm(r1.as_matrix(), r0.as_matrix())
}

/// [`output_commutator_norm`] for two uses of `two_pauli(x)`.
pub fn commutation_probe(pair: &SignalPair, x: f64) -> Result<f64> {
    output_commutator_norm(&two_pauli(x)?, pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{self, Stream};
    use rand::Rng;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn basis(i: usize, d: usize) -> Vec<Complex64> {
        let mut v = vec![r(0.0); d];
        v[i] = r(1.0);
        v
    }

    #[test]
    fn priors_validation() {
        assert!(Priors::new(0.3, 0.7).is_ok());
        assert!(Priors::new(0.3, 0.6).is_err());
        assert!(Priors::new(-0.1, 1.1).is_err());
    }

    #[test]
    fn povm_error_trivial_cases() {
        let rho = DensityMatrix::from_pure(&basis(0, 2)).unwrap();
        let any = Povm::new(vec![
            ComplexMatrix::from_diagonal(&[0.3, 0.6]),
            ComplexMatrix::from_diagonal(&[0.7, 0.4]),
        ])
        .unwrap();
        assert!((povm_error(&any, &rho, &rho, Priors::equal()).unwrap() - 0.5).abs() < 1e-15);

        let r1 = DensityMatrix::from_pure(&basis(1, 2)).unwrap();
        let proj = Povm::projective(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(povm_error(&proj, &rho, &r1, Priors::equal()).unwrap(), 0.0);
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![ComplexMatrix::from_diagonal(&[1.0, 0.5])]).is_err());
        assert!(Povm::new(vec![
            ComplexMatrix::from_diagonal(&[1.5, 1.0]),
            ComplexMatrix::from_diagonal(&[-0.5, 0.0]),
        ])
        .is_err());
        assert!(Povm::new(vec![]).is_err());
    }

    #[test]
    fn helstrom_trivial_cases() {
        let mut rng = random::stream(1, Stream::Test, 0);
        let rho = random::mixed_state(&mut rng, 4);
        assert!((helstrom_error(&rho, &rho, Priors::equal()).unwrap().pe - 0.5).abs() < 1e-15);
        let psi = random::pure_state(&mut rng, 2);
        let perp = vec![-psi[1].conj(), psi[0].conj()];
        let res = helstrom_error(
            &DensityMatrix::from_pure(&psi).unwrap(),
            &DensityMatrix::from_pure(&perp).unwrap(),
            Priors::equal(),
        )
        .unwrap();
        assert!(res.pe < 1e-15);
        assert!(matches!(
            helstrom_error(&rho, &DensityMatrix::maximally_mixed(2), Priors::equal()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn random_projective<R: Rng>(rng: &mut R, d: usize) -> Povm {
        let g = random::gaussian_matrix(rng, d, d);
        let u = hermitian_eig(&(&g + &g.adjoint())).unwrap().eigenvectors;
        Povm::projective(&u).unwrap()
    }

    fn random_three_outcome<R: Rng>(rng: &mut R, d: usize) -> Povm {
        // E_k = S^{-1/2} G_k G_k^H S^{-1/2} with S = sum of G_k G_k^H.
        let gs: Vec<ComplexMatrix> = (0..3)
            .map(|_| {
                let g = random::gaussian_matrix(rng, d, d);
                &g * &g.adjoint()
            })
            .collect();
        let s = gs.iter().skip(1).fold(gs[0].clone(), |acc, g| &acc + g);
        let inv_sqrt = hermitian_eig(&s).unwrap().weighted_sum(|l| 1.0 / l.sqrt());
        let elements = gs
            .iter()
            .map(|g| (&(&inv_sqrt * g) * &inv_sqrt).hermitian_part())
            .collect();
        Povm::new(elements).unwrap()
    }

    #[test]
    fn helstrom_beats_every_tested_povm() {
        let mut rng = random::stream(2, Stream::Test, 0);
        for i in 0..100 {
            let d = if i % 2 == 0 { 2 } else { 4 };
            let r0 = random::mixed_state(&mut rng, d);
            let r1 = DensityMatrix::from_pure(&random::pure_state(&mut rng, d)).unwrap();
            let p0: f64 = rng.random::<f64>();
            let priors = Priors::new(p0, 1.0 - p0).unwrap();
            let res = helstrom_error(&r0, &r1, priors).unwrap();
            let own = povm_error(&res.measurement, &r0, &r1, priors).unwrap();
            assert!((own - res.pe).abs() < 1e-12, "{own} vs {}", res.pe);
            for povm in [
                random_projective(&mut rng, d),
                random_three_outcome(&mut rng, d),
            ] {
                assert!(res.pe <= povm_error(&povm, &r0, &r1, priors).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn helstrom_measurement_is_a_povm() {
        let mut rng = random::stream(3, Stream::Test, 0);
        let r0 = random::mixed_state(&mut rng, 4);
        let r1 = random::mixed_state(&mut rng, 4);
        let res = helstrom_error(&r0, &r1, Priors::equal()).unwrap();
        Povm::new(res.measurement.elements().to_vec()).unwrap();
        assert!(res.pe <= 0.5 + 1e-12);
    }

    #[test]
    fn extreme_priors() {
        let mut rng = random::stream(4, Stream::Test, 0);
        let r0 = random::mixed_state(&mut rng, 2);
        let r1 = random::mixed_state(&mut rng, 2);
        let res = helstrom_error(&r0, &r1, Priors::new(1.0, 0.0).unwrap()).unwrap();
        assert!(res.pe.abs() < 1e-15);
    }

    #[test]
    fn bell_vectors() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let v = bell_to_computational(&BellCoefficients::real(1.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(v, vec![r(h), r(0.0), r(0.0), r(h)]);
        let v = bell_to_computational(&BellCoefficients::real(0.0, 0.0, 0.0, 1.0).unwrap());
        assert_eq!(v, vec![r(0.0), r(h), r(-h), r(0.0)]);

        let mut rng = random::stream(5, Stream::Test, 0);
        for _ in 0..20 {
            let c = random::pure_state(&mut rng, 4);
            let coeffs = BellCoefficients::new(c[0], c[1], c[2], c[3]).unwrap();
            let back = computational_to_bell(&bell_to_computational(&coeffs)).unwrap();
            for (x, y) in back.as_array().iter().zip(coeffs.as_array()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_output_endpoints() {
        let phi = BellCoefficients::real(1.0, 0.0, 0.0, 0.0).unwrap();
        let out = two_pauli_output_bell(&phi, 1.0).unwrap();
        assert!(
            out.as_matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0]))
                < 1e-15
        );
        let out = two_pauli_output_bell(&phi, 0.0).unwrap();
        assert!(
            out.as_matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0]))
                < 1e-15
        );
        assert!(two_pauli_output_bell(&phi, -0.2).is_err());
    }

    #[test]
    fn bell_output_matches_brute_force() {
        let mut rng = random::stream(6, Stream::Test, 0);
        for i in 0..200 {
            let x = if i == 0 { 0.7 } else { rng.random::<f64>() };
            let c = random::pure_state(&mut rng, 4);
            let real: Vec<f64> = c.iter().map(|z| z.re).collect();
            let n = real.iter().map(|v| v * v).sum::<f64>().sqrt();
            let coeffs =
                BellCoefficients::real(real[0] / n, real[1] / n, real[2] / n, real[3] / n).unwrap();
            let closed = two_pauli_output_bell(&coeffs, x).unwrap();
            let psi = bell_to_computational(&coeffs);
            let brute = two_pauli(x)
                .unwrap()
                .apply_two(&DensityMatrix::from_pure(&psi).unwrap())
                .unwrap();
            let brute = to_bell_frame(brute.as_matrix());
            assert!(closed.as_matrix().max_abs_diff(&brute) < 1e-10);

            // Complex amplitudes take the brute-force route.
            let complex = BellCoefficients::new(c[0], c[1], c[2], c[3]).unwrap();
            let out = two_pauli_output_bell(&complex, x).unwrap();
            assert!((out.as_matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_baseline_values() {
        assert!((product_baseline_pe(0.8).unwrap() - 0.1).abs() < 1e-15);
        assert!((product_baseline_pe(0.5).unwrap() - 0.25).abs() < 1e-15);
        let third = 1.0 / 3.0;
        assert!((product_baseline_pe(third).unwrap() - third).abs() < 1e-15);
        assert!((0.5 - 0.5 * third - third).abs() < 1e-15);
        assert!(product_baseline_pe(1.01).is_err());
    }

    #[test]
    fn product_baseline_matches_helstrom() {
        for x in [0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.95] {
            let pair = product_baseline_states(x).unwrap();
            let (r0, r1) = pair.through_two_uses(&two_pauli(x).unwrap()).unwrap();
            let pe = helstrom_error(&r0, &r1, Priors::equal()).unwrap().pe;
            assert!((pe - product_baseline_pe(x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn ansatz_states_are_orthonormal() {
        for alpha in [0.0, 0.3, core::f64::consts::FRAC_PI_4, 2.0, -1.3] {
            let pair = ansatz_states(alpha);
            assert!(pair.overlap().unwrap() < 1e-15);
        }
        let pair = ansatz_states(0.0);
        let phi = bell_to_computational(&BellCoefficients::real(1.0, 0.0, 0.0, 0.0).unwrap());
        let psi = bell_to_computational(&BellCoefficients::real(0.0, 0.0, 1.0, 0.0).unwrap());
        assert_eq!(pair.state0.as_pure().unwrap(), &phi[..]);
        assert_eq!(pair.state1.as_pure().unwrap(), &psi[..]);
    }

    #[test]
    fn ansatz_pe_examples() {
        assert!(ansatz_pe(0.0, 1.0).unwrap().abs() < 1e-15);
        let quarter = core::f64::consts::FRAC_PI_4;
        assert!((ansatz_pe(quarter, 0.5).unwrap() - 0.25).abs() < 1e-15);
        let opt = optimal_entangled(0.5).unwrap();
        assert!((ansatz_pe(opt.alpha, 0.5).unwrap() - 0.241801).abs() < 5e-7);
    }

    #[test]
    fn ansatz_forms_agree() {
        for i in 0..100 {
            for j in 0..100 {
                let alpha = core::f64::consts::PI * i as f64 / 99.0;
                let x = j as f64 / 99.0;
                let a = ansatz_pe_trig(alpha, x);
                let b = ansatz_pe_compact((2.0 * alpha).cos(), x);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ansatz_quarter_turn_symmetry() {
        let mut rng = random::stream(7, Stream::Test, 0);
        for _ in 0..200 {
            let alpha = rng.random::<f64>() * 6.3;
            let x: f64 = rng.random();
            let a = ansatz_pe(alpha, x).unwrap();
            let b = ansatz_pe(alpha + core::f64::consts::FRAC_PI_2, x).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_entangled_values() {
        let o = optimal_entangled(0.5).unwrap();
        assert!((o.pe - 0.241801).abs() < 5e-7);
        assert!((o.z_squared - 0.25 / 3.75).abs() < 1e-15);
        assert!((optimal_entangled(0.9).unwrap().pe - 0.044319).abs() < 5e-7);
        let third = optimal_entangled(1.0 / 3.0).unwrap();
        assert!((third.pe - 1.0 / 3.0).abs() < 1e-12);
        assert!(third.z_squared.abs() < 1e-15);
        assert!(optimal_entangled(0.2).is_err());
        assert!(optimal_entangled(1.1).is_err());
        assert!(optimal_entangled(1.0).unwrap().pe.abs() < 1e-15);
    }

    #[test]
    fn optimal_entangled_matches_ansatz_and_grid() {
        for i in 0..=40 {
            let x = 0.23 + 0.77 * i as f64 / 40.0;
            let opt = optimal_entangled(x).unwrap();
            assert!((ansatz_pe(opt.alpha, x).unwrap() - opt.pe).abs() < 1e-12);
            // Dense grid in Z then golden refinement.
            let mut best = (0.0, f64::INFINITY);
            for k in 0..=2000 {
                let z = k as f64 / 2000.0;
                let v = ansatz_pe_compact(z, x);
                if v < best.1 {
                    best = (z, v);
                }
            }
            let (mut lo, mut hi) = ((best.0 - 1e-3).max(0.0), (best.0 + 1e-3).min(1.0));
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..100 {
                let m1 = hi - phi * (hi - lo);
                let m2 = lo + phi * (hi - lo);
                if ansatz_pe_compact(m1, x) < ansatz_pe_compact(m2, x) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let numeric = ansatz_pe_compact(0.5 * (lo + hi), x).min(best.1);
            assert!(
                (numeric - opt.pe).abs() < 1e-8,
                "x={x}: {numeric} vs {}",
                opt.pe
            );
        }
    }

    #[test]
    fn threshold() {
        let t = ansatz_threshold();
        assert!((t - 0.227539).abs() < 1e-6);
        assert!((threshold_boundary(t) - 1.0).abs() < 1e-9);
        assert!(optimal_z_squared(t) <= 1.0 + 1e-9);
        assert!(optimal_entangled(t).is_ok());
    }

    #[test]
    fn boundary_equals_stationary_z_squared() {
        for i in 0..50 {
            let x = 0.21 + 0.78 * i as f64 / 49.0;
            if (x - 1.0 / 3.0).abs() < 1e-9 {
                continue;
            }
            let a = threshold_boundary(x);
            let b = optimal_z_squared(x);
            assert!((a - b).abs() < 1e-9 * b.max(1.0), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn best_encoding_breaks_ties_toward_product() {
        assert_eq!(best_two_pauli_pe(1.0 / 3.0).unwrap().1, Encoding::Product);
        assert_eq!(best_two_pauli_pe(0.2).unwrap(), (0.2, Encoding::Product));
        assert_eq!(best_two_pauli_pe(0.5).unwrap().1, Encoding::Entangled);
    }

    #[test]
    fn counterexample_does_not_commute() {
        let u0 = [-0.459506, -0.870791, 0.127295, 0.119889];
        let u1 = [-0.578111, 0.163069, -0.770549, -0.213192];
        let normalize = |u: [f64; 4]| {
            let n = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            BellCoefficients::real(u[0] / n, u[1] / n, u[2] / n, u[3] / n).unwrap()
        };
        let pair = SignalPair::pure(
            bell_to_computational(&normalize(u0)),
            bell_to_computational(&normalize(u1)),
        )
        .unwrap();
        assert!(pair.overlap().unwrap() < 1e-5);
        assert!(commutation_probe(&pair, 0.5).unwrap() > 1e-6);
    }

    #[test]
    fn bell_rotations_commute() {
        let mut rng = random::stream(8, Stream::Test, 0);
        for _ in 0..50 {
            let i = rng.random_range(0..4usize);
            let j = (i + rng.random_range(1..4usize)) % 4;
            let alpha = rng.random::<f64>() * 6.3;
            let x: f64 = rng.random();
            let pair = bell_plane_pair(i, j, alpha);
            assert!(pair.overlap().unwrap() < 1e-15);
            assert!(commutation_probe(&pair, x).unwrap() < 1e-10);
        }
    }

    #[test]
    fn two_plane_family_commutes_only_at_special_points() {
        let pair = two_plane_pair(0.4, 1.1);
        assert!(commutation_probe(&pair, 1.0 / 3.0).unwrap() < 1e-10);
        assert!(commutation_probe(&pair, 0.0).unwrap() < 1e-10);
        assert!(commutation_probe(&pair, 1.0).unwrap() < 1e-10);
        assert!(commutation_probe(&pair, 0.5).unwrap() > 1e-8);
    }
}

//! Kraus-operator channels and the qubit channel families used throughout.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{self, hermitian_eig, tensor, ComplexMatrix};
use crate::{Error, Result};

/// Tolerance for trace, Hermiticity and positivity of a state.
pub const STATE_TOL: f64 = 1e-9;

/// Largest accepted entry of `sum A_i^H A_i - I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Tolerance on the norm of a pure state vector.
pub const PURE_NORM_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.require_square()?;
        let deviation = m.hermiticity_deviation();
        if !(deviation <= STATE_TOL) {
            return Err(Error::InvalidState {
                reason: "not Hermitian",
                value: deviation,
            });
        }
        let m = m.hermitian_part();
        let trace = m.trace().re;
        if !((trace - 1.0).abs() <= STATE_TOL) {
            return Err(Error::InvalidState {
                reason: "trace differs from 1",
                value: trace,
            });
        }
        let min = hermitian_eig(&m)?.min();
        if min < -STATE_TOL {
            return Err(Error::InvalidState {
                reason: "negative eigenvalue",
                value: min,
            });
        }
        Ok(Self(m))
    }

    /// `|psi><psi|` for a unit vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let n = matrix::norm(psi);
        if !((n - 1.0).abs() <= PURE_NORM_TOL) {
            return Err(Error::InvalidState {
                reason: "pure state is not normalized",
                value: n,
            });
        }
        Ok(Self(ComplexMatrix::projector(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Wraps the output of a trace-preserving completely positive map.
    pub(crate) fn from_channel_output(m: ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(tensor(&self.0, &other.0))
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Completeness check result for a set of Kraus operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation {
    pub residual: f64,
    pub passed: bool,
}

/// A channel `rho -> sum_i A_i rho A_i^H` on a `dim`-dimensional system.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    name: String,
    operators: Vec<ComplexMatrix>,
    dim: usize,
}

impl KrausChannel {
    /// Builds a channel and rejects it unless the completeness relation holds.
    pub fn new(name: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let channel = Self::unchecked(name, operators)?;
        let v = channel.validate();
        if !v.passed {
            return Err(Error::Completeness {
                residual: v.residual,
            });
        }
        Ok(channel)
    }

    /// Builds a channel checking only shapes. Use [`validate`](Self::validate) to
    /// inspect completeness.
    pub fn unchecked(name: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyChannel)?;
        let dim = first.require_square()?;
        for op in &operators {
            let d = op.require_square()?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            operators,
            dim,
        })
    }

    /// Max-abs residual of `sum_i A_i^H A_i - I`; passes at [`COMPLETENESS_TOL`].
    pub fn validate(&self) -> Validation {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            sum = &sum + &(&a.adjoint() * a);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(self.dim));
        Validation {
            residual,
            passed: residual <= COMPLETENESS_TOL,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho.dim())?;
        Ok(DensityMatrix::from_channel_output(
            self.apply_operator(rho.as_matrix()),
        ))
    }

    /// The map extended linearly to arbitrary `dim x dim` operators.
    pub fn apply_operator(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            out = &out + &a.sandwich(m);
        }
        out
    }

    /// The conjugate map `X -> sum_i A_i^H X A_i`.
    pub fn apply_adjoint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            out = &out + &a.adjoint_sandwich(m);
        }
        out
    }

    /// The two-use channel with Kraus operators `A_i (x) A_j`, ordered with `i`
    /// major.
    pub fn tensor_square(&self) -> KrausChannel {
        let operators = self
            .operators
            .iter()
            .flat_map(|a| self.operators.iter().map(move |b| tensor(a, b)))
            .collect();
        KrausChannel {
            name: format!("{}^2", self.name),
            operators,
            dim: self.dim * self.dim,
        }
    }

    /// Two independent uses of the channel acting on a joint state.
    pub fn apply_two(&self, r: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim_two(r.dim())?;
        self.tensor_square().apply(r)
    }

    fn check_dim_two(&self, found: usize) -> Result<()> {
        let d2 = self.dim * self.dim;
        if found != d2 {
            return Err(Error::DimensionMismatch {
                expected: d2,
                found,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParameterOutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

fn builtin(name: String, operators: Vec<ComplexMatrix>) -> KrausChannel {
    KrausChannel::new(name, operators).expect("built-in channels satisfy completeness")
}

pub fn identity(dim: usize) -> KrausChannel {
    builtin(
        format!("identity({dim})"),
        vec![ComplexMatrix::identity(dim)],
    )
}

/// Identity with probability `x`, otherwise `sigma_1` or `sigma_2` with equal
/// probability.
pub fn two_pauli(x: f64) -> Result<KrausChannel> {
    check_unit_interval("x", x)?;
    let flip = (0.5 * (1.0 - x)).sqrt();
    let ops = vec![
        ComplexMatrix::identity(2).scale_real(x.sqrt()),
        matrix::pauli_x().scale_real(flip),
        matrix::pauli_y().scale(Complex64::new(0.0, -flip)),
    ];
    Ok(builtin(format!("two_pauli({x})"), ops))
}

/// Photon-loss channel. `|up> = (1, 0)` is the one-photon state and decays into the
/// vacuum `|down> = (0, 1)`, which is a fixed point.
pub fn amplitude_damping(x: f64) -> Result<KrausChannel> {
    check_unit_interval("x", x)?;
    let keep = ComplexMatrix::from_real(2, &[x.sqrt(), 0.0, 0.0, 1.0]);
    let decay = ComplexMatrix::from_real(2, &[0.0, 0.0, (1.0 - x).sqrt(), 0.0]);
    Ok(builtin(
        format!("amplitude_damping({x})"),
        vec![keep, decay],
    ))
}

/// `{sqrt(1 - 3p/4) I, sqrt(p/4) sigma_k}`: shrinks the Bloch vector by `1 - p`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let w = (p / 4.0).sqrt();
    let ops = vec![
        ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt()),
        matrix::pauli_x().scale_real(w),
        matrix::pauli_y().scale_real(w),
        matrix::pauli_z().scale_real(w),
    ];
    Ok(builtin(format!("depolarizing({p})"), ops))
}

/// `{sqrt(x) I, sqrt(1 - x) sigma_3}`: sigma_3 eigenstates pass unharmed.
pub fn dephasing(x: f64) -> Result<KrausChannel> {
    check_unit_interval("x", x)?;
    let ops = vec![
        ComplexMatrix::identity(2).scale_real(x.sqrt()),
        matrix::pauli_z().scale_real((1.0 - x).sqrt()),
    ];
    Ok(builtin(format!("dephasing({x})"), ops))
}

/// Real vector `a` with `|a| <= 1`, standing for the qubit state `(I + a.sigma)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl BlochVector {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let len2 = a1 * a1 + a2 * a2 + a3 * a3;
        if !(len2 <= 1.0 + 1e-12) {
            return Err(Error::InvalidState {
                reason: "Bloch vector longer than 1",
                value: len2.sqrt(),
            });
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn length(&self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }

    pub fn negate(&self) -> Self {
        Self {
            a1: -self.a1,
            a2: -self.a2,
            a3: -self.a3,
        }
    }

    /// The matrix `(I + a.sigma)/2`.
    pub fn density(&self) -> DensityMatrix {
        let h = 0.5;
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(h * (1.0 + self.a3), 0.0),
                Complex64::new(h * self.a1, -h * self.a2),
                Complex64::new(h * self.a1, h * self.a2),
                Complex64::new(h * (1.0 - self.a3), 0.0),
            ],
        )
        .expect("2x2");
        DensityMatrix(m)
    }

    /// Reads `a_k = tr(rho sigma_k)` off a qubit density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.dim(),
            });
        }
        let m = rho.as_matrix();
        Ok(Self {
            a1: 2.0 * m[(1, 0)].re,
            a2: 2.0 * m[(1, 0)].im,
            a3: (m[(0, 0)] - m[(1, 1)]).re,
        })
    }
}

/// Closed-form image of a Bloch vector under the two-Pauli channel:
/// `(a1 x, a2 x, a3 (2x - 1))`.
pub fn bloch_action_two_pauli(a: &BlochVector, x: f64) -> Result<BlochVector> {
    check_unit_interval("x", x)?;
    Ok(BlochVector {
        a1: a.a1 * x,
        a2: a.a2 * x,
        a3: a.a3 * (2.0 * x - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::commutator_norm;
    use crate::random::{self, Stream};
    use rand::Rng;

    fn up() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.0, 0.0])).unwrap()
    }

    fn down() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.0, 1.0])).unwrap()
    }

    fn builtins(x: f64) -> Vec<KrausChannel> {
        vec![
            two_pauli(x).unwrap(),
            amplitude_damping(x).unwrap(),
            depolarizing(x).unwrap(),
            dephasing(x).unwrap(),
        ]
    }

    #[test]
    fn builtin_completeness() {
        assert!(two_pauli(0.5).unwrap().validate().residual < 1e-12);
        for x in [0.0, 0.3, 0.77, 1.0] {
            let v = amplitude_damping(x).unwrap().validate();
            assert!(v.passed && v.residual < 1e-15, "{v:?}");
        }
    }

    #[test]
    fn scaled_identity_fails_completeness() {
        let ch = KrausChannel::unchecked("weak", vec![ComplexMatrix::identity(2).scale_real(0.9)])
            .unwrap();
        let v = ch.validate();
        assert!(!v.passed);
        assert!((v.residual - 0.19).abs() < 1e-12);
        assert!(matches!(
            KrausChannel::new("weak", vec![ComplexMatrix::identity(2).scale_real(0.9)]),
            Err(Error::Completeness { .. })
        ));
    }

    #[test]
    fn unchecked_rejects_bad_shapes() {
        assert_eq!(
            KrausChannel::unchecked("empty", vec![]),
            Err(Error::EmptyChannel)
        );
        assert!(matches!(
            KrausChannel::unchecked(
                "mixed",
                vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parameters_outside_unit_interval_are_errors() {
        for bad in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                two_pauli(bad),
                Err(Error::ParameterOutOfRange { .. })
            ));
            assert!(matches!(
                amplitude_damping(bad),
                Err(Error::ParameterOutOfRange { .. })
            ));
            assert!(matches!(
                depolarizing(bad),
                Err(Error::ParameterOutOfRange { .. })
            ));
            assert!(matches!(
                dephasing(bad),
                Err(Error::ParameterOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn two_pauli_endpoints() {
        let mut rng = random::stream(5, Stream::Test, 0);
        let rho = random::mixed_state(&mut rng, 2);
        let out = two_pauli(1.0).unwrap().apply(&rho).unwrap();
        assert!(out.as_matrix().max_abs_diff(rho.as_matrix()) < 1e-15);

        let flipped = two_pauli(0.0).unwrap().apply(&up()).unwrap();
        assert!(flipped.as_matrix().max_abs_diff(down().as_matrix()) < 1e-15);
    }

    #[test]
    fn amplitude_damping_action() {
        let x = 0.37;
        let ch = amplitude_damping(x).unwrap();
        let vac = ch.apply(&down()).unwrap();
        assert!(vac.as_matrix().max_abs_diff(down().as_matrix()) < 1e-15);
        // One photon survives with probability x.
        let out = ch.apply(&up()).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[x, 1.0 - x]);
        assert!(out.as_matrix().max_abs_diff(&expected) < 1e-15);

        let dead = amplitude_damping(0.0).unwrap();
        for rho in [up(), down(), DensityMatrix::maximally_mixed(2)] {
            let out = dead.apply(&rho).unwrap();
            assert!(out.as_matrix().max_abs_diff(down().as_matrix()) < 1e-15);
        }
        let alive = amplitude_damping(1.0).unwrap();
        let out = alive.apply(&up()).unwrap();
        assert!(out.as_matrix().max_abs_diff(up().as_matrix()) < 1e-15);
    }

    fn axis_states() -> Vec<BlochVector> {
        let mut v = Vec::new();
        for k in 0..3 {
            let mut a = [0.0; 3];
            a[k] = 1.0;
            let b = BlochVector::new(a[0], a[1], a[2]).unwrap();
            v.push(b);
            v.push(b.negate());
        }
        v
    }

    #[test]
    fn depolarizing_shrinks_isotropically() {
        assert!(
            depolarizing(0.0)
                .unwrap()
                .apply(&up())
                .unwrap()
                .as_matrix()
                .max_abs_diff(up().as_matrix())
                < 1e-15
        );
        let p = 0.35;
        let ch = depolarizing(p).unwrap();
        for a in axis_states() {
            let b = BlochVector::from_density(&ch.apply(&a.density()).unwrap()).unwrap();
            assert!((b.a1 - (1.0 - p) * a.a1).abs() < 1e-14);
            assert!((b.a2 - (1.0 - p) * a.a2).abs() < 1e-14);
            assert!((b.a3 - (1.0 - p) * a.a3).abs() < 1e-14);
        }
    }

    #[test]
    fn dephasing_keeps_computational_states() {
        for x in [0.0, 0.2, 0.5, 0.9] {
            let ch = dephasing(x).unwrap();
            assert!(
                ch.apply(&up())
                    .unwrap()
                    .as_matrix()
                    .max_abs_diff(up().as_matrix())
                    < 1e-15
            );
            assert!(
                ch.apply(&down())
                    .unwrap()
                    .as_matrix()
                    .max_abs_diff(down().as_matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn bloch_action_examples() {
        let b = bloch_action_two_pauli(&BlochVector::new(1.0, 0.0, 0.0).unwrap(), 0.5).unwrap();
        assert_eq!(
            b,
            BlochVector {
                a1: 0.5,
                a2: 0.0,
                a3: 0.0
            }
        );
        let b = bloch_action_two_pauli(&BlochVector::new(0.0, 0.0, 1.0).unwrap(), 0.5).unwrap();
        assert_eq!(
            b,
            BlochVector {
                a1: 0.0,
                a2: 0.0,
                a3: 0.0
            }
        );
        let a = BlochVector::new(0.3, -0.4, 0.5).unwrap();
        assert_eq!(bloch_action_two_pauli(&a, 1.0).unwrap(), a);
        assert!(bloch_action_two_pauli(&a, 1.2).is_err());
    }

    fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
        let v = random::pure_state(rng, 2);
        let rho = DensityMatrix::from_pure(&v).unwrap();
        let b = BlochVector::from_density(&rho).unwrap();
        let r: f64 = rng.random();
        BlochVector::new(b.a1 * r, b.a2 * r, b.a3 * r).unwrap()
    }

    #[test]
    fn bloch_action_matches_kraus_application() {
        let mut rng = random::stream(11, Stream::Test, 0);
        for _ in 0..100 {
            let a = random_bloch(&mut rng);
            let x: f64 = rng.random();
            let ch = two_pauli(x).unwrap();
            let expected = bloch_action_two_pauli(&a, x).unwrap();
            for (input, target) in [(a, expected), (a.negate(), expected.negate())] {
                let out = ch.apply(&input.density()).unwrap();
                assert!(out.as_matrix().max_abs_diff(target.density().as_matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn single_use_output_eigenvalues() {
        let mut rng = random::stream(12, Stream::Test, 0);
        for _ in 0..100 {
            let psi = random::pure_state(&mut rng, 2);
            let rho = DensityMatrix::from_pure(&psi).unwrap();
            let a = BlochVector::from_density(&rho).unwrap();
            let x: f64 = rng.random();
            let out = two_pauli(x).unwrap().apply(&rho).unwrap();
            let r = ((a.a1 * a.a1 + a.a2 * a.a2) * x * x
                + a.a3 * a.a3 * (2.0 * x - 1.0) * (2.0 * x - 1.0))
                .sqrt();
            let s = hermitian_eig(out.as_matrix()).unwrap();
            assert!((s.eigenvalues[0] - (0.5 + 0.5 * r)).abs() < 1e-10);
            assert!((s.eigenvalues[1] - (0.5 - 0.5 * r)).abs() < 1e-10);
        }
    }

    #[test]
    fn commuting_inputs_give_commuting_outputs() {
        let mut rng = random::stream(13, Stream::Test, 0);
        for _ in 0..100 {
            let a = random_bloch(&mut rng);
            let x: f64 = rng.random();
            let ch = two_pauli(x).unwrap();
            let plus = ch.apply(&a.density()).unwrap();
            let minus = ch.apply(&a.negate().density()).unwrap();
            assert!(commutator_norm(plus.as_matrix(), minus.as_matrix()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn outputs_are_valid_states() {
        let mut rng = random::stream(14, Stream::Test, 0);
        for i in 0..100 {
            let x: f64 = rng.random();
            let rho = if i % 2 == 0 {
                random::mixed_state(&mut rng, 2)
            } else {
                DensityMatrix::from_pure(&random::pure_state(&mut rng, 2)).unwrap()
            };
            let r = random::mixed_state(&mut rng, 4);
            for ch in builtins(x) {
                for out in [ch.apply(&rho).unwrap(), ch.apply_two(&r).unwrap()] {
                    assert!((out.as_matrix().trace().re - 1.0).abs() < 1e-10);
                    assert!(hermitian_eig(out.as_matrix()).unwrap().min() >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn product_inputs_factorize() {
        let mut rng = random::stream(15, Stream::Test, 0);
        for _ in 0..50 {
            let x: f64 = rng.random();
            let a = random::mixed_state(&mut rng, 2);
            let b = random::mixed_state(&mut rng, 2);
            for ch in builtins(x) {
                let joint = ch.apply_two(&a.tensor(&b)).unwrap();
                let separate = ch.apply(&a).unwrap().tensor(&ch.apply(&b).unwrap());
                assert!(joint.as_matrix().max_abs_diff(separate.as_matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn apply_two_identity_and_trace() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = [
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
        ];
        let r = DensityMatrix::from_pure(&phi_plus).unwrap();
        let out = two_pauli(1.0).unwrap().apply_two(&r).unwrap();
        assert!(out.as_matrix().max_abs_diff(r.as_matrix()) < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(2).tensor(&DensityMatrix::maximally_mixed(2));
        let out = two_pauli(0.3).unwrap().apply_two(&mixed).unwrap();
        assert!((out.as_matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ch = two_pauli(0.5).unwrap();
        assert!(matches!(
            ch.apply(&DensityMatrix::maximally_mixed(4)),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 4
            })
        ));
        assert!(matches!(
            ch.apply_two(&DensityMatrix::maximally_mixed(2)),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 2
            })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.7, 0.7])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.1, -0.1])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real(2, &[0.5, 0.2, 0.0, 0.5])).is_err());
        assert!(
            DensityMatrix::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)])
                .is_err()
        );
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn adjoint_map_is_dual() {
        let mut rng = random::stream(16, Stream::Test, 0);
        let ch = amplitude_damping(0.4).unwrap().tensor_square();
        let rho = random::mixed_state(&mut rng, 4);
        let g = random::gaussian_matrix(&mut rng, 4, 4);
        let h = &g + &g.adjoint();
        let lhs = (&h * ch.apply(&rho).unwrap().as_matrix()).trace();
        let rhs = (&ch.apply_adjoint(&h) * rho.as_matrix()).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

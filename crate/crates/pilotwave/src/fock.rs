//! Truncated Fock-space checks of the operator-level claims: the squeezing
//! operator, its similarity action on the ladder pair, and squeezed number /
//! displaced-squeezed states, all as explicit matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mode::BogoliubovParams;

/// Truncated Fock space with explicit ladder matrices.
pub struct FockSpace {
    dim: usize,
    b: DMatrix<C64>,
    bdag: DMatrix<C64>,
}

/// Normalized state in a truncated Fock space. `norm_defect` records how far
/// the raw construction was from unit norm before renormalization (the
/// truncation tail).
pub struct StateVector {
    amplitudes: DVector<C64>,
    norm_defect: f64,
}

impl StateVector {
    fn from_raw(raw: DVector<C64>) -> Self {
        let norm = raw.norm();
        Self {
            amplitudes: raw / C64::new(norm, 0.0),
            norm_defect: (norm - 1.0).abs(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes[n]
    }

    pub fn norm_defect(&self) -> f64 {
        self.norm_defect
    }
}

impl FockSpace {
    /// Ladder matrices for `dim` retained Fock states: b maps |n> to
    /// sqrt(n) |n-1>, bdag is its conjugate transpose.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: format!("truncation dimension must be >= 2, got {dim}"),
            });
        }
        let mut b = DMatrix::<C64>::zeros(dim, dim);
        for i in 0..dim - 1 {
            b[(i, i + 1)] = C64::new(((i + 1) as f64).sqrt(), 0.0);
        }
        let bdag = b.adjoint();
        Ok(Self { dim, b, bdag })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn annihilation(&self) -> &DMatrix<C64> {
        &self.b
    }

    pub fn creation(&self) -> &DMatrix<C64> {
        &self.bdag
    }

    fn require_dim(&self, required: usize) -> Result<()> {
        if self.dim < required {
            Err(Error::TruncationBudget {
                required,
                got: self.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Dimension needed to hold a squeeze of strength sigma.
    pub fn required_dim_for_squeeze(sigma: f64) -> usize {
        (16.0 * (2.0 * sigma).exp()).ceil() as usize
    }

    /// The squeezing unitary S for `params`.
    ///
    /// S = exp(i theta_u b'b) exp[(sigma/2) e^{i phi} b'^2 - (sigma/2) e^{-i phi} b^2]
    /// with the two-photon phase phi fixed by the requirement
    /// S' b S = u b + conj(v) b'; that forces phi = -(theta_u + theta_v).
    /// Reading phi = theta_v - theta_u instead produces u b + v b' and fails
    /// the residual check whenever v is complex.
    pub fn squeeze_matrix(&self, params: &BogoliubovParams) -> Result<DMatrix<C64>> {
        self.require_dim(Self::required_dim_for_squeeze(params.sigma()))?;
        let phi = -(params.theta_u() + params.theta_v());
        let half = C64::from_polar(0.5 * params.sigma(), phi);
        let generator = {
            let b2 = &self.b * &self.b;
            let bdag2 = &self.bdag * &self.bdag;
            bdag2 * half - b2 * half.conj()
        };
        let two_photon = expm_antihermitian(&generator);
        // Left-multiply by the diagonal rotation exp(i theta_u n).
        let mut out = two_photon;
        for i in 0..self.dim {
            let phase = C64::from_polar(1.0, params.theta_u() * i as f64);
            for j in 0..self.dim {
                out[(i, j)] *= phase;
            }
        }
        Ok(out)
    }

    /// Frobenius norm of (S' b S - u b - conj(v) b') on the lowest k x k
    /// block; the quantity certified small by the algebra suite.
    ///
    /// Truncation controls this only while the squeezed |k-1> state fits in
    /// the space: its upper classical turning point sits near (k-1) e^{2 sigma},
    /// so the residual needs dim comfortably above k e^{2 sigma}, not merely
    /// the 16 e^{2 sigma} construction gate.
    pub fn bogoliubov_residual(&self, params: &BogoliubovParams, k: usize) -> Result<f64> {
        if k == 0 || k > self.dim {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("projection size must be in 1..={}, got {k}", self.dim),
            });
        }
        let s = self.squeeze_matrix(params)?;
        let transformed = s.adjoint() * &self.b * &s;
        let target = &self.b * params.u() + &self.bdag * params.v().conj();
        let diff = transformed - target;
        Ok(diff.view((0, 0), (k, k)).norm())
    }

    /// Displacement unitary exp(alpha b' - conj(alpha) b).
    pub fn displacement_matrix(&self, alpha: C64) -> DMatrix<C64> {
        let generator = &self.bdag * alpha - &self.b * alpha.conj();
        expm_antihermitian(&generator)
    }

    /// S'(params) D(alpha) |0>: the displaced squeezed state.
    pub fn displaced_squeezed_state(
        &self,
        params: &BogoliubovParams,
        alpha: C64,
    ) -> Result<StateVector> {
        let required =
            (16.0 * ((2.0 * params.sigma()).exp() + alpha.norm_sqr())).ceil() as usize;
        self.require_dim(required)?;
        let s = self.squeeze_matrix(params)?;
        let d = self.displacement_matrix(alpha);
        let mut vacuum = DVector::<C64>::zeros(self.dim);
        vacuum[0] = C64::new(1.0, 0.0);
        let raw = s.adjoint() * (d * vacuum);
        let state = StateVector::from_raw(raw);
        if state.norm_defect() > 1e-8 {
            return Err(Error::TruncationBudget {
                required: self.dim * 2,
                got: self.dim,
            });
        }
        Ok(state)
    }

    /// S'(params) |n>: the squeezed number state.
    pub fn squeezed_number_state(&self, params: &BogoliubovParams, n: usize) -> Result<StateVector> {
        self.require_dim(Self::required_dim_for_squeeze(params.sigma()))?;
        if n > self.dim / 8 {
            return Err(Error::TruncationBudget {
                required: 8 * n,
                got: self.dim,
            });
        }
        let s = self.squeeze_matrix(params)?;
        let mut basis = DVector::<C64>::zeros(self.dim);
        basis[n] = C64::new(1.0, 0.0);
        let raw = s.adjoint() * basis;
        Ok(StateVector::from_raw(raw))
    }

    /// Expectation of the transformed number operator:
    /// <(u b + conj(v) b')' (u b + conj(v) b')>.
    pub fn mixed_mode_number(&self, params: &BogoliubovParams, state: &StateVector) -> f64 {
        let b_mixed = &self.b * params.u() + &self.bdag * params.v().conj();
        (b_mixed * state.amplitudes()).norm().powi(2)
    }

    /// Frobenius defect of U'U - 1 on the lower `block` x `block` corner.
    pub fn unitarity_defect(&self, u: &DMatrix<C64>, block: usize) -> f64 {
        let gram = u.adjoint() * u;
        let mut defect = 0.0f64;
        for i in 0..block {
            for j in 0..block {
                let expected = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                defect += (gram[(i, j)] - expected).norm_sqr();
            }
        }
        defect.sqrt()
    }
}

/// exp(G) for anti-Hermitian G, via the eigendecomposition of the Hermitian
/// matrix iG. Exactly unitary per eigenvector, so accuracy is limited only
/// by the eigensolver.
fn expm_antihermitian(g: &DMatrix<C64>) -> DMatrix<C64> {
    let i = C64::new(0.0, 1.0);
    let h = g.map(|x| i * x);
    let eig = h.symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| (-i * lambda).exp()));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ladder_commutator_is_identity_below_truncation() {
        let space = FockSpace::new(8).unwrap();
        let comm = space.annihilation() * space.creation() - space.creation() * space.annihilation();
        for i in 0..7 {
            assert_eq!(comm[(i, i)], C64::new(1.0, 0.0));
        }
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(comm[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn zero_squeeze_is_identity() {
        let space = FockSpace::new(32).unwrap();
        let s = space
            .squeeze_matrix(&BogoliubovParams::identity())
            .unwrap();
        let defect = (&s - DMatrix::<C64>::identity(32, 32)).norm();
        assert!(defect < 1e-12, "defect {defect:e}");
        let r = space
            .bogoliubov_residual(&BogoliubovParams::identity())
            .unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn squeeze_is_unitary_on_lower_block() {
        let space = FockSpace::new(64).unwrap();
        let params = BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap();
        let s = space.squeeze_matrix(&params).unwrap();
        let defect = space.unitarity_defect(&s, 32);
        assert!(defect < 1e-8, "unitarity defect {defect:e}");
    }

    #[test]
    fn bogoliubov_residual_small_for_real_and_complex_v() {
        let space64 = FockSpace::new(64).unwrap();
        let r = space64
            .bogoliubov_residual(&BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap())
            .unwrap();
        assert!(r < 1e-6, "sigma=0.5 residual {r:e}");

        let space128 = FockSpace::new(128).unwrap();
        let r = space128
            .bogoliubov_residual(&BogoliubovParams::from_squeeze(1.0, 0.0, PI / 3.0).unwrap())
            .unwrap();
        assert!(r < 1e-6, "complex-v residual {r:e}");
    }

    #[test]
    fn naive_generator_phase_fails_for_complex_v() {
        // Flipping the two-photon phase to theta_v - theta_u implements
        // u b + v b' instead of u b + conj(v) b'; the residual sees it.
        let space = FockSpace::new(128).unwrap();
        let params = BogoliubovParams::from_squeeze(1.0, 0.0, PI / 3.0).unwrap();
        let naive = BogoliubovParams::from_squeeze(1.0, 0.0, -PI / 3.0).unwrap();
        let s_naive = space.squeeze_matrix(&naive).unwrap();
        let transformed = s_naive.adjoint() * space.annihilation() * &s_naive;
        let target = space.annihilation() * params.u()
            + space.creation() * params.v().conj();
        let diff = transformed - target;
        let r = diff.columns(0, 32).norm();
        assert!(r > 1e-2, "naive phase should fail, got {r:e}");
    }

    #[test]
    fn insufficient_truncation_is_rejected() {
        let space = FockSpace::new(16).unwrap();
        let params = BogoliubovParams::from_squeeze(1.0, 0.0, 0.0).unwrap();
        match space.squeeze_matrix(&params) {
            Err(Error::TruncationBudget { required, got }) => {
                assert_eq!(got, 16);
                assert!(required > 100);
            }
            other => panic!("expected truncation error, got {other:?}", other = other.is_ok()),
        }
    }

    #[test]
    fn squeezed_vacuum_has_even_parity() {
        let space = FockSpace::new(64).unwrap();
        let params = BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap();
        let state = space.squeezed_number_state(&params, 0).unwrap();
        for n in (1..64).step_by(2) {
            assert!(
                state.amplitude(n).norm() < 1e-10,
                "odd amplitude at n={n}: {:e}",
                state.amplitude(n).norm()
            );
        }
    }

    #[test]
    fn coherent_state_amplitudes() {
        let space = FockSpace::new(64).unwrap();
        let state = space
            .displaced_squeezed_state(&BogoliubovParams::identity(), C64::new(1.0, 0.0))
            .unwrap();
        let mut factorial = 1.0f64;
        for n in 0..=10 {
            if n > 0 {
                factorial *= n as f64;
            }
            let expected = (-0.5f64).exp() / factorial.sqrt();
            assert!(
                (state.amplitude(n).re - expected).abs() < 1e-8,
                "n={n}: {} vs {expected}",
                state.amplitude(n).re
            );
            assert!(state.amplitude(n).im.abs() < 1e-10);
        }
    }

    #[test]
    fn squeezing_adds_quanta_to_coherent_state() {
        let space = FockSpace::new(64).unwrap();
        let params = BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap();
        let state = space
            .displaced_squeezed_state(&params, C64::new(1.0, 0.0))
            .unwrap();
        let number = (space.creation() * space.annihilation() * state.amplitudes())
            .dot(state.amplitudes())
            .re;
        // mild check only: o quanta beyond the displacement alone
        assert!(number > 1.0, "got <n> = {number}");
    }

    #[test]
    fn squeezed_number_states_keep_their_quantum_number() {
        let space64 = FockSpace::new(64).unwrap();
        let params = BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap();
        let sigma0 = space64
            .squeezed_number_state(&BogoliubovParams::identity(), 3)
            .unwrap();
        assert!((sigma0.amplitude(3).norm() - 1.0).abs() < 1e-12);

        let n0 = space64.squeezed_number_state(&params, 0).unwrap();
        assert!(space64.mixed_mode_number(&params, &n0) < 1e-6);

        let space128 = FockSpace::new(128).unwrap();
        let n2 = space128.squeezed_number_state(&params, 2).unwrap();
        assert!(
            (space128.mixed_mode_number(&params, &n2) - 2.0).abs() < 1e-5,
            "got {}",
            space128.mixed_mode_number(&params, &n2)
        );
    }

    #[test]
    fn squeezed_number_state_is_projected_eigenvector() {
        let space = FockSpace::new(128).unwrap();
        let params = BogoliubovParams::from_squeeze(0.5, 0.0, 0.0).unwrap();
        for n in [0usize, 1, 2] {
            let state = space.squeezed_number_state(&params, n).unwrap();
            let b_mixed = space.annihilation() * params.u()
                + space.creation() * params.v().conj();
            let number_op = b_mixed.adjoint() * &b_mixed;
            let residual = number_op * state.amplitudes()
                - state.amplitudes() * C64::new(n as f64, 0.0);
            let projected: f64 = residual
                .iter()
                .take(32)
                .map(|x| x.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(projected < 1e-5, "n={n}: projected residual {projected:e}");
        }
    }

    #[test]
    fn composition_agrees_up_to_global_phase() {
        let space = FockSpace::new(128).unwrap();
        let p1 = BogoliubovParams::from_squeeze(0.3, 0.2, -0.4).unwrap();
        let p2 = BogoliubovParams::from_squeeze(0.5, -0.1, 0.7).unwrap();
        let composed = p1.then(&p2).unwrap();
        let s1 = space.squeeze_matrix(&p1).unwrap();
        let s2 = space.squeeze_matrix(&p2).unwrap();
        let s3 = space.squeeze_matrix(&composed).unwrap();
        let mut vacuum = DVector::<C64>::zeros(128);
        vacuum[0] = C64::new(1.0, 0.0);
        let psi_product = s1.adjoint() * (s2.adjoint() * &vacuum);
        let psi_composed = s3.adjoint() * vacuum;
        let overlap = psi_composed.dot(&psi_product).norm();
        assert!(
            (overlap - 1.0).abs() < 1e-6,
            "overlap magnitude {overlap} should be 1"
        );
    }

    #[test]
    fn displaced_state_norm_budget() {
        let space = FockSpace::new(32).unwrap();
        // |alpha|^2 = 4 and e^{2 sigma} = 1 needs 16*(1+4) = 80 > 32
        let err = space.displaced_squeezed_state(
            &BogoliubovParams::identity(),
            C64::new(2.0, 0.0),
        );
        assert!(matches!(err, Err(Error::TruncationBudget { .. })));
    }
}

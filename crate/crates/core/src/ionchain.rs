//! Axial normal modes of a linear ion chain.
//!
//! Lengths are in units of `(e² / 4πε₀ M ν²)^{1/3}` and frequencies in units
//! of the axial trap frequency ν, so the chain is fully determined by the ion
//! count. In these units the equilibrium positions `u_m` minimize
//! `Σ u_m² / 2 + Σ_{m<j} 1 / |u_m − u_j|` and the Hessian of that potential
//! is the coupling matrix `A`.
//!
//! The normal-mode matrix `B` satisfies `A = Bᵀ Λ B`; row `p` of `B` is mode
//! `p`, so `b_m^{(p)} = B[p][m]`. Mode 1 (index 0) is the centre-of-mass mode.

use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{self, LinalgError, Matrix};
use crate::ComplexValue;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Largest supported chain.
pub const MAX_IONS: usize = 32;

const NEWTON_TOLERANCE: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 200;
const MIN_GAP: f64 = 1e-9;
const JACOBI_THRESHOLD: f64 = 1e-14;

/// Ion-chain failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IonChainError {
    /// Ion count outside `2..=32`.
    #[error("ion count {0} outside supported range 2..=32")]
    InvalidIonCount(usize),
    /// Trap frequency or mass not positive and finite.
    #[error("invalid chain parameter {name} = {value}")]
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// The equilibrium Newton iteration did not converge.
    #[error("equilibrium solver did not converge (residual {0:e})")]
    NonConvergence(f64),
    /// Two ions closer than the minimum gap, or positions not ascending.
    #[error("ion positions are degenerate or unordered at index {0}")]
    DegeneratePositions(usize),
    /// Ion index outside `1..=N`.
    #[error("ion index {index} out of range 1..={n_ions}")]
    IndexOutOfRange {
        /// Requested (1-based) index.
        index: usize,
        /// Chain size.
        n_ions: usize,
    },
    /// Failure inside the eigensolver or linear solve.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Physical description of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonChainConfig {
    /// Number of ions, `2 ≤ N ≤ 32`.
    pub n_ions: usize,
    /// Axial trap frequency ν/2π in Hz.
    pub trap_frequency: f64,
    /// Ion mass in kg.
    pub ion_mass: f64,
}

impl IonChainConfig {
    /// `⁴⁰Ca⁺` in a 1 MHz trap.
    pub fn calcium(n_ions: usize) -> Self {
        Self {
            n_ions,
            trap_frequency: 1.0e6,
            ion_mass: 40.0 * 1.660_539_066_60e-27,
        }
    }

    /// Checks the invariants.
    pub fn validate(&self) -> Result<(), IonChainError> {
        if !(2..=MAX_IONS).contains(&self.n_ions) {
            return Err(IonChainError::InvalidIonCount(self.n_ions));
        }
        if !(self.trap_frequency.is_finite() && self.trap_frequency > 0.0) {
            return Err(IonChainError::InvalidParameter {
                name: "trap_frequency",
                value: self.trap_frequency,
            });
        }
        if !(self.ion_mass.is_finite() && self.ion_mass > 0.0) {
            return Err(IonChainError::InvalidParameter {
                name: "ion_mass",
                value: self.ion_mass,
            });
        }
        Ok(())
    }
}

/// Eigenstructure of the linearized chain.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    /// Dimensionless equilibrium positions, ascending.
    pub equilibrium_positions: Vec<f64>,
    /// Eigenvalues μ_p of the coupling matrix, ascending.
    pub eigenvalues_mu: Vec<f64>,
    /// Orthogonal mode matrix; row `p` is mode `p`.
    pub mode_matrix_b: Matrix,
    /// Mode frequencies ν_p/ν = √μ_p.
    pub frequencies: Vec<f64>,
}

impl NormalModes {
    /// Number of ions (and modes).
    pub fn len(&self) -> usize {
        self.eigenvalues_mu.len()
    }

    /// Always false; a chain has at least two ions.
    pub fn is_empty(&self) -> bool {
        self.eigenvalues_mu.is_empty()
    }

    /// `b_m^{(p)}` with zero-based `mode` and `ion`.
    pub fn component(&self, mode: usize, ion: usize) -> f64 {
        self.mode_matrix_b[(mode, ion)]
    }

    /// Per-mode weights `[b_m^{(p)}]² / √μ_p` seen by ion `ion_index` (1-based).
    pub fn mode_weights(&self, ion_index: usize) -> Result<Vec<f64>, IonChainError> {
        let m = self.zero_based(ion_index)?;
        Ok((0..self.len())
            .map(|p| {
                let b = self.component(p, m);
                b * b / self.eigenvalues_mu[p].sqrt()
            })
            .collect())
    }

    fn zero_based(&self, ion_index: usize) -> Result<usize, IonChainError> {
        if ion_index == 0 || ion_index > self.len() {
            return Err(IonChainError::IndexOutOfRange {
                index: ion_index,
                n_ions: self.len(),
            });
        }
        Ok(ion_index - 1)
    }
}

/// Net force on each ion at the given positions (zero at equilibrium).
pub fn force_residual(positions: &[f64]) -> Vec<f64> {
    let n = positions.len();
    (0..n)
        .map(|m| {
            let um = positions[m];
            let mut g = um;
            for (j, &uj) in positions.iter().enumerate() {
                if j == m {
                    continue;
                }
                let d = um - uj;
                g -= d.signum() / (d * d);
            }
            g
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Dimensionless equilibrium positions of `n_ions` ions, ascending.
///
/// Damped Newton on the force balance, seeded with uniform spacing
/// `2.018 N^{-0.559}`.
pub fn equilibrium_positions(n_ions: usize) -> Result<Vec<f64>, IonChainError> {
    if !(2..=MAX_IONS).contains(&n_ions) {
        return Err(IonChainError::InvalidIonCount(n_ions));
    }
    let spacing = 2.018 / (n_ions as f64).powf(0.559);
    let centre = 0.5 * (n_ions as f64 - 1.0);
    let mut u: Vec<f64> = (0..n_ions).map(|m| (m as f64 - centre) * spacing).collect();

    let mut residual = force_residual(&u);
    for _ in 0..NEWTON_MAX_ITER {
        let r = max_abs(&residual);
        if r <= NEWTON_TOLERANCE {
            break;
        }
        let hessian = coupling_matrix(&u)?;
        let step = linalg::solve(&hessian, &residual)?;

        let mut damping = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(x, s)| x - damping * s).collect();
            let ordered = trial.windows(2).all(|w| w[1] - w[0] > MIN_GAP);
            if ordered {
                let trial_residual = force_residual(&trial);
                if max_abs(&trial_residual) < r || damping < 1e-6 {
                    u = trial;
                    residual = trial_residual;
                    break;
                }
            }
            damping *= 0.5;
            if damping < 1e-12 {
                return Err(IonChainError::NonConvergence(r));
            }
        }
    }

    // Symmetrize: the exact solution is odd under index reversal.
    let n = u.len();
    let sym: Vec<f64> = (0..n).map(|m| 0.5 * (u[m] - u[n - 1 - m])).collect();
    let sym_residual = force_residual(&sym);
    if max_abs(&sym_residual) <= max_abs(&residual) {
        u = sym;
        residual = sym_residual;
    }

    let r = max_abs(&residual);
    if r > 1e-12 {
        return Err(IonChainError::NonConvergence(r));
    }
    Ok(u)
}

/// Linearized coupling matrix at the given ascending positions.
pub fn coupling_matrix(positions: &[f64]) -> Result<Matrix, IonChainError> {
    for (i, w) in positions.windows(2).enumerate() {
        if !(w[1] - w[0] >= MIN_GAP) {
            return Err(IonChainError::DegeneratePositions(i + 1));
        }
    }
    let n = positions.len();
    let mut a = Matrix::zeros(n);
    for i in 0..n {
        let mut diag = 1.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = 2.0 / (positions[i] - positions[j]).abs().powi(3);
            diag += c;
            a[(i, j)] = -c;
        }
        a[(i, i)] = diag;
    }
    Ok(a)
}

/// Full normal-mode eigenstructure of the chain.
pub fn normal_modes(config: &IonChainConfig) -> Result<NormalModes, IonChainError> {
    config.validate()?;
    let positions = equilibrium_positions(config.n_ions)?;
    let a = coupling_matrix(&positions)?;
    let eigen = linalg::jacobi_eigen(&a, JACOBI_THRESHOLD)?;
    let frequencies = eigen.values.iter().map(|mu| mu.sqrt()).collect();
    Ok(NormalModes {
        equilibrium_positions: positions,
        eigenvalues_mu: eigen.values,
        mode_matrix_b: eigen.vectors,
        frequencies,
    })
}

/// Lamb-Dicke parameter `η = √(ħ k² cos²θ / 2Mν)` with ν = 2π·trap_frequency.
///
/// `wavenumber` is in 1/m and `angle` in radians from the trap axis.
pub fn lamb_dicke(wavenumber: f64, angle: f64, config: &IonChainConfig) -> Result<f64, IonChainError> {
    config.validate()?;
    if !(wavenumber.is_finite() && wavenumber > 0.0) {
        return Err(IonChainError::InvalidParameter {
            name: "wavenumber",
            value: wavenumber,
        });
    }
    let nu = 2.0 * core::f64::consts::PI * config.trap_frequency;
    let cos = angle.cos();
    Ok(wavenumber * cos.abs() * (HBAR / (2.0 * config.ion_mass * nu)).sqrt())
}

/// Field two-point function `Σ_p [b_m^{(p)}]²/√μ_p · e^{−iν_p·lag}` at ion
/// `ion_index` (1-based); `lag` is in units of 1/ν.
pub fn two_point_function(modes: &NormalModes, ion_index: usize, lag: f64) -> Result<ComplexValue, IonChainError> {
    let weights = modes.mode_weights(ion_index)?;
    Ok(weights
        .iter()
        .zip(&modes.frequencies)
        .map(|(w, nu)| ComplexValue::new(0.0, -nu * lag).exp() * *w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_and_three_ion_positions() {
        let u = equilibrium_positions(2).unwrap();
        let x = 2f64.powf(-2.0 / 3.0);
        assert!((u[0] + x).abs() < 1e-14 && (u[1] - x).abs() < 1e-14);

        let u = equilibrium_positions(3).unwrap();
        let x = 1.25f64.cbrt();
        assert!((u[0] + x).abs() < 1e-14);
        assert!(u[1].abs() < 1e-14);
        assert!((u[2] - x).abs() < 1e-14);
    }

    #[test]
    fn positions_are_antisymmetric() {
        for n in 2..=20 {
            let u = equilibrium_positions(n).unwrap();
            for m in 0..n {
                assert!((u[m] + u[n - 1 - m]).abs() < 1e-12, "N={n}");
            }
        }
    }

    #[test]
    fn rejects_bad_counts() {
        assert_eq!(equilibrium_positions(1), Err(IonChainError::InvalidIonCount(1)));
        assert_eq!(equilibrium_positions(33), Err(IonChainError::InvalidIonCount(33)));
    }

    #[test]
    fn coupling_for_two_ions() {
        let d = 2f64.cbrt();
        let a = coupling_matrix(&[-d / 2.0, d / 2.0]).unwrap();
        assert!((a[(0, 0)] - 2.0).abs() < 1e-14);
        assert!((a[(0, 1)] + 1.0).abs() < 1e-14);
        assert!(a.is_symmetric());
    }

    #[test]
    fn degenerate_positions() {
        assert_eq!(
            coupling_matrix(&[0.0, 1e-12, 1.0]),
            Err(IonChainError::DegeneratePositions(1))
        );
        assert_eq!(coupling_matrix(&[1.0, 0.0]), Err(IonChainError::DegeneratePositions(1)));
    }

    #[test]
    fn two_ion_modes() {
        let modes = normal_modes(&IonChainConfig::calcium(2)).unwrap();
        assert!((modes.eigenvalues_mu[0] - 1.0).abs() < 1e-13);
        assert!((modes.eigenvalues_mu[1] - 3.0).abs() < 1e-13);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((modes.component(0, 0) - r).abs() < 1e-13);
        assert!((modes.component(0, 1) - r).abs() < 1e-13);
        assert!((modes.frequencies[1] - 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn three_ion_spectrum() {
        let modes = normal_modes(&IonChainConfig::calcium(3)).unwrap();
        let expect = [1.0, 3.0, 29.0 / 5.0];
        for (mu, e) in modes.eigenvalues_mu.iter().zip(expect) {
            assert!((mu - e).abs() < 1e-12, "{mu} vs {e}");
        }
    }

    #[test]
    fn five_ion_frequencies_stay_near_trap() {
        let modes = normal_modes(&IonChainConfig::calcium(5)).unwrap();
        assert!(modes.frequencies.iter().all(|&nu| (1.0 - 1e-12..10.0).contains(&nu)));
    }

    #[test]
    fn lamb_dicke_values() {
        let cfg = IonChainConfig::calcium(2);
        let k = 2.0 * core::f64::consts::PI / 729e-9;
        let eta = lamb_dicke(k, core::f64::consts::FRAC_PI_4, &cfg).unwrap();
        assert!((0.01..0.1).contains(&eta), "eta = {eta}");
        let doubled = lamb_dicke(2.0 * k, core::f64::consts::FRAC_PI_4, &cfg).unwrap();
        assert!((doubled - 2.0 * eta).abs() < 1e-15);
        let perp = lamb_dicke(k, core::f64::consts::FRAC_PI_2, &cfg).unwrap();
        assert!(perp < 1e-16 * eta.max(1.0) * 1e3);
        assert!(lamb_dicke(-1.0, 0.0, &cfg).is_err());
    }

    #[test]
    fn two_point_function_properties() {
        let modes = normal_modes(&IonChainConfig::calcium(4)).unwrap();
        for m in 1..=4 {
            let g0 = two_point_function(&modes, m, 0.0).unwrap();
            let w: f64 = modes.mode_weights(m).unwrap().iter().sum();
            assert_eq!(g0.im, 0.0);
            assert!(g0.re > 0.0 && (g0.re - w).abs() < 1e-15);
            let g = two_point_function(&modes, m, 1.7).unwrap();
            let gm = two_point_function(&modes, m, -1.7).unwrap();
            assert!((g - gm.conj()).norm() < 1e-15);
        }
        assert!(matches!(
            two_point_function(&modes, 0, 0.0),
            Err(IonChainError::IndexOutOfRange { .. })
        ));
        assert!(two_point_function(&modes, 5, 0.0).is_err());
    }

    #[test]
    fn single_term_is_a_pure_phase() {
        let mut modes = normal_modes(&IonChainConfig::calcium(2)).unwrap();
        // Truncate to the COM mode only.
        modes.eigenvalues_mu.truncate(1);
        modes.frequencies.truncate(1);
        let w = modes.component(0, 0).powi(2);
        let lag = 2.3;
        let g = two_point_function(&modes, 1, lag).unwrap();
        assert!((g - ComplexValue::new(0.0, -lag).exp() * w).norm() < 1e-15);
    }
}

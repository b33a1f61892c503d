//! Weak-drive closed forms for the photon statistics, derived from a pure
//! state ansatz truncated at two excitations.
//!
//! At drive strengths far below every linewidth the steady density matrix is
//! dominated by a pure state |ψ⟩ = |vac⟩ + O(Ω)·(one excitation)
//! + O(Ω²)·(two excitations). Inserting that ansatz into the damped
//! Schrödinger equation (the Hamiltonian minus i·(decay half-widths)) and
//! dropping terms of order Ω³ gives a small linear system per excitation
//! manifold with closed-form solutions. The observables follow as
//!
//! n̄ = |A₁|²,   g²(0) = 2|A₂|²/|A₁|⁴,
//!
//! where A₁ and A₂ are the one- and two-photon amplitudes.
//!
//! Both two-excitation amplitudes retain *every* drive pathway, including
//! the direct two-photon one (drive acting twice on the ladder). Dropping it
//! looks harmless at strong coupling but breaks the g → 0 limit: an empty
//! driven cavity must come out exactly coherent (A₂ = A₁²/√2, g² = 1), and
//! only the full forms do that. The full forms also satisfy the truncated
//! steady equations identically — a property the tests enforce at roundoff
//! level.
//!
//! The delayed correlation has a closed route too: after a photon detection
//! the amplitudes restart from their post-detection values and relax back
//! along the same damped hierarchy, giving g²(τ) from a four-dimensional
//! linear ODE rather than a full master-equation propagation.

use ndarray::{arr1, arr2, Array1};

use crate::error::{Error, Result};
use crate::models::ModelParams;
use crate::ode::{integrate_adaptive, OdeOptions};
use crate::C64;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Steady amplitudes of the motionless model, in units of the ground
/// amplitude (`ground` is exactly 1).
pub struct JcAmplitudes {
    /// Zero excitations: |0, g⟩.
    pub ground: C64,
    /// One photon, atom in the ground state: |1, g⟩.
    pub one_photon: C64,
    /// No photon, atom excited: |0, e⟩.
    pub excited_atom: C64,
    /// Two photons, atom in the ground state: |2, g⟩.
    pub two_photon: C64,
    /// One photon and the excited atom: |1, e⟩.
    pub photon_excited_atom: C64,
}

/// Steady amplitudes of the moving-atom model at its operating point, in
/// units of the ground amplitude. The state labels are
/// |photons, phonons, atom⟩.
pub struct ComAmplitudes {
    /// |0, 0, g⟩.
    pub ground: C64,
    /// |1, 0, g⟩.
    pub one_photon: C64,
    /// |0, 1, e⟩ — the photon converted into a phonon plus atomic flip.
    pub phonon_excited_atom: C64,
    /// |2, 0, g⟩.
    pub two_photon: C64,
    /// |1, 1, e⟩.
    pub photon_phonon_excited_atom: C64,
}

/// Complex response denominators shared by every closed form:
/// d1 = g² + γ̂κ̂ (one-excitation), d2 = g² + κ̂² + γ̂κ̂ (two-excitation),
/// where γ̂ and κ̂ are the complex half-widths of the matter and cavity
/// responses.
fn denominators(g: f64, gamma_hat: C64, kappa_hat: C64) -> Result<(C64, C64)> {
    let g2 = C64::new(g * g, 0.0);
    let d1 = g2 + gamma_hat * kappa_hat;
    let d2 = g2 + kappa_hat * kappa_hat + gamma_hat * kappa_hat;
    if d1.norm() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "one-excitation response denominator vanishes (|d1| = {:.2e})",
            d1.norm()
        )));
    }
    if d2.norm() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "two-excitation response denominator vanishes (|d2| = {:.2e})",
            d2.norm()
        )));
    }
    Ok((d1, d2))
}

fn amplitude_set(omega: f64, g: f64, gamma_hat: C64, kappa_hat: C64) -> Result<[C64; 5]> {
    let (d1, d2) = denominators(g, gamma_hat, kappa_hat)?;
    let om = C64::new(omega, 0.0);
    let gc = C64::new(g, 0.0);
    let i = C64::new(0.0, 1.0);
    let one = -i * om * gamma_hat / d1;
    let flip = -gc * om / d1;
    let g2c = C64::new(g * g, 0.0);
    let two = om * om * (g2c - gamma_hat * gamma_hat - gamma_hat * kappa_hat)
        / (C64::new(SQRT2, 0.0) * d1 * d2);
    let mixed = i * gc * om * om * (gamma_hat + kappa_hat) / (d1 * d2);
    Ok([C64::new(1.0, 0.0), one, flip, two, mixed])
}

/// Complex half-widths of the motionless model: γ̂ = γ + iδ_a, κ̂ = κ + iΔ_c.
fn jc_halfwidths(p: &ModelParams) -> (C64, C64) {
    (
        C64::new(p.gamma, p.delta_a),
        C64::new(p.kappa, p.delta_c),
    )
}

/// Complex half-widths of the moving-atom model at its operating point,
/// where every transition sits at the common detuning W = δ_a + ν:
/// γ̃ = γ + Γ + iW, κ̃ = κ + iW.
fn com_halfwidths(p: &ModelParams) -> (C64, C64) {
    let w = p.delta_a + p.nu;
    (C64::new(p.gamma + p.gamma_b, w), C64::new(p.kappa, w))
}

/// Closed-form steady amplitudes of the motionless model.
pub fn jc_steady_amplitudes(p: &ModelParams) -> Result<JcAmplitudes> {
    p.validate()?;
    let (gamma_hat, kappa_hat) = jc_halfwidths(p);
    let [ground, one, flip, two, mixed] = amplitude_set(p.omega, p.g, gamma_hat, kappa_hat)?;
    Ok(JcAmplitudes {
        ground,
        one_photon: one,
        excited_atom: flip,
        two_photon: two,
        photon_excited_atom: mixed,
    })
}

/// Closed-form steady amplitudes of the moving-atom model. Only valid at the
/// operating point Δ_c = δ_a + ν, which is enforced.
pub fn com_steady_amplitudes(p: &ModelParams) -> Result<ComAmplitudes> {
    p.validate()?;
    p.require_com_resonance()?;
    let (gamma_hat, kappa_hat) = com_halfwidths(p);
    let [ground, one, flip, two, mixed] = amplitude_set(p.omega, p.g, gamma_hat, kappa_hat)?;
    Ok(ComAmplitudes {
        ground,
        one_photon: one,
        phonon_excited_atom: flip,
        two_photon: two,
        photon_phonon_excited_atom: mixed,
    })
}

fn nbar_from(one_photon: C64) -> f64 {
    one_photon.norm_sqr()
}

fn g2_from(one_photon: C64, two_photon: C64) -> Result<f64> {
    let nbar = one_photon.norm_sqr();
    if nbar == 0.0 {
        return Err(Error::UndefinedCorrelation { nbar });
    }
    Ok(2.0 * two_photon.norm_sqr() / (nbar * nbar))
}

/// Weak-drive mean photon number of the motionless model.
pub fn jc_analytic_nbar(p: &ModelParams) -> Result<f64> {
    Ok(nbar_from(jc_steady_amplitudes(p)?.one_photon))
}

/// Weak-drive g²(0) of the motionless model.
pub fn jc_analytic_g2(p: &ModelParams) -> Result<f64> {
    let a = jc_steady_amplitudes(p)?;
    g2_from(a.one_photon, a.two_photon)
}

/// Weak-drive mean photon number of the moving-atom model.
pub fn com_analytic_nbar(p: &ModelParams) -> Result<f64> {
    Ok(nbar_from(com_steady_amplitudes(p)?.one_photon))
}

/// Weak-drive g²(0) of the moving-atom model.
pub fn com_analytic_g2(p: &ModelParams) -> Result<f64> {
    let a = com_steady_amplitudes(p)?;
    g2_from(a.one_photon, a.two_photon)
}

/// Closed-route delayed correlation g²(τ) for the moving-atom model.
///
/// A photon detection at τ = 0 maps the steady amplitudes onto a
/// post-detection state (each amplitude picks up the photon lowering
/// factor): the detected one-photon amplitude becomes the new ground
/// reference, √2·A₂₀ seeds the one-photon amplitude, and A₁₁ seeds the
/// phonon branch. The two-excitation amplitudes rebuild from zero. The
/// ground reference decays on the laster timescale of the *detection
/// probability* — slower than every grid here — and is held frozen, making
/// the relaxation a four-dimensional affine ODE whose fixed point is the
/// steady ansatz scaled by the detected amplitude. Consequently
/// g²(0) reproduces [`com_analytic_g2`] and g²(τ→∞) → 1 exactly.
pub fn amplitude_ode_g2tau(p: &ModelParams, tau_grid: &[f64]) -> Result<Vec<f64>> {
    if tau_grid.is_empty() || tau_grid[0] != 0.0 {
        return Err(Error::Validation(
            "the delay grid must start at exactly 0".into(),
        ));
    }
    let a = com_steady_amplitudes(p)?;
    let nbar = a.one_photon.norm_sqr();
    if nbar == 0.0 {
        return Err(Error::UndefinedCorrelation { nbar });
    }
    let (gamma_hat, kappa_hat) = com_halfwidths(p);
    let i = C64::new(0.0, 1.0);
    let g = C64::new(p.g, 0.0);
    let om = C64::new(p.omega, 0.0);
    let s2 = C64::new(SQRT2, 0.0);
    let zero = C64::new(0.0, 0.0);

    // State vector (A₁₀, A₀₁, A₁₁, A₂₀); the frozen ground reference Ā₁₀
    // enters through the drive source.
    let m = arr2(&[
        [-kappa_hat, -i * g, zero, zero],
        [-i * g, -gamma_hat, zero, zero],
        [zero, -i * om, -(kappa_hat + gamma_hat), -i * s2 * g],
        [-i * s2 * om, zero, -i * s2 * g, -C64::new(2.0, 0.0) * kappa_hat],
    ]);
    let src = arr1(&[-i * om * a.one_photon, zero, zero, zero]);
    let y0 = arr1(&[
        s2 * a.two_photon,
        a.photon_phonon_excited_atom,
        zero,
        zero,
    ]);

    let states = integrate_adaptive(
        |y: &Array1<C64>| m.dot(y) + &src,
        &y0,
        tau_grid,
        &OdeOptions::default(),
    )?;
    let norm = nbar * nbar;
    Ok(states.iter().map(|y| y[0].norm_sqr() / norm).collect())
}

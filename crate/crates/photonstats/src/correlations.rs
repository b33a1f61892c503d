//! Photon-statistics observables: mean occupation, equal-time and delayed
//! second-order correlations, and the classical-inequality check.
//!
//! Everything is normal-ordered with respect to the cavity mode:
//!
//! n̄ = ⟨a†a⟩,   g²(0) = ⟨a†a†aa⟩ / n̄²,
//! g²(τ) = ⟨a†(0) a†(τ) a(τ) a(0)⟩ / n̄²  (steady state, τ ≥ 0).
//!
//! The delayed correlation uses the regression recipe: seed the propagator
//! with a ρ_ss a† and read ⟨a†a⟩ along the trajectory. Classical fields obey
//! g²(τ) ≤ g²(0); a positive excess at some delay is a nonclassicality
//! witness (reported, never asserted, by [`schwarz_violation`]).

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::hilbert::{adjoint, cavity_annihilation, SpaceSpec};
use crate::linalg::trace;
use crate::liouville::{propagate, Liouvillian};
use crate::C64;

/// g²(τ) samples over a delay grid, with the equal-time value computed
/// directly from the seeding state for cross-checking.
pub struct G2Curve {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
    pub g2_zero: f64,
}

/// Outcome of the classical-inequality scan over a [`G2Curve`].
pub struct SchwarzReport {
    /// True when some delay exceeds the equal-time value by more than 1e-6.
    pub violated: bool,
    /// Delay of the largest excess (0 when the curve never rises).
    pub tau_at_max: f64,
    /// max_τ [g²(τ) − g²(0)], clamped below at 0.
    pub max_excess: f64,
}

fn real_expectation(op: &Array2<C64>, rho: &Array2<C64>, tol: f64, what: &str) -> Result<f64> {
    let z = trace(&op.dot(rho));
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonConvergence(format!("{what} is not finite")));
    }
    if z.im.abs() > tol * z.re.abs().max(1.0) {
        return Err(Error::ImaginaryResidue(format!(
            "{what} has imaginary part {:.2e} (real part {:.2e})",
            z.im, z.re
        )));
    }
    Ok(z.re)
}

/// Mean cavity occupation ⟨a†a⟩.
pub fn mean_photon(rho: &Array2<C64>, space: &SpaceSpec) -> Result<f64> {
    if rho.nrows() != space.dim() || rho.ncols() != space.dim() {
        return Err(Error::Dimension(format!(
            "state is {}x{}, space dimension is {}",
            rho.nrows(),
            rho.ncols(),
            space.dim()
        )));
    }
    let a = cavity_annihilation(space);
    let n = adjoint(&a).dot(&a);
    real_expectation(&n, rho, 1e-10, "mean photon number")
}

/// Equal-time correlation g²(0) = ⟨a†a†aa⟩ / ⟨a†a⟩².
pub fn g2_zero(rho: &Array2<C64>, space: &SpaceSpec) -> Result<f64> {
    let nbar = mean_photon(rho, space)?;
    if nbar <= 1e-14 {
        return Err(Error::UndefinedCorrelation { nbar });
    }
    let a = cavity_annihilation(space);
    let ad = adjoint(&a);
    let pair = ad.dot(&ad).dot(&a).dot(&a);
    let two = real_expectation(&pair, rho, 1e-10, "two-photon moment")?;
    Ok(two / (nbar * nbar))
}

/// Delayed correlation g²(τ) on `tau_grid` (which must start at exactly 0),
/// computed by propagating the regression seed a ρ a† and normalizing by
/// ⟨a†a⟩². The τ = 0 sample must reproduce [`g2_zero`] to 1e-8 — a live
/// consistency check between the algebraic and propagated routes.
pub fn g2_tau(
    l: &Liouvillian,
    rho_ss: &Array2<C64>,
    space: &SpaceSpec,
    tau_grid: &[f64],
) -> Result<G2Curve> {
    if tau_grid.is_empty() || tau_grid[0] != 0.0 {
        return Err(Error::Validation(
            "the delay grid must start at exactly 0".into(),
        ));
    }
    if l.dim != space.dim() {
        return Err(Error::Dimension(format!(
            "Liouvillian dimension {} does not match space dimension {}",
            l.dim,
            space.dim()
        )));
    }
    let nbar = mean_photon(rho_ss, space)?;
    if nbar <= 1e-14 {
        return Err(Error::UndefinedCorrelation { nbar });
    }
    let direct_zero = g2_zero(rho_ss, space)?;

    let a = cavity_annihilation(space);
    let ad = adjoint(&a);
    let n_op = ad.dot(&a);
    let seed = a.dot(rho_ss).dot(&ad);

    let states = propagate(l, &seed, tau_grid)?;
    let norm = nbar * nbar;
    let mut values = Vec::with_capacity(tau_grid.len());
    for (t, st) in tau_grid.iter().zip(states.iter()) {
        let raw = real_expectation(&n_op, st, 1e-9, "delayed photon correlation")?;
        let g2 = raw / norm;
        if g2 < -1e-9 {
            return Err(Error::NonConvergence(format!(
                "g²({t}) = {g2:.3e} is significantly negative"
            )));
        }
        values.push(g2.max(0.0));
    }
    let mismatch = (values[0] - direct_zero).abs();
    if mismatch > 1e-8 * direct_zero.abs().max(1.0) {
        return Err(Error::NonConvergence(format!(
            "propagated g²(0) = {} disagrees with the direct value {} by {mismatch:.2e}",
            values[0], direct_zero
        )));
    }
    Ok(G2Curve {
        tau: tau_grid.to_vec(),
        values,
        g2_zero: direct_zero,
    })
}

/// Scan a curve for delays where g²(τ) exceeds g²(0) — forbidden for
/// classical fields by the Cauchy–Schwarz inequality.
pub fn schwarz_violation(curve: &G2Curve) -> SchwarzReport {
    let mut max_excess = 0.0f64;
    let mut tau_at_max = 0.0f64;
    for (t, v) in curve.tau.iter().zip(curve.values.iter()) {
        let excess = v - curve.g2_zero;
        if excess > max_excess {
            max_excess = excess;
            tau_at_max = *t;
        }
    }
    SchwarzReport {
        violated: max_excess > 1e-6,
        tau_at_max,
        max_excess,
    }
}

/// Default delay grid: 400 uniform samples on [0, 2] cavity lifetimes.
pub fn default_tau_grid() -> Vec<f64> {
    let n = 400;
    (0..n).map(|k| 2.0 * k as f64 / (n - 1) as f64).collect()
}

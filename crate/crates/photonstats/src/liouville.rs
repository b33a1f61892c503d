//! Lindblad superoperator construction, steady states, and time propagation.
//!
//! The master equation is
//!
//! ρ̇ = −i[H, ρ] + Σᵢ rᵢ (2 dᵢ ρ dᵢ† − dᵢ†dᵢ ρ − ρ dᵢ†dᵢ),
//!
//! with the rate multiplying the *whole* dissipator. Under this half-width
//! convention a bare cavity with collapse pair (κ, a) loses photons at rate
//! exactly 2κ — the single most error-prone sign/factor choice in the whole
//! calculation, pinned by a dedicated test.
//!
//! Density matrices are column-stacked: vec(ρ)[i + D·j] = ρ[i, j], under
//! which vec(AXB) = (Bᵀ ⊗ A)·vec(X). The construction is property-tested
//! against direct evaluation of ρ̇ on random matrices.

use ndarray::linalg::kron;
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::hilbert::{adjoint, atom_lowering, cavity_annihilation, phonon_annihilation, SpaceSpec};
use crate::linalg::{
    eigh_dense, expm, hermitize, limit_blas_threads, lu_solve, max_abs_diff, rcond, trace,
    vec_norm,
};
use crate::models::ModelParams;
use crate::ode::{integrate_adaptive, OdeOptions};
use crate::C64;

/// D²×D² generator acting on column-stacked density matrices.
pub struct Liouvillian {
    pub dim: usize,
    pub matrix: Array2<C64>,
}

/// A validated physical state: Hermitian, unit trace, positive within
/// numerical tolerance.
pub struct DensityMatrix {
    pub matrix: Array2<C64>,
}

impl DensityMatrix {
    /// Validate Hermiticity (1e−10), trace (1e−10), and positivity (smallest
    /// eigenvalue ≥ −1e−8) before accepting the matrix.
    pub fn new(matrix: Array2<C64>) -> Result<Self> {
        let herm = max_abs_diff(&matrix, &adjoint(&matrix));
        if herm > 1e-10 {
            return Err(Error::Validation(format!(
                "density matrix not Hermitian (deviation {herm:.2e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::Validation(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let (evals, _) = eigh_dense(&hermitize(&matrix))?;
        let min_eig = evals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-8 {
            return Err(Error::Validation(format!(
                "density matrix indefinite (min eigenvalue {min_eig:.2e})"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Steady state plus the solve-quality number the sweep engine reports.
pub struct SteadySolution {
    pub rho: DensityMatrix,
    /// ‖L·vec(ρ)‖₂ evaluated on the *unmodified* Liouvillian.
    pub residual: f64,
}

/// Column-stack a matrix: out[i + D·j] = m[i, j].
pub fn vectorize(m: &Array2<C64>) -> Array1<C64> {
    let d = m.nrows();
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + d * j] = m[[i, j]];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    let mut m = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            m[[i, j]] = v[i + d * j];
        }
    }
    m
}

/// Collapse set for the JC model: (κ, a), (γ, σ⁻).
pub fn jc_collapse(p: &ModelParams, s: &SpaceSpec) -> Vec<(f64, Array2<C64>)> {
    vec![
        (p.kappa, cavity_annihilation(s)),
        (p.gamma, atom_lowering(s)),
    ]
}

/// Collapse set for the COM models: (κ, a), (γ, σ⁻), (Γ, b).
pub fn com_collapse(p: &ModelParams, s: &SpaceSpec) -> Vec<(f64, Array2<C64>)> {
    vec![
        (p.kappa, cavity_annihilation(s)),
        (p.gamma, atom_lowering(s)),
        (p.gamma_b, phonon_annihilation(s)),
    ]
}

/// Build the superoperator L with vec(ρ̇) = L·vec(ρ):
/// L = −i(I⊗H − Hᵀ⊗I) + Σᵢ rᵢ (2 d̄ᵢ⊗dᵢ − I⊗dᵢ†dᵢ − (dᵢ†dᵢ)ᵀ⊗I),
/// where the right kron factor acts on the fast (row) index.
pub fn build_liouvillian(
    h: &Array2<C64>,
    collapse: &[(f64, Array2<C64>)],
) -> Result<Liouvillian> {
    limit_blas_threads();
    let d = h.nrows();
    if h.ncols() != d {
        return Err(Error::Dimension("Hamiltonian must be square".into()));
    }
    let herm = max_abs_diff(h, &adjoint(h));
    if herm > 1e-12 {
        return Err(Error::Validation(format!(
            "Liouvillian needs a Hermitian Hamiltonian (deviation {herm:.2e})"
        )));
    }
    let id = Array2::<C64>::eye(d);
    let minus_i = C64::new(0.0, -1.0);
    let mut l = (&kron(&id, h) - &kron(&h.t().to_owned(), &id)).mapv(|z| z * minus_i);
    for (rate, op) in collapse {
        if *rate < 0.0 {
            return Err(Error::Validation(format!("negative collapse rate {rate}")));
        }
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Dimension(format!(
                "collapse operator is {}x{}, Hamiltonian is {}x{}",
                op.nrows(),
                op.ncols(),
                d,
                d
            )));
        }
        if *rate == 0.0 {
            continue;
        }
        let r = C64::new(*rate, 0.0);
        let dd = adjoint(op).dot(op);
        let sandwich = kron(&op.mapv(|z| z.conj()), op);
        let left = kron(&id, &dd);
        let right = kron(&dd.t().to_owned(), &id);
        let term = (&sandwich.mapv(|z| z * C64::new(2.0, 0.0)) - &left - &right)
            .mapv(|z| z * r);
        l = l + term;
    }
    Ok(Liouvillian { dim: d, matrix: l })
}

impl Liouvillian {
    /// Apply to a density matrix: ρ̇ = unvec(L·vec(ρ)).
    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        unvectorize(&self.matrix.dot(&vectorize(rho)), self.dim)
    }
}

/// Trace-replacement steady-state solve: overwrite one row of L with the
/// trace constraint, solve A·x = e₀, then verify ‖L·x‖ on the unmodified L.
/// A numerically singular replaced system signals a degenerate zero
/// eigenspace (any second null vector of L can be chosen traceless, and then
/// it is also a null vector of A), reported as non-uniqueness.
pub fn steadystate(l: &Liouvillian) -> Result<SteadySolution> {
    limit_blas_threads();
    let d = l.dim;
    let d2 = d * d;
    let mut a = l.matrix.clone();
    for k in 0..d2 {
        a[[0, k]] = C64::new(0.0, 0.0);
    }
    for i in 0..d {
        a[[0, i + d * i]] = C64::new(1.0, 0.0);
    }
    let rc = rcond(&a)?;
    if rc < 1e-12 {
        return Err(Error::NonUniqueSteadyState(format!(
            "trace-replaced system numerically singular (rcond {rc:.2e}); \
             the Liouvillian zero eigenspace is degenerate"
        )));
    }
    let mut b = Array1::<C64>::zeros(d2);
    b[0] = C64::new(1.0, 0.0);
    let x = lu_solve(&a, &b, 1e-13)?;

    let mut rho = unvectorize(&x, d);
    rho = hermitize(&rho);
    let tr = trace(&rho);
    if tr.norm() < 1e-12 {
        return Err(Error::NonConvergence(
            "steady-state candidate has vanishing trace".into(),
        ));
    }
    rho = rho.mapv(|z| z / tr);

    let residual = vec_norm(&l.matrix.dot(&vectorize(&rho)));
    if residual > 1e-10 {
        return Err(Error::NonConvergence(format!(
            "steady-state residual {residual:.2e} exceeds 1e-10"
        )));
    }
    Ok(SteadySolution {
        rho: DensityMatrix::new(rho)?,
        residual,
    })
}

/// Propagated states are plain matrices: regression seeds are not density
/// matrices (their trace is n̄), so no state validation is applied here
/// beyond trace constancy.
pub fn propagate(
    l: &Liouvillian,
    rho0: &Array2<C64>,
    t_grid: &[f64],
) -> Result<Vec<Array2<C64>>> {
    let states = propagate_vec(l, &vectorize(rho0), t_grid)?;
    let tr0 = trace(rho0);
    let out: Vec<Array2<C64>> = states
        .iter()
        .map(|v| unvectorize(v, l.dim))
        .collect();
    if tr0.norm() > 1e-12 {
        for (t, m) in t_grid.iter().zip(out.iter()) {
            let drift = (trace(m) - tr0).norm();
            if drift > 1e-9 * tr0.norm().max(1.0) {
                return Err(Error::NonConvergence(format!(
                    "trace drift {drift:.2e} at t = {t}"
                )));
            }
        }
    }
    Ok(out)
}

/// Vectorized propagation behind [`propagate`]. Small systems integrate the
/// linear ODE adaptively; larger ones use matrix exponentials per distinct
/// grid step (both backends satisfy the same oracles — see the tests).
pub fn propagate_vec(
    l: &Liouvillian,
    x0: &Array1<C64>,
    t_grid: &[f64],
) -> Result<Vec<Array1<C64>>> {
    let d2 = l.dim * l.dim;
    if x0.len() != d2 {
        return Err(Error::Dimension(format!(
            "state has length {}, Liouvillian acts on {}",
            x0.len(),
            d2
        )));
    }
    if t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Validation("time grid must be nonnegative".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Validation(
                "time grid must be strictly increasing".into(),
            ));
        }
    }
    // The explicit stepper wins for small matrices; beyond that the
    // stability limit h ~ 1/‖L‖ makes exponential stepping much cheaper.
    if d2 <= 256 {
        return integrate_adaptive(
            |y| l.matrix.dot(y),
            x0,
            t_grid,
            &OdeOptions::default(),
        );
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut x = x0.clone();
    let mut t_prev = 0.0f64;
    // Cache the exponential for repeated identical steps (uniform grids).
    let mut cached: Option<(f64, Array2<C64>)> = None;
    for &t in t_grid {
        let dt = t - t_prev;
        if dt > 0.0 {
            let step_matches = matches!(&cached, Some((h, _)) if (*h - dt).abs() <= 1e-15 * dt.max(1.0));
            if !step_matches {
                let e = expm(&l.matrix.mapv(|z| z * C64::new(dt, 0.0)))?;
                cached = Some((dt, e));
            }
            let (_, e) = cached.as_ref().unwrap();
            x = e.dot(&x);
        }
        t_prev = t;
        out.push(x.clone());
    }
    Ok(out)
}

//! Parameter-sweep engine: 1-D scans, 2-D maps, and delay-curve runs that
//! turn the per-point solvers into tabular results.
//!
//! One grid point = one row. A row never carries fabricated numbers: every
//! per-point failure (invalid parameters, singular closed form, solver
//! breakdown) is recorded in the row's error field with the computed columns
//! left empty. Points are independent and may be evaluated concurrently;
//! rows are always assembled in grid order, so identical specs produce
//! bit-identical tables.
//!
//! Linked parameters. The models are meaningful only on certain slices of
//! parameter space, and the engine enforces them per point:
//! * motionless scans over the cavity detuning carry the atom along,
//!   keeping the base offset δ_a − Δ_c fixed;
//! * moving-atom scans always derive Δ_c = δ_a + ν, the operating point of
//!   the effective model (scanning Δ_c itself is rejected);
//! * the phonon frequency is not a motionless parameter (rejected).
//!
//! Truncation diagnostic. Whenever a numeric point is computed, the steady
//! solve is repeated with the photon cutoff (and phonon cutoff, when
//! phonons are present) raised by one, and the relative change of g²(0) is
//! recorded per row. A converged truncation shows deltas far below 1e-4; a
//! drive strong enough to populate the cutoff levels shows up honestly as a
//! large delta. The enlarged solve reuses the base solution as a seed for an
//! iterative refinement whose convergence target is set by the seed's own
//! truncation residual — never by the right-hand side, which the seed
//! already nearly satisfies — so the reported delta measures physics, not
//! solver shortcuts.

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    amplitude_ode_g2tau, com_analytic_g2, com_analytic_nbar, jc_analytic_g2, jc_analytic_nbar,
};
use crate::correlations::{default_tau_grid, g2_tau, g2_zero, mean_photon};
use crate::error::{Error, Result};
use crate::hilbert::{adjoint, SpaceSpec};
use crate::linalg::{bicgstab, hermitize, trace, vec_norm};
use crate::liouville::{
    build_liouvillian, com_collapse, jc_collapse, steadystate, unvectorize, vectorize,
};
use crate::models::{build_com_effective_hamiltonian, build_jc_hamiltonian, ModelParams};
use crate::C64;

/// Which physical model a sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Pinned atom: cavity ⊗ two-level atom.
    Jc,
    /// Moving atom at its operating point: cavity ⊗ phonon ⊗ atom with the
    /// resonant phonon-exchange coupling.
    ComEffective,
}

/// Scannable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DeltaC,
    DeltaA,
    Nu,
    Gamma,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::DeltaC => "delta_c",
            SweepVariable::DeltaA => "delta_a",
            SweepVariable::Nu => "nu",
            SweepVariable::Gamma => "gamma",
        }
    }
}

/// Columns a run can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// Mean photon number from the master equation.
    NbarNum,
    /// g²(0) from the master equation.
    G2Num,
    /// Mean photon number from the weak-drive closed forms.
    NbarAna,
    /// g²(0) from the weak-drive closed forms.
    G2Ana,
    /// Delayed correlation curve g²(τ) (both routes); exclusive, zero axes.
    G2Tau,
}

/// One scan axis: `points` uniform samples on [start, stop].
#[derive(Debug, Clone, Serialize)]
pub struct AxisSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl AxisSpec {
    fn value_at(&self, k: usize) -> f64 {
        if self.points == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.points - 1) as f64
        }
    }
}

/// Full description of a run.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub model: Model,
    /// 0 axes: delay curve; 1 axis: scan; 2 axes: map (first axis slow).
    pub axes: Vec<AxisSpec>,
    pub base: ModelParams,
    pub outputs: Vec<Output>,
    pub space: SpaceSpec,
    /// Delay grid for the curve mode; defaults to 400 points on [0, 2].
    pub tau_grid: Option<Vec<f64>>,
}

/// Solver-quality numbers attached to each numeric row.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    /// ‖L·vec(ρ)‖ of the steady solve.
    pub steady_residual: Option<f64>,
    /// Relative change of g²(0) when every cutoff is raised by one.
    pub truncation_delta: Option<f64>,
}

/// One grid point of results.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub coordinates: Vec<f64>,
    pub nbar_num: Option<f64>,
    pub g2_num: Option<f64>,
    pub nbar_ana: Option<f64>,
    pub g2_ana: Option<f64>,
    /// log₁₀ g²(0) convenience column (maps only).
    pub log10_g2: Option<f64>,
    pub diagnostics: Diagnostics,
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(coordinates: Vec<f64>) -> Self {
        SweepRow {
            coordinates,
            nbar_num: None,
            g2_num: None,
            nbar_ana: None,
            g2_ana: None,
            log10_g2: None,
            diagnostics: Diagnostics::default(),
            error: None,
        }
    }
}

/// Result table plus the metadata serializers need.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub coordinate_names: Vec<String>,
    /// True for 2-D maps, which carry the log₁₀ column.
    pub includes_log10: bool,
    pub rows: Vec<SweepRow>,
}

fn wants(outputs: &[Output], o: Output) -> bool {
    outputs.contains(&o)
}

fn validate_spec(spec: &SweepSpec, expect_axes: std::ops::RangeInclusive<usize>) -> Result<()> {
    if spec.outputs.is_empty() {
        return Err(Error::Validation("no outputs requested".into()));
    }
    for (i, o) in spec.outputs.iter().enumerate() {
        if spec.outputs[..i].contains(o) {
            return Err(Error::Validation("duplicate output requested".into()));
        }
    }
    let delay_mode = wants(&spec.outputs, Output::G2Tau);
    if delay_mode && spec.outputs.len() > 1 {
        return Err(Error::Validation(
            "the delay-curve output cannot be combined with scalar outputs".into(),
        ));
    }
    if delay_mode != spec.axes.is_empty() {
        return Err(Error::Validation(
            "delay curves take no scan axis; scalar outputs need one".into(),
        ));
    }
    if !expect_axes.contains(&spec.axes.len()) {
        return Err(Error::Validation(format!(
            "expected {:?} scan axes, got {}",
            expect_axes,
            spec.axes.len()
        )));
    }
    if spec.tau_grid.is_some() && !delay_mode {
        return Err(Error::Validation(
            "a delay grid is only meaningful for delay-curve runs".into(),
        ));
    }
    let pinned_allowed = spec.axes.len() == 2;
    for (i, ax) in spec.axes.iter().enumerate() {
        if !ax.start.is_finite() || !ax.stop.is_finite() {
            return Err(Error::Validation("axis endpoints must be finite".into()));
        }
        let pinned = ax.points == 1 && ax.start == ax.stop;
        if !(ax.points >= 2 && ax.start < ax.stop || pinned_allowed && pinned) {
            return Err(Error::Validation(format!(
                "axis {} needs at least 2 points with start < stop (a map may pin \
                 one axis to a single value)",
                ax.variable.name()
            )));
        }
        if spec.axes[..i].iter().any(|a| a.variable == ax.variable) {
            return Err(Error::Validation(format!(
                "variable {} appears on two axes",
                ax.variable.name()
            )));
        }
        match (spec.model, ax.variable) {
            (Model::Jc, SweepVariable::Nu) => {
                return Err(Error::Validation(
                    "the phonon frequency is not a motionless-model parameter".into(),
                ))
            }
            (Model::ComEffective, SweepVariable::DeltaC) => {
                return Err(Error::Validation(
                    "the cavity detuning is derived (Δ_c = δ_a + ν) in the moving-atom \
                     model; scan delta_a or nu instead"
                        .into(),
                ))
            }
            _ => {}
        }
    }
    match spec.model {
        Model::Jc => {
            if spec.space.phonon_cutoff != 0 {
                return Err(Error::Validation(
                    "the motionless model takes no phonon levels".into(),
                ));
            }
        }
        Model::ComEffective => {
            if spec.space.phonon_cutoff < 1 {
                return Err(Error::Validation(
                    "the moving-atom model needs a phonon cutoff of at least 1".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Apply axis values and the linked-parameter rules for one grid point.
fn resolve_params(spec: &SweepSpec, values: &[f64]) -> ModelParams {
    let mut p = spec.base;
    let base_offset = spec.base.delta_a - spec.base.delta_c;
    let mut cavity_swept = false;
    for (ax, v) in spec.axes.iter().zip(values.iter()) {
        match ax.variable {
            SweepVariable::DeltaC => {
                p.delta_c = *v;
                cavity_swept = true;
            }
            SweepVariable::DeltaA => p.delta_a = *v,
            SweepVariable::Nu => p.nu = *v,
            SweepVariable::Gamma => p.gamma = *v,
        }
    }
    match spec.model {
        Model::Jc => {
            if cavity_swept {
                p.delta_a = p.delta_c + base_offset;
            }
        }
        Model::ComEffective => {
            p.delta_c = p.delta_a + p.nu;
        }
    }
    p
}

fn hamiltonian_and_collapse(
    model: Model,
    p: &ModelParams,
    space: &SpaceSpec,
) -> Result<(Array2<C64>, Vec<(f64, Array2<C64>)>)> {
    match model {
        Model::Jc => Ok((build_jc_hamiltonian(p, space)?, jc_collapse(p, space))),
        Model::ComEffective => Ok((
            build_com_effective_hamiltonian(p, space)?,
            com_collapse(p, space),
        )),
    }
}

/// Master-equation action plus the trace-constraint row, applied without
/// materializing the superoperator: three dense D×D products per collapse
/// pair instead of one D²×D² matrix-vector product.
struct TraceReplacedAction {
    h: Array2<C64>,
    collapse: Vec<(f64, Array2<C64>, Array2<C64>, Array2<C64>)>, // (rate, d, d†, d†d)
    dim: usize,
}

impl TraceReplacedAction {
    fn new(h: Array2<C64>, ops: Vec<(f64, Array2<C64>)>) -> Self {
        let dim = h.nrows();
        let collapse = ops
            .into_iter()
            .filter(|(r, _)| *r > 0.0)
            .map(|(r, d)| {
                let dd = adjoint(&d);
                let ndd = dd.dot(&d);
                (r, d, dd, ndd)
            })
            .collect();
        TraceReplacedAction { h, collapse, dim }
    }

    fn apply(&self, x: &Array1<C64>) -> Array1<C64> {
        let rho = unvectorize(x, self.dim);
        let minus_i = C64::new(0.0, -1.0);
        let mut drho = (&self.h.dot(&rho) - &rho.dot(&self.h)).mapv(|z| z * minus_i);
        for (rate, d, dd, ndd) in &self.collapse {
            let r = C64::new(*rate, 0.0);
            let term = &d.dot(&rho).dot(dd).mapv(|z| z * C64::new(2.0, 0.0))
                - &ndd.dot(&rho)
                - &rho.dot(ndd);
            drho = drho + term.mapv(|z| z * r);
        }
        let mut y = vectorize(&drho);
        y[0] = trace(&rho);
        y
    }

    fn diagonal(&self) -> Array1<C64> {
        let d = self.dim;
        let mut diag = Array1::<C64>::zeros(d * d);
        let minus_i = C64::new(0.0, -1.0);
        for j in 0..d {
            for i in 0..d {
                let mut v = minus_i * (self.h[[i, i]] - self.h[[j, j]]);
                for (rate, dop, _, ndd) in &self.collapse {
                    let r = C64::new(*rate, 0.0);
                    v += r
                        * (C64::new(2.0, 0.0) * dop[[j, j]].conj() * dop[[i, i]]
                            - ndd[[i, i]]
                            - ndd[[j, j]]);
                }
                diag[i + d * j] = v;
            }
        }
        diag[0] = C64::new(1.0, 0.0);
        diag
    }
}

/// Copy a state into a space with larger cutoffs (same occupations map to
/// the same occupations; new levels start empty).
fn embed_state(rho: &Array2<C64>, from: &SpaceSpec, to: &SpaceSpec) -> Array2<C64> {
    let mut map = Vec::with_capacity(from.dim());
    for na in 0..from.photon_dim() {
        for nb in 0..from.phonon_dim() {
            for at in 0..2 {
                map.push(to.basis_index(na, nb, at));
            }
        }
    }
    let mut out = Array2::<C64>::zeros((to.dim(), to.dim()));
    for (i, &ti) in map.iter().enumerate() {
        for (j, &tj) in map.iter().enumerate() {
            out[[ti, tj]] = rho[[i, j]];
        }
    }
    out
}

/// Superoperator dimension up to which the enlarged steady solve is done
/// directly by dense factorization.
const DIRECT_ENLARGED_LIMIT: usize = 1024;

fn enlarged_steady_state(
    model: Model,
    p: &ModelParams,
    base_space: &SpaceSpec,
    plus_space: &SpaceSpec,
    rho_base: &Array2<C64>,
) -> Result<Array2<C64>> {
    let (h, ops) = hamiltonian_and_collapse(model, p, plus_space)?;
    let d = plus_space.dim();
    if d * d <= DIRECT_ENLARGED_LIMIT {
        let l = build_liouvillian(&h, &ops)?;
        return Ok(steadystate(&l)?.rho.matrix);
    }

    let action = TraceReplacedAction::new(h.clone(), ops.clone());
    let apply = |x: &Array1<C64>| action.apply(x);
    let mut b = Array1::<C64>::zeros(d * d);
    b[0] = C64::new(1.0, 0.0);
    let x0 = vectorize(&embed_state(rho_base, base_space, plus_space));
    let r0 = vec_norm(&(&b - &apply(&x0)));

    let x = if r0 <= 1e-13 {
        x0
    } else {
        // Converge relative to the seed's own truncation residual: the goal
        // is to resolve the correction the larger space induces, and b is
        // nearly satisfied by the seed already.
        let target = (1e-4 * r0).max(1e-13);
        match bicgstab(apply, &b, &x0, &action.diagonal(), target, 400) {
            Ok(sol) => sol.x,
            Err(_) => {
                // Robust fallback: full dense solve of the enlarged system.
                let l = build_liouvillian(&h, &ops)?;
                return Ok(steadystate(&l)?.rho.matrix);
            }
        }
    };
    let mut rho = hermitize(&unvectorize(&x, d));
    let tr = trace(&rho);
    if tr.norm() < 1e-12 {
        return Err(Error::NonConvergence(
            "enlarged steady solve lost the trace".into(),
        ));
    }
    rho = rho.mapv(|z| z / tr);
    Ok(rho)
}

struct NumericPoint {
    nbar: f64,
    g2: f64,
    residual: f64,
    truncation_delta: f64,
}

fn numeric_point(model: Model, p: &ModelParams, space: &SpaceSpec) -> Result<NumericPoint> {
    let (h, ops) = hamiltonian_and_collapse(model, p, space)?;
    let l = build_liouvillian(&h, &ops)?;
    let sol = steadystate(&l)?;
    let nbar = mean_photon(&sol.rho.matrix, space)?;
    let g2 = g2_zero(&sol.rho.matrix, space)?;

    let plus_space = SpaceSpec::new(
        space.photon_cutoff + 1,
        if space.has_phonons() {
            space.phonon_cutoff + 1
        } else {
            0
        },
    )?;
    let rho_plus = enlarged_steady_state(model, p, space, &plus_space, &sol.rho.matrix)?;
    let g2_plus = g2_zero(&rho_plus, &plus_space)?;
    let truncation_delta = (g2_plus - g2).abs() / g2.abs().max(1e-300);

    Ok(NumericPoint {
        nbar,
        g2,
        residual: sol.residual,
        truncation_delta,
    })
}

fn evaluate_scalar_point(spec: &SweepSpec, coordinates: Vec<f64>, with_log10: bool) -> SweepRow {
    let mut row = SweepRow::empty(coordinates.clone());
    let p = resolve_params(spec, &coordinates);
    if let Err(e) = p.validate() {
        row.error = Some(e.to_string());
        return row;
    }

    let mut notes: Vec<String> = Vec::new();
    let want_analytic =
        wants(&spec.outputs, Output::NbarAna) || wants(&spec.outputs, Output::G2Ana);
    let want_numeric = wants(&spec.outputs, Output::NbarNum) || wants(&spec.outputs, Output::G2Num);

    if want_analytic {
        let nbar = match spec.model {
            Model::Jc => jc_analytic_nbar(&p),
            Model::ComEffective => com_analytic_nbar(&p),
        };
        let g2 = match spec.model {
            Model::Jc => jc_analytic_g2(&p),
            Model::ComEffective => com_analytic_g2(&p),
        };
        match nbar {
            Ok(v) if wants(&spec.outputs, Output::NbarAna) => row.nbar_ana = Some(v),
            Ok(_) => {}
            Err(e) => notes.push(format!("closed-form mean photon number: {e}")),
        }
        match g2 {
            Ok(v) if wants(&spec.outputs, Output::G2Ana) => row.g2_ana = Some(v),
            Ok(_) => {}
            Err(e) => notes.push(format!("closed-form correlation: {e}")),
        }
    }

    if want_numeric {
        match numeric_point(spec.model, &p, &spec.space) {
            Ok(n) => {
                if wants(&spec.outputs, Output::NbarNum) {
                    row.nbar_num = Some(n.nbar);
                }
                if wants(&spec.outputs, Output::G2Num) {
                    row.g2_num = Some(n.g2);
                }
                row.diagnostics.steady_residual = Some(n.residual);
                row.diagnostics.truncation_delta = Some(n.truncation_delta);
            }
            Err(e) => notes.push(format!("master-equation point: {e}")),
        }
    }

    if with_log10 {
        let g2 = row.g2_num.or(row.g2_ana);
        row.log10_g2 = g2.filter(|v| *v > 0.0).map(f64::log10);
    }
    if !notes.is_empty() {
        row.error = Some(notes.join("; "));
    }
    row
}

fn maybe_custom_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("PHOTONSTATS_THREADS").ok()?.parse().ok()?;
    if n == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
}

fn run_indexed<Fp>(total: usize, eval: Fp) -> Vec<SweepRow>
where
    Fp: Fn(usize) -> SweepRow + Sync + Send,
{
    let work = || (0..total).into_par_iter().map(&eval).collect();
    match maybe_custom_pool() {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

/// Delay-curve evaluation: one steady solve, one regression propagation,
/// one closed-route integration; rows indexed by τ.
fn run_delay_curve(spec: &SweepSpec) -> Result<SweepResult> {
    let p = resolve_params(spec, &[]);
    p.validate()?;
    let tau = spec.tau_grid.clone().unwrap_or_else(default_tau_grid);
    if tau.is_empty() {
        return Err(Error::Validation("empty delay grid".into()));
    }

    let mut rows: Vec<SweepRow> = tau.iter().map(|t| SweepRow::empty(vec![*t])).collect();

    // Closed route (moving-atom model only: the motionless model has no
    // closed delay form here).
    if matches!(spec.model, Model::ComEffective) {
        match amplitude_ode_g2tau(&p, &tau) {
            Ok(vals) => {
                for (row, v) in rows.iter_mut().zip(vals) {
                    row.g2_ana = Some(v);
                }
            }
            Err(e) => {
                for row in rows.iter_mut() {
                    row.error = Some(format!("closed-route delay curve: {e}"));
                }
            }
        }
    }

    // Regression route through the master equation.
    let numeric = (|| -> Result<(Vec<f64>, f64, f64)> {
        let (h, ops) = hamiltonian_and_collapse(spec.model, &p, &spec.space)?;
        let l = build_liouvillian(&h, &ops)?;
        let sol = steadystate(&l)?;
        let curve = g2_tau(&l, &sol.rho.matrix, &spec.space, &tau)?;
        let g2 = curve.g2_zero;
        let plus_space = SpaceSpec::new(
            spec.space.photon_cutoff + 1,
            if spec.space.has_phonons() {
                spec.space.phonon_cutoff + 1
            } else {
                0
            },
        )?;
        let rho_plus =
            enlarged_steady_state(spec.model, &p, &spec.space, &plus_space, &sol.rho.matrix)?;
        let g2_plus = g2_zero(&rho_plus, &plus_space)?;
        let delta = (g2_plus - g2).abs() / g2.abs().max(1e-300);
        Ok((curve.values, sol.residual, delta))
    })();
    match numeric {
        Ok((vals, residual, delta)) => {
            for (row, v) in rows.iter_mut().zip(vals) {
                row.g2_num = Some(v);
                row.diagnostics.steady_residual = Some(residual);
                row.diagnostics.truncation_delta = Some(delta);
            }
        }
        Err(e) => {
            let msg = format!("regression delay curve: {e}");
            for row in rows.iter_mut() {
                row.error = match row.error.take() {
                    Some(prev) => Some(format!("{prev}; {msg}")),
                    None => Some(msg.clone()),
                };
            }
        }
    }

    Ok(SweepResult {
        coordinate_names: vec!["tau".into()],
        includes_log10: false,
        rows,
    })
}

/// Run a 1-D scan (or, with zero axes and the delay output, a delay curve).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    validate_spec(spec, 0..=1)?;
    if wants(&spec.outputs, Output::G2Tau) {
        return run_delay_curve(spec);
    }
    let axis = &spec.axes[0];
    let rows = run_indexed(axis.points, |k| {
        evaluate_scalar_point(spec, vec![axis.value_at(k)], false)
    });
    Ok(SweepResult {
        coordinate_names: vec![axis.variable.name().into()],
        includes_log10: false,
        rows,
    })
}

/// Run a 2-D map in long form (first axis slow) with the log₁₀ g²(0)
/// convenience column.
pub fn run_heatmap(spec: &SweepSpec) -> Result<SweepResult> {
    validate_spec(spec, 2..=2)?;
    let (a0, a1) = (&spec.axes[0], &spec.axes[1]);
    let total = a0.points * a1.points;
    let rows = run_indexed(total, |k| {
        let (i0, i1) = (k / a1.points, k % a1.points);
        evaluate_scalar_point(spec, vec![a0.value_at(i0), a1.value_at(i1)], true)
    });
    Ok(SweepResult {
        coordinate_names: vec![a0.variable.name().into(), a1.variable.name().into()],
        includes_log10: true,
        rows,
    })
}

/// Ready-made specs reproducing the reference scans.
///
/// * `fig1c` / `fig1d` — motionless model against the cavity detuning
///   (mean photon number and g²(0) panels share one table): Δ_c/κ ∈
///   [−100, 100], 801 points, g/κ = 50, γ/κ = 1, Ω/κ = 0.1, atom carried
///   at δ_a = Δ_c + 50.
/// * `fig2c` / `fig2d` — moving atom against the phonon frequency:
///   ν/κ ∈ [0, 200], 801 points, δ_a/κ = −100, g/κ = 50, γ/κ = 1,
///   Γ/κ = 0.1, Ω/κ = 0.1, operating point Δ_c = δ_a + ν per point.
/// * `fig3a` / `fig3b` — maps over (ν, γ) at δ_a/κ = −50 with Γ/κ = 0.1
///   (a) or 1 (b); closed-form columns (the numeric route over 10201
///   points is out of interactive reach, and the weak drive keeps the
///   closed forms accurate — the scan tests verify that on subsamples).
/// * `fig3c` — map over (ν, δ_a) at γ/κ = 1, Γ/κ = 0.1.
/// * `fig4` — delay curve at the strong-drive point g/κ = 20,
///   δ_a/κ = −70, ν/κ = 50, Ω/κ = 4, γ/κ = 4, Γ/κ = 0.1, with photon and
///   phonon cutoffs of 4. Raising the cutoffs further is beyond a
///   single-machine dense solve (the next step up is a 9604-dimensional
///   superoperator); the truncation column reports the consequence
///   honestly rather than hiding it.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let weak_com_base = ModelParams {
        delta_c: -100.0,
        delta_a: -100.0,
        nu: 0.0,
        g: 50.0,
        omega: 0.1,
        kappa: 1.0,
        gamma: 1.0,
        gamma_b: 0.1,
    };
    let all_scalars = vec![
        Output::NbarNum,
        Output::G2Num,
        Output::NbarAna,
        Output::G2Ana,
    ];
    let analytic_scalars = vec![Output::NbarAna, Output::G2Ana];
    match name {
        "fig1c" | "fig1d" => Ok(SweepSpec {
            model: Model::Jc,
            axes: vec![AxisSpec {
                variable: SweepVariable::DeltaC,
                start: -100.0,
                stop: 100.0,
                points: 801,
            }],
            base: ModelParams {
                delta_c: -100.0,
                delta_a: -50.0, // carried offset δ_a − Δ_c = 50
                nu: 0.0,
                g: 50.0,
                omega: 0.1,
                kappa: 1.0,
                gamma: 1.0,
                gamma_b: 0.0,
            },
            outputs: all_scalars,
            space: SpaceSpec::new(3, 0)?,
            tau_grid: None,
        }),
        "fig2c" | "fig2d" => Ok(SweepSpec {
            model: Model::ComEffective,
            axes: vec![AxisSpec {
                variable: SweepVariable::Nu,
                start: 0.0,
                stop: 200.0,
                points: 801,
            }],
            base: weak_com_base,
            outputs: all_scalars,
            space: SpaceSpec::new(3, 3)?,
            tau_grid: None,
        }),
        "fig3a" | "fig3b" => Ok(SweepSpec {
            model: Model::ComEffective,
            axes: vec![
                AxisSpec {
                    variable: SweepVariable::Nu,
                    start: 0.0,
                    stop: 100.0,
                    points: 101,
                },
                AxisSpec {
                    variable: SweepVariable::Gamma,
                    start: 0.0,
                    stop: 15.0,
                    points: 101,
                },
            ],
            base: ModelParams {
                delta_c: -50.0,
                delta_a: -50.0,
                nu: 0.0,
                g: 50.0,
                omega: 0.1,
                kappa: 1.0,
                gamma: 1.0,
                gamma_b: if name == "fig3b" { 1.0 } else { 0.1 },
            },
            outputs: analytic_scalars,
            space: SpaceSpec::new(3, 3)?,
            tau_grid: None,
        }),
        "fig3c" => Ok(SweepSpec {
            model: Model::ComEffective,
            axes: vec![
                AxisSpec {
                    variable: SweepVariable::Nu,
                    start: 0.0,
                    stop: 100.0,
                    points: 101,
                },
                AxisSpec {
                    variable: SweepVariable::DeltaA,
                    start: -100.0,
                    stop: 0.0,
                    points: 101,
                },
            ],
            base: ModelParams {
                delta_c: -50.0,
                delta_a: -50.0,
                nu: 0.0,
                g: 50.0,
                omega: 0.1,
                kappa: 1.0,
                gamma: 1.0,
                gamma_b: 0.1,
            },
            outputs: analytic_scalars,
            space: SpaceSpec::new(3, 3)?,
            tau_grid: None,
        }),
        "fig4" => Ok(SweepSpec {
            model: Model::ComEffective,
            axes: vec![],
            base: ModelParams {
                delta_c: -20.0,
                delta_a: -70.0,
                nu: 50.0,
                g: 20.0,
                omega: 4.0,
                kappa: 1.0,
                gamma: 4.0,
                gamma_b: 0.1,
            },
            outputs: vec![Output::G2Tau],
            space: SpaceSpec::new(4, 4)?,
            tau_grid: Some(default_tau_grid()),
        }),
        other => Err(Error::Validation(format!(
            "unknown preset \"{other}\" (known: fig1c, fig1d, fig2c, fig2d, fig3a, \
             fig3b, fig3c, fig4)"
        ))),
    }
}

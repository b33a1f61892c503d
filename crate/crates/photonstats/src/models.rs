//! Hamiltonians and closed-form eigensystems.
//!
//! Two physical models share one parameter record:
//!
//! * **JC** — a driven two-level atom in a damped cavity,
//!   H = Δ a†a + δ σ⁺σ⁻ + g(a†σ⁻ + aσ⁺) + Ω(a† + a),
//!   where Δ and δ are the cavity and atom detunings from the drive laser and
//!   δ̃ = δ − Δ is their offset.
//! * **COM** — the same atom harmonically trapped, its center-of-mass motion
//!   quantized as a phonon mode b with trap frequency ν. In the lab frame the
//!   coupling is g(a†σ⁻ + aσ⁺)(b† + b); on the trap resonance Δ = δ + ν and
//!   for |δ| large against g the phonon-resonant term dominates, leaving the
//!   effective three-mode Hamiltonian
//!   H_eff = (δ+ν)(a†a + b†b) + g(a†bσ⁻ + ab†σ⁺) + Ω(a† + a),
//!   in which a photon is created only by destroying a phonon and flipping
//!   the atom down. That correlated exchange is what moves the
//!   blockade/tunneling structure onto the trap-frequency axis.
//!
//! The drive-free JC spectrum is anharmonic: manifold n splits into the
//! dressed pair E±⁽ⁿ⁾ = (n−½)Δ + δ/2 ± ½√(4ng² + δ̃²). Blockade dips and
//! two-photon tunneling peaks sit where these dressed levels cross the drive:
//! E±⁽¹⁾ = 0 or E±⁽²⁾ = 0.
//!
//! All rates are in units of the cavity half-width κ. Dressed-state
//! eigenvectors always come from numerically diagonalizing the 2×2 manifold
//! block rather than from closed-form coefficients.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::hilbert::{
    adjoint, atom_lowering, cavity_annihilation, phonon_annihilation, SpaceSpec,
};
use crate::linalg::{eigh_dense, max_abs_diff};
use crate::C64;

/// All physical rates and detunings, in units of κ.
///
/// `delta_tilde` is derived (δ̃ = δ − Δ), never stored, so the three
/// detunings can never disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Cavity–laser detuning Δ.
    pub delta_c: f64,
    /// Atom–laser detuning δ.
    pub delta_a: f64,
    /// Trap (phonon) frequency ν ≥ 0.
    pub nu: f64,
    /// Atom–cavity coupling g.
    pub g: f64,
    /// Drive strength Ω ≥ 0.
    pub omega: f64,
    /// Cavity decay κ; the unit of every other rate, fixed to 1 upstream.
    pub kappa: f64,
    /// Atomic spontaneous decay γ ≥ 0.
    pub gamma: f64,
    /// Phonon (motional) damping Γ ≥ 0.
    pub gamma_b: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            delta_c: 0.0,
            delta_a: 0.0,
            nu: 0.0,
            g: 0.0,
            omega: 0.0,
            kappa: 1.0,
            gamma: 0.0,
            gamma_b: 0.0,
        }
    }
}

impl ModelParams {
    /// Atom–cavity detuning offset δ̃ = δ − Δ.
    pub fn delta_tilde(&self) -> f64 {
        self.delta_a - self.delta_c
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) {
            return Err(Error::Validation(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        for (name, v) in [
            ("gamma", self.gamma),
            ("gamma_b", self.gamma_b),
            ("omega", self.omega),
            ("nu", self.nu),
        ] {
            if !(v >= 0.0) {
                return Err(Error::Validation(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("delta_c", self.delta_c),
            ("delta_a", self.delta_a),
            ("g", self.g),
        ] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// The COM closed forms and the effective Hamiltonian are derived on the
    /// trap resonance Δ = δ + ν; enforce it instead of silently ignoring Δ.
    pub fn require_com_resonance(&self) -> Result<()> {
        let want = self.delta_a + self.nu;
        if (self.delta_c - want).abs() > 1e-9 * (1.0 + want.abs()) {
            return Err(Error::Validation(format!(
                "COM model requires delta_c = delta_a + nu (got delta_c = {}, delta_a + nu = {})",
                self.delta_c, want
            )));
        }
        Ok(())
    }
}

/// One dressed level of an excitation manifold.
#[derive(Debug, Clone)]
pub struct DressedLevel {
    /// Excitation manifold index n ≥ 1.
    pub n: usize,
    /// Which branch: `+1.0` for E₊, `-1.0` for E₋.
    pub sign: f64,
    /// Energy in units of κ.
    pub energy: f64,
    /// Unit-normalized eigenvector on the manifold basis (|n, g⟩, |n−1, e⟩).
    pub state: Array1<C64>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn ci(im: f64) -> C64 {
    C64::new(0.0, im)
}

/// Driven JC Hamiltonian Δ a†a + δ σ⁺σ⁻ + g(a†σ⁻ + aσ⁺) + Ω(a† + a).
/// The space must have no phonon factor.
pub fn build_jc_hamiltonian(p: &ModelParams, s: &SpaceSpec) -> Result<Array2<C64>> {
    p.validate()?;
    if s.phonon_cutoff != 0 {
        return Err(Error::Validation(format!(
            "the JC model has no phonon mode; got phonon cutoff {}",
            s.phonon_cutoff
        )));
    }
    let a = cavity_annihilation(s);
    let sm = atom_lowering(s);
    let ad = adjoint(&a);
    let sp = adjoint(&sm);
    let mut h = ad.dot(&a).mapv(|z| z * c(p.delta_c));
    h = h + sp.dot(&sm).mapv(|z| z * c(p.delta_a));
    h = h + (&ad.dot(&sm) + &a.dot(&sp)).mapv(|z| z * c(p.g));
    h = h + (&ad + &a).mapv(|z| z * c(p.omega));
    Ok(h)
}

/// Effective COM Hamiltonian on the trap resonance Δ = δ + ν:
/// (δ+ν)(a†a + b†b) + g(a†bσ⁻ + ab†σ⁺) + Ω(a† + a).
pub fn build_com_effective_hamiltonian(p: &ModelParams, s: &SpaceSpec) -> Result<Array2<C64>> {
    p.validate()?;
    if s.phonon_cutoff < 1 {
        return Err(Error::Validation(
            "the COM model needs a phonon cutoff of at least 1".into(),
        ));
    }
    let w = p.delta_a + p.nu;
    let a = cavity_annihilation(s);
    let b = phonon_annihilation(s);
    let sm = atom_lowering(s);
    let ad = adjoint(&a);
    let bd = adjoint(&b);
    let mut h = (&ad.dot(&a) + &bd.dot(&b)).mapv(|z| z * c(w));
    let exchange = ad.dot(&b).dot(&sm);
    h = h + (&exchange + &adjoint(&exchange)).mapv(|z| z * c(p.g));
    h = h + (&ad + &a).mapv(|z| z * c(p.omega));
    Ok(h)
}

/// Full COM Hamiltonian in the laser frame:
/// Δ a†a + δ σ⁺σ⁻ + ν b†b + g(a†σ⁻ + aσ⁺)(b† + b) + Ω(a† + a).
pub fn build_full_com_hamiltonian(p: &ModelParams, s: &SpaceSpec) -> Result<Array2<C64>> {
    p.validate()?;
    if s.phonon_cutoff < 1 {
        return Err(Error::Validation(
            "the full COM model needs a phonon cutoff of at least 1".into(),
        ));
    }
    let a = cavity_annihilation(s);
    let b = phonon_annihilation(s);
    let sm = atom_lowering(s);
    let ad = adjoint(&a);
    let bd = adjoint(&b);
    let sp = adjoint(&sm);
    let mut h = ad.dot(&a).mapv(|z| z * c(p.delta_c));
    h = h + sp.dot(&sm).mapv(|z| z * c(p.delta_a));
    h = h + bd.dot(&b).mapv(|z| z * c(p.nu));
    let jc_like = &ad.dot(&sm) + &a.dot(&sp);
    let b_quad = &bd + &b;
    h = h + jc_like.dot(&b_quad).mapv(|z| z * c(p.g));
    h = h + (&ad + &a).mapv(|z| z * c(p.omega));
    Ok(h)
}

/// Non-Hermitian damped Hamiltonian h − i(κ a†a + γ σ⁺σ⁻ + Γ b†b); the
/// phonon term vanishes identically when the space has no phonons.
pub fn damped_hamiltonian(h: &Array2<C64>, p: &ModelParams, s: &SpaceSpec) -> Result<Array2<C64>> {
    let herm_dev = max_abs_diff(h, &adjoint(h));
    if herm_dev > 1e-12 {
        return Err(Error::Validation(format!(
            "damped_hamiltonian expects a Hermitian input (deviation {herm_dev:.2e})"
        )));
    }
    let a = cavity_annihilation(s);
    let sm = atom_lowering(s);
    let mut damp = adjoint(&a).dot(&a).mapv(|z| z * c(p.kappa));
    damp = damp + adjoint(&sm).dot(&sm).mapv(|z| z * c(p.gamma));
    if s.has_phonons() {
        let b = phonon_annihilation(s);
        damp = damp + adjoint(&b).dot(&b).mapv(|z| z * c(p.gamma_b));
    }
    Ok(h + &damp.mapv(|z| z * ci(-1.0)))
}

/// Dressed splitting Δ′ = √(4ng² + δ̃²) of manifold n.
fn dressed_gap(n: usize, p: &ModelParams) -> f64 {
    (4.0 * n as f64 * p.g * p.g + p.delta_tilde().powi(2)).sqrt()
}

/// Closed-form dressed energies E±⁽ⁿ⁾ = (n−½)Δ + δ/2 ± ½√(4ng²+δ̃²),
/// with eigenvectors from numerical diagonalization of the manifold block
/// [[nΔ, √n·g], [√n·g, (n−1)Δ + δ]] on the basis (|n, g⟩, |n−1, e⟩).
pub fn jc_dressed_levels(n: usize, p: &ModelParams) -> Result<(DressedLevel, DressedLevel)> {
    if n < 1 {
        return Err(Error::Validation(
            "dressed manifolds start at n = 1".into(),
        ));
    }
    p.validate()?;
    let nf = n as f64;
    let base = (nf - 0.5) * p.delta_c + 0.5 * p.delta_a;
    let gap = dressed_gap(n, p);
    let e_plus = base + 0.5 * gap;
    let e_minus = base - 0.5 * gap;

    let mut block = Array2::<C64>::zeros((2, 2));
    block[[0, 0]] = c(nf * p.delta_c);
    block[[1, 1]] = c((nf - 1.0) * p.delta_c + p.delta_a);
    block[[0, 1]] = c(nf.sqrt() * p.g);
    block[[1, 0]] = c(nf.sqrt() * p.g);
    let (vals, vecs) = eigh_dense(&block)?;
    // eigh returns ascending order: index 0 is the minus branch.
    debug_assert!((vals[0] - e_minus).abs() < 1e-8 * (1.0 + e_minus.abs()));
    let minus = DressedLevel {
        n,
        sign: -1.0,
        energy: e_minus,
        state: vecs.column(0).to_owned(),
    };
    let plus = DressedLevel {
        n,
        sign: 1.0,
        energy: e_plus,
        state: vecs.column(1).to_owned(),
    };
    Ok((minus, plus))
}

/// Drive resonances on the Δ axis at fixed offset δ̃ = δ − Δ: the Δ values
/// where a dressed level of manifold n meets the n-photon drive energy,
/// E±⁽ⁿ⁾(Δ) = 0. Under δ = Δ + δ̃ the energies are linear in Δ, so each
/// branch has exactly one zero: Δ = −(δ̃ ± √(4ng²+δ̃²))/(2n).
///
/// Returns `[two₊, two₋, one₊, one₋]`: the two-photon pair (n = 2) first,
/// then the single-photon pair (n = 1), each with the + branch first.
pub fn two_photon_resonances(p: &ModelParams) -> Result<Vec<f64>> {
    p.validate()?;
    if !(p.g > 0.0) {
        return Err(Error::Validation(format!(
            "resonance positions need g > 0, got {}",
            p.g
        )));
    }
    let dt = p.delta_tilde();
    let mut out = Vec::with_capacity(4);
    for n in [2usize, 1] {
        let gap = dressed_gap(n, p);
        for sign in [1.0f64, -1.0] {
            out.push(-(dt + sign * gap) / (2.0 * n as f64));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_dense, max_abs};

    fn fig1_params(delta_c: f64) -> ModelParams {
        // Strong-coupling set used for the blockade sweeps: g = 50, γ = 1,
        // Ω = 0.1, with the atom offset δ̃ = 50 so δ = Δ + 50.
        ModelParams {
            delta_c,
            delta_a: delta_c + 50.0,
            nu: 0.0,
            g: 50.0,
            omega: 0.1,
            kappa: 1.0,
            gamma: 1.0,
            gamma_b: 0.1,
        }
    }

    fn com_params(delta_a: f64, nu: f64, g: f64) -> ModelParams {
        ModelParams {
            delta_c: delta_a + nu,
            delta_a,
            nu,
            g,
            omega: 0.1,
            kappa: 1.0,
            gamma: 1.0,
            gamma_b: 0.1,
        }
    }

    fn hermiticity_dev(h: &Array2<C64>) -> f64 {
        max_abs_diff(h, &adjoint(h))
    }

    #[test]
    fn jc_diagonal_when_uncoupled() {
        let s = SpaceSpec::new(3, 0).unwrap();
        let p = ModelParams {
            delta_c: 2.0,
            delta_a: -1.5,
            ..Default::default()
        };
        let h = build_jc_hamiltonian(&p, &s).unwrap();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if i != j {
                    assert!(h[[i, j]].norm() < 1e-15);
                }
            }
        }
        // Diagonal entries are nΔ + mδ.
        for n in 0..=3 {
            for m in 0..2 {
                let idx = s.basis_index(n, 0, m);
                let want = n as f64 * 2.0 + m as f64 * (-1.5);
                assert!((h[[idx, idx]] - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let s0 = SpaceSpec::new(3, 0).unwrap();
        let s1 = SpaceSpec::new(3, 3).unwrap();
        let p = fig1_params(-37.0);
        let pc = com_params(-100.0, 60.0, 50.0);
        assert!(hermiticity_dev(&build_jc_hamiltonian(&p, &s0).unwrap()) < 1e-14);
        assert!(hermiticity_dev(&build_com_effective_hamiltonian(&pc, &s1).unwrap()) < 1e-14);
        assert!(hermiticity_dev(&build_full_com_hamiltonian(&pc, &s1).unwrap()) < 1e-14);
    }

    #[test]
    fn space_preconditions_enforced() {
        let s_ph = SpaceSpec::new(3, 2).unwrap();
        let s_jc = SpaceSpec::new(3, 0).unwrap();
        let p = com_params(-50.0, 30.0, 5.0);
        assert!(build_jc_hamiltonian(&p, &s_ph).is_err());
        assert!(build_com_effective_hamiltonian(&p, &s_jc).is_err());
        assert!(build_full_com_hamiltonian(&p, &s_jc).is_err());
    }

    #[test]
    fn excitation_number_conserved_without_drive() {
        // With Ω = 0, both the JC and the effective COM Hamiltonian commute
        // with a†a + σ⁺σ⁻ (away from truncation edges this is exact).
        let s = SpaceSpec::new(3, 0).unwrap();
        let mut p = fig1_params(12.0);
        p.omega = 0.0;
        let h = build_jc_hamiltonian(&p, &s).unwrap();
        let a = cavity_annihilation(&s);
        let sm = atom_lowering(&s);
        let n_op = adjoint(&a).dot(&a) + adjoint(&sm).dot(&sm);
        let comm = &h.dot(&n_op) - &n_op.dot(&h);
        assert!(max_abs(&comm) < 1e-12);

        let s1 = SpaceSpec::new(3, 3).unwrap();
        let mut pc = com_params(-100.0, 40.0, 50.0);
        pc.omega = 0.0;
        let hc = build_com_effective_hamiltonian(&pc, &s1).unwrap();
        let a1 = cavity_annihilation(&s1);
        let sm1 = atom_lowering(&s1);
        let n1 = adjoint(&a1).dot(&a1) + adjoint(&sm1).dot(&sm1);
        let comm1 = &hc.dot(&n1) - &n1.dot(&hc);
        assert!(max_abs(&comm1) < 1e-12);
    }

    #[test]
    fn dressed_energies_match_dense_diagonalization() {
        // Closed-form E±⁽ⁿ⁾ against the eigensolver, n ≤ 3.
        let s = SpaceSpec::new(3, 0).unwrap();
        let mut p = fig1_params(-17.0);
        p.omega = 0.0;
        let h = build_jc_hamiltonian(&p, &s).unwrap();
        let (evals, _) = eigh_dense(&h).unwrap();
        for n in 1..=3 {
            let (minus, plus) = jc_dressed_levels(n, &p).unwrap();
            for level in [&minus, &plus] {
                let best = evals
                    .iter()
                    .map(|e| (e - level.energy).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    best < 1e-10,
                    "n={n} sign={} energy {} off by {best:.2e}",
                    level.sign,
                    level.energy
                );
            }
        }
    }

    #[test]
    fn dressed_states_are_eigenvectors_in_the_composite_space() {
        let s = SpaceSpec::new(3, 0).unwrap();
        let mut p = fig1_params(33.0);
        p.omega = 0.0;
        let h = build_jc_hamiltonian(&p, &s).unwrap();
        for n in 1..=3 {
            let (minus, plus) = jc_dressed_levels(n, &p).unwrap();
            for level in [minus, plus] {
                let norm: f64 = level.state.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm.sqrt() - 1.0).abs() < 1e-12);
                // Embed (|n,g⟩, |n−1,e⟩) coefficients into the full space.
                let mut v = Array1::<C64>::zeros(s.dim());
                v[s.basis_index(n, 0, 0)] = level.state[0];
                v[s.basis_index(n - 1, 0, 1)] = level.state[1];
                let hv = h.dot(&v);
                let dev: f64 = hv
                    .iter()
                    .zip(v.iter())
                    .map(|(hvi, vi)| (hvi - vi * C64::new(level.energy, 0.0)).norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-10, "n={n} residual {dev:.2e}");
            }
        }
    }

    #[test]
    fn resonant_vacuum_rabi_splitting() {
        // δ̃ = 0, n = 1: E± = Δ ± g; n = 2 splitting 2√2·g.
        let p = ModelParams {
            delta_c: 7.0,
            delta_a: 7.0,
            g: 3.0,
            ..Default::default()
        };
        let (m1, p1) = jc_dressed_levels(1, &p).unwrap();
        assert!((p1.energy - (7.0 + 3.0)).abs() < 1e-12);
        assert!((m1.energy - (7.0 - 3.0)).abs() < 1e-12);
        let (m2, p2) = jc_dressed_levels(2, &p).unwrap();
        assert!((p2.energy - m2.energy - 2.0 * 2f64.sqrt() * 3.0).abs() < 1e-12);
    }

    #[test]
    fn resonance_positions() {
        let p = fig1_params(0.0);
        let r = two_photon_resonances(&p).unwrap();
        // Two-photon pair at −50 and 25, single-photon pair at −25(1±√5).
        assert!((r[0] - (-50.0)).abs() < 1e-9);
        assert!((r[1] - 25.0).abs() < 1e-9);
        assert!((r[2] - (-25.0 * (1.0 + 5f64.sqrt()))).abs() < 1e-9);
        assert!((r[3] - 25.0 * (5f64.sqrt() - 1.0)).abs() < 1e-9);
        // Substituting each zero back gives |E| ≤ 1e−9.
        for (idx, &delta_c) in r.iter().enumerate() {
            let n = if idx < 2 { 2 } else { 1 };
            let pp = fig1_params(delta_c);
            let (minus, plus) = jc_dressed_levels(n, &pp).unwrap();
            let closest = plus.energy.abs().min(minus.energy.abs());
            assert!(closest < 1e-9, "resonance {idx} leaves |E| = {closest:.2e}");
        }
    }

    #[test]
    fn effective_com_splittings() {
        // Ω = 0 spectrum contains (δ+ν) ± g and 2(δ+ν) ± √2·g.
        let mut p = com_params(-100.0, 60.0, 50.0);
        p.omega = 0.0;
        let s = SpaceSpec::new(3, 3).unwrap();
        let h = build_com_effective_hamiltonian(&p, &s).unwrap();
        let (evals, _) = eigh_dense(&h).unwrap();
        let w = p.delta_a + p.nu;
        for want in [
            w - p.g,
            w + p.g,
            2.0 * w - 2f64.sqrt() * p.g,
            2.0 * w + 2f64.sqrt() * p.g,
        ] {
            let best = evals
                .iter()
                .map(|e| (e - want).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "missing eigenvalue {want}, best {best:.2e}");
        }
    }

    #[test]
    fn full_com_uncoupled_spectrum() {
        let p = ModelParams {
            delta_c: 1.5,
            delta_a: -2.0,
            nu: 0.7,
            ..Default::default()
        };
        let s = SpaceSpec::new(2, 2).unwrap();
        let h = build_full_com_hamiltonian(&p, &s).unwrap();
        // g = Ω = 0: diagonal with entries nΔ + mν + qδ.
        for n in 0..=2 {
            for m in 0..=2 {
                for q in 0..2 {
                    let idx = s.basis_index(n, m, q);
                    let want = n as f64 * 1.5 + m as f64 * 0.7 + q as f64 * (-2.0);
                    assert!((h[[idx, idx]] - C64::new(want, 0.0)).norm() < 1e-14);
                }
            }
        }
        // One phonon, everything else idle: energy ν.
        let idx = s.basis_index(0, 1, 0);
        assert!((h[[idx, idx]] - C64::new(0.7, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn full_spectrum_approaches_effective_spectrum() {
        // On resonance Δ = δ + ν with |δ| ≫ g the low-lying full-model
        // spectrum approaches the effective one; the deviation scales like
        // g²/|δ|, so it worsens when g doubles and improves when |δ| grows.
        let worst_dev = |delta_a: f64, g: f64| -> f64 {
            let mut p = com_params(delta_a, 30.0, g);
            p.omega = 0.0;
            let s_full = SpaceSpec::new(2, 14).unwrap();
            let h = build_full_com_hamiltonian(&p, &s_full).unwrap();
            let (evals, _) = eigh_dense(&h).unwrap();
            let w = delta_a + 30.0;
            [w - g, w + g]
                .iter()
                .map(|want| {
                    evals
                        .iter()
                        .map(|e| (e - want).abs())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let d_g5 = worst_dev(-50.0, 5.0);
        let d_g10 = worst_dev(-50.0, 10.0);
        let d_far = worst_dev(-100.0, 5.0);
        assert!(d_g5 < 1.2 * 25.0 / 50.0, "one-excitation deviation {d_g5:.3}");
        assert!(d_g10 < 1.2 * 100.0 / 50.0);
        assert!(d_g5 < d_g10, "agreement must degrade with g");
        assert!(d_far < d_g5, "agreement must improve as |delta_a| grows");
    }

    #[test]
    fn damped_hamiltonian_structure() {
        let s = SpaceSpec::new(2, 0).unwrap();
        let p = ModelParams {
            delta_c: 4.0,
            delta_a: 1.0,
            g: 2.0,
            ..Default::default()
        };
        let h = build_jc_hamiltonian(&p, &s).unwrap();
        // All decay rates zero → output equals input exactly.
        let p_none = ModelParams { kappa: 0.0, ..p };
        let unchanged = damped_hamiltonian(&h, &p_none, &s).unwrap();
        assert!(max_abs_diff(&unchanged, &h) < 1e-15);
        let hd = damped_hamiltonian(&h, &p, &s).unwrap();
        // Anti-Hermitian part is −i·κ·a†a when γ = Γ = 0.
        let anti = (&hd - &adjoint(&hd)).mapv(|z| z * C64::new(0.5, 0.0));
        let a = cavity_annihilation(&s);
        let want = adjoint(&a).dot(&a).mapv(|z| z * C64::new(0.0, -1.0));
        assert!(max_abs_diff(&anti, &want) < 1e-13);
        // Non-Hermitian input is rejected.
        assert!(damped_hamiltonian(&hd, &p, &s).is_err());
    }

    #[test]
    fn damped_one_excitation_widths() {
        // The damped one-excitation block of the effective COM model has
        // eigenvalues whose imaginary parts sum to −(κ+γ+Γ): half-widths
        // distribute between the branches but their total is fixed.
        let p = com_params(-100.0, 50.0, 50.0);
        let w = p.delta_a + p.nu;
        let mut block = Array2::<C64>::zeros((2, 2));
        block[[0, 0]] = C64::new(w, -p.kappa);
        block[[1, 1]] = C64::new(w, -(p.gamma + p.gamma_b));
        block[[0, 1]] = C64::new(p.g, 0.0);
        block[[1, 0]] = C64::new(p.g, 0.0);
        let (vals, _) = eig_dense(&block).unwrap();
        let im_sum: f64 = vals.iter().map(|z| z.im).sum();
        assert!((im_sum + (p.kappa + p.gamma + p.gamma_b)).abs() < 1e-10);
        assert!(vals.iter().all(|z| z.im < 0.0));
    }

    #[test]
    fn com_resonance_guard() {
        let mut p = com_params(-100.0, 50.0, 50.0);
        assert!(p.require_com_resonance().is_ok());
        p.delta_c += 0.5;
        assert!(p.require_com_resonance().is_err());
    }

    #[test]
    fn parameter_validation() {
        let mut p = ModelParams::default();
        assert!(p.validate().is_ok());
        p.gamma = -0.1;
        assert!(p.validate().is_err());
        p.gamma = 0.0;
        p.kappa = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn resonances_need_positive_coupling() {
        let p = ModelParams::default();
        assert!(two_photon_resonances(&p).is_err());
        assert!(jc_dressed_levels(0, &fig1_params(0.0)).is_err());
    }
}

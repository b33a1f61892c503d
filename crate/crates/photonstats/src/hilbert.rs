//! Truncated tensor-product Hilbert spaces and the elementary ladder
//! operators embedded in them.
//!
//! The composite space is always ordered photon ⊗ phonon ⊗ atom, with the
//! photon index slowest and the atom index fastest: basis state
//! |n_a, n_b, i⟩ lives at flat index `(n_a · (phonon_cutoff+1) + n_b) · 2 + i`.
//! The atom basis is {|g⟩, |e⟩} with index 0 = |g⟩.
//!
//! A phonon cutoff of 0 means a one-dimensional phonon factor, i.e. no
//! motional mode at all; the pure Jaynes–Cummings system is exactly that
//! limit, so a single code path serves both models.

use ndarray::linalg::kron;
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::C64;

/// Which tensor factor an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Photon,
    Phonon,
    Atom,
}

/// Layout of the truncated composite space.
///
/// `photon_cutoff` / `phonon_cutoff` are the largest retained occupation
/// numbers (so the factor dimensions are cutoff + 1). The atom is always a
/// two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceSpec {
    pub photon_cutoff: usize,
    pub phonon_cutoff: usize,
}

impl SpaceSpec {
    /// A photon cutoff below 2 cannot represent two-photon correlations, so
    /// it is rejected outright.
    pub fn new(photon_cutoff: usize, phonon_cutoff: usize) -> Result<Self> {
        if photon_cutoff < 2 {
            return Err(Error::Validation(format!(
                "photon cutoff must be at least 2 (g² needs two-photon states), got {photon_cutoff}"
            )));
        }
        Ok(SpaceSpec {
            photon_cutoff,
            phonon_cutoff,
        })
    }

    pub fn photon_dim(&self) -> usize {
        self.photon_cutoff + 1
    }

    pub fn phonon_dim(&self) -> usize {
        self.phonon_cutoff + 1
    }

    pub const fn atom_dim(&self) -> usize {
        2
    }

    /// Total dimension D = (photon_cutoff+1) · (phonon_cutoff+1) · 2.
    pub fn dim(&self) -> usize {
        self.photon_dim() * self.phonon_dim() * self.atom_dim()
    }

    pub fn has_phonons(&self) -> bool {
        self.phonon_cutoff > 0
    }

    fn slot_dim(&self, slot: Subsystem) -> usize {
        match slot {
            Subsystem::Photon => self.photon_dim(),
            Subsystem::Phonon => self.phonon_dim(),
            Subsystem::Atom => self.atom_dim(),
        }
    }

    /// Flat index of |n_a, n_b, i⟩ in the fixed ordering.
    pub fn basis_index(&self, n_photon: usize, n_phonon: usize, atom: usize) -> usize {
        debug_assert!(n_photon < self.photon_dim());
        debug_assert!(n_phonon < self.phonon_dim());
        debug_assert!(atom < 2);
        (n_photon * self.phonon_dim() + n_phonon) * 2 + atom
    }

    /// Unit basis vector |n_a, n_b, i⟩.
    pub fn basis_state(&self, n_photon: usize, n_phonon: usize, atom: usize) -> Array1<C64> {
        let mut v = Array1::zeros(self.dim());
        v[self.basis_index(n_photon, n_phonon, atom)] = C64::new(1.0, 0.0);
        v
    }
}

/// Bosonic annihilation operator on a truncated Fock space:
/// (cutoff+1)×(cutoff+1) with entry √n at (n−1, n).
pub fn annihilation(cutoff: usize) -> Array2<C64> {
    let d = cutoff + 1;
    let mut a = Array2::zeros((d, d));
    for n in 1..d {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Atomic lowering operator σ⁻ = |g⟩⟨e| in the basis {|g⟩, |e⟩}.
pub fn sigma_minus() -> Array2<C64> {
    let mut s = Array2::zeros((2, 2));
    s[[0, 1]] = C64::new(1.0, 0.0);
    s
}

/// Conjugate transpose.
pub fn adjoint(op: &Array2<C64>) -> Array2<C64> {
    op.t().mapv(|z| z.conj())
}

fn identity(d: usize) -> Array2<C64> {
    Array2::eye(d)
}

/// Lift a single-subsystem operator to the composite space by tensoring with
/// identities on the other factors, in the fixed photon ⊗ phonon ⊗ atom order.
pub fn embed(op: &Array2<C64>, slot: Subsystem, space: &SpaceSpec) -> Result<Array2<C64>> {
    let want = space.slot_dim(slot);
    if op.nrows() != want || op.ncols() != want {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but the {:?} factor has dimension {}",
            op.nrows(),
            op.ncols(),
            slot,
            want
        )));
    }
    let out = match slot {
        Subsystem::Photon => kron(
            op,
            &identity(space.phonon_dim() * space.atom_dim()),
        ),
        Subsystem::Phonon => kron(
            &kron(&identity(space.photon_dim()), op),
            &identity(space.atom_dim()),
        ),
        Subsystem::Atom => kron(
            &identity(space.photon_dim() * space.phonon_dim()),
            op,
        ),
    };
    Ok(out)
}

/// Cavity annihilation operator embedded in the composite space.
pub fn cavity_annihilation(space: &SpaceSpec) -> Array2<C64> {
    embed(&annihilation(space.photon_cutoff), Subsystem::Photon, space)
        .expect("photon embedding cannot fail for a matching cutoff")
}

/// Phonon annihilation operator embedded in the composite space. With
/// phonon cutoff 0 this is the zero operator on the trivial factor.
pub fn phonon_annihilation(space: &SpaceSpec) -> Array2<C64> {
    embed(&annihilation(space.phonon_cutoff), Subsystem::Phonon, space)
        .expect("phonon embedding cannot fail for a matching cutoff")
}

/// Atomic lowering operator embedded in the composite space.
pub fn atom_lowering(space: &SpaceSpec) -> Array2<C64> {
    embed(&sigma_minus(), Subsystem::Atom, space)
        .expect("atom embedding cannot fail for dimension 2")
}

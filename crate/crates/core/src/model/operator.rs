use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::Basis;
use super::state::StateVector;
use crate::error::{Error, Result};

type C64 = Complex64;

/// Dense complex matrix acting on one of the fixed bases.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(basis: Basis, entries: DMatrix<C64>) -> Result<Self> {
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(OperatorMatrix { basis, entries })
    }

    pub(crate) fn from_parts(basis: Basis, entries: DMatrix<C64>) -> Self {
        debug_assert_eq!(entries.nrows(), basis.dim());
        OperatorMatrix { basis, entries }
    }

    pub fn zeros(basis: Basis) -> Self {
        let d = basis.dim();
        OperatorMatrix { basis, entries: DMatrix::zeros(d, d) }
    }

    pub fn identity(basis: Basis) -> Self {
        let d = basis.dim();
        OperatorMatrix { basis, entries: DMatrix::identity(d, d) }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix { basis: self.basis, entries: self.entries.adjoint() }
    }

    /// Largest entrywise |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest entrywise |U†U − 1|.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.entries.adjoint() * &self.entries - DMatrix::<C64>::identity(d, d)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        max_abs(&(&self.entries - &other.entries))
    }

    /// Spectral norm.
    pub fn operator_norm(&self) -> f64 {
        self.entries.clone().singular_values().max()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != self.basis {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        Ok(StateVector::from_parts(self.basis, &self.entries * state.amplitudes()))
    }

    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rhs.basis != self.basis {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rhs.dim() });
        }
        Ok(OperatorMatrix { basis: self.basis, entries: &self.entries * &rhs.entries })
    }

    /// Restricts a pair-basis operator to the symmetric subspace, S† A S.
    pub fn to_symmetric(&self) -> Result<OperatorMatrix> {
        if self.basis != Basis::Pair {
            return Err(Error::DimensionMismatch { expected: 4, found: self.dim() });
        }
        let s = symmetric_isometry();
        Ok(OperatorMatrix { basis: Basis::Symmetric, entries: s.adjoint() * &self.entries * &s })
    }

    /// exp(−i A t) for Hermitian A.
    pub fn unitary_exp(&self, t: f64) -> OperatorMatrix {
        OperatorMatrix { basis: self.basis, entries: hermitian_exp(&self.entries, t) }
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.basis, rhs.basis, "adding operators on different bases");
        OperatorMatrix { basis: self.basis, entries: &self.entries + &rhs.entries }
    }
}

impl std::ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.basis, rhs.basis, "subtracting operators on different bases");
        OperatorMatrix { basis: self.basis, entries: &self.entries - &rhs.entries }
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The 4×3 isometry whose columns are |gg⟩, |+⟩, |ee⟩ in the pair basis.
pub fn symmetric_isometry() -> DMatrix<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut s = DMatrix::zeros(4, 3);
    s[(0, 0)] = C64::new(1.0, 0.0);
    s[(1, 1)] = C64::new(r, 0.0);
    s[(2, 1)] = C64::new(r, 0.0);
    s[(3, 2)] = C64::new(1.0, 0.0);
    s
}

/// exp(−i H t) through the Hermitian eigendecomposition of `h`.
pub(crate) fn hermitian_exp(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Single-atom and two-atom building blocks in the fixed basis ordering.
pub mod ops {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// |e⟩⟨g| for one atom in (g, e).
    pub fn sigma_eg() -> DMatrix<C64> {
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 0)] = c(1.0);
        m
    }

    /// |e⟩⟨e| for one atom.
    pub fn sigma_ee() -> DMatrix<C64> {
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 1)] = c(1.0);
        m
    }

    pub fn sigma_x() -> DMatrix<C64> {
        let eg = sigma_eg();
        &eg + eg.adjoint()
    }

    pub fn identity2() -> DMatrix<C64> {
        DMatrix::identity(2, 2)
    }

    /// Embeds a single-atom operator on atom `which` (0 = A, 1 = B) into the pair basis.
    pub fn on_atom(op: &DMatrix<C64>, which: usize) -> DMatrix<C64> {
        match which {
            0 => op.kronecker(&identity2()),
            1 => identity2().kronecker(op),
            _ => panic!("atom index {which} out of range"),
        }
    }

    /// Σ_j σ_eg^j in the full basis for the given atom count.
    pub fn collective_raising(atoms: crate::model::AtomCount) -> DMatrix<C64> {
        match atoms {
            crate::model::AtomCount::One => sigma_eg(),
            crate::model::AtomCount::Two => on_atom(&sigma_eg(), 0) + on_atom(&sigma_eg(), 1),
        }
    }

    /// Σ_j σ_ee^j.
    pub fn excitation_number(atoms: crate::model::AtomCount) -> DMatrix<C64> {
        match atoms {
            crate::model::AtomCount::One => sigma_ee(),
            crate::model::AtomCount::Two => on_atom(&sigma_ee(), 0) + on_atom(&sigma_ee(), 1),
        }
    }

    /// σ_ee¹ σ_ee², the projector on |ee⟩.
    pub fn pair_projector() -> DMatrix<C64> {
        on_atom(&sigma_ee(), 0) * on_atom(&sigma_ee(), 1)
    }

    /// Correlated Rabi operator X = σ_eg¹σ_ee² + σ_eg²σ_ee¹.
    pub fn correlated_raising() -> DMatrix<C64> {
        on_atom(&sigma_eg(), 0) * on_atom(&sigma_ee(), 1)
            + on_atom(&sigma_eg(), 1) * on_atom(&sigma_ee(), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlated_raising_entries() {
        let x = ops::correlated_raising();
        // |ge⟩ → |ee⟩ and |eg⟩ → |ee⟩ only
        let mut nonzero = vec![];
        for r in 0..4 {
            for c in 0..4 {
                if x[(r, c)].norm() > 0.0 {
                    nonzero.push((r, c));
                }
            }
        }
        assert_eq!(nonzero, vec![(3, 1), (3, 2)]);
    }

    #[test]
    fn symmetric_isometry_is_orthonormal() {
        let s = symmetric_isometry();
        let g = s.adjoint() * &s;
        assert!(max_abs(&(g - DMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = OperatorMatrix::zeros(Basis::Pair);
        assert!(z.unitary_exp(3.0).max_abs_diff(&OperatorMatrix::identity(Basis::Pair)) < 1e-15);
    }

    #[test]
    fn exp_matches_closed_form_for_sigma_x() {
        let h = OperatorMatrix::new(Basis::Single, ops::sigma_x()).unwrap();
        let t = 0.7;
        let u = h.unitary_exp(t);
        assert!((u.get(0, 0) - C64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((u.get(0, 1) - C64::new(0.0, -t.sin())).norm() < 1e-14);
        assert!(u.is_unitary(1e-14));
    }
}

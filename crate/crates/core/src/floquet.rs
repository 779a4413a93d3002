//! Quasi-energies and Floquet modes of a monodromy operator, participation
//! ratios and branch tracking across parameter sweeps.

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{Basis, BasisLabel, OperatorMatrix, StateVector};
use crate::C64;

/// Default eigenphase tolerance (radians) for treating modes as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-5;

/// Unitarity defect above which a monodromy operator is rejected.
pub const UNITARITY_TOL: f64 = 1e-8;

/// Folds a quasi-energy into (−ω/2, ω/2].
pub fn fold_quasi_energy(eps: f64, omega: f64) -> f64 {
    let r = eps.rem_euclid(omega);
    if r > 0.5 * omega {
        r - omega
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Spectral data of U(T) = Σ_k e^{−iε_kT}|φ_k⟩⟨φ_k|, sorted by quasi-energy.
#[derive(Clone, Debug, PartialEq)]
pub struct FloquetDecomposition {
    basis: Basis,
    omega: f64,
    quasi_energies: Vec<f64>,
    eigenphases: Vec<f64>,
    eigenvalues: Vec<C64>,
    modes: Vec<StateVector>,
    degeneracy_groups: Vec<Vec<usize>>,
}

impl FloquetDecomposition {
    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// ε_k in (−ω/2, ω/2], ascending.
    pub fn quasi_energies(&self) -> &[f64] {
        &self.quasi_energies
    }

    /// θ_k = ε_k T in (−π, π].
    pub fn eigenphases(&self) -> &[f64] {
        &self.eigenphases
    }

    /// λ_k = e^{−iθ_k} as returned by the eigensolver.
    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn modes(&self) -> &[StateVector] {
        &self.modes
    }

    pub fn degeneracy_groups(&self) -> &[Vec<usize>] {
        &self.degeneracy_groups
    }

    /// Σ_k λ_k |φ_k⟩⟨φ_k|.
    pub fn reconstruct(&self) -> OperatorMatrix {
        let d = self.dim();
        let mut u = DMatrix::<C64>::zeros(d, d);
        for (lambda, phi) in self.eigenvalues.iter().zip(&self.modes) {
            let v = phi.amplitudes();
            u += v * v.adjoint() * *lambda;
        }
        OperatorMatrix::from_parts(self.basis, u)
    }

    /// Largest entrywise deviation of the mode Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let g = self.modes[i].amplitudes().dotc(self.modes[j].amplitudes());
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - want).norm());
            }
        }
        worst
    }

    /// Smallest circular distance between two eigenphases (radians).
    pub fn min_eigenphase_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (a, b) in self.eigenphases.iter().tuple_combinations() {
            gap = gap.min(circular_distance(*a, *b));
        }
        gap
    }

    /// Smallest quasi-energy separation modulo ω.
    pub fn min_quasi_energy_gap(&self) -> f64 {
        self.min_eigenphase_gap() / self.period()
    }

    /// Index of the degeneracy group that contains mode `k`.
    pub fn group_of(&self, k: usize) -> usize {
        self.degeneracy_groups.iter().position(|g| g.contains(&k)).expect("every mode has a group")
    }
}

/// Decomposes `u` with the default degeneracy tolerance.
pub fn floquet_decompose(u: &OperatorMatrix, omega: f64) -> Result<FloquetDecomposition> {
    floquet_decompose_with(u, omega, DEFAULT_DEGENERACY_TOL)
}

/// Decomposes a unitary monodromy operator.
///
/// Eigenvectors come from the complex Schur form, which is diagonal for
/// normal matrices. Inside each degeneracy group the returned basis starts
/// with the normalized projection of the first computational basis vector
/// that has weight in the group; the remaining vectors complete the group
/// by Gram–Schmidt over the computational basis in order. Each mode is then
/// rotated so that its largest component is real and positive.
pub fn floquet_decompose_with(u: &OperatorMatrix, omega: f64, degeneracy_tol: f64) -> Result<FloquetDecomposition> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega = {omega} <= 0")));
    }
    let defect = u.unitarity_defect();
    if !(defect <= UNITARITY_TOL) {
        return Err(Error::NotUnitary { defect });
    }
    let d = u.dim();
    let period = TAU / omega;
    let (q, t) = nalgebra::Schur::new(u.entries().clone()).unpack();
    let lambdas: Vec<C64> = (0..d).map(|k| t[(k, k)]).collect();
    let phases: Vec<f64> = lambdas.iter().map(|l| -l.arg()).map(|th| if th <= -PI { th + TAU } else { th }).collect();

    let groups = group_phases(&phases, degeneracy_tol);
    let mut modes: Vec<(DVector<C64>, C64)> = Vec::with_capacity(d);
    for group in &groups {
        let cols: Vec<DVector<C64>> = group.iter().map(|&k| q.column(k).into_owned()).collect();
        for v in orient_group(&cols, d) {
            let lambda = if group.len() == 1 {
                lambdas[group[0]]
            } else {
                let l = v.dotc(&(u.entries() * &v));
                l / l.norm()
            };
            modes.push((fix_gauge(v), lambda));
        }
    }

    let mut records: Vec<(f64, f64, C64, DVector<C64>, usize)> = modes
        .into_iter()
        .zip(groups.iter().enumerate().flat_map(|(gi, g)| std::iter::repeat_n(gi, g.len())))
        .map(|((v, lambda), gi)| {
            let theta = -lambda.arg();
            let eps = fold_quasi_energy(theta / period, omega);
            (eps, eps * period, lambda, v, gi)
        })
        .collect();
    records.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.4.cmp(&b.4)));

    let mut degeneracy_groups = vec![Vec::new(); groups.len()];
    for (pos, r) in records.iter().enumerate() {
        degeneracy_groups[r.4].push(pos);
    }
    degeneracy_groups.sort();

    Ok(FloquetDecomposition {
        basis: u.basis(),
        omega,
        quasi_energies: records.iter().map(|r| r.0).collect(),
        eigenphases: records.iter().map(|r| r.1).collect(),
        eigenvalues: records.iter().map(|r| r.2).collect(),
        modes: records.into_iter().map(|r| StateVector::from_parts(u.basis(), r.3)).collect(),
        degeneracy_groups,
    })
}

/// Single-linkage clustering of eigenphases on the circle.
fn group_phases(phases: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let n = phases.len();
    let order: Vec<usize> = (0..n).sorted_by(|&a, &b| phases[a].total_cmp(&phases[b])).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, &k) in order.iter().enumerate() {
        if pos > 0 && phases[k] - phases[order[pos - 1]] <= tol {
            groups.last_mut().unwrap().push(k);
        } else {
            groups.push(vec![k]);
        }
    }
    // close the circle
    if groups.len() > 1 {
        let first = phases[order[0]];
        let last = phases[order[n - 1]];
        if first + TAU - last <= tol {
            let tail = groups.pop().unwrap();
            groups[0].extend(tail);
        }
    }
    groups
}

const SPAN_TOL: f64 = 1e-8;

/// Deterministic orthonormal basis of span(cols).
fn orient_group(cols: &[DVector<C64>], d: usize) -> Vec<DVector<C64>> {
    if cols.len() == 1 {
        return vec![cols[0].clone()];
    }
    let project = |v: &DVector<C64>| -> DVector<C64> {
        let mut p = DVector::zeros(d);
        for c in cols {
            p += c * c.dotc(v);
        }
        p
    };
    let mut out: Vec<DVector<C64>> = Vec::with_capacity(cols.len());
    for j in 0..d {
        if out.len() == cols.len() {
            break;
        }
        let mut e = DVector::zeros(d);
        e[j] = C64::new(1.0, 0.0);
        let mut v = project(&e);
        for w in &out {
            v -= w * w.dotc(&v);
        }
        let n = v.norm();
        if n > SPAN_TOL {
            out.push(v.unscale(n));
        }
    }
    if out.len() < cols.len() {
        return cols.to_vec();
    }
    out
}

/// Rotates `v` so that its largest-modulus entry is real and positive.
fn fix_gauge(v: DVector<C64>) -> DVector<C64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).copied().unwrap_or(C64::new(1.0, 0.0));
    v * (pivot.conj() / pivot.norm())
}

/// Weight of `initial` in each degeneracy group, Σ_{k∈G}|⟨φ_k|ψ⟩|².
pub fn group_weights(initial: &StateVector, decomposition: &FloquetDecomposition) -> Result<Vec<f64>> {
    if initial.basis() != decomposition.basis() {
        return Err(Error::DimensionMismatch { expected: decomposition.dim(), found: initial.dim() });
    }
    Ok(decomposition
        .degeneracy_groups()
        .iter()
        .map(|g| g.iter().map(|&k| decomposition.modes()[k].inner(initial).unwrap().norm_sqr()).sum())
        .collect())
}

/// Inverse participation ratio Π = 1/Σ_G p_G² − 1, one channel per degeneracy group.
pub fn ipr(initial: &StateVector, decomposition: &FloquetDecomposition) -> Result<f64> {
    let weights = group_weights(initial, decomposition)?;
    let total: f64 = weights.iter().sum();
    let sum_sq: f64 = weights.iter().map(|p| (p / total).powi(2)).sum();
    Ok(1.0 / sum_sq - 1.0)
}

/// |⟨label|φ_k⟩|² for every mode.
pub fn mode_character(decomposition: &FloquetDecomposition, label: BasisLabel) -> Result<Vec<f64>> {
    let target = StateVector::basis_state(decomposition.basis(), label)?;
    Ok(decomposition.modes().iter().map(|phi| phi.fidelity(&target).unwrap()).collect())
}

/// Assignment of previous modes to current ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeTracking {
    /// `permutation[k]` is the current index continuing previous mode `k`.
    pub permutation: Vec<usize>,
    /// |⟨φ_k^prev|φ_{π(k)}^curr⟩|² per previous mode.
    pub overlaps: Vec<f64>,
}

impl ModeTracking {
    pub fn min_overlap(&self) -> f64 {
        self.overlaps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Overlap below which a tracked branch is reported as unreliable.
pub const TRACKING_WARN_OVERLAP: f64 = 0.5;

/// Permutation maximizing Σ_k |⟨φ_k^prev|φ_{π(k)}^curr⟩|², by exhaustive search.
pub fn track_modes(previous: &FloquetDecomposition, current: &FloquetDecomposition) -> Result<ModeTracking> {
    let d = previous.dim();
    if current.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: current.dim() });
    }
    let overlap: Vec<Vec<f64>> = previous
        .modes()
        .iter()
        .map(|a| current.modes().iter().map(|b| a.amplitudes().dotc(b.amplitudes()).norm_sqr()).collect())
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..d).permutations(d) {
        let score: f64 = perm.iter().enumerate().map(|(k, &j)| overlap[k][j]).sum();
        if best.as_ref().is_none_or(|(s, _)| score > *s + 1e-14) {
            best = Some((score, perm));
        }
    }
    let permutation = best.map(|b| b.1).unwrap_or_default();
    let overlaps: Vec<f64> = permutation.iter().enumerate().map(|(k, &j)| overlap[k][j]).collect();
    let tracking = ModeTracking { permutation, overlaps };
    if tracking.min_overlap() < TRACKING_WARN_OVERLAP {
        log::warn!("mode tracking overlap {:.3} below {TRACKING_WARN_OVERLAP}; sweep step may be too coarse", tracking.min_overlap());
    }
    Ok(tracking)
}

/// Branch order along a sequence of decompositions: entry `[i][b]` is the
/// mode index that continues branch `b` at step `i`. Branches start in the
/// sorted order of the first decomposition.
pub fn track_sequence(decompositions: &[FloquetDecomposition]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = decompositions.first() else {
        return Ok(Vec::new());
    };
    let mut orders = vec![(0..first.dim()).collect::<Vec<_>>()];
    for w in decompositions.windows(2) {
        let perm = track_modes(&w[0], &w[1])?.permutation;
        let prev = orders.last().unwrap();
        orders.push(prev.iter().map(|&k| perm[k]).collect());
    }
    Ok(orders)
}

/// Quasi-energy difference ε_a − ε_b wrapped into (−ω/2, ω/2].
pub fn signed_gap(decomposition: &FloquetDecomposition, a: usize, b: usize) -> f64 {
    let q = decomposition.quasi_energies();
    fold_quasi_energy(q[a] - q[b], decomposition.omega())
}

/// A point where two tracked branches become degenerate.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub location: f64,
    pub decomposition: FloquetDecomposition,
    pub branches: (usize, usize),
}

/// Bisects the signed gap of branches `(a, b)` of the decomposition at `lo`
/// until their eigenphases agree within `phase_tol`, or until the bracket
/// shrinks below `x_tol`. `decompose` maps the swept parameter to a decomposition.
pub fn locate_crossing<F>(
    decompose: F,
    lo: f64,
    hi: f64,
    branches: (usize, usize),
    phase_tol: f64,
    x_tol: f64,
) -> Result<Crossing>
where
    F: Fn(f64) -> Result<FloquetDecomposition>,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut d_lo = decompose(lo)?;
    let (mut a, mut b) = branches;
    let s_lo = signed_gap(&d_lo, a, b).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d_mid = decompose(mid)?;
        let perm = track_modes(&d_lo, &d_mid)?.permutation;
        let (ma, mb) = (perm[a], perm[b]);
        let gap = circular_distance(d_mid.eigenphases()[ma], d_mid.eigenphases()[mb]);
        if gap <= phase_tol || d_mid.group_of(ma) == d_mid.group_of(mb) || hi - lo <= x_tol {
            return Ok(Crossing { location: mid, decomposition: d_mid, branches: (ma, mb) });
        }
        if signed_gap(&d_mid, ma, mb).signum() == s_lo {
            lo = mid;
            d_lo = d_mid;
            a = ma;
            b = mb;
        } else {
            hi = mid;
        }
    }
    Err(Error::InvalidParameter("crossing bisection did not converge".into()))
}

//! Lab-frame, rotating-frame and effective Hamiltonians.
//!
//! The rotating frame removes Δ(t)Σσ_ee and V₀σ_ee¹σ_ee² from the lab
//! Hamiltonian. Every frame change involved is diagonal in the computational
//! basis, so populations agree between frames at all times.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::bessel::jn;
use crate::error::{Error, Result};
use crate::model::{ops, AtomCount, Basis, DriveParams, OperatorMatrix};
use crate::C64;

/// Relative tolerance (in units of ω) below which a Fourier frequency counts as zero.
pub const RESONANCE_TOL: f64 = 1e-9;

const I: C64 = C64::new(0.0, 1.0);

/// i^m for any integer m.
pub(crate) fn i_pow(m: i32) -> C64 {
    match m.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn plus_adjoint(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    m + adj
}

/// Smallest truncation accepted for the Jacobi–Anger sums.
pub fn min_m_max(params: &DriveParams) -> i32 {
    params.alpha().ceil() as i32 + 10
}

fn check_truncation(params: &DriveParams, m_max: i32) -> Result<()> {
    let need = min_m_max(params);
    if m_max < need {
        return Err(Error::InvalidParameter(format!(
            "m_max = {m_max} is below ceil(alpha) + 10 = {need}"
        )));
    }
    Ok(())
}

fn is_resonant(x: f64, omega: f64) -> bool {
    x.abs() <= RESONANCE_TOL * omega
}

/// −Δ(t)Σσ_ee + (Ω/2)Σσ_x + V₀σ_ee¹σ_ee² in the full basis.
pub fn lab_hamiltonian(params: &DriveParams, atoms: AtomCount, t: f64) -> OperatorMatrix {
    let gen = Generator::lab(params, atoms);
    OperatorMatrix::from_parts(atoms.full_basis(), gen.at(t))
}

/// Jacobi–Anger form of the rotating-frame Hamiltonian, truncated to |m| ≤ m_max:
///
/// H'(t) = (Ω/2) Σ_m i^m J_m(α) g_m(t) [Σσ_eg + X(e^{iV₀t} − 1)] + h.c.,
/// g_m(t) = exp(i(mω − Δ₀)t). For one atom the X term is absent.
pub fn rotating_hamiltonian(
    params: &DriveParams,
    atoms: AtomCount,
    t: f64,
    m_max: i32,
) -> Result<OperatorMatrix> {
    check_truncation(params, m_max)?;
    let gen = Generator::rotating(params, atoms, m_max);
    Ok(OperatorMatrix::from_parts(atoms.full_basis(), gen.at(t)))
}

fn drive_series(params: &DriveParams, m_max: i32) -> Vec<(f64, C64)> {
    let alpha = params.alpha();
    (-m_max..=m_max)
        .map(|m| {
            let freq = m as f64 * params.omega - params.delta0;
            (freq, i_pow(m) * jn(m, alpha))
        })
        .collect()
}

/// Σ_m i^m J_m(α) e^{i(mω − Δ₀)t}, which equals e^{iα cos ωt − iΔ₀t} as m_max → ∞.
fn drive_factor(series: &[(f64, C64)], t: f64) -> C64 {
    series.iter().map(|&(f, c)| c * C64::from_polar(1.0, f * t)).sum()
}

/// Couplings of the symmetric ladder |gg⟩ ↔ |+⟩ ↔ |ee⟩ in the rotating frame,
/// Ω₁(t) = ⟨gg|H'|+⟩ and Ω₂(t) = ⟨+|H'|ee⟩:
///
/// Ω₁(t) = (Ω/√2) Σ_m (−i)^m J_m(α) e^{−i(mω − Δ₀)t}
/// Ω₂(t) = (Ω/√2) Σ_m (−i)^m J_m(α) e^{−i(mω − Δ₀ + V₀)t}
pub fn coupling_envelopes(params: &DriveParams, t: f64, m_max: i32) -> Result<(C64, C64)> {
    check_truncation(params, m_max)?;
    let f = drive_factor(&drive_series(params, m_max), t).conj();
    let scale = params.rabi * FRAC_1_SQRT_2;
    Ok((scale * f, scale * f * C64::from_polar(1.0, -params.v0 * t)))
}

/// Time-independent (secular) Fourier components of Ω₁(t) and Ω₂(t).
///
/// Only terms whose frequency vanishes within [`RESONANCE_TOL`]·ω contribute.
/// At Δ₀ = n₁ω this gives Ω₁ → (−i)^{n₁} J_{n₁}(α) Ω/√2, and Ω₂ → 0 unless V₀
/// is also a multiple of ω.
pub fn secular_couplings(params: &DriveParams, m_max: i32) -> Result<(C64, C64)> {
    check_truncation(params, m_max)?;
    let scale = params.rabi * FRAC_1_SQRT_2;
    let mut w1 = C64::new(0.0, 0.0);
    let mut w2 = C64::new(0.0, 0.0);
    for (freq, c) in drive_series(params, m_max) {
        if is_resonant(freq, params.omega) {
            w1 += scale * c.conj();
        }
        if is_resonant(freq + params.v0, params.omega) {
            w2 += scale * c.conj();
        }
    }
    Ok((w1, w2))
}

/// A_m(ω) and B_m(ω) of the zeroth-order Floquet Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveCoefficients {
    pub order: i32,
    /// J_m(α)(e^{−iΔ₀T} − 1)/(mω − Δ₀)
    pub a_m: C64,
    /// J_m(α)(e^{−i(Δ₀−V₀)T} − 1)/(mω − Δ₀ + V₀)
    pub b_m: C64,
    pub resonant_limit_used: bool,
}

/// (e^{−ixT} − 1)/(mω − Δ₀) style quotient with its limit iT at x → 0.
fn phase_quotient(denominator: f64, phase_rate: f64, period: f64, omega: f64) -> (C64, bool) {
    if is_resonant(denominator, omega) {
        (I * period, true)
    } else {
        ((C64::from_polar(1.0, -phase_rate * period) - 1.0) / denominator, false)
    }
}

pub fn effective_coefficients(params: &DriveParams, m_max: i32) -> Result<Vec<EffectiveCoefficients>> {
    check_truncation(params, m_max)?;
    let alpha = params.alpha();
    let period = params.period();
    let omega = params.omega;
    Ok((-m_max..=m_max)
        .map(|m| {
            let j = jn(m, alpha);
            let base = m as f64 * omega - params.delta0;
            let (qa, ra) = phase_quotient(base, params.delta0, period, omega);
            let (qb, rb) = phase_quotient(base + params.v0, params.delta0 - params.v0, period, omega);
            EffectiveCoefficients {
                order: m,
                a_m: j * qa,
                b_m: j * qb,
                resonant_limit_used: ra || rb,
            }
        })
        .collect())
}

/// H_eff = (Ω/2iT) Σ_m i^m [A_m Σσ_eg + (B_m − A_m) X] + h.c., the one-period
/// average of the rotating-frame Hamiltonian. Meaningful for ω ≫ Δ₀, V₀.
pub fn effective_hamiltonian(params: &DriveParams, atoms: AtomCount, m_max: i32) -> Result<OperatorMatrix> {
    let coeffs = effective_coefficients(params, m_max)?;
    let pref = params.rabi / (2.0 * I * params.period());
    let mut single = C64::new(0.0, 0.0);
    let mut correlated = C64::new(0.0, 0.0);
    for c in &coeffs {
        let w = i_pow(c.order);
        single += w * c.a_m;
        correlated += w * (c.b_m - c.a_m);
    }
    let mut m = ops::collective_raising(atoms) * (pref * single);
    if atoms == AtomCount::Two {
        m += ops::correlated_raising() * (pref * correlated);
    }
    Ok(OperatorMatrix::from_parts(atoms.full_basis(), plus_adjoint(m)))
}

fn require_multiple(target: f64, n: i32, omega: f64, what: &str) -> Result<()> {
    let residual = (n as f64 * omega - target).abs();
    if residual > RESONANCE_TOL * omega {
        return Err(Error::ResonanceNotSatisfied(format!(
            "{what}: |{n}·ω − {target}| = {residual:.3e}"
        )));
    }
    Ok(())
}

/// First order in V₀/ω around the resonance Δ₀ = n₁ω:
///
/// i^{n₁}J_{n₁}(Ω/2)(Σσ_eg + iπ(V₀/ω)X) + (Ω/2)Σ_{m≠n₁} i^m J_m/(m − n₁)·(V₀/ω)X + h.c.
///
/// The m ≠ n₁ sum cancels pairwise for n₁ = 0 and is left out there.
pub fn effective_hamiltonian_small_v0(params: &DriveParams, n1: i32, m_max: i32) -> Result<OperatorMatrix> {
    check_truncation(params, m_max)?;
    require_multiple(params.delta0, n1, params.omega, "R1 requires delta0 = n1*omega")?;
    let alpha = params.alpha();
    let half = 0.5 * params.rabi;
    let ratio = params.v0 / params.omega;
    let lead = i_pow(n1) * jn(n1, alpha) * half;
    let mut x_coef = lead * I * std::f64::consts::PI * ratio;
    if n1 != 0 {
        for m in (-m_max..=m_max).filter(|&m| m != n1) {
            x_coef += half * i_pow(m) * jn(m, alpha) / (m - n1) as f64 * ratio;
        }
    }
    let m = ops::collective_raising(AtomCount::Two) * lead + ops::correlated_raising() * x_coef;
    Ok(OperatorMatrix::from_parts(Basis::Pair, plus_adjoint(m)))
}

/// Small Δ₀/ω and V₀/ω form at the resonance 2Δ₀ − V₀ = n₃ω:
///
/// (ΩJ₀/2)(1 − iπΔ₀/ω)Σσ_eg + (i^{n₃}Ω/2)(J_{n₃} − J₀)(1 + iπΔ₀/ω)X + h.c.
pub fn effective_hamiltonian_small_delta(params: &DriveParams, n3: i32, m_max: i32) -> Result<OperatorMatrix> {
    check_truncation(params, m_max)?;
    require_multiple(
        2.0 * params.delta0 - params.v0,
        n3,
        params.omega,
        "R3 requires 2*delta0 - v0 = n3*omega",
    )?;
    let alpha = params.alpha();
    let half = 0.5 * params.rabi;
    let j0 = jn(0, alpha);
    let skew = std::f64::consts::PI * params.delta0 / params.omega;
    let single = half * j0 * C64::new(1.0, -skew);
    let x_coef = half * i_pow(n3) * (jn(n3, alpha) - j0) * C64::new(1.0, skew);
    let m = ops::collective_raising(AtomCount::Two) * single + ops::correlated_raising() * x_coef;
    Ok(OperatorMatrix::from_parts(Basis::Pair, plus_adjoint(m)))
}

/// Time-dependent generator evaluated repeatedly by the integrators.
#[derive(Clone, Debug)]
pub(crate) enum Generator {
    /// H(t) = base − Δ(t)·number
    Lab {
        base: DMatrix<C64>,
        number: DMatrix<C64>,
        params: DriveParams,
    },
    /// H(t) = (Ω/2)f(t)[raising + X(e^{iV₀t} − 1)] + h.c.
    Rotating {
        series: Vec<(f64, C64)>,
        raising: DMatrix<C64>,
        correlated: Option<DMatrix<C64>>,
        rabi: f64,
        v0: f64,
    },
    Static(DMatrix<C64>),
}

impl Generator {
    pub(crate) fn lab(params: &DriveParams, atoms: AtomCount) -> Self {
        let sx: DMatrix<C64> = match atoms {
            AtomCount::One => ops::sigma_x(),
            AtomCount::Two => ops::on_atom(&ops::sigma_x(), 0) + ops::on_atom(&ops::sigma_x(), 1),
        };
        let mut base = sx * real(0.5 * params.rabi);
        if atoms == AtomCount::Two {
            base += ops::pair_projector() * real(params.v0);
        }
        Generator::Lab { base, number: ops::excitation_number(atoms), params: *params }
    }

    pub(crate) fn rotating(params: &DriveParams, atoms: AtomCount, m_max: i32) -> Self {
        Generator::Rotating {
            series: drive_series(params, m_max),
            raising: ops::collective_raising(atoms),
            correlated: (atoms == AtomCount::Two).then(ops::correlated_raising),
            rabi: params.rabi,
            v0: params.v0,
        }
    }

    pub(crate) fn at(&self, t: f64) -> DMatrix<C64> {
        match self {
            Generator::Lab { base, number, params } => base - number * real(params.detuning_at(t)),
            Generator::Rotating { series, raising, correlated, rabi, v0 } => {
                let f = drive_factor(series, t) * (0.5 * rabi);
                let mut m = raising * f;
                if let Some(x) = correlated {
                    m += x * (f * (C64::from_polar(1.0, v0 * t) - 1.0));
                }
                plus_adjoint(m)
            }
            Generator::Static(h) => h.clone(),
        }
    }
}

//! Photon-number bookkeeping and dense-coding capacities.
//!
//! All photon numbers are for a single squeezed beam, per unit bandwidth per
//! unit time. A dense-coding resource built from two identical beams carries
//! twice these numbers; the capacity formula below is already written in the
//! single-beam quantities, so no factor of two appears in the code.

use crate::error::{Error, Result};
use crate::gaussian::{attenuate, GaussianMode};
use crate::purification::{ff_y_min, vx_target_for_eta};

/// Photon budget used by the communication protocol in the reference photon diagram.
pub const DEFAULT_N_CP: f64 = 400.0;

/// Mean photon numbers of an amplitude-squeezed beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonBudget {
    pub n_total: f64,
    /// Photons in correlated pairs, `(s + 1/s − 2)/4` with `s` the squeezed variance.
    pub n_noncl: f64,
    /// Unpaired photons, `n_total − n_noncl`.
    pub n_thermal: f64,
}

/// Mean photon number available to the communication process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityQuery {
    n_cp: f64,
}

impl CapacityQuery {
    pub fn new(n_cp: f64) -> Result<Self> {
        if !(n_cp.is_finite() && n_cp > 0.0) {
            return Err(Error::NegativePhotonNumber(n_cp));
        }
        Ok(Self { n_cp })
    }

    pub fn n_cp(&self) -> f64 {
        self.n_cp
    }

    /// Photons left for signal modulation once the resource is paid for.
    pub fn n_signal(&self, budget: &PhotonBudget) -> f64 {
        self.n_cp - budget.n_thermal - budget.n_noncl
    }

    pub fn holevo(&self) -> f64 {
        holevo_of(self.n_cp)
    }
}

impl Default for CapacityQuery {
    fn default() -> Self {
        Self { n_cp: DEFAULT_N_CP }
    }
}

/// `(s + 1/s − 2)/4`, written as `(1 − s)²/(4s)` to stay accurate near `s = 1`.
fn noncl_photons(s: f64) -> f64 {
    let d = 1.0 - s;
    d * d / (4.0 * s)
}

/// Photon decomposition of an amplitude-squeezed state (`vx ≤ 1`).
pub fn photon_budget(m: &GaussianMode) -> Result<PhotonBudget> {
    if m.vx() > 1.0 {
        return Err(Error::NotSqueezed(m.vx()));
    }
    if !m.is_physical() {
        return Err(Error::HeisenbergViolation {
            product: m.uncertainty_product(),
        });
    }
    Ok(budget_of(m.vx(), m.vy()))
}

/// Like [`photon_budget`] but maps `vx > 1` to `n_noncl = 0`, for plotting
/// states that carry no squeezing at all.
pub fn photon_budget_permissive(m: &GaussianMode) -> Result<PhotonBudget> {
    if m.vx() <= 1.0 {
        return photon_budget(m);
    }
    let n_total = (m.vx() + m.vy() - 2.0) / 4.0;
    Ok(PhotonBudget {
        n_total,
        n_noncl: 0.0,
        n_thermal: n_total,
    })
}

/// `n_total − n_noncl`, simplified to `(vx·vy − 1)/(4vx)`. Unclamped: negative
/// exactly when the computed product `vx·vy` is below 1.
pub fn thermal_photons(vx: f64, vy: f64) -> f64 {
    (vx * vy - 1.0) / (4.0 * vx)
}

fn budget_of(vx: f64, vy: f64) -> PhotonBudget {
    let n_total = (vx + vy - 2.0) / 4.0;
    let n_noncl = noncl_photons(vx);
    let n_thermal = thermal_photons(vx, vy).max(0.0);
    PhotonBudget {
        n_total,
        n_noncl,
        n_thermal,
    }
}

/// Classical single-mode capacity in bits at mean photon number `n`:
/// `(1+n)log₂(1+n) − n·log₂n`, with the `n → 0` limit equal to 0.
pub fn holevo_capacity(n_cp: f64) -> Result<f64> {
    if !(n_cp >= 0.0) || !n_cp.is_finite() {
        return Err(Error::NegativePhotonNumber(n_cp));
    }
    Ok(holevo_of(n_cp))
}

fn holevo_of(n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    (1.0 + n) * (1.0 + n).log2() - n * n.log2()
}

/// `2n + 1 − 2√(n² + n)`, evaluated through its reciprocal `2n + 1 + 2√(n² + n)`
/// (the product of the two is exactly 1). Equals `s` when `n = n_noncl(s)`.
pub fn noise_denominator(n_noncl: f64) -> f64 {
    1.0 / (2.0 * n_noncl + 1.0 + 2.0 * (n_noncl * (n_noncl + 1.0)).sqrt())
}

/// Dense-coding capacity in bits from a photon decomposition.
pub fn epr_capacity_from_budget(n_noncl: f64, n_thermal: f64, q: &CapacityQuery) -> Result<f64> {
    for n in [n_noncl, n_thermal] {
        if !(n >= 0.0) {
            return Err(Error::NegativePhotonNumber(n));
        }
    }
    let n_signal = q.n_cp - n_thermal - n_noncl;
    if n_signal < 0.0 {
        return Err(Error::SignalBudgetExhausted(n_signal));
    }
    Ok((1.0 + n_signal / noise_denominator(n_noncl)).log2())
}

/// Capacity of continuous-variable dense coding using a pair of beams in state `m`.
pub fn epr_capacity(m: &GaussianMode, q: &CapacityQuery) -> Result<f64> {
    let b = photon_budget(m)?;
    epr_capacity_from_budget(b.n_noncl, b.n_thermal, q)
}

/// Dense coding beats the Holevo limit at the same photon budget.
pub fn dense_coding_success(m: &GaussianMode, q: &CapacityQuery) -> Result<bool> {
    Ok(epr_capacity(m, q)? > q.holevo())
}

/// Channel applied along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryMode {
    /// Tap loss only, no feed-forward.
    AttenuateOnly,
    /// Tap loss followed by feed-forward at the optimal gain.
    FeedForward,
}

impl TrajectoryMode {
    pub fn label(&self) -> &'static str {
        match self {
            TrajectoryMode::AttenuateOnly => "attenuate",
            TrajectoryMode::FeedForward => "feed-forward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub eta: f64,
    pub state: GaussianMode,
    pub budget: PhotonBudget,
}

/// State produced from `input` by the selected channel at transmission `eta`.
pub fn apply_mode(
    input: &GaussianMode,
    eta: f64,
    mode: TrajectoryMode,
    eps: f64,
) -> Result<GaussianMode> {
    match mode {
        TrajectoryMode::AttenuateOnly => attenuate(input, eta),
        TrajectoryMode::FeedForward => GaussianMode::new(
            vx_target_for_eta(input.vx(), eta)?,
            ff_y_min(input.vy(), eta, eps)?,
        ),
    }
}

/// Photon budgets along a transmission sweep, sorted by `eta` descending.
pub fn trajectory(
    input: &GaussianMode,
    etas: &[f64],
    mode: TrajectoryMode,
    eps: f64,
) -> Result<Vec<TrajectoryPoint>> {
    let mut sorted = etas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted
        .into_iter()
        .map(|eta| {
            let state = apply_mode(input, eta, mode, eps)?;
            Ok(TrajectoryPoint {
                eta,
                state,
                budget: photon_budget(&state)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourCell {
    pub n_noncl: f64,
    pub n_thermal: f64,
    /// `C_EPR / C_Holevo`, `None` where the signal budget is negative.
    pub ratio: Option<f64>,
}

/// `C_EPR/C_Holevo` over a grid, row-major with `n_noncl` as the outer index.
pub fn capacity_contours(noncl: &[f64], thermal: &[f64], q: &CapacityQuery) -> Vec<ContourCell> {
    let holevo = q.holevo();
    noncl
        .iter()
        .flat_map(|&n_noncl| {
            thermal.iter().map(move |&n_thermal| ContourCell {
                n_noncl,
                n_thermal,
                ratio: epr_capacity_from_budget(n_noncl, n_thermal, q)
                    .ok()
                    .map(|c| c / holevo),
            })
        })
        .collect()
}

//! Optimal linear purification of amplitude-squeezed states and its
//! feed-forward realization.
//!
//! A general phase-insensitive linear channel acts as `X' = νX + X_N`,
//! `Y' = μY + Y_N`, and the commutators force
//! `Var(X_N)·Var(Y_N) ≥ (1 − νμ)²`. For a fixed output amplitude variance
//! `vx'` the smallest reachable phase variance is
//!
//! ```text
//! vy'_min = vy(1 − vx) / [(1 − vx') + vy(vx' − vx)]
//! ```
//!
//! The feed-forward scheme taps off a fraction of the beam, measures the phase
//! quadrature of the tapped part, and adds `g` times the photocurrent to the
//! phase quadrature of the transmitted part. With unit in-loop efficiency and
//! the optimal gain it reaches the bound exactly.
//!
//! Sign convention: the tap follows [`crate::gaussian::tap`], so
//! `Cov(Y_t, Y_r) = +√(η(1−η))(vy − 1)` and the optimal gain is negative for an
//! anti-squeezed phase quadrature. The minimized variance does not depend on
//! this choice.

use crate::error::{Error, Result};
use crate::gaussian::{attenuate_variance, check_eta, GaussianMode};

/// In-loop homodyne efficiency reported for the phase-measurement interferometers.
pub const EXPERIMENT_EPS: f64 = 0.70;

/// Sign of `Cov(Y_t, Y_r)/(vy − 1)` under the tap convention.
const TAP_SIGN: f64 = 1.0;

/// Abstract single-mode linear channel `(ν, μ)` with added noise variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannelGains {
    pub nu: f64,
    pub mu: f64,
    pub vnx: f64,
    pub vny: f64,
}

impl GaussianChannelGains {
    /// Rejects noise variances that violate `vnx·vny ≥ (1 − νμ)²`.
    pub fn new(nu: f64, mu: f64, vnx: f64, vny: f64) -> Result<Self> {
        let gains = Self { nu, mu, vnx, vny };
        if vnx < 0.0 || vny < 0.0 {
            return Err(Error::ConfigOutOfRange(format!(
                "noise variances must be non-negative (vnx = {vnx}, vny = {vny})"
            )));
        }
        let floor = gains.uncertainty_floor();
        if gains.noise_product() < floor - 1e-12 * floor.max(1.0) {
            return Err(Error::ConfigOutOfRange(format!(
                "noise product {} below (1 - nu*mu)^2 = {floor}",
                gains.noise_product()
            )));
        }
        Ok(gains)
    }

    /// Channel realized by the feed-forward loop, read off from
    /// `Y_out = (√η + g√(ε(1−η))) Y_a + (√(1−η) − g√(εη)) Y_v + g√(1−ε) Y_u`.
    pub fn feed_forward(eta: f64, gain: f64, eps: f64) -> Result<Self> {
        check_eta(eta)?;
        check_ratio("eps", eps)?;
        let s = TAP_SIGN;
        let vac_coeff = (1.0 - eta).sqrt() - s * gain * (eps * eta).sqrt();
        Ok(Self {
            nu: eta.sqrt(),
            mu: eta.sqrt() + s * gain * (eps * (1.0 - eta)).sqrt(),
            vnx: 1.0 - eta,
            vny: vac_coeff * vac_coeff + gain * gain * (1.0 - eps),
        })
    }

    pub fn noise_product(&self) -> f64 {
        self.vnx * self.vny
    }

    /// `(1 − νμ)²`
    pub fn uncertainty_floor(&self) -> f64 {
        let d = 1.0 - self.nu * self.mu;
        d * d
    }

    /// Output variances `ν²vx + vnx` and `μ²vy + vny`.
    pub fn apply(&self, input: &GaussianMode) -> Result<GaussianMode> {
        GaussianMode::new(
            self.nu * self.nu * input.vx() + self.vnx,
            self.mu * self.mu * input.vy() + self.vny,
        )
    }
}

/// Feed-forward loop settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedForwardConfig {
    /// Tap transmission η.
    pub eta: f64,
    /// Electronic gain applied to the homodyne photocurrent.
    pub gain: f64,
    /// In-loop homodyne efficiency ε.
    pub eps: f64,
    /// Efficiency of the verification detector.
    pub eta_det: f64,
}

impl FeedForwardConfig {
    pub fn new(eta: f64, gain: f64, eps: f64, eta_det: f64) -> Result<Self> {
        let cfg = Self {
            eta,
            gain,
            eps,
            eta_det,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Unit efficiencies everywhere, zero gain.
    pub fn ideal(eta: f64) -> Result<Self> {
        Self::new(eta, 0.0, 1.0, 1.0)
    }

    pub fn with_gain(self, gain: f64) -> Self {
        Self { gain, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_eta(self.eta)?;
        check_ratio("eps", self.eps)?;
        check_ratio("eta_det", self.eta_det)?;
        if !self.gain.is_finite() {
            return Err(Error::ConfigOutOfRange(format!("gain = {}", self.gain)));
        }
        Ok(())
    }
}

fn check_ratio(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ConfigOutOfRange(format!(
            "{name} = {value} outside [0, 1]"
        )))
    }
}

fn check_squeezed(input: &GaussianMode) -> Result<()> {
    if input.vx() > 1.0 {
        Err(Error::NotSqueezed(input.vx()))
    } else if input.vx() == 1.0 {
        Err(Error::CoherentInputDegenerate)
    } else {
        Ok(())
    }
}

/// Outcome of running a state through the feed-forward purifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurificationResult {
    pub output: GaussianMode,
    pub gain_used: f64,
    /// Optimal-bound phase variance for the same output amplitude variance.
    pub bound: f64,
    pub purity_in: f64,
    pub purity_out: f64,
}

impl PurificationResult {
    /// Relative growth of the amplitude variance, `(vx_out − vx_in)/vx_in`.
    pub fn squeezing_degradation(&self, input: &GaussianMode) -> f64 {
        (self.output.vx() - input.vx()) / input.vx()
    }

    pub fn purity_gain(&self) -> f64 {
        self.purity_out / self.purity_in
    }
}

/// Phase-variance lower bound for fixed channel gains, obtained by saturating
/// the noise uncertainty relation.
pub fn min_y_given_gains(nu: f64, mu: f64, input: &GaussianMode, vx_target: f64) -> Result<f64> {
    let denominator = vx_target - nu * nu * input.vx();
    if !(denominator > 0.0) {
        return Err(Error::InfeasibleTarget {
            vx_target,
            denominator,
        });
    }
    let d = 1.0 - nu * mu;
    Ok(d * d / denominator + mu * mu * input.vy())
}

/// Allowed interval `[ν²_min, ν²_max)` for a target amplitude variance. The
/// lower end comes from forbidding squeezing of coherent inputs, the upper end
/// from `Var(X_N) > 0`.
pub fn nu_feasible_range(vx: f64, vx_target: f64) -> Result<(f64, f64)> {
    check_target(vx, vx_target)?;
    Ok(((1.0 - vx_target) / (1.0 - vx), vx_target / vx))
}

fn check_target(vx: f64, vx_target: f64) -> Result<()> {
    if vx > 1.0 {
        return Err(Error::NotSqueezed(vx));
    }
    if vx == 1.0 {
        return Err(Error::CoherentInputDegenerate);
    }
    if !(vx..=1.0).contains(&vx_target) {
        return Err(Error::TargetOutOfRange { vx, vx_target });
    }
    Ok(())
}

/// Amplitude variance after a tap of transmission η.
pub fn vx_target_for_eta(vx: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(attenuate_variance(vx, eta))
}

/// Inverse of [`vx_target_for_eta`]; equal to `ν²_min`.
pub fn eta_for_vx_target(vx: f64, vx_target: f64) -> Result<f64> {
    nu_feasible_range(vx, vx_target).map(|(lo, _)| lo)
}

/// Smallest phase variance any deterministic linear scheme can reach while
/// keeping the amplitude variance at `vx_target`.
pub fn optimal_bound(input: &GaussianMode, vx_target: f64) -> Result<f64> {
    let (vx, vy) = (input.vx(), input.vy());
    check_target(vx, vx_target)?;
    Ok(vy * (1.0 - vx) / ((1.0 - vx_target) + vy * (vx_target - vx)))
}

/// [`optimal_bound`] parameterized by the tap transmission.
pub fn optimal_bound_at_eta(input: &GaussianMode, eta: f64) -> Result<f64> {
    check_squeezed(input)?;
    check_eta(eta)?;
    let vy = input.vy();
    Ok(vy / (eta + (1.0 - eta) * vy))
}

/// Variance of the in-loop measurement current `√ε Y_r + √(1−ε) Y_u`.
fn meas_variance(vy: f64, eta: f64, eps: f64) -> f64 {
    eps * attenuate_variance(vy, 1.0 - eta) + (1.0 - eps)
}

/// `Cov(Y_t, measurement current)`.
fn meas_covariance(vy: f64, eta: f64, eps: f64) -> f64 {
    TAP_SIGN * eps.sqrt() * (eta * (1.0 - eta)).sqrt() * (vy - 1.0)
}

/// Phase variance of the transmitted beam after feed-forward with an arbitrary
/// gain: `Var(Y_t) + 2g·Cov + g²·Var(meas)`.
pub fn ff_y_variance(vy: f64, cfg: &FeedForwardConfig) -> Result<f64> {
    cfg.validate()?;
    let (eta, eps, g) = (cfg.eta, cfg.eps, cfg.gain);
    Ok(attenuate_variance(vy, eta)
        + 2.0 * g * meas_covariance(vy, eta, eps)
        + g * g * meas_variance(vy, eta, eps))
}

/// Gain minimizing [`ff_y_variance`]: `g* = −Cov/Var(meas)`.
pub fn optimal_gain(vy: f64, eta: f64, eps: f64) -> Result<f64> {
    check_eta(eta)?;
    check_ratio("eps", eps)?;
    Ok(-meas_covariance(vy, eta, eps) / meas_variance(vy, eta, eps))
}

/// Phase variance reached with the optimal gain.
///
/// Evaluated as `[ε·vy + (1−ε)(ηvy + 1−η)] / [ε((1−η)vy + η) + 1−ε]`, which is
/// the expanded form `ηvy + 1−η − Cov²/Var(meas)` with the cancellation done
/// by hand. For ε = 1 it reduces to `vy/(η + (1−η)vy)`.
pub fn ff_y_min(vy: f64, eta: f64, eps: f64) -> Result<f64> {
    check_eta(eta)?;
    check_ratio("eps", eps)?;
    if !(vy.is_finite() && vy > 0.0) {
        return Err(Error::NonPositiveVariance(vy));
    }
    Ok((eps * vy + (1.0 - eps) * attenuate_variance(vy, eta)) / meas_variance(vy, eta, eps))
}

/// Runs the full feed-forward purifier on `input`.
///
/// With `use_optimal_gain` the configured gain is replaced by
/// [`optimal_gain`]. The verification efficiency `cfg.eta_det` does not act on
/// the returned state; see [`measured_variance`].
pub fn purify(
    input: &GaussianMode,
    cfg: &FeedForwardConfig,
    use_optimal_gain: bool,
) -> Result<PurificationResult> {
    cfg.validate()?;
    if input.vx() > 1.0 {
        return Err(Error::NotSqueezed(input.vx()));
    }
    let eta = cfg.eta;
    let vx_t = attenuate_variance(input.vx(), eta);
    let (gain_used, vy_t) = if use_optimal_gain {
        (
            optimal_gain(input.vy(), eta, cfg.eps)?,
            ff_y_min(input.vy(), eta, cfg.eps)?,
        )
    } else {
        (cfg.gain, ff_y_variance(input.vy(), cfg)?)
    };
    let output = GaussianMode::new(vx_t, vy_t)?;
    Ok(PurificationResult {
        output,
        gain_used,
        bound: optimal_bound(input, vx_t)?,
        purity_in: input.purity(),
        purity_out: output.purity(),
    })
}

/// Variance seen by a detector of efficiency `eta_det`.
pub fn measured_variance(v: f64, eta_det: f64) -> f64 {
    attenuate_variance(v, eta_det)
}

/// Ratio of the measured phase variance without feed-forward to the one with
/// optimal feed-forward. Close to independent of `eta_det` while both
/// variances are well above shot noise, and never larger than its
/// `eta_det = 1` value.
pub fn excess_noise_reduction(vy: f64, eta: f64, eps: f64, eta_det: f64) -> Result<f64> {
    check_ratio("eta_det", eta_det)?;
    let without = attenuate_variance(vy, eta);
    let with = ff_y_min(vy, eta, eps)?;
    Ok(measured_variance(without, eta_det) / measured_variance(with, eta_det))
}

/// Input-to-output ratio of the phase variance, `vy / ff_y_min`. For ε = 1 this
/// is exactly `η + (1−η)vy`.
pub fn phase_noise_reduction(vy: f64, eta: f64, eps: f64) -> Result<f64> {
    Ok(vy / ff_y_min(vy, eta, eps)?)
}

/// Phase variance of the noiseless-amplification branch (`Var(X_N) = 0`,
/// `ν² = vx'/vx`, `μ = 1/ν`): `vy·vx/vx'`. Never better than [`optimal_bound`].
pub fn noiseless_amp_comparison(input: &GaussianMode, vx_target: f64) -> Result<f64> {
    check_target(input.vx(), vx_target)?;
    Ok(input.vy() * input.vx() / vx_target)
}

//! Single-mode zero-mean Gaussian states described by their quadrature variances.
//!
//! All variances are in shot-noise units: the vacuum has `vx = vy = 1`, which
//! corresponds to the commutator `[X, Y] = 2i` with `X = a† + a` and
//! `Y = i(a† − a)`. Every formula in this crate assumes that normalization.

use crate::error::{Error, Result};

/// Absolute slack on the uncertainty product before a state is called unphysical.
pub const HEISENBERG_TOL: f64 = 1e-12;

/// Zero-mean single-mode Gaussian state with uncorrelated amplitude (`vx`) and
/// phase (`vy`) quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMode {
    vx: f64,
    vy: f64,
}

impl GaussianMode {
    /// Checked constructor. Rejects non-positive variances and states below the
    /// uncertainty limit `vx·vy ≥ 1`.
    pub fn new(vx: f64, vy: f64) -> Result<Self> {
        let mode = Self::new_unchecked(vx, vy)?;
        let product = vx * vy;
        if product < 1.0 - HEISENBERG_TOL {
            return Err(Error::HeisenbergViolation { product });
        }
        Ok(mode)
    }

    /// Only positivity is checked. Used to exercise the error paths of code that
    /// receives states built elsewhere.
    pub fn new_unchecked(vx: f64, vy: f64) -> Result<Self> {
        for v in [vx, vy] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositiveVariance(v));
            }
        }
        Ok(Self { vx, vy })
    }

    pub fn vacuum() -> Self {
        Self { vx: 1.0, vy: 1.0 }
    }

    /// Minimum-uncertainty amplitude-squeezed state with `vx = s`, `vy = 1/s`.
    pub fn pure_squeezed(s: f64) -> Result<Self> {
        Self::new(s, 1.0 / s)
    }

    pub fn vx(&self) -> f64 {
        self.vx
    }

    pub fn vy(&self) -> f64 {
        self.vy
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.vx * self.vy
    }

    /// `tr(ρ²) = 1/√(vx·vy)`.
    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn is_physical(&self) -> bool {
        self.uncertainty_product() >= 1.0 - HEISENBERG_TOL
    }

    /// The same state with the quadrature labels exchanged (a π/2 phase rotation).
    pub fn rotated(&self) -> Self {
        Self {
            vx: self.vy,
            vy: self.vx,
        }
    }
}

/// Second moments of the two outputs of a beam splitter fed by a mode and vacuum.
///
/// Convention: `t = √η a + √(1−η) v` and `r = √(1−η) a − √η v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapResult {
    pub transmitted: GaussianMode,
    pub reflected: GaussianMode,
    /// Cov(X_t, X_r)
    pub cov_x: f64,
    /// Cov(Y_t, Y_r)
    pub cov_y: f64,
}

pub fn make_mode(vx: f64, vy: f64) -> Result<GaussianMode> {
    GaussianMode::new(vx, vy)
}

pub fn purity(m: &GaussianMode) -> f64 {
    1.0 / m.uncertainty_product().sqrt()
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::EtaOutOfRange(eta))
    }
}

/// Loss channel with transmission `η`: `v ↦ ηv + 1 − η` on both quadratures.
///
/// This is the transmitted arm of [`tap`] and also the model of a detector with
/// efficiency `η`.
pub fn attenuate(m: &GaussianMode, eta: f64) -> Result<GaussianMode> {
    check_eta(eta)?;
    Ok(GaussianMode {
        vx: attenuate_variance(m.vx, eta),
        vy: attenuate_variance(m.vy, eta),
    })
}

#[inline]
pub(crate) fn attenuate_variance(v: f64, eta: f64) -> f64 {
    eta * v + (1.0 - eta)
}

pub fn tap(m: &GaussianMode, eta: f64) -> Result<TapResult> {
    check_eta(eta)?;
    let mix = (eta * (1.0 - eta)).sqrt();
    Ok(TapResult {
        transmitted: GaussianMode {
            vx: attenuate_variance(m.vx, eta),
            vy: attenuate_variance(m.vy, eta),
        },
        reflected: GaussianMode {
            vx: attenuate_variance(m.vx, 1.0 - eta),
            vy: attenuate_variance(m.vy, 1.0 - eta),
        },
        cov_x: mix * (m.vx - 1.0),
        cov_y: mix * (m.vy - 1.0),
    })
}

/// `10·log10(v)`.
pub fn to_db(v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::NonPositiveVariance(v));
    }
    Ok(10.0 * v.log10())
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Squeezing in dB, positive for a variance below shot noise.
pub fn squeezing_db(v: f64) -> Result<f64> {
    to_db(v).map(|db| -db)
}

/// Variance for a squeezing level quoted as positive dB below shot noise.
pub fn from_squeezing_db(db: f64) -> f64 {
    from_db(-db)
}

//! Two-mode Gaussian states from interfering two squeezed beams, and their
//! logarithmic negativity.
//!
//! Quadrature ordering is `(x1, p1, x2, p2)`, shot-noise units (vacuum is the
//! identity). Log-negativity is used as the entanglement measure because it
//! follows in closed form from the covariance matrix; it stands in for the
//! entanglement of formation, which needs a normal-form reduction not
//! implemented here.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianMode, TapResult};
use crate::purification::{ff_y_min, vx_target_for_eta};

/// Slack on symplectic eigenvalues before a covariance matrix is rejected.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    /// Mode 1 block.
    pub a: Matrix2<f64>,
    /// Mode 2 block.
    pub b: Matrix2<f64>,
    /// Cross block, `Cov(mode 1, mode 2)`.
    pub c: Matrix2<f64>,
}

impl TwoModeCovariance {
    /// Product state of two uncorrelated single-mode states.
    pub fn direct_sum(m1: &GaussianMode, m2: &GaussianMode) -> Self {
        Self {
            a: Matrix2::new(m1.vx(), 0.0, 0.0, m1.vy()),
            b: Matrix2::new(m2.vx(), 0.0, 0.0, m2.vy()),
            c: Matrix2::zeros(),
        }
    }

    /// Joint state of the two outputs of a tap (transmitted = mode 1).
    pub fn from_tap(t: &TapResult) -> Self {
        Self {
            a: Matrix2::new(t.transmitted.vx(), 0.0, 0.0, t.transmitted.vy()),
            b: Matrix2::new(t.reflected.vx(), 0.0, 0.0, t.reflected.vy()),
            c: Matrix2::new(t.cov_x, 0.0, 0.0, t.cov_y),
        }
    }

    /// Splits a full 4×4 matrix into blocks. Rejects asymmetric input.
    pub fn from_matrix(m: &Matrix4<f64>) -> Result<Self> {
        let scale = m.amax().max(1.0);
        if (m - m.transpose()).amax() > 1e-12 * scale {
            return Err(Error::UnphysicalCovariance(
                "matrix is not symmetric".into(),
            ));
        }
        Ok(Self {
            a: m.fixed_view::<2, 2>(0, 0).into_owned(),
            b: m.fixed_view::<2, 2>(2, 2).into_owned(),
            c: m.fixed_view::<2, 2>(0, 2).into_owned(),
        })
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.c);
        m.fixed_view_mut::<2, 2>(2, 0)
            .copy_from(&self.c.transpose());
        m
    }

    pub fn swap_modes(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            c: self.c.transpose(),
        }
    }

    /// Determinant of the full matrix (LU, not cofactor expansion).
    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }

    /// Symplectic eigenvalues `(ν₋, ν₊)` by the closed form in the block
    /// determinants. Loses accuracy when `ν₋ ≈ ν₊` (e.g. pure states); see
    /// [`Self::symplectic_spectrum`].
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let delta = self.a.determinant() + self.b.determinant() + 2.0 * self.c.determinant();
        symplectic_pair(delta, self.det())
    }

    /// Symplectic eigenvalues `(ν₋, ν₊)` from the spectrum of the symmetric
    /// matrix `−K²`, `K = σ^½ Ω σ^½`, which stays accurate for degenerate pairs.
    /// `None` if the matrix is not positive definite.
    pub fn symplectic_spectrum(&self) -> Option<(f64, f64)> {
        let eig = SymmetricEigen::new(self.matrix());
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return None;
        }
        let root = eig.eigenvectors
            * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
            * eig.eigenvectors.transpose();
        let k = root * symplectic_form() * root;
        let mut nu2: Vec<f64> = SymmetricEigen::new(k.transpose() * k)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        nu2.sort_by(f64::total_cmp);
        Some((
            ((nu2[0] + nu2[1]) / 2.0).sqrt(),
            ((nu2[2] + nu2[3]) / 2.0).sqrt(),
        ))
    }

    /// Symplectic eigenvalues of the partial transpose, `(ν̃₋, ν̃₊)`.
    pub fn pt_symplectic_eigenvalues(&self) -> (f64, f64) {
        let delta = self.a.determinant() + self.b.determinant() - 2.0 * self.c.determinant();
        symplectic_pair(delta, self.det())
    }

    /// Checks positive-definite diagonal blocks and `ν₋ ≥ 1`.
    pub fn check_physical(&self) -> Result<()> {
        for (name, block) in [("A", &self.a), ("B", &self.b)] {
            if !(block[(0, 0)] > 0.0 && block.determinant() > 0.0) {
                return Err(Error::UnphysicalCovariance(format!(
                    "block {name} is not positive definite"
                )));
            }
        }
        let (nu_minus, _) = self
            .symplectic_spectrum()
            .ok_or_else(|| Error::UnphysicalCovariance("matrix is not positive definite".into()))?;
        if !(nu_minus >= 1.0 - PHYSICALITY_TOL) {
            return Err(Error::UnphysicalCovariance(format!(
                "smallest symplectic eigenvalue {nu_minus} < 1"
            )));
        }
        Ok(())
    }
}

#[rustfmt::skip]
fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
         0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
         0.0, 0.0, 0.0, 1.0,
         0.0, 0.0,-1.0, 0.0,
    )
}

/// Roots of `ν⁴ − Δν² + det = 0`. The small root is taken as `det/ν₊²` to
/// avoid cancellation when `Δ² ≫ det`.
fn symplectic_pair(delta: f64, det: f64) -> (f64, f64) {
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let plus2 = (delta + disc) / 2.0;
    let minus2 = if plus2 > 0.0 { det / plus2 } else { 0.0 };
    (minus2.max(0.0).sqrt(), plus2.sqrt())
}

fn check_transmission(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::TOutOfRange(t))
    }
}

/// Interferes `m1` (squeezed in x) with `m2` rotated by π/2 (so squeezed in p)
/// on a beam splitter of intensity transmission `t`.
pub fn entangle(m1: &GaussianMode, m2: &GaussianMode, t: f64) -> Result<TwoModeCovariance> {
    check_transmission(t)?;
    let input = TwoModeCovariance::direct_sum(m1, &m2.rotated()).matrix();
    let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
    #[rustfmt::skip]
    let bs = Matrix4::new(
          c, 0.0,   s, 0.0,
        0.0,   c, 0.0,   s,
         -s, 0.0,   c, 0.0,
        0.0,  -s, 0.0,   c,
    );
    let out = bs * input * bs.transpose();
    // symmetrize away rounding
    TwoModeCovariance::from_matrix(&((out + out.transpose()) * 0.5))
}

/// `E_N = max(0, −log₂ ν̃₋)`.
pub fn log_negativity(cm: &TwoModeCovariance) -> Result<f64> {
    cm.check_physical()?;
    let (nu_minus, _) = cm.pt_symplectic_eigenvalues();
    Ok((-nu_minus.log2()).max(0.0))
}

/// One row of [`entanglement_vs_purification`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementRow {
    pub eta: f64,
    /// Each input beam after purification.
    pub purified: GaussianMode,
    pub log_neg: f64,
}

/// Purifies two identical beams `(s, a)` with optimal feed-forward at each
/// `eta`, interferes them at transmission `t`, and reports `E_N`. The `eta = 1`
/// baseline is always included; rows are sorted by `eta` descending.
pub fn entanglement_vs_purification(
    s: f64,
    a: f64,
    t: f64,
    etas: &[f64],
    eps: f64,
) -> Result<Vec<EntanglementRow>> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::NotSqueezed(s));
    }
    let input = GaussianMode::new(s, a)?;
    check_transmission(t)?;
    let mut grid = etas.to_vec();
    grid.push(1.0);
    grid.sort_by(|x, y| y.total_cmp(x));
    grid.dedup();
    grid.into_iter()
        .map(|eta| {
            let purified = GaussianMode::new(
                vx_target_for_eta(input.vx(), eta)?,
                ff_y_min(input.vy(), eta, eps)?,
            )?;
            let log_neg = log_negativity(&entangle(&purified, &purified, t)?)?;
            Ok(EntanglementRow {
                eta,
                purified,
                log_neg,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::tap;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mode(vx: f64, vy: f64) -> GaussianMode {
        GaussianMode::new(vx, vy).unwrap()
    }

    /// Smallest symplectic eigenvalue of the partial transpose, read off the
    /// eigenvalues `±iν` of the non-symmetric matrix `Ωσ̃`.
    fn pt_min_by_eigen(cm: &TwoModeCovariance) -> f64 {
        let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        let st = p * cm.matrix() * p;
        let ev = (symplectic_form() * st).complex_eigenvalues();
        ev.iter().map(|z| z.im.abs()).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn entangle_cases() {
        let vac = entangle(&GaussianMode::vacuum(), &GaussianMode::vacuum(), 0.37).unwrap();
        assert!((vac.matrix() - Matrix4::identity()).amax() < 1e-15);

        let m1 = mode(0.3, 40.0);
        let m2 = mode(0.5, 3.0);
        for t in [0.0, 1.0] {
            let cm = entangle(&m1, &m2, t).unwrap();
            assert!(cm.c.amax() < 1e-15);
            assert_eq!(log_negativity(&cm).unwrap(), 0.0);
        }

        let cm = entangle(&mode(0.5, 2.0), &mode(0.5, 2.0), 0.5).unwrap();
        // Var[(x1 − x2)/√2] = (σ11 + σ33 − 2σ13)/2
        let m = cm.matrix();
        assert_relative_eq!(
            (m[(0, 0)] + m[(2, 2)] - 2.0 * m[(0, 2)]) / 2.0,
            0.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (m[(1, 1)] + m[(3, 3)] + 2.0 * m[(1, 3)]) / 2.0,
            0.5,
            max_relative = 1e-14
        );

        assert_eq!(entangle(&m1, &m2, 1.2), Err(Error::TOutOfRange(1.2)));
    }

    #[test]
    fn log_negativity_cases() {
        let pure = entangle(&mode(0.5, 2.0), &mode(0.5, 2.0), 0.5).unwrap();
        assert_relative_eq!(log_negativity(&pure).unwrap(), 1.0, max_relative = 1e-12);
        let mixed = entangle(&mode(0.5, 200.0), &mode(0.5, 200.0), 0.5).unwrap();
        assert_relative_eq!(log_negativity(&mixed).unwrap(), 1.0, max_relative = 1e-12);

        let unphysical = TwoModeCovariance::direct_sum(
            &GaussianMode::new_unchecked(0.5, 0.5).unwrap(),
            &GaussianMode::vacuum(),
        );
        assert!(matches!(
            log_negativity(&unphysical),
            Err(Error::UnphysicalCovariance(_))
        ));
        let asym = Matrix4::new(
            1.0, 0.5, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        );
        assert!(TwoModeCovariance::from_matrix(&asym).is_err());
    }

    #[test]
    fn closed_form_matches_eigen_route() {
        for &(s, a, t) in &[
            (0.3, 400.0, 0.9),
            (0.5, 2.0, 0.5),
            (0.2, 30.0, 0.7),
            (0.8, 5.0, 0.1),
        ] {
            let cm = entangle(&mode(s, a), &mode(s, a), t).unwrap();
            assert_relative_eq!(
                cm.pt_symplectic_eigenvalues().0,
                pt_min_by_eigen(&cm),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn tap_outputs_are_physical() {
        for &(vx, vy, eta) in &[(0.47, 100.0, 0.92), (0.1, 10.0, 0.5), (2.0, 0.5, 0.3)] {
            let cm = TwoModeCovariance::from_tap(&tap(&mode(vx, vy), eta).unwrap());
            cm.check_physical().unwrap();
        }
    }

    #[test]
    fn sweep_includes_baseline() {
        let rows = entanglement_vs_purification(0.3, 400.0, 0.5, &[0.5, 0.9], 1.0).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.eta).collect::<Vec<_>>(),
            vec![1.0, 0.9, 0.5]
        );
        // symmetric splitter: E_N is fixed by the purified squeezing alone
        for r in &rows {
            assert_relative_eq!(r.log_neg, -r.purified.vx().log2(), max_relative = 1e-10);
        }
        assert!(entanglement_vs_purification(1.2, 400.0, 0.5, &[0.5], 1.0).is_err());
    }

    #[test]
    fn pure_inputs_gain_nothing() {
        let s = 0.3;
        let etas: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        for t in [0.5, 0.7, 0.9, 0.99] {
            let rows = entanglement_vs_purification(s, 1.0 / s, t, &etas, 1.0).unwrap();
            let base = rows[0].log_neg;
            assert!(rows.iter().all(|r| r.log_neg <= base + 1e-12), "t = {t}");
        }
    }

    #[test]
    fn continuous_in_transmission() {
        let m = mode(0.3, 400.0);
        let values: Vec<f64> = (0..=2000)
            .map(|i| log_negativity(&entangle(&m, &m, i as f64 / 2000.0).unwrap()).unwrap())
            .collect();
        let max_step = values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        assert!(max_step < 0.1, "{max_step}");
    }

    fn physical_mode() -> impl Strategy<Value = GaussianMode> {
        (0.05f64..1.0, 1.0f64..1e3).prop_map(|(vx, k)| GaussianMode::new(vx, k / vx).unwrap())
    }

    proptest! {
        #[test]
        fn beam_splitter_preserves_symplectic_spectrum(m1 in physical_mode(), m2 in physical_mode(), t in 0.0f64..=1.0) {
            let cm = entangle(&m1, &m2, t).unwrap();
            let (lo, hi) = cm.symplectic_spectrum().unwrap();
            let mut expect = [m1.uncertainty_product().sqrt(), m2.uncertainty_product().sqrt()];
            expect.sort_by(f64::total_cmp);
            prop_assert!((lo - expect[0]).abs() <= 1e-10 * expect[0].max(1.0));
            prop_assert!((hi - expect[1]).abs() <= 1e-10 * expect[1].max(1.0));
        }

        #[test]
        fn log_neg_symmetric_under_swap(m1 in physical_mode(), m2 in physical_mode(), t in 0.0f64..=1.0) {
            let cm = entangle(&m1, &m2, t).unwrap();
            let e = log_negativity(&cm).unwrap();
            let swapped = log_negativity(&cm.swap_modes()).unwrap();
            prop_assert!((e - swapped).abs() <= 1e-10);
        }

        #[test]
        fn balanced_splitter_gives_squeezing(s in 0.05f64..1.0, k in 1.0f64..1e3) {
            let m = GaussianMode::new(s, k / s).unwrap();
            let cm = entangle(&m, &m, 0.5).unwrap();
            prop_assert!((cm.pt_symplectic_eigenvalues().0 - s).abs() <= 1e-10 * s);
        }
    }
}

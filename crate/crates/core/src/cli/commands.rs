use std::fmt::Write as _;

use super::{CliError, SweepSpec};
use crate::entanglement::entanglement_vs_purification;
use crate::gaussian::attenuate_variance;
use crate::photon::{
    capacity_contours, epr_capacity, holevo_capacity, trajectory, CapacityQuery, TrajectoryMode,
};
use crate::purification::{
    excess_noise_reduction, ff_y_min, noiseless_amp_comparison, optimal_bound, optimal_bound_at_eta,
};
use crate::sampling::{default_grid, sweep_verify_with_rerun, GridPoint, SIGMA_WINDOW};

/// Digits after the point in scientific notation (13 significant digits).
pub const NUMBER_FORMAT_DIGITS: usize = 12;

fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        // adding +0.0 maps -0.0 to 0.0
        format!("{:.*e}", NUMBER_FORMAT_DIGITS, x + 0.0)
    }
}

fn row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// `steps` evenly spaced points from `start` to `stop`; a single step yields `start`.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn purify_sweep_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let m = spec.input;
    let mut out = String::from(
        "eta,vx_t,vy_noff,vy_ff_ideal,vy_ff_eps,vy_min_bound,product_noff,product_ff,purity_in,purity_out,excess_reduction\n",
    );
    for eta in spec.etas() {
        let vx_t = attenuate_variance(m.vx(), eta);
        let vy_noff = attenuate_variance(m.vy(), eta);
        let vy_ideal = ff_y_min(m.vy(), eta, 1.0)?;
        let vy_eps = ff_y_min(m.vy(), eta, spec.eps)?;
        let bound = optimal_bound_at_eta(&m, eta)?;
        let product_ff = vx_t * vy_eps;
        row(
            &mut out,
            &[
                num(eta),
                num(vx_t),
                num(vy_noff),
                num(vy_ideal),
                num(vy_eps),
                num(bound),
                num(vx_t * vy_noff),
                num(product_ff),
                num(m.purity()),
                num(1.0 / product_ff.sqrt()),
                num(excess_noise_reduction(m.vy(), eta, spec.eps, spec.eta_det)?),
            ],
        );
    }
    Ok(out)
}

/// Sweeps the target amplitude variance from the input `vx` up to 1.
pub fn optimal_bound_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let m = spec.input;
    let mut out = String::from("vx_target,vy_min,eta,vy_noiseless_amp\n");
    for vx_target in linspace(m.vx(), 1.0, spec.eta_steps) {
        let eta = if m.vx() < 1.0 {
            (1.0 - vx_target) / (1.0 - m.vx())
        } else {
            f64::NAN
        };
        row(
            &mut out,
            &[
                num(vx_target),
                num(optimal_bound(&m, vx_target)?),
                num(eta),
                num(noiseless_amp_comparison(&m, vx_target)?),
            ],
        );
    }
    Ok(out)
}

pub fn photon_diagram_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let q = CapacityQuery::new(spec.n_cp)?;
    let holevo = q.holevo();
    let etas = spec.etas();
    let mut out = String::from("eta,mode,vx,vy,n_total,n_noncl,n_thermal,c_epr,c_ratio,success\n");
    for mode in [TrajectoryMode::AttenuateOnly, TrajectoryMode::FeedForward] {
        for p in trajectory(&spec.input, &etas, mode, spec.eps)? {
            let c = epr_capacity(&p.state, &q).unwrap_or(f64::NAN);
            row(
                &mut out,
                &[
                    num(p.eta),
                    mode.label().to_string(),
                    num(p.state.vx()),
                    num(p.state.vy()),
                    num(p.budget.n_total),
                    num(p.budget.n_noncl),
                    num(p.budget.n_thermal),
                    num(c),
                    num(c / holevo),
                    u8::from(c > holevo).to_string(),
                ],
            );
        }
    }
    Ok(out)
}

/// Contour grid; cells whose signal budget is negative carry `NaN`.
pub fn dense_coding_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let q = CapacityQuery::new(spec.n_cp)?;
    let holevo = holevo_capacity(spec.n_cp)?;
    let noncl = linspace(0.0, spec.noncl_max, spec.grid_steps);
    let thermal = linspace(0.0, spec.thermal_max, spec.grid_steps);
    let mut out = String::from("n_noncl,n_thermal,c_epr,ratio\n");
    for cell in capacity_contours(&noncl, &thermal, &q) {
        let ratio = cell.ratio.unwrap_or(f64::NAN);
        row(
            &mut out,
            &[
                num(cell.n_noncl),
                num(cell.n_thermal),
                num(ratio * holevo),
                num(ratio),
            ],
        );
    }
    Ok(out)
}

pub fn entanglement_sweep_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let m = spec.input;
    let rows = entanglement_vs_purification(m.vx(), m.vy(), spec.bs_t, &spec.etas(), spec.eps)?;
    let baseline = rows
        .iter()
        .find(|r| r.eta == 1.0)
        .map(|r| r.log_neg)
        .unwrap_or(f64::NAN);
    let mut out = String::from("eta,vx,vy,log_neg,log_neg_minus_baseline\n");
    for r in rows {
        row(
            &mut out,
            &[
                num(r.eta),
                num(r.purified.vx()),
                num(r.purified.vy()),
                num(r.log_neg),
                num(r.log_neg - baseline),
            ],
        );
    }
    Ok(out)
}

fn mc_grid(spec: &SweepSpec) -> Vec<GridPoint> {
    if !spec.explicit_state {
        return default_grid();
    }
    spec.etas()
        .into_iter()
        .map(|eta| GridPoint {
            vx: spec.input.vx(),
            vy: spec.input.vy(),
            eta,
            eps: spec.eps,
        })
        .collect()
}

/// Text report of the Monte-Carlo sweep and whether every point passed.
pub fn mc_verify_report(spec: &SweepSpec) -> Result<(String, bool), CliError> {
    let grid = mc_grid(spec);
    let report = sweep_verify_with_rerun(&grid, spec.samples, spec.seed)?;
    let mut out = String::new();
    writeln!(
        out,
        "# mc-verify points={} samples={} seed={} window={}sigma failures={} recovered_on_rerun={}",
        grid.len(),
        spec.samples,
        spec.seed,
        SIGMA_WINDOW,
        report.failures.len(),
        report.recovered.len()
    )
    .expect("write to String");
    out.push_str("index,vx,vy,eta,eps,gain,analytic_vx,empirical_vx,analytic_vy,empirical_vy,z_x,z_y,status\n");
    for p in &report.points {
        let (zx, zy) = p.z_scores();
        row(
            &mut out,
            &[
                p.index.to_string(),
                num(p.point.vx),
                num(p.point.vy),
                num(p.point.eta),
                num(p.point.eps),
                num(p.gain),
                num(p.analytic_vx),
                num(p.empirical.vx_t),
                num(p.analytic_vy),
                num(p.empirical.vy_t),
                num(zx),
                num(zy),
                if p.passed { "pass" } else { "FAIL" }.to_string(),
            ],
        );
    }
    Ok((out, report.passed()))
}

//! The five subcommands: transmission, precision, map, estimate, optimize.

use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use cirsensor_core::estimation::{ml_estimate, simulate_counts};
use cirsensor_core::metrology::{
    averaged_transmission, ensemble_precision, fisher_information, sensitivity_per_root_hz,
    single_shot_precision,
};
use cirsensor_core::optimizer::{
    find_cir, find_zero_crossing, linear_grid, log_grid, minimize_delta_b, precision_map, Branch,
};
use cirsensor_core::scattering::TransmissionCurve;

use crate::config::Run;
use crate::manifest::write_manifest;
use crate::output::{fmt_float, write_csv, write_json};
use crate::CliError;

fn numeric(e: cirsensor_core::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

fn field_grid(b_min: f64, b_max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Config("points must be at least 1".into()));
    }
    if points > 1 && !(b_min < b_max) {
        return Err(CliError::Config("need b-min < b-max".into()));
    }
    Ok(linear_grid(b_min, b_max, points))
}

pub fn transmission(
    run: &Run,
    out_dir: &Path,
    b_min: f64,
    b_max: f64,
    points: usize,
) -> Result<(), CliError> {
    let grid = field_grid(b_min, b_max, points)?;
    let cfg = &run.config;
    let curve = TransmissionCurve::new(&run.collision, &cfg.resonance, &cfg.trap).map_err(numeric)?;
    let averaged = cfg.budget.sigma_p > 0.0;

    let mut rows = Vec::with_capacity(grid.len());
    for &b in &grid {
        let t = curve.transmission(b);
        if averaged {
            let t_avg = averaged_transmission(b, run.p, cfg.budget.sigma_p, &cfg.resonance, &cfg.trap)
                .map_err(numeric)?;
            rows.push(format!("{},{},{}", fmt_float(b), fmt_float(t), fmt_float(t_avg)));
        } else {
            rows.push(format!("{},{}", fmt_float(b), fmt_float(t)));
        }
    }
    let header = if averaged { "B,T,T_averaged" } else { "B,T" };
    let csv = "transmission.csv".to_string();
    write_csv(&out_dir.join(&csv), header, rows.into_iter())?;
    write_manifest(
        out_dir,
        "transmission",
        "transmission",
        json!({"b_min": b_min, "b_max": b_max, "points": points}),
        run,
        &[csv],
        json!({}),
    )
}

pub fn precision(
    run: &Run,
    out_dir: &Path,
    b_min: f64,
    b_max: f64,
    points: usize,
) -> Result<(), CliError> {
    let grid = field_grid(b_min, b_max, points)?;
    let cfg = &run.config;
    let mut rows = Vec::with_capacity(grid.len());
    for &b in &grid {
        let f = fisher_information(b, &run.collision, &cfg.resonance, &cfg.trap, &cfg.detector)
            .map_err(numeric)?;
        let db = single_shot_precision(b, &run.collision, &cfg.resonance, &cfg.trap, &cfg.detector)
            .map_err(numeric)?;
        rows.push(format!("{},{},{}", fmt_float(b), fmt_float(f), fmt_float(db)));
    }
    let csv = "precision.csv".to_string();
    write_csv(&out_dir.join(&csv), "B,F,deltaB", rows.into_iter())?;
    write_manifest(
        out_dir,
        "precision",
        "precision",
        json!({"b_min": b_min, "b_max": b_max, "points": points}),
        run,
        &[csv],
        json!({}),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn map(
    run: &Run,
    out_dir: &Path,
    b_min: f64,
    b_max: f64,
    nb: usize,
    p_min: f64,
    p_max: f64,
    np: usize,
) -> Result<(), CliError> {
    if nb == 0 || np == 0 {
        return Err(CliError::Config("grid sizes must be at least 1".into()));
    }
    if nb > 1 && !(b_min < b_max) {
        return Err(CliError::Config("need b-min < b-max".into()));
    }
    if !(p_min > 0.0) || (np > 1 && !(p_min < p_max)) {
        return Err(CliError::Config("need 0 < p-min < p-max".into()));
    }
    let cfg = &run.config;
    let b_grid = linear_grid(b_min, b_max, nb);
    let p_grid = log_grid(p_min, p_max, np);
    let map = precision_map(&cfg.resonance, &cfg.trap, &cfg.detector, &b_grid, &p_grid)
        .map_err(numeric)?;

    let mut rows = Vec::with_capacity(nb * np);
    for (ip, &p) in p_grid.iter().enumerate() {
        for (ib, &b) in b_grid.iter().enumerate() {
            rows.push(format!(
                "{},{},{}",
                fmt_float(b),
                fmt_float(p),
                fmt_float(map.at(ip, ib))
            ));
        }
    }
    let csv = "map.csv".to_string();
    write_csv(&out_dir.join(&csv), "B,p,deltaB", rows.into_iter())?;

    let features = json!({
        "cir_b": map.features.cir_b,
        "zero_crossing_b": map.features.zero_crossing_b,
        "unit_transmission_b": map.features.unit_transmission_b,
    });
    let features_file = "map.features.json".to_string();
    write_json(&out_dir.join(&features_file), &features)?;
    write_manifest(
        out_dir,
        "map",
        "map",
        json!({
            "b_min": b_min, "b_max": b_max, "nb": nb,
            "p_min": p_min, "p_max": p_max, "np": np
        }),
        run,
        &[csv, features_file],
        features,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn estimate(
    run: &Run,
    out_dir: &Path,
    b_true: f64,
    m_sent: u64,
    n_trials: u64,
    prior_min: f64,
    prior_max: f64,
) -> Result<(), CliError> {
    if m_sent == 0 || n_trials == 0 {
        return Err(CliError::Config("m-sent and n-trials must be >= 1".into()));
    }
    if !(prior_min < prior_max) {
        return Err(CliError::Config("need prior-min < prior-max".into()));
    }
    let cfg = &run.config;
    let prior = (prior_min, prior_max);
    let seed = cfg.seed;

    // independent RNG stream per trial: parallel evaluation, deterministic output
    let trials: Result<Vec<_>, CliError> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let record = simulate_counts(
                b_true,
                &run.collision,
                &cfg.resonance,
                &cfg.trap,
                &cfg.detector,
                m_sent,
                seed,
                trial,
            )
            .map_err(numeric)?;
            let est = ml_estimate(&record, prior, &run.collision, &cfg.resonance, &cfg.trap)
                .map_err(numeric)?;
            Ok((record, est))
        })
        .collect();
    let trials = trials?;

    let rows = trials.iter().enumerate().map(|(i, (rec, est))| {
        format!(
            "{},{},{},{}",
            i,
            rec.n_detected(),
            fmt_float(est.b_hat),
            u8::from(est.clamped)
        )
    });
    let csv = "estimate.csv".to_string();
    write_csv(&out_dir.join(&csv), "trial,n_detected,b_hat,clamped", rows)?;

    let n = n_trials as f64;
    let mean = trials.iter().map(|(_, e)| e.b_hat).sum::<f64>() / n;
    let var = if n_trials > 1 {
        trials
            .iter()
            .map(|(_, e)| (e.b_hat - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    let clamp_count = trials.iter().filter(|(_, e)| e.clamped).count() as u64;
    let clamp_rate = clamp_count as f64 / n;
    let fisher = fisher_information(b_true, &run.collision, &cfg.resonance, &cfg.trap, &cfg.detector)
        .map_err(numeric)?;
    let crlb_var = 1.0 / (m_sent as f64 * fisher);
    let ratio = var / crlb_var;
    let warning = if clamp_rate > 0.01 {
        Some(format!(
            "{:.1}% of trials clamped at the prior boundary; variance and CRLB ratio are unreliable — widen the prior or move b_true inside it",
            clamp_rate * 100.0
        ))
    } else {
        None
    };

    let summary = json!({
        "b_true": b_true,
        "m_sent": m_sent,
        "n_trials": n_trials,
        "prior": [prior_min, prior_max],
        "mean_b_hat": mean,
        "var_b_hat": var,
        "fisher_per_atom": fisher,
        "crlb_variance": crlb_var,
        "crlb_ratio": ratio,
        "clamp_rate": clamp_rate,
        "warning": warning,
    });
    let summary_file = "estimate.summary.json".to_string();
    write_json(&out_dir.join(&summary_file), &summary)?;
    write_manifest(
        out_dir,
        "estimate",
        "estimate",
        json!({
            "b_true": b_true, "m_sent": m_sent, "n_trials": n_trials,
            "prior_min": prior_min, "prior_max": prior_max
        }),
        run,
        &[csv, summary_file],
        json!({"crlb_ratio": ratio, "clamp_rate": clamp_rate}),
    )
}

pub fn optimize(
    run: &Run,
    out_dir: &Path,
    b_min: f64,
    b_max: f64,
    p_min: f64,
    p_max: f64,
) -> Result<(), CliError> {
    let cfg = &run.config;
    let opt = minimize_delta_b(
        &cfg.resonance,
        &cfg.trap,
        &cfg.detector,
        (b_min, b_max),
        (p_min, p_max),
    )
    .map_err(numeric)?;

    let temperature_nk = run.units.momentum_to_temperature(opt.p).map_err(numeric)?;
    let ensemble = ensemble_precision(opt.delta_b, &cfg.budget).ok();
    let sensitivity = sensitivity_per_root_hz(opt.delta_b, &cfg.budget).ok();
    let branch = match opt.branch {
        Branch::Cir => "cir",
        Branch::Peak => "peak",
    };
    let result = json!({
        "b_star": opt.b,
        "p_star": opt.p,
        "delta_b_star": opt.delta_b,
        "branch": branch,
        "on_boundary": opt.on_boundary,
        "temperature_nk": temperature_nk,
        "ensemble_delta_b": ensemble,
        "sensitivity_t_per_rthz": sensitivity,
        "windows": {"b": [b_min, b_max], "p": [p_min, p_max]},
    });
    let json_file = "optimize.json".to_string();
    write_json(&out_dir.join(&json_file), &result)?;

    // feature locations at the optimal momentum, for the manifest
    let coll = cirsensor_core::scattering::Collision::new(opt.p, &cfg.trap).map_err(numeric)?;
    let cir_b = find_cir(&coll, &cfg.resonance, &cfg.trap, (b_min, b_max)).ok();
    let zero_b = find_zero_crossing(&cfg.resonance, coll.e_total);
    write_manifest(
        out_dir,
        "optimize",
        "optimize",
        json!({"b_min": b_min, "b_max": b_max, "p_min": p_min, "p_max": p_max}),
        run,
        &[json_file],
        json!({
            "delta_b_star": opt.delta_b,
            "p_star": opt.p,
            "b_star": opt.b,
            "branch": branch,
            "optimum_temperature_nk": temperature_nk,
            "cir_b": cir_b,
            "zero_crossing_b_at_p_star": zero_b,
        }),
    )
}

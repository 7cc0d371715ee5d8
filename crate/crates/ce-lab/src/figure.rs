//! Plot-ready datasets for the two benchmark figures: CE-vs-n curves from
//! Haar LRM data, and the four-estimator comparison at a shared total budget.

use std::fs;
use std::path::Path;

use ce_core::{
    k_opt, lrm_mean_estimate, lrm_mom_estimate, sic_mom_k2_estimate, sic_mom_kopt_estimate,
    simulate_lrm, simulate_sic, substream, EnsembleKind, LrmRecord, LrmSettings, PureState,
    Strategy, SubsetSpec,
};
use rand::Rng;
use rayon::prelude::*;

use crate::run::{shared_total_budget, split_shared_budget, Result, RunError};

/// One point of the CE-vs-n dataset.
#[derive(Debug, Clone)]
pub struct Fig2Row {
    pub state: &'static str,
    pub n: u32,
    pub estimate: f64,
    pub analytic: f64,
    /// Formula-derived standard error (3/2)^s √(P₂(1−P₂)/L) with
    /// P₂ = (2/3)^s (1−C).
    pub std_err: f64,
}

/// GHZ and W estimates for n in `n_range` from L Haar settings at K = 2.
pub fn fig2_dataset(
    unitary_count: u64,
    n_range: (u32, u32),
    seed: u64,
) -> Result<Vec<Fig2Row>> {
    let mut rows = Vec::new();
    let mut seed_rng = substream(seed, u64::MAX);
    for n in n_range.0..=n_range.1 {
        for kind in ["ghz", "w"] {
            let state = match kind {
                "ghz" => PureState::ghz(n)?,
                _ => PureState::w(n)?,
            };
            let subset = SubsetSpec::full(n)?;
            let analytic = match kind {
                "ghz" => 0.5 - 0.5f64.powi(n as i32),
                _ => 0.5 - 1.0 / (2.0 * n as f64),
            };
            let rec = simulate_lrm(
                &state,
                &subset,
                unitary_count,
                2,
                EnsembleKind::HaarU2,
                seed_rng.gen(),
            )?;
            let est = lrm_mean_estimate(&rec)?;
            let p2 = (2.0f64 / 3.0).powi(n as i32) * (1.0 - analytic);
            let std_err =
                1.5f64.powi(n as i32) * (p2 * (1.0 - p2) / unitary_count as f64).sqrt();
            rows.push(Fig2Row {
                state: if kind == "ghz" { "ghz" } else { "w" },
                n,
                estimate: est.estimate,
                analytic,
                std_err,
            });
        }
    }
    Ok(rows)
}

pub fn write_fig2_csv(rows: &[Fig2Row], path: &Path) -> Result<()> {
    let mut out = String::from("state,n,estimate,analytic,std_err\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.state, r.n, r.estimate, r.analytic, r.std_err
        ));
    }
    fs::write(path, out).map_err(RunError::Io)?;
    Ok(())
}

/// Per-trial estimates of all four strategies at a shared total budget.
#[derive(Debug, Clone)]
pub struct Fig4Data {
    pub epsilon: f64,
    pub delta: f64,
    pub k_opt: u64,
    pub total_shots: u64,
    /// Estimates per trial, indexed like [`Strategy::ALL`].
    pub estimates: [Vec<f64>; 4],
}

impl Fig4Data {
    pub fn estimates_for(&self, strategy: Strategy) -> &[f64] {
        let idx = Strategy::ALL.iter().position(|&s| s == strategy).unwrap();
        &self.estimates[idx]
    }
}

/// The four-estimator comparison on GHZ_5 with local Cliffords: the shared
/// total is the SIC-Kopt budget at (ε, δ); each strategy consumes it through
/// its own batching structure, and the two LRM (resp. SIC) estimators
/// post-process the same data.
pub fn fig4_dataset(trials: u32, epsilon: f64, delta: f64, seed: u64) -> Result<Fig4Data> {
    let n = 5u32;
    let state = PureState::ghz(n)?;
    let subset = SubsetSpec::full(n)?;
    let total = shared_total_budget(n, epsilon, delta)?;
    let lrm_l = split_shared_budget(Strategy::LrmMean, total, delta)?;
    let lrm_mom_l = split_shared_budget(Strategy::LrmMom, total, delta)?;
    let sic_m = split_shared_budget(Strategy::SicMomK2, total, delta)?;

    let mut seed_rng = substream(seed, u64::MAX);
    let seeds: Vec<(u64, u64)> = (0..trials)
        .map(|_| (seed_rng.gen(), seed_rng.gen()))
        .collect();

    let per_trial: Vec<[f64; 4]> = seeds
        .par_iter()
        .map(|&(lrm_seed, sic_seed)| {
            let lrm_rec = simulate_lrm(
                &state,
                &subset,
                lrm_l,
                2,
                EnsembleKind::CliffordU2,
                lrm_seed,
            )?;
            let mean = lrm_mean_estimate(&lrm_rec)?.estimate;
            let mom_rec = truncate_lrm(&lrm_rec, lrm_mom_l)?;
            let mom = lrm_mom_estimate(&mom_rec, delta)?.estimate;

            let sic_rec = simulate_sic(&state, &subset, total, sic_seed)?;
            let kopt = sic_mom_kopt_estimate(&sic_rec, delta, epsilon)?.estimate;
            let mut k2_rec = sic_rec;
            k2_rec.outcomes.truncate(sic_m as usize);
            k2_rec.shots = sic_m;
            let k2 = sic_mom_k2_estimate(&k2_rec, delta)?.estimate;

            Ok([mean, mom, k2, kopt])
        })
        .collect::<Result<_>>()?;

    let mut estimates: [Vec<f64>; 4] = Default::default();
    for row in per_trial {
        for (column, value) in estimates.iter_mut().zip(row.iter()) {
            column.push(*value);
        }
    }
    Ok(Fig4Data {
        epsilon,
        delta,
        k_opt: k_opt(n, epsilon)?,
        total_shots: total,
        estimates,
    })
}

/// First `keep` settings of an LRM record (same data, shorter prefix).
fn truncate_lrm(record: &LrmRecord, keep: u64) -> Result<LrmRecord> {
    let k = record.shots_per_unitary;
    let settings = match &record.settings {
        LrmSettings::Clifford(v) => LrmSettings::Clifford(v[..keep as usize].to_vec()),
        LrmSettings::Haar(v) => LrmSettings::Haar(v[..keep as usize].to_vec()),
    };
    let outcomes = record.outcomes[..(keep * k) as usize].to_vec();
    Ok(LrmRecord::new(
        record.subset.clone(),
        settings,
        k,
        outcomes,
        record.seed,
    )?)
}

pub fn write_fig4_csv(data: &Fig4Data, path: &Path) -> Result<()> {
    let mut out = String::from("strategy,trial,estimate\n");
    for (strategy, estimates) in Strategy::ALL.iter().zip(data.estimates.iter()) {
        for (trial, value) in estimates.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", strategy, trial + 1, value));
        }
    }
    fs::write(path, out).map_err(RunError::Io)?;
    Ok(())
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn sample_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

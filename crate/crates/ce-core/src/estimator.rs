//! The four CE estimators, their shared coincidence statistic, exact variance
//! formulas, and moment oracles.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::ensemble::{clifford_table, sample_haar_u2, LocalUnitary, SingleQubitUnitary};
use crate::error::{Error, Result};
use crate::planner::{batch_count, k_opt, Strategy};
use crate::sim::{lrm_distribution, sic_distribution, substream, LrmRecord, SicRecord};
use crate::state::{PureState, SubsetSpec};

/// A CE point estimate with method metadata.
///
/// Estimates are reported unclipped: they never exceed 1 but may be negative,
/// which preserves unbiasedness.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub method: Strategy,
    pub estimate: f64,
    pub subset: SubsetSpec,
    /// Present exactly for the median-of-means methods.
    pub batch_means: Option<Vec<f64>>,
    /// Upper bound on the variance of the mean estimator (LRM-Mean) or of
    /// each batch estimate (MoM methods).
    pub variance_bound: f64,
    pub shots_used: u64,
    pub settings_used: u64,
}

/// Fraction of ordered distinct pairs of equal outcome strings among K shots.
///
/// Computed by multiset tally, Σ_z c_z(c_z − 1)/(K(K − 1)), which is
/// algebraically identical to the pairwise double sum but runs in O(K).
pub fn coincidence_stat(outcomes: &[u64]) -> Result<f64> {
    let k = outcomes.len() as u64;
    if k < 2 {
        return Err(Error::InvalidBudget("coincidence statistic needs K >= 2"));
    }
    if k == 2 {
        return Ok(if outcomes[0] == outcomes[1] { 1.0 } else { 0.0 });
    }
    let pairs = tally_coincident_pairs(outcomes);
    Ok(pairs as f64 / (k * (k - 1)) as f64)
}

/// Σ_z c_z (c_z − 1) over the multiset of outcomes.
fn tally_coincident_pairs(outcomes: &[u64]) -> u128 {
    const DENSE_LIMIT: u64 = 1 << 22;
    let max = outcomes.iter().copied().max().unwrap_or(0);
    let mut pairs: u128 = 0;
    if max < DENSE_LIMIT {
        let mut counts = vec![0u64; max as usize + 1];
        for &z in outcomes {
            counts[z as usize] += 1;
        }
        for &c in &counts {
            if c > 1 {
                pairs += (c as u128) * ((c - 1) as u128);
            }
        }
    } else {
        let mut sorted = outcomes.to_vec();
        sorted.sort_unstable();
        let mut run = 1u128;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                pairs += run * (run - 1);
                run = 1;
            }
        }
        pairs += run * (run - 1);
    }
    pairs
}

/// Unbiased per-string squared-probability estimates
/// P̂(z)(K·P̂(z) − 1)/(K − 1) from per-string counts; their sum equals the
/// coincidence statistic.
pub fn squared_prob_estimates(counts: &[u64], shots: u64) -> Result<Vec<f64>> {
    if shots < 2 {
        return Err(Error::InvalidBudget("K must be >= 2"));
    }
    let total: u64 = counts.iter().sum();
    if total != shots {
        return Err(Error::InvalidCounts("counts must sum to K"));
    }
    let denom = (shots * (shots - 1)) as f64;
    Ok(counts
        .iter()
        .map(|&c| (c as f64) * (c as f64 - 1.0) / denom)
        .collect())
}

/// Median with the even-length convention: arithmetic mean of the two central
/// order statistics.
pub fn median(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

/// Dropped-terms upper bound on Var[Ŝ^(K)] for LRM data, from the moment
/// bounds P₂ ≤ (2/3)^s, P₃ ≤ 1/2^s, P₂,₂ ≤ P₂.
pub fn lrm_stat_variance_upper(s: u32, shots: u64) -> f64 {
    let k = shots as f64;
    let p2 = (2.0f64 / 3.0).powi(s as i32);
    let p3 = 0.5f64.powi(s as i32);
    (2.0 * p2 + 4.0 * (k - 2.0) * p3 + (k - 2.0) * (k - 3.0).max(0.0) * p2) / (k * (k - 1.0))
}

/// Upper bound on Var[Ĉ^(K)] for SIC data:
/// (2/(K(K−1)))(3^s + 2(K−2)(3/2)^s).
pub fn sic_ce_variance_upper(s: u32, shots: u64) -> f64 {
    let k = shots as f64;
    2.0 / (k * (k - 1.0)) * (3.0f64.powi(s as i32) + 2.0 * (k - 2.0) * 1.5f64.powi(s as i32))
}

/// Plain-average LRM estimator: Ĉ = 1 − (3/2)^s · (1/L) Σ_l Ŝ_l^(K).
pub fn lrm_mean_estimate(record: &LrmRecord) -> Result<EstimateResult> {
    let s = record.subset.s();
    let l = record.unitary_count;
    let k = record.shots_per_unitary;
    let mut acc = 0.0;
    for group in record.outcomes.chunks(k as usize) {
        acc += coincidence_stat(group)?;
    }
    let mean_stat = acc / l as f64;
    let scale = 1.5f64.powi(s as i32);
    let estimate = 1.0 - scale * mean_stat;
    Ok(EstimateResult {
        method: Strategy::LrmMean,
        estimate,
        subset: record.subset.clone(),
        batch_means: None,
        variance_bound: scale * scale * lrm_stat_variance_upper(s, k) / l as f64,
        shots_used: l * k,
        settings_used: l,
    })
}

/// Median-of-means LRM estimator at K = 2 over N_B = ⌈8 ln(1/δ)⌉ equal
/// batches of unitaries.
pub fn lrm_mom_estimate(record: &LrmRecord, delta: f64) -> Result<EstimateResult> {
    if record.shots_per_unitary != 2 {
        return Err(Error::InvalidBudget("LRM-MoM requires K = 2"));
    }
    let n_b = batch_count(delta)?;
    let l = record.unitary_count;
    if l < n_b {
        return Err(Error::InvalidBudget("insufficient unitaries for batching"));
    }
    if !l.is_multiple_of(n_b) {
        return Err(Error::InvalidBudget(
            "unitary count must divide into equal batches",
        ));
    }
    let b = (l / n_b) as usize;
    let s = record.subset.s();
    let scale = 1.5f64.powi(s as i32);
    let mut batch_means = Vec::with_capacity(n_b as usize);
    for batch in record.outcomes.chunks(2 * b) {
        let coincident = batch
            .chunks(2)
            .filter(|pair| pair[0] == pair[1])
            .count();
        batch_means.push(1.0 - scale * coincident as f64 / b as f64);
    }
    let estimate = median(&batch_means);
    Ok(EstimateResult {
        method: Strategy::LrmMom,
        estimate,
        subset: record.subset.clone(),
        batch_means: Some(batch_means),
        variance_bound: scale.powi(2) * (2.0f64 / 3.0).powi(s as i32) / b as f64,
        shots_used: l * 2,
        settings_used: l,
    })
}

/// Median-of-means SIC estimator at K = 2: consecutive outcomes are paired,
/// N_B batches of B pair-indicators are averaged, and the median is taken.
pub fn sic_mom_k2_estimate(record: &SicRecord, delta: f64) -> Result<EstimateResult> {
    let n_b = batch_count(delta)?;
    let m = record.shots;
    if !m.is_multiple_of(2 * n_b) || m < 2 * n_b {
        return Err(Error::InvalidBudget(
            "M must equal 2·N_B·B for batching at K = 2",
        ));
    }
    let b = (m / (2 * n_b)) as usize;
    let s = record.subset.s();
    let scale = 3.0f64.powi(s as i32);
    let mut batch_means = Vec::with_capacity(n_b as usize);
    for batch in record.outcomes.chunks(2 * b) {
        let coincident = batch
            .chunks(2)
            .filter(|pair| pair[0] == pair[1])
            .count();
        batch_means.push(1.0 - scale * coincident as f64 / b as f64);
    }
    let estimate = median(&batch_means);
    Ok(EstimateResult {
        method: Strategy::SicMomK2,
        estimate,
        subset: record.subset.clone(),
        batch_means: Some(batch_means),
        variance_bound: scale / b as f64,
        shots_used: m,
        settings_used: 1,
    })
}

/// Median-of-means SIC estimator at K = K_opt(s, ε): each batch contributes
/// one coincidence statistic over K_opt outcomes.
pub fn sic_mom_kopt_estimate(
    record: &SicRecord,
    delta: f64,
    epsilon: f64,
) -> Result<EstimateResult> {
    let n_b = batch_count(delta)?;
    let s = record.subset.s();
    let k = k_opt(s, epsilon)?;
    let m = record.shots;
    if m != n_b * k {
        return Err(Error::InvalidBudget("M must equal N_B·K_opt for batching"));
    }
    let scale = 3.0f64.powi(s as i32);
    let mut batch_means = Vec::with_capacity(n_b as usize);
    for batch in record.outcomes.chunks(k as usize) {
        batch_means.push(1.0 - scale * coincidence_stat(batch)?);
    }
    let estimate = median(&batch_means);
    Ok(EstimateResult {
        method: Strategy::SicMomKopt,
        estimate,
        subset: record.subset.clone(),
        batch_means: Some(batch_means),
        variance_bound: sic_ce_variance_upper(s, k),
        shots_used: m,
        settings_used: 1,
    })
}

/// How a moment summary was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentProvenance {
    ExactEnumeration,
    MonteCarlo,
    ClosedFormBound,
}

/// The moments P₂ = E[Σ_z P(z)²], P₃ = E[Σ_z P(z)³] and
/// P₂,₂ = E[(Σ_z P(z)²)²] entering the variance formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub p2: f64,
    pub p3: f64,
    pub p22: f64,
    pub provenance: MomentProvenance,
}

impl MomentSummary {
    fn validate(self) -> Result<Self> {
        let tol = 1e-12;
        if !((-tol..=1.0 + tol).contains(&self.p2)
            && self.p3 <= self.p2 + tol
            && self.p3 >= -tol
            && self.p22 <= self.p2 + tol)
        {
            return Err(Error::InvalidParam("moment summary out of range"));
        }
        Ok(self)
    }

    /// Worst-case LRM moments: P₂ ≤ (2/3)^s, P₃ ≤ 1/2^s, P₂,₂ ≤ P₂.
    pub fn lrm_bounds(s: u32) -> Self {
        let p2 = (2.0f64 / 3.0).powi(s as i32);
        MomentSummary {
            p2,
            p3: 0.5f64.powi(s as i32),
            p22: p2,
            provenance: MomentProvenance::ClosedFormBound,
        }
    }

    /// Worst-case SIC moments: P₂ ≤ 1/3^s, P₃ ≤ 1/6^s.
    pub fn sic_bounds(s: u32) -> Self {
        let p2 = 3.0f64.powi(-(s as i32));
        MomentSummary {
            p2,
            p3: 6.0f64.powi(-(s as i32)),
            p22: p2 * p2,
            provenance: MomentProvenance::ClosedFormBound,
        }
    }
}

/// Which averaging the moment oracle performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    /// Exact average over all 24^s Clifford settings (s ≤ 2).
    CliffordExhaustive,
    /// Monte-Carlo average over Haar settings.
    HaarMonteCarlo { samples: u64, seed: u64 },
    /// Exact sums over the 4^s SIC outcome distribution.
    Sic,
}

/// Computes P₂/P₃/P₂,₂ for a state and subset from the chosen source, and
/// checks the closed-form bounds where the result is exact.
pub fn moments_oracle(
    state: &PureState,
    subset: &SubsetSpec,
    source: MomentSource,
) -> Result<MomentSummary> {
    let s = subset.s();
    match source {
        MomentSource::CliffordExhaustive => {
            if s > 2 {
                return Err(Error::InfeasibleEnumeration(
                    "exhaustive Clifford moments are limited to s <= 2",
                ));
            }
            let table = clifford_table();
            let mut idxs = vec![0usize; s as usize];
            let total = 24usize.pow(s);
            let (mut p2, mut p3, mut p22) = (0.0, 0.0, 0.0);
            for setting in 0..total {
                let mut rem = setting;
                for slot in idxs.iter_mut() {
                    *slot = rem % 24;
                    rem /= 24;
                }
                let factors: Vec<SingleQubitUnitary> =
                    idxs.iter().map(|&i| table[i]).collect();
                let u = LocalUnitary::new(subset.clone(), factors)?;
                let dist = lrm_distribution(state, &u)?;
                let sum2: f64 = dist.iter().map(|p| p * p).sum();
                let sum3: f64 = dist.iter().map(|p| p * p * p).sum();
                p2 += sum2;
                p3 += sum3;
                p22 += sum2 * sum2;
            }
            let norm = total as f64;
            let summary = MomentSummary {
                p2: p2 / norm,
                p3: p3 / norm,
                p22: p22 / norm,
                provenance: MomentProvenance::ExactEnumeration,
            }
            .validate()?;
            if summary.p2 > (2.0f64 / 3.0).powi(s as i32) + 1e-10 {
                return Err(Error::InvalidParam("P2 exceeds its (2/3)^s bound"));
            }
            Ok(summary)
        }
        MomentSource::HaarMonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParam("samples must be positive"));
            }
            let (mut p2, mut p3, mut p22) = (0.0, 0.0, 0.0);
            for i in 0..samples {
                let mut rng = substream(seed, i);
                let factors: Vec<SingleQubitUnitary> = (0..s)
                    .map(|_| sample_haar_u2(&mut rng))
                    .collect();
                let u = LocalUnitary::new(subset.clone(), factors)?;
                let dist = lrm_distribution(state, &u)?;
                let sum2: f64 = dist.iter().map(|p| p * p).sum();
                let sum3: f64 = dist.iter().map(|p| p * p * p).sum();
                p2 += sum2;
                p3 += sum3;
                p22 += sum2 * sum2;
            }
            let norm = samples as f64;
            MomentSummary {
                p2: p2 / norm,
                p3: p3 / norm,
                p22: p22 / norm,
                provenance: MomentProvenance::MonteCarlo,
            }
            .validate()
        }
        MomentSource::Sic => {
            let dist = sic_distribution(state, subset)?;
            let p2: f64 = dist.iter().map(|p| p * p).sum();
            let p3: f64 = dist.iter().map(|p| p * p * p).sum();
            let summary = MomentSummary {
                p2,
                p3,
                p22: p2 * p2,
                provenance: MomentProvenance::ExactEnumeration,
            }
            .validate()?;
            if summary.p2 > 3.0f64.powi(-(s as i32)) + 1e-10 {
                return Err(Error::InvalidParam("P2 exceeds its 3^-s bound"));
            }
            if summary.p3 > 6.0f64.powi(-(s as i32)) + 1e-10 {
                return Err(Error::InvalidParam("P3 exceeds its 6^-s bound"));
            }
            Ok(summary)
        }
    }
}

/// Exact variance of Ŝ^(K) for LRM data:
/// Var = (2P₂(1−P₂) + 4(K−2)(P₃−P₂²))/(K(K−1))
///     + ((K−2)(K−3)(P₂,₂−P₂²))/(K(K−1)).
pub fn lrm_variance(m: &MomentSummary, shots: u64) -> Result<f64> {
    if shots < 2 {
        return Err(Error::InvalidBudget("K must be >= 2"));
    }
    let k = shots as f64;
    let denom = k * (k - 1.0);
    Ok(
        (2.0 * m.p2 * (1.0 - m.p2) + 4.0 * (k - 2.0) * (m.p3 - m.p2 * m.p2)) / denom
            + (k - 2.0) * (k - 3.0) * (m.p22 - m.p2 * m.p2) / denom,
    )
}

/// Exact variance of Ŝ^(K) for SIC data (no fourth-moment term):
/// Var = (2P₂(1−P₂) + 4(K−2)(P₃−P₂²))/(K(K−1)).
pub fn sic_variance(p2: f64, p3: f64, shots: u64) -> Result<f64> {
    if shots < 2 {
        return Err(Error::InvalidBudget("K must be >= 2"));
    }
    let k = shots as f64;
    Ok((2.0 * p2 * (1.0 - p2) + 4.0 * (k - 2.0) * (p3 - p2 * p2)) / (k * (k - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::EnsembleKind;
    use crate::sim::{simulate_lrm, simulate_sic, LrmSettings};
    use crate::state::exact_ce;

    #[test]
    fn coincidence_stat_examples() {
        assert_eq!(coincidence_stat(&[3, 3]).unwrap(), 1.0);
        assert_eq!(coincidence_stat(&[3, 5]).unwrap(), 0.0);
        let v = coincidence_stat(&[1, 1, 2]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert!(coincidence_stat(&[1]).is_err());
    }

    #[test]
    fn squared_prob_estimate_examples() {
        let v = squared_prob_estimates(&[2, 0], 2).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);

        let v = squared_prob_estimates(&[2, 2], 4).unwrap();
        assert!((v[0] - 1.0 / 6.0).abs() < 1e-15);
        let sum: f64 = v.iter().sum();
        let stat = coincidence_stat(&[7, 7, 9, 9]).unwrap();
        assert!((sum - stat).abs() < 1e-15);
        assert!((stat - 1.0 / 3.0).abs() < 1e-15);

        let v = squared_prob_estimates(&[1, 1, 1], 3).unwrap();
        assert!(v.iter().all(|&x| x == 0.0));

        assert!(squared_prob_estimates(&[1, 1], 3).is_err());
        assert!(squared_prob_estimates(&[1], 1).is_err());
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median(&[0.1, 0.2, 0.9]), 0.2);
        assert_eq!(median(&[0.4, 0.4, 0.4]), 0.4);
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), 2.5);
    }

    fn all_coincident_record(s_labels: Vec<u32>, n: u32, l: u64) -> LrmRecord {
        let subset = SubsetSpec::new(n, s_labels).unwrap();
        let settings = LrmSettings::Clifford(vec![vec![0; subset.s() as usize]; l as usize]);
        let outcomes = vec![0u64; (2 * l) as usize];
        LrmRecord::new(subset, settings, 2, outcomes, None).unwrap()
    }

    #[test]
    fn lrm_mean_on_fully_coincident_record() {
        let rec = all_coincident_record(vec![1, 2], 2, 16);
        let est = lrm_mean_estimate(&rec).unwrap();
        assert!((est.estimate - (1.0 - 2.25)).abs() < 1e-12);
        assert_eq!(est.shots_used, 32);
        assert_eq!(est.settings_used, 16);
        assert!(est.batch_means.is_none());
        assert!(est.estimate <= 1.0);
    }

    #[test]
    fn lrm_mean_on_simulated_ghz5() {
        let ghz = PureState::ghz(5).unwrap();
        let subset = SubsetSpec::full(5).unwrap();
        let l = 10_000u64;
        let rec = simulate_lrm(&ghz, &subset, l, 2, EnsembleKind::HaarU2, 2024).unwrap();
        let est = lrm_mean_estimate(&rec).unwrap();
        // 3σ from the (3/2)^s variance bound over L terms.
        let three_sigma = 3.0 * (1.5f64.powi(5) / l as f64).sqrt();
        assert!(
            (est.estimate - 0.46875).abs() < three_sigma,
            "estimate {}",
            est.estimate
        );
    }

    #[test]
    fn lrm_mom_batching_and_median() {
        // 24 batches (δ = 0.05) of one unitary each; first 23 coincident,
        // last one not: median over {1 − (3/2)^s, ..., 1} collapses by sort.
        let mut rec = all_coincident_record(vec![1], 1, 24);
        *rec.outcomes.last_mut().unwrap() = 1;
        let est = lrm_mom_estimate(&rec, 0.05).unwrap();
        let means = est.batch_means.as_ref().unwrap();
        assert_eq!(means.len(), 24);
        assert!((est.estimate - (1.0 - 1.5)).abs() < 1e-12);

        let rec = all_coincident_record(vec![1], 1, 23);
        assert!(matches!(
            lrm_mom_estimate(&rec, 0.05).unwrap_err(),
            Error::InvalidBudget("insufficient unitaries for batching")
        ));

        let rec = all_coincident_record(vec![1], 1, 25);
        assert!(lrm_mom_estimate(&rec, 0.05).is_err());

        let subset = SubsetSpec::new(1, vec![1]).unwrap();
        let settings = LrmSettings::Clifford(vec![vec![0]; 24]);
        let rec =
            LrmRecord::new(subset, settings, 3, vec![0; 72], None).unwrap();
        assert!(matches!(
            lrm_mom_estimate(&rec, 0.05).unwrap_err(),
            Error::InvalidBudget("LRM-MoM requires K = 2")
        ));
    }

    #[test]
    fn sic_k2_batching() {
        let subset = SubsetSpec::new(2, vec![1, 2]).unwrap();
        // N_B = 24, B = 2 → M = 96, all pairs coincident.
        let rec = SicRecord::new(subset.clone(), 96, vec![5; 96], None).unwrap();
        let est = sic_mom_k2_estimate(&rec, 0.05).unwrap();
        assert!((est.estimate - (1.0 - 9.0)).abs() < 1e-12);
        assert_eq!(est.settings_used, 1);

        let rec = SicRecord::new(subset, 94, vec![5; 94], None).unwrap();
        assert!(sic_mom_k2_estimate(&rec, 0.05).is_err());
    }

    #[test]
    fn sic_kopt_batching() {
        let subset = SubsetSpec::new(1, vec![1]).unwrap();
        // ε = 10 → K_opt = 2, so M = N_B·2 = 48.
        let k = k_opt(1, 10.0).unwrap();
        assert_eq!(k, 2);
        let rec = SicRecord::new(subset.clone(), 48, vec![2; 48], None).unwrap();
        let est = sic_mom_kopt_estimate(&rec, 0.05, 10.0).unwrap();
        assert!((est.estimate - (1.0 - 3.0)).abs() < 1e-12);

        let rec = SicRecord::new(subset, 47, vec![2; 47], None).unwrap();
        assert!(sic_mom_kopt_estimate(&rec, 0.05, 10.0).is_err());
    }

    #[test]
    fn variance_formulas_reduce_at_k2() {
        let m = MomentSummary {
            p2: 0.3,
            p3: 0.2,
            p22: 0.25,
            provenance: MomentProvenance::ExactEnumeration,
        };
        let lrm = lrm_variance(&m, 2).unwrap();
        let sic = sic_variance(0.3, 0.2, 2).unwrap();
        assert!((lrm - 0.3 * 0.7).abs() < 1e-15);
        assert!((lrm - sic).abs() < 1e-15);

        // K = 3 drops the fourth-moment term.
        let lrm3 = lrm_variance(&m, 3).unwrap();
        let expected = (2.0 * 0.3 * 0.7 + 4.0 * (0.2 - 0.09)) / 6.0;
        assert!((lrm3 - expected).abs() < 1e-15);
    }

    #[test]
    fn sic_variance_closed_form_example() {
        // |0⟩, s = 1: P₂ = 1/3, P₃ = 5/36, K = 4.
        let zero = PureState::product_zero(1).unwrap();
        let full = SubsetSpec::full(1).unwrap();
        let m = moments_oracle(&zero, &full, MomentSource::Sic).unwrap();
        assert!((m.p2 - 1.0 / 3.0).abs() < 1e-12);
        assert!((m.p3 - 5.0 / 36.0).abs() < 1e-12);
        let var = sic_variance(m.p2, m.p3, 4).unwrap();
        let expected = (2.0 * (1.0 / 3.0) * (2.0 / 3.0) + 8.0 * (5.0 / 36.0 - 1.0 / 9.0)) / 12.0;
        assert!((var - expected).abs() < 1e-14);
        assert!((var - 1.0 / 18.0).abs() < 1e-14);
    }

    #[test]
    fn sic_moments_for_ghz2() {
        let ghz = PureState::ghz(2).unwrap();
        let full = SubsetSpec::full(2).unwrap();
        let m = moments_oracle(&ghz, &full, MomentSource::Sic).unwrap();
        assert!((m.p2 - 0.75 / 9.0).abs() < 1e-12);
        assert_eq!(m.provenance, MomentProvenance::ExactEnumeration);
    }

    #[test]
    fn exhaustive_clifford_moments_feasibility() {
        let ghz = PureState::ghz(3).unwrap();
        let full = SubsetSpec::full(3).unwrap();
        assert!(matches!(
            moments_oracle(&ghz, &full, MomentSource::CliffordExhaustive).unwrap_err(),
            Error::InfeasibleEnumeration(_)
        ));
    }

    #[test]
    fn clifford_enumeration_is_unbiased_for_bell() {
        let bell = PureState::ghz(2).unwrap();
        let full = SubsetSpec::full(2).unwrap();
        let m = moments_oracle(&bell, &full, MomentSource::CliffordExhaustive).unwrap();
        let ce = exact_ce(&bell, &full).unwrap();
        assert!((1.0 - 2.25 * m.p2 - ce).abs() < 1e-10);
    }

    #[test]
    fn estimator_expectation_matches_sic_identity() {
        // E[1 − 3^s·indicator] over the exact distribution equals the CE.
        let ghz = PureState::ghz(2).unwrap();
        let full = SubsetSpec::full(2).unwrap();
        let rec = simulate_sic(&ghz, &full, 400_000, 31).unwrap();
        let mut coincident = 0u64;
        for pair in rec.outcomes.chunks(2) {
            if pair[0] == pair[1] {
                coincident += 1;
            }
        }
        let pairs = rec.shots / 2;
        let est = 1.0 - 9.0 * coincident as f64 / pairs as f64;
        let ce = exact_ce(&ghz, &full).unwrap();
        let sigma = 9.0 * ((0.75 / 9.0) * (1.0 - 0.75 / 9.0) / pairs as f64).sqrt();
        assert!((est - ce).abs() < 3.0 * sigma, "est {est} vs ce {ce}");
    }
}

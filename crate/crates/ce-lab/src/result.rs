//! Machine-readable estimate results: JSON for full round-trips, CSV for
//! batch-mean histograms.

use std::fs;
use std::path::Path;

use ce_core::{BudgetPlan, EstimateResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ResultError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ResultError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Json,
    Csv,
}

/// Planner echo stored alongside an estimate produced from a planned budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub strategy: String,
    pub epsilon: f64,
    pub delta: f64,
    pub s: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_count: Option<u64>,
    pub shots_per_setting: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<u64>,
    pub total_shots: u64,
    pub settings_count: u64,
}

impl From<&BudgetPlan> for PlanDoc {
    fn from(p: &BudgetPlan) -> Self {
        PlanDoc {
            strategy: p.strategy.as_str().to_string(),
            epsilon: p.epsilon,
            delta: p.delta,
            s: p.s,
            unitary_count: p.unitary_count,
            shots_per_setting: p.shots_per_setting,
            batch_count: p.batch_count,
            batch_size: p.batch_size,
            total_shots: p.total_shots,
            settings_count: p.settings_count,
        }
    }
}

/// Serializable view of an estimate, with `batch_means` omitted (not
/// null-filled) for methods that have none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub method: String,
    pub estimate: f64,
    pub n: u32,
    pub subset: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_means: Option<Vec<f64>>,
    pub variance_bound: f64,
    pub shots_used: u64,
    pub settings_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanDoc>,
}

impl ResultDoc {
    pub fn new(estimate: &EstimateResult, plan: Option<&BudgetPlan>) -> Self {
        ResultDoc {
            method: estimate.method.as_str().to_string(),
            estimate: estimate.estimate,
            n: estimate.subset.n(),
            subset: estimate.subset.labels().to_vec(),
            batch_means: estimate.batch_means.clone(),
            variance_bound: estimate.variance_bound,
            shots_used: estimate.shots_used,
            settings_used: estimate.settings_used,
            plan: plan.map(PlanDoc::from),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Batch means as `batch,value` rows; header only when the method has no
    /// batch means.
    pub fn to_batch_means_csv(&self) -> String {
        let mut out = String::from("batch,value\n");
        if let Some(means) = &self.batch_means {
            for (i, v) in means.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + 1, v));
            }
        }
        out
    }
}

pub fn write_result(doc: &ResultDoc, path: &Path, format: ResultFormat) -> Result<()> {
    let text = match format {
        ResultFormat::Json => doc.to_json()?,
        ResultFormat::Csv => doc.to_batch_means_csv(),
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn read_result(path: &Path) -> Result<ResultDoc> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ce_core::{SubsetSpec, Strategy};

    fn sample_result(batch_means: Option<Vec<f64>>) -> EstimateResult {
        EstimateResult {
            method: if batch_means.is_some() {
                Strategy::LrmMom
            } else {
                Strategy::LrmMean
            },
            estimate: 0.373,
            subset: SubsetSpec::full(3).unwrap(),
            batch_means,
            variance_bound: 0.011,
            shots_used: 480,
            settings_used: 240,
        }
    }

    #[test]
    fn json_round_trip_preserves_fields() {
        let est = sample_result(Some(vec![0.1, 0.2, 0.3]));
        let plan = ce_core::plan(Strategy::LrmMom, 3, 0.1, 0.05).unwrap();
        let doc = ResultDoc::new(&est, Some(&plan));
        let text = doc.to_json().unwrap();
        let back: ResultDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn missing_batch_means_are_omitted() {
        let doc = ResultDoc::new(&sample_result(None), None);
        let text = doc.to_json().unwrap();
        assert!(!text.contains("batch_means"));
        assert!(!text.contains("null"));
    }

    #[test]
    fn csv_lists_batch_means() {
        let doc = ResultDoc::new(&sample_result(Some(vec![0.25, 0.5])), None);
        let csv = doc.to_batch_means_csv();
        assert_eq!(csv, "batch,value\n1,0.25\n2,0.5\n");
    }
}

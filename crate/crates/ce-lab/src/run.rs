//! Shared drivers behind the CLI: state specs, subset syntax, budget
//! resolution, and the simulate→estimate pipeline.

use std::fs;
use std::path::{Path, PathBuf};

use ce_core::{
    batch_count, exact_ce, k_opt, lrm_mean_estimate, lrm_mom_estimate, plan,
    sic_mom_k2_estimate, sic_mom_kopt_estimate, simulate_lrm, simulate_sic, BudgetPlan,
    EnsembleKind, EstimateResult, PureState, Strategy, SubsetSpec,
};
use num_complex::Complex64 as C64;

use crate::record::Record;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("bad state spec {0:?} (expected ghz:N, w:N, product:N, or file:PATH)")]
    BadStateSpec(String),
    #[error("bad subset spec {0:?} (expected comma-separated labels or ranges like 1-3,5)")]
    BadSubsetSpec(String),
    #[error("amplitude file line {line}: {msg}")]
    BadAmplitudeFile { line: usize, msg: String },
    #[error("conflicting budget flags: {0}")]
    BudgetConflict(&'static str),
    #[error("missing parameter: {0}")]
    MissingParam(&'static str),
    #[error("record kind {found} does not match strategy {strategy}")]
    KindMismatch {
        found: &'static str,
        strategy: Strategy,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] ce_core::Error),
}

pub type Result<T> = std::result::Result<T, RunError>;

/// A state given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Ghz(u32),
    W(u32),
    Product(u32),
    File(PathBuf),
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let err = || RunError::BadStateSpec(text.to_string());
        let (kind, arg) = text.split_once(':').ok_or_else(err)?;
        match kind {
            "ghz" => Ok(StateSpec::Ghz(arg.parse().map_err(|_| err())?)),
            "w" => Ok(StateSpec::W(arg.parse().map_err(|_| err())?)),
            "product" => Ok(StateSpec::Product(arg.parse().map_err(|_| err())?)),
            "file" => Ok(StateSpec::File(PathBuf::from(arg))),
            _ => Err(err()),
        }
    }

    /// Named fixtures have closed-form CEs worth echoing next to estimates.
    pub fn is_fixture(&self) -> bool {
        !matches!(self, StateSpec::File(_))
    }

    pub fn build(&self) -> Result<PureState> {
        match self {
            StateSpec::Ghz(n) => Ok(PureState::ghz(*n)?),
            StateSpec::W(n) => Ok(PureState::w(*n)?),
            StateSpec::Product(n) => Ok(PureState::product_zero(*n)?),
            StateSpec::File(path) => read_amplitude_file(path),
        }
    }
}

/// Amplitude file: one `re im` pair per line; blank lines and `#` comments
/// are skipped.
pub fn read_amplitude_file(path: &Path) -> Result<PureState> {
    let text = fs::read_to_string(path)?;
    let mut amps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let re: f64 = parts
            .next()
            .ok_or_else(|| RunError::BadAmplitudeFile {
                line,
                msg: "missing real part".to_string(),
            })?
            .parse()
            .map_err(|_| RunError::BadAmplitudeFile {
                line,
                msg: "bad real part".to_string(),
            })?;
        let im: f64 = match parts.next() {
            None => 0.0,
            Some(p) => p.parse().map_err(|_| RunError::BadAmplitudeFile {
                line,
                msg: "bad imaginary part".to_string(),
            })?,
        };
        if parts.next().is_some() {
            return Err(RunError::BadAmplitudeFile {
                line,
                msg: "expected at most two fields".to_string(),
            });
        }
        amps.push(C64::new(re, im));
    }
    Ok(PureState::new(amps)?)
}

/// Subset syntax: comma-separated 1-based labels or inclusive ranges,
/// e.g. `1-3,5`.
pub fn parse_subset(text: &str, n: u32) -> Result<SubsetSpec> {
    let err = || RunError::BadSubsetSpec(text.to_string());
    let mut labels = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: u32 = lo.trim().parse().map_err(|_| err())?;
            let hi: u32 = hi.trim().parse().map_err(|_| err())?;
            if lo > hi {
                return Err(err());
            }
            labels.extend(lo..=hi);
        } else {
            labels.push(part.parse().map_err(|_| err())?);
        }
    }
    labels.sort_unstable();
    labels.dedup();
    Ok(SubsetSpec::new(n, labels)?)
}

/// Budget flags accepted by `simulate`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetFlags {
    pub unitary_count: Option<u64>,
    pub shots_per_setting: Option<u64>,
    pub sic_shots: Option<u64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

/// A resolved simulation budget, with the planner echo when one was used.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedBudget {
    pub unitary_count: u64,
    pub shots_per_setting: u64,
    pub sic_shots: u64,
    pub plan: Option<BudgetPlan>,
}

/// Turns explicit flags or (ε, δ) into a concrete budget, rejecting
/// conflicting combinations.
pub fn resolve_budget(
    strategy: Strategy,
    s: u32,
    flags: &BudgetFlags,
) -> Result<ResolvedBudget> {
    if strategy.is_lrm() && flags.sic_shots.is_some() {
        return Err(RunError::BudgetConflict("-M applies to SIC strategies only"));
    }
    if !strategy.is_lrm() && (flags.unitary_count.is_some() || flags.shots_per_setting.is_some()) {
        return Err(RunError::BudgetConflict(
            "-L/-K apply to LRM strategies only",
        ));
    }
    match strategy {
        Strategy::LrmMean => {
            let k = flags.shots_per_setting.unwrap_or(2);
            if let Some(l) = flags.unitary_count {
                if flags.epsilon.is_some() {
                    return Err(RunError::BudgetConflict(
                        "give either -L or --eps, not both",
                    ));
                }
                return Ok(ResolvedBudget {
                    unitary_count: l,
                    shots_per_setting: k,
                    sic_shots: 0,
                    plan: None,
                });
            }
            let eps = flags.epsilon.ok_or(RunError::MissingParam("--eps or -L"))?;
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            let plan = plan(strategy, s, eps, delta)?;
            Ok(ResolvedBudget {
                unitary_count: plan.unitary_count.unwrap(),
                shots_per_setting: k,
                sic_shots: 0,
                plan: Some(plan),
            })
        }
        Strategy::LrmMom => {
            if let Some(k) = flags.shots_per_setting {
                if k != 2 {
                    return Err(RunError::BudgetConflict("LRM-MoM forces K = 2"));
                }
            }
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            if let Some(l) = flags.unitary_count {
                if flags.epsilon.is_some() {
                    return Err(RunError::BudgetConflict(
                        "give either -L or --eps, not both",
                    ));
                }
                if !l.is_multiple_of(batch_count(delta)?) {
                    return Err(RunError::BudgetConflict(
                        "explicit -L must be a multiple of the batch count N_B",
                    ));
                }
                return Ok(ResolvedBudget {
                    unitary_count: l,
                    shots_per_setting: 2,
                    sic_shots: 0,
                    plan: None,
                });
            }
            let eps = flags.epsilon.ok_or(RunError::MissingParam("--eps or -L"))?;
            let plan = plan(strategy, s, eps, delta)?;
            Ok(ResolvedBudget {
                unitary_count: plan.unitary_count.unwrap(),
                shots_per_setting: 2,
                sic_shots: 0,
                plan: Some(plan),
            })
        }
        Strategy::SicMomK2 => {
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            if let Some(m) = flags.sic_shots {
                if flags.epsilon.is_some() {
                    return Err(RunError::BudgetConflict(
                        "give either -M or --eps, not both",
                    ));
                }
                if !m.is_multiple_of(2 * batch_count(delta)?) {
                    return Err(RunError::BudgetConflict(
                        "explicit -M must be a multiple of 2·N_B",
                    ));
                }
                return Ok(ResolvedBudget {
                    unitary_count: 0,
                    shots_per_setting: 2,
                    sic_shots: m,
                    plan: None,
                });
            }
            let eps = flags.epsilon.ok_or(RunError::MissingParam("--eps or -M"))?;
            let plan = plan(strategy, s, eps, delta)?;
            Ok(ResolvedBudget {
                unitary_count: 0,
                shots_per_setting: 2,
                sic_shots: plan.total_shots,
                plan: Some(plan),
            })
        }
        Strategy::SicMomKopt => {
            if flags.sic_shots.is_some() {
                return Err(RunError::BudgetConflict(
                    "sic-mom-kopt derives M from --eps/--delta",
                ));
            }
            let eps = flags.epsilon.ok_or(RunError::MissingParam("--eps"))?;
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            let plan = plan(strategy, s, eps, delta)?;
            Ok(ResolvedBudget {
                unitary_count: 0,
                shots_per_setting: plan.shots_per_setting,
                sic_shots: plan.total_shots,
                plan: Some(plan),
            })
        }
    }
}

/// A simulate run: the record plus its matching estimate.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub record: Record,
    pub estimate: EstimateResult,
    pub plan: Option<BudgetPlan>,
}

/// Generates a record at the resolved budget and runs the matching estimator.
pub fn simulate_strategy(
    state: &PureState,
    subset: &SubsetSpec,
    strategy: Strategy,
    budget: &ResolvedBudget,
    ensemble: EnsembleKind,
    flags: &BudgetFlags,
    seed: u64,
) -> Result<SimOutcome> {
    let (record, estimate) = match strategy {
        Strategy::LrmMean => {
            let rec = simulate_lrm(
                state,
                subset,
                budget.unitary_count,
                budget.shots_per_setting,
                ensemble,
                seed,
            )?;
            let est = lrm_mean_estimate(&rec)?;
            (Record::Lrm(rec), est)
        }
        Strategy::LrmMom => {
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            let rec = simulate_lrm(state, subset, budget.unitary_count, 2, ensemble, seed)?;
            let est = lrm_mom_estimate(&rec, delta)?;
            (Record::Lrm(rec), est)
        }
        Strategy::SicMomK2 => {
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            let rec = simulate_sic(state, subset, budget.sic_shots, seed)?;
            let est = sic_mom_k2_estimate(&rec, delta)?;
            (Record::Sic(rec), est)
        }
        Strategy::SicMomKopt => {
            let delta = flags.delta.ok_or(RunError::MissingParam("--delta"))?;
            let eps = flags.epsilon.ok_or(RunError::MissingParam("--eps"))?;
            let rec = simulate_sic(state, subset, budget.sic_shots, seed)?;
            let est = sic_mom_kopt_estimate(&rec, delta, eps)?;
            (Record::Sic(rec), est)
        }
    };
    Ok(SimOutcome {
        record,
        estimate,
        plan: budget.plan,
    })
}

/// Runs the estimator named by `strategy` on a loaded record.
pub fn estimate_record(
    record: &Record,
    strategy: Strategy,
    epsilon: Option<f64>,
    delta: Option<f64>,
) -> Result<EstimateResult> {
    match (record, strategy) {
        (Record::Lrm(rec), Strategy::LrmMean) => Ok(lrm_mean_estimate(rec)?),
        (Record::Lrm(rec), Strategy::LrmMom) => {
            let delta = delta.ok_or(RunError::MissingParam("--delta"))?;
            Ok(lrm_mom_estimate(rec, delta)?)
        }
        (Record::Sic(rec), Strategy::SicMomK2) => {
            let delta = delta.ok_or(RunError::MissingParam("--delta"))?;
            Ok(sic_mom_k2_estimate(rec, delta)?)
        }
        (Record::Sic(rec), Strategy::SicMomKopt) => {
            let delta = delta.ok_or(RunError::MissingParam("--delta"))?;
            let eps = epsilon.ok_or(RunError::MissingParam("--eps"))?;
            Ok(sic_mom_kopt_estimate(rec, delta, eps)?)
        }
        (rec, strategy) => Err(RunError::KindMismatch {
            found: rec.kind_str(),
            strategy,
        }),
    }
}

/// Exact CE of a fixture/state for echo next to estimates.
pub fn exact_reference(state: &PureState, subset: &SubsetSpec) -> Result<f64> {
    Ok(exact_ce(state, subset)?)
}

/// Largest budget within `total` shots that fits each strategy's own
/// structure: LRM-Mean uses ⌊total/2⌋ unitaries at K = 2; LRM-MoM trims the
/// unitary count to a multiple of N_B; SIC-K2 trims shots to 2·N_B·B;
/// SIC-Kopt uses N_B·K_opt = total by construction.
pub fn split_shared_budget(strategy: Strategy, total: u64, delta: f64) -> Result<u64> {
    let n_b = batch_count(delta)?;
    Ok(match strategy {
        Strategy::LrmMean => total / 2,
        Strategy::LrmMom => {
            let l = total / 2;
            l - l % n_b
        }
        Strategy::SicMomK2 => {
            let b = total / (2 * n_b);
            2 * n_b * b
        }
        Strategy::SicMomKopt => total,
    })
}

/// Shared total measurement budget of the four-estimator comparison: the
/// SIC-Kopt requirement N_B·K_opt at (ε, δ).
pub fn shared_total_budget(s: u32, epsilon: f64, delta: f64) -> Result<u64> {
    Ok(batch_count(delta)? * k_opt(s, epsilon)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs_parse() {
        assert_eq!(StateSpec::parse("ghz:5").unwrap(), StateSpec::Ghz(5));
        assert_eq!(StateSpec::parse("w:4").unwrap(), StateSpec::W(4));
        assert_eq!(StateSpec::parse("product:3").unwrap(), StateSpec::Product(3));
        assert!(matches!(
            StateSpec::parse("file:/tmp/x.txt").unwrap(),
            StateSpec::File(_)
        ));
        assert!(StateSpec::parse("ghz").is_err());
        assert!(StateSpec::parse("bell:2").is_err());
    }

    #[test]
    fn subset_syntax() {
        let s = parse_subset("1-3,5", 6).unwrap();
        assert_eq!(s.labels(), &[1, 2, 3, 5]);
        let s = parse_subset("2", 3).unwrap();
        assert_eq!(s.labels(), &[2]);
        assert!(parse_subset("3-1", 4).is_err());
        assert!(parse_subset("0", 4).is_err());
        assert!(parse_subset("1,9", 4).is_err());
    }

    #[test]
    fn budget_conflicts_are_rejected() {
        let flags = BudgetFlags {
            unitary_count: Some(100),
            epsilon: Some(0.1),
            delta: Some(0.05),
            ..Default::default()
        };
        assert!(matches!(
            resolve_budget(Strategy::LrmMean, 2, &flags),
            Err(RunError::BudgetConflict(_))
        ));

        let flags = BudgetFlags {
            shots_per_setting: Some(4),
            unitary_count: Some(240),
            delta: Some(0.05),
            ..Default::default()
        };
        assert!(matches!(
            resolve_budget(Strategy::LrmMom, 2, &flags),
            Err(RunError::BudgetConflict(_))
        ));

        let flags = BudgetFlags {
            sic_shots: Some(100),
            delta: Some(0.05),
            ..Default::default()
        };
        assert!(matches!(
            resolve_budget(Strategy::LrmMean, 2, &flags),
            Err(RunError::BudgetConflict(_))
        ));
        assert!(matches!(
            resolve_budget(Strategy::SicMomKopt, 2, &flags),
            Err(RunError::BudgetConflict(_))
        ));
    }

    #[test]
    fn planned_budgets_fill_in() {
        let flags = BudgetFlags {
            epsilon: Some(0.1),
            delta: Some(0.05),
            ..Default::default()
        };
        let b = resolve_budget(Strategy::LrmMom, 3, &flags).unwrap();
        assert_eq!(b.unitary_count, 32_400);
        let b = resolve_budget(Strategy::SicMomK2, 3, &flags).unwrap();
        assert_eq!(b.sic_shots, 518_400);
        let b = resolve_budget(Strategy::SicMomKopt, 1, &BudgetFlags {
            epsilon: Some(0.05),
            delta: Some(0.05),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(b.shots_per_setting, 9601);
        assert_eq!(b.sic_shots, 24 * 9601);
    }

    #[test]
    fn shared_budget_split_rules() {
        let total = shared_total_budget(5, 0.05, 0.05).unwrap();
        assert_eq!(total, 24 * 48_616);
        assert_eq!(
            split_shared_budget(Strategy::LrmMean, total, 0.05).unwrap(),
            total / 2
        );
        let l = split_shared_budget(Strategy::LrmMom, total, 0.05).unwrap();
        assert_eq!(l % 24, 0);
        assert!(l <= total / 2);
        let m = split_shared_budget(Strategy::SicMomK2, total, 0.05).unwrap();
        assert_eq!(m % 48, 0);
        assert_eq!(
            split_shared_budget(Strategy::SicMomKopt, total, 0.05).unwrap(),
            total
        );
    }
}

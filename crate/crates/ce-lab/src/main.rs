use std::path::PathBuf;
use std::process::ExitCode;

use ce_core::{
    ce_to_concurrence, exact_ce, plan, EnsembleKind, EstimateResult, PureState, Strategy,
    SubsetSpec,
};
use ce_lab::figure::{
    fig2_dataset, fig4_dataset, mean, sample_std, write_fig2_csv, write_fig4_csv,
};
use ce_lab::record::{read_record, write_record};
use ce_lab::result::{write_result, ResultDoc, ResultFormat};
use ce_lab::run::{
    estimate_record, parse_subset, resolve_budget, simulate_strategy, BudgetFlags, StateSpec,
};
use ce_lab::verify::{concentration_trials, oracle_suite};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ce-lab",
    about = "Compute and estimate concentratable entanglements from local measurement data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(name = "lrm-mean")]
    LrmMean,
    #[value(name = "lrm-mom")]
    LrmMom,
    #[value(name = "sic-mom-k2")]
    SicMomK2,
    #[value(name = "sic-mom-kopt")]
    SicMomKopt,
}

impl From<StrategyArg> for Strategy {
    fn from(a: StrategyArg) -> Self {
        match a {
            StrategyArg::LrmMean => Strategy::LrmMean,
            StrategyArg::LrmMom => Strategy::LrmMom,
            StrategyArg::SicMomK2 => Strategy::SicMomK2,
            StrategyArg::SicMomKopt => Strategy::SicMomKopt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Clifford,
    Haar,
}

impl From<EnsembleArg> for EnsembleKind {
    fn from(a: EnsembleArg) -> Self {
        match a {
            EnsembleArg::Clifford => EnsembleKind::CliffordU2,
            EnsembleArg::Haar => EnsembleKind::HaarU2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct BudgetArgs {
    /// Number of LRM settings (unitaries)
    #[arg(short = 'L', long)]
    unitaries: Option<u64>,
    /// Shots per LRM setting
    #[arg(short = 'K', long)]
    shots_per_unitary: Option<u64>,
    /// Total SIC shots
    #[arg(short = 'M', long)]
    sic_shots: Option<u64>,
    /// Target precision ε for the planner
    #[arg(long = "eps")]
    epsilon: Option<f64>,
    /// Confidence parameter δ
    #[arg(long)]
    delta: Option<f64>,
}

impl BudgetArgs {
    fn flags(&self) -> BudgetFlags {
        BudgetFlags {
            unitary_count: self.unitaries,
            shots_per_setting: self.shots_per_unitary,
            sic_shots: self.sic_shots,
            epsilon: self.epsilon,
            delta: self.delta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact CE of a state (and its concurrence when S = [n])
    Exact {
        /// State: ghz:N, w:N, product:N, or file:PATH
        #[arg(long)]
        state: String,
        /// Qubit subset, e.g. 1-3,5 (default: all qubits)
        #[arg(long)]
        subset: Option<String>,
        /// Enumerate all non-empty subsets (n ≤ 12)
        #[arg(long)]
        all_subsets: bool,
        /// Write the report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a measurement record and estimate the CE from it
    Simulate {
        #[arg(long)]
        state: String,
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// LRM unitary ensemble
        #[arg(long, value_enum, default_value = "clifford")]
        ensemble: EnsembleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for the record and result files
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Estimate the CE from an existing record file
    Estimate {
        #[arg(long)]
        record: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long = "eps")]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Print measurement budgets for given (ε, δ, s)
    Plan {
        #[arg(long, value_enum, required_unless_present = "compare")]
        strategy: Option<StrategyArg>,
        /// Probed subset size s = |S|
        #[arg(short = 's', long)]
        subset_size: u32,
        #[arg(long = "eps")]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Show all four strategies side by side
        #[arg(long)]
        compare: bool,
    },
    /// Run the built-in oracle suite, or seeded concentration trials
    Verify {
        #[arg(long, default_value_t = 11)]
        seed: u64,
        /// Number of concentration trials (switches to trials mode)
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        #[arg(long = "eps")]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Emit plot-ready CSV datasets
    Figure {
        /// Which dataset: 2 (CE vs n) or 4 (estimator comparison)
        #[arg(long)]
        fig: u8,
        #[arg(long, default_value_t = 10_000)]
        unitaries: u64,
        #[arg(long, default_value_t = 1_000)]
        trials: u32,
        #[arg(long = "eps", default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn build_state_and_subset(
    state_spec: &str,
    subset_spec: Option<&str>,
) -> anyhow::Result<(PureState, SubsetSpec, StateSpec)> {
    let spec = StateSpec::parse(state_spec)?;
    let state = spec.build()?;
    let subset = match subset_spec {
        Some(text) => parse_subset(text, state.n())?,
        None => SubsetSpec::full(state.n())?,
    };
    Ok((state, subset, spec))
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Exact {
            state,
            subset,
            all_subsets,
            out,
        } => cmd_exact(&state, subset.as_deref(), all_subsets, out.as_deref()),
        Command::Simulate {
            state,
            subset,
            strategy,
            budget,
            ensemble,
            seed,
            out_dir,
        } => cmd_simulate(
            &state,
            subset.as_deref(),
            strategy.into(),
            &budget.flags(),
            ensemble.into(),
            seed,
            &out_dir,
        ),
        Command::Estimate {
            record,
            strategy,
            epsilon,
            delta,
            out,
            format,
        } => cmd_estimate(&record, strategy.into(), epsilon, delta, out.as_deref(), format),
        Command::Plan {
            strategy,
            subset_size,
            epsilon,
            delta,
            compare,
        } => cmd_plan(strategy.map(Into::into), subset_size, epsilon, delta, compare),
        Command::Verify {
            seed,
            trials,
            state,
            subset,
            strategy,
            epsilon,
            delta,
        } => cmd_verify(seed, trials, state, subset, strategy, epsilon, delta),
        Command::Figure {
            fig,
            unitaries,
            trials,
            epsilon,
            delta,
            seed,
            out_dir,
        } => cmd_figure(fig, unitaries, trials, epsilon, delta, seed, &out_dir),
    }
}

fn print_estimate(est: &EstimateResult, exact: Option<f64>) {
    println!("method:        {}", est.method);
    println!("estimate:      {}", est.estimate);
    if let Some(ce) = exact {
        println!("exact CE:      {ce}");
        println!("abs error:     {}", (est.estimate - ce).abs());
    }
    println!("shots used:    {}", est.shots_used);
    println!("settings used: {}", est.settings_used);
    println!("variance bound: {}", est.variance_bound);
    if let Some(means) = &est.batch_means {
        println!("batch count:   {}", means.len());
    }
}

fn cmd_exact(
    state_spec: &str,
    subset_spec: Option<&str>,
    all_subsets: bool,
    out: Option<&std::path::Path>,
) -> anyhow::Result<ExitCode> {
    let (state, subset, _) = build_state_and_subset(state_spec, subset_spec)?;
    let n = state.n();
    if all_subsets {
        anyhow::ensure!(n <= 12, "--all-subsets is capped at n = 12 (got n = {n})");
        // One purity per subset of [n], reused across every CE.
        let full = SubsetSpec::full(n)?;
        let purities = ce_core::SubsetPurities::compute(&state, &full)?;
        println!("subset,s,ce");
        for mask in 1u64..(1 << n) {
            let labels: Vec<u32> = (1..=n).filter(|q| mask >> (q - 1) & 1 == 1).collect();
            let s = labels.len() as u32;
            let mut sum = 0.0;
            // Sum purities over the powerset of this subset.
            let mut sub = mask;
            loop {
                sum += purities.get(sub as usize);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            let ce = 1.0 - sum / (1u64 << s) as f64;
            let text: Vec<String> = labels.iter().map(u32::to_string).collect();
            println!("{},{},{}", text.join("+"), s, ce);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let ce = exact_ce(&state, &subset)?;
    println!("C(S) = {ce}");
    if subset.is_full() {
        println!("concurrence c_n = {}", ce_to_concurrence(ce)?.0);
    }
    if let Some(path) = out {
        let doc = serde_json::json!({
            "n": n,
            "subset": subset.labels(),
            "ce": ce,
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(
    state_spec: &str,
    subset_spec: Option<&str>,
    strategy: Strategy,
    flags: &BudgetFlags,
    ensemble: EnsembleKind,
    seed: u64,
    out_dir: &std::path::Path,
) -> anyhow::Result<ExitCode> {
    let (state, subset, spec) = build_state_and_subset(state_spec, subset_spec)?;
    let budget = resolve_budget(strategy, subset.s(), flags)?;
    let outcome = simulate_strategy(&state, &subset, strategy, &budget, ensemble, flags, seed)?;

    std::fs::create_dir_all(out_dir)?;
    let stem = format!(
        "{}-{}-seed{}",
        state_spec.replace([':', '/'], "_"),
        strategy,
        seed
    );
    let record_path = out_dir.join(format!("{stem}.record"));
    let result_path = out_dir.join(format!("{stem}.result.json"));
    write_record(&outcome.record, &record_path)?;
    let doc = ResultDoc::new(&outcome.estimate, outcome.plan.as_ref());
    write_result(&doc, &result_path, ResultFormat::Json)?;

    let exact = if spec.is_fixture() {
        Some(exact_ce(&state, &subset)?)
    } else {
        None
    };
    print_estimate(&outcome.estimate, exact);
    println!("record:        {}", record_path.display());
    println!("result:        {}", result_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_estimate(
    record_path: &std::path::Path,
    strategy: Strategy,
    epsilon: Option<f64>,
    delta: Option<f64>,
    out: Option<&std::path::Path>,
    format: FormatArg,
) -> anyhow::Result<ExitCode> {
    let record = read_record(record_path)?;
    let est = estimate_record(&record, strategy, epsilon, delta)?;
    print_estimate(&est, None);
    if let Some(path) = out {
        let doc = ResultDoc::new(&est, None);
        let fmt = match format {
            FormatArg::Json => ResultFormat::Json,
            FormatArg::Csv => ResultFormat::Csv,
        };
        write_result(&doc, path, fmt)?;
        println!("result:        {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_plan_row(p: &ce_core::BudgetPlan) {
    let fmt_opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    println!(
        "{:<14} {:>12} {:>8} {:>6} {:>10} {:>14} {:>10}",
        p.strategy.to_string(),
        fmt_opt(p.unitary_count),
        p.shots_per_setting,
        fmt_opt(p.batch_count),
        fmt_opt(p.batch_size),
        p.total_shots,
        p.settings_count
    );
}

fn cmd_plan(
    strategy: Option<Strategy>,
    s: u32,
    epsilon: f64,
    delta: f64,
    compare: bool,
) -> anyhow::Result<ExitCode> {
    println!(
        "{:<14} {:>12} {:>8} {:>6} {:>10} {:>14} {:>10}",
        "strategy", "L", "K", "N_B", "B", "total_shots", "settings"
    );
    if compare {
        for strategy in Strategy::ALL {
            print_plan_row(&plan(strategy, s, epsilon, delta)?);
        }
    } else {
        let strategy = strategy.expect("clap enforces strategy unless --compare");
        print_plan_row(&plan(strategy, s, epsilon, delta)?);
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    seed: u64,
    trials: Option<u32>,
    state: Option<String>,
    subset: Option<String>,
    strategy: Option<StrategyArg>,
    epsilon: Option<f64>,
    delta: Option<f64>,
) -> anyhow::Result<ExitCode> {
    if let Some(trials) = trials {
        let state_spec = state.ok_or_else(|| anyhow::anyhow!("--trials requires --state"))?;
        let strategy: Strategy = strategy
            .ok_or_else(|| anyhow::anyhow!("--trials requires --strategy"))?
            .into();
        let epsilon = epsilon.ok_or_else(|| anyhow::anyhow!("--trials requires --eps"))?;
        let delta = delta.ok_or_else(|| anyhow::anyhow!("--trials requires --delta"))?;
        let (state, subset, _) = build_state_and_subset(&state_spec, subset.as_deref())?;
        let report =
            concentration_trials(&state, &subset, strategy, epsilon, delta, trials, seed)?;
        println!(
            "{}: {} failures in {} trials (rate {:.4}, allowed {:.4}, exact CE {})",
            report.strategy,
            report.failures,
            report.trials,
            report.rate,
            report.threshold,
            report.exact
        );
        return Ok(if report.pass {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_VERIFY_FAILED)
        });
    }

    let reports = oracle_suite(seed);
    let mut failed = 0;
    for r in &reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<34} observed {:>12.3e}  tolerance {:>9.0e}",
            r.name, r.observed, r.tolerance
        );
        if !r.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} check(s) failed");
        return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
    }
    println!("all {} checks passed", reports.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_figure(
    fig: u8,
    unitaries: u64,
    trials: u32,
    epsilon: f64,
    delta: f64,
    seed: u64,
    out_dir: &std::path::Path,
) -> anyhow::Result<ExitCode> {
    std::fs::create_dir_all(out_dir)?;
    match fig {
        2 => {
            let rows = fig2_dataset(unitaries, (2, 6), seed)?;
            let path = out_dir.join("fig2.csv");
            write_fig2_csv(&rows, &path)?;
            for r in &rows {
                println!(
                    "{} n={}: estimate {:.5} analytic {:.5} (se {:.5})",
                    r.state, r.n, r.estimate, r.analytic, r.std_err
                );
            }
            println!("wrote {}", path.display());
        }
        4 => {
            let data = fig4_dataset(trials, epsilon, delta, seed)?;
            let path = out_dir.join("fig4.csv");
            write_fig4_csv(&data, &path)?;
            println!(
                "shared budget: {} shots (K_opt = {}), {} trials",
                data.total_shots, data.k_opt, trials
            );
            for strategy in Strategy::ALL {
                let est = data.estimates_for(strategy);
                println!(
                    "{:<14} mean {:.5}  std {:.5}",
                    strategy.to_string(),
                    mean(est),
                    sample_std(est)
                );
            }
            println!("wrote {}", path.display());
        }
        other => anyhow::bail!("unknown figure {other} (expected 2 or 4)"),
    }
    Ok(ExitCode::SUCCESS)
}

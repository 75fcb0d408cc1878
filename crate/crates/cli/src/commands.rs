//! Command implementations and report schemas.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use ce_core::classify::{grouped_cv, EvalReport, KnnConfig, Weighting};
use ce_core::dataio::{load_csv, load_sidecar, CsvSchema, FaciesDataset, LoadReport, MissingPolicy};
use ce_core::entropy::CeConfig;
use ce_core::selection::{rank_variables, select, SelectionRule, VariableRanking};

use crate::{
    CompareArgs, DataArgs, EvaluateArgs, MissingArg, RankArgs, RuleArgs, SelectArgs, WeightingArg,
};

pub(crate) struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<ce_core::Error> for CliError {
    fn from(err: ce_core::Error) -> Self {
        CliError {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

/// Exit-code classes: 2 for schema/input/data problems, 3 for degenerate
/// configuration, 1 for internal errors.
fn exit_code(err: &ce_core::Error) -> u8 {
    use ce_core::Error::*;
    match err {
        TooFewRows(_) | NoColumns | RaggedColumn { .. } | NonFinite { .. }
        | DuplicateColumn(_) | UnknownColumn(_) | LengthMismatch { .. }
        | DegenerateData { .. } | ConstantLabel | SingleClass | SingleWell(_)
        | FileRead { .. } | Csv { .. } | MissingColumns(_) | ParseCell { .. }
        | EmptyAfterPolicy | UnknownColumns(_) | EmptyRestriction | UnnamedClass(_)
        | UnknownAdjacencyCode(_) | AsymmetricAdjacency { .. } | Sidecar { .. } => 2,
        BadNeighborOrder { .. } | UnivariateInput(_) | ZeroTopK | TopKTooLarge { .. } => 3,
        RaggedPoints { .. } | ColumnIndexOutOfRange { .. } | FeatureMismatch { .. }
        | EmptyEvaluation | FileWrite { .. } => 1,
        Variable { source, .. } => exit_code(source),
    }
}

/// The full configuration of a run, embedded verbatim in every JSON report.
/// Fields that do not apply to the command are null.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct RunConfig {
    command: String,
    input: String,
    well_col: String,
    depth_col: String,
    label_col: String,
    features: Vec<String>,
    missing: String,
    missing_token: Option<String>,
    adjacency: Option<String>,
    k_ce: Option<usize>,
    jitter_label: Option<bool>,
    top_k: Option<usize>,
    threshold: Option<f64>,
    knn: Option<usize>,
    weighting: Option<String>,
    seed: u64,
    seeds: Option<Vec<u64>>,
    out_dir: String,
}

struct RunConfigParts<'a> {
    command: &'a str,
    data: &'a DataArgs,
    ce: Option<&'a crate::CeArgs>,
    rule: Option<&'a RuleArgs>,
    knn: Option<&'a crate::KnnArgs>,
    seed: u64,
    seeds: Option<&'a [u64]>,
    out_dir: &'a Path,
}

fn run_config(parts: RunConfigParts<'_>) -> RunConfig {
    RunConfig {
        command: parts.command.to_string(),
        input: parts.data.input.to_string_lossy().into_owned(),
        well_col: parts.data.well_col.clone(),
        depth_col: parts.data.depth_col.clone(),
        label_col: parts.data.label_col.clone(),
        features: parts.data.features.clone(),
        missing: match parts.data.missing {
            MissingArg::Drop => "drop".to_string(),
            MissingArg::Median => "median".to_string(),
        },
        missing_token: parts.data.missing_token.clone(),
        adjacency: parts
            .data
            .adjacency
            .as_ref()
            .map(|p| p.to_string_lossy().into_owned()),
        k_ce: parts.ce.map(|ce| ce.k_ce),
        jitter_label: parts.ce.map(|ce| ce.jitter_label),
        top_k: parts.rule.and_then(|r| r.top_k),
        threshold: parts.rule.and_then(|r| r.threshold),
        knn: parts.knn.map(|k| k.knn),
        weighting: parts.knn.map(|k| {
            match k.weighting {
                WeightingArg::Uniform => "uniform",
                WeightingArg::Inverse => "inverse",
            }
            .to_string()
        }),
        seed: parts.seed,
        seeds: parts.seeds.map(<[u64]>::to_vec),
        out_dir: parts.out_dir.to_string_lossy().into_owned(),
    }
}

fn load_dataset(data: &DataArgs) -> Result<(FaciesDataset, LoadReport), CliError> {
    let schema = CsvSchema {
        well_col: data.well_col.clone(),
        depth_col: data.depth_col.clone(),
        label_col: data.label_col.clone(),
        feature_cols: data.features.clone(),
        missing_policy: match data.missing {
            MissingArg::Drop => MissingPolicy::DropRow,
            MissingArg::Median => MissingPolicy::MedianImputePerWell,
        },
        missing_sentinel: data.missing_token.clone(),
    };
    let (mut dataset, report) = load_csv(&data.input, &schema)?;
    if let Some(path) = &data.adjacency {
        let sidecar = load_sidecar(path)?;
        dataset = dataset.with_sidecar(sidecar)?;
    }
    println!(
        "loaded {} rows from {} ({} dropped, {} imputed)",
        dataset.n_rows(),
        data.input.display(),
        report.rows_dropped,
        report.cells_imputed
    );
    Ok((dataset, report))
}

fn ce_config(ce: &crate::CeArgs, seed: u64) -> CeConfig {
    CeConfig {
        k: ce.k_ce,
        label_jitter_seed: ce.jitter_label.then_some(seed),
    }
}

fn knn_config(knn: &crate::KnnArgs) -> KnnConfig {
    KnnConfig {
        k_neighbors: knn.knn,
        weighting: match knn.weighting {
            WeightingArg::Uniform => Weighting::Uniform,
            WeightingArg::Inverse => Weighting::InverseDistance,
        },
    }
}

fn selection_rule(rule: &RuleArgs) -> SelectionRule {
    match (rule.top_k, rule.threshold) {
        (Some(m), None) => SelectionRule::TopK(m),
        (None, Some(t)) => SelectionRule::Threshold(t),
        _ => unreachable!("clap enforces exactly one rule flag"),
    }
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| {
        CliError::from(ce_core::Error::FileWrite {
            path: dir.to_path_buf(),
            source,
        })
    })
}

fn write_json<T: Serialize>(path: &PathBuf, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError {
        code: 1,
        message: format!("cannot serialize report: {e}"),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|source| {
        CliError::from(ce_core::Error::FileWrite {
            path: path.clone(),
            source,
        })
    })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_ranking_csv(path: &PathBuf, ranking: &VariableRanking) -> Result<(), CliError> {
    let io_err = |e: csv::Error| CliError {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    };
    let mut writer = csv::Writer::from_path(path).map_err(io_err)?;
    writer.write_record(["name", "ce"]).map_err(io_err)?;
    for entry in ranking.entries() {
        writer
            .write_record([entry.name.as_str(), &entry.ce.to_string()])
            .map_err(io_err)?;
    }
    writer.flush().map_err(|e| CliError {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn print_ranking(ranking: &VariableRanking) {
    println!("{:<4} {:<24} {:>14}  k", "rank", "variable", "ce (nats)");
    for (i, entry) in ranking.entries().iter().enumerate() {
        let note = if entry.floored > 0 {
            format!("  ({} floored neighbor distances)", entry.floored)
        } else {
            String::new()
        };
        println!(
            "{:<4} {:<24} {:>14.6}  {}{}",
            i + 1,
            entry.name,
            entry.ce,
            entry.k,
            note
        );
    }
}

fn print_report(label: &str, report: &EvalReport) {
    let m = &report.metrics;
    match m.adjacent_accuracy {
        Some(adj) => println!(
            "{label}: accuracy {:.4}, macro F1 {:.4}, adjacent accuracy {:.4}",
            m.accuracy, m.macro_f1, adj
        ),
        None => println!("{label}: accuracy {:.4}, macro F1 {:.4}", m.accuracy, m.macro_f1),
    }
    for fold in &report.fold_breakdown {
        println!(
            "  well {:<16} accuracy {:.4}, macro F1 {:.4}",
            fold.well, fold.metrics.accuracy, fold.metrics.macro_f1
        );
    }
}

#[derive(Serialize)]
struct RankReport<'a> {
    config: &'a RunConfig,
    ranking: &'a VariableRanking,
}

#[derive(Serialize)]
struct SelectReport<'a> {
    config: &'a RunConfig,
    ranking: &'a VariableRanking,
    selected: &'a [String],
}

#[derive(Serialize)]
struct EvaluateReport<'a> {
    config: &'a RunConfig,
    report: &'a EvalReport,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    config: &'a RunConfig,
    ranking: &'a VariableRanking,
    selected: &'a [String],
    all_features: &'a EvalReport,
    selected_features: &'a EvalReport,
    accuracy_delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    multi_seed: Option<MultiSeed>,
}

#[derive(Serialize)]
struct MultiSeed {
    runs: Vec<SeedRun>,
    mean_accuracy_delta: f64,
}

#[derive(Serialize)]
struct SeedRun {
    seed: u64,
    accuracy_all: f64,
    accuracy_selected: f64,
    accuracy_delta: f64,
}

pub(crate) fn cmd_rank(args: &RankArgs) -> Result<(), CliError> {
    let config = run_config(RunConfigParts {
        command: "rank",
        data: &args.data,
        ce: Some(&args.ce),
        rule: None,
        knn: None,
        seed: args.seed.seed,
        seeds: None,
        out_dir: &args.out.out_dir,
    });
    let (dataset, _) = load_dataset(&args.data)?;
    let ranking = rank_variables(&dataset, &ce_config(&args.ce, args.seed.seed))?;
    print_ranking(&ranking);
    ensure_out_dir(&args.out.out_dir)?;
    write_json(
        &args.out.out_dir.join("ranking.json"),
        &RankReport {
            config: &config,
            ranking: &ranking,
        },
    )?;
    write_ranking_csv(&args.out.out_dir.join("ranking.csv"), &ranking)?;
    Ok(())
}

pub(crate) fn cmd_select(args: &SelectArgs) -> Result<(), CliError> {
    let config = run_config(RunConfigParts {
        command: "select",
        data: &args.data,
        ce: Some(&args.ce),
        rule: Some(&args.rule),
        knn: None,
        seed: args.seed.seed,
        seeds: None,
        out_dir: &args.out.out_dir,
    });
    let (dataset, _) = load_dataset(&args.data)?;
    let ranking = rank_variables(&dataset, &ce_config(&args.ce, args.seed.seed))?;
    let selected = select(&ranking, &selection_rule(&args.rule))?;
    print_ranking(&ranking);
    if selected.is_empty() {
        // legal: an empty selection is reported, not an error
        println!("selected: (none)");
    } else {
        println!("selected: {}", selected.join(", "));
    }
    ensure_out_dir(&args.out.out_dir)?;
    write_json(
        &args.out.out_dir.join("selection.json"),
        &SelectReport {
            config: &config,
            ranking: &ranking,
            selected: &selected,
        },
    )?;
    Ok(())
}

pub(crate) fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let config = run_config(RunConfigParts {
        command: "evaluate",
        data: &args.data,
        ce: None,
        rule: None,
        knn: Some(&args.knn),
        seed: args.seed.seed,
        seeds: None,
        out_dir: &args.out.out_dir,
    });
    let (dataset, _) = load_dataset(&args.data)?;
    let report = grouped_cv(&dataset, &knn_config(&args.knn), None)?;
    print_report("leave-one-well-out", &report);
    ensure_out_dir(&args.out.out_dir)?;
    write_json(
        &args.out.out_dir.join("evaluate.json"),
        &EvaluateReport {
            config: &config,
            report: &report,
        },
    )?;
    Ok(())
}

struct ComparisonRun {
    ranking: VariableRanking,
    selected: Vec<String>,
    all_features: EvalReport,
    selected_features: EvalReport,
    accuracy_delta: f64,
}

fn compare_once(
    dataset: &FaciesDataset,
    ce: &CeConfig,
    rule: &SelectionRule,
    knn: &KnnConfig,
) -> Result<ComparisonRun, CliError> {
    let ranking = rank_variables(dataset, ce)?;
    let selected = select(&ranking, rule)?;
    if selected.is_empty() {
        return Err(CliError {
            code: 3,
            message: "empty selection: no variable satisfies the selection rule".to_string(),
        });
    }
    // The classifier sees the selection in the dataset's column order, so
    // selecting everything is the identity restriction and classification
    // does not depend on how the ranking happened to order ties. The report
    // keeps `selected` in ranking order.
    let selected_data_order: Vec<String> = dataset
        .feature_names()
        .iter()
        .filter(|name| selected.contains(name))
        .cloned()
        .collect();
    let all_features = grouped_cv(dataset, knn, None)?;
    let selected_features = grouped_cv(dataset, knn, Some(&selected_data_order))?;
    let accuracy_delta = selected_features.metrics.accuracy - all_features.metrics.accuracy;
    Ok(ComparisonRun {
        ranking,
        selected,
        all_features,
        selected_features,
        accuracy_delta,
    })
}

pub(crate) fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let config = run_config(RunConfigParts {
        command: "compare",
        data: &args.data,
        ce: Some(&args.ce),
        rule: Some(&args.rule),
        knn: Some(&args.knn),
        seed: args.seed.seed,
        seeds: args.seeds.as_deref(),
        out_dir: &args.out.out_dir,
    });
    let (dataset, _) = load_dataset(&args.data)?;
    let rule = selection_rule(&args.rule);
    let knn = knn_config(&args.knn);

    let primary = compare_once(&dataset, &ce_config(&args.ce, args.seed.seed), &rule, &knn)?;
    print_ranking(&primary.ranking);
    println!("selected: {}", primary.selected.join(", "));
    print_report("all features", &primary.all_features);
    print_report("selected features", &primary.selected_features);
    println!("accuracy delta (selected - all): {:+.4}", primary.accuracy_delta);

    // The seed only drives the label jitter, so without --jitter-label the
    // per-seed runs coincide; the report still carries one entry per seed.
    let multi_seed = match &args.seeds {
        Some(seeds) => {
            let mut runs = Vec::with_capacity(seeds.len());
            for &seed in seeds {
                let run = compare_once(&dataset, &ce_config(&args.ce, seed), &rule, &knn)?;
                runs.push(SeedRun {
                    seed,
                    accuracy_all: run.all_features.metrics.accuracy,
                    accuracy_selected: run.selected_features.metrics.accuracy,
                    accuracy_delta: run.accuracy_delta,
                });
            }
            let mean_accuracy_delta =
                runs.iter().map(|r| r.accuracy_delta).sum::<f64>() / runs.len() as f64;
            println!(
                "mean accuracy delta over {} seeds: {:+.4}",
                runs.len(),
                mean_accuracy_delta
            );
            Some(MultiSeed {
                runs,
                mean_accuracy_delta,
            })
        }
        None => None,
    };

    ensure_out_dir(&args.out.out_dir)?;
    write_json(
        &args.out.out_dir.join("compare.json"),
        &CompareReport {
            config: &config,
            ranking: &primary.ranking,
            selected: &primary.selected,
            all_features: &primary.all_features,
            selected_features: &primary.selected_features,
            accuracy_delta: primary.accuracy_delta,
            multi_seed,
        },
    )?;
    Ok(())
}

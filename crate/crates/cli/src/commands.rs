use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use gsnmf::graph::{build_interaction_matrix, read_edges, symmetric_normalize, GraphReport};
use gsnmf::matrix_io::{read_labels, write_labels, LabeledMatrix};
use gsnmf::metrics::{score, LabeledPartition, Scores};
use gsnmf::opinion::{
    build_opinion_matrix_with, filter_matrix, read_messages, read_word_list, FilterReport,
    HeuristicTagger, Lexicon, Message, OpinionMatrix,
};
use gsnmf::profile::{extract_profiles, CommunityProfile};
use gsnmf::solver::{grid_search, hard_assign, solve, SolveDiagnostics, SolverConfig};
use gsnmf::synthetic::{generate, PlantedConfig};
use gsnmf::{Error, Result};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::{BuildArgs, MatrixArgs, SolverArgs};

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| io_error(path, source))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| io_error(path, source))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| io_error(path, source))
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn synth(config: Option<&Path>, out: &Path) -> Result<()> {
    let config: PlantedConfig = match config {
        Some(path) => read_json(path)?,
        None => PlantedConfig::default(),
    };
    generate(&config)?.write_dir(out)
}

#[derive(Debug, Serialize)]
pub struct BuildReport {
    pub messages: usize,
    pub rejected_message_lines: Vec<usize>,
    pub raw_expressions: usize,
    pub raw_users: usize,
    pub filter: FilterReport,
    pub expressions: usize,
    pub users: usize,
    pub nonzeros: usize,
    pub interaction_events: usize,
    pub rejected_edge_lines: Vec<usize>,
    pub graph: GraphReport,
    pub isolated_users: usize,
}

pub struct Built {
    pub messages: Vec<Message>,
    pub tagger: HeuristicTagger,
    pub lexicon: Lexicon,
    pub matrix: OpinionMatrix,
    /// Raw interaction counts aligned with the users of `matrix`.
    pub w: Array2<f64>,
}

pub fn build(args: &BuildArgs) -> Result<Built> {
    let load = read_messages(&args.messages)?;
    let lexicon = Lexicon::read_tsv(&args.lexicon)?;
    let stopwords = read_word_list(&args.stopwords)?;
    let nouns = match &args.nouns {
        Some(path) => read_word_list(path)?,
        None => Default::default(),
    };
    let tagger = HeuristicTagger::new(nouns);
    let raw =
        build_opinion_matrix_with(&load.messages, &tagger, &lexicon, args.window, &stopwords)?;
    let (matrix, filter) = filter_matrix(&raw, args.min_users, args.min_keyexprs);
    if filter.empty {
        return Err(Error::Invalid(format!(
            "no expressions or users survive min-users {} and min-keyexprs {}",
            args.min_users, args.min_keyexprs
        )));
    }

    let (events, rejected_edge_lines) = read_edges(&args.retweets)?;
    let (w, graph) = build_interaction_matrix(&events, &matrix.users);
    let isolated_users = w.rows().into_iter().filter(|r| r.sum() == 0.0).count();
    if isolated_users > 0 {
        log::warn!("{isolated_users} users have no interactions");
    }

    create_dir(&args.out)?;
    matrix.to_labeled().write_csv(args.out.join("X.csv"))?;
    user_matrix(matrix.users.names(), w.clone()).write_csv(args.out.join("W.csv"))?;
    write_index(
        &args.out.join("expressions.csv"),
        "expression",
        matrix.expressions.names(),
    )?;
    write_index(&args.out.join("users.csv"), "user_id", matrix.users.names())?;
    let (m, n) = matrix.shape();
    let report = BuildReport {
        messages: load.messages.len(),
        rejected_message_lines: load.rejected_lines,
        raw_expressions: raw.shape().0,
        raw_users: raw.shape().1,
        filter,
        expressions: m,
        users: n,
        nonzeros: matrix.nnz(),
        interaction_events: events.len(),
        rejected_edge_lines,
        graph,
        isolated_users,
    };
    write_json(&args.out.join("build_report.json"), &report)?;
    Ok(Built {
        messages: load.messages,
        tagger,
        lexicon,
        matrix,
        w,
    })
}

fn user_matrix(users: &[String], values: Array2<f64>) -> LabeledMatrix {
    LabeledMatrix {
        corner: "user_id".into(),
        row_names: users.to_vec(),
        col_names: users.to_vec(),
        values,
    }
}

fn write_index(path: &Path, name: &str, names: &[String]) -> Result<()> {
    let mut text = format!("index,{name}\n");
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for (i, n) in names.iter().enumerate() {
        wtr.write_record([i.to_string().as_str(), n])?;
    }
    let body = wtr
        .into_inner()
        .map_err(|e| Error::Invalid(format!("index writer: {e}")))?;
    text.push_str(&String::from_utf8_lossy(&body));
    fs::write(path, text).map_err(|source| io_error(path, source))
}

pub struct Inputs {
    pub x: Array2<f64>,
    pub w_norm: Array2<f64>,
    pub users: Vec<String>,
    pub expressions: Vec<String>,
}

pub fn load_inputs(args: &MatrixArgs) -> Result<Inputs> {
    let x = LabeledMatrix::read_csv(&args.x)?;
    let w = LabeledMatrix::read_csv(&args.w)?;
    let aligned = w.aligned_square(&x.col_names)?;
    let w_norm = if args.w_normalized {
        aligned
    } else {
        symmetric_normalize(&aligned)?
    };
    Ok(Inputs {
        x: x.values,
        w_norm,
        users: x.col_names,
        expressions: x.row_names,
    })
}

pub fn solver_config(args: &SolverArgs, lambda: f64) -> SolverConfig {
    SolverConfig {
        k: args.k,
        lambda,
        max_iter: args.max_iter,
        tol: args.tol,
        patience: args.patience,
        restarts: args.restarts,
        seed: args.seed,
        ..SolverConfig::default()
    }
}

#[derive(Debug, Serialize)]
struct DetectDiagnostics<'a> {
    config: &'a SolverConfig,
    users: usize,
    expressions: usize,
    degenerate_users: Vec<&'a str>,
    #[serde(flatten)]
    solve: &'a SolveDiagnostics,
}

pub struct Detected {
    pub users: Vec<String>,
    pub expressions: Vec<String>,
    pub v: Array2<f64>,
    pub assignment: Vec<usize>,
}

pub fn detect(
    inputs: &MatrixArgs,
    solver: &SolverArgs,
    lambda: f64,
    out: &Path,
) -> Result<Detected> {
    let inputs = load_inputs(inputs)?;
    detect_loaded(inputs, &solver_config(solver, lambda), out)
}

pub fn detect_loaded(inputs: Inputs, config: &SolverConfig, out: &Path) -> Result<Detected> {
    let (fac, diag) = solve(&inputs.x, &inputs.w_norm, config)?;
    let assignment = hard_assign(&fac.u);
    create_dir(out)?;
    let header = community_header(config.k);
    LabeledMatrix::new("user_id", inputs.users.clone(), header.clone(), fac.u)?
        .write_csv(out.join("U.csv"))?;
    LabeledMatrix::new(
        "expression",
        inputs.expressions.clone(),
        header,
        fac.v.clone(),
    )?
    .write_csv(out.join("V.csv"))?;
    write_labels(
        out.join("assignments.csv"),
        inputs.users.iter().zip(assignment.labels.iter()),
    )?;
    let degenerate_users: Vec<&str> = assignment
        .degenerate_rows
        .iter()
        .map(|&i| inputs.users[i].as_str())
        .collect();
    write_json(
        &out.join("diagnostics.json"),
        &DetectDiagnostics {
            config,
            users: inputs.users.len(),
            expressions: inputs.expressions.len(),
            degenerate_users,
            solve: &diag,
        },
    )?;
    Ok(Detected {
        users: inputs.users,
        expressions: inputs.expressions,
        v: fac.v,
        assignment: assignment.labels,
    })
}

fn community_header(k: usize) -> Vec<String> {
    (0..k).map(|c| format!("community_{c}")).collect()
}

pub fn grid(
    inputs: &MatrixArgs,
    solver: &SolverArgs,
    lambdas: &[f64],
    labels: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let inputs = load_inputs(inputs)?;
    let truth = match labels {
        Some(path) => Some(truth_for(&inputs.users, &read_labels(path)?)?),
        None => None,
    };
    let report = grid_search(
        &inputs.x,
        &inputs.w_norm,
        lambdas,
        &solver_config(solver, 0.0),
        truth.as_deref(),
    )?;
    write_json(out, &report)
}

/// Label ids for every user, numbered in sorted label order.
fn truth_for(users: &[String], labels: &[(String, String)]) -> Result<Vec<usize>> {
    let by_user: HashMap<&str, &str> = labels
        .iter()
        .map(|(u, l)| (u.as_str(), l.as_str()))
        .collect();
    let distinct: BTreeSet<&str> = by_user.values().copied().collect();
    let ids: HashMap<&str, usize> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    users
        .iter()
        .map(|u| {
            by_user
                .get(u.as_str())
                .map(|l| ids[l])
                .ok_or_else(|| Error::Invalid(format!("no label for user {u:?}")))
        })
        .collect()
}

pub fn profile(v: &Path, top: usize, out: &Path) -> Result<Vec<CommunityProfile>> {
    let v = LabeledMatrix::read_csv(v)?;
    let profiles = extract_profiles(&v.values, &v.row_names, top)?;
    write_json(out, &profiles)?;
    Ok(profiles)
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    #[serde(flatten)]
    pub scores: Scores,
    pub n_scored: usize,
    pub n_excluded: usize,
}

pub fn evaluate(u: &Path, labels: &Path, out: &Path) -> Result<Evaluation> {
    let u = LabeledMatrix::read_csv(u)?;
    let assignment = hard_assign(&u.values).labels;
    let predicted: Vec<(String, usize)> = u.row_names.into_iter().zip(assignment).collect();
    let result = evaluate_assignment(&predicted, &read_labels(labels)?)?;
    write_json(out, &result)?;
    Ok(result)
}

/// Scores the users present on both sides; the rest are counted as excluded.
pub fn evaluate_assignment(
    predicted: &[(String, usize)],
    labels: &[(String, String)],
) -> Result<Evaluation> {
    let truth: BTreeMap<&str, &str> = labels
        .iter()
        .map(|(u, l)| (u.as_str(), l.as_str()))
        .collect();
    let mut pred = Vec::new();
    let mut gold = Vec::new();
    for (user, label) in predicted {
        if let Some(&t) = truth.get(user.as_str()) {
            pred.push(*label);
            gold.push(t);
        }
    }
    let n_scored = pred.len();
    let n_excluded = predicted.len() + truth.len() - 2 * n_scored;
    if n_scored == 0 {
        return Err(Error::Invalid(
            "no user appears in both U and the labels".into(),
        ));
    }
    if n_excluded > 0 {
        log::warn!("{n_excluded} users lack either a prediction or a label");
    }
    let scores = score(
        &LabeledPartition::from_usize(&pred)?,
        &LabeledPartition::from_values(&gold)?,
    )?;
    Ok(Evaluation {
        scores,
        n_scored,
        n_excluded,
    })
}

pub fn assignments_map(users: &[String], labels: &[usize]) -> HashMap<String, usize> {
    users.iter().cloned().zip(labels.iter().copied()).collect()
}

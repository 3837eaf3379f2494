use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use gsnmf::graph::symmetric_normalize;
use gsnmf::matrix_io::read_labels;
use gsnmf::profile::{community_sentiment_words, WordCount};
use gsnmf::solver::SolverConfig;
use gsnmf::Result;
use serde::Deserialize;

use crate::commands::{
    assignments_map, build, detect_loaded, evaluate_assignment, read_json, write_json, Inputs,
};
use crate::BuildArgs;

/// Relative paths are resolved against the directory holding the config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub messages: PathBuf,
    pub retweets: PathBuf,
    pub lexicon: PathBuf,
    pub stopwords: PathBuf,
    #[serde(default)]
    pub nouns: Option<PathBuf>,
    #[serde(default)]
    pub labels: Option<PathBuf>,
    #[serde(default = "defaults::window")]
    pub window: usize,
    #[serde(default = "defaults::threshold")]
    pub min_users: usize,
    #[serde(default = "defaults::threshold")]
    pub min_keyexprs: usize,
    pub k: usize,
    #[serde(default = "defaults::lambda")]
    pub lambda: f64,
    #[serde(default = "defaults::restarts")]
    pub restarts: usize,
    #[serde(default = "defaults::max_iter")]
    pub max_iter: usize,
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::patience")]
    pub patience: usize,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::top")]
    pub top: usize,
    /// Expressions to summarize sentiment words for; defaults to every
    /// expression that appears in a profile.
    #[serde(default)]
    pub sentiment_expressions: Option<Vec<String>>,
}

mod defaults {
    pub fn window() -> usize {
        3
    }
    pub fn threshold() -> usize {
        15
    }
    pub fn lambda() -> f64 {
        1e6
    }
    pub fn restarts() -> usize {
        10
    }
    pub fn max_iter() -> usize {
        500
    }
    pub fn tol() -> f64 {
        1e-6
    }
    pub fn patience() -> usize {
        20
    }
    pub fn seed() -> u64 {
        42
    }
    pub fn top() -> usize {
        15
    }
}

pub fn run(config_path: &Path, out: &Path) -> Result<()> {
    let cfg: PipelineConfig = read_json(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new(""));
    let resolve = |p: &Path| base.join(p);

    let built = build(&BuildArgs {
        messages: resolve(&cfg.messages),
        retweets: resolve(&cfg.retweets),
        lexicon: resolve(&cfg.lexicon),
        stopwords: resolve(&cfg.stopwords),
        nouns: cfg.nouns.as_deref().map(resolve),
        window: cfg.window,
        min_users: cfg.min_users,
        min_keyexprs: cfg.min_keyexprs,
        out: out.join("build"),
    })?;

    let inputs = Inputs {
        x: built.matrix.to_dense(),
        w_norm: symmetric_normalize(&built.w)?,
        users: built.matrix.users.names().to_vec(),
        expressions: built.matrix.expressions.names().to_vec(),
    };
    let solver = SolverConfig {
        k: cfg.k,
        lambda: cfg.lambda,
        max_iter: cfg.max_iter,
        tol: cfg.tol,
        patience: cfg.patience,
        restarts: cfg.restarts,
        seed: cfg.seed,
        ..SolverConfig::default()
    };
    let detected = detect_loaded(inputs, &solver, &out.join("detect"))?;

    let profiles = gsnmf::profile::extract_profiles(&detected.v, &detected.expressions, cfg.top)?;
    write_json(&out.join("profiles.json"), &profiles)?;

    let expressions: BTreeSet<String> = match &cfg.sentiment_expressions {
        Some(list) => list.iter().cloned().collect(),
        None => profiles
            .iter()
            .flat_map(|p| p.positive.iter().chain(p.negative.iter()))
            .map(|e| e.expression.clone())
            .collect(),
    };
    let members = assignments_map(&detected.users, &detected.assignment);
    let summary: BTreeMap<String, BTreeMap<usize, Vec<WordCount>>> = expressions
        .into_iter()
        .map(|expr| {
            let words = community_sentiment_words(
                &built.messages,
                &members,
                &built.tagger,
                &built.lexicon,
                cfg.window,
                &expr,
            );
            (expr, words)
        })
        .collect();
    write_json(&out.join("sentiment_words.json"), &summary)?;

    if let Some(labels) = &cfg.labels {
        let predicted: Vec<(String, usize)> = detected
            .users
            .iter()
            .cloned()
            .zip(detected.assignment.iter().copied())
            .collect();
        let result = evaluate_assignment(&predicted, &read_labels(resolve(labels))?)?;
        write_json(&out.join("metrics.json"), &result)?;
    }
    Ok(())
}

//! Signed community profiles and per-expression sentiment-word summaries.

use std::collections::{BTreeMap, HashMap};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opinion::{
    attribute_sentiment_detailed, extract_key_expressions, fold, tokenize, Lexicon, Message, Tagger,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub expression: String,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityProfile {
    pub community_id: usize,
    /// Largest first.
    pub positive: Vec<ProfileEntry>,
    /// Most negative first.
    pub negative: Vec<ProfileEntry>,
    pub top_n: usize,
}

/// Splits each column of `V` by sign and keeps the `top_n` strongest
/// expressions on each side. Exact zeros belong to neither side; equal
/// strengths are ordered alphabetically.
pub fn extract_profiles(
    v: &Array2<f64>,
    expressions: &[String],
    top_n: usize,
) -> Result<Vec<CommunityProfile>> {
    if top_n == 0 {
        return Err(Error::invalid("top_n must be at least 1"));
    }
    if v.nrows() != expressions.len() {
        return Err(Error::Dimension(format!(
            "V has {} rows for {} expressions",
            v.nrows(),
            expressions.len()
        )));
    }
    let profiles = v
        .columns()
        .into_iter()
        .enumerate()
        .map(|(c, col)| {
            let mut positive: Vec<ProfileEntry> = Vec::new();
            let mut negative: Vec<ProfileEntry> = Vec::new();
            for (expr, &s) in expressions.iter().zip(col.iter()) {
                let entry = ProfileEntry {
                    expression: expr.clone(),
                    strength: s,
                };
                if s > 0.0 {
                    positive.push(entry);
                } else if s < 0.0 {
                    negative.push(entry);
                }
            }
            positive.sort_by(|a, b| {
                b.strength
                    .total_cmp(&a.strength)
                    .then_with(|| a.expression.cmp(&b.expression))
            });
            negative.sort_by(|a, b| {
                a.strength
                    .total_cmp(&b.strength)
                    .then_with(|| a.expression.cmp(&b.expression))
            });
            positive.truncate(top_n);
            negative.truncate(top_n);
            CommunityProfile {
                community_id: c,
                positive,
                negative,
                top_n,
            }
        })
        .collect();
    Ok(profiles)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCount {
    pub word: String,
    pub frequency: usize,
}

/// For every community, the lexicon words whose attribution landed on
/// `expression` in its members' messages, by descending frequency (ties
/// alphabetical). Authors missing from `assignments` are skipped.
pub fn community_sentiment_words(
    messages: &[Message],
    assignments: &HashMap<String, usize>,
    tagger: &dyn Tagger,
    lexicon: &Lexicon,
    window: usize,
    expression: &str,
) -> BTreeMap<usize, Vec<WordCount>> {
    let target = fold(expression);
    let mut counts: BTreeMap<usize, HashMap<String, usize>> = BTreeMap::new();
    for msg in messages {
        let Some(&community) = assignments.get(&msg.user_id) else {
            continue;
        };
        let mut tokens = tokenize(&msg.text);
        tagger.tag(&mut tokens);
        let occurrences = extract_key_expressions(&tokens);
        for a in attribute_sentiment_detailed(&tokens, &occurrences, lexicon, window) {
            if a.expression == target {
                *counts
                    .entry(community)
                    .or_default()
                    .entry(a.word)
                    .or_insert(0) += 1;
            }
        }
    }
    if counts.is_empty() {
        log::warn!("no sentiment word targets expression {expression:?}");
    }
    counts
        .into_iter()
        .map(|(c, words)| {
            let mut ranked: Vec<WordCount> = words
                .into_iter()
                .map(|(word, frequency)| WordCount { word, frequency })
                .collect();
            ranked.sort_by(|a, b| {
                b.frequency
                    .cmp(&a.frequency)
                    .then_with(|| a.word.cmp(&b.word))
            });
            (c, ranked)
        })
        .collect()
}

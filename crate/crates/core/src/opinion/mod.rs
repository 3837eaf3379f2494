//! From raw messages to the signed opinion matrix.
//!
//! Per message: [`tokenize`] → [`Tagger::tag`] → [`extract_key_expressions`]
//! → [`attribute_sentiment`]. [`build_opinion_matrix`] accumulates the
//! resulting `(expression, strength)` events per author and
//! [`filter_matrix`] applies the activity thresholds.

mod attribute;
mod extract;
mod io;
mod lexicon;
mod matrix;
mod tagger;
mod tokenize;

pub use attribute::{attribute_sentiment, attribute_sentiment_detailed, Attribution};
pub use extract::{extract_key_expressions, ExpressionKind, KeyExpressionOccurrence};
pub use io::{parse_messages, read_messages, read_word_list, MessageLoad};
pub use lexicon::Lexicon;
pub use matrix::{
    build_opinion_matrix, build_opinion_matrix_with, filter_matrix, message_events, FilterReport,
    Message, NameIndex, OpinionMatrix,
};
pub use tagger::{HeuristicTagger, Tagger};
pub use tokenize::{tokenize, Tag, Token};

/// Window used when none is given: three tokens on each side.
pub const DEFAULT_WINDOW: usize = 3;

/// Case folding used for every lookup and canonical form.
pub fn fold(s: &str) -> String {
    s.to_lowercase()
}

use std::collections::HashSet;

use super::fold;
use super::tokenize::{Tag, Token};

/// Fills in [`Token::tag`]. Implementations must tag `#`/`@`-prefixed
/// tokens as hashtag/mention; everything else is up to the tagger.
pub trait Tagger: Send + Sync {
    fn tag(&self, tokens: &mut [Token]);
}

/// Pronouns, determiners and similar closed-class words that are often
/// capitalized without being names.
const FUNCTION_WORDS: &[&str] = &[
    "a", "about", "after", "all", "also", "am", "an", "and", "any", "are", "as", "at", "be",
    "because", "been", "before", "but", "by", "can", "could", "did", "do", "does", "don't", "each",
    "every", "for", "from", "had", "has", "have", "he", "her", "here", "him", "his", "how", "i",
    "i'm", "if", "in", "into", "is", "it", "it's", "its", "just", "let's", "me", "more", "most",
    "my", "no", "not", "now", "of", "oh", "on", "or", "our", "out", "over", "please", "rt", "she",
    "should", "so", "some", "such", "than", "thank", "thanks", "that", "the", "their", "them",
    "then", "there", "these", "they", "this", "those", "to", "too", "up", "us", "very", "was",
    "we", "were", "what", "when", "where", "which", "who", "why", "will", "with", "would", "yes",
    "you", "your",
];

/// Capitalization and noun-list heuristic.
///
/// - `#x` → hashtag, `@x` → mention
/// - a token whose case-folded form is in the common-noun list → common noun
/// - a capitalized token → proper noun, unless it is a function word
/// - anything else → other
///
/// A capitalized token at the start of a sentence is only a proper noun if
/// it is neither a function word nor a listed common noun; mid-sentence the
/// noun list is consulted only for lowercase tokens.
#[derive(Debug, Clone)]
pub struct HeuristicTagger {
    common_nouns: HashSet<String>,
    function_words: HashSet<String>,
}

impl HeuristicTagger {
    pub fn new<I, S>(common_nouns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            common_nouns: common_nouns.into_iter().map(|s| fold(s.as_ref())).collect(),
            function_words: FUNCTION_WORDS.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn classify(&self, token: &Token) -> Tag {
        let s = &token.surface;
        if s.starts_with('#') {
            return Tag::Hashtag;
        }
        if s.starts_with('@') {
            return Tag::Mention;
        }
        let folded = fold(s);
        let capitalized = s.chars().next().is_some_and(char::is_uppercase);
        if !capitalized {
            return if self.common_nouns.contains(&folded) {
                Tag::CommonNoun
            } else {
                Tag::Other
            };
        }
        if self.function_words.contains(&folded) {
            return Tag::Other;
        }
        if token.sentence_start && self.common_nouns.contains(&folded) {
            return Tag::CommonNoun;
        }
        Tag::ProperNoun
    }
}

impl Default for HeuristicTagger {
    fn default() -> Self {
        Self::new(std::iter::empty::<&str>())
    }
}

impl Tagger for HeuristicTagger {
    fn tag(&self, tokens: &mut [Token]) {
        for t in tokens.iter_mut() {
            t.tag = self.classify(t);
        }
    }
}

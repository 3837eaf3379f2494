use serde::{Deserialize, Serialize};

use super::fold;
use super::tokenize::{Tag, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressionKind {
    Hashtag,
    Mention,
    ProperNoun,
    NounPhrase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyExpressionOccurrence {
    pub canonical: String,
    pub kind: ExpressionKind,
    /// Inclusive token positions.
    pub start: usize,
    pub end: usize,
}

impl KeyExpressionOccurrence {
    pub fn contains(&self, position: usize) -> bool {
        self.start <= position && position <= self.end
    }

    /// Token distance from `position` to the nearest span endpoint; zero
    /// inside the span.
    pub fn distance_to(&self, position: usize) -> usize {
        if position < self.start {
            self.start - position
        } else {
            position.saturating_sub(self.end)
        }
    }
}

fn canonical(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| fold(t.surface.trim_start_matches(['#', '@'])))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Hashtags and mentions yield one occurrence each; maximal runs of proper
/// nouns merge into one occurrence; maximal runs of two or more common
/// nouns form a noun phrase. Occurrences come back in token order and never
/// overlap.
pub fn extract_key_expressions(tokens: &[Token]) -> Vec<KeyExpressionOccurrence> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tag = tokens[i].tag;
        let mut j = i + 1;
        if matches!(tag, Tag::ProperNoun | Tag::CommonNoun) {
            while j < tokens.len() && tokens[j].tag == tag {
                j += 1;
            }
        }
        let run = &tokens[i..j];
        let kind = match tag {
            Tag::Hashtag => Some(ExpressionKind::Hashtag),
            Tag::Mention => Some(ExpressionKind::Mention),
            Tag::ProperNoun => Some(ExpressionKind::ProperNoun),
            Tag::CommonNoun if run.len() >= 2 => Some(ExpressionKind::NounPhrase),
            _ => None,
        };
        if let Some(kind) = kind {
            let canonical = canonical(run);
            if !canonical.is_empty() {
                out.push(KeyExpressionOccurrence {
                    canonical,
                    kind,
                    start: run[0].position,
                    end: run[run.len() - 1].position,
                });
            }
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::tagger::{HeuristicTagger, Tagger};
    use super::super::tokenize::tokenize;
    use super::*;

    fn extract(text: &str, nouns: &[&str]) -> Vec<KeyExpressionOccurrence> {
        let mut toks = tokenize(text);
        HeuristicTagger::new(nouns).tag(&mut toks);
        extract_key_expressions(&toks)
    }

    fn summary(occ: &[KeyExpressionOccurrence]) -> Vec<(&str, ExpressionKind)> {
        occ.iter().map(|o| (o.canonical.as_str(), o.kind)).collect()
    }

    #[test]
    fn markers_and_names() {
        let occ = extract("#Obamacare hurts @SpeakerRyan in Ohio", &[]);
        assert_eq!(
            summary(&occ),
            [
                ("obamacare", ExpressionKind::Hashtag),
                ("speakerryan", ExpressionKind::Mention),
                ("ohio", ExpressionKind::ProperNoun),
            ]
        );
    }

    #[test]
    fn proper_noun_run_merges() {
        let occ = extract("Hillary Clinton spoke", &[]);
        assert_eq!(
            summary(&occ),
            [("hillary clinton", ExpressionKind::ProperNoun)]
        );
        assert_eq!((occ[0].start, occ[0].end), (0, 1));
    }

    #[test]
    fn noun_phrase_needs_two_nouns() {
        let occ = extract("the tax code", &["tax", "code"]);
        assert_eq!(summary(&occ), [("tax code", ExpressionKind::NounPhrase)]);
        assert!(extract("the tax is high", &["tax"]).is_empty());
    }

    #[test]
    fn adjacent_hashtags_stay_separate() {
        let occ = extract("#a #b", &[]);
        assert_eq!(occ.len(), 2);
        assert_eq!((occ[1].start, occ[1].end), (1, 1));
    }

    #[test]
    fn distances() {
        let o = KeyExpressionOccurrence {
            canonical: "x".into(),
            kind: ExpressionKind::ProperNoun,
            start: 3,
            end: 5,
        };
        assert_eq!(o.distance_to(0), 3);
        assert_eq!(o.distance_to(4), 0);
        assert_eq!(o.distance_to(8), 3);
    }
}

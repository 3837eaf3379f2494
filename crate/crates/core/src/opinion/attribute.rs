use super::extract::KeyExpressionOccurrence;
use super::lexicon::Lexicon;
use super::tokenize::Token;

/// One sentiment word attributed to one key expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribution {
    pub expression: String,
    pub strength: i32,
    /// Case-folded sentiment word.
    pub word: String,
    pub word_position: usize,
}

/// For each lexicon word, picks the nearest key expression within `window`
/// tokens (distance to the nearer span endpoint). Equidistant candidates
/// resolve to the one on the left. A word inside a span never attributes
/// to that span.
pub fn attribute_sentiment_detailed(
    tokens: &[Token],
    occurrences: &[KeyExpressionOccurrence],
    lexicon: &Lexicon,
    window: usize,
) -> Vec<Attribution> {
    let mut out = Vec::new();
    for tok in tokens {
        let Some(strength) = lexicon.strength(&tok.surface) else {
            continue;
        };
        let pos = tok.position;
        // Occurrences are in token order, so on ties the first candidate
        // seen is the left one and is kept by the strict comparison.
        let mut best: Option<(usize, &KeyExpressionOccurrence)> = None;
        for occ in occurrences.iter().filter(|o| !o.contains(pos)) {
            let d = occ.distance_to(pos);
            if d > window {
                continue;
            }
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, occ));
            }
        }
        if let Some((_, occ)) = best {
            out.push(Attribution {
                expression: occ.canonical.clone(),
                strength,
                word: super::fold(&tok.surface),
                word_position: pos,
            });
        }
    }
    out
}

pub fn attribute_sentiment(
    tokens: &[Token],
    occurrences: &[KeyExpressionOccurrence],
    lexicon: &Lexicon,
    window: usize,
) -> Vec<(String, i32)> {
    attribute_sentiment_detailed(tokens, occurrences, lexicon, window)
        .into_iter()
        .map(|a| (a.expression, a.strength))
        .collect()
}

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Hashtag,
    Mention,
    ProperNoun,
    CommonNoun,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Surface form with surrounding punctuation removed. Hashtag and
    /// mention markers are kept here.
    pub surface: String,
    pub position: usize,
    pub tag: Tag,
    /// First token of the message or of a sentence (the previous raw word
    /// ended in `.`, `!` or `?`).
    pub sentence_start: bool,
}

impl Token {
    pub fn is_marked(&self) -> bool {
        self.surface.starts_with('#') || self.surface.starts_with('@')
    }
}

fn is_marker(c: char) -> bool {
    c == '#' || c == '@'
}

fn clean_word(raw: &str) -> &str {
    let trimmed = raw.trim_end_matches(|c: char| !c.is_alphanumeric());
    let start = trimmed
        .char_indices()
        .find(|&(_, c)| c.is_alphanumeric() || is_marker(c))
        .map(|(i, _)| i)
        .unwrap_or(trimmed.len());
    let mut word = &trimmed[start..];
    // "##tag" and "#@x" keep a single leading marker.
    if word.starts_with(is_marker) {
        let body_start = word
            .char_indices()
            .find(|&(_, c)| !is_marker(c))
            .map(|(i, _)| i)
            .unwrap_or(word.len());
        if body_start == word.len() {
            return "";
        }
        word = &word[body_start - 1..];
    }
    word
}

/// Splits on whitespace and strips leading/trailing punctuation, keeping a
/// leading `#` or `@`. Words that are pure punctuation are dropped.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut sentence_start = true;
    for raw in text.split_whitespace() {
        let word = clean_word(raw);
        let ends_sentence = raw
            .trim_end_matches(['"', '\'', ')'])
            .ends_with(['.', '!', '?']);
        if !word.is_empty() {
            tokens.push(Token {
                surface: word.to_string(),
                position: tokens.len(),
                tag: Tag::Other,
                sentence_start,
            });
            sentence_start = false;
        }
        if ends_sentence {
            sentence_start = true;
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n").is_empty());
    }

    #[test]
    fn strips_trailing_punctuation() {
        let toks = tokenize("Vote #Obamacare now!");
        assert_eq!(
            surfaces("Vote #Obamacare now!"),
            ["Vote", "#Obamacare", "now"]
        );
        assert_eq!(
            toks.iter().map(|t| t.position).collect::<Vec<_>>(),
            [0, 1, 2]
        );
    }

    #[test]
    fn keeps_mention_marker() {
        assert_eq!(surfaces("@SpeakerRyan, thanks"), ["@SpeakerRyan", "thanks"]);
    }

    #[test]
    fn leading_punctuation_and_markers() {
        assert_eq!(
            surfaces("(#Zika) \"hello\" ##dup #"),
            ["#Zika", "hello", "#dup"]
        );
        assert_eq!(surfaces("... -- !"), Vec::<String>::new());
        assert_eq!(surfaces("don't U.S."), ["don't", "U.S"]);
    }

    #[test]
    fn sentence_starts() {
        let toks = tokenize("Great news. Obama spoke! \"Then\" we left");
        let starts: Vec<bool> = toks.iter().map(|t| t.sentence_start).collect();
        assert_eq!(starts, [true, false, true, false, true, false, false]);
    }

    #[test]
    fn positions_skip_dropped_words() {
        let toks = tokenize("a - b");
        assert_eq!(toks[1].surface, "b");
        assert_eq!(toks[1].position, 1);
    }
}

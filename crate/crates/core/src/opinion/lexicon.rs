use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::fold;

/// Sentiment lexicon: case-folded term → strength in −5..=−1 or 1..=5.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, i32>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, term: &str, strength: i32) -> Result<()> {
        let term = fold(term.trim());
        if term.is_empty() {
            return Err(Error::invalid("lexicon term is empty"));
        }
        if strength == 0 || !(-5..=5).contains(&strength) {
            return Err(Error::invalid(format!(
                "lexicon strength {strength} for {term:?} is outside [-5,-1] ∪ [1,5]"
            )));
        }
        self.entries.insert(term, strength);
        Ok(())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i32)>) -> Result<Self> {
        let mut lex = Self::new();
        for (term, strength) in pairs {
            lex.insert(term, strength)?;
        }
        Ok(lex)
    }

    /// Case-insensitive lookup.
    pub fn strength(&self, word: &str) -> Option<i32> {
        self.entries.get(&fold(word)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `term<TAB>strength` lines. Blank lines and lines starting with
    /// `#` are skipped. A repeated term keeps its last strength.
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut lex = Self::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (term, strength) = line.split_once('\t').ok_or_else(|| {
                Error::invalid(format!("lexicon line {} has no tab separator", lineno + 1))
            })?;
            let strength: i32 = strength.trim().parse().map_err(|_| {
                Error::invalid(format!(
                    "lexicon line {}: strength {strength:?} is not an integer",
                    lineno + 1
                ))
            })?;
            lex.insert(term, strength)
                .map_err(|e| Error::invalid(format!("lexicon line {}: {e}", lineno + 1)))?;
        }
        Ok(lex)
    }

    pub fn read_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tsv_with_comments() {
        let lex = Lexicon::parse_tsv("# test lexicon\nangry\t-3\nGood\t+2\n\n").unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.strength("ANGRY"), Some(-3));
        assert_eq!(lex.strength("good"), Some(2));
        assert_eq!(lex.strength("meh"), None);
    }

    #[test]
    fn rejects_bad_strengths() {
        assert!(Lexicon::parse_tsv("meh\t0\n").is_err());
        assert!(Lexicon::parse_tsv("wow\t6\n").is_err());
        assert!(Lexicon::parse_tsv("wow\tlots\n").is_err());
        assert!(Lexicon::parse_tsv("wow 3\n").is_err());
        assert!(Lexicon::parse_tsv("\t3\n").is_err());
    }
}

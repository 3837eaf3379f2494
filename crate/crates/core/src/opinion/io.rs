use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::matrix::Message;

/// Messages parsed from JSON lines plus the records that were skipped.
#[derive(Debug, Clone, Default)]
pub struct MessageLoad {
    pub messages: Vec<Message>,
    /// 1-based line numbers of malformed records.
    pub rejected_lines: Vec<usize>,
}

#[derive(Deserialize)]
struct RawMessage {
    user_id: String,
    text: String,
}

/// Parses `{"user_id": ..., "text": ...}` per line. Unknown fields are
/// ignored; blank lines are skipped; anything else that fails to parse or
/// has an empty `user_id` is counted as rejected.
pub fn parse_messages(text: &str) -> MessageLoad {
    let mut load = MessageLoad::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawMessage>(line) {
            Ok(raw) => match Message::new(raw.user_id, raw.text) {
                Ok(m) => load.messages.push(m),
                Err(_) => load.rejected_lines.push(i + 1),
            },
            Err(_) => load.rejected_lines.push(i + 1),
        }
    }
    if !load.rejected_lines.is_empty() {
        log::warn!(
            "skipped {} malformed message records",
            load.rejected_lines.len()
        );
    }
    load
}

pub fn read_messages(path: impl AsRef<Path>) -> Result<MessageLoad> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_messages(&text))
}

/// One term per line, trimmed and case-folded; blank lines skipped.
pub fn read_word_list(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(super::fold)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_with_rejects() {
        let text = concat!(
            "{\"user_id\": \"a\", \"text\": \"hi\", \"lang\": \"en\"}\n",
            "not json\n",
            "\n",
            "{\"user_id\": \"\", \"text\": \"x\"}\n",
            "{\"text\": \"no user\"}\n",
            "{\"user_id\": \"b\", \"text\": \"\"}\n",
        );
        let load = parse_messages(text);
        assert_eq!(load.messages.len(), 2);
        assert_eq!(load.rejected_lines, [2, 4, 5]);
    }
}

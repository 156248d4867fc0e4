//! Word lists read from plain text: UTF-8, one word per line.

use std::path::Path;

use thiserror::Error;

use crate::automaton::Word;

#[derive(Debug, Error)]
pub enum WordListError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
}

/// Words in file order. Order matters: it changes the size of the built automaton.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    pub words: Vec<Word>,
    pub source_path: String,
}

impl WordList {
    /// Parses one word per line. LF and CRLF endings are accepted, empty lines
    /// are skipped, surrounding whitespace is trimmed, and a line holding only
    /// whitespace is an empty word.
    pub fn parse(text: &str, source_path: impl Into<String>) -> Result<Self, WordListError> {
        let mut words = Vec::new();
        for (i, raw) in text.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            let w: Word = line
                .trim()
                .parse()
                .map_err(|_| WordListError::EmptyWord { line: i + 1 })?;
            words.push(w);
        }
        Ok(WordList {
            words,
            source_path: source_path.into(),
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, WordListError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| WordListError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn as_strings(&self) -> Vec<String> {
        self.words.iter().map(|w| w.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_lines_and_crlf() {
        let list = WordList::parse("in\r\n\r\nit\nat\n\non\n", "mem").unwrap();
        assert_eq!(list.as_strings(), ["in", "it", "at", "on"]);
    }

    #[test]
    fn whitespace_only_line_is_an_empty_word() {
        match WordList::parse("a\n  \nb\n", "mem") {
            Err(WordListError::EmptyWord { line }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_text() {
        assert!(WordList::parse("", "mem").unwrap().is_empty());
    }
}

//! The `NFAv1` text format.
//!
//! ```text
//! NFAv1
//! source <id>
//! sink <id>
//! states <count>
//! <id>            one per line, ascending
//! transitions <count>
//! <from> <to> U+XXXX   sorted by (from, to, code point)
//! ```
//!
//! Writing is canonical, so reading a file and writing it back reproduces it
//! byte for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Automaton, StateId, Symbol, Transition};
use crate::error::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

pub fn to_nfav1(a: &Automaton) -> String {
    let mut out = String::new();
    out.push_str("NFAv1\n");
    let _ = writeln!(out, "source {}", a.source());
    let _ = writeln!(out, "sink {}", a.sink());
    let _ = writeln!(out, "states {}", a.state_count());
    for n in a.states() {
        let _ = writeln!(out, "{n}");
    }
    let transitions = a.transitions();
    let _ = writeln!(out, "transitions {}", transitions.len());
    for t in transitions {
        let _ = writeln!(
            out,
            "{} {} U+{:04X}",
            t.from,
            t.to,
            t.label.as_char() as u32
        );
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, FormatError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l.strip_suffix('\r').unwrap_or(l))
            }
            None => Err(self.err("unexpected end of file")),
        }
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.line + 1,
            message: message.into(),
        }
    }

    fn here(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<u32, FormatError> {
        let l = self.next()?;
        let value = l
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| self.here(format!("expected `{key} <number>`")))?;
        self.number(value)
    }

    fn number(&self, s: &str) -> Result<u32, FormatError> {
        s.parse()
            .map_err(|_| self.here(format!("invalid number `{s}`")))
    }
}

/// Parses an `NFAv1` document. Only the syntax and state references are
/// validated here; use [`Automaton::check_structure`] for acyclicity and
/// reachability.
pub fn from_nfav1(text: &str) -> Result<Automaton, FormatError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    if lines.next()? != "NFAv1" {
        return Err(lines.here("missing `NFAv1` header"));
    }
    let source = StateId::new(lines.keyed("source")?);
    let sink = StateId::new(lines.keyed("sink")?);
    let count = lines.keyed("states")?;
    let mut states = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let l = lines.next()?;
        let id = StateId::new(lines.number(l)?);
        if states.last().is_some_and(|&prev| prev >= id) {
            return Err(lines.here("state ids must be strictly ascending"));
        }
        states.push(id);
    }
    let count = lines.keyed("transitions")?;
    let mut transitions = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let l = lines.next()?;
        let parts: Vec<&str> = l.split(' ').collect();
        let [from, to, label] = parts[..] else {
            return Err(lines.here("expected `<from> <to> U+XXXX`"));
        };
        let code = label
            .strip_prefix("U+")
            .filter(|hex| hex.len() >= 4)
            .and_then(|hex| u32::from_str_radix(hex, 16).ok())
            .and_then(char::from_u32)
            .ok_or_else(|| lines.here(format!("invalid label `{label}`")))?;
        let t = Transition {
            from: StateId::new(lines.number(from)?),
            to: StateId::new(lines.number(to)?),
            label: Symbol::new(code),
        };
        if transitions
            .last()
            .is_some_and(|&prev: &Transition| prev >= t)
        {
            return Err(lines.here("transitions must be sorted and unique"));
        }
        transitions.push(t);
    }
    if let Some((i, _)) = lines.inner.next() {
        return Err(FormatError::Syntax {
            line: i + 1,
            message: "trailing content".into(),
        });
    }
    Ok(Automaton::from_parts(source, sink, states, transitions)?)
}

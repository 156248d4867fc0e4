//! Commands behind the `cnfa` binary. Each command writes its report to the
//! given writer and returns whether it succeeded; errors carry their exit code.

pub mod bench;

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::Path;

use compact_nfa::{
    check_compact_by_equivalence, check_compact_by_similarity, from_nfav1, insert_word, to_dot,
    to_nfav1, Automaton, FormatError, InsertError, StructureError, Word, WordList, WordListError,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: invalid automaton: {source}")]
    Structure {
        path: String,
        source: StructureError,
    },
    #[error("{path}: {source}")]
    WordList { path: String, source: WordListError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("insertion failed: {0}")]
    Insert(#[from] InsertError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::WordList {
                source: WordListError::EmptyWord { .. },
                ..
            }
            | CliError::Usage(_) => EXIT_USAGE,
            CliError::Insert(_) => EXIT_NEGATIVE,
            _ => EXIT_IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Output stream errors are reported against `<stdout>`.
pub(crate) fn out_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Order {
    #[default]
    Given,
    Sorted,
    Shuffled,
}

pub fn read_words(path: &Path) -> Result<WordList, CliError> {
    WordList::read(path).map_err(|source| CliError::WordList {
        path: path.display().to_string(),
        source,
    })
}

/// Reorders `words` in place; shuffling is reproducible for a given seed.
pub fn apply_order(words: &mut [Word], order: Order, seed: u64) {
    match order {
        Order::Given => {}
        Order::Sorted => words.sort(),
        Order::Shuffled => words.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
}

/// Loads an NFAv1 file without checking its structure.
pub fn load_automaton(path: &Path) -> Result<Automaton, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    from_nfav1(&text).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

/// Loads an NFAv1 file and rejects anything that is not a well-formed
/// acyclic single-source, single-sink automaton.
pub fn load_valid_automaton(path: &Path) -> Result<Automaton, CliError> {
    let a = load_automaton(path)?;
    a.check_structure().map_err(|source| CliError::Structure {
        path: path.display().to_string(),
        source,
    })?;
    Ok(a)
}

/// Replaces `path` by writing a sibling temporary file and renaming it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e.error,
    })?;
    Ok(())
}

fn parse_word(raw: &str) -> Result<Word, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage("the empty word is not allowed".into()))
}

pub fn build(
    input: &Path,
    output: &Path,
    order: Order,
    seed: u64,
    out: &mut impl Write,
) -> Result<bool, CliError> {
    let mut list = read_words(input)?;
    apply_order(&mut list.words, order, seed);
    let mut a = Automaton::new();
    let mut distinct = 0;
    for w in &list.words {
        if !insert_word(&mut a, w)?.already_present {
            distinct += 1;
        }
    }
    write_atomic(output, &to_nfav1(&a))?;
    writeln!(
        out,
        "words={distinct} states={} transitions={}",
        a.state_count(),
        a.transition_count()
    )
    .map_err(out_err)?;
    Ok(true)
}

pub fn add(path: &Path, word: &str, out: &mut impl Write) -> Result<bool, CliError> {
    let w = parse_word(word)?;
    let mut a = load_valid_automaton(path)?;
    let r = insert_word(&mut a, &w)?;
    write_atomic(path, &to_nfav1(&a))?;
    writeln!(
        out,
        "word={} already_present={} states_created={} merged_sinkward={} merged_sourceward={} rounds={} net_state_delta={}",
        r.word,
        r.already_present,
        r.states_created,
        r.states_merged_sinkward,
        r.states_merged_sourceward,
        r.rounds,
        r.net_state_delta()
    )
    .map_err(out_err)?;
    writeln!(
        out,
        "states={} transitions={}",
        a.state_count(),
        a.transition_count()
    )
    .map_err(out_err)?;
    Ok(true)
}

pub fn query(path: &Path, word: &str, out: &mut impl Write) -> Result<bool, CliError> {
    let w = parse_word(word)?;
    let a = load_valid_automaton(path)?;
    let found = a.contains(&w);
    writeln!(out, "{}", if found { "FOUND" } else { "NOT FOUND" }).map_err(out_err)?;
    Ok(found)
}

pub const DEFAULT_EQUIVALENCE_THRESHOLD: usize = 2000;

enum Check {
    Pass,
    Fail(String),
    Skip(String),
}

impl Check {
    fn from_witness(w: Option<compact_nfa::Witness>) -> Self {
        w.map_or(Check::Pass, |w| Check::Fail(w.to_string()))
    }
}

/// Runs every check and prints one `PASS`/`FAIL`/`SKIP` line per check.
pub fn verify(
    path: &Path,
    words: Option<&Path>,
    equivalence_threshold: usize,
    out: &mut impl Write,
) -> Result<bool, CliError> {
    let a = load_automaton(path)?;
    let expected = words.map(read_words).transpose()?;
    let acyclic = a.is_acyclic();
    let cyclic_skip = || Check::Skip("the automaton is cyclic".into());

    let mut checks = vec![
        (
            "structure",
            a.check_structure()
                .map_or_else(|e| Check::Fail(e.to_string()), |()| Check::Pass),
        ),
        (
            "acyclic",
            if acyclic {
                Check::Pass
            } else {
                Check::Fail("the transition graph has a cycle".into())
            },
        ),
        (
            "similarity",
            Check::from_witness(check_compact_by_similarity(&a).witness),
        ),
    ];
    let equivalence = if !acyclic {
        cyclic_skip()
    } else if a.state_count() > equivalence_threshold {
        Check::Skip(format!(
            "{} states exceed the threshold of {equivalence_threshold}",
            a.state_count()
        ))
    } else {
        Check::from_witness(check_compact_by_equivalence(&a).witness)
    };
    checks.push(("equivalence", equivalence));
    if let Some(list) = expected {
        let language = if !acyclic {
            cyclic_skip()
        } else {
            let want: BTreeSet<Word> = list.words.into_iter().collect();
            let have = a.language();
            if let Some(w) = want.difference(&have).next() {
                Check::Fail(format!("missing word {w}"))
            } else if let Some(w) = have.difference(&want).next() {
                Check::Fail(format!("unexpected word {w}"))
            } else {
                Check::Pass
            }
        };
        checks.push(("language", language));
    }

    let mut ok = true;
    for (name, check) in checks {
        match check {
            Check::Pass => writeln!(out, "PASS {name}"),
            Check::Skip(why) => writeln!(out, "SKIP {name}: {why}"),
            Check::Fail(why) => {
                ok = false;
                writeln!(out, "FAIL {name}: {why}")
            }
        }
        .map_err(out_err)?;
    }
    Ok(ok)
}

pub fn enumerate(path: &Path, out: &mut impl Write) -> Result<bool, CliError> {
    let a = load_valid_automaton(path)?;
    for w in a.language() {
        writeln!(out, "{w}").map_err(out_err)?;
    }
    Ok(true)
}

pub fn export_dot(path: &Path, out: &mut impl Write) -> Result<bool, CliError> {
    let a = load_valid_automaton(path)?;
    out.write_all(to_dot(&a).as_bytes()).map_err(out_err)?;
    Ok(true)
}

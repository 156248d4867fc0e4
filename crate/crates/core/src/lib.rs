//! Compact acyclic NFAs for lexicon storage.
//!
//! Words are added one at a time with [`insert_word`]; each insertion
//! attaches the word as a new chain and then merges similar states until none
//! remain, so a compact automaton stays compact. The [`verification`] module
//! checks that claim independently, and [`dfa`] builds the minimal DFA for
//! size comparisons.

pub mod automaton;
pub mod dfa;
pub mod dot;
pub mod error;
pub mod format;
pub mod insertion;
pub mod lexicon;
pub mod verification;

pub use automaton::{symbols_to_string, Automaton, FanEntry, StateId, Symbol, Transition, Word};
pub use dfa::{build_minimal_dfa, compare_sizes, determinize, Dfa, SizeComparison, SizeConvention};
pub use dot::to_dot;
pub use error::{AutomatonError, StructureError};
pub use format::{from_nfav1, to_nfav1, FormatError};
pub use insertion::{
    attach_word, build_lexicon, build_lexicon_with, insert_str, insert_word, insert_word_with,
    peek_sinkward, peek_sourceward, sinkward_pass, sourceward_pass, InsertError, InsertOptions,
    InsertReport, LexiconError, MarkedPath,
};
pub use lexicon::{WordList, WordListError};
pub use verification::{
    check_compact_by_equivalence, check_compact_by_similarity, CompactnessReport, Direction,
    RelationKind, StatePair, Witness,
};

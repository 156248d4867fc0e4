//! Incremental word insertion.
//!
//! A new word is first attached as a fresh source-to-sink chain whose
//! transitions are marked. Two passes then shrink the marked chain from its
//! ends: the sinkward pass merges the chain's last state into a down-similar
//! neighbor, the sourceward pass merges its first state into an up-similar
//! neighbor. The passes alternate until a round finds nothing to merge. On a
//! compact input the result is compact again.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::automaton::{Automaton, StateId, Symbol, Transition, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsertError {
    #[error("the empty word is not allowed")]
    EmptyWord,
    #[error("marked path invariant violated: {0}")]
    Invariant(String),
}

/// The chain of freshly created states and the two cursors driving the passes.
///
/// `last` is the marked transition closest to the sink, `(n', p, c)` in the
/// sinkward pass; `first` is the marked transition closest to the source,
/// `(q, n', c)` in the sourceward pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPath {
    z: VecDeque<StateId>,
    last: Transition,
    first: Transition,
    check_invariants: bool,
    outside_merges: usize,
}

impl MarkedPath {
    /// Remaining marked states, in source-to-sink order.
    pub fn z_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.z.iter().copied()
    }

    pub fn z_len(&self) -> usize {
        self.z.len()
    }

    /// The last-marked transition (the sink-side cursor).
    pub fn last_marked(&self) -> Transition {
        self.last
    }

    /// The first-marked transition (the source-side cursor).
    pub fn first_marked(&self) -> Transition {
        self.first
    }

    /// Merges performed on a state that had already left the marked chain.
    pub fn merges_outside_z(&self) -> usize {
        self.outside_merges
    }

    /// Enables the per-merge marked-path checks (see [`MarkedPath::check`]).
    pub fn set_check_invariants(&mut self, on: bool) {
        self.check_invariants = on;
    }

    /// Verifies the marked chain's shape: every marked state has exactly one
    /// incoming and one outgoing transition, at most one marked state is
    /// entered from outside the chain, and at most one leaves it.
    pub fn check(&self, a: &Automaton) -> Result<(), InsertError> {
        let zset: BTreeSet<StateId> = self.z.iter().copied().collect();
        let mut entered = 0;
        let mut left = 0;
        for &n in &self.z {
            if !a.has_state(n) {
                return Err(InsertError::Invariant(format!(
                    "marked state {n} was deleted"
                )));
            }
            let fin = a.fan_in_set(n);
            let fout = a.fan_out_set(n);
            if fin.len() != 1 || fout.len() != 1 {
                return Err(InsertError::Invariant(format!(
                    "marked state {n} has fan-in {} and fan-out {}",
                    fin.len(),
                    fout.len()
                )));
            }
            if fin.iter().any(|(_, m)| !zset.contains(m)) {
                entered += 1;
            }
            if fout.iter().any(|(_, m)| !zset.contains(m)) {
                left += 1;
            }
        }
        if entered > 1 || left > 1 {
            return Err(InsertError::Invariant(format!(
                "{entered} marked states entered from outside, {left} leave it"
            )));
        }
        Ok(())
    }
}

/// Summary of one insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertReport {
    pub word: Word,
    pub states_created: usize,
    pub states_merged_sinkward: usize,
    pub states_merged_sourceward: usize,
    /// Number of sinkward/sourceward alternations, including the final idle
    /// one; zero when the word was already present.
    pub rounds: usize,
    pub already_present: bool,
}

impl InsertReport {
    /// Change in the number of states caused by the insertion.
    pub fn net_state_delta(&self) -> isize {
        self.states_created as isize
            - (self.states_merged_sinkward + self.states_merged_sourceward) as isize
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InsertOptions {
    /// Run [`MarkedPath::check`] after attaching and after every merge.
    pub check_invariants: bool,
}

/// Attaches `word` as a new source-to-sink chain and marks it.
///
/// For a one-symbol word the single transition is both cursors; if that
/// transition already existed it is simply absorbed.
pub fn attach_word(a: &mut Automaton, word: &Word) -> MarkedPath {
    let symbols = word.symbols();
    let mut z = VecDeque::with_capacity(symbols.len() - 1);
    let mut prev = a.source();
    let mut first = None;
    for &s in &symbols[..symbols.len() - 1] {
        let n = a.add_state();
        let t = Transition {
            from: prev,
            to: n,
            label: s,
        };
        a.insert_transition_unchecked(t);
        first.get_or_insert(t);
        z.push_back(n);
        prev = n;
    }
    let last = Transition {
        from: prev,
        to: a.sink(),
        label: symbols[symbols.len() - 1],
    };
    a.insert_transition_unchecked(last);
    MarkedPath {
        z,
        last,
        first: first.unwrap_or(last),
        check_invariants: false,
        outside_merges: 0,
    }
}

/// Which end of the marked chain a pass works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Sinkward,
    Sourceward,
}

/// Repeatedly merges the state behind the last-marked transition into a
/// down-similar state, walking toward the source. Returns whether any merge
/// happened.
pub fn sinkward_pass(a: &mut Automaton, mp: &mut MarkedPath) -> Result<bool, InsertError> {
    run_pass(a, mp, Side::Sinkward).map(|merges| merges > 0)
}

/// Mirror of [`sinkward_pass`]: merges the state after the first-marked
/// transition into an up-similar state, walking toward the sink.
pub fn sourceward_pass(a: &mut Automaton, mp: &mut MarkedPath) -> Result<bool, InsertError> {
    run_pass(a, mp, Side::Sourceward).map(|merges| merges > 0)
}

fn run_pass(a: &mut Automaton, mp: &mut MarkedPath, side: Side) -> Result<usize, InsertError> {
    let mut merges = 0;
    // Each step looks at (n', p, c): n' is the state to absorb, p its fixed
    // neighbor across the cursor transition.
    while let Some((victim, keep)) = peek(a, mp, side) {
        merge(a, mp, side, victim, keep)?;
        merges += 1;
        if mp.check_invariants {
            mp.check(a)?;
        }
    }
    Ok(merges)
}

/// The merge the sinkward pass would perform next, as `(victim, survivor)`.
pub fn peek_sinkward(a: &Automaton, mp: &MarkedPath) -> Option<(StateId, StateId)> {
    peek(a, mp, Side::Sinkward)
}

/// The merge the sourceward pass would perform next, as `(victim, survivor)`.
pub fn peek_sourceward(a: &Automaton, mp: &MarkedPath) -> Option<(StateId, StateId)> {
    peek(a, mp, Side::Sourceward)
}

fn peek(a: &Automaton, mp: &MarkedPath, side: Side) -> Option<(StateId, StateId)> {
    let (victim, anchor, label) = match side {
        Side::Sinkward => (mp.last.from, mp.last.to, mp.last.label),
        Side::Sourceward => (mp.first.to, mp.first.from, mp.first.label),
    };
    if victim == a.source() || victim == a.sink() {
        return None;
    }
    find_similar(a, side, victim, anchor, label).map(|keep| (victim, keep))
}

/// First candidate (ascending id) sharing `anchor` and `label` with `victim`
/// whose fan-out (sinkward) or fan-in (sourceward) equals the victim's.
fn find_similar(
    a: &Automaton,
    side: Side,
    victim: StateId,
    anchor: StateId,
    label: Symbol,
) -> Option<StateId> {
    let (source, sink) = (a.source(), a.sink());
    match side {
        Side::Sinkward => {
            let target = a.fan_out_set(victim);
            a.predecessors_on(anchor, label)
                .filter(|&n| n != victim && n != source && n != sink)
                .find(|&n| a.fan_out_set(n) == target)
        }
        Side::Sourceward => {
            let target = a.fan_in_set(victim);
            a.successors_on(anchor, label)
                .filter(|&n| n != victim && n != source && n != sink)
                .find(|&n| a.fan_in_set(n) == target)
        }
    }
}

fn merge(
    a: &mut Automaton,
    mp: &mut MarkedPath,
    side: Side,
    victim: StateId,
    keep: StateId,
) -> Result<(), InsertError> {
    let in_z = match side {
        Side::Sinkward => mp.z.back() == Some(&victim),
        Side::Sourceward => mp.z.front() == Some(&victim),
    };
    if mp.check_invariants {
        if !in_z && mp.z.contains(&victim) {
            return Err(InsertError::Invariant(format!(
                "marked state {victim} merged away from the middle of the chain"
            )));
        }
        if mp.z.contains(&keep) {
            return Err(InsertError::Invariant(format!(
                "marked state {keep} chosen as a merge survivor"
            )));
        }
    }
    // The victim's transitions on the far side get redirected to `keep`.
    let moved: Vec<(Symbol, StateId)> = match side {
        Side::Sinkward => a.fan_in_set(victim).iter().copied().collect(),
        Side::Sourceward => a.fan_out_set(victim).iter().copied().collect(),
    };
    if in_z && moved.len() != 1 {
        return Err(InsertError::Invariant(format!(
            "marked state {victim} has {} transitions to redirect",
            moved.len()
        )));
    }
    if !in_z {
        mp.outside_merges += 1;
    }
    a.remove_state(victim).expect("victim is an interior state");
    let redirected: Vec<Transition> = moved
        .into_iter()
        .map(|(label, other)| match side {
            Side::Sinkward => Transition {
                from: other,
                to: keep,
                label,
            },
            Side::Sourceward => Transition {
                from: keep,
                to: other,
                label,
            },
        })
        .collect();
    for &t in &redirected {
        a.insert_transition_unchecked(t);
    }
    let next = redirected[0];
    match side {
        Side::Sinkward => {
            if in_z {
                mp.z.pop_back();
            }
            mp.last = next;
            mp.first = rename(mp.first, victim, keep);
        }
        Side::Sourceward => {
            if in_z {
                mp.z.pop_front();
            }
            mp.first = next;
            mp.last = rename(mp.last, victim, keep);
        }
    }
    Ok(())
}

/// Points a cursor at the surviving state after `gone` was merged into `keep`.
fn rename(mut t: Transition, gone: StateId, keep: StateId) -> Transition {
    if t.from == gone {
        t.from = keep;
    }
    if t.to == gone {
        t.to = keep;
    }
    t
}

/// Inserts `word`, keeping a compact automaton compact. A word that is
/// already accepted leaves the automaton untouched.
pub fn insert_word(a: &mut Automaton, word: &Word) -> Result<InsertReport, InsertError> {
    insert_word_with(a, word, InsertOptions::default())
}

pub fn insert_word_with(
    a: &mut Automaton,
    word: &Word,
    options: InsertOptions,
) -> Result<InsertReport, InsertError> {
    if a.contains(word) {
        return Ok(InsertReport {
            word: word.clone(),
            states_created: 0,
            states_merged_sinkward: 0,
            states_merged_sourceward: 0,
            rounds: 0,
            already_present: true,
        });
    }
    let states_before = a.state_count();
    let mut mp = attach_word(a, word);
    let states_created = a.state_count() - states_before;
    mp.check_invariants = options.check_invariants;
    if options.check_invariants {
        mp.check(a)?;
    }
    let mut report = InsertReport {
        word: word.clone(),
        states_created,
        states_merged_sinkward: 0,
        states_merged_sourceward: 0,
        rounds: 0,
        already_present: false,
    };
    loop {
        report.rounds += 1;
        let down = run_pass(a, &mut mp, Side::Sinkward)?;
        let up = run_pass(a, &mut mp, Side::Sourceward)?;
        report.states_merged_sinkward += down;
        report.states_merged_sourceward += up;
        if down == 0 && up == 0 {
            break;
        }
    }
    Ok(report)
}

/// Inserts a string, rejecting the empty string.
pub fn insert_str(a: &mut Automaton, word: &str) -> Result<InsertReport, InsertError> {
    let w: Word = word.parse().map_err(|_| InsertError::EmptyWord)?;
    insert_word(a, &w)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    /// `line` is 1-based.
    #[error("empty word at line {line}")]
    EmptyWord { line: usize },
    #[error("while inserting line {line}: {source}")]
    Insert { line: usize, source: InsertError },
}

/// Builds an automaton by inserting `words` one at a time, in order.
pub fn build_lexicon<S: AsRef<str>>(
    words: &[S],
) -> Result<(Automaton, Vec<InsertReport>), LexiconError> {
    build_lexicon_with(words, InsertOptions::default())
}

pub fn build_lexicon_with<S: AsRef<str>>(
    words: &[S],
    options: InsertOptions,
) -> Result<(Automaton, Vec<InsertReport>), LexiconError> {
    let mut a = Automaton::new();
    let mut reports = Vec::with_capacity(words.len());
    for (i, raw) in words.iter().enumerate() {
        let line = i + 1;
        let w: Word = raw
            .as_ref()
            .parse()
            .map_err(|_| LexiconError::EmptyWord { line })?;
        let report = insert_word_with(&mut a, &w, options)
            .map_err(|source| LexiconError::Insert { line, source })?;
        reports.push(report);
    }
    Ok((a, reports))
}

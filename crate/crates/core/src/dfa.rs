//! Minimal acyclic DFA baseline.
//!
//! The minimal DFA for a word set is built as a trie and then minimized by
//! bottom-up signature merging: two states are the same state exactly when
//! they agree on finality and on their labeled successors. Subset
//! construction over an [`Automaton`] is provided as a cross-check.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, StateId, Symbol, Word};
use crate::insertion::{build_lexicon, LexiconError};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
struct DfaState {
    accepting: bool,
    next: BTreeMap<Symbol, usize>,
}

/// An acyclic DFA with a start state and any number of final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<DfaState>,
    start: usize,
}

/// How final states are counted when reporting DFA size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SizeConvention {
    /// Plain DFA with final-state flags.
    #[default]
    MultiFinal,
    /// All final states funnel into one sink: final states without outgoing
    /// transitions are unified, and every other final state gains one
    /// end-marker transition into that sink.
    SingleSink,
}

impl Dfa {
    /// The DFA accepting nothing.
    pub fn empty() -> Self {
        Dfa {
            states: vec![DfaState::default()],
            start: 0,
        }
    }

    /// A trie over `words` (not minimized).
    pub fn trie<'w>(words: impl IntoIterator<Item = &'w Word>) -> Self {
        let mut dfa = Dfa::empty();
        for w in words {
            let mut at = dfa.start;
            for &s in w.symbols() {
                at = match dfa.states[at].next.get(&s) {
                    Some(&n) => n,
                    None => {
                        let n = dfa.states.len();
                        dfa.states.push(DfaState::default());
                        dfa.states[at].next.insert(s, n);
                        n
                    }
                };
            }
            dfa.states[at].accepting = true;
        }
        dfa
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.next.len()).sum()
    }

    pub fn final_count(&self) -> usize {
        self.states.iter().filter(|s| s.accepting).count()
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.states[state].accepting
    }

    /// Outgoing transitions of `state`, ordered by label.
    pub fn transitions(&self, state: usize) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        self.states[state].next.iter().map(|(&s, &n)| (s, n))
    }

    /// `(states, transitions)` under the given convention.
    pub fn size(&self, convention: SizeConvention) -> (usize, usize) {
        let (n, t) = (self.state_count(), self.transition_count());
        match convention {
            SizeConvention::MultiFinal => (n, t),
            SizeConvention::SingleSink => {
                let finals = self.final_count();
                if finals == 0 {
                    return (n, t);
                }
                let leaves = self
                    .states
                    .iter()
                    .filter(|s| s.accepting && s.next.is_empty())
                    .count();
                let states = if leaves == 0 { n + 1 } else { n - leaves + 1 };
                (states, t + finals - leaves)
            }
        }
    }

    pub fn contains(&self, word: &Word) -> bool {
        let mut at = self.start;
        for s in word.symbols() {
            match self.states[at].next.get(s) {
                Some(&n) => at = n,
                None => return false,
            }
        }
        self.states[at].accepting
    }

    /// Accepted non-empty words in lexicographic order.
    pub fn language(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut prefix = Vec::new();
        self.collect(self.start, &mut prefix, &mut out);
        out
    }

    fn collect(&self, at: usize, prefix: &mut Vec<Symbol>, out: &mut BTreeSet<Word>) {
        if self.states[at].accepting && !prefix.is_empty() {
            out.insert(Word::new(prefix.clone()).expect("non-empty"));
        }
        for (&s, &n) in &self.states[at].next {
            prefix.push(s);
            self.collect(n, prefix, out);
            prefix.pop();
        }
    }

    /// Merges states with identical signatures, bottom-up. States with an
    /// empty language (other than the start) are dropped.
    pub fn minimize(&self) -> Dfa {
        let mut register: HashMap<DfaState, usize> = HashMap::new();
        let mut out: Vec<DfaState> = Vec::new();
        let mut canon: Vec<Option<usize>> = vec![None; self.states.len()];
        let empty_sig = DfaState::default();

        // Iterative post-order so deep words do not exhaust the stack.
        let mut stack = vec![(self.start, false)];
        while let Some((at, expanded)) = stack.pop() {
            if canon[at].is_some() {
                continue;
            }
            if !expanded {
                stack.push((at, true));
                for &n in self.states[at].next.values() {
                    if canon[n].is_none() {
                        stack.push((n, false));
                    }
                }
                continue;
            }
            let mut sig = DfaState {
                accepting: self.states[at].accepting,
                next: BTreeMap::new(),
            };
            for (&s, &n) in &self.states[at].next {
                let child = canon[n].expect("children finished first");
                if out[child] != empty_sig {
                    sig.next.insert(s, child);
                }
            }
            let id = *register.entry(sig.clone()).or_insert_with(|| {
                out.push(sig);
                out.len() - 1
            });
            canon[at] = Some(id);
        }
        let start = canon[self.start].expect("start visited");
        // Drop the empty-language state unless it is the start.
        let mut keep: Vec<bool> = out.iter().map(|s| *s != empty_sig).collect();
        keep[start] = true;
        let mut remap = vec![usize::MAX; out.len()];
        let mut states = Vec::new();
        for (i, s) in out.iter().enumerate() {
            if keep[i] {
                remap[i] = states.len();
                states.push(s.clone());
            }
        }
        for s in &mut states {
            for n in s.next.values_mut() {
                *n = remap[*n];
            }
        }
        Dfa {
            states,
            start: remap[start],
        }
    }
}

/// The minimal DFA for `words` (duplicates allowed).
pub fn build_minimal_dfa<S: AsRef<str>>(words: &[S]) -> Result<Dfa, LexiconError> {
    let parsed = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            w.as_ref()
                .parse::<Word>()
                .map_err(|_| LexiconError::EmptyWord { line: i + 1 })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dfa::trie(&parsed).minimize())
}

/// Subset construction from the source; a subset is final iff it holds the sink.
pub fn determinize(a: &Automaton) -> Dfa {
    let mut ids: HashMap<Vec<StateId>, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let start = vec![a.source()];
    ids.insert(start.clone(), 0);
    states.push(DfaState::default());
    queue.push_back(start);
    while let Some(set) = queue.pop_front() {
        let id = ids[&set];
        let mut by_label: BTreeMap<Symbol, BTreeSet<StateId>> = BTreeMap::new();
        for &n in &set {
            for e in a.fan_out(n).expect("live state") {
                by_label.entry(e.label).or_default().insert(e.state);
            }
        }
        states[id].accepting = set.contains(&a.sink());
        for (label, targets) in by_label {
            let key: Vec<StateId> = targets.into_iter().collect();
            let next = match ids.get(&key) {
                Some(&n) => n,
                None => {
                    let n = states.len();
                    states.push(DfaState::default());
                    ids.insert(key.clone(), n);
                    queue.push_back(key);
                    n
                }
            };
            states[id].next.insert(label, next);
        }
    }
    Dfa { states, start: 0 }
}

/// Sizes of the compact NFA and the minimal DFA for one word list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeComparison {
    pub word_count: usize,
    pub nfa_states: usize,
    pub nfa_transitions: usize,
    pub dfa_states: usize,
    pub dfa_transitions: usize,
}

pub fn compare_sizes<S: AsRef<str>>(
    words: &[S],
    convention: SizeConvention,
) -> Result<SizeComparison, LexiconError> {
    let (nfa, _) = build_lexicon(words)?;
    let dfa = build_minimal_dfa(words)?;
    let (dfa_states, dfa_transitions) = dfa.size(convention);
    Ok(SizeComparison {
        word_count: nfa.language().len(),
        nfa_states: nfa.state_count(),
        nfa_transitions: nfa.transition_count(),
        dfa_states,
        dfa_transitions,
    })
}

//! The acyclic single-source, single-sink automaton.
//!
//! Transitions have set semantics and are indexed in both directions, so the
//! fan-in and fan-out sets of a state are available in time proportional to
//! its degree. Fan sets are stored keyed by `(label, neighbor)`, which lets
//! the insertion passes range-scan the candidates carrying one label.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{AutomatonError, StructureError};

/// Identifier of a state. Ids come from a monotone counter and are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    pub const fn new(raw: u32) -> Self {
        StateId(raw)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A transition label: one Unicode scalar value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(char);

impl Symbol {
    pub const fn new(c: char) -> Self {
        Symbol(c)
    }

    pub const fn as_char(self) -> char {
        self.0
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Self {
        Symbol(c)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A labeled directed transition `(from, to, label)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
    pub label: Symbol,
}

impl Transition {
    pub fn new(from: StateId, to: StateId, label: impl Into<Symbol>) -> Self {
        Transition {
            from,
            to,
            label: label.into(),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {:?})", self.from, self.to, self.label.0)
    }
}

/// One element of a fan-in or fan-out set: the neighboring state and the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanEntry {
    pub state: StateId,
    pub label: Symbol,
}

impl FanEntry {
    pub fn new(state: StateId, label: impl Into<Symbol>) -> Self {
        FanEntry {
            state,
            label: label.into(),
        }
    }
}

/// A non-empty sequence of symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, AutomatonError> {
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyWord);
        }
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Word {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::new(s.chars().map(Symbol).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.0)?;
        }
        Ok(())
    }
}

/// Renders a symbol sequence as a string.
pub fn symbols_to_string(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.0).collect()
}

pub(crate) type FanSet = BTreeSet<(Symbol, StateId)>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Node {
    fan_in: FanSet,
    fan_out: FanSet,
}

/// A mutable acyclic NFA with one source and one sink.
///
/// Every word is the label sequence of some source-to-sink path. Mutation
/// requires `&mut self`; all queries take `&self` and may run concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    nodes: Vec<Option<Node>>,
    source: StateId,
    sink: StateId,
    live_states: usize,
    transitions: usize,
}

impl Default for Automaton {
    fn default() -> Self {
        Self::new()
    }
}

impl Automaton {
    /// The empty automaton: a source, a sink and no transitions.
    pub fn new() -> Self {
        Automaton {
            nodes: vec![Some(Node::default()), Some(Node::default())],
            source: StateId(0),
            sink: StateId(1),
            live_states: 2,
            transitions: 0,
        }
    }

    /// Rebuilds an automaton from explicit parts. Ids in `states` are kept as-is;
    /// transitions are inserted without the acyclicity guard, so callers that
    /// read untrusted data should run [`check_structure`](Self::check_structure).
    pub fn from_parts(
        source: StateId,
        sink: StateId,
        states: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, AutomatonError> {
        let mut nodes: Vec<Option<Node>> = Vec::new();
        let mut live_states = 0;
        for id in states {
            if nodes.len() <= id.index() {
                nodes.resize(id.index() + 1, None);
            }
            if nodes[id.index()].is_none() {
                nodes[id.index()] = Some(Node::default());
                live_states += 1;
            }
        }
        let mut a = Automaton {
            nodes,
            source,
            sink,
            live_states,
            transitions: 0,
        };
        a.require(source)?;
        a.require(sink)?;
        if source == sink {
            return Err(AutomatonError::ProtectedState(sink));
        }
        for t in transitions {
            a.require(t.from)?;
            a.require(t.to)?;
            a.insert_transition_unchecked(t);
        }
        Ok(a)
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn sink(&self) -> StateId {
        self.sink
    }

    pub fn state_count(&self) -> usize {
        self.live_states
    }

    pub fn transition_count(&self) -> usize {
        self.transitions
    }

    /// The id the next created state will receive.
    pub fn next_state_id(&self) -> StateId {
        StateId(self.nodes.len() as u32)
    }

    pub fn has_state(&self, n: StateId) -> bool {
        matches!(self.nodes.get(n.index()), Some(Some(_)))
    }

    /// Live states in ascending id order.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| StateId(i as u32))
    }

    /// All transitions sorted by `(from, to, label)`.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out = Vec::with_capacity(self.transitions);
        for from in self.states() {
            let start = out.len();
            out.extend(
                self.node(from)
                    .fan_out
                    .iter()
                    .map(|&(label, to)| Transition { from, to, label }),
            );
            out[start..].sort_unstable();
        }
        out
    }

    /// Distinct labels used by any transition.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.nodes
            .iter()
            .flatten()
            .flat_map(|n| n.fan_out.iter().map(|&(s, _)| s))
            .collect()
    }

    fn require(&self, n: StateId) -> Result<(), AutomatonError> {
        if self.has_state(n) {
            Ok(())
        } else {
            Err(AutomatonError::UnknownState(n))
        }
    }

    fn node(&self, n: StateId) -> &Node {
        self.nodes[n.index()]
            .as_ref()
            .unwrap_or_else(|| panic!("state {n} does not exist"))
    }

    fn node_mut(&mut self, n: StateId) -> &mut Node {
        self.nodes[n.index()]
            .as_mut()
            .unwrap_or_else(|| panic!("state {n} does not exist"))
    }

    /// `F_IN(n)`, sorted by `(state, label)`.
    pub fn fan_in(&self, n: StateId) -> Result<Vec<FanEntry>, AutomatonError> {
        self.require(n)?;
        Ok(sorted_entries(&self.node(n).fan_in))
    }

    /// `F_OUT(n)`, sorted by `(state, label)`.
    pub fn fan_out(&self, n: StateId) -> Result<Vec<FanEntry>, AutomatonError> {
        self.require(n)?;
        Ok(sorted_entries(&self.node(n).fan_out))
    }

    pub(crate) fn fan_in_set(&self, n: StateId) -> &FanSet {
        &self.node(n).fan_in
    }

    pub(crate) fn fan_out_set(&self, n: StateId) -> &FanSet {
        &self.node(n).fan_out
    }

    /// Predecessors of `n` over transitions labeled `label`, ascending.
    pub(crate) fn predecessors_on(
        &self,
        n: StateId,
        label: Symbol,
    ) -> impl Iterator<Item = StateId> + '_ {
        label_range(&self.node(n).fan_in, label)
    }

    /// Successors of `n` over transitions labeled `label`, ascending.
    pub(crate) fn successors_on(
        &self,
        n: StateId,
        label: Symbol,
    ) -> impl Iterator<Item = StateId> + '_ {
        label_range(&self.node(n).fan_out, label)
    }

    pub fn has_transition(&self, t: Transition) -> bool {
        self.has_state(t.from) && self.node(t.from).fan_out.contains(&(t.label, t.to))
    }

    /// Creates a fresh state with no transitions.
    pub fn add_state(&mut self) -> StateId {
        let id = StateId(self.nodes.len() as u32);
        self.nodes.push(Some(Node::default()));
        self.live_states += 1;
        id
    }

    /// Adds `t` unless it is already present. Returns whether `L` changed.
    pub fn add_transition(&mut self, t: Transition) -> Result<bool, AutomatonError> {
        self.require(t.from)?;
        self.require(t.to)?;
        if self.has_transition(t) {
            return Ok(false);
        }
        if t.from == t.to || self.reaches(t.to, t.from) {
            return Err(AutomatonError::Cycle(t));
        }
        Ok(self.insert_transition_unchecked(t))
    }

    /// Adds `t` without checking state existence or acyclicity. Intended for
    /// callers that already know the edge is safe, and for test harnesses that
    /// need to build malformed automata.
    pub fn insert_transition_unchecked(&mut self, t: Transition) -> bool {
        let added = self.node_mut(t.from).fan_out.insert((t.label, t.to));
        if added {
            self.node_mut(t.to).fan_in.insert((t.label, t.from));
            self.transitions += 1;
        }
        added
    }

    /// Deletes `n` together with every transition incident to it.
    pub fn remove_state(&mut self, n: StateId) -> Result<(), AutomatonError> {
        if n == self.source || n == self.sink {
            return Err(AutomatonError::ProtectedState(n));
        }
        self.require(n)?;
        let node = self.nodes[n.index()].take().expect("checked above");
        for (label, from) in node.fan_in {
            if from != n {
                self.node_mut(from).fan_out.remove(&(label, n));
            }
            self.transitions -= 1;
        }
        for (label, to) in node.fan_out {
            if to != n {
                self.node_mut(to).fan_in.remove(&(label, n));
                self.transitions -= 1;
            }
        }
        self.live_states -= 1;
        Ok(())
    }

    /// Whether `to` is reachable from `from` (a state reaches itself).
    fn reaches(&self, from: StateId, to: StateId) -> bool {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            if n == to {
                return true;
            }
            for &(_, m) in &self.node(n).fan_out {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        false
    }

    /// Live states in a topological order (sources of edges first), or the
    /// first state found on a cycle.
    pub(crate) fn topological_order(&self) -> Result<Vec<StateId>, StateId> {
        let mut indegree: HashMap<StateId, usize> = self
            .states()
            .map(|n| (n, self.node(n).fan_in.len()))
            .collect();
        let mut queue: VecDeque<StateId> = self.states().filter(|n| indegree[n] == 0).collect();
        let mut order = Vec::with_capacity(self.live_states);
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for &(_, m) in &self.node(n).fan_out {
                let d = indegree.get_mut(&m).expect("live state");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(m);
                }
            }
        }
        if order.len() == self.live_states {
            Ok(order)
        } else {
            let stuck = self
                .states()
                .find(|n| indegree[n] > 0)
                .expect("some state left on a cycle");
            Err(stuck)
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// True iff no state has two outgoing transitions sharing a label.
    pub fn is_deterministic(&self) -> bool {
        self.nodes.iter().flatten().all(|node| {
            node.fan_out
                .iter()
                .zip(node.fan_out.iter().skip(1))
                .all(|(a, b)| a.0 != b.0)
        })
    }

    /// Checks the invariants every well-formed automaton satisfies: empty
    /// source fan-in and sink fan-out, acyclicity, and every state lying on
    /// some source-to-sink path (the empty automaton is the one exception).
    pub fn check_structure(&self) -> Result<(), StructureError> {
        if !self.node(self.source).fan_in.is_empty() {
            return Err(StructureError::SourceHasFanIn);
        }
        if !self.node(self.sink).fan_out.is_empty() {
            return Err(StructureError::SinkHasFanOut);
        }
        self.topological_order().map_err(StructureError::Cyclic)?;
        // The empty automaton's sink is legitimately cut off from its source.
        let empty = self.transitions == 0;
        let forward = self.closure(self.source, |node| &node.fan_out);
        if let Some(n) = self
            .states()
            .find(|&n| !forward.contains(&n) && !(empty && n == self.sink))
        {
            return Err(StructureError::Unreachable(n));
        }
        let backward = self.closure(self.sink, |node| &node.fan_in);
        if let Some(n) = self
            .states()
            .find(|&n| !backward.contains(&n) && !(empty && n == self.source))
        {
            return Err(StructureError::Dead(n));
        }
        Ok(())
    }

    fn closure(&self, start: StateId, edges: impl Fn(&Node) -> &FanSet) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            for &(_, m) in edges(self.node(n)) {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    }

    /// Label sequences of all successions from `n` to the sink.
    /// The sink's right language is `{ε}`.
    pub fn right_language(&self, n: StateId) -> Result<BTreeSet<Vec<Symbol>>, AutomatonError> {
        self.require(n)?;
        let mut memo = HashMap::new();
        Ok(self.fragments(n, Direction::Down, &mut memo))
    }

    /// Label sequences of all successions from the source to `n`.
    /// The source's left language is `{ε}`.
    pub fn left_language(&self, n: StateId) -> Result<BTreeSet<Vec<Symbol>>, AutomatonError> {
        self.require(n)?;
        let mut memo = HashMap::new();
        Ok(self.fragments(n, Direction::Up, &mut memo))
    }

    fn fragments(
        &self,
        n: StateId,
        dir: Direction,
        memo: &mut HashMap<StateId, BTreeSet<Vec<Symbol>>>,
    ) -> BTreeSet<Vec<Symbol>> {
        if let Some(done) = memo.get(&n) {
            return done.clone();
        }
        let (end, edges) = match dir {
            Direction::Down => (self.sink, &self.node(n).fan_out),
            Direction::Up => (self.source, &self.node(n).fan_in),
        };
        let mut out = BTreeSet::new();
        if n == end {
            out.insert(Vec::new());
        }
        for &(label, m) in edges {
            for rest in self.fragments(m, dir, memo) {
                let mut w = Vec::with_capacity(rest.len() + 1);
                match dir {
                    Direction::Down => {
                        w.push(label);
                        w.extend(rest);
                    }
                    Direction::Up => {
                        w.extend(rest);
                        w.push(label);
                    }
                }
                out.insert(w);
            }
        }
        memo.insert(n, out.clone());
        out
    }

    /// Every word stored in the automaton, in lexicographic order.
    pub fn language(&self) -> BTreeSet<Word> {
        let mut memo = HashMap::new();
        self.fragments(self.source, Direction::Down, &mut memo)
            .into_iter()
            .map(Word)
            .collect()
    }

    /// Membership by simulating the state-set frontier.
    pub fn contains(&self, word: &Word) -> bool {
        let mut frontier = BTreeSet::from([self.source]);
        for &s in word.symbols() {
            frontier = frontier
                .iter()
                .flat_map(|&n| self.successors_on(n, s))
                .collect();
            if frontier.is_empty() {
                return false;
            }
        }
        frontier.contains(&self.sink)
    }

    /// Membership for a raw string; the empty string is rejected.
    pub fn accepts(&self, word: &str) -> Result<bool, AutomatonError> {
        let w: Word = word.parse()?;
        Ok(self.contains(&w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
}

fn sorted_entries(set: &FanSet) -> Vec<FanEntry> {
    let mut v: Vec<FanEntry> = set
        .iter()
        .map(|&(label, state)| FanEntry { state, label })
        .collect();
    v.sort_unstable();
    v
}

fn label_range(set: &FanSet, label: Symbol) -> impl Iterator<Item = StateId> + '_ {
    set.range((label, StateId(0))..=(label, StateId(u32::MAX)))
        .map(|&(_, n)| n)
}

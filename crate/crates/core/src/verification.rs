//! Similarity, equivalence and compactness checks.
//!
//! Two states are down-similar (up-similar) when their fan-out (fan-in) sets
//! are equal, and down-equivalent (up-equivalent) when their right (left)
//! languages are equal. An automaton is compact when no pair of states is
//! equivalent, which holds exactly when no pair is similar. Both checkers are
//! provided so that the two verdicts can be compared against each other.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::automaton::{Automaton, FanSet, StateId, Symbol};
use crate::error::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("a state pair needs two distinct states, got {0} twice")]
    SameState(StateId),
    #[error("states {0} are not {1}")]
    NotEquivalent(StatePair, Direction),
}

/// An unordered pair of distinct states, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatePair {
    a: StateId,
    b: StateId,
}

impl StatePair {
    pub fn new(a: StateId, b: StateId) -> Result<Self, VerifyError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(StatePair { a, b }),
            std::cmp::Ordering::Greater => Ok(StatePair { a: b, b: a }),
            std::cmp::Ordering::Equal => Err(VerifyError::SameState(a)),
        }
    }

    pub fn first(&self) -> StateId {
        self.a
    }

    pub fn second(&self) -> StateId {
        self.b
    }
}

impl fmt::Display for StatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// Towards the sink (`Down`, right languages and fan-out sets) or towards the
/// source (`Up`, left languages and fan-in sets).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Down,
    Up,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Down => write!(f, "down-equivalent"),
            Direction::Up => write!(f, "up-equivalent"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    UpSimilar,
    DownSimilar,
    UpEquivalent,
    DownEquivalent,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::UpSimilar => "up-similar",
            RelationKind::DownSimilar => "down-similar",
            RelationKind::UpEquivalent => "up-equivalent",
            RelationKind::DownEquivalent => "down-equivalent",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub pair: StatePair,
    pub kind: RelationKind,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states {} are {}", self.pair, self.kind)
    }
}

/// Outcome of a compactness check; compact iff there is no witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactnessReport {
    pub compact: bool,
    pub witness: Option<Witness>,
}

impl CompactnessReport {
    fn from_witness(witness: Option<Witness>) -> Self {
        CompactnessReport {
            compact: witness.is_none(),
            witness,
        }
    }
}

fn require_pair(a: &Automaton, p: StatePair) -> Result<(), VerifyError> {
    for n in [p.a, p.b] {
        if !a.has_state(n) {
            return Err(AutomatonError::UnknownState(n).into());
        }
    }
    Ok(())
}

pub fn down_similar(a: &Automaton, p: StatePair) -> Result<bool, VerifyError> {
    require_pair(a, p)?;
    Ok(a.fan_out_set(p.a) == a.fan_out_set(p.b))
}

pub fn up_similar(a: &Automaton, p: StatePair) -> Result<bool, VerifyError> {
    require_pair(a, p)?;
    Ok(a.fan_in_set(p.a) == a.fan_in_set(p.b))
}

pub fn down_equivalent(a: &Automaton, p: StatePair) -> Result<bool, VerifyError> {
    require_pair(a, p)?;
    let mut index = LanguageIndex::new(a, Direction::Down);
    Ok(index.state_id(p.a) == index.state_id(p.b))
}

pub fn up_equivalent(a: &Automaton, p: StatePair) -> Result<bool, VerifyError> {
    require_pair(a, p)?;
    let mut index = LanguageIndex::new(a, Direction::Up);
    Ok(index.state_id(p.a) == index.state_id(p.b))
}

/// Canonical identifier of a language, valid within one [`LanguageIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageId(u32);

/// Assigns canonical ids to the right (or left) languages of states.
///
/// The language of a set of states is interned by its acceptance flag and
/// the ids of its per-symbol derivatives, so equal languages get equal ids
/// and the comparison never needs to materialize a word set. Results are
/// memoized per state set.
pub struct LanguageIndex<'a> {
    a: &'a Automaton,
    dir: Direction,
    by_set: HashMap<Vec<StateId>, LanguageId>,
    register: HashMap<(bool, Vec<(Symbol, LanguageId)>), LanguageId>,
    empty: LanguageId,
}

impl<'a> LanguageIndex<'a> {
    pub fn new(a: &'a Automaton, dir: Direction) -> Self {
        let mut register = HashMap::new();
        let empty = LanguageId(0);
        register.insert((false, Vec::new()), empty);
        LanguageIndex {
            a,
            dir,
            by_set: HashMap::new(),
            register,
            empty,
        }
    }

    /// Id of the right (`Down`) or left (`Up`) language of `n`.
    pub fn state_id(&mut self, n: StateId) -> LanguageId {
        self.set_id(vec![n])
    }

    /// `set` must be sorted and duplicate-free.
    fn set_id(&mut self, set: Vec<StateId>) -> LanguageId {
        if let Some(&id) = self.by_set.get(&set) {
            return id;
        }
        let (end, dir) = (
            match self.dir {
                Direction::Down => self.a.sink(),
                Direction::Up => self.a.source(),
            },
            self.dir,
        );
        let accepting = set.contains(&end);
        let mut by_label: BTreeMap<Symbol, BTreeSet<StateId>> = BTreeMap::new();
        for &n in &set {
            let edges: &FanSet = match dir {
                Direction::Down => self.a.fan_out_set(n),
                Direction::Up => self.a.fan_in_set(n),
            };
            for &(label, m) in edges {
                by_label.entry(label).or_default().insert(m);
            }
        }
        let mut children = Vec::with_capacity(by_label.len());
        for (label, targets) in by_label {
            let child = self.set_id(targets.into_iter().collect());
            if child != self.empty {
                children.push((label, child));
            }
        }
        let next = LanguageId(self.register.len() as u32);
        let id = *self.register.entry((accepting, children)).or_insert(next);
        self.by_set.insert(set, id);
        id
    }
}

/// Compactness via similarity search: states are grouped by their exact
/// fan-out and fan-in sets, so only genuinely similar states ever meet. All
/// down-similar pairs are looked for before any up-similar one; the witness
/// is the first pair found in ascending state order.
pub fn check_compact_by_similarity(a: &Automaton) -> CompactnessReport {
    // The source never takes part in a down-similar pair of a well-formed
    // automaton, nor the sink in an up-similar one. Skipping them keeps the
    // empty automaton, whose endpoints both have empty fan sets, compact.
    let passes = [
        (RelationKind::DownSimilar, a.source()),
        (RelationKind::UpSimilar, a.sink()),
    ];
    for (kind, skip) in passes {
        let mut seen: HashMap<&FanSet, StateId> = HashMap::new();
        for n in a.states().filter(|&n| n != skip) {
            let fan = match kind {
                RelationKind::DownSimilar => a.fan_out_set(n),
                _ => a.fan_in_set(n),
            };
            if let Some(&m) = seen.get(fan) {
                return CompactnessReport::from_witness(Some(Witness {
                    pair: StatePair { a: m, b: n },
                    kind,
                }));
            }
            seen.insert(fan, n);
        }
    }
    CompactnessReport::from_witness(None)
}

/// Compactness straight from the definition: no two states share a right
/// language or a left language. Cost grows with the size of the
/// determinized sub-automata, so this is meant for small automata.
pub fn check_compact_by_equivalence(a: &Automaton) -> CompactnessReport {
    let mut down = LanguageIndex::new(a, Direction::Down);
    let mut up = LanguageIndex::new(a, Direction::Up);
    let mut seen_down: HashMap<LanguageId, StateId> = HashMap::new();
    let mut seen_up: HashMap<LanguageId, StateId> = HashMap::new();
    for n in a.states() {
        let d = down.state_id(n);
        if let Some(&m) = seen_down.get(&d) {
            return CompactnessReport::from_witness(Some(Witness {
                pair: StatePair { a: m, b: n },
                kind: RelationKind::DownEquivalent,
            }));
        }
        let u = up.state_id(n);
        if let Some(&m) = seen_up.get(&u) {
            return CompactnessReport::from_witness(Some(Witness {
                pair: StatePair { a: m, b: n },
                kind: RelationKind::UpEquivalent,
            }));
        }
        seen_down.insert(d, n);
        seen_up.insert(u, n);
    }
    CompactnessReport::from_witness(None)
}

/// Every equivalent pair, tagged with each relation it satisfies.
pub fn equivalent_pairs(a: &Automaton) -> Vec<Witness> {
    let states: Vec<StateId> = a.states().collect();
    let mut out = Vec::new();
    for (dir, kind) in [
        (Direction::Down, RelationKind::DownEquivalent),
        (Direction::Up, RelationKind::UpEquivalent),
    ] {
        let mut index = LanguageIndex::new(a, dir);
        let mut classes: BTreeMap<LanguageId, Vec<StateId>> = BTreeMap::new();
        for &n in &states {
            classes.entry(index.state_id(n)).or_default().push(n);
        }
        for members in classes.values() {
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    out.push(Witness {
                        pair: StatePair { a: x, b: y },
                        kind,
                    });
                }
            }
        }
    }
    out.sort_by_key(|w| (w.pair, w.kind));
    out
}

/// Re-validates a witness with the matching pair predicate.
pub fn witness_holds(a: &Automaton, w: &Witness) -> Result<bool, VerifyError> {
    match w.kind {
        RelationKind::DownSimilar => down_similar(a, w.pair),
        RelationKind::UpSimilar => up_similar(a, w.pair),
        RelationKind::DownEquivalent => down_equivalent(a, w.pair),
        RelationKind::UpEquivalent => up_equivalent(a, w.pair),
    }
}

/// For an equivalent pair, checks that the pair is similar or that, for each
/// shared label, every pair of distinct neighbors reached over that label is
/// itself equivalent in the same direction.
pub fn neighbor_equivalence_check(
    a: &Automaton,
    p: StatePair,
    dir: Direction,
) -> Result<bool, VerifyError> {
    require_pair(a, p)?;
    let mut index = LanguageIndex::new(a, dir);
    if index.state_id(p.a) != index.state_id(p.b) {
        return Err(VerifyError::NotEquivalent(p, dir));
    }
    let fans = |n: StateId| -> &FanSet {
        match dir {
            Direction::Down => a.fan_out_set(n),
            Direction::Up => a.fan_in_set(n),
        }
    };
    let (fa, fb) = (fans(p.a), fans(p.b));
    if fa == fb {
        return Ok(true);
    }
    let labels = |f: &FanSet| f.iter().map(|&(s, _)| s).collect::<BTreeSet<_>>();
    if labels(fa) != labels(fb) {
        return Ok(false);
    }
    for &(label, x) in fa {
        for &(other, y) in fb {
            if other != label || x == y {
                continue;
            }
            if index.state_id(x) != index.state_id(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

//! Signature minimization checked against Moore partition refinement.

use std::collections::{BTreeMap, BTreeSet};

use compact_nfa::{build_minimal_dfa, Dfa, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of Myhill–Nerode classes among the states of `d` that accept
/// something, plus the number of transitions between such classes, by
/// iterated refinement starting from the final/non-final split.
fn moore(d: &Dfa) -> (usize, usize) {
    let n = d.state_count();
    // states with an empty right language are dropped, as in a trim DFA
    let mut live = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if !live[s] && (d.is_final(s) || d.transitions(s).any(|(_, t)| live[t])) {
                live[s] = true;
                changed = true;
            }
        }
    }
    let mut class: Vec<usize> = (0..n).map(|s| d.is_final(s) as usize).collect();
    loop {
        let mut ids: BTreeMap<(usize, Vec<(Symbol, usize)>), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let sig: Vec<(Symbol, usize)> = d
                    .transitions(s)
                    .filter(|&(_, t)| live[t])
                    .map(|(l, t)| (l, class[t]))
                    .collect();
                let len = ids.len();
                *ids.entry((class[s], sig)).or_insert(len)
            })
            .collect();
        let before: BTreeSet<usize> = class.iter().copied().collect();
        let after: BTreeSet<usize> = next.iter().copied().collect();
        class = next;
        if before.len() == after.len() {
            break;
        }
    }
    let live_classes: BTreeSet<usize> = (0..n).filter(|&s| live[s]).map(|s| class[s]).collect();
    let mut edges = BTreeSet::new();
    for s in (0..n).filter(|&s| live[s]) {
        for (l, t) in d.transitions(s).filter(|&(_, t)| live[t]) {
            edges.insert((class[s], l, class[t]));
        }
    }
    (live_classes.len().max(1), edges.len())
}

fn random_words(rng: &mut ChaCha8Rng) -> Vec<String> {
    let k = rng.gen_range(2..=6u8);
    let count = rng.gen_range(0..=50);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=8);
            (0..len)
                .map(|_| (b'a' + rng.gen_range(0..k)) as char)
                .collect()
        })
        .collect()
}

#[test]
fn signature_minimization_matches_partition_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let words = random_words(&mut rng);
        let parsed: Vec<Word> = words.iter().map(|w| w.parse().unwrap()).collect();
        let trie = Dfa::trie(&parsed);
        let min = build_minimal_dfa(&words).unwrap();
        assert_eq!(
            (min.state_count(), min.transition_count()),
            moore(&trie),
            "{words:?}"
        );
        assert_eq!(moore(&min), (min.state_count(), min.transition_count()));
        let expected: BTreeSet<Word> = parsed.into_iter().collect();
        assert_eq!(min.language(), expected);
    }
}

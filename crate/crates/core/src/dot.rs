//! Graphviz export.

use std::fmt::Write as _;

use crate::automaton::Automaton;

/// Renders the automaton as a `digraph`. Nodes appear in ascending id order
/// and edges sorted by `(from, to, label)`, so the output is deterministic.
pub fn to_dot(a: &Automaton) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for n in a.states() {
        let attrs = if n == a.source() {
            " [shape=doublecircle, style=filled, fillcolor=lightgray, label=\"source\"]"
        } else if n == a.sink() {
            " [shape=doublecircle, label=\"sink\"]"
        } else {
            ""
        };
        let _ = writeln!(out, "  {n}{attrs};");
    }
    for t in a.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            t.from,
            t.to,
            escape(t.label.as_char())
        );
    }
    out.push_str("}\n");
    out
}

fn escape(c: char) -> String {
    match c {
        '"' => "\\\"".into(),
        '\\' => "\\\\".into(),
        '\n' => "\\n".into(),
        c => c.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insertion::build_lexicon;

    #[test]
    fn empty_automaton_has_two_nodes() {
        let dot = to_dot(&Automaton::new());
        assert_eq!(dot.matches("->").count(), 0);
        assert!(dot.contains("  0 [shape=doublecircle, style=filled"));
        assert!(dot.contains("  1 [shape=doublecircle, label=\"sink\"]"));
    }

    #[test]
    fn edges_and_escaping() {
        let (a, _) = build_lexicon(&["a\"b"]).unwrap();
        let dot = to_dot(&a);
        assert!(dot.contains("[label=\"\\\"\"]"));
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(dot, to_dot(&a));
    }
}

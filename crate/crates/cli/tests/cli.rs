use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use compact_nfa::{attach_word, build_lexicon, sourceward_pass, to_nfav1, Automaton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cnfa(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_cnfa"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_words(dir: &TempDir, name: &str, words: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut text = words.join("\n");
    text.push('\n');
    fs::write(&path, text).unwrap();
    path
}

fn build_file(dir: &TempDir, name: &str, words: &[&str]) -> PathBuf {
    let input = write_words(dir, &format!("{name}.txt"), words);
    let output = dir.path().join(format!("{name}.nfa"));
    let r = cnfa(&["build", p(&input), p(&output)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    output
}

fn stat(stdout: &str, key: &str) -> usize {
    stdout
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {stdout:?}"))
        .parse()
        .unwrap()
}

const SIX_WORDS: [&str; 6] = ["cut", "chat", "chop", "chip", "flat", "flip"];
const FIVE_WORDS: [&str; 5] = ["dance", "darts", "dart", "start", "smart"];

#[test]
fn build_order_changes_state_count() {
    let dir = TempDir::new().unwrap();
    let input = write_words(&dir, "w.txt", &["in", "it", "at", "on"]);
    let out = dir.path().join("a.nfa");
    let given = cnfa(&["build", p(&input), p(&out), "--order", "given"]);
    assert_eq!(given.stdout.trim(), "words=4 states=5 transitions=7");
    let reordered = write_words(&dir, "r.txt", &["in", "on", "at", "it"]);
    let better = cnfa(&["build", p(&reordered), p(&out)]);
    assert_eq!(better.stdout.trim(), "words=4 states=4 transitions=6");
}

#[test]
fn build_empty_file_and_blank_lines() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let out = dir.path().join("e.nfa");
    let r = cnfa(&["build", p(&empty), p(&out)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "words=0 states=2 transitions=0");
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        to_nfav1(&Automaton::new())
    );

    let blanks = dir.path().join("blanks.txt");
    fs::write(&blanks, "in\n\nit\r\n\nat\n").unwrap();
    let r = cnfa(&["build", p(&blanks), p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(stat(&r.stdout, "words"), 3);
}

#[test]
fn build_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.nfa");
    let missing = dir.path().join("missing.txt");
    assert_eq!(cnfa(&["build", p(&missing), p(&out)]).code, 2);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "in\n   \nat\n").unwrap();
    let r = cnfa(&["build", p(&bad), p(&out)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert!(!out.exists());
}

#[test]
fn build_is_deterministic_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let input = write_words(&dir, "w.txt", &FIVE_WORDS);
    let (a, b) = (dir.path().join("a.nfa"), dir.path().join("b.nfa"));
    for out in [&a, &b] {
        let r = cnfa(&[
            "build",
            p(&input),
            p(out),
            "--order",
            "shuffled",
            "--seed",
            "42",
        ]);
        assert_eq!(r.code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let sorted = cnfa(&["build", p(&input), p(&a), "--order", "sorted"]);
    assert_eq!(sorted.code, 0);
    let words: Vec<String> = cnfa(&["enumerate", p(&a)])
        .stdout
        .lines()
        .map(str::to_string)
        .collect();
    assert_eq!(words, ["dance", "dart", "darts", "smart", "start"]);
}

#[test]
fn add_flop_then_verify() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "six", &SIX_WORDS);
    let r = cnfa(&["add", p(&file), "flop"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("already_present=false"));
    assert!(r.stdout.contains("net_state_delta=-1"), "{}", r.stdout);
    assert!(r.stdout.contains("states=7 transitions=10"), "{}", r.stdout);
    let mut seven: Vec<&str> = SIX_WORDS.to_vec();
    seven.push("flop");
    let words = write_words(&dir, "seven.txt", &seven);
    let v = cnfa(&["verify", p(&file), "--words", p(&words)]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    for check in [
        "structure",
        "acyclic",
        "similarity",
        "equivalence",
        "language",
    ] {
        assert!(v.stdout.contains(&format!("PASS {check}")), "{}", v.stdout);
    }
    assert_eq!(cnfa(&["enumerate", p(&file)]).stdout.lines().count(), 7);
}

#[test]
fn add_existing_and_add_to_empty() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "six", &SIX_WORDS);
    let before = fs::read(&file).unwrap();
    let r = cnfa(&["add", p(&file), "chip"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("already_present=true"));
    assert!(r.stdout.contains("net_state_delta=0"));
    assert_eq!(fs::read(&file).unwrap(), before);

    let empty = build_file(&dir, "empty", &[]);
    let r = cnfa(&["add", p(&empty), "cat"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("states_created=2"));
    assert!(r.stdout.contains("states=4 transitions=3"));
    assert_eq!(cnfa(&["add", p(&empty), ""]).code, 3);
    let garbage = dir.path().join("garbage.nfa");
    fs::write(&garbage, "not an automaton\n").unwrap();
    assert_eq!(cnfa(&["add", p(&garbage), "x"]).code, 2);
    assert_eq!(fs::read_to_string(&garbage).unwrap(), "not an automaton\n");
}

#[test]
fn query_exit_codes() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "five", &FIVE_WORDS);
    let found = cnfa(&["query", p(&file), "start"]);
    assert_eq!((found.code, found.stdout.trim()), (0, "FOUND"));
    let missing = cnfa(&["query", p(&file), "star"]);
    assert_eq!((missing.code, missing.stdout.trim()), (1, "NOT FOUND"));
    assert_eq!(cnfa(&["query", p(&file), ""]).code, 3);
    assert_eq!(
        cnfa(&["query", p(&dir.path().join("nope.nfa")), "x"]).code,
        2
    );
}

#[test]
fn verify_reports_witness_for_uncompacted_file() {
    let dir = TempDir::new().unwrap();
    // the duplicated suffix is left in place by running only the sourceward pass
    let (mut a, _) = build_lexicon(&SIX_WORDS).unwrap();
    let mut mp = attach_word(&mut a, &"flop".parse().unwrap());
    sourceward_pass(&mut a, &mut mp).unwrap();
    let file = dir.path().join("corrupt.nfa");
    fs::write(&file, to_nfav1(&a)).unwrap();
    let r = cnfa(&["verify", p(&file)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("PASS structure"));
    assert!(r.stdout.contains("FAIL similarity: states"), "{}", r.stdout);
    assert!(r.stdout.contains("down-similar"), "{}", r.stdout);
    assert!(r.stdout.contains("FAIL equivalence"));

    let skipped = cnfa(&["verify", p(&file), "--equivalence-threshold", "3"]);
    assert!(skipped.stdout.contains("SKIP equivalence"));

    let empty = build_file(&dir, "empty", &[]);
    assert_eq!(cnfa(&["verify", p(&empty)]).code, 0);
}

#[test]
fn verify_language_mismatch_and_cycles() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "five", &FIVE_WORDS);
    let other = write_words(&dir, "other.txt", &["dance", "darts"]);
    let r = cnfa(&["verify", p(&file), "--words", p(&other)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL language: unexpected word"));

    let cyclic = dir.path().join("cyclic.nfa");
    fs::write(
        &cyclic,
        "NFAv1\nsource 0\nsink 1\nstates 4\n0\n1\n2\n3\ntransitions 4\n0 2 U+0061\n2 1 U+0062\n2 3 U+0063\n3 2 U+0064\n",
    )
    .unwrap();
    let r = cnfa(&["verify", p(&cyclic), "--words", p(&other)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL acyclic"));
    assert!(r.stdout.contains("SKIP equivalence"));
    assert!(r.stdout.contains("SKIP language"));
    assert_eq!(cnfa(&["enumerate", p(&cyclic)]).code, 2);
    assert_eq!(cnfa(&["query", p(&cyclic), "ab"]).code, 2);
}

#[test]
fn enumerate_outputs() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "five", &FIVE_WORDS);
    let r = cnfa(&["enumerate", p(&file)]);
    assert_eq!(r.stdout, "dance\ndart\ndarts\nsmart\nstart\n");
    let empty = build_file(&dir, "empty", &[]);
    let r = cnfa(&["enumerate", p(&empty)]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
}

#[test]
fn enumerate_round_trips_random_corpora() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100 {
        let k = rng.gen_range(2..=6u8);
        let words: Vec<String> = (0..rng.gen_range(1..=40))
            .map(|_| {
                (0..rng.gen_range(1..=7))
                    .map(|_| (b'a' + rng.gen_range(0..k)) as char)
                    .collect()
            })
            .collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let file = build_file(&dir, &format!("c{i}"), &refs);
        let got: BTreeSet<String> = cnfa(&["enumerate", p(&file)])
            .stdout
            .lines()
            .map(str::to_string)
            .collect();
        let want: BTreeSet<String> = words.into_iter().collect();
        assert_eq!(got, want);
    }
}

#[test]
fn bench_rows_and_sizes() {
    let dir = TempDir::new().unwrap();
    let corpus = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/english-20k.txt"
    ))
    .unwrap();
    let words: Vec<&str> = corpus.lines().take(10_000).collect();
    let input = write_words(&dir, "10k.txt", &words);
    let csv = dir.path().join("g.csv");
    let r = cnfa(&[
        "bench",
        p(&input),
        "--step",
        "1000",
        "--csv",
        p(&csv),
        "--compare-dfa",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("slope_time="));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let header: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    assert_eq!(
        header,
        [
            "words",
            "nfa_states",
            "nfa_transitions",
            "dfa_states",
            "dfa_transitions",
            "cumulative_us"
        ]
    );
    let rows: Vec<Vec<u64>> = reader
        .records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    assert!(rows
        .windows(2)
        .all(|w| w[0][0] < w[1][0] && w[0][5] <= w[1][5]));
    let last = rows.last().unwrap();
    assert_eq!(last[0], 10_000);
    assert!(last[1] <= last[3]);

    let small = write_words(&dir, "small.txt", &["in", "it", "at"]);
    let r = cnfa(&[
        "bench",
        p(&small),
        "--step",
        "100",
        "--csv",
        p(&csv),
        "--verify-each",
    ]);
    assert_eq!(r.code, 0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("3,4,5,,,"), "{}", lines[1]);
    assert_eq!(
        cnfa(&["bench", p(&small), "--step", "0", "--csv", p(&csv)]).code,
        3
    );
}

#[test]
fn bench_size_columns_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = write_words(&dir, "w.txt", &FIVE_WORDS);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let r = cnfa(&[
            "bench",
            p(&input),
            "--step",
            "2",
            "--csv",
            p(out),
            "--compare-dfa",
            "--single-sink",
        ]);
        assert_eq!(r.code, 0);
    }
    let sizes = |path: &Path| -> Vec<String> {
        fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(sizes(&a), sizes(&b));
    assert_eq!(
        cnfa(&["bench", p(&input), "--csv", p(&a), "--single-sink"]).code,
        3
    );
}

#[test]
fn export_dot_outputs() {
    let dir = TempDir::new().unwrap();
    let empty = build_file(&dir, "empty", &[]);
    let dot = cnfa(&["export-dot", p(&empty)]).stdout;
    assert!(dot.contains("0 [") && dot.contains("1 ["));
    assert!(!dot.contains("->"));

    let a = build_file(&dir, "a", &["in", "it", "at", "on"]);
    let b = build_file(&dir, "b", &["in", "on", "at", "it"]);
    let nodes = |dot: &str| {
        dot.lines()
            .filter(|l| {
                l.trim_start().starts_with(|c: char| c.is_ascii_digit()) && !l.contains("->")
            })
            .count()
    };
    let (da, db) = (
        cnfa(&["export-dot", p(&a)]).stdout,
        cnfa(&["export-dot", p(&b)]).stdout,
    );
    assert_eq!((nodes(&da), nodes(&db)), (5, 4));
    assert_eq!(da, cnfa(&["export-dot", p(&a)]).stdout);
}

#[test]
fn usage_and_help() {
    assert_eq!(cnfa(&["--help"]).code, 0);
    assert_eq!(cnfa(&["--version"]).code, 0);
    assert_eq!(cnfa(&[]).code, 3);
    assert_eq!(cnfa(&["frobnicate"]).code, 3);
    assert_eq!(cnfa(&["build", "only-one-arg"]).code, 3);
    assert_eq!(cnfa(&["build", "a", "b", "--order", "random"]).code, 3);
}

#[test]
fn build_save_load_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let words = ["alpha", "beta", "gamma", "delta", "alphabet", "bet"];
    let input = write_words(&dir, "w.txt", &words);
    let file = dir.path().join("r.nfa");
    let built = cnfa(&["build", p(&input), p(&file)]);
    let (states, transitions) = (
        stat(&built.stdout, "states"),
        stat(&built.stdout, "transitions"),
    );
    let v = cnfa(&["verify", p(&file), "--words", p(&input)]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    let (a, _) = build_lexicon(&words).unwrap();
    assert_eq!(
        (a.state_count(), a.transition_count()),
        (states, transitions)
    );
    assert_eq!(fs::read_to_string(&file).unwrap(), to_nfav1(&a));
}

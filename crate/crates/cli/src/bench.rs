//! Growth benchmark: insert a word list one word at a time and sample the
//! automaton size (and optionally the minimal DFA size) every `step` words.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use compact_nfa::{
    check_compact_by_similarity, insert_word, Automaton, Dfa, SizeConvention, Witness, Word,
};
use serde::Serialize;

use crate::{out_err, read_words, CliError};

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRecord {
    #[serde(rename = "words")]
    pub words_inserted: usize,
    pub nfa_states: usize,
    pub nfa_transitions: usize,
    pub dfa_states: Option<usize>,
    pub dfa_transitions: Option<usize>,
    #[serde(rename = "cumulative_us")]
    pub cumulative_insert_micros: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub step: usize,
    /// Rebuild the minimal DFA at every sample point, sized with this convention.
    pub compare_dfa: Option<SizeConvention>,
    /// Run the similarity check at every sample point.
    pub verify_each: bool,
}

#[derive(Debug, Clone, Default)]
pub struct BenchRun {
    pub records: Vec<GrowthRecord>,
    /// Sample points where the similarity check found a witness.
    pub failures: Vec<(usize, Witness)>,
    pub automaton: Automaton,
}

/// Inserts `words` in order. Only the insertion calls are timed.
pub fn run_bench(words: &[Word], config: BenchConfig) -> BenchRun {
    let step = config.step.max(1);
    let mut run = BenchRun::default();
    let mut elapsed = Duration::ZERO;
    for (i, w) in words.iter().enumerate() {
        let started = Instant::now();
        insert_word(&mut run.automaton, w).expect("insertion invariants hold");
        elapsed += started.elapsed();
        let inserted = i + 1;
        if inserted % step != 0 && inserted != words.len() {
            continue;
        }
        let a = &run.automaton;
        let dfa = config
            .compare_dfa
            .map(|c| Dfa::trie(&words[..inserted]).minimize().size(c));
        run.records.push(GrowthRecord {
            words_inserted: inserted,
            nfa_states: a.state_count(),
            nfa_transitions: a.transition_count(),
            dfa_states: dfa.map(|d| d.0),
            dfa_transitions: dfa.map(|d| d.1),
            cumulative_insert_micros: elapsed.as_micros() as u64,
        });
        if config.verify_each {
            if let Some(w) = check_compact_by_similarity(a).witness {
                run.failures.push((inserted, w));
            }
        }
    }
    run
}

/// Least-squares slope of `ln y` against `ln x`, over points with both
/// coordinates positive. `None` with fewer than two usable points.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slopes {
    pub states: Option<f64>,
    pub transitions: Option<f64>,
    pub time: Option<f64>,
}

pub fn slopes(records: &[GrowthRecord]) -> Slopes {
    let series = |f: &dyn Fn(&GrowthRecord) -> f64| -> Vec<(f64, f64)> {
        records
            .iter()
            .map(|r| (r.words_inserted as f64, f(r)))
            .collect()
    };
    Slopes {
        states: fit_slope(&series(&|r| r.nfa_states as f64)),
        transitions: fit_slope(&series(&|r| r.nfa_transitions as f64)),
        time: fit_slope(&series(&|r| r.cumulative_insert_micros as f64)),
    }
}

fn fmt_slope(s: Option<f64>) -> String {
    s.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

pub fn write_csv(path: &Path, records: &[GrowthRecord]) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    if records.is_empty() {
        w.write_record([
            "words",
            "nfa_states",
            "nfa_transitions",
            "dfa_states",
            "dfa_transitions",
            "cumulative_us",
        ])
        .map_err(csv_err)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn bench(
    input: &Path,
    csv_path: &Path,
    config: BenchConfig,
    out: &mut impl Write,
) -> Result<bool, CliError> {
    if config.step == 0 {
        return Err(CliError::Usage("--step must be at least 1".into()));
    }
    let list = read_words(input)?;
    let run = run_bench(&list.words, config);
    write_csv(csv_path, &run.records)?;
    for (at, w) in &run.failures {
        writeln!(out, "FAIL similarity after {at} words: {w}").map_err(out_err)?;
    }
    let s = slopes(&run.records);
    let last = run.records.last();
    let dfa = last
        .and_then(|r| r.dfa_states.zip(r.dfa_transitions))
        .map_or_else(String::new, |(s, t)| {
            format!(" dfa_states={s} dfa_transitions={t}")
        });
    writeln!(
        out,
        "rows={} words={} states={} transitions={}{dfa} slope_states={} slope_transitions={} slope_time={}",
        run.records.len(),
        list.len(),
        run.automaton.state_count(),
        run.automaton.transition_count(),
        fmt_slope(s.states),
        fmt_slope(s.transitions),
        fmt_slope(s.time),
    )
    .map_err(out_err)?;
    Ok(run.failures.is_empty())
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! cargo test -p uzstem --test acceptance

use std::collections::BTreeSet;
use std::io::{BufWriter, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uzstem::fsm::{Nfa, StateId};
use uzstem::oracle::enumerate_segmentations_oracle;
use uzstem::synth::{random_letters, synthesize};
use uzstem::{AffixClass, AffixClass::*, Analysis, Analyzer, AnalyzerConfig, Inventory, MorphotacticGraph};

const INVENTORY_LIMIT: Duration = Duration::from_secs(1);
const PIPELINE_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_WORDS: usize = 10_000;
const RECOVERY_WORDS: usize = 10_000;
const RECOVERY_MIN: f64 = 0.99;
const STREAM_TOKENS_SMALL: usize = 100_000;
const STREAM_TOKENS_LARGE: usize = 1_000_000;
/// Peak RSS of the large run may exceed the small run by at most this much.
const STREAM_RSS_SLACK_KB: i64 = 8 * 1024;
const MAX_WORD_LEN: usize = 12;
const SEED: u64 = 20_240_611;

struct Report {
    failures: usize,
    lines: Vec<(u8, String)>,
}

impl Report {
    fn line(&mut self, n: u8, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        self.lines.push((n, format!("{} {n}. {name}: {detail}", if ok { "PASS" } else { "FAIL" })));
    }

    fn note(&mut self, n: u8, text: String) {
        self.lines.push((n, format!("     {text}")));
    }

    fn print(&mut self) {
        self.lines.sort_by_key(|(n, _)| *n);
        for (_, l) in &self.lines {
            println!("{l}");
        }
        println!("{} of 7 criteria passed", 7 - self.failures);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

const TABLE_2: [(usize, usize); 7] = [(24, 27), (23, 41), (13, 23), (71, 81), (23, 31), (11, 12), (7, 7)];

fn inventory_counts(r: &mut Report) {
    let t = Instant::now();
    let inv = Inventory::shipped();
    let graph = MorphotacticGraph::shipped();
    let elapsed = t.elapsed();
    let report = inv.count_report();
    let pairs: Vec<(usize, usize)> = report.rows.iter().map(|c| (c.entries, c.allomorphs)).collect();
    let ok = pairs == TABLE_2
        && (report.total_entries, report.total_allomorphs) == (172, 222)
        && graph.inventory().entries().len() == 172
        && elapsed < INVENTORY_LIMIT;
    r.line(
        1,
        "inventory counts",
        ok,
        format!(
            "{} entries, {} allomorphs, per class {:?}, {}",
            report.total_entries,
            report.total_allomorphs,
            pairs,
            secs(elapsed)
        ),
    );
}

fn golden_analyses(r: &mut Report, an: &Analyzer, inputs: &mut Vec<String>) {
    type Golden = (&'static str, &'static str, &'static [(&'static str, AffixClass, &'static str)]);
    let goldens: [Golden; 5] = [
        (
            "bajartirilmayaptimi",
            "bajar",
            &[
                ("tir", RelativeVerb, "causative voice"),
                ("il", RelativeVerb, "passive voice"),
                ("ma", Verb, "negative verb"),
                ("yap", TensePerson, "continuous tense"),
                ("ti", TensePerson, "3rd single person"),
                ("mi", TensePerson, "question"),
            ],
        ),
        ("boryapsiz", "bor", &[("yap", TensePerson, "continuous tense"), ("siz", TensePerson, "2nd plural person")]),
        ("kitoblarim", "kitob", &[("lar", Noun, "plural"), ("im", Noun, "possessive 1sg")]),
        ("dadamlar", "dada", &[("m", Noun, "possessive 1sg"), ("lar", Noun, "greeting")]),
        ("dehqonchilik", "dehqon", &[("chilik", Derivational, "abstract noun")]),
    ];
    let mut bad = Vec::new();
    for (word, stem, suffixes) in goldens {
        inputs.push(word.to_string());
        let a = an.best(word);
        let got: Vec<(&str, AffixClass, &str)> =
            a.suffixes.iter().map(|m| (m.surface.as_str(), m.class, m.gloss.as_str())).collect();
        if a.stem != stem || a.prefix.is_some() || got != suffixes {
            bad.push(format!("{word} -> {}", a.segmented()));
        }
    }
    let detail = if bad.is_empty() { "5/5 exact".to_string() } else { format!("mismatches: {}", bad.join("; ")) };
    r.line(2, "golden analyses", bad.is_empty(), detail);
}

/// Label sequences of length <= k along explicit paths of `nfa`.
fn path_language<L: Ord + Clone>(nfa: &Nfa<L>, k: usize) -> BTreeSet<Vec<L>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(StateId, Vec<L>, Vec<StateId>)> = vec![(nfa.initial(), Vec::new(), vec![nfa.initial()])];
    while let Some((s, seq, eps_seen)) = stack.pop() {
        if nfa.finals().contains(&s) {
            out.insert(seq.clone());
        }
        for (from, label, to) in nfa.edges() {
            if *from != s {
                continue;
            }
            match label {
                None if !eps_seen.contains(to) => {
                    let mut seen = eps_seen.clone();
                    seen.push(*to);
                    stack.push((*to, seq.clone(), seen));
                }
                Some(l) if seq.len() < k => {
                    let mut next = seq.clone();
                    next.push(l.clone());
                    stack.push((*to, next, vec![*to]));
                }
                _ => {}
            }
        }
    }
    out
}

fn pipeline(r: &mut Report, graph: &MorphotacticGraph) {
    let t = Instant::now();
    let mut problems = Vec::new();
    let mut sizes = Vec::new();
    for c in AffixClass::ALL {
        let m = graph.machine(c);
        let rtl = m.rtl.enumerate_language(4);
        let ltr_rev: BTreeSet<_> =
            path_language(&m.ltr, 4).into_iter().map(|s| s.into_iter().rev().collect::<Vec<_>>()).collect();
        if rtl != ltr_rev {
            problems.push(format!("class {} language differs", c.id()));
        }
        let mut seen = BTreeSet::new();
        for (from, label, _) in m.rtl.edges() {
            if !seen.insert((from, label)) {
                problems.push(format!("class {} nondeterministic at {from}", c.id()));
            }
        }
        if m.rtl.to_nfa().has_epsilon() {
            problems.push(format!("class {} has epsilon edges", c.id()));
        }
        sizes.push(rtl.len());
    }
    let elapsed = t.elapsed();
    let ok = problems.is_empty() && elapsed < PIPELINE_LIMIT;
    let detail = if problems.is_empty() {
        format!("7 classes, sequences <= 4 per class {sizes:?}, deterministic, epsilon-free, {}", secs(elapsed))
    } else {
        problems.join("; ")
    };
    r.line(3, "pipeline correctness", ok, detail);
}

fn oracle_equivalence(r: &mut Report, an_all: &Analyzer, rng: &mut ChaCha8Rng, inputs: &mut Vec<String>) {
    let t = Instant::now();
    let mut words: Vec<String> = (0..ORACLE_WORDS).map(|_| random_letters(rng, MAX_WORD_LEN)).collect();
    words.extend((0..ORACLE_WORDS).map(|_| synthesize(an_all.graph(), rng, MAX_WORD_LEN, 0.1).word));
    let mut discrepancies = Vec::new();
    let mut analyses = 0;
    for w in &words {
        let got: BTreeSet<_> = an_all.analyze(w).iter().map(Analysis::key).collect();
        let want = enumerate_segmentations_oracle(w, an_all.inventory(), an_all.graph(), an_all.config().min_stem_len);
        analyses += want.len();
        if got != want {
            discrepancies.push(w.clone());
        }
    }
    let elapsed = t.elapsed();
    inputs.extend(words);
    let ok = discrepancies.is_empty() && elapsed < ORACLE_LIMIT;
    let mut detail = format!(
        "{} random + {} synthesized words, {analyses} analyses, {} discrepancies, {}",
        ORACLE_WORDS,
        ORACLE_WORDS,
        discrepancies.len(),
        secs(elapsed)
    );
    if !discrepancies.is_empty() {
        detail.push_str(&format!(" (first: {})", discrepancies.iter().take(5).cloned().collect::<Vec<_>>().join(", ")));
    }
    r.line(4, "oracle equivalence", ok, detail);
}

fn round_trip(r: &mut Report, an_all: &Analyzer, inputs: &[String]) {
    let mut total = 0;
    let mut bad = Vec::new();
    for w in inputs {
        for a in an_all.analyze(w) {
            total += 1;
            if a.surface() != *w {
                bad.push(format!("{w} -> {}", a.segmented()));
            }
        }
    }
    let detail = format!("{}/{total} analyses reconstruct their input", total - bad.len());
    r.line(5, "round-trip", bad.is_empty(), detail);
}

fn synthesis_recovery(r: &mut Report, an: &Analyzer, rng: &mut ChaCha8Rng, inputs: &mut Vec<String>) {
    let mut misses = Vec::new();
    for _ in 0..RECOVERY_WORDS {
        let s = synthesize(an.graph(), rng, MAX_WORD_LEN, 0.0);
        let best = an.best(&s.word);
        if best.stem != s.stem {
            let truth: Vec<&str> =
                std::iter::once(s.stem.as_str()).chain(s.suffixes.iter().map(|&x| an.graph().surface(x))).collect();
            misses.push(format!("{}: built {} analyzed {}", s.word, truth.join("-"), best.segmented()));
        }
        inputs.push(s.word);
    }
    let rate = 1.0 - misses.len() as f64 / RECOVERY_WORDS as f64;
    let detail = format!(
        "{}/{} stems recovered ({:.2}%, need {:.0}%)",
        RECOVERY_WORDS - misses.len(),
        RECOVERY_WORDS,
        100.0 * rate,
        100.0 * RECOVERY_MIN
    );
    r.line(6, "synthesis recovery", rate >= RECOVERY_MIN, detail);
    for m in misses {
        r.note(6, format!("miss {m}"));
    }
}

fn write_corpus(path: &std::path::Path, tokens: usize, vocab: &[String], rng: &mut ChaCha8Rng) {
    let mut out = BufWriter::new(std::fs::File::create(path).unwrap());
    for i in 0..tokens {
        let w = &vocab[rng.gen_range(0..vocab.len())];
        let sep = if i % 12 == 11 { "\n" } else { " " };
        write!(out, "{w}{sep}").unwrap();
    }
    writeln!(out).unwrap();
}

/// Run `uzstem stem` on a file and return (tokens out, peak RSS in KiB, wall time).
// The child is reaped by wait4 so its own rusage can be read.
#[allow(clippy::zombie_processes)]
fn stem_run(path: &std::path::Path) -> (usize, i64, Duration) {
    let t = Instant::now();
    let mut child = Command::new(env!("CARGO_BIN_EXE_uzstem"))
        .arg("stem")
        .arg(path)
        .env_remove(uzstem::cli::GRAMMAR_ENV)
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdout = child.stdout.take().unwrap();
    let mut buf = [0u8; 1 << 16];
    let mut lines = 0;
    loop {
        let n = std::io::Read::read(&mut stdout, &mut buf).unwrap();
        if n == 0 {
            break;
        }
        lines += buf[..n].iter().filter(|&&b| b == b'\n').count();
    }
    let mut status = 0;
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let pid = unsafe { libc::wait4(child.id() as libc::pid_t, &mut status, 0, &mut usage) };
    assert_eq!(pid, child.id() as libc::pid_t);
    assert!(libc::WIFEXITED(status) && libc::WEXITSTATUS(status) == 0, "stem run failed");
    (lines, usage.ru_maxrss, t.elapsed())
}

fn streaming(r: &mut Report, an: &Analyzer, rng: &mut ChaCha8Rng) {
    let dir = tempfile::tempdir().unwrap();
    let mut vocab: Vec<String> = (0..20_000).map(|_| synthesize(an.graph(), rng, 16, 0.05).word).collect();
    vocab.extend(
        ["bajartirilmayaptimi", "kitoblarim", "boryapsiz", "dadamlar", "dehqonchilik", "xyz123"].map(String::from),
    );
    let small = dir.path().join("small.txt");
    let large = dir.path().join("large.txt");
    write_corpus(&small, STREAM_TOKENS_SMALL, &vocab, rng);
    write_corpus(&large, STREAM_TOKENS_LARGE, &vocab, rng);
    let (small_n, small_rss, _) = stem_run(&small);
    let (large_n, large_rss, elapsed) = stem_run(&large);
    let ok = small_n == STREAM_TOKENS_SMALL
        && large_n == STREAM_TOKENS_LARGE
        && large_rss - small_rss <= STREAM_RSS_SLACK_KB;
    let detail = format!(
        "{large_n} tokens in {}, {:.0} tokens/s; peak RSS {} KiB at {}k tokens vs {} KiB at {}k",
        secs(elapsed),
        large_n as f64 / elapsed.as_secs_f64(),
        large_rss,
        STREAM_TOKENS_LARGE / 1000,
        small_rss,
        STREAM_TOKENS_SMALL / 1000
    );
    r.line(7, "streaming throughput", ok, detail);
}

fn main() {
    let mut r = Report { failures: 0, lines: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let graph = MorphotacticGraph::shipped();
    let an = Analyzer::new(graph.clone(), AnalyzerConfig::default());
    let an_all = an.with_config(AnalyzerConfig { emit_all: true, max_analyses: 0, ..Default::default() });
    let mut inputs = Vec::new();

    inventory_counts(&mut r);
    golden_analyses(&mut r, &an, &mut inputs);
    pipeline(&mut r, &graph);
    oracle_equivalence(&mut r, &an_all, &mut rng, &mut inputs);
    synthesis_recovery(&mut r, &an, &mut rng, &mut inputs);
    round_trip(&mut r, &an_all, &inputs);
    streaming(&mut r, &an, &mut rng);

    r.print();
    if r.failures > 0 {
        std::process::exit(1);
    }
}

//! Random words for testing and benchmarking: syllable-built stems plus
//! affix sequences sampled by walking the composed machine.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fsm::StateId;
use crate::inventory::AffixClass;
use crate::morphotactics::{Label, MorphotacticGraph, SymbolId};

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "v", "x", "y", "z", "sh", "ch", "g'", "",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "o'"];
const CODAS: &[&str] =
    &["", "", "", "b", "d", "f", "g", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "x", "z", "sh"];

/// Letters used for random strings.
pub const ALPHABET: &[&str] = &[
    "a", "b", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r", "s", "t", "u", "v", "x", "y",
    "z", "o'", "g'", "sh", "ch", "ng",
];

/// A random string of at most `max_len` characters over [`ALPHABET`].
pub fn random_letters<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let target = rng.gen_range(1..=max_len);
    let mut s = String::new();
    loop {
        let piece = ALPHABET.choose(rng).unwrap();
        if s.chars().count() + piece.chars().count() > target {
            if s.is_empty() {
                continue;
            }
            return s;
        }
        s.push_str(piece);
    }
}

/// A pronounceable stem of one to three syllables.
pub fn random_stem<R: Rng>(rng: &mut R) -> String {
    let syllables = rng.gen_range(1..=3);
    let mut s = String::new();
    for _ in 0..syllables {
        s.push_str(ONSETS.choose(rng).unwrap());
        s.push_str(VOWELS.choose(rng).unwrap());
        s.push_str(CODAS.choose(rng).unwrap());
    }
    s
}

/// True when `stem` ends with any allomorph surface or starts with a prefix
/// surface; such stems are ambiguous without a lexicon.
pub fn stem_is_ambiguous(stem: &str, graph: &MorphotacticGraph) -> bool {
    let inv = graph.inventory();
    inv.allomorphs().iter().any(|a| {
        if inv.entry(a.entry).class == AffixClass::Prefix {
            stem.starts_with(&a.surface) || stem.ends_with(&a.surface)
        } else {
            stem.ends_with(&a.surface)
        }
    })
}

/// A synthesized word with the parts it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesized {
    pub word: String,
    pub prefix: Option<SymbolId>,
    pub stem: String,
    pub suffixes: Vec<SymbolId>,
}

/// Walk the left-to-right main machine from the stem gate, picking uniformly
/// among outgoing affix edges and stopping (when allowed) with probability
/// `1 / (choices + 1)`. Gives up on the walk after `max_affixes` and retries.
pub fn sample_suffixes<R: Rng>(graph: &MorphotacticGraph, rng: &mut R, max_affixes: usize) -> Vec<SymbolId> {
    let m = graph.main_ltr();
    let after_stem: Vec<StateId> =
        m.edges().iter().filter(|(_, l, _)| *l == Some(Label::Stem)).map(|(_, _, t)| *t).collect();
    'retry: loop {
        let mut cur = m.epsilon_closure(after_stem.iter().copied());
        let mut seq = Vec::new();
        loop {
            let accepting = cur.iter().any(|s| m.finals().contains(s));
            let options: Vec<(SymbolId, StateId)> = m
                .edges()
                .iter()
                .filter(|(s, _, _)| cur.contains(s))
                .filter_map(|(_, l, t)| match l {
                    Some(Label::Affix(sym)) => Some((*sym, *t)),
                    _ => None,
                })
                .collect();
            let mut syms: Vec<SymbolId> = options.iter().map(|o| o.0).collect();
            syms.sort();
            syms.dedup();
            if accepting && (syms.is_empty() || rng.gen_range(0..=syms.len()) == 0) {
                return seq;
            }
            if syms.is_empty() || seq.len() == max_affixes {
                continue 'retry;
            }
            let pick = *syms.choose(rng).unwrap();
            seq.push(pick);
            let targets = options.iter().filter(|o| o.0 == pick).map(|o| o.1);
            cur = m.epsilon_closure(targets);
        }
    }
}

/// Random stem (unambiguous per [`stem_is_ambiguous`]) plus sampled affixes,
/// with an optional prefix drawn with probability `prefix_rate`. Resamples
/// until the word has at most `max_len` characters.
pub fn synthesize<R: Rng>(graph: &MorphotacticGraph, rng: &mut R, max_len: usize, prefix_rate: f64) -> Synthesized {
    let prefixes: Vec<SymbolId> = (0..graph.symbols().len() as u32)
        .map(SymbolId)
        .filter(|&s| graph.symbol(s).class == AffixClass::Prefix)
        .collect();
    loop {
        let stem = random_stem(rng);
        if stem.chars().count() < 3 || stem_is_ambiguous(&stem, graph) {
            continue;
        }
        let prefix = if rng.gen_bool(prefix_rate) { prefixes.choose(rng).copied() } else { None };
        let suffixes = sample_suffixes(graph, rng, 6);
        let mut word = String::new();
        if let Some(p) = prefix {
            word.push_str(graph.surface(p));
        }
        word.push_str(&stem);
        for &s in &suffixes {
            word.push_str(graph.surface(s));
        }
        if word.chars().count() <= max_len {
            return Synthesized { word, prefix, stem, suffixes };
        }
    }
}

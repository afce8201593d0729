//! Right-to-left affix stripping over the composed machine.
//!
//! Candidate affixes at each position come from a reversed-surface trie per
//! class; the main right-to-left DFA decides which candidates may follow the
//! affixes already stripped. Search is depth first and collects every legal
//! segmentation, which are then ranked.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::Serialize;

use crate::fsm::StateId;
use crate::inventory::{fold_apostrophe, AffixClass, Inventory};
use crate::morphotactics::{Label, MorphotacticGraph, SymbolId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzerConfig {
    /// Shortest stem the analyzer will leave, in characters.
    pub min_stem_len: usize,
    /// Cap on returned analyses when `emit_all` is set; `0` means no cap.
    pub max_analyses: usize,
    /// Return every legal analysis instead of only the best.
    pub emit_all: bool,
    /// A prefix is preferred over leaving it on the stem only when the
    /// remaining stem has at least this many characters.
    pub min_prefixed_stem_len: usize,
    /// Analyses leaving a stem shorter than this rank below all others.
    pub preferred_stem_len: usize,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        AnalyzerConfig {
            min_stem_len: 2,
            max_analyses: 16,
            emit_all: false,
            min_prefixed_stem_len: 5,
            preferred_stem_len: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Morpheme {
    pub surface: String,
    pub gloss: String,
    pub class: AffixClass,
    pub generic_form: String,
    #[serde(skip)]
    pub symbol: SymbolId,
}

/// Ranking key of an analysis. Lower sorts first.
///
/// * a stem of at least the preferred length
/// * then more characters stripped (a prefix counts only when it leaves a
///   long enough stem)
/// * then the prefix decision: a prefix leaving a long enough stem, then no
///   prefix, then a prefix leaving a short stem
/// * then fewer morphemes, so an undivided suffix beats its parts
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Score {
    pub short_stem: bool,
    pub stripped: usize,
    pub prefix_rank: u8,
    pub morphemes: usize,
}

impl Score {
    fn key(&self) -> (bool, std::cmp::Reverse<usize>, u8, usize) {
        (self.short_stem, std::cmp::Reverse(self.stripped), self.prefix_rank, self.morphemes)
    }
}

/// Field order is stable: stem, prefix, suffixes, score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub stem: String,
    pub prefix: Option<Morpheme>,
    /// Suffixes in word order (left to right).
    pub suffixes: Vec<Morpheme>,
    pub score: Score,
}

/// Identity of an analysis independent of glosses and scores.
pub type SegmentationKey = (Option<SymbolId>, String, Vec<SymbolId>);

impl Analysis {
    pub fn key(&self) -> SegmentationKey {
        (self.prefix.as_ref().map(|m| m.symbol), self.stem.clone(), self.suffixes.iter().map(|m| m.symbol).collect())
    }

    /// No affix was stripped.
    pub fn is_bare(&self) -> bool {
        self.prefix.is_none() && self.suffixes.is_empty()
    }

    /// prefix + stem + suffixes.
    pub fn surface(&self) -> String {
        let mut s = String::new();
        if let Some(p) = &self.prefix {
            s.push_str(&p.surface);
        }
        s.push_str(&self.stem);
        for m in &self.suffixes {
            s.push_str(&m.surface);
        }
        s
    }

    /// Morphemes in word order, prefix first.
    pub fn morphemes(&self) -> impl Iterator<Item = &Morpheme> {
        self.prefix.iter().chain(self.suffixes.iter())
    }

    /// `ser-hosil`, `bajar-tir-il-ma-yap-ti-mi`.
    pub fn segmented(&self) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if let Some(p) = &self.prefix {
            parts.push(&p.surface);
        }
        parts.push(&self.stem);
        parts.extend(self.suffixes.iter().map(|m| m.surface.as_str()));
        parts.join("-")
    }

    fn cmp_rank(&self, other: &Analysis) -> Ordering {
        self.score.key().cmp(&other.score.key()).then_with(|| {
            let a = (self.prefix.as_ref().map(|m| m.symbol), self.suffixes.iter().map(|m| m.symbol));
            let b = (other.prefix.as_ref().map(|m| m.symbol), other.suffixes.iter().map(|m| m.symbol));
            a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1))
        })
    }
}

/// Lowercase, fold apostrophes and strip surrounding punctuation. A final
/// apostrophe after `o` or `g` is part of the letter and stays.
pub fn normalize(raw: &str) -> String {
    let folded: String = raw.chars().map(fold_apostrophe).flat_map(char::to_lowercase).collect();
    let trimmed = folded.trim_matches(|c: char| !c.is_alphanumeric());
    let rest = &folded[folded.len() - folded.trim_start_matches(|c: char| !c.is_alphanumeric()).len()..];
    let tail = &rest[trimmed.len()..];
    if tail.starts_with('\'') && (trimmed.ends_with('o') || trimmed.ends_with('g')) {
        format!("{trimmed}'")
    } else {
        trimmed.to_string()
    }
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: Vec<(char, usize)>,
    symbols: Vec<SymbolId>,
}

/// Surfaces stored reversed, so walking from the end of a word visits every
/// suffix that matches there.
#[derive(Debug, Clone)]
struct ReverseTrie {
    nodes: Vec<TrieNode>,
}

impl ReverseTrie {
    fn new() -> Self {
        ReverseTrie { nodes: vec![TrieNode::default()] }
    }

    fn insert(&mut self, surface: &[char], sym: SymbolId) {
        let mut cur = 0;
        for &c in surface.iter().rev() {
            cur = match self.nodes[cur].children.iter().find(|(k, _)| *k == c) {
                Some(&(_, n)) => n,
                None => {
                    self.nodes.push(TrieNode::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[cur].children.push((c, n));
                    n
                }
            };
        }
        self.nodes[cur].symbols.push(sym);
    }

    fn child(&self, node: usize, c: char) -> Option<usize> {
        self.nodes[node].children.iter().find(|(k, _)| *k == c).map(|&(_, n)| n)
    }
}

/// Immutable analyzer state: the graph, the tries and the configuration.
#[derive(Debug, Clone)]
pub struct Analyzer {
    graph: Arc<MorphotacticGraph>,
    config: AnalyzerConfig,
    tries: Vec<ReverseTrie>,
    /// Bit `k` set when state has an outgoing edge labelled by class `k`.
    state_classes: Vec<u8>,
    prefixes: Vec<(Vec<char>, SymbolId)>,
    sym_chars: Vec<Vec<char>>,
}

struct Found {
    prefix: Option<SymbolId>,
    stem_start: usize,
    stem_end: usize,
    suffixes_rtl: Vec<SymbolId>,
}

impl Analyzer {
    pub fn new(graph: impl Into<Arc<MorphotacticGraph>>, config: AnalyzerConfig) -> Analyzer {
        let graph = graph.into();
        let sym_chars: Vec<Vec<char>> =
            (0..graph.symbols().len() as u32).map(|i| graph.surface(SymbolId(i)).chars().collect()).collect();
        let mut tries = vec![ReverseTrie::new(); 7];
        let mut prefixes = Vec::new();
        for (i, chars) in sym_chars.iter().enumerate() {
            let id = SymbolId(i as u32);
            let class = graph.symbol(id).class;
            if class == AffixClass::Prefix {
                prefixes.push((chars.clone(), id));
            } else {
                tries[class.index()].insert(chars, id);
            }
        }
        let rtl = graph.main_rtl();
        let state_classes = (0..rtl.num_states())
            .map(|s| {
                rtl.outgoing(s).fold(0u8, |mask, (l, _)| match l {
                    Label::Affix(sym) => mask | 1 << graph.symbol(*sym).class.index(),
                    Label::Stem => mask,
                })
            })
            .collect();
        Analyzer { graph, config, tries, state_classes, prefixes, sym_chars }
    }

    /// Analyzer over the shipped grammar with default settings.
    pub fn shipped() -> Analyzer {
        Analyzer::new(MorphotacticGraph::shipped(), AnalyzerConfig::default())
    }

    pub fn with_config(&self, config: AnalyzerConfig) -> Analyzer {
        Analyzer { config, ..self.clone() }
    }

    pub fn config(&self) -> &AnalyzerConfig {
        &self.config
    }

    pub fn graph(&self) -> &MorphotacticGraph {
        &self.graph
    }

    pub fn inventory(&self) -> &Inventory {
        self.graph.inventory()
    }

    fn search(&self, word: &[char], end: usize, state: StateId, stack: &mut Vec<SymbolId>, out: &mut Vec<Found>) {
        let rtl = self.graph.main_rtl();
        let min = self.config.min_stem_len.max(1);

        if let Some(gate) = rtl.next(state, &Label::Stem) {
            if end >= min && rtl.is_final(gate) {
                out.push(Found { prefix: None, stem_start: 0, stem_end: end, suffixes_rtl: stack.clone() });
            }
            for (chars, sym) in &self.prefixes {
                let Some(after) = rtl.next(gate, &Label::Affix(*sym)) else { continue };
                if rtl.is_final(after) && end >= chars.len() + min && word.starts_with(chars) {
                    out.push(Found {
                        prefix: Some(*sym),
                        stem_start: chars.len(),
                        stem_end: end,
                        suffixes_rtl: stack.clone(),
                    });
                }
            }
        }

        let mask = self.state_classes[state];
        for class in AffixClass::ALL {
            if mask & (1 << class.index()) == 0 {
                continue;
            }
            let trie = &self.tries[class.index()];
            let mut node = 0;
            let mut depth = 0;
            while end >= depth + 1 + min {
                match trie.child(node, word[end - depth - 1]) {
                    Some(n) => node = n,
                    None => break,
                }
                depth += 1;
                for &sym in &trie.nodes[node].symbols {
                    if let Some(next) = rtl.next(state, &Label::Affix(sym)) {
                        stack.push(sym);
                        self.search(word, end - depth, next, stack, out);
                        stack.pop();
                    }
                }
            }
        }
    }

    fn morpheme(&self, sym: SymbolId) -> Morpheme {
        let g = &self.graph;
        let entry = g.inventory().entry_of(g.symbol(sym).allomorph);
        Morpheme {
            surface: g.surface(sym).to_string(),
            gloss: g.gloss(sym).to_string(),
            class: entry.class,
            generic_form: entry.generic_form.clone(),
            symbol: sym,
        }
    }

    fn build(&self, word: &[char], f: Found) -> Analysis {
        let stem_len = f.stem_end - f.stem_start;
        let mut stripped: usize = f.suffixes_rtl.iter().map(|s| self.sym_chars[s.0 as usize].len()).sum();
        let prefix_rank = match f.prefix {
            Some(p) if stem_len >= self.config.min_prefixed_stem_len => {
                stripped += self.sym_chars[p.0 as usize].len();
                0
            }
            None => 1,
            Some(_) => 2,
        };
        let short_stem = stem_len < self.config.preferred_stem_len;
        let morphemes = f.suffixes_rtl.len() + usize::from(f.prefix.is_some());
        Analysis {
            stem: word[f.stem_start..f.stem_end].iter().collect(),
            prefix: f.prefix.map(|p| self.morpheme(p)),
            suffixes: f.suffixes_rtl.iter().rev().map(|&s| self.morpheme(s)).collect(),
            score: Score { short_stem, stripped, prefix_rank, morphemes },
        }
    }

    fn bare(&self, word: &str) -> Analysis {
        let short_stem = word.chars().count() < self.config.preferred_stem_len;
        Analysis {
            stem: word.to_string(),
            prefix: None,
            suffixes: Vec::new(),
            score: Score { short_stem, stripped: 0, prefix_rank: 1, morphemes: 0 },
        }
    }

    /// Every legal analysis of an already normalized word, best first.
    pub fn analyze_all(&self, word: &str) -> Vec<Analysis> {
        let chars: Vec<char> = word.chars().collect();
        if chars.len() < self.config.min_stem_len.max(1) {
            return vec![self.bare(word)];
        }
        let mut found = Vec::new();
        let mut stack = Vec::new();
        self.search(&chars, chars.len(), self.graph.main_rtl().initial(), &mut stack, &mut found);
        let mut out: Vec<Analysis> = found.into_iter().map(|f| self.build(&chars, f)).collect();
        if out.is_empty() {
            out.push(self.bare(word));
        }
        out.sort_by(Analysis::cmp_rank);
        out
    }

    /// Analyses of a normalized word, ranked. Only the best one unless
    /// `emit_all` is set.
    pub fn analyze(&self, word: &str) -> Vec<Analysis> {
        let mut all = self.analyze_all(word);
        if !self.config.emit_all {
            all.truncate(1);
        } else if self.config.max_analyses > 0 {
            all.truncate(self.config.max_analyses);
        }
        all
    }

    /// Best analysis of a normalized word.
    pub fn best(&self, word: &str) -> Analysis {
        self.analyze_all(word).into_iter().next().expect("at least the bare analysis")
    }

    /// Stem of the best analysis.
    pub fn stem(&self, word: &str) -> String {
        self.best(word).stem
    }

    /// Longest prefix at position 0 that leaves at least `min_stem_len`
    /// characters. Independent of the suffix machine.
    pub fn strip_prefix(&self, word: &str) -> Option<(Morpheme, String)> {
        strip_prefix(word, &self.graph, &self.config)
    }
}

/// Longest class-7 allomorph at the start of `word` whose removal leaves at
/// least `config.min_stem_len` characters.
pub fn strip_prefix(word: &str, graph: &MorphotacticGraph, config: &AnalyzerConfig) -> Option<(Morpheme, String)> {
    let inv = graph.inventory();
    let n = word.chars().count();
    inv.allomorphs_of_class(AffixClass::Prefix)
        .into_iter()
        .find(|(_, a)| word.starts_with(&a.surface) && n >= a.surface.chars().count() + config.min_stem_len)
        .map(|(id, a)| {
            let sym = graph.symbols_of(id)[0];
            let entry = inv.entry_of(id);
            let m = Morpheme {
                surface: a.surface.clone(),
                gloss: graph.gloss(sym).to_string(),
                class: entry.class,
                generic_form: entry.generic_form.clone(),
                symbol: sym,
            };
            (m, word[a.surface.len()..].to_string())
        })
}

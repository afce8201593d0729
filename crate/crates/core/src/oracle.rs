//! Brute-force reference segmenter.
//!
//! Tries every prefix choice, every stem boundary and every way of cutting
//! the rest of the word into allomorph surfaces, then keeps the sequences
//! the left-to-right composed machine accepts. It shares no code with the
//! analyzer's trie or its right-to-left DFA and is meant for checking them.

use std::collections::BTreeSet;

use crate::analyzer::SegmentationKey;
use crate::inventory::{AffixClass, Inventory};
use crate::morphotactics::{Label, MorphotacticGraph, SymbolId};

fn cuts(rest: &str, suffixes: &[(String, Vec<SymbolId>)], acc: &mut Vec<SymbolId>, out: &mut Vec<Vec<SymbolId>>) {
    if rest.is_empty() {
        out.push(acc.clone());
        return;
    }
    for (surface, syms) in suffixes {
        if let Some(tail) = rest.strip_prefix(surface.as_str()) {
            for &s in syms {
                acc.push(s);
                cuts(tail, suffixes, acc, out);
                acc.pop();
            }
        }
    }
}

/// Every `(prefix, stem, suffixes)` whose concatenation is `word`, whose
/// stem has at least `min_stem_len` characters, and whose label sequence the
/// composed machine accepts.
pub fn enumerate_segmentations_oracle(
    word: &str,
    inv: &Inventory,
    graph: &MorphotacticGraph,
    min_stem_len: usize,
) -> BTreeSet<SegmentationKey> {
    let min = min_stem_len.max(1);
    let mut suffixes: Vec<(String, Vec<SymbolId>)> = Vec::new();
    let mut prefixes: Vec<(String, Vec<SymbolId>)> = Vec::new();
    for (i, a) in inv.allomorphs().iter().enumerate() {
        let syms = graph.symbols_of(crate::inventory::AllomorphId(i)).to_vec();
        let item = (a.surface.clone(), syms);
        if inv.entry(a.entry).class == AffixClass::Prefix {
            prefixes.push(item);
        } else {
            suffixes.push(item);
        }
    }

    let mut out = BTreeSet::new();
    if word.chars().count() < min {
        out.insert((None, word.to_string(), Vec::new()));
        return out;
    }

    let mut heads: Vec<(Option<SymbolId>, &str)> = vec![(None, word)];
    for (surface, syms) in &prefixes {
        if let Some(rest) = word.strip_prefix(surface.as_str()) {
            heads.extend(syms.iter().map(|&s| (Some(s), rest)));
        }
    }

    for (prefix, body) in heads {
        let boundaries: Vec<usize> = body.char_indices().map(|(i, _)| i).chain([body.len()]).collect();
        for &b in boundaries.iter().skip(min) {
            let (stem, rest) = body.split_at(b);
            let mut seqs = Vec::new();
            cuts(rest, &suffixes, &mut Vec::new(), &mut seqs);
            for seq in seqs {
                let mut labels: Vec<Label> = prefix.map(Label::Affix).into_iter().collect();
                labels.push(Label::Stem);
                labels.extend(seq.iter().map(|&s| Label::Affix(s)));
                if graph.main_ltr().accepts(&labels) {
                    out.insert((prefix, stem.to_string(), seq));
                }
            }
        }
    }
    if out.is_empty() {
        out.insert((None, word.to_string(), Vec::new()));
    }
    out
}

use std::collections::BTreeSet;

use uzstem::morphotactics::{Direction, ExportTarget, Label, SymbolId};
use uzstem::{AffixClass::*, MorphotacticGraph, Position};

fn graph() -> MorphotacticGraph {
    MorphotacticGraph::shipped()
}

fn sym(g: &MorphotacticGraph, surface: &str, class: uzstem::AffixClass) -> SymbolId {
    g.find_symbol(surface, class, None).unwrap_or_else(|| panic!("{surface} in {class}"))
}

#[test]
fn worked_examples_are_accepted() {
    let g = graph();
    let s = |x, c| sym(&g, x, c);
    let cases: Vec<Vec<SymbolId>> = vec![
        vec![
            s("tir", RelativeVerb),
            s("il", RelativeVerb),
            s("ma", Verb),
            s("yap", TensePerson),
            s("ti", TensePerson),
            s("mi", TensePerson),
        ],
        vec![s("yap", TensePerson), s("siz", TensePerson)],
        vec![s("lar", Noun), s("im", Noun)],
        vec![s("m", Noun), g.find_symbol("lar", Noun, Some("greeting")).unwrap()],
        vec![s("chilik", Derivational)],
        vec![s("ol", RelativeVerb), s("ma", Verb), s("di", TensePerson)],
        vec![],
    ];
    for suffixes in cases {
        assert!(g.accepts_rtl(None, &suffixes), "{suffixes:?}");
        let mut ltr = vec![Label::Stem];
        ltr.extend(suffixes.iter().map(|&x| Label::Affix(x)));
        assert!(g.accepts_ltr(&ltr));
    }
}

#[test]
fn stated_violations_are_rejected() {
    let g = graph();
    let s = |x, c| sym(&g, x, c);
    let greeting = g.find_symbol("lar", Noun, Some("greeting")).unwrap();
    // greeting -lar before the possessive
    assert!(!g.accepts_rtl(None, &[greeting, s("m", Noun)]));
    // derivational between two tense/person suffixes
    assert!(!g.accepts_rtl(None, &[s("yap", TensePerson), s("chi", Derivational), s("siz", TensePerson)]));
    // two prefixes
    let two = [Label::Affix(s("ser", Prefix)), Label::Affix(s("ba", Prefix)), Label::Stem];
    assert!(!g.accepts_ltr(&two));
    // a prefix after the stem
    assert!(!g.accepts_ltr(&[Label::Stem, Label::Affix(s("ser", Prefix))]));
    // number followed by a case ending
    assert!(!g.accepts_rtl(None, &[s("ta", Number), s("ni", Noun)]));
    assert!(g.accepts_rtl(None, &[s("ta", Number)]));
}

#[test]
fn plural_and_greeting_share_a_surface() {
    let g = graph();
    let plural = g.find_symbol("lar", Noun, None).unwrap();
    let greeting = g.find_symbol("lar", Noun, Some("greeting")).unwrap();
    assert_ne!(plural, greeting);
    assert_eq!(g.symbol(plural).allomorph, g.symbol(greeting).allomorph);
    assert_eq!(g.gloss(plural), "plural");
    assert_eq!(g.gloss(greeting), "greeting");
    assert!(g.accepts_rtl(None, &[plural, sym(&g, "im", Noun)]));
    assert!(!g.accepts_rtl(None, &[greeting, sym(&g, "im", Noun)]));
}

#[test]
fn next_classes() {
    let g = graph();
    let end = g.legal_next_classes(Position::WordEnd);
    assert_eq!(end.classes, BTreeSet::from([TensePerson, Noun]));
    let after_number = g.legal_next_classes(Position::After(Number));
    assert!(after_number.classes.is_empty() && after_number.stem_gate);
    assert!(g.legal_next_classes(Position::After(TensePerson)).classes.contains(&Verb));
    assert!(g.legal_next_classes(Position::After(Prefix)).classes.is_empty());
}

#[test]
fn export_shapes() {
    let g = graph();
    let seven = g.export(ExportTarget::Class(Prefix), Direction::RightToLeft);
    let edges: Vec<&str> = seven.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(edges.len(), 7);
    assert!(seven.starts_with("# states 2\n"));

    let main = g.export(ExportTarget::Main, Direction::LeftToRight);
    let classes: BTreeSet<&str> = main
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split('\t').nth(1))
        .filter_map(|label| label.split(':').nth(1))
        .collect();
    assert_eq!(classes, BTreeSet::from(["1", "2", "3", "4", "5", "6", "7"]));
    assert_eq!(main, g.export(ExportTarget::Main, Direction::LeftToRight));
    assert!("99".parse::<ExportTarget>().is_err());
    assert!("0".parse::<ExportTarget>().is_err());
    assert_eq!("main".parse::<ExportTarget>(), Ok(ExportTarget::Main));
}

#[test]
fn every_symbol_is_reachable() {
    let g = graph();
    let alphabet = g.main_ltr().alphabet();
    for i in 0..g.symbols().len() {
        assert!(alphabet.contains(&Label::Affix(SymbolId(i as u32))), "{}", g.symbol_name(SymbolId(i as u32)));
    }
}

#[test]
fn load_dir_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("affixes.tsv"), uzstem::inventory::SHIPPED_AFFIXES).unwrap();
    std::fs::write(dir.path().join("morphotactics.tsv"), uzstem::morphotactics::SHIPPED_MORPHOTACTICS).unwrap();
    let loaded = MorphotacticGraph::load_dir(dir.path()).unwrap();
    assert_eq!(loaded.main_rtl(), graph().main_rtl());
    assert!(MorphotacticGraph::load_dir(dir.path().join("missing")).is_err());
}

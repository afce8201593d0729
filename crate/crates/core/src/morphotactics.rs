//! Per-class morphotactic machines and the composed main machine.
//!
//! Ordering lives in a line-oriented table (`data/morphotactics.tsv`):
//! `slot` rows group table entries into positions, `arc` rows order the
//! positions inside a class, `link` rows wire classes together. Every
//! machine here is built left to right from that table and then turned into
//! its right-to-left runtime form by reversal and subset construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::fsm::{export_edge_list, Dfa, Nfa, StateId};
use crate::inventory::{AffixClass, AllomorphId, Inventory, InventoryError, SHIPPED_AFFIXES};

/// The shipped ordering table.
pub const SHIPPED_MORPHOTACTICS: &str = include_str!("../data/morphotactics.tsv");

/// File names inside a grammar directory.
pub const AFFIX_FILE: &str = "affixes.tsv";
pub const MORPHOTACTICS_FILE: &str = "morphotactics.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

/// An edge label of the class machines: one allomorph in one sense. Most
/// allomorphs have a single sense; an entry placed in a slot with
/// `index@sense` gets a separate symbol carrying that sense as its gloss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub allomorph: AllomorphId,
    pub class: AffixClass,
    pub sense: Option<String>,
}

/// Labels of the main machine. `Stem` marks the gate where stripping stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Stem,
    Affix(SymbolId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Start,
    Stem,
    End,
    In(AffixClass),
    Out(AffixClass),
    Slot(AffixClass, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotDef {
    pub class: AffixClass,
    pub name: String,
    /// (index_in_table, sense)
    pub members: Vec<(u32, Option<String>)>,
    pub symbols: Vec<SymbolId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error(transparent)]
    Inventory(#[from] InventoryError),
    #[error("morphotactics line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("entry {class}:{index} ('{form}') is not placed in any slot")]
    Unplaced { class: u8, index: u32, form: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn table_err(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Table { line, message: message.into() }
}

/// Parsed ordering table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrderingTable {
    pub slots: Vec<SlotDef>,
    pub arcs: Vec<(AffixClass, Node, Node)>,
    pub links: Vec<(Node, Node)>,
}

impl OrderingTable {
    fn slot_index(&self, class: AffixClass, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.class == class && s.name == name)
    }

    fn parse_class(line: usize, s: &str) -> Result<AffixClass, GrammarError> {
        s.parse::<u8>()
            .ok()
            .and_then(AffixClass::from_id)
            .ok_or_else(|| table_err(line, format!("unknown class '{s}'")))
    }

    fn parse_local(&self, line: usize, class: AffixClass, s: &str) -> Result<Node, GrammarError> {
        match s {
            "IN" => Ok(Node::In(class)),
            "OUT" => Ok(Node::Out(class)),
            name => self
                .slot_index(class, name)
                .map(|i| Node::Slot(class, i))
                .ok_or_else(|| table_err(line, format!("unknown slot '{name}' in class {}", class.id()))),
        }
    }

    fn parse_node(&self, line: usize, s: &str) -> Result<Node, GrammarError> {
        match s {
            "START" => Ok(Node::Start),
            "STEM" => Ok(Node::Stem),
            "END" => Ok(Node::End),
            _ => {
                let (c, rest) = s.split_once('.').ok_or_else(|| table_err(line, format!("bad node '{s}'")))?;
                let class = Self::parse_class(line, c)?;
                self.parse_local(line, class, rest)
            }
        }
    }

    pub fn parse(text: &str) -> Result<OrderingTable, GrammarError> {
        let mut table = OrderingTable::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            match cols[0] {
                "slot" => {
                    if cols.len() != 4 {
                        return Err(table_err(line, "slot rows need 4 columns"));
                    }
                    let class = Self::parse_class(line, cols[1])?;
                    let name = cols[2];
                    if matches!(name, "IN" | "OUT") || name.is_empty() || name.contains('.') {
                        return Err(table_err(line, format!("reserved or malformed slot name '{name}'")));
                    }
                    if table.slot_index(class, name).is_some() {
                        return Err(table_err(line, format!("duplicate slot '{name}'")));
                    }
                    let mut members = Vec::new();
                    for tok in cols[3].split_whitespace() {
                        let (idx, sense) = match tok.split_once('@') {
                            Some((i, s)) if !s.is_empty() => (i, Some(s.to_string())),
                            Some(_) => return Err(table_err(line, format!("empty sense in '{tok}'"))),
                            None => (tok, None),
                        };
                        let idx = idx.parse::<u32>().map_err(|_| table_err(line, format!("bad member '{tok}'")))?;
                        members.push((idx, sense));
                    }
                    if members.is_empty() {
                        return Err(table_err(line, "slot has no members"));
                    }
                    table.slots.push(SlotDef { class, name: name.to_string(), members, symbols: Vec::new() });
                }
                "arc" => {
                    if cols.len() != 4 {
                        return Err(table_err(line, "arc rows need 4 columns"));
                    }
                    let class = Self::parse_class(line, cols[1])?;
                    let from = table.parse_local(line, class, cols[2])?;
                    let to = table.parse_local(line, class, cols[3])?;
                    if matches!(from, Node::Out(_)) || matches!(to, Node::In(_)) {
                        return Err(table_err(line, "arcs run from IN or a slot to a slot or OUT"));
                    }
                    table.arcs.push((class, from, to));
                }
                "link" => {
                    if cols.len() != 3 {
                        return Err(table_err(line, "link rows need 3 columns"));
                    }
                    let from = table.parse_node(line, cols[1])?;
                    let to = table.parse_node(line, cols[2])?;
                    let from_ok = matches!(from, Node::Start | Node::Stem | Node::Out(_) | Node::Slot(..));
                    let to_ok = matches!(to, Node::Stem | Node::End | Node::In(_) | Node::Out(_) | Node::Slot(..));
                    if !from_ok || !to_ok {
                        return Err(table_err(line, "link endpoints out of place"));
                    }
                    if let (Some(a), Some(b)) = (node_class(&from), node_class(&to)) {
                        if a == b {
                            return Err(table_err(line, "links join different classes; use arc inside a class"));
                        }
                    }
                    table.links.push((from, to));
                }
                other => return Err(table_err(line, format!("unknown row kind '{other}'"))),
            }
        }
        Ok(table)
    }
}

fn node_class(n: &Node) -> Option<AffixClass> {
    match n {
        Node::In(c) | Node::Out(c) | Node::Slot(c, _) => Some(*c),
        _ => None,
    }
}

/// One class machine.
#[derive(Debug, Clone)]
pub struct ClassMachine {
    pub class: AffixClass,
    /// Intra-class structure only: state 0 is IN, state 1 is OUT, slot `k`
    /// of the class is state `2 + k`.
    core: Nfa<Label>,
    slot_states: Vec<(usize, StateId)>,
    /// Left-to-right machine including every entry and exit the links allow.
    pub ltr: Nfa<Label>,
    /// Right-to-left runtime machine.
    pub rtl: Dfa<Label>,
}

const IN: StateId = 0;
const OUT: StateId = 1;

impl ClassMachine {
    fn state_of(&self, slot: usize) -> StateId {
        self.slot_states.iter().find(|(s, _)| *s == slot).map(|(_, st)| *st).expect("slot belongs to class")
    }

    /// Every label used by this machine.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.ltr.alphabet()
    }
}

/// Where a right-to-left traversal currently stands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    WordEnd,
    After(AffixClass),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NextClasses {
    pub classes: BTreeSet<AffixClass>,
    /// Stripping may stop here and leave the rest as the stem.
    pub stem_gate: bool,
}

/// The composed main machine.
#[derive(Debug, Clone)]
pub struct MorphotacticGraph {
    inventory: Inventory,
    table: OrderingTable,
    symbols: Vec<Symbol>,
    by_allomorph: BTreeMap<AllomorphId, Vec<SymbolId>>,
    machines: Vec<ClassMachine>,
    main_ltr: Nfa<Label>,
    main_rtl: Dfa<Label>,
}

/// Intern symbols for every slot member and attach them to the slots.
fn assign_symbols(inv: &Inventory, table: &mut OrderingTable) -> Result<Vec<Symbol>, GrammarError> {
    let mut keys: BTreeSet<(AllomorphId, Option<String>)> = BTreeSet::new();
    let mut placed: BTreeSet<(u8, u32)> = BTreeSet::new();
    for slot in &table.slots {
        for (idx, sense) in &slot.members {
            let entry = inv.find_entry(slot.class, *idx).ok_or_else(|| GrammarError::Table {
                line: 0,
                message: format!("slot '{}' names missing entry {}:{}", slot.name, slot.class.id(), idx),
            })?;
            placed.insert((slot.class.id(), *idx));
            for &a in inv.allomorphs_of_entry(entry) {
                keys.insert((a, sense.clone()));
            }
        }
    }
    for e in inv.entries() {
        if !placed.contains(&(e.class.id(), e.index_in_table)) {
            return Err(GrammarError::Unplaced {
                class: e.class.id(),
                index: e.index_in_table,
                form: e.generic_form.clone(),
            });
        }
    }
    let ids: BTreeMap<(AllomorphId, Option<String>), SymbolId> =
        keys.iter().cloned().enumerate().map(|(i, k)| (k, SymbolId(i as u32))).collect();
    for slot in &mut table.slots {
        let mut syms = Vec::new();
        for (idx, sense) in &slot.members {
            let entry = inv.find_entry(slot.class, *idx).expect("checked above");
            for &a in inv.allomorphs_of_entry(entry) {
                syms.push(ids[&(a, sense.clone())]);
            }
        }
        syms.sort();
        syms.dedup();
        slot.symbols = syms;
    }
    Ok(keys
        .into_iter()
        .map(|(allomorph, sense)| Symbol { allomorph, class: inv.entry_of(allomorph).class, sense })
        .collect())
}

/// Build the machine of one class from the ordering table.
pub fn build_class_machine(table: &OrderingTable, class: AffixClass) -> ClassMachine {
    let mut core: Nfa<Label> = Nfa::new();
    let out = core.add_state();
    debug_assert_eq!(out, OUT);
    let mut slot_states = Vec::new();
    for (i, slot) in table.slots.iter().enumerate() {
        if slot.class == class {
            slot_states.push((i, core.add_state()));
        }
    }
    let state = |slot: usize| slot_states.iter().find(|(s, _)| *s == slot).map(|(_, st)| *st).unwrap();
    let enter = |m: &mut Nfa<Label>, from: StateId, slot: usize| {
        for &sym in &table.slots[slot].symbols {
            m.add_edge(from, Label::Affix(sym), state(slot));
        }
    };
    for (c, from, to) in &table.arcs {
        if *c != class {
            continue;
        }
        let src = match from {
            Node::In(_) => IN,
            Node::Slot(_, s) => state(*s),
            _ => unreachable!("validated at parse time"),
        };
        match to {
            Node::Slot(_, s) => enter(&mut core, src, *s),
            Node::Out(_) => core.add_epsilon(src, OUT),
            _ => unreachable!("validated at parse time"),
        }
    }
    core.set_initial(IN);
    core.set_final(OUT);

    let mut ltr = core.clone();
    for (from, to) in &table.links {
        if node_class(to) == Some(class) {
            match to {
                Node::Slot(_, s) => enter(&mut ltr, IN, *s),
                Node::Out(_) => ltr.add_epsilon(IN, OUT),
                _ => {}
            }
        }
        if let Node::Slot(c, s) = from {
            if *c == class {
                ltr.add_epsilon(state(*s), OUT);
            }
        }
    }
    let rtl = ltr.reverse().determinize();
    ClassMachine { class, core, slot_states, ltr, rtl }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("missing machine for class {0}")]
    Missing(AffixClass),
}

/// Wire the class machines together along the table's links.
pub fn compose_main(
    machines: &[ClassMachine],
    table: &OrderingTable,
) -> Result<(Nfa<Label>, Dfa<Label>), ComposeError> {
    for class in AffixClass::ALL {
        if !machines.iter().any(|m| m.class == class) {
            return Err(ComposeError::Missing(class));
        }
    }
    let mut main: Nfa<Label> = Nfa::new();
    let start = 0;
    let gate = main.add_state();
    let after_stem = main.add_state();
    let end = main.add_state();
    main.add_edge(gate, Label::Stem, after_stem);

    // copy each core, remembering the offset of its states
    let mut offset: BTreeMap<AffixClass, StateId> = BTreeMap::new();
    for m in machines {
        let base = main.num_states();
        for _ in 0..m.core.num_states() {
            main.add_state();
        }
        for (a, l, b) in m.core.edges() {
            match l {
                Some(l) => main.add_edge(base + a, *l, base + b),
                None => main.add_epsilon(base + a, base + b),
            }
        }
        offset.insert(m.class, base);
    }
    let machine = |c: AffixClass| machines.iter().find(|m| m.class == c).unwrap();
    let state_of = |n: &Node| -> StateId {
        match n {
            Node::Start => start,
            Node::Stem => gate,
            Node::End => end,
            Node::In(c) => offset[c] + IN,
            Node::Out(c) => offset[c] + OUT,
            Node::Slot(c, s) => offset[c] + machine(*c).state_of(*s),
        }
    };
    for (from, to) in &table.links {
        let src = match from {
            Node::Stem => after_stem,
            other => state_of(other),
        };
        match to {
            Node::Slot(c, s) => {
                let dst = offset[c] + machine(*c).state_of(*s);
                for &sym in &table.slots[*s].symbols {
                    main.add_edge(src, Label::Affix(sym), dst);
                }
            }
            other => main.add_epsilon(src, state_of(other)),
        }
    }
    main.set_initial(start);
    main.set_final(end);
    let rtl = main.reverse().determinize();
    Ok((main, rtl))
}

impl MorphotacticGraph {
    /// The shipped grammar.
    pub fn shipped() -> MorphotacticGraph {
        MorphotacticGraph::from_sources(SHIPPED_AFFIXES, SHIPPED_MORPHOTACTICS).expect("shipped grammar is valid")
    }

    /// Build from the two grammar files' contents. The affix table is
    /// validated against the expected counts.
    pub fn from_sources(affixes: &str, morphotactics: &str) -> Result<MorphotacticGraph, GrammarError> {
        let inventory = Inventory::parse(affixes)?;
        Self::build(inventory, morphotactics)
    }

    /// Build from an already loaded inventory.
    pub fn build(inventory: Inventory, morphotactics: &str) -> Result<MorphotacticGraph, GrammarError> {
        let mut table = OrderingTable::parse(morphotactics)?;
        let symbols = assign_symbols(&inventory, &mut table)?;
        let mut by_allomorph: BTreeMap<AllomorphId, Vec<SymbolId>> = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            by_allomorph.entry(s.allomorph).or_default().push(SymbolId(i as u32));
        }
        let machines: Vec<ClassMachine> = AffixClass::ALL.iter().map(|&c| build_class_machine(&table, c)).collect();
        let (main_ltr, main_rtl) = compose_main(&machines, &table).expect("all seven classes built");
        Ok(MorphotacticGraph { inventory, table, symbols, by_allomorph, machines, main_ltr, main_rtl })
    }

    /// Load `affixes.tsv` and `morphotactics.tsv` from a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<MorphotacticGraph, GrammarError> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let p = dir.join(name);
            std::fs::read_to_string(&p)
                .map_err(|e| GrammarError::Io { path: p.display().to_string(), message: e.to_string() })
        };
        Self::from_sources(&read(AFFIX_FILE)?, &read(MORPHOTACTICS_FILE)?)
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    pub fn table(&self) -> &OrderingTable {
        &self.table
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0 as usize]
    }

    pub fn symbols_of(&self, allomorph: AllomorphId) -> &[SymbolId] {
        self.by_allomorph.get(&allomorph).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn surface(&self, id: SymbolId) -> &str {
        &self.inventory.allomorph(self.symbol(id).allomorph).surface
    }

    pub fn gloss(&self, id: SymbolId) -> &str {
        let s = self.symbol(id);
        s.sense.as_deref().unwrap_or(&self.inventory.entry_of(s.allomorph).gloss)
    }

    /// Stable printable name: `surface:class:index[@sense]`.
    pub fn symbol_name(&self, id: SymbolId) -> String {
        let s = self.symbol(id);
        let e = self.inventory.entry_of(s.allomorph);
        let mut name = format!("{}:{}:{}", self.surface(id), e.class.id(), e.index_in_table);
        if let Some(sense) = &s.sense {
            name.push('@');
            name.push_str(sense);
        }
        name
    }

    pub fn label_name(&self, l: &Label) -> String {
        match l {
            Label::Stem => "<stem>".to_string(),
            Label::Affix(s) => self.symbol_name(*s),
        }
    }

    /// Find a symbol by surface, class and (optionally) sense.
    pub fn find_symbol(&self, surface: &str, class: AffixClass, sense: Option<&str>) -> Option<SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId).find(|&id| {
            let s = self.symbol(id);
            s.class == class && self.surface(id) == surface && s.sense.as_deref() == sense
        })
    }

    pub fn machine(&self, class: AffixClass) -> &ClassMachine {
        &self.machines[class.index()]
    }

    pub fn machines(&self) -> &[ClassMachine] {
        &self.machines
    }

    /// Left-to-right main machine over `[prefix?] <stem> suffix*`.
    pub fn main_ltr(&self) -> &Nfa<Label> {
        &self.main_ltr
    }

    /// Right-to-left main machine over `suffix* <stem> [prefix?]`, suffixes
    /// read from the end of the word.
    pub fn main_rtl(&self) -> &Dfa<Label> {
        &self.main_rtl
    }

    fn class_preds(&self, class: AffixClass) -> (BTreeSet<AffixClass>, bool) {
        let mut classes = BTreeSet::new();
        let mut stem = false;
        for (from, to) in &self.table.links {
            if node_class(to) == Some(class) {
                match from {
                    Node::Stem => stem = true,
                    Node::Start => {}
                    other => {
                        classes.insert(node_class(other).unwrap());
                    }
                }
            }
        }
        (classes, stem)
    }

    /// Classes whose affixes may come next when reading right to left.
    pub fn legal_next_classes(&self, at: Position) -> NextClasses {
        match at {
            Position::WordEnd => NextClasses { classes: self.entrances(), stem_gate: true },
            Position::After(c) => {
                let (classes, stem_gate) = self.class_preds(c);
                NextClasses { classes, stem_gate }
            }
        }
    }

    /// Classes where right-to-left analysis begins.
    pub fn entrances(&self) -> BTreeSet<AffixClass> {
        self.table.links.iter().filter(|(_, to)| *to == Node::End).filter_map(|(from, _)| node_class(from)).collect()
    }

    /// Classes after which only the stem gate (or nothing) remains.
    pub fn exits(&self) -> BTreeSet<AffixClass> {
        AffixClass::ALL.iter().copied().filter(|&c| self.class_preds(c).0.is_empty()).collect()
    }

    /// Does the composed machine accept this full label sequence (left to right)?
    pub fn accepts_ltr(&self, labels: &[Label]) -> bool {
        self.main_ltr.accepts(labels)
    }

    /// Right-to-left check of `suffixes` (word order), the stem gate and an
    /// optional prefix.
    pub fn accepts_rtl(&self, prefix: Option<SymbolId>, suffixes: &[SymbolId]) -> bool {
        let mut labels: Vec<Label> = suffixes.iter().rev().map(|&s| Label::Affix(s)).collect();
        labels.push(Label::Stem);
        labels.extend(prefix.map(Label::Affix));
        self.main_rtl.accepts(&labels)
    }

    fn export_nfa(&self, m: &Nfa<Label>) -> String {
        export_edge_list(m.num_states(), m.initial(), m.finals(), m.edges().iter().cloned(), |l| self.label_name(l))
    }

    fn export_dfa(&self, m: &Dfa<Label>) -> String {
        export_edge_list(
            m.num_states(),
            m.initial(),
            m.finals(),
            m.edges().into_iter().map(|(a, l, b)| (a, Some(l), b)),
            |l| self.label_name(l),
        )
    }

    /// Edge-list dump of a machine.
    pub fn export(&self, target: ExportTarget, direction: Direction) -> String {
        match (target, direction) {
            (ExportTarget::Class(c), Direction::RightToLeft) => self.export_dfa(&self.machine(c).rtl),
            (ExportTarget::Class(c), Direction::LeftToRight) => self.export_nfa(&self.machine(c).ltr),
            (ExportTarget::Main, Direction::RightToLeft) => self.export_dfa(&self.main_rtl),
            (ExportTarget::Main, Direction::LeftToRight) => self.export_nfa(&self.main_ltr),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportTarget {
    Class(AffixClass),
    Main,
}

impl std::str::FromStr for ExportTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "main" {
            return Ok(ExportTarget::Main);
        }
        s.parse::<u8>()
            .ok()
            .and_then(AffixClass::from_id)
            .map(ExportTarget::Class)
            .ok_or_else(|| format!("unknown export target '{s}' (expected 1..7 or main)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    RightToLeft,
    LeftToRight,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Stem => f.write_str("<stem>"),
            Label::Affix(s) => write!(f, "#{}", s.0),
        }
    }
}

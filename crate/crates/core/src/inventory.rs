//! Affix inventory: the seven affix classes, their generic forms and the
//! concrete allomorphs expanded from them.
//!
//! The inventory is read from a tab-separated grammar file (see
//! `data/affixes.tsv`). Each row is one affix in generic notation; rows are
//! expanded into surface allomorphs with [`expand_generic`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// The shipped affix table.
pub const SHIPPED_AFFIXES: &str = include_str!("../data/affixes.tsv");

/// Expected `(affixes, allomorphs)` per class, indexed by class id - 1.
pub const EXPECTED_COUNTS: [(usize, usize); 7] = [(24, 27), (23, 41), (13, 23), (71, 81), (23, 31), (11, 12), (7, 7)];

/// Expected totals over all classes.
pub const EXPECTED_TOTALS: (usize, usize) = (172, 222);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AffixKind {
    Inflectional,
    Derivational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AffixClass {
    TensePerson,
    Verb,
    RelativeVerb,
    Derivational,
    Noun,
    Number,
    Prefix,
}

impl AffixClass {
    pub const ALL: [AffixClass; 7] = [
        AffixClass::TensePerson,
        AffixClass::Verb,
        AffixClass::RelativeVerb,
        AffixClass::Derivational,
        AffixClass::Noun,
        AffixClass::Number,
        AffixClass::Prefix,
    ];

    pub fn from_id(id: u8) -> Option<AffixClass> {
        match id {
            1..=7 => Some(Self::ALL[usize::from(id - 1)]),
            _ => None,
        }
    }

    /// Table position, 1..=7.
    pub fn id(self) -> u8 {
        self as u8 + 1
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            AffixClass::TensePerson => "TensePerson",
            AffixClass::Verb => "Verb",
            AffixClass::RelativeVerb => "RelativeVerb",
            AffixClass::Derivational => "Derivational",
            AffixClass::Noun => "Noun",
            AffixClass::Number => "Number",
            AffixClass::Prefix => "Prefix",
        }
    }

    /// Human label as used in analysis listings.
    pub fn label(self) -> &'static str {
        match self {
            AffixClass::TensePerson => "Tense & Person suffix",
            AffixClass::Verb => "Verb suffix",
            AffixClass::RelativeVerb => "Relative verb suffix",
            AffixClass::Derivational => "Derivational suffix",
            AffixClass::Noun => "Noun suffix",
            AffixClass::Number => "Number suffix",
            AffixClass::Prefix => "Prefix",
        }
    }

    pub fn kind(self) -> AffixKind {
        match self {
            AffixClass::Derivational | AffixClass::Prefix => AffixKind::Derivational,
            _ => AffixKind::Inflectional,
        }
    }

    pub fn attachment(self) -> Attachment {
        if self == AffixClass::Prefix {
            Attachment::Prefix
        } else {
            Attachment::Suffix
        }
    }
}

impl fmt::Display for AffixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Attachment {
    Suffix,
    Prefix,
}

/// One row of an affix table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffixEntry {
    pub class: AffixClass,
    pub index_in_table: u32,
    pub generic_form: String,
    pub attachment: Attachment,
    pub gloss: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EntryId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AllomorphId(pub usize);

/// A concrete surface string produced from an entry's generic form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allomorph {
    pub surface: String,
    pub entry: EntryId,
}

/// The abbreviation letters and what they stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbbreviationRule {
    pub letter: char,
    pub expansions: &'static [&'static str],
}

pub const ABBREVIATIONS: [AbbreviationRule; 5] = [
    AbbreviationRule { letter: 'G', expansions: &["g", "k", "q"] },
    AbbreviationRule { letter: 'Y', expansions: &["a", "y"] },
    AbbreviationRule { letter: 'K', expansions: &["k", "g"] },
    AbbreviationRule { letter: 'Q', expansions: &["k", "g", "g'", "q"] },
    AbbreviationRule { letter: 'T', expansions: &["t", "d"] },
];

fn abbreviation(letter: char) -> Option<&'static AbbreviationRule> {
    ABBREVIATIONS.iter().find(|r| r.letter == letter)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("unknown abbreviation letter '{0}'")]
    UnknownLetter(char),
    #[error("illegal character '{0}' in generic form")]
    IllegalChar(char),
    #[error("unbalanced parentheses in generic form")]
    Unbalanced,
    #[error("empty generic form")]
    Empty,
}

/// Fold the apostrophe variants found in Uzbek Latin text to ASCII `'`.
pub fn fold_apostrophe(c: char) -> char {
    match c {
        '\u{2019}' | '\u{2018}' | '\u{02BB}' | '\u{02BC}' | '`' => '\'',
        other => other,
    }
}

fn is_form_letter(c: char) -> bool {
    c.is_ascii_lowercase() || c == '\''
}

enum Piece {
    Choice(&'static [&'static str]),
    Literal(char),
    Optional(Vec<Piece>),
}

fn parse_pieces(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, nested: bool) -> Result<Vec<Piece>, ExpandError> {
    let mut out = Vec::new();
    while let Some(c) = chars.next() {
        let c = fold_apostrophe(c);
        match c {
            '(' => {
                if nested {
                    return Err(ExpandError::Unbalanced);
                }
                let inner = parse_pieces(chars, true)?;
                if inner.is_empty() {
                    return Err(ExpandError::Unbalanced);
                }
                out.push(Piece::Optional(inner));
            }
            ')' => {
                return if nested { Ok(out) } else { Err(ExpandError::Unbalanced) };
            }
            c if c.is_ascii_uppercase() => {
                let rule = abbreviation(c).ok_or(ExpandError::UnknownLetter(c))?;
                out.push(Piece::Choice(rule.expansions));
            }
            c if is_form_letter(c) => out.push(Piece::Literal(c)),
            c => return Err(ExpandError::IllegalChar(c)),
        }
    }
    if nested {
        Err(ExpandError::Unbalanced)
    } else {
        Ok(out)
    }
}

fn expand_pieces(pieces: &[Piece]) -> Vec<String> {
    let mut acc = vec![String::new()];
    for piece in pieces {
        let options: Vec<String> = match piece {
            Piece::Literal(c) => vec![c.to_string()],
            Piece::Choice(list) => list.iter().map(|s| s.to_string()).collect(),
            Piece::Optional(inner) => {
                let mut v = expand_pieces(inner);
                v.push(String::new());
                v
            }
        };
        acc = acc.iter().flat_map(|prefix| options.iter().map(move |o| format!("{prefix}{o}"))).collect();
    }
    acc
}

/// Expand a generic affix form into its surface allomorphs.
///
/// Abbreviation letters are substituted in rule order and optional groups
/// are tried present before absent. Duplicates are dropped, keeping the first
/// occurrence.
pub fn expand_generic(generic_form: &str) -> Result<Vec<String>, ExpandError> {
    let mut chars = generic_form.chars().peekable();
    let pieces = parse_pieces(&mut chars, false)?;
    if pieces.is_empty() {
        return Err(ExpandError::Empty);
    }
    let mut seen = BTreeSet::new();
    let out: Vec<String> =
        expand_pieces(&pieces).into_iter().filter(|s| !s.is_empty() && seen.insert(s.clone())).collect();
    if out.is_empty() {
        return Err(ExpandError::Empty);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InventoryError {
    #[error("line {line}: expected 5 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: unknown class id '{value}'")]
    UnknownClass { line: usize, value: String },
    #[error("line {line}: bad table index '{value}'")]
    BadIndex { line: usize, value: String },
    #[error("line {line}: attachment must be S or P, found '{value}'")]
    BadAttachment { line: usize, value: String },
    #[error("line {line}: attachment {found:?} does not match class {class}")]
    AttachmentMismatch { line: usize, class: AffixClass, found: Attachment },
    #[error("line {line}: generic form '{form}': {source}")]
    BadForm { line: usize, form: String, source: ExpandError },
    #[error("line {line}: empty gloss")]
    EmptyGloss { line: usize },
    #[error("line {line}: duplicate row for class {class} index {index} (first at line {first})")]
    Duplicate { line: usize, first: usize, class: u8, index: u32 },
    #[error("{0}")]
    Counts(CountReport),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Per-class counts compared against the expected table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub rows: Vec<ClassCount>,
    pub total_entries: usize,
    pub total_allomorphs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub class: AffixClass,
    pub entries: usize,
    pub allomorphs: usize,
    pub expected_entries: usize,
    pub expected_allomorphs: usize,
}

impl ClassCount {
    pub fn ok(&self) -> bool {
        self.entries == self.expected_entries && self.allomorphs == self.expected_allomorphs
    }
}

impl CountReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(ClassCount::ok)
    }

    pub fn classes_ok(&self) -> usize {
        self.rows.iter().filter(|r| r.ok()).count()
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} of {} entries, {} of {} allomorphs",
            self.total_entries, EXPECTED_TOTALS.0, self.total_allomorphs, EXPECTED_TOTALS.1
        )?;
        for r in self.rows.iter().filter(|r| !r.ok()) {
            write!(
                f,
                "; class {} ({}): {}/{} affixes, {}/{} allomorphs",
                r.class.id(),
                r.class,
                r.entries,
                r.expected_entries,
                r.allomorphs,
                r.expected_allomorphs
            )?;
        }
        Ok(())
    }
}

/// All affix entries and their expanded allomorphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inventory {
    entries: Vec<AffixEntry>,
    allomorphs: Vec<Allomorph>,
    /// allomorph ids per entry, in expansion order
    entry_allomorphs: Vec<Vec<AllomorphId>>,
    by_class: [Vec<EntryId>; 7],
}

impl Inventory {
    /// The shipped inventory, validated against the expected counts.
    pub fn shipped() -> Inventory {
        Inventory::parse(SHIPPED_AFFIXES).expect("shipped affix table is valid")
    }

    /// Parse and validate against [`EXPECTED_COUNTS`].
    pub fn parse(text: &str) -> Result<Inventory, InventoryError> {
        let inv = Inventory::parse_unchecked(text)?;
        let report = inv.count_report();
        if report.ok() {
            Ok(inv)
        } else {
            Err(InventoryError::Counts(report))
        }
    }

    /// Parse rows without comparing counts to the expected table. Row-level
    /// checks (columns, class ids, characters, duplicates) still apply.
    pub fn parse_unchecked(text: &str) -> Result<Inventory, InventoryError> {
        let mut entries = Vec::new();
        let mut allomorphs = Vec::new();
        let mut entry_allomorphs = Vec::new();
        let mut by_class: [Vec<EntryId>; 7] = Default::default();
        let mut seen: BTreeMap<(u8, u32), usize> = BTreeMap::new();

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 5 {
                return Err(InventoryError::ColumnCount { line, found: cols.len() });
            }
            let class = cols[0]
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(AffixClass::from_id)
                .ok_or_else(|| InventoryError::UnknownClass { line, value: cols[0].to_string() })?;
            let index_in_table = cols[1]
                .trim()
                .parse::<u32>()
                .map_err(|_| InventoryError::BadIndex { line, value: cols[1].to_string() })?;
            let attachment = match cols[3].trim() {
                "S" => Attachment::Suffix,
                "P" => Attachment::Prefix,
                other => return Err(InventoryError::BadAttachment { line, value: other.to_string() }),
            };
            if attachment != class.attachment() {
                return Err(InventoryError::AttachmentMismatch { line, class, found: attachment });
            }
            let generic_form: String = cols[2].trim().chars().map(fold_apostrophe).collect();
            let surfaces = expand_generic(&generic_form).map_err(|source| InventoryError::BadForm {
                line,
                form: generic_form.clone(),
                source,
            })?;
            let gloss = cols[4].trim().to_string();
            if gloss.is_empty() {
                return Err(InventoryError::EmptyGloss { line });
            }
            if let Some(&first) = seen.get(&(class.id(), index_in_table)) {
                return Err(InventoryError::Duplicate { line, first, class: class.id(), index: index_in_table });
            }
            seen.insert((class.id(), index_in_table), line);

            let id = EntryId(entries.len());
            entries.push(AffixEntry { class, index_in_table, generic_form, attachment, gloss });
            by_class[class.index()].push(id);
            let ids = surfaces
                .into_iter()
                .map(|surface| {
                    allomorphs.push(Allomorph { surface, entry: id });
                    AllomorphId(allomorphs.len() - 1)
                })
                .collect();
            entry_allomorphs.push(ids);
        }
        Ok(Inventory { entries, allomorphs, entry_allomorphs, by_class })
    }

    pub fn count_report(&self) -> CountReport {
        let rows = AffixClass::ALL
            .iter()
            .map(|&class| {
                let (expected_entries, expected_allomorphs) = EXPECTED_COUNTS[class.index()];
                ClassCount {
                    class,
                    entries: self.by_class[class.index()].len(),
                    allomorphs: self.by_class[class.index()].iter().map(|e| self.entry_allomorphs[e.0].len()).sum(),
                    expected_entries,
                    expected_allomorphs,
                }
            })
            .collect();
        CountReport { rows, total_entries: self.entries.len(), total_allomorphs: self.allomorphs.len() }
    }

    pub fn entries(&self) -> &[AffixEntry] {
        &self.entries
    }

    pub fn allomorphs(&self) -> &[Allomorph] {
        &self.allomorphs
    }

    pub fn entry(&self, id: EntryId) -> &AffixEntry {
        &self.entries[id.0]
    }

    pub fn allomorph(&self, id: AllomorphId) -> &Allomorph {
        &self.allomorphs[id.0]
    }

    pub fn entry_of(&self, id: AllomorphId) -> &AffixEntry {
        self.entry(self.allomorphs[id.0].entry)
    }

    pub fn entries_of_class(&self, class: AffixClass) -> &[EntryId] {
        &self.by_class[class.index()]
    }

    pub fn allomorphs_of_entry(&self, id: EntryId) -> &[AllomorphId] {
        &self.entry_allomorphs[id.0]
    }

    pub fn find_entry(&self, class: AffixClass, index_in_table: u32) -> Option<EntryId> {
        self.by_class[class.index()].iter().copied().find(|e| self.entries[e.0].index_in_table == index_in_table)
    }

    /// Allomorphs of one class, longest surface first, then lexicographic.
    pub fn allomorphs_of_class(&self, class: AffixClass) -> Vec<(AllomorphId, &Allomorph)> {
        let mut out: Vec<(AllomorphId, &Allomorph)> = self.by_class[class.index()]
            .iter()
            .flat_map(|e| self.entry_allomorphs[e.0].iter())
            .map(|&id| (id, &self.allomorphs[id.0]))
            .collect();
        out.sort_by(|a, b| {
            let (la, lb) = (a.1.surface.chars().count(), b.1.surface.chars().count());
            lb.cmp(&la).then_with(|| a.1.surface.cmp(&b.1.surface)).then_with(|| a.0.cmp(&b.0))
        });
        out
    }
}

/// Read and validate an affix file.
pub fn load_inventory(path: impl AsRef<Path>) -> Result<Inventory, InventoryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| InventoryError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Inventory::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_abbreviation() {
        assert_eq!(expand_generic("Gancha").unwrap(), ["gancha", "kancha", "qancha"]);
        assert_eq!(expand_generic("Qaz").unwrap(), ["kaz", "gaz", "g'az", "qaz"]);
        assert_eq!(expand_generic("Tir").unwrap(), ["tir", "dir"]);
    }

    #[test]
    fn expand_identity_and_optional() {
        assert_eq!(expand_generic("bor").unwrap(), ["bor"]);
        assert_eq!(expand_generic("(i)ngiz").unwrap(), ["ingiz", "ngiz"]);
        assert_eq!(expand_generic("(uv)chan").unwrap(), ["uvchan", "chan"]);
        assert_eq!(expand_generic("(a)yotgan").unwrap(), ["ayotgan", "yotgan"]);
    }

    #[test]
    fn expand_errors() {
        assert_eq!(expand_generic("Xa"), Err(ExpandError::UnknownLetter('X')));
        assert_eq!(expand_generic("a(b"), Err(ExpandError::Unbalanced));
        assert_eq!(expand_generic("a)b"), Err(ExpandError::Unbalanced));
        assert_eq!(expand_generic("a-b"), Err(ExpandError::IllegalChar('-')));
        assert_eq!(expand_generic(""), Err(ExpandError::Empty));
    }

    #[test]
    fn expand_folds_apostrophe() {
        assert_eq!(expand_generic("do\u{2019}z").unwrap(), ["do'z"]);
    }

    #[test]
    fn single_row() {
        let inv = Inventory::parse_unchecked("1\t18\tyap\tS\tcontinuous tense\n").unwrap();
        assert_eq!(inv.entries().len(), 1);
        assert_eq!(inv.allomorphs().len(), 1);
        assert_eq!(inv.allomorphs()[0].surface, "yap");
        assert_eq!(inv.entries()[0].class, AffixClass::TensePerson);
    }

    #[test]
    fn empty_file_fails_counts() {
        let err = Inventory::parse("# nothing\n").unwrap_err();
        assert!(err.to_string().starts_with("0 of 172 entries"), "{err}");
    }

    #[test]
    fn row_errors_name_line() {
        let err = Inventory::parse_unchecked("# c\n1\t1\tdi\tS\n").unwrap_err();
        assert_eq!(err, InventoryError::ColumnCount { line: 2, found: 4 });
        let err = Inventory::parse_unchecked("9\t1\tdi\tS\tx\n").unwrap_err();
        assert!(matches!(err, InventoryError::UnknownClass { line: 1, .. }));
        let err = Inventory::parse_unchecked("1\t1\td-i\tS\tx\n").unwrap_err();
        assert!(matches!(err, InventoryError::BadForm { line: 1, .. }));
        let err = Inventory::parse_unchecked("1\t1\tdi\tP\tx\n").unwrap_err();
        assert!(matches!(err, InventoryError::AttachmentMismatch { line: 1, .. }));
        let err = Inventory::parse_unchecked("1\t1\tdi\tS\tx\n1\t1\tsa\tS\ty\n").unwrap_err();
        assert_eq!(err, InventoryError::Duplicate { line: 2, first: 1, class: 1, index: 1 });
    }

    #[test]
    fn shipped_counts() {
        let inv = Inventory::shipped();
        assert_eq!(inv.entries().len(), 172);
        assert_eq!(inv.allomorphs().len(), 222);
        let report = inv.count_report();
        for row in &report.rows {
            assert_eq!((row.entries, row.allomorphs), EXPECTED_COUNTS[row.class.index()]);
        }
    }

    #[test]
    fn prefixes_and_sorting() {
        let inv = Inventory::shipped();
        let prefixes: BTreeSet<&str> =
            inv.allomorphs_of_class(AffixClass::Prefix).iter().map(|(_, a)| a.surface.as_str()).collect();
        let expected: BTreeSet<&str> = ["ba", "be", "bo", "bar", "no", "ser", "alla"].into_iter().collect();
        assert_eq!(prefixes, expected);
        assert_eq!(inv.allomorphs_of_class(AffixClass::RelativeVerb).len(), 23);

        let rel = inv.allomorphs_of_class(AffixClass::Derivational);
        for w in rel.windows(2) {
            let (a, b) = (&w[0].1.surface, &w[1].1.surface);
            assert!(a.chars().count() > b.chars().count() || (a.chars().count() == b.chars().count() && a <= b));
        }
    }

    #[test]
    fn empty_class_has_no_allomorphs() {
        let inv = Inventory::parse_unchecked("1\t18\tyap\tS\tcontinuous tense\n").unwrap();
        assert!(inv.allomorphs_of_class(AffixClass::Number).is_empty());
    }

    #[test]
    fn attachment_follows_class() {
        let inv = Inventory::shipped();
        for e in inv.entries() {
            assert_eq!(e.attachment == Attachment::Prefix, e.class == AffixClass::Prefix);
            assert!(!e.generic_form.is_empty());
        }
    }
}

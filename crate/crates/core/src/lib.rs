//! Lexicon-free morphological analysis and stemming for Uzbek.
//!
//! Affixes are grouped into seven classes. Each class gets a left-to-right
//! machine over whole affixes, which is reversed and determinized into the
//! right-to-left machine used at runtime; the class machines are composed
//! into one main machine. Analysis strips suffixes from the end of a word
//! along that machine and at most one prefix from its start.
//!
//! ```
//! use uzstem::Analyzer;
//!
//! let analyzer = Analyzer::shipped();
//! let best = analyzer.best("kitoblarim");
//! assert_eq!(best.stem, "kitob");
//! assert_eq!(best.segmented(), "kitob-lar-im");
//! ```

pub mod analyzer;
pub mod cli;
pub mod fsm;
pub mod inventory;
pub mod morphotactics;
pub mod oracle;
pub mod synth;

pub use analyzer::{normalize, Analysis, Analyzer, AnalyzerConfig, Morpheme};
pub use inventory::{expand_generic, load_inventory, AffixClass, Inventory};
pub use morphotactics::{MorphotacticGraph, Position};

//! Print every analysis of the given words, best first.
//!
//! ```text
//! cargo run -p uzstem --example analyze_word -- bajartirilmayaptimi kitoblarim
//! ```

use uzstem::{normalize, Analyzer, AnalyzerConfig};

fn main() {
    let analyzer =
        Analyzer::shipped().with_config(AnalyzerConfig { emit_all: true, max_analyses: 0, ..Default::default() });
    let words: Vec<String> = std::env::args().skip(1).collect();
    let words = if words.is_empty() { vec!["bajartirilmayaptimi".to_string()] } else { words };
    for raw in words {
        let word = normalize(&raw);
        println!("{word}");
        for (rank, a) in analyzer.analyze(&word).iter().enumerate() {
            let parts: Vec<String> =
                a.morphemes().map(|m| format!("{}[{}: {}]", m.surface, m.class.name(), m.gloss)).collect();
            println!(
                "  {:>2}. {:<28} stem={:<12} stripped={} morphemes={}  {}",
                rank + 1,
                a.segmented(),
                a.stem,
                a.score.stripped,
                a.score.morphemes,
                parts.join(" ")
            );
        }
    }
}

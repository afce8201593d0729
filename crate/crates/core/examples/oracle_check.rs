//! Compare the analyzer's full analysis set with the brute-force segmenter
//! on random letter strings.
//!
//! ```text
//! cargo run -p uzstem --release --example oracle_check -- 2000
//! ```

use std::collections::BTreeSet;

use rand::SeedableRng;
use uzstem::oracle::enumerate_segmentations_oracle;
use uzstem::synth::random_letters;
use uzstem::{Analyzer, AnalyzerConfig};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let config = AnalyzerConfig { emit_all: true, max_analyses: 0, ..Default::default() };
    let analyzer = Analyzer::shipped().with_config(config);
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let mut diffs = 0;
    let mut total = 0;
    for _ in 0..n {
        let w = random_letters(&mut rng, 12);
        let got: BTreeSet<_> = analyzer.analyze(&w).iter().map(|a| a.key()).collect();
        let want = enumerate_segmentations_oracle(&w, analyzer.inventory(), analyzer.graph(), 2);
        total += want.len();
        if got != want {
            diffs += 1;
            println!("{w}: analyzer {} vs oracle {}", got.len(), want.len());
        }
    }
    println!("{n} words, {total} analyses, {diffs} discrepancies");
}

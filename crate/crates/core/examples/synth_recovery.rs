//! Synthesize words from random stems and sampled affix chains, then check
//! how often the best analysis recovers the stem.
//!
//! ```text
//! cargo run -p uzstem --release --example synth_recovery -- 10000
//! ```

use rand::SeedableRng;
use uzstem::synth::synthesize;
use uzstem::Analyzer;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let analyzer = Analyzer::shipped();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut misses = 0;
    for _ in 0..n {
        let s = synthesize(analyzer.graph(), &mut rng, 12, 0.0);
        let best = analyzer.best(&s.word);
        if best.stem != s.stem {
            misses += 1;
            let truth: Vec<&str> = s.suffixes.iter().map(|&x| analyzer.graph().surface(x)).collect();
            println!("{:<16} stem={:<8} truth={:<20} got={}", s.word, s.stem, truth.join("-"), best.segmented());
        }
    }
    println!("recovered {}/{} ({:.2}%)", n - misses, n, 100.0 * (n - misses) as f64 / n as f64);
}

//! Stem text from standard input line by line, keeping word order.
//!
//! ```text
//! echo "kitoblarim boryapsiz" | cargo run -p uzstem --example stem_stream
//! ```

use std::io::{self, BufRead, BufWriter, Write};

use uzstem::cli::tokenize;
use uzstem::{normalize, Analyzer};

fn main() -> io::Result<()> {
    let analyzer = Analyzer::shipped();
    let stdin = io::stdin();
    let mut out = BufWriter::new(io::stdout().lock());
    let mut tokens = 0usize;
    for line in stdin.lock().lines() {
        let line = line?;
        let stems: Vec<String> = tokenize(&line).map(|t| analyzer.stem(&normalize(t))).collect();
        tokens += stems.len();
        writeln!(out, "{}", stems.join(" "))?;
    }
    out.flush()?;
    eprintln!("{tokens} tokens");
    Ok(())
}

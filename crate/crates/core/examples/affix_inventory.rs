//! Per-class affix and allomorph counts of the built-in table, plus the
//! expansion of any generic forms given on the command line.
//!
//! ```text
//! cargo run -p uzstem --example affix_inventory -- "(i)nG" "chiliK"
//! ```

use uzstem::{expand_generic, AffixClass, Inventory};

fn main() {
    let inv = Inventory::shipped();
    let report = inv.count_report();
    for r in &report.rows {
        println!("{} {:<14} {:>3} affixes {:>3} allomorphs", r.class.id(), r.class.name(), r.entries, r.allomorphs);
    }
    println!("total          {:>3} affixes {:>3} allomorphs", report.total_entries, report.total_allomorphs);

    for form in std::env::args().skip(1) {
        match expand_generic(&form) {
            Ok(all) => println!("{form} -> {}", all.join(", ")),
            Err(e) => println!("{form} -> error: {e}"),
        }
    }

    println!("\nprefixes:");
    for id in inv.entries_of_class(AffixClass::Prefix) {
        let e = inv.entry(*id);
        println!("  {}-  {}", e.generic_form, e.gloss);
    }
}

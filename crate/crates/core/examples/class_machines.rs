//! Build one class machine, show its left-to-right and right-to-left forms,
//! and list what may precede each class when reading a word backwards.
//!
//! ```text
//! cargo run -p uzstem --example class_machines -- 1
//! ```

use uzstem::morphotactics::{Direction, ExportTarget};
use uzstem::{AffixClass, MorphotacticGraph, Position};

fn main() {
    let id: u8 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let class = AffixClass::from_id(id).expect("class id 1..7");
    let graph = MorphotacticGraph::shipped();
    let m = graph.machine(class);
    println!(
        "{}: ltr {} states / {} edges, rtl {} states / {} edges",
        class.label(),
        m.ltr.num_states(),
        m.ltr.edges().len(),
        m.rtl.num_states(),
        m.rtl.edges().len()
    );
    println!("sequences up to 2 affixes, read right to left:");
    for seq in m.rtl.enumerate_language(2).iter().take(20) {
        let names: Vec<String> = seq.iter().map(|l| graph.label_name(l)).collect();
        println!("  [{}]", names.join(" "));
    }

    println!("\nright-to-left machine:");
    print!("{}", graph.export(ExportTarget::Class(class), Direction::RightToLeft));

    println!("\nentrances {:?}, exits {:?}", graph.entrances(), graph.exits());
    let at_end = graph.legal_next_classes(Position::WordEnd);
    println!("at word end: {:?} (stem gate {})", at_end.classes, at_end.stem_gate);
    for c in AffixClass::ALL {
        let next = graph.legal_next_classes(Position::After(c));
        println!("after {:<13} {:?} (stem gate {})", c.name(), next.classes, next.stem_gate);
    }
}

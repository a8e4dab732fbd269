//! A genus split into spinor genera, with the representation evidence.
//!
//! cargo run --release --example spinor_genera -- 1,20,400,0,0,0

use ternary::genus::{genus_of, spinor_partition};
use ternary::TernaryForm;

fn main() -> ternary::Result<()> {
    let f: TernaryForm = std::env::args().nth(1).unwrap_or_else(|| "1,1,32,0,0,0".into()).parse()?;
    let part = spinor_partition(&genus_of(&f)?, 0, 10_000)?;
    println!("gen⟨{f}⟩: {} classes in {} spinor genera (neighbours at {})", part.classes.len(), part.block_count(), part.walk_prime);
    for b in 0..part.block_count() {
        let forms: Vec<String> = part.block_classes(b).iter().map(|g| format!("⟨{g}⟩")).collect();
        println!("  block {b}: {}", forms.join(" "));
    }
    for row in &part.exceptional_evidence {
        println!("  {}·{}² represented: {:?}", row.t, row.m, row.represented);
    }
    for row in &part.splitting_evidence {
        println!("  weighted measures at {}: {:?}", row.j, row.measures);
    }
    Ok(())
}

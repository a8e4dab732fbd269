//! Integers whose weighted representation measures differ between spinor genera.

use ternary::form;
use ternary::genus::{genus_of, spinor_partition, splitting_integer_scan};

fn main() -> ternary::Result<()> {
    for f in [form!(1, 1, 16), form!(1, 17, 289), form!(1, 5, 70, 5, 0, 0)] {
        let part = spinor_partition(&genus_of(&f)?, 0, 2000)?;
        let found = splitting_integer_scan(&part, 2000)?;
        println!("gen⟨{f}⟩: {} blocks, splitting integers ≤ 2000: {found:?}", part.block_count());
    }
    Ok(())
}

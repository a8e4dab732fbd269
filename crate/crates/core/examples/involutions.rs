//! Involutions on genera: k = 4 on gen⟨1,1,16n⟩ and k = 4, 25 on the four
//! labelled blocks of gen⟨1,20,400n⟩.
//!
//! cargo run --release --example involutions -- 29

use ternary::correspond::involution_scan;
use ternary::form;
use ternary::genus::{genus_of, spinor_partition};
use ternary::verify::label_400n_blocks;

fn main() -> ternary::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(Ok(29), |s| s.parse()).map_err(|_| ternary::Error::usage("n"))?;
    let small = spinor_partition(&genus_of(&form!(1, 1, 16 * n as i64))?, 0, 1000)?;
    let r = involution_scan(&small, 4)?;
    println!("gen⟨1,1,{}⟩: perfect {} crossing {}", 16 * n, r.perfect_matching, r.crosses_blocks);

    let part = spinor_partition(&genus_of(&form!(1, 20, 400 * n as i64))?, 0, 10_000)?;
    let labels = label_400n_blocks(&part, n, 10_000);
    println!("gen⟨1,20,{}⟩: {} classes, labels {labels:?}", 400 * n, part.classes.len());
    for k in [25, 4] {
        let r = involution_scan(&part, k)?;
        println!("k = {k}: perfect {}", r.perfect_matching);
        for i in 0..3 {
            println!("  ⟨{}⟩ partners per block {:?}", r.classes[i], r.partner_blocks(i));
        }
    }
    Ok(())
}

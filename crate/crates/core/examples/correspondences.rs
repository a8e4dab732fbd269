//! Matrix witnesses for mutual representation of k-multiples, the model
//! matrices for n = u² + v², and a correspondence graph between two genera.

use ternary::correspond::{chan_pair, correspondence_graph, model_matrices, respects_spinor};
use ternary::form;
use ternary::genus::{genus_of, spinor_partition};

fn main() -> ternary::Result<()> {
    let (p, q) = model_matrices(2, 1);
    println!("n = 5: P = {p:?}, Q = {q:?}");
    if let Some(pair) = chan_pair(&form!(1, 1, 80), &form!(1, 1, 16), 5)? {
        println!("⟨1,1,80⟩ ⊒ 5·⟨1,1,16⟩ via {:?}, back via {:?}", pair.forward.p, pair.backward.p);
    }
    let (upper, lower) = (genus_of(&form!(1, 1, 80))?, genus_of(&form!(1, 1, 16))?);
    let graph = correspondence_graph(&upper.classes, &lower.classes, 5)?;
    for e in &graph.edges {
        println!("  ⟨{}⟩ <-> ⟨{}⟩", graph.left[e.left], graph.right[e.right]);
    }
    let (lp, rp) = (spinor_partition(&upper, 0, 1000)?, spinor_partition(&lower, 0, 1000)?);
    println!("respects spinor genera: {}", respects_spinor(&graph, &lp, &rp)?);
    Ok(())
}

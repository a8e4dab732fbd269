//! Moving between discriminants Δ and pΔ through canonical shapes.
//!
//! cargo run --example ascent_descent -- 1,1,16,0,0,0 5

use ternary::correspond::{ascent_shape_trace, ascend, descend, descend_all};
use ternary::enumerate::canonical;
use ternary::TernaryForm;

fn main() -> ternary::Result<()> {
    let mut args = std::env::args().skip(1);
    let f: TernaryForm = args.next().unwrap_or_else(|| "1,1,16,0,0,0".into()).parse()?;
    let p: u64 = args.next().map_or(Ok(3), |s| s.parse()).map_err(|_| ternary::Error::usage("prime"))?;
    let trace = ascent_shape_trace(&f, p)?;
    println!("shape: vector {:?}, swapped {}, shear {}, ⟨{}⟩", trace.vector, trace.swapped, trace.shear_k, trace.shaped);
    let up = ascend(&f, p)?;
    println!("ascent ⟨{up}⟩ ≅ ⟨{}⟩, Δ = {}", canonical(&up), up.discriminant());
    println!("descent back ⟨{}⟩", canonical(&descend(&up, p)?));
    let all: Vec<String> = descend_all(&up, p)?.iter().map(|g| format!("⟨{g}⟩")).collect();
    println!("all descents {}", all.join(" "));
    Ok(())
}

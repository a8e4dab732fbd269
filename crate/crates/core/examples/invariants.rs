//! Discriminant, divisor, level, reciprocal and genus symbols of a form.
//!
//! cargo run --example invariants -- 2,2,9,2,2,0

use ternary::genus::{genus_symbols, same_genus};
use ternary::TernaryForm;

fn main() -> ternary::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "1,1,16,0,0,0".into());
    let f: TernaryForm = arg.parse()?;
    let inv = genus_symbols(&f)?;
    println!("⟨{f}⟩  Δ = {}  m = {}  N = {}", inv.delta, inv.divisor_m, inv.level_n);
    println!("reciprocal ⟨{}⟩ with divisor {}", inv.reciprocal, inv.reciprocal_divisor_mu);
    for (place, value) in inv.symbols_f.iter().chain(&inv.symbols_phi) {
        println!("  symbol at {place}: {value:+}");
    }
    let relabel = f.cyclic_relabel();
    println!("same genus as ⟨{relabel}⟩: {}", same_genus(&f, &relabel)?);
    Ok(())
}

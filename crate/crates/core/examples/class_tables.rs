//! Every class of a discriminant, grouped into genera, through the on-disk cache.
//!
//! cargo run --release --example class_tables -- 3375

use ternary::cache;

fn main() -> ternary::Result<()> {
    let delta: u64 = std::env::args().nth(1).map_or(Ok(128), |s| s.parse()).map_err(|_| ternary::Error::usage("discriminant"))?;
    let dir = cache::cache_dir(None);
    let (table, outcome) = cache::load_or_compute(&dir, delta)?;
    println!("Δ = {delta}: {} classes, {} genera ({outcome:?})", table.class_count(), table.genera.len());
    for (g, members) in table.genera.iter().enumerate() {
        let forms: Vec<String> = members.iter().map(|&i| format!("⟨{}⟩", table.classes[i])).collect();
        println!("  genus {g}: {}", forms.join(" "));
    }
    Ok(())
}

//! Representation numbers and theta series; the two classes of gen⟨1,1,16⟩
//! differ at k² by 4·(−1|k)·k.

use ternary::arith::jacobi_symbol;
use ternary::enumerate::{primitive_rep_count, rep_count, theta_series};
use ternary::form;

fn main() -> ternary::Result<()> {
    let (f, g) = (form!(1, 1, 16), form!(2, 2, 5, 2, 2, 0));
    println!("θ⟨{f}⟩ = {:?}", theta_series(&f, 20));
    println!("θ⟨{g}⟩ = {:?}", theta_series(&g, 20));
    for k in (1..=15u64).step_by(2) {
        let (rf, rg) = (rep_count(&f, k * k), rep_count(&g, k * k));
        println!(
            "k = {k:2}: r_f = {rf:4}  r_g = {rg:4}  difference {:5}  4(−1|k)k = {:5}  primitive r_f = {}",
            rf as i64 - rg as i64,
            4 * jacobi_symbol(-1, k as i64)? as i64 * k as i64,
            primitive_rep_count(&f, k * k)
        );
    }
    Ok(())
}

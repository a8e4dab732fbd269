//! Kneser p-neighbours and the genus they generate.

use ternary::form;
use ternary::neighbors::{default_prime, genus_primes, neighbor_closure, p_neighbors};

fn main() -> ternary::Result<()> {
    let f = form!(1, 1, 32);
    let p = default_prime(f.discriminant());
    for g in p_neighbors(&f, p)? {
        println!("{p}-neighbour ⟨{g}⟩");
    }
    let primes = genus_primes(f.discriminant(), 4);
    let genus = neighbor_closure(&f, &primes, 1000)?;
    println!("closure at {primes:?}: {} classes", genus.len());
    Ok(())
}

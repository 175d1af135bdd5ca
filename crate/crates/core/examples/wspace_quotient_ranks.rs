//! Dimensions of the truncated `W` quotient and a few reductions.
//!
//! cargo run --example wspace_quotient_ranks

use wcalc::lattice::Window;
use wcalc::wspace::{build_relation_basis, iota_star, quotient_rank, relation, theta};

fn main() -> wcalc::Result<()> {
    for b in 1..=2usize {
        let top = if b == 1 { 6 } else { 2 };
        let ranks: Vec<String> = (1..=top).map(|n| quotient_rank(Window::new(b, n)).to_string()).collect();
        println!("rank {b} lattice, N = 1..{top}: {}", ranks.join(" "));
    }

    let rb = build_relation_basis(Window::new(1, 3));
    let r = relation(&vec![2].into(), &vec![-1].into())?;
    println!("\nrelation((2),(-1)) = {r}");
    println!("  reduces to {}", rb.reduce(&r)?);

    let v = &theta(&[1], &[-2]) - &theta(&[3], &[1]);
    println!("v           = {v}");
    println!("reduce(v)   = {}", rb.reduce(&v)?);
    println!("reduce(i*v) = {}", rb.reduce(&iota_star(&v))?);

    match rb.reduce(&theta(&[5], &[1])) {
        Err(e) => println!("theta_(5),(1): {e}"),
        Ok(x) => println!("theta_(5),(1) -> {x}"),
    }
    Ok(())
}

//! Vectors of `Z[G \ 1]` fixed by conjugation, and conjugation orbits.
//!
//! cargo run --example fixed_vectors

use wcalc::groupring::fixed_vectors_within;
use wcalc::groupword::GroupPresentation;

fn main() -> wcalc::Result<()> {
    let p = GroupPresentation::new(vec![0, 4])?;
    let (s, t) = (p.generator(0)?, p.generator(1)?);

    let x = p.multiply(&s, &t)?;
    println!("orbit of {x} under C_t: {:?}", p.conjugation_orbit(&t, &x, 8)?);
    println!("orbit of {x} under C_s: {:?}", p.conjugation_orbit(&s, &x, 8)?);

    let mut cands = Vec::new();
    for i in -3..=3 {
        for j in 1..=3 {
            cands.push(p.word(&[(0, i), (1, j)])?);
            cands.push(p.word(&[(1, j), (0, i)])?);
            cands.push(p.power(&s, i)?);
        }
    }
    for gens in [vec![s.clone()], vec![t.clone()], vec![s.clone(), t.clone()]] {
        let fixed = fixed_vectors_within(&p, &gens, &cands)?;
        let names: Vec<String> = gens.iter().map(ToString::to_string).collect();
        println!("\nfixed by {{{}}}: {} basis vectors", names.join(", "), fixed.len());
        for f in fixed.iter().take(6) {
            println!("  {f}");
        }
    }
    Ok(())
}

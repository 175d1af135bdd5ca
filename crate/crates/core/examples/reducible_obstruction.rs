//! The twisted loop class over `Z * Z/3` and the orbit sums that keep it
//! from being conjugate to the standard one.
//!
//! cargo run --example reducible_obstruction

use wcalc::certify::{reducible_certificate, Evidence};
use wcalc::embpi1::{loop_class_standard, loop_class_twisted};
use wcalc::groupring::dax_composite;
use wcalc::groupword::GroupPresentation;

fn main() -> wcalc::Result<()> {
    let p = GroupPresentation::new(vec![0, 3])?;
    let (s, t) = (p.generator(0)?, p.generator(1)?);
    let c = [1, -2];
    let alpha = p.multiply(&s, &t)?;
    let beta0 = dax_composite(&p, &c, &alpha)?;
    println!("alpha = {alpha}, c = {c:?}");
    println!("beta0 = {beta0}");
    let std = loop_class_standard(&p, &s, &t)?;
    let tw = loop_class_twisted(&p, &s, &t, &beta0)?;
    println!("standard loop = ({}, {})", std.ring_part, std.group_part);
    println!("twisted loop  = ({}, {})", tw.ring_part, tw.group_part);

    let cert = reducible_certificate(&p, &s, &t, &c)?;
    println!("\nverdict: {:?} (re-verified: {})", cert.verdict, cert.verify());
    if let Evidence::Reducible { normalized, expected_orbits, .. } = &cert.evidence {
        println!("after conjugating by s^-1: ({}, {})", normalized.ring_part, normalized.group_part);
        for o in &normalized.obstructions {
            println!(
                "  orbit of {} ({}): sum {}",
                o.representative,
                if o.finite { "finite" } else { "infinite" },
                o.sum
            );
        }
        for l in expected_orbits {
            println!("  k = {}: orbit of {} expected {}, found {}", l.k, l.word, l.expected, l.observed);
        }
    }
    Ok(())
}

//! Independence and antisymmetry certificates for supplied classes.
//!
//! cargo run --example independence

use wcalc::certify::{antisymmetry_check, independence_certificate, Evidence};
use wcalc::lattice::Window;
use wcalc::wspace::{iota_star, theta};
use wcalc::Q;

fn main() -> wcalc::Result<()> {
    let w = Window::new(1, 3);
    let u = theta(&[1], &[-2]);
    let v = &theta(&[3], &[1]) + &theta(&[2], &[-1]).scaled(&Q::new(1, 2));
    let family = [&u - &iota_star(&u), &v - &iota_star(&v)];

    let cert = independence_certificate(&family, w)?;
    if let Evidence::Independence { rank, count, echelon, .. } = &cert.evidence {
        println!("independence: {:?}, rank {rank} of {count}", cert.verdict);
        for row in echelon {
            println!("  {row}");
        }
    }
    let prop = [family[0].clone(), family[0].scaled(&Q::from_int(-3))];
    println!("proportional family: {:?}", independence_certificate(&prop, w)?.verdict);

    println!("antisymmetry of the family: {:?}", antisymmetry_check(&family, w)?.verdict);
    let cert = antisymmetry_check(&[u, v], w)?;
    if let Evidence::Antisymmetry { failures, .. } = &cert.evidence {
        println!("antisymmetry of the raw classes: {:?}", cert.verdict);
        for f in failures {
            println!("  class {}: i*v + v = {}", f.index, f.residue);
        }
    }
    Ok(())
}

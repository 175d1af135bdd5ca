//! Coface maps on a bracket of rotation classes, the pairing, and the
//! comparison of the image spans with `W` at a small window.
//!
//! cargo run --example coface_pairing

use wcalc::confpair::{bk_quotient_check, closed_form_generator, coface, theta_map, BracketClass, GeneratorSymbol};
use wcalc::lattice::Window;

fn main() -> wcalc::Result<()> {
    let (a, b) = (vec![2].into(), vec![-1].into());
    let x = BracketClass::bracket(GeneratorSymbol::new(1, 2, a)?, GeneratorSymbol::new(1, 2, b)?);
    println!("x = {x}");
    for k in 0..=3u8 {
        let d = coface(k, &x)?;
        let t = theta_map(&d);
        let expect = closed_form_generator(k, &vec![2].into(), &vec![-1].into());
        println!("\nd^{k} x = {d}");
        println!("  Theta = {t}");
        println!("  closed form agrees: {}", t == expect);
    }

    for w in [Window::new(1, 1), Window::new(1, 2), Window::new(1, 3), Window::new(2, 1)] {
        let r = bk_quotient_check(w);
        println!(
            "\nrank {} N = {}: {} generators, image rank {}, quotient {} vs W {}, bijection {}",
            w.rank, w.bound, r.dim_generators, r.rank_images, r.rank_bk, r.rank_w, r.basis_bijection
        );
    }
    Ok(())
}

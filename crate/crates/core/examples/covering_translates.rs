//! Translates of a curve under deck transformations: equal and negated
//! translates add up after retraction.
//!
//! cargo run --example covering_translates

use wcalc::certify::{irreducible_certificate, CurveDatum, CurveRelation, Evidence, IrreducibleInput};
use wcalc::lattice::Window;
use wcalc::wspace::theta;

fn curve(c: &[i64], n: i64, relation: CurveRelation) -> CurveDatum {
    CurveDatum { image_class: c.to_vec().into(), intersection: n, relation }
}

fn main() -> wcalc::Result<()> {
    // synthetic iota-antisymmetric class
    let v = &theta(&[1], &[-2]) - &theta(&[-1], &[2]);
    let curves = vec![
        curve(&[1, 1, 0], 2, CurveRelation::Equal),
        curve(&[-1, -1, 0], -2, CurveRelation::Negated),
        curve(&[-1, -1, 0], -2, CurveRelation::Negated),
        curve(&[0, 1, 3], 5, CurveRelation::Independent),
    ];
    let input = IrreducibleInput { classes: vec![v], coefficients: vec![1], curves, window: Window::new(1, 2) };
    let cert = irreducible_certificate(&input)?;
    if let Evidence::Irreducible { tally, k, psi, retracted, closed_form_holds, reduced, .. } = &cert.evidence {
        println!("tally {tally:?}, k = {k}");
        println!("Psi       = {psi}");
        println!("retracted = {retracted}");
        println!("closed form k * #1 * v holds: {closed_form_holds}");
        println!("reduced   = {reduced}");
    }
    println!("verdict: {:?}", cert.verdict);
    Ok(())
}

//! Loads a scenario file and prints its report.
//!
//! cargo run --example run_scenario -- scenarios/irreducible_translates.json

use std::path::PathBuf;

use wcalc::report::Report;
use wcalc::scenario::Scenario;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/reducible_free_c1.json"))
    });
    let s = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    match s.run(None) {
        Ok(cert) => {
            let r = Report::new(&s, s.effective_window(None), cert);
            println!("{}", r.summary());
            print!("{}", r.to_json());
        }
        Err(e) => eprintln!("{e}"),
    }
}

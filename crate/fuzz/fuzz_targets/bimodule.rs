#![no_main]

use libfuzzer_sys::fuzz_target;
use pathcat::bimodule::parse_bimodule;
use pathcat::dsl::parse_presentation;
use pathcat::{Presentation, Rational};

fn fixture(text: &str) -> Presentation<Rational> {
    parse_presentation(text).expect("fixture parses")
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tt = fixture(include_str!("../../fixtures/R.qv"));
    let tu = fixture(include_str!("../../fixtures/Q.qv"));
    if let Ok(m) = parse_bimodule(text, &tu, &tt) {
        let _ = m.validate(&tu, &tt);
    }
});

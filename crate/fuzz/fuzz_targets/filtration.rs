#![no_main]

use libfuzzer_sys::fuzz_target;
use pathcat::dsl::parse_presentation;
use pathcat::qh::parse_filtration;
use pathcat::{Presentation, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let p: Presentation<Rational> = parse_presentation(include_str!("../../fixtures/linear.qv")).expect("fixture parses");
    let _ = parse_filtration(text, &p.quiver);
});

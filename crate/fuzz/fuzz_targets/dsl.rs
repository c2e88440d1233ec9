#![no_main]

use libfuzzer_sys::fuzz_target;
use pathcat::dsl::parse_presentation;
use pathcat::{Fp, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_presentation::<Rational>(text);
    let _ = parse_presentation::<Fp<3>>(text);
});

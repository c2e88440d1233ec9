#![no_main]

use libfuzzer_sys::fuzz_target;
use pathcat::dsl::parse_presentation;
use pathcat::module::parse_module;
use pathcat::{Presentation, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let p: Presentation<Rational> = parse_presentation(include_str!("../../fixtures/mesh.qv")).expect("fixture parses");
    if let Ok(m) = parse_module::<Rational>(text, &p.quiver) {
        let _ = m.check_relations(&p);
    }
});

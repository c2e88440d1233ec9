#![no_main]

use libfuzzer_sys::fuzz_target;
use pathcat::dsl::{format_presentation, parse_presentation};
use pathcat::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_presentation::<Rational>(text) else { return };
    let printed = format_presentation(&p);
    let again = parse_presentation::<Rational>(&printed).expect("formatted presentation reparses");
    assert_eq!(again.quiver, p.quiver);
    assert_eq!(format_presentation(&again), printed);
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use mfk_core::kernel::Names;
use mfk_core::parse::{parse_expr, NoScope};

// Anything that parses must print to text that parses back to the same value.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let names = Names::default_for(2, 1);
    if let Ok(e) = parse_expr(text, &names, &NoScope) {
        let printed = names.expr(&e);
        let back = parse_expr(&printed, &names, &NoScope).expect("printed form parses");
        assert_eq!(back, e, "{printed}");
    }
});

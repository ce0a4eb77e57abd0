#![no_main]

use libfuzzer_sys::fuzz_target;
use mfk_core::kernel::Names;
use mfk_core::parse::{parse_expr, NoScope};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let names = Names::default_for(2, 1);
        let _ = parse_expr(text, &names, &NoScope);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use mfk_core::spec::parse_action_spec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Errors are fine; panics are not.
        let _ = parse_action_spec(text);
    }
});

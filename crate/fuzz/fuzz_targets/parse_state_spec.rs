#![no_main]

use libfuzzer_sys::fuzz_target;
use tomoarea::StateSpec;

// Anything that parses must print back to a string that parses to the same
// state.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = text.parse::<StateSpec>() {
        let printed = spec.to_string();
        let again: StateSpec = printed.parse().expect("printed spec parses");
        assert_eq!(again, spec, "{printed}");
    }
});

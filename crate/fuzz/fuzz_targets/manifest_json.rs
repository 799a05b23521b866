#![no_main]

use libfuzzer_sys::fuzz_target;
use tomoarea::homodyne::Manifest;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = Manifest::from_json(text) {
        let back = Manifest::from_json(&m.to_json().expect("serializes")).expect("roundtrip parses");
        assert_eq!(back, m);
    }
});

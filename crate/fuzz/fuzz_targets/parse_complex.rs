#![no_main]

use libfuzzer_sys::fuzz_target;
use tomoarea::states::parse_complex;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(text) {
        assert!(z.re.is_finite() && z.im.is_finite(), "{text} -> {z}");
    }
});

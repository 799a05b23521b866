#![no_main]

use libfuzzer_sys::fuzz_target;
use tomoarea::homodyne::{estimate_area, parse_records};
use tomoarea::homodyne::HomodyneDataset;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = parse_records(data) else { return };
    assert!(records.iter().all(|(t, x)| t.is_finite() && x.is_finite()));
    if let Ok(set) = HomodyneDataset::from_records(records, None) {
        // errors are fine; panics are not
        let _ = estimate_area(&set);
    }
});

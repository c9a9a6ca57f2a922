#![no_main]

use libfuzzer_sys::fuzz_target;
use qcgrowth::{parse_reports_csv, reports_to_csv};

// Anything that parses must re-render and re-parse to the same rows: the
// second pass sees canonical formatting, so this checks both directions.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(reports) = parse_reports_csv(text) {
        let rendered = reports_to_csv(&reports);
        let reparsed = parse_reports_csv(&rendered).expect("canonical rendering must parse");
        assert_eq!(reparsed, reports);
    }
});

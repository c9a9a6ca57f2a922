#![no_main]

use libfuzzer_sys::fuzz_target;
use qcgrowth::RadialTable;

// Arbitrary bytes must either parse into a table whose invariants hold or
// fail with a typed error; panics and invariant leaks are the findings.
fuzz_target!(|data: &[u8]| {
    if let Ok(table) = RadialTable::parse_bytes(data) {
        let rows = table.rows();
        assert!(rows.len() >= 2);
        assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(rows.iter().all(|&(r, v)| r.is_finite() && v.is_finite()));
        assert_eq!(table.min_radius(), rows[0].0);
        assert_eq!(table.max_radius(), rows[rows.len() - 1].0);
    }
});

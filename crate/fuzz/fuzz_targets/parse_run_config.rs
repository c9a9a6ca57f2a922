#![no_main]

use libfuzzer_sys::fuzz_target;
use qcgrowth::RunConfig;

// Config parsing is pure (no file IO), so any byte soup is fair game. A
// config that parses must satisfy the invariants the accessors rely on.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::from_json_str(text) {
        assert!(cfg.r0 > 0.0);
        assert!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0);
        assert!(cfg.exponent_p <= 2.0);
        if let Ok(grid) = cfg.grid() {
            assert!(grid.len() >= 8);
            assert!(grid[0] > cfg.r0);
            assert!(grid.windows(2).all(|w| w[1] > w[0]));
        }
        if cfg.family.is_some() {
            let profile = cfg.profile().expect("validated family must build");
            assert!(profile.dilatation_at_radius(1.0).map_or(true, |k| k >= 1.0));
        }
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use ramgape::env::{parse_instance_csv, BanditInstance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(arms) = parse_instance_csv(text) {
        // Whatever parses must describe valid Beta laws.
        for arm in &arms {
            let m = arm.moments();
            assert!(m.mean > 0.0 && m.mean < 1.0);
            assert!(m.variance >= 0.0);
        }
        if let Ok(instance) = BanditInstance::with_rho(arms, 0.01) {
            let _ = ramgape::oracle::gaps(&instance.objective_points());
        }
    }
});

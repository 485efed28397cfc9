#![no_main]

use dcgraph::dropping::DropPolicy;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(policy) = DropPolicy::parse(text) {
        assert!((0.0..=1.0).contains(&policy.p));
        let shown = policy.to_string();
        let again = DropPolicy::parse(&shown).expect("displayed policy parses");
        assert_eq!(again.to_string(), shown);
    }
});

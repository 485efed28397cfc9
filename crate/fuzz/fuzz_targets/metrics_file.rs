#![no_main]

use dcgraph_bench::{parse_metrics, write_metrics};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = parse_metrics(text) else { return };
    let attributes: Vec<(&str, String)> = file.attributes.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let written = write_metrics(&attributes, &file.records);
    let again = parse_metrics(&written).expect("written metrics parse");
    assert_eq!(again.records, file.records);
});

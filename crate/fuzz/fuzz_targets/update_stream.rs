#![no_main]

use dcgraph::graph::{parse_update_stream, write_update_stream, Interner};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut vertices = Interner::new();
    let mut labels = Interner::new();
    let Ok(batches) = parse_update_stream(text, &mut vertices, &mut labels, true, 1) else { return };
    for (i, b) in batches.iter().enumerate() {
        assert_eq!(b.version, 1 + i as u64);
    }
    // Writing and re-reading must give the same batches.
    let written = write_update_stream(&batches, &vertices, &labels);
    let (mut v2, mut l2) = (vertices.clone(), labels.clone());
    let again = parse_update_stream(&written, &mut v2, &mut l2, true, 1).expect("written stream parses");
    assert_eq!(again, batches);
});

#![no_main]

use dcgraph::graph::Interner;
use dcgraph::query::parse_query_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut vertices = Interner::new();
    for name in ["a", "b", "c", "d", "e", "0", "1", "2"] {
        vertices.intern(name);
    }
    let mut labels = Interner::new();
    for name in ["x", "y", "knows", "likes"] {
        labels.intern(name);
    }
    if let Ok(queries) = parse_query_file(text, &vertices, &labels) {
        for q in &queries {
            let _ = q.operator();
        }
    }
});

#![no_main]

use dcgraph::graph::{parse_edge_list, Graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for (weighted, labeled) in [(false, false), (true, false), (true, true)] {
        if let Ok(list) = parse_edge_list(text, weighted, labeled) {
            let n = list.vertices.len() as u32;
            assert!(list.edges.iter().all(|e| e.src.0 < n && e.dst.0 < n));
            let g = Graph::from_edges(list.vertices.len(), &list.edges);
            assert!(g.vertex_count() >= list.vertices.len());
        }
    }
});

use super::{Edge, EdgeUpdate, Graph, UpdateBatch};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shuffles `edges` with a seeded generator; the first
/// `floor(initial_fraction * |E|)` edges form the initial graph and the rest
/// become the insertion stream, in shuffle order.
pub fn split_for_dynamism(
    edges: &[Edge],
    seed: u64,
    initial_fraction: f64,
) -> Result<(Vec<Edge>, Vec<Edge>)> {
    if !(initial_fraction > 0.0 && initial_fraction < 1.0) {
        return Err(Error::Workload(format!(
            "initial fraction {initial_fraction} must lie strictly between 0 and 1"
        )));
    }
    let mut shuffled = edges.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (initial_fraction * edges.len() as f64).floor() as usize;
    let stream = shuffled.split_off(cut);
    Ok((shuffled, stream))
}

/// Replaces every weight with a seeded draw from 1..=10.
pub fn assign_random_weights(edges: &mut [Edge], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for e in edges {
        e.weight = rng.gen_range(1..=10);
    }
}

/// Chops an insertion stream into at most `batch_count` batches of
/// `batch_size` insertions, numbered from `first_version`.
pub fn insertion_batches(
    stream: &[Edge],
    batch_size: usize,
    batch_count: usize,
    first_version: u64,
) -> Vec<UpdateBatch> {
    stream
        .chunks(batch_size.max(1))
        .take(batch_count)
        .enumerate()
        .map(|(i, chunk)| {
            UpdateBatch::new(
                first_version + i as u64,
                chunk.iter().copied().map(EdgeUpdate::insert).collect(),
            )
        })
        .collect()
}

/// Turns `round(deletion_fraction * n)` seeded-chosen positions of an
/// insertion workload into deletion batches.
///
/// A deletion batch has the same size as the insertion batch it replaces and
/// removes uniformly random edges present at that point of the replay. The
/// remaining positions consume the original insertion batches in order.
pub fn make_deletion_workload(
    initial: &Graph,
    stream: &[UpdateBatch],
    deletion_fraction: f64,
    seed: u64,
) -> Result<Vec<UpdateBatch>> {
    if !(0.0..=1.0).contains(&deletion_fraction) {
        return Err(Error::Workload(format!(
            "deletion fraction {deletion_fraction} is outside [0, 1]"
        )));
    }
    let n = stream.len();
    let deletions = (deletion_fraction * n as f64).round() as usize;
    if deletions == 0 {
        return Ok(stream.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(&mut rng);
    let mut is_deletion = vec![false; n];
    for &p in &positions[..deletions] {
        is_deletion[p] = true;
    }

    let mut graph = initial.clone();
    let mut inserts = stream.iter();
    let mut out = Vec::with_capacity(n);
    for (slot, &delete) in is_deletion.iter().enumerate() {
        let version = initial.version() + 1 + slot as u64;
        let entries = if delete {
            let size = stream[slot].entries.len().max(1);
            let mut entries = Vec::with_capacity(size);
            for _ in 0..size {
                if graph.edge_count() == 0 {
                    return Err(Error::Workload(format!(
                        "batch {version} asks for a deletion but the graph has no edges"
                    )));
                }
                let e = graph
                    .edge_at(rng.gen_range(0..graph.edge_count()))
                    .expect("index below edge count");
                graph.remove_edge(&e)?;
                entries.push(EdgeUpdate::delete(e));
            }
            entries
        } else {
            let b = inserts.next().expect("fewer insertions than slots");
            for u in &b.entries {
                match u.sign {
                    super::Sign::Plus => graph.insert_edge(u.edge),
                    super::Sign::Minus => graph.remove_edge(&u.edge)?,
                }
            }
            b.entries.clone()
        };
        out.push(UpdateBatch::new(version, entries));
    }
    Ok(out)
}

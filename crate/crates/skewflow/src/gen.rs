//! Deterministic instance generators.
//!
//! Every generator draws from a ChaCha stream derived from one 64-bit seed,
//! so `(seed, stream)` pins an instance exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blockphase::MbpInstance;
use crate::error::{invalid, Result};
use crate::reductions::MatchingInstance;
use crate::ssgraph::{SkewGraph, SkewSymmetricNetwork};

/// Independent generator for sub-stream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random skew-symmetric graph with `pairs` node pairs and `arc_pairs` arc pairs.
/// Each arc leaves s with probability 0.2 and enters s' with probability
/// 0.1; otherwise its ends are inner nodes. Loops are skipped.
pub fn random_skew_graph(rng: &mut impl Rng, pairs: usize, arc_pairs: usize) -> SkewGraph {
    let n = 2 * pairs;
    let mut g = SkewGraph::new(n);
    if n < 4 {
        return g;
    }
    for _ in 0..arc_pairs {
        let tail = if rng.gen_bool(0.2) { 0 } else { rng.gen_range(2..n) };
        let head = if rng.gen_bool(0.1) { 1 } else { rng.gen_range(2..n) };
        if tail != head {
            g.add_pair(tail, head);
        }
    }
    g
}

/// Random skew-symmetric network with capacities in `1..=max_cap`.
pub fn random_ssf(rng: &mut impl Rng, pairs: usize, arc_pairs: usize, max_cap: i64) -> SkewSymmetricNetwork {
    let g = random_skew_graph(rng, pairs, arc_pairs);
    let mut net = SkewSymmetricNetwork::new(g.node_count);
    for a in (0..g.arc_count()).step_by(2) {
        net.add_pair(g.tail[a], g.head[a], rng.gen_range(1..=max_cap));
    }
    net
}

/// Random simple undirected graph with `n` vertices and up to `m` edges.
pub fn random_graph(rng: &mut impl Rng, n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 && m > 0 {
        return invalid("need two vertices for an edge");
    }
    let all = n * n.saturating_sub(1) / 2;
    if m > all {
        return invalid(format!("{m} edges exceed the {all} possible"));
    }
    if 2 * m > all {
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(rng);
        pairs.truncate(m);
        pairs.sort_unstable();
        return Ok(pairs);
    }
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    Ok(edges)
}

/// Matching instance on a random graph with unit bounds.
pub fn random_matching(rng: &mut impl Rng, n: usize, m: usize) -> Result<MatchingInstance> {
    Ok(MatchingInstance::unit(n, random_graph(rng, n, m)?))
}

/// Random layered DAG turned into an MBP instance with `pairs` source pairs;
/// cleaned so that every node lies on a source-to-sink path.
pub fn random_mbp(rng: &mut impl Rng, inner: usize, pairs: usize, arcs: usize, max_cap: i64) -> MbpInstance {
    let n = 2 * pairs + inner + 1;
    let sink = n - 1;
    let mut inst = MbpInstance::new(n, sink);
    for p in 0..pairs {
        inst.pairs.push((2 * p, 2 * p + 1));
    }
    // order: sources, inner nodes 2p..2p+inner, sink
    for _ in 0..arcs {
        let tail = rng.gen_range(0..sink);
        let lo = if tail < 2 * pairs { 2 * pairs } else { tail + 1 };
        if lo > sink {
            continue;
        }
        let head = if rng.gen_bool(0.15) { sink } else { rng.gen_range(lo..=sink) };
        let cap = if max_cap > 1 { rng.gen_range(1..=max_cap) } else { 1 };
        inst.add_arc(tail, head, cap);
    }
    inst.clean()
}

/// Dense random graph with roughly `n^exponent` edges (capped at all pairs).
pub fn dense_graph(rng: &mut impl Rng, n: usize, exponent: f64) -> Result<Vec<(usize, usize)>> {
    let all = n * n.saturating_sub(1) / 2;
    let m = ((n as f64).powf(exponent).ceil() as usize).min(all);
    random_graph(rng, n, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_random_graph_deterministic() {
        let a = random_graph(&mut rng_for(7, 0), 12, 20).unwrap();
        let b = random_graph(&mut rng_for(7, 0), 12, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(random_graph(&mut rng_for(7, 0), 4, 7).is_err());
    }

    #[test]
    fn test_random_ssf_valid() {
        for k in 0..50 {
            let net = random_ssf(&mut rng_for(3, k), 5, 10, 3);
            assert!(crate::ssgraph::validate_network(&net).is_ok());
        }
    }
}

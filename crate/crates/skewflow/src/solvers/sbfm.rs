//! Shortest blocking IS-flow method: each phase saturates every shortest
//! regular augmenting path at once, so the r-distance strictly grows.

use std::collections::HashMap;

use super::{check_input, restore_odd_barrier, split_residual, Algorithm, SolveReport};
use crate::blockphase::totally_blocking_isflow;
use crate::error::Result;
use crate::regpath::{shortest_unit_sra, SraOutcome, TrimmedZeroGraph};
use crate::ssgraph::{superpose, ArcId, IsFlow, ResidualNetwork, SkewSymmetricNetwork, SplitGraph, SINK, SOURCE};

/// Acyclic network on the residual arcs of the trimmed 0-graph.
struct PhaseNetwork {
    net: SkewSymmetricNetwork,
    /// Phase arc -> residual arc.
    origin: Vec<ArcId>,
}

fn phase_network(res: &ResidualNetwork, split: &SplitGraph, tz: &TrimmedZeroGraph) -> PhaseNetwork {
    let mut ends: HashMap<ArcId, (usize, usize)> = HashMap::new();
    for (e, &se) in tz.arc_map.iter().enumerate() {
        let a = split.omega[se];
        let end = (tz.graph.tail[e], tz.graph.head[e]);
        let prev = ends.insert(a, end);
        assert!(prev.is_none() || prev == Some(end), "split parts of residual arc {a} trimmed differently");
    }
    let mut arcs: Vec<ArcId> = ends.keys().copied().collect();
    arcs.sort_unstable();
    let mut net = SkewSymmetricNetwork::new(res.graph.node_count);
    let mut origin = vec![];
    for &a in &arcs {
        let b = res.graph.mate[a];
        if b < a {
            continue;
        }
        let (x, y) = ends[&a];
        debug_assert_eq!(ends.get(&b), Some(&(crate::ssgraph::mate(y), crate::ssgraph::mate(x))));
        net.add_pair(x, y, res.cap[a]);
        origin.extend([a, b]);
    }
    PhaseNetwork { net, origin }
}

/// One phase: a shortest blocking IS-flow of the residual, as residual arc values.
fn blocking_flow(res: &ResidualNetwork, split: &SplitGraph, tz: &TrimmedZeroGraph) -> Result<Vec<i64>> {
    for phi in &tz.maximal {
        assert_eq!(res.cap[split.omega[phi.base]], 1, "fragment base arc without unit capacity");
    }
    let phase = phase_network(res, split, tz);
    let gbar = totally_blocking_isflow(&phase.net)?;
    let mut g = vec![0i64; 2 * res.m];
    for (e, &a) in phase.origin.iter().enumerate() {
        g[a] += gbar.values[e];
    }
    let mut leaving: HashMap<usize, Vec<ArcId>> = tz.maximal.iter().map(|phi| (phi.base_node(&split.graph), vec![])).collect();
    for (e, arc) in phase.net.arcs.iter().enumerate() {
        if gbar.values[e] > 0 {
            if let Some(out) = leaving.get_mut(&arc.tail) {
                out.push(phase.origin[e]);
            }
        }
    }
    for phi in &tz.maximal {
        if g[split.omega[phi.base]] == 0 {
            continue;
        }
        let w = phi.base_node(&split.graph);
        let out = &leaving[&w];
        assert_eq!(out.len(), 1, "flow through a fragment must leave by one arc");
        let x = res.graph.tail[out[0]];
        for se in tz.restore.trace(&split.graph, x, w) {
            let a = split.omega[se];
            g[a] += 1;
            g[res.graph.mate[a]] += 1;
        }
    }
    Ok(g)
}

pub fn max_isflow_sbfm(net: &SkewSymmetricNetwork) -> Result<SolveReport> {
    check_input(net)?;
    // direct s -> s' arcs never meet an inner node; saturate them up front
    let mut values = vec![0; net.arc_count()];
    for (a, arc) in net.arcs.iter().enumerate() {
        if arc.tail == SOURCE && arc.head == SINK {
            values[a] = arc.cap;
        }
    }
    let mut f = IsFlow::from_values(net, values);
    let transit = net.transit_capacity();
    let mut rdists: Vec<usize> = vec![];
    loop {
        let (res, split) = split_residual(net, &f)?;
        match shortest_unit_sra(&split.graph) {
            SraOutcome::Path { rdist, tz, .. } => {
                if let Some(&last) = rdists.last() {
                    assert!(rdist > last, "phase r-distance did not grow: {last} then {rdist}");
                }
                rdists.push(rdist);
                let phases = rdists.len();
                assert!(phases < net.node_count, "more than n-1 phases");
                assert!((phases * phases) as i64 <= 4 * transit, "phase {phases} exceeds 2*sqrt(transit capacity {transit})");
                let g = blocking_flow(&res, &split, &tz)?;
                f = superpose(net, &f, &g)?;
            }
            SraOutcome::Barrier(b) => {
                let certificate = restore_odd_barrier(net, &f, &b)?;
                return Ok(SolveReport {
                    algorithm: Algorithm::Sbfm,
                    capacity: f.value,
                    flow: f,
                    certificate,
                    iterations: rdists.len(),
                    rdists,
                    anstee: None,
                });
            }
        }
    }
}

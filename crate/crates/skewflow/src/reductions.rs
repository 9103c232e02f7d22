//! Matching-type problems as skew-symmetric flow problems.
//!
//! A vertex `v` of the undirected graph becomes the mate pair `v1 = 2v+2`,
//! `v2 = 2v+3`. Edge `{v,w}` becomes the arc pair `(v1,w2)`, `(w1,v2)`;
//! vertex `v` gets the pair `(s,v1)`, `(v2,s')`.

use crate::error::{invalid, Error, Result};
use crate::ssgraph::{ArcId, IsFlow, NodeId, SkewSymmetricNetwork, SINK, SOURCE};

/// `(u0,u)`-capacitated `(b0,b)`-matching instance. `None` upper bound on
/// an edge means unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub edge_bounds: Vec<(i64, Option<i64>)>,
    pub node_bounds: Vec<(i64, i64)>,
}

impl MatchingInstance {
    /// Plain maximum matching: `u = b = 1`, zero lower bounds.
    pub fn unit(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let m = edges.len();
        MatchingInstance { n, edges, edge_bounds: vec![(0, Some(1)); m], node_bounds: vec![(0, 1); n] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Edge(usize),
    Node(usize),
}

/// Inverse of the reduction: arc -> owner, owner -> arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackMap {
    pub kind: Vec<ArcKind>,
    /// Arc `(v1,w2)` of each edge.
    pub edge_arc: Vec<ArcId>,
    /// Arc `(s,v1)` of each vertex.
    pub node_arc: Vec<ArcId>,
}

/// Network with lower bounds `lower ≤ f ≤ cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedNetwork {
    pub net: SkewSymmetricNetwork,
    pub lower: Vec<i64>,
}

pub fn vertex_nodes(v: usize) -> (NodeId, NodeId) {
    (2 * v + 2, 2 * v + 3)
}

pub fn matching_to_network(inst: &MatchingInstance) -> Result<(BoundedNetwork, BackMap)> {
    if inst.edge_bounds.len() != inst.edges.len() || inst.node_bounds.len() != inst.n {
        return invalid("bound tables do not match the graph");
    }
    let mut degree_cap = vec![Some(0i64); inst.n];
    for (i, &(v, w)) in inst.edges.iter().enumerate() {
        if v >= inst.n || w >= inst.n || v == w {
            return invalid(format!("edge {i} is a loop or names a missing vertex"));
        }
        let (lo, hi) = inst.edge_bounds[i];
        if lo < 0 || hi.is_some_and(|h| lo > h) {
            return invalid(format!("edge {i}: lower bound exceeds upper bound"));
        }
        for x in [v, w] {
            degree_cap[x] = match (degree_cap[x], hi) {
                (Some(d), Some(h)) => Some(d + h),
                _ => None,
            };
        }
    }
    let mut net = SkewSymmetricNetwork::new(2 * inst.n + 2);
    let mut lower = vec![];
    let mut kind = vec![];
    let mut node_arc = vec![];
    for v in 0..inst.n {
        let (lo, hi) = inst.node_bounds[v];
        if lo < 0 || lo > hi {
            return invalid(format!("vertex {v}: lower bound exceeds upper bound"));
        }
        let hi = degree_cap[v].map_or(hi, |d| hi.min(d)).max(lo);
        let (v1, _) = vertex_nodes(v);
        let (a, _) = net.add_pair(SOURCE, v1, hi);
        node_arc.push(a);
        lower.extend([lo, lo]);
        kind.extend([ArcKind::Node(v), ArcKind::Node(v)]);
    }
    let mut edge_arc = vec![];
    let mut unbounded = vec![];
    for (i, &(v, w)) in inst.edges.iter().enumerate() {
        let (lo, hi) = inst.edge_bounds[i];
        let (a, _) = net.add_pair(vertex_nodes(v).0, vertex_nodes(w).1, hi.unwrap_or(0));
        if hi.is_none() {
            unbounded.push(a);
        }
        edge_arc.push(a);
        lower.extend([lo, lo]);
        kind.extend([ArcKind::Edge(i), ArcKind::Edge(i)]);
    }
    if !unbounded.is_empty() {
        net.set_infinite(&unbounded);
    }
    Ok((BoundedNetwork { net, lower }, BackMap { kind, edge_arc, node_arc }))
}

/// Matching function of a flow on the reduced network: `h(e) = f(v1,w2)`.
pub fn flow_to_matching(net: &SkewSymmetricNetwork, f: &IsFlow, bm: &BackMap) -> Result<Vec<i64>> {
    if let Err(v) = crate::certify::verify_isflow(net, f) {
        return Err(Error::Infeasible(v.join("; ")));
    }
    Ok(bm.edge_arc.iter().map(|&a| f.values[a]).collect())
}

/// The upper-bounds-only network of a bounded network, with the map back.
#[derive(Debug, Clone)]
pub struct LowerBoundReduction {
    pub net: SkewSymmetricNetwork,
    /// Per original arc: the arc carrying `f - ℓ` in the new network.
    pub carrier: Vec<ArcId>,
    pub lower: Vec<i64>,
    /// Extra arcs `(s,w)` and `(v,s')`; all must be saturated.
    pub extra: Vec<ArcId>,
}

impl LowerBoundReduction {
    pub fn is_feasible(&self, f: &IsFlow) -> bool {
        self.extra.iter().all(|&a| f.values[a] == self.net.arcs[a].cap)
    }

    /// Flow on the original arcs induced by a feasible flow.
    pub fn induced_flow(&self, original: &SkewSymmetricNetwork, f: &IsFlow) -> Result<IsFlow> {
        if !self.is_feasible(f) {
            return Err(Error::Infeasible("an extra arc is not saturated".into()));
        }
        let values = self.carrier.iter().zip(&self.lower).map(|(&c, &l)| f.values[c] + l).collect();
        Ok(IsFlow::from_values(original, values))
    }
}

/// Subdivides every arc with `ℓ > 0` into `(x,v),(v,w),(w,y)` with
/// capacities `u, u-ℓ, u` and adds `(s,w)`, `(v,s')` of capacity `ℓ`.
pub fn eliminate_lower_bounds(bn: &BoundedNetwork) -> Result<LowerBoundReduction> {
    let src = &bn.net;
    let m = src.arcs.len();
    if bn.lower.len() != m {
        return invalid("lower bound vector length differs from arc count");
    }
    for a in 0..m {
        let l = bn.lower[a];
        if l < 0 || l > src.arcs[a].cap || l != bn.lower[src.arc_mate[a]] {
            return invalid(format!("arc {a}: lower bound not in [0,u] or not symmetric"));
        }
    }
    let mut net = SkewSymmetricNetwork::new(src.node_count);
    let mut carrier = vec![usize::MAX; m];
    let mut extra = vec![];
    for a in 0..m {
        let b = src.arc_mate[a];
        if b < a {
            continue;
        }
        let arc = src.arcs[a];
        let l = bn.lower[a];
        if l == 0 {
            let (x, y) = net.add_pair(arc.tail, arc.head, arc.cap);
            carrier[a] = x;
            carrier[b] = y;
            continue;
        }
        let p = net.node_count;
        net.node_count += 4;
        let (v, w) = (p, p + 2);
        net.add_pair(arc.tail, v, arc.cap);
        let (mid, mid_mate) = net.add_pair(v, w, arc.cap - l);
        net.add_pair(w, arc.head, arc.cap);
        let (e1, e1m) = net.add_pair(SOURCE, w, l);
        let (e2, e2m) = net.add_pair(v, SINK, l);
        carrier[a] = mid;
        carrier[b] = mid_mate;
        extra.extend([e1, e1m, e2, e2m]);
    }
    net.infinite_cap = src.infinite_cap;
    Ok(LowerBoundReduction { net, carrier, lower: bn.lower.clone(), extra })
}

/// Every arc of capacity `q` becomes `q` parallel unit arcs (mate pairs kept).
/// Returns the network and, per new arc, its original arc.
pub fn unit_split(net: &SkewSymmetricNetwork) -> Result<(SkewSymmetricNetwork, Vec<ArcId>)> {
    let mut out = SkewSymmetricNetwork::new(net.node_count);
    let mut origin = vec![];
    for a in 0..net.arcs.len() {
        let b = net.arc_mate[a];
        if b < a {
            continue;
        }
        if net.is_infinite(a) {
            return invalid(format!("arc {a} has infinite capacity"));
        }
        let arc = net.arcs[a];
        for _ in 0..arc.cap {
            out.add_pair(arc.tail, arc.head, 1);
            origin.extend([a, b]);
        }
    }
    Ok((out, origin))
}

/// Sums a flow on a unit-split network back onto the original arcs.
pub fn merge_unit_flow(net: &SkewSymmetricNetwork, origin: &[ArcId], f: &IsFlow) -> IsFlow {
    let mut values = vec![0; net.arcs.len()];
    for (e, &a) in origin.iter().enumerate() {
        values[a] += f.values[e];
    }
    IsFlow::from_values(net, values)
}

/// Outcome of a bounded matching solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingOutcome {
    Feasible { matching: Vec<i64>, value: i64, flow: IsFlow },
    Infeasible,
}

/// Solves a matching instance with `solve` (any maximum IS-flow routine).
pub fn solve_matching(inst: &MatchingInstance, solve: impl Fn(&SkewSymmetricNetwork) -> IsFlow) -> Result<MatchingOutcome> {
    let (bn, bm) = matching_to_network(inst)?;
    let red = eliminate_lower_bounds(&bn)?;
    let f = solve(&red.net);
    if !red.is_feasible(&f) {
        return Ok(MatchingOutcome::Infeasible);
    }
    let induced = red.induced_flow(&bn.net, &f)?;
    let matching = flow_to_matching(&bn.net, &induced, &bm)?;
    let value = matching.iter().sum();
    debug_assert_eq!(2 * value, induced.value);
    Ok(MatchingOutcome::Feasible { matching, value, flow: induced })
}

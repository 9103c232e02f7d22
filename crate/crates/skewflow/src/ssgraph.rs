//! Skew-symmetric graphs and networks, residuals, split-graphs, superposition.
//!
//! Node mates are positional (`2k <-> 2k+1`), the source is node 0 and the
//! sink node 1. Arc mates are explicit because parallel arcs and arcs
//! `v -> σ(v)` are allowed.

use std::fmt;

use crate::error::{invalid, Error, Result};

pub type NodeId = usize;
pub type ArcId = usize;

pub const SOURCE: NodeId = 0;
pub const SINK: NodeId = 1;

#[inline]
pub fn mate(v: NodeId) -> NodeId {
    v ^ 1
}

/// Compressed adjacency lists.
#[derive(Debug, Clone, Default)]
pub struct Adjacency {
    start: Vec<usize>,
    items: Vec<ArcId>,
}

impl Adjacency {
    pub fn build(node_count: usize, keys: impl Iterator<Item = (ArcId, NodeId)> + Clone) -> Self {
        let mut start = vec![0usize; node_count + 1];
        for (_, v) in keys.clone() {
            start[v + 1] += 1;
        }
        for i in 0..node_count {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut items = vec![0; start[node_count]];
        for (a, v) in keys {
            items[fill[v]] = a;
            fill[v] += 1;
        }
        Adjacency { start, items }
    }

    #[inline]
    pub fn of(&self, v: NodeId) -> &[ArcId] {
        &self.items[self.start[v]..self.start[v + 1]]
    }
}

/// An uncapacitated skew-symmetric graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewGraph {
    pub node_count: usize,
    pub tail: Vec<NodeId>,
    pub head: Vec<NodeId>,
    pub mate: Vec<ArcId>,
}

impl SkewGraph {
    pub fn new(node_count: usize) -> Self {
        SkewGraph { node_count, tail: vec![], head: vec![], mate: vec![] }
    }

    pub fn arc_count(&self) -> usize {
        self.tail.len()
    }

    /// Adds `tail -> head` and its mate; returns both ids.
    pub fn add_pair(&mut self, tail: NodeId, head: NodeId) -> (ArcId, ArcId) {
        let a = self.tail.len();
        self.tail.extend([tail, mate(head)]);
        self.head.extend([head, mate(tail)]);
        self.mate.extend([a + 1, a]);
        (a, a + 1)
    }

    pub fn out_lists(&self) -> Adjacency {
        Adjacency::build(self.node_count, self.tail.iter().copied().enumerate())
    }

    pub fn in_lists(&self) -> Adjacency {
        Adjacency::build(self.node_count, self.head.iter().copied().enumerate())
    }

    /// Structural skew-symmetry violations (capacities not involved).
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = vec![];
        if self.node_count % 2 != 0 || self.node_count < 2 {
            out.push(Violation::NodeCount(self.node_count));
        }
        let m = self.arc_count();
        for a in 0..m {
            if self.tail[a] >= self.node_count || self.head[a] >= self.node_count {
                out.push(Violation::NodeOutOfRange(a));
                continue;
            }
            let b = self.mate[a];
            if b >= m {
                out.push(Violation::MateOutOfRange(a));
            } else if b == a {
                out.push(Violation::FixedPoint(a));
            } else if self.mate[b] != a {
                out.push(Violation::NotInvolution(a));
            } else if self.tail[b] >= self.node_count || self.head[b] >= self.node_count {
                // reported on b itself
            } else if self.tail[b] != mate(self.head[a]) || self.head[b] != mate(self.tail[a]) {
                out.push(Violation::EndpointRule(a));
            }
        }
        out
    }

    /// Node sequence of a contiguous arc sequence starting at `start`.
    pub fn walk_nodes(&self, start: NodeId, arcs: &[ArcId]) -> Option<Vec<NodeId>> {
        let mut nodes = vec![start];
        for &a in arcs {
            if self.tail[a] != *nodes.last().unwrap() {
                return None;
            }
            nodes.push(self.head[a]);
        }
        Some(nodes)
    }

    /// σ(P): the mate path, traversed in reverse.
    pub fn mate_path(&self, arcs: &[ArcId]) -> Vec<ArcId> {
        arcs.iter().rev().map(|&a| self.mate[a]).collect()
    }

    /// True iff no arc occurs together with its mate.
    pub fn is_regular(&self, arcs: &[ArcId]) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(arcs.len());
        for &a in arcs {
            seen.insert(a);
        }
        arcs.iter().all(|&a| !seen.contains(&self.mate[a]))
    }
}

/// Violation of a skew-symmetric network invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NodeCount(usize),
    NodeOutOfRange(ArcId),
    MateOutOfRange(ArcId),
    FixedPoint(ArcId),
    NotInvolution(ArcId),
    EndpointRule(ArcId),
    NegativeCapacity(ArcId),
    AsymmetricCapacity(ArcId, ArcId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeCount(n) => write!(f, "node count {n} is not a positive even number"),
            Violation::NodeOutOfRange(a) => write!(f, "arc {a} has an endpoint out of range"),
            Violation::MateOutOfRange(a) => write!(f, "mate of arc {a} out of range"),
            Violation::FixedPoint(a) => write!(f, "involution has fixed point at arc {a}"),
            Violation::NotInvolution(a) => write!(f, "mate map is not an involution at arc {a}"),
            Violation::EndpointRule(a) => write!(f, "arc {a} and its mate break the swap-and-mate rule"),
            Violation::NegativeCapacity(a) => write!(f, "negative capacity on arc {a}"),
            Violation::AsymmetricCapacity(a, b) => write!(f, "asymmetric capacity on pair ({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub cap: i64,
}

/// Skew-symmetric network with source 0 and sink 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSymmetricNetwork {
    pub node_count: usize,
    pub arcs: Vec<Arc>,
    pub arc_mate: Vec<ArcId>,
    /// Capacity value standing for "infinite", if any arc uses it.
    pub infinite_cap: Option<i64>,
}

impl SkewSymmetricNetwork {
    pub fn new(node_count: usize) -> Self {
        SkewSymmetricNetwork { node_count, arcs: vec![], arc_mate: vec![], infinite_cap: None }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Adds `tail -> head` with capacity `cap` and its mate.
    pub fn add_pair(&mut self, tail: NodeId, head: NodeId, cap: i64) -> (ArcId, ArcId) {
        let a = self.arcs.len();
        self.arcs.push(Arc { tail, head, cap });
        self.arcs.push(Arc { tail: mate(head), head: mate(tail), cap });
        self.arc_mate.extend([a + 1, a]);
        (a, a + 1)
    }

    /// Gives the listed arcs (and their mates) the infinity sentinel:
    /// one more than the sum of all finite capacities.
    pub fn set_infinite(&mut self, arcs: &[ArcId]) {
        let mut inf = vec![false; self.arcs.len()];
        for &a in arcs {
            inf[a] = true;
            inf[self.arc_mate[a]] = true;
        }
        let finite: i64 = (0..self.arcs.len()).filter(|&a| !inf[a]).map(|a| self.arcs[a].cap).sum();
        let sentinel = finite + 1;
        for a in 0..self.arcs.len() {
            if inf[a] {
                self.arcs[a].cap = sentinel;
            }
        }
        self.infinite_cap = if arcs.is_empty() { None } else { Some(sentinel) };
    }

    pub fn is_infinite(&self, a: ArcId) -> bool {
        self.infinite_cap == Some(self.arcs[a].cap)
    }

    pub fn graph(&self) -> SkewGraph {
        SkewGraph {
            node_count: self.node_count,
            tail: self.arcs.iter().map(|a| a.tail).collect(),
            head: self.arcs.iter().map(|a| a.head).collect(),
            mate: self.arc_mate.clone(),
        }
    }

    pub fn caps(&self) -> Vec<i64> {
        self.arcs.iter().map(|a| a.cap).collect()
    }

    /// Δ(N): sum over inner nodes of min(in-capacity, out-capacity).
    pub fn transit_capacity(&self) -> i64 {
        let mut cin = vec![0i64; self.node_count];
        let mut cout = vec![0i64; self.node_count];
        for a in &self.arcs {
            cout[a.tail] += a.cap;
            cin[a.head] += a.cap;
        }
        (2..self.node_count).map(|v| cin[v].min(cout[v])).sum()
    }
}

/// Returns `Ok(())` iff every network invariant holds.
pub fn validate_network(net: &SkewSymmetricNetwork) -> std::result::Result<(), Vec<Violation>> {
    let mut out = net.graph().violations();
    for (a, arc) in net.arcs.iter().enumerate() {
        if arc.cap < 0 {
            out.push(Violation::NegativeCapacity(a));
        }
        let b = net.arc_mate[a];
        if a < b && b < net.arcs.len() && net.arcs[b].cap != arc.cap {
            out.push(Violation::AsymmetricCapacity(a, b));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Integer symmetric flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsFlow {
    pub values: Vec<i64>,
    pub value: i64,
}

impl IsFlow {
    pub fn zero(arc_count: usize) -> Self {
        IsFlow { values: vec![0; arc_count], value: 0 }
    }

    /// Wraps arc values, computing the value as div(s).
    pub fn from_values(net: &SkewSymmetricNetwork, values: Vec<i64>) -> Self {
        let value = divergence(net, &values, SOURCE);
        IsFlow { values, value }
    }
}

/// Outflow minus inflow of `x`.
pub fn divergence(net: &SkewSymmetricNetwork, values: &[i64], x: NodeId) -> i64 {
    net.arcs
        .iter()
        .zip(values)
        .map(|(a, &f)| if a.tail == x && a.head != x { f } else if a.head == x && a.tail != x { -f } else { 0 })
        .sum()
}

/// Divergence of every node; loops contribute nothing.
pub fn divergences(net: &SkewSymmetricNetwork, values: &[i64]) -> Vec<i64> {
    let mut div = vec![0i64; net.node_count];
    for (arc, &x) in net.arcs.iter().zip(values) {
        div[arc.tail] += x;
        div[arc.head] -= x;
    }
    div
}

/// Reverse-arc id in a residual graph with `m` forward arcs.
#[inline]
pub fn reverse_id(a: ArcId, m: usize) -> ArcId {
    if a < m {
        a + m
    } else {
        a - m
    }
}

/// The graph G⁺ with residual capacities u_f. Arc `a + m` is `a^R`.
#[derive(Debug, Clone)]
pub struct ResidualNetwork {
    pub m: usize,
    pub graph: SkewGraph,
    pub cap: Vec<i64>,
}

fn check_flow(net: &SkewSymmetricNetwork, f: &IsFlow) -> Result<()> {
    if f.values.len() != net.arcs.len() {
        return Err(Error::Infeasible("flow length differs from arc count".into()));
    }
    for (a, arc) in net.arcs.iter().enumerate() {
        let v = f.values[a];
        if v < 0 || v > arc.cap {
            return Err(Error::Infeasible(format!("arc {a} carries {v} outside [0,{}]", arc.cap)));
        }
        if v != f.values[net.arc_mate[a]] {
            return Err(Error::Infeasible(format!("asymmetric on arc {a}")));
        }
    }
    let div = divergences(net, &f.values);
    for x in 2..net.node_count {
        if div[x] != 0 {
            return Err(Error::Infeasible(format!("conservation fails at node {x}")));
        }
    }
    Ok(())
}

pub fn residual(net: &SkewSymmetricNetwork, f: &IsFlow) -> Result<ResidualNetwork> {
    check_flow(net, f)?;
    let m = net.arcs.len();
    let mut g = SkewGraph::new(net.node_count);
    g.tail = Vec::with_capacity(2 * m);
    for arc in &net.arcs {
        g.tail.push(arc.tail);
        g.head.push(arc.head);
    }
    for arc in &net.arcs {
        g.tail.push(arc.head);
        g.head.push(arc.tail);
    }
    g.mate = (0..2 * m).map(|a| if a < m { net.arc_mate[a] } else { net.arc_mate[a - m] + m }).collect();
    let mut cap: Vec<i64> = net.arcs.iter().zip(&f.values).map(|(a, &v)| a.cap - v).collect();
    cap.extend(f.values.iter().copied());
    Ok(ResidualNetwork { m, graph: g, cap })
}

/// f ⊕ g, where g is an IS-flow of (G⁺, u_f).
pub fn superpose(net: &SkewSymmetricNetwork, f: &IsFlow, g: &[i64]) -> Result<IsFlow> {
    let res = residual(net, f)?;
    let m = res.m;
    if g.len() != 2 * m {
        return Err(Error::Infeasible("residual flow length must be 2m".into()));
    }
    let mut div = vec![0i64; net.node_count];
    for a in 0..2 * m {
        if g[a] < 0 || g[a] > res.cap[a] {
            return Err(Error::Infeasible(format!("residual arc {a} carries {} > {}", g[a], res.cap[a])));
        }
        if g[a] != g[res.graph.mate[a]] {
            return Err(Error::Infeasible(format!("residual flow asymmetric on arc {a}")));
        }
        div[res.graph.tail[a]] += g[a];
        div[res.graph.head[a]] -= g[a];
    }
    if let Some(x) = (2..net.node_count).find(|&x| div[x] != 0) {
        return Err(Error::Infeasible(format!("residual flow not conserved at node {x}")));
    }
    let values = (0..m).map(|a| f.values[a] + g[a] - g[a + m]).collect();
    Ok(IsFlow { values, value: f.value + div[SOURCE] })
}

/// δ_h(P): min of h over ordinary arcs and of ⌊h/2⌋ over arcs whose mate is also on P.
pub fn delta_h(graph: &SkewGraph, h: &[i64], path: &[ArcId]) -> i64 {
    let on: std::collections::HashSet<ArcId> = path.iter().copied().collect();
    path.iter()
        .map(|&a| if on.contains(&graph.mate[a]) { h[a] / 2 } else { h[a] })
        .min()
        .unwrap_or(0)
}

/// h > 0 on P and h ≥ 2 wherever both a and σ(a) lie on P; no arc repeats.
pub fn is_h_regular(graph: &SkewGraph, h: &[i64], path: &[ArcId]) -> bool {
    let mut on = std::collections::HashSet::new();
    for &a in path {
        if !on.insert(a) {
            return false;
        }
    }
    path.iter().all(|&a| h[a] > 0 && (!on.contains(&graph.mate[a]) || h[a] >= 2))
}

/// S(H,h): arcs a₁ with ⌈h/2⌉ and a₂ with ⌊h/2⌋, zero-capacity arcs dropped.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub graph: SkewGraph,
    pub cap: Vec<i64>,
    /// ω: split arc -> original arc.
    pub omega: Vec<ArcId>,
    /// 1 or 2.
    pub part: Vec<u8>,
    pub first: Vec<Option<ArcId>>,
    pub second: Vec<Option<ArcId>>,
}

pub fn build_split_graph(graph: &SkewGraph, h: &[i64]) -> Result<SplitGraph> {
    let m = graph.arc_count();
    if h.len() != m {
        return invalid("capacity vector length differs from arc count");
    }
    for a in 0..m {
        if h[a] < 0 {
            return invalid(format!("negative capacity on arc {a}"));
        }
        if h[a] != h[graph.mate[a]] {
            return invalid(format!("asymmetric capacity on pair ({a},{})", graph.mate[a]));
        }
    }
    let mut s = SplitGraph {
        graph: SkewGraph::new(graph.node_count),
        cap: vec![],
        omega: vec![],
        part: vec![],
        first: vec![None; m],
        second: vec![None; m],
    };
    for a in 0..m {
        for (part, c) in [(1u8, (h[a] + 1) / 2), (2u8, h[a] / 2)] {
            if c == 0 {
                continue;
            }
            let id = s.omega.len();
            s.graph.tail.push(graph.tail[a]);
            s.graph.head.push(graph.head[a]);
            s.cap.push(c);
            s.omega.push(a);
            s.part.push(part);
            if part == 1 {
                s.first[a] = Some(id);
            } else {
                s.second[a] = Some(id);
            }
        }
    }
    s.graph.mate = (0..s.omega.len())
        .map(|e| {
            let b = graph.mate[s.omega[e]];
            if s.part[e] == 1 { s.first[b] } else { s.second[b] }.expect("split mates exist by symmetry")
        })
        .collect();
    Ok(s)
}

impl SplitGraph {
    pub fn omega_path(&self, path: &[ArcId]) -> Vec<ArcId> {
        path.iter().map(|&e| self.omega[e]).collect()
    }

    /// Original capacity h(ω(e)).
    pub fn original_cap(&self, a: ArcId) -> i64 {
        self.first[a].map_or(0, |e| self.cap[e]) + self.second[a].map_or(0, |e| self.cap[e])
    }
}

/// Regular preimage of an h-regular path: ordinary arcs and the earlier arc
/// of a mate pair use a₁, the later arc of a pair uses a₂.
pub fn lift_regular_path(split: &SplitGraph, original: &SkewGraph, q: &[ArcId]) -> Result<Vec<ArcId>> {
    let mut pos = std::collections::HashMap::new();
    for (i, &a) in q.iter().enumerate() {
        if a >= split.first.len() || pos.insert(a, i).is_some() {
            return Err(Error::NotRegular(a));
        }
    }
    let mut out = Vec::with_capacity(q.len());
    for (i, &a) in q.iter().enumerate() {
        let later = matches!(pos.get(&original.mate[a]), Some(&j) if j < i);
        let e = if later { split.second[a] } else { split.first[a] };
        out.push(e.ok_or(Error::NotRegular(a))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SkewSymmetricNetwork {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 1);
        net
    }

    #[test]
    fn test_validate_ok_and_mate_endpoints() {
        let net = tiny();
        assert_eq!(net.arcs[1], Arc { tail: 3, head: 1, cap: 1 });
        assert!(validate_network(&net).is_ok());
    }

    #[test]
    fn test_validate_asymmetric_capacity() {
        let mut net = tiny();
        net.arcs[1].cap = 2;
        let v = validate_network(&net).unwrap_err();
        assert_eq!(v, vec![Violation::AsymmetricCapacity(0, 1)]);
        assert_eq!(v[0].to_string(), "asymmetric capacity on pair (0,1)");
    }

    #[test]
    fn test_validate_fixed_point() {
        let mut net = tiny();
        net.arc_mate[0] = 0;
        let v = validate_network(&net).unwrap_err();
        assert!(v.iter().any(|x| x.to_string().contains("involution has fixed point")));
    }

    #[test]
    fn test_split_capacities() {
        let mut g = SkewGraph::new(4);
        g.add_pair(0, 2);
        g.add_pair(2, 3);
        g.add_pair(0, 3);
        let s = build_split_graph(&g, &[5, 5, 1, 1, 0, 0]).unwrap();
        assert_eq!(s.cap[s.first[0].unwrap()], 3);
        assert_eq!(s.cap[s.second[0].unwrap()], 2);
        assert!(s.first[2].is_some() && s.second[2].is_none());
        assert!(s.first[4].is_none() && s.second[4].is_none());
        for e in 0..s.omega.len() {
            let b = s.graph.mate[e];
            assert_eq!(s.graph.mate[b], e);
            assert_eq!(s.part[e], s.part[b]);
        }
        assert!(build_split_graph(&g, &[1, 2, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn test_lift_mate_pair() {
        // s -> v -> v' -> s' uses e and its mate e'
        let mut g = SkewGraph::new(4);
        let (e, e2) = g.add_pair(0, 2);
        let (a, _) = g.add_pair(2, 3);
        let h = vec![2, 2, 1, 1];
        let s = build_split_graph(&g, &h).unwrap();
        let q = vec![e, a, e2];
        let p = lift_regular_path(&s, &g, &q).unwrap();
        assert_eq!(p, vec![s.first[e].unwrap(), s.first[a].unwrap(), s.second[e2].unwrap()]);
        assert!(s.graph.is_regular(&p));
        assert_eq!(s.omega_path(&p), q);
        let s1 = build_split_graph(&g, &[1, 1, 1, 1]).unwrap();
        assert_eq!(lift_regular_path(&s1, &g, &q), Err(Error::NotRegular(e2)));
    }

    #[test]
    fn test_residual_and_superpose() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 3);
        net.add_pair(2, 3, 3);
        let f = IsFlow::from_values(&net, vec![2, 2, 1, 1]);
        assert_eq!(f.value, 2);
        let r = residual(&net, &f).unwrap();
        assert_eq!((r.cap[0], r.cap[4]), (1, 2));
        assert_eq!((r.cap[2], r.cap[6]), (2, 1));
        let g0 = vec![0; 8];
        assert_eq!(superpose(&net, &f, &g0).unwrap(), f);
        let bad = IsFlow::from_values(&net, vec![1, 1, 1, 1]);
        assert!(residual(&net, &bad).is_err());
    }

    #[test]
    fn test_superpose_cancellation() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 2);
        net.add_pair(2, 3, 1);
        let f = IsFlow::from_values(&net, vec![2, 2, 1, 1]);
        let g = vec![0, 0, 0, 0, 2, 2, 1, 1];
        let h = superpose(&net, &f, &g).unwrap();
        assert_eq!(h.values, vec![0; 4]);
        assert_eq!(h.value, 0);
    }
}

//! Symmetric decomposition of IS-flows into elementary flows.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ssgraph::{delta_h, mate, ArcId, IsFlow, NodeId, SkewSymmetricNetwork, SINK, SOURCE};

/// `δχ^P + δχ^{P'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryFlow {
    pub path: Vec<ArcId>,
    pub mate_path: Vec<ArcId>,
    pub delta: i64,
    /// First node of `path`.
    pub start: NodeId,
}

impl ElementaryFlow {
    pub fn is_cycle(&self, net: &SkewSymmetricNetwork) -> bool {
        net.arcs[*self.path.last().unwrap()].head == self.start
    }

    pub fn nodes(&self, net: &SkewSymmetricNetwork) -> Vec<NodeId> {
        let mut v = vec![self.start];
        v.extend(self.path.iter().map(|&a| net.arcs[a].head));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymmetricDecomposition {
    pub members: Vec<ElementaryFlow>,
}

impl SymmetricDecomposition {
    /// Σ δχ^P + δχ^{P'} over the members.
    pub fn recompose(&self, arc_count: usize) -> Vec<i64> {
        let mut h = vec![0; arc_count];
        for m in &self.members {
            for &a in m.path.iter().chain(&m.mate_path) {
                h[a] += m.delta;
            }
        }
        h
    }
}

fn is_terminal(v: NodeId) -> bool {
    v == SOURCE || v == SINK
}

/// Decomposes a feasible IS-flow into at most m elementary flows by growing
/// f-regular paths forward, then backward, until both ends are terminals or
/// a cycle closes.
pub fn symmetric_decomposition(net: &SkewSymmetricNetwork, f: &IsFlow) -> Result<SymmetricDecomposition> {
    if let Err(v) = crate::certify::verify_isflow(net, f) {
        return Err(Error::Infeasible(v.join("; ")));
    }
    let g = net.graph();
    let out = g.out_lists();
    let inn = g.in_lists();
    let m = g.arc_count();
    let mut h = f.values.clone();
    let mut in_path = vec![false; m];
    let mut pos = vec![i64::MIN; g.node_count];
    let mut members = vec![];
    let mut low = 0usize;
    loop {
        while low < m && h[low] == 0 {
            low += 1;
        }
        if low == m {
            break;
        }
        let a = low;
        let mut arcs: VecDeque<ArcId> = VecDeque::from([a]);
        let mut nodes: VecDeque<NodeId> = VecDeque::from([g.tail[a], g.head[a]]);
        let mut front: i64 = 0;
        in_path[a] = true;
        pos[g.tail[a]] = 0;
        let eligible = |q: ArcId, h: &[i64], in_path: &[bool]| h[q] > 0 && !in_path[q] && (!in_path[g.mate[q]] || h[q] >= 2);
        let mut cycle: Option<Vec<ArcId>> = None;
        if g.head[a] == g.tail[a] {
            cycle = Some(vec![a]);
        } else {
            pos[g.head[a]] = 1;
        }
        // forward
        while cycle.is_none() {
            let w = *nodes.back().unwrap();
            if is_terminal(w) {
                break;
            }
            let q = out.of(w).iter().copied().find(|&q| eligible(q, &h, &in_path));
            let q = q.unwrap_or_else(|| panic!("decomposition stuck at node {w}: no eligible outgoing arc"));
            let z = g.head[q];
            if pos[z] != i64::MIN {
                let i = (pos[z] - front) as usize;
                let mut c: Vec<ArcId> = arcs.iter().skip(i).copied().collect();
                c.push(q);
                cycle = Some(c);
            } else {
                in_path[q] = true;
                pos[z] = front + nodes.len() as i64;
                arcs.push_back(q);
                nodes.push_back(z);
            }
        }
        // backward
        while cycle.is_none() {
            let v = *nodes.front().unwrap();
            if is_terminal(v) {
                break;
            }
            let q = inn.of(v).iter().copied().find(|&q| eligible(q, &h, &in_path));
            let q = q.unwrap_or_else(|| panic!("decomposition stuck at node {v}: no eligible incoming arc"));
            let y = g.tail[q];
            if pos[y] != i64::MIN {
                let i = (pos[y] - front) as usize;
                let mut c = vec![q];
                c.extend(arcs.iter().take(i).copied());
                cycle = Some(c);
            } else {
                in_path[q] = true;
                front -= 1;
                pos[y] = front;
                arcs.push_front(q);
                nodes.push_front(y);
            }
        }
        for &v in &nodes {
            pos[v] = i64::MIN;
        }
        for &q in &arcs {
            in_path[q] = false;
        }
        let path: Vec<ArcId> = cycle.unwrap_or_else(|| arcs.into_iter().collect());
        debug_assert!(crate::ssgraph::is_h_regular(&g, &h, &path), "extracted path is not f-regular");
        let delta = delta_h(&g, &h, &path);
        debug_assert!(delta > 0);
        let mate_path = g.mate_path(&path);
        for &q in path.iter().chain(&mate_path) {
            h[q] -= delta;
            debug_assert!(h[q] >= 0);
        }
        members.push(ElementaryFlow { start: g.tail[path[0]], path, mate_path, delta });
    }
    debug_assert!(members.len() <= m.max(1));
    Ok(SymmetricDecomposition { members })
}

/// Total flow entering and leaving a self-symmetric node set.
pub fn crossing_parity(net: &SkewSymmetricNetwork, f: &IsFlow, set: &[NodeId]) -> Result<(i64, i64)> {
    let mut inside = vec![false; net.node_count];
    for &v in set {
        if v >= net.node_count {
            return Err(Error::InvalidInput(format!("node {v} out of range")));
        }
        inside[v] = true;
    }
    if set.iter().any(|&v| !inside[mate(v)]) {
        return Err(Error::InvalidInput("node set is not self-symmetric".into()));
    }
    let (mut tin, mut tout) = (0, 0);
    for (a, arc) in net.arcs.iter().enumerate() {
        match (inside[arc.tail], inside[arc.head]) {
            (false, true) => tin += f.values[a],
            (true, false) => tout += f.values[a],
            _ => {}
        }
    }
    Ok((tin, tout))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_zero_flow_empty() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 1);
        let d = symmetric_decomposition(&net, &IsFlow::zero(2)).unwrap();
        assert!(d.members.is_empty());
        assert_eq!(crossing_parity(&net, &IsFlow::zero(2), &[2, 3]).unwrap(), (0, 0));
    }

    #[test]
    fn test_single_route_pair() {
        // s -> a -> s' where a = node 2 and a' = node 3, i.e. s->2, 2->1 (mate 0->3, 3->1)
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 2);
        net.add_pair(2, 1, 2);
        let f = IsFlow::from_values(&net, vec![2, 2, 2, 2]);
        let d = symmetric_decomposition(&net, &f).unwrap();
        assert_eq!(d.members.len(), 1);
        let mem = &d.members[0];
        assert_eq!(mem.delta, 2);
        assert_eq!(mem.nodes(&net), vec![0, 2, 1]);
        assert_eq!(d.recompose(4), f.values);
    }

    #[test]
    fn test_mate_pair_on_path() {
        // s -> v, v -> v' twice (a and a'), v' -> s'
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 2);
        net.add_pair(2, 3, 1);
        let f = IsFlow::from_values(&net, vec![2, 2, 1, 1]);
        let d = symmetric_decomposition(&net, &f).unwrap();
        assert_eq!(d.recompose(4), f.values);
        assert!(d.members.len() <= 4);
        let (tin, tout) = crossing_parity(&net, &f, &[2, 3]).unwrap();
        assert_eq!((tin % 2, tout % 2), (0, 0));
    }

    #[test]
    fn test_rejects_asymmetric_set() {
        let net = SkewSymmetricNetwork::new(4);
        assert!(crossing_parity(&net, &IsFlow::zero(0), &[2]).is_err());
    }
}

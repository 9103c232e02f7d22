//! Anstee-type solver: ordinary max flow, symmetrization, odd-cycle repair,
//! then a few regular augmentations.

use super::augmenting::augment_to_optimum;
use super::maxflow::dinic;
use super::{check_input, Algorithm, SolveReport};
use crate::decompose::symmetric_decomposition;
use crate::error::{Error, Result};
use crate::ssgraph::{divergence, mate, ArcId, IsFlow, NodeId, SkewSymmetricNetwork, SINK, SOURCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AnsteeStages {
    /// Value of the ordinary maximum flow.
    pub stage1_value: i64,
    /// Node-disjoint self-symmetric odd cycles left after pairing.
    pub cycles: usize,
    /// IS-flow value after extracting around the broken cycles.
    pub stage3_value: i64,
    pub augmentations: usize,
}

/// One step of an undirected walk: the arc and whether it is traversed tail to head.
type Step = (ArcId, bool);

struct Cycle {
    /// `nodes[i]` is where `steps[i]` starts.
    nodes: Vec<NodeId>,
    steps: Vec<Step>,
}

impl Cycle {
    fn pos(&self, v: NodeId) -> usize {
        self.nodes.iter().position(|&x| x == v).expect("node on cycle")
    }

    /// Steps from `from` up to (excluding the step leaving) `to`.
    fn segment(&self, from: NodeId, to: NodeId) -> Vec<Step> {
        let len = self.steps.len();
        let mut i = self.pos(from);
        let mut out = vec![];
        loop {
            out.push(self.steps[i]);
            i = (i + 1) % len;
            if self.nodes[i] == to {
                break;
            }
        }
        out
    }
}

struct Doubled<'a> {
    net: &'a SkewSymmetricNetwork,
    /// `g(a) + g(σa)`.
    h2: Vec<i64>,
}

impl Doubled<'_> {
    /// Adds `±1` along a closed walk and `σ` of it; the walk holds no mate pair.
    fn cancel(&mut self, walk: &[Step]) {
        for &(a, fwd) in walk {
            let d = if fwd { 1 } else { -1 };
            for b in [a, self.net.arc_mate[a]] {
                self.h2[b] += d;
                debug_assert!(self.h2[b] >= 0 && self.h2[b] <= 2 * self.net.arcs[b].cap);
            }
        }
    }
}

/// Pairs odd arcs into cancellable cycles; returns the self-symmetric leftovers.
fn pair_odd_cycles(d: &mut Doubled) -> Vec<Cycle> {
    let net = d.net;
    let n = net.node_count;
    let m = net.arc_count();
    for a in 0..m {
        let arc = net.arcs[a];
        if arc.tail == arc.head && d.h2[a] % 2 == 1 {
            d.h2[a] -= 1;
        }
    }
    let mut incident: Vec<Vec<ArcId>> = vec![vec![]; n];
    for a in 0..m {
        if d.h2[a] % 2 == 1 {
            incident[net.arcs[a].tail].push(a);
            incident[net.arcs[a].head].push(a);
        }
    }
    let mut aside = vec![false; m];
    let live = |d: &Doubled, aside: &[bool], a: ArcId| d.h2[a] % 2 == 1 && !aside[a];
    let mut ptr = vec![0usize; n];
    let mut cycles = vec![];
    let mut on_arc = vec![false; m];
    let mut pos = vec![usize::MAX; n];
    let mut start = 0;
    loop {
        while start < n && {
            while ptr[start] < incident[start].len() && !live(d, &aside, incident[start][ptr[start]]) {
                ptr[start] += 1;
            }
            ptr[start] == incident[start].len()
        } {
            start += 1;
        }
        if start == n {
            break;
        }
        let mut nodes = vec![start];
        let mut steps: Vec<Step> = vec![];
        pos[start] = 0;
        loop {
            let v = *nodes.last().unwrap();
            while ptr[v] < incident[v].len() && !live(d, &aside, incident[v][ptr[v]]) {
                ptr[v] += 1;
            }
            let a = incident[v][ptr[v]..]
                .iter()
                .copied()
                .find(|&a| live(d, &aside, a) && !on_arc[a] && !on_arc[net.arc_mate[a]])
                .expect("odd arcs have even degree at every node");
            let fwd = net.arcs[a].tail == v;
            let x = if fwd { net.arcs[a].head } else { net.arcs[a].tail };
            if pos[x] != usize::MAX {
                let mut walk = steps[pos[x]..].to_vec();
                walk.push((a, fwd));
                d.cancel(&walk);
                break;
            }
            if pos[mate(x)] != usize::MAX {
                let i = pos[mate(x)];
                let mut half = steps[i..].to_vec();
                half.push((a, fwd));
                let mut c_nodes = nodes[i..].to_vec();
                let back: Vec<Step> = half.iter().map(|&(b, f)| (net.arc_mate[b], !f)).collect();
                c_nodes.extend(c_nodes.iter().map(|&u| mate(u)).collect::<Vec<_>>());
                let mut c_steps = half;
                c_steps.extend(back);
                for &(b, _) in &c_steps {
                    aside[b] = true;
                }
                cycles.push(Cycle { nodes: c_nodes, steps: c_steps });
                break;
            }
            on_arc[a] = true;
            pos[x] = nodes.len();
            nodes.push(x);
            steps.push((a, fwd));
        }
        for &v in &nodes {
            pos[v] = usize::MAX;
        }
        for &(a, _) in &steps {
            on_arc[a] = false;
        }
    }
    debug_assert!((0..m).all(|a| d.h2[a] % 2 == 0 || aside[a]));
    merge_touching(d, cycles)
}

/// Cancels pairs of self-symmetric cycles through a common node until the
/// survivors are node-disjoint.
fn merge_touching(d: &mut Doubled, mut cycles: Vec<Cycle>) -> Vec<Cycle> {
    let n = d.net.node_count;
    loop {
        let mut owner = vec![usize::MAX; n];
        let mut clash = None;
        'scan: for (c, cyc) in cycles.iter().enumerate() {
            for &x in &cyc.nodes {
                if owner[x] != usize::MAX {
                    clash = Some((owner[x], c, x));
                    break 'scan;
                }
                owner[x] = c;
            }
        }
        let Some((c1, c2, x)) = clash else { return cycles };
        let (p, q) = (&cycles[c1], &cycles[c2]);
        let mut walk = p.segment(x, mate(x));
        walk.extend(q.segment(mate(x), x));
        let mut rest = q.segment(x, mate(x));
        rest.extend(p.segment(mate(x), x));
        let mut mates: Vec<ArcId> = walk.iter().map(|&(a, _)| d.net.arc_mate[a]).collect();
        let mut rest_arcs: Vec<ArcId> = rest.iter().map(|&(a, _)| a).collect();
        mates.sort_unstable();
        rest_arcs.sort_unstable();
        assert_eq!(mates, rest_arcs, "halves of merged cycles are not mates");
        d.cancel(&walk);
        cycles.swap_remove(c2);
        cycles.swap_remove(c1);
    }
}

pub fn max_isflow_anstee(net: &SkewSymmetricNetwork) -> Result<SolveReport> {
    check_input(net)?;
    if net.infinite_cap.is_some() {
        return Err(Error::InvalidInput("anstee solver needs finite capacities".into()));
    }
    let n = net.node_count;
    let m = net.arc_count();
    let tail: Vec<NodeId> = net.arcs.iter().map(|a| a.tail).collect();
    let head: Vec<NodeId> = net.arcs.iter().map(|a| a.head).collect();
    let (stage1_value, g) = dinic(n, &tail, &head, &net.caps(), SOURCE, SINK);

    let mut d = Doubled { net, h2: (0..m).map(|a| g[a] + g[net.arc_mate[a]]).collect() };
    let cycles = pair_odd_cycles(&mut d);

    // break each cycle at its lowest node t into t -> t' and t' -> t
    let mut aug = net.clone();
    for cyc in &cycles {
        let t = *cyc.nodes.iter().min().unwrap();
        let first = cyc.segment(t, mate(t));
        let second = cyc.segment(mate(t), t);
        let mut mates: Vec<ArcId> = first.iter().map(|&(a, _)| net.arc_mate[a]).collect();
        let mut other: Vec<ArcId> = second.iter().map(|&(a, _)| a).collect();
        mates.sort_unstable();
        other.sort_unstable();
        assert_eq!(mates, other, "self-symmetric cycle halves are not mates");
        for &(a, fwd) in &first {
            debug_assert_eq!(d.h2[a] % 2, 1);
            let delta = if fwd { 1 } else { -1 };
            d.h2[a] += delta;
            d.h2[net.arc_mate[a]] += delta;
        }
        if t != SOURCE {
            aug.add_pair(SOURCE, t, 1);
        }
    }
    debug_assert!(d.h2.iter().all(|&x| x % 2 == 0));
    let mut values: Vec<i64> = d.h2.iter().map(|&x| x / 2).collect();
    let half_value = divergence(net, &values, SOURCE);
    values.resize(aug.arc_count(), 1);
    let decomposition = symmetric_decomposition(&aug, &IsFlow::from_values(&aug, values))?;
    let mut kept = decomposition.clone();
    kept.members.retain(|e| e.path.iter().all(|&a| a < m));
    let mut f_values = kept.recompose(aug.arc_count());
    f_values.truncate(m);
    let f = IsFlow::from_values(net, f_values);
    assert!(f.value >= half_value - cycles.len() as i64, "stage 3 lost more than one unit per cycle");
    let stage3_value = f.value;

    let (flow, certificate, augmentations, _) = augment_to_optimum(net, f, false)?;
    let stages = AnsteeStages { stage1_value, cycles: cycles.len(), stage3_value, augmentations };
    Ok(SolveReport {
        algorithm: Algorithm::Anstee,
        capacity: flow.value,
        flow,
        certificate,
        iterations: augmentations,
        rdists: vec![],
        anstee: Some(stages),
    })
}

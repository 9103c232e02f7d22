//! Independent validators and exhaustive oracles.
//!
//! Nothing here calls a solver; the oracles are the ground truth the
//! solvers are tested against.

use crate::error::{Error, Result};
use crate::ssgraph::{mate, ArcId, IsFlow, NodeId, SkewGraph, SkewSymmetricNetwork, SINK, SOURCE};

/// Size limits for exhaustive procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_node_pairs: usize,
    pub max_arcs: usize,
    pub max_capacity: i64,
    pub trials: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_node_pairs: 10, max_arcs: 24, max_capacity: 3, trials: 1000 }
    }
}

impl OracleBudget {
    pub fn admits_graph(&self, g: &SkewGraph) -> Result<()> {
        if g.node_count / 2 > self.max_node_pairs || g.arc_count() > self.max_arcs {
            return Err(Error::Budget(format!("{} nodes, {} arcs", g.node_count, g.arc_count())));
        }
        Ok(())
    }

    pub fn admits_network(&self, net: &SkewSymmetricNetwork) -> Result<()> {
        self.admits_graph(&net.graph())?;
        if net.arcs.iter().any(|a| a.cap > self.max_capacity) {
            return Err(Error::Budget("capacity above budget".into()));
        }
        Ok(())
    }
}

/// Odd barrier `(A; X_1..X_k)` of a capacitated network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddBarrier {
    pub a: Vec<NodeId>,
    pub x: Vec<Vec<NodeId>>,
}

impl OddBarrier {
    /// u(A, V−A) − k.
    pub fn capacity(&self, net: &SkewSymmetricNetwork) -> i64 {
        let mut in_a = vec![false; net.node_count];
        for &v in &self.a {
            in_a[v] = true;
        }
        let out: i64 = net.arcs.iter().filter(|e| in_a[e.tail] && !in_a[e.head]).map(|e| e.cap).sum();
        out - self.x.len() as i64
    }
}

/// Bounds, symmetry, conservation and value consistency.
pub fn verify_isflow(net: &SkewSymmetricNetwork, f: &IsFlow) -> std::result::Result<(), Vec<String>> {
    let mut v = vec![];
    if f.values.len() != net.arcs.len() {
        return Err(vec![format!("flow has {} values for {} arcs", f.values.len(), net.arcs.len())]);
    }
    for (a, arc) in net.arcs.iter().enumerate() {
        let x = f.values[a];
        if x < 0 || x > arc.cap {
            v.push(format!("arc {a}: flow {x} outside [0,{}]", arc.cap));
        }
        let b = net.arc_mate[a];
        if a < b && f.values[b] != x {
            v.push(format!("arc {a}: asymmetric ({x} vs {} on mate {b})", f.values[b]));
        }
    }
    let mut div = vec![0i64; net.node_count];
    for (arc, &x) in net.arcs.iter().zip(&f.values) {
        div[arc.tail] += x;
        div[arc.head] -= x;
    }
    for x in 2..net.node_count {
        let d = div[x];
        if d != 0 {
            v.push(format!("node {x}: conservation violated by {d}"));
        }
    }
    let ds = div[SOURCE];
    if ds != f.value {
        v.push(format!("declared value {} but div(s) = {ds}", f.value));
    }
    if div[SINK] != -ds {
        v.push("div(s') != -div(s)".into());
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Checks (O1)-(O6); returns the capacity on success.
pub fn verify_odd_barrier(net: &SkewSymmetricNetwork, b: &OddBarrier) -> std::result::Result<i64, String> {
    let n = net.node_count;
    let mut class = vec![usize::MAX; n];
    for &v in &b.a {
        if v >= n || class[v] != usize::MAX {
            return Err(format!("O1: node {v} repeated or out of range"));
        }
        class[v] = 1;
    }
    for (i, xs) in b.x.iter().enumerate() {
        for &v in xs {
            if v >= n || class[v] != usize::MAX {
                return Err(format!("O1: node {v} in more than one set"));
            }
            class[v] = 3 + i;
        }
    }
    if class[SOURCE] != 1 {
        return Err("O1: source not in A".into());
    }
    for &v in &b.a {
        match class[mate(v)] {
            1 => return Err(format!("O2: A contains both {v} and its mate")),
            usize::MAX => class[mate(v)] = 2,
            _ => return Err(format!("O1: mate of A-node {v} lies in an X set")),
        }
    }
    for (i, xs) in b.x.iter().enumerate() {
        if xs.iter().any(|&v| class[mate(v)] != 3 + i) {
            return Err(format!("O3: X{} is not self-symmetric", i + 1));
        }
    }
    let mut into_x = vec![0i64; b.x.len()];
    for (a, arc) in net.arcs.iter().enumerate() {
        let cx = class[arc.tail];
        let cy = class[arc.head];
        if cx == 1 && cy != usize::MAX && cy >= 3 {
            into_x[cy - 3] += arc.cap;
        }
        if arc.cap == 0 {
            continue;
        }
        let is_x = |c: usize| c != usize::MAX && c >= 3;
        if is_x(cx) && is_x(cy) && cx != cy {
            return Err(format!("O5: arc {a} connects X{} and X{}", cx - 2, cy - 2));
        }
        if (is_x(cx) && cy == usize::MAX) || (cx == usize::MAX && is_x(cy)) {
            return Err(format!("O6: arc {a} connects an X set and M"));
        }
    }
    if let Some(i) = into_x.iter().position(|c| c % 2 == 0) {
        return Err(format!("O4: u(A,X{}) = {} is even", i + 1, into_x[i]));
    }
    Ok(b.capacity(net))
}

/// Existence of a regular `s -> s'` path.
pub fn oracle_rpath(g: &SkewGraph, budget: &OracleBudget) -> Result<bool> {
    Ok(oracle_rdist(g, budget)?.is_some())
}

/// Minimum length of a regular `s -> s'` path, by exhaustive DFS over
/// node-simple arc sequences without mate pairs. A shortest regular path is
/// node-simple, since cutting a closed sub-walk keeps regularity.
pub fn oracle_rdist(g: &SkewGraph, budget: &OracleBudget) -> Result<Option<usize>> {
    budget.admits_graph(g)?;
    let out = g.out_lists();
    let mut best: Option<usize> = None;
    let mut on_node = vec![false; g.node_count];
    let mut used = vec![false; g.arc_count()];
    fn dfs(
        g: &SkewGraph,
        out: &crate::ssgraph::Adjacency,
        v: NodeId,
        len: usize,
        on_node: &mut Vec<bool>,
        used: &mut Vec<bool>,
        best: &mut Option<usize>,
    ) {
        if v == SINK {
            *best = Some(best.map_or(len, |b| b.min(len)));
            return;
        }
        if best.is_some_and(|b| len + 1 >= b) {
            return;
        }
        for &a in out.of(v) {
            let w = g.head[a];
            if on_node[w] || used[g.mate[a]] {
                continue;
            }
            on_node[w] = true;
            used[a] = true;
            dfs(g, out, w, len + 1, on_node, used, best);
            on_node[w] = false;
            used[a] = false;
        }
    }
    on_node[SOURCE] = true;
    dfs(g, &out, SOURCE, 0, &mut on_node, &mut used, &mut best);
    Ok(best)
}

/// Maximum IS-flow value by exhaustive search over one arc per mate pair,
/// pruned by conservation at nodes whose incident pairs are all fixed.
pub fn oracle_max_isflow(net: &SkewSymmetricNetwork, budget: &OracleBudget) -> Result<i64> {
    budget.admits_network(net)?;
    let n = net.node_count;
    let reps: Vec<ArcId> = (0..net.arcs.len()).filter(|&a| a < net.arc_mate[a]).collect();
    // remaining unassigned pairs touching each inner node
    let mut pending = vec![0usize; n];
    for &a in &reps {
        for e in [a, net.arc_mate[a]] {
            pending[net.arcs[e].tail] += 1;
            pending[net.arcs[e].head] += 1;
        }
    }
    let mut div = vec![0i64; n];
    let mut best = 0i64;
    fn rec(
        net: &SkewSymmetricNetwork,
        reps: &[ArcId],
        i: usize,
        pending: &mut Vec<usize>,
        div: &mut Vec<i64>,
        best: &mut i64,
    ) {
        if i == reps.len() {
            *best = (*best).max(div[SOURCE]);
            return;
        }
        let a = reps[i];
        let pair = [a, net.arc_mate[a]];
        for e in pair {
            pending[net.arcs[e].tail] -= 1;
            pending[net.arcs[e].head] -= 1;
        }
        for val in 0..=net.arcs[a].cap {
            for e in pair {
                div[net.arcs[e].tail] += val;
                div[net.arcs[e].head] -= val;
            }
            let ok = pair.iter().all(|&e| {
                [net.arcs[e].tail, net.arcs[e].head].iter().all(|&x| x < 2 || pending[x] > 0 || div[x] == 0)
            });
            if ok {
                rec(net, reps, i + 1, pending, div, best);
            }
            for e in pair {
                div[net.arcs[e].tail] -= val;
                div[net.arcs[e].head] += val;
            }
        }
        for e in pair {
            pending[net.arcs[e].tail] += 1;
            pending[net.arcs[e].head] += 1;
        }
    }
    rec(net, &reps, 0, &mut pending, &mut div, &mut best);
    Ok(best)
}

/// Maximum cardinality matching of a simple undirected graph on ≤ 2·max_node_pairs vertices.
pub fn oracle_max_matching(n: usize, edges: &[(usize, usize)], budget: &OracleBudget) -> Result<usize> {
    if n > 2 * budget.max_node_pairs.max(6) {
        return Err(Error::Budget(format!("{n} vertices")));
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in edges {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    fn rec(adj: &[u64], free: u64, memo: &mut std::collections::HashMap<u64, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&r) = memo.get(&free) {
            return r;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = rec(adj, rest, memo);
        let mut cand = adj[v] & rest;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            best = best.max(1 + rec(adj, rest & !(1 << w), memo));
        }
        memo.insert(free, best);
        best
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(rec(&adj, all, &mut std::collections::HashMap::new()))
}

/// Whether some source pair `(z, σ(z))` has two arc-disjoint paths to the
/// sink using `residual[e]` copies of each arc. Plain augmenting paths on a
/// super-source feeding one unit into each source of the pair.
pub fn oracle_good_pair(inst: &crate::blockphase::MbpInstance, residual: &[i64]) -> bool {
    let n = inst.node_count;
    let m = inst.arc_count();
    inst.pairs.iter().any(|&(z1, z2)| {
        // arcs 2e / 2e+1 are forward / backward copies of arc e; then the two source arcs
        let src = n;
        let mut tail: Vec<usize> = vec![];
        let mut head: Vec<usize> = vec![];
        let mut cap: Vec<i64> = vec![];
        let mut push = |t: usize, h: usize, c: i64| {
            tail.extend([t, h]);
            head.extend([h, t]);
            cap.extend([c, 0]);
        };
        for e in 0..m {
            push(inst.tail[e], inst.head[e], residual[e].clamp(0, 2));
        }
        push(src, z1, 1);
        push(src, z2, 1);
        let mut out = vec![vec![]; n + 1];
        for (i, &t) in tail.iter().enumerate() {
            out[t].push(i);
        }
        let mut value = 0;
        while value < 2 {
            let mut via = vec![usize::MAX; n + 1];
            let mut seen = vec![false; n + 1];
            seen[src] = true;
            let mut stack = vec![src];
            while let Some(v) = stack.pop() {
                for &i in &out[v] {
                    if cap[i] > 0 && !seen[head[i]] {
                        seen[head[i]] = true;
                        via[head[i]] = i;
                        stack.push(head[i]);
                    }
                }
            }
            if !seen[inst.sink] {
                break;
            }
            let mut v = inst.sink;
            while v != src {
                let i = via[v];
                cap[i] -= 1;
                cap[i ^ 1] += 1;
                v = tail[i];
            }
            value += 1;
        }
        value == 2
    })
}

/// Checks a balanced path set: paths run from paired sources to the sink,
/// arc usage stays within capacity (1 when `unit`), and no good pair is
/// left in the residual. Returns the total flow on success.
pub fn verify_path_set(inst: &crate::blockphase::MbpInstance, set: &crate::blockphase::BalancedPathSet, unit: bool) -> std::result::Result<i64, String> {
    let m = inst.arc_count();
    let cap: Vec<i64> = inst.cap.iter().map(|&c| if unit { c.min(1) } else { c }).collect();
    let mut used = vec![0i64; m];
    for (i, p) in set.pairs.iter().enumerate() {
        if p.alpha <= 0 {
            return Err(format!("pair {i}: weight {}", p.alpha));
        }
        let mut ends = [0; 2];
        for (j, path) in [&p.q, &p.r].into_iter().enumerate() {
            let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
                return Err(format!("pair {i}: empty path"));
            };
            if path.iter().any(|&e| e >= m) {
                return Err(format!("pair {i}: arc out of range"));
            }
            if inst.head[last] != inst.sink {
                return Err(format!("pair {i}: path does not end at the sink"));
            }
            if path.windows(2).any(|w| inst.head[w[0]] != inst.tail[w[1]]) {
                return Err(format!("pair {i}: path is not contiguous"));
            }
            ends[j] = inst.tail[first];
            for &e in path {
                used[e] += p.alpha;
            }
        }
        let paired = inst.pairs.iter().any(|&(a, b)| (a, b) == (ends[0], ends[1]) || (b, a) == (ends[0], ends[1]));
        if !paired {
            return Err(format!("pair {i}: starts {} and {} are not mate sources", ends[0], ends[1]));
        }
    }
    let mut residual = cap;
    for e in 0..m {
        if used[e] > residual[e] {
            return Err(format!("arc {e}: usage {} above capacity {}", used[e], residual[e]));
        }
        residual[e] -= used[e];
    }
    if oracle_good_pair(inst, &residual) {
        return Err("a good pair survives in the residual".into());
    }
    Ok(set.pairs.iter().map(|p| 2 * p.alpha).sum())
}

//! Totally blocking IS-flows in acyclic networks.
//!
//! The network is cut along an antisymmetric potential into a half `Γ`
//! whose sources `Z` come in mate pairs; a blocking IS-flow is then a
//! maximal balanced path-set (unit capacities) or a balanced blocking flow
//! (general capacities) in `Γ`. Both are found by transit depth-first
//! search, shrinking each dead-end region into a complex node.

use std::collections::{HashMap, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::ssgraph::{mate, ArcId, IsFlow, NodeId, SkewSymmetricNetwork, SINK};
use crate::unionfind::LabeledUnionFind;

const NIL: usize = usize::MAX;

/// Acyclic digraph with sink `t` and paired sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbpInstance {
    pub node_count: usize,
    pub sink: NodeId,
    pub pairs: Vec<(NodeId, NodeId)>,
    pub tail: Vec<NodeId>,
    pub head: Vec<NodeId>,
    pub cap: Vec<i64>,
}

impl MbpInstance {
    pub fn new(node_count: usize, sink: NodeId) -> Self {
        MbpInstance { node_count, sink, pairs: vec![], tail: vec![], head: vec![], cap: vec![] }
    }

    pub fn arc_count(&self) -> usize {
        self.tail.len()
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, cap: i64) -> ArcId {
        self.tail.push(tail);
        self.head.push(head);
        self.cap.push(cap);
        self.tail.len() - 1
    }

    /// `partner[z] = σ(z)` for sources, `NIL` elsewhere.
    fn partners(&self) -> Vec<usize> {
        let mut p = vec![NIL; self.node_count];
        for &(a, b) in &self.pairs {
            p[a] = b;
            p[b] = a;
        }
        p
    }

    fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut indeg = vec![0usize; self.node_count];
        let mut out = vec![vec![]; self.node_count];
        for e in 0..self.arc_count() {
            indeg[self.head[e]] += 1;
            out[self.tail[e]].push(self.head[e]);
        }
        let mut order: Vec<NodeId> = (0..self.node_count).filter(|&v| indeg[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        (order.len() == self.node_count).then_some(order)
    }

    /// Arcs lying on a path from a live pair to the sink, where a pair is
    /// live while both of its sources keep such an arc.
    fn live_arcs(&self) -> (Vec<bool>, Vec<bool>) {
        let n = self.node_count;
        let m = self.arc_count();
        let mut pair_live = vec![true; self.pairs.len()];
        let mut live = vec![true; m];
        loop {
            let mut fwd = vec![false; n];
            let mut stack = vec![];
            for (i, &(a, b)) in self.pairs.iter().enumerate() {
                if pair_live[i] {
                    for z in [a, b] {
                        fwd[z] = true;
                        stack.push(z);
                    }
                }
            }
            let mut out = vec![vec![]; n];
            let mut inn = vec![vec![]; n];
            for e in (0..m).filter(|&e| live[e]) {
                out[self.tail[e]].push(e);
                inn[self.head[e]].push(e);
            }
            while let Some(v) = stack.pop() {
                for &e in &out[v] {
                    let w = self.head[e];
                    if !fwd[w] {
                        fwd[w] = true;
                        stack.push(w);
                    }
                }
            }
            let mut bwd = vec![false; n];
            bwd[self.sink] = true;
            stack.push(self.sink);
            while let Some(v) = stack.pop() {
                for &e in &inn[v] {
                    let w = self.tail[e];
                    if !bwd[w] {
                        bwd[w] = true;
                        stack.push(w);
                    }
                }
            }
            let next: Vec<bool> = (0..m).map(|e| live[e] && fwd[self.tail[e]] && bwd[self.head[e]]).collect();
            let mut has_out = vec![false; n];
            for e in (0..m).filter(|&e| next[e]) {
                has_out[self.tail[e]] = true;
            }
            let next_pairs: Vec<bool> = self.pairs.iter().zip(&pair_live).map(|(&(a, b), &l)| l && has_out[a] && has_out[b]).collect();
            if next == live && next_pairs == pair_live {
                return (live, pair_live);
            }
            live = next;
            pair_live = next_pairs;
        }
    }

    /// Drops arcs and pairs not on source-to-sink paths; returns the old id
    /// of every kept arc.
    pub fn clean_with_map(&self) -> (MbpInstance, Vec<ArcId>) {
        let (live, pair_live) = self.live_arcs();
        let mut out = MbpInstance::new(self.node_count, self.sink);
        out.pairs = self.pairs.iter().zip(&pair_live).filter(|(_, &l)| l).map(|(&p, _)| p).collect();
        let mut map = vec![];
        for e in (0..self.arc_count()).filter(|&e| live[e]) {
            out.add_arc(self.tail[e], self.head[e], self.cap[e]);
            map.push(e);
        }
        (out, map)
    }

    pub fn clean(&self) -> MbpInstance {
        self.clean_with_map().0
    }

    /// Checks acyclicity, source rules, positive capacities and (C1).
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count;
        if self.sink >= n {
            return invalid("sink out of range");
        }
        for e in 0..self.arc_count() {
            if self.tail[e] >= n || self.head[e] >= n {
                return invalid(format!("arc {e} names a missing node"));
            }
            if self.cap[e] <= 0 {
                return invalid(format!("arc {e} has nonpositive capacity"));
            }
        }
        let mut is_source = vec![false; n];
        for &(a, b) in &self.pairs {
            if a >= n || b >= n || a == b || a == self.sink || b == self.sink || is_source[a] || is_source[b] {
                return invalid(format!("source pair ({a},{b}) is malformed or overlaps another"));
            }
            is_source[a] = true;
            is_source[b] = true;
        }
        if let Some(e) = (0..self.arc_count()).find(|&e| is_source[self.head[e]]) {
            return invalid(format!("arc {e} enters a source"));
        }
        if self.topological_order().is_none() {
            return Err(Error::Cyclic);
        }
        let (live, pair_live) = self.live_arcs();
        if let Some(e) = live.iter().position(|&l| !l) {
            return invalid(format!("(C1) violated: arc {e} is on no source-to-sink path"));
        }
        if let Some(i) = pair_live.iter().position(|&l| !l) {
            return invalid(format!("(C1) violated: source pair {i} cannot reach the sink"));
        }
        Ok(())
    }
}

/// Two arc-disjoint paths from `σ`-paired sources; `q` starts at the first
/// source of its pair as found, `r` at the mate. Each is used `alpha` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPair {
    pub q: Vec<ArcId>,
    pub r: Vec<ArcId>,
    pub alpha: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MbpStats {
    pub breakthroughs: usize,
    pub shrinks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BalancedPathSet {
    pub pairs: Vec<GoodPair>,
    pub stats: MbpStats,
}

impl BalancedPathSet {
    /// `Σ αᵢ(χ^{Qᵢ} + χ^{Rᵢ})`.
    pub fn flow(&self, inst: &MbpInstance) -> Vec<i64> {
        let mut g = vec![0; inst.arc_count()];
        for p in &self.pairs {
            for &e in p.q.iter().chain(&p.r) {
                g[e] += p.alpha;
            }
        }
        g
    }
}

/// Intrusive doubly linked arc lists, one per node.
struct ArcLists {
    first: Vec<usize>,
    last: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
}

impl ArcLists {
    fn new(n: usize, m: usize) -> Self {
        ArcLists { first: vec![NIL; n], last: vec![NIL; n], next: vec![NIL; m], prev: vec![NIL; m] }
    }

    fn push(&mut self, x: NodeId, e: ArcId) {
        self.prev[e] = self.last[x];
        self.next[e] = NIL;
        match self.last[x] {
            NIL => self.first[x] = e,
            l => self.next[l] = e,
        }
        self.last[x] = e;
    }

    fn unlink(&mut self, x: NodeId, e: ArcId) {
        let (p, q) = (self.prev[e], self.next[e]);
        match p {
            NIL => self.first[x] = q,
            p => self.next[p] = q,
        }
        match q {
            NIL => self.last[x] = p,
            q => self.prev[q] = p,
        }
        self.prev[e] = NIL;
        self.next[e] = NIL;
    }

    /// Moves the whole list of `src` to the end of the list of `dst`.
    fn append(&mut self, dst: NodeId, src: NodeId) {
        let f = self.first[src];
        if f == NIL {
            return;
        }
        match self.last[dst] {
            NIL => self.first[dst] = f,
            l => {
                self.next[l] = f;
                self.prev[f] = l;
            }
        }
        self.last[dst] = self.last[src];
        self.first[src] = NIL;
        self.last[src] = NIL;
    }

    fn collect(&self, x: NodeId) -> Vec<ArcId> {
        let mut v = vec![];
        let mut e = self.first[x];
        while e != NIL {
            v.push(e);
            e = self.next[e];
        }
        v
    }
}

/// A shrunk region: its root and, per member, the arc towards the root.
struct Complex {
    root: NodeId,
    next: HashMap<NodeId, ArcId>,
}

/// State of the path-set search over a graph whose arcs are all unit.
/// Alive arcs always have a current representative as tail.
struct Engine {
    sink: NodeId,
    tail: Vec<NodeId>,
    head: Vec<NodeId>,
    alive: Vec<bool>,
    out: ArcLists,
    inl: ArcLists,
    indeg: Vec<usize>,
    outdeg: Vec<usize>,
    uf: LabeledUnionFind,
    partner: Vec<usize>,
    active: Vec<bool>,
    pending: Vec<NodeId>,
    records: Vec<Complex>,
    cur_complex: Vec<usize>,
    owner: Vec<usize>,
    parent_record: Vec<usize>,
    stamp: usize,
    seen: Vec<usize>,
    cursor: Vec<usize>,
    rev_done: Vec<bool>,
    p_mark: Vec<usize>,
    p_in: Vec<ArcId>,
    p_in_mark: Vec<usize>,
    stats: MbpStats,
}

type Step = (ArcId, bool);

impl Engine {
    fn new(inst: &MbpInstance, tail: Vec<NodeId>, head: Vec<NodeId>) -> Self {
        let n = inst.node_count;
        let m = tail.len();
        let mut out = ArcLists::new(n, m);
        let mut inl = ArcLists::new(n, m);
        let mut indeg = vec![0; n];
        let mut outdeg = vec![0; n];
        for e in 0..m {
            out.push(tail[e], e);
            inl.push(head[e], e);
            outdeg[tail[e]] += 1;
            indeg[head[e]] += 1;
        }
        let partner = inst.partners();
        let active = partner.iter().map(|&p| p != NIL).collect();
        Engine {
            sink: inst.sink,
            tail,
            head,
            alive: vec![true; m],
            out,
            inl,
            indeg,
            outdeg,
            uf: LabeledUnionFind::new(n),
            partner,
            active,
            pending: (0..n).collect(),
            records: vec![],
            cur_complex: vec![NIL; n],
            owner: vec![NIL; n],
            parent_record: vec![],
            stamp: 0,
            seen: vec![0; n],
            cursor: vec![NIL; n],
            rev_done: vec![false; n],
            p_mark: vec![0; m],
            p_in: vec![NIL; n],
            p_in_mark: vec![0; n],
            stats: MbpStats::default(),
        }
    }

    fn delete(&mut self, e: ArcId) {
        debug_assert!(self.alive[e]);
        self.alive[e] = false;
        let x = self.tail[e];
        let y = self.uf.find(self.head[e]);
        self.out.unlink(x, e);
        self.inl.unlink(y, e);
        self.outdeg[x] -= 1;
        self.indeg[y] -= 1;
        self.pending.push(x);
        self.pending.push(y);
    }

    /// Removes everything no longer on a `Z`-to-`t` path.
    fn clean(&mut self) {
        while let Some(x) = self.pending.pop() {
            let x = self.uf.find(x);
            if x == self.sink {
                continue;
            }
            if self.active[x] {
                if self.outdeg[x] == 0 {
                    let y = self.partner[x];
                    self.active[x] = false;
                    self.active[y] = false;
                    self.pending.push(y);
                }
                continue;
            }
            if self.indeg[x] == 0 {
                for e in self.out.collect(x) {
                    self.delete(e);
                }
            } else if self.outdeg[x] == 0 {
                for e in self.inl.collect(x) {
                    self.delete(e);
                }
            }
        }
    }

    fn visit(&mut self, x: NodeId, visited: &mut Vec<NodeId>) {
        if self.seen[x] != self.stamp {
            self.seen[x] = self.stamp;
            self.cursor[x] = self.out.first[x];
            self.rev_done[x] = false;
            visited.push(x);
        }
    }

    /// TDFS from `start` in the graph with `P` reversed. The reversed arc of
    /// `P` entering a node is scanned after all its other arcs.
    fn tdfs(&mut self, start: NodeId, p_rev: &[ArcId]) -> std::result::Result<Vec<Step>, Vec<NodeId>> {
        self.stamp += 1;
        for &e in p_rev {
            self.p_mark[e] = self.stamp;
            let y = self.uf.find(self.head[e]);
            self.p_in[y] = e;
            self.p_in_mark[y] = self.stamp;
        }
        let mut visited = vec![];
        self.visit(start, &mut visited);
        let mut stack: Vec<Step> = vec![];
        let mut cur = start;
        loop {
            let mut step = None;
            while self.cursor[cur] != NIL {
                let e = self.cursor[cur];
                self.cursor[cur] = self.out.next[e];
                if self.p_mark[e] != self.stamp {
                    step = Some((e, false, self.uf.find(self.head[e])));
                    break;
                }
            }
            if step.is_none() && !self.rev_done[cur] {
                self.rev_done[cur] = true;
                if self.p_in_mark[cur] == self.stamp {
                    let e = self.p_in[cur];
                    step = Some((e, true, self.tail[e]));
                }
            }
            match step {
                Some((e, rev, y)) => {
                    stack.push((e, rev));
                    if y == self.sink {
                        return Ok(stack);
                    }
                    self.visit(y, &mut visited);
                    cur = y;
                }
                None => match stack.pop() {
                    Some((e, true)) => cur = self.uf.find(self.head[e]),
                    Some((e, false)) => cur = self.tail[e],
                    None => return Err(visited),
                },
            }
        }
    }

    /// Splits `E(P) △ E(A)` into a path from `z` and a path from `z2`.
    fn good_pair(&mut self, z: NodeId, z2: NodeId, p_rev: &[ArcId], stack: &[Step]) -> (Vec<ArcId>, Vec<ArcId>) {
        let reversed: std::collections::HashSet<ArcId> = stack.iter().filter(|s| s.1).map(|s| s.0).collect();
        let mut by_tail: HashMap<NodeId, Vec<ArcId>> = HashMap::new();
        let arcs = p_rev.iter().copied().filter(|e| !reversed.contains(e)).chain(stack.iter().filter(|s| !s.1).map(|s| s.0));
        for e in arcs {
            by_tail.entry(self.tail[e]).or_default().push(e);
        }
        let mut walk = |from: NodeId, this: &mut Engine| {
            let mut path = vec![];
            let mut x = from;
            while x != this.sink {
                let e = by_tail.get_mut(&x).and_then(|v| v.pop()).expect("symmetric difference is not a pair of paths");
                path.push(e);
                x = this.uf.find(this.head[e]);
            }
            path
        };
        let q = walk(z, self);
        let r = walk(z2, self);
        debug_assert!(by_tail.values().all(|v| v.is_empty()));
        (q, r)
    }

    /// Member of record `k` containing node `y`, and the nested record if
    /// that member is itself complex.
    fn member_of(&self, y: NodeId, k: usize) -> (NodeId, Option<usize>) {
        let mut r = self.owner[y];
        let mut prev = None;
        while r != k {
            assert!(r != NIL, "node {y} is not inside complex record {k}");
            prev = Some(r);
            r = self.parent_record[r];
        }
        (prev.map_or(y, |p| self.records[p].root), prev)
    }

    fn expand_into(&self, y: NodeId, k: usize, out: &mut Vec<ArcId>) {
        let mut frames = vec![k];
        let mut cur = y;
        while let Some(&k) = frames.last() {
            if cur == self.records[k].root {
                frames.pop();
                continue;
            }
            let (x, sub) = self.member_of(cur, k);
            if let Some(j) = sub {
                if cur != x {
                    frames.push(j);
                    continue;
                }
            }
            let e = self.records[k].next[&x];
            out.push(e);
            cur = self.head[e];
        }
    }

    /// Replaces each entry into a complex node by its path to the root.
    fn expand(&mut self, path: &[ArcId]) -> Vec<ArcId> {
        let mut out = vec![];
        for &e in path {
            out.push(e);
            let y = self.head[e];
            let c = self.uf.find(y);
            if y != c {
                self.expand_into(y, self.cur_complex[c], &mut out);
            }
        }
        out
    }

    /// Shrinks the visited set into a complex node rooted at the tail of its
    /// unique leaving arc; returns that arc's index in `p_rev`.
    fn shrink(&mut self, z: NodeId, z2: NodeId, p_rev: &[ArcId], visited: &[NodeId]) -> usize {
        assert_eq!(self.seen[z], self.stamp, "(N1) violated: the start of P was not visited");
        for &y in visited {
            assert!(!self.active[y] || y == z || y == z2, "(N2) violated: source {y} visited");
        }
        let mut leaving = vec![];
        let mut internal = vec![];
        for &y in visited {
            for e in self.out.collect(y) {
                if self.seen[self.uf.find(self.head[e])] == self.stamp {
                    internal.push(e);
                } else {
                    leaving.push(e);
                }
            }
        }
        assert!(
            leaving.len() == 1 && self.p_mark[leaving[0]] == self.stamp,
            "(N1) violated: {} arcs leave the visited set",
            leaving.len()
        );
        let a = leaving[0];
        let v = self.tail[a];
        let mut into: HashMap<NodeId, Vec<ArcId>> = HashMap::new();
        for &e in &internal {
            into.entry(self.uf.find(self.head[e])).or_default().push(e);
        }
        let mut next = HashMap::new();
        let mut queue = VecDeque::from([v]);
        let mut reached = 1;
        while let Some(y) = queue.pop_front() {
            for &e in into.get(&y).map(Vec::as_slice).unwrap_or(&[]) {
                let x = self.tail[e];
                if x != v && !next.contains_key(&x) {
                    next.insert(x, e);
                    reached += 1;
                    queue.push_back(x);
                }
            }
        }
        assert_eq!(reached, visited.len(), "(N3) violated: a member cannot reach the root");
        for e in internal {
            self.delete(e);
        }
        for &y in visited {
            if y != v {
                self.inl.append(v, y);
                self.indeg[v] += self.indeg[y];
                self.indeg[y] = 0;
                debug_assert_eq!(self.outdeg[y], 0);
            }
        }
        debug_assert_eq!(self.outdeg[v], 1);
        let k = self.records.len();
        self.records.push(Complex { root: v, next });
        self.parent_record.push(NIL);
        for &y in visited {
            match self.cur_complex[y] {
                NIL => self.owner[y] = k,
                j => self.parent_record[j] = k,
            }
            self.uf.union(y, v, v);
        }
        self.cur_complex[v] = k;
        self.active[z] = false;
        self.active[z2] = false;
        self.pending.push(v);
        p_rev.iter().position(|&e| e == a).unwrap()
    }

    /// Runs the search. `on_pair` receives each expanded good pair and
    /// returns the arcs to delete (it must include every arc that is used up).
    fn run(&mut self, mut on_pair: impl FnMut(&[ArcId], &[ArcId]) -> Vec<ArcId>) -> Vec<(Vec<ArcId>, Vec<ArcId>)> {
        self.clean();
        let mut p_rev: Vec<ArcId> = vec![];
        let mut found = vec![];
        while self.indeg[self.sink] > 0 {
            let mut x = p_rev.last().map_or(self.sink, |&e| self.tail[e]);
            while !self.active[x] {
                let e = self.inl.first[x];
                assert!(e != NIL, "(C1) violated: node {x} has no entering arc");
                p_rev.push(e);
                x = self.tail[e];
            }
            let z = x;
            let z2 = self.partner[z];
            match self.tdfs(z2, &p_rev) {
                Ok(stack) => {
                    let (q, r) = self.good_pair(z, z2, &p_rev, &stack);
                    let (q, r) = (self.expand(&q), self.expand(&r));
                    for e in on_pair(&q, &r) {
                        if self.alive[e] {
                            self.delete(e);
                        }
                    }
                    self.clean();
                    p_rev.clear();
                    self.stats.breakthroughs += 1;
                    found.push((q, r));
                }
                Err(visited) => {
                    let idx = self.shrink(z, z2, &p_rev, &visited);
                    p_rev.truncate(idx + 1);
                    self.clean();
                    let keep = p_rev.iter().position(|&e| !self.alive[e]).unwrap_or(p_rev.len());
                    p_rev.truncate(keep);
                    self.stats.shrinks += 1;
                }
            }
        }
        found
    }
}

/// Maximal balanced path-set; every arc is treated as a unit arc.
pub fn solve_mbp(inst: &MbpInstance) -> Result<BalancedPathSet> {
    inst.validate()?;
    let mut engine = Engine::new(inst, inst.tail.clone(), inst.head.clone());
    let found = engine.run(|q, r| q.iter().chain(r).copied().collect());
    let pairs = found.into_iter().map(|(q, r)| GoodPair { q, r, alpha: 1 }).collect();
    Ok(BalancedPathSet { pairs, stats: engine.stats })
}

/// Balanced blocking flow. Runs the path-set search on the split graph, where each
/// arc `e` becomes parallel arcs of capacity `⌈u/2⌉` and `⌊u/2⌋` (the first
/// is critical when `u = 1`); after each pair the weight is maximal and
/// every split arc whose capacity reaches zero is deleted.
pub fn solve_bbf(inst: &MbpInstance) -> Result<BalancedPathSet> {
    inst.validate()?;
    let m = inst.arc_count();
    let mut tail = vec![];
    let mut head = vec![];
    let mut parent = vec![];
    let mut split = vec![[NIL; 2]; m];
    for e in 0..m {
        let parts = if inst.cap[e] >= 2 { 2 } else { 1 };
        for slot in split[e].iter_mut().take(parts) {
            *slot = tail.len();
            tail.push(inst.tail[e]);
            head.push(inst.head[e]);
            parent.push(e);
        }
    }
    let mut cap = inst.cap.clone();
    let mut pairs = vec![];
    let mut engine = Engine::new(inst, tail, head);
    let found = engine.run(|q, r| {
        let mut mult: HashMap<ArcId, i64> = HashMap::new();
        for &s in q.iter().chain(r) {
            *mult.entry(parent[s]).or_default() += 1;
        }
        let alpha = mult.iter().map(|(&e, &k)| cap[e] / k).min().unwrap();
        debug_assert!(alpha >= 1);
        let mut dead = vec![];
        for (&e, &k) in &mult {
            cap[e] -= alpha * k;
            if cap[e] == 0 {
                dead.extend(split[e].iter().copied().filter(|&s| s != NIL));
            } else if cap[e] == 1 && split[e][1] != NIL {
                dead.push(split[e][1]);
            }
        }
        let gq = q.iter().map(|&s| parent[s]).collect();
        let gr = r.iter().map(|&s| parent[s]).collect();
        pairs.push(GoodPair { q: gq, r: gr, alpha });
        dead
    });
    debug_assert_eq!(found.len(), pairs.len());
    Ok(BalancedPathSet { pairs, stats: engine.stats })
}

/// `Γ` with its sources, and the way back to the skew-symmetric network.
#[derive(Debug, Clone)]
pub struct MbpReduction {
    pub instance: MbpInstance,
    /// Network arc owning each `Γ` arc.
    pub arc_origin: Vec<ArcId>,
    /// Whether the `Γ` arc is the upper half of a subdivided arc.
    pub subdivided: Vec<bool>,
    /// Antisymmetric potential of the network nodes, increasing on arcs.
    pub potential: Vec<i64>,
}

/// Cuts an acyclic network along `π(v) = q(v) − q(σ(v))`, `q` a topological
/// numbering. Arcs from negative to positive potential get a zero node; the
/// zero nodes are the sources, paired by the node mate map, and `t = s'`.
pub fn to_mbp_instance(net: &SkewSymmetricNetwork) -> Result<MbpReduction> {
    let n = net.node_count;
    let arcs: Vec<ArcId> = (0..net.arc_count()).filter(|&a| net.arcs[a].cap > 0).collect();
    let mut indeg = vec![0usize; n];
    let mut out = vec![vec![]; n];
    for &a in &arcs {
        indeg[net.arcs[a].head] += 1;
        out[net.arcs[a].tail].push(net.arcs[a].head);
    }
    let mut order: Vec<NodeId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                order.push(w);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Cyclic);
    }
    let mut q = vec![0i64; n];
    for (i, &v) in order.iter().enumerate() {
        q[v] = i as i64;
    }
    let potential: Vec<i64> = (0..n).map(|v| q[v] - q[mate(v)]).collect();
    let crossing = arcs.iter().filter(|&&a| a < net.arc_mate[a] && potential[net.arcs[a].tail] < 0 && potential[net.arcs[a].head] > 0).count();
    let mut inst = MbpInstance::new(n + 2 * crossing, SINK);
    let mut origin = vec![];
    let mut subdivided = vec![];
    let mut k = 0;
    for &a in &arcs {
        let b = net.arc_mate[a];
        if b < a {
            continue;
        }
        let arc = net.arcs[a];
        let (x, y) = (arc.tail, arc.head);
        if potential[x] < 0 && potential[y] > 0 {
            let za = n + 2 * k;
            k += 1;
            inst.pairs.push((za, za + 1));
            inst.add_arc(za, y, arc.cap);
            inst.add_arc(za + 1, mate(x), arc.cap);
            origin.extend([a, b]);
            subdivided.extend([true, true]);
        } else if potential[x] > 0 {
            inst.add_arc(x, y, arc.cap);
            origin.push(a);
            subdivided.push(false);
        } else {
            inst.add_arc(mate(y), mate(x), arc.cap);
            origin.push(b);
            subdivided.push(false);
        }
    }
    let (instance, map) = inst.clean_with_map();
    let arc_origin = map.iter().map(|&e| origin[e]).collect();
    let subdivided = map.iter().map(|&e| subdivided[e]).collect();
    Ok(MbpReduction { instance, arc_origin, subdivided, potential })
}

/// Totally blocking IS-flow of an acyclic network: no `(u−g)`-regular
/// path from `s` to `s'` remains.
pub fn totally_blocking_isflow(net: &SkewSymmetricNetwork) -> Result<IsFlow> {
    let red = to_mbp_instance(net)?;
    let inst = &red.instance;
    let set = if inst.cap.iter().all(|&c| c == 1) { solve_mbp(inst)? } else { solve_bbf(inst)? };
    let g = set.flow(inst);
    let mut values = vec![0; net.arc_count()];
    for (e, &a) in red.arc_origin.iter().enumerate() {
        values[a] = g[e];
        if !red.subdivided[e] {
            values[net.arc_mate[a]] = g[e];
        }
    }
    let f = IsFlow::from_values(net, values);
    debug_assert!(crate::certify::verify_isflow(net, &f).is_ok());
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_path_set;
    use crate::gen::{random_mbp, rng_for};

    fn check_blocking(inst: &MbpInstance, set: &BalancedPathSet) {
        if let Err(e) = verify_path_set(inst, set, false) {
            panic!("{e}");
        }
    }

    #[test]
    fn test_disjoint_sources_give_one_pair() {
        let mut inst = MbpInstance::new(3, 2);
        inst.pairs.push((0, 1));
        inst.add_arc(0, 2, 1);
        inst.add_arc(1, 2, 1);
        let set = solve_mbp(&inst).unwrap();
        assert_eq!(set.pairs.len(), 1);
        check_blocking(&inst, &set);
    }

    #[test]
    fn test_shared_arc_gives_nothing() {
        let mut inst = MbpInstance::new(4, 3);
        inst.pairs.push((0, 1));
        inst.add_arc(0, 2, 1);
        inst.add_arc(1, 2, 1);
        inst.add_arc(2, 3, 1);
        let set = solve_mbp(&inst).unwrap();
        assert!(set.pairs.is_empty());
        assert_eq!(set.stats.shrinks, 1);
        check_blocking(&inst, &set);
    }

    #[test]
    fn test_bottleneck_of_two_parallel_arcs() {
        let mut inst = MbpInstance::new(6, 5);
        inst.pairs.extend([(0, 1), (2, 3)]);
        for z in 0..4 {
            inst.add_arc(z, 4, 1);
        }
        inst.add_arc(4, 5, 1);
        inst.add_arc(4, 5, 1);
        let set = solve_mbp(&inst).unwrap();
        assert_eq!(set.pairs.len(), 1);
        check_blocking(&inst, &set);
    }

    #[test]
    fn test_bbf_bottleneck_weight() {
        let mut inst = MbpInstance::new(4, 3);
        inst.pairs.push((0, 1));
        inst.add_arc(0, 2, 5);
        inst.add_arc(1, 3, 5);
        inst.add_arc(2, 3, 7);
        let set = solve_bbf(&inst).unwrap();
        assert_eq!(set.pairs.len(), 1);
        assert_eq!(set.pairs[0].alpha, 5);
        check_blocking(&inst, &set);
    }

    #[test]
    fn test_rejects_c1_violation_and_cycles() {
        let mut inst = MbpInstance::new(4, 3);
        inst.pairs.push((0, 1));
        inst.add_arc(0, 3, 1);
        inst.add_arc(1, 2, 1);
        assert!(solve_mbp(&inst).is_err());
        let mut cyc = MbpInstance::new(5, 4);
        cyc.pairs.push((0, 1));
        cyc.add_arc(0, 2, 1);
        cyc.add_arc(1, 2, 1);
        cyc.add_arc(2, 3, 1);
        cyc.add_arc(3, 2, 1);
        cyc.add_arc(3, 4, 1);
        assert!(matches!(solve_mbp(&cyc), Err(Error::Cyclic)));
    }

    #[test]
    fn test_random_unit_instances_are_blocking() {
        for k in 0..400 {
            let inst = random_mbp(&mut rng_for(11, k), 6, 2, 14, 1);
            let set = solve_mbp(&inst).unwrap();
            check_blocking(&inst, &set);
            assert_eq!(solve_bbf(&inst).unwrap().pairs, set.pairs);
        }
    }

    #[test]
    fn test_random_capacitated_instances_are_blocking() {
        for k in 0..400 {
            let inst = random_mbp(&mut rng_for(12, k), 6, 2, 14, 4);
            let set = solve_bbf(&inst).unwrap();
            check_blocking(&inst, &set);
        }
    }

    #[test]
    fn test_single_route_saturated() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 1);
        net.add_pair(2, 1, 1);
        let f = totally_blocking_isflow(&net).unwrap();
        assert_eq!(f.value, 2);
    }

    #[test]
    fn test_zero_crossing_arc_subdivided() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(0, 2, 1);
        net.add_pair(2, 3, 1);
        let red = to_mbp_instance(&net).unwrap();
        assert!(red.potential.iter().enumerate().all(|(v, &p)| p == -red.potential[mate(v)]));
        assert_eq!(red.instance.pairs.len(), 1);
        assert!(red.subdivided.iter().any(|&s| s));
    }
}

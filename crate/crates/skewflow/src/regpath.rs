//! Regular reachability and unit-length shortest regular paths.
//!
//! One primal-dual search serves both [`find_regular_path`] and
//! [`shortest_unit_sra`]. Lengths are doubled so every event time is an
//! integer: an arc costs 2, and a node's label `d` is twice its regular
//! distance from `s`.
//!
//! The search grows a set `W` of labelled nodes. An arc `(x,y)` with
//! `x ∈ W` either reaches `y` (when neither `y` nor `y'` is labelled) or is a
//! *bridge* (when `y' ∈ W`). A bridge whose two tree paths meet only at `s`
//! closes a shortest regular path; otherwise the union of both tree paths
//! and their mates becomes a fragment, the skew analogue of a blossom.

use crate::error::{invalid, Result};
use crate::ssgraph::{mate, Adjacency, ArcId, NodeId, SkewGraph, SOURCE};
use crate::unionfind::LabeledUnionFind;

const NONE: usize = usize::MAX;

/// s-barrier `(A; X_1..X_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBarrier {
    pub a: Vec<NodeId>,
    pub x: Vec<Vec<NodeId>>,
}

/// Self-symmetric node set entered by its base arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub nodes: Vec<NodeId>,
    pub base: ArcId,
}

impl Fragment {
    pub fn base_node(&self, g: &SkewGraph) -> NodeId {
        g.head[self.base]
    }
}

#[derive(Debug, Clone)]
pub enum RegPath {
    Path(Vec<ArcId>),
    Barrier(SBarrier),
}

#[derive(Debug, Clone)]
pub enum SraOutcome {
    Path { rdist: usize, path: Vec<ArcId>, tz: TrimmedZeroGraph },
    Barrier(SBarrier),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Unset,
    Root,
    Arc(ArcId),
    /// Node `z` entered through the bridge `arc`; its tree path is
    /// `trace(tail(arc)) · arc · σ(trace(yprime, σ(z)))`.
    Bridge { arc: ArcId, yprime: NodeId },
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Reach(ArcId),
    Bridge(ArcId),
}

#[derive(Debug, Clone)]
struct FragRec {
    base: ArcId,
    formed: i64,
    nested: Option<i64>,
    parent: usize,
    children: Vec<usize>,
    /// Nodes whose innermost fragment is this one.
    own: Vec<NodeId>,
}

/// Node labels that let paths be rebuilt inside fragments.
#[derive(Debug, Clone)]
pub struct Restoration {
    labels: Vec<Label>,
}

impl Restoration {
    /// Arcs of the recorded path from `stop` to `z` (`stop` must be a label ancestor of `z`).
    pub fn trace(&self, g: &SkewGraph, z: NodeId, stop: NodeId) -> Vec<ArcId> {
        enum Task {
            Fwd(NodeId, NodeId),
            Rev(NodeId, NodeId),
            Emit(ArcId),
        }
        let mut out = vec![];
        let mut stack = vec![Task::Fwd(z, stop)];
        let mut budget = 8 * (g.arc_count() + g.node_count) + 16;
        while let Some(t) = stack.pop() {
            budget = budget.checked_sub(1).expect("path restoration does not terminate");
            match t {
                Task::Emit(a) => out.push(a),
                Task::Fwd(z, stop) | Task::Rev(z, stop) if z == stop => {}
                Task::Fwd(z, stop) => match self.labels[z] {
                    Label::Arc(a) => {
                        stack.push(Task::Emit(a));
                        stack.push(Task::Fwd(g.tail[a], stop));
                    }
                    Label::Bridge { arc, yprime } => {
                        stack.push(Task::Rev(yprime, mate(z)));
                        stack.push(Task::Emit(arc));
                        stack.push(Task::Fwd(g.tail[arc], stop));
                    }
                    _ => panic!("trace from {z} passed the root without meeting {stop}"),
                },
                Task::Rev(z, stop) => match self.labels[z] {
                    Label::Arc(a) => {
                        stack.push(Task::Rev(g.tail[a], stop));
                        stack.push(Task::Emit(g.mate[a]));
                    }
                    Label::Bridge { arc, yprime } => {
                        stack.push(Task::Rev(g.tail[arc], stop));
                        stack.push(Task::Emit(g.mate[arc]));
                        stack.push(Task::Fwd(yprime, mate(z)));
                    }
                    _ => panic!("trace from {z} passed the root without meeting {stop}"),
                },
            }
        }
        out
    }
}

struct Search<'g> {
    g: &'g SkewGraph,
    out: Adjacency,
    in_w: Vec<bool>,
    d: Vec<i64>,
    labels: Vec<Label>,
    uf: LabeledUnionFind,
    /// Current maximal fragment whose representative is this node.
    top_frag: Vec<usize>,
    /// Innermost fragment of a node.
    first_frag: Vec<usize>,
    frags: Vec<FragRec>,
    base_flag: Vec<bool>,
    buckets: Vec<Vec<Event>>,
    now: i64,
    mark: Vec<u32>,
    mark_side: Vec<u8>,
    stamp: u32,
}

struct Found {
    time: i64,
    path: Vec<ArcId>,
}

impl<'g> Search<'g> {
    fn new(g: &'g SkewGraph) -> Self {
        let n = g.node_count;
        let mut s = Search {
            g,
            out: g.out_lists(),
            in_w: vec![false; n],
            d: vec![0; n],
            labels: vec![Label::Unset; n],
            uf: LabeledUnionFind::new(n),
            top_frag: vec![NONE; n],
            first_frag: vec![NONE; n],
            frags: vec![],
            base_flag: vec![false; g.arc_count()],
            buckets: vec![],
            now: 0,
            mark: vec![0; n],
            mark_side: vec![0; n],
            stamp: 0,
        };
        s.in_w[SOURCE] = true;
        s.labels[SOURCE] = Label::Root;
        s.scan(SOURCE);
        s
    }

    fn schedule(&mut self, time: i64, ev: Event) {
        debug_assert!(time >= self.now, "event scheduled in the past");
        let t = time.max(self.now) as usize;
        if self.buckets.len() <= t {
            self.buckets.resize_with(t + 1, Vec::new);
        }
        self.buckets[t].push(ev);
    }

    fn scan(&mut self, v: NodeId) {
        for i in 0..self.out.of(v).len() {
            let a = self.out.of(v)[i];
            let y = self.g.head[a];
            if self.in_w[mate(y)] {
                let t = (self.d[v] + self.d[mate(y)] + 2) / 2;
                self.schedule(t, Event::Bridge(a));
            } else if !self.in_w[y] {
                self.schedule(self.d[v] + 2, Event::Reach(a));
            }
        }
    }

    /// Tree parent (representative) of a representative; NONE for s.
    fn parent(&mut self, r: NodeId) -> usize {
        match self.labels[r] {
            Label::Arc(a) => self.uf.find(self.g.tail[a]),
            Label::Root => NONE,
            _ => unreachable!("representatives carry arc labels"),
        }
    }

    fn lca(&mut self, rx: NodeId, ry: NodeId) -> NodeId {
        if rx == ry {
            return rx;
        }
        self.stamp += 1;
        let (mut px, mut py) = (rx, ry);
        loop {
            for (p, side) in [(&mut px, 1u8), (&mut py, 2u8)] {
                let v = *p;
                if v == NONE {
                    continue;
                }
                if self.mark[v] == self.stamp && self.mark_side[v] != side {
                    return v;
                }
                self.mark[v] = self.stamp;
                self.mark_side[v] = side;
                *p = match self.labels[v] {
                    Label::Arc(a) => self.uf.find(self.g.tail[a]),
                    _ => NONE,
                };
            }
            debug_assert!(px != NONE || py != NONE, "tree paths must meet at the source");
        }
    }

    fn run(&mut self, stop_at_path: bool) -> Option<Found> {
        let mut t = 0usize;
        while t < self.buckets.len() {
            self.now = t as i64;
            let mut i = 0;
            while i < self.buckets[t].len() {
                let ev = self.buckets[t][i];
                i += 1;
                match ev {
                    Event::Reach(a) => {
                        let y = self.g.head[a];
                        if self.in_w[y] || self.in_w[mate(y)] {
                            continue;
                        }
                        self.in_w[y] = true;
                        self.d[y] = self.now;
                        self.labels[y] = Label::Arc(a);
                        self.scan(y);
                    }
                    Event::Bridge(a) => {
                        if let Some(found) = self.bridge(a) {
                            if stop_at_path {
                                return Some(found);
                            }
                        }
                    }
                }
            }
            t += 1;
        }
        None
    }

    fn bridge(&mut self, a: ArcId) -> Option<Found> {
        if self.base_flag[a] {
            return None;
        }
        let x = self.g.tail[a];
        let yp = mate(self.g.head[a]);
        let (rx, ry) = (self.uf.find(x), self.uf.find(yp));
        if rx == ry && self.top_frag[rx] != NONE {
            return None;
        }
        let b = self.lca(rx, ry);
        if b == SOURCE {
            let restore = Restoration { labels: self.labels.clone() };
            let mut path = restore.trace(self.g, x, SOURCE);
            path.push(a);
            path.extend(self.g.mate_path(&restore.trace(self.g, yp, SOURCE)));
            return Some(Found { time: self.now, path });
        }
        self.form_fragment(a, b, rx, ry);
        None
    }

    fn form_fragment(&mut self, a: ArcId, b: NodeId, rx: NodeId, ry: NodeId) {
        let g = self.g;
        let x = g.tail[a];
        let yp = mate(g.head[a]);
        let phi = self.frags.len();
        let base = match self.labels[b] {
            Label::Arc(e) => e,
            _ => unreachable!("fragment base must have an arc label"),
        };
        self.frags.push(FragRec {
            base,
            formed: self.now,
            nested: None,
            parent: NONE,
            children: vec![],
            own: vec![],
        });
        self.base_flag[base] = true;
        self.base_flag[g.mate[base]] = true;

        // (rep, label for its mate if trivial)
        let mut reps: Vec<(NodeId, Label)> = vec![];
        let y_label = Label::Bridge { arc: a, yprime: yp };
        let x_label = Label::Bridge { arc: g.mate[a], yprime: x };
        for (start, lab) in [(rx, x_label), (ry, y_label)] {
            let mut r = start;
            while r != b {
                reps.push((r, lab));
                r = self.parent(r);
            }
        }
        reps.push((b, y_label));

        let mut added = vec![];
        for &(r, lab) in &reps {
            let psi = self.top_frag[r];
            if psi != NONE {
                self.frags[psi].parent = phi;
                self.frags[psi].nested = Some(self.now);
                self.frags[phi].children.push(psi);
                self.top_frag[r] = NONE;
            } else {
                let rp = mate(r);
                debug_assert!(!self.in_w[rp]);
                self.in_w[rp] = true;
                self.d[rp] = 2 * self.now - self.d[r];
                self.labels[rp] = lab;
                self.first_frag[r] = phi;
                self.first_frag[rp] = phi;
                self.frags[phi].own.extend([r, rp]);
                self.uf.union(rp, r, r);
                added.push(rp);
            }
            self.uf.union(r, b, b);
        }
        self.top_frag[b] = phi;
        for rp in added {
            self.scan(rp);
        }
    }

    fn fragment_nodes(&self, phi: usize) -> Vec<NodeId> {
        let mut out = vec![];
        let mut stack = vec![phi];
        while let Some(f) = stack.pop() {
            out.extend(self.frags[f].own.iter().copied());
            stack.extend(self.frags[f].children.iter().copied());
        }
        out.sort_unstable();
        out
    }

    fn barrier(&mut self) -> SBarrier {
        let n = self.g.node_count;
        let a: Vec<NodeId> = (0..n).filter(|&v| self.in_w[v] && self.first_frag[v] == NONE).collect();
        let tops: Vec<usize> = (0..self.frags.len()).filter(|&f| self.frags[f].parent == NONE).collect();
        // group of a maximal fragment: follow base tails that lie in fragments
        let mut group = vec![NONE; self.frags.len()];
        for &f in &tops {
            let mut chain = vec![f];
            let mut cur = f;
            let root = loop {
                if group[cur] != NONE {
                    break group[cur];
                }
                let r = self.uf.find(self.g.tail[self.frags[cur].base]);
                let up = self.top_frag[r];
                if up == NONE {
                    break cur;
                }
                chain.push(up);
                cur = up;
            };
            for c in chain {
                group[c] = root;
            }
        }
        let mut roots: Vec<usize> = tops.iter().map(|&f| group[f]).collect();
        roots.sort_unstable();
        roots.dedup();
        let x = roots
            .iter()
            .map(|&r| {
                let mut nodes: Vec<NodeId> =
                    tops.iter().filter(|&&f| group[f] == r).flat_map(|&f| self.fragment_nodes(f)).collect();
                nodes.sort_unstable();
                nodes
            })
            .collect();
        SBarrier { a, x }
    }

    fn trimmed_zero_graph(&self, final_time: i64, path: &[ArcId]) -> TrimmedZeroGraph {
        let g = self.g;
        let n = g.node_count;
        let tau = |z: NodeId| {
            let f = self.first_frag[z];
            if f == NONE {
                final_time
            } else {
                self.frags[f].formed
            }
        };
        let mut pot = vec![0i64; n];
        for z in 0..n {
            if self.in_w[z] {
                pot[z] = self.d[z] - tau(z);
            }
        }
        for z in 0..n {
            if !self.in_w[z] && self.in_w[mate(z)] {
                pot[z] = -pot[mate(z)];
            }
        }
        let xi: Vec<i64> = self.frags.iter().map(|f| f.nested.unwrap_or(final_time) - f.formed).collect();
        let mut bonus = vec![0i64; g.arc_count()];
        for (f, rec) in self.frags.iter().enumerate() {
            bonus[rec.base] += xi[f];
            bonus[g.mate[rec.base]] += xi[f];
        }
        let chain_xi = |z: NodeId, stop: usize| -> i64 {
            let mut f = self.first_frag[z];
            let mut sum = 0;
            while f != NONE && f != stop {
                sum += xi[f];
                f = self.frags[f].parent;
            }
            sum
        };
        let mut seen = vec![usize::MAX; self.frags.len()];
        let reduced: Vec<i64> = (0..g.arc_count())
            .map(|e| {
                let (x, y) = (g.tail[e], g.head[e]);
                let mut f = self.first_frag[x];
                while f != NONE {
                    seen[f] = e;
                    f = self.frags[f].parent;
                }
                let mut common = self.first_frag[y];
                while common != NONE && seen[common] != e {
                    common = self.frags[common].parent;
                }
                2 + pot[x] - pot[y] - chain_xi(x, common) - chain_xi(y, common) + 2 * bonus[e]
            })
            .collect();
        debug_assert!(reduced.iter().all(|&r| r >= 0), "dual infeasible");
        debug_assert!(path.iter().all(|&e| reduced[e] == 0), "found path not tight");

        let fragments: Vec<Fragment> = (0..self.frags.len())
            .map(|f| Fragment { nodes: self.fragment_nodes(f), base: self.frags[f].base })
            .collect();
        let positive: Vec<usize> = (0..self.frags.len()).filter(|&f| xi[f] > 0).collect();
        let maximal: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&f| {
                let mut p = self.frags[f].parent;
                while p != NONE && xi[p] == 0 {
                    p = self.frags[p].parent;
                }
                p == NONE
            })
            .collect();
        let mut max_of = vec![NONE; n];
        for &f in &maximal {
            for &v in &fragments[f].nodes {
                max_of[v] = f;
            }
        }
        let mut graph = SkewGraph::new(n);
        let mut arc_map = vec![];
        let mut index_of = vec![NONE; g.arc_count()];
        for e in 0..g.arc_count() {
            if reduced[e] != 0 {
                continue;
            }
            let (x, y) = (g.tail[e], g.head[e]);
            let (mx, my) = (max_of[x], max_of[y]);
            if mx != NONE && mx == my {
                continue;
            }
            let tail = if mx != NONE && e != g.mate[self.frags[mx].base] {
                g.head[self.frags[mx].base]
            } else {
                x
            };
            let head = if my != NONE && e != self.frags[my].base {
                mate(g.head[self.frags[my].base])
            } else {
                y
            };
            index_of[e] = arc_map.len();
            arc_map.push(e);
            graph.tail.push(tail);
            graph.head.push(head);
        }
        graph.mate = arc_map.iter().map(|&e| index_of[g.mate[e]]).collect();
        debug_assert!(graph.mate.iter().all(|&m| m != NONE));
        let removed = (0..n)
            .filter(|&v| max_of[v] != NONE && v != g.head[self.frags[max_of[v]].base] && mate(v) != g.head[self.frags[max_of[v]].base])
            .collect();
        TrimmedZeroGraph {
            graph,
            arc_map,
            fragments: positive.iter().map(|&f| fragments[f].clone()).collect(),
            maximal: maximal.iter().map(|&f| fragments[f].clone()).collect(),
            removed,
            reduced,
            potential: pot,
            restore: Restoration { labels: self.labels.clone() },
        }
    }
}

/// Trimmed 0-graph of a unit-length shortest regular path computation.
///
/// Lengths, reduced lengths and potentials are in doubled units.
#[derive(Debug, Clone)]
pub struct TrimmedZeroGraph {
    /// Same node ids as the input; nodes in `removed` are isolated.
    pub graph: SkewGraph,
    /// tz arc -> input arc.
    pub arc_map: Vec<ArcId>,
    /// Fragments with positive dual value.
    pub fragments: Vec<Fragment>,
    /// Maximal members of `fragments` (pairwise disjoint).
    pub maximal: Vec<Fragment>,
    pub removed: Vec<NodeId>,
    /// Reduced length of every input arc.
    pub reduced: Vec<i64>,
    /// Antisymmetric node potential.
    pub potential: Vec<i64>,
    pub restore: Restoration,
}

impl TrimmedZeroGraph {
    /// Full 0-graph membership of input arcs.
    pub fn is_zero_arc(&self, e: ArcId) -> bool {
        self.reduced[e] == 0
    }

    /// `Q_φ(a)`: base arc, an inner path, then `a` leaving `V_φ` (`a` ≠ anti-base).
    pub fn connector(&self, g: &SkewGraph, phi: &Fragment, a: ArcId) -> Vec<ArcId> {
        let b = phi.base_node(g);
        let mut q = vec![phi.base];
        q.extend(self.restore.trace(g, g.tail[a], b));
        q.push(a);
        q
    }

    /// Expands an r-path of tz (tz arc ids) into a path of the input graph.
    pub fn restore_path(&self, g: &SkewGraph, path: &[ArcId]) -> Result<Vec<ArcId>> {
        let start = path.first().map_or(SOURCE, |&e| self.graph.tail[e]);
        if !self.graph.is_regular(path) || self.graph.walk_nodes(start, path).is_none() {
            return invalid("path is not a regular path of the trimmed graph");
        }
        let mut out: Vec<ArcId> = vec![];
        for (i, &e) in path.iter().enumerate() {
            let orig = self.arc_map[e];
            if i > 0 {
                let prev = *out.last().unwrap();
                let (y, x) = (g.head[prev], g.tail[orig]);
                if y != x {
                    let phi = self
                        .maximal
                        .iter()
                        .find(|f| f.nodes.binary_search(&y).is_ok())
                        .ok_or_else(|| crate::Error::InvalidInput("junction outside fragments".into()))?;
                    let b = phi.base_node(g);
                    if y == b {
                        out.extend(self.restore.trace(g, x, b));
                    } else {
                        out.extend(g.mate_path(&self.restore.trace(g, mate(y), b)));
                    }
                }
            }
            out.push(orig);
        }
        Ok(out)
    }
}

/// RA: a regular `s -> s'` path, or an s-barrier.
pub fn find_regular_path(g: &SkewGraph) -> RegPath {
    let mut s = Search::new(g);
    match s.run(true) {
        Some(found) => RegPath::Path(found.path),
        None => RegPath::Barrier(s.barrier()),
    }
}

/// SRA with unit lengths: shortest regular path length, one such path,
/// and the trimmed 0-graph; or an s-barrier.
pub fn shortest_unit_sra(g: &SkewGraph) -> SraOutcome {
    let mut s = Search::new(g);
    match s.run(true) {
        Some(found) => {
            let tz = s.trimmed_zero_graph(found.time, &found.path);
            SraOutcome::Path { rdist: found.time as usize, path: found.path, tz }
        }
        None => SraOutcome::Barrier(s.barrier()),
    }
}

/// Result of trimming one fragment; arc ids are preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trimmed {
    /// New endpoints per arc, `None` for deleted (T3) arcs.
    pub ends: Vec<Option<(NodeId, NodeId)>>,
    pub removed: Vec<NodeId>,
}

/// Trims `phi` by rules (T1)-(T2); arcs inside `V_φ` (T3) are deleted.
pub fn trim_fragment(g: &SkewGraph, phi: &Fragment) -> Result<Trimmed> {
    let mut inside = vec![false; g.node_count];
    for &v in &phi.nodes {
        inside[v] = true;
    }
    if inside[SOURCE] {
        return invalid("fragment contains the source");
    }
    if phi.nodes.iter().any(|&v| !inside[mate(v)]) {
        return invalid("fragment node set is not self-symmetric");
    }
    let e = phi.base;
    if inside[g.tail[e]] || !inside[g.head[e]] {
        return invalid("base arc does not enter the fragment");
    }
    let w = g.head[e];
    let anti = g.mate[e];
    let ends = (0..g.arc_count())
        .map(|a| {
            let (x, y) = (g.tail[a], g.head[a]);
            match (inside[x], inside[y]) {
                (true, true) => None,
                (false, false) => Some((x, y)),
                _ if a == e || a == anti => Some((x, y)),
                (true, false) => Some((w, y)),
                (false, true) => Some((x, mate(w))),
            }
        })
        .collect();
    let removed = phi.nodes.iter().copied().filter(|&v| v != w && v != mate(w)).collect();
    Ok(Trimmed { ends, removed })
}

/// Checks (B1)-(B7); on failure names the first violated condition.
pub fn verify_barrier(g: &SkewGraph, b: &SBarrier) -> std::result::Result<(), String> {
    let n = g.node_count;
    // 0 = M, 1 = A, 2 = A', 3+i = X_i
    let mut class = vec![usize::MAX; n];
    for &v in &b.a {
        if v >= n || class[v] != usize::MAX {
            return Err(format!("B1: node {v} repeated or out of range"));
        }
        class[v] = 1;
    }
    for (i, xs) in b.x.iter().enumerate() {
        for &v in xs {
            if v >= n || class[v] != usize::MAX {
                return Err(format!("B1: node {v} in more than one set"));
            }
            class[v] = 3 + i;
        }
    }
    if class[SOURCE] != 1 {
        return Err("B1: source not in A".into());
    }
    for &v in &b.a {
        if class[mate(v)] == 1 {
            return Err(format!("B2: A contains both {v} and its mate"));
        }
    }
    for &v in &b.a {
        if class[mate(v)] != usize::MAX {
            return Err(format!("B1: mate of A-node {v} lies in another set"));
        }
        class[mate(v)] = 2;
    }
    for (i, xs) in b.x.iter().enumerate() {
        if xs.iter().any(|&v| class[mate(v)] != 3 + i) {
            return Err(format!("B3: X{} is not self-symmetric", i + 1));
        }
    }
    for c in class.iter_mut() {
        if *c == usize::MAX {
            *c = 0;
        }
    }
    let mut entering = vec![0usize; b.x.len()];
    for a in 0..g.arc_count() {
        let (cx, cy) = (class[g.tail[a]], class[g.head[a]]);
        if cx == 1 && cy >= 3 {
            entering[cy - 3] += 1;
        }
        if cx >= 3 && cy >= 3 && cx != cy {
            return Err(format!("B5: arc {a} connects X{} and X{}", cx - 2, cy - 2));
        }
        if (cx >= 3 && cy == 0) || (cx == 0 && cy >= 3) {
            return Err(format!("B6: arc {a} connects an X set and M"));
        }
        if cx == 1 && (cy == 2 || cy == 0) {
            return Err(format!("B7: arc {a} goes from A to A'∪M"));
        }
    }
    if let Some(i) = entering.iter().position(|&c| c != 1) {
        return Err(format!("B4: {} arcs from A to X{}", entering[i], i + 1));
    }
    Ok(())
}

/// (F1)-(F2) for a fragment collection.
pub fn check_well_nested(g: &SkewGraph, frags: &[Fragment]) -> std::result::Result<(), String> {
    let sets: Vec<std::collections::HashSet<NodeId>> = frags.iter().map(|f| f.nodes.iter().copied().collect()).collect();
    let crosses = |s: &std::collections::HashSet<NodeId>, a: ArcId| s.contains(&g.tail[a]) != s.contains(&g.head[a]);
    for i in 0..frags.len() {
        for j in 0..frags.len() {
            if i == j {
                continue;
            }
            let (si, sj) = (&sets[i], &sets[j]);
            let inter = si.intersection(sj).count();
            let nested_ji = inter == sj.len();
            if inter != 0 && inter != si.len() && !nested_ji {
                return Err(format!("F1: fragments {i} and {j} overlap"));
            }
            if nested_ji && crosses(si, frags[j].base) && frags[j].base != frags[i].base {
                return Err(format!("F2: nested fragment {j} has a different base crossing fragment {i}"));
            }
            if inter == 0 && crosses(si, frags[j].base) && crosses(sj, frags[i].base) {
                return Err(format!("F2: disjoint fragments {i} and {j} cross each other's base"));
            }
        }
    }
    Ok(())
}

/// Compatibility of a path with a fragment collection.
pub fn is_compatible(g: &SkewGraph, path: &[ArcId], frags: &[Fragment]) -> bool {
    frags.iter().all(|f| {
        let inside = |v: NodeId| f.nodes.binary_search(&v).is_ok();
        let crossing: Vec<ArcId> = path.iter().copied().filter(|&a| inside(g.tail[a]) != inside(g.head[a])).collect();
        match crossing.len() {
            0 | 1 => true,
            2 => {
                let hits = crossing.iter().filter(|&&a| a == f.base || a == g.mate[f.base]).count();
                hits == 1
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{oracle_rdist, OracleBudget};
    use crate::gen::{random_skew_graph, rng_for};
    use crate::ssgraph::SINK;
    use rand::Rng;

    fn is_st_path(g: &SkewGraph, p: &[ArcId]) -> bool {
        !p.is_empty() && g.walk_nodes(SOURCE, p).map_or(false, |nodes| *nodes.last().unwrap() == SINK) && g.is_regular(p)
    }

    fn is_acyclic(g: &SkewGraph) -> bool {
        let mut indeg = vec![0; g.node_count];
        for &h in &g.head {
            indeg[h] += 1;
        }
        let out = g.out_lists();
        let mut stack: Vec<NodeId> = (0..g.node_count).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &a in out.of(v) {
                indeg[g.head[a]] -= 1;
                if indeg[g.head[a]] == 0 {
                    stack.push(g.head[a]);
                }
            }
        }
        seen == g.node_count
    }

    fn random_case(k: u64) -> SkewGraph {
        let mut rng = rng_for(5, k);
        let pairs = rng.gen_range(2..=6);
        let arcs = rng.gen_range(4..=12);
        random_skew_graph(&mut rng, pairs, arcs)
    }

    #[test]
    fn test_barrier_on_mate_pair_shape() {
        let mut g = SkewGraph::new(4);
        g.add_pair(0, 2);
        g.add_pair(2, 3);
        match find_regular_path(&g) {
            RegPath::Barrier(b) => verify_barrier(&g, &b).unwrap(),
            RegPath::Path(p) => panic!("unexpected path {p:?}"),
        }
    }

    #[test]
    fn test_single_route_path() {
        let mut g = SkewGraph::new(4);
        g.add_pair(0, 2);
        g.add_pair(2, 1);
        match shortest_unit_sra(&g) {
            SraOutcome::Path { rdist, path, .. } => {
                assert_eq!(rdist, 2);
                assert!(is_st_path(&g, &path));
            }
            SraOutcome::Barrier(_) => panic!("route not found"),
        }
    }

    #[test]
    fn test_reachability_dichotomy_matches_oracle() {
        let budget = OracleBudget::default();
        for k in 0..3000 {
            let g = random_case(k);
            let expected = oracle_rdist(&g, &budget).unwrap().is_some();
            match find_regular_path(&g) {
                RegPath::Path(p) => {
                    assert!(expected, "case {k}: path found where the oracle finds none");
                    assert!(is_st_path(&g, &p), "case {k}: output is not a regular s-s' path");
                }
                RegPath::Barrier(b) => {
                    assert!(!expected, "case {k}: barrier returned but a regular path exists");
                    verify_barrier(&g, &b).unwrap_or_else(|e| panic!("case {k}: {e}"));
                }
            }
        }
    }

    #[test]
    fn test_shortest_distance_and_trimmed_graph() {
        let budget = OracleBudget::default();
        for k in 0..3000 {
            let g = random_case(k);
            let expected = oracle_rdist(&g, &budget).unwrap();
            match shortest_unit_sra(&g) {
                SraOutcome::Barrier(b) => {
                    assert_eq!(expected, None, "case {k}");
                    verify_barrier(&g, &b).unwrap();
                }
                SraOutcome::Path { rdist, path, tz } => {
                    assert_eq!(Some(rdist), expected, "case {k}");
                    assert_eq!(path.len(), rdist);
                    assert!(is_st_path(&g, &path));
                    assert!(tz.reduced.iter().all(|&r| r >= 0));
                    assert!(path.iter().all(|&e| tz.is_zero_arc(e)));
                    assert!((0..g.node_count).all(|v| tz.potential[v] == -tz.potential[mate(v)]));
                    check_well_nested(&g, &tz.fragments).unwrap();
                    let mut owner = vec![false; g.node_count];
                    for phi in &tz.maximal {
                        for &v in &phi.nodes {
                            assert!(!owner[v], "case {k}: maximal fragments overlap at {v}");
                            owner[v] = true;
                        }
                    }
                    assert!(is_compatible(&g, &path, &tz.fragments), "case {k}");
                    assert!(is_acyclic(&tz.graph), "case {k}: trimmed graph has a cycle");
                    match find_regular_path(&tz.graph) {
                        RegPath::Path(q) => {
                            let full = tz.restore_path(&g, &q).unwrap();
                            assert!(is_st_path(&g, &full), "case {k}: restored path is not regular");
                            assert_eq!(full.len(), rdist, "case {k}: restored path is not shortest");
                        }
                        RegPath::Barrier(_) => panic!("case {k}: trimmed graph lost every path"),
                    }
                }
            }
        }
    }

    #[test]
    fn test_trim_rejects_bad_fragments() {
        let mut g = SkewGraph::new(6);
        let (e, _) = g.add_pair(0, 2);
        g.add_pair(2, 3);
        g.add_pair(3, 4);
        let phi = Fragment { nodes: vec![2, 3], base: e };
        let t = trim_fragment(&g, &phi).unwrap();
        assert!(t.ends[2].is_none() && t.ends[3].is_none());
        assert_eq!(t.ends[4], Some((2, 4)));
        assert!(t.removed.is_empty());
        assert!(trim_fragment(&g, &Fragment { nodes: vec![2], base: e }).is_err());
        assert!(trim_fragment(&g, &Fragment { nodes: vec![0, 1, 2, 3], base: e }).is_err());
    }
}

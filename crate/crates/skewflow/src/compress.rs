//! Symmetric clique compression of matching networks.
//!
//! The edge layer of a matching network is a bipartite digraph from
//! `X = {v1}` to `Y = {v2}`, and `σ` swaps the two sides. A clique `C(A,B)`
//! of that layer is replaced by a star: a new node `z`, arcs `(x,z)` for
//! `x ∈ A` and `(z,y)` for `y ∈ B`. Its mate clique `σ(C)` becomes the star
//! on `z'`. Single-arc cliques are left as plain arcs.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::ssgraph::{mate, ArcId, IsFlow, NodeId, SkewSymmetricNetwork, SINK, SOURCE};

/// Complete bipartite subgraph `A × B` of the edge layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub a: Vec<NodeId>,
    pub b: Vec<NodeId>,
}

impl Clique {
    pub fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn arc_count(&self) -> usize {
        self.a.len() * self.b.len()
    }

    /// `σ(C(A,B)) = C(σB, σA)`.
    pub fn mirror(&self) -> Clique {
        Clique { a: self.b.iter().map(|&y| mate(y)).collect(), b: self.a.iter().map(|&x| mate(x)).collect() }
    }
}

/// Cliques whose arc sets partition the edge layer. In a symmetric
/// partition, `cliques[2i+1]` is the mirror of `cliques[2i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    pub cliques: Vec<Clique>,
    pub symmetric: bool,
}

impl CliquePartition {
    /// `s(𝒞) = Σ (|A| + |B|)`.
    pub fn size(&self) -> usize {
        self.cliques.iter().map(Clique::size).sum()
    }

    /// Checks the partition against the edge layer of `net`.
    pub fn validate(&self, net: &SkewSymmetricNetwork) -> Result<()> {
        let layer = EdgeLayer::of(net)?;
        let mut covered = vec![false; net.arc_count()];
        for (i, c) in self.cliques.iter().enumerate() {
            if c.a.is_empty() || c.b.is_empty() {
                return invalid(format!("clique {i} has an empty side"));
            }
            for &x in &c.a {
                for &y in &c.b {
                    let Some(&e) = layer.arc.get(&(x, y)) else {
                        return invalid(format!("clique {i} needs missing arc ({x},{y})"));
                    };
                    if std::mem::replace(&mut covered[e], true) {
                        return invalid(format!("arc {e} lies in two cliques"));
                    }
                }
            }
            if self.symmetric && i % 2 == 1 && self.cliques[i - 1].mirror() != *c {
                return invalid(format!("clique {i} is not the mirror of clique {}", i - 1));
            }
        }
        if self.symmetric && self.cliques.len() % 2 == 1 {
            return invalid("symmetric partition has an unpaired clique");
        }
        if let Some(&e) = layer.arcs.iter().find(|&&e| !covered[e]) {
            return invalid(format!("edge-layer arc {e} is not covered"));
        }
        Ok(())
    }
}

/// Inner arcs from even to odd nodes, indexed by endpoints.
struct EdgeLayer {
    arcs: Vec<ArcId>,
    arc: HashMap<(NodeId, NodeId), ArcId>,
}

impl EdgeLayer {
    fn of(net: &SkewSymmetricNetwork) -> Result<EdgeLayer> {
        let mut arcs = vec![];
        let mut arc = HashMap::new();
        for (e, a) in net.arcs.iter().enumerate() {
            if a.tail == SOURCE || a.head == SINK {
                continue;
            }
            if a.tail % 2 != 0 || a.head % 2 != 1 || a.tail == SINK || a.head == SOURCE {
                return invalid(format!("arc {e} is not an X -> Y arc of a bipartite edge layer"));
            }
            if arc.insert((a.tail, a.head), e).is_some() {
                return invalid(format!("parallel arcs ({},{})", a.tail, a.head));
            }
            arcs.push(e);
        }
        Ok(EdgeLayer { arcs, arc })
    }
}

/// Target `(|A|, |B|)` of a δ-clique in a layer with `n` nodes per side
/// and `m` arcs; logs are base 2.
pub fn delta_clique_dims(n: usize, m: usize, delta: f64) -> (usize, usize) {
    if n == 0 || m == 0 {
        return (0, 0);
    }
    let nf = n as f64;
    let a = nf.powf(1.0 - delta).ceil() as usize;
    let ratio = (2.0 * nf * nf / m as f64).log2();
    let b = if ratio <= 0.0 { n } else { (delta * nf.log2() / ratio).floor() as usize };
    (a, b.min(n))
}

/// `β = log(n²/m) / log n`.
pub fn beta(n: usize, m: usize) -> f64 {
    let nf = n as f64;
    if n < 2 || m == 0 {
        return 0.0;
    }
    ((nf * nf) / m as f64).ln() / nf.ln()
}

/// Greedy symmetric clique partition of the edge layer of `net`.
///
/// While the layer has at least `2n^{2−δ}` arcs and the δ-clique `B` side is
/// nonempty, grow a clique from the highest-degree `X` node among the
/// `⌈n^{1−δ}⌉` highest-degree ones, adding the candidate that keeps the most
/// common neighbours while the arc saving `|A||B| − |A| − |B|` grows; then
/// delete it and its mirror. Leftover arcs become single-arc cliques.
pub fn symmetric_clique_partition(net: &SkewSymmetricNetwork, delta: f64) -> Result<CliquePartition> {
    if !(delta > 0.0 && delta < 0.5) {
        return invalid(format!("delta {delta} outside (0, 1/2)"));
    }
    let layer = EdgeLayer::of(net)?;
    let n = net.node_count / 2 - 1;
    let words = net.node_count.div_ceil(64);
    // neighbourhoods of X nodes as bitsets over node ids
    let mut nbr = vec![vec![0u64; words]; net.node_count];
    let mut degree = vec![0usize; net.node_count];
    for &e in &layer.arcs {
        let (x, y) = (net.arcs[e].tail, net.arcs[e].head);
        if nbr[x][y / 64] & (1 << (y % 64)) == 0 {
            nbr[x][y / 64] |= 1 << (y % 64);
            degree[x] += 1;
        }
    }
    let mut m = layer.arcs.len();
    let mut cliques = vec![];
    let threshold = 2.0 * (n as f64).powf(2.0 - delta);
    loop {
        let (a_target, b_target) = delta_clique_dims(n, m, delta);
        if (m as f64) < threshold || b_target == 0 {
            break;
        }
        let mut cand: Vec<NodeId> = (2..net.node_count).step_by(2).filter(|&x| degree[x] > 0).collect();
        cand.sort_by_key(|&x| (std::cmp::Reverse(degree[x]), x));
        cand.truncate(a_target.max(1));
        let Some(clique) = grow_clique(&nbr, &cand) else { break };
        if clique.arc_count() <= clique.size() {
            break;
        }
        let mirror = clique.mirror();
        for c in [&clique, &mirror] {
            for &x in &c.a {
                for &y in &c.b {
                    debug_assert!(nbr[x][y / 64] & (1 << (y % 64)) != 0, "clique and mirror overlap");
                    nbr[x][y / 64] &= !(1 << (y % 64));
                    degree[x] -= 1;
                    m -= 1;
                }
            }
        }
        cliques.push(clique);
        cliques.push(mirror);
    }
    // leftovers, paired with their mates
    for &e in &layer.arcs {
        let (x, y) = (net.arcs[e].tail, net.arcs[e].head);
        let f = net.arc_mate[e];
        if nbr[x][y / 64] & (1 << (y % 64)) != 0 && e < f {
            let c = Clique { a: vec![x], b: vec![y] };
            cliques.push(c.clone());
            cliques.push(c.mirror());
        }
    }
    Ok(CliquePartition { cliques, symmetric: true })
}

fn grow_clique(nbr: &[Vec<u64>], cand: &[NodeId]) -> Option<Clique> {
    let first = *cand.first()?;
    let mut a = vec![first];
    let mut common = nbr[first].clone();
    let count = |s: &[u64]| s.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let saving = |a: usize, b: usize| (a * b) as i64 - (a + b) as i64;
    let mut best = saving(1, count(&common));
    loop {
        let mut pick: Option<(usize, NodeId)> = None;
        for &x in cand {
            if a.contains(&x) {
                continue;
            }
            let c: usize = common.iter().zip(&nbr[x]).map(|(p, q)| (p & q).count_ones() as usize).sum();
            if pick.is_none_or(|(pc, _)| c > pc) {
                pick = Some((c, x));
            }
        }
        match pick {
            Some((c, x)) if saving(a.len() + 1, c) > best => {
                best = saving(a.len() + 1, c);
                a.push(x);
                for (p, q) in common.iter_mut().zip(&nbr[x]) {
                    *p &= q;
                }
            }
            _ => break,
        }
    }
    let b: Vec<NodeId> = (0..common.len() * 64).filter(|&y| common[y / 64] & (1 << (y % 64)) != 0).collect();
    if b.is_empty() {
        return None;
    }
    a.sort_unstable();
    Some(Clique { a, b })
}

/// The compressed network and the way back.
#[derive(Debug, Clone)]
pub struct StarTransform {
    pub net: SkewSymmetricNetwork,
    /// Compressed arc -> original arc, for arcs kept as they are.
    pub kept: Vec<Option<ArcId>>,
    /// Star center of each multi-arc clique; mirror cliques sit at `mate(center)`.
    pub centers: Vec<(NodeId, Clique)>,
    pub original_arcs: usize,
}

/// Replaces every multi-arc clique of a symmetric partition by a star.
/// Requires a unit edge layer and unit in-capacity at every `X` node, so
/// any star flow routes back onto clique arcs.
pub fn compress_to_stars(net: &SkewSymmetricNetwork, partition: &CliquePartition) -> Result<StarTransform> {
    if !partition.symmetric {
        return invalid("star transformation needs a symmetric partition");
    }
    partition.validate(net)?;
    let layer = EdgeLayer::of(net)?;
    let mut incap = vec![0i64; net.node_count];
    for a in &net.arcs {
        incap[a.head] += a.cap;
    }
    if let Some(&e) = layer.arcs.iter().find(|&&e| net.arcs[e].cap != 1) {
        return invalid(format!("edge-layer arc {e} has capacity other than 1"));
    }
    let mut in_star = vec![false; net.arc_count()];
    let mut stars = vec![];
    for pair in partition.cliques.chunks(2) {
        let c = &pair[0];
        if c.arc_count() > 1 {
            if let Some(&x) = c.a.iter().find(|&&x| incap[x] > 1) {
                return invalid(format!("node {x} has in-capacity above 1"));
            }
            for cl in pair {
                for &x in &cl.a {
                    for &y in &cl.b {
                        in_star[layer.arc[&(x, y)]] = true;
                    }
                }
            }
            stars.push(c.clone());
        }
    }
    let mut out = SkewSymmetricNetwork::new(net.node_count + 2 * stars.len());
    let mut kept = vec![];
    for (e, a) in net.arcs.iter().enumerate() {
        let f = net.arc_mate[e];
        if in_star[e] || f < e {
            continue;
        }
        out.add_pair(a.tail, a.head, a.cap);
        kept.extend([Some(e), Some(f)]);
    }
    let mut centers = vec![];
    for (i, c) in stars.into_iter().enumerate() {
        let z = net.node_count + 2 * i;
        for &x in &c.a {
            out.add_pair(x, z, 1);
        }
        for &y in &c.b {
            out.add_pair(z, y, 1);
        }
        kept.resize(out.arc_count(), None);
        centers.push((z, c));
    }
    if let Some(inf) = net.infinite_cap {
        let arcs: Vec<ArcId> = (0..out.arc_count()).filter(|&e| out.arcs[e].cap == inf).collect();
        out.set_infinite(&arcs);
    }
    Ok(StarTransform { net: out, kept, centers, original_arcs: net.arc_count() })
}

/// Routes a flow of the compressed network back onto the original arcs.
pub fn decompress_flow(net: &SkewSymmetricNetwork, st: &StarTransform, f: &IsFlow) -> Result<IsFlow> {
    if let Err(v) = crate::certify::verify_isflow(&st.net, f) {
        return Err(Error::Infeasible(v.join("; ")));
    }
    let layer = EdgeLayer::of(net)?;
    let mut values = vec![0i64; net.arc_count()];
    for (e, k) in st.kept.iter().enumerate() {
        if let Some(orig) = *k {
            values[orig] = f.values[e];
        }
    }
    // flow on star arcs, keyed by (center, outer node)
    let mut into: HashMap<(NodeId, NodeId), i64> = HashMap::new();
    let mut from: HashMap<(NodeId, NodeId), i64> = HashMap::new();
    for (e, a) in st.net.arcs.iter().enumerate() {
        if st.kept[e].is_none() {
            if a.head >= net.node_count {
                *into.entry((a.head, a.tail)).or_default() += f.values[e];
            } else {
                *from.entry((a.tail, a.head)).or_default() += f.values[e];
            }
        }
    }
    for (z, c) in &st.centers {
        let mut take: Vec<(NodeId, i64)> = c.b.iter().map(|&y| (y, from[&(*z, y)])).filter(|p| p.1 > 0).collect();
        // greedy assignment; each clique arc carries at most one unit
        for &x in &c.a {
            let mut s = into[&(*z, x)];
            for (y, d) in take.iter_mut() {
                if s == 0 {
                    break;
                }
                let e = layer.arc[&(x, *y)];
                if *d > 0 && values[e] == 0 {
                    values[e] = 1;
                    values[net.arc_mate[e]] = 1;
                    s -= 1;
                    *d -= 1;
                }
            }
            if s != 0 {
                return Err(Error::Infeasible(format!("star at {z} cannot route {s} unit(s) from node {x}")));
            }
        }
    }
    let out = IsFlow::from_values(net, values);
    if out.value != f.value {
        return Err(Error::Infeasible("decompressed value differs".into()));
    }
    if let Err(v) = crate::certify::verify_isflow(net, &out) {
        return Err(Error::Infeasible(v.join("; ")));
    }
    Ok(out)
}

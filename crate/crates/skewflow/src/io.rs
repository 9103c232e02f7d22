//! Text formats for networks, matching instances, MBP instances and flows.
//!
//! All formats are line based with 1-indexed nodes; `c` lines and blank
//! lines are ignored. The problem line `p <kind> ...` comes first.
//!
//! ```text
//! p ssf <nodes> <arcs>        a <tail> <head> <cap>   (lines 2i-1, 2i are mates)
//! p edge <n> <m>              e <u> <v>, b <v> <lo> <hi>, u <edge> <lo> <hi|inf>
//! p mbp <nodes> <arcs> <pairs> z <z> <z'>, t <sink>, a <tail> <head> [cap]
//! p flow <arcs> <value>       f <arc> <flow>, and optionally A/X lines of a barrier
//! ```

use std::fmt::Write as _;

use crate::blockphase::MbpInstance;
use crate::certify::OddBarrier;
use crate::error::{Error, Result};
use crate::reductions::MatchingInstance;
use crate::ssgraph::{mate, validate_network, IsFlow, NodeId, SkewSymmetricNetwork};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ssf(SkewSymmetricNetwork),
    Edge(MatchingInstance),
    Mbp(MbpInstance),
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Meaningful lines with their 1-based line numbers, split into fields.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

fn num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().or_else(|_| err(line, format!("bad {what} {s:?}")))
}

/// 1-indexed node field to a 0-indexed id below `n`.
fn node(line: usize, s: &str, n: usize) -> Result<NodeId> {
    let v: usize = num(line, s, "node")?;
    if v == 0 || v > n {
        return err(line, format!("node {v} outside 1..={n}"));
    }
    Ok(v - 1)
}

fn arity(line: usize, f: &[&str], want: &[usize]) -> Result<()> {
    if want.contains(&f.len()) {
        Ok(())
    } else {
        err(line, format!("'{}' line has {} fields", f[0], f.len()))
    }
}

type Record<'a> = (usize, Vec<&'a str>);

/// Reads the problem line and returns its kind with the remaining records.
fn problem(text: &str) -> Result<(usize, Vec<&str>, Vec<Record<'_>>)> {
    let mut it = records(text);
    let Some((line, p)) = it.next() else { return err(1, "missing problem line") };
    if p[0] != "p" || p.len() < 2 {
        return err(line, "first line must be 'p <kind> ...'");
    }
    Ok((line, p, it.collect()))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let (line, p, _) = problem(text)?;
    match p[1] {
        "ssf" => parse_ssf(text).map(Instance::Ssf),
        "edge" => parse_edge(text).map(Instance::Edge),
        "mbp" => parse_mbp(text).map(Instance::Mbp),
        other => err(line, format!("unknown problem kind {other:?}")),
    }
}

pub fn parse_ssf(text: &str) -> Result<SkewSymmetricNetwork> {
    let (line, p, rest) = problem(text)?;
    if p[1] != "ssf" {
        return err(line, "expected 'p ssf'");
    }
    arity(line, &p, &[4])?;
    let n: usize = num(line, p[2], "node count")?;
    let m: usize = num(line, p[3], "arc count")?;
    if n < 2 || n % 2 == 1 {
        return err(line, format!("node count {n} must be even and at least 2"));
    }
    if m % 2 == 1 {
        return err(line, format!("arc count {m} is odd; arcs come in mate pairs"));
    }
    let mut arcs = vec![];
    for (line, f) in rest {
        if f[0] != "a" {
            return err(line, format!("unexpected '{}' line in ssf file", f[0]));
        }
        arity(line, &f, &[4])?;
        let cap: i64 = num(line, f[3], "capacity")?;
        if cap < 0 {
            return err(line, "negative capacity");
        }
        arcs.push((line, node(line, f[1], n)?, node(line, f[2], n)?, cap));
    }
    if arcs.len() != m {
        return err(line, format!("declared {m} arcs, found {}", arcs.len()));
    }
    let mut net = SkewSymmetricNetwork::new(n);
    for pair in arcs.chunks(2) {
        let (l1, x, y, c) = pair[0];
        let (l2, x2, y2, c2) = pair[1];
        if (x2, y2) != (mate(y), mate(x)) {
            return err(l2, format!("arc is not the mate of the arc on line {l1}"));
        }
        if c2 != c {
            return err(l2, format!("capacity differs from its mate on line {l1}"));
        }
        net.add_pair(x, y, c);
    }
    if let Err(v) = validate_network(&net) {
        let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        return err(line, msg.join("; "));
    }
    Ok(net)
}

pub fn write_ssf(net: &SkewSymmetricNetwork) -> String {
    let mut s = format!("p ssf {} {}\n", net.node_count, net.arc_count());
    // mates must sit on consecutive lines
    for a in 0..net.arc_count() {
        let b = net.arc_mate[a];
        if a < b {
            for e in [a, b] {
                let arc = net.arcs[e];
                writeln!(s, "a {} {} {}", arc.tail + 1, arc.head + 1, arc.cap).unwrap();
            }
        }
    }
    s
}

pub fn parse_edge(text: &str) -> Result<MatchingInstance> {
    let (line, p, rest) = problem(text)?;
    if p[1] != "edge" {
        return err(line, "expected 'p edge'");
    }
    arity(line, &p, &[4])?;
    let n: usize = num(line, p[2], "vertex count")?;
    let m: usize = num(line, p[3], "edge count")?;
    let mut edges = vec![];
    let mut later = vec![];
    for (line, f) in rest {
        match f[0] {
            "e" => {
                arity(line, &f, &[3])?;
                let (u, v) = (node(line, f[1], n)?, node(line, f[2], n)?);
                if u == v {
                    return err(line, "loop edge");
                }
                edges.push((u, v));
            }
            "b" | "u" => later.push((line, f)),
            other => return err(line, format!("unexpected '{other}' line in edge file")),
        }
    }
    if edges.len() != m {
        return err(line, format!("declared {m} edges, found {}", edges.len()));
    }
    let mut inst = MatchingInstance::unit(n, edges);
    for (line, f) in later {
        arity(line, &f, &[4])?;
        let lo: i64 = num(line, f[2], "lower bound")?;
        if f[0] == "b" {
            let v = node(line, f[1], n)?;
            let hi: i64 = num(line, f[3], "upper bound")?;
            if lo < 0 || lo > hi {
                return err(line, format!("bounds [{lo},{hi}] are not 0 <= lo <= hi"));
            }
            inst.node_bounds[v] = (lo, hi);
        } else {
            let e = node(line, f[1], m)?;
            let hi = if f[3] == "inf" { None } else { Some(num::<i64>(line, f[3], "upper bound")?) };
            if lo < 0 || hi.is_some_and(|h| lo > h) {
                return err(line, "edge bounds are not 0 <= lo <= hi");
            }
            inst.edge_bounds[e] = (lo, hi);
        }
    }
    Ok(inst)
}

pub fn write_edge(inst: &MatchingInstance) -> String {
    let mut s = format!("p edge {} {}\n", inst.n, inst.edges.len());
    for &(u, v) in &inst.edges {
        writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
    }
    for (v, &(lo, hi)) in inst.node_bounds.iter().enumerate() {
        if (lo, hi) != (0, 1) {
            writeln!(s, "b {} {lo} {hi}", v + 1).unwrap();
        }
    }
    for (e, &(lo, hi)) in inst.edge_bounds.iter().enumerate() {
        match hi {
            Some(1) if lo == 0 => {}
            Some(h) => writeln!(s, "u {} {lo} {h}", e + 1).unwrap(),
            None => writeln!(s, "u {} {lo} inf", e + 1).unwrap(),
        }
    }
    s
}

pub fn parse_mbp(text: &str) -> Result<MbpInstance> {
    let (line, p, rest) = problem(text)?;
    if p[1] != "mbp" {
        return err(line, "expected 'p mbp'");
    }
    arity(line, &p, &[5])?;
    let n: usize = num(line, p[2], "node count")?;
    let m: usize = num(line, p[3], "arc count")?;
    let k: usize = num(line, p[4], "pair count")?;
    let mut sink = None;
    let mut inst = MbpInstance::new(n, 0);
    for (line, f) in rest {
        match f[0] {
            "z" => {
                arity(line, &f, &[3])?;
                inst.pairs.push((node(line, f[1], n)?, node(line, f[2], n)?));
            }
            "t" => {
                arity(line, &f, &[2])?;
                if sink.replace(node(line, f[1], n)?).is_some() {
                    return err(line, "second sink line");
                }
            }
            "a" => {
                arity(line, &f, &[3, 4])?;
                let cap = if f.len() == 4 { num(line, f[3], "capacity")? } else { 1 };
                inst.add_arc(node(line, f[1], n)?, node(line, f[2], n)?, cap);
            }
            other => return err(line, format!("unexpected '{other}' line in mbp file")),
        }
    }
    let Some(t) = sink else { return err(line, "missing 't <sink>' line") };
    inst.sink = t;
    if inst.arc_count() != m || inst.pairs.len() != k {
        return err(line, format!("declared {m} arcs and {k} pairs, found {} and {}", inst.arc_count(), inst.pairs.len()));
    }
    let mut paired = vec![false; n];
    for &(a, b) in &inst.pairs {
        paired[a] = true;
        paired[b] = true;
    }
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for e in 0..m {
        outdeg[inst.tail[e]] += 1;
        indeg[inst.head[e]] += 1;
    }
    if let Some(v) = (0..n).find(|&v| v != t && !paired[v] && outdeg[v] > 0 && indeg[v] == 0) {
        return err(line, format!("node {} has no entering arcs but is not a paired source", v + 1));
    }
    inst.validate().map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    Ok(inst)
}

pub fn write_mbp(inst: &MbpInstance) -> String {
    let mut s = format!("p mbp {} {} {}\nt {}\n", inst.node_count, inst.arc_count(), inst.pairs.len(), inst.sink + 1);
    for &(a, b) in &inst.pairs {
        writeln!(s, "z {} {}", a + 1, b + 1).unwrap();
    }
    for e in 0..inst.arc_count() {
        writeln!(s, "a {} {} {}", inst.tail[e] + 1, inst.head[e] + 1, inst.cap[e]).unwrap();
    }
    s
}

/// A flow file: arc values, the declared value and an optional barrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowFile {
    pub flow: IsFlow,
    pub barrier: Option<OddBarrier>,
}

pub fn write_flow(f: &IsFlow, barrier: Option<&OddBarrier>) -> String {
    let mut s = format!("p flow {} {}\n", f.values.len(), f.value);
    for (a, &v) in f.values.iter().enumerate() {
        if v != 0 {
            writeln!(s, "f {} {v}", a + 1).unwrap();
        }
    }
    if let Some(b) = barrier {
        let join = |vs: &[NodeId]| vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ");
        writeln!(s, "A {}", join(&b.a)).unwrap();
        for x in &b.x {
            writeln!(s, "X {}", join(x)).unwrap();
        }
    }
    s
}

/// Parses a flow file for a network with `nodes` nodes and `arcs` arcs.
/// The declared value is kept as written; check it with `verify_isflow`.
pub fn parse_flow(text: &str, nodes: usize, arcs: usize) -> Result<FlowFile> {
    let (line, p, rest) = problem(text)?;
    if p[1] != "flow" {
        return err(line, "expected 'p flow'");
    }
    arity(line, &p, &[4])?;
    let m: usize = num(line, p[2], "arc count")?;
    if m != arcs {
        return err(line, format!("flow is for {m} arcs, network has {arcs}"));
    }
    let value: i64 = num(line, p[3], "value")?;
    let mut values = vec![0i64; m];
    let mut a_set = None;
    let mut x = vec![];
    for (line, f) in rest {
        match f[0] {
            "f" => {
                arity(line, &f, &[3])?;
                let a = node(line, f[1], m)?;
                values[a] = num(line, f[2], "flow")?;
            }
            "A" | "X" => {
                let vs = f[1..].iter().map(|s| node(line, s, nodes)).collect::<Result<Vec<_>>>()?;
                if f[0] == "A" {
                    if a_set.replace(vs).is_some() {
                        return err(line, "second A line");
                    }
                } else {
                    x.push(vs);
                }
            }
            other => return err(line, format!("unexpected '{other}' line in flow file")),
        }
    }
    if a_set.is_none() && !x.is_empty() {
        return err(line, "X lines without an A line");
    }
    let barrier = a_set.map(|a| OddBarrier { a, x });
    Ok(FlowFile { flow: IsFlow { values, value }, barrier })
}

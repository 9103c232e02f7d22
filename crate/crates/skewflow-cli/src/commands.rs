use std::error::Error;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde_json::json;
use skewflow::blockphase::{solve_bbf, solve_mbp};
use skewflow::certify::{verify_isflow, verify_odd_barrier, verify_path_set};
use skewflow::compress::{beta, compress_to_stars, decompress_flow, delta_clique_dims, symmetric_clique_partition};
use skewflow::decompose::symmetric_decomposition;
use skewflow::gen;
use skewflow::io::{self, Instance};
use skewflow::reductions::{flow_to_matching, matching_to_network, solve_matching, MatchingInstance, MatchingOutcome};
use skewflow::regpath::{find_regular_path, shortest_unit_sra, verify_barrier, RegPath, SBarrier, SraOutcome};
use skewflow::solvers::{self_check, solve, Algorithm, SolveReport};
use skewflow::ssgraph::{validate_network, IsFlow, SkewSymmetricNetwork, SINK, SOURCE};

use crate::report::Report;
use crate::{Command, GenKind, RunConfig};

type CliResult<T> = Result<T, Box<dyn Error>>;

/// Runs one subcommand; `Ok(false)` means a self-check failed.
pub fn run(cfg: &RunConfig) -> CliResult<bool> {
    let start = Instant::now();
    let mut rep = match &cfg.command {
        Command::Solve { instance, algo, out } => cmd_solve(instance, (*algo).into(), out.as_deref())?,
        Command::Match { instance, algo, compress, delta } => cmd_match(instance, (*algo).into(), *compress, *delta)?,
        Command::Bmatch { instance, algo } => cmd_bmatch(instance, (*algo).into())?,
        Command::Rpath { instance, shortest } => cmd_rpath(instance, *shortest)?,
        Command::Mbp { instance, bbf } => cmd_mbp(instance, *bbf)?,
        Command::Decompose { instance, flow } => cmd_decompose(instance, flow)?,
        Command::Compress { instance, delta } => cmd_compress(instance, *delta)?,
        Command::Verify { instance, flow } => cmd_verify(instance, flow)?,
        Command::Gen { kind, n, m, cap, pairs, exponent, seed, out } => {
            cmd_gen(*kind, *n, *m, *cap, *pairs, *exponent, *seed, out.as_deref())?
        }
        Command::Bench { n, m, runs, seed } => cmd_bench(*n, *m, *runs, *seed)?,
    };
    rep.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &cfg.report {
        rep.append(path)?;
    }
    if !rep.checks_passed {
        eprintln!("self-check failed");
    }
    Ok(rep.checks_passed)
}

fn read(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(io::parse_instance(&text)?)
}

/// The network of an ssf file, or of an edge file without lower bounds.
fn read_network(path: &Path) -> CliResult<SkewSymmetricNetwork> {
    match read(path)? {
        Instance::Ssf(net) => Ok(net),
        Instance::Edge(inst) => {
            let (bn, _) = matching_to_network(&inst)?;
            if bn.lower.iter().any(|&l| l != 0) {
                return Err("edge file has lower bounds; use bmatch".into());
            }
            Ok(bn.net)
        }
        Instance::Mbp(_) => Err("expected an ssf or edge file, got mbp".into()),
    }
}

fn read_edge(path: &Path) -> CliResult<MatchingInstance> {
    match read(path)? {
        Instance::Edge(inst) => Ok(inst),
        _ => Err("expected an edge file".into()),
    }
}

fn read_flow(path: &Path, net: &SkewSymmetricNetwork) -> CliResult<io::FlowFile> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(io::parse_flow(&text, net.node_count, net.arc_count())?)
}

fn solve_checked(net: &SkewSymmetricNetwork, algo: Algorithm) -> CliResult<(SolveReport, Option<String>)> {
    let sr = solve(net, algo)?;
    let failure = self_check(net, &sr).err();
    Ok((sr, failure))
}

fn fill_solve(rep: &mut Report, net: &SkewSymmetricNetwork, sr: &SolveReport) {
    rep.algo = Some(sr.algorithm.name().into());
    rep.value = Some(sr.flow.value);
    rep.certificate_capacity = verify_odd_barrier(net, &sr.certificate).ok();
    rep.odd_sets = Some(sr.certificate.x.len());
    rep.iterations = Some(sr.iterations);
    rep.rdists = sr.rdists.clone();
}

fn print_log(sr: &SolveReport) {
    println!("value {}", sr.flow.value);
    println!("certificate capacity {} odd sets {}", sr.capacity, sr.certificate.x.len());
    let unit = if sr.algorithm == Algorithm::Sbfm { "phase" } else { "augmentation" };
    for (i, d) in sr.rdists.iter().enumerate() {
        println!("{unit} {} rdist {d}", i + 1);
    }
    if let Some(st) = sr.anstee {
        println!(
            "anstee stage1 {} cycles {} stage3 {} augmentations {}",
            st.stage1_value, st.cycles, st.stage3_value, st.augmentations
        );
    }
}

fn cmd_solve(path: &Path, algo: Algorithm, out: Option<&Path>) -> CliResult<Report> {
    let net = read_network(path)?;
    let (sr, failure) = solve_checked(&net, algo)?;
    print_log(&sr);
    let text = io::write_flow(&sr.flow, Some(&sr.certificate));
    match out {
        Some(o) => std::fs::write(o, text)?,
        None => print!("{text}"),
    }
    let mut rep = Report::new("solve", path);
    fill_solve(&mut rep, &net, &sr);
    if let Some(e) = failure {
        eprintln!("{e}");
        rep.checks_passed = false;
    }
    Ok(rep)
}

fn cmd_match(path: &Path, algo: Algorithm, compress: bool, delta: f64) -> CliResult<Report> {
    let mut inst = read_edge(path)?;
    inst = MatchingInstance::unit(inst.n, inst.edges);
    let (bn, bm) = matching_to_network(&inst)?;
    let net = bn.net;
    let mut rep = Report::new("match", path);
    let mut failures = vec![];
    let flow = if compress {
        let partition = symmetric_clique_partition(&net, delta)?;
        let st = compress_to_stars(&net, &partition)?;
        let (sr, failure) = solve_checked(&st.net, algo)?;
        failures.extend(failure);
        let f = decompress_flow(&net, &st, &sr.flow)?;
        if f.value != sr.flow.value {
            failures.push(format!("decompressed value {} differs from {}", f.value, sr.flow.value));
        }
        println!("arcs {} compressed {} cliques {}", net.arc_count(), st.net.arc_count(), st.centers.len());
        fill_solve(&mut rep, &st.net, &sr);
        rep.extra = Some(json!({"arcs": net.arc_count(), "compressed_arcs": st.net.arc_count(), "stars": st.centers.len()}));
        f
    } else {
        let (sr, failure) = solve_checked(&net, algo)?;
        failures.extend(failure);
        fill_solve(&mut rep, &net, &sr);
        sr.flow
    };
    if let Err(v) = verify_isflow(&net, &flow) {
        failures.extend(v);
    }
    let x = flow_to_matching(&net, &flow, &bm)?;
    let size: i64 = x.iter().sum();
    if 2 * size != flow.value {
        failures.push(format!("matching size {size} does not match flow value {}", flow.value));
    }
    failures.extend(matching_violations(&inst, &x));
    println!("matching {size}");
    for (i, &(v, w)) in inst.edges.iter().enumerate() {
        if x[i] > 0 {
            println!("e {} {}", v + 1, w + 1);
        }
    }
    rep.value = Some(size);
    finish(rep, failures)
}

/// Degree and multiplicity violations of an edge vector.
fn matching_violations(inst: &MatchingInstance, x: &[i64]) -> Vec<String> {
    let mut out = vec![];
    let mut deg = vec![0i64; inst.n];
    for (i, &(v, w)) in inst.edges.iter().enumerate() {
        let (lo, hi) = inst.edge_bounds[i];
        if x[i] < lo || hi.is_some_and(|h| x[i] > h) {
            out.push(format!("edge {}: multiplicity {} outside bounds", i + 1, x[i]));
        }
        deg[v] += x[i];
        deg[w] += x[i];
    }
    for (v, (&d, &(lo, hi))) in deg.iter().zip(&inst.node_bounds).enumerate() {
        if d < lo || d > hi {
            out.push(format!("vertex {}: degree {d} outside [{lo},{hi}]", v + 1));
        }
    }
    out
}

fn finish(mut rep: Report, failures: Vec<String>) -> CliResult<Report> {
    for f in &failures {
        eprintln!("{f}");
    }
    rep.checks_passed = failures.is_empty();
    Ok(rep)
}

fn cmd_bmatch(path: &Path, algo: Algorithm) -> CliResult<Report> {
    let inst = read_edge(path)?;
    let failures = std::cell::RefCell::new(vec![]);
    let outcome = solve_matching(&inst, |net| match solve_checked(net, algo) {
        Ok((sr, failure)) => {
            failures.borrow_mut().extend(failure);
            sr.flow
        }
        Err(e) => {
            failures.borrow_mut().push(e.to_string());
            IsFlow::zero(net.arc_count())
        }
    })?;
    let mut failures = failures.into_inner();
    let mut rep = Report::new("bmatch", path);
    rep.algo = Some(algo.name().into());
    match outcome {
        MatchingOutcome::Infeasible => {
            println!("infeasible");
            rep.extra = Some(json!({"feasible": false}));
        }
        MatchingOutcome::Feasible { matching, value, .. } => {
            failures.extend(matching_violations(&inst, &matching));
            println!("value {value}");
            for (i, &(v, w)) in inst.edges.iter().enumerate() {
                if matching[i] > 0 {
                    println!("e {} {} {}", v + 1, w + 1, matching[i]);
                }
            }
            rep.value = Some(value);
            rep.extra = Some(json!({"feasible": true}));
        }
    }
    finish(rep, failures)
}

fn print_barrier(b: &SBarrier) {
    let join = |vs: &[usize]| vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ");
    println!("A {}", join(&b.a));
    for x in &b.x {
        println!("X {}", join(x));
    }
}

/// Regular path in the graph of the network; capacities are ignored.
fn cmd_rpath(path: &Path, shortest: bool) -> CliResult<Report> {
    let net = read_network(path)?;
    let g = net.graph();
    let found = if shortest {
        match shortest_unit_sra(&g) {
            SraOutcome::Path { path, .. } => RegPath::Path(path),
            SraOutcome::Barrier(b) => RegPath::Barrier(b),
        }
    } else {
        find_regular_path(&g)
    };
    let mut rep = Report::new("rpath", path);
    let mut failures = vec![];
    match found {
        RegPath::Path(p) => {
            let ends = g.walk_nodes(SOURCE, &p).and_then(|v| v.last().copied());
            if ends != Some(SINK) || !g.is_regular(&p) {
                failures.push("path is not a regular s-s' path".into());
            }
            println!("path {}", p.len());
            let arcs: Vec<String> = p.iter().map(|a| (a + 1).to_string()).collect();
            println!("arcs {}", arcs.join(" "));
            rep.value = Some(p.len() as i64);
        }
        RegPath::Barrier(b) => {
            if let Err(e) = verify_barrier(&g, &b) {
                failures.push(e);
            }
            println!("barrier");
            print_barrier(&b);
            rep.odd_sets = Some(b.x.len());
        }
    }
    finish(rep, failures)
}

fn cmd_mbp(path: &Path, bbf: bool) -> CliResult<Report> {
    let inst = match read(path)? {
        Instance::Mbp(i) => i,
        _ => return Err("expected an mbp file".into()),
    };
    let set = if bbf { solve_bbf(&inst)? } else { solve_mbp(&inst)? };
    let mut failures = vec![];
    let total = match verify_path_set(&inst, &set, !bbf) {
        Ok(t) => t,
        Err(e) => {
            failures.push(e);
            0
        }
    };
    println!("pairs {} flow {total}", set.pairs.len());
    let join = |p: &[usize]| p.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(" ");
    for p in &set.pairs {
        println!("q {} : {}", p.alpha, join(&p.q));
        println!("r {} : {}", p.alpha, join(&p.r));
    }
    let mut rep = Report::new("mbp", path);
    rep.algo = Some(if bbf { "bbf" } else { "mbp" }.into());
    rep.value = Some(total);
    rep.extra = Some(json!({"pairs": set.pairs.len(), "breakthroughs": set.stats.breakthroughs, "shrinks": set.stats.shrinks}));
    finish(rep, failures)
}

fn cmd_decompose(path: &Path, flow: &Path) -> CliResult<Report> {
    let net = read_network(path)?;
    let ff = read_flow(flow, &net)?;
    let d = symmetric_decomposition(&net, &ff.flow)?;
    let mut failures = vec![];
    if d.recompose(net.arc_count()) != ff.flow.values {
        failures.push("members do not recompose the flow".into());
    }
    if d.members.len() > net.arc_count() {
        failures.push(format!("{} members for {} arcs", d.members.len(), net.arc_count()));
    }
    println!("members {}", d.members.len());
    for e in &d.members {
        let kind = if e.is_cycle(&net) { "cycle" } else { "path" };
        let mut line = format!("{kind} {} :", e.delta);
        for v in e.nodes(&net) {
            write!(line, " {}", v + 1)?;
        }
        println!("{line}");
    }
    let mut rep = Report::new("decompose", path);
    rep.value = Some(ff.flow.value);
    rep.extra = Some(json!({"members": d.members.len()}));
    finish(rep, failures)
}

fn cmd_compress(path: &Path, delta: f64) -> CliResult<Report> {
    let inst = read_edge(path)?;
    let inst = MatchingInstance::unit(inst.n, inst.edges);
    let net = matching_to_network(&inst)?.0.net;
    let partition = symmetric_clique_partition(&net, delta)?;
    let mut failures = vec![];
    if let Err(e) = partition.validate(&net) {
        failures.push(e.to_string());
    }
    let st = compress_to_stars(&net, &partition)?;
    if let Err(v) = validate_network(&st.net) {
        failures.push(format!("compressed network invalid: {v:?}"));
    }
    let (n, m) = (inst.n, inst.edges.len());
    let dims = delta_clique_dims(n, 2 * m, delta);
    println!("vertices {n} edges {m} beta {:.3}", beta(n, 2 * m));
    println!("clique target {} x {}", dims.0, dims.1);
    println!("cliques {} stars {}", partition.size(), st.centers.len());
    println!("arcs {} compressed {}", net.arc_count(), st.net.arc_count());
    let mut rep = Report::new("compress", path);
    rep.extra = Some(json!({
        "arcs": net.arc_count(),
        "compressed_arcs": st.net.arc_count(),
        "cliques": partition.size(),
        "stars": st.centers.len(),
    }));
    finish(rep, failures)
}

fn cmd_verify(path: &Path, flow: &Path) -> CliResult<Report> {
    let net = read_network(path)?;
    let ff = read_flow(flow, &net)?;
    let mut failures = verify_isflow(&net, &ff.flow).err().unwrap_or_default();
    if let Some(b) = &ff.barrier {
        match verify_odd_barrier(&net, b) {
            Ok(cap) if cap == ff.flow.value => println!("barrier capacity {cap}"),
            Ok(cap) => failures.push(format!("barrier capacity {cap} differs from value {}", ff.flow.value)),
            Err(e) => failures.push(e),
        }
    }
    println!("{}", if failures.is_empty() { "ok" } else { "fail" });
    let mut rep = Report::new("verify", path);
    rep.value = Some(ff.flow.value);
    finish(rep, failures)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(kind: GenKind, n: usize, m: usize, cap: i64, pairs: usize, exponent: f64, seed: u64, out: Option<&Path>) -> CliResult<Report> {
    if cap < 1 {
        return Err("cap must be positive".into());
    }
    let mut rng = gen::rng_for(seed, 0);
    let text = match kind {
        GenKind::RandomGraph => io::write_edge(&MatchingInstance::unit(n, gen::random_graph(&mut rng, n, m)?)),
        GenKind::Dense => io::write_edge(&MatchingInstance::unit(n, gen::dense_graph(&mut rng, n, exponent)?)),
        GenKind::RandomSsf => io::write_ssf(&gen::random_ssf(&mut rng, n.max(1), m, cap)),
        GenKind::RandomMbp => io::write_mbp(&gen::random_mbp(&mut rng, n, pairs, m, cap)),
    };
    match out {
        Some(o) => std::fs::write(o, &text)?,
        None => print!("{text}"),
    }
    let mut rep = Report::new("gen", out.unwrap_or(Path::new("-")));
    rep.extra = Some(json!({"kind": format!("{kind:?}"), "n": n, "m": m, "seed": seed}));
    Ok(rep)
}

fn cmd_bench(n: usize, m: usize, runs: u64, seed: u64) -> CliResult<Report> {
    let bound = 2.0 * (n as f64).sqrt() + 5.0;
    let mut failures = vec![];
    let mut results = vec![];
    for r in 0..runs {
        let inst = gen::random_matching(&mut gen::rng_for(seed, r), n, m)?;
        let net = matching_to_network(&inst)?.0.net;
        let t = Instant::now();
        let (sr, failure) = solve_checked(&net, Algorithm::Sbfm)?;
        let ms = t.elapsed().as_secs_f64() * 1e3;
        failures.extend(failure);
        println!("run {r} value {} phases {} bound {bound:.1} ms {ms:.1}", sr.flow.value, sr.iterations);
        results.push(json!({"value": sr.flow.value, "phases": sr.iterations}));
    }
    let mut rep = Report::new("bench", Path::new("-"));
    rep.algo = Some(Algorithm::Sbfm.name().into());
    rep.extra = Some(json!({"n": n, "m": m, "seed": seed, "phase_bound": bound, "runs": results}));
    finish(rep, failures)
}

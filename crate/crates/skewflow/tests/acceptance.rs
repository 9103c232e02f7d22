//! One PASS/FAIL line per acceptance criterion. Exact criteria fail the
//! run; soft (timing) criteria only report.
//!
//! Runs without the test harness so the lines always print:
//! `cargo test -p skewflow --test acceptance`.

use std::time::Instant;

use skewflow::blockphase::{solve_bbf, solve_mbp};
use skewflow::certify::{oracle_max_isflow, oracle_max_matching, verify_path_set, OracleBudget};
use skewflow::compress::{compress_to_stars, decompress_flow, symmetric_clique_partition};
use skewflow::decompose::symmetric_decomposition;
use skewflow::gen::{dense_graph, random_graph, random_matching, random_mbp, random_ssf, rng_for};
use skewflow::reductions::{flow_to_matching, matching_to_network, solve_matching, MatchingInstance, MatchingOutcome};
use skewflow::solvers::{self_check, solve, Algorithm, SolveReport};
use skewflow::SkewSymmetricNetwork;

use rand::Rng;

#[derive(Default)]
struct Tally {
    runs: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Board {
    exact_failed: Vec<&'static str>,
}

impl Board {
    fn line(&mut self, name: &'static str, soft: bool, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        let kind = if soft { " (soft)" } else { "" };
        println!("{tag}{kind} {name}: {detail}");
        if !ok && !soft {
            self.exact_failed.push(name);
        }
    }

    fn tally(&mut self, name: &'static str, t: &Tally, what: &str) {
        let mut detail = format!("{} {what}", t.runs);
        if !t.ok() {
            let shown: Vec<&str> = t.failures.iter().filter(|s| !s.is_empty()).map(String::as_str).collect();
            detail = format!("{detail}, {} failed: {}", t.failures.len(), shown.join(" | "));
        }
        self.line(name, false, t.ok(), detail);
    }
}

/// Solver-level checks shared by the oracle, duality, decomposition and
/// phase criteria.
#[derive(Default)]
struct SolverChecks {
    oracle: Tally,
    duality: Tally,
    decomposition: Tally,
    phases: Tally,
}

impl SolverChecks {
    fn record(&mut self, net: &SkewSymmetricNetwork, label: &str, want: Option<i64>) {
        for algo in Algorithm::ALL {
            let sr = match solve(net, algo) {
                Ok(sr) => sr,
                Err(e) => {
                    self.oracle.check(false, || format!("{label} {algo}: {e}"));
                    continue;
                }
            };
            if let Some(w) = want {
                self.oracle.check(sr.flow.value == w, || format!("{label} {algo}: {} != {w}", sr.flow.value));
            }
            let dual = self_check(net, &sr);
            self.duality.check(dual.is_ok(), || format!("{label} {algo}: {}", dual.clone().unwrap_err()));
            self.check_decomposition(net, &sr, label);
            if algo == Algorithm::Sbfm {
                self.check_phases(net, &sr, label);
            }
        }
    }

    fn check_decomposition(&mut self, net: &SkewSymmetricNetwork, sr: &SolveReport, label: &str) {
        let m = net.arc_count();
        let ok = match symmetric_decomposition(net, &sr.flow) {
            Ok(d) => d.recompose(m) == sr.flow.values && d.members.len() <= m,
            Err(_) => false,
        };
        self.decomposition.check(ok, || format!("{label} {}", sr.algorithm));
    }

    fn check_phases(&mut self, net: &SkewSymmetricNetwork, sr: &SolveReport, label: &str) {
        let p = sr.iterations as i64;
        let increasing = sr.rdists.windows(2).all(|w| w[0] < w[1]);
        let within_n = p <= (net.node_count as i64 - 1).max(0);
        let within_delta = p * p <= 4 * net.transit_capacity();
        self.phases.check(increasing && within_n && within_delta && sr.rdists.len() == sr.iterations, || {
            format!("{label}: {} phases, rdists {:?}, n {}, transit {}", p, sr.rdists, net.node_count, net.transit_capacity())
        });
    }
}

fn solver_criteria(board: &mut Board) {
    let budget = OracleBudget::default();
    let mut sc = SolverChecks::default();
    let mut graphs = 0;
    let mut rng = rng_for(2024, 0);
    for i in 0..1000 {
        let n = rng.gen_range(1..=12);
        let max_m = n * (n - 1) / 2;
        let m = rng.gen_range(0..=max_m);
        let edges = random_graph(&mut rng, n, m).unwrap();
        let want = oracle_max_matching(n, &edges, &budget).unwrap() as i64;
        let net = matching_to_network(&MatchingInstance::unit(n, edges)).unwrap().0.net;
        sc.record(&net, &format!("graph {i}"), Some(2 * want));
        graphs += 1;
    }
    let mut nets = 0;
    let mut rng = rng_for(2024, 1);
    while nets < 500 {
        let pairs = rng.gen_range(2..=budget.max_node_pairs);
        let arc_pairs = rng.gen_range(1..=budget.max_arcs / 2);
        let net = random_ssf(&mut rng, pairs, arc_pairs, budget.max_capacity);
        let Ok(want) = oracle_max_isflow(&net, &budget) else { continue };
        sc.record(&net, &format!("ssf {nets}"), Some(want));
        nets += 1;
    }
    let solves = format!("solves over {graphs} graphs and {nets} ssf networks");
    board.tally("oracle equivalence", &sc.oracle, &solves);
    board.tally("certificate strong duality", &sc.duality, &solves);
    board.tally("decomposition", &sc.decomposition, "decompositions");
    board.tally("phase discipline", &sc.phases, "SBFM runs");
}

fn mbp_criterion(board: &mut Board) {
    let mut t = Tally::default();
    let mut rng = rng_for(2024, 2);
    let (mut pairs_found, mut shrinks) = (0, 0);
    for i in 0..1000 {
        let pairs = rng.gen_range(1..=3);
        let inner = rng.gen_range(0..=11 - 2 * pairs);
        let arcs = rng.gen_range(1..=30);
        let cap = if i % 2 == 0 { 1 } else { 3 };
        let inst = random_mbp(&mut rng, inner, pairs, arcs, cap);
        assert!(inst.node_count <= 12);
        let unit = solve_mbp(&inst).map_err(|e| e.to_string()).and_then(|s| {
            shrinks += s.stats.shrinks;
            pairs_found += s.pairs.len();
            verify_path_set(&inst, &s, true)
        });
        t.check(unit.is_ok(), || format!("mbp {i}: {}", unit.clone().unwrap_err()));
        let bbf = solve_bbf(&inst).map_err(|e| e.to_string()).and_then(|s| verify_path_set(&inst, &s, false));
        t.check(bbf.is_ok(), || format!("bbf {i}: {}", bbf.clone().unwrap_err()));
    }
    board.tally("MBP correctness", &t, &format!("path sets ({pairs_found} unit pairs, {shrinks} shrinks)"));
}

fn bull_criterion(board: &mut Board) {
    let inst = MatchingInstance::unit(5, vec![(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)]);
    let (bn, bm) = matching_to_network(&inst).unwrap();
    let mut ok = true;
    let mut values = vec![];
    for algo in Algorithm::ALL {
        let sr = solve(&bn.net, algo).unwrap();
        ok &= self_check(&bn.net, &sr).is_ok() && sr.flow.value == 4;
        let x = flow_to_matching(&bn.net, &sr.flow, &bm).unwrap();
        let mut deg = [0; 5];
        for (i, &(v, w)) in inst.edges.iter().enumerate() {
            deg[v] += x[i];
            deg[w] += x[i];
        }
        ok &= x.iter().all(|&e| e == 0 || e == 1) && deg.iter().all(|&d| d <= 1) && x.iter().sum::<i64>() == 2;
        values.push(sr.flow.value);
    }
    let via = solve_matching(&inst, |net| solve(net, Algorithm::Sbfm).unwrap().flow).unwrap();
    let size = match via {
        MatchingOutcome::Feasible { value, .. } => value,
        MatchingOutcome::Infeasible => -1,
    };
    ok &= size == 2;
    board.line("bull graph instance", false, ok, format!("matching {size}, IS-flow values {values:?}"));
}

fn scaling_criterion(board: &mut Board) {
    let (n, m) = (10_000, 100_000);
    let inst = random_matching(&mut rng_for(2024, 3), n, m).unwrap();
    let net = matching_to_network(&inst).unwrap().0.net;
    let t = Instant::now();
    let sr = solve(&net, Algorithm::Sbfm).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let checked = self_check(&net, &sr).is_ok();
    let bound = 2.0 * (n as f64).sqrt() + 5.0;
    let ok = checked && secs < 10.0 && (sr.iterations as f64) <= bound;
    board.line(
        "scaling SBFM",
        true,
        ok,
        format!("n={n} m={m}: {:.2}s, {} phases (bound {bound:.0}), value {}", secs, sr.iterations, sr.flow.value),
    );

    let mut times = vec![];
    for (k, arcs) in [10_000usize, 100_000, 1_000_000].into_iter().enumerate() {
        let inst = random_mbp(&mut rng_for(2024, 4 + k as u64), arcs / 10, arcs / 50, arcs, 1);
        let best = (0..3)
            .map(|_| {
                let t = Instant::now();
                let s = solve_mbp(&inst).unwrap();
                std::hint::black_box(s);
                t.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min);
        times.push((inst.arc_count(), best));
    }
    let per_doubling: Vec<f64> =
        times.windows(2).map(|w| (w[1].1 / w[0].1).powf(1.0 / (w[1].0 as f64 / w[0].0 as f64).log2())).collect();
    let ok = per_doubling.iter().all(|&r| r <= 3.0);
    let shown: Vec<String> = times.iter().map(|(m, s)| format!("m={m} {:.1}ms", s * 1e3)).collect();
    let ratios: Vec<String> = per_doubling.iter().map(|r| format!("{r:.2}")).collect();
    board.line("scaling MBP", true, ok, format!("{}; growth per doubling {}", shown.join(", "), ratios.join(", ")));
}

fn compression_criterion(board: &mut Board) {
    let mut t = Tally::default();
    let mut smaller = 0;
    let mut dense = 0;
    let mut rng = rng_for(2024, 8);
    for i in 0..40 {
        let n = rng.gen_range(20..=120);
        let exponent = if i % 4 == 0 { 1.4 } else { 1.8 + 0.1 * rng.gen_range(0..3) as f64 };
        let edges = dense_graph(&mut rng, n, exponent).unwrap();
        let m = edges.len();
        let net = matching_to_network(&MatchingInstance::unit(n, edges)).unwrap().0.net;
        let res = (|| -> Result<(i64, i64, usize), String> {
            let p = symmetric_clique_partition(&net, 0.25).map_err(|e| e.to_string())?;
            let st = compress_to_stars(&net, &p).map_err(|e| e.to_string())?;
            let packed = solve(&st.net, Algorithm::Sbfm).map_err(|e| e.to_string())?;
            self_check(&st.net, &packed)?;
            let back = decompress_flow(&net, &st, &packed.flow).map_err(|e| e.to_string())?;
            let direct = solve(&net, Algorithm::Sbfm).map_err(|e| e.to_string())?;
            Ok((back.value, direct.flow.value, st.net.arc_count()))
        })();
        let ok = matches!(res, Ok((a, b, _)) if a == b);
        t.check(ok, || format!("instance {i}: {res:?}"));
        if (m as f64) >= (n as f64).powf(1.8) - 1.0 {
            dense += 1;
            if matches!(res, Ok((_, _, arcs)) if arcs < net.arc_count()) {
                smaller += 1;
            }
        }
    }
    board.tally("compression matching size", &t, "instances");
    board.line("compression arc count", true, smaller == dense, format!("{smaller}/{dense} instances with m >= n^1.8 shrink"));
}

fn main() {
    let mut board = Board { exact_failed: vec![] };
    solver_criteria(&mut board);
    mbp_criterion(&mut board);
    bull_criterion(&mut board);
    scaling_criterion(&mut board);
    compression_criterion(&mut board);
    if !board.exact_failed.is_empty() {
        eprintln!("exact criteria failed: {:?}", board.exact_failed);
        std::process::exit(1);
    }
}

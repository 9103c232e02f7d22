//! Maximum IS-flow solvers.
//!
//! Every solver returns a maximum IS-flow together with an odd barrier of
//! equal capacity, which certifies optimality.

mod anstee;
mod augmenting;
mod maxflow;
mod sbfm;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use anstee::{max_isflow_anstee, AnsteeStages};
pub use augmenting::{max_isflow_augmenting, max_isflow_sapm};
pub use maxflow::dinic;
pub use sbfm::max_isflow_sbfm;

use crate::certify::{verify_odd_barrier, OddBarrier};
use crate::error::{Error, Result};
use crate::regpath::{verify_barrier, SBarrier};
use crate::ssgraph::{build_split_graph, residual, superpose, ArcId, IsFlow, ResidualNetwork, SkewSymmetricNetwork, SplitGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Augmenting,
    Sapm,
    Anstee,
    Sbfm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Augmenting, Algorithm::Sapm, Algorithm::Anstee, Algorithm::Sbfm];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Augmenting => "aug",
            Algorithm::Sapm => "sapm",
            Algorithm::Anstee => "anstee",
            Algorithm::Sbfm => "sbfm",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown algorithm {s:?}; expected aug, sapm, anstee or sbfm")))
    }
}

/// A maximum IS-flow and its optimality certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub flow: IsFlow,
    pub certificate: OddBarrier,
    /// Capacity of `certificate`; equals `flow.value`.
    pub capacity: i64,
    /// Augmentations, or phases for SBFM.
    pub iterations: usize,
    /// r-distance of each augmentation or phase, when the solver computes it.
    pub rdists: Vec<usize>,
    pub anstee: Option<AnsteeStages>,
}

pub fn solve(net: &SkewSymmetricNetwork, algorithm: Algorithm) -> Result<SolveReport> {
    match algorithm {
        Algorithm::Augmenting => max_isflow_augmenting(net),
        Algorithm::Sapm => max_isflow_sapm(net),
        Algorithm::Anstee => max_isflow_anstee(net),
        Algorithm::Sbfm => max_isflow_sbfm(net),
    }
}

fn check_input(net: &SkewSymmetricNetwork) -> Result<()> {
    crate::ssgraph::validate_network(net).map_err(|v| Error::InvalidInput(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
}

/// `S(G⁺, u_f)` and the residual it was built from.
fn split_residual(net: &SkewSymmetricNetwork, f: &IsFlow) -> Result<(ResidualNetwork, SplitGraph)> {
    let res = residual(net, f)?;
    let split = build_split_graph(&res.graph, &res.cap)?;
    Ok((res, split))
}

/// Pushes `δ(χ^P + χ^{P'})` along a regular path of the split residual,
/// with `δ` the largest value the residual capacities allow.
fn augment(net: &SkewSymmetricNetwork, f: &IsFlow, res: &ResidualNetwork, split: &SplitGraph, path: &[ArcId]) -> Result<IsFlow> {
    let mut count: HashMap<ArcId, i64> = HashMap::new();
    for &e in path {
        let a = split.omega[e];
        *count.entry(a).or_default() += 1;
        *count.entry(res.graph.mate[a]).or_default() += 1;
    }
    let delta = count.iter().map(|(&a, &c)| res.cap[a] / c).min().unwrap_or(0);
    assert!(delta > 0, "augmenting path has no residual capacity");
    let mut g = vec![0; 2 * res.m];
    for (&a, &c) in &count {
        g[a] = delta * c;
    }
    superpose(net, f, &g)
}

/// Independent re-check of a report: feasible flow, valid barrier, equal values.
pub fn self_check(net: &SkewSymmetricNetwork, rep: &SolveReport) -> std::result::Result<(), String> {
    crate::certify::verify_isflow(net, &rep.flow).map_err(|v| v.join("; "))?;
    let cap = verify_odd_barrier(net, &rep.certificate)?;
    if cap != rep.flow.value || cap != rep.capacity {
        return Err(format!("value {} but barrier capacity {cap} (reported {})", rep.flow.value, rep.capacity));
    }
    Ok(())
}

/// Reads an odd barrier off the s-barrier of the final split residual:
/// same `A` and `X_i`. Fails if the s-barrier is invalid or the odd barrier
/// does not verify with capacity `|f|`.
pub fn restore_odd_barrier(net: &SkewSymmetricNetwork, f: &IsFlow, b: &SBarrier) -> Result<OddBarrier> {
    let (_, split) = split_residual(net, f)?;
    verify_barrier(&split.graph, b).map_err(|e| Error::Certificate(format!("residual s-barrier: {e}")))?;
    let ob = OddBarrier { a: b.a.clone(), x: b.x.clone() };
    let cap = verify_odd_barrier(net, &ob).map_err(Error::Certificate)?;
    if cap != f.value {
        return Err(Error::Certificate(format!("barrier capacity {cap} differs from flow value {}", f.value)));
    }
    Ok(ob)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{oracle_max_isflow, oracle_max_matching, verify_isflow, OracleBudget};
    use crate::decompose::symmetric_decomposition;
    use crate::gen::{random_graph, random_ssf, rng_for};
    use crate::reductions::{matching_to_network, solve_matching, MatchingInstance, MatchingOutcome};
    use crate::regpath::RegPath;
    use crate::ssgraph::{SINK, SOURCE};

    fn k3() -> SkewSymmetricNetwork {
        matching_to_network(&MatchingInstance::unit(3, vec![(0, 1), (1, 2), (0, 2)])).unwrap().0.net
    }

    fn bull() -> SkewSymmetricNetwork {
        let inst = MatchingInstance::unit(5, vec![(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)]);
        matching_to_network(&inst).unwrap().0.net
    }

    fn check(net: &SkewSymmetricNetwork, r: &SolveReport) {
        assert!(verify_isflow(net, &r.flow).is_ok(), "{:?}", verify_isflow(net, &r.flow));
        assert_eq!(verify_odd_barrier(net, &r.certificate), Ok(r.flow.value));
        assert_eq!(r.capacity, r.flow.value);
        let d = symmetric_decomposition(net, &r.flow).unwrap();
        assert_eq!(d.recompose(net.arc_count()), r.flow.values);
        assert!(d.members.len() <= net.arc_count().max(1));
    }

    #[test]
    fn test_zero_network() {
        let mut net = SkewSymmetricNetwork::new(4);
        net.add_pair(SOURCE, 2, 0);
        for algo in Algorithm::ALL {
            let r = solve(&net, algo).unwrap();
            assert_eq!(r.flow.value, 0);
            assert_eq!(r.certificate.x.len(), 0);
            assert_eq!(r.certificate.a, vec![SOURCE]);
        }
    }

    #[test]
    fn test_k3() {
        let net = k3();
        for algo in Algorithm::ALL {
            let r = solve(&net, algo).unwrap();
            check(&net, &r);
            assert_eq!(r.flow.value, 2, "{algo}");
            assert_eq!(r.certificate.capacity(&net), 2);
        }
        let r = max_isflow_anstee(&net).unwrap();
        let st = r.anstee.unwrap();
        assert_eq!(st.stage1_value, 3);
        assert_eq!(st.cycles, 1);
        assert!(st.stage3_value >= 2);
        let r = max_isflow_sbfm(&net).unwrap();
        assert!(r.iterations <= 2);
        assert!(r.rdists.windows(2).all(|w| w[0] < w[1]));
        let r = max_isflow_sapm(&net).unwrap();
        assert!(r.rdists.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn test_bull_value() {
        let net = bull();
        for algo in Algorithm::ALL {
            let r = solve(&net, algo).unwrap();
            check(&net, &r);
            assert_eq!(r.flow.value, 4, "{algo}");
        }
    }

    #[test]
    fn test_single_route() {
        let mut net = SkewSymmetricNetwork::new(6);
        net.add_pair(SOURCE, 2, 1);
        net.add_pair(2, 5, 1);
        net.add_pair(5, SINK, 1);
        let r = max_isflow_sapm(&net).unwrap();
        assert_eq!((r.flow.value, r.iterations), (2, 1));
        let r = max_isflow_sbfm(&net).unwrap();
        assert_eq!((r.flow.value, r.iterations), (2, 1));
    }

    #[test]
    fn test_direct_arc_presaturated() {
        let mut net = SkewSymmetricNetwork::new(2);
        net.add_pair(SOURCE, SINK, 3);
        for algo in Algorithm::ALL {
            let r = solve(&net, algo).unwrap();
            check(&net, &r);
            assert_eq!(r.flow.value, 6);
        }
        assert_eq!(max_isflow_sbfm(&net).unwrap().iterations, 0);
    }

    #[test]
    fn test_bipartite_anstee_needs_no_augmentation() {
        // a perfect matching of a path on four vertices
        let inst = MatchingInstance::unit(4, vec![(0, 1), (1, 2), (2, 3)]);
        let net = matching_to_network(&inst).unwrap().0.net;
        let r = max_isflow_anstee(&net).unwrap();
        assert_eq!(r.flow.value, 4);
        assert_eq!(r.anstee.unwrap().cycles, 0);
    }

    #[test]
    fn test_solvers_match_oracle() {
        let budget = OracleBudget::default();
        for k in 0..300u64 {
            let mut rng = rng_for(11, k);
            let pairs = 2 + (k as usize % 5);
            let net = random_ssf(&mut rng, pairs, 2 + (k as usize % 9), 3);
            let want = oracle_max_isflow(&net, &budget).unwrap();
            for algo in Algorithm::ALL {
                let r = solve(&net, algo).unwrap_or_else(|e| panic!("case {k} {algo}: {e}"));
                check(&net, &r);
                assert_eq!(r.flow.value, want, "case {k} {algo}");
            }
        }
    }

    #[test]
    fn test_weak_duality() {
        for k in 0..100u64 {
            let mut rng = rng_for(12, k);
            let net = random_ssf(&mut rng, 5, 10, 3);
            let opt = max_isflow_augmenting(&net).unwrap();
            // every prefix of a decomposition is a feasible, smaller flow
            let d = symmetric_decomposition(&net, &opt.flow).unwrap();
            let mut partial = crate::decompose::SymmetricDecomposition::default();
            for m in d.members {
                partial.members.push(m);
                let f = IsFlow::from_values(&net, partial.recompose(net.arc_count()));
                assert!(verify_isflow(&net, &f).is_ok());
                assert!(f.value <= opt.certificate.capacity(&net));
            }
        }
    }

    #[test]
    fn test_totally_blocking_leaves_no_residual_path() {
        let mut done = 0;
        for k in 0..400u64 {
            let mut rng = rng_for(13, k);
            let g = crate::gen::random_skew_graph(&mut rng, 5, 10);
            // orient by a random antisymmetric order to make the network acyclic
            let mut net = SkewSymmetricNetwork::new(g.node_count);
            let rank = |v: usize| if v == SOURCE { -100 } else if v == SINK { 100 } else if v % 2 == 0 { v as i64 } else { -((v - 1) as i64) };
            for a in (0..g.arc_count()).step_by(2) {
                let (x, y) = (g.tail[a], g.head[a]);
                if rank(x) < rank(y) {
                    net.add_pair(x, y, 1 + (k as i64 % 3));
                }
            }
            let f = crate::blockphase::totally_blocking_isflow(&net).unwrap();
            assert!(verify_isflow(&net, &f).is_ok());
            let res = residual(&net, &f).unwrap();
            // only forward residual arcs belong to the network itself
            let mut cap = res.cap.clone();
            for c in cap.iter_mut().skip(res.m) {
                *c = 0;
            }
            let split = build_split_graph(&res.graph, &cap).unwrap();
            assert!(matches!(crate::regpath::find_regular_path(&split.graph), RegPath::Barrier(_)), "case {k}");
            done += usize::from(f.value > 0);
        }
        assert!(done > 50);
    }

    #[test]
    fn test_matching_matches_oracle() {
        let budget = OracleBudget::default();
        for k in 0..200u64 {
            let mut rng = rng_for(14, k);
            let n = 2 + (k as usize % 9);
            let max_m = n * (n - 1) / 2;
            let edges = random_graph(&mut rng, n, (k as usize * 7) % (max_m + 1)).unwrap();
            let want = oracle_max_matching(n, &edges, &budget).unwrap();
            let inst = MatchingInstance::unit(n, edges);
            for algo in Algorithm::ALL {
                match solve_matching(&inst, |net| solve(net, algo).unwrap().flow).unwrap() {
                    MatchingOutcome::Feasible { value, .. } => assert_eq!(value as usize, want, "case {k} {algo}"),
                    MatchingOutcome::Infeasible => panic!("unit matching is always feasible"),
                }
            }
        }
    }

    #[test]
    fn test_k3_perfect_matching_infeasible() {
        let mut inst = MatchingInstance::unit(3, vec![(0, 1), (1, 2), (0, 2)]);
        inst.node_bounds = vec![(1, 1); 3];
        let out = solve_matching(&inst, |net| max_isflow_sbfm(net).unwrap().flow).unwrap();
        assert_eq!(out, MatchingOutcome::Infeasible);
    }

    #[test]
    fn test_cross_solver_on_larger_matchings() {
        for k in 0..150u64 {
            let mut rng = rng_for(15, k);
            let n = 10 + (k as usize % 30);
            let edges = random_graph(&mut rng, n, 2 * n).unwrap();
            let net = matching_to_network(&MatchingInstance::unit(n, edges)).unwrap().0.net;
            let values: Vec<i64> = Algorithm::ALL
                .iter()
                .map(|&algo| {
                    let r = solve(&net, algo).unwrap_or_else(|e| panic!("case {k} {algo}: {e}"));
                    check(&net, &r);
                    r.flow.value
                })
                .collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "case {k}: {values:?}");
        }
    }

    #[test]
    fn test_cross_solver_on_capacitated_nets() {
        for k in 0..300u64 {
            let mut rng = rng_for(16, k);
            let net = random_ssf(&mut rng, 6 + (k as usize % 10), 30, 5);
            let values: Vec<i64> = Algorithm::ALL
                .iter()
                .map(|&algo| {
                    let r = solve(&net, algo).unwrap_or_else(|e| panic!("case {k} {algo}: {e}"));
                    check(&net, &r);
                    r.flow.value
                })
                .collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "case {k}: {values:?}");
        }
    }

    #[test]
    fn test_algorithm_names() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("dinic".parse::<Algorithm>().is_err());
    }
}

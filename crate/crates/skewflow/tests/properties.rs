use proptest::prelude::*;

use skewflow::blockphase::{solve_mbp, totally_blocking_isflow, to_mbp_instance};
use skewflow::certify::{verify_isflow, verify_path_set};
use skewflow::compress::{compress_to_stars, decompress_flow, symmetric_clique_partition};
use skewflow::decompose::{crossing_parity, symmetric_decomposition};
use skewflow::gen::{dense_graph, random_graph, random_mbp, random_ssf, rng_for};
use skewflow::io;
use skewflow::reductions::{matching_to_network, unit_split, MatchingInstance};
use skewflow::solvers::{self_check, solve, Algorithm};
use skewflow::ssgraph::{mate, residual, superpose, validate_network};
use skewflow::SkewSymmetricNetwork;

fn ssf(seed: u64, pairs: usize, arc_pairs: usize, cap: i64) -> SkewSymmetricNetwork {
    random_ssf(&mut rng_for(seed, 0), pairs, arc_pairs, cap)
}

/// Keeps the pairs oriented from lower to higher potential, so the result is acyclic.
fn acyclic(raw: &SkewSymmetricNetwork) -> SkewSymmetricNetwork {
    let rank = |v: usize| if v % 2 == 0 { -(v as i64) - 1 } else { v as i64 };
    let mut net = SkewSymmetricNetwork::new(raw.node_count);
    for a in 0..raw.arc_count() {
        let e = &raw.arcs[a];
        if a < raw.arc_mate[a] && rank(e.tail) < rank(e.head) {
            net.add_pair(e.tail, e.head, e.cap);
        }
    }
    net
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_networks_are_skew_symmetric(seed in any::<u64>(), pairs in 2usize..30, arcs in 0usize..80, cap in 1i64..6) {
        let net = ssf(seed, pairs, arcs, cap);
        prop_assert!(validate_network(&net).is_ok());
        for a in 0..net.arc_count() {
            let b = net.arc_mate[a];
            prop_assert_eq!(net.arc_mate[b], a);
            prop_assert_eq!(net.arcs[b].tail, mate(net.arcs[a].head));
        }
    }

    #[test]
    fn solvers_agree_and_self_certify(seed in any::<u64>(), pairs in 2usize..16, arcs in 1usize..50, cap in 1i64..5) {
        let net = ssf(seed, pairs, arcs, cap);
        let mut values = vec![];
        for algo in Algorithm::ALL {
            let sr = solve(&net, algo).unwrap();
            prop_assert!(self_check(&net, &sr).is_ok(), "{}", algo);
            values.push(sr.flow.value);
        }
        prop_assert!(values.windows(2).all(|w| w[0] == w[1]), "{:?}", values);
    }

    #[test]
    fn decomposition_recomposes(seed in any::<u64>(), pairs in 2usize..16, arcs in 1usize..50, cap in 1i64..5) {
        let net = ssf(seed, pairs, arcs, cap);
        let f = solve(&net, Algorithm::Augmenting).unwrap().flow;
        let d = symmetric_decomposition(&net, &f).unwrap();
        prop_assert_eq!(d.recompose(net.arc_count()), f.values.clone());
        prop_assert!(d.members.len() <= net.arc_count());
        for e in &d.members {
            prop_assert!(e.delta > 0);
            prop_assert_eq!(e.mate_path.len(), e.path.len());
        }
        // a self-symmetric set is crossed an even number of times by an IS-flow
        let set: Vec<usize> = (2..net.node_count).collect();
        let (into, out) = crossing_parity(&net, &f, &set).unwrap();
        prop_assert_eq!((into - out).rem_euclid(2), 0);
    }

    #[test]
    fn residual_superposition_stays_feasible(seed in any::<u64>(), pairs in 2usize..12, arcs in 1usize..40) {
        let net = acyclic(&ssf(seed, pairs, arcs, 3));
        let f = totally_blocking_isflow(&net).unwrap();
        prop_assert!(verify_isflow(&net, &f).is_ok());
        let best = solve(&net, Algorithm::Sbfm).unwrap().flow;
        prop_assert!(f.value <= best.value);
        let res = residual(&net, &f).unwrap();
        let m = net.arc_count();
        prop_assert_eq!(res.graph.arc_count(), 2 * m);
        prop_assert_eq!(superpose(&net, &f, &vec![0; 2 * m]).unwrap(), f.clone());
        // pushing f back along the reverse arcs cancels it
        let mut back = vec![0; 2 * m];
        back[m..].copy_from_slice(&f.values);
        let zero = superpose(&net, &f, &back).unwrap();
        prop_assert_eq!(zero.value, 0);
        prop_assert!(zero.values.iter().all(|&v| v == 0));
    }

    #[test]
    fn unit_split_preserves_value(seed in any::<u64>(), pairs in 2usize..10, arcs in 1usize..25, cap in 1i64..4) {
        let net = ssf(seed, pairs, arcs, cap);
        let (split, _) = unit_split(&net).unwrap();
        prop_assert!(split.arcs.iter().all(|a| a.cap == 1));
        let a = solve(&net, Algorithm::Sbfm).unwrap().flow.value;
        let b = solve(&split, Algorithm::Sbfm).unwrap().flow.value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sbfm_phases_strictly_lengthen(seed in any::<u64>(), n in 4usize..60, density in 1usize..5) {
        let edges = random_graph(&mut rng_for(seed, 1), n, (n * density).min(n * (n - 1) / 2)).unwrap();
        let net = matching_to_network(&MatchingInstance::unit(n, edges)).unwrap().0.net;
        let sr = solve(&net, Algorithm::Sbfm).unwrap();
        prop_assert!(sr.rdists.windows(2).all(|w| w[0] < w[1]), "{:?}", sr.rdists);
        let p = sr.iterations as i64;
        prop_assert!(p * p <= 4 * net.transit_capacity());
    }

    #[test]
    fn mbp_generator_is_clean_and_solved(seed in any::<u64>(), inner in 0usize..20, pairs in 1usize..5, arcs in 0usize..60) {
        let inst = random_mbp(&mut rng_for(seed, 2), inner, pairs, arcs, 1);
        prop_assert!(inst.validate().is_ok());
        prop_assert_eq!(inst.clean(), inst.clone());
        let set = solve_mbp(&inst).unwrap();
        prop_assert!(verify_path_set(&inst, &set, true).is_ok());
    }

    #[test]
    fn acyclic_networks_reduce_to_mbp(seed in any::<u64>(), pairs in 2usize..10, arcs in 1usize..30) {
        let net = acyclic(&ssf(seed, pairs, arcs, 2));
        let red = to_mbp_instance(&net).unwrap();
        prop_assert!(red.instance.validate().is_ok());
        for e in 0..red.instance.arc_count() {
            prop_assert!(red.arc_origin[e] < net.arc_count());
        }
    }

    #[test]
    fn formats_roundtrip(seed in any::<u64>(), pairs in 2usize..12, arcs in 0usize..30) {
        let net = ssf(seed, pairs, arcs, 4);
        prop_assert_eq!(io::parse_ssf(&io::write_ssf(&net)).unwrap(), net.clone());
        let sr = solve(&net, Algorithm::Sapm).unwrap();
        let text = io::write_flow(&sr.flow, Some(&sr.certificate));
        let back = io::parse_flow(&text, net.node_count, net.arc_count()).unwrap();
        prop_assert_eq!(back.flow, sr.flow);
        prop_assert_eq!(back.barrier, Some(sr.certificate));
        let inst = random_mbp(&mut rng_for(seed, 3), pairs, 2, arcs, 3);
        prop_assert_eq!(io::parse_mbp(&io::write_mbp(&inst)).unwrap(), inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn compression_preserves_matching_size(seed in any::<u64>(), n in 16usize..70, exponent in 1.5f64..1.95) {
        let edges = dense_graph(&mut rng_for(seed, 4), n, exponent).unwrap();
        let inst = MatchingInstance::unit(n, edges);
        prop_assert_eq!(io::parse_edge(&io::write_edge(&inst)).unwrap(), inst.clone());
        let net = matching_to_network(&inst).unwrap().0.net;
        let p = symmetric_clique_partition(&net, 0.25).unwrap();
        prop_assert!(p.validate(&net).is_ok());
        let st = compress_to_stars(&net, &p).unwrap();
        prop_assert!(st.net.arc_count() <= net.arc_count());
        let packed = solve(&st.net, Algorithm::Sbfm).unwrap();
        let back = decompress_flow(&net, &st, &packed.flow).unwrap();
        prop_assert!(verify_isflow(&net, &back).is_ok());
        prop_assert_eq!(back.value, solve(&net, Algorithm::Augmenting).unwrap().flow.value);
    }
}

//! Augmenting-path solvers: arbitrary regular paths, or shortest ones.

use super::{augment, check_input, restore_odd_barrier, split_residual, Algorithm, SolveReport};
use crate::error::Result;
use crate::regpath::{find_regular_path, shortest_unit_sra, RegPath, SraOutcome};
use crate::ssgraph::{IsFlow, SkewSymmetricNetwork};

/// Augments `f` until `S(G⁺, u_f)` has no regular `s -> s'` path.
pub(crate) fn augment_to_optimum(net: &SkewSymmetricNetwork, mut f: IsFlow, shortest: bool) -> Result<(IsFlow, crate::certify::OddBarrier, usize, Vec<usize>)> {
    let mut iterations = 0;
    let mut rdists: Vec<usize> = vec![];
    loop {
        let (res, split) = split_residual(net, &f)?;
        let (path, barrier) = if shortest {
            match shortest_unit_sra(&split.graph) {
                SraOutcome::Path { rdist, path, .. } => {
                    if let Some(&last) = rdists.last() {
                        assert!(rdist >= last, "r-distance fell from {last} to {rdist}");
                    }
                    rdists.push(rdist);
                    (Some(path), None)
                }
                SraOutcome::Barrier(b) => (None, Some(b)),
            }
        } else {
            match find_regular_path(&split.graph) {
                RegPath::Path(p) => (Some(p), None),
                RegPath::Barrier(b) => (None, Some(b)),
            }
        };
        match (path, barrier) {
            (Some(p), _) => {
                f = augment(net, &f, &res, &split, &p)?;
                iterations += 1;
            }
            (None, Some(b)) => {
                let cert = restore_odd_barrier(net, &f, &b)?;
                return Ok((f, cert, iterations, rdists));
            }
            (None, None) => unreachable!(),
        }
    }
}

fn run(net: &SkewSymmetricNetwork, algorithm: Algorithm) -> Result<SolveReport> {
    check_input(net)?;
    let shortest = algorithm == Algorithm::Sapm;
    let (flow, certificate, iterations, rdists) = augment_to_optimum(net, IsFlow::zero(net.arc_count()), shortest)?;
    Ok(SolveReport { algorithm, capacity: flow.value, flow, certificate, iterations, rdists, anstee: None })
}

/// Regular augmenting paths found by RA.
pub fn max_isflow_augmenting(net: &SkewSymmetricNetwork) -> Result<SolveReport> {
    run(net, Algorithm::Augmenting)
}

/// Shortest regular augmenting paths; r-distances never decrease.
pub fn max_isflow_sapm(net: &SkewSymmetricNetwork) -> Result<SolveReport> {
    run(net, Algorithm::Sapm)
}

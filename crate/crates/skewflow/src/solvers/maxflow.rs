//! Ordinary maximum flow by blocking flows (Dinic).

use std::collections::VecDeque;

/// Maximum `s`-`t` flow of a digraph; returns the value and arc flows.
pub fn dinic(n: usize, tail: &[usize], head: &[usize], cap: &[i64], s: usize, t: usize) -> (i64, Vec<i64>) {
    let m = tail.len();
    // residual arc 2e is e, 2e+1 its reverse
    let mut to = Vec::with_capacity(2 * m);
    let mut res = Vec::with_capacity(2 * m);
    for e in 0..m {
        to.extend([head[e], tail[e]]);
        res.extend([cap[e], 0]);
    }
    let mut adj = vec![vec![]; n];
    for e in 0..m {
        adj[tail[e]].push(2 * e);
        adj[head[e]].push(2 * e + 1);
    }
    let mut value = 0;
    let mut level = vec![usize::MAX; n];
    let mut it = vec![0usize; n];
    loop {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &r in &adj[v] {
                if res[r] > 0 && level[to[r]] == usize::MAX {
                    level[to[r]] = level[v] + 1;
                    queue.push_back(to[r]);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        it.fill(0);
        // iterative DFS keeping the current path of residual arcs
        let mut path: Vec<usize> = vec![];
        let mut v = s;
        loop {
            if v == t {
                let push = path.iter().map(|&r| res[r]).min().unwrap();
                for &r in &path {
                    res[r] -= push;
                    res[r ^ 1] += push;
                }
                value += push;
                let cut = path.iter().position(|&r| res[r] == 0).unwrap();
                path.truncate(cut);
                v = path.last().map_or(s, |&r| to[r]);
                continue;
            }
            let mut advanced = false;
            while it[v] < adj[v].len() {
                let r = adj[v][it[v]];
                let w = to[r];
                if res[r] > 0 && level[w] == level[v] + 1 {
                    path.push(r);
                    v = w;
                    advanced = true;
                    break;
                }
                it[v] += 1;
            }
            if !advanced {
                if v == s {
                    break;
                }
                level[v] = usize::MAX;
                let r = path.pop().unwrap();
                v = to[r ^ 1];
                it[v] += 1;
            }
        }
    }
    let flow = (0..m).map(|e| res[2 * e + 1]).collect();
    (value, flow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_diamond() {
        // 0 -> 1 -> 3, 0 -> 2 -> 3, 1 -> 2
        let tail = [0, 0, 1, 2, 1];
        let head = [1, 2, 3, 3, 2];
        let cap = [3, 2, 1, 4, 5];
        let (v, f) = dinic(4, &tail, &head, &cap, 0, 3);
        assert_eq!(v, 5);
        assert_eq!(f[2] + f[3], 5);
    }

    #[test]
    fn test_disconnected() {
        assert_eq!(dinic(3, &[0], &[1], &[4], 0, 2).0, 0);
    }
}

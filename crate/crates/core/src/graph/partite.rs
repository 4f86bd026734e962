//! Side-size extremes over all bipartitions of a bipartite graph.

use serde::{Deserialize, Serialize};

use crate::bits;

use super::{GraphError, SimpleGraph};

/// `s`/`t`: smallest small side and the matching largest large side;
/// `s_star`/`t_star`: largest small side and the matching smallest large side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiteProfile {
    pub s: usize,
    pub t: usize,
    pub s_star: usize,
    pub t_star: usize,
}

/// Every component contributes one of its two sides to the left; isolated
/// vertices are components with sides (1, 0). The reachable left sizes are a
/// subset-sum set.
pub fn partite_profile(g: &SimpleGraph) -> Result<PartiteProfile, GraphError> {
    let n = g.order();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for (comp, bipartite) in bits::components_within(g.adjacency(), bits::full(n)) {
        if !bipartite {
            return Err(GraphError::NotBipartite);
        }
        let root = comp.trailing_zeros() as usize;
        // 2-colour by BFS distance parity
        let mut side = bits::bit(root);
        let mut frontier = bits::bit(root);
        let mut seen = frontier;
        let mut odd = false;
        while frontier != 0 {
            let next = bits::members(frontier).fold(0u128, |s, v| s | g.neighbors(v)) & !seen;
            odd = !odd;
            if !odd {
                side |= next;
            }
            seen |= next;
            frontier = next;
        }
        let a = bits::count(side);
        let b = bits::count(comp) - a;
        let mut next = vec![false; n + 1];
        for x in 0..=n {
            if reach[x] {
                next[x + a] = true;
                next[x + b] = true;
            }
        }
        reach = next;
    }
    let small: Vec<usize> = (0..=n / 2).filter(|&x| reach[x]).collect();
    let s = small[0];
    let s_star = *small.last().unwrap();
    Ok(PartiteProfile { s, t: n - s, s_star, t_star: n - s_star })
}

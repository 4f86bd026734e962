//! Vertex sets as 128-bit masks. Every host and pattern in this crate has at
//! most [`MAX_VERTICES`] vertices.

pub type VSet = u128;

pub const MAX_VERTICES: usize = 128;

#[inline]
pub fn bit(v: usize) -> VSet {
    1u128 << v
}

#[inline]
pub fn full(n: usize) -> VSet {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

#[inline]
pub fn contains(s: VSet, v: usize) -> bool {
    (s >> v) & 1 == 1
}

#[inline]
pub fn count(s: VSet) -> usize {
    s.count_ones() as usize
}

/// Iterates set bits in ascending order.
pub struct Members(VSet);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

#[inline]
pub fn members(s: VSet) -> Members {
    Members(s)
}

/// Connected components of the subgraph induced by `within`, each with a
/// bipartiteness flag.
pub fn components_within(adj: &[VSet], within: VSet) -> Vec<(VSet, bool)> {
    let mut out = Vec::new();
    let mut rest = within;
    while rest != 0 {
        let root = rest.trailing_zeros() as usize;
        // side[0] / side[1] hold the two BFS parity classes.
        let mut side = [bit(root), 0u128];
        let mut frontier = bit(root);
        let mut parity = 0usize;
        let mut seen = bit(root);
        let mut bipartite = true;
        while frontier != 0 {
            let mut next = 0u128;
            for v in members(frontier) {
                let nb = adj[v] & within;
                if nb & side[parity] != 0 {
                    bipartite = false;
                }
                next |= nb & !seen;
            }
            parity ^= 1;
            side[parity] |= next;
            seen |= next;
            frontier = next;
        }
        out.push((seen, bipartite));
        rest &= !seen;
    }
    out
}

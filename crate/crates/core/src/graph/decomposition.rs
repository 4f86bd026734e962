//! Decomposition families: the minimal graphs `M` such that `H` embeds in
//! `(M ∪ independent vertices)` joined to `p - i` further independent parts,
//! where `p = chi(H)`.

use serde::{Deserialize, Serialize};

use crate::bits::{self, VSet};

use super::embed::{is_subgraph, isomorphic};
use super::invariants::chromatic_number;
use super::{GraphError, SimpleGraph};

pub const DECOMPOSITION_ORDER_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFamily {
    pub base: SimpleGraph,
    pub index: usize,
    pub members: Vec<SimpleGraph>,
}

/// `members` are sorted by (order, edge count, graph6) and pairwise
/// incomparable under the subgraph relation.
pub fn decomposition_family(h: &SimpleGraph, index: usize) -> Result<DecompositionFamily, GraphError> {
    if h.order() > DECOMPOSITION_ORDER_LIMIT {
        return Err(GraphError::TooLarge { order: h.order(), limit: DECOMPOSITION_ORDER_LIMIT });
    }
    let p = chromatic_number(h);
    if p < 3 {
        return Err(GraphError::ChromaticTooSmall { chi: p, min: 3 });
    }
    if index < 2 || index > p - 1 {
        return Err(GraphError::IndexOutOfRange { index, lo: 2, hi: p - 1 });
    }
    let others = p - index;
    let n = h.order();

    // Sets R whose complement is `others`-colorable, keeping only the
    // inclusion-minimal ones (supersets give supergraphs).
    let mut minimal_sets: Vec<VSet> = Vec::new();
    let mut subsets: Vec<VSet> = (0..1u128 << n).collect();
    subsets.sort_by_key(|s| bits::count(*s));
    for r in subsets {
        if minimal_sets.iter().any(|m| m & r == *m) {
            continue;
        }
        if chromatic_number(&h.induced(bits::full(n) & !r)) <= others {
            minimal_sets.push(r);
        }
    }

    let mut candidates: Vec<SimpleGraph> = Vec::new();
    for r in minimal_sets {
        let (core, _) = h.induced(r).strip_isolated();
        if !candidates.iter().any(|c| isomorphic(c, &core)) {
            candidates.push(core);
        }
    }
    let mut members: Vec<SimpleGraph> = candidates
        .iter()
        .filter(|m| {
            !candidates.iter().any(|other| {
                !std::ptr::eq(*m, other)
                    && (other.order(), other.edge_count()) <= (m.order(), m.edge_count())
                    && is_subgraph(other, m)
            })
        })
        .cloned()
        .collect();
    members.sort_by_key(|m| (m.order(), m.edge_count(), m.to_graph6()));
    Ok(DecompositionFamily { base: h.clone(), index, members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        let k2 = SimpleGraph::complete(2);
        let f = decomposition_family(&SimpleGraph::complete(3), 2).unwrap();
        assert_eq!(f.members, vec![k2.clone()]);
        let f = decomposition_family(&SimpleGraph::cycle(5), 2).unwrap();
        assert_eq!(f.members, vec![k2.clone()]);
        let f = decomposition_family(&SimpleGraph::complete(3).copies(2), 2).unwrap();
        assert_eq!(f.members.len(), 1);
        assert!(isomorphic(&f.members[0], &k2.copies(2)));
    }

    #[test]
    fn higher_index_for_k4() {
        // M_3(K4): K4 minus one independent part leaves K3
        let f = decomposition_family(&SimpleGraph::complete(4), 3).unwrap();
        assert_eq!(f.members, vec![SimpleGraph::complete(3)]);
        let f = decomposition_family(&SimpleGraph::complete(4), 2).unwrap();
        assert_eq!(f.members, vec![SimpleGraph::complete(2)]);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            decomposition_family(&SimpleGraph::cycle(4), 2),
            Err(GraphError::ChromaticTooSmall { chi: 2, .. })
        ));
        assert!(matches!(
            decomposition_family(&SimpleGraph::complete(3), 3),
            Err(GraphError::IndexOutOfRange { .. })
        ));
    }
}

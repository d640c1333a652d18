//! Greedy rainbow matchings.
//!
//! The augmentation loop needs a starting point and a way to re-maximalize
//! after each step. Both are single passes that accept an edge whenever it
//! is vertex-disjoint from the matching so far and its color is unused.
//! The result is always a maximal rainbow matching with respect to the scan
//! order: no later edge could have been added without a conflict.

use crate::model::{for_each_edge, unrank_edge, Matching, ProperColoring};

use super::ColorTracker;

/// Builds a rainbow matching in one pass over the edges.
///
/// With `order` = None the pass runs in colexicographic rank order, which
/// makes the result deterministic and maximal. An explicit `order` (a
/// permutation of edge ranks, possibly partial) scans exactly those ranks
/// in the given sequence; maximality then holds only relative to the ranks
/// visited.
pub fn greedy_rainbow_matching(coloring: &ProperColoring, order: Option<&[usize]>) -> Matching {
    let params = coloring.params();
    let mut matching = Matching::empty(*params);
    let mut used = ColorTracker::new(coloring);
    match order {
        None => {
            for_each_edge(params, |rank, vertices| {
                if matching.len() == params.n() {
                    return;
                }
                let color = coloring.color_at_rank(rank);
                if used.contains(color) || !matching.occupied().is_disjoint_from(vertices) {
                    return;
                }
                let edge = unrank_edge(params, rank).expect("rank comes from the edge sweep");
                let pushed = matching.try_push(edge);
                debug_assert!(pushed);
                used.insert(color);
            });
        }
        Some(ranks) => {
            for &rank in ranks {
                if matching.len() == params.n() {
                    break;
                }
                let color = coloring.color_at_rank(rank);
                if used.contains(color) {
                    continue;
                }
                let edge = unrank_edge(params, rank).expect("order holds valid ranks");
                if matching.try_push(edge) {
                    used.insert(color);
                }
            }
        }
    }
    matching
}

/// Extends a rainbow matching to a maximal one with a colex pass.
/// Returns how many edges were added.
pub fn extend_to_maximal(coloring: &ProperColoring, matching: &mut Matching) -> usize {
    let params = coloring.params();
    let mut used = ColorTracker::new(coloring);
    for edge in matching.edges() {
        used.insert(coloring.color_of(edge));
    }
    let mut added = 0;
    for_each_edge(params, |rank, vertices| {
        if matching.len() == params.n() {
            return;
        }
        let color = coloring.color_at_rank(rank);
        if used.contains(color) || !matching.occupied().is_disjoint_from(vertices) {
            return;
        }
        let edge = unrank_edge(params, rank).expect("rank comes from the edge sweep");
        let pushed = matching.try_push(edge);
        debug_assert!(pushed);
        used.insert(color);
        added += 1;
    });
    added
}

// ==================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_round_robin, generate, FixtureName, GenSpec};
    use crate::model::{all_edges, Edge};

    #[test]
    fn colex_pass_on_distinct_colors_takes_the_first_factor() {
        let name = FixtureName::AllDistinct { r: 2, n: 4 };
        let coloring = generate(&GenSpec::Fixture { name }).unwrap();
        let m = greedy_rainbow_matching(&coloring, None);
        assert_eq!(m.len(), 4);
        let mut edges = m.into_edges();
        edges.sort();
        let expected: Vec<Edge> = [(0, 1), (2, 3), (4, 5), (6, 7)]
            .iter()
            .map(|&(u, v)| Edge::pair(u, v))
            .collect();
        assert_eq!(edges, expected);
    }

    #[test]
    fn blocked_fixture_stalls_below_perfect() {
        // Both one-factor partners of every edge repeat a color, so a
        // maximal rainbow matching of K_4 has exactly one edge.
        let name = FixtureName::K4Factorization;
        let coloring = generate(&GenSpec::Fixture { name }).unwrap();
        let m = greedy_rainbow_matching(&coloring, None);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn custom_order_controls_the_scan() {
        let coloring = gen_round_robin(3).unwrap();
        // Feed ranks backwards; the matching must stay rainbow and use
        // only the given ranks.
        let order: Vec<usize> = (0..coloring.params().edge_count()).rev().collect();
        let m = greedy_rainbow_matching(&coloring, Some(&order));
        assert!(m.is_rainbow_under(&coloring));
        assert!(!m.is_empty());
    }

    #[test]
    fn extension_restores_maximality() {
        let coloring = gen_round_robin(4).unwrap();
        let mut m = greedy_rainbow_matching(&coloring, None);
        while m.len() > 1 {
            m.remove_at(m.len() - 1);
        }
        extend_to_maximal(&coloring, &mut m);
        // Maximal: no remaining edge is both disjoint and fresh.
        let used = m.used_colors(&coloring);
        for edge in all_edges(coloring.params()) {
            let fresh = !used.contains(&coloring.color_of(&edge));
            assert!(!(m.can_add(&edge) && fresh), "extension missed {edge:?}");
        }
    }
}

//! Exhaustive one-factor enumeration.
//!
//! The enumerator is the ground truth the rest of the crate is checked
//! against: it visits every one-factor of K_{rn}^{(r)} exactly once, so
//! rainbow counts and witnesses derived from it are authoritative. It is
//! deliberately simple (recursive, lowest-uncovered-vertex first) and
//! deliberately capped: one-factor counts grow like (rn)!, and the cap
//! keeps a sweep comfortably under a second.
//!
//! Enumeration order is fixed and documented because callers rely on it:
//! at each level the lowest uncovered vertex is joined with every
//! (r-1)-subset of the remaining uncovered vertices in colexicographic
//! order. The first factor visited is therefore {0..r-1}, {r..2r-1}, ...,
//! and a reported witness is the first rainbow factor in this order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{rank_vertices, unrank_edge, OneFactor, Params, ProperColoring};

use super::rainbow_ranks;

/// Largest vertex count `oracle_enumerate` accepts.
pub const ORACLE_VERTEX_CAP: usize = 12;

/// Tally of a full sweep over every one-factor.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub total_factors: u64,
    pub rainbow_factors: u64,
    /// First rainbow one-factor in enumeration order, if any.
    #[serde(skip)]
    pub witness: Option<OneFactor>,
}

/// Counts all one-factors and the rainbow ones among them.
///
/// Errors with `Error::Capacity` above `ORACLE_VERTEX_CAP` vertices.
pub fn oracle_enumerate(coloring: &ProperColoring) -> Result<OracleReport> {
    let params = coloring.params();
    if params.vertex_count() > ORACLE_VERTEX_CAP {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration is capped at {ORACLE_VERTEX_CAP} vertices, got {}",
            params.vertex_count()
        )));
    }
    let mut total: u64 = 0;
    let mut rainbow: u64 = 0;
    let mut witness_ranks: Option<Vec<usize>> = None;
    for_each_one_factor(params, |ranks| {
        total += 1;
        if rainbow_ranks(coloring, ranks) {
            rainbow += 1;
            if witness_ranks.is_none() {
                witness_ranks = Some(ranks.to_vec());
            }
        }
        true
    });
    let witness = match witness_ranks {
        Some(ranks) => {
            let edges = ranks
                .iter()
                .map(|&rank| unrank_edge(params, rank))
                .collect::<Result<Vec<_>>>()?;
            Some(OneFactor::new(*params, edges)?)
        }
        None => None,
    };
    Ok(OracleReport {
        total_factors: total,
        rainbow_factors: rainbow,
        witness,
    })
}

/// Visits every one-factor as a slice of edge ranks, in the documented
/// order. The visitor returns false to stop the sweep early.
pub(crate) fn for_each_one_factor<F>(params: &Params, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let mut covered = vec![false; params.vertex_count()];
    let mut ranks = Vec::with_capacity(params.n());
    let mut stop = false;
    descend(params, &mut covered, &mut ranks, &mut visit, &mut stop);
}

fn descend<F>(
    params: &Params,
    covered: &mut Vec<bool>,
    ranks: &mut Vec<usize>,
    visit: &mut F,
    stop: &mut bool,
) where
    F: FnMut(&[usize]) -> bool,
{
    if *stop {
        return;
    }
    let Some(v) = covered.iter().position(|&c| !c) else {
        if !visit(ranks) {
            *stop = true;
        }
        return;
    };
    // Everything uncovered besides v is above it, so edges come out sorted.
    let pool: Vec<usize> = (v + 1..params.vertex_count())
        .filter(|&u| !covered[u])
        .collect();
    let mut edge = Vec::with_capacity(params.r());
    for_each_combination(pool.len(), params.r() - 1, |positions| {
        if *stop {
            return false;
        }
        edge.clear();
        edge.push(v);
        edge.extend(positions.iter().map(|&p| pool[p]));
        let rank = rank_vertices(&edge);
        for u in &edge {
            covered[*u] = true;
        }
        ranks.push(rank);
        descend(params, covered, ranks, visit, stop);
        ranks.pop();
        for u in &edge {
            covered[*u] = false;
        }
        !*stop
    });
}

/// Visits every k-subset of {0, .., len-1} as a sorted position slice, in
/// colexicographic order. The visitor returns false to stop early.
pub(crate) fn for_each_combination<F>(len: usize, k: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    if k > len {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&c) {
            return;
        }
        if k == 0 {
            return;
        }
        // Colex successor: bump the lowest position that has headroom
        // below its neighbor, resetting everything under it.
        let mut i = 0;
        loop {
            let limit = if i + 1 < k { c[i + 1] } else { len };
            if c[i] + 1 < limit {
                c[i] += 1;
                for (j, slot) in c.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
            if i == k {
                return;
            }
        }
    }
}

// ==================================================================

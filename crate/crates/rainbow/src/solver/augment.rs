//! One augmentation step for the r = 2 solver.
//!
//! Given a rainbow matching M of size k < n in a properly colored K_{2n},
//! `augment_once` looks for a rainbow matching of size k + 1. The search
//! order is fixed and fully deterministic:
//!
//! 1. For every ordered pair (s, t) of unmatched vertices, in vertex order:
//!    a. 3-paths s-a-b-t with a ascending, {a, b} in M: swapping {a, b}
//!       for {s, a} and {b, t} augments when both new colors are fresh and
//!       distinct.
//!    b. If no path works and the color of {s, t} is already in M,
//!       rotations in increasing color id: a fresh color i at t pivots the
//!       matching edge e_i = {z, t_i} out in favor of {t, z}, and the pair
//!       (s, t_i) is retried against the rotated matching, checking the
//!       direct edge {s, t_i}, edges of the freed color, and 3-paths.
//! 2. Only if every pair is exhausted: a trivial extension, the
//!    colexicographically first edge that is disjoint from M with a fresh
//!    color.
//!
//! Every accepted step is rebuilt as a fresh `Matching` and re-verified
//! (disjointness, size k + 1, rainbow) before it is returned; the screening
//! conditions and the verification are independent code paths.
//!
//! The companion instrumentation in the trace module inventories the same
//! avenues as a pure function; in debug builds the two are cross-checked
//! pair by pair whenever traces are recorded.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{for_each_edge, unrank_edge, Edge, Matching, ProperColoring};
use crate::trace::{analyze_pair, AugmentationTrace};

use super::ColorTracker;

/// How one augmentation step succeeded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AugmentRoute {
    /// A disjoint fresh edge extended the matching directly.
    TrivialExtension { edge: (usize, usize) },
    /// Base 3-path: M - {a, b} + {s, a} + {b, t}.
    Path { s: usize, t: usize, a: usize, b: usize },
    /// Rotation by `rotation_color`, then the direct edge {s, t_i}.
    RotatedDirect { s: usize, t: usize, rotation_color: u32, z: usize, t_i: usize },
    /// Rotation by `rotation_color`, then an edge of the freed color that
    /// is disjoint from the rotated matching.
    RotatedFreedClass {
        s: usize,
        t: usize,
        rotation_color: u32,
        z: usize,
        t_i: usize,
        edge: (usize, usize),
    },
    /// Rotation by `rotation_color`, then a 3-path s-a-b-t_i relative to
    /// the rotated matching.
    RotatedPath {
        s: usize,
        t: usize,
        rotation_color: u32,
        z: usize,
        t_i: usize,
        a: usize,
        b: usize,
    },
}

impl AugmentRoute {
    pub fn is_rotation(&self) -> bool {
        matches!(
            self,
            AugmentRoute::RotatedDirect { .. }
                | AugmentRoute::RotatedFreedClass { .. }
                | AugmentRoute::RotatedPath { .. }
        )
    }
}

/// Outcome of one step.
#[derive(Debug, Clone)]
pub enum AugmentOutcome {
    /// A verified rainbow matching one edge larger, and how it was reached.
    Augmented { matching: Matching, route: AugmentRoute },
    /// No avenue anywhere augments. For n >= 5 the counting argument proves
    /// this cannot happen; reaching it is reportable evidence.
    Exhausted,
}

/// Outcome plus any traces recorded along the way.
#[derive(Debug)]
pub struct AugmentResult {
    pub outcome: AugmentOutcome,
    /// One trace per examined pair, present only when recording was
    /// requested and the matching was maximal (the inventory's counting
    /// identities are meaningless below maximality).
    pub traces: Vec<AugmentationTrace>,
}

struct SearchCtx<'a> {
    coloring: &'a ProperColoring,
    matching: &'a Matching,
    used: &'a ColorTracker<'a>,
    partner: &'a [usize],
    edge_color: &'a [u32],
    vertex_count: usize,
}

/// Tries to grow the matching by one edge. See the module docs for the
/// exact search order.
pub fn augment_once(
    coloring: &ProperColoring,
    matching: &Matching,
    record_traces: bool,
) -> Result<AugmentResult> {
    let params = coloring.params();
    if params.r() != 2 {
        return Err(Error::Precondition(format!(
            "augmentation is defined for graphs (r = 2), got r = {}",
            params.r()
        )));
    }
    if matching.len() >= params.n() {
        return Err(Error::Precondition("matching is already perfect".into()));
    }
    if !matching.is_rainbow_under(coloring) {
        return Err(Error::Precondition("matching is not rainbow".into()));
    }

    let vc = params.vertex_count();
    let mut partner = vec![usize::MAX; vc];
    let mut edge_color = vec![0u32; vc];
    let mut used = ColorTracker::new(coloring);
    for e in matching.edges() {
        let (u, v) = (e.vertices()[0], e.vertices()[1]);
        let c = coloring.color_of(e);
        partner[u] = v;
        partner[v] = u;
        edge_color[u] = c;
        edge_color[v] = c;
        used.insert(c);
    }

    let ctx = SearchCtx {
        coloring,
        matching,
        used: &used,
        partner: &partner,
        edge_color: &edge_color,
        vertex_count: vc,
    };

    // Maximality is only needed up front to gate trace recording; the hot
    // path postpones the O(edges) sweep until the pair search fails.
    let eager_trivial = record_traces.then(|| find_trivial(coloring, matching, &used));
    let record = record_traces && eager_trivial.as_ref().is_some_and(|t| t.is_none());

    let unmatched: Vec<usize> = (0..vc).filter(|&v| partner[v] == usize::MAX).collect();
    let mut traces = Vec::new();

    for &s in &unmatched {
        for &t in &unmatched {
            if s == t {
                continue;
            }
            if record {
                traces.push(analyze_pair(coloring, matching, s, t)?);
            }
            let hit = search_pair(&ctx, s, t)?;
            if record {
                let trace = traces.last().expect("just pushed");
                debug_assert_eq!(
                    hit.is_some(),
                    trace.augments,
                    "search and trace disagree on pair ({s}, {t})"
                );
            }
            if let Some((matching, route)) = hit {
                return Ok(AugmentResult {
                    outcome: AugmentOutcome::Augmented { matching, route },
                    traces,
                });
            }
        }
    }

    let trivial = match eager_trivial {
        Some(t) => t,
        None => find_trivial(coloring, matching, &used),
    };
    if let Some(edge) = trivial {
        let (u, v) = (edge.vertices()[0], edge.vertices()[1]);
        let matching = rebuild(&ctx, &[], &[(u, v)])?;
        return Ok(AugmentResult {
            outcome: AugmentOutcome::Augmented {
                matching,
                route: AugmentRoute::TrivialExtension { edge: (u, v) },
            },
            traces,
        });
    }

    Ok(AugmentResult { outcome: AugmentOutcome::Exhausted, traces })
}

/// Colexicographically first edge that is disjoint from the matching and
/// carries a fresh color; None exactly when the matching is maximal.
fn find_trivial(
    coloring: &ProperColoring,
    matching: &Matching,
    used: &ColorTracker,
) -> Option<Edge> {
    let params = coloring.params();
    let mut found: Option<usize> = None;
    for_each_edge(params, |rank, vertices| {
        if found.is_none()
            && matching.occupied().is_disjoint_from(vertices)
            && !used.contains(coloring.color_at_rank(rank))
        {
            found = Some(rank);
        }
    });
    found.map(|rank| unrank_edge(params, rank).expect("rank comes from the edge sweep"))
}

/// Runs steps (a) and (b) for one ordered pair. Returns the first verified
/// augmentation in search order, or None.
fn search_pair(
    ctx: &SearchCtx,
    s: usize,
    t: usize,
) -> Result<Option<(Matching, AugmentRoute)>> {
    // (a) base 3-paths s-a-b-t.
    for a in 0..ctx.vertex_count {
        if a == s || a == t || ctx.partner[a] == usize::MAX {
            continue;
        }
        let first = ctx.coloring.pair_color(s, a);
        if ctx.used.contains(first) {
            continue;
        }
        let b = ctx.partner[a];
        let third = ctx.coloring.pair_color(b, t);
        if third != first && !ctx.used.contains(third) {
            let matching = rebuild(ctx, &[(a, b)], &[(s, a), (b, t)])?;
            return Ok(Some((matching, AugmentRoute::Path { s, t, a, b })));
        }
    }

    // (b) rotations; only defined when {s, t} clashes with the matching.
    let base = ctx.coloring.pair_color(s, t);
    if !ctx.used.contains(base) {
        // Non-maximal state; the trivial-extension step will pick {s, t}
        // or something before it up.
        return Ok(None);
    }
    let e1 = ctx
        .matching
        .edges()
        .iter()
        .find(|e| ctx.coloring.color_of(e) == base)
        .expect("base color is in the used set");
    let excluded: Vec<u32> = e1
        .vertices()
        .iter()
        .map(|&w| ctx.coloring.pair_color(t, w))
        .filter(|&c| !ctx.used.contains(c))
        .collect();

    // Rotation colors, ascending; properness makes colors at t distinct,
    // so sorting by color is a total order.
    let mut rotations: Vec<(u32, usize)> = Vec::new();
    for z in 0..ctx.vertex_count {
        if z == t {
            continue;
        }
        let c = ctx.coloring.pair_color(t, z);
        if ctx.used.contains(c) || excluded.contains(&c) {
            continue;
        }
        if ctx.partner[z] == usize::MAX {
            // Fresh edge to an unmatched vertex: no matching edge to pivot
            // (possible only below maximality).
            continue;
        }
        rotations.push((c, z));
    }
    rotations.sort_unstable();

    for (rc, z) in rotations {
        let t_i = ctx.partner[z];
        let ci = ctx.edge_color[z];
        debug_assert_ne!(ci, base, "exclusion keeps the base edge in place");
        // Fresh relative to M_i: color i joins the matching, ci leaves it.
        let fresh_i = |c: u32| c != rc && (c == ci || !ctx.used.contains(c));

        // Direct edge {s, t_i}.
        let direct = ctx.coloring.pair_color(s, t_i);
        if fresh_i(direct) {
            let matching = rebuild(ctx, &[(z, t_i)], &[(t, z), (s, t_i)])?;
            let route = AugmentRoute::RotatedDirect { s, t, rotation_color: rc, z, t_i };
            return Ok(Some((matching, route)));
        }

        // Any edge of the freed color that is disjoint from M_i, which
        // covers what M covers, minus t_i, plus t.
        let covered = |w: usize| (ctx.matching.covers(w) && w != t_i) || w == t;
        for e in ctx.coloring.class_edges(ci) {
            let (u, v) = (e.vertices()[0], e.vertices()[1]);
            if !covered(u) && !covered(v) {
                let matching = rebuild(ctx, &[(z, t_i)], &[(t, z), (u, v)])?;
                let route = AugmentRoute::RotatedFreedClass {
                    s,
                    t,
                    rotation_color: rc,
                    z,
                    t_i,
                    edge: (u, v),
                };
                return Ok(Some((matching, route)));
            }
        }

        // 3-paths s-a-b-t_i relative to M_i.
        for a in 0..ctx.vertex_count {
            if a == s || a == t_i || a == t {
                // a == t never qualifies: {s, t} carries the used base
                // color, which differs from both rc and ci.
                continue;
            }
            let first = ctx.coloring.pair_color(s, a);
            if !fresh_i(first) {
                continue;
            }
            let b = if a == z {
                // Middle edge is the rotated-in {t, z}, so the path exits
                // toward t_i from t.
                t
            } else if ctx.partner[a] != usize::MAX {
                ctx.partner[a]
            } else {
                // Unmatched a has no middle edge to swap. On a maximal
                // matching {s, a} can only be fresh here through the freed
                // color, which the freed-class scan above already covered;
                // below maximality the trivial-extension step catches it.
                continue;
            };
            let third = ctx.coloring.pair_color(b, t_i);
            if third == first || !fresh_i(third) {
                continue;
            }
            let matching = if a == z {
                // Net effect over M: swap {z, t_i} for {s, z} and {t, t_i}.
                rebuild(ctx, &[(z, t_i)], &[(s, z), (t, t_i)])?
            } else {
                rebuild(ctx, &[(z, t_i), (a, b)], &[(t, z), (s, a), (b, t_i)])?
            };
            let route = AugmentRoute::RotatedPath { s, t, rotation_color: rc, z, t_i, a, b };
            return Ok(Some((matching, route)));
        }
    }

    Ok(None)
}

/// Applies a swap as edge arithmetic on the base matching and re-verifies
/// the result from scratch. The screening logic upstream guarantees
/// success; any failure here is a real defect and surfaces as an error.
fn rebuild(
    ctx: &SearchCtx,
    remove: &[(usize, usize)],
    add: &[(usize, usize)],
) -> Result<Matching> {
    let mut edges: Vec<Edge> = ctx.matching.edges().to_vec();
    for &(u, v) in remove {
        let key = Edge::pair(u, v);
        let pos = edges.iter().position(|e| *e == key).ok_or_else(|| {
            Error::Precondition(format!(
                "augmentation tried to remove {{{u}, {v}}}, which is not in the matching"
            ))
        })?;
        edges.swap_remove(pos);
    }
    for &(u, v) in add {
        edges.push(Edge::pair(u, v));
    }
    let rebuilt = Matching::new(*ctx.coloring.params(), edges)?;
    if rebuilt.len() != ctx.matching.len() + 1 {
        return Err(Error::Precondition(format!(
            "augmentation changed the matching size from {} to {}, expected +1",
            ctx.matching.len(),
            rebuilt.len()
        )));
    }
    if !rebuilt.is_rainbow_under(ctx.coloring) {
        return Err(Error::Precondition(
            "augmentation produced a non-rainbow matching".into(),
        ));
    }
    Ok(rebuilt)
}

// ==================================================================

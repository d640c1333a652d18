//! Vertex, edge, coloring, and matching primitives shared by every other
//! module.
//!
//! Vertices of the complete r-uniform hypergraph on r*n vertices are the
//! integers 0..r*n. An edge is a strictly increasing r-tuple of vertices and
//! is addressed by its colexicographic rank, so a coloring is a flat array of
//! color ids indexed by rank. Color ids are opaque: apart from equality they
//! carry no meaning, and they need not be contiguous.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, PropernessWitness, Result};

/// Hard ceiling on the number of edges an instance may declare. Everything
/// above this is unrepresentable in memory anyway.
pub const MAX_EDGE_COUNT: usize = 1 << 31;

/// Binomial coefficient, None on overflow.
pub fn binomial_checked(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    usize::try_from(acc).ok()
}

/// Binomial coefficient. Panics if the value does not fit in usize.
pub fn binomial(n: usize, k: usize) -> usize {
    binomial_checked(n, k).expect("binomial coefficient overflows usize")
}

/// Uniformity r and factor size n of a complete r-uniform hypergraph on r*n
/// vertices. r = 2 is the ordinary complete graph on 2n vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    r: usize,
    n: usize,
    vertex_count: usize,
    edge_count: usize,
}

impl Params {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParams(format!("uniformity r must be at least 2, got {r}")));
        }
        if n < 1 {
            return Err(Error::InvalidParams(format!("factor size n must be at least 1, got {n}")));
        }
        let vertex_count = r
            .checked_mul(n)
            .ok_or_else(|| Error::Capacity("vertex count overflows".into()))?;
        let edge_count = binomial_checked(vertex_count, r)
            .filter(|&e| e <= MAX_EDGE_COUNT)
            .ok_or_else(|| {
                Error::Capacity(format!("edge count of K_{{{vertex_count}}}^({r}) exceeds the supported maximum"))
            })?;
        Ok(Params { r, n, vertex_count, edge_count })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }
}

/// Colexicographic order on strictly increasing tuples: compare the largest
/// elements first. Agrees with rank order.
pub fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// A strictly increasing r-tuple of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge(Vec<usize>);

impl Edge {
    pub fn new(params: &Params, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() != params.r() {
            return Err(Error::InvalidEdge(format!(
                "expected {} vertices, got {}",
                params.r(),
                vertices.len()
            )));
        }
        for w in vertices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidEdge(format!(
                    "vertices must be strictly increasing, got {vertices:?}"
                )));
            }
        }
        if let Some(&last) = vertices.last() {
            if last >= params.vertex_count() {
                return Err(Error::InvalidEdge(format!(
                    "vertex {last} out of range 0..{}",
                    params.vertex_count()
                )));
            }
        }
        Ok(Edge(vertices))
    }

    pub fn from_unsorted(params: &Params, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(params, vertices)
    }

    /// Two-vertex edge, for r = 2 call sites.
    pub fn pair(u: usize, v: usize) -> Self {
        debug_assert_ne!(u, v);
        Edge(vec![u.min(v), u.max(v)])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        // both sides sorted, merge scan
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }
}

impl serde::Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vertices = Vec::<usize>::deserialize(deserializer)?;
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom(format!(
                "edge vertices must be strictly increasing and non-empty, got {vertices:?}"
            )));
        }
        Ok(Edge(vertices))
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        colex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Colexicographic rank of a strictly increasing vertex tuple.
pub fn rank_vertices(vertices: &[usize]) -> usize {
    debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v, i + 1))
        .sum()
}

/// Colexicographic rank of an edge: sum of C(v_i, i+1) over positions i.
pub fn rank_edge(edge: &Edge) -> usize {
    rank_vertices(edge.vertices())
}

/// Rank of the pair {u, v} without building an Edge.
#[inline]
pub fn pair_rank(u: usize, v: usize) -> usize {
    debug_assert_ne!(u, v);
    let (lo, hi) = (u.min(v), u.max(v));
    hi * (hi - 1) / 2 + lo
}

/// Inverse of rank_edge for the given parameters.
pub fn unrank_edge(params: &Params, rank: usize) -> Result<Edge> {
    if rank >= params.edge_count() {
        return Err(Error::InvalidEdge(format!(
            "rank {rank} out of range 0..{}",
            params.edge_count()
        )));
    }
    let r = params.r();
    let mut rem = rank;
    let mut vertices = vec![0usize; r];
    let mut upper = params.vertex_count();
    for i in (1..=r).rev() {
        // largest v in [i-1, upper) with C(v, i) <= rem
        let (mut lo, mut hi) = (i - 1, upper - 1);
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if binomial(mid, i) <= rem {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        vertices[i - 1] = lo;
        rem -= binomial(lo, i);
        upper = lo;
    }
    debug_assert_eq!(rem, 0);
    Edge::new(params, vertices)
}

/// Visits every edge in colexicographic order as (rank, vertices), without
/// allocating per edge.
pub fn for_each_edge(params: &Params, mut f: impl FnMut(usize, &[usize])) {
    let r = params.r();
    let vc = params.vertex_count();
    let mut v: Vec<usize> = (0..r).collect();
    let mut rank = 0usize;
    loop {
        f(rank, &v);
        rank += 1;
        let mut i = 0;
        loop {
            if i == r {
                debug_assert_eq!(rank, params.edge_count());
                return;
            }
            let limit = if i + 1 < r { v[i + 1] } else { vc };
            if v[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        v[i] += 1;
        for (j, slot) in v.iter_mut().enumerate().take(i) {
            *slot = j;
        }
    }
}

/// Iterator over all edges in colexicographic order.
pub fn all_edges(params: &Params) -> impl Iterator<Item = Edge> + '_ {
    let params = *params;
    (0..params.edge_count()).map(move |rank| unrank_edge(&params, rank).expect("rank in range"))
}

/// Vertex occupancy bitmask over 0..capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet { words: vec![0; capacity.div_ceil(64)], len: 0 }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns false if v was already present.
    pub fn insert(&mut self, v: usize) -> bool {
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.len += 1;
        true
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            return false;
        }
        *w &= !bit;
        self.len -= 1;
        true
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
        self.len = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_disjoint_from(&self, vertices: &[usize]) -> bool {
        vertices.iter().all(|&v| !self.contains(v))
    }

    pub fn insert_all(&mut self, vertices: &[usize]) {
        for &v in vertices {
            let inserted = self.insert(v);
            debug_assert!(inserted);
        }
    }

    pub fn remove_all(&mut self, vertices: &[usize]) {
        for &v in vertices {
            let removed = self.remove(v);
            debug_assert!(removed);
        }
    }
}

/// Standalone properness check: same-colored edges must be pairwise
/// vertex-disjoint. Reports the scan-first violating pair, minimal by
/// (second rank, first rank, shared vertex).
pub fn verify_proper(params: &Params, colors: &[u32]) -> Result<()> {
    if colors.len() != params.edge_count() {
        return Err(Error::ColorLengthMismatch {
            got: colors.len(),
            expected: params.edge_count(),
        });
    }
    debug_assert!(params.edge_count() <= u32::MAX as usize);
    // Properness is per vertex: no two incident edges may repeat a color.
    let mut per_vertex: Vec<Vec<u64>> = vec![Vec::new(); params.vertex_count()];
    for_each_edge(params, |rank, vertices| {
        let packed = (colors[rank] as u64) << 32 | rank as u64;
        for &v in vertices {
            per_vertex[v].push(packed);
        }
    });
    let mut best: Option<PropernessWitness> = None;
    for (v, list) in per_vertex.iter_mut().enumerate() {
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] >> 32 == w[1] >> 32 {
                let cand = PropernessWitness {
                    first_rank: (w[0] & 0xffff_ffff) as usize,
                    second_rank: (w[1] & 0xffff_ffff) as usize,
                    vertex: v,
                    color: (w[0] >> 32) as u32,
                };
                let key = (cand.second_rank, cand.first_rank, cand.vertex);
                if best
                    .as_ref()
                    .map(|b| key < (b.second_rank, b.first_rank, b.vertex))
                    .unwrap_or(true)
                {
                    best = Some(cand);
                }
            }
        }
    }
    match best {
        Some(w) => Err(Error::NotProper(w)),
        None => Ok(()),
    }
}

/// A proper edge coloring: a total color assignment in which every color
/// class is a set of pairwise disjoint edges. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperColoring {
    params: Params,
    colors: Vec<u32>,
    palette: Vec<u32>,
}

impl ProperColoring {
    /// Validates length and properness.
    pub fn new(params: Params, colors: Vec<u32>) -> Result<Self> {
        verify_proper(&params, &colors)?;
        let mut palette = colors.clone();
        palette.sort_unstable();
        palette.dedup();
        Ok(ProperColoring { params, colors, palette })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Distinct color ids in ascending order.
    pub fn palette(&self) -> &[u32] {
        &self.palette
    }

    pub fn color_count(&self) -> usize {
        self.palette.len()
    }

    pub fn color_at_rank(&self, rank: usize) -> u32 {
        self.colors[rank]
    }

    pub fn color_of(&self, edge: &Edge) -> u32 {
        self.colors[rank_edge(edge)]
    }

    /// Color of the pair {u, v}; r = 2 only.
    #[inline]
    pub fn pair_color(&self, u: usize, v: usize) -> u32 {
        debug_assert_eq!(self.params.r(), 2);
        self.colors[pair_rank(u, v)]
    }

    /// All edges carrying the given color, in colexicographic order.
    pub fn class_edges(&self, color: u32) -> Vec<Edge> {
        let mut out = Vec::new();
        for_each_edge(&self.params, |rank, vertices| {
            if self.colors[rank] == color {
                out.push(Edge(vertices.to_vec()));
            }
        });
        out
    }

    /// Applies a vertex relabeling: edge e of the result carries the color
    /// the preimage of e carries here. Properness is permutation-invariant.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let vc = self.params.vertex_count();
        if perm.len() != vc {
            return Err(Error::InvalidParams(format!(
                "permutation length {} does not match vertex count {vc}",
                perm.len()
            )));
        }
        let mut seen = vec![false; vc];
        for &img in perm {
            if img >= vc || seen[img] {
                return Err(Error::InvalidParams(
                    "relabeling is not a permutation of the vertices".into(),
                ));
            }
            seen[img] = true;
        }
        let mut colors = vec![0u32; self.colors.len()];
        let mut image = vec![0usize; self.params.r()];
        for_each_edge(&self.params, |rank, vertices| {
            for (slot, &v) in image.iter_mut().zip(vertices) {
                *slot = perm[v];
            }
            image.sort_unstable();
            colors[rank_vertices(&image)] = self.colors[rank];
        });
        ProperColoring::new(self.params, colors)
    }

    /// Remaps color ids to 0..color_count in order of first occurrence by
    /// rank. Returns the remapped coloring and the dense-to-original table.
    pub fn normalize(&self) -> (Self, Vec<u32>) {
        let mut map = std::collections::HashMap::new();
        let mut to_original = Vec::with_capacity(self.palette.len());
        let mut dense = Vec::with_capacity(self.colors.len());
        for &c in &self.colors {
            let next = to_original.len() as u32;
            let id = *map.entry(c).or_insert_with(|| {
                to_original.push(c);
                next
            });
            dense.push(id);
        }
        let palette: Vec<u32> = (0..to_original.len() as u32).collect();
        (
            ProperColoring { params: self.params, colors: dense, palette },
            to_original,
        )
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone)]
pub struct Matching {
    params: Params,
    edges: Vec<Edge>,
    occupied: VertexSet,
}

impl Matching {
    pub fn empty(params: Params) -> Self {
        let occupied = VertexSet::new(params.vertex_count());
        Matching { params, edges: Vec::new(), occupied }
    }

    pub fn new(params: Params, edges: Vec<Edge>) -> Result<Self> {
        let mut m = Matching::empty(params);
        for e in edges {
            if !m.try_push(e.clone()) {
                return Err(Error::Precondition(format!(
                    "edges are not pairwise disjoint at {:?}",
                    e.vertices()
                )));
            }
        }
        Ok(m)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn covers(&self, v: usize) -> bool {
        self.occupied.contains(v)
    }

    pub fn occupied(&self) -> &VertexSet {
        &self.occupied
    }

    pub fn can_add(&self, edge: &Edge) -> bool {
        self.occupied.is_disjoint_from(edge.vertices())
    }

    /// Adds the edge if it is disjoint from the matching, else returns false.
    pub fn try_push(&mut self, edge: Edge) -> bool {
        if !self.can_add(&edge) {
            return false;
        }
        self.occupied.insert_all(edge.vertices());
        self.edges.push(edge);
        true
    }

    pub fn remove_at(&mut self, index: usize) -> Edge {
        let e = self.edges.swap_remove(index);
        self.occupied.remove_all(e.vertices());
        e
    }

    /// Colors the matching uses under the given coloring, ascending.
    pub fn used_colors(&self, coloring: &ProperColoring) -> BTreeSet<u32> {
        self.edges.iter().map(|e| coloring.color_of(e)).collect()
    }

    /// Palette colors the matching does not use, ascending.
    pub fn missing_colors(&self, coloring: &ProperColoring) -> BTreeSet<u32> {
        let used = self.used_colors(coloring);
        coloring
            .palette()
            .iter()
            .copied()
            .filter(|c| !used.contains(c))
            .collect()
    }

    pub fn is_rainbow_under(&self, coloring: &ProperColoring) -> bool {
        is_rainbow(coloring, &self.edges)
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }
}

/// True iff the edges use pairwise distinct colors.
pub fn is_rainbow(coloring: &ProperColoring, edges: &[Edge]) -> bool {
    let mut seen: Vec<u32> = edges.iter().map(|e| coloring.color_of(e)).collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// True iff the edges form a perfect matching: n of them, pairwise disjoint,
/// covering every vertex.
pub fn verify_one_factor(params: &Params, edges: &[Edge]) -> bool {
    if edges.len() != params.n() {
        return false;
    }
    let mut occupied = VertexSet::new(params.vertex_count());
    for e in edges {
        for &v in e.vertices() {
            if !occupied.insert(v) {
                return false;
            }
        }
    }
    occupied.len() == params.vertex_count()
}

/// A perfect matching: n pairwise disjoint edges covering every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFactor {
    params: Params,
    edges: Vec<Edge>,
}

impl OneFactor {
    pub fn new(params: Params, mut edges: Vec<Edge>) -> Result<Self> {
        if !verify_one_factor(&params, &edges) {
            return Err(Error::Precondition(
                "edges do not form a perfect matching".into(),
            ));
        }
        edges.sort();
        Ok(OneFactor { params, edges })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Edges in colexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn colors_under(&self, coloring: &ProperColoring) -> Vec<u32> {
        self.edges.iter().map(|e| coloring.color_of(e)).collect()
    }

    pub fn is_rainbow_under(&self, coloring: &ProperColoring) -> bool {
        is_rainbow(coloring, &self.edges)
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(r: usize, n: usize) -> Params {
        Params::new(r, n).unwrap()
    }

    fn edge(params: &Params, vs: &[usize]) -> Edge {
        Edge::new(params, vs.to_vec()).unwrap()
    }

    #[test]
    fn binomial_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(12, 4), 495);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(2000, 2), 1_999_000);
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(1, 3).is_err());
        assert!(Params::new(2, 0).is_err());
        let k6 = p(2, 3);
        assert_eq!(k6.vertex_count(), 6);
        assert_eq!(k6.edge_count(), 15);
        let k9 = p(3, 3);
        assert_eq!(k9.edge_count(), 84);
    }

    #[test]
    fn rank_examples() {
        let k6 = p(2, 3);
        assert_eq!(rank_edge(&edge(&k6, &[0, 1])), 0);
        let k4 = p(2, 2);
        assert_eq!(rank_edge(&edge(&k4, &[2, 3])), 5);
        let k9 = p(3, 3);
        assert_eq!(rank_edge(&edge(&k9, &[0, 1, 3])), 1);
        assert_eq!(pair_rank(3, 2), 5);
        assert_eq!(pair_rank(0, 1), 0);
    }

    #[test]
    fn unrank_inverts_rank_everywhere() {
        // bijection over the full range for every shape with at most 15 vertices
        for (r, n) in [(2, 2), (2, 3), (2, 7), (3, 3), (3, 5), (4, 3), (5, 3), (7, 2)] {
            let params = p(r, n);
            for rank in 0..params.edge_count() {
                let e = unrank_edge(&params, rank).unwrap();
                assert_eq!(rank_edge(&e), rank, "params ({r},{n}) rank {rank}");
            }
        }
    }

    #[test]
    fn unrank_rejects_out_of_range() {
        let k6 = p(2, 3);
        assert!(unrank_edge(&k6, 15).is_err());
    }

    #[test]
    fn edge_iteration_matches_unrank() {
        for (r, n) in [(2, 3), (3, 3), (4, 3)] {
            let params = p(r, n);
            let mut count = 0;
            for_each_edge(&params, |rank, vertices| {
                assert_eq!(rank, count);
                let e = unrank_edge(&params, rank).unwrap();
                assert_eq!(e.vertices(), vertices);
                count += 1;
            });
            assert_eq!(count, params.edge_count());
        }
    }

    #[test]
    fn edge_validation() {
        let k9 = p(3, 3);
        assert!(Edge::new(&k9, vec![0, 1]).is_err());
        assert!(Edge::new(&k9, vec![1, 1, 2]).is_err());
        assert!(Edge::new(&k9, vec![2, 1, 0]).is_err());
        assert!(Edge::new(&k9, vec![0, 1, 9]).is_err());
        assert!(Edge::from_unsorted(&k9, vec![5, 0, 3]).is_ok());
        assert!(Edge::from_unsorted(&k9, vec![5, 0, 5]).is_err());
    }

    #[test]
    fn disjointness() {
        let k9 = p(3, 3);
        let a = edge(&k9, &[0, 1, 2]);
        let b = edge(&k9, &[3, 4, 5]);
        let c = edge(&k9, &[2, 4, 8]);
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&c));
        assert!(!b.is_disjoint(&c));
    }

    /// Ranks 0..E of K_4 colored [0,1,2,2,1,0]: each complementary pair of
    /// pairs shares a color.
    fn k4_pattern() -> ProperColoring {
        ProperColoring::new(p(2, 2), vec![0, 1, 2, 2, 1, 0]).unwrap()
    }

    #[test]
    fn verify_proper_accepts_and_rejects() {
        let k6 = p(2, 3);
        let distinct: Vec<u32> = (0..15).collect();
        assert!(verify_proper(&k6, &distinct).is_ok());

        // edges {0,1} and {0,2} share vertex 0
        let mut bad = distinct.clone();
        bad[1] = bad[0];
        match verify_proper(&k6, &bad) {
            Err(Error::NotProper(w)) => {
                assert_eq!(w.first_rank, 0);
                assert_eq!(w.second_rank, 1);
                assert_eq!(w.vertex, 0);
                assert_eq!(w.color, bad[0]);
            }
            other => panic!("expected properness witness, got {other:?}"),
        }

        match verify_proper(&k6, &distinct[..10]) {
            Err(Error::ColorLengthMismatch { got: 10, expected: 15 }) => {}
            other => panic!("expected length mismatch, got {other:?}"),
        }

        assert!(verify_proper(&p(2, 2), k4_pattern().colors()).is_ok());
    }

    /// Reference properness check: scan edge pairs in (second, first) order.
    fn brute_force_proper(params: &Params, colors: &[u32]) -> Option<PropernessWitness> {
        let edges: Vec<Edge> = all_edges(params).collect();
        for second in 0..edges.len() {
            for first in 0..second {
                if colors[first] != colors[second] {
                    continue;
                }
                let shared = edges[first]
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&v| edges[second].contains(v))
                    .min();
                if let Some(vertex) = shared {
                    return Some(PropernessWitness {
                        first_rank: first,
                        second_rank: second,
                        vertex,
                        color: colors[first],
                    });
                }
            }
        }
        None
    }

    proptest! {
        /// Property: the vertex-indexed properness check agrees with the
        /// pairwise brute force, witness included.
        #[test]
        fn properness_matches_brute_force(
            r in 2usize..=3,
            n in 1usize..=3,
            seed_colors in proptest::collection::vec(0u32..6, 0..=84),
        ) {
            let params = p(r, n);
            let e = params.edge_count();
            let mut colors = seed_colors;
            colors.resize(e, 0);
            let got = verify_proper(&params, &colors);
            match (got, brute_force_proper(&params, &colors)) {
                (Ok(()), None) => {}
                (Err(Error::NotProper(w)), Some(expect)) => prop_assert_eq!(w, expect),
                (got, expect) => prop_assert!(false, "mismatch: {:?} vs {:?}", got, expect),
            }
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        /// Property: rank order agrees with colexicographic comparison.
        #[test]
        fn rank_respects_colex_order(
            pair in (2usize..=4, 2usize..=4).prop_flat_map(|(r, n)| {
                let e = binomial(r * n, r);
                ((Just(r), Just(n)), 0..e, 0..e)
            })
        ) {
            let ((r, n), i, j) = pair;
            let params = p(r, n);
            let a = unrank_edge(&params, i).unwrap();
            let b = unrank_edge(&params, j).unwrap();
            prop_assert_eq!(i.cmp(&j), colex_cmp(a.vertices(), b.vertices()));
            prop_assert_eq!(i.cmp(&j), a.cmp(&b));
        }
    }

    #[test]
    fn one_factor_verification() {
        let k9 = p(3, 3);
        let good = vec![
            edge(&k9, &[3, 4, 6]),
            edge(&k9, &[0, 7, 8]),
            edge(&k9, &[1, 2, 5]),
        ];
        assert!(verify_one_factor(&k9, &good));

        let wrong_count = vec![edge(&k9, &[0, 1, 2])];
        assert!(!verify_one_factor(&k9, &wrong_count));

        let overlapping = vec![
            edge(&k9, &[0, 1, 2]),
            edge(&k9, &[2, 3, 4]),
            edge(&k9, &[5, 6, 7]),
        ];
        assert!(!verify_one_factor(&k9, &overlapping));

        let factor = OneFactor::new(k9, good).unwrap();
        // stored in colexicographic order
        assert_eq!(factor.edges()[0].vertices(), &[1, 2, 5]);
    }

    #[test]
    fn rainbow_check() {
        let coloring = k4_pattern();
        let params = *coloring.params();
        let pair_01 = edge(&params, &[0, 1]);
        let pair_23 = edge(&params, &[2, 3]);
        let pair_02 = edge(&params, &[0, 2]);
        assert!(is_rainbow(&coloring, &[pair_01.clone()]));
        assert!(is_rainbow(&coloring, &[pair_01.clone(), pair_02]));
        // complementary pairs share a color in this pattern
        assert!(!is_rainbow(&coloring, &[pair_01, pair_23]));
    }

    #[test]
    fn matching_bookkeeping() {
        let coloring = k4_pattern();
        let params = *coloring.params();
        let mut m = Matching::empty(params);
        assert!(m.try_push(edge(&params, &[0, 1])));
        assert!(!m.try_push(edge(&params, &[0, 2])));
        assert!(m.try_push(edge(&params, &[2, 3])));
        assert_eq!(m.len(), 2);
        assert!(m.covers(3));

        let used: Vec<u32> = m.used_colors(&coloring).into_iter().collect();
        assert_eq!(used, vec![0]);
        let missing: Vec<u32> = m.missing_colors(&coloring).into_iter().collect();
        assert_eq!(missing, vec![1, 2]);
        assert!(!m.is_rainbow_under(&coloring));

        assert!(Matching::new(
            params,
            vec![edge(&params, &[0, 1]), edge(&params, &[1, 2])]
        )
        .is_err());
    }

    #[test]
    fn normalization_is_first_occurrence_order() {
        let k6 = p(2, 3);
        let colors: Vec<u32> = vec![7, 9, 4, 4, 9, 7, 10, 11, 12, 13, 14, 15, 16, 17, 18];
        let c = ProperColoring::new(k6, colors).unwrap();
        let (dense, back) = c.normalize();
        assert_eq!(&dense.colors()[..6], &[0, 1, 2, 2, 1, 0]);
        assert_eq!(back[0], 7);
        assert_eq!(back[1], 9);
        assert_eq!(back[2], 4);
        assert_eq!(dense.color_count(), c.color_count());
    }

    #[test]
    fn permutation_relabels_vertices() {
        let coloring = k4_pattern();
        // swap vertices 1 and 2: {0,1}<->{0,2} and {1,3}<->{2,3} trade colors
        let relabeled = coloring.permuted(&[0, 2, 1, 3]).unwrap();
        assert_eq!(relabeled.colors(), &[1, 0, 2, 2, 0, 1]);
        assert_eq!(relabeled.permuted(&[0, 2, 1, 3]).unwrap(), coloring);
        assert!(coloring.permuted(&[0, 1, 2]).is_err());
        assert!(coloring.permuted(&[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn edge_serde_round_trip() {
        let k9 = p(3, 3);
        let e = edge(&k9, &[3, 4, 6]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, "[3,4,6]");
        let back: Edge = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<Edge>("[4,3,6]").is_err());
        assert!(serde_json::from_str::<Edge>("[]").is_err());
    }

    #[test]
    fn vertex_set_operations() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(0));
        assert_eq!(s.len(), 2);
        assert!(s.contains(129));
        assert!(!s.contains(64));
        assert!(s.is_disjoint_from(&[1, 2, 64]));
        assert!(!s.is_disjoint_from(&[2, 129]));
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.len(), 1);
        s.clear();
        assert!(s.is_empty());
    }
}

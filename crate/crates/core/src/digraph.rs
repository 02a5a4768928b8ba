//! Core digraph representations: explicit finite digraphs with optional
//! level labels, and tile-based periodic digraphs repeated along the
//! integer line. All analyses in this crate run on [`FiniteDigraph`]
//! windows cut from a [`PeriodicDigraph`] or built directly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Arc identifier: index into the sorted arc list of a [`FiniteDigraph`].
pub type ArcId = u32;

/// A finite loopless digraph over dense vertex indices `0..n`.
///
/// Arcs are stored lexicographically sorted without duplicates, so every
/// arc has a stable [`ArcId`]. Out- and in-adjacency indices are built once
/// at construction; the value is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDigraph {
    n: usize,
    arcs: Vec<(u32, u32)>,
    level: Option<Vec<i64>>,
    core: Option<Vec<bool>>,
    labels: Option<Vec<String>>,
    /// Prefix offsets into `arcs` grouped by tail (arcs are tail-sorted).
    out_start: Vec<usize>,
    /// Arc ids grouped by head, plus prefix offsets.
    in_arcs: Vec<ArcId>,
    in_start: Vec<usize>,
}

impl FiniteDigraph {
    /// Builds a digraph from an arc list. Duplicates collapse (the arc list
    /// is a set); loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, arcs: Vec<(u32, u32)>) -> Result<Self> {
        Self::build(n, arcs, None, None, None)
    }

    /// Builds a digraph whose vertices carry integer levels. Every arc must
    /// step one level up: `level(v) = level(u) + 1`.
    pub fn with_levels(n: usize, arcs: Vec<(u32, u32)>, level: Vec<i64>) -> Result<Self> {
        Self::build(n, arcs, Some(level), None, None)
    }

    pub(crate) fn build(
        n: usize,
        mut arcs: Vec<(u32, u32)>,
        level: Option<Vec<i64>>,
        core: Option<Vec<bool>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        for &(u, v) in &arcs {
            if u == v {
                return Err(Error::LoopArc { u, v });
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::ArcOutOfRange { u, v, n });
            }
        }
        if let Some(level) = &level {
            if level.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "level table has {} entries for {} vertices",
                    level.len(),
                    n
                )));
            }
            for &(u, v) in &arcs {
                let expected = level[u as usize] + 1;
                if level[v as usize] != expected {
                    return Err(Error::LevelMismatch {
                        u,
                        v,
                        head_level: level[v as usize],
                        expected,
                    });
                }
            }
        }
        if let Some(core) = &core {
            debug_assert_eq!(core.len(), n);
        }
        if let Some(labels) = &labels {
            debug_assert_eq!(labels.len(), n);
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut out_start = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            out_start[u as usize + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
        }

        let mut in_count = vec![0usize; n];
        for &(_, v) in &arcs {
            in_count[v as usize] += 1;
        }
        let mut in_start = vec![0usize; n + 1];
        for i in 0..n {
            in_start[i + 1] = in_start[i] + in_count[i];
        }
        let mut in_arcs = vec![0 as ArcId; arcs.len()];
        let mut cursor = in_start.clone();
        for (id, &(_, v)) in arcs.iter().enumerate() {
            in_arcs[cursor[v as usize]] = id as ArcId;
            cursor[v as usize] += 1;
        }

        Ok(Self {
            n,
            arcs,
            level,
            core,
            labels,
            out_start,
            in_arcs,
            in_start,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> (u32, u32) {
        self.arcs[id as usize]
    }

    /// Arc ids with tail `u`, in head order.
    pub fn out_arc_ids(&self, u: u32) -> impl Iterator<Item = ArcId> + '_ {
        (self.out_start[u as usize]..self.out_start[u as usize + 1]).map(|i| i as ArcId)
    }

    /// Arc ids with head `v`, in tail order.
    pub fn in_arc_ids(&self, v: u32) -> impl Iterator<Item = ArcId> + '_ {
        self.in_arcs[self.in_start[v as usize]..self.in_start[v as usize + 1]]
            .iter()
            .copied()
    }

    pub fn out_neighbors(&self, u: u32) -> impl Iterator<Item = u32> + '_ {
        self.arcs[self.out_start[u as usize]..self.out_start[u as usize + 1]]
            .iter()
            .map(|&(_, v)| v)
    }

    pub fn in_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.in_arc_ids(v).map(|id| self.arcs[id as usize].0)
    }

    pub fn out_degree(&self, u: u32) -> usize {
        self.out_start[u as usize + 1] - self.out_start[u as usize]
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.in_start[v as usize + 1] - self.in_start[v as usize]
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.arc_id(u, v).is_some()
    }

    pub fn arc_id(&self, u: u32, v: u32) -> Option<ArcId> {
        let range = self.out_start[u as usize]..self.out_start[u as usize + 1];
        let slice = &self.arcs[range.clone()];
        slice
            .binary_search(&(u, v))
            .ok()
            .map(|i| (range.start + i) as ArcId)
    }

    pub fn levels(&self) -> Option<&[i64]> {
        self.level.as_deref()
    }

    pub fn level_of(&self, v: u32) -> Option<i64> {
        self.level.as_ref().map(|l| l[v as usize])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label_of(&self, v: u32) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v as usize].as_str())
    }

    /// True when the digraph carries a core flag and `v` is in the core.
    pub fn is_core(&self, v: u32) -> bool {
        self.core.as_ref().is_some_and(|c| c[v as usize])
    }

    pub fn has_core(&self) -> bool {
        self.core.is_some()
    }

    pub fn core_vertices(&self) -> Vec<u32> {
        match &self.core {
            Some(core) => (0..self.n as u32).filter(|&v| core[v as usize]).collect(),
            None => Vec::new(),
        }
    }

    /// Returns a copy with the given core flags attached.
    pub fn with_core_flags(mut self, core: Vec<bool>) -> Result<Self> {
        if core.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "core table has {} entries for {} vertices",
                core.len(),
                self.n
            )));
        }
        self.core = Some(core);
        Ok(self)
    }

    /// Returns a copy whose core is every vertex. Useful for small graphs
    /// built directly rather than as truncation windows.
    pub fn with_full_core(self) -> Self {
        let n = self.n;
        self.with_core_flags(vec![true; n]).expect("length matches")
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
    }

    /// The subgraph induced by an arc subset: vertices re-indexed densely,
    /// keeping levels, labels and core flags of the surviving vertices.
    pub fn arc_induced_subgraph(&self, arc_ids: &[ArcId]) -> FiniteDigraph {
        let mut keep: Vec<u32> = arc_ids
            .iter()
            .flat_map(|&id| {
                let (u, v) = self.arcs[id as usize];
                [u, v]
            })
            .collect();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old as usize] = new as u32;
        }
        let arcs = arc_ids
            .iter()
            .map(|&id| {
                let (u, v) = self.arcs[id as usize];
                (index[u as usize], index[v as usize])
            })
            .collect();
        FiniteDigraph::build(
            keep.len(),
            arcs,
            self.level
                .as_ref()
                .map(|l| keep.iter().map(|&v| l[v as usize]).collect()),
            self.core
                .as_ref()
                .map(|c| keep.iter().map(|&v| c[v as usize]).collect()),
            self.labels
                .as_ref()
                .map(|l| keep.iter().map(|&v| l[v as usize].clone()).collect()),
        )
        .expect("subgraph of a valid digraph is valid")
    }

    /// The subgraph induced by a vertex subset (all arcs among them).
    pub fn vertex_induced_subgraph(&self, vertices: &[u32]) -> FiniteDigraph {
        let mut keep = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old as usize] = new as u32;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(u, v)| index[u as usize] != u32::MAX && index[v as usize] != u32::MAX)
            .map(|&(u, v)| (index[u as usize], index[v as usize]))
            .collect();
        FiniteDigraph::build(
            keep.len(),
            arcs,
            self.level
                .as_ref()
                .map(|l| keep.iter().map(|&v| l[v as usize]).collect()),
            self.core
                .as_ref()
                .map(|c| keep.iter().map(|&v| c[v as usize]).collect()),
            self.labels
                .as_ref()
                .map(|l| keep.iter().map(|&v| l[v as usize].clone()).collect()),
        )
        .expect("subgraph of a valid digraph is valid")
    }
}

/// A two-ended periodic digraph given by one level of size `m` and a tile
/// arc relation: tile arc `(u, v)` stands for the arc `(i, u) -> (i+1, v)`
/// at every integer level `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicDigraph {
    m: usize,
    tile_arcs: Vec<(u32, u32)>,
    labels: Option<Vec<String>>,
}

impl PeriodicDigraph {
    /// Validates two-endedness: the tile is nonempty and every index has at
    /// least one out- and one in-arc.
    pub fn new(m: usize, mut tile_arcs: Vec<(u32, u32)>) -> Result<Self> {
        if tile_arcs.is_empty() {
            return Err(Error::EmptyTile);
        }
        for &(u, v) in &tile_arcs {
            if u as usize >= m || v as usize >= m {
                return Err(Error::ArcOutOfRange { u, v, n: m });
            }
        }
        tile_arcs.sort_unstable();
        tile_arcs.dedup();
        let mut out = vec![false; m];
        let mut inn = vec![false; m];
        for &(u, v) in &tile_arcs {
            out[u as usize] = true;
            inn[v as usize] = true;
        }
        for i in 0..m {
            if !out[i] {
                return Err(Error::TileDegreeZero {
                    index: i as u32,
                    direction: "out",
                });
            }
            if !inn[i] {
                return Err(Error::TileDegreeZero {
                    index: i as u32,
                    direction: "in",
                });
            }
        }
        Ok(Self {
            m,
            tile_arcs,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "label table has {} entries for level size {}",
                labels.len(),
                self.m
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Level size `m`.
    pub fn level_size(&self) -> usize {
        self.m
    }

    pub fn tile_arcs(&self) -> &[(u32, u32)] {
        &self.tile_arcs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// Per-vertex in/out degrees plus a multiplicity summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub per_vertex: Vec<(usize, usize)>,
    /// Distinct `(in, out)` pairs with their multiplicities.
    pub summary: BTreeMap<(usize, usize), usize>,
}

impl DegreeProfile {
    /// The single `(in, out)` pair shared by all vertices in `subset`, if
    /// there is one.
    pub fn uniform_over(&self, subset: &[u32]) -> Option<(usize, usize)> {
        let mut it = subset.iter().map(|&v| self.per_vertex[v as usize]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// Exact in/out degree counts for every vertex.
pub fn degree_profile(g: &FiniteDigraph) -> DegreeProfile {
    let per_vertex: Vec<(usize, usize)> = (0..g.vertex_count() as u32)
        .map(|v| (g.in_degree(v), g.out_degree(v)))
        .collect();
    let mut summary = BTreeMap::new();
    for &d in &per_vertex {
        *summary.entry(d).or_insert(0) += 1;
    }
    DegreeProfile { per_vertex, summary }
}

/// The finite slice of a periodic digraph covering levels `lo..=hi`, with
/// level labels set and the default core margin of one level.
pub fn window(p: &PeriodicDigraph, lo: i64, hi: i64) -> Result<FiniteDigraph> {
    window_with_margin(p, lo, hi, 1)
}

/// As [`window`], with an explicit core margin: core vertices are those
/// whose level lies in `lo+margin ..= hi-margin`. Boundary vertices have
/// truncated degrees, so degree and transitivity assertions must restrict
/// to the core.
pub fn window_with_margin(
    p: &PeriodicDigraph,
    lo: i64,
    hi: i64,
    margin: i64,
) -> Result<FiniteDigraph> {
    if lo > hi {
        return Err(Error::WindowBounds { lo, hi });
    }
    let m = p.level_size();
    let span = (hi - lo + 1) as usize;
    let n = span * m;
    let vid = |offset: usize, idx: u32| (offset * m) as u32 + idx;

    let mut arcs = Vec::with_capacity(span.saturating_sub(1) * p.tile_arcs().len());
    for offset in 0..span.saturating_sub(1) {
        for &(u, v) in p.tile_arcs() {
            arcs.push((vid(offset, u), vid(offset + 1, v)));
        }
    }

    let mut level = Vec::with_capacity(n);
    let mut core = Vec::with_capacity(n);
    for offset in 0..span {
        let l = lo + offset as i64;
        let in_core = l >= lo + margin && l <= hi - margin;
        for _ in 0..m {
            level.push(l);
            core.push(in_core);
        }
    }

    let labels = p.labels().map(|tile_labels| {
        (0..span)
            .flat_map(|_| tile_labels.iter().cloned())
            .collect()
    });

    FiniteDigraph::build(n, arcs, Some(level), Some(core), labels)
}

/// The bipartite tile between two consecutive levels: `window(p, 0, 1)`.
pub fn tile(p: &PeriodicDigraph) -> FiniteDigraph {
    window(p, 0, 1).expect("0 <= 1")
}

/// Connected components of the underlying undirected graph, as sorted
/// blocks ordered by their minimum vertex.
pub fn underlying_components(g: &FiniteDigraph) -> Vec<Vec<u32>> {
    let mut uf = UnionFind::new(g.vertex_count());
    for &(u, v) in g.arcs() {
        uf.union(u as usize, v as usize);
    }
    uf.blocks()
        .into_iter()
        .map(|b| b.into_iter().map(|v| v as u32).collect())
        .collect()
}

/// Union-find over `0..n` with union by size and path halving.
#[derive(Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Blocks sorted by minimum element; each block sorted.
    pub fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut root_min = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            root_min[r] = root_min[r].min(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        blocks
    }
}

//! Builders for the digraph families under study: the tensor product of
//! the bi-infinite directed path with an edgeless graph, the tree-edge
//! digraph over a truncated biregular tree, the suffix-shift tuple
//! digraph, leveled-template tuple products (plain and edge-coloured),
//! and the explicit connecting path witnessing product connectivity.

use serde::{Deserialize, Serialize};

use crate::digraph::{ArcId, FiniteDigraph, PeriodicDigraph};
use crate::error::{Error, Result};

/// A leveled template: vertices in levels `A_1..A_t` (`t >= 2`), arcs only
/// from one level to the next, optionally edge-coloured.
///
/// Every vertex outside the first level has in-degree at least one and
/// every vertex outside the last level has out-degree at least one, so the
/// tuple product of the template is two-ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledTemplate {
    level_sizes: Vec<usize>,
    /// `(level, src, dst)` with 0-based `level`: arc from vertex `src` of
    /// level `level` to vertex `dst` of level `level + 1`.
    arcs: Vec<(usize, usize, usize)>,
    colours: Option<Vec<u32>>,
}

impl LeveledTemplate {
    pub fn new(level_sizes: Vec<usize>, arcs: Vec<(usize, usize, usize)>) -> Result<Self> {
        Self::build(level_sizes, arcs, None)
    }

    pub fn with_colours(
        level_sizes: Vec<usize>,
        arcs: Vec<(usize, usize, usize)>,
        colours: Vec<u32>,
    ) -> Result<Self> {
        Self::build(level_sizes, arcs, Some(colours))
    }

    fn build(
        level_sizes: Vec<usize>,
        mut arcs: Vec<(usize, usize, usize)>,
        colours: Option<Vec<u32>>,
    ) -> Result<Self> {
        let t = level_sizes.len();
        if t < 2 {
            return Err(Error::InvalidTemplate(format!(
                "need at least 2 levels, got {t}"
            )));
        }
        if let Some(zero) = level_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidTemplate(format!("level {zero} is empty")));
        }
        for &(level, src, dst) in &arcs {
            if level + 1 >= t {
                return Err(Error::InvalidTemplate(format!(
                    "arc level {level} out of range 0..{}",
                    t - 1
                )));
            }
            if src >= level_sizes[level] || dst >= level_sizes[level + 1] {
                return Err(Error::InvalidTemplate(format!(
                    "arc ({level}, {src}, {dst}) exceeds level sizes"
                )));
            }
        }
        let colours = match colours {
            Some(colours) => {
                if colours.len() != arcs.len() {
                    return Err(Error::MissingColour {
                        index: colours.len().min(arcs.len()),
                    });
                }
                // Keep colours aligned while sorting.
                let mut paired: Vec<((usize, usize, usize), u32)> =
                    arcs.iter().copied().zip(colours).collect();
                paired.sort_unstable();
                paired.dedup();
                arcs = paired.iter().map(|&(a, _)| a).collect();
                // The same arc in two colours is rejected: the colouring is
                // a map on arcs.
                for w in arcs.windows(2) {
                    if w[0] == w[1] {
                        return Err(Error::InvalidTemplate(format!(
                            "arc {:?} carries two colours",
                            w[0]
                        )));
                    }
                }
                Some(paired.into_iter().map(|(_, c)| c).collect())
            }
            None => {
                arcs.sort_unstable();
                arcs.dedup();
                None
            }
        };
        // Interior degree requirements make the tuple product two-ended.
        let mut in_deg: Vec<Vec<usize>> = level_sizes.iter().map(|&s| vec![0; s]).collect();
        let mut out_deg = in_deg.clone();
        for &(level, src, dst) in &arcs {
            out_deg[level][src] += 1;
            in_deg[level + 1][dst] += 1;
        }
        for (level, &size) in level_sizes.iter().enumerate() {
            for v in 0..size {
                if level > 0 && in_deg[level][v] == 0 {
                    return Err(Error::InvalidTemplate(format!(
                        "vertex {v} of level {level} has in-degree 0"
                    )));
                }
                if level + 1 < t && out_deg[level][v] == 0 {
                    return Err(Error::InvalidTemplate(format!(
                        "vertex {v} of level {level} has out-degree 0"
                    )));
                }
            }
        }
        Ok(Self {
            level_sizes,
            arcs,
            colours,
        })
    }

    pub fn level_count(&self) -> usize {
        self.level_sizes.len()
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn arcs(&self) -> &[(usize, usize, usize)] {
        &self.arcs
    }

    pub fn colours(&self) -> Option<&[u32]> {
        self.colours.as_deref()
    }

    pub fn is_coloured(&self) -> bool {
        self.colours.is_some()
    }

    pub fn has_arc(&self, level: usize, src: usize, dst: usize) -> bool {
        self.arcs.binary_search(&(level, src, dst)).is_ok()
    }

    /// Out-neighbours of `src` in level `level`, living in level `level+1`.
    pub fn out_neighbors(&self, level: usize, src: usize) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|&&(l, s, _)| l == level && s == src)
            .map(|&(_, _, d)| d)
            .collect()
    }

    /// In-neighbours of `dst` in level `level`, living in level `level-1`.
    pub fn in_neighbors(&self, level: usize, dst: usize) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|&&(l, _, d)| l + 1 == level && d == dst)
            .map(|&(_, s, _)| s)
            .collect()
    }

    /// Encodes a tuple with one coordinate per level into a dense index in
    /// `0..product(level_sizes)`. First coordinate is most significant.
    pub fn tuple_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.level_sizes.len());
        let mut index = 0;
        for (c, &size) in coords.iter().zip(&self.level_sizes) {
            debug_assert!(*c < size);
            index = index * size + c;
        }
        index
    }

    /// Inverse of [`Self::tuple_index`].
    pub fn tuple_coords(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.level_sizes.len()];
        for (slot, &size) in coords.iter_mut().zip(&self.level_sizes).rev() {
            *slot = index % size;
            index /= size;
        }
        coords
    }

    /// The all-arcs template on the given level sizes.
    pub fn complete(level_sizes: &[usize]) -> Result<Self> {
        let mut arcs = Vec::new();
        for level in 0..level_sizes.len().saturating_sub(1) {
            for src in 0..level_sizes[level] {
                for dst in 0..level_sizes[level + 1] {
                    arcs.push((level, src, dst));
                }
            }
        }
        Self::new(level_sizes.to_vec(), arcs)
    }

    /// Two levels of size 3 with arcs `a_i -> b_i` and `a_i -> b_{i+1}`:
    /// an alternately oriented 6-cycle, i.e. complete bipartite minus a
    /// perfect matching.
    pub fn six_cycle() -> Self {
        let arcs = (0..3)
            .flat_map(|i| [(0, i, i), (0, i, (i + 1) % 3)])
            .collect();
        Self::new(vec![3, 3], arcs).expect("fixed template is valid")
    }

    /// `t` levels of size one: the product digraph is the directed line.
    pub fn path(t: usize) -> Result<Self> {
        let arcs = (0..t.saturating_sub(1)).map(|j| (j, 0, 0)).collect();
        Self::new(vec![1; t], arcs)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TemplateFile = serde_json::from_str(s)?;
        file.into_template()
    }

    pub fn to_json_string(&self) -> String {
        TemplateFile::from_template(self).to_pretty_json()
    }
}

/// On-disk template format. Levels carry 1-based indices `j`, meaning an
/// arc from level `j` to level `j+1`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TemplateFile {
    pub levels: Vec<usize>,
    pub arcs: Vec<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colours: Option<Vec<u32>>,
}

impl TemplateFile {
    pub fn into_template(self) -> Result<LeveledTemplate> {
        let arcs = self
            .arcs
            .iter()
            .map(|&[j, src, dst]| {
                if j == 0 {
                    return Err(Error::InvalidTemplate(
                        "template file levels are 1-based; got level 0".into(),
                    ));
                }
                Ok((j - 1, src, dst))
            })
            .collect::<Result<Vec<_>>>()?;
        match self.colours {
            Some(colours) => LeveledTemplate::with_colours(self.levels, arcs, colours),
            None => LeveledTemplate::new(self.levels, arcs),
        }
    }

    pub fn from_template(t: &LeveledTemplate) -> Self {
        Self {
            levels: t.level_sizes().to_vec(),
            arcs: t
                .arcs()
                .iter()
                .map(|&(j, src, dst)| [j + 1, src, dst])
                .collect(),
            colours: t.colours().map(|c| c.to_vec()),
        }
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("template serializes")
    }
}

/// The periodic digraph with one level of `k` vertices and every possible
/// tile arc: each level is joined to the next by a complete bipartite
/// digraph.
pub fn tensor_z_kbar(k: usize) -> Result<PeriodicDigraph> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut tile = Vec::with_capacity(k * k);
    for u in 0..k as u32 {
        for v in 0..k as u32 {
            tile.push((u, v));
        }
    }
    let labels = (0..k).map(|i| i.to_string()).collect();
    PeriodicDigraph::new(k, tile)?.with_labels(labels)
}

/// The suffix-shift tuple digraph: one level per integer holds all tuples
/// over an `s`-element alphabet of length `n`; a tile arc runs from `a` to
/// `b` exactly when `a_j = b_{j+1}` for `j = 1..n-1` (the head's suffix is
/// the tail's prefix, leaving `b_1` free).
pub fn mckay_praeger(s: usize, n: usize) -> Result<PeriodicDigraph> {
    if s < 2 {
        return Err(Error::InvalidArgument(
            "alphabet size s must be at least 2".into(),
        ));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(
            "tuple length n must be at least 1".into(),
        ));
    }
    let m = s.checked_pow(n as u32).ok_or_else(|| {
        Error::InvalidArgument(format!("level size {s}^{n} overflows"))
    })?;
    // Tuple index is base-s with the first coordinate most significant, so
    // the head is (b_1, a_1, .., a_{n-1}) = b_1 * s^{n-1} + floor(a / s).
    let high = m / s; // weight of the leading coordinate
    let mut tile = Vec::with_capacity(m * s);
    for a in 0..m {
        let prefix = a / s;
        for b1 in 0..s {
            tile.push((a as u32, (b1 * high + prefix) as u32));
        }
    }
    let labels = (0..m)
        .map(|mut a| {
            let mut coords = vec![0; n];
            for slot in coords.iter_mut().rev() {
                *slot = a % s;
                a /= s;
            }
            coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    PeriodicDigraph::new(m, tile)?.with_labels(labels)
}

/// The tuple product of an uncoloured leveled template: one level per
/// integer holds all tuples with one coordinate per template level; a tile
/// arc runs from `a` to `b` exactly when `(a_j, b_{j+1})` is a template
/// arc for every `j = 1..t-1`, with `b_1` unconstrained.
pub fn template_product(t: &LeveledTemplate) -> Result<PeriodicDigraph> {
    if t.is_coloured() {
        return Err(Error::ColouredTemplate);
    }
    product_impl(t, None)
}

/// The tuple product of an edge-coloured template: a tile arc additionally
/// requires all constraining template arcs to share one colour.
pub fn coloured_template_product(k: &LeveledTemplate) -> Result<PeriodicDigraph> {
    let colours = k
        .colours()
        .ok_or(Error::MissingColour { index: 0 })?
        .to_vec();
    let mut palette: Vec<u32> = colours.clone();
    palette.sort_unstable();
    palette.dedup();
    product_impl(k, Some((&colours, &palette)))
}

fn product_impl(
    t: &LeveledTemplate,
    colouring: Option<(&Vec<u32>, &Vec<u32>)>,
) -> Result<PeriodicDigraph> {
    let levels = t.level_count();
    let m: usize = t.level_sizes().iter().product();

    // Out-adjacency per colour class, then per (level, vertex).
    let palette_size = colouring.map_or(1, |(_, p)| p.len());
    let mut adj: Vec<Vec<Vec<Vec<usize>>>> = vec![
        (0..levels.saturating_sub(1))
            .map(|level| vec![Vec::new(); t.level_sizes()[level]])
            .collect();
        palette_size
    ];
    for (i, &(level, src, dst)) in t.arcs().iter().enumerate() {
        let slot = match colouring {
            Some((colours, palette)) => palette.binary_search(&colours[i]).unwrap(),
            None => 0,
        };
        adj[slot][level][src].push(dst);
    }

    let mut tile: Vec<(u32, u32)> = Vec::new();
    let mut head = vec![0usize; levels];
    for a in 0..m {
        let coords = t.tuple_coords(a);
        for slot_adj in &adj {
            // Heads are b_1 x prod_j N+(a_j) within one colour class.
            let choices: Vec<&[usize]> = slot_adj
                .iter()
                .zip(&coords)
                .map(|(by_src, &c)| by_src[c].as_slice())
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; levels - 1];
            loop {
                head[0] = 0; // placeholder, filled by the b_1 loop below
                for (j, &p) in pick.iter().enumerate() {
                    head[j + 1] = choices[j][p];
                }
                for b1 in 0..t.level_sizes()[0] {
                    head[0] = b1;
                    tile.push((a as u32, t.tuple_index(&head) as u32));
                }
                // Odometer over the choice lists.
                let mut j = 0;
                loop {
                    if j == pick.len() {
                        break;
                    }
                    pick[j] += 1;
                    if pick[j] < choices[j].len() {
                        break;
                    }
                    pick[j] = 0;
                    j += 1;
                }
                if j == pick.len() {
                    break;
                }
            }
        }
    }

    let labels = (0..m)
        .map(|a| {
            t.tuple_coords(a)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    PeriodicDigraph::new(m, tile)?.with_labels(labels)
}

/// A directed path `c_0 = a, .., c_t = b` between two tuples of the
/// template product, `t` levels apart. Each tuple coordinate follows a
/// through-path of the template, shifted one position per step.
pub fn connecting_path(
    t: &LeveledTemplate,
    a: &[usize],
    b: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let levels = t.level_count();
    if a.len() != levels || b.len() != levels {
        return Err(Error::InvalidArgument(format!(
            "endpoint tuples must have {levels} coordinates"
        )));
    }
    for (j, (&x, &size)) in a.iter().zip(t.level_sizes()).enumerate() {
        if x >= size {
            return Err(Error::InvalidArgument(format!(
                "coordinate {j} of the start tuple is out of range"
            )));
        }
    }
    for (j, (&x, &size)) in b.iter().zip(t.level_sizes()).enumerate() {
        if x >= size {
            return Err(Error::InvalidArgument(format!(
                "coordinate {j} of the end tuple is out of range"
            )));
        }
    }

    let paths_a: Vec<Vec<usize>> = (0..levels)
        .map(|j| through_path(t, j, a[j]))
        .collect::<Result<_>>()?;
    let paths_b: Vec<Vec<usize>> = (0..levels)
        .map(|j| through_path(t, j, b[j]))
        .collect::<Result<_>>()?;

    let s = levels;
    let mut out = Vec::with_capacity(s + 1);
    for i in 0..=s {
        let mut c = vec![0usize; levels];
        for jj in 0..levels {
            c[jj] = if i <= jj {
                paths_a[jj - i][jj]
            } else {
                paths_b[jj + s - i][jj]
            };
        }
        out.push(c);
    }
    debug_assert_eq!(out[0], a);
    debug_assert_eq!(out[s], b);
    debug_assert!(verify_product_path(t, &out));
    Ok(out)
}

/// Checks that consecutive tuples satisfy the product arc predicate.
pub fn verify_product_path(t: &LeveledTemplate, path: &[Vec<usize>]) -> bool {
    path.windows(2).all(|w| {
        (0..t.level_count() - 1).all(|jj| t.has_arc(jj, w[0][jj], w[1][jj + 1]))
    })
}

/// A directed path through all template levels hitting `vertex` at level
/// `at`. Exists whenever the template degree invariants hold.
fn through_path(t: &LeveledTemplate, at: usize, vertex: usize) -> Result<Vec<usize>> {
    let levels = t.level_count();
    let mut path = vec![0usize; levels];
    path[at] = vertex;
    for j in (0..at).rev() {
        let preds = t.in_neighbors(j + 1, path[j + 1]);
        path[j] = *preds.iter().min().ok_or(Error::NoThroughPath { coordinate: at })?;
    }
    for j in at + 1..levels {
        let succs = t.out_neighbors(j - 1, path[j - 1]);
        path[j] = *succs.iter().min().ok_or(Error::NoThroughPath { coordinate: at })?;
    }
    Ok(path)
}

/// The truncated biregular tree underlying a tree-edge digraph: a bipartite
/// tree whose A-vertices have `a` neighbours and B-vertices `b`, cut at a
/// fixed edge-distance from a root edge.
#[derive(Debug, Clone)]
pub struct TruncatedBiregularTree {
    /// `true` for A-side vertices.
    pub side_a: Vec<bool>,
    /// Tree adjacency (undirected).
    pub adjacency: Vec<Vec<u32>>,
    /// Edge `id` joins `edges[id].0` in A with `edges[id].1` in B; ids are
    /// breadth-first from the root edge 0.
    pub edges: Vec<(u32, u32)>,
    /// Edge-distance from the root edge (adjacent edges are at distance 1).
    pub edge_distance: Vec<usize>,
}

/// The tree-edge digraph: one vertex per edge of the truncated tree, and
/// for each tree edge `e = uv` (u in A, v in B) an arc from every edge
/// meeting `e` at `u` to every edge meeting `e` at `v`.
#[derive(Debug, Clone)]
pub struct TreeEdgeGraph {
    pub graph: FiniteDigraph,
    /// For each arc, the middle tree edge that produced it.
    pub witness: Vec<u32>,
    pub tree: TruncatedBiregularTree,
    pub a: usize,
    pub b: usize,
    pub radius: usize,
}

impl TreeEdgeGraph {
    pub fn witness_of(&self, arc: ArcId) -> u32 {
        self.witness[arc as usize]
    }
}

/// Builds the tree-edge digraph of the `(a, b)`-biregular tree truncated
/// at edge-distance `radius` from the root edge. Core vertices are the
/// edges at distance at most `radius - 2`: their digraph neighbourhoods
/// are complete.
pub fn tree_edge_graph(a: usize, b: usize, radius: usize) -> Result<TreeEdgeGraph> {
    if a < 3 || b < 3 {
        return Err(Error::InvalidArgument(format!(
            "both sides need degree at least 3, got a={a}, b={b}"
        )));
    }

    // Breadth-first tree growth with deterministic child ordering: each
    // processed edge completes the degree of both of its endpoints.
    let mut side_a = vec![true, false];
    let mut incident: Vec<Vec<u32>> = vec![vec![0], vec![0]];
    let mut edges: Vec<(u32, u32)> = vec![(0, 1)];
    let mut edge_distance = vec![0usize];

    let mut next = 0usize;
    while next < edges.len() {
        let e = next;
        next += 1;
        let d = edge_distance[e];
        if d >= radius {
            continue;
        }
        let (u, v) = edges[e];
        while incident[u as usize].len() < a {
            let w = side_a.len() as u32;
            side_a.push(false);
            incident.push(vec![edges.len() as u32]);
            incident[u as usize].push(edges.len() as u32);
            edges.push((u, w));
            edge_distance.push(d + 1);
        }
        while incident[v as usize].len() < b {
            let w = side_a.len() as u32;
            side_a.push(true);
            incident.push(vec![edges.len() as u32]);
            incident[v as usize].push(edges.len() as u32);
            edges.push((w, v));
            edge_distance.push(d + 1);
        }
    }

    let adjacency: Vec<Vec<u32>> = incident
        .iter()
        .enumerate()
        .map(|(vertex, list)| {
            list.iter()
                .map(|&e| {
                    let (x, y) = edges[e as usize];
                    if x == vertex as u32 {
                        y
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();

    // Arcs through each middle edge whose full neighbourhood is present.
    let mut arc_witness: Vec<((u32, u32), u32)> = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if edge_distance[e] + 1 > radius {
            continue;
        }
        for &e1 in &incident[u as usize] {
            if e1 as usize == e {
                continue;
            }
            for &e2 in &incident[v as usize] {
                if e2 as usize == e {
                    continue;
                }
                arc_witness.push(((e1, e2), e as u32));
            }
        }
    }
    arc_witness.sort_unstable();
    let arcs: Vec<(u32, u32)> = arc_witness.iter().map(|&(a, _)| a).collect();
    let witness: Vec<u32> = arc_witness.iter().map(|&(_, w)| w).collect();

    let core: Vec<bool> = edge_distance
        .iter()
        .map(|&d| radius >= 2 && d <= radius - 2)
        .collect();
    let labels: Vec<String> = edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| format!("e{e}:{u}-{v}"))
        .collect();

    let graph = FiniteDigraph::build(edges.len(), arcs, None, Some(core), Some(labels))?;
    Ok(TreeEdgeGraph {
        graph,
        witness,
        tree: TruncatedBiregularTree {
            side_a,
            adjacency,
            edges,
            edge_distance,
        },
        a,
        b,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{degree_profile, tile, underlying_components, window};

    /// Brute-force tile arcs of a template product straight from the
    /// predicate, for checking the odometer enumeration.
    fn product_tile_oracle(t: &LeveledTemplate) -> Vec<(u32, u32)> {
        let m: usize = t.level_sizes().iter().product();
        let mut out = Vec::new();
        for a in 0..m {
            let ac = t.tuple_coords(a);
            'next: for b in 0..m {
                let bc = t.tuple_coords(b);
                for j in 0..t.level_count() - 1 {
                    if !t.has_arc(j, ac[j], bc[j + 1]) {
                        continue 'next;
                    }
                }
                match t.colours() {
                    None => out.push((a as u32, b as u32)),
                    Some(colours) => {
                        let palette: std::collections::BTreeSet<u32> =
                            colours.iter().copied().collect();
                        let mono = palette.iter().any(|&c| {
                            (0..t.level_count() - 1).all(|j| {
                                t.arcs()
                                    .iter()
                                    .zip(colours)
                                    .any(|(&arc, &ac2)| {
                                        arc == (j, ac[j], bc[j + 1]) && ac2 == c
                                    })
                            })
                        });
                        if mono {
                            out.push((a as u32, b as u32));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn tensor_shapes() {
        let p = tensor_z_kbar(1).unwrap();
        assert_eq!(p.level_size(), 1);
        assert_eq!(p.tile_arcs(), &[(0, 0)]);

        let p = tensor_z_kbar(3).unwrap();
        assert_eq!(p.tile_arcs().len(), 9);
        let w = window(&p, 0, 4).unwrap();
        let d = degree_profile(&w);
        for v in w.core_vertices() {
            assert_eq!(d.per_vertex[v as usize], (3, 3));
        }

        assert!(tensor_z_kbar(0).is_err());
    }

    #[test]
    fn mckay_tile_structure() {
        let p = mckay_praeger(2, 3).unwrap();
        assert_eq!(p.level_size(), 8);
        let t = tile(&p);
        // Four components, each a complete bipartite K_{2,2}.
        let comps = underlying_components(&t);
        assert_eq!(comps.len(), 4);
        for comp in &comps {
            assert_eq!(comp.len(), 4);
            let sub = t.vertex_induced_subgraph(comp);
            assert_eq!(sub.arc_count(), 4);
            let d = degree_profile(&sub);
            let sources = d.per_vertex.iter().filter(|&&(_, o)| o == 2).count();
            let sinks = d.per_vertex.iter().filter(|&&(i, _)| i == 2).count();
            assert_eq!((sources, sinks), (2, 2));
        }
        // Out-degree 2 everywhere on the lower level: only b_1 is free.
        for v in 0..8u32 {
            assert_eq!(t.out_degree(v), 2);
        }

        assert!(mckay_praeger(1, 3).is_err());
        assert!(mckay_praeger(2, 0).is_err());
    }

    #[test]
    fn mckay_predicate_matches_label_suffixes() {
        let p = mckay_praeger(2, 3).unwrap();
        let labels = p.labels().unwrap();
        let coords = |i: u32| -> Vec<usize> {
            labels[i as usize]
                .split(',')
                .map(|c| c.parse().unwrap())
                .collect()
        };
        for a in 0..8u32 {
            for b in 0..8u32 {
                let expected = (0..2).all(|j| coords(a)[j] == coords(b)[j + 1]);
                assert_eq!(p.tile_arcs().contains(&(a, b)), expected);
            }
        }
    }

    #[test]
    fn mckay_n1_equals_tensor() {
        let p = mckay_praeger(3, 1).unwrap();
        let q = tensor_z_kbar(3).unwrap();
        assert_eq!(p.tile_arcs(), q.tile_arcs());

        // Length-1 tuples impose no constraints, so the tiles agree up to
        // relabeling.
        let a = tile(&mckay_praeger(2, 1).unwrap());
        let b = tile(&tensor_z_kbar(2).unwrap());
        assert!(matches!(
            crate::symmetry::find_isomorphism(&a, &b, 1_000_000),
            crate::symmetry::SearchOutcome::Found(_)
        ));
    }

    #[test]
    fn six_cycle_product_shape() {
        let t = LeveledTemplate::six_cycle();
        let p = template_product(&t).unwrap();
        assert_eq!(p.level_size(), 9);
        assert_eq!(p.tile_arcs(), product_tile_oracle(&t));
        let w = tile(&p);
        assert_eq!(underlying_components(&w).len(), 1);
        for v in 0..9u32 {
            assert_eq!(w.out_degree(v), 6);
        }
    }

    #[test]
    fn complete_three_level_product() {
        let t = LeveledTemplate::complete(&[2, 2, 2]).unwrap();
        let p = template_product(&t).unwrap();
        assert_eq!(p.level_size(), 8);
        assert_eq!(p.tile_arcs(), product_tile_oracle(&t));
        let w = tile(&p);
        for v in 0..8u32 {
            assert_eq!(w.out_degree(v), 8);
        }
    }

    #[test]
    fn path_template_is_line() {
        let t = LeveledTemplate::path(3).unwrap();
        let p = template_product(&t).unwrap();
        assert_eq!(p.level_size(), 1);
        assert_eq!(p.tile_arcs(), &[(0, 0)]);
    }

    #[test]
    fn product_degree_closed_forms() {
        for t in [
            LeveledTemplate::six_cycle(),
            LeveledTemplate::complete(&[2, 3, 2]).unwrap(),
            LeveledTemplate::new(
                vec![2, 2, 2],
                vec![
                    (0, 0, 0),
                    (0, 0, 1),
                    (0, 1, 1),
                    (1, 0, 0),
                    (1, 1, 0),
                    (1, 1, 1),
                ],
            )
            .unwrap(),
        ] {
            let p = template_product(&t).unwrap();
            let w = window(&p, 0, 2).unwrap();
            let m = p.level_size() as u32;
            let levels = t.level_count();
            for idx in 0..m {
                let coords = t.tuple_coords(idx as usize);
                let expected_out: usize = t.level_sizes()[0]
                    * (0..levels - 1)
                        .map(|j| t.out_neighbors(j, coords[j]).len())
                        .product::<usize>();
                let expected_in: usize = t.level_sizes()[levels - 1]
                    * (1..levels)
                        .map(|j| t.in_neighbors(j, coords[j]).len())
                        .product::<usize>();
                // Vertex idx at the middle level of a 3-level window has
                // untruncated degrees.
                let v = m + idx;
                assert_eq!(w.out_degree(v), expected_out);
                assert_eq!(w.in_degree(v), expected_in);
            }
        }
    }

    #[test]
    fn coloured_product_single_colour_matches_plain() {
        let t = LeveledTemplate::complete(&[2, 2, 2]).unwrap();
        let arcs = t.arcs().to_vec();
        let coloured = LeveledTemplate::with_colours(
            vec![2, 2, 2],
            arcs.clone(),
            vec![7; arcs.len()],
        )
        .unwrap();
        let plain = template_product(&t).unwrap();
        let tinted = coloured_template_product(&coloured).unwrap();
        assert_eq!(plain.tile_arcs(), tinted.tile_arcs());
    }

    #[test]
    fn coloured_product_two_matchings() {
        // Complete 2-level template on sizes 2,2 split into two perfect
        // matchings. Frozen expectation comes from brute force over all 16
        // candidate tile arcs: out-degree 4 at every tuple.
        let k = LeveledTemplate::with_colours(
            vec![2, 2],
            vec![(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)],
            vec![1, 2, 2, 1],
        )
        .unwrap();
        let p = coloured_template_product(&k).unwrap();
        assert_eq!(p.tile_arcs(), product_tile_oracle(&k));
        let t = tile(&p);
        for v in 0..4u32 {
            assert_eq!(t.out_degree(v), 4);
        }
    }

    #[test]
    fn coloured_product_three_levels_constrains() {
        // With three levels the same-colour rule actually bites: compare
        // against the brute-force predicate.
        let k = LeveledTemplate::with_colours(
            vec![2, 2, 2],
            vec![
                (0, 0, 0),
                (0, 0, 1),
                (0, 1, 0),
                (0, 1, 1),
                (1, 0, 0),
                (1, 0, 1),
                (1, 1, 0),
                (1, 1, 1),
            ],
            vec![1, 2, 2, 1, 1, 2, 2, 1],
        )
        .unwrap();
        let p = coloured_template_product(&k).unwrap();
        let mut oracle = product_tile_oracle(&k);
        oracle.sort_unstable();
        oracle.dedup();
        assert_eq!(p.tile_arcs(), oracle);
        // Plain product of the same arcs has more tile arcs.
        let plain = template_product(
            &LeveledTemplate::complete(&[2, 2, 2]).unwrap(),
        )
        .unwrap();
        assert!(p.tile_arcs().len() < plain.tile_arcs().len());
    }

    #[test]
    fn coloured_product_rejects_empty_tile() {
        // Two levels sized 1 with... a single arc cannot be de-saturated,
        // so use three levels where no two-arc chain is monochromatic.
        let k = LeveledTemplate::with_colours(
            vec![1, 1, 1],
            vec![(0, 0, 0), (1, 0, 0)],
            vec![1, 2],
        )
        .unwrap();
        assert!(matches!(
            coloured_template_product(&k),
            Err(Error::EmptyTile)
        ));
    }

    #[test]
    fn template_product_rejects_coloured() {
        let k = LeveledTemplate::with_colours(vec![1, 1], vec![(0, 0, 0)], vec![1]).unwrap();
        assert!(matches!(template_product(&k), Err(Error::ColouredTemplate)));
    }

    #[test]
    fn connecting_path_complete_template() {
        let t = LeveledTemplate::complete(&[2, 2, 2]).unwrap();
        let path = connecting_path(&t, &[0, 0, 0], &[0, 0, 0]).unwrap();
        assert_eq!(path.len(), 4);
        assert!(verify_product_path(&t, &path));
    }

    #[test]
    fn connecting_path_line_template() {
        let t = LeveledTemplate::path(4).unwrap();
        let path = connecting_path(&t, &[0, 0, 0, 0], &[0, 0, 0, 0]).unwrap();
        assert_eq!(path, vec![vec![0, 0, 0, 0]; 5]);
    }

    #[test]
    fn connecting_path_six_cycle_all_pairs() {
        let t = LeveledTemplate::six_cycle();
        for a0 in 0..3 {
            for a1 in 0..3 {
                for b0 in 0..3 {
                    for b1 in 0..3 {
                        let path = connecting_path(&t, &[a0, a1], &[b0, b1]).unwrap();
                        assert_eq!(path.len(), 3);
                        assert!(verify_product_path(&t, &path));
                    }
                }
            }
        }
    }

    #[test]
    fn template_invariants_enforced() {
        // Vertex 1 of level 1 has in-degree 0.
        assert!(LeveledTemplate::new(vec![2, 2], vec![(0, 0, 0), (0, 1, 0)]).is_err());
        // Vertex 1 of level 0 has out-degree 0.
        assert!(LeveledTemplate::new(vec![2, 1], vec![(0, 0, 0)]).is_err());
        // One level is too few.
        assert!(LeveledTemplate::new(vec![3], vec![]).is_err());
    }

    #[test]
    fn template_json_round_trip() {
        let t = LeveledTemplate::six_cycle();
        let s = t.to_json_string();
        let back = LeveledTemplate::from_json_str(&s).unwrap();
        assert_eq!(t, back);

        let k = LeveledTemplate::with_colours(
            vec![2, 2],
            vec![(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)],
            vec![1, 2, 2, 1],
        )
        .unwrap();
        let back = LeveledTemplate::from_json_str(&k.to_json_string()).unwrap();
        assert_eq!(k, back);
    }

    #[test]
    fn tree_edge_graph_small_cases() {
        let g = tree_edge_graph(3, 3, 0).unwrap();
        assert_eq!(g.graph.vertex_count(), 1);
        assert_eq!(g.graph.arc_count(), 0);

        assert!(tree_edge_graph(2, 3, 1).is_err());
        assert!(tree_edge_graph(3, 2, 1).is_err());
    }

    #[test]
    fn tree_edge_graph_core_degrees() {
        // Interior degree is (a-1)(b-1) in both directions.
        for (a, b, want) in [(3, 3, 4), (3, 4, 6)] {
            let g = tree_edge_graph(a, b, 3).unwrap();
            let d = degree_profile(&g.graph);
            let core = g.graph.core_vertices();
            assert!(!core.is_empty());
            assert_eq!(d.uniform_over(&core), Some((want, want)));
        }
    }

    #[test]
    fn tree_edge_graph_witnesses_check_out() {
        let g = tree_edge_graph(3, 4, 3).unwrap();
        assert!(g.graph.arc_count() > 0);
        for id in 0..g.graph.arc_count() as u32 {
            let (e1, e2) = g.graph.arc(id);
            let c = g.witness_of(id);
            let (cu, cv) = g.tree.edges[c as usize];
            // Middle edge meets the tail at its A-end and the head at its
            // B-end, and is neither of them.
            assert_eq!(g.tree.edges[e1 as usize].0, cu);
            assert_eq!(g.tree.edges[e2 as usize].1, cv);
            assert_ne!(c, e1);
            assert_ne!(c, e2);
        }
    }

    #[test]
    fn tree_growth_is_biregular_off_boundary() {
        let g = tree_edge_graph(3, 4, 4).unwrap();
        let tree = &g.tree;
        for (v, adj) in tree.adjacency.iter().enumerate() {
            let full = if tree.side_a[v] { g.a } else { g.b };
            assert!(adj.len() <= full);
            // Vertices touching an interior edge are complete.
            let interior = tree
                .edges
                .iter()
                .enumerate()
                .any(|(e, &(x, y))| {
                    (x == v as u32 || y == v as u32) && tree.edge_distance[e] + 1 < g.radius
                });
            if interior {
                assert_eq!(adj.len(), full);
            }
        }
    }
}

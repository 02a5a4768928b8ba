//! Symmetry machinery for finite windows: seeded automorphism and
//! isomorphism backtracking with colour refinement, s-arc enumeration and
//! orbit transitivity, clone partitions, leveling checks, and quotients.

use std::collections::{BTreeMap, VecDeque};

use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};

/// A seed for the automorphism search: vertex-image pairs that the found
/// map must extend. Injective by construction.
#[derive(Debug, Clone, Default)]
pub struct PartialMap {
    pairs: Vec<(u32, u32)>,
}

impl PartialMap {
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NotInjective {
                    a: w[0].1,
                    b: w[1].1,
                    image: w[0].0,
                });
            }
        }
        let mut by_image: Vec<(u32, u32)> = pairs.iter().map(|&(s, i)| (i, s)).collect();
        by_image.sort_unstable();
        for w in by_image.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NotInjective {
                    a: w[0].1,
                    b: w[1].1,
                    image: w[0].0,
                });
            }
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

/// Outcome of a seeded backtracking search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A full vertex map preserving arcs and non-arcs.
    Found(Vec<u32>),
    /// The search space was exhausted: no extension exists.
    Exhausted,
    /// The node budget ran out before the search finished.
    CapExceeded,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Vec<u32>> {
        match self {
            SearchOutcome::Found(map) => Some(map),
            _ => None,
        }
    }
}

/// Joint colour refinement of two digraphs: iterated splitting by degrees,
/// shift-normalized levels, seed tags, and neighbour colour multisets.
/// Colour ids are assigned from one shared table so they are comparable
/// across the two graphs.
fn joint_refinement(
    g: &FiniteDigraph,
    h: &FiniteDigraph,
    seed: &[(u32, u32)],
) -> (Vec<u32>, Vec<u32>) {
    let norm_level = |d: &FiniteDigraph| -> Vec<i64> {
        match d.levels() {
            Some(levels) => {
                let min = levels.iter().copied().min().unwrap_or(0);
                levels.iter().map(|&l| l - min).collect()
            }
            None => vec![0; d.vertex_count()],
        }
    };
    // Levels participate only when both sides carry them.
    let use_levels = g.levels().is_some() && h.levels().is_some();
    let (lg, lh) = if use_levels {
        (norm_level(g), norm_level(h))
    } else {
        (vec![0; g.vertex_count()], vec![0; h.vertex_count()])
    };

    let mut tag_g = vec![0u32; g.vertex_count()];
    let mut tag_h = vec![0u32; h.vertex_count()];
    for (i, &(s, im)) in seed.iter().enumerate() {
        tag_g[s as usize] = i as u32 + 1;
        tag_h[im as usize] = i as u32 + 1;
    }

    let initial_key = |d: &FiniteDigraph, lv: &[i64], tag: &[u32], v: u32| {
        (
            tag[v as usize],
            lv[v as usize],
            d.in_degree(v),
            d.out_degree(v),
        )
    };

    let mut table = BTreeMap::new();
    let mut cg: Vec<u32> = (0..g.vertex_count() as u32)
        .map(|v| {
            let next = table.len() as u32;
            *table.entry(initial_key(g, &lg, &tag_g, v)).or_insert(next)
        })
        .collect();
    let mut ch: Vec<u32> = (0..h.vertex_count() as u32)
        .map(|v| {
            let next = table.len() as u32;
            *table.entry(initial_key(h, &lh, &tag_h, v)).or_insert(next)
        })
        .collect();
    let mut count = table.len();

    loop {
        let signature = |d: &FiniteDigraph, colours: &[u32], v: u32| {
            let mut outs: Vec<u32> = d.out_neighbors(v).map(|w| colours[w as usize]).collect();
            let mut ins: Vec<u32> = d.in_neighbors(v).map(|w| colours[w as usize]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (colours[v as usize], outs, ins)
        };
        let mut table: BTreeMap<(u32, Vec<u32>, Vec<u32>), u32> = BTreeMap::new();
        let next_g: Vec<u32> = (0..g.vertex_count() as u32)
            .map(|v| {
                let next = table.len() as u32;
                *table.entry(signature(g, &cg, v)).or_insert(next)
            })
            .collect();
        let next_h: Vec<u32> = (0..h.vertex_count() as u32)
            .map(|v| {
                let next = table.len() as u32;
                *table.entry(signature(h, &ch, v)).or_insert(next)
            })
            .collect();
        let new_count = table.len();
        cg = next_g;
        ch = next_h;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    (cg, ch)
}

/// Searches for an isomorphism from `g` onto `h` extending `seed`,
/// counting backtrack nodes against `cap`. Deterministic.
pub fn find_isomorphism(g: &FiniteDigraph, h: &FiniteDigraph, cap: u64) -> SearchOutcome {
    seeded_isomorphism(g, h, &PartialMap::empty(), cap)
}

/// As [`find_isomorphism`] with required vertex-image pairs.
pub fn seeded_isomorphism(
    g: &FiniteDigraph,
    h: &FiniteDigraph,
    seed: &PartialMap,
    cap: u64,
) -> SearchOutcome {
    if g.vertex_count() != h.vertex_count() || g.arc_count() != h.arc_count() {
        return SearchOutcome::Exhausted;
    }
    let n = g.vertex_count();
    for &(s, im) in seed.pairs() {
        if s as usize >= n || im as usize >= n {
            return SearchOutcome::Exhausted;
        }
    }

    let (cg, ch) = joint_refinement(g, h, seed.pairs());
    let mut hist_g: BTreeMap<u32, usize> = BTreeMap::new();
    let mut hist_h: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &cg {
        *hist_g.entry(c).or_insert(0) += 1;
    }
    for &c in &ch {
        *hist_h.entry(c).or_insert(0) += 1;
    }
    if hist_g != hist_h {
        return SearchOutcome::Exhausted;
    }

    let mut candidates: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n as u32 {
        candidates.entry(ch[v as usize]).or_default().push(v);
    }

    // Underlying adjacency for the connectivity-guided vertex order.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in g.arcs() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    // Most-constrained-first static order: seeds, then vertices with the
    // most placed neighbours, smallest candidate class, smallest index.
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut placed_neighbors = vec![0usize; n];
    for &(s, _) in seed.pairs() {
        if !placed[s as usize] {
            order.push(s);
            placed[s as usize] = true;
            for &w in &adj[s as usize] {
                placed_neighbors[w as usize] += 1;
            }
        }
    }
    while order.len() < n {
        let mut best: Option<u32> = None;
        for v in 0..n as u32 {
            if placed[v as usize] {
                continue;
            }
            let key = |x: u32| {
                (
                    std::cmp::Reverse(placed_neighbors[x as usize]),
                    candidates
                        .get(&cg[x as usize])
                        .map_or(0, |c| c.len()),
                    x,
                )
            };
            if best.is_none_or(|b| key(v) < key(b)) {
                best = Some(v);
            }
        }
        let v = best.expect("an unplaced vertex exists");
        order.push(v);
        placed[v as usize] = true;
        for &w in &adj[v as usize] {
            placed_neighbors[w as usize] += 1;
        }
    }

    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    for &(s, im) in seed.pairs() {
        if ch[im as usize] != cg[s as usize] || used[im as usize] {
            return SearchOutcome::Exhausted;
        }
        map[s as usize] = im;
        used[im as usize] = true;
    }
    // Seed pairs must already respect arcs and non-arcs among themselves.
    for &(s1, im1) in seed.pairs() {
        for &(s2, im2) in seed.pairs() {
            if g.has_arc(s1, s2) != h.has_arc(im1, im2) {
                return SearchOutcome::Exhausted;
            }
        }
    }

    let mut nodes: u64 = 0;
    let depth0 = seed.pairs().len();
    match extend(
        g,
        h,
        &order,
        &cg,
        &candidates,
        depth0,
        &mut map,
        &mut used,
        &mut nodes,
        cap,
    ) {
        Ok(true) => SearchOutcome::Found(map),
        Ok(false) => SearchOutcome::Exhausted,
        Err(CapHit) => SearchOutcome::CapExceeded,
    }
}

struct CapHit;

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &FiniteDigraph,
    h: &FiniteDigraph,
    order: &[u32],
    cg: &[u32],
    candidates: &BTreeMap<u32, Vec<u32>>,
    depth: usize,
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
    nodes: &mut u64,
    cap: u64,
) -> std::result::Result<bool, CapHit> {
    if depth == order.len() {
        return Ok(true);
    }
    let u = order[depth];
    let empty = Vec::new();
    let pool = candidates.get(&cg[u as usize]).unwrap_or(&empty);
    'cands: for &v in pool {
        if used[v as usize] {
            continue;
        }
        *nodes += 1;
        if *nodes > cap {
            return Err(CapHit);
        }
        // Arc and non-arc agreement against every placed vertex.
        for &w in &order[..depth] {
            let fw = map[w as usize];
            if g.has_arc(u, w) != h.has_arc(v, fw) || g.has_arc(w, u) != h.has_arc(fw, v) {
                continue 'cands;
            }
        }
        map[u as usize] = v;
        used[v as usize] = true;
        if extend(g, h, order, cg, candidates, depth + 1, map, used, nodes, cap)? {
            return Ok(true);
        }
        map[u as usize] = u32::MAX;
        used[v as usize] = false;
    }
    Ok(false)
}

/// Searches for an automorphism of `g` extending `seed`: a bijection
/// preserving arcs and non-arcs. Returns the identity-or-other map found,
/// `Exhausted` when no extension exists, or `CapExceeded`.
pub fn find_automorphism(g: &FiniteDigraph, seed: &PartialMap, cap: u64) -> SearchOutcome {
    seeded_isomorphism(g, g, seed, cap)
}

/// Replays a vertex map against the digraph: bijective, arc-preserving,
/// and non-arc-preserving.
pub fn is_automorphism(g: &FiniteDigraph, map: &[u32]) -> bool {
    let n = g.vertex_count();
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in map {
        if v as usize >= n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    let image_count = g
        .arcs()
        .iter()
        .filter(|&&(u, v)| g.has_arc(map[u as usize], map[v as usize]))
        .count();
    image_count == g.arc_count()
}

/// All s-arcs of `g`: walks of `s` arcs that never immediately backtrack
/// (`v_{i+1} != v_{i-1}`). For `s = 0` these are the single vertices.
pub fn enumerate_s_arcs(g: &FiniteDigraph, s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut walk = Vec::with_capacity(s + 1);
    for v in 0..g.vertex_count() as u32 {
        walk.push(v);
        extend_s_arc(g, s, &mut walk, &mut out);
        walk.pop();
    }
    out
}

fn extend_s_arc(g: &FiniteDigraph, s: usize, walk: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if walk.len() == s + 1 {
        out.push(walk.clone());
        return;
    }
    let last = *walk.last().unwrap();
    let forbidden = walk.len().checked_sub(2).map(|i| walk[i]);
    let next: Vec<u32> = g.out_neighbors(last).collect();
    for w in next {
        if Some(w) == forbidden {
            continue;
        }
        walk.push(w);
        extend_s_arc(g, s, walk, out);
        walk.pop();
    }
}

/// Transitivity verdict over core s-arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitivityVerdict {
    Transitive,
    NotTransitive,
    Inconclusive { reason: String },
}

/// Orbit structure of core s-arcs under window automorphisms.
#[derive(Debug, Clone)]
pub struct TransitivityReport {
    pub verdict: TransitivityVerdict,
    pub orbit_count: usize,
    pub s: usize,
    pub core_size: usize,
    pub core_s_arcs: usize,
    /// Seeded searches run.
    pub searches: usize,
    pub cap_hit: bool,
    /// Orbit sizes, largest first.
    pub orbit_sizes: Vec<usize>,
}

/// Partitions the s-arcs starting at a core vertex into orbits, by seeded
/// searches against orbit representatives only. A failed search between
/// representatives separates orbits; `cap` bounds each individual search.
///
/// Two s-arcs at the same levels are compared through window
/// automorphisms. A finite window admits no level-shifting automorphism,
/// so s-arcs at different levels are first aligned by the periodic shift:
/// the search then looks for a seeded isomorphism between the two maximal
/// subwindows that the shift identifies. Both outcomes are window-level
/// evidence only.
pub fn s_arc_transitivity_report(
    g: &FiniteDigraph,
    s: usize,
    cap: u64,
) -> Result<TransitivityReport> {
    let core = g.core_vertices();
    if core.is_empty() {
        return Err(Error::EmptyCore);
    }
    let s_arcs: Vec<Vec<u32>> = enumerate_s_arcs(g, s)
        .into_iter()
        .filter(|walk| g.is_core(walk[0]))
        .collect();
    if s_arcs.is_empty() {
        return Ok(TransitivityReport {
            verdict: TransitivityVerdict::Inconclusive {
                reason: "no s-arcs start in the core".into(),
            },
            orbit_count: 0,
            s,
            core_size: core.len(),
            core_s_arcs: 0,
            searches: 0,
            cap_hit: false,
            orbit_sizes: Vec::new(),
        });
    }

    let mut aligner = ShiftAligner::new(g);
    let mut reps: Vec<usize> = Vec::new();
    let mut orbit_of = vec![usize::MAX; s_arcs.len()];
    let mut searches = 0usize;
    let mut cap_hit = false;

    for i in 0..s_arcs.len() {
        let mut assigned = false;
        for (orbit, &r) in reps.iter().enumerate() {
            searches += 1;
            match aligner.try_map(&s_arcs[r], &s_arcs[i], cap) {
                SearchOutcome::Found(_) => {
                    orbit_of[i] = orbit;
                    assigned = true;
                    break;
                }
                SearchOutcome::Exhausted => {}
                SearchOutcome::CapExceeded => {
                    cap_hit = true;
                }
            }
        }
        if !assigned {
            orbit_of[i] = reps.len();
            reps.push(i);
        }
    }

    let mut orbit_sizes = vec![0usize; reps.len()];
    for &o in &orbit_of {
        orbit_sizes[o] += 1;
    }
    orbit_sizes.sort_unstable_by(|a, b| b.cmp(a));

    let verdict = if cap_hit {
        TransitivityVerdict::Inconclusive {
            reason: "search cap exceeded; orbit structure is partial".into(),
        }
    } else if reps.len() == 1 {
        TransitivityVerdict::Transitive
    } else {
        TransitivityVerdict::NotTransitive
    };
    Ok(TransitivityReport {
        verdict,
        orbit_count: reps.len(),
        s,
        core_size: core.len(),
        core_s_arcs: s_arcs.len(),
        searches,
        cap_hit,
        orbit_sizes,
    })
}

/// Seed mapping one s-arc onto another, or `None` when their vertex
/// repetition patterns differ.
fn seed_from_walks(from: &[u32], to: &[u32]) -> Option<PartialMap> {
    debug_assert_eq!(from.len(), to.len());
    for i in 0..from.len() {
        for j in i + 1..from.len() {
            if (from[i] == from[j]) != (to[i] == to[j]) {
                return None;
            }
        }
    }
    let pairs: Vec<(u32, u32)> = from.iter().copied().zip(to.iter().copied()).collect();
    PartialMap::new(pairs).ok()
}

/// Runs seeded searches between s-arcs, aligning level-shifted pairs on
/// the maximal subwindows the shift identifies. Subwindow pairs are cached
/// per shift.
struct ShiftAligner<'a> {
    g: &'a FiniteDigraph,
    lo: i64,
    hi: i64,
    cache: BTreeMap<i64, AlignedPair>,
}

struct AlignedPair {
    source: FiniteDigraph,
    target: FiniteDigraph,
    /// Dense re-index of the source and target subwindow vertex sets.
    source_index: Vec<u32>,
    target_index: Vec<u32>,
}

impl<'a> ShiftAligner<'a> {
    fn new(g: &'a FiniteDigraph) -> Self {
        let (lo, hi) = match g.levels() {
            Some(levels) => (
                levels.iter().copied().min().unwrap_or(0),
                levels.iter().copied().max().unwrap_or(0),
            ),
            None => (0, 0),
        };
        Self {
            g,
            lo,
            hi,
            cache: BTreeMap::new(),
        }
    }

    fn try_map(&mut self, from: &[u32], to: &[u32], cap: u64) -> SearchOutcome {
        let levels = match self.g.levels() {
            Some(levels) => levels,
            None => {
                return match seed_from_walks(from, to) {
                    Some(seed) => find_automorphism(self.g, &seed, cap),
                    None => SearchOutcome::Exhausted,
                };
            }
        };
        let shift = levels[to[0] as usize] - levels[from[0] as usize];
        let uniform = from
            .iter()
            .zip(to)
            .all(|(&f, &t)| levels[t as usize] - levels[f as usize] == shift);
        if !uniform {
            return SearchOutcome::Exhausted;
        }
        if shift == 0 {
            return match seed_from_walks(from, to) {
                Some(seed) => find_automorphism(self.g, &seed, cap),
                None => SearchOutcome::Exhausted,
            };
        }

        let (g, lo, hi) = (self.g, self.lo, self.hi);
        let pair = self.cache.entry(shift).or_insert_with(|| {
            // Source subwindow omits `shift` levels at one end; the target
            // omits them at the other.
            let (a_lo, a_hi) = if shift > 0 {
                (lo, hi - shift)
            } else {
                (lo - shift, hi)
            };
            let select = |from_level: i64, to_level: i64| -> Vec<u32> {
                (0..g.vertex_count() as u32)
                    .filter(|&v| {
                        let l = g.level_of(v).expect("leveled graph");
                        l >= from_level && l <= to_level
                    })
                    .collect()
            };
            let source_index = select(a_lo, a_hi);
            let target_index = select(a_lo + shift, a_hi + shift);
            AlignedPair {
                source: g.vertex_induced_subgraph(&source_index),
                target: g.vertex_induced_subgraph(&target_index),
                source_index,
                target_index,
            }
        });

        let remap = |index: &[u32], walk: &[u32]| -> Option<Vec<u32>> {
            walk.iter()
                .map(|v| index.binary_search(v).ok().map(|i| i as u32))
                .collect()
        };
        let (from_sub, to_sub) = match (
            remap(&pair.source_index, from),
            remap(&pair.target_index, to),
        ) {
            (Some(f), Some(t)) => (f, t),
            _ => return SearchOutcome::Exhausted,
        };
        match seed_from_walks(&from_sub, &to_sub) {
            Some(seed) => seeded_isomorphism(&pair.source, &pair.target, &seed, cap),
            None => SearchOutcome::Exhausted,
        }
    }
}

/// Right- and left-clone partitions: vertices grouped by identical
/// out-neighbour sets, and by identical in-neighbour sets.
#[derive(Debug, Clone)]
pub struct CloneReport {
    pub right: Vec<Vec<u32>>,
    pub left: Vec<Vec<u32>>,
    /// Class size shared by all right-clone classes, when constant.
    pub c_plus: Option<usize>,
    pub c_minus: Option<usize>,
    pub right_uniform: bool,
    pub left_uniform: bool,
}

/// Groups vertices by exact neighbourhood equality. With
/// `restrict_to_core` only core vertices are partitioned (their
/// neighbourhoods may still reach the boundary).
pub fn clone_classes(g: &FiniteDigraph, restrict_to_core: bool) -> CloneReport {
    let vertices: Vec<u32> = if restrict_to_core && g.has_core() {
        g.core_vertices()
    } else {
        (0..g.vertex_count() as u32).collect()
    };
    let group = |key: &dyn Fn(u32) -> Vec<u32>| -> Vec<Vec<u32>> {
        let mut by_set: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        for &v in &vertices {
            by_set.entry(key(v)).or_default().push(v);
        }
        let mut classes: Vec<Vec<u32>> = by_set.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        classes
    };
    let right = group(&|v| g.out_neighbors(v).collect());
    let left = group(&|v| g.in_neighbors(v).collect());
    let uniform = |classes: &[Vec<u32>]| -> (Option<usize>, bool) {
        let mut sizes = classes.iter().map(|c| c.len());
        match sizes.next() {
            None => (None, true),
            Some(first) => {
                if sizes.all(|s| s == first) {
                    (Some(first), true)
                } else {
                    (None, false)
                }
            }
        }
    };
    let (c_plus, right_uniform) = uniform(&right);
    let (c_minus, left_uniform) = uniform(&left);
    CloneReport {
        right,
        left,
        c_plus,
        c_minus,
        right_uniform,
        left_uniform,
    }
}

/// One step of a closed walk in the underlying graph: traversing the arc
/// `(from, to)` forwards, or the arc `(to, from)` backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkStep {
    pub from: u32,
    pub to: u32,
    pub forward: bool,
}

/// A closed underlying walk whose net displacement (+1 per forward step,
/// -1 per backward step) is nonzero: a finite obstruction to any leveling,
/// valid in every supergraph containing its arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedWalk {
    pub steps: Vec<WalkStep>,
}

impl ClosedWalk {
    pub fn displacement(&self) -> i64 {
        self.steps
            .iter()
            .map(|s| if s.forward { 1 } else { -1 })
            .sum()
    }

    /// Validates the walk against a digraph and returns its displacement.
    pub fn replay(&self, g: &FiniteDigraph) -> Result<i64> {
        if self.steps.is_empty() {
            return Err(Error::InvalidArgument("empty walk".into()));
        }
        for pair in self.steps.windows(2) {
            if pair[0].to != pair[1].from {
                return Err(Error::InvalidArgument("walk is not connected".into()));
            }
        }
        let first = self.steps[0];
        let last = self.steps[self.steps.len() - 1];
        if last.to != first.from {
            return Err(Error::InvalidArgument("walk is not closed".into()));
        }
        for step in &self.steps {
            let (u, v) = if step.forward {
                (step.from, step.to)
            } else {
                (step.to, step.from)
            };
            if !g.has_arc(u, v) {
                return Err(Error::NoSuchArc { u, v });
            }
        }
        Ok(self.displacement())
    }
}

/// Result of the leveling check: either a potential with `f(v) = f(u)+1`
/// on every arc, or a closed walk witnessing that none exists.
#[derive(Debug, Clone)]
pub enum LevelingResult {
    Consistent(Vec<i64>),
    Conflict(ClosedWalk),
}

impl LevelingResult {
    pub fn is_consistent(&self) -> bool {
        matches!(self, LevelingResult::Consistent(_))
    }
}

/// Breadth-first potential assignment per underlying component. On a
/// conflicting arc the two tree paths and the arc close into a walk with
/// nonzero displacement.
pub fn property_z_check(g: &FiniteDigraph) -> LevelingResult {
    let n = g.vertex_count();
    let mut f = vec![i64::MIN; n];
    // parent[v] = (previous vertex, arrived forward) along the BFS tree.
    let mut parent: Vec<Option<(u32, bool)>> = vec![None; n];

    for root in 0..n as u32 {
        if f[root as usize] != i64::MIN {
            continue;
        }
        f[root as usize] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let fx = f[x as usize];
            let out: Vec<u32> = g.out_neighbors(x).collect();
            for y in out {
                if f[y as usize] == i64::MIN {
                    f[y as usize] = fx + 1;
                    parent[y as usize] = Some((x, true));
                    queue.push_back(y);
                } else if f[y as usize] != fx + 1 {
                    return LevelingResult::Conflict(conflict_walk(&parent, x, y));
                }
            }
            let inn: Vec<u32> = g.in_neighbors(x).collect();
            for y in inn {
                if f[y as usize] == i64::MIN {
                    f[y as usize] = fx - 1;
                    parent[y as usize] = Some((x, false));
                    queue.push_back(y);
                } else if f[y as usize] != fx - 1 {
                    // The conflicting arc runs y -> x.
                    return LevelingResult::Conflict(conflict_walk(&parent, y, x));
                }
            }
        }
    }
    LevelingResult::Consistent(f)
}

/// Closed walk: tree path to `u`, the arc `(u, v)`, tree path from `v`
/// back to the root.
fn conflict_walk(parent: &[Option<(u32, bool)>], u: u32, v: u32) -> ClosedWalk {
    let path_from_root = |mut x: u32| -> Vec<WalkStep> {
        let mut steps = Vec::new();
        while let Some((prev, forward)) = parent[x as usize] {
            steps.push(WalkStep {
                from: prev,
                to: x,
                forward,
            });
            x = prev;
        }
        steps.reverse();
        steps
    };
    let mut steps = path_from_root(u);
    steps.push(WalkStep {
        from: u,
        to: v,
        forward: true,
    });
    let mut back = path_from_root(v);
    back.reverse();
    for step in &mut back {
        *step = WalkStep {
            from: step.to,
            to: step.from,
            forward: !step.forward,
        };
    }
    steps.extend(back);
    let walk = ClosedWalk { steps };
    debug_assert_ne!(walk.displacement(), 0);
    walk
}

/// Quotient by a vertex partition: one vertex per block, arcs between
/// blocks wherever some arc crossed, loops dropped and parallels merged.
pub fn quotient_by_partition(g: &FiniteDigraph, blocks: &[Vec<u32>]) -> Result<FiniteDigraph> {
    let n = g.vertex_count();
    let mut block_of = vec![u32::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            if v as usize >= n {
                return Err(Error::MalformedPartition(format!(
                    "vertex {v} out of range"
                )));
            }
            if block_of[v as usize] != u32::MAX {
                return Err(Error::MalformedPartition(format!(
                    "vertex {v} appears in two blocks"
                )));
            }
            block_of[v as usize] = b as u32;
        }
    }
    if let Some(missing) = block_of.iter().position(|&b| b == u32::MAX) {
        return Err(Error::MalformedPartition(format!(
            "vertex {missing} is in no block"
        )));
    }
    let arcs: Vec<(u32, u32)> = g
        .arcs()
        .iter()
        .map(|&(u, v)| (block_of[u as usize], block_of[v as usize]))
        .filter(|&(a, b)| a != b)
        .collect();
    FiniteDigraph::new(blocks.len(), arcs)
}

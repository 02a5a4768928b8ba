//! Alternating-walk reachability: arc equivalence classes, the induced
//! class digraph, completeness tests for bipartitely oriented graphs, and
//! window-level universality certificates.
//!
//! An alternating walk traverses arcs alternately forwards and backwards,
//! so consecutive arcs share alternately heads and tails. Two arcs are
//! equivalent when some alternating walk starts at one and ends at the
//! other; revisits are allowed, there is no non-backtracking condition.

use std::collections::VecDeque;

use crate::digraph::{ArcId, FiniteDigraph};
use crate::error::{Error, Result};
use crate::oracle::Shared;
use crate::symmetry::{find_isomorphism, SearchOutcome};

/// An alternating walk recorded as its arc sequence. The endpoint shared
/// by the first two arcs is `first_shared`; shared endpoints alternate
/// from there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkWitness {
    pub arcs: Vec<ArcId>,
    pub first_shared: Shared,
}

impl WalkWitness {
    /// Replays the walk against a digraph: every arc must exist and every
    /// consecutive pair must share the alternating endpoint.
    pub fn replay(&self, g: &FiniteDigraph) -> bool {
        if self.arcs.is_empty() {
            return false;
        }
        if self.arcs.iter().any(|&a| a as usize >= g.arc_count()) {
            return false;
        }
        let mut share = self.first_shared;
        for pair in self.arcs.windows(2) {
            let (t0, h0) = g.arc(pair[0]);
            let (t1, h1) = g.arc(pair[1]);
            let ok = match share {
                Shared::Head => h0 == h1,
                Shared::Tail => t0 == t1,
            };
            if !ok {
                return false;
            }
            share = share.flip();
        }
        true
    }

    pub fn start(&self) -> ArcId {
        self.arcs[0]
    }

    pub fn end(&self) -> ArcId {
        *self.arcs.last().expect("witness walks are nonempty")
    }
}

/// The partition of all arcs into alternating-reachability classes.
#[derive(Debug, Clone)]
pub struct ArcPartition {
    class_of: Vec<u32>,
    classes: Vec<Vec<ArcId>>,
    representatives: Vec<ArcId>,
    witnesses: Vec<WalkWitness>,
}

impl ArcPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, arc: ArcId) -> u32 {
        self.class_of[arc as usize]
    }

    pub fn classes(&self) -> &[Vec<ArcId>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn representatives(&self) -> &[ArcId] {
        &self.representatives
    }

    /// Sampled equivalent pairs with their proving walks.
    pub fn witnesses(&self) -> &[WalkWitness] {
        &self.witnesses
    }

    pub fn same_class(&self, a: ArcId, b: ArcId) -> bool {
        self.class_of[a as usize] == self.class_of[b as usize]
    }
}

/// State index for the (arc, next shared endpoint) breadth-first search.
fn state(arc: ArcId, share: Shared) -> usize {
    arc as usize * 2
        + match share {
            Shared::Head => 0,
            Shared::Tail => 1,
        }
}

fn state_arc(s: usize) -> ArcId {
    (s / 2) as ArcId
}

fn state_share(s: usize) -> Shared {
    if s.is_multiple_of(2) {
        Shared::Head
    } else {
        Shared::Tail
    }
}

/// Breadth-first search over (arc, polarity) states from both seed
/// polarities. Fills `parent` for witness extraction and returns the arcs
/// reached. `visited` persists across seeds to partition all arcs in one
/// pass.
fn bfs_class(
    g: &FiniteDigraph,
    seed: ArcId,
    visited: &mut [bool],
    parent: &mut [usize],
) -> Vec<ArcId> {
    let mut queue = VecDeque::new();
    let mut reached = std::collections::BTreeSet::new();
    for share in [Shared::Head, Shared::Tail] {
        let s = state(seed, share);
        if !visited[s] {
            visited[s] = true;
            parent[s] = usize::MAX;
            queue.push_back(s);
        }
    }
    reached.insert(seed);

    while let Some(s) = queue.pop_front() {
        let (tail, head) = g.arc(state_arc(s));
        let successors: Vec<ArcId> = match state_share(s) {
            Shared::Head => g.in_arc_ids(head).collect(),
            Shared::Tail => g.out_arc_ids(tail).collect(),
        };
        for b in successors {
            let t = state(b, state_share(s).flip());
            if !visited[t] {
                visited[t] = true;
                parent[t] = s;
                reached.insert(b);
                queue.push_back(t);
            }
        }
    }
    reached.into_iter().collect()
}

fn witness_from_parents(parent: &[usize], target: ArcId) -> Option<WalkWitness> {
    // Whichever polarity of the target was reached by a transition. Seeds
    // carry no parent and need no witness.
    let end = [Shared::Head, Shared::Tail]
        .into_iter()
        .map(|sh| state(target, sh))
        .find(|&s| parent[s] != usize::MAX)?;
    let mut states = vec![end];
    while parent[*states.last().unwrap()] != usize::MAX {
        states.push(parent[*states.last().unwrap()]);
    }
    states.reverse();
    Some(WalkWitness {
        arcs: states.iter().map(|&s| state_arc(s)).collect(),
        first_shared: state_share(states[0]),
    })
}

/// All arcs equivalent to `e`, by breadth-first search over (arc,
/// polarity) states seeded with both polarities.
pub fn alternating_class(g: &FiniteDigraph, e: (u32, u32)) -> Result<Vec<ArcId>> {
    let seed = g.arc_id(e.0, e.1).ok_or(Error::NoSuchArc { u: e.0, v: e.1 })?;
    let mut visited = vec![false; g.arc_count() * 2];
    let mut parent = vec![usize::MAX; g.arc_count() * 2];
    Ok(bfs_class(g, seed, &mut visited, &mut parent))
}

/// Partitions every arc into its alternating-reachability class, storing a
/// few witness walks per class.
pub fn reach_partition(g: &FiniteDigraph) -> ArcPartition {
    let mut class_of = vec![u32::MAX; g.arc_count()];
    let mut classes = Vec::new();
    let mut representatives = Vec::new();
    let mut witnesses = Vec::new();
    let mut visited = vec![false; g.arc_count() * 2];
    let mut parent = vec![usize::MAX; g.arc_count() * 2];

    for seed in 0..g.arc_count() as ArcId {
        if class_of[seed as usize] != u32::MAX {
            continue;
        }
        let members = bfs_class(g, seed, &mut visited, &mut parent);
        let id = classes.len() as u32;
        for &m in &members {
            debug_assert_eq!(class_of[m as usize], u32::MAX, "classes must not leak");
            class_of[m as usize] = id;
        }
        // Sample witness walks: the representative against a middle and the
        // last member, when they differ.
        for pick in [members.len() / 2, members.len().saturating_sub(1)] {
            let target = members[pick];
            if target != seed {
                if let Some(w) = witness_from_parents(&parent, target) {
                    debug_assert!(w.replay(g));
                    witnesses.push(w);
                }
            }
        }
        representatives.push(seed);
        classes.push(members);
    }

    ArcPartition {
        class_of,
        classes,
        representatives,
        witnesses,
    }
}

/// The class digraph and how the classes compare to each other.
#[derive(Debug, Clone)]
pub struct RDigraphReport {
    /// Subgraph induced by the first reachability class, densely
    /// re-indexed.
    pub representative: FiniteDigraph,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    /// Whether all class subgraphs are pairwise isomorphic; `None` when an
    /// isomorphism search hit its cap.
    pub all_classes_isomorphic: Option<bool>,
}

/// Extracts the digraph induced by one reachability class and tests all
/// classes for pairwise isomorphism.
pub fn r_digraph(g: &FiniteDigraph, cap: u64) -> Result<RDigraphReport> {
    if g.arc_count() == 0 {
        return Err(Error::EmptyArcSet);
    }
    let partition = reach_partition(g);
    let subgraphs: Vec<FiniteDigraph> = partition
        .classes()
        .iter()
        .map(|arcs| g.arc_induced_subgraph(arcs))
        .collect();
    let mut all_iso = Some(true);
    for other in subgraphs.iter().skip(1) {
        match find_isomorphism(&subgraphs[0], other, cap) {
            SearchOutcome::Found(_) => {}
            SearchOutcome::Exhausted => {
                all_iso = Some(false);
                break;
            }
            SearchOutcome::CapExceeded => {
                all_iso = None;
                break;
            }
        }
    }
    Ok(RDigraphReport {
        representative: subgraphs.into_iter().next().expect("at least one class"),
        class_count: partition.class_count(),
        class_sizes: partition.class_sizes(),
        all_classes_isomorphic: all_iso,
    })
}

/// Verdict of the completeness test for bipartitely oriented digraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteVerdict {
    /// Every source-sink pair is an arc.
    Complete { sources: Vec<u32>, sinks: Vec<u32> },
    /// A source-sink pair with no arc.
    Missing { source: u32, sink: u32 },
}

/// Tests whether a bipartitely oriented digraph (no vertex has both in-
/// and out-arcs) is complete bipartite from sources to sinks. Vertices
/// with no arcs are ignored.
pub fn is_complete_bipartite(g: &FiniteDigraph) -> Result<BipartiteVerdict> {
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for v in 0..g.vertex_count() as u32 {
        let (i, o) = (g.in_degree(v), g.out_degree(v));
        if i > 0 && o > 0 {
            return Err(Error::NotBipartitelyOriented { vertex: v });
        }
        if o > 0 {
            sources.push(v);
        } else if i > 0 {
            sinks.push(v);
        }
    }
    for &s in &sources {
        for &t in &sinks {
            if !g.has_arc(s, t) {
                return Ok(BipartiteVerdict::Missing { source: s, sink: t });
            }
        }
    }
    Ok(BipartiteVerdict::Complete { sources, sinks })
}

/// Window-level universality verdict for the reachability relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalityVerdict {
    /// Every arc with both endpoints in the core lies in one class.
    UniversalOnCore { core_arcs: usize, margin: usize },
    /// Two core arcs in distinct classes, and walks through the boundary
    /// margin do not merge any core classes.
    Refuted {
        arc_a: ArcId,
        arc_b: ArcId,
        margin: usize,
    },
    Inconclusive { reason: String },
}

/// Certifies or refutes universality of the reachability relation on the
/// core of a truncation window.
///
/// The positive verdict is a statement about the window alone. The
/// negative verdict additionally requires saturation: the class structure
/// of the core arcs must be identical whether walks may use the boundary
/// margin or not, since truncation alone can separate classes.
pub fn universality_certificate(g: &FiniteDigraph) -> Result<UniversalityVerdict> {
    let core = g.core_vertices();
    if core.is_empty() {
        return Err(Error::EmptyCore);
    }
    let is_core = |v: u32| g.is_core(v);
    let core_arcs: Vec<ArcId> = (0..g.arc_count() as ArcId)
        .filter(|&id| {
            let (u, v) = g.arc(id);
            is_core(u) && is_core(v)
        })
        .collect();
    if core_arcs.is_empty() {
        return Ok(UniversalityVerdict::Inconclusive {
            reason: "no arcs with both endpoints in the core".into(),
        });
    }

    let margin = core_to_boundary_distance(g, &core);
    let full = reach_partition(g);
    let mut class_reps: Vec<(u32, ArcId)> = Vec::new();
    for &a in &core_arcs {
        let c = full.class_of(a);
        if !class_reps.iter().any(|&(cc, _)| cc == c) {
            class_reps.push((c, a));
        }
    }
    if class_reps.len() == 1 {
        return Ok(UniversalityVerdict::UniversalOnCore {
            core_arcs: core_arcs.len(),
            margin,
        });
    }

    if margin == 0 {
        return Ok(UniversalityVerdict::Inconclusive {
            reason: "core touches the window boundary; no margin to saturate".into(),
        });
    }

    // Saturation: recompute classes with walks confined to the core and
    // compare on the core arcs. The confined partition always refines the
    // full one; equality means the margin contributed nothing.
    let inner = g.vertex_induced_subgraph(&core);
    let mut old_index = vec![u32::MAX; g.vertex_count()];
    for (new, &v) in core.iter().enumerate() {
        old_index[v as usize] = new as u32;
    }
    let inner_partition = reach_partition(&inner);
    let inner_id = |arc: ArcId| -> u32 {
        let (u, v) = g.arc(arc);
        let id = inner
            .arc_id(old_index[u as usize], old_index[v as usize])
            .expect("core arc survives in the core-induced subgraph");
        inner_partition.class_of(id)
    };
    let mut merged = false;
    'outer: for class in full.classes() {
        let mut seen_inner: Option<u32> = None;
        for &a in class {
            let (u, v) = g.arc(a);
            if !(is_core(u) && is_core(v)) {
                continue;
            }
            let ic = inner_id(a);
            match seen_inner {
                None => seen_inner = Some(ic),
                Some(prev) if prev != ic => {
                    merged = true;
                    break 'outer;
                }
                Some(_) => {}
            }
        }
    }

    if merged {
        Ok(UniversalityVerdict::Inconclusive {
            reason: "boundary walks merge core classes; grow the window".into(),
        })
    } else {
        Ok(UniversalityVerdict::Refuted {
            arc_a: class_reps[0].1,
            arc_b: class_reps[1].1,
            margin,
        })
    }
}

/// Shortest underlying-graph distance from any core vertex to any
/// non-core vertex; 0 when there are no non-core vertices.
fn core_to_boundary_distance(g: &FiniteDigraph, core: &[u32]) -> usize {
    let n = g.vertex_count();
    if core.len() == n {
        return 0;
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n as u32 {
        if !g.is_core(v) {
            dist[v as usize] = 0;
            queue.push_back(v);
        }
    }
    let mut best = usize::MAX;
    while let Some(v) = queue.pop_front() {
        if g.is_core(v) {
            best = best.min(dist[v as usize]);
            continue; // no need to search past the first core layer
        }
        let neighbors: Vec<u32> = g.out_neighbors(v).chain(g.in_neighbors(v)).collect();
        for w in neighbors {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

/// Checks that a vertex bijection respects the class partition: arcs are
/// equivalent exactly when their images are.
pub fn equivariant_under(g: &FiniteDigraph, partition: &ArcPartition, map: &[u32]) -> bool {
    let mut image_class = vec![u32::MAX; partition.class_count()];
    let mut preimage_class = vec![u32::MAX; partition.class_count()];
    for id in 0..g.arc_count() as ArcId {
        let (u, v) = g.arc(id);
        let image = match g.arc_id(map[u as usize], map[v as usize]) {
            Some(i) => i,
            None => return false,
        };
        let c = partition.class_of(id) as usize;
        let ic = partition.class_of(image);
        if image_class[c] == u32::MAX {
            image_class[c] = ic;
        } else if image_class[c] != ic {
            return false;
        }
        if preimage_class[ic as usize] == u32::MAX {
            preimage_class[ic as usize] = c as u32;
        } else if preimage_class[ic as usize] != c as u32 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{mckay_praeger, template_product, tensor_z_kbar, LeveledTemplate};
    use crate::digraph::{tile, window, window_with_margin};
    use crate::oracle::alternating_reach_by_walks;

    #[test]
    fn single_arc_is_its_own_class() {
        let g = FiniteDigraph::new(2, vec![(0, 1)]).unwrap();
        let class = alternating_class(&g, (0, 1)).unwrap();
        assert_eq!(class, vec![0]);
        assert!(alternating_class(&g, (1, 0)).is_err());
    }

    #[test]
    fn directed_path_splits() {
        // Same-direction consecutive arcs are never alternating-related:
        // frozen by checking both arcs of the 2-path exhaustively.
        let g = FiniteDigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let p = reach_partition(&g);
        assert_eq!(p.class_count(), 2);
        let by_walks = alternating_reach_by_walks(&g, 0, 8);
        assert_eq!(by_walks, vec![0]);
    }

    #[test]
    fn complete_tile_is_one_class() {
        let g = tile(&tensor_z_kbar(2).unwrap());
        let class = alternating_class(&g, g.arc(0)).unwrap();
        assert_eq!(class.len(), 4);
        // Brute-force walks of length at most 4 already find all four.
        assert_eq!(alternating_reach_by_walks(&g, 0, 4).len(), 4);
    }

    #[test]
    fn mckay_tile_partition() {
        let g = tile(&mckay_praeger(2, 3).unwrap());
        let p = reach_partition(&g);
        assert_eq!(p.class_count(), 4);
        assert_eq!(p.class_sizes(), vec![4, 4, 4, 4]);
        for w in p.witnesses() {
            assert!(w.replay(&g));
        }
    }

    #[test]
    fn tensor_tile_single_class() {
        for k in 1..=4 {
            let g = tile(&tensor_z_kbar(k).unwrap());
            assert_eq!(reach_partition(&g).class_count(), 1);
        }
    }

    #[test]
    fn classes_stay_within_one_transition() {
        let p = template_product(&LeveledTemplate::six_cycle()).unwrap();
        let w = window(&p, 0, 4).unwrap();
        let part = reach_partition(&w);
        // One class per level transition.
        assert_eq!(part.class_count(), 4);
        for class in part.classes() {
            let levels: std::collections::BTreeSet<i64> = class
                .iter()
                .map(|&a| w.level_of(w.arc(a).0).unwrap())
                .collect();
            assert_eq!(levels.len(), 1);
        }
    }

    #[test]
    fn r_digraph_of_mckay() {
        let g = tile(&mckay_praeger(2, 3).unwrap());
        let r = r_digraph(&g, 1_000_000).unwrap();
        assert_eq!(r.class_count, 4);
        assert_eq!(r.all_classes_isomorphic, Some(true));
        assert_eq!(r.representative.vertex_count(), 4);
        assert_eq!(r.representative.arc_count(), 4);
        match is_complete_bipartite(&r.representative).unwrap() {
            BipartiteVerdict::Complete { sources, sinks } => {
                assert_eq!((sources.len(), sinks.len()), (2, 2));
            }
            other => panic!("expected complete bipartite, got {other:?}"),
        }
    }

    #[test]
    fn r_digraph_of_six_cycle_product() {
        let p = template_product(&LeveledTemplate::six_cycle()).unwrap();
        let g = tile(&p);
        let r = r_digraph(&g, 1_000_000).unwrap();
        assert_eq!(r.class_count, 1);
        assert_eq!(r.representative.vertex_count(), 18);
        match is_complete_bipartite(&r.representative).unwrap() {
            BipartiteVerdict::Missing { source, sink } => {
                assert!(!r.representative.has_arc(source, sink));
            }
            other => panic!("expected a missing pair, got {other:?}"),
        }
    }

    #[test]
    fn two_isolated_complete_tiles_are_isomorphic_classes() {
        let g = FiniteDigraph::new(
            8,
            vec![
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
            ],
        )
        .unwrap();
        let r = r_digraph(&g, 1_000_000).unwrap();
        assert_eq!(r.class_count, 2);
        assert_eq!(r.all_classes_isomorphic, Some(true));
    }

    #[test]
    fn complete_bipartite_edge_cases() {
        let g = FiniteDigraph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(
            is_complete_bipartite(&g).unwrap(),
            BipartiteVerdict::Complete { .. }
        ));

        // A complete tile passes with the two levels as parts.
        match is_complete_bipartite(&tile(&tensor_z_kbar(3).unwrap())).unwrap() {
            BipartiteVerdict::Complete { sources, sinks } => {
                assert_eq!((sources.len(), sinks.len()), (3, 3));
            }
            other => panic!("expected complete, got {other:?}"),
        }

        let path = FiniteDigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            is_complete_bipartite(&path),
            Err(Error::NotBipartitelyOriented { vertex: 1 })
        ));
    }

    #[test]
    fn universality_refuted_on_mckay_window() {
        let p = mckay_praeger(2, 3).unwrap();
        let w = window(&p, 0, 4).unwrap();
        match universality_certificate(&w).unwrap() {
            UniversalityVerdict::Refuted { arc_a, arc_b, .. } => {
                let part = reach_partition(&w);
                assert!(!part.same_class(arc_a, arc_b));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn universality_inconclusive_without_margin() {
        // A single-transition window whose core is everything: the classes
        // are split, but with no margin nothing can be saturated.
        let p = mckay_praeger(2, 3).unwrap();
        let w = window_with_margin(&p, 0, 1, 0).unwrap();
        assert!(matches!(
            universality_certificate(&w).unwrap(),
            UniversalityVerdict::Inconclusive { .. }
        ));
        // Default margin on a two-level window leaves no core at all.
        let w = window(&p, 0, 1).unwrap();
        assert!(matches!(
            universality_certificate(&w),
            Err(Error::EmptyCore)
        ));
        // A complete tile is a single class even without margin.
        let t = window_with_margin(&tensor_z_kbar(2).unwrap(), 0, 1, 0).unwrap();
        assert!(matches!(
            universality_certificate(&t).unwrap(),
            UniversalityVerdict::UniversalOnCore { .. }
        ));
    }

    #[test]
    fn class_subgraphs_of_tiles_are_bipartite() {
        for g in [
            tile(&mckay_praeger(2, 3).unwrap()),
            tile(&template_product(&LeveledTemplate::six_cycle()).unwrap()),
        ] {
            let p = reach_partition(&g);
            for class in p.classes() {
                // A class of a bipartitely oriented graph is bipartitely
                // oriented itself, so the completeness test never errors.
                let sub = g.arc_induced_subgraph(class);
                assert!(is_complete_bipartite(&sub).is_ok());
            }
        }
    }

    #[test]
    fn middle_transition_class_count_non_increasing() {
        for p in [
            mckay_praeger(2, 3).unwrap(),
            template_product(&LeveledTemplate::six_cycle()).unwrap(),
            tensor_z_kbar(3).unwrap(),
        ] {
            let mut prev = usize::MAX;
            for span in [2i64, 4, 6] {
                let w = window(&p, 0, span).unwrap();
                let part = reach_partition(&w);
                let mid = span / 2;
                let mut classes = std::collections::BTreeSet::new();
                for id in 0..w.arc_count() as ArcId {
                    if w.level_of(w.arc(id).0) == Some(mid) {
                        classes.insert(part.class_of(id));
                    }
                }
                assert!(classes.len() <= prev);
                prev = classes.len();
            }
        }
    }
}

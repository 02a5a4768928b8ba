//! Explicitly enumerated permutation groups, left coset spaces, Cayley
//! coset graphs, and the clone-expansion equivalence between coset graphs
//! over nested subgroups.

use std::collections::BTreeMap;

use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::symmetry::quotient_by_partition;

/// A permutation of `0..degree` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NotBijective);
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)` over the
    /// points `0..degree`. Commas and whitespace both separate points.
    pub fn from_cycles(degree: usize, input: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadCycleNotation {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "()" || trimmed == "id" {
            return Ok(Self { images });
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if !rest.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| bad("missing ')'"))?;
            let body = &rest[1..close];
            let cycle: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("not a number")))
                .collect::<std::result::Result<_, _>>()?;
            for &p in &cycle {
                if p >= degree {
                    return Err(bad("point out of range"));
                }
                if moved[p] {
                    return Err(bad("point repeated across cycles"));
                }
                moved[p] = true;
            }
            for i in 0..cycle.len() {
                images[cycle[i]] = cycle[(i + 1) % cycle.len()];
            }
            rest = &rest[close + 1..];
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` after `other`: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    /// Disjoint-cycle rendering, `id` for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            out.push('(');
            let mut p = start;
            loop {
                seen[p] = true;
                out.push_str(&p.to_string());
                p = self.images[p];
                if p == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }
}

/// A permutation group stored as its full, lexicographically sorted
/// element list. Element 0 is always the identity.
#[derive(Debug, Clone)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: BTreeMap<Vec<usize>, usize>,
}

/// Breadth-first closure of the generators under composition. Finite
/// permutation sets close into groups, so inverses come for free. Errors
/// when the closure would exceed `cap` elements.
pub fn generate_group(generators: &[Permutation], cap: usize) -> Result<GeneratedGroup> {
    let degree = match generators.first() {
        Some(g) => g.degree(),
        None => {
            return Err(Error::InvalidArgument(
                "at least one generator is required".into(),
            ))
        }
    };
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                a: degree,
                b: g.degree(),
            });
        }
    }
    let mut members: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let identity = Permutation::identity(degree);
    members.insert(identity.images().to_vec(), ());
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = p.compose(g);
            if members.len() >= cap && !members.contains_key(q.images()) {
                return Err(Error::GroupTooLarge { cap });
            }
            if members.insert(q.images().to_vec(), ()).is_none() {
                frontier.push(q);
            }
        }
    }
    let elements: Vec<Permutation> = members
        .into_keys()
        .map(|images| Permutation { images })
        .collect();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.images().to_vec(), i))
        .collect();
    Ok(GeneratedGroup {
        degree,
        generators: generators.to_vec(),
        elements,
        index,
    })
}

impl GeneratedGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, id: usize) -> &Permutation {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn id_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p.images()).copied()
    }

    pub fn identity_id(&self) -> usize {
        0
    }

    pub fn compose_ids(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].compose(&self.elements[b]);
        *self
            .index
            .get(p.images())
            .expect("group is closed under composition")
    }

    pub fn inverse_id(&self, a: usize) -> usize {
        let p = self.elements[a].inverse();
        *self.index.get(p.images()).expect("group contains inverses")
    }

    /// The subgroup generated by a sublist of permutations, all of which
    /// must already belong to this group.
    pub fn subgroup(&self, generators: &[Permutation]) -> Result<Subgroup> {
        for g in generators {
            if self.id_of(g).is_none() {
                return Err(Error::NotASubgroupOf);
            }
        }
        let closure = if generators.is_empty() {
            vec![Permutation::identity(self.degree)]
        } else {
            generate_group(generators, self.order())?.elements
        };
        let ids = closure
            .iter()
            .map(|p| self.id_of(p).expect("closure stays inside the group"))
            .collect();
        Ok(Subgroup { ids })
    }

    /// Validates an explicit element-id set as a subgroup: contains the
    /// identity, closed under composition and inverses.
    pub fn subgroup_from_ids(&self, mut ids: Vec<usize>) -> Result<Subgroup> {
        ids.sort_unstable();
        ids.dedup();
        for &id in &ids {
            if id >= self.order() {
                return Err(Error::NotASubgroup(format!("element id {id} out of range")));
            }
        }
        if ids.binary_search(&self.identity_id()).is_err() {
            return Err(Error::NotASubgroup("missing the identity".into()));
        }
        for &a in &ids {
            if ids.binary_search(&self.inverse_id(a)).is_err() {
                return Err(Error::NotASubgroup(format!(
                    "not closed under inverse of element {a}"
                )));
            }
            for &b in &ids {
                if ids.binary_search(&self.compose_ids(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!(
                        "not closed under product of elements {a} and {b}"
                    )));
                }
            }
        }
        Ok(Subgroup { ids })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            ids: (0..self.order()).collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { ids: vec![0] }
    }

    /// The double coset `sub * g * sub` as sorted element ids.
    pub fn double_coset(&self, sub: &Subgroup, g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = sub
            .ids
            .iter()
            .flat_map(|&l| {
                let lg = self.compose_ids(l, g);
                sub.ids
                    .iter()
                    .map(move |&r| (lg, r))
                    .collect::<Vec<(usize, usize)>>()
            })
            .map(|(lg, r)| self.compose_ids(lg, r))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A verified subgroup, stored as sorted element ids of the parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    ids: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ids.iter().all(|&id| other.contains(id))
    }
}

/// The left cosets of a subgroup: a partition of the group elements with
/// the minimal element of each coset as its canonical representative.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    cosets: Vec<Vec<usize>>,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn rep(&self, coset: usize) -> usize {
        self.reps[coset]
    }

    pub fn coset_of(&self, element: usize) -> usize {
        self.coset_of[element]
    }
}

/// Partitions the group into left cosets `g * sub`, ordered by canonical
/// representative.
pub fn left_cosets(group: &GeneratedGroup, sub: &Subgroup) -> CosetSpace {
    let order = group.order();
    let mut assigned = vec![usize::MAX; order];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for g in 0..order {
        if assigned[g] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = sub.ids().iter().map(|&l| group.compose_ids(g, l)).collect();
        coset.sort_unstable();
        coset.dedup();
        debug_assert_eq!(coset.len(), sub.order());
        let id = cosets.len();
        for &e in &coset {
            debug_assert_eq!(assigned[e], usize::MAX);
            assigned[e] = id;
        }
        cosets.push(coset);
    }
    // Scanning in element order makes each coset's first-seen element its
    // minimum, so cosets are already sorted by representative.
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    debug_assert!(reps.windows(2).all(|w| w[0] < w[1]));
    CosetSpace {
        cosets,
        reps,
        coset_of: assigned,
    }
}

/// A connection set `A`, validated against a subgroup: `sub * A * sub`
/// must equal `A`, otherwise the coset edge rule is ill-defined.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    ids: Vec<usize>,
}

impl ConnectionSet {
    /// Exhaustively verifies the saturation invariant and names a witness
    /// triple on failure.
    pub fn new(group: &GeneratedGroup, sub: &Subgroup, mut ids: Vec<usize>) -> Result<Self> {
        ids.sort_unstable();
        ids.dedup();
        for &id in &ids {
            if id >= group.order() {
                return Err(Error::InvalidArgument(format!(
                    "connection element id {id} out of range"
                )));
            }
        }
        for &l in sub.ids() {
            for &a in &ids {
                let la = group.compose_ids(l, a);
                for &r in sub.ids() {
                    let lar = group.compose_ids(la, r);
                    if ids.binary_search(&lar).is_err() {
                        return Err(Error::NotSaturated {
                            lambda: l,
                            a,
                            lambda_prime: r,
                        });
                    }
                }
            }
        }
        Ok(Self { ids })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }
}

/// A Cayley coset graph together with its coset space and a count of the
/// loops dropped to keep the digraph loopless.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub graph: FiniteDigraph,
    pub cosets: CosetSpace,
    pub removed_loops: usize,
}

/// Builds the Cayley coset graph on the left cosets of `sub`: an arc from
/// coset `Q` to coset `R` exactly when every product `q^{-1} r` lies in
/// the connection set. Revalidates saturation before building.
pub fn cayley_coset_graph(
    group: &GeneratedGroup,
    sub: &Subgroup,
    connection: &ConnectionSet,
) -> Result<CayleyGraph> {
    // The set may have been validated against a different subgroup.
    let connection = ConnectionSet::new(group, sub, connection.ids().to_vec())?;
    let space = left_cosets(group, sub);
    let mut arcs = Vec::new();
    let mut removed_loops = 0usize;
    for (qi, q) in space.cosets().iter().enumerate() {
        'target: for (ri, r) in space.cosets().iter().enumerate() {
            for &qe in q {
                let q_inv = group.inverse_id(qe);
                for &re in r {
                    if !connection.contains(group.compose_ids(q_inv, re)) {
                        continue 'target;
                    }
                }
            }
            if qi == ri {
                removed_loops += 1;
            } else {
                arcs.push((qi as u32, ri as u32));
            }
        }
    }
    let labels: Vec<String> = space
        .cosets()
        .iter()
        .map(|c| group.element(c[0]).cycle_string())
        .collect();
    let mut graph = FiniteDigraph::new(space.len(), arcs)?.with_full_core();
    graph.set_labels(labels);
    Ok(CayleyGraph {
        graph,
        cosets: space,
        removed_loops,
    })
}

/// Replays the left-multiplication action: for every group element, the
/// induced map on cosets must be an automorphism of the graph. Exhaustive.
pub fn left_translations_are_automorphisms(group: &GeneratedGroup, cayley: &CayleyGraph) -> bool {
    let n = cayley.cosets.len();
    for gamma in 0..group.order() {
        let map: Vec<u32> = (0..n)
            .map(|q| {
                let moved = group.compose_ids(gamma, cayley.cosets.rep(q));
                cayley.cosets.coset_of(moved) as u32
            })
            .collect();
        if !crate::symmetry::is_automorphism(&cayley.graph, &map) {
            return false;
        }
    }
    true
}

/// Outcome of comparing a coset graph against the same graph over a
/// finer subgroup.
#[derive(Debug, Clone)]
pub struct CloneExpansionReport {
    /// Subgroup index `k = |sub| / |finer|`.
    pub index: usize,
    pub block_sizes_uniform: bool,
    pub blocks_are_clones: bool,
    pub quotient_matches: bool,
    pub coarse_vertices: usize,
    pub fine_vertices: usize,
    pub passed: bool,
}

/// Verifies that refining the subgroup clones every vertex: the coset
/// graph over `finer` partitions into blocks of `k` vertices with equal
/// in- and out-neighbourhoods, and collapsing the blocks recovers the
/// coset graph over `sub`.
pub fn clone_expansion_check(
    group: &GeneratedGroup,
    sub: &Subgroup,
    finer: &Subgroup,
    connection: &ConnectionSet,
) -> Result<CloneExpansionReport> {
    if !finer.is_subgroup_of(sub) {
        return Err(Error::NotASubgroupOf);
    }
    let k = sub.order() / finer.order();
    let coarse = cayley_coset_graph(group, sub, connection)?;
    let fine = cayley_coset_graph(group, finer, connection)?;

    // Block i collects the finer cosets inside coarse coset i.
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); coarse.cosets.len()];
    for j in 0..fine.cosets.len() {
        let host = coarse.cosets.coset_of(fine.cosets.rep(j));
        blocks[host].push(j as u32);
    }

    let block_sizes_uniform = blocks.iter().all(|b| b.len() == k);

    let neighbor_sets = |v: u32| -> (Vec<u32>, Vec<u32>) {
        (
            fine.graph.out_neighbors(v).collect(),
            fine.graph.in_neighbors(v).collect(),
        )
    };
    let blocks_are_clones = blocks.iter().all(|block| {
        let first = neighbor_sets(block[0]);
        block.iter().skip(1).all(|&v| neighbor_sets(v) == first)
    });

    let quotient = quotient_by_partition(&fine.graph, &blocks)?;
    let quotient_matches = quotient.arcs() == coarse.graph.arcs();

    let passed = block_sizes_uniform && blocks_are_clones && quotient_matches;
    Ok(CloneExpansionReport {
        index: k,
        block_sizes_uniform,
        blocks_are_clones,
        quotient_matches,
        coarse_vertices: coarse.cosets.len(),
        fine_vertices: fine.cosets.len(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GeneratedGroup {
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let rot = Permutation::from_cycles(3, "(0 1 2)").unwrap();
        generate_group(&[swap, rot], 100).unwrap()
    }

    fn cyclic(n: usize) -> GeneratedGroup {
        let images: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        generate_group(&[Permutation::from_images(images).unwrap()], 100).unwrap()
    }

    #[test]
    fn closure_sizes() {
        let id = Permutation::identity(4);
        assert_eq!(generate_group(&[id], 10).unwrap().order(), 1);
        assert_eq!(cyclic(5).order(), 5);
        assert_eq!(s3().order(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let rot = Permutation::from_cycles(5, "(0 1 2 3 4)").unwrap();
        let swap = Permutation::from_cycles(5, "(0 1)").unwrap();
        assert!(matches!(
            generate_group(&[rot, swap], 10),
            Err(Error::GroupTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::from_cycles(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(p.cycle_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::from_cycles(4, "id").unwrap(), Permutation::identity(4));
        assert!(Permutation::from_cycles(3, "(0 5)").is_err());
        assert!(Permutation::from_cycles(3, "(0 0)").is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_cycles(4, "(0 1 2 3)").unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        let q = Permutation::from_cycles(4, "(0 1)").unwrap();
        // (p * q)(x) = p(q(x)): q swaps 0,1 then p rotates.
        let pq = p.compose(&q);
        assert_eq!(pq.apply(0), 2);
        assert_eq!(pq.apply(1), 1);
    }

    #[test]
    fn coset_counts() {
        let g = s3();
        assert_eq!(left_cosets(&g, &g.whole()).len(), 1);
        assert_eq!(left_cosets(&g, &g.trivial()).len(), 6);
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let lambda = g.subgroup(&[swap]).unwrap();
        assert_eq!(lambda.order(), 2);
        let space = left_cosets(&g, &lambda);
        assert_eq!(space.len(), 3);
        assert_eq!(g.order(), lambda.order() * space.len());
        // Every element lands in exactly one coset.
        for e in 0..g.order() {
            let c = space.coset_of(e);
            assert!(space.cosets()[c].contains(&e));
        }
    }

    #[test]
    fn subgroup_validation() {
        let g = s3();
        let swap_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1)").unwrap())
            .unwrap();
        assert!(g.subgroup_from_ids(vec![0, swap_id]).is_ok());
        // Dropping the identity or closure fails.
        assert!(g.subgroup_from_ids(vec![swap_id]).is_err());
        let rot_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1 2)").unwrap())
            .unwrap();
        assert!(g.subgroup_from_ids(vec![0, rot_id]).is_err());
    }

    #[test]
    fn directed_cycle_from_trivial_subgroup() {
        let g = cyclic(5);
        let gen = g
            .id_of(&Permutation::from_cycles(5, "(0 1 2 3 4)").unwrap())
            .unwrap();
        let a = ConnectionSet::new(&g, &g.trivial(), vec![gen]).unwrap();
        let cay = cayley_coset_graph(&g, &g.trivial(), &a).unwrap();
        assert_eq!(cay.graph.vertex_count(), 5);
        assert_eq!(cay.graph.arc_count(), 5);
        assert_eq!(cay.removed_loops, 0);
        for v in 0..5u32 {
            assert_eq!(cay.graph.out_degree(v), 1);
            assert_eq!(cay.graph.in_degree(v), 1);
        }
        assert!(left_translations_are_automorphisms(&g, &cay));
    }

    #[test]
    fn whole_subgroup_collapses_to_a_point() {
        let g = s3();
        let a = ConnectionSet::new(&g, &g.whole(), (0..g.order()).collect()).unwrap();
        let cay = cayley_coset_graph(&g, &g.whole(), &a).unwrap();
        assert_eq!(cay.graph.vertex_count(), 1);
        assert_eq!(cay.graph.arc_count(), 0);
        assert_eq!(cay.removed_loops, 1);
    }

    #[test]
    fn saturation_is_required() {
        let g = s3();
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let lambda = g.subgroup(&[swap]).unwrap();
        let rot_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1 2)").unwrap())
            .unwrap();
        // A bare rotation is not a union of double cosets.
        assert!(matches!(
            ConnectionSet::new(&g, &lambda, vec![rot_id]),
            Err(Error::NotSaturated { .. })
        ));
        // Its double coset is.
        let dc = g.double_coset(&lambda, rot_id);
        assert_eq!(dc.len(), 4);
        assert!(ConnectionSet::new(&g, &lambda, dc).is_ok());
    }

    #[test]
    fn s3_coset_graph_matches_representative_rule() {
        let g = s3();
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let lambda = g.subgroup(&[swap]).unwrap();
        let rot_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1 2)").unwrap())
            .unwrap();
        let a = ConnectionSet::new(&g, &lambda, g.double_coset(&lambda, rot_id)).unwrap();
        let cay = cayley_coset_graph(&g, &lambda, &a).unwrap();
        assert_eq!(cay.graph.vertex_count(), 3);
        // Independent route: saturation makes the subset test equivalent
        // to membership of the representative product.
        let space = &cay.cosets;
        for q in 0..space.len() {
            for r in 0..space.len() {
                let rep_product =
                    g.compose_ids(g.inverse_id(space.rep(q)), space.rep(r));
                let expected = a.contains(rep_product) && q != r;
                assert_eq!(cay.graph.has_arc(q as u32, r as u32), expected);
            }
        }
        assert!(left_translations_are_automorphisms(&g, &cay));
    }

    #[test]
    fn clone_expansion_trivial_refinement() {
        let g = s3();
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let lambda = g.subgroup(&[swap]).unwrap();
        let rot_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1 2)").unwrap())
            .unwrap();
        let a = ConnectionSet::new(&g, &lambda, g.double_coset(&lambda, rot_id)).unwrap();
        let report = clone_expansion_check(&g, &lambda, &lambda, &a).unwrap();
        assert_eq!(report.index, 1);
        assert!(report.passed);
    }

    #[test]
    fn clone_expansion_cyclic_four() {
        let g = cyclic(4);
        let c2 = Permutation::from_cycles(4, "(0 2)(1 3)").unwrap();
        let lambda = g.subgroup(&[c2]).unwrap();
        assert_eq!(lambda.order(), 2);
        let c = g
            .id_of(&Permutation::from_cycles(4, "(0 1 2 3)").unwrap())
            .unwrap();
        let a = ConnectionSet::new(&g, &lambda, g.double_coset(&lambda, c)).unwrap();
        let report = clone_expansion_check(&g, &lambda, &g.trivial(), &a).unwrap();
        assert_eq!(report.index, 2);
        assert!(report.block_sizes_uniform);
        assert!(report.blocks_are_clones);
        assert!(report.quotient_matches);
        assert!(report.passed);
    }

    #[test]
    fn clone_expansion_s3() {
        let g = s3();
        let swap = Permutation::from_cycles(3, "(0 1)").unwrap();
        let lambda = g.subgroup(&[swap]).unwrap();
        let rot_id = g
            .id_of(&Permutation::from_cycles(3, "(0 1 2)").unwrap())
            .unwrap();
        let a = ConnectionSet::new(&g, &lambda, g.double_coset(&lambda, rot_id)).unwrap();
        let report = clone_expansion_check(&g, &lambda, &g.trivial(), &a).unwrap();
        assert_eq!(report.index, 2);
        assert!(report.passed);
    }
}

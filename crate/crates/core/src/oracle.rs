//! Slow reference routines used to cross-check the fast implementations.
//! These deliberately follow the defining formulas rather than the data
//! structures of the main modules, so the two routes stay independent.

use crate::digraph::{ArcId, FiniteDigraph};

/// Which endpoint two consecutive arcs of an alternating walk share.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shared {
    Head,
    Tail,
}

impl Shared {
    pub fn flip(self) -> Shared {
        match self {
            Shared::Head => Shared::Tail,
            Shared::Tail => Shared::Head,
        }
    }
}

/// All arcs reachable from `seed` by literally enumerating alternating
/// walks of at most `max_len` arcs, with both starting polarities and
/// revisits allowed. Exponential in `max_len`; for small graphs only.
pub fn alternating_reach_by_walks(
    g: &FiniteDigraph,
    seed: ArcId,
    max_len: usize,
) -> Vec<ArcId> {
    let mut reached = vec![false; g.arc_count()];
    reached[seed as usize] = true;
    for polarity in [Shared::Head, Shared::Tail] {
        walk(g, seed, polarity, max_len, &mut reached);
    }
    (0..g.arc_count() as ArcId)
        .filter(|&id| reached[id as usize])
        .collect()
}

fn walk(g: &FiniteDigraph, at: ArcId, share: Shared, budget: usize, reached: &mut [bool]) {
    if budget <= 1 {
        return;
    }
    let (tail, head) = g.arc(at);
    match share {
        Shared::Head => {
            for b in g.in_arc_ids(head) {
                reached[b as usize] = true;
                walk(g, b, Shared::Tail, budget - 1, reached);
            }
        }
        Shared::Tail => {
            for b in g.out_arc_ids(tail) {
                reached[b as usize] = true;
                walk(g, b, Shared::Head, budget - 1, reached);
            }
        }
    }
}

/// Maximum number of arcs in any shortest alternating walk found by a
/// breadth-first sweep from `seed`; used to decide when the bounded oracle
/// above is exhaustive.
pub fn alternating_eccentricity(g: &FiniteDigraph, seed: ArcId) -> usize {
    let states = g.arc_count() * 2;
    let mut dist = vec![usize::MAX; states];
    let mut queue = std::collections::VecDeque::new();
    for pol in 0..2 {
        dist[seed as usize * 2 + pol] = 0;
        queue.push_back(seed as usize * 2 + pol);
    }
    let mut max = 0;
    while let Some(s) = queue.pop_front() {
        let (arc, pol) = ((s / 2) as ArcId, s % 2);
        let (tail, head) = g.arc(arc);
        let next: Vec<ArcId> = if pol == 0 {
            g.in_arc_ids(head).collect()
        } else {
            g.out_arc_ids(tail).collect()
        };
        for b in next {
            let t = b as usize * 2 + (1 - pol);
            if dist[t] == usize::MAX {
                dist[t] = dist[s] + 1;
                max = max.max(dist[t]);
                queue.push_back(t);
            }
        }
    }
    max
}

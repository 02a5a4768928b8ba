//! Projective geometry over prime fields: enumeration of the proper
//! subspaces of GF(q)^{n+1} in canonical reduced row-echelon form, and the
//! containment template they induce.

use crate::constructions::LeveledTemplate;
use crate::error::{Error, Result};

/// A subspace of GF(q)^{n+1} identified by its reduced row-echelon basis.
/// The echelon form is unique per subspace, so equality of bases is
/// equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubspaceCanon {
    /// Ambient vector-space dimension, `n + 1`.
    pub ambient: usize,
    /// Linear rank; projective dimension is `rank - 1`.
    pub rank: usize,
    /// `rank` rows of length `ambient`, entries reduced mod q.
    pub basis: Vec<Vec<u8>>,
}

impl SubspaceCanon {
    /// Membership of a vector in the row space, by elimination against the
    /// echelon basis.
    pub fn contains_vector(&self, v: &[u8], q: u8) -> bool {
        let mut v = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|&x| x != 0).expect("nonzero row");
            if v[pivot] != 0 {
                let factor = v[pivot];
                for (slot, &r) in v.iter_mut().zip(row) {
                    *slot = sub_mod(*slot, mul_mod(factor, r, q), q);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// True when `self` is a subspace of `other`.
    pub fn is_subspace_of(&self, other: &SubspaceCanon, q: u8) -> bool {
        self.basis.iter().all(|row| other.contains_vector(row, q))
    }
}

fn mul_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 * b as u16) % q as u16) as u8
}

fn sub_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as i16 - b as i16).rem_euclid(q as i16)) as u8
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of rank-`d` subspaces of GF(q)^{dim}, by the Gaussian binomial
/// product formula. Independent of the echelon enumeration; the two must
/// agree.
pub fn gaussian_binomial(dim: usize, d: usize, q: u64) -> u128 {
    if d > dim {
        return 0;
    }
    // prod_{i=0}^{d-1} (q^{dim-i} - 1) / (q^{d-i} - 1), computed as an
    // exact alternating product to stay in integers.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= pow(q as u128, dim - i) - 1;
        den *= pow(q as u128, d - i) - 1;
    }
    debug_assert_eq!(num % den, 0);
    num / den
}

fn pow(base: u128, exp: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// The total number of proper subspaces of all ranks `1..=n`, used to keep
/// enumerations at desk scale.
pub fn total_proper_subspaces(n: usize, q: u64) -> u128 {
    (1..=n).map(|d| gaussian_binomial(n + 1, d, q)).sum()
}

const SUBSPACE_CAP: u128 = 100_000;

/// All rank-`d` subspaces of GF(q)^{n+1} for prime `q`, in canonical
/// echelon form, sorted lexicographically by basis.
pub fn pg_subspaces(n: usize, q: u64, d: usize) -> Result<Vec<SubspaceCanon>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "projective dimension n must be at least 2, got {n}"
        )));
    }
    if d < 1 || d > n {
        return Err(Error::RankOutOfRange { d, n });
    }
    if gaussian_binomial(n + 1, d, q) > SUBSPACE_CAP {
        return Err(Error::InvalidArgument(format!(
            "rank-{d} subspace count exceeds the cap of {SUBSPACE_CAP}"
        )));
    }
    let ambient = n + 1;
    let qu = q as u8;

    // Enumerate echelon bases directly: choose pivot columns, then assign
    // the free entries. An entry of row i is free iff it sits strictly
    // right of pivot i and not in a pivot column.
    let mut out = Vec::new();
    let mut pivots = vec![0usize; d];
    enumerate_pivot_sets(ambient, d, 0, &mut pivots, &mut |pivots| {
        let mut free_slots = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for col in p + 1..ambient {
                if !pivots.contains(&col) {
                    free_slots.push((i, col));
                }
            }
        }
        let mut assignment = vec![0u8; free_slots.len()];
        loop {
            let mut basis = vec![vec![0u8; ambient]; d];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            for (&(i, col), &val) in free_slots.iter().zip(&assignment) {
                basis[i][col] = val;
            }
            out.push(SubspaceCanon {
                ambient,
                rank: d,
                basis,
            });
            // Odometer over GF(q) assignments.
            let mut j = 0;
            loop {
                if j == assignment.len() {
                    return;
                }
                assignment[j] += 1;
                if assignment[j] < qu {
                    break;
                }
                assignment[j] = 0;
                j += 1;
            }
        }
    });

    out.sort_unstable();
    debug_assert_eq!(out.len() as u128, gaussian_binomial(ambient, d, q));
    Ok(out)
}

fn enumerate_pivot_sets(
    ambient: usize,
    d: usize,
    from: usize,
    pivots: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    fn rec(
        ambient: usize,
        d: usize,
        from: usize,
        depth: usize,
        pivots: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize]),
    ) {
        if depth == d {
            emit(pivots);
            return;
        }
        for col in from..ambient {
            pivots[depth] = col;
            rec(ambient, d, col + 1, depth + 1, pivots, emit);
        }
    }
    rec(ambient, d, from, 0, pivots, emit);
}

/// The containment template of PG(n, q): level `i` holds the rank-`i`
/// subspaces for every proper rank `1..=n`, and an arc joins `x` to `y`
/// exactly when `x` is a subspace of `y` one rank below. All `n` proper
/// ranks are exposed as levels.
pub fn incidence_template(n: usize, q: u64) -> Result<GeometryTemplate> {
    let by_rank: Vec<Vec<SubspaceCanon>> = (1..=n)
        .map(|d| pg_subspaces(n, q, d))
        .collect::<Result<_>>()?;
    let level_sizes: Vec<usize> = by_rank.iter().map(|l| l.len()).collect();
    let qu = q as u8;
    let mut arcs = Vec::new();
    for (level, pair) in by_rank.windows(2).enumerate() {
        for (src, x) in pair[0].iter().enumerate() {
            for (dst, y) in pair[1].iter().enumerate() {
                if x.is_subspace_of(y, qu) {
                    arcs.push((level, src, dst));
                }
            }
        }
    }
    let template = LeveledTemplate::new(level_sizes, arcs)?;
    Ok(GeometryTemplate { template, by_rank })
}

/// A leveled template together with the subspaces behind its vertices.
#[derive(Debug, Clone)]
pub struct GeometryTemplate {
    pub template: LeveledTemplate,
    /// `by_rank[i]` lists the subspaces of rank `i + 1`, in template
    /// vertex order.
    pub by_rank: Vec<Vec<SubspaceCanon>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force subspace census: spans of all d-subsets of vectors,
    /// deduplicated by membership signature over the whole space.
    fn subspace_count_oracle(n: usize, q: u64, d: usize) -> usize {
        let ambient = n + 1;
        let qu = q as u8;
        let total = pow(q as u128, ambient) as usize;
        let vector = |mut i: usize| -> Vec<u8> {
            let mut v = vec![0u8; ambient];
            for slot in v.iter_mut().rev() {
                *slot = (i % q as usize) as u8;
                i /= q as usize;
            }
            v
        };
        // Closure of a generating set under addition and scaling, as a
        // sorted signature of member indices.
        let index = |v: &[u8]| -> usize {
            v.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
        };
        let mut seen = std::collections::BTreeSet::new();
        let mut gens = vec![0usize; d];
        fn rec(
            gens: &mut Vec<usize>,
            depth: usize,
            from: usize,
            total: usize,
            emit: &mut impl FnMut(&[usize]),
        ) {
            if depth == gens.len() {
                emit(gens);
                return;
            }
            for i in from..total {
                gens[depth] = i;
                rec(gens, depth + 1, i + 1, total, emit);
            }
        }
        rec(&mut gens, 0, 1, total, &mut |gens| {
            // Span by closing under addition of generators.
            let mut members = std::collections::BTreeSet::new();
            members.insert(0usize);
            let mut frontier = vec![0usize];
            while let Some(m) = frontier.pop() {
                for &g in gens.iter() {
                    let sum: Vec<u8> = vector(m)
                        .iter()
                        .zip(vector(g))
                        .map(|(&a, b)| (a + b) % qu)
                        .collect();
                    let s = index(&sum);
                    if members.insert(s) {
                        frontier.push(s);
                    }
                }
            }
            if members.len() == pow(q as u128, gens.len()) as usize {
                // Independent generators: record the span.
                seen.insert(members.into_iter().collect::<Vec<_>>());
            }
        });
        seen.len()
    }

    #[test]
    fn fano_points_and_lines() {
        let points = pg_subspaces(2, 2, 1).unwrap();
        assert_eq!(points.len(), 7);
        let lines = pg_subspaces(2, 2, 2).unwrap();
        assert_eq!(lines.len(), 7);
        // Echelon canonical form keeps them distinct and sorted.
        for w in points.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for (n, q, d, want) in [
            (2, 2, 1, 7u128),
            (2, 2, 2, 7),
            (2, 3, 1, 13),
            (3, 2, 1, 15),
            (3, 2, 2, 35),
            (3, 2, 3, 15),
        ] {
            assert_eq!(gaussian_binomial(n + 1, d, q), want);
            assert_eq!(pg_subspaces(n, q, d).unwrap().len() as u128, want);
        }
    }

    #[test]
    fn counts_match_span_oracle() {
        // Exhaustive span enumeration agrees with the echelon enumeration.
        for (n, q, d) in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1), (3, 2, 2)] {
            assert_eq!(
                pg_subspaces(n, q, d).unwrap().len(),
                subspace_count_oracle(n, q, d),
                "PG({n},{q}) rank {d}"
            );
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(pg_subspaces(2, 4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(
            pg_subspaces(2, 2, 0),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(
            pg_subspaces(2, 2, 3),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(pg_subspaces(1, 2, 1).is_err());
    }

    #[test]
    fn fano_template_regular() {
        let g = incidence_template(2, 2).unwrap();
        assert_eq!(g.template.level_sizes(), &[7, 7]);
        // Every point on 3 lines, every line through 3 points; checked over
        // all 49 pairs by the template arc set.
        for p in 0..7 {
            assert_eq!(g.template.out_neighbors(0, p).len(), 3);
        }
        for l in 0..7 {
            assert_eq!(g.template.in_neighbors(1, l).len(), 3);
        }
    }

    #[test]
    fn pg32_template_shape() {
        let g = incidence_template(3, 2).unwrap();
        assert_eq!(g.template.level_sizes(), &[15, 35, 15]);
        for p in 0..15 {
            assert_eq!(g.template.out_neighbors(0, p).len(), 7);
        }
        for l in 0..35 {
            assert_eq!(g.template.in_neighbors(1, l).len(), 3);
            assert_eq!(g.template.out_neighbors(1, l).len(), 3);
        }
        for h in 0..15 {
            assert_eq!(g.template.in_neighbors(2, h).len(), 7);
        }
    }

    #[test]
    fn pg23_template_shape() {
        let g = incidence_template(2, 3).unwrap();
        assert_eq!(g.template.level_sizes(), &[13, 13]);
        for p in 0..13 {
            assert_eq!(g.template.out_neighbors(0, p).len(), 4);
        }
    }

    #[test]
    fn template_double_counting() {
        // Arcs counted from either side agree: level-regularity makes the
        // flag count a product both ways.
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let g = incidence_template(n, q).unwrap();
            let sizes = g.template.level_sizes().to_vec();
            for level in 0..sizes.len() - 1 {
                let out: usize = (0..sizes[level])
                    .map(|v| g.template.out_neighbors(level, v).len())
                    .sum();
                let inn: usize = (0..sizes[level + 1])
                    .map(|v| g.template.in_neighbors(level + 1, v).len())
                    .sum();
                assert_eq!(out, inn);
            }
        }
    }

    #[test]
    fn level_regularity() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let g = incidence_template(n, q).unwrap();
            let sizes = g.template.level_sizes().to_vec();
            for (level, &size) in sizes.iter().enumerate() {
                let outs: Vec<usize> = (0..size)
                    .map(|v| g.template.out_neighbors(level, v).len())
                    .collect();
                let ins: Vec<usize> = (0..size)
                    .map(|v| g.template.in_neighbors(level, v).len())
                    .collect();
                assert!(outs.windows(2).all(|w| w[0] == w[1]));
                assert!(ins.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn containment_is_what_arcs_say() {
        let g = incidence_template(3, 2).unwrap();
        let lines = &g.by_rank[1];
        let planes = &g.by_rank[2];
        for (src, x) in lines.iter().enumerate() {
            for (dst, y) in planes.iter().enumerate() {
                assert_eq!(g.template.has_arc(1, src, dst), x.is_subspace_of(y, 2));
            }
        }
    }
}

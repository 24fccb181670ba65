//! Wall enumeration and the wall route to rank.
//!
//! A wall is a partition of the algebra into two nonempty median-convex
//! halves. Every wall of a finite median algebra is determined by one of its
//! two-point intervals: if `[a,b] = {a,b}` then `x -> med(a,b,x)` projects
//! the algebra onto `{a,b}`, and the fibres are the two halves. Enumerating
//! two-point intervals and deduplicating therefore lists every wall without
//! scanning all bipartitions; the brute-force bipartition search survives as
//! the independent test oracle.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::FiniteMedianAlgebra;

/// A wall: two disjoint nonempty median-convex halves covering the algebra.
/// `side_a` is the side containing the canonically least element; both sides
/// are sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wall {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Wall {
    /// True if all four quarterspaces of the two walls are nonempty.
    pub fn crosses(&self, other: &Wall) -> bool {
        let quarter = |x: &[usize], y: &[usize]| {
            let ys: BTreeSet<usize> = y.iter().copied().collect();
            x.iter().any(|v| ys.contains(v))
        };
        quarter(&self.side_a, &other.side_a)
            && quarter(&self.side_a, &other.side_b)
            && quarter(&self.side_b, &other.side_a)
            && quarter(&self.side_b, &other.side_b)
    }

    pub fn side_names(&self, alg: &FiniteMedianAlgebra) -> (Vec<String>, Vec<String>) {
        let lift = |s: &[usize]| s.iter().map(|&i| alg.name(i).to_string()).collect();
        (lift(&self.side_a), lift(&self.side_b))
    }
}

pub(super) fn enumerate_walls(
    alg: &FiniteMedianAlgebra,
    limits: &Limits,
) -> Result<Vec<Wall>> {
    let n = alg.len();
    if n > limits.max_elements {
        return Err(Error::limit(format!(
            "wall enumeration capped at {} elements, algebra has {n}",
            limits.max_elements
        )));
    }
    if let Some(walls) = alg.walls_cache().get() {
        return Ok(walls.clone());
    }

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut walls = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if alg.interval(a, b).len() != 2 {
                continue;
            }
            let mut side_a = Vec::new();
            let mut side_b = Vec::new();
            let mut ok = true;
            for x in 0..n {
                let p = alg.med(a, b, x);
                if p == a {
                    side_a.push(x);
                } else if p == b {
                    side_b.push(x);
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                return Err(Error::input(
                    "projection onto a two-point interval left the interval: \
                     table is not a median algebra",
                ));
            }
            // Canonical orientation: side_a holds element 0.
            if side_b.contains(&0) {
                std::mem::swap(&mut side_a, &mut side_b);
            }
            if seen.insert(side_a.clone()) {
                if !alg.is_convex(&side_a) || !alg.is_convex(&side_b) {
                    return Err(Error::input(
                        "a halfspace failed convexity: table is not a median algebra",
                    ));
                }
                walls.push(Wall { side_a, side_b });
            }
        }
    }
    walls.sort();
    let _ = alg.walls_cache().set(walls.clone());
    Ok(walls)
}

/// Maximum pairwise-crossing wall family. Returns (size, lexicographically
/// least witness as indices into `walls`).
pub(super) fn max_crossing_family(walls: &[Wall]) -> (usize, Vec<usize>) {
    let w = walls.len();
    let mut cross = vec![vec![false; w]; w];
    for i in 0..w {
        for j in i + 1..w {
            let c = walls[i].crosses(&walls[j]);
            cross[i][j] = c;
            cross[j][i] = c;
        }
    }

    // Depth-first max-clique; walls are few (at most n-1), so no cleverness
    // is needed. Scanning candidates in ascending index order makes the
    // first maximum clique found the lexicographically least one.
    fn extend(
        cross: &[Vec<bool>],
        current: &mut Vec<usize>,
        start: usize,
        best: &mut Vec<usize>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for cand in start..cross.len() {
            if current.iter().all(|&c| cross[c][cand]) {
                current.push(cand);
                extend(cross, current, cand + 1, best);
                current.pop();
            }
        }
    }

    let mut best = Vec::new();
    let mut current = Vec::new();
    extend(&cross, &mut current, 0, &mut best);
    (best.len(), best)
}

#[cfg(test)]
mod tests {
    use super::super::{hypercube, lattice_box, tree_median};
    use super::*;

    fn default_walls(alg: &FiniteMedianAlgebra) -> Vec<Wall> {
        enumerate_walls(alg, &Limits::default()).unwrap()
    }

    #[test]
    fn square_has_two_coordinate_walls() {
        let sq = hypercube(2, &Limits::default()).unwrap();
        let walls = default_walls(&sq);
        assert_eq!(walls.len(), 2);
        for wall in &walls {
            assert_eq!(wall.side_a.len(), 2);
            assert_eq!(wall.side_b.len(), 2);
        }
        assert!(walls[0].crosses(&walls[1]));
    }

    #[test]
    fn three_point_path_has_two_non_crossing_walls() {
        let edges = vec![
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "c".to_string()),
        ];
        let t = tree_median(&edges, &Limits::default()).unwrap();
        let walls = default_walls(&t);
        assert_eq!(walls.len(), 2);
        assert!(!walls[0].crosses(&walls[1]));
    }

    #[test]
    fn box_3x2_has_three_walls() {
        let b = lattice_box(&[3, 2], &Limits::default()).unwrap();
        assert_eq!(default_walls(&b).len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let b = lattice_box(&[3, 2], &Limits::default()).unwrap();
        let tight = Limits {
            max_elements: 4,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_walls(&b, &tight),
            Err(Error::Limit(_))
        ));
    }

    /// Brute-force oracle: all bipartitions with both sides convex.
    fn walls_by_bipartition(alg: &FiniteMedianAlgebra) -> Vec<Wall> {
        let n = alg.len();
        assert!(n <= 16, "oracle is exponential");
        let mut out = Vec::new();
        // Fix element 0 in side_a to halve the scan.
        for mask in 0..(1u32 << (n - 1)) {
            let full = (mask << 1) | 1;
            let side_a: Vec<usize> = (0..n).filter(|&i| full >> i & 1 == 1).collect();
            let side_b: Vec<usize> = (0..n).filter(|&i| full >> i & 1 == 0).collect();
            if side_b.is_empty() {
                continue;
            }
            if alg.is_convex(&side_a) && alg.is_convex(&side_b) {
                out.push(Wall { side_a, side_b });
            }
        }
        out.sort();
        out
    }

    #[test]
    fn edge_wall_enumeration_matches_bipartition_oracle() {
        let limits = Limits::default();
        let fixtures = vec![
            hypercube(2, &limits).unwrap(),
            hypercube(3, &limits).unwrap(),
            lattice_box(&[3, 2], &limits).unwrap(),
            lattice_box(&[4, 2], &limits).unwrap(),
            lattice_box(&[2, 2, 2], &limits).unwrap(),
            tree_median(
                &[
                    ("r".into(), "a".into()),
                    ("r".into(), "b".into()),
                    ("r".into(), "c".into()),
                    ("a".into(), "d".into()),
                ],
                &limits,
            )
            .unwrap(),
        ];
        for alg in &fixtures {
            assert_eq!(default_walls(alg), walls_by_bipartition(alg));
        }
    }
}

//! Rank, computed along two independent routes that must agree.

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::{cube, walls, FiniteMedianAlgebra, Wall};

/// Rank of a finite median algebra, with witnesses for both routes:
/// a maximum family of pairwise-crossing walls, and an injective median
/// morphism from `{0,1}^rank` (images listed in binary vertex order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub rank_walls: usize,
    pub rank_cube: usize,
    pub witness_walls: Vec<Wall>,
    pub witness_cube: Vec<usize>,
}

impl RankReport {
    pub fn rank(&self) -> usize {
        debug_assert_eq!(self.rank_walls, self.rank_cube);
        self.rank_walls
    }

    /// Re-verifies both witnesses against the algebra.
    pub fn verify(&self, alg: &FiniteMedianAlgebra) -> Result<()> {
        if self.rank_walls != self.rank_cube {
            return Err(Error::input(format!(
                "rank witnesses disagree: {} walls vs cube dimension {}",
                self.rank_walls, self.rank_cube
            )));
        }
        if self.witness_walls.len() != self.rank_walls {
            return Err(Error::input("wall witness has the wrong size"));
        }
        for (i, w) in self.witness_walls.iter().enumerate() {
            if !alg.is_convex(&w.side_a) || !alg.is_convex(&w.side_b) {
                return Err(Error::input(format!("wall witness {i} is not a wall")));
            }
            let mut union: Vec<usize> =
                w.side_a.iter().chain(&w.side_b).copied().collect();
            union.sort_unstable();
            if union != (0..alg.len()).collect::<Vec<_>>() {
                return Err(Error::input(format!(
                    "wall witness {i} does not partition the algebra"
                )));
            }
            for v in self.witness_walls.iter().skip(i + 1) {
                if !w.crosses(v) {
                    return Err(Error::input("wall witnesses do not pairwise cross"));
                }
            }
        }
        let size = 1usize
            .checked_shl(self.rank_cube as u32)
            .ok_or_else(|| Error::input("cube witness dimension overflows"))?;
        if self.witness_cube.len() != size {
            return Err(Error::input("cube witness has the wrong size"));
        }
        let mut sorted = self.witness_cube.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != size {
            return Err(Error::input("cube witness is not injective"));
        }
        for p in 0..size {
            for q in p..size {
                for r in q..size {
                    let maj = (p & q) | (q & r) | (p & r);
                    if alg.med(
                        self.witness_cube[p],
                        self.witness_cube[q],
                        self.witness_cube[r],
                    ) != self.witness_cube[maj]
                    {
                        return Err(Error::input(
                            "cube witness is not a median morphism",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(super) fn rank(alg: &FiniteMedianAlgebra, limits: &Limits) -> Result<RankReport> {
    if let Some(cached) = alg.rank_cache().get() {
        return Ok(cached.clone());
    }
    if alg.len() > limits.max_elements {
        return Err(Error::limit(format!(
            "rank computation capped at {} elements, algebra has {}",
            limits.max_elements,
            alg.len()
        )));
    }

    let all_walls = walls::enumerate_walls(alg, limits)?;
    let (rank_walls, clique) = walls::max_crossing_family(&all_walls);
    let witness_walls: Vec<Wall> = clique.iter().map(|&i| all_walls[i].clone()).collect();

    let cube_witness = cube::max_cube(alg);

    let report = RankReport {
        rank_walls,
        rank_cube: cube_witness.dim,
        witness_walls,
        witness_cube: cube_witness.images,
    };
    if report.rank_walls != report.rank_cube {
        return Err(Error::input(format!(
            "the two rank oracles disagree ({} walls vs cube {}): \
             the table is not a median algebra",
            report.rank_walls, report.rank_cube
        )));
    }
    let _ = alg.rank_cache().set(report.clone());
    Ok(report)
}

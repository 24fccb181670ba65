//! Finite median algebras.
//!
//! A median algebra is a set with a symmetric ternary operation `med`
//! satisfying absorption (`med(a,a,x) = a`) and the five-point condition
//! (`med(a,b,med(x,y,z)) = med(med(a,b,x),med(a,b,y),z)`). This module keeps
//! everything finite and exact: elements are opaque identifiers, the
//! operation is a total table, and the optional metric is a table of exact
//! rationals.

mod constructors;
mod cube;
mod identities;
mod json;
mod rank;
mod walls;

pub use constructors::{hypercube, lattice_box, product, tree_median};
pub use identities::{ball_hull_bound_check, five_point_chain_check};
pub use rank::RankReport;
pub use walls::Wall;

use std::collections::HashMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Which axiom of a median algebra failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum MedianAxiom {
    /// `med(a,a,x) = a`
    Absorption,
    /// `med` is invariant under permuting its arguments
    Symmetry,
    /// `med(a,b,med(x,y,z)) = med(med(a,b,x),med(a,b,y),z)`
    FivePoint,
}

impl std::fmt::Display for MedianAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MedianAxiom::Absorption => write!(f, "absorption"),
            MedianAxiom::Symmetry => write!(f, "symmetry"),
            MedianAxiom::FivePoint => write!(f, "five-point condition"),
        }
    }
}

/// Outcome of `verify_median_axioms`: pass, or the first violated axiom
/// together with a concrete counterexample tuple (element names).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum MedianCheck {
    Pass,
    Fail {
        axiom: MedianAxiom,
        tuple: Vec<String>,
        detail: String,
    },
}

impl MedianCheck {
    pub fn passed(&self) -> bool {
        matches!(self, MedianCheck::Pass)
    }
}

/// A finite median algebra: an element set with a total ternary table and an
/// optional exact-rational metric.
///
/// The element order given at construction is the canonical order used for
/// every deterministic tie-break in this crate.
pub struct FiniteMedianAlgebra {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Flattened ternary table; entry for `(i,j,k)` at `(i*n + j)*n + k`.
    table: Vec<u32>,
    /// Optional distance table, row-major `n*n`, exact rationals.
    metric: Option<Vec<BigRational>>,
    rank_cache: OnceLock<RankReport>,
    walls_cache: OnceLock<Vec<Wall>>,
}

impl Clone for FiniteMedianAlgebra {
    fn clone(&self) -> Self {
        FiniteMedianAlgebra {
            names: self.names.clone(),
            index: self.index.clone(),
            table: self.table.clone(),
            metric: self.metric.clone(),
            rank_cache: OnceLock::new(),
            walls_cache: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for FiniteMedianAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMedianAlgebra")
            .field("size", &self.len())
            .field("metric", &self.metric.is_some())
            .finish()
    }
}

impl FiniteMedianAlgebra {
    /// Builds an algebra from named elements and a total table of indices.
    ///
    /// The table is not verified here; call
    /// [`verify_median_axioms`](Self::verify_median_axioms) to check it.
    /// Fails if names collide, the table has the wrong length, or an entry
    /// is out of range.
    pub fn from_table(
        names: Vec<String>,
        table: Vec<u32>,
        metric: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::input("element set must be nonempty"));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate element {name:?}")));
            }
        }
        if table.len() != n * n * n {
            return Err(Error::input(format!(
                "ternary table must be total: expected {} entries, got {}",
                n * n * n,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= n) {
            return Err(Error::input(format!(
                "table entry {bad} is not a valid element index (size {n})"
            )));
        }
        if let Some(m) = &metric {
            if m.len() != n * n {
                return Err(Error::input(format!(
                    "metric table must have {} entries, got {}",
                    n * n,
                    m.len()
                )));
            }
        }
        Ok(FiniteMedianAlgebra {
            names,
            index,
            table,
            metric,
            rank_cache: OnceLock::new(),
            walls_cache: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Resolves an element name to its canonical index.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown element {name:?}")))
    }

    #[inline]
    pub fn med(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.len();
        self.table[(i * n + j) * n + k] as usize
    }

    pub fn has_metric(&self) -> bool {
        self.metric.is_some()
    }

    /// Exact distance between two elements; `InputError` without a metric.
    pub fn dist(&self, i: usize, j: usize) -> Result<&BigRational> {
        let n = self.len();
        self.metric
            .as_ref()
            .map(|m| &m[i * n + j])
            .ok_or_else(|| Error::input("algebra carries no metric"))
    }

    /// The distance table, row-major, when a metric is attached.
    pub fn metric_table(&self) -> Option<&[BigRational]> {
        self.metric.as_deref()
    }

    /// The flattened ternary table (`(i*n + j)*n + k` indexing).
    pub fn raw_table(&self) -> &[u32] {
        &self.table
    }

    pub(crate) fn rank_cache(&self) -> &OnceLock<RankReport> {
        &self.rank_cache
    }

    pub(crate) fn walls_cache(&self) -> &OnceLock<Vec<Wall>> {
        &self.walls_cache
    }

    fn tuple_names(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&i| self.names[i].clone()).collect()
    }

    /// Checks the three median-algebra axioms on the full table.
    ///
    /// Reports pass, or the first violated axiom with a concrete
    /// counterexample tuple, scanning in canonical element order. Absorption
    /// is checked first, then symmetry, then the five-point condition; the
    /// five-point scan exploits symmetry (already verified at that point) to
    /// restrict to `a <= b`, `x <= y`.
    pub fn verify_median_axioms(&self) -> MedianCheck {
        let n = self.len();
        let t = &self.table;
        let at = |i: usize, j: usize, k: usize| t[(i * n + j) * n + k] as usize;

        // Axiom 1: absorption.
        for a in 0..n {
            for x in 0..n {
                if at(a, a, x) != a {
                    return MedianCheck::Fail {
                        axiom: MedianAxiom::Absorption,
                        tuple: self.tuple_names(&[a, a, x]),
                        detail: format!(
                            "med({a0}, {a0}, {x0}) = {m0}, expected {a0}",
                            a0 = self.names[a],
                            x0 = self.names[x],
                            m0 = self.names[at(a, a, x)]
                        ),
                    };
                }
            }
        }

        // Axiom 2: symmetry under all argument permutations.
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = at(i, j, k);
                    let perms = [
                        (i, k, j),
                        (j, i, k),
                        (j, k, i),
                        (k, i, j),
                        (k, j, i),
                    ];
                    for (p, q, r) in perms {
                        if at(p, q, r) != v {
                            return MedianCheck::Fail {
                                axiom: MedianAxiom::Symmetry,
                                tuple: self.tuple_names(&[p, q, r]),
                                detail: format!(
                                    "med({}, {}, {}) = {} but med({}, {}, {}) = {}",
                                    self.names[i],
                                    self.names[j],
                                    self.names[k],
                                    self.names[v],
                                    self.names[p],
                                    self.names[q],
                                    self.names[r],
                                    self.names[at(p, q, r)]
                                ),
                            };
                        }
                    }
                }
            }
        }

        // Axiom 3: five-point condition. Symmetry holds here, so scanning
        // a <= b and x <= y covers every 5-tuple.
        let mut proj = vec![0u32; n];
        for a in 0..n {
            for b in a..n {
                let pa = &t[(a * n + b) * n..(a * n + b) * n + n];
                proj.copy_from_slice(pa);
                for x in 0..n {
                    let px = proj[x] as usize;
                    for y in x..n {
                        let py = proj[y] as usize;
                        let row_xy = &t[(x * n + y) * n..(x * n + y) * n + n];
                        let row_pp = &t[(px * n + py) * n..(px * n + py) * n + n];
                        for z in 0..n {
                            if proj[row_xy[z] as usize] != row_pp[z] {
                                return MedianCheck::Fail {
                                    axiom: MedianAxiom::FivePoint,
                                    tuple: self.tuple_names(&[a, b, x, y, z]),
                                    detail: format!(
                                        "med({a0},{b0},med({x0},{y0},{z0})) = {l} but \
                                         med(med({a0},{b0},{x0}),med({a0},{b0},{y0}),{z0}) = {r}",
                                        a0 = self.names[a],
                                        b0 = self.names[b],
                                        x0 = self.names[x],
                                        y0 = self.names[y],
                                        z0 = self.names[z],
                                        l = self.names[proj[row_xy[z] as usize] as usize],
                                        r = self.names[row_pp[z] as usize],
                                    ),
                                };
                            }
                        }
                    }
                }
            }
        }

        MedianCheck::Pass
    }

    /// Checks that the attached metric is a median metric for this algebra:
    /// `med(x,y,z)` lies between each pair, and is the unique such point.
    ///
    /// `InputError` if no metric is present or the metric is not symmetric,
    /// zero-diagonal, and nonnegative.
    pub fn verify_median_metric(&self) -> Result<MedianCheck> {
        let n = self.len();
        let m = self
            .metric
            .as_ref()
            .ok_or_else(|| Error::input("algebra carries no metric"))?;
        for i in 0..n {
            if !m[i * n + i].is_zero() {
                return Err(Error::input(format!(
                    "metric diagonal is nonzero at {}",
                    self.names[i]
                )));
            }
            for j in 0..n {
                if m[i * n + j] != m[j * n + i] {
                    return Err(Error::input(format!(
                        "metric is not symmetric at ({}, {})",
                        self.names[i], self.names[j]
                    )));
                }
                if m[i * n + j] < BigRational::zero() {
                    return Err(Error::input(format!(
                        "negative distance at ({}, {})",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }

        let d = |i: usize, j: usize| &m[i * n + j];
        let between = |i: usize, p: usize, j: usize| d(i, p) + d(p, j) == *d(i, j);
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    let med = self.med(x, y, z);
                    for p in 0..n {
                        let is_between =
                            between(x, p, y) && between(y, p, z) && between(x, p, z);
                        if p == med && !is_between {
                            return Ok(MedianCheck::Fail {
                                axiom: MedianAxiom::FivePoint,
                                tuple: self.tuple_names(&[x, y, z]),
                                detail: format!(
                                    "med({}, {}, {}) = {} is not metrically between the three",
                                    self.names[x], self.names[y], self.names[z], self.names[med]
                                ),
                            });
                        }
                        if p != med && is_between {
                            return Ok(MedianCheck::Fail {
                                axiom: MedianAxiom::FivePoint,
                                tuple: self.tuple_names(&[x, y, z, p]),
                                detail: format!(
                                    "{} is also metrically between {}, {}, {}: median not unique",
                                    self.names[p], self.names[x], self.names[y], self.names[z]
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(MedianCheck::Pass)
    }

    /// The interval `[a,b] = {x : med(a,b,x) = x}`, as sorted indices.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.len();
        (0..n).filter(|&x| self.med(a, b, x) == x).collect()
    }

    /// One step of the hull operator:
    /// `J(A) = { med(a, a', x) : a, a' in A, x in M }`.
    ///
    /// `InputError` on an empty input set.
    pub fn j_closure(&self, set: &[usize]) -> Result<Vec<usize>> {
        if set.is_empty() {
            return Err(Error::input("J of the empty set is undefined"));
        }
        let n = self.len();
        let t = &self.table;
        let mut out = vec![false; n];
        for (ai, &a) in set.iter().enumerate() {
            for &b in &set[ai..] {
                let row = &t[(a * n + b) * n..(a * n + b) * n + n];
                for x in 0..n {
                    out[row[x] as usize] = true;
                }
            }
        }
        Ok((0..n).filter(|&i| out[i]).collect())
    }

    /// Smallest median-convex superset of `set`, by iterating `J` to a fixed
    /// point (reached within `rank` iterations, but the fixed point is
    /// detected directly so the rank is never needed).
    pub fn convex_hull(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut current: Vec<usize> = {
            let mut s = set.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        };
        if current.is_empty() {
            return Err(Error::input("hull of the empty set is undefined"));
        }
        loop {
            let next = self.j_closure(&current)?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// True if `set` is median-convex, i.e. `J(set) = set`.
    pub fn is_convex(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        match self.j_closure(&sorted) {
            Ok(j) => j == sorted,
            Err(_) => false,
        }
    }

    /// All walls, i.e. partitions into two nonempty median-convex halves.
    /// Capped by `limits.max_elements`.
    pub fn enumerate_walls(&self, limits: &Limits) -> Result<Vec<Wall>> {
        walls::enumerate_walls(self, limits)
    }

    /// Rank computed along both routes (pairwise-crossing walls and largest
    /// embedded cube), with witnesses. Cached after the first call.
    pub fn rank(&self, limits: &Limits) -> Result<RankReport> {
        rank::rank(self, limits)
    }

    /// Serializes to the interchange JSON object.
    pub fn to_json(&self) -> serde_json::Value {
        json::algebra_to_json(self)
    }

    /// Parses the interchange JSON object.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        json::algebra_from_json(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn majority_cube(bits: u32) -> FiniteMedianAlgebra {
        hypercube(bits as usize, &Limits::default()).unwrap()
    }

    #[test]
    fn square_passes_axioms() {
        let sq = majority_cube(2);
        assert!(sq.verify_median_axioms().passed());
    }

    #[test]
    fn absorption_violation_reported_first() {
        let sq = majority_cube(2);
        let n = sq.len();
        let mut table = sq.raw_table().to_vec();
        // med(a,a,x) = x for some a != x
        let a = 0;
        let x = 3;
        table[(a * n + a) * n + x] = x as u32;
        let broken =
            FiniteMedianAlgebra::from_table(sq.names().to_vec(), table, None).unwrap();
        match broken.verify_median_axioms() {
            MedianCheck::Fail { axiom, tuple, .. } => {
                assert_eq!(axiom, MedianAxiom::Absorption);
                assert_eq!(tuple.len(), 3);
            }
            MedianCheck::Pass => panic!("mutation must fail"),
        }
    }

    #[test]
    fn box_3x3_passes_by_brute_force_definition() {
        // Direct evaluation: the 9-point box with coordinatewise median is a
        // median algebra; the verifier scans every 5-tuple.
        let b = lattice_box(&[3, 3], &Limits::default()).unwrap();
        assert!(b.verify_median_axioms().passed());
        assert!(b.verify_median_metric().unwrap().passed());
    }

    #[test]
    fn interval_of_opposite_corners_is_whole_square() {
        let sq = majority_cube(2);
        let a = sq.resolve("(0,0)").unwrap();
        let b = sq.resolve("(1,1)").unwrap();
        assert_eq!(sq.interval(a, b).len(), 4);
        // a = b gives the singleton
        assert_eq!(sq.interval(a, a), vec![a]);
    }

    #[test]
    fn interval_of_box_corners_is_sub_box() {
        // in the 3x3 box, [(0,0), (2,1)] is the 3x2 sub-box
        let b = lattice_box(&[3, 3], &Limits::default()).unwrap();
        let lo = b.resolve("(0,0)").unwrap();
        let hi = b.resolve("(2,1)").unwrap();
        let interval = b.interval(lo, hi);
        assert_eq!(interval.len(), 6);
        for x in 0..3 {
            for y in 0..2 {
                let p = b.resolve(&format!("({x},{y})")).unwrap();
                assert!(interval.contains(&p));
            }
        }
    }

    #[test]
    fn j_closure_of_diagonal_generates_square() {
        let sq = majority_cube(2);
        let a = sq.resolve("(0,0)").unwrap();
        let b = sq.resolve("(1,1)").unwrap();
        let j = sq.j_closure(&[a, b]).unwrap();
        assert_eq!(j.len(), 4);
    }

    #[test]
    fn j_closure_of_cube_diagonal_is_whole_cube() {
        // Brute force over all x: J({000,111}) covers {0,1}^3.
        let c = majority_cube(3);
        let a = c.resolve("(0,0,0)").unwrap();
        let b = c.resolve("(1,1,1)").unwrap();
        let j = c.j_closure(&[a, b]).unwrap();
        assert_eq!(j.len(), 8);
    }

    #[test]
    fn hull_is_idempotent_and_contains_input() {
        let b = lattice_box(&[3, 3], &Limits::default()).unwrap();
        let a0 = b.resolve("(0,1)").unwrap();
        let a1 = b.resolve("(2,2)").unwrap();
        let h = b.convex_hull(&[a0, a1]).unwrap();
        assert!(h.contains(&a0) && h.contains(&a1));
        assert_eq!(b.convex_hull(&h).unwrap(), h);
        assert!(b.is_convex(&h));
    }

    #[test]
    fn hull_of_singleton_is_itself() {
        let b = lattice_box(&[3, 2], &Limits::default()).unwrap();
        assert_eq!(b.convex_hull(&[4]).unwrap(), vec![4]);
    }

    #[test]
    fn empty_inputs_are_input_errors() {
        let b = lattice_box(&[2, 2], &Limits::default()).unwrap();
        assert!(matches!(b.j_closure(&[]), Err(Error::Input(_))));
        assert!(matches!(b.convex_hull(&[]), Err(Error::Input(_))));
        assert!(matches!(b.resolve("nope"), Err(Error::Input(_))));
    }

    #[test]
    fn metric_uniqueness_detects_bad_metric() {
        let sq = majority_cube(2);
        let n = sq.len();
        let mut metric = sq.metric_table().unwrap().to_vec();
        // Make two points distance 0 apart: betweenness uniqueness breaks.
        metric[1] = BigRational::zero();
        metric[n] = BigRational::zero();
        let broken = FiniteMedianAlgebra::from_table(
            sq.names().to_vec(),
            sq.raw_table().to_vec(),
            Some(metric),
        )
        .unwrap();
        assert!(!broken.verify_median_metric().unwrap().passed());
    }
}

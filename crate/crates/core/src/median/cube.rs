//! The cube route to rank: the largest `d` admitting an injective median
//! morphism from `{0,1}^d`.
//!
//! Any such morphism is pinned down by the image `a` of the all-zero vertex,
//! an element `b` whose interval `[a,b]` contains the image (the image of
//! the all-one vertex works), and the images of the `d` unit vertices
//! ("atoms"). Atoms lie in `[a,b] \ {a}` and pairwise satisfy
//! `med(m_i, m_j, a) = a`; the remaining cube vertices are forced, as joins
//! inside the distributive lattice `[a,b]`. The search scans candidate atom
//! sets and fully re-validates every winning assignment against all cube
//! triples, so no lattice-theoretic shortcut is trusted for soundness.

use super::FiniteMedianAlgebra;

/// Result of the cube search: dimension and the images of the cube vertices
/// in binary order (vertex `S` at index `S`, bit `i` = atom `i`).
pub(super) struct CubeWitness {
    pub dim: usize,
    pub images: Vec<usize>,
}

pub(super) fn max_cube(alg: &FiniteMedianAlgebra) -> CubeWitness {
    let n = alg.len();
    if n == 1 {
        return CubeWitness {
            dim: 0,
            images: vec![0],
        };
    }

    // Any two distinct elements form a {0,1}^1 subalgebra.
    let mut best = CubeWitness {
        dim: 1,
        images: vec![0, 1],
    };

    for a in 0..n {
        for b in (a + 1)..n {
            let interval = alg.interval(a, b);
            if interval.len() < (1usize << (best.dim + 1)) {
                continue;
            }
            let candidates: Vec<usize> =
                interval.iter().copied().filter(|&x| x != a).collect();
            let mut atoms = Vec::new();
            search_atoms(alg, a, b, &candidates, 0, &mut atoms, &mut best);
        }
    }
    best
}

fn search_atoms(
    alg: &FiniteMedianAlgebra,
    a: usize,
    b: usize,
    candidates: &[usize],
    start: usize,
    atoms: &mut Vec<usize>,
    best: &mut CubeWitness,
) {
    if atoms.len() > best.dim {
        if let Some(images) = validate_cube(alg, a, b, atoms) {
            best.dim = atoms.len();
            best.images = images;
        }
    }
    // Bound: even taking every remaining candidate cannot beat the best.
    for idx in start..candidates.len() {
        if atoms.len() + (candidates.len() - idx) <= best.dim {
            break;
        }
        let cand = candidates[idx];
        if atoms.iter().all(|&m| alg.med(m, cand, a) == a) {
            atoms.push(cand);
            search_atoms(alg, a, b, candidates, idx + 1, atoms, best);
            atoms.pop();
        }
    }
}

/// Builds the full cube image from the atoms (joins in `[a,b]`) and checks
/// injectivity plus the median-morphism identity on every vertex triple.
fn validate_cube(
    alg: &FiniteMedianAlgebra,
    a: usize,
    b: usize,
    atoms: &[usize],
) -> Option<Vec<usize>> {
    let d = atoms.len();
    let size = 1usize << d;
    let mut images = vec![a; size];
    for s in 1..size {
        let low = s & (s - 1);
        let bit = (s ^ low).trailing_zeros() as usize;
        // join with the next atom, relative to the interval top b
        images[s] = alg.med(images[low], atoms[bit], b);
    }
    {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != size {
            return None;
        }
    }
    for p in 0..size {
        for q in p..size {
            for r in q..size {
                let maj = (p & q) | (q & r) | (p & r);
                if alg.med(images[p], images[q], images[r]) != images[maj] {
                    return None;
                }
            }
        }
    }
    Some(images)
}

#[cfg(test)]
mod tests {
    use super::super::{hypercube, lattice_box, tree_median};
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn hypercube_rank_is_dimension() {
        let limits = Limits::default();
        for d in 1..=4 {
            let c = hypercube(d, &limits).unwrap();
            assert_eq!(max_cube(&c).dim, d);
        }
    }

    #[test]
    fn tree_rank_is_one() {
        let t = tree_median(
            &[
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("b".into(), "d".into()),
            ],
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(max_cube(&t).dim, 1);
    }

    #[test]
    fn box_rank_counts_nontrivial_axes() {
        let limits = Limits::default();
        let b = lattice_box(&[3, 2], &limits).unwrap();
        assert_eq!(max_cube(&b).dim, 2);
        let b3 = lattice_box(&[3, 3, 2], &limits).unwrap();
        assert_eq!(max_cube(&b3).dim, 3);
    }

    #[test]
    fn witness_is_a_true_median_monomorphism() {
        let b = lattice_box(&[3, 3], &Limits::default()).unwrap();
        let w = max_cube(&b);
        assert_eq!(w.dim, 2);
        assert_eq!(w.images.len(), 4);
        for p in 0..4usize {
            for q in 0..4usize {
                for r in 0..4usize {
                    let maj = (p & q) | (q & r) | (p & r);
                    assert_eq!(
                        b.med(w.images[p], w.images[q], w.images[r]),
                        w.images[maj]
                    );
                }
            }
        }
    }

    #[test]
    fn singleton_has_rank_zero() {
        let one = lattice_box(&[1], &Limits::default()).unwrap();
        assert_eq!(max_cube(&one).dim, 0);
    }
}

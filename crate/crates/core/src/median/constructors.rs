//! Standard constructors: l^1 lattice boxes, hypercubes, tree medians, and
//! direct products. Every constructor attaches an exact metric and respects
//! the element cap.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::FiniteMedianAlgebra;

fn coord_name(coords: &[usize]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn int_rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The box `{0..d_1-1} x ... x {0..d_k-1}` with coordinatewise median and
/// the l^1 metric. `LimitError` if the total size exceeds the element cap.
pub fn lattice_box(dims: &[usize], limits: &Limits) -> Result<FiniteMedianAlgebra> {
    if dims.is_empty() || dims.len() > 10 {
        return Err(Error::input(
            "lattice box needs between 1 and 10 dimensions",
        ));
    }
    if dims.contains(&0) {
        return Err(Error::input("lattice box dimensions must be positive"));
    }
    let mut size = 1usize;
    for &d in dims {
        size = size
            .checked_mul(d)
            .ok_or_else(|| Error::limit("lattice box size overflows"))?;
        if size > limits.max_elements {
            return Err(Error::limit(format!(
                "lattice box has more than {} elements",
                limits.max_elements
            )));
        }
    }

    // Row-major (lexicographic) enumeration of coordinate tuples is the
    // canonical element order.
    let k = dims.len();
    let mut coords: Vec<Vec<usize>> = Vec::with_capacity(size);
    let mut cur = vec![0usize; k];
    loop {
        coords.push(cur.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < dims[pos] {
                break;
            }
            cur[pos] = 0;
        }
        if cur.iter().all(|&c| c == 0) {
            break;
        }
    }
    debug_assert_eq!(coords.len(), size);

    let names: Vec<String> = coords.iter().map(|c| coord_name(c)).collect();

    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let index_of = |c: &[usize]| -> usize {
        c.iter().zip(&strides).map(|(a, s)| a * s).sum()
    };

    let n = size;
    let mut table = vec![0u32; n * n * n];
    let mut mid = vec![0usize; k];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for (axis, m) in mid.iter_mut().enumerate() {
                    let mut tri = [coords[i][axis], coords[j][axis], coords[l][axis]];
                    tri.sort_unstable();
                    *m = tri[1];
                }
                table[(i * n + j) * n + l] = index_of(&mid) as u32;
            }
        }
    }

    let mut metric = vec![BigRational::from_integer(BigInt::from(0)); n * n];
    for i in 0..n {
        for j in 0..n {
            let d: i64 = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(&a, &b)| (a as i64 - b as i64).abs())
                .sum();
            metric[i * n + j] = int_rational(d);
        }
    }

    FiniteMedianAlgebra::from_table(names, table, Some(metric))
}

/// The cube `{0,1}^n` with coordinatewise majority and the l^1 metric.
pub fn hypercube(n: usize, limits: &Limits) -> Result<FiniteMedianAlgebra> {
    if n == 0 || n > 10 {
        return Err(Error::input("hypercube dimension must be between 1 and 10"));
    }
    lattice_box(&vec![2; n], limits)
}

/// The median algebra of a finite tree, from its edge list. Vertices are
/// named by the strings appearing in `edges`; the metric is the graph metric.
pub fn tree_median(edges: &[(String, String)], limits: &Limits) -> Result<FiniteMedianAlgebra> {
    let mut names: Vec<String> = Vec::new();
    let mut idx = std::collections::HashMap::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        if let Some(&i) = idx.get(name) {
            return i;
        }
        let i = names.len();
        names.push(name.to_string());
        idx.insert(name.to_string(), i);
        i
    };

    let mut adj: Vec<Vec<usize>> = Vec::new();
    for (a, b) in edges {
        let ia = intern(a, &mut names);
        let ib = intern(b, &mut names);
        while adj.len() < names.len() {
            adj.push(Vec::new());
        }
        if ia == ib {
            return Err(Error::input(format!("tree has a self-loop at {a:?}")));
        }
        adj[ia].push(ib);
        adj[ib].push(ia);
    }
    let n = names.len();
    if n == 0 {
        return Err(Error::input("tree must have at least one edge"));
    }
    if n > limits.max_elements {
        return Err(Error::limit(format!(
            "tree has more than {} vertices",
            limits.max_elements
        )));
    }
    if edges.len() != n - 1 {
        return Err(Error::input("edge count is not vertices - 1: not a tree"));
    }

    // BFS distances from every vertex; also detects disconnection.
    let mut dist = vec![usize::MAX; n * n];
    for s in 0..n {
        let mut queue = std::collections::VecDeque::new();
        dist[s * n + s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[s * n + w] == usize::MAX {
                    dist[s * n + w] = dist[s * n + v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[s * n..(s + 1) * n].contains(&usize::MAX) {
            return Err(Error::input("tree is not connected"));
        }
    }

    // med(x,y,z) is the unique vertex on all three pairwise geodesics.
    let d = |i: usize, j: usize| dist[i * n + j];
    let mut table = vec![0u32; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut found = None;
                for p in 0..n {
                    if d(x, p) + d(p, y) == d(x, y)
                        && d(y, p) + d(p, z) == d(y, z)
                        && d(x, p) + d(p, z) == d(x, z)
                    {
                        found = Some(p);
                        break;
                    }
                }
                table[(x * n + y) * n + z] =
                    found.expect("a tree has a median vertex for every triple") as u32;
            }
        }
    }

    let metric: Vec<BigRational> = dist.iter().map(|&v| int_rational(v as i64)).collect();
    FiniteMedianAlgebra::from_table(names, table, Some(metric))
}

/// Direct product with componentwise median. The metric, when both factors
/// carry one, is the sum metric. Element names are `left|right`.
pub fn product(
    a: &FiniteMedianAlgebra,
    b: &FiniteMedianAlgebra,
    limits: &Limits,
) -> Result<FiniteMedianAlgebra> {
    let na = a.len();
    let nb = b.len();
    let n = na
        .checked_mul(nb)
        .ok_or_else(|| Error::limit("product size overflows"))?;
    if n > limits.max_elements {
        return Err(Error::limit(format!(
            "product has more than {} elements",
            limits.max_elements
        )));
    }
    let mut names = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            names.push(format!("{}|{}", a.name(i), b.name(j)));
        }
    }
    let pair = |i: usize, j: usize| i * nb + j;
    let mut table = vec![0u32; n * n * n];
    for i1 in 0..na {
        for j1 in 0..nb {
            let p1 = pair(i1, j1);
            for i2 in 0..na {
                for j2 in 0..nb {
                    let p2 = pair(i2, j2);
                    for i3 in 0..na {
                        let ma = a.med(i1, i2, i3);
                        for j3 in 0..nb {
                            let p3 = pair(i3, j3);
                            let mb = b.med(j1, j2, j3);
                            table[(p1 * n + p2) * n + p3] = pair(ma, mb) as u32;
                        }
                    }
                }
            }
        }
    }
    let metric = match (a.metric_table(), b.metric_table()) {
        (Some(ma), Some(mb)) => {
            let mut m = Vec::with_capacity(n * n);
            for i1 in 0..na {
                for j1 in 0..nb {
                    for i2 in 0..na {
                        for j2 in 0..nb {
                            m.push(&ma[i1 * na + i2] + &mb[j1 * nb + j2]);
                        }
                    }
                }
            }
            Some(m)
        }
        _ => None,
    };
    FiniteMedianAlgebra::from_table(names, table, metric)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypercube_sizes_and_axioms() {
        let limits = Limits::default();
        let c1 = hypercube(1, &limits).unwrap();
        assert_eq!(c1.len(), 2);
        let c4 = hypercube(4, &limits).unwrap();
        assert_eq!(c4.len(), 16);
        assert!(c4.verify_median_axioms().passed());
    }

    #[test]
    fn box_respects_cap() {
        let limits = Limits::default();
        assert!(matches!(
            lattice_box(&[10, 10], &limits),
            Err(Error::Limit(_))
        ));
        let raised = Limits::with_max_elements(128);
        assert!(lattice_box(&[10, 10], &raised).is_ok());
    }

    #[test]
    fn three_point_path_is_a_tree_median() {
        let edges = vec![
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "c".to_string()),
        ];
        let t = tree_median(&edges, &Limits::default()).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.verify_median_axioms().passed());
        let (a, b, c) = (
            t.resolve("a").unwrap(),
            t.resolve("b").unwrap(),
            t.resolve("c").unwrap(),
        );
        assert_eq!(t.med(a, c, c), c);
        assert_eq!(t.med(a, b, c), b);
    }

    #[test]
    fn product_is_median_with_sum_metric() {
        let limits = Limits::default();
        let a = hypercube(1, &limits).unwrap();
        let b = lattice_box(&[3], &limits).unwrap();
        let p = product(&a, &b, &limits).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.verify_median_axioms().passed());
        assert!(p.verify_median_metric().unwrap().passed());
    }
}

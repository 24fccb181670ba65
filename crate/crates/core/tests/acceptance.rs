//! Acceptance suite: one test per criterion, each printing a pass line with
//! the numbers it established. Run with `cargo test --test acceptance`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cubulate::fbc::{is_internal, rich_linearity, supports};
use cubulate::fixtures;
use cubulate::median::{
    ball_hull_bound_check, five_point_chain_check, hypercube, lattice_box, product,
    tree_median, FiniteMedianAlgebra,
};
use cubulate::report::{parse_fbc, parse_tubular};
use cubulate::tubular::{
    build_transport_graph, classify_tubular, detect_unbalance, distorted_classes,
    undistortion_certificate, DehnClass, TransportGraph, TubularEdge, TubularGroupSpec,
    TubularStatus,
};
use cubulate::Limits;

fn big_limits() -> Limits {
    Limits::with_max_elements(128)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn path_tree(n: usize) -> Vec<(String, String)> {
    (1..n).map(|i| (format!("n{}", i - 1), format!("n{i}"))).collect()
}

fn star_tree(n: usize) -> Vec<(String, String)> {
    (1..n).map(|i| ("hub".to_string(), format!("leaf{i}"))).collect()
}

fn seeded_tree(n: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (1..n)
        .map(|i| {
            let parent = rng.random_range(0..i);
            (format!("t{parent}"), format!("t{i}"))
        })
        .collect()
}

/// The metric fixture pool: hypercubes (n <= 4), lattice boxes (total size
/// <= 100), trees (<= 20 nodes), and products thereof.
fn metric_fixtures() -> Vec<(String, FiniteMedianAlgebra)> {
    let limits = big_limits();
    let mut out: Vec<(String, FiniteMedianAlgebra)> = Vec::new();
    for n in 1..=4 {
        out.push((format!("hypercube({n})"), hypercube(n, &limits).unwrap()));
    }
    for dims in [
        vec![3, 2],
        vec![5, 5],
        vec![6, 6],
        vec![2, 3, 4],
        vec![4, 4, 4],
        vec![10, 10],
        vec![5, 5, 4],
    ] {
        out.push((
            format!("box{dims:?}"),
            lattice_box(&dims, &limits).unwrap(),
        ));
    }
    out.push((
        "path(20)".into(),
        tree_median(&path_tree(20), &limits).unwrap(),
    ));
    out.push((
        "star(20)".into(),
        tree_median(&star_tree(20), &limits).unwrap(),
    ));
    out.push((
        "random_tree(20)".into(),
        tree_median(&seeded_tree(20, 7), &limits).unwrap(),
    ));
    let hc2 = hypercube(2, &limits).unwrap();
    let p5 = tree_median(&path_tree(5), &limits).unwrap();
    let b33 = lattice_box(&[3, 3], &limits).unwrap();
    let t4 = tree_median(&seeded_tree(4, 11), &limits).unwrap();
    out.push((
        "hypercube(2) x path(5)".into(),
        product(&hc2, &p5, &limits).unwrap(),
    ));
    out.push(("box[3,3] x tree(4)".into(), product(&b33, &t4, &limits).unwrap()));
    out.push(("path(5) x path(4)".into(), {
        let p4 = tree_median(&path_tree(4), &limits).unwrap();
        product(&p5, &p4, &limits).unwrap()
    }));
    out
}

/// Criterion: the axioms verifier passes on every constructed fixture and
/// fails on 100 random single-entry mutations of each.
#[test]
fn acceptance_median_axioms() {
    let start = std::time::Instant::now();
    let fixtures = metric_fixtures();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut mutations = 0usize;
    for (name, alg) in &fixtures {
        assert!(
            alg.verify_median_axioms().passed(),
            "{name} fails the axioms"
        );
        assert!(
            alg.verify_median_metric().is_ok(),
            "{name} has a malformed metric"
        );
        let n = alg.len();
        if n < 2 {
            continue;
        }
        for _ in 0..100 {
            let mut table = alg.raw_table().to_vec();
            let slot = rng.random_range(0..table.len());
            let old = table[slot];
            let wrong = loop {
                let candidate = rng.random_range(0..n as u32);
                if candidate != old {
                    break candidate;
                }
            };
            table[slot] = wrong;
            let mutated =
                FiniteMedianAlgebra::from_table(alg.names().to_vec(), table, None).unwrap();
            assert!(
                !mutated.verify_median_axioms().passed(),
                "{name}: mutation at flat index {slot} went undetected"
            );
            mutations += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "axiom criterion overran its 60 s budget: {elapsed:?}"
    );
    println!(
        "[PASS] median axioms: {} fixtures verified, {mutations} mutations all \
         detected, in {elapsed:?}",
        fixtures.len()
    );
}

/// All median subalgebras of the `dim`-cube, each re-indexed as a standalone
/// algebra (no metric).
fn cube_subalgebras(dim: usize) -> Vec<FiniteMedianAlgebra> {
    let full = hypercube(dim, &Limits::default()).unwrap();
    let n = full.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut closed = true;
        'outer: for &a in &members {
            for &b in &members {
                for &c in &members {
                    if mask >> full.med(a, b, c) & 1 == 0 {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        if !closed {
            continue;
        }
        let index_of = |global: usize| members.binary_search(&global).unwrap() as u32;
        let s = members.len();
        let mut table = vec![0u32; s * s * s];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                for (k, &c) in members.iter().enumerate() {
                    table[(i * s + j) * s + k] = index_of(full.med(a, b, c));
                }
            }
        }
        let names: Vec<String> = members
            .iter()
            .map(|&i| full.name(i).to_string())
            .collect();
        out.push(FiniteMedianAlgebra::from_table(names, table, None).unwrap());
    }
    out
}

/// Criterion: the wall rank equals the cube-embedding rank on every median
/// subalgebra fixture with at most 16 elements, exactly.
#[test]
fn acceptance_dual_oracle_rank() {
    let limits = Limits::default();
    let mut checked = 0usize;
    for alg in cube_subalgebras(3) {
        let r = alg.rank(&limits).unwrap();
        assert_eq!(r.rank_walls, r.rank_cube, "disagreement on a 3-cube subalgebra");
        r.verify(&alg).unwrap();
        checked += 1;
    }
    for alg in cube_subalgebras(4) {
        let r = alg.rank(&limits).unwrap();
        assert_eq!(r.rank_walls, r.rank_cube, "disagreement on a 4-cube subalgebra");
        checked += 1;
    }
    // plus the constructed fixtures small enough to qualify
    for (name, alg) in metric_fixtures() {
        if alg.len() <= 16 {
            let r = alg.rank(&limits).unwrap();
            assert_eq!(r.rank_walls, r.rank_cube, "disagreement on {name}");
            checked += 1;
        }
    }
    println!(
        "[PASS] dual-oracle rank: wall and cube ranks agree exactly on {checked} \
         median subalgebras"
    );
}

/// Criterion: the hull of every ball stays inside the ball blown up by
/// 2^rank, for every centre and every radius.
///
/// Radii run over the distinct distances from each centre: balls are
/// constant between consecutive distance values while the bound grows, so
/// this finite grid decides the claim for every real radius.
#[test]
fn acceptance_ball_hull_bound() {
    let limits = big_limits();
    let mut checks = 0usize;
    for (name, alg) in metric_fixtures() {
        let n = alg.len();
        for x in 0..n {
            let mut radii: Vec<BigRational> =
                (0..n).map(|y| alg.dist(x, y).unwrap().clone()).collect();
            radii.push(radii.iter().max().unwrap() + rat(1));
            radii.sort();
            radii.dedup();
            for r in &radii {
                assert!(
                    ball_hull_bound_check(&alg, x, r, &limits).unwrap(),
                    "{name}: hull of B({x}, {r}) escapes the 2^rank bound"
                );
                checks += 1;
            }
        }
    }
    println!("[PASS] hull-of-ball bound: {checks} (centre, radius) pairs verified");
}

/// Criterion: in every median subalgebra of the 4-cube and every lattice box
/// up to 5x5, the five-point computation chain forces b = a-; the scan over
/// premise-satisfying 5-tuples finds no counterexample.
#[test]
fn acceptance_five_point_chain() {
    let mut algebras = cube_subalgebras(4);
    let limits = big_limits();
    for a in 1..=5usize {
        for b in a..=5usize {
            algebras.push(lattice_box(&[a, b], &limits).unwrap());
        }
    }
    let mut tuples = 0u64;
    for alg in &algebras {
        let n = alg.len();
        for zero in 0..n {
            for one in zero..n {
                let interval = alg.interval(zero, one);
                for &a_plus in &interval {
                    // the candidates sharing the opposite-corner premises
                    let opposite: Vec<usize> = interval
                        .iter()
                        .copied()
                        .filter(|&c| {
                            alg.med(a_plus, c, zero) == zero && alg.med(a_plus, c, one) == one
                        })
                        .collect();
                    for &a_minus in &opposite {
                        for &b in &opposite {
                            let forced =
                                five_point_chain_check(alg, zero, one, a_plus, a_minus, b)
                                    .expect("premises hold by construction");
                            assert!(
                                forced,
                                "five-point chain failed: |opposite| = {} for \
                                 (0,1,a+) = ({zero},{one},{a_plus})",
                                opposite.len()
                            );
                            tuples += 1;
                        }
                    }
                }
            }
        }
    }
    println!(
        "[PASS] five-point chain: {tuples} premise-satisfying 5-tuples across {} \
         algebras, zero counterexamples",
        algebras.len()
    );
}

fn random_tubular_spec(rng: &mut StdRng) -> TubularGroupSpec {
    let n_vertices = rng.random_range(1..=5usize);
    let vertices: Vec<String> = (0..n_vertices).map(|i| format!("F{i}")).collect();
    let mut edges = Vec::new();
    let random_vec = |rng: &mut StdRng| -> [i64; 2] {
        loop {
            let v = [rng.random_range(-4..=4i64), rng.random_range(-4..=4i64)];
            if v != [0, 0] {
                return v;
            }
        }
    };
    // spanning edges keep the graph connected
    for i in 1..n_vertices {
        let parent = rng.random_range(0..i);
        edges.push(TubularEdge {
            id: format!("e{}", edges.len()),
            end_minus: vertices[parent].clone(),
            end_plus: vertices[i].clone(),
            w_minus: random_vec(rng),
            w_plus: random_vec(rng),
        });
    }
    let extra = rng.random_range(0..=(8 - edges.len()).min(8));
    for _ in 0..extra {
        let a = rng.random_range(0..n_vertices);
        let b = rng.random_range(0..n_vertices);
        edges.push(TubularEdge {
            id: format!("e{}", edges.len()),
            end_minus: vertices[a].clone(),
            end_plus: vertices[b].clone(),
            w_minus: random_vec(rng),
            w_plus: random_vec(rng),
        });
    }
    if edges.is_empty() {
        edges.push(TubularEdge {
            id: "e0".into(),
            end_minus: vertices[0].clone(),
            end_plus: vertices[0].clone(),
            w_minus: random_vec(rng),
            w_plus: random_vec(rng),
        });
    }
    TubularGroupSpec { vertices, edges }
}

/// Brute-force oracle: enumerate every simple cycle of the transport
/// multigraph (arcs traversable both ways) and test each exact product.
fn has_unbalanced_simple_cycle(tg: &TransportGraph) -> bool {
    let n = tg.nodes.len();
    // self-loops are length-1 cycles
    for arc in &tg.arcs {
        if arc.tail == arc.head && arc.label != BigRational::one() {
            return true;
        }
    }
    // pairs of distinct parallel arcs
    for (i, a) in tg.arcs.iter().enumerate() {
        for b in &tg.arcs[i + 1..] {
            if a.tail == a.head || b.tail == b.head {
                continue;
            }
            let aligned = a.tail == b.tail && a.head == b.head;
            let opposed = a.tail == b.head && a.head == b.tail;
            if aligned && a.label != b.label {
                return true;
            }
            if opposed && &a.label * &b.label != BigRational::one() {
                return true;
            }
        }
    }
    // longer simple cycles: DFS over node sequences with distinct nodes
    fn dfs(
        tg: &TransportGraph,
        start: usize,
        current: usize,
        visited: &mut Vec<bool>,
        depth: usize,
        product: BigRational,
    ) -> bool {
        for (ai, arc) in tg.arcs.iter().enumerate() {
            let _ = ai;
            if arc.tail == arc.head {
                continue;
            }
            let hops = [
                (arc.tail, arc.head, arc.label.clone()),
                (arc.head, arc.tail, arc.label.recip()),
            ];
            for (from, to, label) in hops {
                if from != current {
                    continue;
                }
                if to == start && depth >= 2 {
                    if &product * &label != BigRational::one() {
                        return true;
                    }
                    continue;
                }
                if to != start && !visited[to] {
                    visited[to] = true;
                    if dfs(tg, start, to, visited, depth + 1, &product * &label) {
                        return true;
                    }
                    visited[to] = false;
                }
            }
        }
        false
    }
    for start in 0..n {
        let mut visited = vec![false; n];
        visited[start] = true;
        if dfs(tg, start, start, &mut visited, 1, BigRational::one()) {
            return true;
        }
    }
    false
}

fn random_gl2(rng: &mut StdRng) -> [[i64; 2]; 2] {
    let generators: [[[i64; 2]; 2]; 4] = [
        [[0, -1], [1, 0]],
        [[1, 1], [0, 1]],
        [[1, -1], [0, 1]],
        [[1, 0], [0, -1]],
    ];
    let mut m = [[1, 0], [0, 1]];
    for _ in 0..rng.random_range(1..=4usize) {
        let g = generators[rng.random_range(0..generators.len())];
        m = [
            [
                g[0][0] * m[0][0] + g[0][1] * m[1][0],
                g[0][0] * m[0][1] + g[0][1] * m[1][1],
            ],
            [
                g[1][0] * m[0][0] + g[1][1] * m[1][0],
                g[1][0] * m[0][1] + g[1][1] * m[1][1],
            ],
        ];
    }
    debug_assert_eq!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(), 1);
    m
}

fn rebase_vertex(spec: &TubularGroupSpec, vertex: &str, m: [[i64; 2]; 2]) -> TubularGroupSpec {
    let apply = |w: [i64; 2]| {
        [
            m[0][0] * w[0] + m[0][1] * w[1],
            m[1][0] * w[0] + m[1][1] * w[1],
        ]
    };
    let mut out = spec.clone();
    for e in &mut out.edges {
        if e.end_minus == vertex {
            e.w_minus = apply(e.w_minus);
        }
        if e.end_plus == vertex {
            e.w_plus = apply(e.w_plus);
        }
    }
    out
}

/// Criterion: on 500 random specs, the spanning-tree detection agrees with
/// brute-force simple-cycle enumeration, and every certificate re-verifies
/// exactly.
#[test]
fn acceptance_distortion_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(5179);
    let mut unbalanced_count = 0usize;
    for round in 0..500 {
        let spec = random_tubular_spec(&mut rng);
        spec.validate().unwrap();
        let tg = build_transport_graph(&spec).unwrap();
        // one node per occurring (vertex, class): at most two per edge
        assert!(tg.nodes.len() <= 2 * spec.edges.len());
        let fast = detect_unbalance(&tg);
        let brute = has_unbalanced_simple_cycle(&tg);
        assert_eq!(
            fast.is_some(),
            brute,
            "round {round}: detection disagrees with the cycle oracle on {spec:?}"
        );
        match fast {
            Some(cert) => {
                unbalanced_count += 1;
                tg.verify_cycle(&cert).unwrap();
                assert!(undistortion_certificate(&tg).is_none());
            }
            None => {
                let potentials = undistortion_certificate(&tg).unwrap();
                tg.verify_potentials(&potentials).unwrap();
            }
        }
        // quadratic Dehn function exactly when nothing is distorted
        let dehn = cubulate::tubular::dehn_class(&spec).unwrap();
        assert_eq!(
            dehn == DehnClass::Quadratic,
            distorted_classes(&tg).is_empty()
        );
    }
    println!(
        "[PASS] distortion oracle: 500 random specs, {unbalanced_count} unbalanced, \
         detection matches brute force and all certificates re-verify"
    );
}

/// Criterion: the classification is a true trichotomy and is invariant under
/// vertex rebasing by GL(2, Z).
#[test]
fn acceptance_trichotomy_and_basis_invariance() {
    let mut rng = StdRng::seed_from_u64(5179);
    let mut status_counts = std::collections::BTreeMap::new();
    for _ in 0..500 {
        let spec = random_tubular_spec(&mut rng);
        let verdict = classify_tubular(&spec).unwrap();
        *status_counts.entry(verdict.status.to_string()).or_insert(0usize) += 1;
        // exactly one status: mutually exclusive certificate shape
        assert!(verdict.distorted != verdict.potentials.is_some());
        assert_eq!(
            verdict.status == TubularStatus::NoCoarseMedianViaRbf,
            verdict.rbf.is_some()
        );
        verdict.verify(&spec).unwrap();
        if verdict.status == TubularStatus::NoCoarseMedianViaRbf {
            let vertex = verdict
                .rbf
                .as_ref()
                .unwrap()
                .provenance
                .strip_prefix("tubular:vertex=")
                .unwrap()
                .to_string();
            assert!(cubulate::rbf::tubular_rbf_directions(&spec, &vertex)
                .unwrap()
                .is_some());
        }
        for _ in 0..10 {
            let vertex = &spec.vertices[rng.random_range(0..spec.vertices.len())];
            let rebased = rebase_vertex(&spec, vertex, random_gl2(&mut rng));
            let rebased_verdict = classify_tubular(&rebased).unwrap();
            assert_eq!(verdict.status, rebased_verdict.status, "status changed under rebasing");
            assert_eq!(verdict.dehn, rebased_verdict.dehn, "dehn changed under rebasing");
            assert_eq!(
                verdict.max_classes, rebased_verdict.max_classes,
                "class count changed under rebasing"
            );
        }
    }
    println!(
        "[PASS] trichotomy and basis invariance: 500 specs x 10 rebasings; statuses: {:?}",
        status_counts
    );
}

/// Criterion: the bundled inputs reproduce the expected verdicts exactly.
#[test]
fn acceptance_paper_fixtures() {
    // tetrahedron: branching-flat obstruction with the three colour directions
    let c6 = parse_tubular(fixtures::find("c6_tetrahedron").unwrap().json).unwrap();
    let verdict = classify_tubular(&c6).unwrap();
    assert_eq!(verdict.status, TubularStatus::NoCoarseMedianViaRbf);
    assert_eq!(verdict.dehn, DehnClass::Quadratic);
    assert_eq!(verdict.max_classes, 3);
    let mut dirs = verdict.rbf.as_ref().unwrap().directions.clone();
    dirs.sort();
    let mut expected = vec![vec![1, 0], vec![0, 1], vec![1, -1]];
    expected.sort();
    assert_eq!(dirs, expected, "tetrahedron branching directions");
    let tg = build_transport_graph(&c6).unwrap();
    assert_eq!((tg.nodes.len(), tg.arcs.len()), (12, 6));

    // rich linearity on the two-suffix example
    let mtg = parse_fbc(fixtures::find("more_than_gersten").unwrap().json).unwrap();
    let witness = rich_linearity(&mtg).unwrap().expect("rich linearity");
    assert_eq!(witness.cycle, "a");
    assert!(witness.source.is_some());
    let branch = cubulate::fbc::classify_fbc(&mtg).unwrap().branch;
    assert_eq!(branch, cubulate::fbc::FbcBranch::NoCoarseMedianRichLinearity);

    // the non-internal stratum
    let ni = parse_fbc(fixtures::find("non_internal").unwrap().json).unwrap();
    let (internal, _) = is_internal(&ni, "c").unwrap();
    assert!(!internal, "stratum c must not be internal");

    // supports of the commutator cycle
    let hrg = parse_fbc(fixtures::find("hyp_rel_gersten").unwrap().json).unwrap();
    assert_eq!(supports(&hrg, "K").unwrap(), vec!["c", "d"]);

    println!(
        "[PASS] paper fixtures: tetrahedron directions {{(1,0),(0,1),(1,-1)}}, rich \
         linearity on cycle a, non-internal stratum, supports(K) = {{c, d}}"
    );
}

/// Criterion: the three hand-built specs realize the three Dehn classes.
#[test]
fn acceptance_dehn_classification() {
    let fixture = |name: &str| parse_tubular(fixtures::find(name).unwrap().json).unwrap();
    let ck = classify_tubular(&fixture("croke_kleiner")).unwrap();
    assert_eq!(ck.dehn, DehnClass::Quadratic);
    assert_eq!(
        ck.status,
        TubularStatus::CoarseMedianCocompactlyCubulatedVirtuallySpecial
    );
    let bs = classify_tubular(&fixture("bs12_loop")).unwrap();
    assert_eq!(bs.dehn, DehnClass::Exponential);
    assert_eq!(bs.status, TubularStatus::NoCoarseMedianViaDistortion);
    let bs_pair = bs.bs_witness.as_ref().unwrap();
    assert_eq!((&bs_pair.m, &bs_pair.n), (&BigInt::from(1), &BigInt::from(2)));
    let dl = classify_tubular(&fixture("double_loop")).unwrap();
    assert_eq!(dl.dehn, DehnClass::SuperQuadraticUnclassified);
    println!(
        "[PASS] Dehn classification: croke_kleiner quadratic, bs12_loop exponential, \
         double_loop super-quadratic-unclassified"
    );
}

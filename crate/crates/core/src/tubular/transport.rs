//! The transport graph: the computable realization of the distortion graph.
//!
//! Nodes are pairs (vertex, primitive direction class); each group edge
//! contributes one arc from the class of its `w_minus` image to the class of
//! its `w_plus` image, labeled with the exact rational `|m_plus| / |m_minus|`
//! where `w = m * prim(w)`. Traversing an arc in reverse inverts the label.
//! Around any closed walk the basis-dependent norms cancel, so the product
//! of labels is well defined; a closed walk with product different from 1 is
//! the distortion certificate, and a balanced graph carries integer
//! potentials instead.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::format_rational;

use super::{normalize_primitive, TubularGroupSpec, Vec2};

/// A transport node: a primitive direction class at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub vertex: String,
    pub class: Vec2,
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:({},{})", self.vertex, self.class[0], self.class[1])
    }
}

/// One arc of the transport graph, induced by a group edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportArc {
    pub edge_id: String,
    pub tail: usize,
    pub head: usize,
    /// `|m_plus| / |m_minus|`, always positive, in lowest terms.
    pub label: BigRational,
}

/// The transport graph of a tubular group spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportGraph {
    pub nodes: Vec<NodeId>,
    pub arcs: Vec<TransportArc>,
}

/// A step of a closed walk: an arc traversed forward or in reverse.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CycleStep {
    pub edge: String,
    pub reversed: bool,
}

/// A closed arc walk whose exact label product differs from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    pub base: NodeId,
    pub steps: Vec<CycleStep>,
    pub product: BigRational,
}

/// Positive integer potentials, one per node, satisfying
/// `N(head) * denom(label) = N(tail) * numer(label)` on every arc; minimal
/// (componentwise gcd 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndistortionCertificate {
    pub potentials: BTreeMap<NodeId, BigInt>,
}

impl TransportGraph {
    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize, bool)>> {
        // (neighbor, arc index, reversed)
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, arc) in self.arcs.iter().enumerate() {
            adj[arc.tail].push((arc.head, i, false));
            adj[arc.head].push((arc.tail, i, true));
        }
        for list in &mut adj {
            list.sort();
        }
        adj
    }

    /// Re-evaluates the label product of a closed walk, checking that the
    /// steps really chain and close up at `base`.
    pub fn verify_cycle(&self, cert: &CycleCertificate) -> Result<()> {
        let start = self
            .node_index(&cert.base)
            .ok_or_else(|| Error::input(format!("unknown transport node {}", cert.base)))?;
        if cert.steps.is_empty() {
            return Err(Error::input("cycle certificate has no steps"));
        }
        let mut at = start;
        let mut product = BigRational::one();
        for step in &cert.steps {
            let arc = self
                .arcs
                .iter()
                .find(|a| a.edge_id == step.edge)
                .ok_or_else(|| {
                    Error::input(format!("unknown edge {:?} in certificate", step.edge))
                })?;
            let (from, to, label) = if step.reversed {
                (arc.head, arc.tail, arc.label.recip())
            } else {
                (arc.tail, arc.head, arc.label.clone())
            };
            if from != at {
                return Err(Error::input(format!(
                    "certificate step over {:?} does not start at the walk position",
                    step.edge
                )));
            }
            product *= label;
            at = to;
        }
        if at != start {
            return Err(Error::input("certificate walk does not close up"));
        }
        if product != cert.product {
            return Err(Error::input(format!(
                "certificate product mismatch: recomputed {}, stored {}",
                format_rational(&product),
                format_rational(&cert.product)
            )));
        }
        if product == BigRational::one() {
            return Err(Error::input("certificate cycle is balanced"));
        }
        Ok(())
    }

    /// Checks every arc equation against the potentials.
    pub fn verify_potentials(&self, cert: &UndistortionCertificate) -> Result<()> {
        for node in &self.nodes {
            let p = cert
                .potentials
                .get(node)
                .ok_or_else(|| Error::input(format!("node {node} has no potential")))?;
            if !p.is_positive() {
                return Err(Error::input(format!(
                    "potential at {node} is not positive"
                )));
            }
        }
        for arc in &self.arcs {
            let nt = &cert.potentials[&self.nodes[arc.tail]];
            let nh = &cert.potentials[&self.nodes[arc.head]];
            // label = N(head)/N(tail), exactly.
            if nh * arc.label.denom() != nt * arc.label.numer() {
                return Err(Error::input(format!(
                    "arc {} violates its potential equation",
                    arc.edge_id
                )));
            }
        }
        Ok(())
    }
}

/// Builds the transport graph: one node per occurring (vertex, class), one
/// arc per group edge labeled `|m_plus| / |m_minus|` in lowest terms.
pub fn build_transport_graph(spec: &TubularGroupSpec) -> Result<TransportGraph> {
    spec.validate()?;
    let mut nodes: Vec<NodeId> = Vec::new();
    let find = |nodes: &mut Vec<NodeId>, vertex: &str, class: Vec2| -> usize {
        let id = NodeId {
            vertex: vertex.to_string(),
            class,
        };
        if let Some(i) = nodes.iter().position(|n| *n == id) {
            i
        } else {
            nodes.push(id);
            nodes.len() - 1
        }
    };

    // Materialize nodes in canonical order first.
    let mut all: Vec<NodeId> = Vec::new();
    for e in &spec.edges {
        let (pm, _) = normalize_primitive(e.w_minus)?;
        let (pp, _) = normalize_primitive(e.w_plus)?;
        all.push(NodeId {
            vertex: e.end_minus.clone(),
            class: pm,
        });
        all.push(NodeId {
            vertex: e.end_plus.clone(),
            class: pp,
        });
    }
    all.sort();
    all.dedup();
    for id in all {
        find(&mut nodes, &id.vertex, id.class);
    }

    let mut arcs = Vec::new();
    for e in &spec.edges {
        let (pm, mm) = normalize_primitive(e.w_minus)?;
        let (pp, mp) = normalize_primitive(e.w_plus)?;
        let tail = find(&mut nodes, &e.end_minus, pm);
        let head = find(&mut nodes, &e.end_plus, pp);
        let label = BigRational::new(BigInt::from(mp.abs()), BigInt::from(mm.abs()));
        arcs.push(TransportArc {
            edge_id: e.id.clone(),
            tail,
            head,
            label,
        });
    }
    Ok(TransportGraph { nodes, arcs })
}

struct Propagation {
    /// Rational potential per node (1 at each component root).
    potential: Vec<BigRational>,
    /// Parent pointers into the spanning forest: (parent node, arc, reversed).
    parent: Vec<Option<(usize, usize, bool)>>,
    component: Vec<usize>,
    /// First arc (in declaration order) whose label disagrees with the
    /// induced potential ratio, if any.
    violation: Option<usize>,
}

fn propagate(tg: &TransportGraph) -> Propagation {
    let n = tg.nodes.len();
    let adj = tg.adjacency();
    let mut potential = vec![BigRational::one(); n];
    let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; n];
    let mut component = vec![usize::MAX; n];
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        component[root] = root;
        potential[root] = BigRational::one();
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, arc, reversed) in &adj[v] {
                if component[w] != usize::MAX {
                    continue;
                }
                component[w] = root;
                let label = if reversed {
                    tg.arcs[arc].label.recip()
                } else {
                    tg.arcs[arc].label.clone()
                };
                // traversing v -> w multiplies the potential by the label
                potential[w] = &potential[v] * label;
                parent[w] = Some((v, arc, reversed));
                queue.push_back(w);
            }
        }
    }
    let violation = tg.arcs.iter().position(|arc| {
        &potential[arc.tail] * &arc.label != potential[arc.head]
    });
    Propagation {
        potential,
        parent,
        component,
        violation,
    }
}

/// Steps (arc, reversed-as-traversed) walking `v` up to its forest root.
fn path_to_root(prop: &Propagation, mut v: usize) -> Vec<(usize, bool)> {
    let mut steps = Vec::new();
    while let Some((p, arc, reversed)) = prop.parent[v] {
        // The tree edge was traversed parent -> v with `reversed`; walking
        // v -> parent traverses it the other way round.
        steps.push((arc, !reversed));
        v = p;
    }
    steps
}

/// Searches for a closed arc walk with label product different from 1.
///
/// Spanning-forest potential propagation with exact rationals: a non-tree
/// arc whose label disagrees with the induced potential ratio closes an
/// unbalanced cycle with the tree path between its endpoints. Returns `None`
/// when every cycle is balanced.
pub fn detect_unbalance(tg: &TransportGraph) -> Option<CycleCertificate> {
    let prop = propagate(tg);
    let bad = prop.violation?;
    let arc = &tg.arcs[bad];

    // Walk head -> root -> tail along the forest, then close with the arc
    // traversed forward. Tree paths to the common root are simplified by
    // dropping the shared suffix.
    let mut up_head = path_to_root(&prop, arc.head);
    let mut up_tail = path_to_root(&prop, arc.tail);
    while let (Some(a), Some(b)) = (up_head.last(), up_tail.last()) {
        if a.0 == b.0 && a.1 == b.1 {
            // same tree edge traversed the same way at the tail of both
            // paths: it cancels out of head -> LCA -> tail
            up_head.pop();
            up_tail.pop();
        } else {
            break;
        }
    }
    let mut steps: Vec<CycleStep> = Vec::new();
    for (a, r) in &up_head {
        steps.push(CycleStep {
            edge: tg.arcs[*a].edge_id.clone(),
            reversed: *r,
        });
    }
    for (a, r) in up_tail.iter().rev() {
        steps.push(CycleStep {
            edge: tg.arcs[*a].edge_id.clone(),
            // walking down toward the tail reverses the upward traversal
            reversed: !*r,
        });
    }
    steps.push(CycleStep {
        edge: arc.edge_id.clone(),
        reversed: false,
    });

    // product over the closed walk: (phi(tail)/phi(head)) * label != 1
    let product = &prop.potential[arc.tail] * &arc.label / &prop.potential[arc.head];
    debug_assert!(product != BigRational::one());
    let cert = CycleCertificate {
        base: tg.nodes[arc.head].clone(),
        steps,
        product,
    };
    debug_assert!(tg.verify_cycle(&cert).is_ok());
    Some(cert)
}

/// Positive integer potentials witnessing that every cycle is balanced, or
/// `None` exactly when `detect_unbalance` finds a certificate. Potentials
/// are normalized per component to the minimal positive integers.
pub fn undistortion_certificate(tg: &TransportGraph) -> Option<UndistortionCertificate> {
    let prop = propagate(tg);
    if prop.violation.is_some() {
        return None;
    }
    let n = tg.nodes.len();
    let mut potentials: BTreeMap<NodeId, BigInt> = BTreeMap::new();
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        components.entry(prop.component[v]).or_default().push(v);
    }
    for (_, members) in components {
        let mut denom_lcm = BigInt::one();
        for &v in &members {
            denom_lcm = denom_lcm.lcm(prop.potential[v].denom());
        }
        let scaled: Vec<BigInt> = members
            .iter()
            .map(|&v| (&prop.potential[v] * &denom_lcm).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for s in &scaled {
            g = g.gcd(s);
        }
        for (&v, s) in members.iter().zip(scaled) {
            potentials.insert(tg.nodes[v].clone(), s / &g);
        }
    }
    let cert = UndistortionCertificate { potentials };
    debug_assert!(tg.verify_potentials(&cert).is_ok());
    Some(cert)
}

/// Transport nodes from which a walk (arcs in either orientation) reaches a
/// node lying on an unbalanced cycle: the union of the unbalanced connected
/// components. Empty exactly when the group is undistorted.
pub fn distorted_classes(tg: &TransportGraph) -> Vec<NodeId> {
    let prop = propagate(tg);
    let mut bad_components: Vec<usize> = tg
        .arcs
        .iter()
        .filter(|arc| &prop.potential[arc.tail] * &arc.label != prop.potential[arc.head])
        .map(|arc| prop.component[arc.tail])
        .collect();
    bad_components.sort_unstable();
    bad_components.dedup();
    (0..tg.nodes.len())
        .filter(|&v| bad_components.binary_search(&prop.component[v]).is_ok())
        .map(|v| tg.nodes[v].clone())
        .collect()
}

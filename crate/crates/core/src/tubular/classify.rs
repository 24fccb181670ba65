//! Dehn-function classification and the full tubular verdict.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::format_rational;
use crate::rbf::{tubular_rbf_directions, RbfSpec};

use super::transport::{
    build_transport_graph, detect_unbalance, distorted_classes, undistortion_certificate,
    CycleCertificate, UndistortionCertificate,
};
use super::{commensurability_classes, TubularGroupSpec};

/// Isoperimetric class of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DehnClass {
    #[serde(rename = "quadratic")]
    Quadratic,
    #[serde(rename = "exponential")]
    Exponential,
    /// Distorted with at least two distorted direction classes at one
    /// vertex: only a super-quadratic lower bound is certified.
    #[serde(rename = "super_quadratic_unclassified")]
    SuperQuadraticUnclassified,
}

impl std::fmt::Display for DehnClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DehnClass::Quadratic => write!(f, "quadratic"),
            DehnClass::Exponential => write!(f, "exponential"),
            DehnClass::SuperQuadraticUnclassified => {
                write!(f, "super_quadratic_unclassified")
            }
        }
    }
}

/// The trichotomy for tubular groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TubularStatus {
    #[serde(rename = "CoarseMedian_CocompactlyCubulated_VirtuallySpecial")]
    CoarseMedianCocompactlyCubulatedVirtuallySpecial,
    #[serde(rename = "NoCoarseMedian_via_RBF")]
    NoCoarseMedianViaRbf,
    #[serde(rename = "NoCoarseMedian_via_Distortion")]
    NoCoarseMedianViaDistortion,
}

impl std::fmt::Display for TubularStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TubularStatus::CoarseMedianCocompactlyCubulatedVirtuallySpecial => {
                "CoarseMedian_CocompactlyCubulated_VirtuallySpecial"
            }
            TubularStatus::NoCoarseMedianViaRbf => "NoCoarseMedian_via_RBF",
            TubularStatus::NoCoarseMedianViaDistortion => "NoCoarseMedian_via_Distortion",
        };
        write!(f, "{s}")
    }
}

/// A Baumslag-Solitar witness extracted from an unbalanced cycle: an element
/// conjugating `p^m` to `p^n` with `m != ±n`, realized by the arc walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsWitness {
    pub m: BigInt,
    pub n: BigInt,
    pub walk: CycleCertificate,
}

/// Full verdict for a tubular group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubularVerdict {
    pub status: TubularStatus,
    pub distorted: bool,
    pub dehn: DehnClass,
    /// Maximum number of commensurability classes over the vertices.
    pub max_classes: usize,
    pub unbalanced_cycle: Option<CycleCertificate>,
    pub potentials: Option<UndistortionCertificate>,
    pub bs_witness: Option<BsWitness>,
    pub rbf: Option<RbfSpec>,
    pub reasons: Vec<String>,
}

/// Classifies the Dehn function: quadratic when undistorted; exponential
/// when distorted with at most one distorted direction class at each vertex;
/// otherwise only the super-quadratic lower bound is certified.
pub fn dehn_class(spec: &TubularGroupSpec) -> Result<DehnClass> {
    spec.validate()?;
    let tg = build_transport_graph(spec)?;
    let distorted = distorted_classes(&tg);
    if distorted.is_empty() {
        return Ok(DehnClass::Quadratic);
    }
    let mut per_vertex: std::collections::BTreeMap<&str, usize> = Default::default();
    for node in &distorted {
        *per_vertex.entry(node.vertex.as_str()).or_insert(0) += 1;
    }
    if per_vertex.values().all(|&c| c <= 1) {
        Ok(DehnClass::Exponential)
    } else {
        Ok(DehnClass::SuperQuadraticUnclassified)
    }
}

/// Extracts the Baumslag-Solitar pair from an unbalanced cycle: with cycle
/// product `a/b` in lowest terms, the walk conjugates the `m = b` power of
/// the base direction to the `n = a` power, and `m != ±n` since the product
/// is positive and differs from 1.
pub fn bs_witness(spec: &TubularGroupSpec) -> Result<Option<BsWitness>> {
    let tg = build_transport_graph(spec)?;
    Ok(detect_unbalance(&tg).map(|cert| BsWitness {
        m: cert.product.denom().clone(),
        n: cert.product.numer().clone(),
        walk: cert,
    }))
}

/// The full trichotomy.
///
/// Distorted specs get the distortion obstruction with the unbalanced cycle
/// and Baumslag-Solitar witness; undistorted specs with a vertex carrying at
/// least three commensurability classes get the branching-flat obstruction;
/// the rest are cocompactly cubulated and virtually compact special, with an
/// integer potential certificate.
pub fn classify_tubular(spec: &TubularGroupSpec) -> Result<TubularVerdict> {
    spec.validate()?;
    let tg = build_transport_graph(spec)?;
    let dehn = dehn_class(spec)?;
    let max_classes = spec
        .vertices
        .iter()
        .map(|v| commensurability_classes(spec, v).map(|c| c.len()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);

    if let Some(cycle) = detect_unbalance(&tg) {
        let bs = BsWitness {
            m: cycle.product.denom().clone(),
            n: cycle.product.numer().clone(),
            walk: cycle.clone(),
        };
        let reasons = vec![
            format!(
                "the transport cycle through {} has label product {} != 1: a vertex \
                 group is distorted",
                cycle.base,
                format_rational(&cycle.product)
            ),
            format!(
                "the walk realizes an element conjugating p^{} to p^{} for the \
                 direction p at {}: a Baumslag-Solitar relation with m != ±n",
                bs.m, bs.n, cycle.base
            ),
            format!("distorted tubular groups have {dehn} Dehn function"),
            "a super-quadratic isoperimetric function rules out any coarse median, \
             hence any cocompact cubulation"
                .to_string(),
        ];
        return Ok(TubularVerdict {
            status: TubularStatus::NoCoarseMedianViaDistortion,
            distorted: true,
            dehn,
            max_classes,
            unbalanced_cycle: Some(cycle),
            potentials: None,
            bs_witness: Some(bs),
            rbf: None,
            reasons,
        });
    }

    let potentials = undistortion_certificate(&tg)
        .expect("balanced transport graph must carry potentials");

    if max_classes >= 3 {
        // First vertex (in declaration order) with three classes.
        let witness_vertex = spec
            .vertices
            .iter()
            .find(|v| {
                commensurability_classes(spec, v)
                    .map(|c| c.len() >= 3)
                    .unwrap_or(false)
            })
            .expect("max_classes >= 3 guarantees a witness vertex")
            .clone();
        let rbf = tubular_rbf_directions(spec, &witness_vertex)?
            .expect("vertex with >= 3 classes yields branching directions");
        let dirs: Vec<String> = rbf
            .directions
            .iter()
            .map(|d| format!("({},{})", d[0], d[1]))
            .collect();
        let reasons = vec![
            "every transport cycle is balanced: all vertex groups are undistorted"
                .to_string(),
            format!(
                "vertex {witness_vertex} has three pairwise non-commensurable incident \
                 edge directions {}: half-flats branch off its flat along three \
                 pairwise non-parallel families of lines",
                dirs.join(", ")
            ),
            "an undistorted flat with coarsely dense branching in three pairwise \
             independent directions embeds a 2-dimensional richly branching flat \
             quasiisometrically"
                .to_string(),
            "a richly branching flat of top dimension rules out any coarse median, \
             hence any cocompact cubulation"
                .to_string(),
        ];
        return Ok(TubularVerdict {
            status: TubularStatus::NoCoarseMedianViaRbf,
            distorted: false,
            dehn,
            max_classes,
            unbalanced_cycle: None,
            potentials: Some(potentials),
            bs_witness: None,
            rbf: Some(rbf),
            reasons,
        });
    }

    let reasons = vec![
        "every transport cycle is balanced: all vertex groups are undistorted \
         (integer potentials attached)"
            .to_string(),
        format!(
            "no vertex has more than two commensurability classes of incident edge \
             directions (maximum {max_classes}): no richly branching flat arises"
        ),
        "an undistorted tubular group with at most two classes per vertex and no \
         Baumslag-Solitar relation is cocompactly cubulated and virtually compact \
         special"
            .to_string(),
    ];
    Ok(TubularVerdict {
        status: TubularStatus::CoarseMedianCocompactlyCubulatedVirtuallySpecial,
        distorted: false,
        dehn,
        max_classes,
        unbalanced_cycle: None,
        potentials: Some(potentials),
        bs_witness: None,
        rbf: None,
        reasons,
    })
}

impl TubularVerdict {
    /// Re-verifies every embedded certificate against the spec.
    pub fn verify(&self, spec: &TubularGroupSpec) -> Result<()> {
        let tg = build_transport_graph(spec)?;
        if self.distorted == self.potentials.is_some() {
            return Err(Error::input(
                "verdict must carry exactly one of distortion / potentials",
            ));
        }
        if (self.status == TubularStatus::NoCoarseMedianViaRbf) != self.rbf.is_some() {
            return Err(Error::input(
                "branching-flat data present iff the status is the RBF obstruction",
            ));
        }
        if let Some(cycle) = &self.unbalanced_cycle {
            tg.verify_cycle(cycle)?;
        }
        if let Some(potentials) = &self.potentials {
            tg.verify_potentials(potentials)?;
        }
        if let Some(bs) = &self.bs_witness {
            tg.verify_cycle(&bs.walk)?;
            if &bs.n * bs.walk.product.denom() != &bs.m * bs.walk.product.numer() {
                return Err(Error::input("Baumslag-Solitar pair does not match the cycle"));
            }
            if bs.m == bs.n || bs.m == -(&bs.n) {
                return Err(Error::input("Baumslag-Solitar pair has m = ±n"));
            }
        }
        if let Some(rbf) = &self.rbf {
            rbf.validate()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let potentials = self.potentials.as_ref().map(|c| {
            let map: serde_json::Map<String, Value> = c
                .potentials
                .iter()
                .map(|(node, v)| (node.to_string(), json!(v.to_string())))
                .collect();
            Value::Object(map)
        });
        json!({
            "status": self.status.to_string(),
            "distorted": self.distorted,
            "dehn": self.dehn.to_string(),
            "max_classes": self.max_classes,
            "unbalanced_cycle": self.unbalanced_cycle.as_ref().map(cycle_to_json),
            "potentials": potentials,
            "bs_witness": self.bs_witness.as_ref().map(|bs| json!({
                "m": bs.m.to_string(),
                "n": bs.n.to_string(),
                "walk": cycle_to_json(&bs.walk),
            })),
            "rbf": self.rbf.as_ref().map(|r| r.to_json()),
            "reasons": self.reasons,
        })
    }
}

fn cycle_to_json(cycle: &CycleCertificate) -> Value {
    json!({
        "base": cycle.base.to_string(),
        "steps": cycle.steps.iter().map(|s| json!({
            "edge": s.edge,
            "reversed": s.reversed,
        })).collect::<Vec<_>>(),
        "product": format_rational(&cycle.product),
    })
}

/// Every vertex name that realizes `max_classes` classes, in order.
pub fn vertices_with_class_count(
    spec: &TubularGroupSpec,
    at_least: usize,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for v in &spec.vertices {
        if commensurability_classes(spec, v)?.len() >= at_least {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Sanity helper for property tests: the set of vertices appearing in the
/// spec's distorted transport nodes.
pub fn distorted_vertices(spec: &TubularGroupSpec) -> Result<BTreeSet<String>> {
    let tg = build_transport_graph(spec)?;
    Ok(distorted_classes(&tg)
        .into_iter()
        .map(|n| n.vertex)
        .collect())
}

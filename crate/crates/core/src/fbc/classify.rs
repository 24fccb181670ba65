//! The linearity machinery: supports, internal strata, nearby sources, rich
//! linearity, and the free-by-cyclic classification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rbf::{fbc_rbf_directions, RbfSpec};

use super::{IrttSpec, Stratum, Suffix};

/// Linear strata (edge ids, in filtration order) whose suffix is a power of
/// a cyclic permutation of the given declared cycle.
pub fn supports(spec: &IrttSpec, cycle_id: &str) -> Result<Vec<String>> {
    spec.cycle(cycle_id)?;
    Ok(spec
        .linear_strata()
        .into_iter()
        .filter(|(_, _, suffix)| suffix.cycle == cycle_id)
        .map(|(_, edge, _)| edge.clone())
        .collect())
}

/// One arc of the auxiliary reachability graph used by `is_internal`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ReachableVia {
    #[serde(rename = "nielsen_path")]
    NielsenPath,
    #[serde(rename = "linear_stratum")]
    LinearStratum,
}

/// A step of a linear-path witness: a declared Nielsen path or a linear
/// stratum edge, traversed forwards or backwards.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReachStep {
    pub via: ReachableVia,
    pub id: String,
    pub reversed: bool,
}

fn reachability_arcs(
    spec: &IrttSpec,
    exclude_stratum: Option<&str>,
) -> Result<Vec<(String, String, ReachStep)>> {
    let mut arcs = Vec::new();
    for path in &spec.nielsen_paths {
        let (start, end) = spec.check_path(path)?;
        arcs.push((
            start,
            end,
            ReachStep {
                via: ReachableVia::NielsenPath,
                id: path.id.clone(),
                reversed: false,
            },
        ));
    }
    for (_, edge_id, _) in spec.linear_strata() {
        if Some(edge_id.as_str()) == exclude_stratum {
            continue;
        }
        let edge = spec.edge(edge_id)?;
        arcs.push((
            edge.from.clone(),
            edge.to.clone(),
            ReachStep {
                via: ReachableVia::LinearStratum,
                id: edge_id.clone(),
                reversed: false,
            },
        ));
    }
    Ok(arcs)
}

/// Vertices lying on some declared Nielsen cycle.
fn cycle_vertices(spec: &IrttSpec) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for cycle in &spec.nielsen_cycles {
        out.extend(spec.path_vertices(cycle)?);
    }
    Ok(out)
}

/// Whether the linear stratum is internal: a linear path (a concatenation of
/// declared Nielsen paths and linear-stratum edges, in either direction, the
/// empty path allowed) leads from its initial vertex to a vertex of some
/// declared Nielsen cycle. The queried stratum itself is not available as an
/// arc: a strip cannot be extended backwards through itself.
///
/// Returns the verdict together with a shortest path witness (empty for a
/// stratum whose initial vertex already lies on a cycle).
pub fn is_internal(spec: &IrttSpec, stratum_edge: &str) -> Result<(bool, Option<Vec<ReachStep>>)> {
    let is_linear = spec
        .linear_strata()
        .iter()
        .any(|(_, edge, _)| *edge == stratum_edge);
    if !is_linear {
        return Err(Error::input(format!(
            "stratum {stratum_edge:?} is not a linear stratum"
        )));
    }
    let start = spec.edge(stratum_edge)?.from.clone();
    let targets = cycle_vertices(spec)?;
    if targets.contains(&start) {
        return Ok((true, Some(Vec::new())));
    }

    let arcs = reachability_arcs(spec, Some(stratum_edge))?;
    let mut adjacency: BTreeMap<&String, Vec<(&String, ReachStep)>> = BTreeMap::new();
    for (a, b, step) in &arcs {
        adjacency.entry(a).or_default().push((b, step.clone()));
        let mut back = step.clone();
        back.reversed = true;
        adjacency.entry(b).or_default().push((a, back));
    }

    let mut prev: BTreeMap<String, (String, ReachStep)> = BTreeMap::new();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(v) = queue.pop_front() {
        if targets.contains(&v) {
            let mut steps = Vec::new();
            let mut cur = v;
            while let Some((from, step)) = prev.get(&cur) {
                steps.push(step.clone());
                cur = from.clone();
            }
            steps.reverse();
            return Ok((true, Some(steps)));
        }
        if let Some(neighbors) = adjacency.get(&v) {
            for (w, step) in neighbors {
                if seen.insert((*w).clone()) {
                    prev.insert((*w).clone(), (v.clone(), step.clone()));
                    queue.push_back((*w).clone());
                }
            }
        }
    }
    Ok((false, None))
}

/// Whether some vertex of the cycle is joined to a source (the initial
/// vertex of some linear stratum) by a declared Nielsen path; the empty path
/// is allowed, so a source on the cycle counts.
pub fn has_nearby_source(spec: &IrttSpec, cycle_id: &str) -> Result<bool> {
    Ok(find_nearby_source(spec, cycle_id)?.is_some())
}

/// Witness that a Nielsen cycle has a nearby source.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SourceWitness {
    pub source_vertex: String,
    pub cycle_vertex: String,
    /// Declared Nielsen path joining them; `None` means the empty path
    /// (the source lies on the cycle).
    pub nielsen_path: Option<String>,
}

fn find_nearby_source(spec: &IrttSpec, cycle_id: &str) -> Result<Option<SourceWitness>> {
    let cycle = spec.cycle(cycle_id)?;
    let on_cycle = spec.path_vertices(cycle)?;
    let sources: BTreeSet<String> = spec
        .linear_strata()
        .into_iter()
        .map(|(_, edge, _)| spec.edge(edge).map(|e| e.from.clone()))
        .collect::<Result<_>>()?;
    for v in &on_cycle {
        if sources.contains(v) {
            return Ok(Some(SourceWitness {
                source_vertex: v.clone(),
                cycle_vertex: v.clone(),
                nielsen_path: None,
            }));
        }
    }
    for path in &spec.nielsen_paths {
        let (start, end) = spec.check_path(path)?;
        for (a, b) in [(&start, &end), (&end, &start)] {
            if on_cycle.contains(a) && sources.contains(b) {
                return Ok(Some(SourceWitness {
                    source_vertex: b.clone(),
                    cycle_vertex: a.clone(),
                    nielsen_path: Some(path.id.clone()),
                }));
            }
        }
    }
    Ok(None)
}

/// An internal linear stratum named in a rich-linearity witness, with its
/// suffix exponent.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct InternalStratum {
    pub edge: String,
    pub exponent: i64,
}

/// A rich-linearity witness: a Nielsen cycle supporting three internal
/// linear strata, or two internal linear strata plus a nearby source.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RichLinearityWitness {
    pub cycle: String,
    pub internal: Vec<InternalStratum>,
    pub source: Option<SourceWitness>,
}

impl RichLinearityWitness {
    /// Re-confirms every component of the witness against the spec.
    pub fn verify(&self, spec: &IrttSpec) -> Result<()> {
        let supported = supports(spec, &self.cycle)?;
        for stratum in &self.internal {
            if !supported.contains(&stratum.edge) {
                return Err(Error::input(format!(
                    "witness stratum {:?} is not supported by cycle {:?}",
                    stratum.edge, self.cycle
                )));
            }
            let (internal, _) = is_internal(spec, &stratum.edge)?;
            if !internal {
                return Err(Error::input(format!(
                    "witness stratum {:?} is not internal",
                    stratum.edge
                )));
            }
            let actual = spec
                .linear_strata()
                .into_iter()
                .find(|(_, edge, _)| **edge == stratum.edge)
                .map(|(_, _, suffix)| suffix.exp)
                .expect("supported stratum is linear");
            if actual != stratum.exponent {
                return Err(Error::input(format!(
                    "witness stratum {:?} has exponent {actual}, not {}",
                    stratum.edge, stratum.exponent
                )));
            }
        }
        match &self.source {
            Some(_) => {
                if self.internal.len() < 2 {
                    return Err(Error::input(
                        "a source witness needs two internal strata",
                    ));
                }
                if !has_nearby_source(spec, &self.cycle)? {
                    return Err(Error::input(format!(
                        "cycle {:?} has no nearby source",
                        self.cycle
                    )));
                }
            }
            None => {
                if self.internal.len() < 3 {
                    return Err(Error::input(
                        "a witness without a source needs three internal strata",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Picks `want` strata from `candidates` (filtration order), preferring a
/// selection with pairwise distinct exponents when one exists.
fn select_strata(candidates: &[(String, i64)], want: usize) -> Vec<InternalStratum> {
    let mut chosen: Vec<&(String, i64)> = Vec::new();
    let mut seen = BTreeSet::new();
    for c in candidates {
        if chosen.len() == want {
            break;
        }
        if seen.insert(c.1) {
            chosen.push(c);
        }
    }
    // not enough distinct exponents: fill in filtration order
    for c in candidates {
        if chosen.len() == want {
            break;
        }
        if !chosen.iter().any(|p| std::ptr::eq(*p, c)) {
            chosen.push(c);
        }
    }
    chosen
        .into_iter()
        .map(|(edge, exp)| InternalStratum {
            edge: edge.clone(),
            exponent: *exp,
        })
        .collect()
}

/// Searches the declared Nielsen cycles (in declaration order) for the first
/// one witnessing rich linearity: at least three internal linear strata
/// supported, or at least two plus a nearby source.
pub fn rich_linearity(spec: &IrttSpec) -> Result<Option<RichLinearityWitness>> {
    for cycle in &spec.nielsen_cycles {
        let mut internal: Vec<(String, i64)> = Vec::new();
        for edge in supports(spec, &cycle.id)? {
            let (ok, _) = is_internal(spec, &edge)?;
            if ok {
                let exp = spec
                    .linear_strata()
                    .into_iter()
                    .find(|(_, e, _)| **e == edge)
                    .map(|(_, _, s)| s.exp)
                    .expect("supported stratum is linear");
                internal.push((edge, exp));
            }
        }
        if internal.len() >= 3 {
            return Ok(Some(RichLinearityWitness {
                cycle: cycle.id.clone(),
                internal: select_strata(&internal, 3),
                source: None,
            }));
        }
        if internal.len() >= 2 {
            if let Some(source) = find_nearby_source(spec, &cycle.id)? {
                return Ok(Some(RichLinearityWitness {
                    cycle: cycle.id.clone(),
                    internal: select_strata(&internal, 2),
                    source: Some(source),
                }));
            }
        }
    }
    Ok(None)
}

/// The five mutually exclusive branches of the classification, in decision
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FbcBranch {
    #[serde(rename = "NoCoarseMedian_RichLinearity")]
    NoCoarseMedianRichLinearity,
    #[serde(rename = "Hyperbolic_CocompactlyCubulated")]
    HyperbolicCocompactlyCubulated,
    #[serde(rename = "RelHyp_over_F_times_Z")]
    RelHypOverFTimesZ,
    #[serde(rename = "Virtually_Colourable_HHG")]
    VirtuallyColourableHhg,
    #[serde(rename = "Inconclusive")]
    Inconclusive,
}

impl std::fmt::Display for FbcBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FbcBranch::NoCoarseMedianRichLinearity => "NoCoarseMedian_RichLinearity",
            FbcBranch::HyperbolicCocompactlyCubulated => "Hyperbolic_CocompactlyCubulated",
            FbcBranch::RelHypOverFTimesZ => "RelHyp_over_F_times_Z",
            FbcBranch::VirtuallyColourableHhg => "Virtually_Colourable_HHG",
            FbcBranch::Inconclusive => "Inconclusive",
        };
        write!(f, "{s}")
    }
}

/// Verdict for a declared train-track structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FbcVerdict {
    pub branch: FbcBranch,
    pub witness: Option<RichLinearityWitness>,
    pub rbf: Option<RbfSpec>,
    pub reasons: Vec<String>,
}

impl FbcVerdict {
    pub fn verify(&self, spec: &IrttSpec) -> Result<()> {
        if (self.branch == FbcBranch::NoCoarseMedianRichLinearity) != self.witness.is_some()
        {
            return Err(Error::input(
                "witness present iff the branch is the rich-linearity obstruction",
            ));
        }
        if let Some(witness) = &self.witness {
            witness.verify(spec)?;
        }
        if let Some(rbf) = &self.rbf {
            rbf.validate()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "branch": self.branch.to_string(),
            "witness": self.witness.as_ref().map(|w| json!({
                "cycle": w.cycle,
                "internal": w.internal,
                "source": w.source,
            })),
            "rbf": self.rbf.as_ref().map(|r| r.to_json()),
            "reasons": self.reasons,
        })
    }
}

/// Classifies a declared train-track structure, in decision order:
/// rich linearity (no coarse median), no Nielsen cycles (hyperbolic,
/// cocompactly cubulated), no linear strata (relatively hyperbolic over free
/// times cyclic), every cycle supporting at most one linear stratum with all
/// non-exponential strata linear (virtually colourable hierarchically
/// hyperbolic), otherwise inconclusive.
pub fn classify_fbc(spec: &IrttSpec) -> Result<FbcVerdict> {
    spec.validate()?;

    if let Some(witness) = rich_linearity(spec)? {
        let rbf = match fbc_rbf_directions(&witness) {
            Ok(rbf) => Some(rbf),
            // coinciding exponents: the witness stands, but no direction
            // data can be attached
            Err(Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
        let shape = match &witness.source {
            Some(s) => format!(
                "two internal linear strata ({}) and a nearby source at {}",
                witness
                    .internal
                    .iter()
                    .map(|s| s.edge.clone())
                    .collect::<Vec<_>>()
                    .join(", "),
                s.source_vertex
            ),
            None => format!(
                "three internal linear strata ({})",
                witness
                    .internal
                    .iter()
                    .map(|s| s.edge.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        let reasons = vec![
            format!(
                "Nielsen cycle {:?} supports {shape}: the group has rich linearity",
                witness.cycle
            ),
            "the mapping-torus flat of the cycle carries half-flats branching along \
             three pairwise non-parallel families of lines: a 2-dimensional richly \
             branching flat embeds quasiisometrically"
                .to_string(),
            "a richly branching flat at top rank rules out any coarse median, hence \
             any cocompact cubulation, even virtually"
                .to_string(),
        ];
        return Ok(FbcVerdict {
            branch: FbcBranch::NoCoarseMedianRichLinearity,
            witness: Some(witness),
            rbf,
            reasons,
        });
    }

    if spec.nielsen_cycles.is_empty() {
        return Ok(FbcVerdict {
            branch: FbcBranch::HyperbolicCocompactlyCubulated,
            witness: None,
            rbf: None,
            reasons: vec![
                "no Nielsen cycles are declared: the monodromy is atoroidal, so the \
                 group is hyperbolic"
                    .to_string(),
                "hyperbolic free-by-cyclic groups are cocompactly cubulated".to_string(),
            ],
        });
    }

    let has_linear = spec
        .strata
        .iter()
        .any(|s| matches!(s, Stratum::Linear { .. }));
    if !has_linear {
        return Ok(FbcVerdict {
            branch: FbcBranch::RelHypOverFTimesZ,
            witness: None,
            rbf: None,
            reasons: vec![
                "Nielsen cycles exist but no stratum is linear: every polynomially \
                 growing piece is a trivial bundle"
                    .to_string(),
                "the group is virtually hyperbolic relative to subgroups of the form \
                 (free) x Z, and in particular quasicubical"
                    .to_string(),
            ],
        });
    }

    let all_non_exponential_linear = !spec
        .strata
        .iter()
        .any(|s| matches!(s, Stratum::Polynomial { .. }));
    let mut support_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, _, Suffix { cycle, .. }) in spec.linear_strata() {
        *support_counts.entry(cycle.as_str()).or_insert(0) += 1;
    }
    let each_cycle_at_most_one = support_counts.values().all(|&c| c <= 1);
    if all_non_exponential_linear && each_cycle_at_most_one {
        return Ok(FbcVerdict {
            branch: FbcBranch::VirtuallyColourableHhg,
            witness: None,
            rbf: None,
            reasons: vec![
                "all non-exponential strata are linear and every Nielsen cycle \
                 supports at most one linear stratum"
                    .to_string(),
                "the mapping torus splits as an admissible graph of groups, so the \
                 group is virtually a colourable hierarchically hyperbolic group, and \
                 in particular quasicubical"
                    .to_string(),
            ],
        });
    }

    Ok(FbcVerdict {
        branch: FbcBranch::Inconclusive,
        witness: None,
        rbf: None,
        reasons: vec![
            "the declared data matches no decisive criterion: linearity is not rich, \
             but some Nielsen cycle supports several linear strata or a stratum grows \
             super-linearly"
                .to_string(),
        ],
    })
}

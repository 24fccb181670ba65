//! Free-by-cyclic groups presented by declared relative train-track data.
//!
//! The Nielsen paths and cycles here are declared inputs, not computed from
//! a graph map: computing the fixed paths of a general homotopy equivalence
//! is train-track machinery this crate does not reimplement. Every
//! classification is therefore relative to the declared data, and
//! `Inconclusive` is an honest output.

mod classify;

pub use classify::{
    classify_fbc, has_nearby_source, is_internal, rich_linearity, supports, FbcBranch,
    FbcVerdict, InternalStratum, ReachStep, ReachableVia, RichLinearityWitness,
    SourceWitness,
};

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// An oriented edge of the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub id: String,
    /// Initial vertex, written `e^-`.
    pub from: String,
    /// Terminal vertex, written `e^+`.
    pub to: String,
}

/// One step of an edge path: an edge traversed forward or against its
/// orientation (rendered `"a"` / `"a~"` in JSON).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStep {
    pub edge: String,
    pub reversed: bool,
}

impl EdgeStep {
    pub fn render(&self) -> String {
        if self.reversed {
            format!("{}~", self.edge)
        } else {
            self.edge.clone()
        }
    }

    pub fn parse(s: &str) -> EdgeStep {
        match s.strip_suffix('~') {
            Some(edge) => EdgeStep {
                edge: edge.to_string(),
                reversed: true,
            },
            None => EdgeStep {
                edge: s.to_string(),
                reversed: false,
            },
        }
    }
}

/// A declared Nielsen path or cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredPath {
    pub id: String,
    pub steps: Vec<EdgeStep>,
}

/// Reference to a Nielsen cycle power: the suffix of a linear stratum is
/// `exp`-th power of the cyclic permutation of `cycle` starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Suffix {
    pub cycle: String,
    pub exp: i64,
    pub offset: usize,
}

/// One stratum of the filtration, in the declared filtration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stratum {
    /// A single edge fixed by the map.
    Invariant { edge: String },
    /// An exponentially growing stratum.
    Exponential { edges: Vec<String> },
    /// A single edge whose image is itself followed by a Nielsen-cycle
    /// power.
    Linear { edge: String, suffix: Suffix },
    /// A single non-exponential edge of super-linear polynomial growth;
    /// its suffix is not a Nielsen cycle, so no exponent data is carried.
    Polynomial { edge: String },
    /// A zero stratum.
    Zero { edges: Vec<String> },
}

impl Stratum {
    pub fn kind(&self) -> &'static str {
        match self {
            Stratum::Invariant { .. } => "invariant",
            Stratum::Exponential { .. } => "exponential",
            Stratum::Linear { .. } => "linear",
            Stratum::Polynomial { .. } => "polynomial",
            Stratum::Zero { .. } => "zero",
        }
    }

    pub fn edges(&self) -> Vec<&String> {
        match self {
            Stratum::Invariant { edge }
            | Stratum::Linear { edge, .. }
            | Stratum::Polynomial { edge } => vec![edge],
            Stratum::Exponential { edges } | Stratum::Zero { edges } => {
                edges.iter().collect()
            }
        }
    }
}

/// A declared improved-relative-train-track structure: graph, filtration
/// (the strata list order), strata records, and the declared Nielsen paths
/// and cycles. `fixed_vertices`, when present, lists the vertices declared
/// fixed by the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrttSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<GraphEdge>,
    pub strata: Vec<Stratum>,
    pub nielsen_paths: Vec<DeclaredPath>,
    pub nielsen_cycles: Vec<DeclaredPath>,
    pub fixed_vertices: Option<Vec<String>>,
}

impl IrttSpec {
    pub fn edge(&self, id: &str) -> Result<&GraphEdge> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::input(format!("unknown edge {id:?}")))
    }

    pub fn cycle(&self, id: &str) -> Result<&DeclaredPath> {
        self.nielsen_cycles
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::input(format!("unknown Nielsen cycle {id:?}")))
    }

    pub fn nielsen_path(&self, id: &str) -> Result<&DeclaredPath> {
        self.nielsen_paths
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| Error::input(format!("unknown Nielsen path {id:?}")))
    }

    /// Start and end vertices of a step.
    pub fn step_endpoints(&self, step: &EdgeStep) -> Result<(String, String)> {
        let e = self.edge(&step.edge)?;
        Ok(if step.reversed {
            (e.to.clone(), e.from.clone())
        } else {
            (e.from.clone(), e.to.clone())
        })
    }

    /// Checks a path is nonempty, concatenable, and reduced; returns its
    /// endpoints.
    pub fn check_path(&self, path: &DeclaredPath) -> Result<(String, String)> {
        if path.steps.is_empty() {
            return Err(Error::input(format!("path {:?} is empty", path.id)));
        }
        let mut endpoints = Vec::new();
        for step in &path.steps {
            endpoints.push(self.step_endpoints(step)?);
        }
        for (i, pair) in path.steps.windows(2).enumerate() {
            if endpoints[i].1 != endpoints[i + 1].0 {
                return Err(Error::input(format!(
                    "path {:?} breaks between steps {} and {}",
                    path.id,
                    pair[0].render(),
                    pair[1].render()
                )));
            }
            if pair[0].edge == pair[1].edge && pair[0].reversed != pair[1].reversed {
                return Err(Error::input(format!(
                    "path {:?} backtracks over {}",
                    path.id, pair[0].edge
                )));
            }
        }
        Ok((
            endpoints.first().unwrap().0.clone(),
            endpoints.last().unwrap().1.clone(),
        ))
    }

    /// Checks a cycle is a nontrivial immersed closed path: reduced,
    /// closed, and cyclically reduced.
    pub fn check_cycle(&self, cycle: &DeclaredPath) -> Result<()> {
        let (start, end) = self.check_path(cycle)?;
        if start != end {
            return Err(Error::input(format!(
                "cycle {:?} is not closed ({start} to {end})",
                cycle.id
            )));
        }
        let first = cycle.steps.first().unwrap();
        let last = cycle.steps.last().unwrap();
        if cycle.steps.len() > 1
            && first.edge == last.edge
            && first.reversed != last.reversed
        {
            return Err(Error::input(format!(
                "cycle {:?} is not cyclically reduced",
                cycle.id
            )));
        }
        Ok(())
    }

    /// Vertices visited by a declared path or cycle.
    pub fn path_vertices(&self, path: &DeclaredPath) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for step in &path.steps {
            let (a, b) = self.step_endpoints(step)?;
            out.insert(a);
            out.insert(b);
        }
        Ok(out)
    }

    /// All linear strata in filtration order, as (index, edge, suffix).
    pub fn linear_strata(&self) -> Vec<(usize, &String, &Suffix)> {
        self.strata
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Stratum::Linear { edge, suffix } => Some((i, edge, suffix)),
                _ => None,
            })
            .collect()
    }

    /// Validates every structural invariant; the report lists one violation
    /// per line, each named with its location. Empty report means valid.
    pub fn validate_irtt(&self) -> Vec<String> {
        let mut report = Vec::new();
        let mut vertex_set = BTreeSet::new();
        for v in &self.vertices {
            if !vertex_set.insert(v.clone()) {
                report.push(format!("duplicate vertex {v:?}"));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !edge_ids.insert(e.id.clone()) {
                report.push(format!("edges[{i}]: duplicate edge id {:?}", e.id));
            }
            for (field, v) in [("from", &e.from), ("to", &e.to)] {
                if !vertex_set.contains(v) {
                    report.push(format!("edges[{i}].{field}: unknown vertex {v:?}"));
                }
            }
        }
        if !report.is_empty() {
            // the graph itself is broken; later checks would cascade
            return report;
        }

        let declared_fixed = self
            .fixed_vertices
            .as_ref()
            .map(|list| list.iter().cloned().collect::<BTreeSet<String>>());
        if let Some(fixed) = &declared_fixed {
            for v in fixed {
                if !vertex_set.contains(v) {
                    report.push(format!("fixed_vertices: unknown vertex {v:?}"));
                }
            }
        }

        // Strata partition the edge set.
        let mut covered: BTreeMap<&String, usize> = BTreeMap::new();
        for (i, stratum) in self.strata.iter().enumerate() {
            for edge in stratum.edges() {
                if !edge_ids.contains(edge) {
                    report.push(format!("strata[{i}]: unknown edge {edge:?}"));
                } else if let Some(prev) = covered.insert(edge, i) {
                    report.push(format!(
                        "strata[{i}]: edge {edge:?} already lies in stratum {prev}"
                    ));
                }
            }
        }
        for e in &self.edges {
            if !covered.contains_key(&e.id) {
                report.push(format!(
                    "strata: edge {:?} is not covered by any stratum",
                    e.id
                ));
            }
        }

        // Invariant strata come first in the filtration.
        let first_non_invariant = self
            .strata
            .iter()
            .position(|s| !matches!(s, Stratum::Invariant { .. }));
        if let Some(cut) = first_non_invariant {
            for (i, s) in self.strata.iter().enumerate().skip(cut) {
                if matches!(s, Stratum::Invariant { .. }) {
                    report.push(format!(
                        "strata[{i}]: invariant stratum appears after stratum {cut}, \
                         which is not invariant"
                    ));
                }
            }
        }

        // Fixed endpoints of non-exponential single-edge strata, when the
        // fixed vertices are declared.
        if let Some(fixed) = &declared_fixed {
            for (i, stratum) in self.strata.iter().enumerate() {
                let edge = match stratum {
                    Stratum::Invariant { edge }
                    | Stratum::Linear { edge, .. }
                    | Stratum::Polynomial { edge } => edge,
                    _ => continue,
                };
                if let Ok(e) = self.edge(edge) {
                    for v in [&e.from, &e.to] {
                        if !fixed.contains(v) {
                            report.push(format!(
                                "strata[{i}]: endpoint {v:?} of {edge:?} is not a \
                                 declared fixed vertex"
                            ));
                        }
                    }
                }
            }
        }

        // Declared Nielsen paths and cycles are well-formed.
        let mut path_ids = BTreeSet::new();
        for p in &self.nielsen_paths {
            if !path_ids.insert(p.id.clone()) {
                report.push(format!("duplicate Nielsen path id {:?}", p.id));
            }
            if let Err(e) = self.check_path(p) {
                report.push(e.to_string());
            }
        }
        let mut cycle_ids = BTreeSet::new();
        for c in &self.nielsen_cycles {
            if !cycle_ids.insert(c.id.clone()) {
                report.push(format!("duplicate Nielsen cycle id {:?}", c.id));
            }
            if let Err(e) = self.check_cycle(c) {
                report.push(e.to_string());
            }
        }

        // Linear suffixes reference declared cycles, with nonzero exponent,
        // an offset inside the cycle, and all cycle edges in strictly lower
        // strata.
        for (i, stratum) in self.strata.iter().enumerate() {
            if let Stratum::Linear { edge, suffix } = stratum {
                if suffix.exp == 0 {
                    report.push(format!(
                        "strata[{i}]: linear edge {edge:?} has zero suffix exponent"
                    ));
                }
                match self.cycle(&suffix.cycle) {
                    Err(_) => report.push(format!(
                        "strata[{i}]: suffix references undeclared cycle {:?}",
                        suffix.cycle
                    )),
                    Ok(cycle) => {
                        if suffix.offset >= cycle.steps.len() {
                            report.push(format!(
                                "strata[{i}]: suffix offset {} exceeds cycle length {}",
                                suffix.offset,
                                cycle.steps.len()
                            ));
                        }
                        for step in &cycle.steps {
                            match covered.get(&step.edge) {
                                Some(&j) if j < i => {}
                                Some(&j) => report.push(format!(
                                    "strata[{i}]: suffix cycle {:?} uses edge {:?} from \
                                     stratum {j}, which is not lower in the filtration",
                                    suffix.cycle, step.edge
                                )),
                                None => {}
                            }
                        }
                    }
                }
            }
        }

        // Distinct linear strata have distinct suffixes.
        let mut suffixes: BTreeMap<&Suffix, &String> = BTreeMap::new();
        for (_, edge, suffix) in self.linear_strata() {
            if let Some(other) = suffixes.insert(suffix, edge) {
                report.push(format!(
                    "linear strata {other:?} and {edge:?} share the suffix \
                     ({}, {}, {})",
                    suffix.cycle, suffix.exp, suffix.offset
                ));
            }
        }

        // Non-exponential strata require linear strata.
        let has_linear = self
            .strata
            .iter()
            .any(|s| matches!(s, Stratum::Linear { .. }));
        let has_non_exponential = self
            .strata
            .iter()
            .any(|s| matches!(s, Stratum::Linear { .. } | Stratum::Polynomial { .. }));
        if has_non_exponential && !has_linear {
            report.push(
                "non-exponential strata are declared but no stratum is linear".to_string(),
            );
        }

        // A cycle of invariant edges is fixed by the map; declaring none
        // while such a cycle exists would let the atoroidal branch fire on
        // data that visibly contains a fixed cycle.
        if self.nielsen_cycles.is_empty() && self.invariant_subgraph_has_cycle() {
            report.push(
                "the invariant edges contain a cycle, but no Nielsen cycle is declared"
                    .to_string(),
            );
        }

        report
    }

    fn invariant_subgraph_has_cycle(&self) -> bool {
        // union-find over invariant edges; joining two already-joined
        // vertices closes a cycle
        let index: BTreeMap<&String, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for stratum in &self.strata {
            if let Stratum::Invariant { edge } = stratum {
                let Ok(e) = self.edge(edge) else { continue };
                let (Some(&a), Some(&b)) = (index.get(&e.from), index.get(&e.to)) else {
                    continue;
                };
                let ra = find(&mut parent, a);
                let rb = find(&mut parent, b);
                if ra == rb {
                    return true;
                }
                parent[ra] = rb;
            }
        }
        false
    }

    /// `InputError` on the first violation.
    pub fn validate(&self) -> Result<()> {
        match self.validate_irtt().into_iter().next() {
            None => Ok(()),
            Some(first) => Err(Error::input(first)),
        }
    }

    /// Parses the interchange JSON.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("train-track spec must be a JSON object"))?;
        let str_array = |key: &str| -> Result<Vec<String>> {
            obj.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::input(format!("{key}: expected an array of strings")))?
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::input(format!("{key}[{i}]: expected a string")))
                })
                .collect()
        };
        let vertices = str_array("vertices")?;
        let edges = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("edges: expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let eo = e
                    .as_object()
                    .ok_or_else(|| Error::input(format!("edges[{i}]: expected an object")))?;
                let get = |k: &str| -> Result<String> {
                    eo.get(k)
                        .and_then(Value::as_str)
                        .map(str::to_string)
                        .ok_or_else(|| Error::input(format!("edges[{i}].{k}: expected a string")))
                };
                Ok(GraphEdge {
                    id: get("id")?,
                    from: get("from")?,
                    to: get("to")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let strata = obj
            .get("strata")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("strata: expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, s)| parse_stratum(s, i))
            .collect::<Result<Vec<_>>>()?;

        let parse_paths = |key: &str| -> Result<Vec<DeclaredPath>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(arr)) => arr
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let po = p.as_object().ok_or_else(|| {
                            Error::input(format!("{key}[{i}]: expected an object"))
                        })?;
                        let id = po
                            .get("id")
                            .and_then(Value::as_str)
                            .ok_or_else(|| {
                                Error::input(format!("{key}[{i}].id: expected a string"))
                            })?
                            .to_string();
                        let steps = po
                            .get("path")
                            .and_then(Value::as_array)
                            .ok_or_else(|| {
                                Error::input(format!(
                                    "{key}[{i}].path: expected an array of edge steps"
                                ))
                            })?
                            .iter()
                            .enumerate()
                            .map(|(j, s)| {
                                s.as_str().map(EdgeStep::parse).ok_or_else(|| {
                                    Error::input(format!(
                                        "{key}[{i}].path[{j}]: expected a string"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(DeclaredPath { id, steps })
                    })
                    .collect(),
                Some(other) => Err(Error::input(format!(
                    "{key}: expected an array, got {other}"
                ))),
            }
        };
        let nielsen_paths = parse_paths("nielsen_paths")?;
        let nielsen_cycles = parse_paths("nielsen_cycles")?;
        let fixed_vertices = match obj.get("fixed_vertices") {
            None | Some(Value::Null) => None,
            Some(_) => Some(str_array("fixed_vertices")?),
        };

        let spec = IrttSpec {
            vertices,
            edges,
            strata,
            nielsen_paths,
            nielsen_cycles,
            fixed_vertices,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Value {
        let paths = |list: &[DeclaredPath]| -> Value {
            Value::Array(
                list.iter()
                    .map(|p| {
                        json!({
                            "id": p.id,
                            "path": p.steps.iter().map(EdgeStep::render).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            )
        };
        let mut out = json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| json!({
                "id": e.id, "from": e.from, "to": e.to,
            })).collect::<Vec<_>>(),
            "strata": self.strata.iter().map(stratum_to_json).collect::<Vec<_>>(),
            "nielsen_paths": paths(&self.nielsen_paths),
            "nielsen_cycles": paths(&self.nielsen_cycles),
        });
        if let Some(fixed) = &self.fixed_vertices {
            out["fixed_vertices"] = json!(fixed);
        }
        out
    }
}

fn stratum_to_json(s: &Stratum) -> Value {
    match s {
        Stratum::Invariant { edge } => json!({"kind": "invariant", "edge": edge}),
        Stratum::Exponential { edges } => json!({"kind": "exponential", "edges": edges}),
        Stratum::Linear { edge, suffix } => json!({
            "kind": "linear",
            "edge": edge,
            "suffix": {"cycle": suffix.cycle, "exp": suffix.exp, "offset": suffix.offset},
        }),
        Stratum::Polynomial { edge } => json!({"kind": "polynomial", "edge": edge}),
        Stratum::Zero { edges } => json!({"kind": "zero", "edges": edges}),
    }
}

fn parse_stratum(v: &Value, i: usize) -> Result<Stratum> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input(format!("strata[{i}]: expected an object")))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::input(format!("strata[{i}].kind: expected a string")))?;
    let edge = |key: &str| -> Result<String> {
        obj.get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| Error::input(format!("strata[{i}].{key}: expected a string")))
    };
    let edges = || -> Result<Vec<String>> {
        obj.get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input(format!("strata[{i}].edges: expected an array")))?
            .iter()
            .enumerate()
            .map(|(j, e)| {
                e.as_str().map(str::to_string).ok_or_else(|| {
                    Error::input(format!("strata[{i}].edges[{j}]: expected a string"))
                })
            })
            .collect()
    };
    match kind {
        "invariant" => Ok(Stratum::Invariant { edge: edge("edge")? }),
        "exponential" => Ok(Stratum::Exponential { edges: edges()? }),
        "linear" => {
            let s = obj
                .get("suffix")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::input(format!("strata[{i}].suffix: expected an object")))?;
            let cycle = s
                .get("cycle")
                .and_then(Value::as_str)
                .ok_or_else(|| {
                    Error::input(format!("strata[{i}].suffix.cycle: expected a string"))
                })?
                .to_string();
            let exp = s
                .get("exp")
                .and_then(Value::as_i64)
                .ok_or_else(|| {
                    Error::input(format!("strata[{i}].suffix.exp: expected an integer"))
                })?;
            let offset = s.get("offset").and_then(Value::as_u64).unwrap_or(0) as usize;
            Ok(Stratum::Linear {
                edge: edge("edge")?,
                suffix: Suffix { cycle, exp, offset },
            })
        }
        "polynomial" => Ok(Stratum::Polynomial { edge: edge("edge")? }),
        "zero" => Ok(Stratum::Zero { edges: edges()? }),
        other => Err(Error::input(format!(
            "strata[{i}].kind: unknown kind {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hyp_rel_gersten() -> IrttSpec {
        // rose on a, b, c, d; exponential {a,b}; linear c and d with suffixes
        // the first and second power of the commutator cycle K = a b a~ b~
        IrttSpec {
            vertices: vec!["v".into()],
            edges: ["a", "b", "c", "d"]
                .iter()
                .map(|id| GraphEdge {
                    id: id.to_string(),
                    from: "v".into(),
                    to: "v".into(),
                })
                .collect(),
            strata: vec![
                Stratum::Exponential {
                    edges: vec!["a".into(), "b".into()],
                },
                Stratum::Linear {
                    edge: "c".into(),
                    suffix: Suffix {
                        cycle: "K".into(),
                        exp: 1,
                        offset: 0,
                    },
                },
                Stratum::Linear {
                    edge: "d".into(),
                    suffix: Suffix {
                        cycle: "K".into(),
                        exp: 2,
                        offset: 0,
                    },
                },
            ],
            nielsen_paths: vec![],
            nielsen_cycles: vec![DeclaredPath {
                id: "K".into(),
                steps: ["a", "b", "a~", "b~"].iter().map(|s| EdgeStep::parse(s)).collect(),
            }],
            fixed_vertices: Some(vec!["v".into()]),
        }
    }

    #[test]
    fn hyp_rel_gersten_validates() {
        let spec = hyp_rel_gersten();
        let report = spec.validate_irtt();
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn duplicate_suffixes_rejected() {
        let mut spec = hyp_rel_gersten();
        if let Stratum::Linear { suffix, .. } = &mut spec.strata[2] {
            suffix.exp = 1;
        }
        let report = spec.validate_irtt();
        assert!(report.iter().any(|r| r.contains("share the suffix")), "{report:?}");
    }

    #[test]
    fn undeclared_suffix_cycle_rejected() {
        let mut spec = hyp_rel_gersten();
        if let Stratum::Linear { suffix, .. } = &mut spec.strata[1] {
            suffix.cycle = "missing".into();
        }
        let report = spec.validate_irtt();
        assert!(report.iter().any(|r| r.contains("undeclared cycle")), "{report:?}");
    }

    #[test]
    fn non_immersed_cycle_rejected() {
        let mut spec = hyp_rel_gersten();
        spec.nielsen_cycles[0].steps = vec![EdgeStep::parse("a"), EdgeStep::parse("a~")];
        let report = spec.validate_irtt();
        assert!(report.iter().any(|r| r.contains("backtracks")), "{report:?}");
    }

    #[test]
    fn partition_violations_are_located() {
        let mut spec = hyp_rel_gersten();
        spec.strata.push(Stratum::Zero {
            edges: vec!["c".into()],
        });
        let report = spec.validate_irtt();
        assert!(report.iter().any(|r| r.contains("already lies")), "{report:?}");
    }

    #[test]
    fn uncovered_edge_reported() {
        let mut spec = hyp_rel_gersten();
        spec.strata.remove(2);
        let report = spec.validate_irtt();
        assert!(report.iter().any(|r| r.contains("not covered")), "{report:?}");
    }

    #[test]
    fn invariant_cycle_without_declared_cycles_is_flagged() {
        let spec = IrttSpec {
            vertices: vec!["v".into()],
            edges: vec![GraphEdge {
                id: "a".into(),
                from: "v".into(),
                to: "v".into(),
            }],
            strata: vec![Stratum::Invariant { edge: "a".into() }],
            nielsen_paths: vec![],
            nielsen_cycles: vec![],
            fixed_vertices: None,
        };
        let report = spec.validate_irtt();
        assert!(
            report.iter().any(|r| r.contains("invariant edges contain a cycle")),
            "{report:?}"
        );
    }

    #[test]
    fn suffix_in_higher_stratum_rejected() {
        let mut spec = hyp_rel_gersten();
        // move the exponential stratum after the linear ones
        let exp = spec.strata.remove(0);
        spec.strata.push(exp);
        let report = spec.validate_irtt();
        assert!(
            report.iter().any(|r| r.contains("not lower in the filtration")),
            "{report:?}"
        );
    }

    #[test]
    fn json_round_trip() {
        let spec = hyp_rel_gersten();
        let back = IrttSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }
}

//! Tubular groups: finite graphs of groups with Z^2 vertex groups and Z edge
//! groups, given by a multigraph whose edges carry the two images of the
//! edge-group generator as nonzero integer 2-vectors.

mod classify;
mod transport;

pub use classify::{
    bs_witness, classify_tubular, dehn_class, distorted_vertices, vertices_with_class_count,
    BsWitness, DehnClass, TubularStatus, TubularVerdict,
};
pub use transport::{
    build_transport_graph, detect_unbalance, distorted_classes, undistortion_certificate,
    CycleCertificate, CycleStep, NodeId, TransportGraph, UndistortionCertificate,
};

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;

use crate::error::{Error, Result};

/// An integer 2-vector.
pub type Vec2 = [i64; 2];

/// One edge of the underlying multigraph. `w_minus` and `w_plus` are the
/// images of the edge-group generator in the vertex groups at the two ends.
/// Self-loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubularEdge {
    pub id: String,
    pub end_minus: String,
    pub end_plus: String,
    pub w_minus: Vec2,
    pub w_plus: Vec2,
}

/// A tubular group presentation: finite, connected, nonempty multigraph with
/// a fixed basis of Z^2 at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubularGroupSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<TubularEdge>,
}

/// One end of an edge incident to a vertex (self-loops contribute both).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeEnd {
    Minus(usize),
    Plus(usize),
}

impl TubularGroupSpec {
    /// Validates the structural invariants: nonempty connected graph, known
    /// endpoints, unique identifiers, nonzero vectors.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::input("vertices: must be nonempty"));
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                return Err(Error::input(format!("duplicate vertex {v:?}")));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !edge_ids.insert(&e.id) {
                return Err(Error::input(format!("duplicate edge id {:?}", e.id)));
            }
            for (end, vtx) in [("from", &e.end_minus), ("to", &e.end_plus)] {
                if !seen.contains(vtx) {
                    return Err(Error::input(format!(
                        "edges[{i}].{end}: unknown vertex {vtx:?}"
                    )));
                }
            }
            for (field, w) in [("w_from", e.w_minus), ("w_to", e.w_plus)] {
                if w == [0, 0] {
                    return Err(Error::input(format!(
                        "edges[{i}].{field}: edge-group image must be nonzero"
                    )));
                }
            }
        }

        // Connectivity over the multigraph.
        let vertex_index: BTreeMap<&String, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            let a = vertex_index[&e.end_minus];
            let b = vertex_index[&e.end_plus];
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        if visited.iter().any(|&v| !v) {
            return Err(Error::input("graph is not connected"));
        }
        Ok(())
    }

    pub fn vertex_index(&self, vertex: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == vertex)
            .ok_or_else(|| Error::input(format!("unknown vertex {vertex:?}")))
    }

    /// All edge-ends incident to `vertex`, in edge order; both ends of a
    /// self-loop are listed.
    pub fn incident_ends(&self, vertex: &str) -> Result<Vec<EdgeEnd>> {
        self.vertex_index(vertex)?;
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.end_minus == vertex {
                out.push(EdgeEnd::Minus(i));
            }
            if e.end_plus == vertex {
                out.push(EdgeEnd::Plus(i));
            }
        }
        Ok(out)
    }

    pub fn end_vector(&self, end: EdgeEnd) -> Vec2 {
        match end {
            EdgeEnd::Minus(i) => self.edges[i].w_minus,
            EdgeEnd::Plus(i) => self.edges[i].w_plus,
        }
    }

    /// Parses the interchange JSON:
    /// `{"vertices":["F1",...],"edges":[{"id":"e1","from":"F1","to":"F1",
    /// "w_from":[1,0],"w_to":[2,0]},...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("tubular spec must be a JSON object"))?;
        let vertices = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("vertices: expected an array of strings"))?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::input(format!("vertices[{i}]: expected a string")))
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("edges: expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, e)| parse_edge(e, i))
            .collect::<Result<Vec<_>>>()?;
        let spec = TubularGroupSpec { vertices, edges };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "id": e.id,
                "from": e.end_minus,
                "to": e.end_plus,
                "w_from": e.w_minus,
                "w_to": e.w_plus,
            })).collect::<Vec<_>>(),
        })
    }
}

fn parse_vec2(v: &Value, path: &str) -> Result<Vec2> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::input(format!("{path}: expected an integer 2-vector")))?;
    let mut out = [0i64; 2];
    for (i, c) in arr.iter().enumerate() {
        out[i] = c
            .as_i64()
            .ok_or_else(|| Error::input(format!("{path}[{i}]: expected an integer")))?;
    }
    Ok(out)
}

fn parse_edge(v: &Value, i: usize) -> Result<TubularEdge> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input(format!("edges[{i}]: expected an object")))?;
    let field = |name: &str| -> Result<&Value> {
        obj.get(name)
            .ok_or_else(|| Error::input(format!("edges[{i}].{name}: missing")))
    };
    let str_field = |name: &str| -> Result<String> {
        field(name)?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| Error::input(format!("edges[{i}].{name}: expected a string")))
    };
    Ok(TubularEdge {
        id: str_field("id")?,
        end_minus: str_field("from")?,
        end_plus: str_field("to")?,
        w_minus: parse_vec2(field("w_from")?, &format!("edges[{i}].w_from"))?,
        w_plus: parse_vec2(field("w_to")?, &format!("edges[{i}].w_to"))?,
    })
}

/// Writes `v = m * p` with `p` primitive (gcd 1, first nonzero entry
/// positive) and `m` a nonzero integer. `InputError` on the zero vector.
pub fn normalize_primitive(v: Vec2) -> Result<(Vec2, i64)> {
    if v == [0, 0] {
        return Err(Error::input("cannot normalize the zero vector"));
    }
    let g = gcd(v[0].unsigned_abs(), v[1].unsigned_abs()) as i64;
    let mut p = [v[0] / g, v[1] / g];
    let mut m = g;
    let leading = if p[0] != 0 { p[0] } else { p[1] };
    if leading < 0 {
        p = [-p[0], -p[1]];
        m = -m;
    }
    debug_assert_eq!([p[0] * m, p[1] * m], v);
    Ok((p, m))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Groups the edge-ends at `vertex` by commensurability (equality of the
/// normalized primitive direction). Returns the classes keyed by primitive
/// vector, each with its member ends, in canonical (lexicographic) order.
pub fn commensurability_classes(
    spec: &TubularGroupSpec,
    vertex: &str,
) -> Result<BTreeMap<Vec2, Vec<EdgeEnd>>> {
    let ends = spec.incident_ends(vertex)?;
    let mut classes: BTreeMap<Vec2, Vec<EdgeEnd>> = BTreeMap::new();
    for end in ends {
        let (p, _) = normalize_primitive(spec.end_vector(end))?;
        classes.entry(p).or_default().push(end);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_extracts_gcd_and_sign() {
        assert_eq!(normalize_primitive([4, -6]).unwrap(), ([2, -3], 2));
        assert_eq!(normalize_primitive([0, -5]).unwrap(), ([0, 1], -5));
        assert_eq!(normalize_primitive([1, 0]).unwrap(), ([1, 0], 1));
        assert_eq!(normalize_primitive([-3, 0]).unwrap(), ([1, 0], -3));
        assert!(normalize_primitive([0, 0]).is_err());
    }

    fn edge(id: &str, from: &str, to: &str, wf: Vec2, wt: Vec2) -> TubularEdge {
        TubularEdge {
            id: id.into(),
            end_minus: from.into(),
            end_plus: to.into(),
            w_minus: wf,
            w_plus: wt,
        }
    }

    #[test]
    fn parallel_ends_share_a_class() {
        let spec = TubularGroupSpec {
            vertices: vec!["F".into()],
            edges: vec![edge("e", "F", "F", [2, 0], [-3, 0])],
        };
        spec.validate().unwrap();
        let classes = commensurability_classes(&spec, "F").unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[&[1, 0]].len(), 2);
    }

    #[test]
    fn disconnected_graph_rejected() {
        let spec = TubularGroupSpec {
            vertices: vec!["A".into(), "B".into()],
            edges: vec![edge("e", "A", "A", [1, 0], [1, 0])],
        };
        assert!(matches!(spec.validate(), Err(Error::Input(_))));
    }

    #[test]
    fn zero_vector_rejected() {
        let spec = TubularGroupSpec {
            vertices: vec!["A".into()],
            edges: vec![edge("e", "A", "A", [0, 0], [1, 0])],
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!({
            "vertices": ["F1", "F2"],
            "edges": [
                {"id": "e1", "from": "F1", "to": "F2", "w_from": [1, 0], "w_to": [0, 1]},
            ],
        });
        let spec = TubularGroupSpec::from_json(&v).unwrap();
        assert_eq!(TubularGroupSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn malformed_vector_names_field_path() {
        let v = serde_json::json!({
            "vertices": ["F1"],
            "edges": [
                {"id": "e1", "from": "F1", "to": "F1", "w_from": [1], "w_to": [2, 0]},
            ],
        });
        match TubularGroupSpec::from_json(&v) {
            Err(Error::Input(msg)) => assert!(msg.contains("edges[0].w_from"), "{msg}"),
            other => panic!("expected input error, got {other:?}"),
        }
    }
}

//! Richly-branching-flat data.
//!
//! An `n`-dimensional richly branching flat is a flat with half-flats glued
//! along coarsely dense families of parallel hyperplanes in `n+1` pairwise
//! linearly independent directions. Its presence, quasiisometrically
//! embedded and at top rank, obstructs any coarse median; this module only
//! certifies that such a witness exists and never re-proves the obstruction.
//! It validates direction data, derives it from tubular and free-by-cyclic
//! witnesses, and materializes small discrete models in dimension two.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fbc::RichLinearityWitness;
use crate::limits::Limits;
use crate::rational::{format_rational, parse_rational_value, rational_to_value};
use crate::tubular::{commensurability_classes, TubularGroupSpec};

/// Branching positions along one direction: the full integer lattice, or an
/// explicit finite window of positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionSet {
    Lattice,
    Points(Vec<BigRational>),
}

/// Positions for all `n+1` directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positions {
    /// Every direction branches along the full integer lattice.
    Lattice,
    /// One position set per direction.
    PerDirection(Vec<PositionSet>),
}

/// A richly-branching-flat specification: dimension, `n+1` branching
/// directions, branching positions with their density constant, and a tag
/// recording which witness produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbfSpec {
    pub n: usize,
    pub directions: Vec<Vec<i64>>,
    pub positions: Positions,
    /// Coarse-density constant, in units of base-flat length.
    pub density: BigRational,
    pub provenance: String,
}

/// Validation outcome; failures name the offending direction pair or
/// position gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbfValidation {
    pub failures: Vec<String>,
}

impl RbfValidation {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// True if the two integer vectors are linearly independent over the
/// rationals, i.e. some 2x2 minor of the pair is nonzero.
fn independent(v: &[i64], w: &[i64]) -> bool {
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] * w[j] - v[j] * w[i] != 0 {
                return true;
            }
        }
    }
    false
}

/// Checks both invariants: pairwise linear independence of the directions
/// and coarse density of every explicit position set (consecutive gaps at
/// most twice the density constant).
pub fn validate_rbf_spec(spec: &RbfSpec) -> RbfValidation {
    let mut failures = Vec::new();
    if spec.n < 2 {
        failures.push(format!("dimension n must be at least 2, got {}", spec.n));
    }
    if spec.directions.len() != spec.n + 1 {
        failures.push(format!(
            "expected {} directions, got {}",
            spec.n + 1,
            spec.directions.len()
        ));
    }
    for (i, d) in spec.directions.iter().enumerate() {
        if d.len() != spec.n {
            failures.push(format!(
                "direction {i} has {} coordinates, expected {}",
                d.len(),
                spec.n
            ));
        }
        if d.iter().all(|&c| c == 0) {
            failures.push(format!("direction {i} is the zero vector"));
        }
    }
    if failures.is_empty() {
        for i in 0..spec.directions.len() {
            for j in (i + 1)..spec.directions.len() {
                if !independent(&spec.directions[i], &spec.directions[j]) {
                    failures.push(format!(
                        "directions {i} and {j} are parallel: {:?} and {:?}",
                        spec.directions[i], spec.directions[j]
                    ));
                }
            }
        }
    }
    if !spec.density.is_positive() {
        failures.push(format!(
            "density constant must be positive, got {}",
            format_rational(&spec.density)
        ));
    }
    if let Positions::PerDirection(sets) = &spec.positions {
        if sets.len() != spec.n + 1 {
            failures.push(format!(
                "expected {} position sets, got {}",
                spec.n + 1,
                sets.len()
            ));
        }
        let two_d = &spec.density + &spec.density;
        for (i, set) in sets.iter().enumerate() {
            if let PositionSet::Points(points) = set {
                if points.is_empty() {
                    failures.push(format!("position set {i} is empty"));
                    continue;
                }
                let mut sorted = points.clone();
                sorted.sort();
                for pair in sorted.windows(2) {
                    let gap = &pair[1] - &pair[0];
                    if gap > two_d {
                        failures.push(format!(
                            "position set {i} has a gap of {} between {} and {}, \
                             exceeding twice the density constant",
                            format_rational(&gap),
                            format_rational(&pair[0]),
                            format_rational(&pair[1]),
                        ));
                    }
                }
            }
        }
    }
    RbfValidation { failures }
}

impl RbfSpec {
    /// `InputError` carrying the first validation failure, if any.
    pub fn validate(&self) -> Result<()> {
        let report = validate_rbf_spec(self);
        match report.failures.first() {
            None => Ok(()),
            Some(first) => Err(Error::input(format!("invalid branching data: {first}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        let positions = match &self.positions {
            Positions::Lattice => json!("lattice"),
            Positions::PerDirection(sets) => Value::Array(
                sets.iter()
                    .map(|s| match s {
                        PositionSet::Lattice => json!("lattice"),
                        PositionSet::Points(pts) => {
                            Value::Array(pts.iter().map(rational_to_value).collect())
                        }
                    })
                    .collect(),
            ),
        };
        json!({
            "n": self.n,
            "directions": self.directions,
            "positions": positions,
            "density": rational_to_value(&self.density),
            "provenance": self.provenance,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("branching spec must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("n: expected a positive integer"))?
            as usize;
        let directions = obj
            .get("directions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("directions: expected an array of integer vectors"))?
            .iter()
            .enumerate()
            .map(|(i, d)| {
                d.as_array()
                    .ok_or_else(|| Error::input(format!("directions[{i}]: expected an array")))?
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        c.as_i64().ok_or_else(|| {
                            Error::input(format!("directions[{i}][{j}]: expected an integer"))
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let positions = match obj.get("positions") {
            None | Some(Value::Null) => Positions::Lattice,
            Some(Value::String(s)) if s == "lattice" => Positions::Lattice,
            Some(Value::Array(sets)) => Positions::PerDirection(
                sets.iter()
                    .enumerate()
                    .map(|(i, s)| match s {
                        Value::String(l) if l == "lattice" => Ok(PositionSet::Lattice),
                        Value::Array(pts) => Ok(PositionSet::Points(
                            pts.iter()
                                .enumerate()
                                .map(|(j, p)| {
                                    parse_rational_value(p, &format!("positions[{i}][{j}]"))
                                })
                                .collect::<Result<_>>()?,
                        )),
                        other => Err(Error::input(format!(
                            "positions[{i}]: expected \"lattice\" or an array, got {other}"
                        ))),
                    })
                    .collect::<Result<_>>()?,
            ),
            Some(other) => {
                return Err(Error::input(format!(
                    "positions: expected \"lattice\" or an array, got {other}"
                )))
            }
        };
        let density = match obj.get("density") {
            None | Some(Value::Null) => BigRational::one(),
            Some(v) => parse_rational_value(v, "density")?,
        };
        let provenance = obj
            .get("provenance")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        Ok(RbfSpec {
            n,
            directions,
            positions,
            density,
            provenance,
        })
    }
}

/// Derives 2-dimensional branching data from a tubular vertex with at least
/// three commensurability classes of incident edge-ends: the directions are
/// the three canonically least primitive class representatives, branching
/// along the full lattice (the configurations are cocompact). Returns `None`
/// when the vertex has at most two classes.
pub fn tubular_rbf_directions(
    spec: &TubularGroupSpec,
    vertex: &str,
) -> Result<Option<RbfSpec>> {
    let classes = commensurability_classes(spec, vertex)?;
    if classes.len() < 3 {
        return Ok(None);
    }
    let directions: Vec<Vec<i64>> = classes.keys().take(3).map(|p| vec![p[0], p[1]]).collect();
    let rbf = RbfSpec {
        n: 2,
        directions,
        positions: Positions::Lattice,
        density: BigRational::one(),
        provenance: format!("tubular:vertex={vertex}"),
    };
    rbf.validate()?;
    Ok(Some(rbf))
}

/// Derives 2-dimensional branching data from a rich-linearity witness, in
/// (cycle-axis, fibre-axis) coordinates: `(n_k, 1)` for each internal linear
/// stratum with suffix exponent `n_k`, plus `(0, 1)` when the witness uses a
/// nearby source. `PreconditionError` if two supplied exponents coincide.
pub fn fbc_rbf_directions(witness: &RichLinearityWitness) -> Result<RbfSpec> {
    let mut directions: Vec<Vec<i64>> = Vec::new();
    for stratum in &witness.internal {
        directions.push(vec![stratum.exponent, 1]);
    }
    if witness.source.is_some() {
        directions.push(vec![0, 1]);
    }
    if directions.len() != 3 {
        return Err(Error::input(format!(
            "a branching witness needs exactly three directions, got {}",
            directions.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for stratum in &witness.internal {
        if !seen.insert(stratum.exponent) {
            return Err(Error::precondition(format!(
                "two internal strata share the suffix exponent {}: their branching \
                 lines are parallel",
                stratum.exponent
            )));
        }
    }
    let rbf = RbfSpec {
        n: 2,
        directions,
        positions: Positions::Lattice,
        density: BigRational::one(),
        provenance: format!("fbc:cycle={}", witness.cycle),
    };
    rbf.validate()?;
    Ok(rbf)
}

/// A vertex of the discrete model: a base lattice point, or a point of a
/// half-strip ribbon at height >= 1 over parameter `t` of its attachment
/// line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelVertex {
    Base(i64, i64),
    Ribbon {
        direction: usize,
        position: i64,
        t: i64,
        height: u32,
    },
}

/// One half-strip: attached along the line `p*v + t*v_perp` clipped to the
/// base box, extruded to depth `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub direction: usize,
    pub position: i64,
    /// Attachment line points inside the base, in ascending `t` order.
    pub line: Vec<(i64, i64)>,
    /// The `t` parameters matching `line`.
    pub params: Vec<i64>,
}

impl Strip {
    /// Full vertex set: the attachment line (base points) plus the ribbon.
    pub fn vertex_set(&self, depth: u32) -> HashSet<ModelVertex> {
        let mut out: HashSet<ModelVertex> = self
            .line
            .iter()
            .map(|&(x, y)| ModelVertex::Base(x, y))
            .collect();
        for &t in &self.params {
            for h in 1..=depth {
                out.insert(ModelVertex::Ribbon {
                    direction: self.direction,
                    position: self.position,
                    t,
                    height: h,
                });
            }
        }
        out
    }
}

/// A discrete 2-dimensional richly-branching-flat model: a base box of
/// radius `R` with half-strips of depth `L` attached along the clipped
/// branching lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteRbfModel {
    pub base_radius: i64,
    pub strip_depth: u32,
    pub base: Vec<(i64, i64)>,
    pub strips: Vec<Strip>,
    /// Unit steps in the base, ladder and rung edges in each strip, and the
    /// attachment edges joining line points to ribbon height 1.
    pub adjacency: Vec<(ModelVertex, ModelVertex)>,
}

impl DiscreteRbfModel {
    pub fn vertex_count(&self) -> usize {
        let ribbon: usize = self
            .strips
            .iter()
            .map(|s| s.params.len() * self.strip_depth as usize)
            .sum();
        self.base.len() + ribbon
    }

    /// Re-verifies the two model invariants: pairwise strip intersections
    /// stay inside the base (explicit intersection scan), and each
    /// attachment line runs perpendicular to its declared direction.
    pub fn verify(&self, spec: &RbfSpec) -> Result<()> {
        let base: HashSet<ModelVertex> = self
            .base
            .iter()
            .map(|&(x, y)| ModelVertex::Base(x, y))
            .collect();
        let sets: Vec<HashSet<ModelVertex>> = self
            .strips
            .iter()
            .map(|s| s.vertex_set(self.strip_depth))
            .collect();
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                for common in sets[i].intersection(&sets[j]) {
                    if !base.contains(common) {
                        return Err(Error::input(format!(
                            "strips {i} and {j} intersect outside the base at {common:?}"
                        )));
                    }
                }
            }
        }
        for (si, strip) in self.strips.iter().enumerate() {
            let v = &spec.directions[strip.direction];
            let perp = (-v[1], v[0]);
            for k in 1..strip.line.len() {
                let dt = strip.params[k] - strip.params[k - 1];
                let dx = strip.line[k].0 - strip.line[k - 1].0;
                let dy = strip.line[k].1 - strip.line[k - 1].1;
                if (dx, dy) != (dt * perp.0, dt * perp.1) {
                    return Err(Error::input(format!(
                        "strip {si} attachment line does not follow the perpendicular \
                         of direction {}",
                        strip.direction
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds the discrete model for a 2-dimensional spec: base box of radius
/// `R`, strips of depth `L` along every branching line meeting the box.
///
/// Only 2-dimensional specs are materialized. Explicit position sets must
/// consist of integers (the model is a lattice discretization).
pub fn build_discrete_rbf(
    spec: &RbfSpec,
    base_radius: i64,
    strip_depth: u32,
    limits: &Limits,
) -> Result<DiscreteRbfModel> {
    spec.validate()?;
    if spec.n != 2 {
        return Err(Error::input(format!(
            "only 2-dimensional models are buildable, spec has n = {}",
            spec.n
        )));
    }
    if base_radius < 1 || strip_depth == 0 {
        return Err(Error::input(
            "base radius and strip depth must be positive",
        ));
    }
    let r = base_radius;

    let in_box = |x: i64, y: i64| x.abs() <= r && y.abs() <= r;
    let mut base = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            base.push((x, y));
        }
    }

    let positions_for = |i: usize| -> Result<Vec<i64>> {
        let v = &spec.directions[i];
        let set = match &spec.positions {
            Positions::Lattice => &PositionSet::Lattice,
            Positions::PerDirection(sets) => &sets[i],
        };
        match set {
            PositionSet::Lattice => {
                // p v must meet the box: |p| |v|^2 = |(p v) . v| <= R (|v0| + |v1|)
                let norm2 = v[0] * v[0] + v[1] * v[1];
                let bound = r * (v[0].abs() + v[1].abs()) / norm2 + 1;
                Ok((-bound..=bound).collect())
            }
            PositionSet::Points(points) => points
                .iter()
                .map(|p| {
                    if p.denom().is_one() {
                        i64::try_from(p.numer()).map_err(|_| {
                            Error::input("explicit position too large for the model")
                        })
                    } else {
                        Err(Error::input(format!(
                            "explicit positions must be integers for the discrete \
                             model, got {}",
                            format_rational(p)
                        )))
                    }
                })
                .collect(),
        }
    };

    let mut strips = Vec::new();
    for (i, v) in spec.directions.iter().enumerate() {
        let perp = (-v[1], v[0]);
        for p in positions_for(i)? {
            let anchor = (p * v[0], p * v[1]);
            let t_bound = r + p.abs() * v[0].abs().max(v[1].abs()) + 1;
            let mut params = Vec::new();
            let mut line = Vec::new();
            for t in -t_bound..=t_bound {
                let x = anchor.0 + t * perp.0;
                let y = anchor.1 + t * perp.1;
                if in_box(x, y) {
                    params.push(t);
                    line.push((x, y));
                }
            }
            if line.is_empty() {
                continue;
            }
            strips.push(Strip {
                direction: i,
                position: p,
                line,
                params,
            });
        }
    }

    let mut model = DiscreteRbfModel {
        base_radius,
        strip_depth,
        base,
        strips,
        adjacency: Vec::new(),
    };
    if model.vertex_count() > limits.max_model_vertices {
        return Err(Error::limit(format!(
            "model would have {} vertices, cap is {}",
            model.vertex_count(),
            limits.max_model_vertices
        )));
    }

    let mut adjacency = Vec::new();
    for &(x, y) in &model.base {
        if in_box(x + 1, y) {
            adjacency.push((ModelVertex::Base(x, y), ModelVertex::Base(x + 1, y)));
        }
        if in_box(x, y + 1) {
            adjacency.push((ModelVertex::Base(x, y), ModelVertex::Base(x, y + 1)));
        }
    }
    for strip in &model.strips {
        let ribbon = |t: i64, h: u32| ModelVertex::Ribbon {
            direction: strip.direction,
            position: strip.position,
            t,
            height: h,
        };
        for (k, &t) in strip.params.iter().enumerate() {
            let (x, y) = strip.line[k];
            adjacency.push((ModelVertex::Base(x, y), ribbon(t, 1)));
            for h in 1..strip_depth {
                adjacency.push((ribbon(t, h), ribbon(t, h + 1)));
            }
            if k + 1 < strip.params.len() {
                let t2 = strip.params[k + 1];
                for h in 1..=strip_depth {
                    adjacency.push((ribbon(t, h), ribbon(t2, h)));
                }
            }
        }
    }
    model.adjacency = adjacency;
    model.verify(spec)?;
    Ok(model)
}

/// Summary counts for reports.
pub fn model_summary(model: &DiscreteRbfModel) -> HashMap<&'static str, usize> {
    HashMap::from([
        ("base_vertices", model.base.len()),
        ("strips", model.strips.len()),
        ("vertices", model.vertex_count()),
        ("edges", model.adjacency.len()),
    ])
}

pub fn rational_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_spec(directions: Vec<Vec<i64>>) -> RbfSpec {
        RbfSpec {
            n: 2,
            directions,
            positions: Positions::Lattice,
            density: BigRational::one(),
            provenance: "test".into(),
        }
    }

    #[test]
    fn coordinate_axes_plus_diagonal_pass() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(validate_rbf_spec(&spec).passed());
    }

    #[test]
    fn anti_diagonal_variant_passes() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, -1]]);
        assert!(validate_rbf_spec(&spec).passed());
    }

    #[test]
    fn parallel_pair_is_named() {
        let spec = lattice_spec(vec![vec![1, 0], vec![2, 0], vec![0, 1]]);
        let report = validate_rbf_spec(&spec);
        assert!(!report.passed());
        assert!(
            report.failures[0].contains("0 and 1"),
            "{:?}",
            report.failures
        );
    }

    #[test]
    fn position_gap_is_named() {
        let spec = RbfSpec {
            n: 2,
            directions: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            positions: Positions::PerDirection(vec![
                PositionSet::Lattice,
                PositionSet::Points(vec![rational_int(0), rational_int(7)]),
                PositionSet::Lattice,
            ]),
            density: BigRational::one(),
            provenance: "test".into(),
        };
        let report = validate_rbf_spec(&spec);
        assert!(!report.passed());
        assert!(report.failures[0].contains("gap"), "{:?}", report.failures);
    }

    #[test]
    fn json_round_trip() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, -1]]);
        let back = RbfSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn model_passes_disjointness_scan() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let model = build_discrete_rbf(&spec, 5, 3, &Limits::default()).unwrap();
        model.verify(&spec).unwrap();
        assert!(model.strips.len() > 6);
    }

    #[test]
    fn degenerate_radius_one_model_is_valid() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let model = build_discrete_rbf(&spec, 1, 1, &Limits::default()).unwrap();
        model.verify(&spec).unwrap();
        assert_eq!(model.base.len(), 9);
    }

    #[test]
    fn invalid_spec_is_input_error() {
        let spec = lattice_spec(vec![vec![1, 0], vec![2, 0], vec![0, 1]]);
        assert!(matches!(
            build_discrete_rbf(&spec, 3, 2, &Limits::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn three_distinct_exponents_give_three_slopes() {
        let witness = RichLinearityWitness {
            cycle: "p".into(),
            internal: vec![
                crate::fbc::InternalStratum { edge: "x".into(), exponent: 1 },
                crate::fbc::InternalStratum { edge: "y".into(), exponent: 2 },
                crate::fbc::InternalStratum { edge: "z".into(), exponent: 3 },
            ],
            source: None,
        };
        let rbf = fbc_rbf_directions(&witness).unwrap();
        assert_eq!(rbf.directions, vec![vec![1, 1], vec![2, 1], vec![3, 1]]);
    }

    #[test]
    fn coinciding_exponents_are_a_precondition_error() {
        let witness = RichLinearityWitness {
            cycle: "p".into(),
            internal: vec![
                crate::fbc::InternalStratum { edge: "x".into(), exponent: 2 },
                crate::fbc::InternalStratum { edge: "y".into(), exponent: 2 },
            ],
            source: Some(crate::fbc::SourceWitness {
                source_vertex: "v".into(),
                cycle_vertex: "v".into(),
                nielsen_path: None,
            }),
        };
        assert!(matches!(
            fbc_rbf_directions(&witness),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn two_exponents_plus_source() {
        let witness = RichLinearityWitness {
            cycle: "p".into(),
            internal: vec![
                crate::fbc::InternalStratum { edge: "x".into(), exponent: 1 },
                crate::fbc::InternalStratum { edge: "y".into(), exponent: 2 },
            ],
            source: Some(crate::fbc::SourceWitness {
                source_vertex: "v".into(),
                cycle_vertex: "v".into(),
                nielsen_path: None,
            }),
        };
        let rbf = fbc_rbf_directions(&witness).unwrap();
        assert_eq!(rbf.directions, vec![vec![1, 1], vec![2, 1], vec![0, 1]]);
    }

    #[test]
    fn model_cap_is_enforced() {
        let spec = lattice_spec(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let tight = Limits {
            max_model_vertices: 10,
            ..Limits::default()
        };
        assert!(matches!(
            build_discrete_rbf(&spec, 5, 3, &tight),
            Err(Error::Limit(_))
        ));
    }
}

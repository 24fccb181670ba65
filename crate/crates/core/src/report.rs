//! Analysis reports: parse an input, dispatch the analysis, and emit a
//! deterministic report carrying the verdict and, on request, re-verified
//! certificates.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fbc::{classify_fbc, IrttSpec};
use crate::limits::Limits;
use crate::median::{FiniteMedianAlgebra, MedianCheck};
use crate::rational::parse_rational_str;
use crate::rbf::{
    build_discrete_rbf, fbc_rbf_directions, model_summary, tubular_rbf_directions,
    validate_rbf_spec, RbfSpec,
};
use crate::tubular::{classify_tubular, TubularGroupSpec, TubularStatus};

/// Options shared by the report entry points.
#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Embed certificates, re-verifying them first.
    pub witness: bool,
    pub limits: Limits,
}

/// A finished analysis: content digest of the input, the verdict summary,
/// optional certificates, and the toolkit version. Identical input bytes
/// produce identical reports (the version field aside).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub version: String,
    pub input_digest: String,
    pub kind: String,
    pub verdict: Value,
    pub certificates: Option<Value>,
    pub text: String,
}

impl AnalysisReport {
    /// Compact single-line JSON encoding of the full report.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("report serializes")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": self.version,
            "input_digest": self.input_digest,
            "kind": self.kind,
            "verdict": self.verdict,
            "certificates": self.certificates,
            "text": self.text,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("report must be a JSON object"))?;
        let get_str = |key: &str| -> Result<String> {
            obj.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| Error::input(format!("report.{key}: expected a string")))
        };
        Ok(AnalysisReport {
            version: get_str("version")?,
            input_digest: get_str("input_digest")?,
            kind: get_str("kind")?,
            verdict: obj.get("verdict").cloned().unwrap_or(Value::Null),
            certificates: match obj.get("certificates") {
                None | Some(Value::Null) => None,
                Some(v) => Some(v.clone()),
            },
            text: get_str("text")?,
        })
    }
}

fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Hex SHA-256 of the raw input bytes.
pub fn input_digest(input: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(input.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_json(input: &str) -> Result<Value> {
    serde_json::from_str(input).map_err(|e| {
        Error::input(format!(
            "JSON syntax error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

/// Parses and validates a tubular input.
pub fn parse_tubular(input: &str) -> Result<TubularGroupSpec> {
    TubularGroupSpec::from_json(&parse_json(input)?)
}

/// Parses and validates a train-track input.
pub fn parse_fbc(input: &str) -> Result<IrttSpec> {
    IrttSpec::from_json(&parse_json(input)?)
}

/// Parses a branching-data input (validity itself is the analysis, so this
/// does not reject invalid direction data).
pub fn parse_rbf(input: &str) -> Result<RbfSpec> {
    RbfSpec::from_json(&parse_json(input)?)
}

/// Parses a median-algebra input and verifies the axioms.
pub fn parse_median(input: &str) -> Result<FiniteMedianAlgebra> {
    let alg = FiniteMedianAlgebra::from_json(&parse_json(input)?)?;
    match alg.verify_median_axioms() {
        MedianCheck::Pass => Ok(alg),
        MedianCheck::Fail { axiom, tuple, detail } => Err(Error::input(format!(
            "table violates the {axiom} axiom on ({}): {detail}",
            tuple.join(", ")
        ))),
    }
}

pub fn tubular_report(input: &str, opts: &Options) -> Result<AnalysisReport> {
    let spec = parse_tubular(input)?;
    let verdict = classify_tubular(&spec)?;
    if opts.witness {
        verdict.verify(&spec)?;
    }
    let full = verdict.to_json();
    let summary = json!({
        "status": full["status"],
        "distorted": full["distorted"],
        "dehn": full["dehn"],
        "max_classes": full["max_classes"],
        "reasons": full["reasons"],
    });
    let certificates = opts.witness.then(|| {
        json!({
            "unbalanced_cycle": full["unbalanced_cycle"],
            "potentials": full["potentials"],
            "bs_witness": full["bs_witness"],
            "rbf": full["rbf"],
        })
    });

    let mut text = String::new();
    text.push_str(&format!(
        "tubular group: {} vertices, {} edges\n",
        spec.vertices.len(),
        spec.edges.len()
    ));
    text.push_str(&format!("status: {}\n", verdict.status));
    text.push_str(&format!(
        "dehn function: {}\nmax commensurability classes: {}\n",
        verdict.dehn, verdict.max_classes
    ));
    if let Some(rbf) = &verdict.rbf {
        let dirs: Vec<String> = rbf
            .directions
            .iter()
            .map(|d| format!("({},{})", d[0], d[1]))
            .collect();
        text.push_str(&format!("branching directions: {}\n", dirs.join(", ")));
    }
    if verdict.status == TubularStatus::NoCoarseMedianViaDistortion {
        if let Some(bs) = &verdict.bs_witness {
            text.push_str(&format!(
                "Baumslag-Solitar witness: conjugates p^{} to p^{}\n",
                bs.m, bs.n
            ));
        }
    }
    text.push_str("reasoning:\n");
    for reason in &verdict.reasons {
        text.push_str(&format!("  - {reason}\n"));
    }

    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "tubular".into(),
        verdict: summary,
        certificates,
        text,
    })
}

pub fn fbc_report(input: &str, opts: &Options) -> Result<AnalysisReport> {
    let spec = parse_fbc(input)?;
    let verdict = classify_fbc(&spec)?;
    if opts.witness {
        verdict.verify(&spec)?;
    }
    let full = verdict.to_json();
    let summary = json!({
        "branch": full["branch"],
        "reasons": full["reasons"],
    });
    let certificates = opts.witness.then(|| {
        json!({
            "witness": full["witness"],
            "rbf": full["rbf"],
        })
    });

    let mut text = String::new();
    text.push_str(&format!(
        "free-by-cyclic spec: {} vertices, {} edges, {} strata, {} Nielsen cycles\n",
        spec.vertices.len(),
        spec.edges.len(),
        spec.strata.len(),
        spec.nielsen_cycles.len()
    ));
    text.push_str(&format!("branch: {}\n", verdict.branch));
    if let Some(w) = &verdict.witness {
        let strata: Vec<&str> = w.internal.iter().map(|s| s.edge.as_str()).collect();
        text.push_str(&format!(
            "witness: cycle {} supports internal strata {}{}\n",
            w.cycle,
            strata.join(", "),
            match &w.source {
                Some(s) => format!(", with a nearby source at {}", s.source_vertex),
                None => String::new(),
            }
        ));
    }
    text.push_str("reasoning:\n");
    for reason in &verdict.reasons {
        text.push_str(&format!("  - {reason}\n"));
    }

    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "fbc".into(),
        verdict: summary,
        certificates,
        text,
    })
}

pub fn median_verify_report(input: &str) -> Result<AnalysisReport> {
    let alg = FiniteMedianAlgebra::from_json(&parse_json(input)?)?;
    let check = alg.verify_median_axioms();
    let metric_check = if alg.has_metric() {
        Some(alg.verify_median_metric()?)
    } else {
        None
    };
    let describe = |c: &MedianCheck| match c {
        MedianCheck::Pass => json!({"passed": true}),
        MedianCheck::Fail { axiom, tuple, detail } => json!({
            "passed": false,
            "axiom": format!("{axiom}"),
            "tuple": tuple,
            "detail": detail,
        }),
    };
    let verdict = json!({
        "elements": alg.len(),
        "axioms": describe(&check),
        "metric": metric_check.as_ref().map(describe),
    });
    let mut text = format!("median algebra on {} elements\n", alg.len());
    match &check {
        MedianCheck::Pass => text.push_str("axioms: pass\n"),
        MedianCheck::Fail { axiom, detail, .. } => {
            text.push_str(&format!("axioms: FAIL ({axiom}): {detail}\n"))
        }
    }
    match &metric_check {
        None => text.push_str("metric: none\n"),
        Some(MedianCheck::Pass) => text.push_str("metric: median-compatible\n"),
        Some(MedianCheck::Fail { detail, .. }) => {
            text.push_str(&format!("metric: FAIL: {detail}\n"))
        }
    }
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "median.verify".into(),
        verdict,
        certificates: None,
        text,
    })
}

pub fn median_rank_report(input: &str, opts: &Options) -> Result<AnalysisReport> {
    let alg = parse_median(input)?;
    let report = alg.rank(&opts.limits)?;
    if opts.witness {
        report.verify(&alg)?;
    }
    let walls: Vec<Value> = report
        .witness_walls
        .iter()
        .map(|w| {
            let (a, b) = w.side_names(&alg);
            json!({"side_a": a, "side_b": b})
        })
        .collect();
    let cube: Vec<&str> = report.witness_cube.iter().map(|&i| alg.name(i)).collect();
    let verdict = json!({
        "rank_walls": report.rank_walls,
        "rank_cube": report.rank_cube,
    });
    let certificates = opts.witness.then(|| {
        json!({
            "witness_walls": walls,
            "witness_cube": cube,
        })
    });
    let text = format!(
        "median algebra on {} elements\nrank: {} (pairwise-crossing walls) = {} \
         (largest embedded cube)\n",
        alg.len(),
        report.rank_walls,
        report.rank_cube
    );
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "median.rank".into(),
        verdict,
        certificates,
        text,
    })
}

pub fn median_hull_report(input: &str, of: &[String]) -> Result<AnalysisReport> {
    let alg = parse_median(input)?;
    let indices: Vec<usize> = of
        .iter()
        .map(|name| alg.resolve(name))
        .collect::<Result<_>>()?;
    let hull = alg.convex_hull(&indices)?;
    let names: Vec<&str> = hull.iter().map(|&i| alg.name(i)).collect();
    let verdict = json!({
        "of": of,
        "hull": names,
        "hull_size": hull.len(),
    });
    let text = format!(
        "median-convex hull of {{{}}}: {{{}}} ({} elements)\n",
        of.join(", "),
        names.join(", "),
        hull.len()
    );
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "median.hull".into(),
        verdict,
        certificates: None,
        text,
    })
}

pub fn rbf_from_tubular_report(input: &str, vertex: &str) -> Result<AnalysisReport> {
    let spec = parse_tubular(input)?;
    let rbf = tubular_rbf_directions(&spec, vertex)?;
    let verdict = json!({
        "vertex": vertex,
        "rbf": rbf.as_ref().map(|r| r.to_json()),
    });
    let text = match &rbf {
        Some(r) => {
            let dirs: Vec<String> = r
                .directions
                .iter()
                .map(|d| format!("({},{})", d[0], d[1]))
                .collect();
            format!(
                "vertex {vertex} carries a 2-dimensional richly branching flat with \
                 directions {}\n",
                dirs.join(", ")
            )
        }
        None => format!(
            "vertex {vertex} has at most two commensurability classes: no branching \
             flat from this vertex\n"
        ),
    };
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "rbf.from-tubular".into(),
        verdict,
        certificates: None,
        text,
    })
}

pub fn rbf_from_fbc_report(input: &str) -> Result<AnalysisReport> {
    let spec = parse_fbc(input)?;
    let witness = crate::fbc::rich_linearity(&spec)?.ok_or_else(|| {
        Error::input("the declared data has no rich-linearity witness")
    })?;
    let rbf = fbc_rbf_directions(&witness)?;
    let dirs: Vec<String> = rbf
        .directions
        .iter()
        .map(|d| format!("({},{})", d[0], d[1]))
        .collect();
    let verdict = json!({
        "witness_cycle": witness.cycle,
        "rbf": rbf.to_json(),
    });
    let text = format!(
        "rich linearity at cycle {}: branching directions {} in (cycle, fibre) \
         coordinates\n",
        witness.cycle,
        dirs.join(", ")
    );
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "rbf.from-fbc".into(),
        verdict,
        certificates: None,
        text,
    })
}

pub fn rbf_build_report(
    input: &str,
    radius: i64,
    depth: u32,
    opts: &Options,
) -> Result<AnalysisReport> {
    let spec = parse_rbf(input)?;
    let model = build_discrete_rbf(&spec, radius, depth, &opts.limits)?;
    let summary = model_summary(&model);
    let verdict = json!({
        "radius": radius,
        "depth": depth,
        "base_vertices": summary["base_vertices"],
        "strips": summary["strips"],
        "vertices": summary["vertices"],
        "edges": summary["edges"],
        "disjointness": "verified",
    });
    let text = format!(
        "discrete model: base {}x{}, {} strips of depth {depth}, {} vertices, {} \
         edges; strips pairwise meet only in the base\n",
        2 * radius + 1,
        2 * radius + 1,
        summary["strips"],
        summary["vertices"],
        summary["edges"]
    );
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "rbf.build".into(),
        verdict,
        certificates: None,
        text,
    })
}

pub fn rbf_validate_report(input: &str) -> Result<AnalysisReport> {
    let spec = parse_rbf(input)?;
    let report = validate_rbf_spec(&spec);
    let verdict = json!({
        "valid": report.passed(),
        "failures": report.failures,
    });
    let text = if report.passed() {
        "branching data is valid: directions pairwise independent, positions \
         coarsely dense\n"
            .to_string()
    } else {
        format!("branching data is invalid:\n  - {}\n", report.failures.join("\n  - "))
    };
    Ok(AnalysisReport {
        version: version(),
        input_digest: input_digest(input),
        kind: "rbf.validate".into(),
        verdict,
        certificates: None,
        text,
    })
}

/// Parses a rational CLI argument (used for ball radii and densities).
pub fn parse_rational_arg(s: &str) -> Result<num_rational::BigRational> {
    parse_rational_str(s)
}

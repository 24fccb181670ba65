//! Interchange format for finite median algebras:
//! `{"elements":[...], "med":[[i,j,k,m],...]}` with indices into `elements`,
//! plus an optional flat `"metric"` array (row-major, integers or `"p/q"`).
//!
//! Quadruples may be given for any argument order; missing orderings are
//! filled in by symmetry. A table left non-total after symmetric completion,
//! or given conflicting entries, is an `InputError`.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{parse_rational_value, rational_to_value};

use super::FiniteMedianAlgebra;

pub(super) fn algebra_to_json(alg: &FiniteMedianAlgebra) -> Value {
    let n = alg.len();
    let mut med = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                med.push(json!([i, j, k, alg.med(i, j, k)]));
            }
        }
    }
    let mut out = json!({
        "elements": alg.names(),
        "med": med,
    });
    if let Some(metric) = alg.metric_table() {
        out["metric"] = Value::Array(metric.iter().map(rational_to_value).collect());
    }
    out
}

pub(super) fn algebra_from_json(value: &Value) -> Result<FiniteMedianAlgebra> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::input("median algebra must be a JSON object"))?;
    let elements = obj
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("elements: expected an array of strings"))?;
    let names: Vec<String> = elements
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::input(format!("elements[{i}]: expected a string")))
        })
        .collect::<Result<_>>()?;
    let n = names.len();
    if n == 0 {
        return Err(Error::input("elements: must be nonempty"));
    }

    let quads = obj
        .get("med")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("med: expected an array of [i,j,k,m] quadruples"))?;

    const UNSET: u32 = u32::MAX;
    let mut table = vec![UNSET; n * n * n];
    for (qi, quad) in quads.iter().enumerate() {
        let arr = quad
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::input(format!("med[{qi}]: expected [i,j,k,m]")))?;
        let mut idx = [0usize; 4];
        for (pos, v) in arr.iter().enumerate() {
            let raw = v
                .as_u64()
                .ok_or_else(|| Error::input(format!("med[{qi}][{pos}]: expected an index")))?
                as usize;
            if raw >= n {
                return Err(Error::input(format!(
                    "med[{qi}][{pos}]: index {raw} out of range for {n} elements"
                )));
            }
            idx[pos] = raw;
        }
        let [i, j, k, m] = idx;
        for (p, q, r) in [
            (i, j, k),
            (i, k, j),
            (j, i, k),
            (j, k, i),
            (k, i, j),
            (k, j, i),
        ] {
            let slot = &mut table[(p * n + q) * n + r];
            if *slot != UNSET && *slot != m as u32 {
                return Err(Error::input(format!(
                    "med[{qi}]: conflicts with an earlier entry for ({p},{q},{r})"
                )));
            }
            *slot = m as u32;
        }
    }
    if let Some(pos) = table.iter().position(|&v| v == UNSET) {
        let i = pos / (n * n);
        let j = pos / n % n;
        let k = pos % n;
        return Err(Error::input(format!(
            "med: table is not total, missing ({i},{j},{k})"
        )));
    }

    let metric = match obj.get("metric") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => {
            if arr.len() != n * n {
                return Err(Error::input(format!(
                    "metric: expected {} entries, got {}",
                    n * n,
                    arr.len()
                )));
            }
            let metric: Vec<BigRational> = arr
                .iter()
                .enumerate()
                .map(|(i, v)| parse_rational_value(v, &format!("metric[{i}]")))
                .collect::<Result<_>>()?;
            Some(metric)
        }
        Some(other) => {
            return Err(Error::input(format!(
                "metric: expected a flat array, got {other}"
            )))
        }
    };

    FiniteMedianAlgebra::from_table(names, table, metric)
}

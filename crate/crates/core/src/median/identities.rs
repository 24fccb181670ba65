//! Executable median identities: the diagonal five-point computation chain
//! and the hull-of-ball bound.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::FiniteMedianAlgebra;

/// Machine-checks the nine-step five-point computation forcing `b = a_minus`.
///
/// Premises (each an identity in the table):
/// `med(zero,one,a+) = a+`, `med(zero,one,a-) = a-`, `med(a+,a-,zero) = zero`,
/// `med(a+,a-,one) = one`, `med(zero,one,b) = b`, `med(a+,b,zero) = zero`,
/// `med(a+,b,one) = one`. A violated premise is a `PreconditionError` naming
/// the failed identity.
///
/// With the premises in place, the chain below must collapse `b` to `a-` by
/// alternating five-point rewrites and premise substitutions; the function
/// evaluates every step in the table and returns true only if each
/// consecutive pair of steps is equal and the endpoint is `b == a-`. On a
/// median algebra this is always true; the point is to check it mechanically.
pub fn five_point_chain_check(
    alg: &FiniteMedianAlgebra,
    zero: usize,
    one: usize,
    a_plus: usize,
    a_minus: usize,
    b: usize,
) -> Result<bool> {
    let n = alg.len();
    for &e in &[zero, one, a_plus, a_minus, b] {
        if e >= n {
            return Err(Error::input(format!("element index {e} out of range")));
        }
    }
    let m = |x: usize, y: usize, z: usize| alg.med(x, y, z);
    let name = |i: usize| alg.name(i);

    let premises: [(usize, usize, usize, usize, &str); 7] = [
        (zero, one, a_plus, a_plus, "med(zero, one, a+) = a+"),
        (zero, one, a_minus, a_minus, "med(zero, one, a-) = a-"),
        (a_plus, a_minus, zero, zero, "med(a+, a-, zero) = zero"),
        (a_plus, a_minus, one, one, "med(a+, a-, one) = one"),
        (zero, one, b, b, "med(zero, one, b) = b"),
        (a_plus, b, zero, zero, "med(a+, b, zero) = zero"),
        (a_plus, b, one, one, "med(a+, b, one) = one"),
    ];
    for (x, y, z, expect, label) in premises {
        if m(x, y, z) != expect {
            return Err(Error::precondition(format!(
                "{label} fails: med({}, {}, {}) = {}",
                name(x),
                name(y),
                name(z),
                name(m(x, y, z))
            )));
        }
    }

    // The computation chain. Each entry is evaluated in the table; all must
    // agree, and the last equals a-.
    let steps: Vec<usize> = vec![
        b,
        m(zero, one, b),
        m(m(a_plus, a_minus, zero), m(a_plus, a_minus, one), b),
        m(a_plus, a_minus, m(zero, one, b)),
        m(m(a_plus, a_minus, b), m(a_plus, a_minus, zero), one),
        m(m(a_plus, a_minus, b), zero, one),
        m(m(a_plus, b, a_minus), m(a_plus, b, zero), one),
        m(a_plus, b, m(a_minus, zero, one)),
        m(m(a_plus, b, zero), m(a_plus, b, one), a_minus),
        m(zero, one, a_minus),
    ];
    let chain_holds =
        steps.windows(2).all(|w| w[0] == w[1]) && *steps.last().unwrap() == a_minus;
    Ok(chain_holds && b == a_minus)
}

/// Checks `hull(B(x,r)) ⊆ B(x, 2^rank * r)` exactly.
///
/// `InputError` without a metric or with `r < 0`; the rank computation obeys
/// the element cap.
pub fn ball_hull_bound_check(
    alg: &FiniteMedianAlgebra,
    x: usize,
    r: &BigRational,
    limits: &Limits,
) -> Result<bool> {
    if !alg.has_metric() {
        return Err(Error::input("ball-hull check needs a metric"));
    }
    if r < &BigRational::zero() {
        return Err(Error::input("radius must be nonnegative"));
    }
    if x >= alg.len() {
        return Err(Error::input(format!("element index {x} out of range")));
    }
    let rank = alg.rank(limits)?.rank();

    let ball: Vec<usize> = (0..alg.len())
        .filter(|&y| alg.dist(x, y).expect("metric present") <= r)
        .collect();
    // x itself is always in the ball (distance 0), so the hull is defined.
    let hull = alg.convex_hull(&ball)?;

    let factor = BigRational::from_integer(num_bigint::BigInt::from(1) << rank);
    let bound = factor * r;
    Ok(hull
        .iter()
        .all(|&y| alg.dist(x, y).expect("metric present") <= &bound))
}

//! Asymptotic frequencies of simple closed multicurves on a hyperbolic
//! surface of genus `g` with `n` cusps.
//!
//! A multicurve type is encoded by the stable graph of its complement (one
//! edge per component) together with the weights `H` of the components.
//! `c(gamma)` is the leading coefficient in the count of curves of length at
//! most `L`, and `b_{g,n}` is the total over all multicurves.

use crate::arith::{factorial, pow2, rat, rat_int, PiMonomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::{enumerate_stable_graphs, StableGraph, Vertex};
use crate::volumes::{self, p_gamma, y_op, z_op_pi};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeMap;

pub const EXCEPTIONAL: &str = "exceptional normalization: genus 2 without cusps carries the \
hyperelliptic involution, values are in the convention where c(separating) = 1/(8*24*24*6)";

/// `2 (6g - 6 + 2n) (4g - 4 + n)! 2^{4g - 3 + n}`, relating square-tiled
/// surface counts to multicurve frequencies.
pub fn normalization(g: u32, n: u32) -> Rational {
    let (gi, ni) = (g as i64, n as i64);
    rat(2 * (6 * gi - 6 + 2 * ni), 1) * rat_int(factorial((4 * gi - 4 + ni) as u32)) * pow2(4 * gi - 3 + ni)
}

fn flags_for(g: u32, n: u32) -> Vec<String> {
    if (g, n) == (2, 0) {
        vec![EXCEPTIONAL.to_string()]
    } else {
        Vec::new()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Frequency {
    pub encoding: String,
    pub weights: Vec<u32>,
    /// `c(gamma)`.
    pub c: Rational,
    /// `c~(gamma) = c(gamma) / 2^{2g - 3 + n}`.
    pub c_tilde: Rational,
    pub flags: Vec<String>,
}

/// Frequency of the multicurve `sum H_i gamma_i` whose components are the
/// edges of `gr`, in canonical edge order.
pub fn c_gamma(gr: &StableGraph, weights: &[u32]) -> Result<Frequency> {
    let g = gr.genus();
    let n = gr.num_legs() as u32;
    if 2 * g + n <= 3 {
        return Err(Error::Unstable { g, n });
    }
    if gr.num_edges() == 0 {
        return Err(Error::InvalidArgument("a multicurve needs at least one component".into()));
    }
    let p = p_gamma(gr)?;
    let c = y_op(&p, weights)? / normalization(g, n);
    let c_tilde = &c / pow2(2 * g as i64 - 3 + n as i64);
    Ok(Frequency {
        encoding: gr.canonical_encoding(),
        weights: weights.to_vec(),
        c,
        c_tilde,
        flags: flags_for(g, n),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Bgn {
    pub g: u32,
    pub n: u32,
    pub value: PiMonomial,
    pub flags: Vec<String>,
}

/// `b_{g,n} = Vol Q_{g,n} / normalization`, the frequency of all multicurves together.
pub fn b_gn(g: u32, n: u32) -> Result<Bgn> {
    if 2 * g + n <= 3 {
        return Err(Error::Unstable { g, n });
    }
    let value = volumes::volume(g, n)?.scale(&normalization(g, n).recip());
    Ok(Bgn { g, n, value, flags: flags_for(g, n) })
}

/// `b_{0,n} = (pi/2)^{2(n-3)} / (n-3)!`.
pub fn b_0n(n: u32) -> Result<PiMonomial> {
    if n < 4 {
        return Err(Error::Unstable { g: 0, n });
    }
    let k = n as i64 - 3;
    Ok(PiMonomial::new(pow2(-2 * k) / rat_int(factorial(k as u32)), 2 * k as i32))
}

/// Graph of a single non-separating curve on a closed surface of genus `g`.
pub fn gamma_one(g: u32) -> Result<StableGraph> {
    if g < 2 {
        return Err(Error::InvalidArgument("needs genus at least 2".into()));
    }
    StableGraph::new(vec![Vertex { genus: g - 1, legs: vec![] }], vec![(0, 0)])
}

/// Graph of a separating curve cutting a closed surface into genera `g1` and `g2`.
pub fn delta(g1: u32, g2: u32) -> Result<StableGraph> {
    if g1 == 0 || g2 == 0 {
        return Err(Error::InvalidArgument("both sides need positive genus".into()));
    }
    StableGraph::new(
        vec![Vertex { genus: g1, legs: vec![] }, Vertex { genus: g2, legs: vec![] }],
        vec![(0, 1)],
    )
}

/// Frequency of separating simple closed curves relative to non-separating
/// ones on a closed surface of genus `g`, computed from the graph sum.
pub fn sep_nonsep_ratio(g: u32) -> Result<Rational> {
    let non = z_op_pi(&p_gamma(&gamma_one(g)?)?)?;
    let mut sep = PiMonomial::zero();
    for g1 in 1..=g / 2 {
        sep = sep.checked_add(&z_op_pi(&p_gamma(&delta(g1, g - g1)?)?)?)?;
    }
    Ok(sep.checked_div(&non)?.coeff().clone())
}

/// Closed formula for the frequency of a separating curve of type `(g1, g - g1)`:
/// `1 / (|Aut| 2^{3g-4} 24^g g1! g2! (3g1-2)! (3g2-2)! (6g-6))`.
pub fn separating_frequency_closed(g1: u32, g2: u32) -> Result<Rational> {
    if g1 == 0 || g2 == 0 {
        return Err(Error::InvalidArgument("both sides need positive genus".into()));
    }
    let g = (g1 + g2) as i64;
    let aut = if g1 == g2 { 2 } else { 1 };
    let den = BigInt::from(aut)
        * (BigInt::from(1) << (3 * g - 4) as usize)
        * num_traits::pow(BigInt::from(24), g as usize)
        * factorial(g1)
        * factorial(g2)
        * factorial(3 * g1 - 2)
        * factorial(3 * g2 - 2)
        * BigInt::from(6 * g - 6);
    Ok(Rational::new(BigInt::from(1), den))
}

/// Shares of the one-component multicurves of type `(g, n)`, grouped by the
/// topological type of the complement. Keys list `genus:legs` for each side.
pub fn one_curve_split(g: u32, n: u32) -> Result<BTreeMap<String, Rational>> {
    let mut by: BTreeMap<String, Rational> = BTreeMap::new();
    let mut total = Rational::from_integer(0.into());
    for gr in enumerate_stable_graphs(g, n)?.into_iter().filter(|gr| gr.num_edges() == 1) {
        let c = y_op(&p_gamma(&gr)?, &[1])?;
        let mut sides: Vec<String> =
            gr.vertices().iter().map(|v| format!("{}:{}", v.genus, v.legs.len())).collect();
        sides.sort();
        let key = if gr.num_vertices() == 1 { format!("nonsep {}", sides[0]) } else { sides.join("+") };
        *by.entry(key).or_insert_with(|| rat(0, 1)) += &c;
        total += c;
    }
    for v in by.values_mut() {
        *v = &*v / &total;
    }
    Ok(by)
}

//! Statistics of large random square-tiled surfaces: how many maximal
//! cylinders they have, the heights of those cylinders, and averages of
//! monomials in the cylinder circumferences `b_i`.

use crate::arith::{PiMonomial, Rational, ZetaExpr, ZetaQuotient};
use crate::error::{Error, Result};
use crate::graphs::StableGraph;
use crate::poly::CylPolynomial;
use crate::volumes::{self, contributing_graphs, p_gamma, simplex_integral, y_op, z_op, z_op_pi, LegMode};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// `p_k`: share of square-tiled surfaces with exactly `k` maximal cylinders.
pub fn cylinder_distribution(g: u32, n: u32) -> Result<BTreeMap<usize, Rational>> {
    Ok(volumes::masur_veech_volume(g, n)?.cylinder_fractions())
}

#[derive(Clone, Debug)]
pub struct ExpectationQuery {
    pub graph: StableGraph,
    /// Exponent of each `b_i` in the moment, in canonical edge order.
    pub moment: Vec<i32>,
    /// Fixed cylinder heights; `None` averages over all heights.
    pub heights: Option<Vec<u32>>,
}

impl ExpectationQuery {
    /// The moment `b_i / b_j` (0-based edge indices).
    pub fn ratio(graph: StableGraph, i: usize, j: usize, heights: Option<Vec<u32>>) -> Result<Self> {
        let k = graph.num_edges();
        if i >= k || j >= k {
            return Err(Error::InvalidArgument(format!("edge index out of range 0..{k}")));
        }
        let mut moment = vec![0; k];
        moment[i] += 1;
        moment[j] -= 1;
        Ok(ExpectationQuery { graph, moment, heights })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expectation {
    /// Heights fixed: an exact rational.
    Fixed(Rational),
    /// Heights averaged: a quotient of zeta values.
    Averaged(ZetaQuotient),
    Divergent,
}

fn apply_moment(p: &CylPolynomial, moment: &[i32]) -> Result<CylPolynomial> {
    if moment.len() != p.nvars() {
        return Err(Error::InvalidArgument("moment length differs from the number of edges".into()));
    }
    let mut out = CylPolynomial::zero(p.nvars());
    for (exps, q) in p.terms() {
        let mut e = Vec::with_capacity(exps.len());
        for (&m, &s) in exps.iter().zip(moment) {
            let v = m as i64 + s as i64;
            if v < 0 {
                return Err(Error::InvalidArgument(
                    "moment lowers an exponent of the cylinder polynomial below zero".into(),
                ));
            }
            e.push(v as u32);
        }
        out.add_term(e, q.clone());
    }
    Ok(out)
}

/// Expected value of the moment over square-tiled surfaces of the given graph type.
pub fn expectation(q: &ExpectationQuery) -> Result<Expectation> {
    let p = p_gamma(&q.graph)?;
    let pm = apply_moment(&p, &q.moment)?;
    match &q.heights {
        Some(h) => {
            let num = simplex_integral(&volumes::ztilde_op(&pm, h)?);
            let den = simplex_integral(&volumes::ztilde_op(&p, h)?);
            Ok(Expectation::Fixed(num / den))
        }
        None => {
            let num = z_op(&pm);
            if num.is_divergent() {
                return Ok(Expectation::Divergent);
            }
            Ok(Expectation::Averaged(num.checked_div(&z_op(&p))?))
        }
    }
}

/// Probability that a surface with only one maximal cylinder has height 1: `1/zeta(6g-6+2n)`.
pub fn height_one_probability(g: u32, n: u32) -> Result<PiMonomial> {
    let mut y = Rational::zero();
    let mut z = PiMonomial::zero();
    for gr in contributing_graphs(g, n, LegMode::Shapes)?.iter().filter(|gr| gr.num_edges() == 1) {
        let p = p_gamma(gr)?;
        y += y_op(&p, &[1])?;
        z = z.checked_add(&z_op_pi(&p)?)?;
    }
    if z.is_zero() {
        return Err(Error::InvalidArgument("no one-cylinder surfaces".into()));
    }
    PiMonomial::rational(y).checked_div(&z)
}

/// Probability that every cylinder of a surface of type `gr` has height at most `bound`.
pub fn bounded_height_probability(gr: &StableGraph, bound: u32) -> Result<ZetaQuotient> {
    if bound == 0 {
        return Err(Error::InvalidArgument("height bound must be positive".into()));
    }
    let p = p_gamma(gr)?;
    let k = gr.num_edges();
    let mut h = vec![1u32; k];
    let mut total = Rational::zero();
    loop {
        total += y_op(&p, &h)?;
        let mut i = 0;
        while i < k && h[i] == bound {
            h[i] = 1;
            i += 1;
        }
        if i == k {
            break;
        }
        h[i] += 1;
    }
    ZetaExpr::constant(total).checked_div(&z_op(&p))
}

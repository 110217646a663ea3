//! Area Siegel-Veech constants `c_area(Q_{g,n})` and Lyapunov sums.
//!
//! Values are reported as the rational number `pi^2/3 * c_area`. There are
//! two independent routes: a sum over stable graphs of the cylinder
//! polynomials differentiated along each edge, and a recursion in terms of
//! volumes of boundary strata.

use crate::arith::{factorial, rat, rat_int, PiMonomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::StableGraph;
use crate::poly::CylPolynomial;
use crate::volumes::{self, contributing_graphs, p_gamma, z_op_pi, LegMode};
use rayon::prelude::*;
use serde::Serialize;

fn check(g: u32, n: u32) -> Result<()> {
    if 2 * g + n <= 3 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

/// `sum_e chi(e) b_e dP/db_e |_{b_e = 0}` with `chi = 1/2` on bridges and `1`
/// on every other edge. Only terms linear in `b_e` survive.
pub fn d_gamma(gr: &StableGraph, p: &CylPolynomial) -> CylPolynomial {
    let mut out = CylPolynomial::zero(p.nvars());
    for e in 0..gr.num_edges() {
        let chi = if gr.is_bridge(e) { rat(1, 2) } else { rat(1, 1) };
        let part = p.filter(|exps| exps[e] == 1).scale(&chi);
        out = &out + &part;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CareaTerm {
    pub encoding: String,
    /// `Z(d_Gamma P_Gamma)`.
    pub value: PiMonomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct CareaReport {
    pub g: u32,
    pub n: u32,
    /// `pi^2/3 * c_area`.
    pub value: Rational,
    pub graphs: Vec<CareaTerm>,
}

fn ratio_to_rational(num: &PiMonomial, vol: &PiMonomial) -> Result<Rational> {
    let q = num.checked_div(vol)?;
    if q.pi_exp() != 0 && !q.is_zero() {
        return Err(Error::Consistency(format!("unexpected pi^{} in c_area", q.pi_exp())));
    }
    Ok(q.coeff().clone())
}

pub fn carea_direct_breakdown(g: u32, n: u32, mode: LegMode) -> Result<CareaReport> {
    check(g, n)?;
    let graphs = contributing_graphs(g, n, mode)?;
    let rows: Vec<(CareaTerm, PiMonomial)> = graphs
        .par_iter()
        .map(|gr| {
            let p = p_gamma(gr)?;
            let vol = z_op_pi(&p)?;
            let value = z_op_pi(&d_gamma(gr, &p))?;
            Ok((CareaTerm { encoding: gr.canonical_encoding(), value }, vol))
        })
        .collect::<Result<_>>()?;
    let mut sum = PiMonomial::zero();
    let mut vol = PiMonomial::zero();
    for (t, v) in &rows {
        sum = sum.checked_add(&t.value)?;
        vol = vol.checked_add(v)?;
    }
    // c_area Vol = 3/pi^2 sum Z(dP), hence pi^2/3 c_area = sum / Vol
    let value = ratio_to_rational(&sum, &vol)?;
    Ok(CareaReport { g, n, value, graphs: rows.into_iter().map(|(t, _)| t).collect() })
}

/// `pi^2/3 * c_area(Q_{g,n})` from the graph sum.
pub fn carea_direct(g: u32, n: u32) -> Result<Rational> {
    Ok(carea_direct_breakdown(g, n, LegMode::Shapes)?.value)
}

fn fq(n: i64) -> Rational {
    rat_int(factorial(n as u32))
}

fn split_volume(g: u32, n: u32) -> Result<PiMonomial> {
    volumes::volume(g, n)
}

/// `pi^2/3 * c_area(Q_{g,n})` from volumes of boundary strata: splittings
/// into two surfaces, pinching off a pair of poles, and the non-separating
/// degeneration to genus `g - 1`.
pub fn carea_boundary(g: u32, n: u32) -> Result<Rational> {
    check(g, n)?;
    let (gi, ni) = (g as i64, n as i64);
    let d = 6 * gi - 6 + 2 * ni;
    let l = 4 * gi - 4 + ni;
    let vol03 = PiMonomial::rational(rat(4, 1));
    let mut acc = PiMonomial::zero();

    if (g, n) == (0, 4) {
        // both sides are Q_{0,3}, where (d_i - 1)!/l_i! is read as 1/2
        let t = rat(1, 8) * rat(1, 4) * fq(l) / fq(d - 1) * fq(ni) / rat(4, 1);
        acc = acc.checked_add(&(&vol03 * &vol03).scale(&t))?;
    }

    for g1 in 0..=g {
        let g2 = g - g1;
        for n1 in 1..=(n + 1) {
            let n2 = n + 2 - n1;
            let (g1i, n1i, g2i, n2i) = (g1 as i64, n1 as i64, g2 as i64, n2 as i64);
            let d1 = 6 * g1i - 6 + 2 * n1i;
            let d2 = 6 * g2i - 6 + 2 * n2i;
            if d1 < 1 || d2 < 1 {
                continue;
            }
            let l1 = 4 * g1i - 4 + n1i;
            let l2 = 4 * g2i - 4 + n2i;
            let c = rat(1, 8) * fq(l) / (fq(l1) * fq(l2)) * fq(ni) / (fq(n1i - 1) * fq(n2i - 1))
                * fq(d1 - 1)
                * fq(d2 - 1)
                / fq(d - 1);
            let v = &split_volume(g1, n1)? * &split_volume(g2, n2)?;
            acc = acc.checked_add(&v.scale(&c))?;
        }
    }

    if n >= 2 && (g, n) != (0, 4) {
        let c = rat(1, 16) * rat(l * ni * (ni - 1), (d - 1) * (d - 2));
        let v = &vol03 * &split_volume(g, n - 1)?;
        acc = acc.checked_add(&v.scale(&c))?;
    }

    if g >= 1 {
        let c = rat(l * (l - 1), (d - 1) * (d - 2));
        acc = acc.checked_add(&split_volume(g - 1, n + 2)?.scale(&c))?;
    }

    let vol = split_volume(g, n)?;
    // acc is c_area * Vol
    let q = acc.checked_div(&vol)?;
    if q.pi_exp() != -2 {
        return Err(Error::Consistency(format!("unexpected pi^{} in c_area", q.pi_exp())));
    }
    Ok(q.coeff() / rat(3, 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CareaMethod {
    Direct,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyapunovSums {
    pub plus: Rational,
    pub minus: Rational,
}

/// `Lambda^+ = (5g - 5 - n)/18 + pi^2/3 c_area` and `Lambda^- = Lambda^+ + (g - 1 + n)/3`.
pub fn lyapunov_sums(g: u32, n: u32, method: CareaMethod) -> Result<LyapunovSums> {
    let c = match method {
        CareaMethod::Direct => carea_direct(g, n)?,
        CareaMethod::Boundary => carea_boundary(g, n)?,
    };
    let plus = rat(5 * g as i64 - 5 - n as i64, 18) + c;
    let minus = &plus + rat(g as i64 - 1 + n as i64, 3);
    Ok(LyapunovSums { plus, minus })
}

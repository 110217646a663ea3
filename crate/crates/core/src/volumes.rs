//! Masur-Veech volumes of the principal strata `Q(1^{4g-4+n}, -1^n)`.
//!
//! The volume is a sum over stable graphs of type `(g, n)`. Each graph
//! contributes its cylinder polynomial `P_Gamma` (a product of Kontsevich
//! polynomials at the vertices, one factor `b_e` per edge, and a
//! combinatorial weight) pushed through the operator `Z` that sends
//! `prod b_i^{m_i}` to `prod m_i! zeta(m_i + 1)`.

use crate::arith::{factorial, pow2, rat, rat_int, zeta_even, PiMonomial, Rational, ZetaExpr};
use crate::correlators::psi_correlator;
use crate::error::{Error, Result};
use crate::graphs::{enumerate_shapes, enumerate_stable_graphs, StableGraph};
use crate::poly::CylPolynomial;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

/// Rejects pairs outside `2g + n >= 3`. The degenerate pairs `(0, 3)` and
/// `(1, 1)` are accepted.
pub fn check_pair(g: u32, n: u32) -> Result<()> {
    if 2 * g + n < 3 {
        Err(Error::Unstable { g, n })
    } else {
        Ok(())
    }
}

/// Dimension `6g - 6 + 2n` of the stratum, which is also the power of `pi` in its volume.
pub fn dimension(g: u32, n: u32) -> i64 {
    6 * g as i64 - 6 + 2 * n as i64
}

/// Kontsevich polynomial `N_{g,n}(b_1, .., b_n)`.
pub fn kontsevich_poly(g: u32, n: u32) -> Result<CylPolynomial> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let slots: Vec<Option<usize>> = (0..n as usize).map(Some).collect();
    vertex_poly(g, &slots, n as usize)
}

/// `N_{g_v, n_v}` evaluated on the edge variables of a graph; `None` slots are
/// legs and get `b = 0`.
fn vertex_poly(g: u32, slots: &[Option<usize>], nvars: usize) -> Result<CylPolynomial> {
    let n = slots.len() as i64;
    let total = 3 * g as i64 - 3 + n;
    let scale = pow2(-(5 * g as i64 - 6 + 2 * n));
    let free: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].is_some()).collect();
    let mut out = CylPolynomial::zero(nvars);
    let mut d = vec![0u32; slots.len()];
    let mut err = None;
    compositions(total as u32, free.len(), &mut |parts: &[u32]| {
        if err.is_some() {
            return;
        }
        for (j, &i) in free.iter().enumerate() {
            d[i] = parts[j];
        }
        let corr = match psi_correlator(g, &d) {
            Ok(c) => c,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        if corr.is_zero() {
            return;
        }
        let mut den = BigInt::one();
        let mut exps = vec![0u32; nvars];
        for &i in &free {
            den *= factorial(d[i]);
            exps[slots[i].unwrap()] += 2 * d[i];
        }
        out.add_term(exps, corr * &scale / rat_int(den));
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn compositions(total: u32, parts: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(rem: u32, left: usize, buf: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if left == 1 {
            buf.push(rem);
            f(buf);
            buf.pop();
            return;
        }
        for x in 0..=rem {
            buf.push(x);
            rec(rem - x, left - 1, buf, f);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

/// `2^{6g-5+2n} (4g-4+n)! / (6g-7+2n)!`, the normalisation in front of every
/// cylinder polynomial of type `(g, n)`.
pub fn prefactor(g: u32, n: u32) -> Rational {
    let (g, n) = (g as i64, n as i64);
    pow2(6 * g - 5 + 2 * n) * rat_int(factorial((4 * g - 4 + n) as u32))
        / rat_int(factorial((6 * g - 7 + 2 * n) as u32))
}

/// Sum of `1/|Aut|` over the labelled graphs a graph stands for: `1/|Aut|`
/// itself for a labelled graph, `n! / (|Aut| prod_v l_v!)` for a shape with
/// `l_v` anonymous legs at vertex `v`.
pub fn labeling_weight(gr: &StableGraph) -> Rational {
    let aut = rat_int(gr.aut_order());
    if gr.num_legs() > 0 && gr.is_shape() {
        let mut den = BigInt::one();
        for v in gr.vertices() {
            den *= factorial(v.legs.len() as u32);
        }
        rat_int(factorial(gr.num_legs() as u32)) / (aut * rat_int(den))
    } else {
        aut.recip()
    }
}

/// Cylinder polynomial `P_Gamma` in the edge variables `b_1 .. b_k`, ordered
/// as the canonical edges of the graph.
pub fn p_gamma(gr: &StableGraph) -> Result<CylPolynomial> {
    let g = gr.genus();
    let n = gr.num_legs() as u32;
    check_pair(g, n)?;
    let k = gr.num_edges();
    if k == 0 {
        return Ok(if (g, n) == (0, 3) {
            CylPolynomial::constant(0, rat(4, 1))
        } else {
            CylPolynomial::zero(0)
        });
    }
    let mut acc = CylPolynomial::constant(k, Rational::one());
    for e in 0..k {
        acc = &acc * &CylPolynomial::var(k, e);
    }
    for (v, vx) in gr.vertices().iter().enumerate() {
        let mut slots: Vec<Option<usize>> = vec![None; vx.legs.len()];
        for (e, &(a, b)) in gr.edges().iter().enumerate() {
            if a == v {
                slots.push(Some(e));
            }
            if b == v {
                slots.push(Some(e));
            }
        }
        acc = &acc * &vertex_poly(vx.genus, &slots, k)?;
    }
    let c = prefactor(g, n) * pow2(-(gr.num_vertices() as i64 - 1)) * labeling_weight(gr);
    Ok(acc.scale(&c))
}

/// `Z(prod b_i^{m_i}) = prod m_i! zeta(m_i + 1)`, extended linearly.
pub fn z_op(p: &CylPolynomial) -> ZetaExpr {
    let mut out = ZetaExpr::zero();
    for (exps, q) in p.terms() {
        let mut c = q.clone();
        let mut args: Vec<u32> = Vec::with_capacity(exps.len());
        for &m in exps {
            c *= rat_int(factorial(m));
            args.push(m + 1);
        }
        args.sort_unstable();
        out.add_term(args, c);
    }
    out
}

/// `Z(P)` as `q * pi^d`; fails when an even exponent produces an odd zeta value.
pub fn z_op_pi(p: &CylPolynomial) -> Result<PiMonomial> {
    let mut acc = PiMonomial::zero();
    for (exps, q) in p.terms() {
        let mut t = PiMonomial::rational(q.clone());
        for &m in exps {
            t = &t.scale(&rat_int(factorial(m))) * &zeta_even(m + 1)?;
        }
        acc = acc.checked_add(&t)?;
    }
    Ok(acc)
}

/// `Y(H)(prod b_i^{m_i}) = prod m_i! / H_i^{m_i + 1}`: the count of
/// square-tiled surfaces with prescribed cylinder heights.
pub fn y_op(p: &CylPolynomial, heights: &[u32]) -> Result<Rational> {
    if heights.len() != p.nvars() {
        return Err(Error::InvalidArgument(format!(
            "{} heights for {} cylinders",
            heights.len(),
            p.nvars()
        )));
    }
    if heights.contains(&0) {
        return Err(Error::InvalidArgument("heights must be positive".into()));
    }
    let mut acc = Rational::zero();
    for (exps, q) in p.terms() {
        let mut t = q.clone();
        for (&m, &h) in exps.iter().zip(heights) {
            t *= rat_int(factorial(m))
                / rat_int(num_traits::pow(BigInt::from(h), m as usize + 1));
        }
        acc += t;
    }
    Ok(acc)
}

/// `Z~(x, H)(prod b_i^{m_i}) = (sum m_i + k)! prod x_i^{m_i} / H_i^{m_i + 1}`, a
/// polynomial in the cylinder area fractions `x_i`.
pub fn ztilde_op(p: &CylPolynomial, heights: &[u32]) -> Result<CylPolynomial> {
    if heights.len() != p.nvars() {
        return Err(Error::InvalidArgument("height vector length".into()));
    }
    let k = p.nvars() as u32;
    let mut out = CylPolynomial::zero(p.nvars());
    for (exps, q) in p.terms() {
        let total: u32 = exps.iter().sum();
        let mut t = q * rat_int(factorial(total + k));
        for (&m, &h) in exps.iter().zip(heights) {
            t /= rat_int(num_traits::pow(BigInt::from(h), m as usize + 1));
        }
        out.add_term(exps.clone(), t);
    }
    Ok(out)
}

/// Integral over the solid simplex `{x_i >= 0, sum x_i <= 1}` in `R^k`:
/// `prod m_i! / (sum m_i + k)!`. For homogeneous input this is the integral
/// over the face `sum x_i = 1` up to a factor depending only on the degree.
pub fn simplex_integral(p: &CylPolynomial) -> Rational {
    let k = p.nvars() as u32;
    let mut acc = Rational::zero();
    for (exps, q) in p.terms() {
        let total: u32 = exps.iter().sum();
        let mut t = q / rat_int(factorial(total + k));
        for &m in exps {
            t *= rat_int(factorial(m));
        }
        acc += t;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegMode {
    /// One entry per labelled graph.
    Labeled,
    /// One entry per shape; faster when there are many legs.
    Shapes,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphContribution {
    pub encoding: String,
    pub graph: StableGraph,
    pub cylinders: usize,
    pub aut: String,
    pub p_gamma: CylPolynomial,
    pub p_gamma_text: String,
    pub volume: PiMonomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub g: u32,
    pub n: u32,
    pub total: PiMonomial,
    pub graphs: Vec<GraphContribution>,
    pub cylinders: BTreeMap<usize, PiMonomial>,
}

impl VolumeReport {
    /// Share of the volume coming from surfaces with `k` maximal cylinders.
    pub fn cylinder_fractions(&self) -> BTreeMap<usize, Rational> {
        self.cylinders
            .iter()
            .map(|(&k, v)| (k, v.checked_div(&self.total).unwrap().coeff().clone()))
            .collect()
    }
}

/// Graphs of type `(g, n)` that can contribute: all graphs with at least one
/// edge, plus the single vertex for `(0, 3)`.
pub fn contributing_graphs(g: u32, n: u32, mode: LegMode) -> Result<Vec<StableGraph>> {
    check_pair(g, n)?;
    let all = match mode {
        LegMode::Labeled => enumerate_stable_graphs(g, n)?,
        LegMode::Shapes => enumerate_shapes(g, n)?,
    };
    Ok(all.into_iter().filter(|gr| gr.num_edges() > 0 || (g, n) == (0, 3)).collect())
}

pub fn contribution(gr: &StableGraph) -> Result<GraphContribution> {
    let p = p_gamma(gr)?;
    let volume = z_op_pi(&p)?;
    Ok(GraphContribution {
        encoding: gr.canonical_encoding(),
        graph: gr.clone(),
        cylinders: gr.num_edges(),
        aut: gr.aut_order().to_string(),
        p_gamma_text: p.to_string(),
        p_gamma: p,
        volume,
    })
}

/// Volume of `Q_{g,n}` with its per-graph and per-cylinder-count breakdown.
pub fn volume_breakdown(g: u32, n: u32, mode: LegMode) -> Result<VolumeReport> {
    let graphs = contributing_graphs(g, n, mode)?;
    let contribs: Vec<GraphContribution> =
        graphs.par_iter().map(contribution).collect::<Result<_>>()?;
    let mut total = PiMonomial::zero();
    let mut cylinders: BTreeMap<usize, PiMonomial> = BTreeMap::new();
    for c in &contribs {
        total = total.checked_add(&c.volume)?;
        let slot = cylinders.entry(c.cylinders).or_insert_with(PiMonomial::zero);
        *slot = slot.checked_add(&c.volume)?;
    }
    volume_cache().lock().insert((g, n), total.clone());
    Ok(VolumeReport { g, n, total, graphs: contribs, cylinders })
}

/// Volume report computed from graph shapes.
pub fn masur_veech_volume(g: u32, n: u32) -> Result<VolumeReport> {
    volume_breakdown(g, n, LegMode::Shapes)
}

fn volume_cache() -> &'static Mutex<HashMap<(u32, u32), PiMonomial>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), PiMonomial>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Vol Q_{g,n}`, memoized for the process.
pub fn volume(g: u32, n: u32) -> Result<PiMonomial> {
    if let Some(v) = volume_cache().lock().get(&(g, n)) {
        return Ok(v.clone());
    }
    Ok(masur_veech_volume(g, n)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Vertex;

    fn vx(genus: u32, legs: &[u32]) -> Vertex {
        Vertex { genus, legs: legs.to_vec() }
    }

    #[test]
    fn kontsevich_low_cases() {
        let n03 = kontsevich_poly(0, 3).unwrap();
        assert_eq!(n03, CylPolynomial::constant(3, rat(1, 1)));
        let n11 = kontsevich_poly(1, 1).unwrap();
        assert_eq!(n11, CylPolynomial::monomial(vec![2], rat(1, 48)));
        // N_{0,4} = (b1^2 + b2^2 + b3^2 + b4^2) / 4
        let n04 = kontsevich_poly(0, 4).unwrap();
        assert_eq!(n04.len(), 4);
        assert_eq!(n04.coeff(&[2, 0, 0, 0]), rat(1, 4));
        // N_{1,2} = (b1^2 + b2^2)^2 / 384
        let n12 = kontsevich_poly(1, 2).unwrap();
        assert_eq!(n12.coeff(&[4, 0]), rat(1, 384));
        assert_eq!(n12.coeff(&[2, 2]), rat(1, 192));
    }

    #[test]
    fn degenerate_pairs() {
        let r = masur_veech_volume(0, 3).unwrap();
        assert_eq!(r.total, PiMonomial::rational(rat(4, 1)));
        let r = masur_veech_volume(1, 1).unwrap();
        assert_eq!(r.total, PiMonomial::new(rat(2, 3), 2));
        let lp = StableGraph::new(vec![vx(0, &[1])], vec![(0, 0)]).unwrap();
        assert_eq!(p_gamma(&lp).unwrap(), CylPolynomial::monomial(vec![1], rat(4, 1)));
        assert!(masur_veech_volume(1, 0).is_err());
        assert!(masur_veech_volume(0, 2).is_err());
    }

    #[test]
    fn genus_zero_four_points() {
        assert_eq!(volume(0, 4).unwrap(), PiMonomial::new(rat(2, 1), 2));
    }

    #[test]
    fn genus_two_graph_values() {
        let graphs = contributing_graphs(2, 0, LegMode::Labeled).unwrap();
        let mut vols: Vec<Rational> =
            graphs.iter().map(|g| contribution(g).unwrap().volume.coeff().clone()).collect();
        vols.sort();
        let mut expected =
            vec![rat(16, 945), rat(1, 2835), rat(8, 225), rat(1, 675), rat(1, 135), rat(2, 405)];
        expected.sort();
        assert_eq!(vols, expected);
    }

    #[test]
    fn shapes_and_labels_agree() {
        for (g, n) in [(0, 5), (0, 6), (1, 2), (1, 3), (2, 1)] {
            let a = volume_breakdown(g, n, LegMode::Labeled).unwrap();
            let b = volume_breakdown(g, n, LegMode::Shapes).unwrap();
            assert_eq!(a.total, b.total, "({g}, {n})");
            assert_eq!(a.cylinders, b.cylinders, "({g}, {n})");
        }
    }

    #[test]
    fn operators() {
        let p = &CylPolynomial::monomial(vec![1, 3], rat(2, 15)) + &CylPolynomial::monomial(vec![2, 0], rat(1, 1));
        let z = z_op(&p);
        assert_eq!(z.len(), 2);
        assert!(z_op_pi(&p).is_err());
        let y = y_op(&p, &[1, 2]).unwrap();
        assert_eq!(y, rat(2, 15) * rat(6, 16) + rat(1, 1));
        assert_eq!(simplex_integral(&ztilde_op(&p, &[1, 2]).unwrap()), y);
        assert!(y_op(&p, &[1]).is_err());
    }
}

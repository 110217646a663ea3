//! Large genus behaviour: normalized two-point correlators `a_{g,k}`, closed
//! forms for one-cylinder contributions to `Vol Q_g`, and the bounds and
//! diagnostics derived from them.

use crate::arith::{
    binomial, double_factorial, factorial, ln_abs, pow_rat, rat, rat_int, to_f64, zeta_even, PiMonomial,
    Rational,
};
use crate::correlators::psi_correlator;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

fn df(n: i64) -> Rational {
    rat_int(double_factorial(n))
}

fn fq(n: i64) -> Rational {
    rat_int(factorial(n as u32))
}

fn rows() -> &'static RwLock<HashMap<u32, Arc<Vec<Rational>>>> {
    static ROWS: OnceLock<RwLock<HashMap<u32, Arc<Vec<Rational>>>>> = OnceLock::new();
    ROWS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `[a_{g,0}, .., a_{g,3g-1}]` from the difference recursion in `k`, starting
/// at `a_{g,0} = 1` and completed by the symmetry `a_{g,k} = a_{g,3g-1-k}`.
pub fn a_gk_row(g: u32) -> Result<Arc<Vec<Rational>>> {
    if g == 0 {
        return Err(Error::InvalidArgument("a_{g,k} needs g >= 1".into()));
    }
    if let Some(r) = rows().read().get(&g) {
        return Ok(r.clone());
    }
    let gi = g as i64;
    let top = 3 * gi - 1;
    let mut a = vec![Rational::zero(); (top + 1) as usize];
    a[0] = Rational::one();
    let half = (3 * gi - 1) / 2;
    let base = df(6 * gi - 1);
    for k in 0..half {
        let j = (k + 1) / 3;
        let t = match k % 3 {
            2 => df(6 * j - 1) / fq(j) * fq(gi - 1) / fq(gi - j) * rat(gi - 2 * j, 1),
            0 => rat(-2, 1) * df(6 * j + 1) / fq(j) * fq(gi - 1) / fq(gi - 1 - j),
            _ => rat(2, 1) * df(6 * j + 3) / fq(j) * fq(gi - 1) / fq(gi - 1 - j),
        };
        let step = df(6 * gi - 3 - 2 * k) / &base * t;
        a[(k + 1) as usize] = &a[k as usize] + step;
    }
    for k in (half + 1)..=top {
        a[k as usize] = a[(top - k) as usize].clone();
    }
    let row = Arc::new(a);
    rows().write().insert(g, row.clone());
    Ok(row)
}

pub fn a_gk(g: u32, k: u32) -> Result<Rational> {
    let row = a_gk_row(g)?;
    row.get(k as usize)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("k = {k} outside 0..{}", 3 * g)))
}

/// `(2k+1)!! (6g-1-2k)!! / (6g-1)!! * 24^g g! * <tau_k tau_{3g-1-k}>_g`.
pub fn a_gk_from_correlator(g: u32, k: u32, corr: &Rational) -> Rational {
    let (gi, ki) = (g as i64, k as i64);
    df(2 * ki + 1) * df(6 * gi - 1 - 2 * ki) / df(6 * gi - 1)
        * rat_int(num_traits::pow(BigInt::from(24), g as usize))
        * fq(gi)
        * corr
}

/// Normalized two-point correlator computed from intersection numbers.
pub fn a_gk_via_correlators(g: u32, k: u32) -> Result<Rational> {
    let corr = psi_correlator(g, &[k, 3 * g - 1 - k])?;
    Ok(a_gk_from_correlator(g, k, &corr))
}

/// `C(3g, 3j) C(g, j) / C(6g, 6j)`.
pub fn r_gj(g: u32, j: u32) -> Rational {
    let (g, j) = (g as i64, j as i64);
    Rational::new(binomial(3 * g, 3 * j) * binomial(g, j), binomial(6 * g, 6 * j))
}

/// `Vol Gamma_1(h+1) / zeta(6h)`: contribution of one non-separating cylinder.
pub fn vol_gamma1_over_zeta(h: u32) -> Result<Rational> {
    if h == 0 {
        return Err(Error::InvalidArgument("needs genus at least 2".into()));
    }
    let hi = h as i64;
    let row = a_gk_row(h)?;
    let mut s = Rational::zero();
    for k in 0..3 * hi {
        s += rat_int(binomial(6 * hi, 2 * k + 1)) * &row[k as usize];
    }
    let pre = fq(4 * hi) / (fq(hi) * fq(3 * hi))
        / (rat_int(num_traits::pow(BigInt::from(3), h as usize)) * pow_rat(&rat(2, 1), 2 * hi));
    Ok(pre * rat(2, 1) * s)
}

/// `Vol Gamma_1(g)` for `g >= 2`.
pub fn vol_gamma1(g: u32) -> Result<PiMonomial> {
    if g < 2 {
        return Err(Error::InvalidArgument("needs genus at least 2".into()));
    }
    let h = g - 1;
    Ok(zeta_even(6 * h)?.scale(&vol_gamma1_over_zeta(h)?))
}

/// `Vol Delta(g1, g2)`, the separating one-cylinder contribution, in closed form.
pub fn vol_delta(g1: u32, g2: u32) -> Result<PiMonomial> {
    if g1 == 0 || g2 == 0 {
        return Err(Error::InvalidArgument("both sides need positive genus".into()));
    }
    let g = (g1 + g2) as i64;
    let aut = if g1 == g2 { 2 } else { 1 };
    let q = rat(4, aut) * rat_int(binomial(4 * g - 4, g))
        / rat_int(num_traits::pow(BigInt::from(12), g as usize))
        * rat_int(binomial(g, g1 as i64))
        * rat_int(binomial(3 * g - 4, 3 * g1 as i64 - 2));
    Ok(zeta_even(6 * g as u32 - 6)?.scale(&q))
}

/// `S(g) = sum_{g1=1}^{g-1} C(g, g1) C(3g-4, 3g1-2)`.
pub fn s_g(g: u32) -> BigInt {
    let gi = g as i64;
    (1..gi).map(|g1| binomial(gi, g1) * binomial(3 * gi - 4, 3 * g1 - 2)).sum()
}

/// `S(2), .., S(g_max)` from the order-two recurrence seeded with `S(2), S(3)`.
pub fn s_g_recurrence(g_max: u32) -> Vec<Rational> {
    let mut out = vec![rat_int(s_g(2)), rat_int(s_g(3))];
    for g in 2..=(g_max as i64).saturating_sub(2) {
        let a = rat(
            2 * (324 * g.pow(4) + 432 * g.pow(3) + 123 * g * g - 49 * g - 8),
            (6 * g - 1) * (3 * g + 4) * (3 * g - 1) * (g + 1),
        );
        let b = rat(36 * (6 * g + 5) * (4 * g - 1) * (4 * g - 3), (6 * g - 1) * (3 * g + 4) * (3 * g - 1));
        let i = (g - 2) as usize;
        let next = a * &out[i + 1] + b * &out[i];
        out.push(next);
    }
    out.truncate(g_max.saturating_sub(1) as usize);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Gamma1Bounds {
    pub h: u32,
    pub lower: Rational,
    pub value: Rational,
    pub upper: Rational,
}

impl Gamma1Bounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// `C(4h, h) (16/3)^h (1 - 2/(6h-1)) <= Vol Gamma_1(h+1)/zeta(6h) <= C(4h, h) (16/3)^h`.
pub fn gamma1_bounds(h: u32) -> Result<Gamma1Bounds> {
    let hi = h as i64;
    let upper = rat_int(binomial(4 * hi, hi)) * pow_rat(&rat(16, 3), hi);
    let lower = &upper * (rat(1, 1) - rat(2, 6 * hi - 1));
    Ok(Gamma1Bounds { h, lower, value: vol_gamma1_over_zeta(h)?, upper })
}

/// Each `a_{g,k}` lies in `[1 - 2/(6g-1), 1]`, the extreme values being
/// `a_{g,1}` and `a_{g,0}`.
pub fn a_gk_bounds_hold(g: u32) -> Result<bool> {
    let row = a_gk_row(g)?;
    let lo = rat(1, 1) - rat(2, 6 * g as i64 - 1);
    Ok(row.iter().all(|a| *a >= lo && *a <= rat(1, 1)))
}

/// `sqrt(2/(3 pi g)) (8/3)^{4g-4} (1 - 2/(6g-7))`, a lower bound for `Vol Q_{g,0}`.
pub fn volume_lower_bound(g: u32) -> f64 {
    let gf = g as f64;
    (2.0 / (3.0 * std::f64::consts::PI * gf)).sqrt()
        * (8.0f64 / 3.0).powf(4.0 * gf - 4.0)
        * (1.0 - 2.0 / (6.0 * gf - 7.0))
}

/// `Vol Q_{g,0} / ((4/pi) (8/3)^{4g-4})`, expected to approach 1.
pub fn conjecture_ratio(vol: &PiMonomial, g: u32) -> f64 {
    let ln_vol = ln_abs(vol.coeff()) + vol.pi_exp() as f64 * std::f64::consts::PI.ln();
    let ln_ref = (4.0 / std::f64::consts::PI).ln() + (4.0 * g as f64 - 4.0) * (8.0f64 / 3.0).ln();
    (ln_vol - ln_ref).exp()
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub g: u32,
    /// `(separating / non-separating) * 4^g * sqrt(3 pi g / 2)`.
    pub sep_ratio_normalized: f64,
    /// `S(g) sqrt(6 pi g) / 2^{4g-4}`.
    pub s_g_normalized: f64,
    /// `sum_{g1} Vol Delta(g1, g - g1) / ((2/(3 pi g)) 4^{-g} (8/3)^{4g-4})`.
    pub delta_sum_normalized: f64,
}

/// Ratio of separating to non-separating one-cylinder contributions from the closed forms.
pub fn sep_ratio_closed(g: u32) -> Result<Rational> {
    let non = vol_gamma1(g)?;
    let mut sep = PiMonomial::zero();
    for g1 in 1..=g / 2 {
        sep = sep.checked_add(&vol_delta(g1, g - g1)?)?;
    }
    Ok(sep.checked_div(&non)?.coeff().clone())
}

pub fn diagnostics(g: u32) -> Result<Diagnostics> {
    let gf = g as f64;
    let pi = std::f64::consts::PI;
    let sep = to_f64(&sep_ratio_closed(g)?);
    let sep_ratio_normalized = sep * 4f64.powf(gf) * (3.0 * pi * gf / 2.0).sqrt();
    let s = rat_int(s_g(g)) / pow_rat(&rat(2, 1), 4 * g as i64 - 4);
    let s_g_normalized = to_f64(&s) * (6.0 * pi * gf).sqrt();
    let mut dsum = PiMonomial::zero();
    for g1 in 1..=g / 2 {
        dsum = dsum.checked_add(&vol_delta(g1, g - g1)?)?;
    }
    let ln_d = ln_abs(dsum.coeff()) + dsum.pi_exp() as f64 * pi.ln();
    let ln_ref = (2.0 / (3.0 * pi * gf)).ln() - gf * 4f64.ln() + (4.0 * gf - 4.0) * (8.0f64 / 3.0).ln();
    Ok(Diagnostics { g, sep_ratio_normalized, s_g_normalized, delta_sum_normalized: (ln_d - ln_ref).exp() })
}

/// Rows `g,k,num,den` of `a_{g,k}` for `1 <= g <= g_max`.
pub fn a_gk_csv(g_max: u32) -> Result<String> {
    let mut s = String::from("g,k,num,den\n");
    for g in 1..=g_max {
        for (k, a) in a_gk_row(g)?.iter().enumerate() {
            s.push_str(&format!("{g},{k},{},{}\n", a.numer(), a.denom()));
        }
    }
    Ok(s)
}

pub fn diagnostics_csv(gs: impl IntoIterator<Item = u32>) -> Result<String> {
    let mut s = String::from("g,sep_ratio_normalized,s_g_normalized,delta_sum_normalized\n");
    for g in gs {
        let d = diagnostics(g)?;
        s.push_str(&format!(
            "{},{:.12},{:.12},{:.12}\n",
            d.g, d.sep_ratio_normalized, d.s_g_normalized, d.delta_sum_normalized
        ));
    }
    Ok(s)
}

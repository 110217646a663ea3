//! Decimal evaluation of exact quantities. Approximations are computed in
//! fixed point with guard digits and accepted only once two successive
//! precisions round to the same string.

use super::{bernoulli, factorial, rat_int, zeta_even, PiMonomial, Rational, ZetaExpr, ZetaQuotient};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecimalValue {
    Finite(String),
    Divergent,
}

impl fmt::Display for DecimalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecimalValue::Finite(s) => write!(f, "{s}"),
            DecimalValue::Divergent => write!(f, "divergent"),
        }
    }
}

impl DecimalValue {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            DecimalValue::Finite(s) => Some(s),
            DecimalValue::Divergent => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_str().and_then(|s| s.parse().ok())
    }
}

fn ten_pow(p: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), p as usize)
}

/// `floor(log10 |q|)` for nonzero `q`.
fn log10_floor(q: &Rational) -> i64 {
    let n = q.numer().abs();
    let d = q.denom().clone();
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    // 10^e <= n/d < 10^(e+1) after at most one correction step
    let ge = |e: i64| -> bool {
        if e >= 0 {
            n >= &d * ten_pow(e as u32)
        } else {
            &n * ten_pow((-e) as u32) >= d
        }
    };
    if !ge(e) {
        e -= 1;
    } else if ge(e + 1) {
        e += 1;
    }
    e
}

/// Rounds an exact rational to `digits` significant digits, ties to even.
pub fn format_rational(q: &Rational, digits: u32) -> String {
    assert!(digits >= 1);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let mut e = log10_floor(&a);
    let mut m;
    loop {
        let shift = digits as i64 - 1 - e;
        let scaled = if shift >= 0 {
            &a * rat_int(ten_pow(shift as u32))
        } else {
            &a / rat_int(ten_pow((-shift) as u32))
        };
        let (quo, rem) = scaled.numer().div_rem(scaled.denom());
        m = quo;
        let twice = &rem * 2;
        let den = scaled.denom();
        if twice > *den || (twice == *den && m.is_odd()) {
            m += 1;
        }
        if m.to_string().len() as u32 > digits {
            e += 1;
            continue;
        }
        break;
    }
    let s = m.to_string();
    let body = if (-7..21).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if s.len() <= int_len {
                format!("{}{}", s, "0".repeat(int_len - s.len()))
            } else {
                let frac = s[int_len..].trim_end_matches('0');
                if frac.is_empty() {
                    s[..int_len].to_string()
                } else {
                    format!("{}.{}", &s[..int_len], frac)
                }
            }
        } else {
            let frac = format!("{}{}", "0".repeat((-e - 1) as usize), s);
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let frac = s[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{}", &s[..1], e)
        } else {
            format!("{}.{}e{}", &s[..1], frac, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Runs `approx(p)` at increasing precision `p` (decimal digits after the
/// point) until two successive precisions give the same rounded string.
fn certified<F: Fn(u32) -> Rational>(approx: F, digits: u32) -> String {
    let mut p = digits + 24;
    let mut prev: Option<String> = None;
    loop {
        let v = approx(p);
        if v.is_zero() {
            if p > 4 * digits + 4000 {
                return "0".to_string();
            }
            p *= 2;
            continue;
        }
        let mag = log10_floor(&v);
        if (p as i64) + mag < (digits as i64) + 16 {
            p = ((digits as i64) + 24 - mag) as u32;
            prev = None;
            continue;
        }
        let s = format_rational(&v, digits);
        if prev.as_deref() == Some(s.as_str()) {
            return s;
        }
        prev = Some(s);
        p *= 2;
    }
}

/// Arctangent of `1/x` scaled by `10^p`, truncated.
fn arctan_inv(x: u64, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Rational>> {
    static C: OnceLock<Mutex<HashMap<u32, Rational>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `pi` to within `10^-p`, as a rational.
fn pi_approx(p: u32) -> Rational {
    if let Some(v) = pi_cache().lock().get(&p) {
        return v.clone();
    }
    let guard = 10;
    let scale = ten_pow(p + guard);
    let v = arctan_inv(5, &scale) * 16 - arctan_inv(239, &scale) * 4;
    let q = Rational::new(v, scale);
    pi_cache().lock().insert(p, q.clone());
    q
}

fn zeta_cache() -> &'static Mutex<HashMap<(u32, u32), Rational>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), Rational>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn to_fixed(q: &Rational, scale: &BigInt) -> BigInt {
    (q * rat_int(scale.clone())).floor().to_integer()
}

/// `zeta(s)` for integer `s >= 2` to within `10^-p` by Euler-Maclaurin summation.
/// The loop stops once the next correction term is below `10^-(p + guard)`,
/// which bounds the remainder for real `s`.
fn zeta_approx(s: u32, p: u32) -> Rational {
    if s % 2 == 0 {
        let z = zeta_even(s).unwrap();
        let pi = pi_approx(p + 2 * s + 10);
        return z.coeff() * num_traits::pow(pi, s as usize);
    }
    if let Some(v) = zeta_cache().lock().get(&(s, p)) {
        return v.clone();
    }
    let guard = 10 + (p as f64).log10() as u32;
    let scale = ten_pow(p + guard);
    let n = (p / 2 + 10) as u64;
    let mut acc = BigInt::zero();
    for k in 1..n {
        acc += &scale / num_traits::pow(BigInt::from(k), s as usize);
    }
    let nq = rat_int(BigInt::from(n));
    let n_pow_s = num_traits::pow(nq.clone(), s as usize);
    let mut tail = nq.clone() / (&n_pow_s * rat_int(BigInt::from(s - 1))) + (&n_pow_s * rat_int(2)).recip();
    let threshold = Rational::new(BigInt::one(), scale.clone());
    // rising = s (s+1) ... (s+2k-2); npow = n^(s+2k-1)
    let mut rising = rat_int(BigInt::from(s));
    let mut npow = &n_pow_s * &nq;
    let n2 = &nq * &nq;
    let mut k = 1u32;
    loop {
        let term = bernoulli(2 * k) / rat_int(factorial(2 * k)) * &rising / &npow;
        tail += &term;
        if term.abs() < threshold || k > 4 * n as u32 {
            break;
        }
        rising *= rat_int(BigInt::from((s + 2 * k - 1) as u64 * (s + 2 * k) as u64));
        npow *= &n2;
        k += 1;
    }
    acc += to_fixed(&tail, &scale);
    let q = Rational::new(acc, scale);
    zeta_cache().lock().insert((s, p), q.clone());
    q
}

/// `pi` to `digits` significant digits.
pub fn pi_decimal(digits: u32) -> String {
    certified(pi_approx, digits)
}

/// `zeta(s)` to `digits` significant digits.
pub fn zeta_numeric(s: u32, digits: u32) -> Result<String> {
    match s {
        0 => Err(Error::InvalidArgument("zeta(0) is outside the supported range s >= 2".into())),
        1 => Err(Error::Divergent),
        _ => Ok(certified(|p| zeta_approx(s, p), digits)),
    }
}

fn approx_expr(e: &ZetaExpr, p: u32) -> Rational {
    let mut acc = Rational::zero();
    for (args, q) in e.terms() {
        let mut t = q.clone();
        for &s in args {
            t *= zeta_approx(s, p + 10);
        }
        acc += t;
    }
    acc
}

impl PiMonomial {
    pub fn decimal(&self, digits: u32) -> String {
        if self.pi_exp() == 0 {
            return format_rational(self.coeff(), digits);
        }
        let k = self.pi_exp();
        certified(
            |p| {
                let pi = pi_approx(p + 2 * k.unsigned_abs() + 10);
                let pk = num_traits::pow(pi, k.unsigned_abs() as usize);
                if k > 0 {
                    self.coeff() * pk
                } else {
                    self.coeff() / pk
                }
            },
            digits,
        )
    }
}

impl ZetaExpr {
    pub fn decimal(&self, digits: u32) -> DecimalValue {
        if self.is_divergent() {
            return DecimalValue::Divergent;
        }
        DecimalValue::Finite(certified(|p| approx_expr(self, p), digits))
    }
}

impl ZetaQuotient {
    pub fn decimal(&self, digits: u32) -> DecimalValue {
        if self.is_divergent() {
            return DecimalValue::Divergent;
        }
        let den = ZetaExpr::monomial(self.den.clone(), Rational::one());
        DecimalValue::Finite(certified(|p| approx_expr(&self.num, p) / approx_expr(&den, p), digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn rounding_half_even() {
        assert_eq!(format_rational(&rat(5, 9), 10), "0.5555555556");
        assert_eq!(format_rational(&rat(1, 8), 2), "0.12");
        assert_eq!(format_rational(&rat(3, 8), 2), "0.38");
        assert_eq!(format_rational(&rat(25, 1), 1), "20");
        let big: BigInt = "3500000000000000000000".parse().unwrap();
        assert_eq!(format_rational(&rat_int(big), 2), "3.5e21");
        assert_eq!(format_rational(&rat(999, 1000), 2), "1");
        assert_eq!(format_rational(&rat(-19, 18), 5), "-1.0556");
        assert_eq!(format_rational(&rat(1, 3_000_000_000), 3), "3.33e-10");
        assert_eq!(format_rational(&rat(123456, 1), 3), "123000");
    }

    #[test]
    fn constants() {
        assert_eq!(pi_decimal(30), "3.14159265358979323846264338328");
        assert_eq!(zeta_numeric(3, 20).unwrap(), "1.2020569031595942854");
        assert_eq!(zeta_numeric(5, 15).unwrap(), "1.03692775514337");
        assert_eq!(zeta_numeric(2, 12).unwrap(), "1.64493406685");
        assert_eq!(zeta_numeric(1, 10), Err(Error::Divergent));
    }

    #[test]
    fn odd_zeta_against_partial_sums() {
        for s in [3u32, 5, 7, 9] {
            let v: f64 = zeta_numeric(s, 17).unwrap().parse().unwrap();
            let n = 100000u32;
            let partial: f64 = (1..n).rev().map(|k| (k as f64).powi(-(s as i32))).sum();
            let tail = (n as f64).powi(1 - s as i32) / (s as f64 - 1.0);
            assert!(partial <= v + 1e-13 && v <= partial + tail + 1e-13, "zeta({s}) {v} {partial} {tail}");
        }
    }

    #[test]
    fn expressions() {
        let e = ZetaExpr::monomial(vec![3, 3], rat(2, 3));
        let v = e.decimal(10).to_f64().unwrap();
        let z3 = 1.202_056_903_159_594_3_f64;
        assert!((v - 2.0 / 3.0 * z3 * z3).abs() < 1e-9);
        assert_eq!(ZetaExpr::zeta(1).decimal(5), DecimalValue::Divergent);
        let m = PiMonomial::new(rat(540, 1), -6);
        assert_eq!(m.decimal(6), "0.561687");
    }
}

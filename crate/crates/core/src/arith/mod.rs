//! Exact arithmetic: big rationals, Bernoulli numbers, even zeta values,
//! formal zeta products and certified decimal evaluation.

mod bernoulli;
mod numeric;
mod pi;
mod zeta;

pub use bernoulli::bernoulli;
pub use numeric::{format_rational, pi_decimal, zeta_numeric, DecimalValue};
pub use pi::{zeta_even, PiMonomial};
pub use zeta::{ZetaExpr, ZetaQuotient};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use std::sync::OnceLock;

/// Exact rational with arbitrary precision numerator and denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

/// `n!`, memoized.
pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    {
        let t = factorial_table().read();
        if let Some(v) = t.get(n) {
            return v.clone();
        }
    }
    let mut t = factorial_table().write();
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

/// `n!` as a rational, with the convention that negative arguments are rejected.
pub fn factorial_q(n: i64) -> Rational {
    assert!(n >= 0, "factorial of negative integer {n}");
    rat_int(factorial(n as u32))
}

/// `n!! = n (n-2) (n-4) ...`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    assert!(n >= -1, "double factorial of {n}");
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        rat_int(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn pow_rat(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Rough `f64` view of an exact rational, robust against huge numerators and denominators.
pub fn to_f64(q: &Rational) -> f64 {
    let (lm, le) = ln_parts(q.numer());
    let (dm, de) = ln_parts(q.denom());
    let sign = if q.numer() < &BigInt::zero() { -1.0 } else { 1.0 };
    if q.is_zero() {
        return 0.0;
    }
    sign * (lm / dm) * 2f64.powi((le - de) as i32)
}

/// Natural logarithm of `|q|`.
pub fn ln_abs(q: &Rational) -> f64 {
    let (lm, le) = ln_parts(q.numer());
    let (dm, de) = ln_parts(q.denom());
    (lm / dm).abs().ln() + ((le - de) as f64) * std::f64::consts::LN_2
}

fn ln_parts(n: &BigInt) -> (f64, i64) {
    let bits = n.bits() as i64;
    if bits <= 60 {
        let v: f64 = n.to_string().parse().unwrap();
        return (v, 0);
    }
    let shift = bits - 60;
    let top = n >> (shift as usize);
    let v: f64 = top.to_string().parse().unwrap();
    (v, shift)
}

use super::{bernoulli, factorial, pow2, rat_int, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// `coeff * pi^pi_exp`. Zero is always stored with `pi_exp = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiMonomial {
    coeff: Rational,
    pi_exp: i32,
}

impl PiMonomial {
    pub fn new(coeff: Rational, pi_exp: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            PiMonomial { coeff, pi_exp }
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn zero() -> Self {
        PiMonomial { coeff: Rational::zero(), pi_exp: 0 }
    }

    pub fn one() -> Self {
        PiMonomial { coeff: Rational::one(), pi_exp: 0 }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_exp(&self) -> i32 {
        self.pi_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum of two monomials. Fails unless the exponents agree or one side is zero.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exp != other.pi_exp {
            return Err(Error::PiExponentMismatch { left: self.pi_exp, right: other.pi_exp });
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.pi_exp))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.coeff * q, self.pi_exp)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(self.coeff.recip(), -self.pi_exp))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Numerical value. Good to about 15 digits; use the decimal module for more.
    pub fn to_f64(&self) -> f64 {
        super::to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_exp)
    }
}

impl Mul for &PiMonomial {
    type Output = PiMonomial;
    fn mul(self, rhs: &PiMonomial) -> PiMonomial {
        PiMonomial::new(&self.coeff * &rhs.coeff, self.pi_exp + rhs.pi_exp)
    }
}

impl Mul for PiMonomial {
    type Output = PiMonomial;
    fn mul(self, rhs: PiMonomial) -> PiMonomial {
        &self * &rhs
    }
}

impl Div for &PiMonomial {
    type Output = PiMonomial;
    /// Panics on division by zero; see [`PiMonomial::checked_div`].
    fn div(self, rhs: &PiMonomial) -> PiMonomial {
        self.checked_div(rhs).expect("division by zero monomial")
    }
}

impl Neg for PiMonomial {
    type Output = PiMonomial;
    fn neg(self) -> PiMonomial {
        PiMonomial::new(-self.coeff, self.pi_exp)
    }
}

impl fmt::Display for PiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.pi_exp == 0 {
            return write!(f, "{}", self.coeff);
        }
        let num = self.coeff.numer();
        let den = self.coeff.denom();
        let sign = if num.is_negative() { "-" } else { "" };
        let num = num.abs();
        let pi = if self.pi_exp == 1 { "pi".to_string() } else { format!("pi^{}", self.pi_exp) };
        let head = if num.is_one() { pi } else { format!("{num}*{pi}") };
        if den.is_one() {
            write!(f, "{sign}{head}")
        } else {
            write!(f, "{sign}{head}/{den}")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PiMonomialRepr {
    num: String,
    den: String,
    pi_exp: i32,
}

impl Serialize for PiMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PiMonomialRepr {
            num: self.coeff.numer().to_string(),
            den: self.coeff.denom().to_string(),
            pi_exp: self.pi_exp,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PiMonomialRepr::deserialize(d)?;
        let num: BigInt = r.num.parse().map_err(serde::de::Error::custom)?;
        let den: BigInt = r.den.parse().map_err(serde::de::Error::custom)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(PiMonomial::new(Rational::new(num, den), r.pi_exp))
    }
}

/// `zeta(s)` for even `s >= 2` as `q * pi^s`.
pub fn zeta_even(s: u32) -> Result<PiMonomial> {
    if s == 1 {
        return Err(Error::Divergent);
    }
    if s == 0 || s % 2 == 1 {
        return Err(Error::OddZeta(s));
    }
    let m = (s / 2) as i64;
    let sign = if m % 2 == 1 { Rational::one() } else { -Rational::one() };
    let q = sign * bernoulli(s) * pow2(s as i64) / (rat_int(2) * rat_int(factorial(s)));
    Ok(PiMonomial::new(q, s as i32))
}

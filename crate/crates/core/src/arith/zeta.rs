use super::{zeta_even, PiMonomial, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

/// Finite rational combination of products `zeta(s_1) ... zeta(s_k)`.
/// Keys are sorted argument multisets; the empty key is the constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZetaExpr {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(q: Rational) -> Self {
        Self::monomial(Vec::new(), q)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `q * prod zeta(args)`.
    pub fn monomial(mut args: Vec<u32>, q: Rational) -> Self {
        let mut e = Self::zero();
        if !q.is_zero() {
            args.sort_unstable();
            e.terms.insert(args, q);
        }
        e
    }

    pub fn zeta(s: u32) -> Self {
        Self::monomial(vec![s], Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `q * prod zeta(args)` in place; `args` must already be sorted.
    pub fn add_term(&mut self, args: Vec<u32>, q: Rational) {
        debug_assert!(args.windows(2).all(|w| w[0] <= w[1]));
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(args).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ZetaExpr { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * q)).collect() }
    }

    /// True when some term contains `zeta(1)`.
    pub fn is_divergent(&self) -> bool {
        self.terms.keys().any(|k| k.contains(&1))
    }

    pub fn all_even(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|s| s % 2 == 0))
    }

    /// Collapses an expression with only even arguments and a single total weight
    /// into `q * pi^w`.
    pub fn to_pi_monomial(&self) -> Result<PiMonomial> {
        let mut acc = PiMonomial::zero();
        for (args, q) in &self.terms {
            let mut t = PiMonomial::rational(q.clone());
            for &s in args {
                if s == 1 {
                    return Err(Error::Divergent);
                }
                t = &t * &zeta_even(s)?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    pub fn checked_div(&self, den: &ZetaExpr) -> Result<ZetaQuotient> {
        ZetaQuotient::new(self.clone(), den)
    }
}

impl Add for &ZetaExpr {
    type Output = ZetaExpr;
    fn add(self, rhs: &ZetaExpr) -> ZetaExpr {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Mul for &ZetaExpr {
    type Output = ZetaExpr;
    fn mul(self, rhs: &ZetaExpr) -> ZetaExpr {
        let mut out = ZetaExpr::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                k.sort_unstable();
                out.add_term(k, va * vb);
            }
        }
        out
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[u32]) -> fmt::Result {
    let mut i = 0;
    let mut first = true;
    while i < args.len() {
        let mut j = i;
        while j < args.len() && args[j] == args[i] {
            j += 1;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "zeta({})", args[i])?;
        if j - i > 1 {
            write!(f, "^{}", j - i)?;
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (args, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let q = q.abs();
            if args.is_empty() {
                write!(f, "{q}")?;
            } else {
                if !q.is_one() {
                    write!(f, "{q}*")?;
                }
                fmt_args(f, args)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    zeta: Vec<u32>,
    num: String,
    den: String,
}

impl Serialize for ZetaExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(k, q)| TermRepr {
                zeta: k.clone(),
                num: q.numer().to_string(),
                den: q.denom().to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZetaExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let mut e = ZetaExpr::zero();
        for t in v {
            let num: BigInt = t.num.parse().map_err(serde::de::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(serde::de::Error::custom)?;
            if den.is_zero() {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            let mut k = t.zeta;
            k.sort_unstable();
            e.add_term(k, Rational::new(num, den));
        }
        Ok(e)
    }
}

/// `num / prod zeta(den)`: a zeta expression over a single zeta product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaQuotient {
    pub num: ZetaExpr,
    pub den: Vec<u32>,
}

impl ZetaQuotient {
    /// Divides `num` by `den`. A multi-term divisor is accepted only when every
    /// argument is even, in which case it collapses to a rational multiple of
    /// `zeta(w)` for its total weight `w`.
    pub fn new(num: ZetaExpr, den: &ZetaExpr) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (args, q) = if den.len() == 1 {
            let (k, q) = den.terms().next().unwrap();
            (k.clone(), q.clone())
        } else if den.all_even() {
            let m = den.to_pi_monomial()?;
            let w = m.pi_exp() as u32;
            if w == 0 {
                (Vec::new(), m.coeff().clone())
            } else {
                let z = zeta_even(w)?;
                (vec![w], m.coeff() / z.coeff())
            }
        } else {
            return Err(Error::NonMonomialDivisor);
        };
        Ok(ZetaQuotient { num: num.scale(&q.recip()), den: args })
    }

    pub fn is_divergent(&self) -> bool {
        self.num.is_divergent() || self.den.contains(&1)
    }

    /// Exact `q * pi^k` when every argument is even.
    pub fn to_pi_monomial(&self) -> Result<PiMonomial> {
        if self.is_divergent() {
            return Err(Error::Divergent);
        }
        let d = ZetaExpr::monomial(self.den.clone(), Rational::one()).to_pi_monomial()?;
        self.num.to_pi_monomial()?.checked_div(&d)
    }
}

impl fmt::Display for ZetaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 || self.num.to_string().contains('/') {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/(")?;
        fmt_args(f, &self.den)?;
        write!(f, ")")
    }
}

//! Polynomials with rational coefficients in the edge variables `b_1 .. b_k`.

use crate::arith::Rational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl CylPolynomial {
    pub fn zero(nvars: usize) -> Self {
        CylPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, q: Rational) -> Self {
        Self::monomial(vec![0; nvars], q)
    }

    pub fn monomial(exps: Vec<u32>, q: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, q);
        p
    }

    /// The variable `b_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, q: Rational) {
        assert_eq!(exps.len(), self.nvars);
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars);
        }
        CylPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
        }
    }

    /// Total degree when homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Keeps the terms for which `keep(exponents)` holds.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        CylPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

impl Add for &CylPolynomial {
    type Output = CylPolynomial;
    fn add(self, rhs: &CylPolynomial) -> CylPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Mul for &CylPolynomial {
    type Output = CylPolynomial;
    fn mul(self, rhs: &CylPolynomial) -> CylPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = CylPolynomial::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(k, va * vb);
            }
        }
        out
    }
}

impl fmt::Display for CylPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exps, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let q = q.abs();
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("b{}", j + 1) } else { format!("b{}^{}", j + 1, e) })
                .collect();
            match (vars.is_empty(), q.is_one()) {
                (true, _) => write!(f, "{q}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{q}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRepr<'a> {
    exponents: &'a [u32],
    num: String,
    den: String,
}

impl Serialize for CylPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, q) in &self.terms {
            seq.serialize_element(&TermRepr {
                exponents: k,
                num: q.numer().to_string(),
                den: q.denom().to_string(),
            })?;
        }
        seq.end()
    }
}

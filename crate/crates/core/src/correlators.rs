//! Intersection numbers `<tau_d1 ... tau_dn>_g` of psi classes on the
//! moduli space of stable curves.
//!
//! [`CorrelatorTable`] evaluates them through the string and dilaton
//! equations and the Virasoro (DVV) recursion, memoizing every value it
//! meets. One- and two-point numbers also have closed forms, which
//! [`psi_correlator`] uses directly so that large genera stay cheap.

use crate::arith::{binomial, double_factorial, factorial, rat, rat_int, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

const CACHE_HEADER: &str = "# quadvol correlator cache v1";
const CACHE_FOOTER: &str = "# sha256 ";

type Key = (u32, Vec<u32>);

fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn dim_matches(g: u32, d: &[u32]) -> bool {
    let s: i64 = d.iter().map(|&x| x as i64).sum();
    s == 3 * g as i64 - 3 + d.len() as i64
}

fn df(n: i64) -> Rational {
    rat_int(double_factorial(n))
}

/// Memo table of correlators keyed by genus and sorted exponents.
#[derive(Default)]
pub struct CorrelatorTable {
    map: RwLock<HashMap<Key, Rational>>,
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.read().is_empty()
    }

    pub fn clear(&self) {
        self.map.write().clear();
    }

    /// All stored entries, sorted by genus then exponents.
    pub fn entries(&self) -> Vec<(u32, Vec<u32>, Rational)> {
        let mut v: Vec<_> =
            self.map.read().iter().map(|((g, d), q)| (*g, d.clone(), q.clone())).collect();
        v.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        v
    }

    /// Correlator by recursion only (no closed forms). Errors outside the stable range.
    pub fn get(&self, g: u32, d: &[u32]) -> Result<Rational> {
        if !is_stable(g, d.len()) {
            return Err(Error::Unstable { g, n: d.len() as u32 });
        }
        let mut key = d.to_vec();
        key.sort_unstable();
        Ok(self.eval(g, key))
    }

    fn eval(&self, g: u32, d: Vec<u32>) -> Rational {
        let n = d.len();
        if !is_stable(g, n) || !dim_matches(g, &d) {
            return Rational::zero();
        }
        if g == 0 && n == 3 {
            return Rational::one();
        }
        if g == 1 && n == 1 {
            return rat(1, 24);
        }
        let key = (g, d);
        if let Some(v) = self.map.read().get(&key) {
            return v.clone();
        }
        let (g, d) = key;
        let v = self.compute(g, &d);
        self.map.write().insert((g, d), v.clone());
        v
    }

    fn compute(&self, g: u32, d: &[u32]) -> Rational {
        let n = d.len();
        // d is sorted, so a leading 0 or 1 is enough to decide.
        if d[0] == 0 && is_stable(g, n - 1) {
            let rest = &d[1..];
            let mut acc = Rational::zero();
            for (j, &dj) in rest.iter().enumerate() {
                if dj == 0 || (j > 0 && rest[j - 1] == dj) {
                    continue;
                }
                let mult = rest.iter().filter(|&&x| x == dj).count() as i64;
                let mut next = rest.to_vec();
                next[j] -= 1;
                next.sort_unstable();
                acc += self.eval(g, next) * rat(mult, 1);
            }
            return acc;
        }
        if d[0] == 1 && is_stable(g, n - 1) {
            let rest = d[1..].to_vec();
            return self.eval(g, rest) * rat(2 * g as i64 - 3 + n as i64, 1);
        }
        self.dvv(g, d)
    }

    /// One step of the Virasoro recursion on the smallest exponent `k = d[0] >= 2`.
    fn dvv(&self, g: u32, d: &[u32]) -> Rational {
        let k = d[0] as i64;
        let rest = &d[1..];
        let mut acc = Rational::zero();

        for (j, &dj) in rest.iter().enumerate() {
            if j > 0 && rest[j - 1] == dj {
                continue;
            }
            let mult = rest.iter().filter(|&&x| x == dj).count() as i64;
            let dj = dj as i64;
            let mut next: Vec<u32> = rest.to_vec();
            next.remove(j);
            next.push((k + dj - 1) as u32);
            next.sort_unstable();
            let c = df(2 * k + 2 * dj - 1) / df(2 * dj - 1) * rat(mult, 1);
            acc += c * self.eval(g, next);
        }

        let groups = group(rest);
        let mut half = Rational::zero();
        for r in 0..=(k - 2) {
            let s = k - 2 - r;
            let w = df(2 * r + 1) * df(2 * s + 1);
            let mut inner = Rational::zero();
            if g >= 1 {
                let mut next: Vec<u32> = rest.to_vec();
                next.push(r as u32);
                next.push(s as u32);
                next.sort_unstable();
                inner += self.eval(g - 1, next);
            }
            for_each_split(&groups, &mut |left: &[u32], right: &[u32], mult: &BigInt| {
                // <tau_r tau_I>_{g1} needs r + |I|_sum = 3 g1 - 2 + |I|
                let lsum: i64 = left.iter().map(|&x| x as i64).sum::<i64>() + r;
                let t = lsum - left.len() as i64 + 2;
                if t < 0 || t % 3 != 0 {
                    return;
                }
                let g1 = t / 3;
                if g1 > g as i64 {
                    return;
                }
                let g2 = g - g1 as u32;
                let mut a = left.to_vec();
                a.push(r as u32);
                a.sort_unstable();
                let mut b = right.to_vec();
                b.push(s as u32);
                b.sort_unstable();
                let va = self.eval(g1 as u32, a);
                if va.is_zero() {
                    return;
                }
                let vb = self.eval(g2, b);
                inner += va * vb * rat_int(mult.clone());
            });
            half += w * inner;
        }
        acc += half / rat(2, 1);
        acc / df(2 * k + 1)
    }

    /// Writes the table as text lines `g;d1,...,dn;num/den` followed by a checksum.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut body = String::new();
        body.push_str(CACHE_HEADER);
        body.push('\n');
        for (g, d, q) in self.entries() {
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            body.push_str(&format!("{g};{};{}/{}\n", ds.join(","), q.numer(), q.denom()));
        }
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        body.push_str(CACHE_FOOTER);
        body.push_str(&digest);
        body.push('\n');
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, body).map_err(|e| Error::Cache(e.to_string()))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
    }

    /// Reads a table written by [`CorrelatorTable::save`]. Any damage to the
    /// file is reported as an error so that the caller can rebuild.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Cache(e.to_string()))?;
        let footer_at = text
            .rfind(CACHE_FOOTER)
            .ok_or_else(|| Error::Cache("missing checksum".into()))?;
        let (body, footer) = text.split_at(footer_at);
        let expected = footer[CACHE_FOOTER.len()..].trim();
        let actual = hex::encode(Sha256::digest(body.as_bytes()));
        if expected != actual {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let mut lines = body.lines();
        if lines.next() != Some(CACHE_HEADER) {
            return Err(Error::Cache("unknown header".into()));
        }
        let table = CorrelatorTable::new();
        {
            let mut map = table.map.write();
            for line in lines {
                let bad = || Error::Cache(format!("malformed line {line:?}"));
                let mut parts = line.split(';');
                let g: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let ds = parts.next().ok_or_else(bad)?;
                let d: Vec<u32> = if ds.is_empty() {
                    Vec::new()
                } else {
                    ds.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?
                };
                let (num, den) = parts.next().ok_or_else(bad)?.split_once('/').ok_or_else(bad)?;
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() || parts.next().is_some() {
                    return Err(bad());
                }
                map.insert((g, d), Rational::new(num, den));
            }
        }
        Ok(table)
    }

    /// Copies every entry of `other` into `self`.
    pub fn absorb(&self, other: &CorrelatorTable) {
        let src = other.map.read();
        let mut dst = self.map.write();
        for (k, v) in src.iter() {
            dst.insert(k.clone(), v.clone());
        }
    }
}

fn group(d: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &x in d {
        match out.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Calls `f(I, J, count)` for every way to split the labelled multiset
/// described by `groups` into an ordered pair `(I, J)`.
type SplitVisitor<'a> = dyn FnMut(&[u32], &[u32], &BigInt) + 'a;

fn for_each_split(groups: &[(u32, usize)], f: &mut SplitVisitor) {
    fn rec(
        groups: &[(u32, usize)],
        i: usize,
        left: &mut Vec<u32>,
        right: &mut Vec<u32>,
        mult: BigInt,
        f: &mut SplitVisitor,
    ) {
        if i == groups.len() {
            f(left, right, &mult);
            return;
        }
        let (v, m) = groups[i];
        for c in 0..=m {
            let (l0, r0) = (left.len(), right.len());
            left.extend(std::iter::repeat(v).take(c));
            right.extend(std::iter::repeat(v).take(m - c));
            rec(groups, i + 1, left, right, &mult * binomial(m as i64, c as i64), f);
            left.truncate(l0);
            right.truncate(r0);
        }
    }
    rec(groups, 0, &mut Vec::new(), &mut Vec::new(), BigInt::one(), f);
}

/// Process-wide table used by [`psi_correlator`].
pub fn global_table() -> &'static CorrelatorTable {
    static TABLE: OnceLock<CorrelatorTable> = OnceLock::new();
    TABLE.get_or_init(CorrelatorTable::new)
}

/// `<tau_{3g-2}>_g = 1 / (24^g g!)`.
pub fn one_point(g: u32) -> Rational {
    assert!(g >= 1);
    Rational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(24), g as usize) * factorial(g),
    )
}

fn two_point_rows() -> &'static RwLock<HashMap<u32, Arc<Vec<Rational>>>> {
    static ROWS: OnceLock<RwLock<HashMap<u32, Arc<Vec<Rational>>>>> = OnceLock::new();
    ROWS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `[<tau_a tau_{3g-1-a}>_g for a in 0..3g]`, read off the closed two-point
/// generating function
/// `exp((x^3 + y^3)/24) / (x + y) * sum_n n!/(2n+1)! (xy(x+y)/2)^n`.
pub fn two_point_row(g: u32) -> Arc<Vec<Rational>> {
    assert!(g >= 1);
    if let Some(r) = two_point_rows().read().get(&g) {
        return r.clone();
    }
    let deg = 3 * g as usize;
    // coefficients of x^a y^(deg - a)
    let mut p = vec![Rational::zero(); deg + 1];
    for i in 0..=g {
        let nn = g - i;
        let c = Rational::new(
            factorial(nn),
            factorial(2 * nn + 1)
                * num_traits::pow(BigInt::from(24), i as usize)
                * factorial(i)
                * (BigInt::one() << nn as usize),
        );
        // (x^3 + y^3)^i (xy)^n (x + y)^n
        for j in 0..=i {
            let cj = rat_int(binomial(i as i64, j as i64));
            for l in 0..=nn {
                let cl = rat_int(binomial(nn as i64, l as i64));
                let a = 3 * j as usize + nn as usize + l as usize;
                p[a] += &c * &cj * cl;
            }
        }
    }
    let mut q = vec![Rational::zero(); deg];
    q[0] = p[0].clone();
    for a in 1..deg {
        q[a] = &p[a] - &q[a - 1];
    }
    debug_assert_eq!(q[deg - 1], p[deg]);
    let row = Arc::new(q);
    two_point_rows().write().insert(g, row.clone());
    row
}

/// `<tau_d1 ... tau_dn>_g`. Zero when the degrees do not add up to `3g - 3 + n`.
pub fn psi_correlator(g: u32, d: &[u32]) -> Result<Rational> {
    if !is_stable(g, d.len()) {
        return Err(Error::Unstable { g, n: d.len() as u32 });
    }
    if !dim_matches(g, d) {
        return Ok(Rational::zero());
    }
    match d.len() {
        1 => Ok(one_point(g)),
        2 if g >= 1 => Ok(two_point_row(g)[d[0] as usize].clone()),
        _ => global_table().get(g, d),
    }
}

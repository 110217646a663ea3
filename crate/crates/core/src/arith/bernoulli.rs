use super::{binomial, rat, rat_int, Rational};
use num_traits::Zero;
use parking_lot::RwLock;
use std::sync::OnceLock;

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![rat(1, 1), rat(-1, 2)]))
}

/// Bernoulli number `B_m` with `B_1 = -1/2`, from the convolution
/// recursion `sum_{k<=m} C(m+1, k) B_k = 0`.
pub fn bernoulli(m: u32) -> Rational {
    let m = m as usize;
    if m > 1 && m % 2 == 1 {
        return Rational::zero();
    }
    if let Some(b) = table().read().get(m) {
        return b.clone();
    }
    let mut t = table().write();
    while t.len() <= m {
        let n = t.len();
        let b = if n % 2 == 1 {
            Rational::zero()
        } else {
            let mut s = Rational::zero();
            for (k, bk) in t.iter().enumerate() {
                if !bk.is_zero() {
                    s += bk * rat_int(binomial(n as i64 + 1, k as i64));
                }
            }
            -s / rat(n as i64 + 1, 1)
        };
        t.push(b);
    }
    t[m].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Akiyama-Tanigawa, which yields B_1 = +1/2 and otherwise agrees.
    fn akiyama_tanigawa(m: usize) -> Rational {
        let mut a: Vec<Rational> = (0..=m).map(|j| rat(1, j as i64 + 1)).collect();
        for i in 1..=m {
            for j in 0..=(m - i) {
                a[j] = rat(j as i64 + 1, 1) * (&a[j] - &a[j + 1]);
            }
        }
        a[0].clone()
    }

    #[test]
    fn known_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), rat(0, 1));
    }

    #[test]
    fn agrees_with_akiyama_tanigawa() {
        for m in 2..=60 {
            assert_eq!(bernoulli(m as u32), akiyama_tanigawa(m), "B_{m}");
        }
    }
}

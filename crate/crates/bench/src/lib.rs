//! Workloads shared by the benchmarks.

use quadvol_core::{CorrelatorTable, Rational};

/// All two-point numbers `<tau_k tau_{3g-1-k}>_g` from an empty table, so
/// that nothing is served from the process-wide memo.
pub fn dvv_two_point(g: u32) -> Vec<Rational> {
    let t = CorrelatorTable::new();
    (0..3 * g).map(|k| t.get(g, &[k, 3 * g - 1 - k]).expect("stable")).collect()
}

/// Every correlator of genus `g` with `n` points, again from an empty table.
pub fn dvv_all(g: u32, n: u32) -> usize {
    let t = CorrelatorTable::new();
    let total = 3 * g + n - 3;
    let mut d = vec![0u32; n as usize];
    let mut count = 0;
    fn rec(t: &CorrelatorTable, g: u32, d: &mut Vec<u32>, i: usize, left: u32, count: &mut usize) {
        if i + 1 == d.len() {
            d[i] = left;
            t.get(g, d).expect("stable");
            *count += 1;
            return;
        }
        for x in 0..=left {
            d[i] = x;
            rec(t, g, d, i + 1, left - x, count);
        }
    }
    rec(&t, g, &mut d, 0, total, &mut count);
    count
}

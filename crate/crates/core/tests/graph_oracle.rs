//! Brute-force check of the stable graph enumeration. Every connected stable
//! graph with labeled vertices and labeled half-edges is generated directly;
//! dividing that count by `V! (2E)!` must give the sum of `1/|Aut|` over
//! isomorphism classes with `V` vertices and `E` edges.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quadvol_core::graphs::enumerate_stable_graphs;
use std::collections::{BTreeMap, HashSet};

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let a = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &x)| x).collect();
        for mut m in matchings(&rest) {
            m.push((a, items[i]));
            out.push(m);
        }
    }
    out
}

fn tuples(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..base).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

fn genus_vectors(v: usize, total: u32) -> Vec<Vec<u32>> {
    tuples(v, total as usize + 1)
        .into_iter()
        .map(|t| t.into_iter().map(|x| x as u32).collect::<Vec<_>>())
        .filter(|t| t.iter().sum::<u32>() == total)
        .collect()
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Labeled-structure mass per `(V, E)`.
fn brute_mass(g: u32, n: usize) -> BTreeMap<(usize, usize), BigRational> {
    let mut out = BTreeMap::new();
    let emax = (3 * g as usize + n).saturating_sub(3);
    let vmax = (2 * g as usize + n).saturating_sub(2);
    for v in 1..=vmax {
        for e in 0..=emax {
            if e + 1 < v || (e + 1 - v) as u32 > g {
                continue;
            }
            let gen = genus_vectors(v, g - (e + 1 - v) as u32);
            let half: Vec<usize> = (0..2 * e).collect();
            let ms = matchings(&half);
            let homes = tuples(2 * e, v);
            let legs = tuples(n, v);
            let mut count = BigInt::zero();
            for m in &ms {
                for home in &homes {
                    let edges: Vec<(usize, usize)> = m.iter().map(|&(a, b)| (home[a], home[b])).collect();
                    if !connected(v, &edges) {
                        continue;
                    }
                    let mut val = vec![0usize; v];
                    for &x in home {
                        val[x] += 1;
                    }
                    for l in &legs {
                        let mut val = val.clone();
                        for &x in l {
                            val[x] += 1;
                        }
                        for gv in &gen {
                            if (0..v).all(|i| 2 * gv[i] as i64 - 2 + val[i] as i64 > 0) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            if !count.is_zero() {
                out.insert((v, e), BigRational::new(count, fact(v) * fact(2 * e)));
            }
        }
    }
    out
}

fn enumerated_mass(g: u32, n: u32) -> BTreeMap<(usize, usize), BigRational> {
    let graphs = enumerate_stable_graphs(g, n).unwrap();
    let codes: HashSet<String> = graphs.iter().map(|gr| gr.canonical_encoding()).collect();
    assert_eq!(codes.len(), graphs.len(), "duplicate graphs for ({g},{n})");
    let mut out: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for gr in graphs {
        *out.entry((gr.num_vertices(), gr.num_edges())).or_insert_with(BigRational::zero) +=
            BigRational::new(BigInt::one(), gr.aut_order());
    }
    out
}

#[test]
fn mass_formula_matches_brute_force() {
    for (g, n) in [(0u32, 3u32), (0, 4), (0, 5), (1, 1), (1, 2), (2, 0), (1, 3), (2, 1)] {
        assert_eq!(enumerated_mass(g, n), brute_mass(g, n as usize), "({g},{n})");
    }
}
